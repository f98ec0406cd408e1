//! Dirichlet-Neumann time stepping for the 1D coupled problem, the
//! monolithic reference step and convergence-rate estimation from
//! iteration traces.

use crate::discretization_1d::{build_fem_blocks, build_fvm_blocks, CoupledSystem, GridSpec1D, SubdomainBlocks};
use crate::error::{Error, Result};
use crate::linalg::norm2;
use crate::materials::Material;
use crate::partitioned::{self, PartitionedState};

/// Starting value of the interface iteration inside a time step.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum InterfaceInit {
    /// Interface values of the previous time level.
    #[default]
    PreviousStep,
    Zero,
    Given(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DNConfig {
    /// Stop once the interface update norm is at most `tol`.
    pub tol: f64,
    pub max_iters: usize,
    pub dt: f64,
    pub initial_interface: InterfaceInit,
}

impl Default for DNConfig {
    fn default() -> Self {
        Self { tol: 1e-10, max_iters: 100, dt: 1.0, initial_interface: InterfaceInit::PreviousStep }
    }
}

impl DNConfig {
    pub fn with_dt(dt: f64) -> Self {
        Self { dt, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Domain(format!("time step must be positive, got {}", self.dt)));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::Domain(format!("tolerance must be positive, got {}", self.tol)));
        }
        if self.max_iters < 2 {
            return Err(Error::Domain(format!("max_iters must be at least 2, got {}", self.max_iters)));
        }
        Ok(())
    }
}

/// History of one Dirichlet-Neumann solve.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IterationTrace {
    /// Interface values, starting with the initial guess.
    pub interface_values: Vec<Vec<f64>>,
    /// `||u_Gamma^{k+1} - u_Gamma^k||_2` for each iteration.
    pub update_norms: Vec<f64>,
    pub converged: bool,
    pub iters: usize,
}

impl IterationTrace {
    pub fn diverged(&self) -> bool {
        !self.converged && self.update_norms.last().is_some_and(|v| !v.is_finite() || *v > self.update_norms[0])
    }
}

/// Discrete temperatures of the 1D problem.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub u1: Vec<f64>,
    pub u2: Vec<f64>,
    pub u_gamma: f64,
}

impl StateVector {
    pub fn zeros(grid: &GridSpec1D) -> Self {
        Self { u1: vec![0.0; grid.n1], u2: vec![0.0; grid.n2], u_gamma: 0.0 }
    }

    /// Samples `f` at the cell centres and nodes; `x` runs over `[-L1, L2]`
    /// with the interface at zero.
    pub fn from_fn(grid: &GridSpec1D, f: impl Fn(f64) -> f64) -> Self {
        Self {
            u1: (1..=grid.n1).map(|i| f(-((grid.n1 + 1 - i) as f64) * grid.dx1)).collect(),
            u2: (1..=grid.n2).map(|i| f(i as f64 * grid.dx2)).collect(),
            u_gamma: f(0.0),
        }
    }

    /// Piecewise linear hat: zero at the outer boundaries, one at the interface.
    pub fn interface_hat(grid: &GridSpec1D) -> Self {
        let l1 = (grid.n1 + 1) as f64 * grid.dx1;
        let l2 = (grid.n2 + 1) as f64 * grid.dx2;
        Self::from_fn(grid, |x| if x <= 0.0 { 1.0 + x / l1 } else { 1.0 - x / l2 })
    }

    /// Concatenation in the `(u_I^(1), u_I^(2), u_Gamma)` order.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.u1.len() + self.u2.len() + 1);
        v.extend_from_slice(&self.u1);
        v.extend_from_slice(&self.u2);
        v.push(self.u_gamma);
        v
    }

    pub fn from_vec(v: &[f64], n1: usize, n2: usize) -> Result<Self> {
        if v.len() != n1 + n2 + 1 {
            return Err(Error::Dimension(format!("vector of length {} for n1={n1}, n2={n2}", v.len())));
        }
        Ok(Self { u1: v[..n1].to_vec(), u2: v[n1..n1 + n2].to_vec(), u_gamma: v[n1 + n2] })
    }

    pub fn norm(&self) -> f64 {
        norm2(&self.to_vec())
    }

    fn to_partitioned(&self) -> PartitionedState {
        PartitionedState { u1: self.u1.clone(), u2: self.u2.clone(), ug: vec![self.u_gamma] }
    }

    fn from_partitioned(s: PartitionedState) -> Self {
        Self { u1: s.u1, u2: s.u2, u_gamma: s.ug[0] }
    }
}

/// One time step of the coupled problem by Dirichlet-Neumann iteration:
/// the first subdomain solves with Dirichlet data `u_Gamma^k`, the second
/// receives its flux and returns `u_Gamma^{k+1}`.
pub fn dn_time_step(
    blocks1: &SubdomainBlocks,
    blocks2: &SubdomainBlocks,
    cfg: &DNConfig,
    prev: &StateVector,
) -> Result<(StateVector, IterationTrace)> {
    cfg.validate()?;
    let d = blocks1.step_operators(cfg.dt);
    let n = blocks2.step_operators(cfg.dt);
    let (s, trace) = partitioned::dirichlet_neumann(&d, &n, &prev.to_partitioned(), cfg)?;
    Ok((StateVector::from_partitioned(s), trace))
}

/// One implicit-Euler step `a_step u^{n+1} = m_tilde u^n` by banded LU.
pub fn monolithic_step(system: &CoupledSystem, prev: &StateVector) -> Result<StateVector> {
    let l = system.layout;
    if l.n_gamma != 1 {
        return Err(Error::Dimension("1D system must have a scalar interface".into()));
    }
    let x = prev.to_vec();
    if x.len() != l.dim() {
        return Err(Error::Dimension(format!("state of length {} for a system of size {}", x.len(), l.dim())));
    }
    let rhs = system.m_tilde.mul_vec(&x);
    let sol = partitioned::solve_global(&system.a_step, &rhs, l.n1, l.n2, 1)?;
    StateVector::from_vec(&sol, l.n1, l.n2)
}

/// Relative level below which differences are treated as roundoff when
/// estimating rates.
pub const RATE_FLOOR: f64 = 1e-6;

/// Geometric mean of the last (at most two) consecutive ratios above
/// `RATE_FLOOR * scale`; failing that, the first ratio above roundoff.
fn rate_from_sequence(e: &[f64], scale: f64) -> Result<f64> {
    let pick = |floor: f64| -> Vec<f64> {
        e.windows(2)
            .filter(|w| w[0].is_finite() && w[1].is_finite() && w[0] >= floor && w[1] >= floor && w[0] > 0.0)
            .map(|w| w[1] / w[0])
            .collect()
    };
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::Estimation("iteration trace carries no signal".into()));
    }
    let ratios = pick(RATE_FLOOR * scale);
    if !ratios.is_empty() {
        let tail = &ratios[ratios.len().saturating_sub(2)..];
        return Ok((tail.iter().map(|r| r.ln()).sum::<f64>() / tail.len() as f64).exp());
    }
    // Very fast contraction: later updates sit at roundoff level, so the
    // earliest ratio above the hard floor is the most accurate one.
    pick(100.0 * f64::EPSILON * scale)
        .first()
        .copied()
        .ok_or_else(|| Error::Estimation("no ratio of consecutive updates above roundoff".into()))
}

/// Convergence rate estimated from the interface update norms.
pub fn observed_rate(trace: &IterationTrace) -> Result<f64> {
    if trace.update_norms.len() < 2 {
        return Err(Error::Estimation(format!("need at least two iterations, trace has {}", trace.update_norms.len())));
    }
    let umax = trace
        .interface_values
        .iter()
        .flatten()
        .filter(|v| v.is_finite())
        .fold(0.0_f64, |m, v| m.max(v.abs()));
    let scale = trace.update_norms[0].max(umax);
    rate_from_sequence(&trace.update_norms, scale)
}

/// Convergence rate from the errors `||u_Gamma^k - reference||`.
pub fn reference_rate(trace: &IterationTrace, reference: &[f64]) -> Result<f64> {
    let errs: Vec<f64> = trace
        .interface_values
        .iter()
        .map(|u| {
            if u.len() != reference.len() {
                return Err(Error::Dimension("reference has the wrong length".into()));
            }
            Ok(norm2(&u.iter().zip(reference).map(|(a, b)| a - b).collect::<Vec<_>>()))
        })
        .collect::<Result<_>>()?;
    if errs.len() < 3 {
        return Err(Error::Estimation("need at least two iterations".into()));
    }
    rate_from_sequence(&errs, errs[0].max(norm2(reference)))
}

/// Observed rate of the first time step from the interface hat profile,
/// starting the iteration at `u_Gamma = 0`.
pub fn measure_rate_1d(
    grid: &GridSpec1D,
    mat1: &Material,
    mat2: &Material,
    dt: f64,
    tol: f64,
    max_iters: usize,
) -> Result<(f64, IterationTrace)> {
    let b1 = build_fvm_blocks(grid, mat1)?;
    let b2 = build_fem_blocks(grid, mat2)?;
    let cfg = DNConfig { tol, max_iters, dt, initial_interface: InterfaceInit::Zero };
    let (_, trace) = dn_time_step(&b1, &b2, &cfg, &StateVector::interface_hat(grid))?;
    Ok((observed_rate(&trace)?, trace))
}
