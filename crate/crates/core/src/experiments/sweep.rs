//! Parameter sweeps producing CSV tables.

use rayon::prelude::*;

use super::spec::{Mode, SweepSpec};
use super::format_number;
use crate::discretization_1d::{count_from_width, GridSpec1D};
use crate::dn_solver::measure_rate_1d;
use crate::error::{Error, Result};
use crate::model_2d::{measure_rate_2d, GridSpec2D};
use crate::rate_theory::{semidiscrete_beta, sigma_exact, sigma_schur, spatial_limit, RateInputs};

/// Largest banded-factorization work estimate accepted for 2D points.
pub const MAX_2D_COST: f64 = 1e11;

/// Status of an observed-rate cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointStatus {
    Converged,
    NotConverged,
    Failed,
}

impl PointStatus {
    pub fn code(self) -> i32 {
        match self {
            PointStatus::Converged => 1,
            PointStatus::NotConverged => 0,
            PointStatus::Failed => -1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub x: f64,
    /// One value per requested mode, `NaN` where the point failed.
    pub values: Vec<f64>,
    /// One entry per requested observed mode.
    pub status: Vec<PointStatus>,
    pub errors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub spec: SweepSpec,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn header(&self) -> Vec<String> {
        let mut h = vec![self.spec.var.name().to_string()];
        h.extend(self.spec.modes.iter().map(|m| m.name().to_string()));
        h.extend(self.spec.modes.iter().filter(|m| m.is_observed()).map(|m| format!("{}_status", m.name())));
        h
    }

    pub fn has_errors(&self) -> bool {
        self.rows.iter().any(|r| !r.errors.is_empty())
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("# dncoupling sweep\n");
        for line in self.spec.describe() {
            s.push_str(&format!("# {line}\n"));
        }
        s.push_str(&self.header().join(","));
        s.push('\n');
        for row in &self.rows {
            let mut cells = vec![format_number(row.x)];
            cells.extend(row.values.iter().map(|v| format_number(*v)));
            cells.extend(row.status.iter().map(|st| st.code().to_string()));
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        for (i, row) in self.rows.iter().enumerate() {
            for e in &row.errors {
                s.push_str(&format!("# error in row {} ({} = {}): {e}\n", i + 1, self.spec.var.name(), format_number(row.x)));
            }
        }
        s
    }
}

/// 1D grid of one sweep point.
pub fn grid_1d(spec: &SweepSpec, dx1: f64) -> Result<GridSpec1D> {
    match spec.n2 {
        Some(n2) => GridSpec1D::with_spacing(count_from_width(dx1, "dx1")?, dx1, n2, spec.r * dx1),
        None => GridSpec1D::from_dx1_r(dx1, spec.r),
    }
}

/// 2D grid of one sweep point.
pub fn grid_2d(spec: &SweepSpec, dx1: f64) -> Result<GridSpec2D> {
    match spec.n2 {
        Some(n2) => GridSpec2D::with_spacing(count_from_width(dx1, "dx1")?, dx1, n2, spec.r * dx1, spec.ny.unwrap_or(n2)),
        None => {
            let g = GridSpec2D::new(dx1, spec.r)?;
            GridSpec2D::with_ny(g.nx1, g.nx2, spec.ny.unwrap_or(g.ny))
        }
    }
}

fn evaluate(spec: &SweepSpec, mode: Mode, dt: f64, dx1: f64) -> Result<(f64, Option<PointStatus>)> {
    let inputs = || -> Result<RateInputs> { RateInputs::new(dt, grid_1d(spec, dx1)?, spec.mat1, spec.mat2) };
    let status = |converged: bool| Some(if converged { PointStatus::Converged } else { PointStatus::NotConverged });
    match mode {
        Mode::Formula => Ok((sigma_exact(&inputs()?)?, None)),
        Mode::SchurOracle => Ok((sigma_schur(&inputs()?)?, None)),
        Mode::Beta => Ok((semidiscrete_beta(dt, &spec.mat1, &spec.mat2)?, None)),
        Mode::DeltaR => Ok((spatial_limit(spec.r, spec.mat1.lambda, spec.mat2.lambda), None)),
        Mode::Observed1d => {
            let (rate, trace) = measure_rate_1d(&grid_1d(spec, dx1)?, &spec.mat1, &spec.mat2, dt, spec.tol, spec.max_iters)?;
            Ok((rate, status(trace.converged)))
        }
        Mode::Observed2d => {
            let g = grid_2d(spec, dx1)?;
            if g.solve_cost() > MAX_2D_COST {
                return Err(Error::Size(format!(
                    "2D grid {}x{}+{}x{} is too large for a direct solve (reduce ny or use a coarser dx1)",
                    g.nx1, g.ny, g.nx2, g.ny
                )));
            }
            let (rate, trace) = measure_rate_2d(&g, &spec.mat1, &spec.mat2, dt, spec.tol, spec.max_iters)?;
            Ok((rate, status(trace.converged)))
        }
    }
}

fn run_point(spec: &SweepSpec, x: f64) -> SweepRow {
    let (dt, dx1) = spec.point(x);
    let mut row = SweepRow { x, values: Vec::new(), status: Vec::new(), errors: Vec::new() };
    for &mode in &spec.modes {
        match evaluate(spec, mode, dt, dx1) {
            Ok((v, st)) => {
                row.values.push(v);
                if let Some(st) = st {
                    row.status.push(st);
                }
            }
            Err(e) => {
                row.values.push(f64::NAN);
                if mode.is_observed() {
                    row.status.push(PointStatus::Failed);
                }
                row.errors.push(format!("{}: {e}", mode.name()));
            }
        }
    }
    row
}

/// Evaluates every point of the sweep, in parallel; rows keep the order of
/// the swept values.
pub fn run_sweep(spec: &SweepSpec) -> SweepTable {
    let rows = spec.values.expand().par_iter().map(|&x| run_point(spec, x)).collect();
    SweepTable { spec: spec.clone(), rows }
}
