//! Dimension-independent Dirichlet-Neumann iteration and monolithic solve.
//!
//! Both drivers work on the one-step operators `S = M + dt A` of the two
//! subdomains with the sign convention already applied, so the 1D and 2D
//! models share this code.

use crate::dn_solver::{DNConfig, InterfaceInit, IterationTrace};
use crate::error::{Error, Result};
use crate::linalg::{norm2, BandLu, BandMatrix, SparseMatrix};

/// Mass (`m_*`) and step (`s_*`) operators of one subdomain, split into
/// interior (`i`) and interface (`g`) parts.
#[derive(Debug, Clone)]
pub(crate) struct SubdomainOperators {
    pub m_ii: SparseMatrix,
    pub s_ii: SparseMatrix,
    pub m_ig: SparseMatrix,
    pub s_ig: SparseMatrix,
    pub m_gi: SparseMatrix,
    pub s_gi: SparseMatrix,
    pub m_gg: SparseMatrix,
    pub s_gg: SparseMatrix,
}

impl SubdomainOperators {
    pub fn n_interior(&self) -> usize {
        self.s_ii.rows()
    }

    pub fn n_gamma(&self) -> usize {
        self.s_gg.rows()
    }

    fn check(&self) -> Result<()> {
        let (n, g) = (self.n_interior(), self.n_gamma());
        let shapes = [
            (&self.m_ii, n, n),
            (&self.s_ii, n, n),
            (&self.m_ig, n, g),
            (&self.s_ig, n, g),
            (&self.m_gi, g, n),
            (&self.s_gi, g, n),
            (&self.m_gg, g, g),
            (&self.s_gg, g, g),
        ];
        if shapes.iter().all(|(m, r, c)| m.rows() == *r && m.cols() == *c) {
            Ok(())
        } else {
            Err(Error::Dimension("subdomain operator blocks have inconsistent shapes".into()))
        }
    }
}

/// Interior and interface values of both subdomains at one time level.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct PartitionedState {
    pub u1: Vec<f64>,
    pub u2: Vec<f64>,
    pub ug: Vec<f64>,
}

/// Places `blocks` (row offset, col offset, matrix) into one sparse matrix.
fn place(rows: usize, cols: usize, blocks: &[(usize, usize, &SparseMatrix)]) -> SparseMatrix {
    let mut t = Vec::new();
    for &(r0, c0, m) in blocks {
        t.extend(m.triplets().map(|(i, j, v)| (r0 + i, c0 + j, v)));
    }
    SparseMatrix::from_triplets(rows, cols, t)
}

fn check_pair(d: &SubdomainOperators, n: &SubdomainOperators) -> Result<()> {
    d.check()?;
    n.check()?;
    if d.n_gamma() != n.n_gamma() {
        return Err(Error::Dimension(format!(
            "interface sizes differ: {} vs {}",
            d.n_gamma(),
            n.n_gamma()
        )));
    }
    Ok(())
}

/// Global step and mass matrices in the `(u_I^(1), u_I^(2), u_Gamma)` order.
pub(crate) fn assemble_global(d: &SubdomainOperators, n: &SubdomainOperators) -> Result<(SparseMatrix, SparseMatrix)> {
    check_pair(d, n)?;
    let (n1, n2, g) = (d.n_interior(), n.n_interior(), d.n_gamma());
    let dim = n1 + n2 + g;
    let build = |p1: [&SparseMatrix; 4], p2: [&SparseMatrix; 4]| {
        let [ii1, ig1, gi1, gg1] = p1;
        let [ii2, ig2, gi2, gg2] = p2;
        place(
            dim,
            dim,
            &[
                (0, 0, ii1),
                (0, n1 + n2, ig1),
                (n1, n1, ii2),
                (n1, n1 + n2, ig2),
                (n1 + n2, 0, gi1),
                (n1 + n2, n1, gi2),
                (n1 + n2, n1 + n2, gg1),
                (n1 + n2, n1 + n2, gg2),
            ],
        )
    };
    let a = build([&d.s_ii, &d.s_ig, &d.s_gi, &d.s_gg], [&n.s_ii, &n.s_ig, &n.s_gi, &n.s_gg]);
    let m = build([&d.m_ii, &d.m_ig, &d.m_gi, &d.m_gg], [&n.m_ii, &n.m_ig, &n.m_gi, &n.m_gg]);
    Ok((a, m))
}

/// Banded direct solve of `a x = rhs` in the `(u_I^(1), u_I^(2), u_Gamma)`
/// order. Internally the interface is moved between the two interiors so
/// the bandwidth stays that of a single subdomain.
pub(crate) fn solve_global(a: &SparseMatrix, rhs: &[f64], n1: usize, n2: usize, g: usize) -> Result<Vec<f64>> {
    let dim = n1 + n2 + g;
    if a.rows() != dim || rhs.len() != dim {
        return Err(Error::Dimension(format!("global system has size {}, expected {dim}", a.rows())));
    }
    let perm: Vec<usize> = (0..dim)
        .map(|i| {
            if i < n1 {
                i
            } else if i < n1 + n2 {
                i + g
            } else {
                i - n2
            }
        })
        .collect();
    let lu = BandMatrix::from_sparse_permuted(a, &perm)?.factor()?;
    let mut p = vec![0.0; dim];
    for (old, &new) in perm.iter().enumerate() {
        p[new] = rhs[old];
    }
    lu.solve_in_place(&mut p)?;
    Ok(perm.iter().map(|&new| p[new]).collect())
}

pub(crate) fn monolithic(d: &SubdomainOperators, n: &SubdomainOperators, prev: &PartitionedState) -> Result<PartitionedState> {
    let (a, m) = assemble_global(d, n)?;
    let (n1, n2, g) = (d.n_interior(), n.n_interior(), d.n_gamma());
    check_state(prev, n1, n2, g)?;
    let x: Vec<f64> = prev.u1.iter().chain(&prev.u2).chain(&prev.ug).copied().collect();
    let rhs = m.mul_vec(&x);
    let sol = solve_global(&a, &rhs, n1, n2, g)?;
    Ok(PartitionedState {
        u1: sol[..n1].to_vec(),
        u2: sol[n1..n1 + n2].to_vec(),
        ug: sol[n1 + n2..].to_vec(),
    })
}

fn check_state(s: &PartitionedState, n1: usize, n2: usize, g: usize) -> Result<()> {
    if s.u1.len() != n1 || s.u2.len() != n2 || s.ug.len() != g {
        return Err(Error::Dimension(format!(
            "state sizes ({}, {}, {}) do not match the grid ({n1}, {n2}, {g})",
            s.u1.len(),
            s.u2.len(),
            s.ug.len()
        )));
    }
    Ok(())
}

/// Neumann-side matrix in the order `(u_Gamma, u_I^(2))`, which keeps the
/// interface rows adjacent to the first interior column.
fn neumann_factor(n: &SubdomainOperators) -> Result<BandLu> {
    let (n2, g) = (n.n_interior(), n.n_gamma());
    let k = place(
        g + n2,
        g + n2,
        &[(0, 0, &n.s_gg), (0, g, &n.s_gi), (g, 0, &n.s_ig), (g, g, &n.s_ii)],
    );
    BandMatrix::from_sparse(&k)?.factor()
}

/// One implicit-Euler step computed by Dirichlet-Neumann fixed-point
/// iteration. `d` receives the interface values as Dirichlet data, `n`
/// the flux as Neumann data.
pub(crate) fn dirichlet_neumann(
    d: &SubdomainOperators,
    n: &SubdomainOperators,
    prev: &PartitionedState,
    cfg: &DNConfig,
) -> Result<(PartitionedState, IterationTrace)> {
    check_pair(d, n)?;
    cfg.validate()?;
    let (n1, n2, g) = (d.n_interior(), n.n_interior(), d.n_gamma());
    check_state(prev, n1, n2, g)?;

    let d_lu = BandMatrix::from_sparse(&d.s_ii)?.factor()?;
    let n_lu = neumann_factor(n)?;

    // parts of the right-hand sides that only depend on the old time level
    let mut rhs_d = d.m_ii.mul_vec(&prev.u1);
    d.m_ig.mul_vec_add(1.0, &prev.ug, &mut rhs_d);
    let mut rhs_n = vec![0.0; g + n2];
    {
        let (rg, ri) = rhs_n.split_at_mut(g);
        d.m_gi.mul_vec_add(1.0, &prev.u1, rg);
        n.m_gi.mul_vec_add(1.0, &prev.u2, rg);
        d.m_gg.mul_vec_add(1.0, &prev.ug, rg);
        n.m_gg.mul_vec_add(1.0, &prev.ug, rg);
        n.m_ii.mul_vec_add(1.0, &prev.u2, ri);
        n.m_ig.mul_vec_add(1.0, &prev.ug, ri);
    }

    let mut ug = match &cfg.initial_interface {
        InterfaceInit::PreviousStep => prev.ug.clone(),
        InterfaceInit::Zero => vec![0.0; g],
        InterfaceInit::Given(v) => {
            if v.len() != g {
                return Err(Error::Dimension(format!("initial interface has {} values, expected {g}", v.len())));
            }
            v.clone()
        }
    };

    let mut trace = IterationTrace { interface_values: vec![ug.clone()], ..IterationTrace::default() };
    let mut u1 = vec![0.0; n1];
    let mut u2 = vec![0.0; n2];
    for _ in 0..cfg.max_iters {
        u1.copy_from_slice(&rhs_d);
        d.s_ig.mul_vec_add(-1.0, &ug, &mut u1);
        d_lu.solve_in_place(&mut u1)?;

        let mut sol = rhs_n.clone();
        {
            let rg = &mut sol[..g];
            d.s_gi.mul_vec_add(-1.0, &u1, rg);
            d.s_gg.mul_vec_add(-1.0, &ug, rg);
        }
        n_lu.solve_in_place(&mut sol)?;
        let diff: Vec<f64> = sol[..g].iter().zip(&ug).map(|(a, b)| a - b).collect();
        let norm = norm2(&diff);
        ug.copy_from_slice(&sol[..g]);
        u2.copy_from_slice(&sol[g..]);
        trace.iters += 1;
        trace.update_norms.push(norm);
        trace.interface_values.push(ug.clone());
        if norm <= cfg.tol {
            trace.converged = true;
            break;
        }
        if !norm.is_finite() {
            break;
        }
    }

    // make the Dirichlet side consistent with the final interface values
    u1.copy_from_slice(&rhs_d);
    d.s_ig.mul_vec_add(-1.0, &ug, &mut u1);
    d_lu.solve_in_place(&mut u1)?;
    Ok((PartitionedState { u1, u2, ug }, trace))
}
