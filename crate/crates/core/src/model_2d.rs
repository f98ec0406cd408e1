//! Two-dimensional model problem: a cartesian finite volume grid on
//! `[-1, 0] x [0, H]` with cells `dx1 x dx2`, bilinear finite elements on
//! `[0, 1] x [0, H]` with square cells `dx2 x dx2`, zero Dirichlet data on
//! the outer boundary.
//!
//! Unknowns are ordered column by column with the tangential index
//! running fastest; interface node `j` is shared by both grids.

use crate::discretization_1d::{count_from_width, GridSpec1D, SubdomainKind};
use crate::dn_solver::{observed_rate, DNConfig, InterfaceInit, IterationTrace};
use crate::error::{Error, Result};
use crate::linalg::{norm2, SparseMatrix};
use crate::materials::Material;
use crate::partitioned::{self, PartitionedState, SubdomainOperators};

/// Tensor grid of the 2D problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec2D {
    /// Finite volume columns normal to the interface.
    pub nx1: usize,
    /// Interior finite element node columns.
    pub nx2: usize,
    /// Interface nodes (tangential interior nodes on both sides).
    pub ny: usize,
    pub dx1: f64,
    pub dx2: f64,
    pub r: f64,
}

impl GridSpec2D {
    /// Two unit squares with `dx2 = r dx1`.
    pub fn new(dx1: f64, r: f64) -> Result<Self> {
        let nx1 = count_from_width(dx1, "dx1")?;
        let nx2 = count_from_width(r * dx1, "dx2 = r*dx1")?;
        Self::with_ny(nx1, nx2, nx2)
    }

    /// Unit length normal to the interface, tangential height `(ny + 1) dx2`.
    pub fn with_ny(nx1: usize, nx2: usize, ny: usize) -> Result<Self> {
        Self::with_spacing(nx1, 1.0 / (nx1 as f64 + 1.0), nx2, 1.0 / (nx2 as f64 + 1.0), ny)
    }

    /// Arbitrary widths; the subdomain lengths are `(nx_m + 1) dx_m`.
    pub fn with_spacing(nx1: usize, dx1: f64, nx2: usize, dx2: f64, ny: usize) -> Result<Self> {
        if nx1 < 2 || nx2 < 1 || ny < 1 {
            return Err(Error::Size(format!("2D grid needs nx1 >= 2, nx2 >= 1, ny >= 1; got ({nx1}, {nx2}, {ny})")));
        }
        if !(dx1 > 0.0 && dx1.is_finite() && dx2 > 0.0 && dx2.is_finite()) {
            return Err(Error::Domain(format!("mesh widths must be positive, got {dx1}, {dx2}")));
        }
        Ok(Self { nx1, nx2, ny, dx1, dx2, r: dx2 / dx1 })
    }

    /// Lengths of the two subdomains normal to the interface.
    pub fn lengths(&self) -> (f64, f64) {
        ((self.nx1 as f64 + 1.0) * self.dx1, (self.nx2 as f64 + 1.0) * self.dx2)
    }

    pub fn height(&self) -> f64 {
        (self.ny as f64 + 1.0) * self.dx2
    }

    pub fn n1(&self) -> usize {
        self.nx1 * self.ny
    }

    pub fn n2(&self) -> usize {
        self.nx2 * self.ny
    }

    pub fn dim(&self) -> usize {
        self.n1() + self.n2() + self.ny
    }

    /// The 1D grid with the same normal resolution.
    pub fn normal_grid(&self) -> GridSpec1D {
        GridSpec1D { n1: self.nx1, n2: self.nx2, dx1: self.dx1, dx2: self.dx2, r: self.r }
    }

    /// Work estimate of one banded factorization of the coupled system.
    pub fn solve_cost(&self) -> f64 {
        let bw = 3.0 * self.ny as f64 + 2.0;
        self.dim() as f64 * bw * bw
    }
}

/// Sparse blocks of one 2D subdomain, in the same conventions as the 1D
/// [`crate::discretization_1d::SubdomainBlocks`].
#[derive(Debug, Clone)]
pub struct Blocks2D {
    pub kind: SubdomainKind,
    pub m_ii: SparseMatrix,
    pub a_ii: SparseMatrix,
    pub m_igamma: SparseMatrix,
    pub a_igamma: SparseMatrix,
    pub m_gammai: SparseMatrix,
    pub a_gammai: SparseMatrix,
    pub m_gammagamma: SparseMatrix,
    pub a_gammagamma: SparseMatrix,
}

impl Blocks2D {
    pub fn n_interior(&self) -> usize {
        self.m_ii.rows()
    }

    pub fn n_gamma(&self) -> usize {
        self.m_gammagamma.rows()
    }

    fn step_operators(&self, dt: f64) -> SubdomainOperators {
        let si = self.kind.interior_sign();
        let sr = self.kind.interface_row_sign();
        let comb = |m: &SparseMatrix, a: &SparseMatrix, s: f64| SparseMatrix::lin_comb(1.0, m, s * dt, a).expect("same shape");
        SubdomainOperators {
            m_ii: self.m_ii.clone(),
            s_ii: comb(&self.m_ii, &self.a_ii, si),
            m_ig: self.m_igamma.clone(),
            s_ig: comb(&self.m_igamma, &self.a_igamma, si),
            m_gi: self.m_gammai.clone(),
            s_gi: comb(&self.m_gammai, &self.a_gammai, sr),
            m_gg: self.m_gammagamma.clone(),
            s_gg: comb(&self.m_gammagamma, &self.a_gammagamma, 1.0),
        }
    }
}

/// Finite volume blocks: 5-point balance per cell, and per interface node
/// the one-sided second-order normal difference of the 1D scheme.
pub fn build_fvm_2d(grid: &GridSpec2D, mat1: &Material) -> Result<Blocks2D> {
    let (nx, ny) = (grid.nx1, grid.ny);
    if nx < 2 || ny < 1 {
        return Err(Error::Size(format!("finite volume grid {nx} x {ny} too small")));
    }
    let kx = mat1.lambda / (grid.dx1 * grid.dx1);
    let ky = mat1.lambda / (grid.dx2 * grid.dx2);
    let id = |i: usize, j: usize| i * ny + j;
    let n = nx * ny;
    let mut a = Vec::with_capacity(5 * n);
    for i in 0..nx {
        for j in 0..ny {
            let p = id(i, j);
            a.push((p, p, -2.0 * kx - 2.0 * ky));
            if i > 0 {
                a.push((p, id(i - 1, j), kx));
            }
            if i + 1 < nx {
                a.push((p, id(i + 1, j), kx));
            }
            if j > 0 {
                a.push((p, id(i, j - 1), ky));
            }
            if j + 1 < ny {
                a.push((p, id(i, j + 1), ky));
            }
        }
    }
    let last = |j| id(nx - 1, j);
    let a_ig = (0..ny).map(|j| (last(j), j, kx)).collect();
    let a_gi = (0..ny)
        .flat_map(|j| [(j, last(j), 2.0 * kx), (j, id(nx - 2, j), -0.5 * kx)])
        .collect();
    let a_gg = (0..ny).map(|j| (j, j, 1.5 * kx)).collect();
    Ok(Blocks2D {
        kind: SubdomainKind::FiniteVolume,
        m_ii: SparseMatrix::from_triplets(n, n, (0..n).map(|p| (p, p, mat1.alpha)).collect()),
        a_ii: SparseMatrix::from_triplets(n, n, a),
        m_igamma: SparseMatrix::zeros(n, ny),
        a_igamma: SparseMatrix::from_triplets(n, ny, a_ig),
        m_gammai: SparseMatrix::zeros(ny, n),
        a_gammai: SparseMatrix::from_triplets(ny, n, a_gi),
        m_gammagamma: SparseMatrix::zeros(ny, ny),
        a_gammagamma: SparseMatrix::from_triplets(ny, ny, a_gg),
    })
}

const Q1_MASS: [[f64; 4]; 4] = [[4.0, 2.0, 1.0, 2.0], [2.0, 4.0, 2.0, 1.0], [1.0, 2.0, 4.0, 2.0], [2.0, 1.0, 2.0, 4.0]];
const Q1_STIFF: [[f64; 4]; 4] = [[4.0, -1.0, -2.0, -1.0], [-1.0, 4.0, -1.0, -2.0], [-2.0, -1.0, 4.0, -1.0], [-1.0, -2.0, -1.0, 4.0]];

/// Element mass matrix of a square bilinear element of side `h`, local
/// nodes counter-clockwise.
pub fn q1_element_mass(alpha: f64, h: f64) -> [[f64; 4]; 4] {
    Q1_MASS.map(|row| row.map(|v| alpha * h * h / 36.0 * v))
}

/// Element stiffness matrix of a square bilinear element (independent of `h`).
pub fn q1_element_stiffness(lambda: f64) -> [[f64; 4]; 4] {
    Q1_STIFF.map(|row| row.map(|v| lambda / 6.0 * v))
}

/// Mass and stiffness of bilinear elements on a `px x py` node lattice of
/// spacing `h` (node `(x, y)` has index `x * py + y`), divided by `h^2`.
pub fn q1_assemble(px: usize, py: usize, h: f64, mat: &Material) -> (SparseMatrix, SparseMatrix) {
    let me = q1_element_mass(mat.alpha, h);
    let ke = q1_element_stiffness(mat.lambda);
    let scale = 1.0 / (h * h);
    let (mut m, mut k) = (Vec::new(), Vec::new());
    for ex in 0..px.saturating_sub(1) {
        for ey in 0..py.saturating_sub(1) {
            let nodes = [ex * py + ey, (ex + 1) * py + ey, (ex + 1) * py + ey + 1, ex * py + ey + 1];
            for a in 0..4 {
                for b in 0..4 {
                    m.push((nodes[a], nodes[b], me[a][b] * scale));
                    k.push((nodes[a], nodes[b], ke[a][b] * scale));
                }
            }
        }
    }
    let n = px * py;
    (SparseMatrix::from_triplets(n, n, m), SparseMatrix::from_triplets(n, n, k))
}

/// Bilinear finite element blocks with consistent mass; the interface row
/// is the weak form tested with the interface hat functions.
pub fn build_fem_2d(grid: &GridSpec2D, mat2: &Material) -> Result<Blocks2D> {
    let (nx, ny) = (grid.nx2, grid.ny);
    if nx < 1 || ny < 1 {
        return Err(Error::Size(format!("finite element grid {nx} x {ny} too small")));
    }
    let (px, py) = (nx + 2, ny + 2);
    let (m, k) = q1_assemble(px, py, grid.dx2, mat2);
    // lattice node -> (is_interface, index); outer boundary nodes are dropped
    let map = |node: usize| -> Option<(bool, usize)> {
        let (x, y) = (node / py, node % py);
        if y == 0 || y == py - 1 || x == px - 1 {
            None
        } else if x == 0 {
            Some((true, y - 1))
        } else {
            Some((false, (x - 1) * ny + y - 1))
        }
    };
    let n = nx * ny;
    let split = |full: &SparseMatrix| {
        let (mut ii, mut ig, mut gi, mut gg) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for (r, c, v) in full.triplets() {
            if let (Some(a), Some(b)) = (map(r), map(c)) {
                match (a.0, b.0) {
                    (false, false) => ii.push((a.1, b.1, v)),
                    (false, true) => ig.push((a.1, b.1, v)),
                    (true, false) => gi.push((a.1, b.1, v)),
                    (true, true) => gg.push((a.1, b.1, v)),
                }
            }
        }
        (
            SparseMatrix::from_triplets(n, n, ii),
            SparseMatrix::from_triplets(n, ny, ig),
            SparseMatrix::from_triplets(ny, n, gi),
            SparseMatrix::from_triplets(ny, ny, gg),
        )
    };
    let (m_ii, m_ig, m_gi, m_gg) = split(&m);
    let (a_ii, a_ig, a_gi, a_gg) = split(&k);
    Ok(Blocks2D {
        kind: SubdomainKind::FiniteElement,
        m_ii,
        a_ii,
        m_igamma: m_ig,
        a_igamma: a_ig,
        m_gammai: m_gi,
        a_gammai: a_gi,
        m_gammagamma: m_gg,
        a_gammagamma: a_gg,
    })
}

/// One at the interface, zero at both far ends, linear in between.
fn hat(grid: &GridSpec2D) -> impl Fn(f64) -> f64 {
    let (l1, l2) = grid.lengths();
    move |x| if x <= 0.0 { 1.0 + x / l1 } else { 1.0 - x / l2 }
}

/// Discrete temperatures of the 2D problem.
#[derive(Debug, Clone, PartialEq)]
pub struct State2D {
    pub u1: Vec<f64>,
    pub u2: Vec<f64>,
    pub u_gamma: Vec<f64>,
}

impl State2D {
    pub fn zeros(grid: &GridSpec2D) -> Self {
        Self { u1: vec![0.0; grid.n1()], u2: vec![0.0; grid.n2()], u_gamma: vec![0.0; grid.ny] }
    }

    /// `f(x, y)` at the cell centres, interior nodes and interface nodes.
    pub fn from_fn(grid: &GridSpec2D, f: impl Fn(f64, f64) -> f64) -> Self {
        let ys: Vec<f64> = (1..=grid.ny).map(|j| j as f64 * grid.dx2).collect();
        let mut u1 = Vec::with_capacity(grid.n1());
        for i in 0..grid.nx1 {
            let x = -((grid.nx1 - i) as f64) * grid.dx1;
            u1.extend(ys.iter().map(|&y| f(x, y)));
        }
        let mut u2 = Vec::with_capacity(grid.n2());
        for k in 1..=grid.nx2 {
            let x = k as f64 * grid.dx2;
            u2.extend(ys.iter().map(|&y| f(x, y)));
        }
        Self { u1, u2, u_gamma: ys.iter().map(|&y| f(0.0, y)).collect() }
    }

    /// Hat profile in `x` (one at the interface, zero at the far ends)
    /// times the parabola `4 y (H - y) / H^2`, so the data vanish on the
    /// whole outer boundary.
    pub fn interface_bump(grid: &GridSpec2D) -> Self {
        let h = grid.height();
        let p = hat(grid);
        Self::from_fn(grid, |x, y| p(x) * 4.0 * y * (h - y) / (h * h))
    }

    /// Hat profile in `x`, constant in `y` at interior nodes. Discontinuous
    /// at the tangential walls, so every odd tangential mode is excited.
    pub fn interface_hat(grid: &GridSpec2D) -> Self {
        let p = hat(grid);
        Self::from_fn(grid, |x, _| p(x))
    }

    /// Hat profile in `x` times the tangential sine mode `k`.
    pub fn interface_hat_mode(grid: &GridSpec2D, k: usize) -> Self {
        let h = grid.height();
        let w = k as f64 * std::f64::consts::PI / h;
        let p = hat(grid);
        Self::from_fn(grid, |x, y| p(x) * (w * y).sin())
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.u1.iter().chain(&self.u2).chain(&self.u_gamma).copied().collect()
    }

    fn to_partitioned(&self) -> PartitionedState {
        PartitionedState { u1: self.u1.clone(), u2: self.u2.clone(), ug: self.u_gamma.clone() }
    }

    fn from_partitioned(s: PartitionedState) -> Self {
        Self { u1: s.u1, u2: s.u2, u_gamma: s.ug }
    }
}

pub fn dn_time_step_2d(blocks1: &Blocks2D, blocks2: &Blocks2D, cfg: &DNConfig, prev: &State2D) -> Result<(State2D, IterationTrace)> {
    cfg.validate()?;
    let d = blocks1.step_operators(cfg.dt);
    let n = blocks2.step_operators(cfg.dt);
    let (s, trace) = partitioned::dirichlet_neumann(&d, &n, &prev.to_partitioned(), cfg)?;
    Ok((State2D::from_partitioned(s), trace))
}

pub fn monolithic_step_2d(blocks1: &Blocks2D, blocks2: &Blocks2D, dt: f64, prev: &State2D) -> Result<State2D> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Domain(format!("time step must be positive, got {dt}")));
    }
    let d = blocks1.step_operators(dt);
    let n = blocks2.step_operators(dt);
    Ok(State2D::from_partitioned(partitioned::monolithic(&d, &n, &prev.to_partitioned())?))
}

/// Observed rate of the first step from [`State2D::interface_bump`], with
/// the iteration started at `u_Gamma = 0`.
pub fn measure_rate_2d(
    grid: &GridSpec2D,
    mat1: &Material,
    mat2: &Material,
    dt: f64,
    tol: f64,
    max_iters: usize,
) -> Result<(f64, IterationTrace)> {
    let b1 = build_fvm_2d(grid, mat1)?;
    let b2 = build_fem_2d(grid, mat2)?;
    let cfg = DNConfig { tol, max_iters, dt, initial_interface: InterfaceInit::Zero };
    let (_, trace) = dn_time_step_2d(&b1, &b2, &cfg, &State2D::interface_bump(grid))?;
    Ok((observed_rate(&trace)?, trace))
}

/// Materials of the 1D problem that tangential sine mode `k` of the 2D
/// problem reduces to at time step `dt`.
///
/// The mode diagonalizes the tangential difference and mass operators
/// with eigenvalues `t_k = (2 - 2 cos th) / dx2^2` and `q_k = (4 + 2 cos th) / 6`,
/// `th = k pi / (ny + 1)`; the tangential terms are absorbed into modified
/// heat capacities.
pub fn mode_reduced_materials(grid: &GridSpec2D, mat1: &Material, mat2: &Material, dt: f64, k: usize) -> Result<(Material, Material)> {
    if k == 0 || k > grid.ny {
        return Err(Error::Domain(format!("mode {k} outside 1..={}", grid.ny)));
    }
    let th = k as f64 * std::f64::consts::PI / (grid.ny as f64 + 1.0);
    let t = (2.0 - 2.0 * th.cos()) / (grid.dx2 * grid.dx2);
    let q = (4.0 + 2.0 * th.cos()) / 6.0;
    let m1 = Material::from_lambda_alpha(mat1.lambda, mat1.alpha + dt * mat1.lambda * t)?;
    let m2 = Material::from_lambda_alpha(mat2.lambda * q, mat2.alpha * q + dt * mat2.lambda * t)?;
    Ok((m1, m2))
}

/// Euclidean norm of a 2D state weighted by the diagonal of the subdomain
/// mass matrices (finite volume: `alpha_1`, finite element: row sums).
pub fn lumped_energy_norm(blocks1: &Blocks2D, blocks2: &Blocks2D, s: &State2D) -> f64 {
    let row_sums = |m: &SparseMatrix, extra: Option<&SparseMatrix>, rows: usize| {
        let mut w = m.mul_vec(&vec![1.0; m.cols()]);
        if let Some(e) = extra {
            e.mul_vec_add(1.0, &vec![1.0; e.cols()], &mut w);
        }
        debug_assert_eq!(w.len(), rows);
        w
    };
    let w1 = row_sums(&blocks1.m_ii, None, s.u1.len());
    let w2 = row_sums(&blocks2.m_ii, Some(&blocks2.m_igamma), s.u2.len());
    let wg = row_sums(&blocks2.m_gammagamma, Some(&blocks2.m_gammai), s.u_gamma.len());
    let weighted: Vec<f64> = s
        .u1
        .iter()
        .zip(&w1)
        .chain(s.u2.iter().zip(&w2))
        .chain(s.u_gamma.iter().zip(&wg))
        .map(|(u, w)| u * w.sqrt())
        .collect();
    norm2(&weighted)
}
