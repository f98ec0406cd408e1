//! Block matrices of the one-dimensional FVM/FEM discretization and the
//! monolithic implicit-Euler system.
//!
//! Unknowns are ordered `(u_I^(1), u_I^(2), u_Gamma)`. The finite volume
//! blocks are stored with the conventions `u' = A u` (so `a_ii` is negative
//! definite), the finite element blocks with `M u' + A u = 0`; the sign
//! change is applied in exactly one place, [`SubdomainBlocks::step_operators`].

use crate::error::{Error, Result};
use crate::linalg::{SparseMatrix, TridiagonalMatrix};
use crate::materials::Material;
use crate::partitioned::SubdomainOperators;

/// Uniform 1D grids on both subdomains.
///
/// `n1` cell centres on the finite volume side and `n2` interior nodes on
/// the finite element side. On the unit subdomains `dx_m = 1 / (n_m + 1)`;
/// [`GridSpec1D::with_spacing`] allows other lengths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec1D {
    pub n1: usize,
    pub n2: usize,
    pub dx1: f64,
    pub dx2: f64,
    /// Aspect ratio `dx2 / dx1`.
    pub r: f64,
}

/// Relative slack accepted when turning a mesh width into a cell count.
const INTEGRALITY_TOL: f64 = 1e-6;

impl GridSpec1D {
    /// Unit subdomains with the given counts.
    pub fn new(n1: usize, n2: usize) -> Result<Self> {
        Self::with_spacing(n1, 1.0 / (n1 as f64 + 1.0), n2, 1.0 / (n2 as f64 + 1.0))
    }

    /// Arbitrary mesh widths; the subdomain lengths are `(n_m + 1) dx_m`.
    pub fn with_spacing(n1: usize, dx1: f64, n2: usize, dx2: f64) -> Result<Self> {
        if n1 < 2 {
            return Err(Error::Size(format!("finite volume side needs n1 >= 2, got {n1}")));
        }
        if n2 < 1 {
            return Err(Error::Size("finite element side needs n2 >= 1".into()));
        }
        if !(dx1 > 0.0 && dx1.is_finite() && dx2 > 0.0 && dx2.is_finite()) {
            return Err(Error::Domain(format!("mesh widths must be positive, got {dx1}, {dx2}")));
        }
        Ok(Self { n1, n2, dx1, dx2, r: dx2 / dx1 })
    }

    /// Unit subdomains from `dx1` and the aspect ratio `r`.
    pub fn from_dx1_r(dx1: f64, r: f64) -> Result<Self> {
        let n1 = count_from_width(dx1, "dx1")?;
        let n2 = count_from_width(r * dx1, "dx2 = r*dx1")?;
        Self::new(n1, n2)
    }

    pub fn is_unit(&self) -> bool {
        let unit = |n: usize, dx: f64| ((n as f64 + 1.0) * dx - 1.0).abs() <= 1e-12;
        unit(self.n1, self.dx1) && unit(self.n2, self.dx2)
    }

    pub fn dim(&self) -> usize {
        self.n1 + self.n2 + 1
    }
}

/// Number of interior points `n` with `dx = 1 / (n + 1)` on a unit interval.
pub fn count_from_width(dx: f64, what: &str) -> Result<usize> {
    if !(dx > 0.0 && dx.is_finite()) {
        return Err(Error::Domain(format!("{what} must be positive, got {dx}")));
    }
    let cells = 1.0 / dx;
    let rounded = cells.round();
    if (cells - rounded).abs() > INTEGRALITY_TOL * cells {
        return Err(Error::Domain(format!("{what} = {dx} does not divide the unit interval")));
    }
    if rounded < 2.0 {
        return Err(Error::Size(format!("{what} = {dx} leaves no interior points on the unit interval")));
    }
    Ok(rounded as usize - 1)
}

/// Sparse vector used for the interface rows and columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseVector {
    pub dim: usize,
    pub entries: Vec<(usize, f64)>,
}

impl SparseVector {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: Vec::new() }
    }

    pub fn new(dim: usize, entries: Vec<(usize, f64)>) -> Self {
        debug_assert!(entries.iter().all(|(i, _)| *i < dim));
        Self { dim, entries: entries.into_iter().filter(|e| e.1 != 0.0).collect() }
    }

    pub fn get(&self, i: usize) -> f64 {
        self.entries.iter().filter(|e| e.0 == i).map(|e| e.1).sum()
    }

    pub fn dot(&self, x: &[f64]) -> f64 {
        self.entries.iter().map(|&(i, v)| v * x[i]).sum()
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self::new(self.dim, self.entries.iter().map(|&(i, v)| (i, k * v)).collect())
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.dim];
        for &(i, v) in &self.entries {
            d[i] += v;
        }
        d
    }

    fn as_column(&self) -> SparseMatrix {
        SparseMatrix::from_triplets(self.dim, 1, self.entries.iter().map(|&(i, v)| (i, 0, v)).collect())
    }

    fn as_row(&self) -> SparseMatrix {
        SparseMatrix::from_triplets(1, self.dim, self.entries.iter().map(|&(j, v)| (0, j, v)).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubdomainKind {
    FiniteVolume,
    FiniteElement,
}

impl SubdomainKind {
    /// Sign of the stored stiffness in the interior rows and the
    /// interior-to-interface column of the one-step operator.
    pub(crate) fn interior_sign(self) -> f64 {
        match self {
            SubdomainKind::FiniteVolume => -1.0,
            SubdomainKind::FiniteElement => 1.0,
        }
    }

    /// Sign of the stored interface-to-interior stiffness row in the flux
    /// balance. The stored finite volume row carries `+4 u_N - u_{N-1}` while
    /// the one-sided flux is `(4 u_N - u_{N-1} - 3 u_Gamma) / (2 dx)`.
    pub(crate) fn interface_row_sign(self) -> f64 {
        match self {
            SubdomainKind::FiniteVolume => -1.0,
            SubdomainKind::FiniteElement => 1.0,
        }
    }
}

/// Mass and stiffness blocks of one subdomain.
#[derive(Debug, Clone, PartialEq)]
pub struct SubdomainBlocks {
    pub kind: SubdomainKind,
    pub m_ii: TridiagonalMatrix,
    pub a_ii: TridiagonalMatrix,
    pub m_igamma: SparseVector,
    pub a_igamma: SparseVector,
    pub m_gammai: SparseVector,
    pub a_gammai: SparseVector,
    pub m_gammagamma: f64,
    pub a_gammagamma: f64,
    /// Mesh width, kept for flux post-processing.
    pub dx: f64,
}

impl SubdomainBlocks {
    pub fn n_interior(&self) -> usize {
        self.m_ii.dim()
    }

    /// One implicit-Euler step operator `M + dt A` with the sign convention
    /// of this subdomain applied.
    pub(crate) fn step_operators(&self, dt: f64) -> SubdomainOperators {
        let si = self.kind.interior_sign();
        let sr = self.kind.interface_row_sign();
        let n = self.n_interior();
        let scalar = |v: f64| SparseMatrix::from_triplets(1, 1, vec![(0, 0, v)]);
        let combine_col = |m: &SparseVector, a: &SparseVector, s: f64| {
            SparseMatrix::lin_comb(1.0, &m.as_column(), s * dt, &a.as_column()).expect("same shape")
        };
        let combine_row = |m: &SparseVector, a: &SparseVector, s: f64| {
            SparseMatrix::lin_comb(1.0, &m.as_row(), s * dt, &a.as_row()).expect("same shape")
        };
        let m_ii = self.m_ii.to_sparse();
        let s_ii = SparseMatrix::lin_comb(1.0, &m_ii, si * dt, &self.a_ii.to_sparse()).expect("same shape");
        debug_assert_eq!(s_ii.rows(), n);
        SubdomainOperators {
            m_ii,
            s_ii,
            m_ig: self.m_igamma.as_column(),
            s_ig: combine_col(&self.m_igamma, &self.a_igamma, si),
            m_gi: self.m_gammai.as_row(),
            s_gi: combine_row(&self.m_gammai, &self.a_gammai, sr),
            m_gg: scalar(self.m_gammagamma),
            s_gg: scalar(self.m_gammagamma + dt * self.a_gammagamma),
        }
    }
}

/// Finite volume blocks on `[-1, 0]`: `a_ii = lambda/dx^2 tridiag(1, -2, 1)`,
/// a second-order one-sided difference for the interface flux, `m_ii = alpha I`
/// and no interface mass.
pub fn build_fvm_blocks(grid: &GridSpec1D, mat1: &Material) -> Result<SubdomainBlocks> {
    let n = grid.n1;
    if n < 2 {
        return Err(Error::Size(format!("finite volume side needs n1 >= 2, got {n}")));
    }
    let dx = grid.dx1;
    let k = mat1.lambda / (dx * dx);
    Ok(SubdomainBlocks {
        kind: SubdomainKind::FiniteVolume,
        m_ii: TridiagonalMatrix::toeplitz(n, 0.0, mat1.alpha, 0.0),
        a_ii: TridiagonalMatrix::toeplitz(n, k, -2.0 * k, k),
        m_igamma: SparseVector::zeros(n),
        a_igamma: SparseVector::new(n, vec![(n - 1, k)]),
        m_gammai: SparseVector::zeros(n),
        a_gammai: SparseVector::new(n, vec![(n - 1, 4.0 * k / 2.0), (n - 2, -k / 2.0)]),
        m_gammagamma: 0.0,
        a_gammagamma: 3.0 * k / 2.0,
        dx,
    })
}

/// Linear finite element blocks on `[0, 1]`, scaled by `1/dx`:
/// `m_ii = alpha/6 tridiag(1, 4, 1)`, `a_ii = lambda/dx^2 tridiag(-1, 2, -1)`.
pub fn build_fem_blocks(grid: &GridSpec1D, mat2: &Material) -> Result<SubdomainBlocks> {
    let n = grid.n2;
    if n < 1 {
        return Err(Error::Size("finite element side needs n2 >= 1".into()));
    }
    let dx = grid.dx2;
    let k = mat2.lambda / (dx * dx);
    let m = mat2.alpha / 6.0;
    Ok(SubdomainBlocks {
        kind: SubdomainKind::FiniteElement,
        m_ii: TridiagonalMatrix::toeplitz(n, m, 4.0 * m, m),
        a_ii: TridiagonalMatrix::toeplitz(n, -k, 2.0 * k, -k),
        m_igamma: SparseVector::new(n, vec![(0, m)]),
        a_igamma: SparseVector::new(n, vec![(0, -k)]),
        m_gammai: SparseVector::new(n, vec![(0, m)]),
        a_gammai: SparseVector::new(n, vec![(0, -k)]),
        m_gammagamma: 2.0 * m,
        a_gammagamma: k,
        dx,
    })
}

/// Approximation of `-lambda_1 du_1/dn_1` at the interface from the finite
/// volume blocks and a state.
pub fn fvm_interface_flux(blocks: &SubdomainBlocks, u_i: &[f64], u_gamma: f64) -> f64 {
    blocks.dx * (blocks.a_gammai.dot(u_i) - blocks.a_gammagamma * u_gamma)
}

/// Position of each unknown in the `(u_I^(1), u_I^(2), u_Gamma)` ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    pub n1: usize,
    pub n2: usize,
    pub n_gamma: usize,
}

impl Layout {
    pub fn dim(&self) -> usize {
        self.n1 + self.n2 + self.n_gamma
    }

    pub fn interior1(&self, i: usize) -> usize {
        i
    }

    pub fn interior2(&self, i: usize) -> usize {
        self.n1 + i
    }

    pub fn interface(&self, i: usize) -> usize {
        self.n1 + self.n2 + i
    }
}

/// Monolithic one-step system `a_step u^{n+1} = m_tilde u^n`.
#[derive(Debug, Clone)]
pub struct CoupledSystem {
    pub a_step: SparseMatrix,
    pub m_tilde: SparseMatrix,
    pub layout: Layout,
}

/// Assembles `M~ + dt A~` and `M~`; the interface row sums both subdomain
/// contributions.
pub fn assemble(blocks1: &SubdomainBlocks, blocks2: &SubdomainBlocks, dt: f64) -> Result<CoupledSystem> {
    if !(dt >= 0.0 && dt.is_finite()) {
        return Err(Error::Domain(format!("time step must be non-negative, got {dt}")));
    }
    check_block_dims(blocks1)?;
    check_block_dims(blocks2)?;
    let ops1 = blocks1.step_operators(dt);
    let ops2 = blocks2.step_operators(dt);
    let (a_step, m_tilde) = crate::partitioned::assemble_global(&ops1, &ops2)?;
    Ok(CoupledSystem {
        a_step,
        m_tilde,
        layout: Layout { n1: blocks1.n_interior(), n2: blocks2.n_interior(), n_gamma: 1 },
    })
}

fn check_block_dims(b: &SubdomainBlocks) -> Result<()> {
    let n = b.n_interior();
    let ok = b.a_ii.dim() == n
        && [&b.m_igamma, &b.a_igamma, &b.m_gammai, &b.a_gammai].iter().all(|v| v.dim == n);
    if ok {
        Ok(())
    } else {
        Err(Error::Dimension(format!("inconsistent block sizes in {:?} subdomain", b.kind)))
    }
}
