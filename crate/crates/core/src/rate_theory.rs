//! Closed-form convergence theory of the 1D Dirichlet-Neumann iteration:
//! interface Schur complements, the exact rate `|Sigma|`, the semidiscrete
//! estimator `beta` and the asymptotic limits.
//!
//! Spectral quantities use `theta_i = i pi / (N + 1)`. On the unit
//! subdomains `1 / (N + 1)` is the mesh width; for general spacing the
//! formulas keep `1 / (N + 1)` wherever it stems from `sum sin^2 = (N + 1) / 2`.

use std::f64::consts::PI;

use crate::discretization_1d::{build_fem_blocks, build_fvm_blocks, GridSpec1D, SubdomainBlocks};
use crate::error::{Error, Result};
use crate::linalg::{compensated_sum, solve_tridiagonal, CompensatedSum};
use crate::materials::Material;

/// Every symbol entering the rate formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateInputs {
    pub dt: f64,
    pub grid: GridSpec1D,
    pub mat1: Material,
    pub mat2: Material,
}

impl RateInputs {
    pub fn new(dt: f64, grid: GridSpec1D, mat1: Material, mat2: Material) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::Domain(format!("time step must be positive, got {dt}")));
        }
        if grid.n1 < 2 || grid.n2 < 1 {
            return Err(Error::Size(format!("grid ({}, {}) too small", grid.n1, grid.n2)));
        }
        Ok(Self { dt, grid, mat1, mat2 })
    }

    /// Unit subdomains with `dx2 = r dx1`.
    pub fn from_dx1_r(dt: f64, dx1: f64, r: f64, mat1: Material, mat2: Material) -> Result<Self> {
        Self::new(dt, GridSpec1D::from_dx1_r(dx1, r)?, mat1, mat2)
    }

    pub fn with_dt(&self, dt: f64) -> Result<Self> {
        Self::new(dt, self.grid, self.mat1, self.mat2)
    }
}

/// Eigenvalues and normalized sine eigenvectors of the symmetric Toeplitz
/// matrix `tridiag(off, diag, off)` of size `n`. `vectors[j][i]` is entry
/// `i` of eigenvector `j`.
pub fn toeplitz_eigenpairs(n: usize, off: f64, diag: f64) -> (Vec<f64>, Vec<Vec<f64>>) {
    let h = PI / (n as f64 + 1.0);
    let norm = compensated_sum((1..=n).map(|k| (k as f64 * h).sin().powi(2))).sqrt();
    let values = (1..=n).map(|j| diag + 2.0 * off * (j as f64 * h).cos()).collect();
    let vectors = (1..=n)
        .map(|j| (1..=n).map(|i| ((i * j) as f64 * h).sin() / norm).collect())
        .collect();
    (values, vectors)
}

/// Denominator sums of the inverse entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralSums {
    pub s0: f64,
    pub s1: f64,
    pub s2: f64,
}

pub fn sums_s(inputs: &RateInputs) -> SpectralSums {
    let RateInputs { dt, grid, mat1, mat2 } = *inputs;
    let (l1, a1, l2, a2) = (mat1.lambda, mat1.alpha, mat2.lambda, mat2.alpha);
    let h1 = PI / (grid.n1 as f64 + 1.0);
    let h2 = PI / (grid.n2 as f64 + 1.0);
    let dx1sq = grid.dx1 * grid.dx1;
    let dx2sq = grid.dx2 * grid.dx2;
    let (mut s0, mut s1, mut s2) = (CompensatedSum::new(), CompensatedSum::new(), CompensatedSum::new());
    for i in 1..=grid.n1 {
        let t = i as f64 * h1;
        let den = a1 * dx1sq + 2.0 * l1 * dt * (1.0 - t.cos());
        s0.add(t.sin() * (2.0 * t).sin() / den);
        s1.add(t.sin().powi(2) / den);
    }
    for i in 1..=grid.n2 {
        let t = i as f64 * h2;
        let den = 2.0 * a2 * dx2sq + 6.0 * l2 * dt + (a2 * dx2sq - 6.0 * l2 * dt) * t.cos();
        s2.add(t.sin().powi(2) / den);
    }
    SpectralSums { s0: s0.value(), s1: s1.value(), s2: s2.value() }
}

/// The three entries of the subdomain inverses that enter the Schur
/// complements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseEntries {
    /// Entry `(N1, N1)` of `(alpha_1 I - dt A_1)^{-1}`.
    pub alpha1_nn: f64,
    /// Entry `(N1 - 1, N1)` of the same inverse.
    pub alpha1_nm1n: f64,
    /// Entry `(1, 1)` of `(M_2 + dt A_2)^{-1}`.
    pub alpha2_11: f64,
}

fn half_count(n: usize) -> f64 {
    (n as f64 + 1.0) / 2.0
}

pub fn inverse_entries(inputs: &RateInputs) -> InverseEntries {
    let s = sums_s(inputs);
    let g = &inputs.grid;
    let (q1, q2) = (half_count(g.n1), half_count(g.n2));
    InverseEntries {
        alpha1_nn: g.dx1 * g.dx1 * s.s1 / q1,
        alpha1_nm1n: g.dx1 * g.dx1 * s.s0 / q1,
        alpha2_11: 3.0 * g.dx2 * g.dx2 * s.s2 / q2,
    }
}

/// Numerically summed and closed-form values of the three trigonometric
/// identities on the grid `j dx`, `j = 1..n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedSums {
    pub sin2: f64,
    pub sin2_closed: f64,
    pub cos2: f64,
    pub cos2_closed: f64,
    pub cos: f64,
    pub cos_closed: f64,
}

impl ClosedSums {
    pub fn max_abs_error(&self) -> f64 {
        (self.sin2 - self.sin2_closed)
            .abs()
            .max((self.cos2 - self.cos2_closed).abs())
            .max((self.cos - self.cos_closed).abs())
    }
}

pub fn closed_sum_checks(n: usize, dx: f64) -> Result<ClosedSums> {
    if n == 0 || ((n as f64 + 1.0) * dx - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!("dx = {dx} is not 1/(n+1) for n = {n}")));
    }
    let angle = |j: usize| j as f64 * PI * dx;
    Ok(ClosedSums {
        sin2: compensated_sum((1..=n).map(|j| angle(j).sin().powi(2))),
        sin2_closed: 1.0 / (2.0 * dx),
        cos2: compensated_sum((1..=n).map(|j| angle(j).cos().powi(2))),
        cos2_closed: (1.0 - 2.0 * dx) / (2.0 * dx),
        cos: compensated_sum((1..=n).map(|j| angle(j).cos())),
        cos_closed: 0.0,
    })
}

/// Finite volume Schur complement from the spectral sums.
pub fn schur_s1(inputs: &RateInputs) -> f64 {
    let RateInputs { dt, grid, mat1, .. } = *inputs;
    let s = sums_s(inputs);
    let l = mat1.lambda;
    let dxsq = grid.dx1 * grid.dx1;
    3.0 * l * dt / (2.0 * dxsq) - l * l * dt * dt / (2.0 * dxsq) * (4.0 * s.s1 - s.s0) / half_count(grid.n1)
}

/// Finite element Schur complement from the spectral sums.
pub fn schur_s2(inputs: &RateInputs) -> f64 {
    let RateInputs { dt, grid, mat2, .. } = *inputs;
    let s = sums_s(inputs);
    let (l, a) = (mat2.lambda, mat2.alpha);
    let dxsq = grid.dx2 * grid.dx2;
    let w = a * dxsq - 6.0 * l * dt;
    (a * dxsq + 3.0 * l * dt) / (3.0 * dxsq) - w * w / (12.0 * dxsq) * s.s2 / half_count(grid.n2)
}

/// `gamma - row * interior^{-1} * col` for one subdomain, computed with one
/// tridiagonal solve.
fn schur_direct(b: &SubdomainBlocks, interior_sign: f64, row_sign: f64, dt: f64) -> Result<f64> {
    let interior = b.m_ii.add_scaled(interior_sign * dt, &b.a_ii)?;
    let col: Vec<f64> = b
        .m_igamma
        .to_dense()
        .iter()
        .zip(b.a_igamma.to_dense())
        .map(|(m, a)| m + interior_sign * dt * a)
        .collect();
    let row: Vec<f64> = b
        .m_gammai
        .to_dense()
        .iter()
        .zip(b.a_gammai.to_dense())
        .map(|(m, a)| m + row_sign * dt * a)
        .collect();
    let x = solve_tridiagonal(&interior, &col)?;
    let coupling = compensated_sum(row.iter().zip(&x).map(|(r, x)| r * x));
    Ok(b.m_gammagamma + dt * b.a_gammagamma - coupling)
}

/// Finite volume Schur complement by a direct solve on the assembled blocks.
pub fn schur_s1_direct(inputs: &RateInputs) -> Result<f64> {
    let b = build_fvm_blocks(&inputs.grid, &inputs.mat1)?;
    schur_direct(&b, -1.0, -1.0, inputs.dt)
}

/// Finite element Schur complement by a direct solve on the assembled blocks.
pub fn schur_s2_direct(inputs: &RateInputs) -> Result<f64> {
    let b = build_fem_blocks(&inputs.grid, &inputs.mat2)?;
    schur_direct(&b, 1.0, 1.0, inputs.dt)
}

/// `|S2^{-1} S1|` from the direct Schur complements.
pub fn sigma_schur(inputs: &RateInputs) -> Result<f64> {
    let s2 = schur_s2_direct(inputs)?;
    if s2 == 0.0 || !s2.is_finite() {
        return Err(Error::Degenerate(format!("finite element Schur complement is {s2}")));
    }
    Ok((schur_s1_direct(inputs)? / s2).abs())
}

/// Exact spectral radius of the Dirichlet-Neumann iteration matrix
/// (a scalar in 1D), from the closed formula.
pub fn sigma_exact(inputs: &RateInputs) -> Result<f64> {
    let RateInputs { dt, grid, mat1, mat2 } = *inputs;
    let s = sums_s(inputs);
    let (l1, l2, a2) = (mat1.lambda, mat2.lambda, mat2.alpha);
    let c1 = 1.0 / (grid.n1 as f64 + 1.0);
    let c2 = 1.0 / (grid.n2 as f64 + 1.0);
    let dx1sq = grid.dx1 * grid.dx1;
    let dx2sq = grid.dx2 * grid.dx2;
    let w = a2 * dx2sq - 6.0 * l2 * dt;
    let num = 3.0 * dx2sq * (3.0 * l1 * dt - 2.0 * l1 * l1 * c1 * dt * dt * (4.0 * s.s1 - s.s0));
    let den = dx1sq * (2.0 * (a2 * dx2sq + 3.0 * l2 * dt) - c2 * w * w * s.s2);
    if den == 0.0 || !den.is_finite() || !num.is_finite() {
        return Err(Error::Degenerate(format!("rate formula has numerator {num} and denominator {den}")));
    }
    Ok((num / den).abs())
}

/// Rate of the time-semidiscrete iteration on two unit intervals.
pub fn semidiscrete_beta(dt: f64, mat1: &Material, mat2: &Material) -> Result<f64> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Domain(format!("time step must be positive, got {dt}")));
    }
    let t1 = (1.0 / (mat1.d * dt).sqrt()).tanh();
    let t2 = (1.0 / (mat2.d * dt).sqrt()).tanh();
    Ok((mat1.lambda / mat2.lambda * (mat2.d / mat1.d).sqrt() * t2 / t1).abs())
}

/// Limit of the rate for vanishing `dx1` at fixed aspect ratio `r`.
pub fn spatial_limit(r: f64, lambda1: f64, lambda2: f64) -> f64 {
    r * lambda1 / lambda2
}

/// Limit of the rate for vanishing time step.
pub fn temporal_limit() -> f64 {
    0.0
}

/// Limits `(dt -> 0, dx -> 0)` reported for two coupled finite element
/// subdomains: `(alpha_1 / alpha_2, lambda_1 / lambda_2)`.
pub fn fem_fem_limits(mat1: &Material, mat2: &Material) -> (f64, f64) {
    (mat1.alpha / mat2.alpha, mat1.lambda / mat2.lambda)
}

/// Theory values at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateReport {
    pub sigma_exact: f64,
    pub sigma_schur: f64,
    pub beta: f64,
    pub delta_r: f64,
    pub temporal_limit: f64,
    /// Filled in by callers that also run the iteration.
    pub observed: Option<f64>,
}

pub fn rate_report(inputs: &RateInputs) -> Result<RateReport> {
    Ok(RateReport {
        sigma_exact: sigma_exact(inputs)?,
        sigma_schur: sigma_schur(inputs)?,
        beta: semidiscrete_beta(inputs.dt, &inputs.mat1, &inputs.mat2)?,
        delta_r: spatial_limit(inputs.grid.r, inputs.mat1.lambda, inputs.mat2.lambda),
        temporal_limit: temporal_limit(),
        observed: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::TridiagonalMatrix;
    use approx::assert_relative_eq;

    fn mat(lambda: f64, alpha: f64) -> Material {
        Material::from_lambda_alpha(lambda, alpha).unwrap()
    }

    fn inputs(n1: usize, n2: usize, dt: f64, m1: Material, m2: Material) -> RateInputs {
        RateInputs::new(dt, GridSpec1D::new(n1, n2).unwrap(), m1, m2).unwrap()
    }

    #[test]
    fn eigenpairs_small() {
        let (v, w) = toeplitz_eigenpairs(1, 7.0, 3.0);
        assert_relative_eq!(v[0], 3.0, max_relative = 1e-15);
        assert_relative_eq!(w[0][0], 1.0, max_relative = 1e-15);
        let (v, _) = toeplitz_eigenpairs(3, -1.0, 2.0);
        let mut v = v;
        v.sort_by(f64::total_cmp);
        let s2 = std::f64::consts::SQRT_2;
        for (a, b) in v.iter().zip([2.0 - s2, 2.0, 2.0 + s2]) {
            assert_relative_eq!(*a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn eigenpairs_residual() {
        let (off, diag) = (0.37, -1.9);
        let m = TridiagonalMatrix::toeplitz(50, off, diag, off);
        let (vals, vecs) = toeplitz_eigenpairs(50, off, diag);
        for (mu, v) in vals.iter().zip(&vecs) {
            let mv = m.mul_vec(v);
            for (a, b) in mv.iter().zip(v) {
                assert!((a - mu * b).abs() <= 1e-12);
            }
            assert_relative_eq!(v.iter().map(|x| x * x).sum::<f64>(), 1.0, max_relative = 1e-13);
        }
    }

    #[test]
    fn inverse_entries_match_direct_solve() {
        let ri = inputs(12, 7, 0.3, mat(0.7, 2.0), mat(1.3, 0.5));
        let e = inverse_entries(&ri);
        let g = ri.grid;
        let c = ri.mat1.lambda * ri.dt / (g.dx1 * g.dx1);
        let t1 = TridiagonalMatrix::toeplitz(12, -c, ri.mat1.alpha + 2.0 * c, -c);
        let mut en = vec![0.0; 12];
        en[11] = 1.0;
        let x = solve_tridiagonal(&t1, &en).unwrap();
        assert_relative_eq!(e.alpha1_nn, x[11], max_relative = 1e-11);
        assert_relative_eq!(e.alpha1_nm1n, x[10], max_relative = 1e-11);
        let (a, l, dx) = (ri.mat2.alpha, ri.mat2.lambda, g.dx2);
        let off = a / 6.0 - ri.dt * l / (dx * dx);
        let t2 = TridiagonalMatrix::toeplitz(7, off, 4.0 * a / 6.0 + 2.0 * ri.dt * l / (dx * dx), off);
        let mut e1 = vec![0.0; 7];
        e1[0] = 1.0;
        assert_relative_eq!(e.alpha2_11, solve_tridiagonal(&t2, &e1).unwrap()[0], max_relative = 1e-11);
    }

    #[test]
    fn inverse_entries_without_time_step() {
        let ri = RateInputs { dt: 0.0, ..inputs(9, 4, 1.0, mat(1.0, 2.5), mat(1.0, 1.0)) };
        let e = inverse_entries(&ri);
        assert_relative_eq!(e.alpha1_nn, 1.0 / 2.5, max_relative = 1e-13);
        assert!(e.alpha1_nm1n.abs() < 1e-14);
    }

    #[test]
    fn s1_two_cell_fixture() {
        let ri = inputs(2, 2, 1.0, mat(1.0, 1.0), mat(1.0, 1.0));
        // 27/40 + 27/112
        assert_relative_eq!(sums_s(&ri).s1, 4104.0 / 4480.0, max_relative = 1e-14);
    }

    #[test]
    fn s2_with_vanishing_cosine_weight() {
        // alpha2 dx2^2 = 6 lambda2 dt
        let n2 = 9;
        let dx = 0.1;
        let ri = inputs(3, n2, 1.0, mat(1.0, 1.0), mat(1.0, 6.0 / (dx * dx)));
        let constant = 2.0 * 6.0 + 6.0;
        assert_relative_eq!(sums_s(&ri).s2, 1.0 / (2.0 * dx * constant), max_relative = 1e-13);
    }

    #[test]
    fn s1_positive_for_huge_conductivity() {
        let ri = inputs(40, 5, 1.0, mat(1e12, 1.0), mat(1.0, 1.0));
        let s = sums_s(&ri);
        assert!(s.s1.is_finite() && s.s1 > 0.0);
    }

    #[test]
    fn closed_sums() {
        let c = closed_sum_checks(1, 0.5).unwrap();
        assert_relative_eq!(c.sin2, 1.0, max_relative = 1e-15);
        let c = closed_sum_checks(9, 0.1).unwrap();
        assert_relative_eq!(c.sin2, 5.0, epsilon = 1e-12);
        assert_relative_eq!(c.cos2, 4.0, epsilon = 1e-12);
        assert!(c.cos.abs() < 1e-12);
        assert!(closed_sum_checks(1000, 1.0 / 1001.0).unwrap().max_abs_error() < 1e-10);
        assert!(closed_sum_checks(9, 0.2).is_err());
    }

    #[test]
    fn schur_formula_against_direct() {
        let ri = inputs(4, 4, 1.0, Material::new(0.3, 0.3, 1.0).unwrap(), Material::new(1.0, 2.0, 1.0).unwrap());
        assert_relative_eq!(schur_s1(&ri), schur_s1_direct(&ri).unwrap(), max_relative = 1e-12);
        assert_relative_eq!(schur_s2(&ri), schur_s2_direct(&ri).unwrap(), max_relative = 1e-12);
        assert_relative_eq!(sigma_exact(&ri).unwrap(), sigma_schur(&ri).unwrap(), max_relative = 1e-12);
    }

    #[test]
    fn zero_conductivity_on_first_side() {
        let ri = RateInputs { mat1: Material::from_parts_unchecked(0.0, 1.0, 1.0), ..inputs(5, 5, 1.0, mat(1.0, 1.0), mat(1.0, 1.0)) };
        assert_eq!(schur_s1(&ri), 0.0);
        assert_eq!(sigma_exact(&ri).unwrap(), 0.0);
    }

    #[test]
    fn degenerate_denominator_is_an_error() {
        let z = Material::from_parts_unchecked(0.0, 0.0, 1.0);
        let ri = RateInputs { mat2: z, ..inputs(5, 5, 1.0, mat(1.0, 1.0), mat(1.0, 1.0)) };
        assert!(matches!(sigma_exact(&ri), Err(Error::Degenerate(_))));
    }

    #[test]
    fn beta_limits() {
        let m = mat(2.0, 3.0);
        assert_relative_eq!(semidiscrete_beta(0.7, &m, &m).unwrap(), 1.0, max_relative = 1e-15);
        let (air, steel) = (Material::preset("air").unwrap(), Material::preset("steel").unwrap());
        let big = 1e8 / air.d.min(steel.d);
        let b = semidiscrete_beta(big, &air, &steel).unwrap();
        assert_relative_eq!(b, air.lambda / steel.lambda, max_relative = 1e-3);
        let small = semidiscrete_beta(1e-12, &air, &steel).unwrap();
        assert_relative_eq!(small, air.lambda / steel.lambda * (steel.d / air.d).sqrt(), max_relative = 1e-12);
        assert!(semidiscrete_beta(0.0, &air, &steel).is_err());
    }

    #[test]
    fn published_limits() {
        assert_eq!(spatial_limit(1.0, 0.5, 0.5), 1.0);
        assert_relative_eq!(spatial_limit(1.0, 0.58, 48.9), 0.0119, max_relative = 5e-3);
        assert_relative_eq!(spatial_limit(1.0, 0.0243, 0.58), 0.0419, max_relative = 5e-3);
        assert_eq!(temporal_limit(), 0.0);
        let (a, b) = fem_fem_limits(&mat(1.0, 2.0), &mat(4.0, 8.0));
        assert_eq!((a, b), (0.25, 0.25));
    }

    #[test]
    fn report_fields_are_consistent() {
        let ri = RateInputs::from_dx1_r(1.0, 0.01, 2.0, Material::preset("water").unwrap(), Material::preset("steel").unwrap()).unwrap();
        let r = rate_report(&ri).unwrap();
        assert_relative_eq!(r.sigma_exact, r.sigma_schur, max_relative = 1e-10);
        assert_relative_eq!(r.delta_r, 2.0 * 0.58 / 48.9, max_relative = 1e-14);
        assert!(r.beta > 0.0 && r.observed.is_none());
    }
}
