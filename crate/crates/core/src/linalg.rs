//! Small dense-free linear algebra: three-band matrices with the Thomas
//! algorithm, a CSR sparse matrix, banded LU with partial pivoting and
//! compensated summation.

use crate::error::{Error, Result};

/// Tridiagonal matrix in compact three-band form.
///
/// `sub[i]` is entry `(i + 1, i)`, `sup[i]` is entry `(i, i + 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalMatrix {
    sub: Vec<f64>,
    diag: Vec<f64>,
    sup: Vec<f64>,
}

impl TridiagonalMatrix {
    pub fn new(sub: Vec<f64>, diag: Vec<f64>, sup: Vec<f64>) -> Result<Self> {
        let n = diag.len();
        if n == 0 {
            return Err(Error::Size("tridiagonal matrix needs dimension >= 1".into()));
        }
        if sub.len() != n - 1 || sup.len() != n - 1 {
            return Err(Error::Dimension(format!(
                "bands of length {}/{} for dimension {n}",
                sub.len(),
                sup.len()
            )));
        }
        Ok(Self { sub, diag, sup })
    }

    /// Constant-band (Toeplitz) matrix `tridiag(sub, diag, sup)`.
    pub fn toeplitz(n: usize, sub: f64, diag: f64, sup: f64) -> Self {
        assert!(n >= 1, "tridiagonal matrix needs dimension >= 1");
        Self { sub: vec![sub; n - 1], diag: vec![diag; n], sup: vec![sup; n - 1] }
    }

    pub fn identity(n: usize) -> Self {
        Self::toeplitz(n, 0.0, 1.0, 0.0)
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn sub(&self) -> &[f64] {
        &self.sub
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn sup(&self) -> &[f64] {
        &self.sup
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.diag[i]
        } else if i == j + 1 {
            self.sub[j]
        } else if j == i + 1 {
            self.sup[i]
        } else {
            0.0
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.sub == self.sup
    }

    /// True for `sub == sup` with every band constant.
    pub fn is_symmetric_toeplitz(&self) -> bool {
        let constant = |v: &[f64]| v.windows(2).all(|w| w[0] == w[1]);
        self.is_symmetric() && constant(&self.diag) && constant(&self.sub)
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self {
            sub: self.sub.iter().map(|v| v * k).collect(),
            diag: self.diag.iter().map(|v| v * k).collect(),
            sup: self.sup.iter().map(|v| v * k).collect(),
        }
    }

    /// `self + k * other`.
    pub fn add_scaled(&self, k: f64, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension(format!("{} vs {}", self.dim(), other.dim())));
        }
        let zip = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x + k * y).collect();
        Ok(Self {
            sub: zip(&self.sub, &other.sub),
            diag: zip(&self.diag, &other.diag),
            sup: zip(&self.sup, &other.sup),
        })
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        assert_eq!(x.len(), n);
        (0..n)
            .map(|i| {
                let mut acc = self.diag[i] * x[i];
                if i > 0 {
                    acc += self.sub[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    acc += self.sup[i] * x[i + 1];
                }
                acc
            })
            .collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        (0..n).map(|i| (0..n).map(|j| self.get(i, j)).collect()).collect()
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        let n = self.dim();
        let mut t = Vec::with_capacity(3 * n);
        for i in 0..n {
            if i > 0 {
                t.push((i, i - 1, self.sub[i - 1]));
            }
            t.push((i, i, self.diag[i]));
            if i + 1 < n {
                t.push((i, i + 1, self.sup[i]));
            }
        }
        SparseMatrix::from_triplets(n, n, t)
    }

    /// LU factorization without pivoting (Thomas algorithm).
    pub fn factor(&self) -> Result<TridiagonalFactor> {
        let n = self.dim();
        let scale = self
            .diag
            .iter()
            .chain(&self.sub)
            .chain(&self.sup)
            .fold(0.0_f64, |m, v| m.max(v.abs()));
        let tiny = scale * f64::EPSILON * 1e-3;
        let mut pivot = vec![0.0; n];
        let mut lower = vec![0.0; n.saturating_sub(1)];
        pivot[0] = self.diag[0];
        if !usable_pivot(pivot[0], tiny) {
            return Err(Error::Singular { row: 0 });
        }
        for i in 1..n {
            let l = self.sub[i - 1] / pivot[i - 1];
            lower[i - 1] = l;
            pivot[i] = self.diag[i] - l * self.sup[i - 1];
            if !usable_pivot(pivot[i], tiny) {
                return Err(Error::Singular { row: i });
            }
        }
        Ok(TridiagonalFactor { lower, pivot, sup: self.sup.clone() })
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let mut x = rhs.to_vec();
        self.factor()?.solve_in_place(&mut x)?;
        Ok(x)
    }
}

/// Thomas-algorithm factors of a [`TridiagonalMatrix`].
#[derive(Debug, Clone)]
pub struct TridiagonalFactor {
    lower: Vec<f64>,
    pivot: Vec<f64>,
    sup: Vec<f64>,
}

impl TridiagonalFactor {
    pub fn dim(&self) -> usize {
        self.pivot.len()
    }

    pub fn solve_in_place(&self, x: &mut [f64]) -> Result<()> {
        let n = self.dim();
        if x.len() != n {
            return Err(Error::Dimension(format!("rhs length {} for dimension {n}", x.len())));
        }
        for i in 1..n {
            x[i] -= self.lower[i - 1] * x[i - 1];
        }
        x[n - 1] /= self.pivot[n - 1];
        for i in (0..n - 1).rev() {
            x[i] = (x[i] - self.sup[i] * x[i + 1]) / self.pivot[i];
        }
        Ok(())
    }
}

/// Solves `m x = rhs` with the Thomas algorithm.
/// False for pivots at or below `tiny`, and for NaN.
fn usable_pivot(v: f64, tiny: f64) -> bool {
    v.abs() > tiny
}

pub fn solve_tridiagonal(m: &TridiagonalMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
    m.solve(rhs)
}

/// Compressed sparse row matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, row_ptr: vec![0; rows + 1], col_idx: Vec::new(), values: Vec::new() }
    }

    /// Duplicate entries are summed; explicit zeros are dropped.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        mut triplets: Vec<(usize, usize, f64)>,
    ) -> Self {
        triplets.sort_unstable_by_key(|&(i, j, _)| (i, j));
        let mut row_ptr = vec![0usize; rows + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in triplets {
            assert!(i < rows && j < cols, "triplet ({i}, {j}) outside {rows}x{cols}");
            if last == Some((i, j)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(j);
                values.push(v);
                row_ptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..rows {
            row_ptr[i + 1] += row_ptr[i];
        }
        let mut m = Self { rows, cols, row_ptr, col_idx, values };
        m.drop_zeros();
        m
    }

    fn drop_zeros(&mut self) {
        if self.values.iter().all(|v| *v != 0.0) {
            return;
        }
        let t: Vec<_> = self.triplets().filter(|t| t.2 != 0.0).collect();
        let (r, c) = (self.rows, self.cols);
        *self = Self::from_triplets(r, c, t);
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.rows).flat_map(move |i| {
            (self.row_ptr[i]..self.row_ptr[i + 1]).map(move |k| (i, self.col_idx[k], self.values[k]))
        })
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        (self.row_ptr[i]..self.row_ptr[i + 1])
            .find(|&k| self.col_idx[k] == j)
            .map_or(0.0, |k| self.values[k])
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.rows];
        self.mul_vec_add(1.0, x, &mut y);
        y
    }

    /// `y += k * self * x`.
    pub fn mul_vec_add(&self, k: f64, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.cols);
        assert_eq!(y.len(), self.rows);
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = 0.0;
            for p in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.values[p] * x[self.col_idx[p]];
            }
            *yi += k * acc;
        }
    }

    /// `a * self + b * other`.
    pub fn lin_comb(a: f64, lhs: &Self, b: f64, rhs: &Self) -> Result<Self> {
        if lhs.rows != rhs.rows || lhs.cols != rhs.cols {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                lhs.rows, lhs.cols, rhs.rows, rhs.cols
            )));
        }
        let t = lhs
            .triplets()
            .map(|(i, j, v)| (i, j, a * v))
            .chain(rhs.triplets().map(|(i, j, v)| (i, j, b * v)))
            .collect();
        Ok(Self::from_triplets(lhs.rows, lhs.cols, t))
    }

    pub fn scaled(&self, k: f64) -> Self {
        let mut m = self.clone();
        m.values.iter_mut().for_each(|v| *v *= k);
        m.drop_zeros();
        m
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.cols]; self.rows];
        for (i, j, v) in self.triplets() {
            d[i][j] = v;
        }
        d
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.rows == self.cols
            && self.triplets().all(|(i, j, v)| (v - self.get(j, i)).abs() <= tol * v.abs().max(1.0))
    }
}

/// Square band matrix stored row-wise with room for pivoting fill-in.
#[derive(Debug, Clone)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        Self { n, kl, ku, width, data: vec![0.0; n * width] }
    }

    /// Builds the band matrix of `P A P^T`, where `perm[old] = new`.
    pub fn from_sparse_permuted(a: &SparseMatrix, perm: &[usize]) -> Result<Self> {
        if a.rows() != a.cols() || perm.len() != a.rows() {
            return Err(Error::Dimension("band conversion needs a square matrix and full permutation".into()));
        }
        let (mut kl, mut ku) = (0usize, 0usize);
        for (i, j, _) in a.triplets() {
            let (pi, pj) = (perm[i], perm[j]);
            if pi > pj {
                kl = kl.max(pi - pj);
            } else {
                ku = ku.max(pj - pi);
            }
        }
        let mut b = Self::zeros(a.rows(), kl, ku);
        for (i, j, v) in a.triplets() {
            *b.entry_mut(perm[i], perm[j]) += v;
        }
        Ok(b)
    }

    pub fn from_sparse(a: &SparseMatrix) -> Result<Self> {
        let perm: Vec<usize> = (0..a.rows()).collect();
        Self::from_sparse_permuted(a, &perm)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidths(&self) -> (usize, usize) {
        (self.kl, self.ku)
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(j + self.kl >= i && j <= i + self.kl + self.ku + self.kl);
        i * self.width + (j + self.kl - i)
    }

    fn entry_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        let k = self.idx(i, j);
        &mut self.data[k]
    }

    /// In-place LU with partial pivoting (row interchanges within the band).
    pub fn factor(mut self) -> Result<BandLu> {
        let n = self.n;
        let (kl, ku) = (self.kl, self.ku);
        let scale = self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let tiny = scale * f64::EPSILON * 1e-6;
        let mut piv = vec![0usize; n];
        let mut mult = vec![0.0; n * kl.max(1)];
        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let last_col = (k + ku + kl).min(n - 1);
            let mut p = k;
            let mut best = self.data[self.idx(k, k)].abs();
            for i in k + 1..=last_row {
                let v = self.data[self.idx(i, k)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if !usable_pivot(best, tiny) {
                return Err(Error::Singular { row: k });
            }
            piv[k] = p;
            if p != k {
                for j in k..=last_col {
                    let (a, b) = (self.idx(k, j), self.idx(p, j));
                    self.data.swap(a, b);
                }
            }
            let pivot = self.data[self.idx(k, k)];
            for i in k + 1..=last_row {
                let ik = self.idx(i, k);
                let m = self.data[ik] / pivot;
                self.data[ik] = 0.0;
                mult[k * kl + (i - k - 1)] = m;
                if m != 0.0 {
                    for j in k + 1..=last_col {
                        let kj = self.data[self.idx(k, j)];
                        let ij = self.idx(i, j);
                        self.data[ij] -= m * kj;
                    }
                }
            }
        }
        Ok(BandLu { band: self, piv, mult })
    }
}

/// Banded LU factors; see [`BandMatrix::factor`].
#[derive(Debug, Clone)]
pub struct BandLu {
    band: BandMatrix,
    piv: Vec<usize>,
    mult: Vec<f64>,
}

impl BandLu {
    pub fn dim(&self) -> usize {
        self.band.n
    }

    #[allow(clippy::needless_range_loop)]
    pub fn solve_in_place(&self, b: &mut [f64]) -> Result<()> {
        let n = self.band.n;
        let kl = self.band.kl;
        let ku = self.band.ku;
        if b.len() != n {
            return Err(Error::Dimension(format!("rhs length {} for dimension {n}", b.len())));
        }
        for k in 0..n {
            let p = self.piv[k];
            if p != k {
                b.swap(k, p);
            }
            let bk = b[k];
            if bk != 0.0 {
                for i in k + 1..=(k + kl).min(n - 1) {
                    b[i] -= self.mult[k * kl + (i - k - 1)] * bk;
                }
            }
        }
        for k in (0..n).rev() {
            let mut acc = b[k];
            for j in k + 1..=(k + ku + kl).min(n - 1) {
                acc -= self.band.data[self.band.idx(k, j)] * b[j];
            }
            b[k] = acc / self.band.data[self.band.idx(k, k)];
        }
        Ok(())
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let mut x = rhs.to_vec();
        self.solve_in_place(&mut x)?;
        Ok(x)
    }
}

/// Neumaier's improved Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

pub fn compensated_sum(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().collect::<CompensatedSum>().value()
}

pub fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}
