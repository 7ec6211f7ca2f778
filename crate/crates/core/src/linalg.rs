//! Small dense complex linear algebra.
//!
//! Only what the receiver model needs: a row-major complex matrix, products,
//! a Cholesky-based Hermitian positive-definite solve, singular values through
//! one-sided Jacobi, and seeded complex Gaussian sampling.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

/// Entrywise tolerance on `max |A - A^H|` accepted by [`hermitian_solve`].
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Pivot magnitude below which a factorization is declared singular.
pub const PIVOT_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix has a zero dimension")]
    EmptyMatrix,
    #[error("entry count {got} does not match {rows}x{cols}")]
    BadShape { rows: usize, cols: usize, got: usize },
    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not Hermitian (max |A - A^H| = {0:e})")]
    NotHermitian(f64),
    #[error("matrix is singular (pivot {pivot:e} at step {step})")]
    Singular { step: usize, pivot: f64 },
    #[error("matrix is not positive definite (pivot {pivot:e} at step {step})")]
    NotPositiveDefinite { step: usize, pivot: f64 },
    #[error("variance must be positive, got {0}")]
    BadVariance(f64),
}

/// Dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl CMatrix {
    /// Builds a matrix from row-major entries, rejecting empty shapes and
    /// non-finite values.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::EmptyMatrix);
        }
        if data.len() != rows * cols {
            return Err(LinalgError::BadShape { rows, cols, got: data.len() });
        }
        if let Some(i) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(LinalgError::NonFinite { row: i / cols, col: i % cols });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::DimensionMismatch("ragged rows".into()));
        }
        Self::from_vec(r, c, rows.iter().flatten().copied().collect())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self, LinalgError> {
        let rows: Vec<Vec<Complex64>> =
            rows.iter().map(|row| row.iter().map(|&x| Complex64::new(x, 0.0)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub(crate) fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        Self { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diag(&vec![1.0; n])
    }

    /// Square matrix with the given real diagonal.
    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let rrow = rhs.row(k);
                let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, &b) in orow.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `self * v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} * vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows).map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum()).collect())
    }

    /// `self^H * v` without materializing the adjoint.
    pub fn adjoint_mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>, LinalgError> {
        if v.len() != self.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "({}x{})^H * vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.cols];
        for (r, &vr) in v.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(r)) {
                *o += a.conj() * vr;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    /// Multiplies row `i` by `d[i]`, i.e. `diag(d) * self`.
    pub fn scale_rows(&self, d: &[f64]) -> Self {
        assert_eq!(d.len(), self.rows);
        let mut out = self.clone();
        for (r, &s) in d.iter().enumerate() {
            for z in &mut out.data[r * self.cols..(r + 1) * self.cols] {
                *z *= s;
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} + {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, LinalgError> {
        self.add(&rhs.scale(-1.0))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        self.data.iter().zip(&rhs.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// `max |A - A^H|` entrywise; infinite for non-square input.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for r in 0..self.rows {
            for c in r..self.cols {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// `(A + A^H) / 2`. Panics on non-square input.
    pub fn hermitian_part(&self) -> Self {
        assert!(self.is_square());
        let mut out = self.clone();
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(r, c)] = (self[(r, c)] + self[(c, r)].conj()) * 0.5;
            }
        }
        out
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

/// Lower Cholesky factor `L` with `A = L L^H`.
fn cholesky(a: &CMatrix) -> Result<CMatrix, LinalgError> {
    let n = a.rows;
    let mut l = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if d.abs() < PIVOT_TOL {
            return Err(LinalgError::Singular { step: j, pivot: d });
        }
        if d < 0.0 {
            return Err(LinalgError::NotPositiveDefinite { step: j, pivot: d });
        }
        let djj = d.sqrt();
        l[(j, j)] = Complex64::new(djj, 0.0);
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / djj;
        }
    }
    Ok(l)
}

/// Solves `A X = B` for Hermitian positive-definite `A`.
pub fn hermitian_solve(a: &CMatrix, b: &CMatrix) -> Result<CMatrix, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::DimensionMismatch(format!("{}x{} is not square", a.rows, a.cols)));
    }
    if b.rows != a.rows {
        return Err(LinalgError::DimensionMismatch(format!("A is {}x{}, B has {} rows", a.rows, a.cols, b.rows)));
    }
    let defect = a.hermitian_defect();
    if defect > HERMITIAN_TOL {
        return Err(LinalgError::NotHermitian(defect));
    }
    let n = a.rows;
    let l = cholesky(a)?;
    let mut x = b.clone();
    for col in 0..b.cols {
        // forward: L y = b
        for i in 0..n {
            let mut s = x[(i, col)];
            for k in 0..i {
                s -= l[(i, k)] * x[(k, col)];
            }
            x[(i, col)] = s / l[(i, i)].re;
        }
        // backward: L^H x = y
        for i in (0..n).rev() {
            let mut s = x[(i, col)];
            for k in i + 1..n {
                s -= l[(k, i)].conj() * x[(k, col)];
            }
            x[(i, col)] = s / l[(i, i)].re;
        }
    }
    Ok(x)
}

/// Singular values in descending order, by one-sided (Hestenes) Jacobi.
#[allow(clippy::needless_range_loop)]
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    // Work on the orientation with at least as many rows as columns.
    let work = if m.rows >= m.cols { m.clone() } else { m.adjoint() };
    let (rows, cols) = (work.rows, work.cols);
    let mut colv: Vec<Vec<Complex64>> = (0..cols).map(|c| work.column(c)).collect();

    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha: f64 = colv[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = colv[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = colv[p].iter().zip(&colv[q]).map(|(a, b)| a.conj() * b).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Rotate column q by the phase of gamma so the pair becomes real.
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..rows {
                    let ap = colv[p][i];
                    let aq = colv[q][i] * phase.conj();
                    colv[p][i] = ap * c - aq * s;
                    colv[q][i] = (ap * s + aq * c) * phase;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sv: Vec<f64> = colv.iter().map(|v| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// 2-norm condition number `σ_max / σ_min`; `+∞` when `σ_min < 1e-300`.
pub fn condition_number(m: &CMatrix) -> f64 {
    let sv = singular_values(m);
    let max = sv[0];
    let min = *sv.last().expect("non-empty matrix");
    if min < 1e-300 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Draws one circularly-symmetric complex Gaussian sample with the given
/// total variance.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, variance: f64) -> Complex64 {
    let sd = (variance / 2.0).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re * sd, im * sd)
}

/// Matrix with i.i.d. `CN(0, variance)` entries drawn from `rng`.
pub fn gaussian_cmatrix_with<R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    variance: f64,
    rng: &mut R,
) -> Result<CMatrix, LinalgError> {
    if !(variance > 0.0 && variance.is_finite()) {
        return Err(LinalgError::BadVariance(variance));
    }
    if rows == 0 || cols == 0 {
        return Err(LinalgError::EmptyMatrix);
    }
    let data = (0..rows * cols).map(|_| complex_gaussian(rng, variance)).collect();
    CMatrix::from_vec(rows, cols, data)
}

/// Seeded matrix with i.i.d. `CN(0, variance)` entries.
pub fn gaussian_cmatrix(rows: usize, cols: usize, variance: f64, seed: u64) -> Result<CMatrix, LinalgError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    gaussian_cmatrix_with(rows, cols, variance, &mut rng)
}

/// Orthonormalizes the columns of a square matrix (modified Gram-Schmidt,
/// two passes). Used to turn Gaussian draws into Haar-like unitaries.
pub fn orthonormalize_columns(m: &CMatrix) -> Result<CMatrix, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::DimensionMismatch("orthonormalize needs a square matrix".into()));
    }
    let n = m.cols;
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|c| m.column(c)).collect();
    for j in 0..n {
        for _pass in 0..2 {
            for k in 0..j {
                let proj: Complex64 = cols[k].iter().zip(&cols[j]).map(|(q, v)| q.conj() * v).sum();
                let qk = cols[k].clone();
                for (v, q) in cols[j].iter_mut().zip(&qk) {
                    *v -= proj * q;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < PIVOT_TOL {
            return Err(LinalgError::Singular { step: j, pivot: norm });
        }
        for v in &mut cols[j] {
            *v /= norm;
        }
    }
    let mut out = CMatrix::zeros(n, n);
    for (c, col) in cols.iter().enumerate() {
        for (r, &z) in col.iter().enumerate() {
            out[(r, c)] = z;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_pd(n: usize, seed: u64) -> CMatrix {
        let g = gaussian_cmatrix(n, n, 1.0, seed).unwrap();
        g.matmul(&g.adjoint()).unwrap().add(&CMatrix::identity(n).scale(0.1)).unwrap().hermitian_part()
    }

    #[test]
    fn solve_identity_returns_rhs() {
        let b = CMatrix::from_rows(&[
            vec![c(1.0, 2.0), c(-3.0, 0.5)],
            vec![c(0.0, 1.0), c(4.0, -4.0)],
            vec![c(7.0, 0.0), c(0.25, 0.0)],
        ])
        .unwrap();
        let x = hermitian_solve(&CMatrix::identity(3), &b).unwrap();
        assert!(x.max_abs_diff(&b) < 1e-15);
    }

    #[test]
    fn solve_diagonal() {
        let a = CMatrix::from_diag(&[2.0, 4.0]);
        let b = CMatrix::from_real_rows(&[&[1.0], &[1.0]]).unwrap();
        let x = hermitian_solve(&a, &b).unwrap();
        assert!((x[(0, 0)] - c(0.5, 0.0)).norm() < 1e-15);
        assert!((x[(1, 0)] - c(0.25, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn solve_random_pd_residual() {
        let a = random_pd(8, 11);
        let b = CMatrix::identity(8);
        let x = hermitian_solve(&a, &b).unwrap();
        let resid = a.matmul(&x).unwrap().max_abs_diff(&b);
        assert!(resid <= 1e-8 * (1.0 + b.max_abs()), "residual {resid}");
    }

    #[test]
    fn solve_rejects_non_hermitian() {
        let a = CMatrix::from_real_rows(&[&[2.0, 1.0], &[0.0, 2.0]]).unwrap();
        let err = hermitian_solve(&a, &CMatrix::identity(2)).unwrap_err();
        assert!(matches!(err, LinalgError::NotHermitian(_)));
    }

    #[test]
    fn solve_rejects_singular() {
        let a = CMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]).unwrap();
        let err = hermitian_solve(&a, &CMatrix::identity(2)).unwrap_err();
        assert!(matches!(err, LinalgError::Singular { step: 1, .. }));
    }

    #[test]
    fn solve_rejects_indefinite() {
        let a = CMatrix::from_diag(&[1.0, -2.0]);
        let err = hermitian_solve(&a, &CMatrix::identity(2)).unwrap_err();
        assert!(matches!(err, LinalgError::NotPositiveDefinite { .. }));
    }

    #[test]
    fn empty_and_non_finite_rejected() {
        assert_eq!(CMatrix::from_vec(0, 3, vec![]).unwrap_err(), LinalgError::EmptyMatrix);
        let err = CMatrix::from_vec(1, 2, vec![c(1.0, 0.0), c(f64::NAN, 0.0)]).unwrap_err();
        assert_eq!(err, LinalgError::NonFinite { row: 0, col: 1 });
    }

    #[test]
    fn condition_number_simple_cases() {
        assert!((condition_number(&CMatrix::identity(4)) - 1.0).abs() < 1e-12);
        let d = CMatrix::from_diag(&[10.0, 0.02]);
        assert!((condition_number(&d) - 500.0).abs() < 1e-9);
        let singular = CMatrix::from_diag(&[1.0, 0.0]);
        assert_eq!(condition_number(&singular), f64::INFINITY);
    }

    #[test]
    fn condition_number_of_constructed_svd() {
        let s = [7.0, 3.0, 1.5, 0.25, 0.01];
        let u = orthonormalize_columns(&gaussian_cmatrix(5, 5, 1.0, 1).unwrap()).unwrap();
        let v = orthonormalize_columns(&gaussian_cmatrix(5, 5, 1.0, 2).unwrap()).unwrap();
        let m = u.matmul(&CMatrix::from_diag(&s)).unwrap().matmul(&v.adjoint()).unwrap();
        let sv = singular_values(&m);
        for (got, want) in sv.iter().zip(s) {
            assert!((got - want).abs() < 1e-12 * 7.0, "{got} vs {want}");
        }
        assert!((condition_number(&m) / 700.0 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rectangular_singular_values() {
        let m = CMatrix::from_real_rows(&[&[3.0, 0.0, 0.0], &[0.0, 2.0, 0.0]]).unwrap();
        assert_eq!(singular_values(&m), vec![3.0, 2.0]);
    }

    #[test]
    fn orthonormalized_columns_are_unitary() {
        let q = orthonormalize_columns(&gaussian_cmatrix(6, 6, 1.0, 5).unwrap()).unwrap();
        let qhq = q.adjoint().matmul(&q).unwrap();
        assert!(qhq.max_abs_diff(&CMatrix::identity(6)) < 1e-13);
    }

    #[test]
    fn gaussian_is_deterministic() {
        let a = gaussian_cmatrix(4, 3, 1.0, 42).unwrap();
        let b = gaussian_cmatrix(4, 3, 1.0, 42).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, gaussian_cmatrix(4, 3, 1.0, 43).unwrap());
        assert!(matches!(gaussian_cmatrix(2, 2, 0.0, 1), Err(LinalgError::BadVariance(_))));
    }

    fn sample_moments(m: &CMatrix) -> (Complex64, f64, f64, f64) {
        let n = m.as_slice().len() as f64;
        let mean: Complex64 = m.as_slice().iter().sum::<Complex64>() / n;
        let var = m.as_slice().iter().map(|z| (z - mean).norm_sqr()).sum::<f64>() / n;
        let var_re = m.as_slice().iter().map(|z| (z.re - mean.re).powi(2)).sum::<f64>() / n;
        let var_im = m.as_slice().iter().map(|z| (z.im - mean.im).powi(2)).sum::<f64>() / n;
        (mean, var, var_re, var_im)
    }

    #[test]
    fn gaussian_unit_variance_statistics() {
        let m = gaussian_cmatrix(1000, 1000, 1.0, 9).unwrap();
        let (mean, var, var_re, var_im) = sample_moments(&m);
        assert!(mean.norm() < 0.01);
        assert!((0.98..=1.02).contains(&var), "var {var}");
        assert!((var_re - 0.5).abs() < 0.01 && (var_im - 0.5).abs() < 0.01);
    }

    #[test]
    fn gaussian_quarter_variance_statistics() {
        let m = gaussian_cmatrix(300, 300, 0.25, 10).unwrap();
        let (_, var, _, _) = sample_moments(&m);
        assert!((var / 0.25 - 1.0).abs() < 0.02, "var {var}");
    }
}
