//! Closed-form MMSE combiner under AQNM quantization.
//!
//! With unit-power symbols and `r = √p_u H x + n`, the quantized vector
//! `z = W_α r + n_q` has
//!
//! ```text
//! R_zx = √p_u W_α H
//! R_zz = p_u W_α H H^H W_α + σ² W_α² + R_nq
//! ```
//!
//! and the combiner `C = R_zz⁻¹ R_zx` (applied as `C^H z`) leaves the error
//! covariance `I - R_zx^H R_zz⁻¹ R_zx`, whose trace is the cost `J(b)`.

use thiserror::Error;

use crate::linalg::{hermitian_solve, CMatrix, LinalgError};
use crate::quantization::{quant_noise_cov, BitAllocation, QuantError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CombinerError {
    #[error(transparent)]
    Quant(#[from] QuantError),
    #[error("R_zz is not positive definite: {0}")]
    NotPositiveDefinite(LinalgError),
    #[error(transparent)]
    Linalg(LinalgError),
}

impl From<LinalgError> for CombinerError {
    fn from(e: LinalgError) -> Self {
        match e {
            LinalgError::NotPositiveDefinite { .. } => CombinerError::NotPositiveDefinite(e),
            other => CombinerError::Linalg(other),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CombinerResult {
    /// Combiner `C`; the estimate is `C^H z`.
    pub c: CMatrix,
    /// `J(b)`, the total (not per-stream) error power.
    pub mse: f64,
    pub r_zz: CMatrix,
    pub r_zx: CMatrix,
}

fn check_dims(h: &CMatrix, b: &BitAllocation) -> Result<(), QuantError> {
    if !h.is_square() || h.rows() != b.len() {
        return Err(QuantError::DimensionMismatch(format!(
            "channel {}x{} with {} bit entries",
            h.rows(),
            h.cols(),
            b.len()
        )));
    }
    Ok(())
}

pub fn cross_cov_zx(h: &CMatrix, b: &BitAllocation, p_u: f64) -> Result<CMatrix, CombinerError> {
    check_dims(h, b)?;
    if !(p_u > 0.0 && p_u.is_finite()) {
        return Err(QuantError::BadParameter { name: "p_u", value: p_u }.into());
    }
    let gains: Vec<f64> = b.alphas().iter().map(|a| a * p_u.sqrt()).collect();
    Ok(h.scale_rows(&gains))
}

pub fn cov_zz(h: &CMatrix, b: &BitAllocation, p_u: f64, sigma2: f64) -> Result<CMatrix, CombinerError> {
    check_dims(h, b)?;
    let r_nq = quant_noise_cov(h, b, p_u, sigma2)?;
    let alphas = b.alphas();
    let wh = h.scale_rows(&alphas);
    let mut r_zz = wh.matmul(&wh.adjoint())?.scale(p_u);
    for (i, (a, q)) in alphas.iter().zip(&r_nq).enumerate() {
        r_zz[(i, i)] += sigma2 * a * a + q;
    }
    let r_zz = r_zz.hermitian_part();
    // The solve checks definiteness; a non-positive diagonal fails early.
    if let Some(i) = (0..r_zz.rows()).find(|&i| r_zz[(i, i)].re <= 0.0) {
        return Err(CombinerError::NotPositiveDefinite(LinalgError::NotPositiveDefinite {
            step: i,
            pivot: r_zz[(i, i)].re,
        }));
    }
    Ok(r_zz)
}

pub fn mmse_combiner(h: &CMatrix, b: &BitAllocation, p_u: f64, sigma2: f64) -> Result<CombinerResult, CombinerError> {
    let r_zx = cross_cov_zx(h, b, p_u)?;
    let r_zz = cov_zz(h, b, p_u, sigma2)?;
    let c = hermitian_solve(&r_zz, &r_zx)?;
    // trace(R_zx^H R_zz^-1 R_zx) = sum_ij conj(R_zx[i,j]) * C[i,j]
    let explained: f64 = r_zx.as_slice().iter().zip(c.as_slice()).map(|(a, x)| (a.conj() * x).re).sum();
    let n = h.rows() as f64;
    let mse = (n - explained).max(0.0);
    Ok(CombinerResult { c, mse, r_zz, r_zx })
}

/// `J(b)`: closed-form expected squared error of the MMSE combiner.
pub fn cost_j(h: &CMatrix, b: &BitAllocation, p_u: f64, sigma2: f64) -> Result<f64, CombinerError> {
    Ok(mmse_combiner(h, b, p_u, sigma2)?.mse)
}
