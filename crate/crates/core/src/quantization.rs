//! Additive quantization noise model (AQNM) with per-path resolution.
//!
//! A `b`-bit ADC on path `i` is replaced by `z_i = α_i r_i + n_q,i` where
//! `α_i = 1 - β(b_i)` and `n_q` is Gaussian, uncorrelated with `r`, with
//! diagonal covariance `α β diag(p_u H H^H + σ² I)`.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

use crate::linalg::{complex_gaussian, CMatrix};

/// Distortion factors of the non-uniform MMSE quantizer for 1..=5 bits.
pub const BETA_TABLE: [f64; 5] = [0.3634, 0.1175, 0.03454, 0.009497, 0.002499];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantError {
    #[error("invalid ADC resolution {0} (must be >= 1)")]
    BadResolution(i64),
    #[error("cannot parse resolution {0:?}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{name} must be positive and finite, got {value}")]
    BadParameter { name: &'static str, value: f64 },
}

/// Resolution of one ADC pair (bits per I and per Q component).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Resolution {
    Bits(u32),
    /// Unquantized path: `α = 1`, `β = 0` exactly.
    Infinite,
}

impl Resolution {
    pub fn bits(b: i64) -> Result<Self, QuantError> {
        if b < 1 || b > i64::from(u32::MAX) {
            return Err(QuantError::BadResolution(b));
        }
        Ok(Resolution::Bits(b as u32))
    }

    pub fn as_bits(self) -> Option<u32> {
        match self {
            Resolution::Bits(b) => Some(b),
            Resolution::Infinite => None,
        }
    }
}

impl fmt::Display for Resolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Resolution::Bits(b) => write!(f, "{b}"),
            Resolution::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Resolution {
    type Err = QuantError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "inf" {
            return Ok(Resolution::Infinite);
        }
        let b: i64 = s.parse().map_err(|_| QuantError::Parse(s.to_string()))?;
        Resolution::bits(b)
    }
}

/// `β(b)`: tabulated for 1..=5 bits, `(π√3/2)·2^(-2b)` above, zero when
/// unquantized.
pub fn beta(res: Resolution) -> Result<f64, QuantError> {
    match res {
        Resolution::Infinite => Ok(0.0),
        Resolution::Bits(0) => Err(QuantError::BadResolution(0)),
        Resolution::Bits(b @ 1..=5) => Ok(BETA_TABLE[b as usize - 1]),
        Resolution::Bits(b) => Ok(PI * 3f64.sqrt() / 2.0 * (-2.0 * f64::from(b)).exp2()),
    }
}

pub fn alpha(res: Resolution) -> Result<f64, QuantError> {
    Ok(match res {
        Resolution::Infinite => 1.0,
        r => 1.0 - beta(r)?,
    })
}

/// Per-path ADC resolutions. Orders lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitAllocation(Vec<Resolution>);

impl BitAllocation {
    pub fn new(res: Vec<Resolution>) -> Result<Self, QuantError> {
        if res.is_empty() {
            return Err(QuantError::DimensionMismatch("empty bit allocation".into()));
        }
        if res.contains(&Resolution::Bits(0)) {
            return Err(QuantError::BadResolution(0));
        }
        Ok(Self(res))
    }

    pub fn from_bits(bits: &[u32]) -> Result<Self, QuantError> {
        Self::new(bits.iter().map(|&b| Resolution::Bits(b)).collect())
    }

    pub fn uniform(n: usize, res: Resolution) -> Self {
        assert!(n > 0 && res != Resolution::Bits(0));
        Self(vec![res; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn resolutions(&self) -> &[Resolution] {
        &self.0
    }

    /// Integer bit counts, or `None` if any path is unquantized.
    pub fn finite_bits(&self) -> Option<Vec<u32>> {
        self.0.iter().map(|r| r.as_bits()).collect()
    }

    pub fn is_uniform(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }

    pub fn alphas(&self) -> Vec<f64> {
        self.0.iter().map(|&r| alpha(r).expect("validated on construction")).collect()
    }

    pub fn betas(&self) -> Vec<f64> {
        self.0.iter().map(|&r| beta(r).expect("validated on construction")).collect()
    }
}

impl fmt::Display for BitAllocation {
    /// Dash-separated, e.g. `1-2-inf`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("-")?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

impl FromStr for BitAllocation {
    type Err = QuantError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let res = s.split('-').map(str::parse).collect::<Result<Vec<Resolution>, _>>()?;
        Self::new(res)
    }
}

/// `diag(α_1, …, α_N)` as its diagonal.
pub fn alpha_matrix(b: &BitAllocation) -> Vec<f64> {
    b.alphas()
}

fn check_positive(name: &'static str, value: f64) -> Result<(), QuantError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(QuantError::BadParameter { name, value })
    }
}

/// Diagonal of `W_α W_{1-α} diag(p_u H H^H + σ² I)`.
pub fn quant_noise_cov(h: &CMatrix, b: &BitAllocation, p_u: f64, sigma2: f64) -> Result<Vec<f64>, QuantError> {
    check_positive("p_u", p_u)?;
    check_positive("sigma2", sigma2)?;
    if !h.is_square() || h.rows() != b.len() {
        return Err(QuantError::DimensionMismatch(format!(
            "channel {}x{} with {} bit entries",
            h.rows(),
            h.cols(),
            b.len()
        )));
    }
    Ok((0..h.rows())
        .zip(b.alphas().into_iter().zip(b.betas()))
        .map(|(i, (a, be))| {
            let row_power: f64 = h.row(i).iter().map(|z| z.norm_sqr()).sum();
            a * be * (p_u * row_power + sigma2)
        })
        .collect())
}

/// Gains and quantization-noise variances for one `(H, b, p_u, σ²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantModel {
    pub w_alpha: Vec<f64>,
    pub r_nq: Vec<f64>,
}

impl QuantModel {
    pub fn new(h: &CMatrix, b: &BitAllocation, p_u: f64, sigma2: f64) -> Result<Self, QuantError> {
        let r_nq = quant_noise_cov(h, b, p_u, sigma2)?;
        Ok(Self { w_alpha: alpha_matrix(b), r_nq })
    }

    pub fn n(&self) -> usize {
        self.w_alpha.len()
    }

    /// `W_α r + n_q` with a fresh noise draw from `rng`.
    pub fn apply<R: Rng + ?Sized>(&self, r: &[Complex64], rng: &mut R) -> Result<Vec<Complex64>, QuantError> {
        if r.len() != self.n() {
            return Err(QuantError::DimensionMismatch(format!(
                "received vector of length {} for {} paths",
                r.len(),
                self.n()
            )));
        }
        Ok(r.iter()
            .zip(self.w_alpha.iter().zip(&self.r_nq))
            .map(|(&ri, (&a, &var))| if var == 0.0 { ri * a } else { ri * a + complex_gaussian(rng, var) })
            .collect())
    }
}

/// Quantizes `r` through the AQNM surrogate for `(H, b, p_u, σ²)`.
pub fn quantize<R: Rng + ?Sized>(
    r: &[Complex64],
    h: &CMatrix,
    b: &BitAllocation,
    p_u: f64,
    sigma2: f64,
    rng: &mut R,
) -> Result<Vec<Complex64>, QuantError> {
    QuantModel::new(h, b, p_u, sigma2)?.apply(r, rng)
}

/// Lexicographic comparison helper for `(cost, allocation)` pairs.
pub(crate) fn cmp_cost_then_bits(a: (f64, &BitAllocation), b: (f64, &BitAllocation)) -> Ordering {
    a.0.total_cmp(&b.0).then_with(|| a.1.cmp(b.1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bits(b: u32) -> Resolution {
        Resolution::Bits(b)
    }

    #[test]
    fn beta_table_values() {
        assert_eq!(beta(bits(1)).unwrap(), 0.3634);
        assert_eq!(beta(bits(2)).unwrap(), 0.1175);
        assert_eq!(beta(bits(4)).unwrap(), 0.009497);
        assert_eq!(beta(bits(5)).unwrap(), 0.002499);
        assert_eq!(beta(Resolution::Infinite).unwrap(), 0.0);
        assert_eq!(beta(bits(0)), Err(QuantError::BadResolution(0)));
    }

    #[test]
    fn beta_formula_above_table() {
        // pi*sqrt(3)/2 * 2^-24 evaluated independently
        let want = 1.6216630019851485e-07;
        assert!((beta(bits(12)).unwrap() - want).abs() < 1e-20);
        assert!(beta(bits(5)).unwrap() > beta(bits(6)).unwrap());
    }

    #[test]
    fn beta_monotone_and_alpha_complement() {
        let mut prev_b = f64::INFINITY;
        let mut prev_a = f64::NEG_INFINITY;
        for b in 1..=20 {
            let be = beta(bits(b)).unwrap();
            let a = alpha(bits(b)).unwrap();
            assert!(be < prev_b && a > prev_a);
            assert_eq!(a + be, 1.0);
            prev_b = be;
            prev_a = a;
        }
    }

    #[test]
    fn alpha_matrices() {
        assert_eq!(alpha_matrix(&BitAllocation::uniform(3, Resolution::Infinite)), vec![1.0; 3]);
        let a = alpha_matrix(&BitAllocation::from_bits(&[1, 1]).unwrap());
        assert!(a.iter().all(|x| (x - (1.0 - 0.3634)).abs() < 1e-12));
        let a = alpha_matrix(&BitAllocation::from_bits(&[2, 4]).unwrap());
        assert!((a[0] - 0.8825).abs() < 1e-12 && (a[1] - 0.990503).abs() < 1e-12);
    }

    #[test]
    fn noise_cov_cases() {
        let inf = BitAllocation::uniform(2, Resolution::Infinite);
        let h = CMatrix::identity(2);
        assert_eq!(quant_noise_cov(&h, &inf, 1.0, 1.0).unwrap(), vec![0.0, 0.0]);

        let one = quant_noise_cov(&CMatrix::identity(1), &BitAllocation::from_bits(&[1]).unwrap(), 1.0, 1.0).unwrap();
        assert!((one[0] - 0.46268088).abs() < 1e-12);

        let two = quant_noise_cov(&h, &BitAllocation::from_bits(&[1, 2]).unwrap(), 1.0, 1.0).unwrap();
        assert!((two[0] - 0.46268088).abs() < 1e-12);
        assert!((two[1] - 0.2073875).abs() < 1e-12);
    }

    #[test]
    fn noise_cov_errors() {
        let b = BitAllocation::from_bits(&[1, 2]).unwrap();
        assert!(matches!(quant_noise_cov(&CMatrix::identity(3), &b, 1.0, 1.0), Err(QuantError::DimensionMismatch(_))));
        assert!(matches!(
            quant_noise_cov(&CMatrix::identity(2), &b, 0.0, 1.0),
            Err(QuantError::BadParameter { name: "p_u", .. })
        ));
    }

    #[test]
    fn allocation_parse_and_display() {
        let b: BitAllocation = "1-2-inf".parse().unwrap();
        assert_eq!(b.resolutions(), &[bits(1), bits(2), Resolution::Infinite]);
        assert_eq!(b.to_string(), "1-2-inf");
        assert!("1-0".parse::<BitAllocation>().is_err());
        assert!("".parse::<BitAllocation>().is_err());
        assert!(BitAllocation::from_bits(&[1, 2]).unwrap() < BitAllocation::from_bits(&[2, 1]).unwrap());
    }

    #[test]
    fn infinite_quantize_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = vec![Complex64::new(0.3, -1.0), Complex64::new(2.0, 0.5)];
        let z =
            quantize(&r, &CMatrix::identity(2), &BitAllocation::uniform(2, Resolution::Infinite), 3.0, 1.0, &mut rng)
                .unwrap();
        assert_eq!(z, r);
    }

    #[test]
    fn one_bit_quantize_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let h = CMatrix::identity(2);
        let b = BitAllocation::uniform(2, bits(1));
        let model = QuantModel::new(&h, &b, 1.0, 1.0).unwrap();
        let r = vec![Complex64::new(1.5, -0.5), Complex64::new(-2.0, 1.0)];
        let draws = 100_000;
        let mut mean = [Complex64::new(0.0, 0.0); 2];
        for _ in 0..draws {
            for (m, z) in mean.iter_mut().zip(model.apply(&r, &mut rng).unwrap()) {
                *m += z;
            }
        }
        for (m, ri) in mean.iter().zip(&r) {
            let m = m / draws as f64;
            let want = ri * (1.0 - 0.3634);
            assert!((m - want).norm() / want.norm() < 0.01, "{m} vs {want}");
        }
    }

    #[test]
    fn quantization_noise_covariance_matches_model() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = crate::linalg::gaussian_cmatrix(8, 8, 1.0, 4).unwrap();
        let b = BitAllocation::from_bits(&[1, 2, 3, 4, 1, 2, 3, 4]).unwrap();
        let model = QuantModel::new(&h, &b, 10.0, 1.0).unwrap();
        let r = vec![Complex64::new(1.0, 1.0); 8];
        let draws = 100_000;
        let mut acc = [0.0; 8];
        let mut cross = Complex64::new(0.0, 0.0);
        for _ in 0..draws {
            let z = model.apply(&r, &mut rng).unwrap();
            let e: Vec<Complex64> = z.iter().zip(&r).zip(&model.w_alpha).map(|((z, r), a)| z - r * a).collect();
            for (s, e) in acc.iter_mut().zip(&e) {
                *s += e.norm_sqr();
            }
            cross += e[0] * e[1].conj();
        }
        for (s, want) in acc.iter().zip(&model.r_nq) {
            let got = s / draws as f64;
            assert!((got / want - 1.0).abs() < 0.03, "{got} vs {want}");
        }
        let off = (cross / draws as f64).norm();
        assert!(off < 0.03 * (model.r_nq[0] * model.r_nq[1]).sqrt());
    }

    #[test]
    fn apply_checks_length() {
        let model = QuantModel::new(&CMatrix::identity(2), &BitAllocation::uniform(2, bits(2)), 1.0, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(model.apply(&[Complex64::new(1.0, 0.0)], &mut rng).is_err());
    }
}
