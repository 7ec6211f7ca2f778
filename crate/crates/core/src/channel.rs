//! Channel realizations: i.i.d. Rayleigh, synthetic ill-conditioned, and the
//! text file format used for fixtures.
//!
//! The ill-conditioned generator recomposes `H = U diag(s) V^H` from two random
//! unitaries and a geometric singular-value profile, so the condition number
//! is set directly rather than searched for.

use std::fmt;
use std::fs;
use std::io;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, condition_number, CMatrix, LinalgError};

/// Default target condition number for the synthetic generator.
pub const DEFAULT_KAPPA: f64 = 1000.0;

/// Relative tolerance between a stored and a recomputed condition number.
const KAPPA_REL_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum ChannelError {
    #[error("channel dimension must be at least {min}, got {got}")]
    BadDimension { min: usize, got: usize },
    #[error("target condition number must be >= 1, got {0}")]
    BadKappa(f64),
    #[error("channel matrix must be square: {0}")]
    DimensionError(String),
    #[error("malformed channel file: {0}")]
    FormatError(String),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelTag {
    Rayleigh,
    SyntheticIllConditioned,
    File,
}

impl ModelTag {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelTag::Rayleigh => "rayleigh",
            ModelTag::SyntheticIllConditioned => "synthetic-ill-conditioned",
            ModelTag::File => "file",
        }
    }
}

impl fmt::Display for ModelTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelTag {
    type Err = ChannelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rayleigh" => Ok(ModelTag::Rayleigh),
            "synthetic-ill-conditioned" => Ok(ModelTag::SyntheticIllConditioned),
            "file" => Ok(ModelTag::File),
            other => Err(ChannelError::FormatError(format!("unknown model_tag {other:?}"))),
        }
    }
}

/// A square channel realization with its measured condition number.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    h: CMatrix,
    seed: u64,
    kappa: f64,
    model_tag: ModelTag,
}

impl ChannelMatrix {
    /// Wraps a square matrix, measuring its condition number.
    pub fn new(h: CMatrix, seed: u64, model_tag: ModelTag) -> Result<Self, ChannelError> {
        if !h.is_square() {
            return Err(ChannelError::DimensionError(format!("{}x{}", h.rows(), h.cols())));
        }
        let kappa = condition_number(&h);
        Ok(Self { h, seed, kappa, model_tag })
    }

    pub fn h(&self) -> &CMatrix {
        &self.h
    }

    pub fn n(&self) -> usize {
        self.h.rows()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn model_tag(&self) -> ModelTag {
        self.model_tag
    }
}

/// i.i.d. `CN(0, 1)` channel.
pub fn gen_rayleigh(n: usize, seed: u64) -> Result<ChannelMatrix, ChannelError> {
    if n == 0 {
        return Err(ChannelError::BadDimension { min: 1, got: n });
    }
    let h = linalg::gaussian_cmatrix(n, n, 1.0, seed)?;
    ChannelMatrix::new(h, seed, ModelTag::Rayleigh)
}

/// Channel with condition number `kappa_target` and unit mean squared entry.
pub fn gen_ill_conditioned(n: usize, kappa_target: f64, seed: u64) -> Result<ChannelMatrix, ChannelError> {
    if n < 2 {
        return Err(ChannelError::BadDimension { min: 2, got: n });
    }
    if !(kappa_target >= 1.0 && kappa_target.is_finite()) {
        return Err(ChannelError::BadKappa(kappa_target));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = linalg::orthonormalize_columns(&linalg::gaussian_cmatrix_with(n, n, 1.0, &mut rng)?)?;
    let v = linalg::orthonormalize_columns(&linalg::gaussian_cmatrix_with(n, n, 1.0, &mut rng)?)?;

    // s_i = kappa^(-i/(n-1)), then ||H||_F^2 = sum s_i^2 is scaled to n^2.
    let mut s: Vec<f64> = (0..n).map(|i| kappa_target.powf(-(i as f64) / (n - 1) as f64)).collect();
    let energy: f64 = s.iter().map(|x| x * x).sum();
    let scale = (n as f64) / energy.sqrt();
    s.iter_mut().for_each(|x| *x *= scale);

    let h = u.matmul(&CMatrix::from_diag(&s))?.matmul(&v.adjoint())?;
    ChannelMatrix::new(h, seed, ModelTag::SyntheticIllConditioned)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChannelFile {
    n: usize,
    seed: u64,
    model_tag: String,
    #[serde(default)]
    kappa: Option<f64>,
    h: Vec<Vec<[f64; 2]>>,
}

/// Renders the channel file. Every real number carries 17 significant digits.
pub fn channel_to_string(ch: &ChannelMatrix) -> String {
    let n = ch.n();
    let mut out = String::new();
    out.push_str("{\n");
    out.push_str(&format!("  \"n\": {n},\n"));
    out.push_str(&format!("  \"seed\": {},\n", ch.seed));
    out.push_str(&format!("  \"model_tag\": \"{}\",\n", ch.model_tag));
    out.push_str(&format!("  \"kappa\": {},\n", fmt_f64(ch.kappa)));
    out.push_str("  \"h\": [\n");
    for r in 0..n {
        let row: Vec<String> = ch.h.row(r).iter().map(|z| format!("[{}, {}]", fmt_f64(z.re), fmt_f64(z.im))).collect();
        let sep = if r + 1 < n { "," } else { "" };
        out.push_str(&format!("    [{}]{sep}\n", row.join(", ")));
    }
    out.push_str("  ]\n}\n");
    out
}

fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        // JSON has no infinity; a huge sentinel keeps the file parseable.
        "1.7976931348623157e308".to_string()
    }
}

pub fn channel_from_str(text: &str) -> Result<ChannelMatrix, ChannelError> {
    let file: ChannelFile = serde_json::from_str(text).map_err(|e| ChannelError::FormatError(e.to_string()))?;
    let tag: ModelTag = file.model_tag.parse()?;
    if file.h.len() != file.n {
        return Err(ChannelError::DimensionError(format!("n = {} but h has {} rows", file.n, file.h.len())));
    }
    if let Some(bad) = file.h.iter().position(|row| row.len() != file.n) {
        return Err(ChannelError::DimensionError(format!(
            "row {bad} has {} entries, expected {}",
            file.h[bad].len(),
            file.n
        )));
    }
    let rows: Vec<Vec<Complex64>> =
        file.h.iter().map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)).collect()).collect();
    let h = CMatrix::from_rows(&rows).map_err(|e| match e {
        LinalgError::EmptyMatrix => ChannelError::DimensionError("empty matrix".into()),
        other => ChannelError::FormatError(other.to_string()),
    })?;
    let ch = ChannelMatrix::new(h, file.seed, tag)?;
    if let Some(stored) = file.kappa {
        let agree = if ch.kappa.is_finite() {
            (stored - ch.kappa).abs() <= KAPPA_REL_TOL * ch.kappa
        } else {
            stored >= f64::MAX
        };
        if !agree {
            return Err(ChannelError::FormatError(format!(
                "stored kappa {stored} disagrees with measured {}",
                ch.kappa
            )));
        }
    }
    Ok(ch)
}

pub fn save_channel(ch: &ChannelMatrix, path: impl AsRef<Path>) -> Result<(), ChannelError> {
    let path = path.as_ref();
    crate::io::write_atomic(path, channel_to_string(ch).as_bytes())
        .map_err(|source| ChannelError::Io { path: path.display().to_string(), source })
}

pub fn load_channel(path: impl AsRef<Path>) -> Result<ChannelMatrix, ChannelError> {
    let path = path.as_ref();
    let text =
        fs::read_to_string(path).map_err(|source| ChannelError::Io { path: path.display().to_string(), source })?;
    channel_from_str(&text)
}
