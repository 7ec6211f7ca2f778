//! Monte-Carlo link simulation and SNR sweeps.
//!
//! A trial is one channel block: 400 (by default) 64-QAM symbol vectors pass
//! through `r = √p_u H x + n`, the AQNM quantizer and the MMSE combiner. The
//! channel stays fixed within a trial. Every random stream is derived from the
//! root seed and the work unit's coordinates, so results do not depend on how
//! trials are scheduled across threads.

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::allocation::{self, AllocError, GaParams, PowerModel};
use crate::channel::{self, ChannelError, ChannelMatrix};
use crate::combiner::{cost_j, mmse_combiner, CombinerError};
use crate::linalg::{complex_gaussian, CMatrix};
use crate::quantization::{BitAllocation, QuantError, QuantModel, Resolution};

/// Tag recorded in reports: MSE values are divided by the number of streams.
pub const MSE_NORMALIZATION: &str = "per-stream";

/// Default SNR grid in dB: -5 to 30 in steps of 5.
pub const DEFAULT_SNR_GRID: [f64; 8] = [-5.0, 0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0];

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid sweep configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Alloc(#[from] AllocError),
    #[error(transparent)]
    Combiner(#[from] CombinerError),
    #[error(transparent)]
    Quant(#[from] QuantError),
}

/// Allocation strategy compared in a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    OneBit,
    TwoBit,
    Infinite,
    FullSearch,
    Ga,
}

impl Scheme {
    pub const ALL: [Scheme; 5] = [Scheme::OneBit, Scheme::TwoBit, Scheme::Infinite, Scheme::FullSearch, Scheme::Ga];

    /// Expected closed-form ordering, best first.
    pub const ORDERING: [Scheme; 5] =
        [Scheme::Infinite, Scheme::FullSearch, Scheme::Ga, Scheme::TwoBit, Scheme::OneBit];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::OneBit => "one-bit",
            Scheme::TwoBit => "two-bit",
            Scheme::Infinite => "infinite",
            Scheme::FullSearch => "full-search",
            Scheme::Ga => "ga",
        }
    }

    pub fn is_search(self) -> bool {
        matches!(self, Scheme::FullSearch | Scheme::Ga)
    }

    fn fixed_allocation(self, n: usize) -> Option<BitAllocation> {
        match self {
            Scheme::OneBit => Some(BitAllocation::uniform(n, Resolution::Bits(1))),
            Scheme::TwoBit => Some(BitAllocation::uniform(n, Resolution::Bits(2))),
            Scheme::Infinite => Some(BitAllocation::uniform(n, Resolution::Infinite)),
            Scheme::FullSearch | Scheme::Ga => None,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scheme::ALL.into_iter().find(|sc| sc.as_str() == s).ok_or_else(|| format!("unknown scheme {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelModel {
    Rayleigh,
    IllConditioned,
    /// A single channel loaded from a channel file.
    File,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSpec {
    pub model: ChannelModel,
    pub seed: u64,
    pub kappa_target: f64,
    /// Draw a fresh channel per trial; otherwise every trial reuses the
    /// channel generated from `seed`.
    pub redraw: bool,
    pub path: Option<PathBuf>,
}

impl Default for ChannelSpec {
    fn default() -> Self {
        Self {
            model: ChannelModel::IllConditioned,
            seed: 1,
            kappa_target: channel::DEFAULT_KAPPA,
            redraw: true,
            path: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub n: usize,
    pub snr_db_grid: Vec<f64>,
    pub symbols_per_trial: usize,
    pub trials: usize,
    pub channel: ChannelSpec,
    pub schemes: Vec<Scheme>,
    pub ga: GaParams,
    pub pm: PowerModel,
    pub seed: u64,
}

impl SweepConfig {
    /// Test-setup defaults for `n` paths: all five schemes, 400 symbols,
    /// 100 trials, ill-conditioned channels, all-2-bit budget.
    pub fn defaults(n: usize) -> Self {
        let bset_size = PowerModel::unit(n.max(1));
        let size = allocation::enumerate_bset(n.max(1), &bset_size).map(|s| s.len()).unwrap_or(0);
        Self {
            n,
            snr_db_grid: DEFAULT_SNR_GRID.to_vec(),
            symbols_per_trial: 400,
            trials: 100,
            channel: ChannelSpec::default(),
            schemes: Scheme::ALL.to_vec(),
            ga: GaParams::defaults_for(n, size),
            pm: PowerModel::unit(n.max(1)),
            seed: 1,
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |m: String| Err(SimError::Config(m));
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        if self.snr_db_grid.is_empty() {
            return bad("snr_db_grid is empty".into());
        }
        if self.snr_db_grid.iter().any(|s| !s.is_finite()) || self.snr_db_grid.windows(2).any(|w| w[0] >= w[1]) {
            return bad("snr_db_grid must be finite and strictly increasing".into());
        }
        if self.symbols_per_trial == 0 || self.trials == 0 {
            return bad("symbols_per_trial and trials must be at least 1".into());
        }
        if self.schemes.is_empty() {
            return bad("no schemes selected".into());
        }
        let mut seen = self.schemes.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.schemes.len() {
            return bad("duplicate scheme".into());
        }
        if self.channel.model == ChannelModel::File && self.channel.path.is_none() {
            return bad("channel model \"file\" needs a path".into());
        }
        if self.schemes.contains(&Scheme::Ga) {
            self.ga.validate()?;
        }
        Ok(())
    }
}

/// One row of a sweep report.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub scheme: Scheme,
    pub snr_db: f64,
    pub mse_closed_form: f64,
    pub mse_empirical: f64,
    pub b_chosen: BitAllocation,
    pub evaluations: u64,
    pub channel_kappa: f64,
    pub seed: u64,
}

/// Per-trial allocation chosen by a scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct DetailRow {
    pub scheme: Scheme,
    pub snr_db: f64,
    pub trial: usize,
    pub channel_seed: u64,
    pub b: BitAllocation,
    pub cost: f64,
    pub evaluations: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MseReport {
    pub n: usize,
    pub normalization: &'static str,
    pub rows: Vec<ReportRow>,
    pub details: Vec<DetailRow>,
}

impl MseReport {
    pub fn row(&self, scheme: Scheme, snr_db: f64) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.scheme == scheme && r.snr_db == snr_db)
    }
}

/// Mixes a root seed with work-unit coordinates (splitmix64 finalizer).
pub fn derive_seed(root: u64, parts: &[u64]) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    parts.iter().fold(mix(root), |acc, &p| mix(acc ^ mix(p)))
}

const QAM64_SCALE: f64 = 0.154_303_349_962_091_9; // 1/sqrt(42)

/// The 64 points of square 64-QAM with unit average energy.
pub fn qam64_constellation() -> Vec<Complex64> {
    let levels = [-7.0, -5.0, -3.0, -1.0, 1.0, 3.0, 5.0, 7.0];
    levels.iter().flat_map(|&i| levels.iter().map(move |&q| Complex64::new(i, q) * QAM64_SCALE)).collect()
}

/// `n × count` matrix of uniformly drawn 64-QAM symbols.
pub fn gen_qam64<R: Rng + ?Sized>(n: usize, count: usize, rng: &mut R) -> CMatrix {
    assert!(n > 0 && count > 0, "symbol block needs positive dimensions");
    let data = (0..n * count)
        .map(|_| {
            let i = f64::from(2 * rng.gen_range(0..8) - 7);
            let q = f64::from(2 * rng.gen_range(0..8) - 7);
            Complex64::new(i, q) * QAM64_SCALE
        })
        .collect();
    CMatrix::from_vec(n, count, data).expect("finite symbols")
}

/// Sample average of `‖C^H z - x‖² / N` over `symbols × trials` vectors, with
/// the combiner built once from the closed form.
pub fn empirical_mse<R: Rng + ?Sized>(
    h: &CMatrix,
    b: &BitAllocation,
    p_u: f64,
    sigma2: f64,
    symbols: usize,
    trials: usize,
    rng: &mut R,
) -> Result<f64, SimError> {
    if symbols == 0 || trials == 0 {
        return Err(SimError::Config("symbols and trials must be at least 1".into()));
    }
    let comb = mmse_combiner(h, b, p_u, sigma2)?;
    let quant = QuantModel::new(h, b, p_u, sigma2)?;
    let n = h.rows();
    let amp = p_u.sqrt();
    let mut total = 0.0;
    for _ in 0..trials {
        let x = gen_qam64(n, symbols, rng);
        for s in 0..symbols {
            let xs: Vec<Complex64> = (0..n).map(|i| x[(i, s)]).collect();
            let mut r = h.mul_vec(&xs).expect("square channel");
            for ri in &mut r {
                *ri = *ri * amp + complex_gaussian(rng, sigma2);
            }
            let z = quant.apply(&r, rng)?;
            let y = comb.c.adjoint_mul_vec(&z).expect("square combiner");
            total += y.iter().zip(&xs).map(|(y, x)| (y - x).norm_sqr()).sum::<f64>();
        }
    }
    Ok(total / (symbols * trials * n) as f64)
}

struct SchemeTrial {
    b: BitAllocation,
    cost: f64,
    mse_empirical: f64,
    evaluations: u64,
}

fn trial_channel(cfg: &SweepConfig, trial: usize, fixed: Option<&ChannelMatrix>) -> Result<ChannelMatrix, SimError> {
    if let Some(ch) = fixed {
        return Ok(ch.clone());
    }
    let spec = &cfg.channel;
    let seed = if spec.redraw { derive_seed(spec.seed, &[trial as u64]) } else { spec.seed };
    Ok(match spec.model {
        ChannelModel::Rayleigh => channel::gen_rayleigh(cfg.n, seed)?,
        ChannelModel::IllConditioned => channel::gen_ill_conditioned(cfg.n, spec.kappa_target, seed)?,
        ChannelModel::File => unreachable!("file channels are loaded once"),
    })
}

#[allow(clippy::too_many_arguments)]
fn run_trial(
    cfg: &SweepConfig,
    bset: Option<&[BitAllocation]>,
    ch: &ChannelMatrix,
    snr_idx: usize,
    trial: usize,
    p_u: f64,
    sigma2: f64,
) -> Result<Vec<SchemeTrial>, SimError> {
    let h = ch.h();
    cfg.schemes
        .iter()
        .map(|&scheme| {
            let (b, cost, evaluations) = match scheme.fixed_allocation(cfg.n) {
                Some(b) => {
                    let j = cost_j(h, &b, p_u, sigma2)?;
                    (b, j, 0)
                }
                None => {
                    let bset = bset.expect("feasible set enumerated for search schemes");
                    let out = if scheme == Scheme::FullSearch {
                        allocation::full_search_over(h, p_u, sigma2, bset)?
                    } else {
                        let ga = GaParams { seed: derive_seed(cfg.ga.seed, &[snr_idx as u64, trial as u64]), ..cfg.ga };
                        allocation::ga_search_over(h, p_u, sigma2, &cfg.pm, &ga, bset, |_| {})?
                    };
                    (out.b_star, out.j_star, out.evaluations as u64)
                }
            };
            // Common random numbers: every scheme and SNR point of a trial
            // sees the same symbols and noise stream.
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, &[trial as u64]));
            let mse_empirical = empirical_mse(h, &b, p_u, sigma2, cfg.symbols_per_trial, 1, &mut rng)?;
            Ok(SchemeTrial { b, cost, mse_empirical, evaluations })
        })
        .collect()
}

/// Most frequent allocation; ties go to the lexicographically smallest.
fn modal(bs: &[&BitAllocation]) -> BitAllocation {
    let mut counts: HashMap<&BitAllocation, usize> = HashMap::new();
    for b in bs {
        *counts.entry(b).or_default() += 1;
    }
    counts
        .into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.cmp(a.0)))
        .map(|(b, _)| b.clone())
        .expect("at least one trial")
}

/// Runs every scheme at every SNR point. The report is a pure function of
/// `cfg`.
pub fn run_sweep(cfg: &SweepConfig) -> Result<MseReport, SimError> {
    cfg.validate()?;
    let sigma2 = 1.0;
    let fixed = match cfg.channel.model {
        ChannelModel::File => {
            let ch = channel::load_channel(cfg.channel.path.as_ref().expect("validated"))?;
            if ch.n() != cfg.n {
                return Err(SimError::Config(format!("channel file has n = {}, config has n = {}", ch.n(), cfg.n)));
            }
            Some(ch)
        }
        _ => None,
    };
    let channels: Vec<ChannelMatrix> =
        (0..cfg.trials).into_par_iter().map(|t| trial_channel(cfg, t, fixed.as_ref())).collect::<Result<_, _>>()?;
    let bset = if cfg.schemes.iter().any(|s| s.is_search()) {
        Some(allocation::enumerate_bset(cfg.n, &cfg.pm)?)
    } else {
        None
    };
    let mean_kappa = channels.iter().map(ChannelMatrix::kappa).sum::<f64>() / cfg.trials as f64;
    let per_stream = cfg.n as f64;

    let mut rows = Vec::new();
    let mut details = Vec::new();
    for (snr_idx, &snr_db) in cfg.snr_db_grid.iter().enumerate() {
        let p_u = 10f64.powf(snr_db / 10.0);
        let trials: Vec<Vec<SchemeTrial>> = channels
            .par_iter()
            .enumerate()
            .map(|(t, ch)| run_trial(cfg, bset.as_deref(), ch, snr_idx, t, p_u, sigma2))
            .collect::<Result<_, _>>()?;

        for (s_idx, &scheme) in cfg.schemes.iter().enumerate() {
            let results: Vec<&SchemeTrial> = trials.iter().map(|t| &t[s_idx]).collect();
            let count = results.len() as f64;
            let closed = results.iter().map(|r| r.cost).sum::<f64>() / count / per_stream;
            let empirical = results.iter().map(|r| r.mse_empirical).sum::<f64>() / count;
            let evaluations = (results.iter().map(|r| r.evaluations).sum::<u64>() as f64 / count).round() as u64;
            let b_chosen = modal(&results.iter().map(|r| &r.b).collect::<Vec<_>>());
            rows.push(ReportRow {
                scheme,
                snr_db,
                mse_closed_form: closed,
                mse_empirical: empirical,
                b_chosen,
                evaluations,
                channel_kappa: mean_kappa,
                seed: cfg.seed,
            });
            for (t, r) in results.iter().enumerate() {
                details.push(DetailRow {
                    scheme,
                    snr_db,
                    trial: t,
                    channel_seed: channels[t].seed(),
                    b: r.b.clone(),
                    cost: r.cost / per_stream,
                    evaluations: r.evaluations,
                });
            }
        }
    }
    Ok(MseReport { n: cfg.n, normalization: MSE_NORMALIZATION, rows, details })
}

/// Checks `infinite ≤ full-search ≤ ga ≤ two-bit ≤ one-bit` on the
/// closed-form column at every SNR present, for the schemes present.
pub fn check_ordering(rows: &[ReportRow], tol: f64) -> Result<(), Vec<String>> {
    let mut snrs: Vec<f64> = rows.iter().map(|r| r.snr_db).collect();
    snrs.sort_by(f64::total_cmp);
    snrs.dedup();
    let mut violations = Vec::new();
    for snr in snrs {
        let chain: Vec<&ReportRow> =
            Scheme::ORDERING.iter().filter_map(|&s| rows.iter().find(|r| r.scheme == s && r.snr_db == snr)).collect();
        for w in chain.windows(2) {
            if w[0].mse_closed_form > w[1].mse_closed_form + tol {
                violations.push(format!(
                    "snr {snr} dB: {} ({:.6e}) > {} ({:.6e})",
                    w[0].scheme, w[0].mse_closed_form, w[1].scheme, w[1].mse_closed_form
                ));
            }
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}
