//! The `adcalloc` command line: channel generation, allocation search,
//! feasible-set enumeration, SNR sweeps and report verification.
//!
//! Sweep configuration is a flat TOML document with a mandatory `schema = 1`
//! field. Unknown keys are rejected. Command-line flags override file values.
//!
//! ```toml
//! schema = 1
//! n = 8
//! snr_db_grid = [-5.0, 0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0]
//! symbols_per_trial = 400
//! trials = 100
//! seed = 1
//! threads = 0                       # 0: one worker per core
//! schemes = ["one-bit", "two-bit", "infinite", "full-search", "ga"]
//!
//! [channel]
//! model = "ill-conditioned"         # or "rayleigh", "file"
//! seed = 1
//! kappa_target = 1000.0
//! redraw = true
//! # path = "h.chan"                 # with model = "file"
//!
//! [ga]                              # k defaults to 64 (n = 8) or 400 (n = 12)
//! l = 4
//! t = 0.001
//! p_cross = 0.9
//! p_mut = 0.1
//! seed = 0
//!
//! [power]                           # budget defaults to c * n * f_s * 4
//! c = 1.0
//! f_s = 1.0
//!
//! [output]
//! dir = "."
//! report = "mse_report.csv"
//! plot = "mse_plot.csv"
//! # detail = "mse_detail.csv"
//! ```

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::allocation::{self, GaParams, PowerModel, SearchOutcome};
use crate::channel::{self, DEFAULT_KAPPA};
use crate::io::write_atomic;
use crate::quantization::BitAllocation;
use crate::simulation::{self, check_ordering, ChannelModel, ChannelSpec, MseReport, ReportRow, Scheme, SweepConfig};

pub const SCHEMA_VERSION: u32 = 1;

/// Tie tolerance used by `verify-report` unless overridden.
pub const ORDERING_TOL: f64 = 1e-9;

/// Full-search evaluation counts listed in the published results table for
/// the all-2-bit budget, kept for comparison against the enumeration.
pub const TABULATED_FULL_SEARCH: [(usize, usize); 2] = [(8, 1878), (12, 133_253)];

#[derive(Debug, Parser)]
#[command(name = "adcalloc", version, about = "Quantization-aware MMSE combining and ADC bit allocation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a channel realization and write it to a channel file.
    GenChannel(GenChannelArgs),
    /// Find the optimal bit allocation for a channel at one SNR.
    Allocate(AllocateArgs),
    /// Count (and optionally list) the feasible allocations.
    Enumerate(EnumerateArgs),
    /// Run an MSE-vs-SNR sweep and write the report files.
    Sweep(SweepArgs),
    /// Check the curve ordering of a sweep report.
    VerifyReport(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenModel {
    IllConditioned,
    Rayleigh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Full,
    Ga,
}

#[derive(Debug, Args)]
pub struct GenChannelArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    /// Target condition number (ill-conditioned model only).
    #[arg(long, default_value_t = DEFAULT_KAPPA)]
    pub kappa: f64,
    #[arg(long, value_enum, default_value_t = GenModel::IllConditioned)]
    pub model: GenModel,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PowerArgs {
    /// Power per conversion step.
    #[arg(long = "c", default_value_t = 1.0)]
    pub c: f64,
    /// Sampling rate in Hz.
    #[arg(long = "f-s", default_value_t = 1.0)]
    pub f_s: f64,
    /// ADC power budget; defaults to 2-bit ADCs on every path.
    #[arg(long)]
    pub budget: Option<f64>,
}

impl PowerArgs {
    fn model(&self, n: usize) -> Result<PowerModel> {
        Ok(match self.budget {
            Some(b) => PowerModel::new(self.c, self.f_s, b)?,
            None => PowerModel::all_two_bit(n, self.c, self.f_s)?,
        })
    }
}

#[derive(Debug, Args)]
pub struct AllocateArgs {
    #[arg(long)]
    pub channel: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub snr_db: f64,
    #[arg(long, value_enum, default_value_t = Method::Full)]
    pub method: Method,
    /// GA seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub l: Option<usize>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub p_cross: Option<f64>,
    #[arg(long)]
    pub p_mut: Option<f64>,
    #[command(flatten)]
    pub power: PowerArgs,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n: u64,
    #[command(flatten)]
    pub power: PowerArgs,
    /// Also print every feasible allocation, in lexicographic order.
    #[arg(long)]
    pub list: bool,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub symbols: Option<usize>,
    /// Worker threads; 0 uses one per core.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Comma-separated scheme list.
    #[arg(long, value_delimiter = ',')]
    pub schemes: Option<Vec<Scheme>>,
    /// Comma-separated SNR grid in dB.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub snr_db: Option<Vec<f64>>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write per-trial allocations to this file name.
    #[arg(long)]
    pub detail: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    #[arg(long, short)]
    pub quiet: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub report: PathBuf,
    #[arg(long, default_value_t = ORDERING_TOL)]
    pub tol: f64,
}

/// Sweep configuration file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: u32,
    pub n: Option<usize>,
    pub snr_db_grid: Option<Vec<f64>>,
    pub symbols_per_trial: Option<usize>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub verbosity: Option<u8>,
    pub schemes: Option<Vec<Scheme>>,
    pub channel: Option<ChannelSection>,
    pub ga: Option<GaSection>,
    pub power: Option<PowerSection>,
    pub output: Option<OutputSection>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSection {
    pub model: Option<ChannelModel>,
    pub seed: Option<u64>,
    pub kappa_target: Option<f64>,
    pub redraw: Option<bool>,
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaSection {
    pub k: Option<usize>,
    pub l: Option<usize>,
    pub t: Option<f64>,
    pub p_cross: Option<f64>,
    pub p_mut: Option<f64>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerSection {
    pub c: Option<f64>,
    pub f_s: Option<f64>,
    pub budget: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
    pub report: Option<String>,
    pub plot: Option<String>,
    pub detail: Option<String>,
}

/// Where a sweep writes its files.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputPaths {
    pub report: PathBuf,
    pub plot: PathBuf,
    pub detail: Option<PathBuf>,
}

/// A fully resolved sweep invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedRun {
    pub sweep: SweepConfig,
    pub output: OutputPaths,
    pub threads: usize,
    pub verbosity: u8,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).context("invalid sweep config")?;
        if cfg.schema != SCHEMA_VERSION {
            bail!("unsupported config schema {} (expected {SCHEMA_VERSION})", cfg.schema);
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    /// Fills every unset field with its default.
    pub fn resolve(&self) -> Result<ResolvedRun> {
        let n = self.n.unwrap_or(8);
        if n == 0 {
            bail!("n must be at least 1");
        }
        let mut sweep = SweepConfig::defaults(n);
        if let Some(g) = &self.snr_db_grid {
            sweep.snr_db_grid = g.clone();
        }
        if let Some(s) = self.symbols_per_trial {
            sweep.symbols_per_trial = s;
        }
        if let Some(t) = self.trials {
            sweep.trials = t;
        }
        if let Some(s) = self.seed {
            sweep.seed = s;
        }
        if let Some(s) = &self.schemes {
            sweep.schemes = s.clone();
        }
        let ch = self.channel.clone().unwrap_or_default();
        let default_ch = ChannelSpec::default();
        sweep.channel = ChannelSpec {
            model: ch.model.unwrap_or(if ch.path.is_some() { ChannelModel::File } else { default_ch.model }),
            seed: ch.seed.unwrap_or(default_ch.seed),
            kappa_target: ch.kappa_target.unwrap_or(default_ch.kappa_target),
            redraw: ch.redraw.unwrap_or(default_ch.redraw),
            path: ch.path,
        };
        let pw = self.power.clone().unwrap_or_default();
        let (c, f_s) = (pw.c.unwrap_or(1.0), pw.f_s.unwrap_or(1.0));
        sweep.pm = match pw.budget {
            Some(b) => PowerModel::new(c, f_s, b)?,
            None => PowerModel::all_two_bit(n, c, f_s)?,
        };
        let bset_size = allocation::enumerate_bset(n, &sweep.pm).map(|s| s.len()).unwrap_or(0);
        let g = self.ga.clone().unwrap_or_default();
        let base = GaParams::defaults_for(n, bset_size);
        sweep.ga = GaParams {
            k: g.k.unwrap_or(base.k),
            l: g.l.unwrap_or(base.l),
            t: g.t.unwrap_or(base.t),
            p_cross: g.p_cross.unwrap_or(base.p_cross),
            p_mut: g.p_mut.unwrap_or(base.p_mut),
            seed: g.seed.unwrap_or(base.seed),
        };
        let out = self.output.clone().unwrap_or_default();
        let dir = out.dir.unwrap_or_else(|| PathBuf::from("."));
        let output = OutputPaths {
            report: dir.join(out.report.unwrap_or_else(|| "mse_report.csv".into())),
            plot: dir.join(out.plot.unwrap_or_else(|| "mse_plot.csv".into())),
            detail: out.detail.map(|d| dir.join(d)),
        };
        Ok(ResolvedRun { sweep, output, threads: self.threads.unwrap_or(0), verbosity: self.verbosity.unwrap_or(1) })
    }
}

impl SweepArgs {
    fn apply_to(&self, cfg: &mut RunConfig) {
        macro_rules! set {
            ($field:ident, $value:expr) => {
                if let Some(v) = $value.clone() {
                    cfg.$field = Some(v);
                }
            };
        }
        set!(n, self.n);
        set!(seed, self.seed);
        set!(trials, self.trials);
        set!(symbols_per_trial, self.symbols);
        set!(threads, self.threads);
        set!(schemes, self.schemes);
        set!(snr_db_grid, self.snr_db);
        if self.quiet {
            cfg.verbosity = Some(0);
        }
        if self.out.is_some() || self.detail.is_some() {
            let out = cfg.output.get_or_insert_with(Default::default);
            if let Some(d) = &self.out {
                out.dir = Some(d.clone());
            }
            if let Some(d) = &self.detail {
                out.detail = Some(d.clone());
            }
        }
    }
}

/// Renders a float so that parsing it back yields the same value.
fn num(x: f64) -> String {
    format!("{x}")
}

pub const REPORT_HEADER: [&str; 8] =
    ["scheme", "snr_db", "mse_closed_form", "mse_empirical", "b_chosen", "evaluations", "channel_kappa", "seed"];

pub fn report_csv(report: &MseReport) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(REPORT_HEADER)?;
    for r in &report.rows {
        w.write_record([
            r.scheme.as_str().to_string(),
            num(r.snr_db),
            num(r.mse_closed_form),
            num(r.mse_empirical),
            r.b_chosen.to_string(),
            r.evaluations.to_string(),
            num(r.channel_kappa),
            r.seed.to_string(),
        ])?;
    }
    w.into_inner().map_err(|e| anyhow!("{e}"))
}

/// Long-format plot data: one `(scheme, snr_db, mse)` row per point, using
/// the closed-form MSE.
pub fn plot_csv(report: &MseReport) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["scheme", "snr_db", "mse"])?;
    for r in &report.rows {
        w.write_record([r.scheme.as_str().to_string(), num(r.snr_db), num(r.mse_closed_form)])?;
    }
    w.into_inner().map_err(|e| anyhow!("{e}"))
}

pub fn detail_csv(report: &MseReport) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["scheme", "snr_db", "trial", "channel_seed", "b", "mse_closed_form", "evaluations"])?;
    for d in &report.details {
        w.write_record([
            d.scheme.as_str().to_string(),
            num(d.snr_db),
            d.trial.to_string(),
            d.channel_seed.to_string(),
            d.b.to_string(),
            num(d.cost),
            d.evaluations.to_string(),
        ])?;
    }
    w.into_inner().map_err(|e| anyhow!("{e}"))
}

/// Parses a report written by [`report_csv`].
pub fn parse_report_csv(bytes: &[u8]) -> Result<Vec<ReportRow>> {
    let mut r = csv::Reader::from_reader(bytes);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != REPORT_HEADER {
        bail!("unexpected report header {header:?}");
    }
    r.records()
        .enumerate()
        .map(|(i, rec)| {
            let rec = rec?;
            let field =
                |j: usize| rec.get(j).ok_or_else(|| anyhow!("row {}: missing column {}", i + 1, REPORT_HEADER[j]));
            let float = |j: usize| -> Result<f64> {
                field(j)?.parse().with_context(|| format!("row {}: bad {}", i + 1, REPORT_HEADER[j]))
            };
            Ok(ReportRow {
                scheme: field(0)?.parse().map_err(|e: String| anyhow!("row {}: {e}", i + 1))?,
                snr_db: float(1)?,
                mse_closed_form: float(2)?,
                mse_empirical: float(3)?,
                b_chosen: field(4)?.parse::<BitAllocation>().with_context(|| format!("row {}", i + 1))?,
                evaluations: field(5)?.parse().with_context(|| format!("row {}: bad evaluations", i + 1))?,
                channel_kappa: float(6)?,
                seed: field(7)?.parse().with_context(|| format!("row {}: bad seed", i + 1))?,
            })
        })
        .collect()
}

/// Writes every file or none: earlier files are removed if a later write
/// fails.
fn write_all_or_nothing(files: &[(PathBuf, Vec<u8>)]) -> Result<()> {
    for (i, (path, bytes)) in files.iter().enumerate() {
        if let Err(e) = write_atomic(path, bytes) {
            for (done, _) in &files[..i] {
                let _ = fs::remove_file(done);
            }
            return Err(e).with_context(|| format!("writing {}", path.display()));
        }
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the command, writing
/// normal output to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    match cli.command {
        Command::GenChannel(a) => cmd_gen_channel(&a, out),
        Command::Allocate(a) => cmd_allocate(&a, out),
        Command::Enumerate(a) => cmd_enumerate(&a, out),
        Command::Sweep(a) => cmd_sweep(&a, out),
        Command::VerifyReport(a) => cmd_verify_report(&a, out),
    }
}

pub fn cmd_gen_channel(a: &GenChannelArgs, out: &mut dyn Write) -> Result<()> {
    let n = a.n as usize;
    let ch = match a.model {
        GenModel::IllConditioned => channel::gen_ill_conditioned(n, a.kappa, a.seed)?,
        GenModel::Rayleigh => channel::gen_rayleigh(n, a.seed)?,
    };
    channel::save_channel(&ch, &a.out)?;
    writeln!(out, "wrote {} ({}x{}, {})", a.out.display(), n, n, ch.model_tag())?;
    writeln!(out, "kappa = {:.6}", ch.kappa())?;
    Ok(())
}

fn outcome_line(method: Method, o: &SearchOutcome, format: Format, out: &mut dyn Write) -> Result<()> {
    let name = match method {
        Method::Full => "full",
        Method::Ga => "ga",
    };
    match format {
        Format::Csv => {
            writeln!(out, "method,b_star,j_star,evaluations,halted_by")?;
            writeln!(out, "{name},{},{},{},{}", o.b_star, num(o.j_star), o.evaluations, o.halted_by)?;
        }
        Format::Human => {
            writeln!(out, "method      {name}")?;
            writeln!(out, "b*          {}", o.b_star)?;
            writeln!(out, "J(b*)       {:.6}", o.j_star)?;
            writeln!(out, "evaluations {}", o.evaluations)?;
            writeln!(out, "halted_by   {}", o.halted_by)?;
        }
    }
    Ok(())
}

pub fn cmd_allocate(a: &AllocateArgs, out: &mut dyn Write) -> Result<()> {
    let ch = channel::load_channel(&a.channel)?;
    let n = ch.n();
    let pm = a.power.model(n)?;
    let p_u = 10f64.powf(a.snr_db / 10.0);
    let sigma2 = 1.0;
    let outcome = match a.method {
        Method::Full => allocation::full_search(ch.h(), p_u, sigma2, &pm)?,
        Method::Ga => {
            let bset_size = allocation::enumerate_bset(n, &pm)?.len();
            let base = GaParams::defaults_for(n, bset_size);
            let ga = GaParams {
                k: a.k.unwrap_or(base.k),
                l: a.l.unwrap_or(base.l),
                t: a.t.unwrap_or(base.t),
                p_cross: a.p_cross.unwrap_or(base.p_cross),
                p_mut: a.p_mut.unwrap_or(base.p_mut),
                seed: a.seed,
            };
            allocation::ga_search(ch.h(), p_u, sigma2, &pm, &ga)?
        }
    };
    outcome_line(a.method, &outcome, a.format, out)
}

pub fn cmd_enumerate(a: &EnumerateArgs, out: &mut dyn Write) -> Result<()> {
    let n = a.n as usize;
    let pm = a.power.model(n)?;
    let bset = allocation::enumerate_bset(n, &pm)?;
    let default_budget = a.power.budget.is_none();
    let tabulated = TABULATED_FULL_SEARCH.iter().find(|(tn, _)| *tn == n).map(|&(_, c)| c).filter(|_| default_budget);
    match a.format {
        Format::Csv => {
            writeln!(out, "n,budget,count")?;
            writeln!(out, "{n},{},{}", num(pm.p_adc), bset.len())?;
        }
        Format::Human => {
            writeln!(out, "{}", bset.len())?;
            if let Some(t) = tabulated {
                let diff = bset.len() as i64 - t as i64;
                writeln!(
                    out,
                    "note: tabulated full-search count for n = {n} is {t}; enumeration gives {} ({diff:+})",
                    bset.len()
                )?;
            }
        }
    }
    if a.list {
        for b in &bset {
            writeln!(out, "{b}")?;
        }
    }
    Ok(())
}

fn summary_table(report: &MseReport, out: &mut dyn Write) -> Result<()> {
    let mut schemes: Vec<Scheme> = Vec::new();
    for r in &report.rows {
        if !schemes.contains(&r.scheme) {
            schemes.push(r.scheme);
        }
    }
    let mut snrs: Vec<f64> = report.rows.iter().map(|r| r.snr_db).collect();
    snrs.dedup();
    writeln!(out, "closed-form MSE ({} normalization), n = {}", report.normalization, report.n)?;
    write!(out, "{:>8}", "snr_db")?;
    for s in &schemes {
        write!(out, " {:>12}", s.as_str())?;
    }
    writeln!(out)?;
    for snr in snrs {
        write!(out, "{snr:>8}")?;
        for &s in &schemes {
            let v = report.row(s, snr).map(|r| r.mse_closed_form).unwrap_or(f64::NAN);
            write!(out, " {v:>12.5e}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write) -> Result<()> {
    let mut cfg = match &a.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig { schema: SCHEMA_VERSION, ..Default::default() },
    };
    a.apply_to(&mut cfg);
    let run = cfg.resolve()?;
    let report = run_resolved(&run)?;

    let mut files =
        vec![(run.output.report.clone(), report_csv(&report)?), (run.output.plot.clone(), plot_csv(&report)?)];
    if let Some(d) = &run.output.detail {
        files.push((d.clone(), detail_csv(&report)?));
    }
    if let Some(dir) = run.output.report.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    write_all_or_nothing(&files)?;

    if run.verbosity > 0 {
        match a.format {
            Format::Csv => out.write_all(&files[0].1)?,
            Format::Human => {
                summary_table(&report, out)?;
                for (p, _) in &files {
                    writeln!(out, "wrote {}", p.display())?;
                }
            }
        }
    }
    Ok(())
}

/// Runs a resolved sweep on a pool of `run.threads` workers.
pub fn run_resolved(run: &ResolvedRun) -> Result<MseReport> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(run.threads).build()?;
    Ok(pool.install(|| simulation::run_sweep(&run.sweep))?)
}

pub fn cmd_verify_report(a: &VerifyArgs, out: &mut dyn Write) -> Result<()> {
    let bytes = fs::read(&a.report).with_context(|| format!("reading {}", a.report.display()))?;
    let rows = parse_report_csv(&bytes)?;
    if rows.is_empty() {
        bail!("report {} has no rows", a.report.display());
    }
    if let Some(r) = rows.iter().find(|r| r.mse_closed_form < 0.0 || r.mse_empirical < 0.0) {
        bail!("negative MSE for {} at {} dB", r.scheme, r.snr_db);
    }
    match check_ordering(&rows, a.tol) {
        Ok(()) => {
            writeln!(out, "ok: ordering holds on {} rows", rows.len())?;
            Ok(())
        }
        Err(violations) => {
            for v in &violations {
                writeln!(out, "violation: {v}")?;
            }
            bail!("{} ordering violation(s)", violations.len())
        }
    }
}
