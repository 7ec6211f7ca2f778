//! Quantization-aware MMSE combining and power-constrained ADC bit allocation
//! for massive-MIMO receivers with per-path variable-resolution ADCs.
//!
//! - [`linalg`]: small dense complex matrices, Hermitian solves, condition numbers.
//! - [`channel`]: Rayleigh and synthetic ill-conditioned channels, channel files.
//! - [`quantization`]: the additive quantization noise model per RF path.
//! - [`combiner`]: closed-form MMSE combiner and the cost `J(b)`.
//! - [`allocation`]: power model, feasible-set enumeration, full search and GA.
//! - [`simulation`]: 64-QAM Monte-Carlo validation and SNR sweeps.
//! - [`cli`]: the `adcalloc` command line and report writers.

pub mod allocation;
pub mod channel;
pub mod cli;
pub mod combiner;
pub mod linalg;
pub mod quantization;
pub mod simulation;

pub(crate) mod io;

pub use allocation::{enumerate_bset, full_search, ga_search, GaParams, HaltReason, PowerModel, SearchOutcome};
pub use channel::{gen_ill_conditioned, gen_rayleigh, load_channel, save_channel, ChannelMatrix, ModelTag};
pub use combiner::{cost_j, mmse_combiner, CombinerResult};
pub use linalg::CMatrix;
pub use quantization::{BitAllocation, QuantModel, Resolution};
pub use simulation::{run_sweep, MseReport, Scheme, SweepConfig};
