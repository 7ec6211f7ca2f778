//! Power-constrained ADC bit allocation.
//!
//! The feasible set holds every `b ∈ {1,2,3,4}^N` whose ADC power
//! `Σ c·f_s·2^(b_i)` fits the budget. [`full_search`] scores all of it;
//! [`ga_search`] grows a population inside it and scores only the members.
//!
//! The GA keeps the feasible set split into the population (`Ch`) and the
//! complement (`C`). Each iteration pairs up the population at random and adds
//! one new member per pair: a crossover/mutation child when the Bernoulli
//! trial succeeds and the child is new, otherwise a uniform draw from the
//! complement. A population of `k` therefore reaches `k·(3/2)^l` members after
//! `l` iterations when `k` is divisible by `2^l`.

use std::collections::HashMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::combiner::{cost_j, CombinerError};
use crate::linalg::CMatrix;
use crate::quantization::{BitAllocation, Resolution};

/// Lowest and highest resolution considered by the searches.
pub const MIN_SEARCH_BITS: u32 = 1;
pub const MAX_SEARCH_BITS: u32 = 4;

/// Relative slack on the budget comparison, so that `c·N·f_s·4` admits the
/// all-2 allocation regardless of multiplication order.
const BUDGET_SLACK: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum AllocError {
    #[error("invalid ADC resolution {0}")]
    BadResolution(String),
    #[error("invalid power model: {0}")]
    BadPowerModel(String),
    #[error("budget {budget} is below the all-1-bit power {needed}")]
    BudgetTooSmall { needed: f64, budget: f64 },
    #[error("invalid GA parameters: {0}")]
    BadGaParams(String),
    #[error("initial population {k} exceeds the feasible set size {size}")]
    PopulationTooLarge { k: usize, size: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("cost evaluation failed for b = {bits}: {source}")]
    Cost {
        bits: BitAllocation,
        #[source]
        source: CombinerError,
    },
}

/// ADC power model `p(b) = c·f_s·2^b` with a total budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerModel {
    /// Energy per conversion step.
    pub c: f64,
    /// Sampling rate in Hz.
    pub f_s: f64,
    /// Budget `P_ADC` in watts.
    pub p_adc: f64,
}

impl PowerModel {
    pub fn new(c: f64, f_s: f64, p_adc: f64) -> Result<Self, AllocError> {
        for (name, v) in [("c", c), ("f_s", f_s), ("p_adc", p_adc)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(AllocError::BadPowerModel(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self { c, f_s, p_adc })
    }

    /// Budget equal to 2-bit ADCs on all `n` paths.
    pub fn all_two_bit(n: usize, c: f64, f_s: f64) -> Result<Self, AllocError> {
        Self::new(c, f_s, c * n as f64 * f_s * 4.0)
    }

    /// Unit `c` and `f_s` with the all-2-bit budget.
    pub fn unit(n: usize) -> Self {
        Self::all_two_bit(n, 1.0, 1.0).expect("unit model is valid")
    }

    /// Budget expressed in units of `c·f_s`.
    fn budget_units(&self) -> f64 {
        self.p_adc / (self.c * self.f_s) * (1.0 + BUDGET_SLACK)
    }

    pub fn is_feasible(&self, b: &BitAllocation) -> bool {
        match units(b) {
            Some(u) => u as f64 <= self.budget_units(),
            None => false,
        }
    }
}

fn units(b: &BitAllocation) -> Option<u64> {
    b.resolutions()
        .iter()
        .map(|r| match r {
            Resolution::Bits(bits) if *bits < 63 => Some(1u64 << bits),
            _ => None,
        })
        .try_fold(0u64, |acc, u| acc.checked_add(u?))
}

pub fn adc_power(bits: u32, pm: &PowerModel) -> Result<f64, AllocError> {
    if bits < 1 {
        return Err(AllocError::BadResolution(bits.to_string()));
    }
    Ok(pm.c * pm.f_s * f64::from(bits).exp2())
}

/// Total ADC power; infinite if any path is unquantized.
pub fn total_power(b: &BitAllocation, pm: &PowerModel) -> f64 {
    b.resolutions()
        .iter()
        .map(|r| match r {
            Resolution::Bits(bits) => pm.c * pm.f_s * f64::from(*bits).exp2(),
            Resolution::Infinite => f64::INFINITY,
        })
        .sum()
}

/// All feasible allocations in `{1..4}^n`, lexicographically ordered.
pub fn enumerate_bset(n: usize, pm: &PowerModel) -> Result<Vec<BitAllocation>, AllocError> {
    if n == 0 {
        return Err(AllocError::DimensionMismatch("n must be at least 1".into()));
    }
    let budget = pm.budget_units();
    let min_unit = 1u64 << MIN_SEARCH_BITS;
    if (min_unit * n as u64) as f64 > budget {
        return Err(AllocError::BudgetTooSmall {
            needed: total_power(&BitAllocation::uniform(n, Resolution::Bits(1)), pm),
            budget: pm.p_adc,
        });
    }

    fn walk(prefix: &mut Vec<u32>, used: u64, n: usize, budget: f64, min_unit: u64, out: &mut Vec<BitAllocation>) {
        if prefix.len() == n {
            out.push(BitAllocation::from_bits(prefix).expect("bits >= 1"));
            return;
        }
        let remaining_after = (n - prefix.len() - 1) as u64;
        for bits in MIN_SEARCH_BITS..=MAX_SEARCH_BITS {
            let used_now = used + (1u64 << bits);
            if (used_now + remaining_after * min_unit) as f64 > budget {
                break;
            }
            prefix.push(bits);
            walk(prefix, used_now, n, budget, min_unit, out);
            prefix.pop();
        }
    }

    let mut out = Vec::new();
    walk(&mut Vec::with_capacity(n), 0, n, budget, min_unit, &mut out);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HaltReason {
    /// A population member met the fitness threshold.
    Threshold,
    /// The GA ran all of its iterations.
    ExhaustedIterations,
    /// Every feasible allocation was scored.
    Exhaustive,
    /// The GA ran out of unused feasible allocations before finishing; the
    /// returned allocation is the best of the whole feasible set.
    PopulationExhausted,
}

impl HaltReason {
    pub fn as_str(self) -> &'static str {
        match self {
            HaltReason::Threshold => "threshold",
            HaltReason::ExhaustedIterations => "exhausted-iterations",
            HaltReason::Exhaustive => "exhaustive",
            HaltReason::PopulationExhausted => "population-exhausted",
        }
    }
}

impl fmt::Display for HaltReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub b_star: BitAllocation,
    pub j_star: f64,
    pub evaluations: usize,
    pub halted_by: HaltReason,
}

/// Genetic search parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaParams {
    /// Initial population size.
    pub k: usize,
    /// Maximum number of growth iterations.
    pub l: usize,
    /// Fitness threshold on `J` (absolute, MSE units).
    pub t: f64,
    pub p_cross: f64,
    pub p_mut: f64,
    pub seed: u64,
}

impl Default for GaParams {
    fn default() -> Self {
        Self { k: 64, l: 4, t: 0.001, p_cross: 0.9, p_mut: 0.1, seed: 0 }
    }
}

impl GaParams {
    /// Tabulated settings for 8 and 12 paths; other sizes get `k = 64`
    /// capped at the feasible-set size.
    pub fn defaults_for(n: usize, bset_size: usize) -> Self {
        let k = match n {
            8 => 64,
            12 => 400,
            _ => 64.min(bset_size).max(2),
        };
        Self { k, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), AllocError> {
        if self.k < 2 {
            return Err(AllocError::BadGaParams(format!("k must be >= 2, got {}", self.k)));
        }
        if self.t.is_nan() || self.t <= 0.0 {
            return Err(AllocError::BadGaParams(format!("t must be positive, got {}", self.t)));
        }
        for (name, p) in [("p_cross", self.p_cross), ("p_mut", self.p_mut)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(AllocError::BadGaParams(format!("{name} must lie in [0, 1], got {p}")));
            }
        }
        Ok(())
    }
}

fn check_channel(h: &CMatrix) -> Result<usize, AllocError> {
    if !h.is_square() {
        return Err(AllocError::DimensionMismatch(format!("channel is {}x{}", h.rows(), h.cols())));
    }
    Ok(h.rows())
}

fn score_all(h: &CMatrix, p_u: f64, sigma2: f64, members: &[&BitAllocation]) -> Result<Vec<f64>, AllocError> {
    members
        .par_iter()
        .map(|b| cost_j(h, b, p_u, sigma2).map_err(|source| AllocError::Cost { bits: (*b).clone(), source }))
        .collect()
}

/// Index of the smallest `(cost, allocation)` pair.
fn argmin<'a>(scored: impl Iterator<Item = (f64, &'a BitAllocation)>) -> Option<(f64, &'a BitAllocation)> {
    scored.min_by(|a, b| crate::quantization::cmp_cost_then_bits(*a, *b))
}

/// Exhaustive search over the feasible set.
pub fn full_search(h: &CMatrix, p_u: f64, sigma2: f64, pm: &PowerModel) -> Result<SearchOutcome, AllocError> {
    let n = check_channel(h)?;
    let bset = enumerate_bset(n, pm)?;
    full_search_over(h, p_u, sigma2, &bset)
}

/// Exhaustive search over an explicit candidate list. The result does not
/// depend on the order of `candidates`.
pub fn full_search_over(
    h: &CMatrix,
    p_u: f64,
    sigma2: f64,
    candidates: &[BitAllocation],
) -> Result<SearchOutcome, AllocError> {
    if candidates.is_empty() {
        return Err(AllocError::DimensionMismatch("empty candidate set".into()));
    }
    let refs: Vec<&BitAllocation> = candidates.iter().collect();
    let costs = score_all(h, p_u, sigma2, &refs)?;
    let (j_star, b_star) = argmin(costs.iter().copied().zip(candidates)).expect("non-empty");
    Ok(SearchOutcome {
        b_star: b_star.clone(),
        j_star,
        evaluations: candidates.len(),
        halted_by: HaltReason::Exhaustive,
    })
}

/// Population / complement split of the feasible set.
#[derive(Debug)]
pub(crate) struct Population<'a> {
    bset: &'a [BitAllocation],
    /// Feasible-set indices of population members, in insertion order.
    members: Vec<usize>,
    fitness: Vec<f64>,
    in_population: Vec<bool>,
    /// Complement as a swap-remove list plus a position map.
    complement: Vec<usize>,
    complement_pos: Vec<usize>,
}

impl<'a> Population<'a> {
    fn new(bset: &'a [BitAllocation]) -> Self {
        Self {
            bset,
            members: Vec::new(),
            fitness: Vec::new(),
            in_population: vec![false; bset.len()],
            complement: (0..bset.len()).collect(),
            complement_pos: (0..bset.len()).collect(),
        }
    }

    fn admit(&mut self, idx: usize) {
        debug_assert!(!self.in_population[idx]);
        let pos = self.complement_pos[idx];
        self.complement.swap_remove(pos);
        if let Some(&moved) = self.complement.get(pos) {
            self.complement_pos[moved] = pos;
        }
        self.complement_pos[idx] = usize::MAX;
        self.in_population[idx] = true;
        self.members.push(idx);
    }

    fn draw_from_complement<R: Rng>(&mut self, rng: &mut R) -> Option<usize> {
        if self.complement.is_empty() {
            return None;
        }
        let idx = self.complement[rng.gen_range(0..self.complement.len())];
        self.admit(idx);
        Some(idx)
    }

    fn best(&self) -> (f64, &BitAllocation) {
        argmin(self.fitness.iter().copied().zip(self.members.iter().map(|&i| &self.bset[i])))
            .expect("non-empty population")
    }

    #[cfg(test)]
    pub(crate) fn check_partition(&self) {
        let mut seen = vec![0u8; self.bset.len()];
        for &m in &self.members {
            seen[m] += 1;
            assert!(self.in_population[m]);
        }
        for &c in &self.complement {
            seen[c] += 1;
            assert!(!self.in_population[c]);
        }
        assert!(seen.iter().all(|&s| s == 1), "population and complement must partition the feasible set");
        assert_eq!(self.members.len(), self.fitness.len());
    }
}

/// Single-point crossover, per-gene mutation, then power repair.
fn breed<R: Rng>(a: &BitAllocation, b: &BitAllocation, ga: &GaParams, pm: &PowerModel, rng: &mut R) -> BitAllocation {
    let pa = a.finite_bits().expect("search allocations are finite");
    let pb = b.finite_bits().expect("search allocations are finite");
    let n = pa.len();
    let cut = if n > 1 { rng.gen_range(1..n) } else { 0 };
    let mut child: Vec<u32> = pa[..cut].iter().chain(&pb[cut..]).copied().collect();
    for gene in &mut child {
        if rng.gen_bool(ga.p_mut) {
            *gene = rng.gen_range(MIN_SEARCH_BITS..=MAX_SEARCH_BITS);
        }
    }
    let budget = pm.budget_units();
    while child.iter().map(|&g| 1u64 << g).sum::<u64>() as f64 > budget {
        // decrement the first of the largest genes
        let max = *child.iter().max().expect("non-empty");
        let pos = child.iter().position(|&g| g == max).expect("max exists");
        debug_assert!(max > MIN_SEARCH_BITS, "all-1 is feasible");
        child[pos] -= 1;
    }
    BitAllocation::from_bits(&child).expect("bits >= 1")
}

/// Genetic search over the feasible set.
pub fn ga_search(
    h: &CMatrix,
    p_u: f64,
    sigma2: f64,
    pm: &PowerModel,
    ga: &GaParams,
) -> Result<SearchOutcome, AllocError> {
    let n = check_channel(h)?;
    let bset = enumerate_bset(n, pm)?;
    ga_search_over(h, p_u, sigma2, pm, ga, &bset, |_| {})
}

pub(crate) fn ga_search_over(
    h: &CMatrix,
    p_u: f64,
    sigma2: f64,
    pm: &PowerModel,
    ga: &GaParams,
    bset: &[BitAllocation],
    mut observe: impl FnMut(&Population<'_>),
) -> Result<SearchOutcome, AllocError> {
    ga.validate()?;
    if ga.k > bset.len() {
        return Err(AllocError::PopulationTooLarge { k: ga.k, size: bset.len() });
    }
    let index: HashMap<&BitAllocation, usize> = bset.iter().enumerate().map(|(i, b)| (b, i)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(ga.seed);
    let mut pop = Population::new(bset);

    let anchor = BitAllocation::uniform(h.rows(), Resolution::Bits(2));
    if let Some(&i) = index.get(&anchor) {
        pop.admit(i);
    }
    while pop.members.len() < ga.k {
        pop.draw_from_complement(&mut rng).expect("k <= |B_set|");
    }

    let evaluate = |pop: &mut Population<'_>| -> Result<bool, AllocError> {
        let fresh: Vec<&BitAllocation> = pop.members[pop.fitness.len()..].iter().map(|&i| &bset[i]).collect();
        let scores = score_all(h, p_u, sigma2, &fresh)?;
        let hit = scores.iter().any(|&j| j <= ga.t);
        pop.fitness.extend(scores);
        Ok(hit)
    };

    let finish = |pop: &Population<'_>, halted_by| {
        let (j_star, b_star) = pop.best();
        SearchOutcome { b_star: b_star.clone(), j_star, evaluations: pop.members.len(), halted_by }
    };

    let hit = evaluate(&mut pop)?;
    observe(&pop);
    if hit {
        return Ok(finish(&pop, HaltReason::Threshold));
    }

    for _ in 0..ga.l {
        let mut order = pop.members.clone();
        order.shuffle(&mut rng);
        let mut exhausted = false;
        for pair in order.chunks_exact(2) {
            let child = if rng.gen_bool(ga.p_cross) {
                let c = breed(&bset[pair[0]], &bset[pair[1]], ga, pm, &mut rng);
                index.get(&c).copied().filter(|&i| !pop.in_population[i])
            } else {
                None
            };
            match child {
                Some(i) => pop.admit(i),
                None => {
                    if pop.draw_from_complement(&mut rng).is_none() {
                        exhausted = true;
                        break;
                    }
                }
            }
        }
        let hit = evaluate(&mut pop)?;
        observe(&pop);
        if hit {
            return Ok(finish(&pop, HaltReason::Threshold));
        }
        if exhausted {
            return Ok(finish(&pop, HaltReason::PopulationExhausted));
        }
    }
    Ok(finish(&pop, HaltReason::ExhaustedIterations))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::gen_ill_conditioned;
    use crate::linalg::gaussian_cmatrix;

    fn unit(budget: f64) -> PowerModel {
        PowerModel::new(1.0, 1.0, budget).unwrap()
    }

    #[test]
    fn power_values() {
        assert_eq!(adc_power(2, &unit(1.0)).unwrap(), 4.0);
        assert_eq!(adc_power(1, &PowerModel::new(2.0, 3.0, 1.0).unwrap()).unwrap(), 12.0);
        assert_eq!(adc_power(4, &PowerModel::new(0.5, 3.0, 1.0).unwrap()).unwrap(), 16.0 * 1.5);
        assert!(adc_power(0, &unit(1.0)).is_err());
    }

    #[test]
    fn total_power_and_feasibility() {
        let pm = PowerModel::unit(8);
        assert_eq!(pm.p_adc, 32.0);
        let two = BitAllocation::uniform(8, Resolution::Bits(2));
        let four = BitAllocation::uniform(8, Resolution::Bits(4));
        let one = BitAllocation::uniform(8, Resolution::Bits(1));
        assert_eq!(total_power(&two, &pm), 32.0);
        assert!(pm.is_feasible(&two));
        assert_eq!(total_power(&four, &pm), 128.0);
        assert!(!pm.is_feasible(&four));
        assert_eq!(total_power(&one, &pm), 16.0);
        assert!(pm.is_feasible(&one));
        assert!(!pm.is_feasible(&BitAllocation::uniform(8, Resolution::Infinite)));
    }

    #[test]
    fn all_two_budget_with_awkward_constants() {
        let pm = PowerModel::all_two_bit(12, 0.1, 3.3e9).unwrap();
        assert!(pm.is_feasible(&BitAllocation::uniform(12, Resolution::Bits(2))));
    }

    #[test]
    fn power_model_validation() {
        assert!(PowerModel::new(0.0, 1.0, 1.0).is_err());
        assert!(PowerModel::new(1.0, -1.0, 1.0).is_err());
        assert!(PowerModel::new(1.0, 1.0, f64::NAN).is_err());
    }

    #[test]
    fn small_enumerations() {
        let s = enumerate_bset(1, &unit(4.0)).unwrap();
        assert_eq!(s, vec![BitAllocation::from_bits(&[1]).unwrap(), BitAllocation::from_bits(&[2]).unwrap()]);
        let s = enumerate_bset(2, &unit(8.0)).unwrap();
        let want: Vec<BitAllocation> =
            [[1, 1], [1, 2], [2, 1], [2, 2]].iter().map(|b| BitAllocation::from_bits(b).unwrap()).collect();
        assert_eq!(s, want);
        assert!(matches!(enumerate_bset(3, &unit(5.0)), Err(AllocError::BudgetTooSmall { .. })));
    }

    #[test]
    fn enumeration_is_sorted_and_feasible() {
        let pm = PowerModel::unit(5);
        let s = enumerate_bset(5, &pm).unwrap();
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        assert!(s.iter().all(|b| pm.is_feasible(b)));
    }

    #[test]
    fn scalar_full_search() {
        let out = full_search(&CMatrix::identity(1), 1.0, 1.0, &unit(4.0)).unwrap();
        assert_eq!(out.b_star, BitAllocation::from_bits(&[2]).unwrap());
        assert!((out.j_star - 0.55875).abs() < 1e-12);
        assert_eq!(out.evaluations, 2);
        assert_eq!(out.halted_by, HaltReason::Exhaustive);
    }

    #[test]
    fn symmetric_channel_gives_symmetric_allocation() {
        let out = full_search(&CMatrix::identity(2), 1.0, 1.0, &unit(8.0)).unwrap();
        assert_eq!(out.b_star, BitAllocation::from_bits(&[2, 2]).unwrap());
    }

    #[test]
    fn full_search_is_order_invariant() {
        let h = gaussian_cmatrix(4, 4, 1.0, 21).unwrap();
        let pm = PowerModel::unit(4);
        let mut bset = enumerate_bset(4, &pm).unwrap();
        let a = full_search_over(&h, 10.0, 1.0, &bset).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..5 {
            bset.shuffle(&mut rng);
            assert_eq!(full_search_over(&h, 10.0, 1.0, &bset).unwrap(), a);
        }
    }

    #[test]
    fn ga_table_counts() {
        let pm = PowerModel::unit(8);
        let h = gen_ill_conditioned(8, 1000.0, 3).unwrap();
        let ga = GaParams::defaults_for(8, 0);
        let out = ga_search(h.h(), 1.0, 1.0, &pm, &ga).unwrap();
        assert_eq!(out.halted_by, HaltReason::ExhaustedIterations);
        assert_eq!(out.evaluations, 324);
    }

    #[test]
    fn ga_scalar_case_matches_full_search() {
        let pm = unit(4.0);
        let ga = GaParams { k: 2, ..GaParams::default() };
        let out = ga_search(&CMatrix::identity(1), 1.0, 1.0, &pm, &ga).unwrap();
        assert_eq!(out.b_star, BitAllocation::from_bits(&[2]).unwrap());
        assert_eq!(out.halted_by, HaltReason::PopulationExhausted);
        assert_eq!(out.evaluations, 2);
    }

    #[test]
    fn ga_threshold_halts_early() {
        let pm = PowerModel::unit(4);
        let h = gaussian_cmatrix(4, 4, 1.0, 8).unwrap();
        let ga = GaParams { k: 8, t: 10.0, ..GaParams::default() };
        let out = ga_search(&h, 1.0, 1.0, &pm, &ga).unwrap();
        assert_eq!(out.halted_by, HaltReason::Threshold);
        assert_eq!(out.evaluations, 8);
    }

    #[test]
    fn ga_partition_invariant_and_feasibility() {
        let pm = PowerModel::unit(6);
        let bset = enumerate_bset(6, &pm).unwrap();
        let h = gen_ill_conditioned(6, 800.0, 4).unwrap();
        let ga = GaParams { k: 16, l: 6, seed: 9, ..GaParams::default() };
        let mut steps = 0;
        let out = ga_search_over(h.h(), 31.6, 1.0, &pm, &ga, &bset, |pop| {
            pop.check_partition();
            assert!(pop.members.iter().all(|&i| pm.is_feasible(&bset[i])));
            steps += 1;
        })
        .unwrap();
        assert!(steps >= 2);
        assert!(pm.is_feasible(&out.b_star));
    }

    #[test]
    fn ga_parameter_validation() {
        let pm = PowerModel::unit(2);
        let h = CMatrix::identity(2);
        let bad = [
            GaParams { k: 1, ..GaParams::default() },
            GaParams { k: 2, t: 0.0, ..GaParams::default() },
            GaParams { k: 2, p_cross: 1.5, ..GaParams::default() },
            GaParams { k: 2, p_mut: -0.1, ..GaParams::default() },
        ];
        for ga in bad {
            assert!(matches!(ga_search(&h, 1.0, 1.0, &pm, &ga), Err(AllocError::BadGaParams(_))));
        }
        let ga = GaParams { k: 100, ..GaParams::default() };
        assert!(matches!(ga_search(&h, 1.0, 1.0, &pm, &ga), Err(AllocError::PopulationTooLarge { .. })));
    }

    #[test]
    fn breed_repairs_to_budget() {
        let pm = PowerModel::unit(4);
        let ga = GaParams { p_mut: 1.0, ..GaParams::default() };
        let a = BitAllocation::from_bits(&[1, 1, 3, 3]).unwrap();
        let b = BitAllocation::from_bits(&[3, 3, 1, 1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let child = breed(&a, &b, &ga, &pm, &mut rng);
            assert!(pm.is_feasible(&child));
            assert!(child.finite_bits().unwrap().iter().all(|&g| (1..=4).contains(&g)));
        }
    }
}
