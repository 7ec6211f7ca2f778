//! Closed-form MMSE combiner cost for a few allocations on one channel,
//! compared with a Monte-Carlo estimate.

use adcalloc::channel::gen_ill_conditioned;
use adcalloc::simulation::empirical_mse;
use adcalloc::{mmse_combiner, BitAllocation, Resolution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> anyhow::Result<()> {
    let n = 8;
    let ch = gen_ill_conditioned(n, 1000.0, 7)?;
    let snr_db = 10.0;
    let p_u = 10f64.powf(snr_db / 10.0);
    let allocations = [
        BitAllocation::uniform(n, Resolution::Bits(1)),
        BitAllocation::uniform(n, Resolution::Bits(2)),
        "3-3-2-2-2-2-1-1".parse()?,
        BitAllocation::uniform(n, Resolution::Infinite),
    ];
    println!("{:<24} {:>10} {:>10}", "allocation", "J/N", "sampled");
    for b in &allocations {
        let res = mmse_combiner(ch.h(), b, p_u, 1.0)?;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let emp = empirical_mse(ch.h(), b, p_u, 1.0, 400, 25, &mut rng)?;
        println!("{:<24} {:>10.5} {:>10.5}", b.to_string(), res.mse / n as f64, emp);
    }
    Ok(())
}
