//! Full search against the genetic search on the same channel and SNR.

use std::time::Instant;

use adcalloc::channel::gen_ill_conditioned;
use adcalloc::{enumerate_bset, full_search, ga_search, GaParams, PowerModel};

fn main() -> anyhow::Result<()> {
    for n in [8, 12] {
        let ch = gen_ill_conditioned(n, 1000.0, 11)?;
        let pm = PowerModel::unit(n);
        let ga = GaParams::defaults_for(n, enumerate_bset(n, &pm)?.len());
        for snr_db in [0.0, 20.0] {
            let p_u = 10f64.powf(snr_db / 10.0);
            let start = Instant::now();
            let fs = full_search(ch.h(), p_u, 1.0, &pm)?;
            let fs_time = start.elapsed();
            let start = Instant::now();
            let gs = ga_search(ch.h(), p_u, 1.0, &pm, &ga)?;
            let ga_time = start.elapsed();
            println!("n = {n}, {snr_db} dB");
            println!(
                "  full  {:<26} J = {:.6}  {:>6} evals  {fs_time:.1?}",
                fs.b_star.to_string(),
                fs.j_star,
                fs.evaluations
            );
            println!(
                "  ga    {:<26} J = {:.6}  {:>6} evals  {ga_time:.1?}  ({})",
                gs.b_star.to_string(),
                gs.j_star,
                gs.evaluations,
                gs.halted_by
            );
        }
    }
    Ok(())
}
