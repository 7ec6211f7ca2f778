//! A reduced MSE-versus-SNR sweep printed as a table.

use adcalloc::simulation::check_ordering;
use adcalloc::{run_sweep, Scheme, SweepConfig};

fn main() -> anyhow::Result<()> {
    let mut cfg = SweepConfig::defaults(8);
    cfg.trials = 10;
    cfg.symbols_per_trial = 100;
    let report = run_sweep(&cfg)?;

    print!("{:>6}", "snr");
    for s in Scheme::ORDERING {
        print!(" {:>12}", s.as_str());
    }
    println!();
    for &snr in &cfg.snr_db_grid {
        print!("{snr:>6}");
        for s in Scheme::ORDERING {
            print!(" {:>12.4e}", report.row(s, snr).map_or(f64::NAN, |r| r.mse_closed_form));
        }
        println!();
    }
    match check_ordering(&report.rows, 1e-9) {
        Ok(()) => println!("ordering holds"),
        Err(v) => println!("ordering violated: {v:?}"),
    }
    Ok(())
}
