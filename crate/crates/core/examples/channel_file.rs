//! Generate an ill-conditioned channel, write it to disk and read it back.
//!
//! cargo run --example channel_file -- 8 1000

use adcalloc::channel::{gen_ill_conditioned, gen_rayleigh, load_channel, save_channel};

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(Ok(8), |s| s.parse())?;
    let kappa: f64 = args.next().map_or(Ok(1000.0), |s| s.parse())?;

    let ch = gen_ill_conditioned(n, kappa, 42)?;
    println!("ill-conditioned {n}x{n}: kappa = {:.3}, |H|_F^2 = {:.3}", ch.kappa(), ch.h().frobenius_norm_sqr());

    let iid = gen_rayleigh(n, 42)?;
    println!("rayleigh        {n}x{n}: kappa = {:.3}", iid.kappa());

    let dir = tempfile::tempdir()?;
    let path = dir.path().join("h.json");
    save_channel(&ch, &path)?;
    let back = load_channel(&path)?;
    println!("round trip exact: {}", back.h() == ch.h());
    Ok(())
}
