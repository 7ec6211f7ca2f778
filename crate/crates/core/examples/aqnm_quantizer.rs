//! Gain and noise of the additive quantization noise model, checked against
//! samples pushed through the quantizer.

use adcalloc::linalg::complex_gaussian;
use adcalloc::quantization::{alpha, beta, quant_noise_cov, QuantModel};
use adcalloc::{BitAllocation, CMatrix, Resolution};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> anyhow::Result<()> {
    println!("bits  beta         alpha");
    for b in 1..=8 {
        let r = Resolution::Bits(b);
        println!("{b:>4}  {:<11.4e}  {:.6}", beta(r)?, alpha(r)?);
    }

    let h = CMatrix::identity(2);
    let b: BitAllocation = "1-3".parse()?;
    let (p_u, sigma2) = (1.0, 1.0);
    println!("\nR_nq diagonal for b = {b}: {:?}", quant_noise_cov(&h, &b, p_u, sigma2)?);

    // Push unit-power inputs through the quantizer and look at the
    // distortion power on each path.
    let q = QuantModel::new(&h, &b, p_u, sigma2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let samples = 200_000;
    let mut err = [0.0f64; 2];
    for _ in 0..samples {
        let r: Vec<Complex64> = (0..2).map(|_| complex_gaussian(&mut rng, 2.0)).collect();
        let z = q.apply(&r, &mut rng)?;
        for i in 0..2 {
            err[i] += (z[i] - r[i] * q.w_alpha[i]).norm_sqr() / samples as f64;
        }
    }
    println!("sampled noise power:          {err:.4?}");
    Ok(())
}
