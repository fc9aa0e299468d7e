//! Cumulative logit fits on simulated 7-point ratings, compared by AIC.
//!
//! ```text
//! cargo run --release --example ordinal_regression
//! ```

use noisy_channel::analysis::{compare_models, fit_cumulative_logit, DesignRow, FitOptions, Predictor};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn main() -> noisy_channel::error::Result<()> {
    let thresholds = [-2.2, -1.2, -0.4, 0.4, 1.2, 2.2];
    // slor, order, baseline, fmax, fmean
    let beta = [0.3, -0.1, 0.5, -0.1, 0.4];
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let design: Vec<DesignRow> = (0..3000)
        .map(|i| {
            let x: Vec<f64> = (0..5).map(|_| rng.sample(StandardNormal)).collect();
            let eta: f64 = x.iter().zip(beta).map(|(a, b)| a * b).sum();
            let u: f64 = rng.random_range(1e-12..1.0);
            let latent = eta + (u / (1.0 - u)).ln();
            let response = 1 + thresholds.iter().filter(|t| **t < latent).count() as u8;
            DesignRow {
                response,
                slor_z: x[0],
                order_z: x[1],
                baseline_z: x[2],
                fmax_z: x[3],
                fmean_z: x[4],
                participant_id: format!("p{}", i % 40),
            }
        })
        .collect();

    let base = [Predictor::Slor, Predictor::Order, Predictor::Baseline];
    let with = |extra: &[Predictor]| -> Vec<Predictor> { base.iter().chain(extra).copied().collect() };
    let mut fits = Vec::new();
    for (label, predictors) in [
        ("base", with(&[])),
        ("base+mean", with(&[Predictor::FMean])),
        ("base+max+mean", with(&[Predictor::FMax, Predictor::FMean])),
    ] {
        let fit = fit_cumulative_logit(&design, &predictors, &FitOptions::default())?;
        println!(
            "{label:<14} logL {:>10.2}  iterations {:>3}  {:?}",
            fit.log_likelihood, fit.iterations, fit.coefficients
        );
        fits.push((label.to_owned(), fit));
    }
    println!();
    for m in compare_models(&fits)? {
        println!("{:<14} AIC {:>10.2}  delta {:>7.2}", m.label, m.aic, m.delta);
    }
    Ok(())
}
