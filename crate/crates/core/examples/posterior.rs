//! Noisy-channel posteriors of a few intended sentences behind one
//! perceived sentence, and the link functions over them. The evidence term
//! is the LM probability of the perceived sentence, so values are not
//! normalized and can exceed 1.
//!
//! ```text
//! cargo run --example posterior -- 1.5
//! ```

use noisy_channel::lm::ScoredSentence;
use noisy_channel::noise::NoiseParams;
use noisy_channel::posterior::{link_values, posterior_estimate};
use noisy_channel::text::{dld, tokenize};

fn scored(text: &str, logprobs: &[f64]) -> ScoredSentence {
    ScoredSentence::new(text, "toy", vec![], logprobs.to_vec()).expect("valid log-probabilities")
}

fn main() -> noisy_channel::error::Result<()> {
    let beta: f64 = std::env::args()
        .nth(1)
        .map(|b| b.parse().expect("beta is a number"))
        .unwrap_or(1.0);
    let params = NoiseParams::new(beta)?;

    let perceived = scored(
        "More people have been to Russia than I have.",
        &[-6.1, -4.0, -1.2, -2.9, -0.8, -5.5, -4.7, -3.3, -1.0],
    );
    let intended = [
        scored(
            "People have been to Russia more than I have.",
            &[-5.0, -1.3, -2.6, -0.9, -5.6, -3.9, -1.7, -2.9, -0.9],
        ),
        scored(
            "More people than me have been to Russia.",
            &[-6.1, -4.0, -4.4, -4.2, -1.6, -2.8, -0.8, -5.9],
        ),
        scored(
            "More people have been to Russia than me.",
            &[-6.1, -4.0, -1.2, -2.9, -0.8, -5.5, -4.7, -4.8],
        ),
    ];

    let mut estimates = Vec::new();
    for s_i in &intended {
        let d = dld(&tokenize(&s_i.text), &tokenize(&perceived.text));
        let e = posterior_estimate(s_i, &perceived, d, &params)?;
        println!(
            "d={d}  log prior {:>7.2}  log noise {:>5.2}  posterior {:.4}  {}",
            e.log_prior,
            e.log_noise,
            e.posterior(),
            s_i.text
        );
        estimates.push(e);
    }
    let links = link_values(&perceived.text, &estimates)?;
    println!(
        "beta={beta}: f_max={:.4} f_mean={:.4} f_weighted={:.4}",
        links.f_max, links.f_mean, links.f_weighted
    );
    Ok(())
}
