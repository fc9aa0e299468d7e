//! Item-wise acceptability differences against mean correction distance.
//!
//! ```text
//! cargo run --example acceptability
//! ```

use std::path::PathBuf;

use noisy_channel::analysis::{
    acceptability_differences, item_mean_distances, load_trials, pearson, zscore_by_participant,
};
use noisy_channel::classify::{load_corrections, Classifier};

fn main() -> noisy_channel::error::Result<()> {
    let demo = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/demo");
    let trials = load_trials(&demo.join("trials.csv"))?;
    let labeled = Classifier::default()
        .classify_corpus(&load_corrections(&demo.join("corrections.csv"))?)
        .rows;

    let z = zscore_by_participant(&trials);
    if !z.excluded.is_empty() {
        println!("excluded participants: {:?}", z.excluded);
    }
    let diffs = acceptability_differences(&z.rows)?;
    let distances = item_mean_distances(&labeled, true);

    let mut x = Vec::new();
    let mut y = Vec::new();
    for d in &diffs {
        if let Some(dist) = distances.get(&(d.item_id.clone(), d.condition)) {
            x.push(*dist);
            y.push(d.diff);
        }
    }
    for d in diffs.iter().take(8) {
        println!("{} {:<18} diff {:+.3}", d.item_id, d.condition.to_string(), d.diff);
    }
    println!("...");
    let c = pearson(&x, &y)?;
    println!("r = {:.3}, p = {:.3}, n = {}", c.r, c.p, c.n);
    Ok(())
}
