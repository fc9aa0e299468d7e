//! Labels corrected sentences with interpretation categories.
//!
//! ```text
//! cargo run --example classify
//! cargo run --example classify -- path/to/corrections.csv
//! ```

use std::path::PathBuf;

use noisy_channel::classify::{load_corrections, Classifier};

fn main() -> noisy_channel::error::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/table1/corrections.csv"));
    let records = load_corrections(&path)?;
    let corpus = Classifier::default().classify_corpus(&records);

    for row in &corpus.rows {
        let features: Vec<&str> = row.features.iter().map(|f| f.as_str()).collect();
        println!(
            "{:<22} {:<10} d={:<2} [{}]\n    {}\n  → {}",
            row.label.category.as_str(),
            if row.label.plausible {
                "plausible"
            } else {
                "implausible"
            },
            row.distance,
            features.join(", "),
            row.record.perceived,
            row.record.corrected
        );
    }
    let overall = &corpus.summary.overall;
    println!("\n{} corrections, {:.1}% plausible", overall.n, overall.plausible_pct);
    for (category, pct) in &overall.categories {
        if *pct > 0.0 {
            println!("  {:<22} {pct:5.1}%", category.as_str());
        }
    }
    Ok(())
}
