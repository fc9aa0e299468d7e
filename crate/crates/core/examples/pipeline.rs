//! End-to-end run on the bundled demo data: score, classify, posterior,
//! analyze. Artifacts go to `target/demo-run` unless a directory is given.
//!
//! ```text
//! cargo run --example pipeline
//! cargo run --example pipeline -- /tmp/ncc-out
//! ```

use std::path::PathBuf;

use noisy_channel::config::RunConfig;
use noisy_channel::pipeline::{
    run_pipeline, CorrelationReport, RegressionReport, Stage, CORRELATION_FILE, REGRESSION_FILE,
};

fn main() -> noisy_channel::error::Result<()> {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let mut config = RunConfig::load(&root.join("tests/fixtures/demo/run.json"))?;
    config.io.out_dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| root.join("../../target/demo-run"));
    run_pipeline(&config, Stage::All)?;

    let read = |name: &str| std::fs::read(config.io.out_dir.join(name)).expect("artifact written");
    let corr: CorrelationReport = serde_json::from_slice(&read(CORRELATION_FILE)).expect("valid json");
    let reg: RegressionReport = serde_json::from_slice(&read(REGRESSION_FILE)).expect("valid json");

    println!("artifacts in {}", config.io.out_dir.display());
    println!(
        "distance vs acceptability difference: r = {:.3} (p = {:.3}, n = {})",
        corr.r, corr.p, corr.n
    );
    println!("models on {} anomalous trials:", reg.n_obs);
    for m in &reg.ranking {
        println!("  {:<14} AIC {:>9.2}  delta {:>6.2}", m.label, m.aic, m.delta);
    }
    Ok(())
}
