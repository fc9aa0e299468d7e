//! SLOR of the demo stimuli: per-word language-model log-probability
//! minus unigram log-probability.
//!
//! ```text
//! cargo run --example slor
//! ```

use std::path::PathBuf;

use noisy_channel::lm::{read_score_file, slor, unigram_logprob, UnigramTable};
use noisy_channel::pipeline::load_stimuli;
use noisy_channel::text::tokenize;

fn main() -> noisy_channel::error::Result<()> {
    let demo = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/demo");
    let table = UnigramTable::load(&demo.join("unigram.tsv"), true)?;
    let scores = read_score_file(&demo.join("scores.jsonl"))?;
    let stimuli = load_stimuli(&demo.join("stimuli.csv"))?;

    println!("{:<18} {:>9} {:>9} {:>7}  text", "condition", "lm", "unigram", "slor");
    for s in stimuli.iter().filter(|s| s.item_id == "i01") {
        let scored = scores.iter().find(|x| x.text == s.text).expect("stimulus is scored");
        let tokens = tokenize(&s.text);
        println!(
            "{:<18} {:>9.3} {:>9.3} {:>7.3}  {}",
            s.condition.to_string(),
            scored.total_logprob,
            unigram_logprob(&tokens, &table)?,
            slor(scored, &tokens, &table)?.0,
            s.text
        );
    }
    Ok(())
}
