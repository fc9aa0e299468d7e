//! Word-level edit distance between a comparative-illusion sentence and
//! several corrections of it.
//!
//! ```text
//! cargo run --example edit_distance
//! cargo run --example edit_distance -- "More a than b." "A more than b."
//! ```

use noisy_channel::text::{tokenize, EditMetric};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (perceived, corrections) = match args.split_first() {
        Some((p, rest)) if !rest.is_empty() => (p.clone(), rest.to_vec()),
        _ => (
            "More people have been to Russia than I have.".to_owned(),
            vec![
                "People have been to Russia more than I have.".to_owned(),
                "More people than me have been to Russia.".to_owned(),
                "People more have been to Russia than I have.".to_owned(),
                "More people have been to Russia than I have.".to_owned(),
            ],
        ),
    };
    let p = tokenize(&perceived);
    println!("perceived: {p}");
    println!("{:>4} {:>4}  correction", "osa", "lev");
    for c in &corrections {
        let t = tokenize(c);
        let osa = EditMetric::OptimalStringAlignment.distance(&p, &t);
        let lev = EditMetric::Levenshtein.distance(&p, &t);
        println!("{osa:>4} {lev:>4}  {c}");
    }
}
