//! One line per acceptance criterion. Runs as a plain binary so the lines
//! are always printed; exits non-zero if any criterion fails.
//!
//! The published-data criterion needs the OSF data set. Point
//! `NCC_OSF_DATA` at a directory holding `stimuli.csv`, `corrections.csv`,
//! `trials.csv`, `scores.jsonl` and `unigram.tsv`; without it the criterion
//! is reported as SKIP.

mod common;

use std::path::{Path, PathBuf};
use std::time::Instant;

use common::{fixture, irls_logistic, oracle_distance, random_sequence, sample_cumulative_logit};
use noisy_channel::analysis::{CumulativeLogit, FitOptions};
use noisy_channel::classify::{load_corrections, Category, Classifier, InterpretationLabel};
use noisy_channel::config::RunConfig;
use noisy_channel::lm::{read_score_file, slor, slor_from_parts, FileProvider, ScoredSentence, UnigramTable};
use noisy_channel::noise::{log_likelihood, NoiseParams};
use noisy_channel::pipeline::{self, CorrelationReport, RegressionReport, Stage};
use noisy_channel::posterior::{link_corpus, link_values, AlternativeOptions, PosteriorEstimate};
use noisy_channel::text::{edit_distance, tokenize, EditDistance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn dld_oracle() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20240601);
    let pairs = 1200;
    for _ in 0..pairs {
        let a = random_sequence(&mut rng, 8, 5);
        let b = random_sequence(&mut rng, 8, 5);
        for transpositions in [true, false] {
            let got = edit_distance(&a, &b, transpositions);
            let want = oracle_distance(&a, &b, transpositions);
            ensure(got == want, || {
                format!("{a:?} vs {b:?} (transpositions={transpositions}): {got} != {want}")
            })?;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 30.0, || format!("took {secs:.1}s"))?;
    Ok(format!("{pairs} pairs x 2 metrics in {secs:.2}s"))
}

fn noise_model() -> Check {
    let p = NoiseParams::default();
    let lik = |d: usize| log_likelihood(EditDistance(d), &p).exp();
    ensure(lik(0) == 1.0, || format!("likelihood(0) = {}", lik(0)))?;
    let two = NoiseParams::new(1.0).map_err(|e| e.to_string())?;
    let v = log_likelihood(EditDistance(2), &two).exp();
    ensure((v - (-2.0f64).exp()).abs() < 1e-12, || format!("likelihood(2) = {v}"))?;
    for d in 0..20 {
        ensure(lik(d + 1) < lik(d), || format!("not decreasing at d={d}"))?;
    }
    Ok("exp(-beta d) checks".into())
}

fn shift_invariance() -> Check {
    let records = load_corrections(&fixture("demo/corrections.csv")).map_err(|e| e.to_string())?;
    let rows = Classifier::default().classify_corpus(&records).rows;
    let scores = read_score_file(&fixture("demo/scores.jsonl")).map_err(|e| e.to_string())?;
    let links = |c: f64| {
        let shifted: Vec<ScoredSentence> = scores.iter().map(|s| s.shifted(c)).collect();
        let provider = FileProvider::from_scores(shifted, None).unwrap();
        link_corpus(&rows, &provider, &NoiseParams::default(), AlternativeOptions::default())
            .unwrap()
            .0
    };
    let base = links(0.0);
    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
    let mut worst = 0.0f64;
    for c in [-5.0, 3.7] {
        for (a, b) in base.iter().zip(links(c)) {
            worst = worst
                .max(rel(a.links.f_max, b.links.f_max))
                .max(rel(a.links.f_mean, b.links.f_mean))
                .max(rel(a.links.f_weighted, b.links.f_weighted));
        }
    }
    ensure(worst < 1e-9, || format!("max relative change {worst:e}"))?;
    Ok(format!("{} link rows, max relative change {worst:.1e}", base.len()))
}

fn link_arithmetic() -> Check {
    let est = |p: f64| PosteriorEstimate {
        perceived_text: "p".into(),
        intended_text: format!("{p}"),
        log_prior: p.ln(),
        log_noise: 0.0,
        log_evidence: 0.0,
        log_posterior: p.ln(),
    };
    let v = link_values("p", &[est(0.2), est(0.5)]).map_err(|e| e.to_string())?;
    ensure((v.f_max - 0.5).abs() < 1e-9, || format!("f_max {}", v.f_max))?;
    ensure((v.f_mean - 0.35).abs() < 1e-9, || format!("f_mean {}", v.f_mean))?;
    ensure((v.f_weighted - 0.29 / 0.7).abs() < 1e-9, || {
        format!("f_weighted {}", v.f_weighted)
    })?;
    Ok(format!(
        "f_max={:.6} f_mean={:.6} f_weighted={:.6}",
        v.f_max, v.f_mean, v.f_weighted
    ))
}

fn classifier_fixture() -> Check {
    let records = load_corrections(&fixture("table1/corrections.csv")).map_err(|e| e.to_string())?;
    let rows = Classifier::default().classify_corpus(&records[..5]).rows;
    let expected = [
        Category::EventComparison,
        Category::IndividualComparison,
        Category::EventNegation,
        Category::DoubleComparison,
        Category::IncompleteComparison,
    ];
    for (r, want) in rows.iter().zip(expected) {
        ensure(r.label.category == want, || {
            format!("{:?}: got {}, want {want}", r.record.corrected, r.label.category)
        })?;
    }
    let plausible = [
        (Category::EventComparison, true),
        (Category::IndividualComparison, true),
        (Category::EventNegation, true),
        (Category::DoubleComparison, true),
        (Category::NoChange, false),
        (Category::IncompleteComparison, false),
        (Category::Blended, false),
        (Category::Outlier, false),
        (Category::Ungrammatical, false),
    ];
    for (c, want) in plausible {
        ensure(InterpretationLabel::from(c).plausible == want, || {
            format!("plausibility of {c}")
        })?;
    }
    Ok("5 example pairs, 9 plausibility flags".into())
}

fn slor_checks() -> Check {
    let v = slor_from_parts(-20.0, -30.0, 10).0;
    ensure((v - 1.0).abs() < 1e-12, || format!("slor(-20,-30,10) = {v}"))?;
    let table = UnigramTable::from_counts([("more", 4u64), ("people", 2), ("came", 1), ("than", 3)], true)
        .map_err(|e| e.to_string())?;
    let tokens = tokenize("More people came than");
    let lps: Vec<f64> = tokens.iter().map(|w| table.log_prob(w).unwrap()).collect();
    let sentence = ScoredSentence::new("More people came than", "m", vec![], lps).map_err(|e| e.to_string())?;
    let zero = slor(&sentence, &tokens, &table).map_err(|e| e.to_string())?.0;
    ensure(zero.abs() < 1e-12, || format!("slor with matching unigram = {zero}"))?;
    Ok("1.0 and 0.0 fixtures".into())
}

fn ordinal_regression() -> Check {
    // gradient against central differences
    let s = sample_cumulative_logit(400, &[-1.5, -0.3, 0.6, 1.8], &[0.7, -0.4, 0.2], 11);
    let m =
        CumulativeLogit::new(&s.responses, s.x, vec!["a".into(), "b".into(), "c".into()]).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let h = 1e-5;
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let params: Vec<f64> = (0..m.n_params()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let g = m.gradient(&params);
        let mut diff = 0.0;
        for j in 0..params.len() {
            let (mut up, mut down) = (params.clone(), params.clone());
            up[j] += h;
            down[j] -= h;
            let fd = (m.log_likelihood(&up) - m.log_likelihood(&down)) / (2.0 * h);
            diff += (g[j] - fd).powi(2);
        }
        let norm: f64 = g.iter().map(|v| v * v).sum();
        worst = worst.max((diff / norm).sqrt());
    }
    ensure(worst < 1e-4, || format!("gradient relative error {worst:e}"))?;

    // two categories against logistic regression
    let s = sample_cumulative_logit(800, &[0.3], &[1.1, -0.6], 13);
    let fit = CumulativeLogit::new(&s.responses, s.x.clone(), vec!["a".into(), "b".into()])
        .and_then(|m| m.fit(&FitOptions::default()))
        .map_err(|e| e.to_string())?;
    let y: Vec<bool> = s.responses.iter().map(|r| *r == 1).collect();
    let w = irls_logistic(&y, &s.x);
    let gap = (fit.thresholds[0] - w[0])
        .abs()
        .max((fit.coefficients["a"] + w[1]).abs())
        .max((fit.coefficients["b"] + w[2]).abs());
    ensure(gap < 1e-4, || format!("K=2 differs from logistic MLE by {gap:e}"))?;

    // recovery on n = 5000
    let start = Instant::now();
    let beta = [0.8, -0.5, 0.3];
    let s = sample_cumulative_logit(5000, &[-2.4, -1.3, -0.4, 0.5, 1.4, 2.5], &beta, 14);
    let names: Vec<String> = vec!["a".into(), "b".into(), "c".into()];
    let fit = CumulativeLogit::new(&s.responses, s.x, names.clone())
        .and_then(|m| m.fit(&FitOptions::default()))
        .map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    let err = names
        .iter()
        .zip(beta)
        .map(|(n, b)| (fit.coefficients[n] - b).abs())
        .fold(0.0, f64::max);
    ensure(fit.converged && err < 0.1, || {
        format!("recovery error {err}, converged={}", fit.converged)
    })?;
    ensure(secs < 60.0, || format!("recovery took {secs:.1}s"))?;
    Ok(format!(
        "gradient rel {worst:.1e}, K=2 gap {gap:.1e}, recovery max error {err:.3} in {secs:.2}s"
    ))
}

fn published_data() -> Option<Check> {
    let dir = PathBuf::from(std::env::var_os("NCC_OSF_DATA")?);
    Some(published_data_in(&dir))
}

fn published_data_in(dir: &Path) -> Check {
    let out = tempfile::tempdir().map_err(|e| e.to_string())?;
    let config = RunConfig {
        io: noisy_channel::config::IoConfig {
            stimuli: Some(dir.join("stimuli.csv")),
            corrections: Some(dir.join("corrections.csv")),
            trials: Some(dir.join("trials.csv")),
            out_dir: out.path().to_path_buf(),
        },
        scorer: noisy_channel::config::ScorerConfig {
            score_file: Some(dir.join("scores.jsonl")),
            ..Default::default()
        },
        unigram: noisy_channel::config::UnigramConfig {
            path: Some(dir.join("unigram.tsv")),
            smoothing: true,
        },
        ..RunConfig::default()
    };
    pipeline::run_pipeline(&config, Stage::All).map_err(|e| e.to_string())?;
    let labeled = noisy_channel::classify::load_labeled(&out.path().join("labeled.csv")).map_err(|e| e.to_string())?;
    let plausible = labeled.iter().filter(|r| r.label.plausible).count() as f64;
    let total = labeled.len() as f64;
    ensure((total - 5970.0).abs() <= 0.02 * 5970.0, || format!("{total} responses"))?;
    ensure((plausible - 4965.0).abs() <= 0.02 * 4965.0, || {
        format!("{plausible} plausible corrections")
    })?;
    let corr: CorrelationReport =
        serde_json::from_slice(&std::fs::read(out.path().join("correlation.json")).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
    ensure((corr.r - 0.492).abs() <= 0.02 && corr.p < 0.001, || {
        format!("r = {:.3}, p = {:.2e}", corr.r, corr.p)
    })?;
    let reg: RegressionReport =
        serde_json::from_slice(&std::fs::read(out.path().join("regression.json")).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
    let model = |label: &str| reg.models.iter().find(|m| m.label == label).unwrap();
    let aic = |label: &str| reg.ranking.iter().find(|m| m.label == label).unwrap().aic;
    let mean_coef = model("base+mean").fit.coefficients["fmean"];
    let joint = &model("base+max+mean").fit.coefficients;
    ensure(mean_coef > 0.0, || format!("f_mean coefficient {mean_coef}"))?;
    ensure(joint["fmean"] > joint["fmax"], || {
        format!("joint fit f_mean {} vs f_max {}", joint["fmean"], joint["fmax"])
    })?;
    ensure(aic("base+mean") < aic("base"), || "AIC(base+mean) >= AIC(base)".into())?;
    Ok(format!("{total} responses, {plausible} plausible, r = {:.3}", corr.r))
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut config = RunConfig::load(&fixture("demo/run.json")).map_err(|e| e.to_string())?;
    config.io.out_dir = dir.path().to_path_buf();
    let csvs = |d: &Path| -> Vec<(String, Vec<u8>)> {
        let mut v: Vec<_> = std::fs::read_dir(d)
            .unwrap()
            .map(|e| e.unwrap().path())
            .filter(|p| p.extension().is_some_and(|e| e == "csv"))
            .map(|p| (p.display().to_string(), std::fs::read(&p).unwrap()))
            .collect();
        v.sort();
        v
    };
    pipeline::run_pipeline(&config, Stage::All).map_err(|e| e.to_string())?;
    let first = csvs(dir.path());
    pipeline::run_pipeline(&config, Stage::All).map_err(|e| e.to_string())?;
    let second = csvs(dir.path());
    ensure(first.len() >= 5, || format!("only {} CSV artifacts", first.len()))?;
    ensure(first == second, || "CSV artifacts differ between runs".into())?;
    Ok(format!("{} CSV artifacts identical across runs", first.len()))
}

fn outcome(check: Check) -> Outcome {
    match check {
        Ok(m) => Outcome::Pass(m),
        Err(m) => Outcome::Fail(m),
    }
}

fn main() {
    let outcomes = [
        ("DLD oracle equivalence", outcome(dld_oracle())),
        ("Noise model", outcome(noise_model())),
        ("Posterior shift invariance", outcome(shift_invariance())),
        ("Link arithmetic", outcome(link_arithmetic())),
        ("Classifier fixture", outcome(classifier_fixture())),
        ("SLOR", outcome(slor_checks())),
        ("Ordinal regression", outcome(ordinal_regression())),
        (
            "Pipeline reproduction on published data",
            published_data()
                .map(outcome)
                .unwrap_or_else(|| Outcome::Skip("NCC_OSF_DATA not set; data not available locally".into())),
        ),
        ("Determinism", outcome(determinism())),
    ];

    let mut failed = 0;
    for (name, outcome) in &outcomes {
        match outcome {
            Outcome::Pass(m) => println!("PASS  {name}: {m}"),
            Outcome::Skip(m) => println!("SKIP  {name}: {m}"),
            Outcome::Fail(m) => {
                failed += 1;
                println!("FAIL  {name}: {m}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
