//! Config-driven stages: score → classify → posterior → analyze.
//!
//! Every stage reads its inputs from the configured paths or from the
//! output directory and writes its artifacts there. CSV artifacts start
//! with a `# config_sha256=...` line and JSON artifacts carry a
//! `config_sha256` field.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::analysis::{self, DesignRow, OrdinalFit, Predictor, RankedModel, StimulusKey};
use crate::classify::{self, CategorySummary, Classifier};
use crate::condition::{Condition, Number, SubjectForm};
use crate::config::{ProviderKind, RunConfig};
use crate::error::{Error, Result};
use crate::lm::{self, FileProvider, HttpProvider, SentenceScorer, UnigramTable};
use crate::posterior::{self, LinkValues};
use crate::text::tokenize;

pub const CONFIG_FILE: &str = "config.json";
pub const SCORES_FILE: &str = "scores.jsonl";
pub const SCORES_META_FILE: &str = "scores.meta.json";
pub const SLOR_FILE: &str = "slor.csv";
pub const LABELED_FILE: &str = "labeled.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const LINKS_FILE: &str = "links.csv";
pub const DIFFERENCES_FILE: &str = "differences.csv";
pub const CORRELATION_FILE: &str = "correlation.json";
pub const DESIGN_FILE: &str = "design.csv";
pub const REGRESSION_FILE: &str = "regression.json";
pub const MANIFEST_FILE: &str = "manifest.json";

const HASH_KEY: &str = "config_sha256=";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Score,
    Classify,
    Posterior,
    Analyze,
    All,
}

impl FromStr for Stage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "score" => Ok(Stage::Score),
            "classify" => Ok(Stage::Classify),
            "posterior" => Ok(Stage::Posterior),
            "analyze" => Ok(Stage::Analyze),
            "all" => Ok(Stage::All),
            other => Err(Error::Config(format!("unknown stage '{other}'"))),
        }
    }
}

/// One experimental sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stimulus {
    pub item_id: String,
    pub condition: Condition,
    pub text: String,
}

#[derive(Deserialize)]
struct StimulusRow {
    item_id: String,
    subject_form: String,
    number: String,
    text: String,
}

/// Reads the stimuli CSV (`item_id, subject_form, number, text`).
pub fn read_stimuli<R: Read>(reader: R, source: &str) -> Result<Vec<Stimulus>> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(reader);
    let mut out = Vec::new();
    for row in rdr.deserialize::<StimulusRow>() {
        let row = row.map_err(|e| classify::csv_error(source, &e))?;
        let bad = |message: String| Error::Parse {
            path: source.to_owned(),
            line: out.len() as u64 + 2,
            message,
        };
        let subject_form: SubjectForm = row.subject_form.parse().map_err(bad)?;
        let number: Number = row.number.parse().map_err(bad)?;
        if row.text.trim().is_empty() {
            return Err(bad("empty text".into()));
        }
        out.push(Stimulus {
            item_id: row.item_id,
            condition: Condition::new(subject_form, number),
            text: row.text.trim().to_owned(),
        });
    }
    Ok(out)
}

pub fn load_stimuli(path: &Path) -> Result<Vec<Stimulus>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_stimuli(file, &path.display().to_string())
}

/// Per-stimulus SLOR with its ingredients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlorRow {
    pub item_id: String,
    pub condition: String,
    pub text: String,
    pub n_words: usize,
    pub model_logprob: f64,
    pub unigram_logprob: f64,
    pub slor: f64,
}

pub fn slor_rows(stimuli: &[Stimulus], scores: &FileProvider, unigram: &UnigramTable) -> Result<Vec<SlorRow>> {
    stimuli
        .iter()
        .map(|s| {
            let scored = scores.get(&s.text).ok_or_else(|| Error::TextNotFound(s.text.clone()))?;
            let tokens = tokenize(&s.text);
            let unigram_logprob = lm::unigram_logprob(&tokens, unigram)?;
            Ok(SlorRow {
                item_id: s.item_id.clone(),
                condition: s.condition.to_string(),
                text: s.text.clone(),
                n_words: tokens.len(),
                model_logprob: scored.total_logprob,
                unigram_logprob,
                slor: lm::slor_from_parts(scored.total_logprob, unigram_logprob, tokens.len()).0,
            })
        })
        .collect()
}

pub fn write_slor<W: Write>(out: W, rows: &[SlorRow], preamble: &[String]) -> Result<()> {
    write_csv(out, "<slor>", preamble, rows)
}

pub fn read_slor<R: Read>(reader: R, source: &str) -> Result<Vec<SlorRow>> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(reader);
    rdr.deserialize()
        .map(|r| r.map_err(|e| classify::csv_error(source, &e)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct DifferenceRow {
    item_id: String,
    condition: String,
    diff: f64,
    mean_distance: Option<f64>,
}

fn write_csv<W: Write, T: Serialize>(mut out: W, name: &str, preamble: &[String], rows: &[T]) -> Result<()> {
    let io = |e: std::io::Error| Error::io(name, e);
    for line in preamble {
        writeln!(out, "# {line}").map_err(io)?;
    }
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Error::io(name, std::io::Error::other(e)))?;
    }
    w.flush().map_err(io)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelReport {
    pub label: String,
    pub fit: OrdinalFit,
}

/// Contents of `regression.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionReport {
    pub config_sha256: String,
    pub n_obs: usize,
    pub models: Vec<ModelReport>,
    /// Ascending AIC; a surrogate for cross-validated model comparison.
    pub ranking: Vec<RankedModel>,
}

/// Contents of `correlation.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub config_sha256: String,
    pub r: f64,
    pub p: f64,
    pub n: usize,
    pub excluded_participants: Vec<String>,
    /// (item, condition) cells without any plausible correction.
    pub cells_without_distance: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct SummaryReport {
    config_sha256: String,
    n_records: usize,
    #[serde(flatten)]
    summary: CategorySummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub config_sha256: String,
    /// Seconds since the Unix epoch.
    pub created_unix: u64,
    pub artifacts: Vec<ManifestEntry>,
}

/// Paths and provenance shared by the stages of one run.
struct Run<'a> {
    config: &'a RunConfig,
    hash: String,
    out: PathBuf,
}

impl<'a> Run<'a> {
    fn new(config: &'a RunConfig) -> Result<Self> {
        let out = config.io.out_dir.clone();
        std::fs::create_dir_all(&out).map_err(|e| Error::io(&out, e))?;
        let run = Self {
            config,
            hash: config.hash(),
            out,
        };
        run.write_bytes(CONFIG_FILE, format!("{}\n", config.to_json()).as_bytes())?;
        Ok(run)
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    fn preamble(&self) -> Vec<String> {
        vec![format!("{HASH_KEY}{}", self.hash)]
    }

    fn create(&self, name: &str) -> Result<BufWriter<File>> {
        let path = self.path(name);
        let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
        Ok(BufWriter::new(file))
    }

    fn write_bytes(&self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.path(name);
        std::fs::write(&path, bytes).map_err(|e| Error::io(&path, e))
    }

    fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value).expect("report serializes");
        text.push('\n');
        self.write_bytes(name, text.as_bytes())
    }

    fn required<'p>(&self, path: &'p Option<PathBuf>, key: &str) -> Result<&'p Path> {
        path.as_deref()
            .ok_or_else(|| Error::Config(format!("{key} is required for this stage")))
    }

    /// Opens an upstream artifact, warning when it was produced under a
    /// different config.
    fn open_upstream(&self, name: &str) -> Result<File> {
        let path = self.path(name);
        let file = File::open(&path).map_err(|e| Error::io(&path, e))?;
        match artifact_hash(&path)? {
            Some(h) if h != self.hash => {
                log::warn!(
                    "{} was produced with config {h}, current config is {}",
                    path.display(),
                    self.hash
                )
            }
            None => log::warn!("{} has no config hash", path.display()),
            _ => {}
        }
        Ok(file)
    }

    fn score(&self) -> Result<()> {
        let stimuli = match &self.config.io.stimuli {
            Some(p) => load_stimuli(p)?,
            None => Vec::new(),
        };
        let corrections = match &self.config.io.corrections {
            Some(p) => classify::load_corrections(p)?,
            None => Vec::new(),
        };
        if stimuli.is_empty() && corrections.is_empty() {
            return Err(Error::Config(
                "io.stimuli or io.corrections is required for the score stage".into(),
            ));
        }
        let mut texts: BTreeSet<String> = stimuli.iter().map(|s| s.text.clone()).collect();
        for c in &corrections {
            texts.insert(c.perceived.trim().to_owned());
            texts.insert(c.corrected.trim().to_owned());
        }
        let texts: Vec<String> = texts.into_iter().collect();

        let scorer: Box<dyn SentenceScorer> = match self.config.scorer.provider {
            ProviderKind::File => {
                let source = self.required(&self.config.scorer.score_file, "scorer.score_file")?;
                Box::new(FileProvider::open(source, self.config.scorer.model.as_deref())?)
            }
            ProviderKind::Http => Box::new(HttpProvider::connect(self.config.scorer.http_config())?),
        };
        log::info!("scoring {} sentences with {}", texts.len(), scorer.model_id());
        let scored = lm::score_sentences(&texts, scorer.as_ref())?;

        let mut out = self.create(SCORES_FILE)?;
        lm::write_score_lines(&mut out, &scored).map_err(|e| Error::io(self.path(SCORES_FILE), e))?;
        self.write_json(
            SCORES_META_FILE,
            &serde_json::json!({
                "config_sha256": self.hash,
                "model": scorer.model_id(),
                "n_sentences": scored.len(),
            }),
        )?;

        match (&self.config.unigram.path, stimuli.is_empty()) {
            (Some(path), false) => {
                let table = UnigramTable::load(path, self.config.unigram.smoothing)?;
                let provider = FileProvider::from_scores(scored, None)?;
                let rows = slor_rows(&stimuli, &provider, &table)?;
                write_slor(self.create(SLOR_FILE)?, &rows, &self.preamble())?;
            }
            (None, false) => log::warn!("unigram.path not set; skipping {SLOR_FILE}"),
            _ => {}
        }
        Ok(())
    }

    fn classify(&self) -> Result<()> {
        let path = self.required(&self.config.io.corrections, "io.corrections")?;
        let records = classify::load_corrections(path)?;
        let corpus = Classifier::new(self.config.classifier_config()).classify_corpus(&records);
        classify::write_labeled(self.create(LABELED_FILE)?, &corpus.rows, &self.preamble())?;
        self.write_json(
            SUMMARY_FILE,
            &SummaryReport {
                config_sha256: self.hash.clone(),
                n_records: corpus.rows.len(),
                summary: corpus.summary,
            },
        )
    }

    fn posterior(&self) -> Result<()> {
        let labeled = classify::read_labeled(self.open_upstream(LABELED_FILE)?, LABELED_FILE)?;
        let scores = FileProvider::open(&self.path(SCORES_FILE), self.config.scorer.model.as_deref())?;
        let (rows, empty) = posterior::link_corpus(
            &labeled,
            &scores,
            &self.config.noise_params()?,
            self.config.alternative_options(),
        )?;
        for text in &empty {
            log::warn!("no usable corrections for '{text}'");
        }
        posterior::write_links(
            self.create(LINKS_FILE)?,
            &rows,
            &self.config.link.functions(),
            &self.preamble(),
        )
    }

    fn analyze(&self) -> Result<()> {
        let trials_path = self.required(&self.config.io.trials, "io.trials")?;
        let trials = analysis::load_trials(trials_path)?;
        let labeled = classify::read_labeled(self.open_upstream(LABELED_FILE)?, LABELED_FILE)?;

        let z = analysis::zscore_by_participant(&trials);
        let diffs = analysis::acceptability_differences(&z.rows)?;
        let distances = analysis::item_mean_distances(&labeled, true);
        let diff_rows: Vec<DifferenceRow> = diffs
            .iter()
            .map(|d| DifferenceRow {
                item_id: d.item_id.clone(),
                condition: d.condition.to_string(),
                diff: d.diff,
                mean_distance: distances.get(&(d.item_id.clone(), d.condition)).copied(),
            })
            .collect();
        write_csv(
            self.create(DIFFERENCES_FILE)?,
            DIFFERENCES_FILE,
            &self.preamble(),
            &diff_rows,
        )?;
        let (x, y): (Vec<f64>, Vec<f64>) = diff_rows
            .iter()
            .filter_map(|r| Some((r.mean_distance?, r.diff)))
            .unzip();
        let corr = analysis::pearson(&x, &y)?;
        self.write_json(
            CORRELATION_FILE,
            &CorrelationReport {
                config_sha256: self.hash.clone(),
                r: corr.r,
                p: corr.p,
                n: corr.n,
                excluded_participants: z.excluded.clone(),
                cells_without_distance: diff_rows.len() - x.len(),
            },
        )?;

        let design = self.design(&trials)?;
        analysis::write_design(self.create(DESIGN_FILE)?, &design, &self.preamble())?;
        let report = fit_models(&design, &self.config.predictors, &self.config.fit, &self.hash)?;
        self.write_json(REGRESSION_FILE, &report)?;
        if let Some(m) = report.models.iter().find(|m| !m.fit.converged) {
            return Err(Error::NotConverged {
                iterations: m.fit.iterations,
                grad_norm: m.fit.grad_norm,
            });
        }
        Ok(())
    }

    fn design(&self, trials: &[analysis::TrialRecord]) -> Result<Vec<DesignRow>> {
        let link_rows = posterior::read_links(self.open_upstream(LINKS_FILE)?, LINKS_FILE)?;
        let mut links: BTreeMap<StimulusKey, LinkValues> = BTreeMap::new();
        for row in link_rows {
            if row.links.f_max.is_nan() || row.links.f_mean.is_nan() {
                return Err(Error::Config(format!(
                    "{LINKS_FILE} must include f_max and f_mean; set link to \"all\""
                )));
            }
            let key = (row.item_id.clone(), row.condition);
            if let Some(prev) = links.insert(key, row.links.clone()) {
                return Err(Error::MixedPerceived(prev.perceived_text, row.links.perceived_text));
            }
        }
        let slor_rows = read_slor(self.open_upstream(SLOR_FILE)?, SLOR_FILE)?;
        let mut slor = BTreeMap::new();
        for r in slor_rows {
            let condition = r.condition.parse().map_err(Error::Config)?;
            slor.insert((r.item_id, condition), r.slor);
        }
        analysis::build_design(trials, &links, &slor, &analysis::item_baselines(trials))
    }

    fn manifest(&self) -> Result<()> {
        let mut artifacts = Vec::new();
        for name in [
            CONFIG_FILE,
            SCORES_FILE,
            SCORES_META_FILE,
            SLOR_FILE,
            LABELED_FILE,
            SUMMARY_FILE,
            LINKS_FILE,
            DIFFERENCES_FILE,
            CORRELATION_FILE,
            DESIGN_FILE,
            REGRESSION_FILE,
        ] {
            let path = self.path(name);
            if !path.exists() {
                continue;
            }
            let bytes = std::fs::read(&path).map_err(|e| Error::io(&path, e))?;
            artifacts.push(ManifestEntry {
                path: name.to_owned(),
                bytes: bytes.len() as u64,
                sha256: hex::encode(Sha256::digest(&bytes)),
            });
        }
        let created_unix = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        self.write_json(
            MANIFEST_FILE,
            &Manifest {
                config_sha256: self.hash.clone(),
                created_unix,
                artifacts,
            },
        )
    }
}

/// Fits the control-only model and each link-augmented model on the same design.
pub fn fit_models(
    design: &[DesignRow],
    base: &[Predictor],
    options: &analysis::FitOptions,
    hash: &str,
) -> Result<RegressionReport> {
    let with = |extra: &[Predictor]| -> Vec<Predictor> { base.iter().chain(extra).copied().collect() };
    let specs = [
        ("base", with(&[])),
        ("base+max", with(&[Predictor::FMax])),
        ("base+mean", with(&[Predictor::FMean])),
        ("base+max+mean", with(&[Predictor::FMax, Predictor::FMean])),
    ];
    let mut models = Vec::new();
    for (label, predictors) in specs {
        log::info!("fitting {label}");
        let fit = analysis::fit_cumulative_logit(design, &predictors, options)?;
        models.push(ModelReport {
            label: label.to_owned(),
            fit,
        });
    }
    let pairs: Vec<(String, OrdinalFit)> = models.iter().map(|m| (m.label.clone(), m.fit.clone())).collect();
    Ok(RegressionReport {
        config_sha256: hash.to_owned(),
        n_obs: design.len(),
        ranking: analysis::compare_models(&pairs)?,
        models,
    })
}

/// Returns the `config_sha256` recorded in an artifact: the first
/// preamble line of a CSV or the top-level field of a JSON document.
pub fn artifact_hash(path: &Path) -> Result<Option<String>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    if path.extension().is_some_and(|e| e == "json") {
        let value: serde_json::Value = serde_json::from_reader(BufReader::new(file)).map_err(|e| Error::Parse {
            path: path.display().to_string(),
            line: 0,
            message: e.to_string(),
        })?;
        return Ok(value.get("config_sha256").and_then(|v| v.as_str()).map(str::to_owned));
    }
    let mut first = String::new();
    BufReader::new(file)
        .read_line(&mut first)
        .map_err(|e| Error::io(path, e))?;
    Ok(first
        .trim()
        .strip_prefix('#')
        .and_then(|rest| rest.trim().strip_prefix(HASH_KEY))
        .map(str::to_owned))
}

/// Runs one stage, or all of them in order followed by the manifest.
pub fn run_pipeline(config: &RunConfig, stage: Stage) -> Result<()> {
    config.validate()?;
    let run = Run::new(config)?;
    match stage {
        Stage::Score => run.score(),
        Stage::Classify => run.classify(),
        Stage::Posterior => run.posterior(),
        Stage::Analyze => run.analyze(),
        Stage::All => {
            run.score()?;
            run.classify()?;
            run.posterior()?;
            let analyzed = run.analyze();
            run.manifest()?;
            analyzed
        }
    }
}
