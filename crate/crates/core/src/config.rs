//! Run configuration for the end-to-end pipeline.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::analysis::{FitOptions, Predictor};
use crate::classify::{ClassifierConfig, DEFAULT_NEGATION_LEXICON};
use crate::error::{Error, Result};
use crate::lm::HttpProviderConfig;
use crate::noise::NoiseParams;
use crate::posterior::{AlternativeOptions, LinkFunction};
use crate::text::EditMetric;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProviderKind {
    File,
    Http,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScorerConfig {
    pub provider: ProviderKind,
    /// Score file used by the `file` provider.
    pub score_file: Option<PathBuf>,
    pub url: String,
    pub model: Option<String>,
    pub max_inflight: usize,
    pub max_batch: usize,
    pub timeout_secs: u64,
}

impl Default for ScorerConfig {
    fn default() -> Self {
        let http = HttpProviderConfig::default();
        Self {
            provider: ProviderKind::File,
            score_file: None,
            url: http.url,
            model: None,
            max_inflight: http.max_inflight,
            max_batch: http.max_batch,
            timeout_secs: http.timeout_secs,
        }
    }
}

impl ScorerConfig {
    pub fn http_config(&self) -> HttpProviderConfig {
        HttpProviderConfig {
            url: self.url.clone(),
            model: self.model.clone(),
            max_inflight: self.max_inflight,
            max_batch: self.max_batch,
            timeout_secs: self.timeout_secs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseConfig {
    pub beta: f64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self { beta: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UnigramConfig {
    pub path: Option<PathBuf>,
    pub smoothing: bool,
}

impl Default for UnigramConfig {
    fn default() -> Self {
        Self {
            path: None,
            smoothing: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassifierOptions {
    pub negation_lexicon: Vec<String>,
    /// Use plain Levenshtein distance instead of the transposition-aware variant.
    pub no_transpositions: bool,
}

impl Default for ClassifierOptions {
    fn default() -> Self {
        Self {
            negation_lexicon: DEFAULT_NEGATION_LEXICON.iter().map(|s| s.to_string()).collect(),
            no_transpositions: false,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IoConfig {
    /// `item_id, subject_form, number, text`
    pub stimuli: Option<PathBuf>,
    pub corrections: Option<PathBuf>,
    pub trials: Option<PathBuf>,
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkSelection {
    Max,
    Mean,
    Weighted,
    All,
}

impl LinkSelection {
    pub fn functions(self) -> Vec<LinkFunction> {
        match self {
            LinkSelection::Max => vec![LinkFunction::Max],
            LinkSelection::Mean => vec![LinkFunction::Mean],
            LinkSelection::Weighted => vec![LinkFunction::Weighted],
            LinkSelection::All => vec![LinkFunction::Max, LinkFunction::Mean, LinkFunction::Weighted],
        }
    }
}

impl std::str::FromStr for LinkSelection {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "max" => Ok(Self::Max),
            "mean" => Ok(Self::Mean),
            "weighted" => Ok(Self::Weighted),
            "all" => Ok(Self::All),
            other => Err(format!("unknown link '{other}' (max|mean|weighted|all)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub scorer: ScorerConfig,
    pub noise: NoiseConfig,
    pub unigram: UnigramConfig,
    pub classifier: ClassifierOptions,
    pub io: IoConfig,
    pub dedupe: bool,
    /// Use implausible corrections as alternatives too.
    pub include_all_corrections: bool,
    pub link: LinkSelection,
    /// Control predictors shared by every regression model.
    pub predictors: Vec<Predictor>,
    pub fit: FitOptions,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            scorer: ScorerConfig::default(),
            noise: NoiseConfig::default(),
            unigram: UnigramConfig::default(),
            classifier: ClassifierOptions::default(),
            io: IoConfig {
                out_dir: PathBuf::from("out"),
                ..IoConfig::default()
            },
            dedupe: false,
            include_all_corrections: false,
            link: LinkSelection::All,
            predictors: vec![Predictor::Slor, Predictor::Order, Predictor::Baseline],
            fit: FitOptions::default(),
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// Loads a JSON config. Relative paths inside it are resolved against
    /// the config file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut config = Self::from_json(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })?;
        if let Some(base) = path.parent() {
            config.resolve_paths(base);
        }
        Ok(config)
    }

    fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        for p in [
            self.scorer.score_file.as_mut(),
            self.unigram.path.as_mut(),
            self.io.stimuli.as_mut(),
            self.io.corrections.as_mut(),
            self.io.trials.as_mut(),
            Some(&mut self.io.out_dir),
        ]
        .into_iter()
        .flatten()
        {
            fix(p);
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.noise.beta > 0.0 && self.noise.beta.is_finite()) {
            return Err(Error::Config(format!(
                "noise.beta must be positive, got {}",
                self.noise.beta
            )));
        }
        if self.scorer.max_inflight == 0 || self.scorer.max_batch == 0 {
            return Err(Error::Config(
                "scorer.max_inflight and scorer.max_batch must be at least 1".into(),
            ));
        }
        if self
            .predictors
            .iter()
            .any(|p| matches!(p, Predictor::FMax | Predictor::FMean))
        {
            return Err(Error::Config(
                "predictors lists the shared controls; link predictors are added per model".into(),
            ));
        }
        Ok(())
    }

    pub fn noise_params(&self) -> Result<NoiseParams> {
        NoiseParams::new(self.noise.beta).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn classifier_config(&self) -> ClassifierConfig {
        ClassifierConfig {
            negation_lexicon: self.classifier.negation_lexicon.to_vec(),
            metric: if self.classifier.no_transpositions {
                EditMetric::Levenshtein
            } else {
                EditMetric::OptimalStringAlignment
            },
        }
    }

    pub fn alternative_options(&self) -> AlternativeOptions {
        AlternativeOptions {
            include_implausible: self.include_all_corrections,
            dedupe: self.dedupe,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// SHA-256 of the compact JSON form; identifies the run in artifact headers.
    pub fn hash(&self) -> String {
        let compact = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(compact))
    }
}
