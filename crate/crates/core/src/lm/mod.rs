//! Sentence probabilities from pluggable providers, unigram frequencies and
//! the SLOR acceptability measure.

mod file;
mod http;
mod unigram;

use serde::{Deserialize, Serialize};

pub(crate) use file::write_score_lines;
pub use file::{read_score_file, write_score_file, FileProvider};
pub use http::{HttpProvider, HttpProviderConfig, LOG_BASE_HEADER};
pub use unigram::UnigramTable;

use crate::error::{Error, Result};
use crate::numeric::compensated_sum;
use crate::text::TokenSequence;

/// A sentence with its per-token natural-log probabilities under one model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredSentence {
    pub text: String,
    #[serde(rename = "model")]
    pub model_id: String,
    pub tokens: Vec<String>,
    pub token_logprobs: Vec<f64>,
    pub total_logprob: f64,
}

impl ScoredSentence {
    /// Builds a scored sentence, deriving the total from the token terms.
    pub fn new(
        text: impl Into<String>,
        model_id: impl Into<String>,
        tokens: Vec<String>,
        token_logprobs: Vec<f64>,
    ) -> Result<Self> {
        let text = text.into();
        if token_logprobs.is_empty() && !text.trim().is_empty() {
            return Err(Error::MalformedResponse(format!(
                "no token log-probabilities for {text:?}"
            )));
        }
        if !tokens.is_empty() && tokens.len() != token_logprobs.len() {
            return Err(Error::MalformedResponse(format!(
                "{} tokens but {} log-probabilities for {text:?}",
                tokens.len(),
                token_logprobs.len()
            )));
        }
        if let Some(bad) = token_logprobs.iter().find(|lp| !lp.is_finite() || **lp > 0.0) {
            return Err(Error::MalformedResponse(format!(
                "token log-probability {bad} out of range for {text:?}"
            )));
        }
        let total_logprob = compensated_sum(token_logprobs.iter().copied());
        Ok(Self {
            text,
            model_id: model_id.into(),
            tokens,
            token_logprobs,
            total_logprob,
        })
    }

    /// Like [`ScoredSentence::new`] but also checks a provider-reported total
    /// against the token sum.
    pub fn with_reported_total(
        text: impl Into<String>,
        model_id: impl Into<String>,
        tokens: Vec<String>,
        token_logprobs: Vec<f64>,
        reported_total: f64,
    ) -> Result<Self> {
        let scored = Self::new(text, model_id, tokens, token_logprobs)?;
        if (scored.total_logprob - reported_total).abs() > REPORTED_TOTAL_TOLERANCE {
            return Err(Error::MalformedResponse(format!(
                "reported total {reported_total} disagrees with token sum {} for {:?}",
                scored.total_logprob, scored.text
            )));
        }
        Ok(scored)
    }

    /// The same sentence with every total shifted by `c` (a shared
    /// normalizing constant). Token terms are left alone.
    pub fn shifted(&self, c: f64) -> Self {
        Self {
            total_logprob: self.total_logprob + c,
            ..self.clone()
        }
    }
}

/// Providers round to single precision internally, so their reported totals
/// are only trusted to this absolute tolerance.
pub const REPORTED_TOTAL_TOLERANCE: f64 = 1e-6;

/// Anything that can assign log-probabilities to sentences.
pub trait SentenceScorer: Sync {
    fn model_id(&self) -> &str;

    /// Scores `texts` in order. Implementations must be deterministic.
    fn score_batch(&self, texts: &[String]) -> Result<Vec<ScoredSentence>>;
}

/// Scores a list of sentences, preserving order.
pub fn score_sentences<S: SentenceScorer + ?Sized>(texts: &[String], provider: &S) -> Result<Vec<ScoredSentence>> {
    if texts.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if let Some(i) = texts.iter().position(|t| t.trim().is_empty()) {
        return Err(Error::InsufficientData(format!("sentence {i} is empty")));
    }
    let scored = provider.score_batch(texts)?;
    if scored.len() != texts.len() {
        return Err(Error::MalformedResponse(format!(
            "asked for {} scores, got {}",
            texts.len(),
            scored.len()
        )));
    }
    Ok(scored)
}

/// Sum of log unigram probabilities of the words in `tokens`.
pub fn unigram_logprob(tokens: &TokenSequence, table: &UnigramTable) -> Result<f64> {
    if tokens.is_empty() {
        return Err(Error::EmptyTokens);
    }
    let terms = tokens.iter().map(|w| table.log_prob(w)).collect::<Result<Vec<_>>>()?;
    Ok(compensated_sum(terms))
}

/// Syntactic log-odds ratio: model log-probability minus summed unigram
/// log-probability, per word.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SlorValue(pub f64);

/// SLOR of a scored sentence. The length is the normalized word count, not
/// the model's subword count.
pub fn slor(sentence: &ScoredSentence, tokens: &TokenSequence, table: &UnigramTable) -> Result<SlorValue> {
    let unigram = unigram_logprob(tokens, table)?;
    Ok(slor_from_parts(sentence.total_logprob, unigram, tokens.len()))
}

pub fn slor_from_parts(model_logprob: f64, unigram_logprob: f64, words: usize) -> SlorValue {
    SlorValue((model_logprob - unigram_logprob) / words as f64)
}

/// Converts a log-probability in `base` to natural log.
pub fn to_natural_log(value: f64, base: f64) -> f64 {
    if base == std::f64::consts::E {
        value
    } else {
        value * base.ln()
    }
}
