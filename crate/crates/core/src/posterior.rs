//! Approximate noisy-channel posteriors of intended sentences and the
//! linking functions that aggregate them per perceived sentence.
//!
//! The prior and the evidence are both language-model sentence
//! probabilities and the channel term is `exp(-beta * distance)`, so the
//! posterior is unnormalized and can exceed one.

use std::collections::BTreeMap;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::classify::LabeledRecord;
use crate::condition::Condition;
use crate::error::{Error, Result};
use crate::lm::{ScoredSentence, SentenceScorer};
use crate::noise::{log_likelihood, NoiseParams};
use crate::text::EditDistance;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorEstimate {
    pub perceived_text: String,
    pub intended_text: String,
    pub log_prior: f64,
    pub log_noise: f64,
    pub log_evidence: f64,
    pub log_posterior: f64,
}

impl PosteriorEstimate {
    pub fn posterior(&self) -> f64 {
        self.log_posterior.exp()
    }
}

/// Posterior of `intended` given `perceived` at word distance `d`.
pub fn posterior_estimate(
    intended: &ScoredSentence,
    perceived: &ScoredSentence,
    d: EditDistance,
    params: &NoiseParams,
) -> Result<PosteriorEstimate> {
    if intended.model_id != perceived.model_id {
        return Err(Error::ModelMismatch(
            intended.model_id.clone(),
            perceived.model_id.clone(),
        ));
    }
    let log_prior = intended.total_logprob;
    let log_noise = log_likelihood(d, params);
    let log_evidence = perceived.total_logprob;
    Ok(PosteriorEstimate {
        perceived_text: perceived.text.clone(),
        intended_text: intended.text.clone(),
        log_prior,
        log_noise,
        log_evidence,
        log_posterior: log_prior + log_noise - log_evidence,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkFunction {
    Max,
    Mean,
    Weighted,
}

impl FromStr for LinkFunction {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "max" => Ok(LinkFunction::Max),
            "mean" => Ok(LinkFunction::Mean),
            "weighted" => Ok(LinkFunction::Weighted),
            other => Err(format!("unknown link function {other:?}")),
        }
    }
}

/// Aggregated posteriors for one perceived sentence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkValues {
    pub perceived_text: String,
    pub f_max: f64,
    pub f_mean: f64,
    pub f_weighted: f64,
    pub n_alternatives: usize,
}

impl LinkValues {
    pub fn get(&self, link: LinkFunction) -> f64 {
        match link {
            LinkFunction::Max => self.f_max,
            LinkFunction::Mean => self.f_mean,
            LinkFunction::Weighted => self.f_weighted,
        }
    }
}

fn log_sum_exp(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let max = values.clone().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + crate::numeric::compensated_sum(values.map(|v| (v - max).exp())).ln()
}

/// Max, mean and posterior-weighted mean of the alternatives' posteriors.
///
/// Every alternative counts, duplicates included. The aggregation is done
/// with log-sum-exp so that very small or very large posteriors neither
/// underflow nor overflow before the final exponentiation.
pub fn link_values(perceived_text: &str, alternatives: &[PosteriorEstimate]) -> Result<LinkValues> {
    if alternatives.is_empty() {
        return Err(Error::EmptyAlternatives(perceived_text.to_owned()));
    }
    if let Some(other) = alternatives.iter().find(|a| a.perceived_text != perceived_text) {
        return Err(Error::MixedPerceived(
            perceived_text.to_owned(),
            other.perceived_text.clone(),
        ));
    }
    let logs = alternatives.iter().map(|a| a.log_posterior);
    let n = alternatives.len();
    let log_max = logs.clone().fold(f64::NEG_INFINITY, f64::max);
    let lse = log_sum_exp(logs.clone());
    let lse_sq = log_sum_exp(logs.map(|l| 2.0 * l));
    Ok(LinkValues {
        perceived_text: perceived_text.to_owned(),
        f_max: log_max.exp(),
        f_mean: (lse - (n as f64).ln()).exp(),
        f_weighted: (lse_sq - lse).exp(),
        n_alternatives: n,
    })
}

/// Which corrections form the alternative set of a perceived sentence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(default)]
pub struct AlternativeOptions {
    /// Use every correction, not only the plausible ones.
    pub include_implausible: bool,
    /// Collapse identical corrections of the same sentence into one.
    pub dedupe: bool,
}

/// Link values of one perceived stimulus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkRow {
    pub item_id: String,
    pub condition: Condition,
    pub links: LinkValues,
}

/// Groups labeled corrections by stimulus and computes link values for each.
///
/// Stimuli whose alternative set ends up empty are skipped and returned in
/// the second element.
pub fn link_corpus<S: SentenceScorer + ?Sized>(
    rows: &[LabeledRecord],
    scorer: &S,
    params: &NoiseParams,
    options: AlternativeOptions,
) -> Result<(Vec<LinkRow>, Vec<String>)> {
    type Key = (String, Condition, String);
    let mut groups: BTreeMap<Key, Vec<&LabeledRecord>> = BTreeMap::new();
    for r in rows {
        let key = (
            r.record.item_id.clone(),
            r.record.condition(),
            r.record.perceived.trim().to_owned(),
        );
        groups.entry(key).or_default().push(r);
    }

    let mut out = Vec::new();
    let mut empty = Vec::new();
    for ((item_id, condition, perceived), members) in groups {
        let mut chosen: Vec<&LabeledRecord> = members
            .into_iter()
            .filter(|r| options.include_implausible || r.label.plausible)
            .collect();
        if options.dedupe {
            let mut seen = std::collections::BTreeSet::new();
            chosen.retain(|r| seen.insert(r.record.corrected.trim().to_owned()));
        }
        if chosen.is_empty() {
            empty.push(perceived);
            continue;
        }
        let mut texts = vec![perceived.clone()];
        texts.extend(chosen.iter().map(|r| r.record.corrected.trim().to_owned()));
        let scored = crate::lm::score_sentences(&texts, scorer)?;
        let (s_p, alternatives) = scored.split_first().expect("perceived is scored");
        let estimates = alternatives
            .iter()
            .zip(&chosen)
            .map(|(s_i, r)| posterior_estimate(s_i, s_p, r.distance, params))
            .collect::<Result<Vec<_>>>()?;
        out.push(LinkRow {
            item_id,
            condition,
            links: link_values(&s_p.text, &estimates)?,
        });
    }
    Ok((out, empty))
}

pub const LINKS_HEADER: [&str; 7] = [
    "perceived_text",
    "item_id",
    "condition",
    "n_alternatives",
    "f_max",
    "f_mean",
    "f_weighted",
];

/// Writes link rows as CSV. Columns of links not in `selected` are left
/// empty.
pub fn write_links<W: Write>(
    mut out: W,
    rows: &[LinkRow],
    selected: &[LinkFunction],
    preamble: &[String],
) -> Result<()> {
    let io = |e: std::io::Error| Error::io("<links>", e);
    for line in preamble {
        writeln!(out, "# {line}").map_err(io)?;
    }
    let mut w = csv::Writer::from_writer(out);
    let wrap = |e: csv::Error| Error::io("<links>", std::io::Error::other(e));
    w.write_record(LINKS_HEADER).map_err(wrap)?;
    let cell = |row: &LinkRow, link: LinkFunction| {
        if selected.contains(&link) {
            format!("{}", row.links.get(link))
        } else {
            String::new()
        }
    };
    for r in rows {
        w.write_record([
            r.links.perceived_text.clone(),
            r.item_id.clone(),
            r.condition.to_string(),
            r.links.n_alternatives.to_string(),
            cell(r, LinkFunction::Max),
            cell(r, LinkFunction::Mean),
            cell(r, LinkFunction::Weighted),
        ])
        .map_err(wrap)?;
    }
    w.flush().map_err(io)
}

#[derive(Deserialize)]
struct LinkCsvRow {
    perceived_text: String,
    item_id: String,
    condition: String,
    n_alternatives: usize,
    f_max: Option<f64>,
    f_mean: Option<f64>,
    f_weighted: Option<f64>,
}

/// Reads a links CSV. Empty link columns come back as NaN.
pub fn read_links<R: std::io::Read>(reader: R, source: &str) -> Result<Vec<LinkRow>> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(reader);
    let mut out = Vec::new();
    for row in rdr.deserialize::<LinkCsvRow>() {
        let row = row.map_err(|e| crate::classify::csv_error(source, &e))?;
        let condition = row.condition.parse().map_err(|message| Error::Parse {
            path: source.to_owned(),
            line: out.len() as u64 + 2,
            message,
        })?;
        out.push(LinkRow {
            item_id: row.item_id,
            condition,
            links: LinkValues {
                perceived_text: row.perceived_text,
                f_max: row.f_max.unwrap_or(f64::NAN),
                f_mean: row.f_mean.unwrap_or(f64::NAN),
                f_weighted: row.f_weighted.unwrap_or(f64::NAN),
                n_alternatives: row.n_alternatives,
            },
        });
    }
    Ok(out)
}
