use std::collections::HashMap;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::Deserialize;

use super::{ScoredSentence, SentenceScorer};
use crate::error::{Error, Result};

#[derive(Deserialize)]
struct ScoreLine {
    text: String,
    model: String,
    #[serde(default)]
    tokens: Vec<String>,
    token_logprobs: Vec<f64>,
    total_logprob: f64,
}

/// Reads a JSON-lines score file (natural-log values).
pub fn read_score_file(path: &Path) -> Result<Vec<ScoredSentence>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_score_lines(BufReader::new(file), &path.display().to_string())
}

pub(crate) fn parse_score_lines<R: BufRead>(reader: R, source: &str) -> Result<Vec<ScoredSentence>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let parse_err = |message: String| Error::Parse {
            path: source.to_owned(),
            line: i as u64 + 1,
            message,
        };
        let line = line.map_err(|e| parse_err(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: ScoreLine = serde_json::from_str(&line).map_err(|e| parse_err(e.to_string()))?;
        let scored =
            ScoredSentence::with_reported_total(rec.text, rec.model, rec.tokens, rec.token_logprobs, rec.total_logprob)
                .map_err(|e| parse_err(e.to_string()))?;
        out.push(scored);
    }
    Ok(out)
}

pub fn write_score_file(path: &Path, scores: &[ScoredSentence]) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    write_score_lines(&mut out, scores).map_err(|e| Error::io(path, e))
}

pub(crate) fn write_score_lines<W: Write>(out: &mut W, scores: &[ScoredSentence]) -> std::io::Result<()> {
    for s in scores {
        serde_json::to_writer(&mut *out, s)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

/// Looks sentences up in a previously written score file.
#[derive(Debug, Clone)]
pub struct FileProvider {
    model_id: String,
    by_text: HashMap<String, ScoredSentence>,
}

impl FileProvider {
    /// Loads `path`, keeping entries for `model` (or the file's only model
    /// when `model` is `None`).
    pub fn open(path: &Path, model: Option<&str>) -> Result<Self> {
        let scores = read_score_file(path)?;
        Self::from_scores(scores, model).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn from_scores(scores: Vec<ScoredSentence>, model: Option<&str>) -> Result<Self> {
        let model_id = match model {
            Some(m) => m.to_owned(),
            None => {
                let mut models: Vec<&str> = scores.iter().map(|s| s.model_id.as_str()).collect();
                models.sort_unstable();
                models.dedup();
                match models.as_slice() {
                    [only] => (*only).to_owned(),
                    [] => return Err(Error::Config("score file is empty".into())),
                    many => {
                        return Err(Error::Config(format!(
                            "score file holds several models ({}); pick one",
                            many.join(", ")
                        )))
                    }
                }
            }
        };
        let mut by_text = HashMap::new();
        for s in scores.into_iter().filter(|s| s.model_id == model_id) {
            let key = s.text.trim().to_owned();
            if let Some(prev) = by_text.get(&key) {
                if prev != &s {
                    return Err(Error::MalformedResponse(format!("conflicting scores for {key:?}")));
                }
            }
            by_text.insert(key, s);
        }
        Ok(Self { model_id, by_text })
    }

    pub fn len(&self) -> usize {
        self.by_text.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_text.is_empty()
    }

    pub fn get(&self, text: &str) -> Option<&ScoredSentence> {
        self.by_text.get(text.trim())
    }
}

impl SentenceScorer for FileProvider {
    fn model_id(&self) -> &str {
        &self.model_id
    }

    fn score_batch(&self, texts: &[String]) -> Result<Vec<ScoredSentence>> {
        texts
            .iter()
            .map(|t| self.get(t).cloned().ok_or_else(|| Error::TextNotFound(t.clone())))
            .collect()
    }
}
