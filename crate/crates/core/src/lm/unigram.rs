use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::text::{normalize_word, tokenize};

/// Word frequency table used for the unigram term of SLOR.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnigramTable {
    counts: BTreeMap<String, u64>,
    total: u64,
    vocab_size: u64,
    smoothing: bool,
}

impl UnigramTable {
    /// Builds a table from raw counts. Words are normalized the same way as
    /// sentence tokens; counts of words that normalize alike are merged.
    pub fn from_counts<I, S>(counts: I, smoothing: bool) -> Result<Self>
    where
        I: IntoIterator<Item = (S, u64)>,
        S: AsRef<str>,
    {
        let mut merged = BTreeMap::new();
        for (word, count) in counts {
            if count == 0 {
                continue;
            }
            if let Some(w) = normalize_word(word.as_ref()) {
                *merged.entry(w).or_insert(0) += count;
            }
        }
        Self::from_map(merged, smoothing)
    }

    /// Counts every normalized word yielded by `words`.
    pub fn from_tokens<I, S>(words: I, smoothing: bool) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Self::from_counts(words.into_iter().map(|w| (w, 1)), smoothing)
    }

    /// Tokenizes every line of a plain-text corpus.
    pub fn from_corpus<R: BufRead>(reader: R, smoothing: bool) -> Result<Self> {
        let mut counts: BTreeMap<String, u64> = BTreeMap::new();
        for line in reader.lines() {
            let line = line.map_err(|e| Error::io("<corpus>", e))?;
            for w in tokenize(&line).tokens() {
                *counts.entry(w.clone()).or_insert(0) += 1;
            }
        }
        Self::from_map(counts, smoothing)
    }

    fn from_map(counts: BTreeMap<String, u64>, smoothing: bool) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let total = counts.values().sum();
        let vocab_size = counts.len() as u64;
        Ok(Self {
            counts,
            total,
            vocab_size,
            smoothing,
        })
    }

    /// Parses `word<TAB>count` lines. Blank lines are skipped.
    pub fn parse_tsv<R: BufRead>(reader: R, smoothing: bool, source: &str) -> Result<Self> {
        let mut counts = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line_no = i as u64 + 1;
            let line = line.map_err(|e| Error::Parse {
                path: source.to_owned(),
                line: line_no,
                message: e.to_string(),
            })?;
            if line.trim().is_empty() {
                continue;
            }
            let malformed = |message: String| Error::Parse {
                path: source.to_owned(),
                line: line_no,
                message,
            };
            let (word, count) = line
                .split_once('\t')
                .ok_or_else(|| malformed(format!("expected word<TAB>count, got {line:?}")))?;
            let count: u64 = count
                .trim()
                .parse()
                .map_err(|_| malformed(format!("bad count {count:?}")))?;
            if count == 0 {
                return Err(malformed("count must be positive".into()));
            }
            counts.push((word.to_owned(), count));
        }
        Self::from_counts(counts, smoothing)
    }

    pub fn load(path: &Path, smoothing: bool) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::parse_tsv(std::io::BufReader::new(file), smoothing, &path.display().to_string())
    }

    pub fn write_tsv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (word, count) in &self.counts {
            writeln!(out, "{word}\t{count}")?;
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = std::io::BufWriter::new(file);
        self.write_tsv(&mut out)
            .and_then(|_| out.flush())
            .map_err(|e| Error::io(path, e))
    }

    pub fn with_vocab_size(mut self, vocab_size: u64) -> Self {
        self.vocab_size = vocab_size.max(1);
        self
    }

    pub fn with_smoothing(mut self, smoothing: bool) -> Self {
        self.smoothing = smoothing;
        self
    }

    pub fn count(&self, word: &str) -> u64 {
        self.counts.get(word).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &BTreeMap<String, u64> {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn vocab_size(&self) -> u64 {
        self.vocab_size
    }

    pub fn smoothing(&self) -> bool {
        self.smoothing
    }

    /// Natural-log probability of an already-normalized word. With add-one
    /// smoothing every word, seen or not, gets `(count + 1) / (total + V + 1)`.
    pub fn log_prob(&self, word: &str) -> Result<f64> {
        let count = self.count(word) as f64;
        if self.smoothing {
            let denom = (self.total + self.vocab_size + 1) as f64;
            Ok(((count + 1.0) / denom).ln())
        } else if count > 0.0 {
            Ok((count / self.total as f64).ln())
        } else {
            Err(Error::InsufficientData(format!(
                "word {word:?} is not in the unigram table and smoothing is off"
            )))
        }
    }
}
