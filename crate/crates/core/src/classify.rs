//! Rule-based labelling of participants' corrections of comparative
//! illusion sentences.
//!
//! Each correction is reduced to a set of word-level [`EditFeature`]s, which
//! are merged into one [`InterpretationLabel`] by a fixed precedence order.
//! Trials whose edit distance is extreme for their item are labelled
//! [`Category::Outlier`] before any content category is considered.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::condition::{Condition, Number, SubjectForm};
use crate::error::{Error, Result};
use crate::numeric::{mean, sample_sd};
use crate::text::{tokenize, EditDistance, EditMetric, TokenSequence};

/// One correction trial: a participant rewrote `perceived` as `corrected`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CorrectionRecord {
    pub participant_id: String,
    pub item_id: String,
    pub subject_form: SubjectForm,
    pub number: Number,
    pub perceived: String,
    pub corrected: String,
}

impl CorrectionRecord {
    pub fn condition(&self) -> Condition {
        Condition::new(self.subject_form, self.number)
    }

    fn validate(&self) -> std::result::Result<(), String> {
        if self.perceived.trim().is_empty() {
            return Err("perceived sentence is empty".into());
        }
        if self.corrected.trim().is_empty() {
            return Err("corrected sentence is empty".into());
        }
        if self.number == Number::Control {
            return Err("corrections are only collected for singular/plural cells".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EditFeature {
    MoreShifted,
    MoreThanFormed,
    ComparativeTransformed,
    ThanClauseDropped,
    ThanClauseFronted,
    DeterminerDropped,
    SubjectPluralized,
    PronounCaseChanged,
    NegationInserted,
    SecondMoreInserted,
    NoEdit,
}

impl EditFeature {
    pub fn as_str(self) -> &'static str {
        match self {
            EditFeature::MoreShifted => "more_shifted",
            EditFeature::MoreThanFormed => "more_than_formed",
            EditFeature::ComparativeTransformed => "comparative_transformed",
            EditFeature::ThanClauseDropped => "than_clause_dropped",
            EditFeature::ThanClauseFronted => "than_clause_fronted",
            EditFeature::DeterminerDropped => "determiner_dropped",
            EditFeature::SubjectPluralized => "subject_pluralized",
            EditFeature::PronounCaseChanged => "pronoun_case_changed",
            EditFeature::NegationInserted => "negation_inserted",
            EditFeature::SecondMoreInserted => "second_more_inserted",
            EditFeature::NoEdit => "no_edit",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    EventComparison,
    IndividualComparison,
    EventNegation,
    DoubleComparison,
    NoChange,
    IncompleteComparison,
    Blended,
    Outlier,
    Ungrammatical,
}

impl Category {
    pub const ALL: [Category; 9] = [
        Category::EventComparison,
        Category::IndividualComparison,
        Category::EventNegation,
        Category::DoubleComparison,
        Category::NoChange,
        Category::IncompleteComparison,
        Category::Blended,
        Category::Outlier,
        Category::Ungrammatical,
    ];

    /// Whether corrections in this category reflect a coherent intended
    /// meaning of the perceived sentence.
    pub fn is_plausible(self) -> bool {
        matches!(
            self,
            Category::EventComparison
                | Category::IndividualComparison
                | Category::EventNegation
                | Category::DoubleComparison
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Category::EventComparison => "event_comparison",
            Category::IndividualComparison => "individual_comparison",
            Category::EventNegation => "event_negation",
            Category::DoubleComparison => "double_comparison",
            Category::NoChange => "no_change",
            Category::IncompleteComparison => "incomplete_comparison",
            Category::Blended => "blended",
            Category::Outlier => "outlier",
            Category::Ungrammatical => "ungrammatical",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Category::ALL
            .into_iter()
            .find(|c| c.as_str() == s.trim())
            .ok_or_else(|| format!("unknown category {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InterpretationLabel {
    pub category: Category,
    pub plausible: bool,
}

impl From<Category> for InterpretationLabel {
    fn from(category: Category) -> Self {
        Self {
            category,
            plausible: category.is_plausible(),
        }
    }
}

pub const DEFAULT_NEGATION_LEXICON: [&str; 8] = ["not", "n't", "never", "no", "none", "neither", "nor", "but"];

const AUXILIARIES: [&str; 14] = [
    "have", "has", "had", "do", "does", "did", "is", "are", "was", "were", "will", "would", "can", "could",
];
const DETERMINERS: [&str; 3] = ["the", "a", "an"];
const ALT_COMPARATIVES: [&str; 7] = [
    "less",
    "fewer",
    "compare",
    "compared",
    "comparing",
    "comparison",
    "unlike",
];
const COMPARATIVE_MARKERS: [&str; 4] = ["more", "less", "fewer", "rather"];
const CLAUSE_LINKERS: [&str; 5] = ["whereas", "while", "although", "though", "but"];
const FREQUENCY_WORDS: [&str; 4] = ["often", "frequently", "times", "regularly"];
const CASE_PAIRS: [(&str, &str); 5] = [
    ("i", "me"),
    ("we", "us"),
    ("he", "him"),
    ("she", "her"),
    ("they", "them"),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ClassifierConfig {
    pub negation_lexicon: Vec<String>,
    pub metric: EditMetric,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        Self {
            negation_lexicon: DEFAULT_NEGATION_LEXICON.iter().map(|s| s.to_string()).collect(),
            metric: EditMetric::default(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Classifier {
    config: ClassifierConfig,
}

fn count(tokens: &[String], word: &str) -> usize {
    tokens.iter().filter(|t| *t == word).count()
}

fn contains_any(tokens: &[String], words: &[&str]) -> bool {
    tokens.iter().any(|t| words.contains(&t.as_str()))
}

fn bigram_count(tokens: &[String], first: &str, second: &str) -> usize {
    tokens.windows(2).filter(|w| w[0] == first && w[1] == second).count()
}

fn starts_with_more(tokens: &[String]) -> bool {
    tokens.first().is_some_and(|t| t == "more")
}

fn is_aux(t: &str) -> bool {
    AUXILIARIES.contains(&t)
}

fn first_index(tokens: &[String], pred: impl Fn(&str) -> bool) -> Option<usize> {
    tokens.iter().position(|t| pred(t))
}

/// The subject noun phrase of the first *than* clause: the words after
/// `than` up to the next auxiliary, with leading determiners removed.
fn than_subject(tokens: &[String]) -> Option<&[String]> {
    let than = first_index(tokens, |t| t == "than")?;
    let mut start = than + 1;
    while start < tokens.len() && DETERMINERS.contains(&tokens[start].as_str()) {
        start += 1;
    }
    let end = tokens[start..]
        .iter()
        .position(|t| is_aux(t))
        .map_or(tokens.len(), |p| start + p);
    (end > start).then(|| &tokens[start..end])
}

fn plural_forms(noun: &str) -> Vec<String> {
    let mut forms = vec![format!("{noun}s"), format!("{noun}es")];
    if let Some(stem) = noun.strip_suffix('y') {
        forms.push(format!("{stem}ies"));
    }
    if let Some(stem) = noun.strip_suffix("man") {
        forms.push(format!("{stem}men"));
    }
    forms
}

/// A `more` outside sentence-initial position that modifies the verb phrase
/// rather than the subject: clause-final, before `than`, or before a
/// frequency word, or followed somewhere by a *than* clause.
fn has_adverbial_more(tokens: &[String]) -> bool {
    tokens.iter().enumerate().skip(1).any(|(i, t)| {
        t == "more"
            && match tokens.get(i + 1) {
                None => true,
                Some(next) => {
                    next == "than"
                        || FREQUENCY_WORDS.contains(&next.as_str())
                        || tokens[i + 1..].iter().any(|w| w == "than")
                }
            }
    })
}

/// Whether the corrected sentence still expresses a comparison.
fn comparison_intact(tokens: &[String]) -> bool {
    let than_with_marker = count(tokens, "than") > 0 && contains_any(tokens, &COMPARATIVE_MARKERS);
    than_with_marker
        || contains_any(tokens, &["compare", "compared", "comparing", "comparison", "unlike"])
        || has_adverbial_more(tokens)
}

fn is_multi_clause(raw: &str, tokens: &[String]) -> bool {
    let trimmed = raw.trim().trim_end_matches(['.', '!', '?']);
    trimmed.contains(['.', ';', '!', '?']) || contains_any(tokens, &CLAUSE_LINKERS)
}

impl Classifier {
    pub fn new(config: ClassifierConfig) -> Self {
        Self { config }
    }

    pub fn config(&self) -> &ClassifierConfig {
        &self.config
    }

    fn is_negation_word(&self, t: &str) -> bool {
        t != "but"
            && (self.config.negation_lexicon.iter().any(|n| n == t)
                || (t.ends_with("n't") && self.config.negation_lexicon.iter().any(|n| n == "n't")))
    }

    /// Negation tokens; `but` only counts next to another negation word.
    fn negation_count(&self, tokens: &[String]) -> usize {
        let but_listed = self.config.negation_lexicon.iter().any(|n| n == "but");
        tokens
            .iter()
            .enumerate()
            .filter(|(i, t)| {
                if *t == "but" {
                    but_listed
                        && ((*i > 0 && self.is_negation_word(&tokens[i - 1]))
                            || tokens.get(i + 1).is_some_and(|n| self.is_negation_word(n)))
                } else {
                    self.is_negation_word(t)
                }
            })
            .count()
    }

    /// Detects the word-level edit patterns that turn `perceived` into `corrected`.
    pub fn detect_features(&self, perceived: &TokenSequence, corrected: &TokenSequence) -> BTreeSet<EditFeature> {
        use EditFeature::*;

        let p = perceived.tokens();
        let c = corrected.tokens();
        let mut out = BTreeSet::new();
        if p == c {
            out.insert(NoEdit);
            return out;
        }

        let p_more = count(p, "more");
        let c_more = count(c, "more");
        let p_than = count(p, "than");
        let c_than = count(c, "than");

        if starts_with_more(p) && !starts_with_more(c) && has_adverbial_more(c) {
            out.insert(MoreShifted);
        }
        if bigram_count(c, "more", "than") > bigram_count(p, "more", "than") {
            out.insert(MoreThanFormed);
        }
        if ALT_COMPARATIVES.iter().any(|w| count(c, w) > count(p, w)) {
            out.insert(ComparativeTransformed);
        }
        if p_than > 0 && c_than == 0 {
            out.insert(ThanClauseDropped);
        }
        if starts_with_more(p) && starts_with_more(c) && c_more >= 2 && c_more > p_more {
            out.insert(SecondMoreInserted);
        }

        // A fronted than clause precedes the matrix auxiliary. Fronting that
        // strands its own auxiliary ("than we have, have used") is not counted.
        let than_before_aux = |t: &[String]| -> bool {
            match (first_index(t, |w| w == "than"), first_index(t, is_aux)) {
                (Some(th), Some(aux)) => th > 0 && th < aux,
                (Some(th), None) => th > 0,
                _ => false,
            }
        };
        let stranded_aux = c.windows(2).any(|w| is_aux(&w[0]) && w[0] == w[1]);
        if c_than > 0 && than_before_aux(c) && !than_before_aux(p) && !stranded_aux {
            out.insert(ThanClauseFronted);
        }

        if bigram_count(p, "than", "the") > 0 && c_than > 0 && bigram_count(c, "than", "the") == 0 {
            out.insert(DeterminerDropped);
        }

        if let Some(subject) = than_subject(p) {
            if let [word] = subject {
                if let Some((_, acc)) = CASE_PAIRS.iter().find(|(nom, _)| nom == word) {
                    if bigram_count(c, "than", acc) > bigram_count(p, "than", acc) {
                        out.insert(PronounCaseChanged);
                    }
                }
            }
            let head = subject.last().expect("non-empty subject");
            let is_pronoun = CASE_PAIRS.iter().any(|(nom, acc)| head == nom || head == acc);
            if !is_pronoun && !head.ends_with('s') {
                let plurals = plural_forms(head);
                if c.iter().any(|t| plurals.contains(t)) && !p.iter().any(|t| plurals.contains(t)) {
                    out.insert(SubjectPluralized);
                }
            }
        }

        if self.negation_count(c) > self.negation_count(p) {
            out.insert(NegationInserted);
        }
        out
    }

    /// Merges detected features into a single interpretation.
    ///
    /// Precedence: no edit, outlier, inserted negation, lost comparison,
    /// second `more`, then the event/individual comparison patterns, with
    /// `Blended` for multi-clause corrections asserting both readings.
    pub fn assign_label(
        &self,
        features: &BTreeSet<EditFeature>,
        record: &CorrectionRecord,
        outlier: bool,
    ) -> InterpretationLabel {
        use EditFeature::*;

        let corrected = tokenize(&record.corrected);
        let c = corrected.tokens();
        let has = |f: EditFeature| features.contains(&f);

        let category = if has(NoEdit) {
            Category::NoChange
        } else if outlier {
            Category::Outlier
        } else if has(NegationInserted) {
            Category::EventNegation
        } else if !comparison_intact(c) {
            Category::IncompleteComparison
        } else if has(SecondMoreInserted) {
            Category::DoubleComparison
        } else {
            let event = has(MoreShifted) || has(MoreThanFormed) || has(ComparativeTransformed);
            let individual = starts_with_more(c)
                && (has(ThanClauseFronted)
                    || has(DeterminerDropped)
                    || has(SubjectPluralized)
                    || has(PronounCaseChanged));
            match (event, individual) {
                (true, true) if is_multi_clause(&record.corrected, c) => Category::Blended,
                (true, _) => Category::EventComparison,
                (false, true) => Category::IndividualComparison,
                (false, false) => Category::Ungrammatical,
            }
        };
        category.into()
    }

    /// Labels a whole corpus: tokenize, distance, per-item outlier flags,
    /// features, label.
    pub fn classify_corpus(&self, records: &[CorrectionRecord]) -> ClassifiedCorpus {
        let tokenized: Vec<(TokenSequence, TokenSequence)> = records
            .iter()
            .map(|r| (tokenize(&r.perceived), tokenize(&r.corrected)))
            .collect();
        let distances: Vec<EditDistance> = tokenized
            .iter()
            .map(|(p, c)| self.config.metric.distance(p, c))
            .collect();
        let keyed: Vec<(&str, EditDistance)> = records
            .iter()
            .zip(&distances)
            .map(|(r, d)| (r.item_id.as_str(), *d))
            .collect();
        let outliers = flag_outliers(&keyed);

        let rows: Vec<LabeledRecord> = records
            .iter()
            .zip(tokenized)
            .zip(distances)
            .enumerate()
            .map(|(i, ((record, (p, c)), distance))| {
                let features = self.detect_features(&p, &c);
                let outlier = outliers.contains(&i);
                let label = self.assign_label(&features, record, outlier);
                LabeledRecord {
                    record: record.clone(),
                    distance,
                    features,
                    label,
                    outlier,
                }
            })
            .collect();
        let summary = CategorySummary::from_rows(&rows);
        ClassifiedCorpus { rows, summary }
    }
}

/// Indices of trials whose distance lies more than three sample standard
/// deviations from their item's mean. Items with fewer than two trials
/// never produce outliers.
pub fn flag_outliers(trials: &[(&str, EditDistance)]) -> BTreeSet<usize> {
    let mut by_item: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, (item, _)) in trials.iter().enumerate() {
        by_item.entry(item).or_default().push(i);
    }
    let mut flagged = BTreeSet::new();
    for members in by_item.values() {
        let mut values: Vec<f64> = members.iter().map(|&i| trials[i].1.value() as f64).collect();
        // sorted so the statistics do not depend on input order
        values.sort_by(f64::total_cmp);
        let Some(sd) = sample_sd(&values) else { continue };
        let m = mean(&values);
        for &i in members {
            if (trials[i].1.value() as f64 - m).abs() > 3.0 * sd {
                flagged.insert(i);
            }
        }
    }
    flagged
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledRecord {
    pub record: CorrectionRecord,
    pub distance: EditDistance,
    pub features: BTreeSet<EditFeature>,
    pub label: InterpretationLabel,
    pub outlier: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifiedCorpus {
    pub rows: Vec<LabeledRecord>,
    pub summary: CategorySummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub n: usize,
    pub plausible_pct: f64,
    pub implausible_pct: f64,
    /// Percentage of the cell's trials per category (all nine keys present).
    pub categories: BTreeMap<Category, f64>,
}

impl CellSummary {
    fn from_labels<'a>(labels: impl Iterator<Item = &'a InterpretationLabel>) -> Self {
        let mut counts: BTreeMap<Category, usize> = Category::ALL.into_iter().map(|c| (c, 0)).collect();
        let mut n = 0;
        for l in labels {
            *counts.get_mut(&l.category).expect("all categories present") += 1;
            n += 1;
        }
        let pct = |k: usize| if n == 0 { 0.0 } else { 100.0 * k as f64 / n as f64 };
        let plausible: usize = counts.iter().filter(|(c, _)| c.is_plausible()).map(|(_, k)| k).sum();
        Self {
            n,
            plausible_pct: pct(plausible),
            implausible_pct: if n == 0 { 0.0 } else { pct(n - plausible) },
            categories: counts.into_iter().map(|(c, k)| (c, pct(k))).collect(),
        }
    }
}

/// Category percentages overall and per condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategorySummary {
    pub overall: CellSummary,
    pub by_condition: BTreeMap<String, CellSummary>,
}

impl CategorySummary {
    pub fn from_rows(rows: &[LabeledRecord]) -> Self {
        let mut by_condition: BTreeMap<String, Vec<&InterpretationLabel>> = BTreeMap::new();
        for r in rows {
            by_condition
                .entry(r.record.condition().to_string())
                .or_default()
                .push(&r.label);
        }
        Self {
            overall: CellSummary::from_labels(rows.iter().map(|r| &r.label)),
            by_condition: by_condition
                .into_iter()
                .map(|(k, v)| (k, CellSummary::from_labels(v.into_iter())))
                .collect(),
        }
    }
}

#[derive(Deserialize)]
struct CorrectionRow {
    participant_id: String,
    item_id: String,
    subject_form: String,
    number: String,
    perceived: String,
    corrected: String,
}

/// Reads the corrections CSV (`participant_id, item_id, subject_form,
/// number, perceived, corrected`). Errors name the offending line.
pub fn read_corrections<R: Read>(reader: R, source: &str) -> Result<Vec<CorrectionRecord>> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(reader);
    let mut out = Vec::new();
    for row in rdr.deserialize::<CorrectionRow>() {
        let row = row.map_err(|e| csv_error(source, &e))?;
        let line = out.len() as u64 + 2;
        let bad = |message: String| Error::Parse {
            path: source.to_owned(),
            line,
            message,
        };
        let record = CorrectionRecord {
            participant_id: row.participant_id,
            item_id: row.item_id,
            subject_form: row.subject_form.parse().map_err(bad)?,
            number: row.number.parse().map_err(bad)?,
            perceived: row.perceived,
            corrected: row.corrected,
        };
        record.validate().map_err(bad)?;
        out.push(record);
    }
    Ok(out)
}

pub fn load_corrections(path: &Path) -> Result<Vec<CorrectionRecord>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_corrections(file, &path.display().to_string())
}

pub(crate) fn csv_error(source: &str, e: &csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    Error::Parse {
        path: source.to_owned(),
        line,
        message: e.to_string(),
    }
}

pub const LABELED_HEADER: [&str; 11] = [
    "participant_id",
    "item_id",
    "subject_form",
    "number",
    "perceived",
    "corrected",
    "dld",
    "features",
    "category",
    "plausible",
    "outlier",
];

/// Writes labeled rows as CSV. `preamble` lines are emitted first as
/// `#` comments.
pub fn write_labeled<W: Write>(out: W, rows: &[LabeledRecord], preamble: &[String]) -> Result<()> {
    let mut out = out;
    for line in preamble {
        writeln!(out, "# {line}").map_err(|e| Error::io("<labeled>", e))?;
    }
    let mut w = csv::Writer::from_writer(out);
    let wrap = |e: csv::Error| Error::io("<labeled>", std::io::Error::other(e));
    w.write_record(LABELED_HEADER).map_err(wrap)?;
    for r in rows {
        let features: Vec<&str> = r.features.iter().map(|f| f.as_str()).collect();
        w.write_record([
            r.record.participant_id.as_str(),
            r.record.item_id.as_str(),
            r.record.subject_form.as_str(),
            r.record.number.as_str(),
            r.record.perceived.as_str(),
            r.record.corrected.as_str(),
            &r.distance.to_string(),
            &features.join("|"),
            r.label.category.as_str(),
            if r.label.plausible { "true" } else { "false" },
            if r.outlier { "true" } else { "false" },
        ])
        .map_err(wrap)?;
    }
    w.flush().map_err(|e| Error::io("<labeled>", e))
}

#[derive(Deserialize)]
struct LabeledRow {
    participant_id: String,
    item_id: String,
    subject_form: String,
    number: String,
    perceived: String,
    corrected: String,
    dld: usize,
    features: String,
    category: String,
    outlier: bool,
}

/// Reads a labeled CSV written by [`write_labeled`].
pub fn read_labeled<R: Read>(reader: R, source: &str) -> Result<Vec<LabeledRecord>> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(reader);
    let mut out = Vec::new();
    for row in rdr.deserialize::<LabeledRow>() {
        let row = row.map_err(|e| csv_error(source, &e))?;
        let line = out.len() as u64 + 2;
        let bad = |message: String| Error::Parse {
            path: source.to_owned(),
            line,
            message,
        };
        let category: Category = row.category.parse().map_err(bad)?;
        let features = row
            .features
            .split('|')
            .filter(|s| !s.is_empty())
            .map(|s| {
                ALL_FEATURES
                    .into_iter()
                    .find(|f| f.as_str() == s)
                    .ok_or_else(|| bad(format!("unknown feature {s:?}")))
            })
            .collect::<Result<BTreeSet<_>>>()?;
        out.push(LabeledRecord {
            record: CorrectionRecord {
                participant_id: row.participant_id,
                item_id: row.item_id,
                subject_form: row.subject_form.parse().map_err(bad)?,
                number: row.number.parse().map_err(bad)?,
                perceived: row.perceived,
                corrected: row.corrected,
            },
            distance: EditDistance(row.dld),
            features,
            label: category.into(),
            outlier: row.outlier,
        });
    }
    Ok(out)
}

pub fn load_labeled(path: &Path) -> Result<Vec<LabeledRecord>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_labeled(file, &path.display().to_string())
}

const ALL_FEATURES: [EditFeature; 11] = [
    EditFeature::MoreShifted,
    EditFeature::MoreThanFormed,
    EditFeature::ComparativeTransformed,
    EditFeature::ThanClauseDropped,
    EditFeature::ThanClauseFronted,
    EditFeature::DeterminerDropped,
    EditFeature::SubjectPluralized,
    EditFeature::PronounCaseChanged,
    EditFeature::NegationInserted,
    EditFeature::SecondMoreInserted,
    EditFeature::NoEdit,
];
