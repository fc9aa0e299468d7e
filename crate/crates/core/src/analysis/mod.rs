//! Acceptability-rating analysis: standardization, item-wise differences,
//! correlation with edit distance, regression design matrices and
//! proportional-odds model fitting.

mod compare;
mod design;
mod ordinal;
mod stats;

use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use compare::{aic, compare_models, RankedModel};
pub use design::{
    build_design, item_baselines, read_design, standardize, write_design, DesignRow, StimulusKey, DESIGN_HEADER,
};
pub use ordinal::{fit_cumulative_logit, CumulativeLogit, FitOptions, OrdinalFit};
pub use stats::{
    acceptability_differences, item_mean_distances, pearson, zscore_by_participant, AcceptabilityDiff, Correlation,
    ZScored,
};

use crate::condition::{Condition, Number, SubjectForm};
use crate::error::{Error, Result};

/// One acceptability judgement.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TrialRecord {
    pub participant_id: String,
    pub item_id: String,
    pub subject_form: SubjectForm,
    pub number: Number,
    pub rating: u8,
    pub trial_order: u32,
}

pub const MAX_TRIAL_ORDER: u32 = 94;

impl TrialRecord {
    pub fn condition(&self) -> Condition {
        Condition::new(self.subject_form, self.number)
    }

    fn validate(&self) -> std::result::Result<(), String> {
        if !(1..=7).contains(&self.rating) {
            return Err(format!("rating {} outside 1..=7", self.rating));
        }
        if !(1..=MAX_TRIAL_ORDER).contains(&self.trial_order) {
            return Err(format!(
                "trial_order {} outside 1..={MAX_TRIAL_ORDER}",
                self.trial_order
            ));
        }
        Ok(())
    }
}

#[derive(Deserialize)]
struct TrialRow {
    participant_id: String,
    item_id: String,
    subject_form: String,
    number: String,
    rating: i64,
    trial_order: i64,
}

/// Reads the acceptability CSV (`participant_id, item_id, subject_form,
/// number, rating, trial_order`).
pub fn read_trials<R: Read>(reader: R, source: &str) -> Result<Vec<TrialRecord>> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(reader);
    let mut out = Vec::new();
    for row in rdr.deserialize::<TrialRow>() {
        let row = row.map_err(|e| crate::classify::csv_error(source, &e))?;
        let line = out.len() as u64 + 2;
        let bad = |message: String| Error::Parse {
            path: source.to_owned(),
            line,
            message,
        };
        let trial = TrialRecord {
            participant_id: row.participant_id,
            item_id: row.item_id,
            subject_form: row.subject_form.parse().map_err(bad)?,
            number: row.number.parse().map_err(bad)?,
            rating: u8::try_from(row.rating).map_err(|_| bad(format!("rating {} out of range", row.rating)))?,
            trial_order: u32::try_from(row.trial_order)
                .map_err(|_| bad(format!("trial_order {} out of range", row.trial_order)))?,
        };
        trial.validate().map_err(bad)?;
        out.push(trial);
    }
    Ok(out)
}

pub fn load_trials(path: &Path) -> Result<Vec<TrialRecord>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_trials(file, &path.display().to_string())
}

/// Explanatory variables available to the acceptability model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Predictor {
    Slor,
    Order,
    Baseline,
    FMax,
    FMean,
}

impl Predictor {
    pub const ALL: [Predictor; 5] = [
        Predictor::Slor,
        Predictor::Order,
        Predictor::Baseline,
        Predictor::FMax,
        Predictor::FMean,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Predictor::Slor => "slor",
            Predictor::Order => "order",
            Predictor::Baseline => "baseline",
            Predictor::FMax => "fmax",
            Predictor::FMean => "fmean",
        }
    }

    /// Parses a comma-separated predictor list such as `slor,order,fmean`.
    pub fn parse_list(s: &str) -> Result<Vec<Predictor>> {
        let mut out: Vec<Predictor> = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let p: Predictor = part.parse()?;
            if !out.contains(&p) {
                out.push(p);
            }
        }
        Ok(out)
    }
}

impl FromStr for Predictor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "slor" => Ok(Predictor::Slor),
            "order" | "trial_order" => Ok(Predictor::Order),
            "baseline" => Ok(Predictor::Baseline),
            "fmax" | "f_max" | "max" => Ok(Predictor::FMax),
            "fmean" | "f_mean" | "mean" => Ok(Predictor::FMean),
            other => Err(Error::UnknownPredictor(other.to_owned())),
        }
    }
}

impl std::fmt::Display for Predictor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}
