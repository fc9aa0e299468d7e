use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::TrialRecord;
use crate::classify::LabeledRecord;
use crate::condition::Condition;
use crate::error::{Error, Result};
use crate::numeric::{compensated_sum, mean, sample_sd};

#[derive(Debug, Clone, PartialEq)]
pub struct ZScored {
    /// Trials in input order with their within-participant z-score.
    pub rows: Vec<(TrialRecord, f64)>,
    /// Participants dropped for having fewer than two trials or a single
    /// repeated rating.
    pub excluded: Vec<String>,
}

/// Standardizes ratings within each participant (sample SD).
pub fn zscore_by_participant(trials: &[TrialRecord]) -> ZScored {
    let mut by_participant: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for t in trials {
        by_participant
            .entry(t.participant_id.as_str())
            .or_default()
            .push(f64::from(t.rating));
    }
    let mut moments: BTreeMap<&str, (f64, f64)> = BTreeMap::new();
    let mut excluded = Vec::new();
    for (pid, ratings) in &by_participant {
        match sample_sd(ratings) {
            Some(sd) if sd > 0.0 => {
                moments.insert(pid, (mean(ratings), sd));
            }
            _ => excluded.push((*pid).to_owned()),
        }
    }
    for pid in &excluded {
        log::warn!("excluding participant {pid}: ratings have no variance");
    }
    let rows = trials
        .iter()
        .filter_map(|t| {
            let (m, sd) = moments.get(t.participant_id.as_str())?;
            Some((t.clone(), (f64::from(t.rating) - m) / sd))
        })
        .collect();
    ZScored { rows, excluded }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcceptabilityDiff {
    pub item_id: String,
    pub condition: Condition,
    pub diff: f64,
}

/// Item-wise mean z-rating of each anomalous cell minus the mean of the
/// control cell with the same subject form.
pub fn acceptability_differences(rows: &[(TrialRecord, f64)]) -> Result<Vec<AcceptabilityDiff>> {
    let mut cells: BTreeMap<(&str, Condition), Vec<f64>> = BTreeMap::new();
    let mut items = BTreeSet::new();
    for (t, z) in rows {
        items.insert(t.item_id.as_str());
        cells.entry((t.item_id.as_str(), t.condition())).or_default().push(*z);
    }
    let cell_mean = |item: &str, c: Condition| -> Result<f64> {
        cells
            .get(&(item, c))
            .map(|v| mean(v))
            .ok_or_else(|| Error::MissingCell {
                item_id: item.to_owned(),
                condition: c.to_string(),
            })
    };
    let mut out = Vec::with_capacity(items.len() * 4);
    for item in items {
        for c in Condition::illusory() {
            let diff = cell_mean(item, c)? - cell_mean(item, c.control())?;
            out.push(AcceptabilityDiff {
                item_id: item.to_owned(),
                condition: c,
                diff,
            });
        }
    }
    Ok(out)
}

/// Mean edit distance per (item, condition), over plausible corrections
/// unless `plausible_only` is false.
pub fn item_mean_distances(rows: &[LabeledRecord], plausible_only: bool) -> BTreeMap<(String, Condition), f64> {
    let mut groups: BTreeMap<(String, Condition), Vec<f64>> = BTreeMap::new();
    for r in rows.iter().filter(|r| !plausible_only || r.label.plausible) {
        groups
            .entry((r.record.item_id.clone(), r.record.condition()))
            .or_default()
            .push(r.distance.value() as f64);
    }
    groups.into_iter().map(|(k, v)| (k, mean(&v))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Correlation {
    pub r: f64,
    /// Two-sided p-value from the t distribution with n - 2 degrees of freedom.
    pub p: f64,
    pub n: usize,
}

pub fn pearson(x: &[f64], y: &[f64]) -> Result<Correlation> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::InsufficientData(format!(
            "correlation needs at least 3 pairs, got {n}"
        )));
    }
    let mx = mean(x);
    let my = mean(y);
    let sxx = compensated_sum(x.iter().map(|v| (v - mx) * (v - mx)));
    let syy = compensated_sum(y.iter().map(|v| (v - my) * (v - my)));
    if sxx == 0.0 {
        return Err(Error::ZeroVariance("x"));
    }
    if syy == 0.0 {
        return Err(Error::ZeroVariance("y"));
    }
    let sxy = compensated_sum(x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)));
    let r = (sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0);
    let df = (n - 2) as f64;
    let p = if r.abs() == 1.0 {
        0.0
    } else {
        let t = r * (df / (1.0 - r * r)).sqrt();
        let dist = StudentsT::new(0.0, 1.0, df).expect("df >= 1");
        (2.0 * (1.0 - dist.cdf(t.abs()))).clamp(0.0, 1.0)
    };
    Ok(Correlation { r, p, n })
}
