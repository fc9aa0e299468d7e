use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{Predictor, TrialRecord};
use crate::condition::{Number, SubjectForm};
use crate::error::{Error, Result};
use crate::numeric::{mean, sample_sd};
use crate::posterior::LinkValues;

/// Identifies one stimulus sentence: an item in one condition.
pub type StimulusKey = (String, crate::condition::Condition);

/// One anomalous-sentence trial with standardized predictors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignRow {
    pub response: u8,
    pub slor_z: f64,
    pub order_z: f64,
    pub baseline_z: f64,
    pub fmax_z: f64,
    pub fmean_z: f64,
    pub participant_id: String,
}

impl DesignRow {
    pub fn get(&self, p: Predictor) -> f64 {
        match p {
            Predictor::Slor => self.slor_z,
            Predictor::Order => self.order_z,
            Predictor::Baseline => self.baseline_z,
            Predictor::FMax => self.fmax_z,
            Predictor::FMean => self.fmean_z,
        }
    }

    fn get_mut(&mut self, p: Predictor) -> &mut f64 {
        match p {
            Predictor::Slor => &mut self.slor_z,
            Predictor::Order => &mut self.order_z,
            Predictor::Baseline => &mut self.baseline_z,
            Predictor::FMax => &mut self.fmax_z,
            Predictor::FMean => &mut self.fmean_z,
        }
    }
}

/// Mean raw control rating per (item, subject form).
pub fn item_baselines(trials: &[TrialRecord]) -> BTreeMap<(String, SubjectForm), f64> {
    let mut groups: BTreeMap<(String, SubjectForm), Vec<f64>> = BTreeMap::new();
    for t in trials.iter().filter(|t| t.number == Number::Control) {
        groups
            .entry((t.item_id.clone(), t.subject_form))
            .or_default()
            .push(f64::from(t.rating));
    }
    groups.into_iter().map(|(k, v)| (k, mean(&v))).collect()
}

/// Centers and scales `values` to mean 0 and sample SD 1 in place.
pub fn standardize(values: &mut [f64], name: &'static str) -> Result<()> {
    let sd = sample_sd(values)
        .ok_or_else(|| Error::InsufficientData(format!("cannot standardize {name} with fewer than two rows")))?;
    if sd == 0.0 || !sd.is_finite() {
        return Err(Error::ZeroVariance(name));
    }
    let m = mean(values);
    for v in values.iter_mut() {
        *v = (*v - m) / sd;
    }
    Ok(())
}

fn unmatched(what: &'static str, misses: &[String]) -> Result<()> {
    match misses.first() {
        None => Ok(()),
        Some(first) => Err(Error::UnmatchedJoin {
            what,
            count: misses.len(),
            example: first.clone(),
        }),
    }
}

/// Joins every anomalous trial to its stimulus-level predictors and
/// standardizes each predictor over the assembled rows. Control trials are
/// not part of the design.
pub fn build_design(
    trials: &[TrialRecord],
    links: &BTreeMap<StimulusKey, LinkValues>,
    slor: &BTreeMap<StimulusKey, f64>,
    baselines: &BTreeMap<(String, SubjectForm), f64>,
) -> Result<Vec<DesignRow>> {
    let mut rows = Vec::new();
    let (mut no_link, mut no_slor, mut no_base) = (Vec::new(), Vec::new(), Vec::new());
    for t in trials.iter().filter(|t| t.number != Number::Control) {
        let key = (t.item_id.clone(), t.condition());
        let describe = || format!("item {} ({})", t.item_id, t.condition());
        let link = links.get(&key);
        let s = slor.get(&key);
        let base = baselines.get(&(t.item_id.clone(), t.subject_form));
        if link.is_none() {
            no_link.push(describe());
        }
        if s.is_none() {
            no_slor.push(describe());
        }
        if base.is_none() {
            no_base.push(format!("item {} ({} control)", t.item_id, t.subject_form));
        }
        if let (Some(link), Some(s), Some(base)) = (link, s, base) {
            rows.push(DesignRow {
                response: t.rating,
                slor_z: *s,
                order_z: f64::from(t.trial_order),
                baseline_z: *base,
                fmax_z: link.f_max,
                fmean_z: link.f_mean,
                participant_id: t.participant_id.clone(),
            });
        }
    }
    unmatched("baseline", &no_base)?;
    unmatched("link values", &no_link)?;
    unmatched("slor", &no_slor)?;
    if rows.is_empty() {
        return Err(Error::InsufficientData("no anomalous trials to model".into()));
    }

    for p in Predictor::ALL {
        let mut col: Vec<f64> = rows.iter().map(|r| r.get(p)).collect();
        standardize(&mut col, p.as_str())?;
        for (r, v) in rows.iter_mut().zip(col) {
            *r.get_mut(p) = v;
        }
    }
    Ok(rows)
}

pub const DESIGN_HEADER: [&str; 7] = [
    "response",
    "slor_z",
    "order_z",
    "baseline_z",
    "fmax_z",
    "fmean_z",
    "participant_id",
];

/// Writes the design matrix as CSV in the fixed column order.
pub fn write_design<W: Write>(mut out: W, rows: &[DesignRow], preamble: &[String]) -> Result<()> {
    let io = |e: std::io::Error| Error::io("<design>", e);
    for line in preamble {
        writeln!(out, "# {line}").map_err(io)?;
    }
    let mut w = csv::Writer::from_writer(out);
    let wrap = |e: csv::Error| Error::io("<design>", std::io::Error::other(e));
    w.write_record(DESIGN_HEADER).map_err(wrap)?;
    for r in rows {
        w.write_record([
            r.response.to_string(),
            r.slor_z.to_string(),
            r.order_z.to_string(),
            r.baseline_z.to_string(),
            r.fmax_z.to_string(),
            r.fmean_z.to_string(),
            r.participant_id.clone(),
        ])
        .map_err(wrap)?;
    }
    w.flush().map_err(io)
}

pub fn read_design<R: Read>(reader: R, source: &str) -> Result<Vec<DesignRow>> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| crate::classify::csv_error(source, &e))?
        .clone();
    if headers.iter().collect::<Vec<_>>() != DESIGN_HEADER {
        return Err(Error::Parse {
            path: source.to_owned(),
            line: 1,
            message: format!("expected columns {}", DESIGN_HEADER.join(",")),
        });
    }
    rdr.deserialize::<DesignRow>()
        .map(|r| r.map_err(|e| crate::classify::csv_error(source, &e)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::condition::Condition;

    fn trial(pid: &str, item: &str, form: SubjectForm, number: Number, rating: u8, order: u32) -> TrialRecord {
        TrialRecord {
            participant_id: pid.into(),
            item_id: item.into(),
            subject_form: form,
            number,
            rating,
            trial_order: order,
        }
    }

    fn fixture() -> (
        Vec<TrialRecord>,
        BTreeMap<StimulusKey, LinkValues>,
        BTreeMap<StimulusKey, f64>,
    ) {
        let mut trials = Vec::new();
        let mut links = BTreeMap::new();
        let mut slor = BTreeMap::new();
        let mut order = 1;
        for item in ["1", "2", "3"] {
            for (k, c) in Condition::illusory().into_iter().enumerate() {
                for pid in ["a", "b"] {
                    trials.push(trial(
                        pid,
                        item,
                        c.subject_form,
                        c.number,
                        (1 + (order % 7)) as u8,
                        order,
                    ));
                    order += 1;
                }
                let f = 0.1 * (k as f64 + 1.0) + item.parse::<f64>().unwrap();
                links.insert(
                    (item.to_string(), c),
                    LinkValues {
                        perceived_text: format!("{item}{c}"),
                        f_max: 2.0 * f,
                        f_mean: f * f,
                        f_weighted: f,
                        n_alternatives: 2,
                    },
                );
                slor.insert((item.to_string(), c), -(k as f64) * 0.7 + f64::from(order));
            }
            for form in [SubjectForm::Pronoun, SubjectForm::Np] {
                trials.push(trial("a", item, form, Number::Control, 6, order));
                trials.push(trial(
                    "b",
                    item,
                    form,
                    Number::Control,
                    if item == "2" { 3 } else { 7 },
                    order + 1,
                ));
                order += 2;
            }
        }
        (trials, links, slor)
    }

    #[test]
    fn standardized_columns() {
        let (trials, links, slor) = fixture();
        let rows = build_design(&trials, &links, &slor, &item_baselines(&trials)).unwrap();
        assert_eq!(rows.len(), 24);
        for p in Predictor::ALL {
            let col: Vec<f64> = rows.iter().map(|r| r.get(p)).collect();
            assert!(mean(&col).abs() < 1e-9, "{p}");
            assert!((sample_sd(&col).unwrap() - 1.0).abs() < 1e-9, "{p}");
        }
    }

    #[test]
    fn standardization_is_idempotent() {
        let mut v = vec![3.0, 1.5, -2.0, 8.25, 0.0];
        standardize(&mut v, "v").unwrap();
        let once = v.clone();
        standardize(&mut v, "v").unwrap();
        for (a, b) in once.iter().zip(&v) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn missing_baseline_names_item() {
        let (mut trials, links, slor) = fixture();
        let baselines = item_baselines(&trials);
        trials.push(trial("a", "9", SubjectForm::Np, Number::Plural, 3, 5));
        let mut links = links;
        let mut slor = slor;
        let c = Condition::new(SubjectForm::Np, Number::Plural);
        links.insert(("9".into(), c), links[&("1".to_string(), c)].clone());
        slor.insert(("9".into(), c), 0.0);
        match build_design(&trials, &links, &slor, &baselines) {
            Err(Error::UnmatchedJoin { what, count, example }) => {
                assert_eq!(what, "baseline");
                assert_eq!(count, 1);
                assert!(example.contains("item 9"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn csv_round_trip() {
        let (trials, links, slor) = fixture();
        let rows = build_design(&trials, &links, &slor, &item_baselines(&trials)).unwrap();
        let mut buf = Vec::new();
        write_design(&mut buf, &rows, &["config_sha256=x".into()]).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text
            .lines()
            .nth(1)
            .unwrap()
            .starts_with("response,slor_z,order_z,baseline_z,fmax_z,fmean_z,participant_id"));
        assert_eq!(read_design(buf.as_slice(), "buf").unwrap(), rows);
    }
}
