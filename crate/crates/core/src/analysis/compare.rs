use serde::{Deserialize, Serialize};

use super::OrdinalFit;
use crate::error::{Error, Result};

/// Akaike information criterion, `2k - 2 log L`.
pub fn aic(log_likelihood: f64, n_params: usize) -> f64 {
    2.0 * n_params as f64 - 2.0 * log_likelihood
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedModel {
    pub label: String,
    pub aic: f64,
    /// AIC difference to the best model.
    pub delta: f64,
    pub n_params: usize,
    pub log_likelihood: f64,
}

/// Ranks fits by ascending AIC. All fits must share the same data.
///
/// AIC of a fixed-effects proportional-odds model is used in place of
/// leave-one-out cross-validation of a multilevel model, so only the
/// ordering of models is meaningful, not the magnitudes.
pub fn compare_models(fits: &[(String, OrdinalFit)]) -> Result<Vec<RankedModel>> {
    let Some((_, first)) = fits.first() else {
        return Ok(Vec::new());
    };
    if fits
        .iter()
        .any(|(_, f)| f.data_fingerprint != first.data_fingerprint || f.n_obs != first.n_obs)
    {
        return Err(Error::DataMismatch);
    }
    let mut ranked: Vec<RankedModel> = fits
        .iter()
        .map(|(label, f)| RankedModel {
            label: label.clone(),
            aic: aic(f.log_likelihood, f.n_params()),
            delta: 0.0,
            n_params: f.n_params(),
            log_likelihood: f.log_likelihood,
        })
        .collect();
    ranked.sort_by(|a, b| a.aic.total_cmp(&b.aic).then_with(|| a.label.cmp(&b.label)));
    let best = ranked[0].aic;
    for r in &mut ranked {
        r.delta = r.aic - best;
    }
    Ok(ranked)
}
