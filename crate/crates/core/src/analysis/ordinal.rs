//! Proportional-odds (cumulative logit) regression by maximum likelihood.
//!
//! `P(Y <= k | x) = sigmoid(theta_k - x . beta)` for ordered cut-points
//! `theta_0 < ... < theta_{K-2}`. The cut-points are optimized through an
//! unconstrained parameterization, `theta_0 = a_0` and
//! `theta_k = theta_{k-1} + exp(a_k)`, so ordering holds at every iterate.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{DesignRow, Predictor};
use crate::error::{Error, Result};
use crate::numeric::{compensated_sum, log_sigmoid, sigmoid};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrdinalFit {
    /// Observed response values, ascending; category `k` of the model is `categories[k]`.
    pub categories: Vec<u8>,
    pub thresholds: Vec<f64>,
    pub coefficients: BTreeMap<String, f64>,
    /// Predictor names in the order used for fitting.
    pub predictors: Vec<String>,
    pub log_likelihood: f64,
    pub converged: bool,
    pub iterations: usize,
    pub grad_norm: f64,
    pub n_obs: usize,
    /// Hash of the data the model was fitted on.
    pub data_fingerprint: String,
}

impl OrdinalFit {
    pub fn n_params(&self) -> usize {
        self.thresholds.len() + self.coefficients.len()
    }

    pub fn coefficient(&self, name: &str) -> Option<f64> {
        self.coefficients.get(name).copied()
    }

    /// Category probabilities for one row of predictor values, in
    /// `predictors` order.
    pub fn predict_proba(&self, x: &[f64]) -> Vec<f64> {
        let beta: Vec<f64> = self.predictors.iter().map(|p| self.coefficients[p]).collect();
        let eta: f64 = x.iter().zip(&beta).map(|(a, b)| a * b).sum();
        category_probs(&self.thresholds, eta)
    }
}

fn category_probs(thresholds: &[f64], eta: f64) -> Vec<f64> {
    let k = thresholds.len() + 1;
    (0..k)
        .map(|y| {
            let upper = thresholds.get(y).map(|t| t - eta);
            let lower = y.checked_sub(1).map(|i| thresholds[i] - eta);
            row_logprob(upper, lower).exp()
        })
        .collect()
}

/// `log(sigmoid(upper) - sigmoid(lower))` where a missing bound is infinite.
fn row_logprob(upper: Option<f64>, lower: Option<f64>) -> f64 {
    match (upper, lower) {
        (Some(u), None) => log_sigmoid(u),
        (None, Some(l)) => log_sigmoid(-l),
        (Some(u), Some(l)) => log_sigmoid(u) + log_sigmoid(-l) + (-(l - u).exp_m1()).ln(),
        (None, None) => 0.0,
    }
}

/// Derivatives of [`row_logprob`] with respect to its two bounds.
fn row_grad(upper: Option<f64>, lower: Option<f64>) -> (f64, f64) {
    match (upper, lower) {
        (Some(u), None) => (sigmoid(-u), 0.0),
        (None, Some(l)) => (0.0, -sigmoid(l)),
        (Some(u), Some(l)) => {
            let r = (l - u).exp();
            let ratio = r / -(l - u).exp_m1();
            (sigmoid(-u) + ratio, -sigmoid(l) - ratio)
        }
        (None, None) => (0.0, 0.0),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FitOptions {
    pub max_iterations: usize,
    /// Convergence when the max-norm of the log-likelihood gradient drops below this.
    pub gradient_tolerance: f64,
    /// Coefficients beyond this magnitude (on standardized predictors)
    /// are reported as separation.
    pub separation_bound: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            max_iterations: 1000,
            gradient_tolerance: 1e-6,
            separation_bound: 10.0,
        }
    }
}

/// Data and likelihood of a cumulative logit model.
#[derive(Debug, Clone)]
pub struct CumulativeLogit {
    responses: Vec<usize>,
    categories: Vec<u8>,
    x: Vec<Vec<f64>>,
    names: Vec<String>,
}

impl CumulativeLogit {
    /// `responses[i]` is the ordinal response of row `i` and `x[i]` its
    /// predictor values. Response values are mapped onto consecutive
    /// categories in ascending order; unobserved values are not modelled.
    pub fn new(responses: &[u8], x: Vec<Vec<f64>>, names: Vec<String>) -> Result<Self> {
        if responses.len() != x.len() {
            return Err(Error::LengthMismatch(responses.len(), x.len()));
        }
        if let Some(bad) = x.iter().find(|row| row.len() != names.len()) {
            return Err(Error::LengthMismatch(bad.len(), names.len()));
        }
        let mut categories: Vec<u8> = responses.to_vec();
        categories.sort_unstable();
        categories.dedup();
        if categories.len() < 2 {
            return Err(Error::InsufficientData("need at least two response categories".into()));
        }
        let index: BTreeMap<u8, usize> = categories.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        Ok(Self {
            responses: responses.iter().map(|r| index[r]).collect(),
            categories,
            x,
            names,
        })
    }

    pub fn n_categories(&self) -> usize {
        self.categories.len()
    }

    pub fn n_thresholds(&self) -> usize {
        self.categories.len() - 1
    }

    pub fn n_params(&self) -> usize {
        self.n_thresholds() + self.names.len()
    }

    pub fn n_obs(&self) -> usize {
        self.responses.len()
    }

    /// Cut-points implied by the unconstrained threshold parameters.
    pub fn thresholds(&self, params: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n_thresholds());
        let mut acc = params[0];
        out.push(acc);
        for a in &params[1..self.n_thresholds()] {
            acc += a.exp();
            out.push(acc);
        }
        out
    }

    /// Inverse of [`CumulativeLogit::thresholds`] for strictly increasing cut-points.
    pub fn threshold_params(thresholds: &[f64]) -> Vec<f64> {
        let mut out = vec![thresholds[0]];
        out.extend(thresholds.windows(2).map(|w| (w[1] - w[0]).ln()));
        out
    }

    fn bounds(&self, y: usize, thresholds: &[f64], eta: f64) -> (Option<f64>, Option<f64>) {
        let upper = thresholds.get(y).map(|t| t - eta);
        let lower = y.checked_sub(1).map(|i| thresholds[i] - eta);
        (upper, lower)
    }

    fn eta(&self, row: &[f64], beta: &[f64]) -> f64 {
        row.iter().zip(beta).map(|(a, b)| a * b).sum()
    }

    /// Log-likelihood at `params` (threshold parameters, then coefficients).
    pub fn log_likelihood(&self, params: &[f64]) -> f64 {
        let thresholds = self.thresholds(params);
        let beta = &params[self.n_thresholds()..];
        compensated_sum(self.responses.iter().zip(&self.x).map(|(&y, row)| {
            let (u, l) = self.bounds(y, &thresholds, self.eta(row, beta));
            row_logprob(u, l)
        }))
    }

    /// Analytic gradient of [`CumulativeLogit::log_likelihood`].
    pub fn gradient(&self, params: &[f64]) -> Vec<f64> {
        let nt = self.n_thresholds();
        let thresholds = self.thresholds(params);
        let beta = &params[nt..];
        let mut d_theta: Vec<Vec<f64>> = vec![Vec::with_capacity(self.n_obs()); nt];
        let mut d_beta: Vec<Vec<f64>> = vec![Vec::with_capacity(self.n_obs()); beta.len()];
        for (&y, row) in self.responses.iter().zip(&self.x) {
            let (u, l) = self.bounds(y, &thresholds, self.eta(row, beta));
            let (gu, gl) = row_grad(u, l);
            if u.is_some() {
                d_theta[y].push(gu);
            }
            if l.is_some() {
                d_theta[y - 1].push(gl);
            }
            let d_eta = -(gu + gl);
            for (j, xj) in row.iter().enumerate() {
                d_beta[j].push(d_eta * xj);
            }
        }
        let g_theta: Vec<f64> = d_theta.into_iter().map(compensated_sum).collect();
        let mut grad = Vec::with_capacity(self.n_params());
        // chain rule through the cumulative exp parameterization
        grad.push(compensated_sum(g_theta.iter().copied()));
        for j in 1..nt {
            grad.push(params[j].exp() * compensated_sum(g_theta[j..].iter().copied()));
        }
        grad.extend(d_beta.into_iter().map(compensated_sum));
        grad
    }

    fn initial_params(&self) -> Vec<f64> {
        let n = self.n_obs() as f64;
        let mut counts = vec![0usize; self.n_categories()];
        for &y in &self.responses {
            counts[y] += 1;
        }
        let mut cum = 0usize;
        let mut thresholds = Vec::with_capacity(self.n_thresholds());
        for c in &counts[..self.n_thresholds()] {
            cum += c;
            let p = (cum as f64 / n).clamp(1e-6, 1.0 - 1e-6);
            thresholds.push((p / (1.0 - p)).ln());
        }
        for i in 1..thresholds.len() {
            if thresholds[i] <= thresholds[i - 1] {
                thresholds[i] = thresholds[i - 1] + 1e-3;
            }
        }
        let mut params = Self::threshold_params(&thresholds);
        params.extend(std::iter::repeat_n(0.0, self.names.len()));
        params
    }

    fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        for &y in &self.responses {
            h.update(self.categories[y].to_le_bytes());
        }
        hex::encode(h.finalize())
    }

    /// Maximizes the likelihood with BFGS and a backtracking line search.
    pub fn fit(&self, options: &FitOptions) -> Result<OrdinalFit> {
        let objective = |p: &[f64]| -self.log_likelihood(p);
        let gradient = |p: &[f64]| self.gradient(p).into_iter().map(|g| -g).collect::<Vec<_>>();
        let outcome = bfgs(objective, gradient, self.initial_params(), options);

        let nt = self.n_thresholds();
        let params = outcome.params;
        let beta = &params[nt..];
        if let Some((name, _)) = self
            .names
            .iter()
            .zip(beta)
            .find(|(_, b)| !b.is_finite() || b.abs() > options.separation_bound)
        {
            return Err(Error::Separation(name.clone()));
        }
        if outcome.value < 1e-6 * self.n_obs() as f64 {
            return Err(Error::Separation("all responses predicted exactly".into()));
        }
        let thresholds = self.thresholds(&params);
        if thresholds.iter().any(|t| !t.is_finite() || t.abs() > 1e3) {
            return Err(Error::Separation("thresholds".into()));
        }
        if !outcome.converged {
            log::warn!(
                "cumulative logit fit stopped after {} iterations with gradient max-norm {:.3e}",
                outcome.iterations,
                outcome.grad_norm
            );
        }
        Ok(OrdinalFit {
            categories: self.categories.clone(),
            thresholds,
            coefficients: self.names.iter().cloned().zip(beta.iter().copied()).collect(),
            predictors: self.names.clone(),
            log_likelihood: -outcome.value,
            converged: outcome.converged,
            iterations: outcome.iterations,
            grad_norm: outcome.grad_norm,
            n_obs: self.n_obs(),
            data_fingerprint: self.fingerprint(),
        })
    }
}

struct Outcome {
    params: Vec<f64>,
    value: f64,
    grad_norm: f64,
    iterations: usize,
    converged: bool,
}

fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Minimizes `f` with BFGS on the inverse Hessian.
fn bfgs<F, G>(f: F, grad: G, mut x: Vec<f64>, options: &FitOptions) -> Outcome
where
    F: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> Vec<f64>,
{
    let n = x.len();
    let identity = |scale: f64| -> Vec<Vec<f64>> {
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { scale } else { 0.0 }).collect())
            .collect()
    };
    let mut h = identity(1.0);
    let mut fx = f(&x);
    let mut g = grad(&x);
    let mut first = true;

    for iter in 0..options.max_iterations {
        let gn = max_norm(&g);
        if gn < options.gradient_tolerance {
            return Outcome {
                params: x,
                value: fx,
                grad_norm: gn,
                iterations: iter,
                converged: true,
            };
        }
        let mut d: Vec<f64> = h.iter().map(|row| -dot(row, &g)).collect();
        let mut slope = dot(&g, &d);
        if slope >= 0.0 {
            h = identity(1.0);
            d = g.iter().map(|v| -v).collect();
            slope = dot(&g, &d);
        }

        // Backtracking with a slack of a few ulps of f, so steps whose
        // decrease is below rounding noise are still taken near the optimum.
        let noise = 1e-14 * (1.0 + fx.abs());
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let candidate: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a + step * b).collect();
            let fc = f(&candidate);
            if fc.is_finite() && fc <= fx + 1e-4 * step * slope + noise {
                accepted = Some((candidate, fc));
                break;
            }
            step *= 0.5;
        }
        let Some((x_new, f_new)) = accepted else {
            return Outcome {
                params: x,
                value: fx,
                grad_norm: gn,
                iterations: iter,
                converged: false,
            };
        };
        let g_new = grad(&x_new);
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() && sy > 0.0 {
            if first {
                h = identity(sy / dot(&y, &y));
                first = false;
            }
            let rho = 1.0 / sy;
            let hy: Vec<f64> = h.iter().map(|row| dot(row, &y)).collect();
            let yhy = dot(&y, &hy);
            for i in 0..n {
                for j in 0..n {
                    h[i][j] += -rho * (hy[i] * s[j] + s[i] * hy[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
                }
            }
        }
        x = x_new;
        fx = f_new;
        g = g_new;
    }
    let gn = max_norm(&g);
    Outcome {
        params: x,
        value: fx,
        grad_norm: gn,
        iterations: options.max_iterations,
        converged: gn < options.gradient_tolerance,
    }
}

/// Fits the acceptability model on a design matrix with the chosen predictors.
pub fn fit_cumulative_logit(
    design: &[DesignRow],
    predictors: &[Predictor],
    options: &FitOptions,
) -> Result<OrdinalFit> {
    let responses: Vec<u8> = design.iter().map(|r| r.response).collect();
    let x: Vec<Vec<f64>> = design
        .iter()
        .map(|r| predictors.iter().map(|p| r.get(*p)).collect())
        .collect();
    let names = predictors.iter().map(|p| p.as_str().to_owned()).collect();
    let model = CumulativeLogit::new(&responses, x, names)?;
    let needed = 10 * model.n_params();
    if design.len() < needed {
        return Err(Error::InsufficientData(format!(
            "{} rows for {} parameters; need at least {needed}",
            design.len(),
            model.n_params()
        )));
    }
    let mut fit = model.fit(options)?;
    fit.data_fingerprint = design_fingerprint(design);
    Ok(fit)
}

fn design_fingerprint(design: &[DesignRow]) -> String {
    let mut h = Sha256::new();
    for r in design {
        h.update([r.response]);
        for p in Predictor::ALL {
            h.update(r.get(p).to_le_bytes());
        }
        h.update(r.participant_id.as_bytes());
        h.update([0]);
    }
    hex::encode(h.finalize())
}
