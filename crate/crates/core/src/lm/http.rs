//! Client for the scoring microservice (`POST /v1/score`, `GET /v1/health`).

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::{to_natural_log, ScoredSentence, SentenceScorer};
use crate::error::{Error, Result};

/// Response header naming the logarithm base of returned log-probabilities
/// (`e`, `2`, `10` or a number).
pub const LOG_BASE_HEADER: &str = "x-logprob-base";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct HttpProviderConfig {
    pub url: String,
    /// Expected model id; checked against the service when set.
    pub model: Option<String>,
    pub max_inflight: usize,
    pub max_batch: usize,
    pub timeout_secs: u64,
}

impl Default for HttpProviderConfig {
    fn default() -> Self {
        Self {
            url: "http://127.0.0.1:8000".into(),
            model: None,
            max_inflight: 4,
            max_batch: 16,
            timeout_secs: 120,
        }
    }
}

#[derive(Serialize)]
struct ScoreRequest<'a> {
    sentences: &'a [String],
}

#[derive(Deserialize)]
struct ScoreResult {
    tokens: Vec<String>,
    token_logprobs: Vec<f64>,
    total_logprob: f64,
}

#[derive(Deserialize)]
struct ScoreResponse {
    model: String,
    results: Vec<ScoreResult>,
}

#[derive(Deserialize)]
struct Health {
    status: String,
    model: String,
}

pub struct HttpProvider {
    agent: ureq::Agent,
    config: HttpProviderConfig,
    model_id: String,
}

impl HttpProvider {
    /// Checks the service health endpoint and pins the served model id.
    pub fn connect(config: HttpProviderConfig) -> Result<Self> {
        if config.max_inflight == 0 || config.max_batch == 0 {
            return Err(Error::Config(
                "scorer.max_inflight and max_batch must be positive".into(),
            ));
        }
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs(config.timeout_secs)))
            .http_status_as_error(false)
            .build()
            .into();
        let url = format!("{}/v1/health", config.url.trim_end_matches('/'));
        let mut resp = agent
            .get(&url)
            .call()
            .map_err(|e| Error::ProviderUnavailable(format!("{url}: {e}")))?;
        if resp.status() != 200 {
            return Err(Error::ProviderUnavailable(format!("{url}: status {}", resp.status())));
        }
        let health: Health = resp
            .body_mut()
            .read_json()
            .map_err(|e| Error::MalformedResponse(format!("{url}: {e}")))?;
        if health.status != "ok" {
            return Err(Error::ProviderUnavailable(format!("{url}: status {:?}", health.status)));
        }
        if let Some(expected) = &config.model {
            if expected != &health.model {
                return Err(Error::ModelMismatch(expected.clone(), health.model));
            }
        }
        Ok(Self {
            agent,
            model_id: health.model,
            config,
        })
    }

    fn post(&self, batch: &[String]) -> Result<Vec<ScoredSentence>> {
        let url = format!("{}/v1/score", self.config.url.trim_end_matches('/'));
        let mut resp = self
            .agent
            .post(&url)
            .send_json(ScoreRequest { sentences: batch })
            .map_err(|e| Error::ProviderUnavailable(format!("{url}: {e}")))?;
        match resp.status().as_u16() {
            200 => {}
            503 => return Err(Error::ProviderUnavailable(format!("{url}: model not loaded"))),
            code => {
                let body = resp.body_mut().read_to_string().unwrap_or_default();
                return Err(Error::MalformedResponse(format!("{url}: status {code}: {body}")));
            }
        }
        let base = match resp.headers().get(LOG_BASE_HEADER) {
            Some(v) => parse_log_base(v.to_str().unwrap_or_default())?,
            None => {
                log::warn!("{url}: no {LOG_BASE_HEADER} header, assuming natural log");
                std::f64::consts::E
            }
        };
        let parsed: ScoreResponse = resp
            .body_mut()
            .read_json()
            .map_err(|e| Error::MalformedResponse(format!("{url}: {e}")))?;
        if parsed.model != self.model_id {
            return Err(Error::ModelMismatch(self.model_id.clone(), parsed.model));
        }
        if parsed.results.len() != batch.len() {
            return Err(Error::MalformedResponse(format!(
                "{url}: sent {} sentences, got {} results",
                batch.len(),
                parsed.results.len()
            )));
        }
        batch
            .iter()
            .zip(parsed.results)
            .map(|(text, r)| {
                let lps = r.token_logprobs.iter().map(|lp| to_natural_log(*lp, base)).collect();
                ScoredSentence::with_reported_total(
                    text.clone(),
                    parsed.model.clone(),
                    r.tokens,
                    lps,
                    to_natural_log(r.total_logprob, base),
                )
            })
            .collect()
    }
}

pub(crate) fn parse_log_base(raw: &str) -> Result<f64> {
    let raw = raw.trim();
    let base = match raw {
        "e" | "E" | "natural" => std::f64::consts::E,
        other => other
            .parse::<f64>()
            .map_err(|_| Error::MalformedResponse(format!("bad log base {raw:?}")))?,
    };
    if base > 0.0 && base != 1.0 && base.is_finite() {
        Ok(base)
    } else {
        Err(Error::MalformedResponse(format!("bad log base {raw:?}")))
    }
}

impl SentenceScorer for HttpProvider {
    fn model_id(&self) -> &str {
        &self.model_id
    }

    /// Splits `texts` into batches and keeps at most `max_inflight` requests
    /// open. Results are reassembled in input order.
    fn score_batch(&self, texts: &[String]) -> Result<Vec<ScoredSentence>> {
        let batches: Vec<&[String]> = texts.chunks(self.config.max_batch).collect();
        let slots: Mutex<Vec<Option<Result<Vec<ScoredSentence>>>>> =
            Mutex::new((0..batches.len()).map(|_| None).collect());
        let next = AtomicUsize::new(0);
        let workers = self.config.max_inflight.min(batches.len());
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    let Some(batch) = batches.get(i) else { break };
                    let result = self.post(batch);
                    let failed = result.is_err();
                    slots.lock().expect("slot lock")[i] = Some(result);
                    if failed {
                        // stop handing out work
                        next.store(batches.len(), Ordering::Relaxed);
                    }
                });
            }
        });
        let mut out = Vec::with_capacity(texts.len());
        for slot in slots.into_inner().expect("slot lock") {
            match slot {
                Some(r) => out.extend(r?),
                None => {
                    return Err(Error::ProviderUnavailable(
                        "scoring aborted after an earlier failure".into(),
                    ))
                }
            }
        }
        Ok(out)
    }
}
