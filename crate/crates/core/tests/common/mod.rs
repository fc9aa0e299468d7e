#![allow(dead_code)]

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Read, Write};
use std::net::{TcpListener, TcpStream};
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::Duration;

use noisy_channel::lm::ScoredSentence;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(rel)
}

// ---------------------------------------------------------------------------
// edit distance oracle

/// Smallest number of edits turning `a` into `b`, found by iterative
/// deepening over edit scripts. Each step consumes a prefix of `a` and `b`
/// (match, substitute, delete, insert, or swap of an adjacent pair), so with
/// `transpositions` this searches exactly the non-overlapping edit scripts.
pub fn oracle_distance<T: PartialEq>(a: &[T], b: &[T], transpositions: bool) -> usize {
    let lower = a.len().abs_diff(b.len());
    (lower..=a.len().max(b.len()))
        .find(|&budget| reachable(a, b, budget, transpositions))
        .expect("max(len) edits always suffice")
}

fn reachable<T: PartialEq>(a: &[T], b: &[T], budget: usize, transpositions: bool) -> bool {
    if a.is_empty() || b.is_empty() {
        return a.len().max(b.len()) <= budget;
    }
    if a[0] == b[0] && reachable(&a[1..], &b[1..], budget, transpositions) {
        return true;
    }
    if budget == 0 {
        return false;
    }
    let k = budget - 1;
    reachable(&a[1..], &b[1..], k, transpositions)
        || reachable(&a[1..], b, k, transpositions)
        || reachable(a, &b[1..], k, transpositions)
        || (transpositions
            && a.len() >= 2
            && b.len() >= 2
            && a[0] == b[1]
            && a[1] == b[0]
            && reachable(&a[2..], &b[2..], k, transpositions))
}

pub fn random_sequence(rng: &mut ChaCha8Rng, max_len: usize, vocab: u8) -> Vec<u8> {
    let len = rng.random_range(0..=max_len);
    (0..len).map(|_| rng.random_range(0..vocab)).collect()
}

// ---------------------------------------------------------------------------
// ordinal data

pub struct OrdinalSample {
    pub responses: Vec<u8>,
    pub x: Vec<Vec<f64>>,
}

/// Draws responses 1..=K from the cumulative logit model by inverting the
/// logistic CDF of the latent variable.
pub fn sample_cumulative_logit(n: usize, thresholds: &[f64], beta: &[f64], seed: u64) -> OrdinalSample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut responses = Vec::with_capacity(n);
    let mut x = Vec::with_capacity(n);
    for _ in 0..n {
        let row: Vec<f64> = beta.iter().map(|_| rng.sample(StandardNormal)).collect();
        let eta: f64 = row.iter().zip(beta).map(|(a, b)| a * b).sum();
        let u: f64 = rng.random_range(f64::EPSILON..1.0);
        let latent = eta + (u / (1.0 - u)).ln();
        let category = thresholds.iter().filter(|t| **t < latent).count();
        responses.push(category as u8 + 1);
        x.push(row);
    }
    OrdinalSample { responses, x }
}

/// Logistic regression by iteratively reweighted least squares.
/// Returns `[intercept, coefficients...]` for `logit P(y) = c + x . w`.
pub fn irls_logistic(y: &[bool], x: &[Vec<f64>]) -> Vec<f64> {
    let p = x[0].len() + 1;
    let design: Vec<Vec<f64>> = x
        .iter()
        .map(|row| std::iter::once(1.0).chain(row.iter().copied()).collect())
        .collect();
    let mut w = vec![0.0; p];
    for _ in 0..100 {
        let mut hess = vec![vec![0.0; p]; p];
        let mut grad = vec![0.0; p];
        for (row, &yi) in design.iter().zip(y) {
            let eta: f64 = row.iter().zip(&w).map(|(a, b)| a * b).sum();
            let mu = 1.0 / (1.0 + (-eta).exp());
            let r = f64::from(u8::from(yi)) - mu;
            for i in 0..p {
                grad[i] += r * row[i];
                for j in 0..p {
                    hess[i][j] += mu * (1.0 - mu) * row[i] * row[j];
                }
            }
        }
        let step = solve(hess, grad);
        for (wi, si) in w.iter_mut().zip(&step) {
            *wi += si;
        }
        if step.iter().all(|s| s.abs() < 1e-13) {
            break;
        }
    }
    w
}

/// Gaussian elimination with partial pivoting.
#[allow(clippy::needless_range_loop)]
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    x
}

// ---------------------------------------------------------------------------
// mock scoring service

#[derive(Clone)]
pub struct MockOptions {
    pub model: String,
    /// Value of the log-base header; `None` omits it.
    pub log_base: Option<String>,
    pub health_status: u16,
    pub score_status: u16,
    pub delay: Duration,
}

impl Default for MockOptions {
    fn default() -> Self {
        Self {
            model: "demo-lm".into(),
            log_base: Some("e".into()),
            health_status: 200,
            score_status: 200,
            delay: Duration::ZERO,
        }
    }
}

pub struct MockServer {
    pub url: String,
    pub score_requests: Arc<AtomicUsize>,
    pub max_inflight: Arc<AtomicUsize>,
}

/// Serves `/v1/health` and `/v1/score` from a table of known scores.
pub fn spawn_mock(scores: Vec<ScoredSentence>, options: MockOptions) -> MockServer {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}", listener.local_addr().unwrap());
    let table: Arc<HashMap<String, ScoredSentence>> =
        Arc::new(scores.into_iter().map(|s| (s.text.clone(), s)).collect());
    let score_requests = Arc::new(AtomicUsize::new(0));
    let max_inflight = Arc::new(AtomicUsize::new(0));
    let inflight = Arc::new(AtomicUsize::new(0));
    let (requests, max_seen) = (score_requests.clone(), max_inflight.clone());
    std::thread::spawn(move || {
        for stream in listener.incoming().flatten() {
            let (table, options) = (table.clone(), options.clone());
            let (requests, max_seen, inflight) = (requests.clone(), max_seen.clone(), inflight.clone());
            std::thread::spawn(move || {
                let _ = handle(stream, &table, &options, &requests, &max_seen, &inflight);
            });
        }
    });
    MockServer {
        url,
        score_requests,
        max_inflight,
    }
}

fn handle(
    stream: TcpStream,
    table: &HashMap<String, ScoredSentence>,
    options: &MockOptions,
    requests: &AtomicUsize,
    max_seen: &AtomicUsize,
    inflight: &AtomicUsize,
) -> std::io::Result<()> {
    let mut reader = BufReader::new(stream.try_clone()?);
    let mut request_line = String::new();
    reader.read_line(&mut request_line)?;
    let mut content_length = 0usize;
    loop {
        let mut line = String::new();
        reader.read_line(&mut line)?;
        if line.trim().is_empty() {
            break;
        }
        if let Some((k, v)) = line.split_once(':') {
            if k.eq_ignore_ascii_case("content-length") {
                content_length = v.trim().parse().unwrap_or(0);
            }
        }
    }
    let mut body = vec![0u8; content_length];
    reader.read_exact(&mut body)?;

    let (status, headers, payload) = if request_line.starts_with("GET /v1/health") {
        let body = if options.health_status == 200 {
            serde_json::json!({"status": "ok", "model": options.model, "context_length": 1024})
        } else {
            serde_json::json!({"status": "loading"})
        };
        (options.health_status, Vec::new(), body.to_string())
    } else if request_line.starts_with("POST /v1/score") {
        requests.fetch_add(1, Ordering::SeqCst);
        let now = inflight.fetch_add(1, Ordering::SeqCst) + 1;
        max_seen.fetch_max(now, Ordering::SeqCst);
        std::thread::sleep(options.delay);
        let reply = score_reply(table, options, &body);
        inflight.fetch_sub(1, Ordering::SeqCst);
        reply
    } else {
        (404, Vec::new(), "{}".to_owned())
    };

    let mut out = stream;
    write!(
        out,
        "HTTP/1.1 {status} X\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n",
        payload.len()
    )?;
    for (k, v) in headers {
        write!(out, "{k}: {v}\r\n")?;
    }
    write!(out, "\r\n{payload}")?;
    out.flush()
}

fn score_reply(
    table: &HashMap<String, ScoredSentence>,
    options: &MockOptions,
    body: &[u8],
) -> (u16, Vec<(String, String)>, String) {
    if options.score_status != 200 {
        return (options.score_status, Vec::new(), r#"{"detail":"unavailable"}"#.into());
    }
    let Ok(request) = serde_json::from_slice::<serde_json::Value>(body) else {
        return (400, Vec::new(), r#"{"detail":"bad json"}"#.into());
    };
    let sentences = request["sentences"].as_array().cloned().unwrap_or_default();
    let scale = match options.log_base.as_deref() {
        Some("e") | None => 1.0,
        Some(b) => b.parse::<f64>().unwrap().ln(),
    };
    let mut results = Vec::new();
    for s in sentences {
        let Some(scored) = s.as_str().and_then(|t| table.get(t)) else {
            return (400, Vec::new(), format!(r#"{{"detail":"unknown sentence {s}"}}"#));
        };
        let lps: Vec<f64> = scored.token_logprobs.iter().map(|v| v / scale).collect();
        results.push(serde_json::json!({
            "tokens": scored.tokens,
            "token_logprobs": lps,
            "total_logprob": scored.total_logprob / scale,
        }));
    }
    let headers = options
        .log_base
        .iter()
        .map(|b| ("x-logprob-base".to_owned(), b.clone()))
        .collect();
    let body = serde_json::json!({"model": options.model, "results": results});
    (200, headers, body.to_string())
}
