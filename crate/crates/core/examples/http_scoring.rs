//! Scores sentences through the scoring service over HTTP.
//!
//! With a URL the example talks to a running service; without one it starts
//! a small local stand-in that answers from the demo score dump and reports
//! log-probabilities in base 2, which the client converts back to nats.
//!
//! ```text
//! cargo run --example http_scoring
//! cargo run --example http_scoring -- http://127.0.0.1:8000
//! ```

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::path::PathBuf;

use noisy_channel::lm::{read_score_file, score_sentences, HttpProvider, HttpProviderConfig, ScoredSentence};

fn stand_in(scores: Vec<ScoredSentence>) -> String {
    let listener = TcpListener::bind("127.0.0.1:0").expect("bind a local port");
    let url = format!("http://{}", listener.local_addr().unwrap());
    let table: HashMap<String, ScoredSentence> = scores.into_iter().map(|s| (s.text.clone(), s)).collect();
    std::thread::spawn(move || {
        for mut stream in listener.incoming().flatten() {
            let mut reader = BufReader::new(stream.try_clone().unwrap());
            let mut request = String::new();
            reader.read_line(&mut request).unwrap();
            let mut length = 0;
            loop {
                let mut line = String::new();
                reader.read_line(&mut line).unwrap();
                if line.trim().is_empty() {
                    break;
                }
                if let Some((k, v)) = line.split_once(':') {
                    if k.eq_ignore_ascii_case("content-length") {
                        length = v.trim().parse().unwrap();
                    }
                }
            }
            let mut body = vec![0; length];
            reader.read_exact(&mut body).unwrap();

            let reply = if request.starts_with("GET /v1/health") {
                serde_json::json!({"status": "ok", "model": "demo-lm", "context_length": 1024})
            } else {
                let req: serde_json::Value = serde_json::from_slice(&body).unwrap();
                let ln2 = std::f64::consts::LN_2;
                let results: Vec<_> = req["sentences"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|t| {
                        let s = &table[t.as_str().unwrap()];
                        serde_json::json!({
                            "tokens": s.tokens,
                            "token_logprobs": s.token_logprobs.iter().map(|v| v / ln2).collect::<Vec<_>>(),
                            "total_logprob": s.total_logprob / ln2,
                        })
                    })
                    .collect();
                serde_json::json!({"model": "demo-lm", "results": results})
            }
            .to_string();
            let _ = write!(
                stream,
                "HTTP/1.1 200 OK\r\nContent-Type: application/json\r\nx-logprob-base: 2\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{reply}",
                reply.len()
            );
        }
    });
    url
}

fn main() -> noisy_channel::error::Result<()> {
    let demo = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/demo/scores.jsonl");
    let reference = read_score_file(&demo)?;
    let url = std::env::args().nth(1).unwrap_or_else(|| stand_in(reference.clone()));

    let provider = HttpProvider::connect(HttpProviderConfig {
        url: url.clone(),
        max_batch: 2,
        ..Default::default()
    })?;
    let texts: Vec<String> = reference.iter().take(5).map(|s| s.text.clone()).collect();
    let scored = score_sentences(&texts, &provider)?;

    println!("scored {} sentences at {url}", scored.len());
    for (s, r) in scored.iter().zip(&reference) {
        println!(
            "{:>9.3} nats (dump {:>9.3})  {}",
            s.total_logprob, r.total_logprob, s.text
        );
    }
    Ok(())
}
