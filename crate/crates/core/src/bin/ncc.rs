use std::collections::BTreeSet;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use noisy_channel::analysis::{self, FitOptions, Predictor};
use noisy_channel::classify::{self, Classifier, ClassifierConfig, LabeledRecord};
use noisy_channel::config::{LinkSelection, ProviderKind, RunConfig};
use noisy_channel::error::{Error, Result};
use noisy_channel::lm::{self, FileProvider, HttpProvider, HttpProviderConfig, SentenceScorer, UnigramTable};
use noisy_channel::noise::NoiseParams;
use noisy_channel::pipeline::{self, Stage};
use noisy_channel::posterior::{self, AlternativeOptions};
use noisy_channel::text::{tokenize, EditMetric};

#[derive(Parser)]
#[command(
    name = "ncc",
    version,
    about = "Noisy-channel posteriors for comparative-illusion sentences"
)]
struct Cli {
    /// More log output on stderr (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the word tokens of each line of text (arguments or stdin).
    Tokenize { text: Vec<String> },
    /// Word-level edit distance between two sentences.
    Dld {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        no_transpositions: bool,
    },
    /// Score sentences (one per line) into a JSON-lines score file.
    Score {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "http")]
        provider: Provider,
        /// Existing score file for the file provider.
        #[arg(long)]
        source: Option<PathBuf>,
        #[arg(long)]
        url: Option<String>,
        #[arg(long)]
        model: Option<String>,
        #[arg(long)]
        max_inflight: Option<usize>,
    },
    /// SLOR of every sentence in a score file, as CSV.
    Slor {
        #[arg(long)]
        scores: PathBuf,
        #[arg(long)]
        unigram: PathBuf,
        #[arg(long)]
        no_smoothing: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Label corrections with interpretation categories.
    Classify {
        #[arg(long)]
        corrections: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        summary: Option<PathBuf>,
        #[arg(long)]
        no_transpositions: bool,
    },
    /// Link-function values per perceived sentence.
    Posterior {
        /// Restrict output to these perceived sentences (one per line).
        #[arg(long)]
        perceived: Option<PathBuf>,
        /// Raw corrections CSV, or a labeled CSV from `classify`.
        #[arg(long)]
        corrections: PathBuf,
        #[arg(long)]
        scores: PathBuf,
        #[arg(long, default_value = "all")]
        link: LinkSelection,
        #[arg(long)]
        out: PathBuf,
        /// Use implausible corrections as alternatives too.
        #[arg(long)]
        all_corrections: bool,
        #[arg(long)]
        dedupe: bool,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
    },
    /// Acceptability correlation and ordinal regression.
    #[command(subcommand)]
    Analyze(Analyze),
    /// Write the regression design matrix.
    #[command(subcommand)]
    Export(Export),
    /// Run pipeline stages from a JSON config.
    Run {
        #[arg(long, value_enum)]
        stage: StageArg,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        dedupe: bool,
        #[arg(long)]
        link: Option<LinkSelection>,
    },
}

#[derive(Subcommand)]
enum Analyze {
    /// Correlate item-wise mean edit distance with acceptability differences.
    Correlation {
        #[arg(long)]
        trials: PathBuf,
        #[arg(long)]
        labeled: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit a cumulative logit model on a design matrix.
    Regression {
        #[arg(long)]
        design: PathBuf,
        #[arg(long, default_value = "slor,order,baseline,fmean")]
        predictors: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Export {
    /// Assemble the standardized design matrix.
    Design {
        #[arg(long)]
        trials: PathBuf,
        #[arg(long)]
        links: PathBuf,
        #[arg(long)]
        slor: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Provider {
    Http,
    File,
}

#[derive(Clone, Copy, ValueEnum)]
enum StageArg {
    Score,
    Classify,
    Posterior,
    Analyze,
    All,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .target(env_logger::Target::Stderr)
        .init();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::io(path, e))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn write_json<T: serde::Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    let mut out = output(path)?;
    let text = serde_json::to_string_pretty(value).expect("serializable");
    writeln!(out, "{text}")
        .and_then(|_| out.flush())
        .map_err(|e| Error::io("<output>", e))
}

fn read_lines(path: &Path) -> Result<Vec<String>> {
    BufReader::new(open(path)?)
        .lines()
        .map(|l| l.map(|s| s.trim().to_owned()).map_err(|e| Error::io(path, e)))
        .filter(|l| !matches!(l, Ok(s) if s.is_empty()))
        .collect()
}

fn metric(no_transpositions: bool) -> EditMetric {
    if no_transpositions {
        EditMetric::Levenshtein
    } else {
        EditMetric::OptimalStringAlignment
    }
}

fn load_alternatives(path: &Path) -> Result<Vec<LabeledRecord>> {
    let header = BufReader::new(open(path)?)
        .lines()
        .map_while(|l| l.ok())
        .find(|l| !l.starts_with('#'))
        .unwrap_or_default();
    if header.split(',').any(|c| c.trim() == "category") {
        classify::load_labeled(path)
    } else {
        let records = classify::load_corrections(path)?;
        Ok(Classifier::default().classify_corpus(&records).rows)
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Tokenize { text } => {
            let lines = if text.is_empty() {
                io::stdin()
                    .lock()
                    .lines()
                    .collect::<io::Result<Vec<_>>>()
                    .map_err(|e| Error::io("<stdin>", e))?
            } else {
                text
            };
            let mut out = io::stdout().lock();
            for line in lines {
                writeln!(out, "{}", tokenize(&line).joined()).map_err(|e| Error::io("<stdout>", e))?;
            }
            Ok(())
        }
        Command::Dld {
            a,
            b,
            no_transpositions,
        } => {
            println!("{}", metric(no_transpositions).distance(&tokenize(&a), &tokenize(&b)));
            Ok(())
        }
        Command::Score {
            input,
            out,
            provider,
            source,
            url,
            model,
            max_inflight,
        } => {
            let sentences = read_lines(&input)?;
            let scorer: Box<dyn SentenceScorer> = match provider {
                Provider::File => {
                    let source =
                        source.ok_or_else(|| Error::Config("--source is required with --provider file".into()))?;
                    Box::new(FileProvider::open(&source, model.as_deref())?)
                }
                Provider::Http => {
                    let mut config = HttpProviderConfig {
                        model,
                        ..HttpProviderConfig::default()
                    };
                    if let Some(url) = url {
                        config.url = url;
                    }
                    if let Some(n) = max_inflight {
                        config.max_inflight = n;
                    }
                    Box::new(HttpProvider::connect(config)?)
                }
            };
            let scored = lm::score_sentences(&sentences, scorer.as_ref())?;
            lm::write_score_file(&out, &scored)
        }
        Command::Slor {
            scores,
            unigram,
            no_smoothing,
            out,
        } => {
            let table = UnigramTable::load(&unigram, !no_smoothing)?;
            let scored = lm::read_score_file(&scores)?;
            let mut w = csv::Writer::from_writer(output(out.as_deref())?);
            let wrap = |e: csv::Error| Error::io("<slor>", io::Error::other(e));
            w.write_record(["text", "n_words", "model_logprob", "unigram_logprob", "slor"])
                .map_err(wrap)?;
            for s in &scored {
                let tokens = tokenize(&s.text);
                let unigram_lp = lm::unigram_logprob(&tokens, &table)?;
                let value = lm::slor(s, &tokens, &table)?;
                w.write_record([
                    s.text.clone(),
                    tokens.len().to_string(),
                    s.total_logprob.to_string(),
                    unigram_lp.to_string(),
                    value.0.to_string(),
                ])
                .map_err(wrap)?;
            }
            w.flush().map_err(|e| Error::io("<slor>", e))
        }
        Command::Classify {
            corrections,
            out,
            summary,
            no_transpositions,
        } => {
            let records = classify::load_corrections(&corrections)?;
            let config = ClassifierConfig {
                metric: metric(no_transpositions),
                ..ClassifierConfig::default()
            };
            let corpus = Classifier::new(config).classify_corpus(&records);
            classify::write_labeled(create(&out)?, &corpus.rows, &[])?;
            if let Some(path) = summary {
                write_json(Some(&path), &corpus.summary)?;
            }
            Ok(())
        }
        Command::Posterior {
            perceived,
            corrections,
            scores,
            link,
            out,
            all_corrections,
            dedupe,
            beta,
        } => {
            let params = NoiseParams::new(beta).map_err(|e| Error::Config(e.to_string()))?;
            let mut rows = load_alternatives(&corrections)?;
            if let Some(path) = perceived {
                let keep: BTreeSet<String> = read_lines(&path)?.into_iter().collect();
                rows.retain(|r| keep.contains(r.record.perceived.trim()));
            }
            let provider = FileProvider::open(&scores, None)?;
            let options = AlternativeOptions {
                include_implausible: all_corrections,
                dedupe,
            };
            let (links, empty) = posterior::link_corpus(&rows, &provider, &params, options)?;
            for text in empty {
                log::warn!("no usable corrections for '{text}'");
            }
            posterior::write_links(create(&out)?, &links, &link.functions(), &[])
        }
        Command::Analyze(Analyze::Correlation { trials, labeled, out }) => {
            let trials = analysis::load_trials(&trials)?;
            let labeled = classify::load_labeled(&labeled)?;
            let z = analysis::zscore_by_participant(&trials);
            let diffs = analysis::acceptability_differences(&z.rows)?;
            let distances = analysis::item_mean_distances(&labeled, true);
            let (x, y): (Vec<f64>, Vec<f64>) = diffs
                .iter()
                .filter_map(|d| Some((*distances.get(&(d.item_id.clone(), d.condition))?, d.diff)))
                .unzip();
            write_json(out.as_deref(), &analysis::pearson(&x, &y)?)
        }
        Command::Analyze(Analyze::Regression {
            design,
            predictors,
            out,
        }) => {
            let predictors = Predictor::parse_list(&predictors)?;
            let rows = analysis::read_design(open(&design)?, &design.display().to_string())?;
            let fit = analysis::fit_cumulative_logit(&rows, &predictors, &FitOptions::default())?;
            write_json(
                out.as_deref(),
                &serde_json::json!({
                    "fit": fit,
                    "aic": analysis::aic(fit.log_likelihood, fit.n_params()),
                }),
            )?;
            if fit.converged {
                Ok(())
            } else {
                Err(Error::NotConverged {
                    iterations: fit.iterations,
                    grad_norm: fit.grad_norm,
                })
            }
        }
        Command::Export(Export::Design {
            trials,
            links,
            slor,
            out,
        }) => {
            let trials = analysis::load_trials(&trials)?;
            let links = posterior::read_links(open(&links)?, &links.display().to_string())?
                .into_iter()
                .map(|r| ((r.item_id, r.condition), r.links))
                .collect();
            let mut slor_map = std::collections::BTreeMap::new();
            for r in pipeline::read_slor(open(&slor)?, &slor.display().to_string())? {
                slor_map.insert((r.item_id, r.condition.parse().map_err(Error::Config)?), r.slor);
            }
            let design = analysis::build_design(&trials, &links, &slor_map, &analysis::item_baselines(&trials))?;
            analysis::write_design(create(&out)?, &design, &[])
        }
        Command::Run {
            stage,
            config,
            out_dir,
            beta,
            dedupe,
            link,
        } => {
            let mut config = RunConfig::load(&config)?;
            if let Some(dir) = out_dir {
                config.io.out_dir = dir;
            }
            if let Some(beta) = beta {
                config.noise.beta = beta;
            }
            if dedupe {
                config.dedupe = true;
            }
            if let Some(link) = link {
                config.link = link;
            }
            if config.scorer.provider == ProviderKind::Http {
                log::info!("scoring via {}", config.scorer.url);
            }
            let stage = match stage {
                StageArg::Score => Stage::Score,
                StageArg::Classify => Stage::Classify,
                StageArg::Posterior => Stage::Posterior,
                StageArg::Analyze => Stage::Analyze,
                StageArg::All => Stage::All,
            };
            pipeline::run_pipeline(&config, stage)
        }
    }
}
