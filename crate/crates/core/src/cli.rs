//! Command-line entry point.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or model error. Diagnostics
//! go to stderr; predictions go to stdout; everything else to files.

use std::collections::HashSet;
use std::ffi::OsString;
use std::fs;
use std::io::{self, BufRead, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::char_stats::{corpus_stats, mean_over_languages};
use crate::corpus_builder::{extract_paragraphs, FilterRuleSet};
use crate::dataset_io::{load_corpus, save_corpus, Corpus, LanguageLabel, WiliLayout};
use crate::error::{Error, Result};
use crate::evaluation::{
    class_report, confusion, reduced_eval, unknown_accuracy, write_confusion_csv, write_report_csv,
    Prediction,
};
use crate::freq_classifier::{train_freq_model, DistanceMetric};
use crate::models::Model;
use crate::textcat::{train_textcat, DEFAULT_FINGERPRINT_SIZE};
use crate::tfidf_mlp::{fit_classifier, TrainConfig, DEFAULT_HIDDEN, DEFAULT_MIN_COUNT};
use crate::unicode_blocks::{build_block_report, default_blocks, load_blocks};

#[derive(Debug, Parser)]
#[command(
    name = "wili",
    version,
    about = "Written language identification on WiLI-style corpora",
    after_help = "Corpus flags take `x.csv,y.csv`. When omitted, the split files \
                  under $WILI_DATA_DIR are used."
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build x/y files from a directory of `<label>.txt` documents.
    BuildCorpus {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_name = "X.CSV,Y.CSV")]
        out: String,
        #[arg(long, default_value_t = 140)]
        min_len: usize,
    },
    /// Per-language coverage-charset size and mean paragraph length.
    Stats {
        #[command(flatten)]
        corpus: CorpusArg,
        #[arg(long, default_value_t = 0.99)]
        theta: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Unicode block coverage table.
    Blocks {
        #[command(flatten)]
        corpus: CorpusArg,
        /// Custom `start,end,name[,threshold]` table.
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train the character-frequency classifier.
    TrainFreq {
        #[command(flatten)]
        corpus: CorpusArg,
        #[arg(long, default_value_t = 0.8)]
        theta: f64,
        #[arg(long, default_value = "cityblock")]
        metric: String,
        #[arg(long)]
        model: PathBuf,
    },
    /// Train the trigram fingerprint classifier.
    TrainTextcat {
        #[command(flatten)]
        corpus: CorpusArg,
        #[arg(long, default_value_t = DEFAULT_FINGERPRINT_SIZE)]
        size: usize,
        #[arg(long)]
        model: PathBuf,
    },
    /// Train the tf-idf MLP classifier.
    TrainMlp {
        #[command(flatten)]
        corpus: CorpusArg,
        #[arg(long, default_value_t = 20)]
        epochs: usize,
        #[arg(long, default_value_t = 32)]
        batch: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_MIN_COUNT)]
        min_count: u64,
        #[arg(long, default_value_t = DEFAULT_HIDDEN)]
        hidden: usize,
        #[arg(long)]
        model: PathBuf,
    },
    /// Predict one label per input line.
    Predict {
        #[arg(long)]
        model: PathBuf,
        /// Input file, or `-` for stdin.
        #[arg(long)]
        text: String,
        /// Metric override for frequency models.
        #[arg(long)]
        metric: Option<String>,
        #[command(flatten)]
        timing: TimingArg,
    },
    /// Score a model on a labelled test corpus.
    Evaluate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_name = "X.CSV,Y.CSV")]
        test: Option<String>,
        /// One supported label per line; enables reduced and unknown scoring.
        #[arg(long)]
        supported: Option<PathBuf>,
        #[arg(long)]
        metric: Option<String>,
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        cm: Option<PathBuf>,
        #[command(flatten)]
        timing: TimingArg,
    },
}

#[derive(Debug, Args)]
pub struct CorpusArg {
    #[arg(long, value_name = "X.CSV,Y.CSV")]
    corpus: Option<String>,
}

#[derive(Debug, Args)]
pub struct TimingArg {
    /// Report mean milliseconds per prediction on stderr.
    #[arg(long)]
    timings: bool,
}

enum Failure {
    Usage(String),
    Data(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e)
    }
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    match execute(config.command) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\nFor more information, try '--help'.");
            1
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn split_pair(spec: &str) -> std::result::Result<(PathBuf, PathBuf), Failure> {
    match spec.split_once(',') {
        Some((x, y)) if !x.is_empty() && !y.is_empty() => Ok((x.into(), y.into())),
        _ => Err(Failure::Usage(format!(
            "expected `x.csv,y.csv`, got {spec:?}"
        ))),
    }
}

fn resolve_pair(
    spec: Option<&str>,
    split: fn(&WiliLayout) -> (PathBuf, PathBuf),
    flag: &str,
) -> std::result::Result<(PathBuf, PathBuf), Failure> {
    match spec {
        Some(s) => split_pair(s),
        None => WiliLayout::from_env().map(|l| split(&l)).ok_or_else(|| {
            Failure::Usage(format!("{flag} is required when WILI_DATA_DIR is unset"))
        }),
    }
}

fn load_pair(pair: &(PathBuf, PathBuf)) -> Result<Corpus> {
    load_corpus(&pair.0, &pair.1)
}

fn parse_metric(m: Option<&str>) -> std::result::Result<Option<DistanceMetric>, Failure> {
    m.map(|s| s.parse().map_err(|e: Error| Failure::Usage(e.to_string())))
        .transpose()
}

fn create(path: &Path) -> Result<BufWriter<fs::File>> {
    fs::File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn csv_error(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |e| Error::Model(format!("{}: {e}", path.display()))
}

fn execute(command: Command) -> std::result::Result<(), Failure> {
    match command {
        Command::BuildCorpus {
            input,
            out,
            min_len,
        } => {
            let (x, y) = split_pair(&out)?;
            let rules = FilterRuleSet::new(min_len).map_err(|e| Failure::Usage(e.to_string()))?;
            build_corpus(&input, &x, &y, &rules)?;
        }
        Command::Stats { corpus, theta, out } => {
            if !(theta > 0.0 && theta <= 1.0) {
                return Err(Failure::Usage(format!(
                    "--theta must be in (0, 1], got {theta}"
                )));
            }
            let pair = resolve_pair(corpus.corpus.as_deref(), WiliLayout::train, "--corpus")?;
            let corpus = load_pair(&pair)?;
            let stats = corpus_stats(&corpus, theta)?;
            let mut w = csv::Writer::from_writer(create(&out)?);
            let size_col = format!("c{}_size", (theta * 100.0).round() as u32);
            w.write_record(["label", size_col.as_str(), "mean_len"])
                .map_err(csv_error(&out))?;
            for (label, s) in &stats {
                w.write_record([
                    label.to_string(),
                    s.coverage_size.to_string(),
                    format!("{:.2}", s.mean_paragraph_len),
                ])
                .map_err(csv_error(&out))?;
            }
            w.flush().map_err(|e| Error::io(&out, e))?;
            eprintln!(
                "{} languages, mean paragraph length over languages {:.2}",
                stats.len(),
                mean_over_languages(&stats)
            );
        }
        Command::Blocks { corpus, table, out } => {
            let pair = resolve_pair(corpus.corpus.as_deref(), WiliLayout::train, "--corpus")?;
            let blocks = match table {
                Some(t) => load_blocks(t)?,
                None => default_blocks(),
            };
            let corpus = load_pair(&pair)?;
            let report = build_block_report(&corpus, &blocks)?;
            let mut w = csv::Writer::from_writer(create(&out)?);
            w.write_record([
                "start",
                "end",
                "size",
                "name",
                "high_coverage",
                "threshold",
                "next_coverage",
            ])
            .map_err(csv_error(&out))?;
            for s in report.summaries() {
                let high: Vec<String> = s
                    .high
                    .iter()
                    .map(|(l, c)| format!("{l}:{:.4}", c))
                    .collect();
                w.write_record([
                    s.block.start.to_string(),
                    s.block.end.to_string(),
                    s.block.size().to_string(),
                    s.block.name.clone(),
                    high.join(";"),
                    format!("{:.2}", s.block.threshold),
                    format!("{:.6}", s.next_coverage),
                ])
                .map_err(csv_error(&out))?;
            }
            w.flush().map_err(|e| Error::io(&out, e))?;
        }
        Command::TrainFreq {
            corpus,
            theta,
            metric,
            model,
        } => {
            let metric = parse_metric(Some(&metric))?.expect("given");
            if !(theta > 0.0 && theta <= 1.0) {
                return Err(Failure::Usage(format!(
                    "--theta must be in (0, 1], got {theta}"
                )));
            }
            let pair = resolve_pair(corpus.corpus.as_deref(), WiliLayout::train, "--corpus")?;
            let corpus = load_pair(&pair)?;
            let mut trained = train_freq_model(&corpus, theta)?;
            trained.metric = metric;
            eprintln!("charset: {} dims", trained.dims());
            Model::Freq(trained).save(&model)?;
        }
        Command::TrainTextcat {
            corpus,
            size,
            model,
        } => {
            if size == 0 {
                return Err(Failure::Usage("--size must be at least 1".into()));
            }
            let pair = resolve_pair(corpus.corpus.as_deref(), WiliLayout::train, "--corpus")?;
            let corpus = load_pair(&pair)?;
            Model::TextCat(train_textcat(&corpus, size)?).save(&model)?;
        }
        Command::TrainMlp {
            corpus,
            epochs,
            batch,
            seed,
            min_count,
            hidden,
            model,
        } => {
            if epochs == 0 || batch == 0 || hidden == 0 {
                return Err(Failure::Usage(
                    "--epochs, --batch and --hidden must be at least 1".into(),
                ));
            }
            let pair = resolve_pair(corpus.corpus.as_deref(), WiliLayout::train, "--corpus")?;
            let corpus = load_pair(&pair)?;
            let config = TrainConfig {
                epochs,
                batch_size: batch,
                seed,
                hidden,
                ..TrainConfig::default()
            };
            let trained = fit_classifier(&corpus, min_count, &config)?;
            let p = &trained.classifier.params;
            eprintln!(
                "vocabulary {} features, {} classes, {} parameters",
                p.inputs,
                p.classes,
                p.param_count()
            );
            for (i, loss) in trained.epoch_losses.iter().enumerate() {
                eprintln!("epoch {}: loss {loss:.5}", i + 1);
            }
            Model::Mlp(trained.classifier).save(&model)?;
        }
        Command::Predict {
            model,
            text,
            metric,
            timing,
        } => {
            let metric = parse_metric(metric.as_deref())?;
            let model = Model::load(&model)?;
            let lines = read_lines(&text)?;
            let labels = predict_all(&model, &lines, metric, timing.timings)?;
            let stdout = io::stdout();
            let mut out = BufWriter::new(stdout.lock());
            for l in labels {
                writeln!(out, "{l}").map_err(|e| Error::io("<stdout>", e))?;
            }
            out.flush().map_err(|e| Error::io("<stdout>", e))?;
        }
        Command::Evaluate {
            model,
            test,
            supported,
            metric,
            report,
            cm,
            timing,
        } => {
            let metric = parse_metric(metric.as_deref())?;
            let pair = resolve_pair(test.as_deref(), WiliLayout::test, "--test")?;
            let model = Model::load(&model)?;
            let corpus = load_pair(&pair)?;
            let texts: Vec<&str> = corpus.texts().collect();
            let truths: Vec<LanguageLabel> = corpus.labels().cloned().collect();
            let preds: Vec<Prediction> = predict_all(&model, &texts, metric, timing.timings)?
                .into_iter()
                .map(Prediction::Label)
                .collect();

            let full = class_report(&confusion(&preds, &truths)?);
            eprintln!("accuracy {:.4} on {} items", full.accuracy, full.total);
            let scored = match supported {
                Some(path) => {
                    let set = read_label_set(&path)?;
                    let reduced = reduced_eval(&preds, &truths, &set)?;
                    eprintln!(
                        "reduced accuracy {:.4} on {} items; unknown-prediction accuracy {:.4}",
                        reduced.accuracy,
                        reduced.total,
                        unknown_accuracy(&preds, &truths, &set)?
                    );
                    reduced
                }
                None => full,
            };
            write_report_csv(&scored, create(&report)?)?;
            if let Some(cm_path) = cm {
                write_confusion_csv(&confusion(&preds, &truths)?, create(&cm_path)?)?;
            }
        }
    }
    Ok(())
}

fn predict_all<S: AsRef<str> + Sync>(
    model: &Model,
    texts: &[S],
    metric: Option<DistanceMetric>,
    timings: bool,
) -> Result<Vec<LanguageLabel>> {
    if !timings {
        return model.predict_batch(texts, metric);
    }
    // sequential so that the mean reflects single-prediction latency
    let start = Instant::now();
    let labels = texts
        .iter()
        .map(|t| model.predict(t.as_ref(), metric))
        .collect::<Result<Vec<_>>>()?;
    let elapsed = start.elapsed().as_secs_f64() * 1000.0;
    let n = texts.len().max(1) as f64;
    eprintln!(
        "{} predictions with {} model: {:.3} ms mean",
        texts.len(),
        model.kind(),
        elapsed / n
    );
    Ok(labels)
}

fn read_lines(source: &str) -> Result<Vec<String>> {
    let lines: io::Result<Vec<String>> = if source == "-" {
        io::stdin().lock().lines().collect()
    } else {
        let file = fs::File::open(source).map_err(|e| Error::io(source, e))?;
        io::BufReader::new(file).lines().collect()
    };
    let lines = lines.map_err(|e| Error::io(source, e))?;
    Ok(lines
        .into_iter()
        .map(|l| l.strip_suffix('\r').map(str::to_string).unwrap_or(l))
        .filter(|l| !l.is_empty())
        .collect())
}

fn read_label_set(path: &Path) -> Result<HashSet<LanguageLabel>> {
    let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    content
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(LanguageLabel::new)
        .collect()
}

/// Reads every `<label>.txt` in `dir` (sorted by file name) and writes the
/// paragraphs that pass `rules`.
pub fn build_corpus(dir: &Path, x: &Path, y: &Path, rules: &FilterRuleSet) -> Result<Corpus> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .map(|entry| entry.map(|e| e.path()).map_err(|e| Error::io(dir, e)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|p| p.extension().is_some_and(|e| e == "txt"))
        .collect();
    files.sort();
    let mut corpus = Corpus::default();
    for path in files {
        let stem = path
            .file_stem()
            .and_then(|s| s.to_str())
            .ok_or_else(|| Error::Label(path.display().to_string()))?;
        let label = LanguageLabel::new(stem)?;
        let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
        let document = String::from_utf8(bytes).map_err(|e| Error::Decode {
            path: path.clone(),
            offset: e.utf8_error().valid_up_to(),
        })?;
        for p in extract_paragraphs(&document, rules) {
            corpus.push(p, label.clone());
        }
    }
    save_corpus(&corpus, x, y)?;
    eprintln!("{} paragraphs written", corpus.len());
    Ok(corpus)
}
