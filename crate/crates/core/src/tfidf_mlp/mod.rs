//! Character tf-idf features fed to a one-hidden-layer MLP.

pub mod mlp;
pub mod tfidf;

use std::io::{Read, Write};

use rayon::prelude::*;

pub use mlp::{
    backward, forward, param_count_for, train_network, MlpParams, TrainConfig, TrainOutcome,
    DEFAULT_HIDDEN,
};
pub use tfidf::{
    fit_idf, fit_vocabulary, tfidf_sparse, tfidf_transform, SparseVector, TfidfWeights, Vocabulary,
    DEFAULT_MIN_COUNT,
};

use crate::dataset_io::{Corpus, LanguageLabel};
use crate::error::{Error, Result};
use crate::freq_classifier::{header_fields, header_value};

/// Total number of trainable parameters.
pub fn param_count(params: &MlpParams) -> usize {
    params.param_count()
}

/// Featurizer plus network plus the label of every output unit.
#[derive(Clone, Debug, PartialEq)]
pub struct MlpClassifier {
    pub vocab: Vocabulary,
    pub weights: TfidfWeights,
    /// Sorted; output unit `k` predicts `labels[k]`.
    pub labels: Vec<LanguageLabel>,
    pub params: MlpParams,
}

impl MlpClassifier {
    pub fn features(&self, text: &str) -> SparseVector {
        tfidf_sparse(&self.vocab, &self.weights, text)
    }

    pub fn probabilities(&self, text: &str) -> Vec<f64> {
        mlp::forward_sparse(&self.params, &self.features(text)).probs
    }

    pub fn predict(&self, text: &str) -> LanguageLabel {
        self.labels[mlp::predict_index(&self.params, &self.features(text))].clone()
    }

    pub fn predict_batch<S: AsRef<str> + Sync>(&self, texts: &[S]) -> Vec<LanguageLabel> {
        texts.par_iter().map(|t| self.predict(t.as_ref())).collect()
    }
}

#[derive(Clone, Debug)]
pub struct TrainedMlp {
    pub classifier: MlpClassifier,
    pub epoch_losses: Vec<f64>,
}

/// Featurizes `corpus` with the given vocabulary and idf weights and trains
/// the network on it. Output units are the corpus labels in sorted order.
pub fn train_mlp(
    corpus: &Corpus,
    vocab: &Vocabulary,
    weights: &TfidfWeights,
    config: &TrainConfig,
) -> Result<TrainedMlp> {
    let labels = corpus.distinct_labels();
    let targets: Vec<usize> = corpus
        .labels()
        .map(|l| labels.binary_search(l).expect("label from corpus"))
        .collect();
    let features: Vec<SparseVector> = corpus
        .items
        .par_iter()
        .map(|s| tfidf_sparse(vocab, weights, &s.text))
        .collect();
    let outcome = train_network(&features, &targets, vocab.len(), labels.len(), config)?;
    Ok(TrainedMlp {
        classifier: MlpClassifier {
            vocab: vocab.clone(),
            weights: weights.clone(),
            labels,
            params: outcome.params,
        },
        epoch_losses: outcome.epoch_losses,
    })
}

/// Vocabulary, idf and network in one call.
pub fn fit_classifier(corpus: &Corpus, min_count: u64, config: &TrainConfig) -> Result<TrainedMlp> {
    let vocab = fit_vocabulary(corpus, min_count)?;
    let weights = fit_idf(corpus, &vocab);
    train_mlp(corpus, &vocab, &weights, config)
}

pub const MLP_MAGIC: &str = "wili-mlp v1";

/// Text header and vocabulary block, a `params` marker line, then every
/// parameter as a little-endian f64 in `w1, b1, w2, b2` row-major order.
pub fn write_mlp_model<W: Write>(model: &MlpClassifier, mut out: W) -> Result<()> {
    let io = |e| Error::io("<mlp model>", e);
    let p = &model.params;
    writeln!(
        out,
        "{MLP_MAGIC} vocab={} hidden={} classes={}",
        p.inputs, p.hidden, p.classes
    )
    .map_err(io)?;
    let chars: Vec<String> = model
        .vocab
        .chars()
        .iter()
        .map(|&c| format!("{:04X}", c as u32))
        .collect();
    writeln!(out, "vocab {}", chars.join(" ")).map_err(io)?;
    writeln!(out, "min_count {}", model.vocab.min_count).map_err(io)?;
    writeln!(out, "docs {}", model.weights.doc_count).map_err(io)?;
    let idf: Vec<String> = model.weights.idf.iter().map(f64::to_string).collect();
    writeln!(out, "idf {}", idf.join(" ")).map_err(io)?;
    let labels: Vec<&str> = model.labels.iter().map(LanguageLabel::as_str).collect();
    writeln!(out, "labels {}", labels.join(" ")).map_err(io)?;
    writeln!(out, "params").map_err(io)?;
    for buf in p.buffers() {
        for v in buf {
            out.write_all(&v.to_le_bytes()).map_err(io)?;
        }
    }
    out.flush().map_err(io)
}

pub fn read_mlp_model<R: Read>(mut input: R) -> Result<MlpClassifier> {
    let mut bytes = Vec::new();
    input
        .read_to_end(&mut bytes)
        .map_err(|e| Error::io("<mlp model>", e))?;
    let mut pos = 0;
    let mut next_line = || -> Result<String> {
        let end = bytes[pos..]
            .iter()
            .position(|&b| b == b'\n')
            .ok_or_else(|| Error::model("truncated model header"))?;
        let line = std::str::from_utf8(&bytes[pos..pos + end])
            .map_err(|_| Error::model("model header is not UTF-8"))?
            .to_string();
        pos += end + 1;
        Ok(line)
    };

    let header = next_line()?;
    let fields = header_fields(&header, MLP_MAGIC)?;
    let field = |k: &str| -> Result<usize> {
        header_value(&fields, k)
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::model(format!("missing or bad {k}")))
    };
    let (inputs, hidden, classes) = (field("vocab")?, field("hidden")?, field("classes")?);

    let mut section = |name: &str| -> Result<String> {
        let line = next_line()?;
        match line.strip_prefix(name) {
            Some("") => Ok(String::new()),
            Some(rest) if rest.starts_with(' ') => Ok(rest[1..].to_string()),
            _ => Err(Error::model(format!(
                "expected {name:?} line, got {line:?}"
            ))),
        }
    };
    let chars = section("vocab")?
        .split(' ')
        .filter(|t| !t.is_empty())
        .map(|t| {
            u32::from_str_radix(t, 16)
                .ok()
                .and_then(char::from_u32)
                .ok_or_else(|| Error::model(format!("bad code point {t:?}")))
        })
        .collect::<Result<Vec<char>>>()?;
    let min_count: u64 = section("min_count")?
        .parse()
        .map_err(|_| Error::model("bad min_count"))?;
    let doc_count: u64 = section("docs")?
        .parse()
        .map_err(|_| Error::model("bad docs"))?;
    let idf = section("idf")?
        .split(' ')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| Error::model(format!("bad idf {t:?}")))
        })
        .collect::<Result<Vec<f64>>>()?;
    let labels = section("labels")?
        .split(' ')
        .filter(|t| !t.is_empty())
        .map(LanguageLabel::new)
        .collect::<Result<Vec<_>>>()?;
    section("params")?;

    let vocab = Vocabulary::from_chars(chars, min_count)?;
    if vocab.len() != inputs || idf.len() != inputs || labels.len() != classes {
        return Err(Error::model("vocabulary block does not match header sizes"));
    }
    if labels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::model("labels must be sorted and unique"));
    }

    let mut params = MlpParams::zeros(inputs, hidden, classes);
    let needed = params.param_count() * 8;
    let body = &bytes[pos..];
    if body.len() != needed {
        return Err(Error::model(format!(
            "expected {needed} parameter bytes, found {}",
            body.len()
        )));
    }
    let mut chunks = body.chunks_exact(8);
    for buf in params.buffers_mut() {
        for (v, c) in buf.iter_mut().zip(&mut chunks) {
            *v = f64::from_le_bytes(c.try_into().expect("8-byte chunk"));
        }
    }
    if !params.is_finite() {
        return Err(Error::Numeric(
            "model contains non-finite parameters".into(),
        ));
    }
    Ok(MlpClassifier {
        vocab,
        weights: TfidfWeights { idf, doc_count },
        labels,
        params,
    })
}
