//! Written language identification over the WiLI paragraph corpus.
//!
//! Three classifiers share one corpus format and one evaluation harness:
//!
//! - [`freq_classifier`]: per-language single-character distributions over a
//!   coverage-selected charset, compared with a pluggable distance metric.
//! - [`textcat`]: ranked trigram fingerprints with the out-of-place distance.
//! - [`tfidf_mlp`]: character tf-idf features and a one-hidden-layer MLP.
//!
//! Supporting modules build corpora from raw text ([`corpus_builder`]),
//! compute character statistics ([`char_stats`]) and analyse Unicode block
//! usage per language ([`unicode_blocks`]).

pub mod char_stats;
pub mod cli;
pub mod corpus_builder;
pub mod dataset_io;
pub mod error;
pub mod evaluation;
pub mod freq_classifier;
pub mod models;
pub mod registry;
pub mod textcat;
pub mod tfidf_mlp;
pub mod unicode_blocks;

pub use dataset_io::{load_corpus, save_corpus, Corpus, LanguageLabel, Sample};
pub use error::{Error, Result};
pub use evaluation::Prediction;
pub use freq_classifier::DistanceMetric;
