//! Character-unigram tf-idf features.
//!
//! tf is the raw count of a character in one paragraph, idf is the smoothed
//! `ln((1 + N) / (1 + df)) + 1`, and each vector is L2-normalized.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::char_stats::count_characters;
use crate::dataset_io::Corpus;
use crate::error::{Error, Result};

pub const DEFAULT_MIN_COUNT: u64 = 100;

/// Characters kept as features, indexed in ascending code-point order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vocabulary {
    chars: Vec<char>,
    index: HashMap<char, usize>,
    pub min_count: u64,
}

impl Vocabulary {
    pub fn from_chars(mut chars: Vec<char>, min_count: u64) -> Result<Self> {
        chars.sort_unstable();
        chars.dedup();
        if chars.is_empty() {
            return Err(Error::Training("empty vocabulary".into()));
        }
        let index = chars.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        Ok(Vocabulary {
            chars,
            index,
            min_count,
        })
    }

    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    pub fn chars(&self) -> &[char] {
        &self.chars
    }

    pub fn index_of(&self, c: char) -> Option<usize> {
        self.index.get(&c).copied()
    }
}

/// Keeps every character whose total count over the corpus is at least
/// `min_count`.
pub fn fit_vocabulary(corpus: &Corpus, min_count: u64) -> Result<Vocabulary> {
    if corpus.is_empty() {
        return Err(Error::Training("vocabulary of an empty corpus".into()));
    }
    let texts: Vec<&str> = corpus.texts().collect();
    let counts = count_characters(&texts);
    let chars = counts
        .iter()
        .filter(|&(_, n)| n >= min_count)
        .map(|(c, _)| c)
        .collect();
    Vocabulary::from_chars(chars, min_count)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TfidfWeights {
    pub idf: Vec<f64>,
    /// Number of paragraphs the weights were fitted on.
    pub doc_count: u64,
}

/// Document frequencies over the corpus paragraphs, turned into smoothed idf.
pub fn fit_idf(corpus: &Corpus, vocab: &Vocabulary) -> TfidfWeights {
    let df = corpus
        .items
        .par_iter()
        .fold(
            || vec![0u64; vocab.len()],
            |mut df, sample| {
                let mut seen: Vec<usize> = sample
                    .text
                    .chars()
                    .filter_map(|c| vocab.index_of(c))
                    .collect();
                seen.sort_unstable();
                seen.dedup();
                for j in seen {
                    df[j] += 1;
                }
                df
            },
        )
        .reduce(
            || vec![0u64; vocab.len()],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    let n = corpus.len() as u64;
    TfidfWeights {
        idf: df.iter().map(|&d| smoothed_idf(n, d)).collect(),
        doc_count: n,
    }
}

pub fn smoothed_idf(doc_count: u64, df: u64) -> f64 {
    ((1 + doc_count) as f64 / (1 + df) as f64).ln() + 1.0
}

/// Sparse feature vector with strictly increasing indices.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SparseVector {
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
}

impl SparseVector {
    pub fn nnz(&self) -> usize {
        self.indices.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.indices
            .iter()
            .copied()
            .zip(self.values.iter().copied())
    }

    pub fn to_dense(&self, len: usize) -> Vec<f64> {
        let mut v = vec![0.0; len];
        for (i, x) in self.iter() {
            v[i] = x;
        }
        v
    }

    pub fn from_dense(dense: &[f64]) -> Self {
        let (indices, values) = dense
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0.0)
            .map(|(i, &x)| (i, x))
            .unzip();
        SparseVector { indices, values }
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// tf-idf vector of one paragraph. Characters outside the vocabulary are
/// ignored; a paragraph with none of them yields the zero vector.
pub fn tfidf_sparse(vocab: &Vocabulary, weights: &TfidfWeights, text: &str) -> SparseVector {
    let mut tf: HashMap<usize, u64> = HashMap::new();
    for c in text.chars() {
        if let Some(j) = vocab.index_of(c) {
            *tf.entry(j).or_insert(0) += 1;
        }
    }
    let mut entries: Vec<(usize, f64)> = tf
        .into_iter()
        .map(|(j, n)| (j, n as f64 * weights.idf[j]))
        .collect();
    entries.sort_unstable_by_key(|&(j, _)| j);
    let norm = entries.iter().map(|(_, v)| v * v).sum::<f64>().sqrt();
    let (indices, values) = entries
        .into_iter()
        .map(|(j, v)| (j, if norm > 0.0 { v / norm } else { v }))
        .unzip();
    SparseVector { indices, values }
}

/// Dense form of [`tfidf_sparse`].
pub fn tfidf_transform(vocab: &Vocabulary, weights: &TfidfWeights, text: &str) -> Vec<f64> {
    tfidf_sparse(vocab, weights, text).to_dense(vocab.len())
}
