//! Single-character frequency classifier.
//!
//! Each language is a probability distribution over a shared charset (plus
//! an OTHER dimension). A text is assigned to the language whose
//! distribution is closest under the chosen [`DistanceMetric`].

use std::collections::HashMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rayon::prelude::*;

use crate::char_stats::{count_characters, coverage_charset, union_charset, CharCounts, Charset};
use crate::dataset_io::{Corpus, LanguageLabel};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DistanceMetric {
    /// Inverse discrete overlap, `1 - sum(min(x_i, y_i))`.
    Ido,
    Cityblock,
    Braycurtis,
    Cosine,
    Chebyshev,
    Canberra,
    Correlation,
    Sqeuclidean,
}

impl DistanceMetric {
    pub const ALL: [DistanceMetric; 8] = [
        DistanceMetric::Ido,
        DistanceMetric::Cityblock,
        DistanceMetric::Braycurtis,
        DistanceMetric::Cosine,
        DistanceMetric::Chebyshev,
        DistanceMetric::Canberra,
        DistanceMetric::Correlation,
        DistanceMetric::Sqeuclidean,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DistanceMetric::Ido => "ido",
            DistanceMetric::Cityblock => "cityblock",
            DistanceMetric::Braycurtis => "braycurtis",
            DistanceMetric::Cosine => "cosine",
            DistanceMetric::Chebyshev => "chebyshev",
            DistanceMetric::Canberra => "canberra",
            DistanceMetric::Correlation => "correlation",
            DistanceMetric::Sqeuclidean => "sqeuclidean",
        }
    }
}

impl fmt::Display for DistanceMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DistanceMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DistanceMetric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::domain(format!("unknown metric {s:?}")))
    }
}

/// Dense distance between two equally sized vectors.
///
/// Cosine against a zero vector and correlation against a constant vector
/// are defined as 1 so that argmin stays total.
pub fn distance(metric: DistanceMetric, x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::domain(format!(
            "dimension mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    let pairs = || x.iter().zip(y.iter()).map(|(&a, &b)| (a, b));
    let d = match metric {
        DistanceMetric::Ido => 1.0 - pairs().map(|(a, b)| a.min(b)).sum::<f64>(),
        DistanceMetric::Cityblock => pairs().map(|(a, b)| (a - b).abs()).sum(),
        DistanceMetric::Braycurtis => {
            let num: f64 = pairs().map(|(a, b)| (a - b).abs()).sum();
            let den: f64 = pairs().map(|(a, b)| (a + b).abs()).sum();
            if den == 0.0 {
                0.0
            } else {
                num / den
            }
        }
        DistanceMetric::Cosine => {
            let dot: f64 = pairs().map(|(a, b)| a * b).sum();
            let nx = x.iter().map(|a| a * a).sum::<f64>().sqrt();
            let ny = y.iter().map(|b| b * b).sum::<f64>().sqrt();
            cosine_from_parts(dot, nx, ny)
        }
        DistanceMetric::Chebyshev => pairs().map(|(a, b)| (a - b).abs()).fold(0.0, f64::max),
        DistanceMetric::Canberra => pairs()
            .map(|(a, b)| {
                let den = a.abs() + b.abs();
                if den == 0.0 {
                    0.0
                } else {
                    (a - b).abs() / den
                }
            })
            .sum(),
        DistanceMetric::Correlation => {
            let n = x.len() as f64;
            let mx = x.iter().sum::<f64>() / n;
            let my = y.iter().sum::<f64>() / n;
            let (mut cov, mut vx, mut vy) = (0.0, 0.0, 0.0);
            for (a, b) in pairs() {
                let (da, db) = (a - mx, b - my);
                cov += da * db;
                vx += da * da;
                vy += db * db;
            }
            let scale = |v: &[f64]| v.iter().map(|a| a.abs()).sum::<f64>();
            if is_flat(vx, scale(x)) || is_flat(vy, scale(y)) {
                1.0
            } else {
                (1.0 - cov / (vx.sqrt() * vy.sqrt())).max(0.0)
            }
        }
        DistanceMetric::Sqeuclidean => pairs().map(|(a, b)| (a - b) * (a - b)).sum(),
    };
    Ok(d)
}

/// A vector whose spread is rounding noise relative to its mass counts as
/// constant, so that e.g. a uniform distribution has no correlation.
fn is_flat(centered_sq: f64, l1: f64) -> bool {
    centered_sq.sqrt() <= 1e-12 * l1
}

fn cosine_from_parts(dot: f64, nx: f64, ny: f64) -> f64 {
    if nx == 0.0 || ny == 0.0 {
        1.0
    } else {
        (1.0 - dot / (nx * ny)).max(0.0)
    }
}

/// Normalized character counts of `text` over `charset` (OTHER last).
pub fn to_distribution(text: &str, charset: &Charset) -> Result<Vec<f64>> {
    let sparse = SparseDistribution::from_text(text, charset)?;
    let mut dense = vec![0.0; charset.dims()];
    for &(i, v) in &sparse.entries {
        dense[i] = v;
    }
    Ok(dense)
}

/// Non-zero entries of a text's distribution, sorted by dimension.
#[derive(Clone, Debug)]
struct SparseDistribution {
    entries: Vec<(usize, f64)>,
}

impl SparseDistribution {
    fn from_text(text: &str, charset: &Charset) -> Result<Self> {
        let mut by_dim: HashMap<usize, u64> = HashMap::new();
        let mut total = 0u64;
        for c in text.chars() {
            *by_dim.entry(charset.dim_of(c)).or_insert(0) += 1;
            total += 1;
        }
        if total == 0 {
            return Err(Error::domain("distribution of empty text"));
        }
        let mut counts: Vec<(usize, u64)> = by_dim.into_iter().collect();
        counts.sort_unstable_by_key(|&(d, _)| d);
        let entries = counts
            .into_iter()
            .map(|(d, n)| (d, n as f64 / total as f64))
            .collect();
        Ok(SparseDistribution { entries })
    }
}

/// One language's distribution over the model charset.
#[derive(Clone, Debug, PartialEq)]
pub struct LanguageProfile {
    pub label: LanguageLabel,
    /// Raw counts per dimension; the serialized form.
    pub counts: Vec<u64>,
    pub dist: Vec<f64>,
    sum: f64,
    sum_sq: f64,
    norm: f64,
    /// Sum of squared deviations from the profile mean.
    centered_sq: f64,
    nonzero: usize,
    /// Dimensions by descending probability, for the Chebyshev tail.
    by_value: Vec<usize>,
}

impl LanguageProfile {
    pub fn from_counts(label: LanguageLabel, counts: Vec<u64>) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::Training(format!(
                "language {label} has no characters"
            )));
        }
        let dist: Vec<f64> = counts.iter().map(|&n| n as f64 / total as f64).collect();
        let sum = dist.iter().sum();
        let sum_sq: f64 = dist.iter().map(|v| v * v).sum();
        let mean = sum / dist.len() as f64;
        let centered_sq = dist.iter().map(|v| (v - mean) * (v - mean)).sum();
        let nonzero = dist.iter().filter(|&&v| v != 0.0).count();
        let mut by_value: Vec<usize> = (0..dist.len()).collect();
        by_value.sort_by(|&a, &b| dist[b].total_cmp(&dist[a]).then(a.cmp(&b)));
        Ok(LanguageProfile {
            label,
            counts,
            dist,
            sum,
            sum_sq,
            norm: sum_sq.sqrt(),
            centered_sq,
            nonzero,
            by_value,
        })
    }

    /// Distance from a sparse query, touching only the query's support
    /// plus precomputed profile aggregates. Agrees with [`distance`].
    fn sparse_distance(&self, metric: DistanceMetric, q: &SparseDistribution) -> f64 {
        let y = &self.dist;
        let entries = &q.entries;
        match metric {
            DistanceMetric::Ido => 1.0 - entries.iter().map(|&(i, v)| v.min(y[i])).sum::<f64>(),
            DistanceMetric::Cityblock => self.cityblock(entries),
            DistanceMetric::Braycurtis => {
                let num = self.cityblock(entries);
                let den = entries.iter().map(|&(_, v)| v).sum::<f64>() + self.sum;
                if den == 0.0 {
                    0.0
                } else {
                    num / den
                }
            }
            DistanceMetric::Sqeuclidean => {
                self.sum_sq
                    + entries
                        .iter()
                        .map(|&(i, v)| (v - y[i]) * (v - y[i]) - y[i] * y[i])
                        .sum::<f64>()
            }
            DistanceMetric::Cosine => {
                let dot: f64 = entries.iter().map(|&(i, v)| v * y[i]).sum();
                let nx = entries.iter().map(|&(_, v)| v * v).sum::<f64>().sqrt();
                cosine_from_parts(dot, nx, self.norm)
            }
            DistanceMetric::Chebyshev => {
                let inside = entries
                    .iter()
                    .map(|&(i, v)| (v - y[i]).abs())
                    .fold(0.0, f64::max);
                let outside = self
                    .by_value
                    .iter()
                    .find(|&&d| entries.binary_search_by_key(&d, |&(i, _)| i).is_err())
                    .map_or(0.0, |&d| y[d]);
                inside.max(outside)
            }
            DistanceMetric::Canberra => {
                // every profile dimension with y > 0 outside the support contributes 1
                let mut covered = 0usize;
                let mut inside = 0.0;
                for &(i, v) in entries {
                    if y[i] != 0.0 {
                        covered += 1;
                    }
                    inside += (v - y[i]).abs() / (v + y[i]);
                }
                inside + (self.nonzero - covered) as f64
            }
            DistanceMetric::Correlation => {
                // centered sums; dimensions outside the support have x = 0
                let n = y.len() as f64;
                let mx = entries.iter().map(|&(_, v)| v).sum::<f64>() / n;
                let my = self.sum / n;
                let outside = (y.len() - entries.len()) as f64;
                let mut cov = 0.0;
                let mut vx = outside * mx * mx;
                for &(i, v) in entries {
                    let (dx, dy) = (v - mx, y[i] - my);
                    cov += (dx + mx) * dy;
                    vx += dx * dx;
                }
                let vy = self.centered_sq;
                let sx = entries.iter().map(|&(_, v)| v.abs()).sum::<f64>();
                if is_flat(vx, sx) || is_flat(vy, self.sum) {
                    1.0
                } else {
                    (1.0 - cov / (vx.sqrt() * vy.sqrt())).max(0.0)
                }
            }
        }
    }

    fn cityblock(&self, entries: &[(usize, f64)]) -> f64 {
        let y = &self.dist;
        self.sum
            + entries
                .iter()
                .map(|&(i, v)| (v - y[i]).abs() - y[i])
                .sum::<f64>()
    }
}

/// Trained frequency classifier. Profiles are sorted by label.
#[derive(Clone, Debug)]
pub struct FreqModel {
    pub theta: f64,
    pub charset: Charset,
    pub profiles: Vec<LanguageProfile>,
    /// Default metric for prediction.
    pub metric: DistanceMetric,
}

impl FreqModel {
    pub fn dims(&self) -> usize {
        self.charset.dims()
    }

    pub fn labels(&self) -> impl Iterator<Item = &LanguageLabel> {
        self.profiles.iter().map(|p| &p.label)
    }

    /// Distance from `text` to every profile, in profile order.
    pub fn distances(&self, text: &str, metric: DistanceMetric) -> Result<Vec<f64>> {
        let q = SparseDistribution::from_text(text, &self.charset)?;
        Ok(self
            .profiles
            .iter()
            .map(|p| p.sparse_distance(metric, &q))
            .collect())
    }
}

/// Builds per-language profiles over the union of per-language coverage
/// charsets at `theta`.
pub fn train_freq_model(corpus: &Corpus, theta: f64) -> Result<FreqModel> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(Error::domain(format!(
            "theta must be in (0, 1], got {theta}"
        )));
    }
    let groups = corpus.by_label();
    if groups.is_empty() {
        return Err(Error::Training("corpus has no languages".into()));
    }
    let per_language: Vec<(LanguageLabel, CharCounts)> = groups
        .into_par_iter()
        .map(|(label, texts)| (label.clone(), count_characters(&texts)))
        .collect();
    if let Some((label, _)) = per_language.iter().find(|(_, c)| c.is_empty()) {
        return Err(Error::Training(format!(
            "language {label} has no training text"
        )));
    }
    let coverage = per_language
        .iter()
        .map(|(_, counts)| coverage_charset(counts, theta))
        .collect::<Result<Vec<_>>>()?;
    let charset = union_charset(&coverage)?;
    let profiles = per_language
        .into_iter()
        .map(|(label, counts)| {
            let mut v = vec![0u64; charset.dims()];
            for (c, n) in counts.iter() {
                v[charset.dim_of(c)] += n;
            }
            LanguageProfile::from_counts(label, v)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FreqModel {
        theta,
        charset,
        profiles,
        metric: DistanceMetric::Cityblock,
    })
}

/// Label of the closest profile; ties go to the smallest label.
pub fn predict(model: &FreqModel, text: &str, metric: DistanceMetric) -> Result<LanguageLabel> {
    let distances = model.distances(text, metric)?;
    let mut best = 0;
    for (i, &d) in distances.iter().enumerate().skip(1) {
        if d < distances[best] {
            best = i;
        }
    }
    // profiles are label-sorted, so the first minimum is the smallest label
    Ok(model.profiles[best].label.clone())
}

/// Parallel prediction; output order matches input order.
pub fn predict_batch<S: AsRef<str> + Sync>(
    model: &FreqModel,
    texts: &[S],
    metric: DistanceMetric,
) -> Result<Vec<LanguageLabel>> {
    texts
        .par_iter()
        .map(|t| predict(model, t.as_ref(), metric))
        .collect()
}

pub const FREQ_MAGIC: &str = "wili-freq v1";

/// Writes the line-oriented model file: header, hex charset line with
/// OTHER last, then `label<TAB>counts` per language.
pub fn write_freq_model<W: Write>(model: &FreqModel, mut out: W) -> Result<()> {
    let io = |e| Error::io("<freq model>", e);
    writeln!(
        out,
        "{FREQ_MAGIC} theta={} dims={} metric={}",
        model.theta,
        model.dims(),
        model.metric
    )
    .map_err(io)?;
    let mut line: Vec<String> = model
        .charset
        .chars()
        .iter()
        .map(|&c| format!("{:04X}", c as u32))
        .collect();
    line.push("OTHER".into());
    writeln!(out, "{}", line.join(" ")).map_err(io)?;
    for p in &model.profiles {
        let counts: Vec<String> = p.counts.iter().map(u64::to_string).collect();
        writeln!(out, "{}\t{}", p.label, counts.join(" ")).map_err(io)?;
    }
    out.flush().map_err(io)
}

/// Parses `key=value` fields from a header line after a magic prefix.
pub(crate) fn header_fields<'a>(line: &'a str, magic: &str) -> Result<Vec<(&'a str, &'a str)>> {
    let rest = line
        .strip_prefix(magic)
        .ok_or_else(|| Error::model(format!("expected header {magic:?}, got {line:?}")))?;
    rest.split_whitespace()
        .map(|kv| {
            kv.split_once('=')
                .ok_or_else(|| Error::model(format!("bad header field {kv:?}")))
        })
        .collect()
}

pub(crate) fn header_value<'a>(fields: &[(&str, &'a str)], key: &str) -> Option<&'a str> {
    fields.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
}

pub fn read_freq_model<R: BufRead>(input: R) -> Result<FreqModel> {
    let mut lines = input.lines();
    let mut next = || -> Result<Option<String>> {
        lines
            .next()
            .transpose()
            .map_err(|e| Error::io("<freq model>", e))
    };
    let header = next()?.ok_or_else(|| Error::model("empty model file"))?;
    let fields = header_fields(&header, FREQ_MAGIC)?;
    let theta: f64 = header_value(&fields, "theta")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::model("missing or bad theta"))?;
    let dims: usize = header_value(&fields, "dims")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::model("missing or bad dims"))?;
    let metric = match header_value(&fields, "metric") {
        Some(m) => m.parse()?,
        None => DistanceMetric::Cityblock,
    };

    let charset_line = next()?.ok_or_else(|| Error::model("missing charset line"))?;
    let tokens: Vec<&str> = charset_line.split(' ').collect();
    if tokens.last() != Some(&"OTHER") || tokens.len() != dims {
        return Err(Error::model(format!(
            "charset line has {} entries, header says {dims}",
            tokens.len()
        )));
    }
    let chars = tokens[..tokens.len() - 1]
        .iter()
        .map(|t| {
            u32::from_str_radix(t, 16)
                .ok()
                .and_then(char::from_u32)
                .ok_or_else(|| Error::model(format!("bad code point {t:?}")))
        })
        .collect::<Result<Vec<char>>>()?;
    let charset = Charset::from_chars(chars);
    if charset.dims() != dims {
        return Err(Error::model("charset contains duplicates"));
    }

    let mut profiles = Vec::new();
    while let Some(line) = next()? {
        if line.is_empty() {
            continue;
        }
        let (label, counts) = line
            .split_once('\t')
            .ok_or_else(|| Error::model(format!("bad profile line {line:?}")))?;
        let counts = counts
            .split(' ')
            .map(|n| {
                n.parse::<u64>()
                    .map_err(|_| Error::model(format!("bad count {n:?}")))
            })
            .collect::<Result<Vec<u64>>>()?;
        if counts.len() != dims {
            return Err(Error::model(format!(
                "profile {label} has {} counts, expected {dims}",
                counts.len()
            )));
        }
        profiles.push(LanguageProfile::from_counts(
            LanguageLabel::new(label)?,
            counts,
        )?);
    }
    profiles.sort_by(|a, b| a.label.cmp(&b.label));
    if profiles.windows(2).any(|w| w[0].label == w[1].label) {
        return Err(Error::model("duplicate language in model"));
    }
    if profiles.is_empty() {
        return Err(Error::model("model has no languages"));
    }
    Ok(FreqModel {
        theta,
        charset,
        profiles,
        metric,
    })
}
