//! Code-point range coverage per language, range folding, and a
//! script-based router that picks a language or a candidate group.

use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;

use crate::char_stats::{count_characters, CharCounts};
use crate::dataset_io::{Corpus, LanguageLabel};
use crate::error::{Error, Result};

/// Minimum coverage for a language to own a range outright.
pub const OWNERSHIP_THRESHOLD: f64 = 0.49;

/// Inclusive code-point range. `threshold` is the coverage a language needs
/// inside the range to be listed as a high-coverage user of it.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockRange {
    pub start: u32,
    pub end: u32,
    pub name: String,
    pub threshold: f64,
}

impl BlockRange {
    pub fn new(start: u32, end: u32, name: impl Into<String>, threshold: f64) -> Result<Self> {
        if start > end {
            return Err(Error::domain(format!("block start {start} > end {end}")));
        }
        if !(0.0..=1.0).contains(&threshold) {
            return Err(Error::domain(format!(
                "threshold {threshold} outside [0, 1]"
            )));
        }
        Ok(BlockRange {
            start,
            end,
            name: name.into(),
            threshold,
        })
    }

    pub fn contains(&self, c: char) -> bool {
        (self.start..=self.end).contains(&(c as u32))
    }

    /// Number of code points in the range.
    pub fn size(&self) -> u32 {
        self.end - self.start + 1
    }
}

/// The 23 ranges that separate WiLI-2018 languages well, each with the
/// weakest coverage among its high-coverage languages.
pub fn default_blocks() -> Vec<BlockRange> {
    const TABLE: &[(u32, u32, &str, f64)] = &[
        (0, 879, "Latin", 0.91),
        (880, 1023, "Greek", 0.76),
        (1040, 1103, "Cyrillic", 0.60),
        (1328, 1423, "Armenian", 0.78),
        (1424, 1535, "Hebrew", 0.76),
        (1536, 1791, "Arabic", 0.69),
        (1920, 1983, "Thaana", 0.86),
        (1984, 2431, "NKo-Devanagari", 0.49),
        (2432, 2559, "Bengali", 0.73),
        (2560, 2687, "Gurmukhi", 0.74),
        (2688, 2815, "Gujarati", 0.80),
        (2816, 2943, "Oriya", 0.78),
        (2944, 3071, "Tamil", 0.84),
        (3072, 3199, "Telugu", 0.80),
        (3200, 3327, "Kannada", 0.83),
        (3328, 3455, "Malayalam", 0.84),
        (3456, 3583, "Sinhala", 0.76),
        (3584, 3711, "Thai", 0.07),
        (3712, 3839, "Lao", 0.67),
        (3840, 4095, "Tibetan", 0.97),
        (12352, 12543, "Hiragana-Katakana", 0.49),
        (19000, 44000, "CJK", 0.32),
        (44000, 56000, "Hangul", 0.64),
    ];
    TABLE
        .iter()
        .map(|&(s, e, n, t)| BlockRange::new(s, e, n, t).expect("static table"))
        .collect()
}

/// Reads `start,end,name[,threshold]` lines; `#` starts a comment. A
/// missing threshold defaults to [`OWNERSHIP_THRESHOLD`].
pub fn load_blocks(path: impl AsRef<Path>) -> Result<Vec<BlockRange>> {
    let path = path.as_ref();
    let content = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_blocks(&content)
}

pub fn parse_blocks(content: &str) -> Result<Vec<BlockRange>> {
    let mut blocks = Vec::new();
    for (index, line) in content.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: &str| Error::Format {
            index,
            message: format!("{msg}: {line:?}"),
        };
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if !(3..=4).contains(&fields.len()) {
            return Err(bad("expected start,end,name[,threshold]"));
        }
        let start = fields[0].parse().map_err(|_| bad("bad start"))?;
        let end = fields[1].parse().map_err(|_| bad("bad end"))?;
        let threshold = match fields.get(3) {
            Some(t) => t.parse().map_err(|_| bad("bad threshold"))?,
            None => OWNERSHIP_THRESHOLD,
        };
        blocks.push(BlockRange::new(start, end, fields[2], threshold)?);
    }
    if blocks.is_empty() {
        return Err(Error::domain("block table is empty"));
    }
    Ok(blocks)
}

/// Fraction of all counted characters that fall inside `block`.
pub fn block_coverage(counts: &CharCounts, block: &BlockRange) -> Result<f64> {
    if counts.total() == 0 {
        return Err(Error::domain("coverage of empty counts"));
    }
    Ok(counts.count_in_range(block.start, block.end) as f64 / counts.total() as f64)
}

/// Replaces every code point inside `block` with the block's first code point.
pub fn fold_block(text: &str, block: &BlockRange) -> String {
    let first = char::from_u32(block.start);
    text.chars()
        .map(|c| match first {
            Some(f) if block.contains(c) => f,
            _ => c,
        })
        .collect()
}

/// Summary of one block over all languages.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockSummary {
    pub block: BlockRange,
    /// Languages at or above the block threshold, by descending coverage.
    pub high: Vec<(LanguageLabel, f64)>,
    /// Largest coverage among the remaining languages.
    pub next_coverage: f64,
}

impl BlockSummary {
    /// Lowest coverage among the high-coverage languages.
    pub fn high_min(&self) -> Option<f64> {
        self.high.iter().map(|(_, c)| *c).reduce(f64::min)
    }
}

/// Coverage of every block for every language.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockCoverageReport {
    pub blocks: Vec<BlockRange>,
    pub languages: Vec<LanguageLabel>,
    /// `coverage[b][l]` for block `b` and language `l`.
    pub coverage: Vec<Vec<f64>>,
}

impl BlockCoverageReport {
    /// `(block, language, coverage)` triples, block-major.
    pub fn rows(&self) -> impl Iterator<Item = (&BlockRange, &LanguageLabel, f64)> + '_ {
        self.blocks
            .iter()
            .zip(&self.coverage)
            .flat_map(move |(b, row)| self.languages.iter().zip(row).map(move |(l, &c)| (b, l, c)))
    }

    pub fn coverage_of(&self, block: usize, label: &LanguageLabel) -> Option<f64> {
        let l = self.languages.binary_search(label).ok()?;
        Some(self.coverage[block][l])
    }

    pub fn summary(&self, block: usize) -> BlockSummary {
        let b = &self.blocks[block];
        let row = &self.coverage[block];
        let mut high: Vec<(LanguageLabel, f64)> = Vec::new();
        let mut next_coverage: f64 = 0.0;
        for (l, &c) in self.languages.iter().zip(row) {
            if c >= b.threshold && c > 0.0 {
                high.push((l.clone(), c));
            } else {
                next_coverage = next_coverage.max(c);
            }
        }
        high.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        BlockSummary {
            block: b.clone(),
            high,
            next_coverage,
        }
    }

    pub fn summaries(&self) -> Vec<BlockSummary> {
        (0..self.blocks.len()).map(|b| self.summary(b)).collect()
    }
}

pub fn build_block_report(corpus: &Corpus, blocks: &[BlockRange]) -> Result<BlockCoverageReport> {
    let groups: Vec<(LanguageLabel, Vec<&str>)> = corpus
        .by_label()
        .into_iter()
        .map(|(l, t)| (l.clone(), t))
        .collect();
    if groups.is_empty() {
        return Err(Error::domain("block report of an empty corpus"));
    }
    let per_language: Vec<(LanguageLabel, CharCounts)> = groups
        .into_par_iter()
        .map(|(l, texts)| (l, count_characters(&texts)))
        .collect();
    let mut coverage = vec![vec![0.0; per_language.len()]; blocks.len()];
    for (li, (label, counts)) in per_language.iter().enumerate() {
        if counts.total() == 0 {
            return Err(Error::domain(format!("language {label} has no text")));
        }
        for (bi, block) in blocks.iter().enumerate() {
            coverage[bi][li] = block_coverage(counts, block)?;
        }
    }
    Ok(BlockCoverageReport {
        blocks: blocks.to_vec(),
        languages: per_language.into_iter().map(|(l, _)| l).collect(),
        coverage,
    })
}

/// Outcome of script routing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Route {
    /// The text's dominant block belongs to a single language.
    Language(LanguageLabel),
    /// Several languages share the dominant block.
    Group {
        block: String,
        candidates: Vec<LanguageLabel>,
    },
}

/// Routes texts by their dominant block, using per-block ownership learned
/// from training data.
#[derive(Clone, Debug)]
pub struct ScriptRouter {
    blocks: Vec<BlockRange>,
    owners: Vec<Option<LanguageLabel>>,
    groups: Vec<Vec<LanguageLabel>>,
    all: Vec<LanguageLabel>,
}

impl ScriptRouter {
    pub fn new(report: &BlockCoverageReport) -> Self {
        let mut owners = Vec::new();
        let mut groups = Vec::new();
        for (bi, row) in report.coverage.iter().enumerate() {
            let owning: Vec<&LanguageLabel> = report
                .languages
                .iter()
                .zip(row)
                .filter(|(_, &c)| c >= OWNERSHIP_THRESHOLD)
                .map(|(l, _)| l)
                .collect();
            owners.push(match owning.as_slice() {
                [only] => Some((*only).clone()),
                _ => None,
            });
            let mut group: Vec<LanguageLabel> = report
                .summary(bi)
                .high
                .into_iter()
                .map(|(l, _)| l)
                .collect();
            group.sort();
            groups.push(group);
        }
        ScriptRouter {
            blocks: report.blocks.clone(),
            owners,
            groups,
            all: report.languages.clone(),
        }
    }

    /// Index of the block covering most of `text`; earlier blocks win ties.
    pub fn dominant_block(&self, text: &str) -> Option<usize> {
        let counts = count_characters(&[text]);
        if counts.total() == 0 {
            return None;
        }
        let mut best: Option<(usize, u64)> = None;
        for (bi, b) in self.blocks.iter().enumerate() {
            let n = counts.count_in_range(b.start, b.end);
            if n > 0 && best.is_none_or(|(_, m)| n > m) {
                best = Some((bi, n));
            }
        }
        best.map(|(bi, _)| bi)
    }

    pub fn route(&self, text: &str) -> Route {
        let Some(bi) = self.dominant_block(text) else {
            return Route::Group {
                block: "none".into(),
                candidates: self.all.clone(),
            };
        };
        if let Some(owner) = &self.owners[bi] {
            return Route::Language(owner.clone());
        }
        let candidates = if self.groups[bi].is_empty() {
            self.all.clone()
        } else {
            self.groups[bi].clone()
        };
        Route::Group {
            block: self.blocks[bi].name.clone(),
            candidates,
        }
    }
}

/// Convenience wrapper over [`ScriptRouter::route`].
pub fn route_script(report: &BlockCoverageReport, text: &str) -> Route {
    ScriptRouter::new(report).route(text)
}

/// Per-block summaries keyed by block name.
pub fn summaries_by_name(report: &BlockCoverageReport) -> BTreeMap<String, BlockSummary> {
    report
        .summaries()
        .into_iter()
        .map(|s| (s.block.name.clone(), s))
        .collect()
}
