//! Code-point counting and coverage character sets.
//!
//! A "character" here is a Unicode scalar value of NFC text; no grapheme
//! clustering is done.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use crate::dataset_io::{Corpus, LanguageLabel};
use crate::error::{Error, Result};

/// Occurrence count per code point. Never holds zero entries.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CharCounts {
    counts: HashMap<char, u64>,
    total: u64,
}

impl CharCounts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_text(&mut self, text: &str) {
        for c in text.chars() {
            *self.counts.entry(c).or_insert(0) += 1;
            self.total += 1;
        }
    }

    pub fn add(&mut self, c: char, n: u64) {
        if n > 0 {
            *self.counts.entry(c).or_insert(0) += n;
            self.total += n;
        }
    }

    pub fn merge(&mut self, other: &CharCounts) {
        for (&c, &n) in &other.counts {
            self.add(c, n);
        }
    }

    pub fn get(&self, c: char) -> u64 {
        self.counts.get(&c).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Number of distinct code points.
    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = (char, u64)> + '_ {
        self.counts.iter().map(|(&c, &n)| (c, n))
    }

    /// Descending by count, ties by ascending code point.
    pub fn sorted_by_frequency(&self) -> Vec<(char, u64)> {
        let mut v: Vec<(char, u64)> = self.iter().collect();
        v.sort_unstable_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        v
    }

    /// Sum of counts over an inclusive code-point range.
    pub fn count_in_range(&self, start: u32, end: u32) -> u64 {
        self.iter()
            .filter(|(c, _)| (start..=end).contains(&(*c as u32)))
            .map(|(_, n)| n)
            .sum()
    }
}

impl FromIterator<(char, u64)> for CharCounts {
    fn from_iter<I: IntoIterator<Item = (char, u64)>>(iter: I) -> Self {
        let mut counts = CharCounts::new();
        for (c, n) in iter {
            counts.add(c, n);
        }
        counts
    }
}

/// Counts every code point across `texts`. Shards across threads for large
/// inputs; the result does not depend on sharding.
pub fn count_characters<S: AsRef<str> + Sync>(texts: &[S]) -> CharCounts {
    if texts.len() < 64 {
        let mut counts = CharCounts::new();
        for t in texts {
            counts.add_text(t.as_ref());
        }
        return counts;
    }
    texts
        .par_chunks(256)
        .map(|chunk| {
            let mut counts = CharCounts::new();
            for t in chunk {
                counts.add_text(t.as_ref());
            }
            counts
        })
        .reduce(CharCounts::new, |mut a, b| {
            a.merge(&b);
            a
        })
}

/// The most frequent characters of a text collection that together reach a
/// coverage fraction `theta`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverageCharset {
    pub theta: f64,
    /// Descending by count, ties by ascending code point.
    pub chars: Vec<char>,
    /// Sum of counts of `chars`.
    pub achieved_total: u64,
    /// `theta * total`.
    pub sigma_theta: f64,
}

impl CoverageCharset {
    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    pub fn contains(&self, c: char) -> bool {
        self.chars.contains(&c)
    }
}

/// Walks characters in descending-count order with a running counter that
/// starts at zero; a character is taken while the counter is still below
/// `theta * total`, and the counter grows by its count afterwards. The last
/// character taken may overshoot the target.
pub fn coverage_charset(counts: &CharCounts, theta: f64) -> Result<CoverageCharset> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(Error::domain(format!(
            "theta must be in (0, 1], got {theta}"
        )));
    }
    if counts.is_empty() {
        return Err(Error::domain("coverage charset of empty counts"));
    }
    let sigma_theta = theta * counts.total() as f64;
    let mut running: u64 = 0;
    let mut chars = Vec::new();
    for (c, n) in counts.sorted_by_frequency() {
        if (running as f64) < sigma_theta {
            chars.push(c);
        }
        running += n;
    }
    let achieved_total = chars.iter().map(|&c| counts.get(c)).sum();
    Ok(CoverageCharset {
        theta,
        chars,
        achieved_total,
        sigma_theta,
    })
}

/// Ordered character set shared by all languages, with a trailing OTHER
/// dimension that pools every character outside the set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Charset {
    chars: Vec<char>,
    index: HashMap<char, usize>,
}

impl Charset {
    /// Deduplicates and sorts by code point.
    pub fn from_chars(chars: impl IntoIterator<Item = char>) -> Self {
        let set: BTreeSet<char> = chars.into_iter().collect();
        let chars: Vec<char> = set.into_iter().collect();
        let index = chars.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        Charset { chars, index }
    }

    /// Member characters, ascending, without OTHER.
    pub fn chars(&self) -> &[char] {
        &self.chars
    }

    /// Number of dimensions including OTHER.
    pub fn dims(&self) -> usize {
        self.chars.len() + 1
    }

    pub fn other_index(&self) -> usize {
        self.chars.len()
    }

    /// Dimension for `c`; non-members map to OTHER.
    pub fn dim_of(&self, c: char) -> usize {
        self.index.get(&c).copied().unwrap_or(self.chars.len())
    }

    pub fn contains(&self, c: char) -> bool {
        self.index.contains_key(&c)
    }
}

/// Union of per-language coverage sets, ascending code point, plus OTHER.
pub fn union_charset(per_language: &[CoverageCharset]) -> Result<Charset> {
    if per_language.is_empty() {
        return Err(Error::domain("union of zero charsets"));
    }
    Ok(Charset::from_chars(
        per_language.iter().flat_map(|cs| cs.chars.iter().copied()),
    ))
}

/// Per-language corpus statistics.
#[derive(Clone, Debug, PartialEq)]
pub struct LanguageStats {
    pub paragraphs: usize,
    /// Mean paragraph length in code points.
    pub mean_paragraph_len: f64,
    /// Size of the language's coverage charset at the requested theta.
    pub coverage_size: usize,
}

/// Paragraph length and coverage-charset size for every language,
/// keyed by label in sorted order.
pub fn corpus_stats(corpus: &Corpus, theta: f64) -> Result<Vec<(LanguageLabel, LanguageStats)>> {
    if corpus.is_empty() {
        return Err(Error::domain("statistics of an empty corpus"));
    }
    let groups: Vec<(LanguageLabel, Vec<&str>)> = corpus
        .by_label()
        .into_iter()
        .map(|(l, v)| (l.clone(), v))
        .collect();
    groups
        .into_par_iter()
        .map(|(label, texts)| {
            let counts = count_characters(&texts);
            let lengths: u64 = texts.iter().map(|t| t.chars().count() as u64).sum();
            let coverage_size = if counts.is_empty() {
                0
            } else {
                coverage_charset(&counts, theta)?.len()
            };
            Ok((
                label,
                LanguageStats {
                    paragraphs: texts.len(),
                    mean_paragraph_len: lengths as f64 / texts.len() as f64,
                    coverage_size,
                },
            ))
        })
        .collect()
}

/// Unweighted mean over languages of the per-language mean paragraph length.
pub fn mean_over_languages(stats: &[(LanguageLabel, LanguageStats)]) -> f64 {
    if stats.is_empty() {
        return 0.0;
    }
    stats.iter().map(|(_, s)| s.mean_paragraph_len).sum::<f64>() / stats.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_simple() {
        let c = count_characters(&["aab"]);
        assert_eq!(c.get('a'), 2);
        assert_eq!(c.get('b'), 1);
        assert_eq!(c.total(), 3);
        assert_eq!(c.distinct(), 2);
    }

    #[test]
    fn counts_empty() {
        let c = count_characters::<&str>(&[]);
        assert!(c.is_empty());
        assert_eq!(c.total(), 0);
        assert_eq!(c.distinct(), 0);
    }

    #[test]
    fn counts_ignore_text_boundaries() {
        assert_eq!(count_characters(&["ab", "ba"]), count_characters(&["aabb"]));
    }

    #[test]
    fn sharded_counting_matches_serial() {
        let texts: Vec<String> = (0..1000).map(|i| format!("{i} ž {}", i % 7)).collect();
        let mut serial = CharCounts::new();
        for t in &texts {
            serial.add_text(t);
        }
        assert_eq!(count_characters(&texts), serial);
    }

    #[test]
    fn zero_add_is_ignored() {
        let mut c = CharCounts::new();
        c.add('x', 0);
        assert_eq!(c.distinct(), 0);
    }

    #[test]
    fn coverage_hand_executed() {
        // sigma = 2; n=0 < 2 takes a, n becomes 3, b is not taken
        let counts: CharCounts = [('a', 3), ('b', 1)].into_iter().collect();
        let cs = coverage_charset(&counts, 0.5).unwrap();
        assert_eq!(cs.chars, vec!['a']);
        assert_eq!(cs.achieved_total, 3);
        assert_eq!(cs.sigma_theta, 2.0);
    }

    #[test]
    fn coverage_full_takes_everything() {
        let counts = count_characters(&["hello world"]);
        let cs = coverage_charset(&counts, 1.0).unwrap();
        assert_eq!(cs.len(), counts.distinct());
        assert_eq!(cs.achieved_total, counts.total());
    }

    #[test]
    fn coverage_tie_break_ascending() {
        let counts: CharCounts = [('c', 2), ('a', 2), ('b', 2)].into_iter().collect();
        let cs = coverage_charset(&counts, 0.5).unwrap();
        // sigma = 3: a (n=0), b (n=2), stop at n=4
        assert_eq!(cs.chars, vec!['a', 'b']);
    }

    #[test]
    fn coverage_domain_errors() {
        let counts = count_characters(&["a"]);
        assert!(coverage_charset(&counts, 0.0).is_err());
        assert!(coverage_charset(&counts, 1.5).is_err());
        assert!(coverage_charset(&counts, f64::NAN).is_err());
        assert!(coverage_charset(&CharCounts::new(), 0.5).is_err());
    }

    #[test]
    fn union_sorted_with_other() {
        let a = coverage_charset(&count_characters(&["ab"]), 1.0).unwrap();
        let b = coverage_charset(&count_characters(&["bc"]), 1.0).unwrap();
        let u = union_charset(&[a, b]).unwrap();
        assert_eq!(u.chars(), &['a', 'b', 'c']);
        assert_eq!(u.dims(), 4);
        assert_eq!(u.dim_of('b'), 1);
        assert_eq!(u.dim_of('z'), u.other_index());
        assert!(union_charset(&[]).is_err());
    }

    #[test]
    fn stats_single_paragraph() {
        let mut corpus = Corpus::default();
        corpus.push("x".repeat(140), LanguageLabel::new("eng").unwrap());
        let stats = corpus_stats(&corpus, 0.99).unwrap();
        assert_eq!(stats.len(), 1);
        assert_eq!(stats[0].1.mean_paragraph_len, 140.0);
        assert_eq!(stats[0].1.coverage_size, 1);
        assert_eq!(mean_over_languages(&stats), 140.0);
        assert!(corpus_stats(&Corpus::default(), 0.99).is_err());
    }
}
