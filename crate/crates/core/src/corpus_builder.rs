//! Raw text to WiLI-style paragraphs: whitespace cleanup, NFC, and the
//! reference/markup filters.

use regex::Regex;
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

/// Paragraph acceptance rules.
#[derive(Clone, Debug)]
pub struct FilterRuleSet {
    pub min_code_points: usize,
    pub forbidden_literals: Vec<String>,
    pub roman_volume: Regex,
    pub doi: Regex,
}

/// `vol.` followed by a roman numeral, case-sensitive.
pub const ROMAN_VOLUME_PATTERN: &str = r"vol\.\s+[IVXLCDM]+";

/// DOI syntax: `10.` + 4-9 digit registrant + `/` + non-empty suffix.
/// Matches with or without a `doi:` prefix since the match is unanchored.
pub const DOI_PATTERN: &str = r"10\.[0-9]{4,9}/\S+";

impl FilterRuleSet {
    pub fn new(min_code_points: usize) -> Result<Self> {
        if min_code_points == 0 {
            return Err(Error::domain("min_code_points must be at least 1"));
        }
        Ok(FilterRuleSet {
            min_code_points,
            forbidden_literals: vec!["ISBN".to_string(), "\\displaystyle".to_string()],
            roman_volume: Regex::new(ROMAN_VOLUME_PATTERN).expect("static pattern"),
            doi: Regex::new(DOI_PATTERN).expect("static pattern"),
        })
    }

    pub fn with_patterns(
        min_code_points: usize,
        forbidden_literals: Vec<String>,
        roman_volume: &str,
        doi: &str,
    ) -> Result<Self> {
        if min_code_points == 0 {
            return Err(Error::domain("min_code_points must be at least 1"));
        }
        let compile =
            |p: &str| Regex::new(p).map_err(|e| Error::domain(format!("bad pattern {p:?}: {e}")));
        Ok(FilterRuleSet {
            min_code_points,
            forbidden_literals,
            roman_volume: compile(roman_volume)?,
            doi: compile(doi)?,
        })
    }
}

impl Default for FilterRuleSet {
    fn default() -> Self {
        FilterRuleSet::new(140).expect("140 is a valid minimum")
    }
}

/// Trims, collapses every whitespace run to one U+0020, then applies NFC.
pub fn normalize_text(raw: &str) -> String {
    let mut collapsed = String::with_capacity(raw.len());
    for word in raw.split(char::is_whitespace).filter(|w| !w.is_empty()) {
        if !collapsed.is_empty() {
            collapsed.push(' ');
        }
        collapsed.push_str(word);
    }
    collapsed.nfc().collect()
}

/// Applies the length and content filters to already-normalized text.
pub fn is_valid_paragraph(text: &str, rules: &FilterRuleSet) -> bool {
    text.chars().count() >= rules.min_code_points
        && !rules
            .forbidden_literals
            .iter()
            .any(|lit| text.contains(lit.as_str()))
        && !rules.roman_volume.is_match(text)
        && !rules.doi.is_match(text)
}

fn is_line_break(c: char) -> bool {
    matches!(c, '\n' | '\r' | '\u{85}' | '\u{2028}' | '\u{2029}')
}

/// Splits a plain-text document at line breaks and keeps the normalized
/// lines that pass `rules`, in document order.
pub fn extract_paragraphs(document: &str, rules: &FilterRuleSet) -> Vec<String> {
    document
        .split(is_line_break)
        .filter(|line| !line.trim().is_empty())
        .map(normalize_text)
        .filter(|p| is_valid_paragraph(p, rules))
        .collect()
}
