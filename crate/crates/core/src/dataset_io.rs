//! Reading and writing the WiLI corpus layout.
//!
//! A corpus is two parallel files: `x_*.csv` holds one paragraph per line and
//! `y_*.csv` holds the matching label on the same line number. Despite the
//! extension, lines are raw fields: no quoting and no delimiters.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::registry::WILI_2018;

/// A language code such as `eng`, `be-tarask` or `zh-yue`. Case-sensitive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LanguageLabel(String);

impl LanguageLabel {
    pub fn new(code: impl Into<String>) -> Result<Self> {
        let code = code.into();
        let valid = !code.is_empty()
            && code.is_ascii()
            && !code
                .bytes()
                .any(|b| b.is_ascii_whitespace() || b.is_ascii_control());
        if valid {
            Ok(LanguageLabel(code))
        } else {
            Err(Error::Label(code))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Whether this code is one of the 235 WiLI-2018 languages.
    pub fn is_wili_2018(&self) -> bool {
        WILI_2018
            .binary_search_by(|(code, _)| code.cmp(&self.0.as_str()))
            .is_ok()
    }

    /// English name from the WiLI-2018 registry, if listed.
    pub fn english_name(&self) -> Option<&'static str> {
        WILI_2018
            .binary_search_by(|(code, _)| code.cmp(&self.0.as_str()))
            .ok()
            .map(|i| WILI_2018[i].1)
    }
}

impl fmt::Display for LanguageLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::str::FromStr for LanguageLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LanguageLabel::new(s)
    }
}

/// All WiLI-2018 labels in code order.
pub fn wili_2018_labels() -> Vec<LanguageLabel> {
    WILI_2018
        .iter()
        .map(|(code, _)| LanguageLabel(code.to_string()))
        .collect()
}

/// One paragraph with its language.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    pub text: String,
    pub label: LanguageLabel,
}

/// Ordered, line-aligned list of labelled paragraphs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Corpus {
    pub items: Vec<Sample>,
}

impl Corpus {
    pub fn new(items: Vec<Sample>) -> Self {
        Corpus { items }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn push(&mut self, text: impl Into<String>, label: LanguageLabel) {
        self.items.push(Sample {
            text: text.into(),
            label,
        });
    }

    pub fn texts(&self) -> impl Iterator<Item = &str> {
        self.items.iter().map(|s| s.text.as_str())
    }

    pub fn labels(&self) -> impl Iterator<Item = &LanguageLabel> {
        self.items.iter().map(|s| &s.label)
    }

    /// Distinct labels, sorted.
    pub fn distinct_labels(&self) -> Vec<LanguageLabel> {
        let mut labels: Vec<LanguageLabel> = self.labels().cloned().collect();
        labels.sort();
        labels.dedup();
        labels
    }

    /// Paragraphs grouped by label, labels sorted, paragraph order preserved.
    pub fn by_label(&self) -> BTreeMap<&LanguageLabel, Vec<&str>> {
        let mut groups: BTreeMap<&LanguageLabel, Vec<&str>> = BTreeMap::new();
        for s in &self.items {
            groups.entry(&s.label).or_default().push(&s.text);
        }
        groups
    }

    /// Number of paragraphs per label.
    pub fn label_counts(&self) -> BTreeMap<&LanguageLabel, usize> {
        let mut counts = BTreeMap::new();
        for label in self.labels() {
            *counts.entry(label).or_insert(0) += 1;
        }
        counts
    }

    /// Concatenation of two corpora, `self` first.
    pub fn concat(mut self, other: Corpus) -> Corpus {
        self.items.extend(other.items);
        self
    }
}

fn read_utf8(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    String::from_utf8(bytes).map_err(|e| Error::Decode {
        path: path.to_path_buf(),
        offset: e.utf8_error().valid_up_to(),
    })
}

/// Splits on `\n`, dropping one trailing `\r` per line and the empty segment
/// after a final newline.
fn split_lines(content: &str) -> Vec<&str> {
    if content.is_empty() {
        return Vec::new();
    }
    let body = content.strip_suffix('\n').unwrap_or(content);
    body.split('\n')
        .map(|line| line.strip_suffix('\r').unwrap_or(line))
        .collect()
}

/// Loads a corpus from a paragraph file and a label file.
pub fn load_corpus(x_path: impl AsRef<Path>, y_path: impl AsRef<Path>) -> Result<Corpus> {
    let x_content = read_utf8(x_path.as_ref())?;
    let y_content = read_utf8(y_path.as_ref())?;
    let xs = split_lines(&x_content);
    let ys = split_lines(&y_content);
    if xs.len() != ys.len() {
        return Err(Error::Alignment {
            x_lines: xs.len(),
            y_lines: ys.len(),
        });
    }
    let items = xs
        .into_iter()
        .zip(ys)
        .enumerate()
        .map(|(index, (text, label))| {
            let label = LanguageLabel::new(label.trim()).map_err(|_| Error::Format {
                index,
                message: format!("invalid label {label:?}"),
            })?;
            Ok(Sample {
                text: text.to_string(),
                label,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Corpus { items })
}

/// Writes a corpus so that [`load_corpus`] reproduces it exactly.
///
/// Fails before touching either file if a paragraph contains a line break.
pub fn save_corpus(
    corpus: &Corpus,
    x_path: impl AsRef<Path>,
    y_path: impl AsRef<Path>,
) -> Result<()> {
    for (index, sample) in corpus.items.iter().enumerate() {
        if sample.text.contains(['\n', '\r']) {
            return Err(Error::Format {
                index,
                message: "paragraph contains a line break".into(),
            });
        }
    }
    write_lines(x_path.as_ref(), corpus.texts())?;
    write_lines(y_path.as_ref(), corpus.labels().map(LanguageLabel::as_str))?;
    Ok(())
}

fn write_lines<'a>(path: &Path, lines: impl Iterator<Item = &'a str>) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    for line in lines {
        out.write_all(line.as_bytes())
            .and_then(|_| out.write_all(b"\n"))
            .map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}

/// Paths of the four WiLI split files inside a data directory.
#[derive(Clone, Debug)]
pub struct WiliLayout {
    pub dir: PathBuf,
}

impl WiliLayout {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        WiliLayout { dir: dir.into() }
    }

    /// Uses `WILI_DATA_DIR` if set.
    pub fn from_env() -> Option<Self> {
        std::env::var_os("WILI_DATA_DIR").map(WiliLayout::new)
    }

    pub fn train(&self) -> (PathBuf, PathBuf) {
        (self.dir.join("x_train.csv"), self.dir.join("y_train.csv"))
    }

    pub fn test(&self) -> (PathBuf, PathBuf) {
        (self.dir.join("x_test.csv"), self.dir.join("y_test.csv"))
    }

    /// True when all four split files exist.
    pub fn is_complete(&self) -> bool {
        let (xtr, ytr) = self.train();
        let (xte, yte) = self.test();
        [xtr, ytr, xte, yte].iter().all(|p| p.is_file())
    }

    pub fn load_train(&self) -> Result<Corpus> {
        let (x, y) = self.train();
        load_corpus(x, y)
    }

    pub fn load_test(&self) -> Result<Corpus> {
        let (x, y) = self.test();
        load_corpus(x, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn label(s: &str) -> LanguageLabel {
        LanguageLabel::new(s).unwrap()
    }

    #[test]
    fn registry_has_235_sorted_unique_codes() {
        assert_eq!(WILI_2018.len(), 235);
        for pair in WILI_2018.windows(2) {
            assert!(pair[0].0 < pair[1].0, "{} !< {}", pair[0].0, pair[1].0);
        }
        assert!(label("be-tarask").is_wili_2018());
        assert!(label("zh-yue").is_wili_2018());
        assert!(!label("ENG").is_wili_2018());
        assert_eq!(label("bod").english_name(), Some("Tibetan"));
    }

    #[test]
    fn label_validation() {
        assert!(LanguageLabel::new("").is_err());
        assert!(LanguageLabel::new("en g").is_err());
        assert!(LanguageLabel::new("ñ").is_err());
        assert_eq!(label("be-tarask").as_str(), "be-tarask");
    }

    #[test]
    fn one_line_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let (x, y) = (dir.path().join("x.csv"), dir.path().join("y.csv"));
        let text = "Hello world, \"quoted\", with commas. ".repeat(5);
        let mut corpus = Corpus::default();
        corpus.push(text.clone(), label("eng"));
        save_corpus(&corpus, &x, &y).unwrap();
        assert_eq!(fs::read_to_string(&y).unwrap(), "eng\n");
        let loaded = load_corpus(&x, &y).unwrap();
        assert_eq!(loaded, corpus);
        assert_eq!(loaded.items[0].text, text);
    }

    #[test]
    fn empty_corpus_writes_empty_files() {
        let dir = tempfile::tempdir().unwrap();
        let (x, y) = (dir.path().join("x.csv"), dir.path().join("y.csv"));
        save_corpus(&Corpus::default(), &x, &y).unwrap();
        assert_eq!(fs::metadata(&x).unwrap().len(), 0);
        assert_eq!(fs::metadata(&y).unwrap().len(), 0);
        assert!(load_corpus(&x, &y).unwrap().is_empty());
    }

    #[test]
    fn alignment_mismatch_reports_both_counts() {
        let dir = tempfile::tempdir().unwrap();
        let (x, y) = (dir.path().join("x.csv"), dir.path().join("y.csv"));
        fs::write(&x, "one\ntwo\n").unwrap();
        fs::write(&y, "eng\n").unwrap();
        match load_corpus(&x, &y) {
            Err(Error::Alignment { x_lines, y_lines }) => {
                assert_eq!((x_lines, y_lines), (2, 1));
            }
            other => panic!("expected alignment error, got {other:?}"),
        }
    }

    #[test]
    fn invalid_utf8_reports_offset() {
        let dir = tempfile::tempdir().unwrap();
        let (x, y) = (dir.path().join("x.csv"), dir.path().join("y.csv"));
        fs::write(&x, b"abc\xffdef\n").unwrap();
        fs::write(&y, "eng\n").unwrap();
        match load_corpus(&x, &y) {
            Err(Error::Decode { offset, .. }) => assert_eq!(offset, 3),
            other => panic!("expected decode error, got {other:?}"),
        }
    }

    #[test]
    fn crlf_and_label_whitespace_tolerated() {
        let dir = tempfile::tempdir().unwrap();
        let (x, y) = (dir.path().join("x.csv"), dir.path().join("y.csv"));
        fs::write(&x, "first\r\nsecond").unwrap();
        fs::write(&y, " eng \r\nbe-tarask\n").unwrap();
        let corpus = load_corpus(&x, &y).unwrap();
        assert_eq!(corpus.items[0].text, "first");
        assert_eq!(corpus.items[1].text, "second");
        assert_eq!(corpus.items[0].label, label("eng"));
        assert_eq!(corpus.items[1].label, label("be-tarask"));
    }

    #[test]
    fn embedded_newline_is_rejected_with_index() {
        let dir = tempfile::tempdir().unwrap();
        let (x, y) = (dir.path().join("x.csv"), dir.path().join("y.csv"));
        let mut corpus = Corpus::default();
        corpus.push("fine", label("eng"));
        corpus.push("broken\nline", label("eng"));
        match save_corpus(&corpus, &x, &y) {
            Err(Error::Format { index, .. }) => assert_eq!(index, 1),
            other => panic!("expected format error, got {other:?}"),
        }
        assert!(!x.exists());
    }

    #[test]
    fn grouping_preserves_order() {
        let mut corpus = Corpus::default();
        corpus.push("b1", label("deu"));
        corpus.push("a1", label("eng"));
        corpus.push("b2", label("deu"));
        let groups = corpus.by_label();
        assert_eq!(groups[&label("deu")], vec!["b1", "b2"]);
        assert_eq!(corpus.distinct_labels(), vec![label("deu"), label("eng")]);
    }
}
