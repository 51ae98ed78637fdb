//! TextCat-style trigram fingerprints ranked by frequency and compared with
//! the out-of-place rank distance.

use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::sync::OnceLock;

use rayon::prelude::*;
use regex::Regex;

use crate::dataset_io::{Corpus, LanguageLabel};
use crate::error::{Error, Result};
use crate::freq_classifier::{header_fields, header_value};

pub const DEFAULT_FINGERPRINT_SIZE: usize = 400;
pub const PAD: char = '_';

fn punctuation() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\p{P}").expect("static pattern"))
}

/// Ranked trigram list, most frequent first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fingerprint {
    ranked: Vec<(String, u64)>,
    rank: HashMap<String, usize>,
    max_size: usize,
}

impl Fingerprint {
    /// Builds from `(trigram, count)` pairs, keeping the `max_size` most
    /// frequent with ties broken lexicographically.
    pub fn from_counts(
        counts: impl IntoIterator<Item = (String, u64)>,
        max_size: usize,
    ) -> Result<Self> {
        if max_size == 0 {
            return Err(Error::domain("fingerprint size must be at least 1"));
        }
        let mut ranked: Vec<(String, u64)> = counts.into_iter().filter(|(_, n)| *n > 0).collect();
        if ranked.is_empty() {
            return Err(Error::domain("no trigrams in text"));
        }
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        ranked.truncate(max_size);
        let rank = ranked
            .iter()
            .enumerate()
            .map(|(i, (t, _))| (t.clone(), i))
            .collect::<HashMap<_, _>>();
        if rank.len() != ranked.len() {
            return Err(Error::domain("duplicate trigram in fingerprint"));
        }
        Ok(Fingerprint {
            ranked,
            rank,
            max_size,
        })
    }

    pub fn len(&self) -> usize {
        self.ranked.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranked.is_empty()
    }

    pub fn max_size(&self) -> usize {
        self.max_size
    }

    pub fn rank_of(&self, trigram: &str) -> Option<usize> {
        self.rank.get(trigram).copied()
    }

    /// `(trigram, count)` in rank order.
    pub fn ranked(&self) -> &[(String, u64)] {
        &self.ranked
    }
}

/// Lowercases, strips Unicode punctuation and splits on whitespace.
pub fn tokenize(text: &str) -> Vec<String> {
    let lowered = text.to_lowercase();
    punctuation()
        .replace_all(&lowered, "")
        .split_whitespace()
        .map(str::to_string)
        .collect()
}

/// Adds the padded character trigrams of every token in `text` to `counts`.
pub fn count_trigrams(text: &str, counts: &mut HashMap<String, u64>) {
    let mut buf: Vec<char> = Vec::new();
    for token in tokenize(text) {
        buf.clear();
        buf.push(PAD);
        buf.extend(token.chars());
        buf.push(PAD);
        for w in buf.windows(3) {
            *counts.entry(w.iter().collect()).or_insert(0) += 1;
        }
    }
}

pub fn build_fingerprint<S: AsRef<str>>(texts: &[S], max_size: usize) -> Result<Fingerprint> {
    let mut counts = HashMap::new();
    for t in texts {
        count_trigrams(t.as_ref(), &mut counts);
    }
    Fingerprint::from_counts(counts, max_size)
}

/// Sum of rank displacements of the sample's trigrams within `lang`;
/// trigrams absent from `lang` cost `lang.max_size()`.
pub fn out_of_place(lang: &Fingerprint, sample: &Fingerprint) -> u64 {
    sample
        .ranked
        .iter()
        .enumerate()
        .map(|(sample_rank, (trigram, _))| match lang.rank_of(trigram) {
            Some(r) => r.abs_diff(sample_rank) as u64,
            None => lang.max_size as u64,
        })
        .sum()
}

/// Fingerprints for a set of languages, sorted by label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TextCatModel {
    pub max_size: usize,
    pub languages: Vec<(LanguageLabel, Fingerprint)>,
}

impl TextCatModel {
    pub fn labels(&self) -> impl Iterator<Item = &LanguageLabel> {
        self.languages.iter().map(|(l, _)| l)
    }

    /// Out-of-place distance to every language, in model order.
    pub fn scores(&self, text: &str) -> Result<Vec<u64>> {
        let sample = build_fingerprint(&[text], self.max_size)?;
        Ok(self
            .languages
            .iter()
            .map(|(_, fp)| out_of_place(fp, &sample))
            .collect())
    }
}

pub fn train_textcat(corpus: &Corpus, max_size: usize) -> Result<TextCatModel> {
    let groups: Vec<(LanguageLabel, Vec<&str>)> = corpus
        .by_label()
        .into_iter()
        .map(|(l, t)| (l.clone(), t))
        .collect();
    if groups.is_empty() {
        return Err(Error::Training("corpus has no languages".into()));
    }
    let languages = groups
        .into_par_iter()
        .map(|(label, texts)| {
            build_fingerprint(&texts, max_size)
                .map(|fp| (label.clone(), fp))
                .map_err(|e| Error::Training(format!("language {label}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TextCatModel {
        max_size,
        languages,
    })
}

/// Language with the smallest out-of-place distance; ties go to the
/// smallest label.
pub fn predict_textcat(model: &TextCatModel, text: &str) -> Result<LanguageLabel> {
    if model.languages.is_empty() {
        return Err(Error::domain("model has no languages"));
    }
    let scores = model.scores(text)?;
    let best = scores
        .iter()
        .enumerate()
        .min_by_key(|&(i, &s)| (s, &model.languages[i].0))
        .map(|(i, _)| i)
        .expect("non-empty");
    Ok(model.languages[best].0.clone())
}

pub const TEXTCAT_MAGIC: &str = "wili-textcat v1";

/// Header line, then `label<TAB>trigram,count;trigram,count;...` per
/// language in rank order. Punctuation (including `,` and `;`) never
/// survives tokenization, so the separators are unambiguous.
pub fn write_textcat_model<W: Write>(model: &TextCatModel, mut out: W) -> Result<()> {
    let io = |e| Error::io("<textcat model>", e);
    writeln!(out, "{TEXTCAT_MAGIC} size={}", model.max_size).map_err(io)?;
    for (label, fp) in &model.languages {
        let body: Vec<String> = fp
            .ranked()
            .iter()
            .map(|(t, n)| format!("{t},{n}"))
            .collect();
        writeln!(out, "{label}\t{}", body.join(";")).map_err(io)?;
    }
    out.flush().map_err(io)
}

pub fn read_textcat_model<R: BufRead>(input: R) -> Result<TextCatModel> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .transpose()
        .map_err(|e| Error::io("<textcat model>", e))?
        .ok_or_else(|| Error::model("empty model file"))?;
    let fields = header_fields(&header, TEXTCAT_MAGIC)?;
    let max_size: usize = header_value(&fields, "size")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::model("missing or bad size"))?;
    let mut languages = Vec::new();
    for line in lines {
        let line = line.map_err(|e| Error::io("<textcat model>", e))?;
        if line.is_empty() {
            continue;
        }
        let (label, body) = line
            .split_once('\t')
            .ok_or_else(|| Error::model(format!("bad language line {line:?}")))?;
        let counts = body
            .split(';')
            .map(|entry| {
                let (t, n) = entry
                    .rsplit_once(',')
                    .ok_or_else(|| Error::model(format!("bad trigram entry {entry:?}")))?;
                let n: u64 = n
                    .parse()
                    .map_err(|_| Error::model(format!("bad count in {entry:?}")))?;
                Ok((t.to_string(), n))
            })
            .collect::<Result<Vec<_>>>()?;
        languages.push((
            LanguageLabel::new(label)?,
            Fingerprint::from_counts(counts, max_size)?,
        ));
    }
    languages.sort_by(|a, b| a.0.cmp(&b.0));
    if languages.is_empty() {
        return Err(Error::model("model has no languages"));
    }
    Ok(TextCatModel {
        max_size,
        languages,
    })
}
