//! Confusion matrices and per-class scores.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::dataset_io::LanguageLabel;
use crate::error::{Error, Result};

/// A classifier answer: a language, or an explicit "don't know".
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Prediction {
    Label(LanguageLabel),
    Unknown,
}

impl Prediction {
    pub fn label(&self) -> Option<&LanguageLabel> {
        match self {
            Prediction::Label(l) => Some(l),
            Prediction::Unknown => None,
        }
    }
}

impl From<LanguageLabel> for Prediction {
    fn from(l: LanguageLabel) -> Self {
        Prediction::Label(l)
    }
}

impl fmt::Display for Prediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prediction::Label(l) => write!(f, "{l}"),
            Prediction::Unknown => f.write_str("UNKNOWN"),
        }
    }
}

/// Rows are true labels, columns predicted labels plus a final UNKNOWN
/// column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfusionMatrix {
    pub labels: Vec<LanguageLabel>,
    counts: Vec<u64>,
}

impl ConfusionMatrix {
    pub fn zeros(mut labels: Vec<LanguageLabel>) -> Self {
        labels.sort();
        labels.dedup();
        let k = labels.len();
        ConfusionMatrix {
            labels,
            counts: vec![0; k * (k + 1)],
        }
    }

    pub fn num_classes(&self) -> usize {
        self.labels.len()
    }

    pub fn unknown_column(&self) -> usize {
        self.labels.len()
    }

    fn index(&self, label: &LanguageLabel) -> Option<usize> {
        self.labels.binary_search(label).ok()
    }

    /// Count for truth row `t` and prediction column `p`.
    pub fn get(&self, t: usize, p: usize) -> u64 {
        self.counts[t * (self.labels.len() + 1) + p]
    }

    pub fn row(&self, t: usize) -> &[u64] {
        let w = self.labels.len() + 1;
        &self.counts[t * w..(t + 1) * w]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.labels.len()).map(|i| self.get(i, i)).sum()
    }

    pub fn record(&mut self, pred: &Prediction, truth: &LanguageLabel) -> Result<()> {
        let t = self
            .index(truth)
            .ok_or_else(|| Error::domain(format!("truth {truth} not in matrix labels")))?;
        let p = match pred {
            Prediction::Label(l) => self
                .index(l)
                .ok_or_else(|| Error::domain(format!("prediction {l} not in matrix labels")))?,
            Prediction::Unknown => self.unknown_column(),
        };
        let w = self.labels.len() + 1;
        self.counts[t * w + p] += 1;
        Ok(())
    }

    /// Element-wise sum of two matrices over the same labels.
    pub fn merge(&mut self, other: &ConfusionMatrix) -> Result<()> {
        if self.labels != other.labels {
            return Err(Error::domain("cannot merge matrices with different labels"));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        Ok(())
    }
}

/// Tallies `(prediction, truth)` pairs. The label set is the sorted union of
/// every truth and every non-UNKNOWN prediction.
pub fn confusion(preds: &[Prediction], truths: &[LanguageLabel]) -> Result<ConfusionMatrix> {
    if preds.len() != truths.len() {
        return Err(Error::domain(format!(
            "{} predictions vs {} truths",
            preds.len(),
            truths.len()
        )));
    }
    let labels: BTreeSet<LanguageLabel> = truths
        .iter()
        .cloned()
        .chain(preds.iter().filter_map(|p| p.label().cloned()))
        .collect();
    let mut cm = ConfusionMatrix::zeros(labels.into_iter().collect());
    for (p, t) in preds.iter().zip(truths) {
        cm.record(p, t)?;
    }
    Ok(cm)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassScores {
    pub label: LanguageLabel,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// Number of items whose truth is this class.
    pub support: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassReport {
    pub classes: Vec<ClassScores>,
    pub accuracy: f64,
    pub total: u64,
    /// Unweighted means over classes with non-zero support.
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn f1_score(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

/// Precision, recall and F1 per class; zero denominators give 0.
pub fn class_report(cm: &ConfusionMatrix) -> ClassReport {
    let k = cm.num_classes();
    let classes: Vec<ClassScores> = (0..k)
        .map(|c| {
            let tp = cm.get(c, c);
            let predicted: u64 = (0..k).map(|t| cm.get(t, c)).sum();
            let support: u64 = cm.row(c).iter().sum();
            let precision = ratio(tp, predicted);
            let recall = ratio(tp, support);
            ClassScores {
                label: cm.labels[c].clone(),
                precision,
                recall,
                f1: f1_score(precision, recall),
                support,
            }
        })
        .collect();
    let supported: Vec<&ClassScores> = classes.iter().filter(|c| c.support > 0).collect();
    let mean = |f: fn(&ClassScores) -> f64| {
        if supported.is_empty() {
            0.0
        } else {
            supported.iter().map(|c| f(c)).sum::<f64>() / supported.len() as f64
        }
    };
    ClassReport {
        accuracy: ratio(cm.trace(), cm.total()),
        total: cm.total(),
        macro_precision: mean(|c| c.precision),
        macro_recall: mean(|c| c.recall),
        macro_f1: mean(|c| c.f1),
        classes,
    }
}

/// Scores only the items whose truth is in `supported`.
pub fn reduced_eval(
    preds: &[Prediction],
    truths: &[LanguageLabel],
    supported: &HashSet<LanguageLabel>,
) -> Result<ClassReport> {
    if supported.is_empty() {
        return Err(Error::domain("supported label set is empty"));
    }
    if preds.len() != truths.len() {
        return Err(Error::domain("predictions and truths differ in length"));
    }
    let (p, t): (Vec<Prediction>, Vec<LanguageLabel>) = preds
        .iter()
        .zip(truths)
        .filter(|(_, t)| supported.contains(*t))
        .map(|(p, t)| (p.clone(), t.clone()))
        .unzip();
    if t.is_empty() {
        return Err(Error::domain("no test items with a supported language"));
    }
    Ok(class_report(&confusion(&p, &t)?))
}

/// Fraction of items answered correctly when UNKNOWN is the right answer
/// for unsupported languages.
pub fn unknown_accuracy(
    preds: &[Prediction],
    truths: &[LanguageLabel],
    supported: &HashSet<LanguageLabel>,
) -> Result<f64> {
    if preds.len() != truths.len() {
        return Err(Error::domain("predictions and truths differ in length"));
    }
    let correct = preds
        .iter()
        .zip(truths)
        .filter(|(p, t)| {
            if supported.contains(*t) {
                p.label() == Some(*t)
            } else {
                **p == Prediction::Unknown
            }
        })
        .count();
    Ok(ratio(correct as u64, truths.len() as u64))
}

/// Writes per-class rows (label, precision, recall, f1, support) followed by
/// `accuracy` and `macro` footer rows.
pub fn write_report_csv<W: std::io::Write>(report: &ClassReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let err = |e: csv::Error| Error::model(format!("writing report: {e}"));
    w.write_record(["label", "precision", "recall", "f1", "support"])
        .map_err(err)?;
    for c in &report.classes {
        w.write_record([
            c.label.to_string(),
            format!("{:.6}", c.precision),
            format!("{:.6}", c.recall),
            format!("{:.6}", c.f1),
            c.support.to_string(),
        ])
        .map_err(err)?;
    }
    let total = report.total.to_string();
    let acc = format!("{:.6}", report.accuracy);
    w.write_record([
        "accuracy",
        acc.as_str(),
        acc.as_str(),
        acc.as_str(),
        total.as_str(),
    ])
    .map_err(err)?;
    w.write_record([
        "macro".to_string(),
        format!("{:.6}", report.macro_precision),
        format!("{:.6}", report.macro_recall),
        format!("{:.6}", report.macro_f1),
        total,
    ])
    .map_err(err)?;
    w.flush().map_err(|e| Error::io("<report>", e))
}

/// Header row of predicted labels plus UNKNOWN, then one row per truth.
pub fn write_confusion_csv<W: std::io::Write>(cm: &ConfusionMatrix, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let err = |e: csv::Error| Error::model(format!("writing confusion matrix: {e}"));
    let mut header = vec!["truth\\pred".to_string()];
    header.extend(cm.labels.iter().map(|l| l.to_string()));
    header.push("UNKNOWN".into());
    w.write_record(&header).map_err(err)?;
    for (t, label) in cm.labels.iter().enumerate() {
        let mut row = vec![label.to_string()];
        row.extend(cm.row(t).iter().map(u64::to_string));
        w.write_record(&row).map_err(err)?;
    }
    w.flush().map_err(|e| Error::io("<confusion matrix>", e))
}
