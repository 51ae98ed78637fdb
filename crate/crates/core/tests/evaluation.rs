use std::collections::{BTreeSet, HashSet};

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wili::dataset_io::LanguageLabel;
use wili::evaluation::{
    class_report, confusion, reduced_eval, unknown_accuracy, write_confusion_csv, write_report_csv,
    ClassReport, Prediction,
};

fn l(i: usize) -> LanguageLabel {
    LanguageLabel::new(format!("l{i:02}")).unwrap()
}

/// Expands a K×(K+1) count table (last column UNKNOWN) into raw pairs.
fn pairs_from_table(table: &[Vec<u64>]) -> (Vec<Prediction>, Vec<LanguageLabel>) {
    let k = table.len();
    let mut preds = Vec::new();
    let mut truths = Vec::new();
    for (t, row) in table.iter().enumerate() {
        for (p, &n) in row.iter().enumerate() {
            for _ in 0..n {
                truths.push(l(t));
                preds.push(if p == k {
                    Prediction::Unknown
                } else {
                    Prediction::Label(l(p))
                });
            }
        }
    }
    (preds, truths)
}

struct Brute {
    labels: Vec<LanguageLabel>,
    precision: Vec<f64>,
    recall: Vec<f64>,
    f1: Vec<f64>,
    support: Vec<u64>,
    accuracy: f64,
    macro_p: f64,
    macro_r: f64,
    macro_f1: f64,
}

fn brute(preds: &[Prediction], truths: &[LanguageLabel]) -> Brute {
    let labels: Vec<LanguageLabel> = truths
        .iter()
        .cloned()
        .chain(preds.iter().filter_map(|p| p.label().cloned()))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let div = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    let mut b = Brute {
        labels: labels.clone(),
        precision: vec![],
        recall: vec![],
        f1: vec![],
        support: vec![],
        accuracy: div(
            preds
                .iter()
                .zip(truths)
                .filter(|(p, t)| p.label() == Some(*t))
                .count(),
            truths.len(),
        ),
        macro_p: 0.0,
        macro_r: 0.0,
        macro_f1: 0.0,
    };
    for c in &labels {
        let tp = preds
            .iter()
            .zip(truths)
            .filter(|(p, t)| p.label() == Some(c) && *t == c)
            .count();
        let predicted = preds.iter().filter(|p| p.label() == Some(c)).count();
        let support = truths.iter().filter(|t| *t == c).count();
        let (p, r) = (div(tp, predicted), div(tp, support));
        b.precision.push(p);
        b.recall.push(r);
        b.f1.push(if p + r == 0.0 {
            0.0
        } else {
            2.0 * p * r / (p + r)
        });
        b.support.push(support as u64);
    }
    let with_support: Vec<usize> = (0..labels.len()).filter(|&i| b.support[i] > 0).collect();
    let mean =
        |v: &[f64]| with_support.iter().map(|&i| v[i]).sum::<f64>() / with_support.len() as f64;
    b.macro_p = mean(&b.precision);
    b.macro_r = mean(&b.recall);
    b.macro_f1 = mean(&b.f1);
    b
}

fn assert_close(report: &ClassReport, b: &Brute) {
    let tol = 1e-12;
    assert_eq!(report.classes.len(), b.labels.len());
    for (i, c) in report.classes.iter().enumerate() {
        assert_eq!(c.label, b.labels[i]);
        assert_eq!(c.support, b.support[i]);
        assert!((c.precision - b.precision[i]).abs() <= tol);
        assert!((c.recall - b.recall[i]).abs() <= tol);
        assert!((c.f1 - b.f1[i]).abs() <= tol);
    }
    assert!((report.accuracy - b.accuracy).abs() <= tol);
    assert!((report.macro_precision - b.macro_p).abs() <= tol);
    assert!((report.macro_recall - b.macro_r).abs() <= tol);
    assert!((report.macro_f1 - b.macro_f1).abs() <= tol);
}

fn table() -> impl Strategy<Value = Vec<Vec<u64>>> {
    (1usize..8)
        .prop_flat_map(|k| proptest::collection::vec(proptest::collection::vec(0u64..6, k + 1), k))
        .prop_filter("non-empty", |t| t.iter().flatten().any(|&n| n > 0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn report_matches_brute_force(t in table(), seed in any::<u64>()) {
        let (mut preds, mut truths) = pairs_from_table(&t);
        let report = class_report(&confusion(&preds, &truths).unwrap());
        assert_close(&report, &brute(&preds, &truths));

        // weighted recall is accuracy
        let weighted: f64 = report.classes.iter().map(|c| c.recall * c.support as f64).sum::<f64>()
            / report.total as f64;
        prop_assert!((weighted - report.accuracy).abs() <= 1e-12);

        // item order does not matter
        let mut idx: Vec<usize> = (0..preds.len()).collect();
        idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        preds = idx.iter().map(|&i| preds[i].clone()).collect();
        truths = idx.iter().map(|&i| truths[i].clone()).collect();
        prop_assert_eq!(class_report(&confusion(&preds, &truths).unwrap()), report);
    }

    #[test]
    fn reduced_matches_filtered_brute_force(t in table(), keep in proptest::collection::vec(any::<bool>(), 8)) {
        let (preds, truths) = pairs_from_table(&t);
        let supported: HashSet<LanguageLabel> = (0..t.len()).filter(|&i| keep[i]).map(l).collect();
        let (fp, ft): (Vec<_>, Vec<_>) = preds
            .iter()
            .cloned()
            .zip(truths.iter().cloned())
            .filter(|(_, t)| supported.contains(t))
            .unzip();
        match reduced_eval(&preds, &truths, &supported) {
            Ok(r) => assert_close(&r, &brute(&fp, &ft)),
            Err(_) => prop_assert!(ft.is_empty()),
        }
    }
}

#[test]
fn two_class_hand_example() {
    let (preds, truths) = pairs_from_table(&[vec![3, 1, 0], vec![1, 3, 0]]);
    let r = class_report(&confusion(&preds, &truths).unwrap());
    for v in [r.accuracy, r.macro_precision, r.macro_recall, r.macro_f1] {
        assert!((v - 0.75).abs() < 1e-12);
    }
    for c in &r.classes {
        assert!(
            (c.precision - 0.75).abs() < 1e-12
                && (c.recall - 0.75).abs() < 1e-12
                && (c.f1 - 0.75).abs() < 1e-12
        );
    }
}

#[test]
fn unknown_protocol() {
    let supported: HashSet<LanguageLabel> = [l(0)].into();
    let truths = vec![l(0), l(0), l(1), l(1)];
    let preds = vec![
        Prediction::Label(l(0)),
        Prediction::Unknown,
        Prediction::Unknown,
        Prediction::Label(l(0)),
    ];
    assert!((unknown_accuracy(&preds, &truths, &supported).unwrap() - 0.5).abs() < 1e-12);
    let cm = confusion(&preds, &truths).unwrap();
    assert_eq!(cm.row(1), &[1, 0, 1]);
}

#[test]
fn csv_outputs() {
    let (preds, truths) = pairs_from_table(&[vec![3, 1, 0], vec![1, 3, 0]]);
    let cm = confusion(&preds, &truths).unwrap();
    let mut report = Vec::new();
    write_report_csv(&class_report(&cm), &mut report).unwrap();
    let report = String::from_utf8(report).unwrap();
    assert_eq!(
        report,
        "label,precision,recall,f1,support\n\
         l00,0.750000,0.750000,0.750000,4\n\
         l01,0.750000,0.750000,0.750000,4\n\
         accuracy,0.750000,0.750000,0.750000,8\n\
         macro,0.750000,0.750000,0.750000,8\n"
    );
    let mut m = Vec::new();
    write_confusion_csv(&cm, &mut m).unwrap();
    assert_eq!(
        String::from_utf8(m).unwrap(),
        "truth\\pred,l00,l01,UNKNOWN\nl00,3,1,0\nl01,1,3,0\n"
    );
}
