use std::collections::{BTreeMap, HashMap};

use proptest::prelude::*;
use wili::char_stats::{corpus_stats, count_characters, mean_over_languages};
use wili::dataset_io::{Corpus, LanguageLabel};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parallel_counts_match_sequential(texts in proptest::collection::vec(any::<String>(), 0..300)) {
        let counts = count_characters(&texts);
        let mut want: HashMap<char, u64> = HashMap::new();
        for t in &texts {
            for c in t.chars() {
                *want.entry(c).or_default() += 1;
            }
        }
        prop_assert_eq!(counts.total(), want.values().sum::<u64>());
        for (c, n) in &want {
            prop_assert_eq!(counts.get(*c), *n);
        }
        prop_assert_eq!(counts.distinct(), want.len());
    }

    #[test]
    fn stats_match_oracle(items in proptest::collection::vec(("[a-z ]{1,50}", 0usize..3), 1..30)) {
        let mut c = Corpus::default();
        let mut lens: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for (t, l) in &items {
            let code = ["aaa", "bbb", "ccc"][*l];
            c.push(t.clone(), LanguageLabel::new(code).unwrap());
            lens.entry(code).or_default().push(t.chars().count());
        }
        let stats = corpus_stats(&c, 1.0).unwrap();
        prop_assert_eq!(stats.len(), lens.len());
        let mut means = Vec::new();
        for ((label, s), (code, l)) in stats.iter().zip(&lens) {
            prop_assert_eq!(label.as_str(), *code);
            let m = l.iter().sum::<usize>() as f64 / l.len() as f64;
            prop_assert!((s.mean_paragraph_len - m).abs() < 1e-12);
            prop_assert_eq!(s.paragraphs, l.len());
            means.push(m);
        }
        let overall = means.iter().sum::<f64>() / means.len() as f64;
        prop_assert!((mean_over_languages(&stats) - overall).abs() < 1e-12);
    }
}
