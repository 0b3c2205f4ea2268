//! Metric invariants over random inputs.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use codeplan_core::StageScore;
use codeplan_metrics::{
    exact_match, f1, nll_decompose, normalize_answer, relative_gain, token_f1, RelativeGain,
};

fn token() -> impl Strategy<Value = String> {
    "[a-z0-9]{1,6}"
}

fn answer() -> impl Strategy<Value = String> {
    proptest::collection::vec(token(), 0..8).prop_map(|ts| ts.join(" "))
}

proptest! {
    #[test]
    fn exact_match_implies_full_f1(pred in answer(), gold in answer()) {
        let golds = vec![gold];
        if exact_match(&pred, &golds) == 1 {
            prop_assert_eq!(f1(&pred, &golds), 1.0);
        }
    }

    #[test]
    fn f1_is_symmetric(a in answer(), b in answer()) {
        let ab = token_f1(&a, &b);
        let ba = token_f1(&b, &a);
        prop_assert!((ab - ba).abs() < 1e-12, "{} vs {}", ab, ba);
    }

    #[test]
    fn f1_stays_in_unit_interval(pred in answer(), golds in proptest::collection::vec(answer(), 1..4)) {
        let score = f1(&pred, &golds);
        prop_assert!((0.0..=1.0).contains(&score));
        let em = f64::from(exact_match(&pred, &golds));
        prop_assert!(em <= score + 1e-12, "em {} > f1 {}", em, score);
    }

    #[test]
    fn normalization_is_idempotent(text in ".{0,80}") {
        let once = normalize_answer(&text);
        prop_assert_eq!(normalize_answer(&once), once);
    }

    #[test]
    fn decomposition_is_additive(
        means1 in proptest::collection::vec(0.0f64..5.0, 1..20),
        means2 in proptest::collection::vec(0.0f64..5.0, 1..20),
    ) {
        // Alignment requires equal id sets, so pair the lists up.
        let n = means1.len().min(means2.len());
        let stage1: Vec<(String, StageScore)> = means1[..n]
            .iter()
            .enumerate()
            .map(|(i, &m)| (format!("id-{i}"), StageScore::new(m * 7.0, 7)))
            .collect();
        let stage2: Vec<(String, StageScore)> = means2[..n]
            .iter()
            .enumerate()
            .map(|(i, &m)| (format!("id-{i}"), StageScore::new(m * 3.0, 3)))
            .collect();
        let report = nll_decompose(&stage1, &stage2).unwrap();
        prop_assert!((report.overall - report.stage1 - report.stage2).abs() <= 1e-9);
        prop_assert!(report.stage1 >= 0.0 && report.stage2 >= 0.0);
    }

    #[test]
    fn gains_are_finite_for_positive_baselines(base in 0.001f64..100.0, treat in 0.0f64..100.0) {
        match relative_gain(base, treat) {
            RelativeGain::Percent(p) => prop_assert!(p.is_finite()),
            RelativeGain::NotApplicable => prop_assert!(false, "positive baseline reported N/A"),
        }
    }
}

#[test]
fn f1_symmetry_over_many_random_token_lists() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xf1f1);
    let vocab = ["alpha", "beta", "gamma", "delta", "42", "x"];
    for _ in 0..10_000 {
        let draw = |rng: &mut ChaCha8Rng| {
            let len = rng.random_range(0..6);
            (0..len).map(|_| vocab[rng.random_range(0..vocab.len())]).collect::<Vec<_>>().join(" ")
        };
        let a = draw(&mut rng);
        let b = draw(&mut rng);
        assert!((token_f1(&a, &b) - token_f1(&b, &a)).abs() < 1e-12, "{a:?} vs {b:?}");
    }
}
