//! Exact match and token-multiset F1.

use std::collections::HashMap;

use crate::normalize::normalize_answer;

/// 1 when the normalized prediction equals any normalized gold answer.
pub fn exact_match(pred: &str, golds: &[String]) -> u8 {
    let p = normalize_answer(pred);
    u8::from(golds.iter().any(|g| normalize_answer(g) == p))
}

/// Maximum token-multiset F1 of the prediction against each gold answer.
pub fn f1(pred: &str, golds: &[String]) -> f64 {
    golds.iter().map(|g| token_f1(pred, g)).fold(0.0, f64::max)
}

/// Token-multiset F1 between one prediction and one gold answer:
/// duplicate tokens count as often as they appear on both sides. Two
/// empty token lists score 1, exactly one empty scores 0.
pub fn token_f1(pred: &str, gold: &str) -> f64 {
    let pred = normalize_answer(pred);
    let gold = normalize_answer(gold);
    let pred_tokens: Vec<&str> = pred.split_whitespace().collect();
    let gold_tokens: Vec<&str> = gold.split_whitespace().collect();
    match (pred_tokens.is_empty(), gold_tokens.is_empty()) {
        (true, true) => return 1.0,
        (true, false) | (false, true) => return 0.0,
        (false, false) => {}
    }
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for token in &gold_tokens {
        *counts.entry(token).or_insert(0) += 1;
    }
    let mut overlap = 0usize;
    for token in &pred_tokens {
        if let Some(left) = counts.get_mut(token) {
            if *left > 0 {
                *left -= 1;
                overlap += 1;
            }
        }
    }
    if overlap == 0 {
        return 0.0;
    }
    let precision = overlap as f64 / pred_tokens.len() as f64;
    let recall = overlap as f64 / gold_tokens.len() as f64;
    2.0 * precision * recall / (precision + recall)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golds(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn match_is_case_and_article_insensitive() {
        assert_eq!(exact_match("paris", &golds(&["Paris"])), 1);
        assert_eq!(f1("paris", &golds(&["Paris"])), 1.0);
        assert_eq!(exact_match("london", &golds(&["paris"])), 0);
        assert_eq!(f1("london", &golds(&["paris"])), 0.0);
        assert_eq!(exact_match("The Eiffel Tower", &golds(&["eiffel tower"])), 1);
    }

    #[test]
    fn partial_overlap_gives_fractional_f1() {
        let score = f1("february 1840", &golds(&["6 february 1840"]));
        assert!((score - 0.8).abs() < 1e-12, "{score}");
    }

    #[test]
    fn best_gold_wins() {
        let gs = golds(&["wrong thing", "february 1840"]);
        assert_eq!(f1("february 1840", &gs), 1.0);
        assert_eq!(exact_match("february 1840", &gs), 1);
    }

    #[test]
    fn duplicates_count_as_multiset() {
        let score = token_f1("x x y", "x y y");
        // overlap 2 of 3 and 3: precision = recall = 2/3.
        assert!((score - 2.0 / 3.0).abs() < 1e-12, "{score}");
    }

    #[test]
    fn empty_sides_follow_the_convention() {
        assert_eq!(token_f1("", ""), 1.0);
        assert_eq!(token_f1("the", "a"), 1.0);
        assert_eq!(token_f1("x", ""), 0.0);
        assert_eq!(token_f1("", "x"), 0.0);
    }
}
