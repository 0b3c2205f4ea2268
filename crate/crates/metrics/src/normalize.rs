//! Answer normalization shared by every string-equality metric.

/// Canonicalizes an answer: lowercase, drop ASCII punctuation, drop the
/// standalone articles "a"/"an"/"the", and collapse whitespace runs to
/// single spaces (which also trims the ends).
pub fn normalize_answer(text: &str) -> String {
    let lower = text.to_lowercase();
    let no_punct: String = lower.chars().filter(|c| !c.is_ascii_punctuation()).collect();
    no_punct
        .split_whitespace()
        .filter(|w| !matches!(*w, "a" | "an" | "the"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Collapses whitespace runs to single spaces without touching any other
/// character. Bracket-sequence answers are compared this way because
/// punctuation removal would erase them entirely.
pub fn collapse_ws(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn applies_all_five_rules() {
        assert_eq!(normalize_answer("The Answer!"), "answer");
        assert_eq!(normalize_answer("6 February 1840"), "6 february 1840");
        assert_eq!(normalize_answer("  A  cat. "), "cat");
        assert_eq!(normalize_answer("an apple a day"), "apple day");
        assert_eq!(normalize_answer("THE THE the"), "");
    }

    #[test]
    fn articles_are_removed_only_as_whole_words() {
        assert_eq!(normalize_answer("another theater"), "another theater");
    }

    #[test]
    fn is_idempotent() {
        for text in ["The Answer!", "  A  cat. ", "x  y\tz", ""] {
            let once = normalize_answer(text);
            assert_eq!(normalize_answer(&once), once);
        }
    }

    #[test]
    fn collapse_preserves_brackets() {
        assert_eq!(collapse_ws("  ]   )  }"), "] ) }");
        assert_eq!(normalize_answer("] ) }"), "");
    }
}
