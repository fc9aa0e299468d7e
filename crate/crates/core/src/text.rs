//! Word-level normalization and edit distance.
//!
//! Sentences are compared as sequences of lowercased words with edge
//! punctuation removed, so capitalization of a moved sentence-initial word
//! or a trailing period never counts as an edit.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A normalized word sequence together with the raw text it came from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TokenSequence {
    tokens: Vec<String>,
    source_text: String,
}

impl TokenSequence {
    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn source_text(&self) -> &str {
        &self.source_text
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(String::as_str)
    }

    /// Tokens joined by single spaces.
    pub fn joined(&self) -> String {
        self.tokens.join(" ")
    }
}

impl fmt::Display for TokenSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.joined())
    }
}

/// Lowercases, splits on whitespace and trims non-alphanumeric characters
/// from both ends of every word. Word-internal apostrophes and hyphens
/// survive, so `haven't` and `10-minute` stay single tokens.
pub fn tokenize(text: &str) -> TokenSequence {
    let tokens = text.split_whitespace().filter_map(normalize_word).collect();
    TokenSequence {
        tokens,
        source_text: text.to_owned(),
    }
}

/// Normalizes a single word, returning `None` when nothing is left.
pub fn normalize_word(word: &str) -> Option<String> {
    let lower = word.to_lowercase();
    let trimmed = lower.trim_matches(|c: char| !c.is_alphanumeric());
    if trimmed.is_empty() {
        None
    } else {
        Some(trimmed.to_owned())
    }
}

/// Number of word-level edits separating two sentences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EditDistance(pub usize);

impl EditDistance {
    pub fn value(self) -> usize {
        self.0
    }
}

impl fmt::Display for EditDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Which edit operations are allowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EditMetric {
    /// Insertions, deletions, substitutions and adjacent transpositions,
    /// with no substring edited more than once (restricted Damerau).
    #[default]
    OptimalStringAlignment,
    /// Insertions, deletions and substitutions only.
    Levenshtein,
}

impl EditMetric {
    pub fn distance(self, a: &TokenSequence, b: &TokenSequence) -> EditDistance {
        EditDistance(edit_distance(
            a.tokens(),
            b.tokens(),
            self == EditMetric::OptimalStringAlignment,
        ))
    }
}

/// Word-level Damerau-Levenshtein (optimal string alignment) distance.
pub fn dld(a: &TokenSequence, b: &TokenSequence) -> EditDistance {
    EditMetric::OptimalStringAlignment.distance(a, b)
}

/// Unit-cost edit distance over arbitrary sequences.
///
/// Keeps three rolling rows, which is all the transposition recurrence
/// looks back at.
pub fn edit_distance<T: PartialEq>(a: &[T], b: &[T], transpositions: bool) -> usize {
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }

    let width = b.len() + 1;
    let mut before_prev: Vec<usize> = vec![0; width];
    let mut prev: Vec<usize> = (0..width).collect();
    let mut cur: Vec<usize> = vec![0; width];

    for i in 1..=a.len() {
        cur[0] = i;
        for j in 1..=b.len() {
            let cost = usize::from(a[i - 1] != b[j - 1]);
            let mut best = (prev[j] + 1).min(cur[j - 1] + 1).min(prev[j - 1] + cost);
            if transpositions && i > 1 && j > 1 && a[i - 1] == b[j - 2] && a[i - 2] == b[j - 1] {
                best = best.min(before_prev[j - 2] + 1);
            }
            cur[j] = best;
        }
        std::mem::swap(&mut before_prev, &mut prev);
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn words(s: &str) -> Vec<String> {
        s.split_whitespace().map(str::to_owned).collect()
    }

    #[test]
    fn tokenize_strips_case_and_punctuation() {
        let t = tokenize("More students have been to Russia than I have.");
        assert_eq!(t.tokens(), words("more students have been to russia than i have"));
        assert_eq!(t.source_text(), "More students have been to Russia than I have.");
    }

    #[test]
    fn tokenize_empty_and_whitespace() {
        assert!(tokenize("").is_empty());
        assert!(tokenize("  \t\n ").is_empty());
        assert!(tokenize(" , . ").is_empty());
    }

    #[test]
    fn tokenize_keeps_internal_apostrophes_and_hyphens() {
        assert_eq!(tokenize("I haven't.").tokens(), words("i haven't"));
        assert_eq!(
            tokenize("the 10-minute workout, \"finally\"").tokens(),
            words("the 10-minute workout finally")
        );
        assert_eq!(tokenize("more teenagers than we have, have").len(), 6);
    }

    #[test]
    fn identity_and_transposition() {
        let abc = tokenize("a b c");
        assert_eq!(dld(&abc, &abc), EditDistance(0));
        assert_eq!(dld(&tokenize("a b"), &tokenize("b a")), EditDistance(1));
        assert_eq!(
            EditMetric::Levenshtein.distance(&tokenize("a b"), &tokenize("b a")),
            EditDistance(2)
        );
    }

    #[test]
    fn shifted_more_costs_two() {
        let a = tokenize("More people have been to Russia than I have");
        let b = tokenize("People have been to Russia more than I have");
        assert_eq!(dld(&a, &b), EditDistance(2));
    }

    #[test]
    fn osa_does_not_edit_transposed_pair_again() {
        // Unrestricted Damerau gives 2 here; the restricted variant cannot
        // insert between a swapped pair.
        let a = words("ca");
        let b = words("abc");
        let a: Vec<char> = a[0].chars().collect();
        let b: Vec<char> = b[0].chars().collect();
        assert_eq!(edit_distance(&a, &b, true), 3);
    }

    #[test]
    fn empty_sequences() {
        let e = tokenize("");
        assert_eq!(dld(&e, &e), EditDistance(0));
        assert_eq!(dld(&e, &tokenize("a b c")), EditDistance(3));
    }

    proptest! {
        #[test]
        fn round_trip_stable(text in "[A-Za-z',.!?;: -]{0,40}") {
            let t = tokenize(&text);
            let again = tokenize(&t.joined());
            prop_assert_eq!(again.tokens(), t.tokens());
            for tok in t.tokens() {
                prop_assert!(!tok.is_empty());
                prop_assert_eq!(tok.to_lowercase(), tok.clone());
                prop_assert!(tok.chars().next().unwrap().is_alphanumeric());
                prop_assert!(tok.chars().last().unwrap().is_alphanumeric());
            }
        }

        #[test]
        fn symmetric_and_bounded(
            a in proptest::collection::vec(0u8..5, 0..9),
            b in proptest::collection::vec(0u8..5, 0..9),
        ) {
            for t in [true, false] {
                let d = edit_distance(&a, &b, t);
                prop_assert_eq!(d, edit_distance(&b, &a, t));
                prop_assert!(d <= a.len().max(b.len()));
                prop_assert_eq!(d == 0, a == b);
            }
        }

        #[test]
        fn appending_changes_by_at_most_one(
            a in proptest::collection::vec(0u8..5, 0..9),
            b in proptest::collection::vec(0u8..5, 0..9),
            extra in 0u8..5,
        ) {
            let mut longer = b.clone();
            longer.push(extra);
            for t in [true, false] {
                let before = edit_distance(&a, &b, t) as i64;
                let after = edit_distance(&a, &longer, t) as i64;
                prop_assert!((before - after).abs() <= 1);
            }
        }

        #[test]
        fn levenshtein_triangle(
            a in proptest::collection::vec(0u8..5, 0..9),
            b in proptest::collection::vec(0u8..5, 0..9),
            c in proptest::collection::vec(0u8..5, 0..9),
        ) {
            let ac = edit_distance(&a, &c, false);
            let ab = edit_distance(&a, &b, false);
            let bc = edit_distance(&b, &c, false);
            prop_assert!(ac <= ab + bc);
        }
    }
}
