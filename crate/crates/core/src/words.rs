//! Finite words over the alphabet `{1, ..., k}` and the prefix order.
//!
//! A word `i1 i2 ... in` indexes the piece `f_{i1} ∘ ... ∘ f_{in}(K)`; the
//! empty word stands for `K` itself. Appending a symbol `j` to `u` gives the
//! child piece `f_u(f_j(K))`.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite word. Symbols are stored 1-based, as they are written.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u16>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Builds a word from 1-based symbols. Panics on a zero symbol.
    pub fn from_symbols(symbols: impl IntoIterator<Item = u16>) -> Self {
        let symbols: Vec<u16> = symbols.into_iter().collect();
        assert!(symbols.iter().all(|&s| s >= 1), "word symbols are 1-based");
        Word(symbols)
    }

    /// Parses `"121"`, `"1.12.3"` or `"ε"`/`""`.
    pub fn parse(text: &str) -> Option<Self> {
        let text = text.trim();
        if text.is_empty() || text == "ε" {
            return Some(Word::empty());
        }
        let symbols: Option<Vec<u16>> = if text.contains('.') {
            text.split('.').map(|s| s.parse().ok().filter(|&v| v >= 1)).collect()
        } else {
            text.chars().map(|c| c.to_digit(10).filter(|&v| v >= 1).map(|v| v as u16)).collect()
        };
        symbols.map(Word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[u16] {
        &self.0
    }

    /// Zero-based map indices of the symbols.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&s| usize::from(s) - 1)
    }

    pub fn child(&self, symbol: u16) -> Word {
        let mut symbols = Vec::with_capacity(self.0.len() + 1);
        symbols.extend_from_slice(&self.0);
        symbols.push(symbol);
        Word(symbols)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut symbols = self.0.clone();
        symbols.extend_from_slice(&other.0);
        Word(symbols)
    }

    /// The suffix left after removing `prefix`, if `prefix ⊑ self`.
    pub fn strip_prefix(&self, prefix: &Word) -> Option<Word> {
        self.0.strip_prefix(prefix.0.as_slice()).map(|s| Word(s.to_vec()))
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n.min(self.0.len())].to_vec())
    }

    pub fn max_symbol(&self) -> u16 {
        self.0.iter().copied().max().unwrap_or(0)
    }
}

/// `u ⊑ v`: `u` is a prefix of `v`. Reflexive.
pub fn is_prefix(u: &Word, v: &Word) -> bool {
    v.0.starts_with(&u.0)
}

/// Neither word is a prefix of the other.
pub fn incomparable(u: &Word, v: &Word) -> bool {
    !is_prefix(u, v) && !is_prefix(v, u)
}

/// Number of words of length `n` over `k` symbols, or `None` on overflow.
pub fn level_size(k: usize, n: usize) -> Option<u128> {
    (k as u128).checked_pow(u32::try_from(n).ok()?)
}

pub(crate) fn check_budget(k: usize, n: usize, budget: usize) -> Result<usize> {
    match level_size(k, n) {
        Some(size) if size <= budget as u128 => Ok(size as usize),
        Some(size) => Err(Error::BudgetExceeded { requested: size, budget }),
        None => Err(Error::BudgetExceeded { requested: u128::MAX, budget }),
    }
}

/// All `k^n` words of length `n` in lexicographic order.
pub fn enumerate_level(k: usize, n: usize, budget: usize) -> Result<Vec<Word>> {
    if k < 2 || k > usize::from(u16::MAX) {
        return Err(Error::InvalidSystem(format!("alphabet size {k} must be in 2..=65535")));
    }
    let size = check_budget(k, n, budget)?;
    let mut words = Vec::with_capacity(size);
    let mut current = vec![1u16; n];
    for _ in 0..size {
        words.push(Word(current.clone()));
        // odometer increment, last symbol fastest
        for pos in (0..n).rev() {
            if usize::from(current[pos]) < k {
                current[pos] += 1;
                break;
            }
            current[pos] = 1;
        }
    }
    Ok(words)
}

/// The `k` one-symbol extensions of `u`, in symbol order.
pub fn children(u: &Word, k: usize, budget: usize) -> Result<Vec<Word>> {
    if k < 2 || k > usize::from(u16::MAX) {
        return Err(Error::InvalidSystem(format!("alphabet size {k} must be in 2..=65535")));
    }
    if k > budget {
        return Err(Error::BudgetExceeded { requested: k as u128, budget });
    }
    Ok((1..=k as u16).map(|j| u.child(j)).collect())
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        if self.0.iter().all(|&s| s < 10) {
            for s in &self.0 {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(u16::to_string).collect();
            f.write_str(&parts.join("."))
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Word::parse(&text).ok_or_else(|| serde::de::Error::custom(format!("invalid word {text:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn prefix_examples() {
        assert!(is_prefix(&Word::empty(), &w("121")));
        assert!(is_prefix(&w("12"), &w("121")));
        assert!(!is_prefix(&w("2"), &w("121")));
    }

    #[test]
    fn incomparable_examples() {
        assert!(incomparable(&w("1"), &w("2")));
        assert!(!incomparable(&w("1"), &w("12")));
    }

    #[test]
    fn level_enumeration() {
        assert_eq!(enumerate_level(2, 0, 10).unwrap(), vec![Word::empty()]);
        assert_eq!(enumerate_level(2, 2, 10).unwrap(), vec![w("11"), w("12"), w("21"), w("22")]);
        let l = enumerate_level(3, 2, 100).unwrap();
        assert_eq!(l.len(), 9);
        assert_eq!(l[0], w("11"));
        assert_eq!(l[8], w("33"));
    }

    #[test]
    fn level_budget_guard() {
        assert!(matches!(
            enumerate_level(2, 20, 1000),
            Err(Error::BudgetExceeded { requested: 1_048_576, budget: 1000 })
        ));
        assert!(enumerate_level(10, 200, usize::MAX).is_err());
    }

    #[test]
    fn children_examples() {
        assert_eq!(children(&Word::empty(), 3, 10).unwrap(), vec![w("1"), w("2"), w("3")]);
        assert_eq!(children(&w("12"), 2, 10).unwrap(), vec![w("121"), w("122")]);
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(Word::empty().to_string(), "ε");
        assert_eq!(w("312").to_string(), "312");
        let big = Word::from_symbols([12, 3]);
        assert_eq!(big.to_string(), "12.3");
        assert_eq!(Word::parse("12.3"), Some(big));
        assert_eq!(Word::parse("10"), None);
    }

    fn word_strategy() -> impl Strategy<Value = Word> {
        proptest::collection::vec(1u16..=3, 0..6).prop_map(Word::from_symbols)
    }

    proptest! {
        #[test]
        fn level_is_concatenation_of_children(k in 2usize..4, n in 0usize..4) {
            let next = enumerate_level(k, n + 1, 10_000).unwrap();
            let via_children: Vec<Word> = enumerate_level(k, n, 10_000)
                .unwrap()
                .iter()
                .flat_map(|u| children(u, k, 10).unwrap())
                .collect();
            prop_assert_eq!(next, via_children);
        }

        #[test]
        fn prefix_is_a_partial_order(a in word_strategy(), b in word_strategy(), c in word_strategy()) {
            prop_assert!(is_prefix(&a, &a));
            if is_prefix(&a, &b) && is_prefix(&b, &a) {
                prop_assert_eq!(&a, &b);
            }
            if is_prefix(&a, &b) && is_prefix(&b, &c) {
                prop_assert!(is_prefix(&a, &c));
            }
            prop_assert_eq!(incomparable(&a, &b), incomparable(&b, &a));
        }

        #[test]
        fn distinct_equal_length_words_are_incomparable(
            a in proptest::collection::vec(1u16..=3, 4),
            b in proptest::collection::vec(1u16..=3, 4),
        ) {
            let (a, b) = (Word::from_symbols(a), Word::from_symbols(b));
            prop_assert_eq!(incomparable(&a, &b), a != b);
        }

        #[test]
        fn children_extend_parent(u in word_strategy()) {
            for c in children(&u, 3, 10).unwrap() {
                prop_assert!(is_prefix(&u, &c));
                prop_assert_eq!(c.len(), u.len() + 1);
            }
        }
    }
}
