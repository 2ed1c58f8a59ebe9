//! Tokenization, stop-word removal, stemming and frequency pruning.
//!
//! Everything here is a pure function over its inputs.

mod porter2;

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use crate::error::{Error, Result};

pub use porter2::stem;

/// A normalized token and its 0-based position in the token stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub position: usize,
}

/// Splits `text` on whitespace and trims punctuation from each piece.
///
/// Leading punctuation is always dropped. Trailing punctuation is dropped
/// except for `#` and `+`, so `c#` and `c++` survive. Interior characters are
/// kept as they are, which preserves `node.js` and `objective-c`.
pub fn tokenize(text: &str) -> Vec<Token> {
    let mut out = Vec::new();
    for piece in text.split_whitespace() {
        let start = piece.trim_start_matches(|c: char| !c.is_alphanumeric());
        let trimmed = trim_trailing(start);
        if trimmed.is_empty() {
            continue;
        }
        out.push(Token {
            surface: trimmed.to_lowercase(),
            position: out.len(),
        });
    }
    out
}

fn trim_trailing(s: &str) -> &str {
    // Strip everything non-alphanumeric at the end, then give back a run of
    // `#`/`+` that directly followed the last alphanumeric character.
    let core = s.trim_end_matches(|c: char| !c.is_alphanumeric());
    let rest = &s[core.len()..];
    let keep = rest
        .char_indices()
        .take_while(|&(_, c)| c == '#' || c == '+')
        .last()
        .map(|(i, c)| i + c.len_utf8())
        .unwrap_or(0);
    &s[..core.len() + keep]
}

/// A set of lowercase stop words.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StopList {
    words: BTreeSet<String>,
}

const DEFAULT_STOPWORDS: &str = include_str!("../../data/stopwords-en.txt");

impl StopList {
    /// The bundled English list.
    pub fn english() -> Self {
        Self::parse(DEFAULT_STOPWORDS)
    }

    /// Parses one word per line; blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Self {
        let words = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(str::to_lowercase)
            .collect();
        Self { words }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::parse(&text))
    }

    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let words = words
            .into_iter()
            .map(|w| w.as_ref().trim().to_lowercase())
            .filter(|w| !w.is_empty() && !w.contains(char::is_whitespace))
            .collect();
        Self { words }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }
}

/// Drops stop words, keeping order and renumbering positions from 0.
pub fn remove_stop_words(tokens: &[Token], stops: &StopList) -> Vec<Token> {
    tokens
        .iter()
        .filter(|t| !stops.contains(&t.surface))
        .enumerate()
        .map(|(position, t)| Token {
            surface: t.surface.clone(),
            position,
        })
        .collect()
}

fn is_alphabetic_word(s: &str) -> bool {
    !s.is_empty() && s.chars().all(char::is_alphabetic)
}

/// Stems `word` when it is purely alphabetic; anything else passes through.
pub fn stem_token(word: &str) -> String {
    if is_alphabetic_word(word) {
        stem(word)
    } else {
        word.to_string()
    }
}

/// Tokenize, drop stop words, then stem each alphabetic token.
pub fn normalize(text: &str, stops: &StopList) -> Vec<String> {
    remove_stop_words(&tokenize(text), stops)
        .into_iter()
        .map(|t| stem_token(&t.surface))
        .collect()
}

/// Tokens with their corpus frequency, after pruning.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    pub entries: BTreeMap<String, u64>,
    pub min_count: u64,
}

impl Vocabulary {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.entries.contains_key(token)
    }
}

/// Keeps exactly the tokens whose count reaches `min_count`.
pub fn prune_by_frequency(counts: &BTreeMap<String, u64>, min_count: u64) -> Result<Vocabulary> {
    if min_count < 1 {
        return Err(Error::InvalidArgument("min_count must be at least 1".into()));
    }
    let entries = counts
        .iter()
        .filter(|(_, &n)| n >= min_count)
        .map(|(k, &n)| (k.clone(), n))
        .collect();
    Ok(Vocabulary { entries, min_count })
}

/// Counts token surfaces across many documents.
pub fn count_tokens<'a, I>(docs: I) -> BTreeMap<String, u64>
where
    I: IntoIterator<Item = &'a [String]>,
{
    let mut counts = BTreeMap::new();
    for doc in docs {
        for tok in doc {
            *counts.entry(tok.clone()).or_insert(0) += 1;
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn surfaces(tokens: &[Token]) -> Vec<&str> {
        tokens.iter().map(|t| t.surface.as_str()).collect()
    }

    #[test]
    fn tokenize_examples() {
        assert_eq!(
            surfaces(&tokenize("I've been messing around with JSON")),
            ["i've", "been", "messing", "around", "with", "json"]
        );
        assert_eq!(
            surfaces(&tokenize("Use C# or C++ (or node.js).")),
            ["use", "c#", "c++", "or", "node.js"]
        );
        assert!(tokenize("").is_empty());
        assert_eq!(surfaces(&tokenize("vb.net, objective-c!")), ["vb.net", "objective-c"]);
        assert!(tokenize("... -- !!").is_empty());
    }

    #[test]
    fn positions_are_dense() {
        let toks = tokenize("a , b");
        assert_eq!(toks.iter().map(|t| t.position).collect::<Vec<_>>(), [0, 1]);
    }

    #[test]
    fn stop_words_removed_and_reindexed() {
        let stops = StopList::english();
        let toks = tokenize("i am the json");
        let kept = remove_stop_words(&toks, &stops);
        assert_eq!(surfaces(&kept), ["json"]);
        assert_eq!(kept[0].position, 0);
        assert!(remove_stop_words(&[], &stops).is_empty());
        let plain = tokenize("json xml");
        assert_eq!(remove_stop_words(&plain, &stops), plain);
    }

    #[test]
    fn bundled_list_is_well_formed() {
        let stops = StopList::english();
        assert!(stops.len() > 500);
        for w in stops.iter() {
            assert!(!w.is_empty());
            assert_eq!(w, w.to_lowercase());
            assert!(!w.contains(char::is_whitespace));
        }
    }

    #[test]
    fn normalize_examples() {
        let stops = StopList::english();
        assert_eq!(normalize("The JavaScript libraries", &stops), ["javascript", "librari"]);
        assert_eq!(normalize("c# c++", &stops), ["c#", "c++"]);
        assert!(normalize("the a an", &stops).is_empty());
    }

    #[test]
    fn pruning() {
        let counts: BTreeMap<String, u64> =
            [("a", 5), ("b", 1), ("c", 2)].iter().map(|&(k, v)| (k.to_string(), v)).collect();
        let v = prune_by_frequency(&counts, 2).unwrap();
        assert_eq!(v.entries.keys().collect::<Vec<_>>(), ["a", "c"]);
        assert_eq!(prune_by_frequency(&counts, 1).unwrap().entries, counts);
        assert!(prune_by_frequency(&BTreeMap::new(), 3).unwrap().is_empty());
        assert!(prune_by_frequency(&counts, 0).is_err());
    }

    proptest! {
        #[test]
        fn tokens_are_clean(text in "\\PC{0,80}") {
            for t in tokenize(&text) {
                prop_assert!(!t.surface.is_empty());
                prop_assert!(!t.surface.contains(char::is_whitespace));
                prop_assert_eq!(t.surface.clone(), t.surface.to_lowercase());
            }
        }

        #[test]
        fn stop_removal_is_idempotent(text in "[a-z ]{0,60}") {
            let stops = StopList::english();
            let once = remove_stop_words(&tokenize(&text), &stops);
            prop_assert_eq!(remove_stop_words(&once, &stops), once.clone());
        }

        #[test]
        fn pruning_is_nested(
            counts in proptest::collection::btree_map("[a-z]{1,4}", 1u64..20, 0..30),
            t in 2u64..20,
        ) {
            let hi = prune_by_frequency(&counts, t).unwrap();
            let lo = prune_by_frequency(&counts, t - 1).unwrap();
            for k in hi.entries.keys() {
                prop_assert!(lo.contains(k));
            }
        }
    }
}
