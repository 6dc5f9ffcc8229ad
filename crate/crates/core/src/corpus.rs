//! Word lists, random strings and balanced train/test datasets.
//!
//! All randomness comes from ChaCha20 seeded through
//! `SeedableRng::seed_from_u64`, with rand 0.9 uniform sampling on top, so a
//! seed reproduces the same strings and splits on every platform.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::encoding::Alphabet;
use crate::error::{Error, Result};

/// Distinct words of a fixed length over one alphabet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordList {
    pub words: Vec<String>,
    pub source_tag: String,
    pub alphabet: Alphabet,
}

impl WordList {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Why lines were dropped while building a [`WordList`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterReport {
    pub kept: usize,
    pub blank: usize,
    pub wrong_length: usize,
    pub hyphen_or_apostrophe: usize,
    pub not_lowercase_initial: usize,
    /// Words with a symbol outside the alphabet: skipped, not an error.
    pub out_of_alphabet: usize,
    pub duplicates: usize,
}

fn is_hyphen_or_apostrophe(c: char) -> bool {
    matches!(c, '-' | '\'' | '\u{2019}' | '\u{2010}' | '\u{2011}')
}

/// Applies the dictionary filters to already-normalized lines, preserving
/// order and keeping the first occurrence of each word.
///
/// A word is kept when it has exactly `length` characters, contains no
/// hyphen or apostrophe, starts with a lowercase character and uses only
/// symbols of `alphabet`.
pub fn filter_words<'a, I>(lines: I, length: usize, alphabet: &Alphabet, source_tag: &str) -> (WordList, FilterReport)
where
    I: IntoIterator<Item = &'a str>,
{
    let mut report = FilterReport::default();
    let mut seen = BTreeSet::new();
    let mut words = Vec::new();
    for line in lines {
        let w = line.trim();
        if w.is_empty() {
            report.blank += 1;
            continue;
        }
        if w.chars().count() != length {
            report.wrong_length += 1;
        } else if w.chars().any(is_hyphen_or_apostrophe) {
            report.hyphen_or_apostrophe += 1;
        } else if !w.chars().next().is_some_and(char::is_lowercase) {
            report.not_lowercase_initial += 1;
        } else if !w.chars().all(|c| alphabet.contains(c)) {
            report.out_of_alphabet += 1;
        } else if !seen.insert(w) {
            report.duplicates += 1;
        } else {
            words.push(String::from(w));
        }
    }
    report.kept = words.len();
    (
        WordList {
            words,
            source_tag: source_tag.into(),
            alphabet: alphabet.clone(),
        },
        report,
    )
}

/// `n` strings of `length` symbols drawn i.i.d. uniformly from `a..z`.
pub fn generate_random_strings(n: usize, length: usize, seed: u64) -> Result<WordList> {
    if length == 0 {
        return Err(Error::OutOfRange {
            what: "length",
            value: 0.0,
        });
    }
    let alphabet = Alphabet::latin();
    let symbols = alphabet.symbols();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let words = (0..n)
        .map(|_| {
            (0..length)
                .map(|_| symbols[rng.random_range(0..symbols.len())])
                .collect()
        })
        .collect();
    Ok(WordList {
        words,
        source_tag: "random".into(),
        alphabet,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub word: String,
    pub target: f64,
}

/// Class-balanced train and test splits with disjoint words.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledDataset {
    pub train: Vec<Sample>,
    pub test: Vec<Sample>,
    pub t_plus: f64,
    pub t_minus: f64,
    pub positive_tag: String,
    pub negative_tag: String,
    pub seed: u64,
}

impl LabeledDataset {
    pub fn train_words(&self) -> impl Iterator<Item = &str> {
        self.train.iter().map(|s| s.word.as_str())
    }

    /// Training words of one class.
    pub fn train_words_with_target(&self, target: f64) -> Vec<&str> {
        self.train
            .iter()
            .filter(|s| s.target == target)
            .map(|s| s.word.as_str())
            .collect()
    }
}

/// Samples `n_train + n_test` distinct words per class without replacement.
///
/// Words occurring in both pools carry contradictory labels; they are
/// dropped from both before sampling so no word can land in both splits.
/// The positive class is drawn first, then the negative class, from one
/// ChaCha20 stream.
pub fn build_dataset(
    pos: &WordList,
    neg: &WordList,
    n_train_per_class: usize,
    n_test_per_class: usize,
    t_plus: f64,
    t_minus: f64,
    seed: u64,
) -> Result<LabeledDataset> {
    if !t_plus.is_finite() || !t_minus.is_finite() {
        return Err(Error::NonFinite("targets"));
    }
    if t_plus == t_minus {
        return Err(Error::OutOfRange {
            what: "t_minus",
            value: t_minus,
        });
    }
    let pos_set: BTreeSet<&str> = pos.words.iter().map(String::as_str).collect();
    let neg_set: BTreeSet<&str> = neg.words.iter().map(String::as_str).collect();
    let dedup = |list: &WordList, other: &BTreeSet<&str>| -> Vec<String> {
        let mut seen = BTreeSet::new();
        list.words
            .iter()
            .filter(|w| !other.contains(w.as_str()) && seen.insert(w.as_str()))
            .cloned()
            .collect()
    };
    let pos_pool = dedup(pos, &neg_set);
    let neg_pool = dedup(neg, &pos_set);

    let needed = n_train_per_class + n_test_per_class;
    for (pool, tag) in [(&pos_pool, &pos.source_tag), (&neg_pool, &neg.source_tag)] {
        if pool.len() < needed {
            return Err(Error::InsufficientWords {
                class: tag.clone(),
                needed,
                available: pool.len(),
            });
        }
    }

    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut train = Vec::with_capacity(2 * n_train_per_class);
    let mut test = Vec::with_capacity(2 * n_test_per_class);
    for (pool, target) in [(&pos_pool, t_plus), (&neg_pool, t_minus)] {
        let picked = index::sample(&mut rng, pool.len(), needed);
        for (k, idx) in picked.iter().enumerate() {
            let s = Sample {
                word: pool[idx].clone(),
                target,
            };
            if k < n_train_per_class {
                train.push(s);
            } else {
                test.push(s);
            }
        }
    }
    Ok(LabeledDataset {
        train,
        test,
        t_plus,
        t_minus,
        positive_tag: pos.source_tag.clone(),
        negative_tag: neg.source_tag.clone(),
        seed,
    })
}
