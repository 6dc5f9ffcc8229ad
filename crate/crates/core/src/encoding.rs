//! Symbol alphabets and the two dichotomic encoders.
//!
//! A word is tokenized into its characters and each character is mapped to
//! `+Δ` or `-Δ`. The consonant–vowel encoder uses a fixed phonological
//! partition; the maximum-entropy encoder fits a two-bin partition of the
//! alphabet whose frequent bin carries cumulative probability as close as
//! possible to one half.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered set of distinct symbols.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<char>", into = "Vec<char>")]
pub struct Alphabet {
    symbols: Vec<char>,
}

const LATIN: &str = "abcdefghijklmnopqrstuvwxyz";
const ITALIAN: &str = "aàbcdeèéfghiìjklmnoòpqrstuùvwxyz";
const VOWELS: &str = "aàeèéiìoòuùjw";

impl Alphabet {
    pub fn new<I: IntoIterator<Item = char>>(symbols: I) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for s in symbols {
            if !seen.insert(s) {
                return Err(Error::DuplicateSymbol(s));
            }
            out.push(s);
        }
        Ok(Self { symbols: out })
    }

    /// The 26-letter lowercase Latin alphabet.
    pub fn latin() -> Self {
        Self {
            symbols: LATIN.chars().collect(),
        }
    }

    /// Latin letters plus the accented vowels that occur in Italian words,
    /// each accented vowel being a distinct symbol (32 symbols).
    pub fn italian() -> Self {
        Self {
            symbols: ITALIAN.chars().collect(),
        }
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn contains(&self, symbol: char) -> bool {
        self.symbols.contains(&symbol)
    }

    pub fn position(&self, symbol: char) -> Option<usize> {
        self.symbols.iter().position(|&s| s == symbol)
    }
}

impl TryFrom<Vec<char>> for Alphabet {
    type Error = Error;

    fn try_from(value: Vec<char>) -> Result<Self> {
        Self::new(value)
    }
}

impl From<Alphabet> for Vec<char> {
    fn from(value: Alphabet) -> Self {
        value.symbols
    }
}

/// Vowel set used by the consonant–vowel encoder: plain and accented vowels
/// together with the semivowels `j` and `w`.
pub fn default_vowels() -> BTreeSet<char> {
    VOWELS.chars().collect()
}

/// Aggregation applied before bin fitting: `ò → o`, `à → a`.
///
/// Accented `i`/`e` are deliberately left unmerged.
pub fn default_aggregation() -> BTreeMap<char, char> {
    [('ò', 'o'), ('à', 'a')].into_iter().collect()
}

/// Splits a word into its characters, checking each against the alphabet.
pub fn tokenize(word: &str, alphabet: &Alphabet) -> Result<Vec<char>> {
    if word.is_empty() {
        return Err(Error::Empty("word"));
    }
    word.chars()
        .map(|c| {
            if alphabet.contains(c) {
                Ok(c)
            } else {
                Err(Error::SymbolOutsideAlphabet { symbol: c })
            }
        })
        .collect()
}

/// Which encoder produced an [`EncodedInput`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EncoderId {
    ConsonantVowel,
    MaxEntropy { label: String },
}

/// Dichotomic vector `z ∈ {-Δ, +Δ}^m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncodedInput {
    pub z: Vec<f64>,
    pub delta: f64,
    pub encoder: EncoderId,
}

impl EncodedInput {
    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if !delta.is_finite() {
        return Err(Error::NonFinite("delta"));
    }
    if delta <= 0.0 || delta > 1.0 {
        return Err(Error::OutOfRange {
            what: "delta",
            value: delta,
        });
    }
    Ok(())
}

/// Task-informed encoder: consonants map to `+Δ`, vowels to `-Δ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsonantVowelEncoder {
    alphabet: Alphabet,
    vowels: BTreeSet<char>,
}

impl ConsonantVowelEncoder {
    pub fn new(alphabet: Alphabet, vowels: BTreeSet<char>) -> Self {
        Self { alphabet, vowels }
    }

    /// Italian alphabet with the default vowel set.
    pub fn italian() -> Self {
        Self::new(Alphabet::italian(), default_vowels())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn encode(&self, tokens: &[char], delta: f64) -> Result<EncodedInput> {
        check_delta(delta)?;
        let z = tokens
            .iter()
            .map(|&t| {
                if !self.alphabet.contains(t) {
                    Err(Error::SymbolOutsideAlphabet { symbol: t })
                } else if self.vowels.contains(&t) {
                    Ok(-delta)
                } else {
                    Ok(delta)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(EncodedInput {
            z,
            delta,
            encoder: EncoderId::ConsonantVowel,
        })
    }
}

/// Empirical symbol probabilities after aggregation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyTable {
    pub probs: BTreeMap<char, f64>,
    pub total_count: u64,
}

impl FrequencyTable {
    pub fn get(&self, symbol: char) -> f64 {
        self.probs.get(&symbol).copied().unwrap_or(0.0)
    }
}

/// Counts every token of every word, folding each symbol onto its canonical
/// representative before normalizing.
pub fn symbol_frequencies<S: AsRef<str>>(words: &[S], aggregation: &BTreeMap<char, char>) -> Result<FrequencyTable> {
    let mut counts: BTreeMap<char, u64> = BTreeMap::new();
    let mut total = 0u64;
    for w in words {
        for c in w.as_ref().chars() {
            let canon = aggregation.get(&c).copied().unwrap_or(c);
            *counts.entry(canon).or_default() += 1;
            total += 1;
        }
    }
    if total == 0 {
        return Err(Error::Empty("word list"));
    }
    let probs = counts.into_iter().map(|(s, n)| (s, n as f64 / total as f64)).collect();
    Ok(FrequencyTable {
        probs,
        total_count: total,
    })
}

/// Shannon entropy in nats, with `0 ln 0 = 0`.
pub fn shannon_entropy(freq: &FrequencyTable) -> f64 {
    freq.probs
        .values()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * libm::log(p))
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PartitionProvenance {
    ConsonantVowel,
    MaxEntropy {
        label: String,
        seed: Option<u64>,
        aggregation: Vec<(char, char)>,
    },
}

/// Two-bin partition of an alphabet into frequent and rare symbols.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinPartition {
    pub frequent: Vec<char>,
    pub rare: Vec<char>,
    pub p_frequent: f64,
    pub provenance: PartitionProvenance,
}

impl BinPartition {
    pub fn is_frequent(&self, symbol: char) -> bool {
        self.frequent.contains(&symbol)
    }

    /// Frequent symbols map to `-Δ`, rare ones to `+Δ`.
    pub fn encode(&self, tokens: &[char], delta: f64) -> Result<EncodedInput> {
        check_delta(delta)?;
        let z = tokens
            .iter()
            .map(|&t| {
                if self.frequent.contains(&t) {
                    Ok(-delta)
                } else if self.rare.contains(&t) {
                    Ok(delta)
                } else {
                    Err(Error::SymbolOutsideAlphabet { symbol: t })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let encoder = match &self.provenance {
            PartitionProvenance::ConsonantVowel => EncoderId::ConsonantVowel,
            PartitionProvenance::MaxEntropy { label, .. } => EncoderId::MaxEntropy { label: label.clone() },
        };
        Ok(EncodedInput { z, delta, encoder })
    }
}

/// Convenience wrapper around [`BinPartition::encode`].
pub fn bin_encode(tokens: &[char], partition: &BinPartition, delta: f64) -> Result<EncodedInput> {
    partition.encode(tokens, delta)
}

/// Canonical symbols with nonzero frequency, by descending probability.
/// Ties are broken by the position of the symbol in the alphabet.
pub fn frequency_ranking(freq: &FrequencyTable, alphabet: &Alphabet) -> Vec<(char, f64)> {
    let mut ranked: Vec<(char, f64)> = freq
        .probs
        .iter()
        .filter(|(_, &p)| p > 0.0)
        .map(|(&s, &p)| (s, p))
        .collect();
    ranked.sort_by(|a, b| {
        b.1.total_cmp(&a.1).then_with(|| {
            let pa = alphabet.position(a.0).unwrap_or(usize::MAX);
            let pb = alphabet.position(b.0).unwrap_or(usize::MAX);
            pa.cmp(&pb).then(a.0.cmp(&b.0))
        })
    });
    ranked
}

/// Length of the prefix of `probs` whose cumulative sum is closest to 1/2.
/// At least one symbol is always taken; ties keep the shorter prefix.
pub fn best_prefix_split(probs: &[f64]) -> usize {
    let mut best = (1usize, f64::INFINITY);
    let mut cum = 0.0;
    for (k, p) in probs.iter().enumerate() {
        cum += p;
        let gap = libm::fabs(cum - 0.5);
        if gap < best.1 {
            best = (k + 1, gap);
        }
    }
    best.0
}

/// Fits the label-aware maximum-entropy partition on a single-class word list.
///
/// Symbols of the alphabet that never occur (and are not aggregated onto a
/// symbol that occurs) end up in the rare bin.
pub fn fit_max_entropy_bins<S: AsRef<str>>(
    words: &[S],
    alphabet: &Alphabet,
    aggregation: &BTreeMap<char, char>,
    label: &str,
    seed: Option<u64>,
) -> Result<BinPartition> {
    let freq = symbol_frequencies(words, aggregation)?;
    for &s in freq.probs.keys() {
        if !alphabet.contains(s) {
            return Err(Error::SymbolOutsideAlphabet { symbol: s });
        }
    }
    let ranked = frequency_ranking(&freq, alphabet);
    let probs: Vec<f64> = ranked.iter().map(|&(_, p)| p).collect();
    let k = best_prefix_split(&probs);
    let canonical: BTreeSet<char> = ranked[..k].iter().map(|&(s, _)| s).collect();
    let p_frequent = probs[..k].iter().sum();

    let (frequent, rare) = alphabet.symbols().iter().partition(|&&s| {
        let canon = aggregation.get(&s).copied().unwrap_or(s);
        canonical.contains(&canon)
    });
    Ok(BinPartition {
        frequent,
        rare,
        p_frequent,
        provenance: PartitionProvenance::MaxEntropy {
            label: label.into(),
            seed,
            aggregation: aggregation.iter().map(|(&a, &b)| (a, b)).collect(),
        },
    })
}

/// Either encoder behind one interface.
#[derive(Debug, Clone, PartialEq)]
pub enum Encoder {
    ConsonantVowel(ConsonantVowelEncoder),
    Bins(BinPartition),
}

impl Encoder {
    pub fn encode_tokens(&self, tokens: &[char], delta: f64) -> Result<EncodedInput> {
        match self {
            Encoder::ConsonantVowel(e) => e.encode(tokens, delta),
            Encoder::Bins(p) => p.encode(tokens, delta),
        }
    }

    pub fn encode_word(&self, word: &str, delta: f64) -> Result<EncodedInput> {
        if word.is_empty() {
            return Err(Error::Empty("word"));
        }
        let tokens: Vec<char> = word.chars().collect();
        self.encode_tokens(&tokens, delta)
    }
}
