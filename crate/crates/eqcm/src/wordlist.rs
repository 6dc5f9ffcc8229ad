//! Dictionary files: UTF-8, one word per line, NFC-normalized before filtering.

use std::fs;
use std::path::Path;

use eqcm_core::corpus::{filter_words, FilterReport, WordList};
use eqcm_core::encoding::Alphabet;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use unicode_normalization::UnicodeNormalization;

use crate::error::{RunError, RunResult};

/// A filtered list together with where it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedList {
    pub list: WordList,
    pub report: FilterReport,
    /// Hex SHA-256 of the raw file bytes.
    pub sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn load_word_list(path: &Path, length: usize, alphabet: &Alphabet, tag: &str) -> RunResult<LoadedList> {
    let bytes = fs::read(path).map_err(|e| RunError::io(path, e))?;
    let text = std::str::from_utf8(&bytes).map_err(|_| RunError::NotUtf8 { path: path.into() })?;
    let normalized: Vec<String> = text.lines().map(|l| l.nfc().collect()).collect();
    let (list, report) = filter_words(normalized.iter().map(String::as_str), length, alphabet, tag);
    Ok(LoadedList {
        list,
        report,
        sha256: sha256_hex(&bytes),
    })
}

/// Provenance of one class pool, as recorded in the dataset manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceManifest {
    pub tag: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sha256: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub filter: Option<FilterReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub random_seed: Option<u64>,
    pub pool_size: usize,
}
