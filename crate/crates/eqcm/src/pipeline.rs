//! Corpus → encoding → evolution → features → ridge readout → metrics.

use std::time::Instant;

use eqcm_core::corpus::{build_dataset, generate_random_strings, LabeledDataset, WordList};
use eqcm_core::encoding::{fit_max_entropy_bins, tokenize, BinPartition, ConsonantVowelEncoder, EncodedInput, Encoder};
use eqcm_core::features::{extract_features, observable_family, FeatureVector, ObservableFamily};
use eqcm_core::metrics::{confusion, derived_metrics, MetricsReport};
use eqcm_core::quantum::{build_attention, build_goe_with, build_ising, init_state, Hamiltonian, Spectrum};
use eqcm_core::readout::{decide, deliberative_index, fit_ridge, DesignMatrix, ReadoutModel};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{EncoderConfig, ExperimentConfig, ReferenceClass, ReservoirConfig, SourceConfig};
use crate::error::{RunError, RunResult};
use crate::wordlist::{load_word_list, SourceManifest};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub word: String,
    pub z: Vec<f64>,
    pub features: Vec<f64>,
    pub y: f64,
    pub prediction: f64,
    pub truth: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitReport {
    pub samples: Vec<SampleRecord>,
    pub metrics: MetricsReport,
}

/// Hashes of exactly what the two fitting steps saw.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitInputs {
    /// Words handed to the bin fit, if a partition was fitted.
    pub partition_words_sha256: Option<String>,
    /// Design matrix and targets handed to the ridge fit.
    pub design_sha256: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub load_s: f64,
    pub features_s: f64,
    pub fit_s: f64,
    pub total_s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub config: ExperimentConfig,
    pub sources: Vec<SourceManifest>,
    pub dataset: LabeledDataset,
    pub partition: Option<BinPartition>,
    pub family_labels: Vec<String>,
    pub model: ReadoutModel,
    pub fit_inputs: FitInputs,
    pub reservoir: Hamiltonian,
    pub train: SplitReport,
    pub test: SplitReport,
    pub timings: Timings,
}

fn hash_words<'a>(words: impl IntoIterator<Item = &'a str>) -> String {
    let mut h = Sha256::new();
    for w in words {
        h.update(w.as_bytes());
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}

fn hash_design(rows: &[FeatureVector], targets: &[f64]) -> String {
    let mut h = Sha256::new();
    for (r, t) in rows.iter().zip(targets) {
        for v in &r.values {
            h.update(v.to_le_bytes());
        }
        h.update(t.to_le_bytes());
    }
    hex::encode(h.finalize())
}

fn load_source(
    src: &SourceConfig,
    cfg: &ExperimentConfig,
    alphabet: &eqcm_core::encoding::Alphabet,
) -> RunResult<(WordList, SourceManifest)> {
    let d = &cfg.dataset;
    match src {
        SourceConfig::File { path, tag } => {
            let l = load_word_list(path, d.word_length, alphabet, tag)?;
            let manifest = SourceManifest {
                tag: tag.clone(),
                path: Some(path.to_string_lossy().into_owned()),
                sha256: Some(l.sha256),
                filter: Some(l.report),
                random_seed: None,
                pool_size: l.list.len(),
            };
            Ok((l.list, manifest))
        }
        SourceConfig::Random { tag, seed } => {
            let seed = seed.unwrap_or(d.split_seed);
            let mut list = generate_random_strings(d.n_train + d.n_test, d.word_length, seed)?;
            list.source_tag = tag.clone();
            let manifest = SourceManifest {
                tag: tag.clone(),
                path: None,
                sha256: None,
                filter: None,
                random_seed: Some(seed),
                pool_size: list.len(),
            };
            Ok((list, manifest))
        }
    }
}

/// Loads both class pools and draws the train/test split.
pub fn prepare_dataset(cfg: &ExperimentConfig) -> RunResult<(LabeledDataset, Vec<SourceManifest>)> {
    let alphabet = cfg.alphabet.build()?;
    let (pos, pos_m) = load_source(&cfg.dataset.positive, cfg, &alphabet)?;
    let (neg, neg_m) = load_source(&cfg.dataset.negative, cfg, &alphabet)?;
    let d = &cfg.dataset;
    let ds = build_dataset(&pos, &neg, d.n_train, d.n_test, d.t_plus, d.t_minus, d.split_seed)?;
    Ok((ds, vec![pos_m, neg_m]))
}

/// Builds the input encoder; max-entropy bins see only the reference
/// class of the training split.
pub fn fit_encoder(
    cfg: &ExperimentConfig,
    dataset: &LabeledDataset,
) -> RunResult<(Encoder, Option<BinPartition>, Option<String>)> {
    let alphabet = cfg.alphabet.build()?;
    match &cfg.encoder {
        EncoderConfig::ConsonantVowel { vowels } => Ok((
            Encoder::ConsonantVowel(ConsonantVowelEncoder::new(alphabet, vowels.chars().collect())),
            None,
            None,
        )),
        EncoderConfig::MaxEntropy { reference, aggregation } => {
            let (target, label) = match reference {
                ReferenceClass::Positive => (dataset.t_plus, &dataset.positive_tag),
                ReferenceClass::Negative => (dataset.t_minus, &dataset.negative_tag),
            };
            let words = dataset.train_words_with_target(target);
            let p = fit_max_entropy_bins(&words, &alphabet, aggregation, label, Some(dataset.seed))?;
            Ok((
                Encoder::Bins(p.clone()),
                Some(p),
                Some(hash_words(words.iter().copied())),
            ))
        }
    }
}

pub fn build_reservoir(cfg: &ExperimentConfig) -> RunResult<Hamiltonian> {
    let m = cfg.dataset.word_length;
    Ok(match &cfg.reservoir {
        ReservoirConfig::Goe { sigma, seed, diagonal } => {
            let seed = seed.ok_or_else(|| RunError::Config("reservoir.seed is required".into()))?;
            build_goe_with(m, *sigma, seed, *diagonal)?
        }
        ReservoirConfig::Ising { j, b_z, b_x } => build_ising(m, *j, *b_z, *b_x)?,
    })
}

/// Feature map of one encoded input.
pub struct FeatureMap<'a> {
    cfg: &'a ExperimentConfig,
    h0: &'a Hamiltonian,
    /// Spectrum of `H₀`, shared by every sample when attention is off.
    h0_spectrum: Option<Spectrum>,
    family: &'a ObservableFamily,
}

impl<'a> FeatureMap<'a> {
    pub fn new(cfg: &'a ExperimentConfig, h0: &'a Hamiltonian, family: &'a ObservableFamily) -> RunResult<Self> {
        let h0_spectrum = if cfg.attention.is_off() {
            Some(Spectrum::of(h0)?)
        } else {
            None
        };
        Ok(Self {
            cfg,
            h0,
            h0_spectrum,
            family,
        })
    }

    pub fn features(&self, z: &EncodedInput) -> eqcm_core::Result<FeatureVector> {
        let rho0 = init_state(z)?;
        let rho = match &self.h0_spectrum {
            Some(s) => s.evolve(&rho0, self.cfg.tau)?,
            None => {
                let a = &self.cfg.attention;
                let h = self.h0.add(&build_attention(z, a.g1, a.g2, a.topology)?)?;
                Spectrum::of(&h)?.evolve(&rho0, self.cfg.tau)?
            }
        };
        extract_features(&rho, self.family)
    }
}

fn featurize(
    split: &'static str,
    words: &[&str],
    encoder: &Encoder,
    map: &FeatureMap,
    cfg: &ExperimentConfig,
) -> RunResult<Vec<(EncodedInput, FeatureVector)>> {
    let alphabet = cfg.alphabet.build()?;
    words
        .par_iter()
        .enumerate()
        .map(|(index, word)| {
            let wrap = |source| RunError::Sample {
                split,
                index,
                word: (*word).into(),
                source,
            };
            let tokens = tokenize(word, &alphabet).map_err(wrap)?;
            let z = encoder.encode_tokens(&tokens, cfg.delta).map_err(wrap)?;
            let x = map.features(&z).map_err(wrap)?;
            Ok((z, x))
        })
        .collect()
}

fn score(
    split: &'static str,
    words: &[&str],
    truths: &[f64],
    encoded: Vec<(EncodedInput, FeatureVector)>,
    model: &ReadoutModel,
    cfg: &ExperimentConfig,
) -> RunResult<SplitReport> {
    let d = &cfg.dataset;
    let mut samples = Vec::with_capacity(words.len());
    for (index, ((z, x), (word, &truth))) in encoded.into_iter().zip(words.iter().zip(truths)).enumerate() {
        let wrap = |source| RunError::Sample {
            split,
            index,
            word: (*word).into(),
            source,
        };
        let y = deliberative_index(model, &x).map_err(wrap)?;
        let prediction = decide(y, d.t_plus, d.t_minus).map_err(wrap)?;
        samples.push(SampleRecord {
            word: (*word).into(),
            z: z.z,
            features: x.values,
            y,
            prediction,
            truth,
        });
    }
    let preds: Vec<f64> = samples.iter().map(|s| s.prediction).collect();
    let cm = confusion(&preds, truths, &d.t_plus, &d.t_minus)?;
    Ok(SplitReport {
        samples,
        metrics: derived_metrics(&cm),
    })
}

/// Runs the pipeline on an already drawn dataset.
pub fn run_on_dataset(
    cfg: &ExperimentConfig,
    dataset: LabeledDataset,
    sources: Vec<SourceManifest>,
) -> RunResult<RunReport> {
    let start = Instant::now();
    let family = observable_family(cfg.family, cfg.dataset.word_length)?;
    let (encoder, partition, partition_words_sha256) = fit_encoder(cfg, &dataset)?;
    let h0 = build_reservoir(cfg)?;
    let map = FeatureMap::new(cfg, &h0, &family)?;

    let train_words: Vec<&str> = dataset.train.iter().map(|s| s.word.as_str()).collect();
    let train_targets: Vec<f64> = dataset.train.iter().map(|s| s.target).collect();
    let test_words: Vec<&str> = dataset.test.iter().map(|s| s.word.as_str()).collect();
    let test_targets: Vec<f64> = dataset.test.iter().map(|s| s.target).collect();
    let train_enc = featurize("train", &train_words, &encoder, &map, cfg)?;
    let test_enc = featurize("test", &test_words, &encoder, &map, cfg)?;
    let features_s = start.elapsed().as_secs_f64();

    let fit_start = Instant::now();
    let train_x: Vec<FeatureVector> = train_enc.iter().map(|(_, x)| x.clone()).collect();
    let design = DesignMatrix::new(&train_x, &train_targets)?;
    let model = fit_ridge(&design, cfg.lambda)?;
    let fit_inputs = FitInputs {
        partition_words_sha256,
        design_sha256: hash_design(&train_x, &train_targets),
    };
    let fit_s = fit_start.elapsed().as_secs_f64();

    let train = score("train", &train_words, &train_targets, train_enc, &model, cfg)?;
    let test = score("test", &test_words, &test_targets, test_enc, &model, cfg)?;
    Ok(RunReport {
        config: cfg.clone(),
        sources,
        dataset,
        partition,
        family_labels: family.labels(),
        model,
        fit_inputs,
        reservoir: h0,
        train,
        test,
        timings: Timings {
            load_s: 0.0,
            features_s,
            fit_s,
            total_s: start.elapsed().as_secs_f64(),
        },
    })
}

/// Validates the config, draws the dataset and runs the pipeline.
pub fn run_experiment(cfg: &ExperimentConfig) -> RunResult<RunReport> {
    cfg.validate()?;
    let start = Instant::now();
    let (dataset, sources) = prepare_dataset(cfg)?;
    let load_s = start.elapsed().as_secs_f64();
    let mut report = run_on_dataset(cfg, dataset, sources)?;
    report.timings.load_s = load_s;
    report.timings.total_s = start.elapsed().as_secs_f64();
    Ok(report)
}
