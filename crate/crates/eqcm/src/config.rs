//! Experiment configuration, task presets and layered overrides.
//!
//! A config is assembled as JSON: the preset named by `task` is expanded
//! first, the config file is merged on top of it, then `--set key=value`
//! overrides. Merging is recursive on objects and replaces everything else.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use eqcm_core::encoding::{default_aggregation, default_vowels, Alphabet};
use eqcm_core::features::FamilyKind;
use eqcm_core::quantum::{GoeDiagonal, Topology};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{RunError, RunResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    /// Italian words against uniform random strings, GOE reservoir.
    Task1,
    /// Italian against English words, GOE reservoir, max-entropy encoding.
    Task2,
    /// Italian against English on a local Ising chain.
    Task2Hw,
    Custom,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Task1 => "task1",
            Task::Task2 => "task2",
            Task::Task2Hw => "task2_hw",
            Task::Custom => "custom",
        }
    }
}

impl std::str::FromStr for Task {
    type Err = RunError;

    fn from_str(s: &str) -> RunResult<Self> {
        serde_json::from_value(Value::String(s.into())).map_err(|_| {
            RunError::Config(format!(
                "unknown task {s:?} (expected task1, task2, task2_hw or custom)"
            ))
        })
    }
}

/// Which seeds a sweep varies.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SeedAxis {
    /// GOE seed and split seed together.
    #[default]
    Both,
    /// GOE seed only; the dataset draw stays fixed.
    Goe,
    /// Split seed only; the reservoir stays fixed.
    Split,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphabetSpec {
    Italian,
    Latin,
    Custom { symbols: String },
}

impl AlphabetSpec {
    pub fn build(&self) -> RunResult<Alphabet> {
        Ok(match self {
            AlphabetSpec::Italian => Alphabet::italian(),
            AlphabetSpec::Latin => Alphabet::latin(),
            AlphabetSpec::Custom { symbols } => Alphabet::new(symbols.chars())?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceClass {
    Positive,
    Negative,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EncoderConfig {
    ConsonantVowel {
        vowels: String,
    },
    /// Bins fitted on the training words of `reference` only.
    MaxEntropy {
        reference: ReferenceClass,
        aggregation: BTreeMap<char, char>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReservoirConfig {
    Goe {
        sigma: f64,
        /// Must be given explicitly; presets leave it unset.
        seed: Option<u64>,
        #[serde(default)]
        diagonal: GoeDiagonal,
    },
    Ising {
        j: f64,
        b_z: f64,
        b_x: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttentionConfig {
    pub g1: f64,
    pub g2: f64,
    pub topology: Topology,
}

impl AttentionConfig {
    pub fn is_off(&self) -> bool {
        self.g1 == 0.0 && self.g2 == 0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SourceConfig {
    File {
        path: PathBuf,
        tag: String,
    },
    /// `n_train + n_test` uniform strings over `a..z`; the seed defaults to
    /// the split seed.
    Random {
        tag: String,
        seed: Option<u64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetConfig {
    pub positive: SourceConfig,
    pub negative: SourceConfig,
    pub word_length: usize,
    pub n_train: usize,
    pub n_test: usize,
    pub t_plus: f64,
    pub t_minus: f64,
    pub split_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub task: Task,
    pub alphabet: AlphabetSpec,
    pub encoder: EncoderConfig,
    pub reservoir: ReservoirConfig,
    pub attention: AttentionConfig,
    pub tau: f64,
    pub lambda: f64,
    pub dataset: DatasetConfig,
    pub family: FamilyKind,
    pub delta: f64,
    pub histogram_bins: usize,
    /// Also write the reservoir Hamiltonian as JSON.
    #[serde(default)]
    pub dump_hamiltonian: bool,
    /// Not echoed into artifacts, so replays into different directories
    /// stay byte-identical.
    #[serde(default, skip_serializing)]
    pub output_dir: PathBuf,
}

fn string_of(chars: impl IntoIterator<Item = char>) -> String {
    chars.into_iter().collect()
}

/// JSON expansion of a preset.
pub fn preset(task: Task) -> Value {
    let vowels = string_of(default_vowels());
    let aggregation: BTreeMap<char, char> = default_aggregation();
    let italian = json!({"kind": "file", "path": "data/italian7.txt", "tag": "italian"});
    let english = json!({"kind": "file", "path": "data/english7.txt", "tag": "english"});
    let goe = json!({"kind": "goe", "sigma": 0.1, "seed": null, "diagonal": "literal"});
    let dataset = |negative: Value| {
        json!({
            "positive": italian, "negative": negative, "word_length": 7,
            "n_train": 150, "n_test": 40, "t_plus": 0.5, "t_minus": -0.5, "split_seed": 0
        })
    };
    let base =
        |task: &str, encoder: Value, reservoir: Value, attention: Value, tau: f64, family: &str, negative: Value| {
            json!({
                "task": task,
                "alphabet": "italian",
                "encoder": encoder,
                "reservoir": reservoir,
                "attention": attention,
                "tau": tau,
                "lambda": 2e-3,
                "dataset": dataset(negative),
                "family": family,
                "delta": 1.0,
                "histogram_bins": 20,
                "dump_hamiltonian": false,
                "output_dir": format!("out/{task}"),
            })
        };
    let cv = json!({"kind": "consonant_vowel", "vowels": vowels});
    let goe_attention = json!({"g1": 0.1, "g2": 0.4, "topology": "all_pairs"});
    let random = json!({"kind": "random", "tag": "random", "seed": null});
    match task {
        Task::Task1 => base("task1", cv, goe, goe_attention, 10.0, "full", random),
        Task::Task2 => base(
            "task2",
            json!({"kind": "max_entropy", "reference": "positive", "aggregation": aggregation}),
            goe,
            goe_attention,
            10.0,
            "full",
            english,
        ),
        Task::Task2Hw => base(
            "task2_hw",
            cv,
            json!({"kind": "ising", "j": -1.0, "b_z": 1.5, "b_x": 0.7}),
            json!({"g1": 2.0, "g2": 2.0, "topology": "chain"}),
            20.0,
            "local",
            english,
        ),
        Task::Custom => base("custom", cv, goe, goe_attention, 10.0, "full", random),
    }
}

/// Recursive merge of `overlay` into `base`.
pub fn merge(base: &mut Value, overlay: Value) {
    match (base, overlay) {
        (Value::Object(b), Value::Object(o)) => {
            for (k, v) in o {
                match b.get_mut(&k) {
                    // A variant switch replaces the whole object.
                    Some(slot) if !kind_changes(slot, &v) => merge(slot, v),
                    _ => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (b, o) => *b = o,
    }
}

fn kind_changes(base: &Value, overlay: &Value) -> bool {
    match (base.get("kind"), overlay.get("kind")) {
        (Some(a), Some(b)) => a != b,
        _ => false,
    }
}

/// Sets a dotted path such as `attention.g1` to a JSON value (or a bare
/// string when `raw` does not parse as JSON).
pub fn set_path(root: &mut Value, path: &str, raw: &str) -> RunResult<()> {
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.into()));
    let mut cur = root;
    let parts: Vec<&str> = path.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        let obj = cur
            .as_object_mut()
            .ok_or_else(|| RunError::Config(format!("{path}: {part:?} is not inside an object")))?;
        if i + 1 == parts.len() {
            obj.insert((*part).into(), value);
            return Ok(());
        }
        cur = obj.entry(*part).or_insert_with(|| json!({}));
    }
    Err(RunError::Config("empty override path".into()))
}

/// Rewrites relative source paths of a config file against its directory.
fn anchor_paths(v: &mut Value, dir: &Path) {
    for class in ["positive", "negative"] {
        if let Some(Value::String(p)) = v.pointer_mut(&format!("/dataset/{class}/path")) {
            let path = Path::new(p.as_str());
            if path.is_relative() {
                *p = dir.join(path).to_string_lossy().into_owned();
            }
        }
    }
}

/// Inputs to config assembly, in increasing precedence.
#[derive(Debug, Clone, Default)]
pub struct ConfigSources {
    pub task: Option<Task>,
    pub file: Option<PathBuf>,
    pub overrides: Vec<(String, String)>,
    pub output_dir: Option<PathBuf>,
}

pub fn assemble(src: &ConfigSources) -> RunResult<ExperimentConfig> {
    let file_value = match &src.file {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| RunError::io(path, e))?;
            let mut v: Value = serde_json::from_str(&text)?;
            if !v.is_object() {
                return Err(RunError::Config(format!(
                    "{}: top level must be an object",
                    path.display()
                )));
            }
            anchor_paths(&mut v, path.parent().unwrap_or(Path::new(".")));
            Some(v)
        }
        None => None,
    };
    let task = match (src.task, file_value.as_ref().and_then(|v| v.get("task"))) {
        (Some(t), _) => t,
        (None, Some(t)) => serde_json::from_value(t.clone())?,
        (None, None) => return Err(RunError::Config("no task given (use --task or a \"task\" key)".into())),
    };
    let mut value = preset(task);
    if let Some(v) = file_value {
        merge(&mut value, v);
    }
    value["task"] = serde_json::to_value(task)?;
    for (k, v) in &src.overrides {
        set_path(&mut value, k, v)?;
    }
    if let Some(dir) = &src.output_dir {
        value["output_dir"] = Value::String(dir.to_string_lossy().into_owned());
    }
    let cfg: ExperimentConfig = serde_json::from_value(value)?;
    cfg.validate()?;
    Ok(cfg)
}

fn bad(msg: impl Into<String>) -> RunError {
    RunError::Config(msg.into())
}

impl ExperimentConfig {
    /// Preset expansion with no file and no overrides.
    pub fn from_preset(task: Task) -> RunResult<Self> {
        Ok(serde_json::from_value(preset(task))?)
    }

    pub fn validate(&self) -> RunResult<()> {
        let finite = |v: f64, what: &str| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(bad(format!("{what} must be finite")))
            }
        };
        finite(self.tau, "tau")?;
        if self.tau < 0.0 {
            return Err(bad("tau must be non-negative"));
        }
        finite(self.lambda, "lambda")?;
        if self.lambda <= 0.0 {
            return Err(bad("lambda must be positive"));
        }
        finite(self.delta, "delta")?;
        if !(self.delta > 0.0 && self.delta <= 1.0) {
            return Err(bad("delta must lie in (0, 1]"));
        }
        for (v, what) in [(self.attention.g1, "attention.g1"), (self.attention.g2, "attention.g2")] {
            finite(v, what)?;
            if v < 0.0 {
                return Err(bad(format!("{what} must be non-negative")));
            }
        }
        match &self.reservoir {
            ReservoirConfig::Goe { sigma, seed, .. } => {
                finite(*sigma, "reservoir.sigma")?;
                if *sigma < 0.0 {
                    return Err(bad("reservoir.sigma must be non-negative"));
                }
                if seed.is_none() {
                    return Err(bad(
                        "reservoir.seed is required for a GOE reservoir (e.g. --goe-seed 1)",
                    ));
                }
            }
            ReservoirConfig::Ising { j, b_z, b_x } => {
                for (v, what) in [(*j, "reservoir.j"), (*b_z, "reservoir.b_z"), (*b_x, "reservoir.b_x")] {
                    finite(v, what)?;
                }
            }
        }
        let d = &self.dataset;
        finite(d.t_plus, "dataset.t_plus")?;
        finite(d.t_minus, "dataset.t_minus")?;
        if d.t_plus == d.t_minus {
            return Err(bad("dataset.t_plus and dataset.t_minus must differ"));
        }
        if d.n_train == 0 {
            return Err(bad("dataset.n_train must be at least 1"));
        }
        if d.word_length < 2 {
            return Err(bad("dataset.word_length must be at least 2"));
        }
        if self.histogram_bins == 0 {
            return Err(bad("histogram_bins must be at least 1"));
        }
        self.alphabet.build()?;
        Ok(())
    }

    pub fn goe_seed(&self) -> Option<u64> {
        match self.reservoir {
            ReservoirConfig::Goe { seed, .. } => seed,
            ReservoirConfig::Ising { .. } => None,
        }
    }

    /// Copy with the selected seeds shifted by `offset`.
    pub fn offset_seeds(&self, axis: SeedAxis, offset: u64) -> Self {
        let mut c = self.clone();
        if axis != SeedAxis::Split {
            if let ReservoirConfig::Goe { seed: Some(s), .. } = &mut c.reservoir {
                *s = s.wrapping_add(offset);
            }
        }
        if axis != SeedAxis::Goe {
            c.dataset.split_seed = c.dataset.split_seed.wrapping_add(offset);
        }
        c
    }

    pub fn with_attention_off(&self) -> Self {
        let mut c = self.clone();
        c.attention.g1 = 0.0;
        c.attention.g2 = 0.0;
        c
    }

    /// Echo written to `config.json`.
    pub fn to_pretty_json(&self) -> RunResult<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
