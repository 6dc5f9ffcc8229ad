#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use eqcm::config::{assemble, ConfigSources, SourceConfig, Task};
use eqcm::ExperimentConfig;

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

/// Preset with the bundled word lists and, for GOE tasks, an explicit seed.
pub fn preset(task: Task, goe_seed: u64) -> ExperimentConfig {
    let mut overrides = Vec::new();
    if matches!(task, Task::Task1 | Task::Task2 | Task::Custom) {
        overrides.push(("reservoir.seed".to_string(), goe_seed.to_string()));
    }
    let mut cfg = assemble(&ConfigSources {
        task: Some(task),
        overrides,
        ..Default::default()
    })
    .unwrap();
    for src in [&mut cfg.dataset.positive, &mut cfg.dataset.negative] {
        if let SourceConfig::File { path, .. } = src {
            *path = data_dir().join(path.file_name().unwrap());
        }
    }
    cfg
}

/// Every file of a directory, sorted by name, except `skip`.
pub fn read_dir_files(dir: &Path, skip: &[&str]) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.is_file())
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read(&p).unwrap(),
            )
        })
        .filter(|(n, _)| !skip.contains(&n.as_str()))
        .collect();
    out.sort();
    out
}
