//! Text configuration files and the shared per-day configuration.

use std::fs;
use std::path::{Path, PathBuf};

use hansard_core::pipeline::DayConfig;
use hansard_core::question_time::QaHeuristics;
use hansard_core::segment::StageDirectionLexicon;

use crate::reference::{load_partyfacts, load_politicians, LoadReport, ReferenceError};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {detail}")]
    Invalid { path: PathBuf, detail: String },
    #[error(transparent)]
    Reference(#[from] ReferenceError),
    #[error("{0}")]
    Usage(String),
}

fn read(path: &Path) -> Result<String, ConfigError> {
    fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// One phrase per line; `#` comments and blank lines ignored.
pub fn load_stage_directions(path: &Path) -> Result<StageDirectionLexicon, ConfigError> {
    Ok(StageDirectionLexicon::parse(&read(path)?))
}

/// One rule per line: `Q>A phrase` or `A>Q phrase`.
pub fn load_qa_heuristics(path: &Path) -> Result<QaHeuristics, ConfigError> {
    QaHeuristics::parse(&read(path)?).map_err(|detail| ConfigError::Invalid {
        path: path.to_path_buf(),
        detail,
    })
}

#[derive(Debug, Clone, Default)]
pub struct ConfigPaths {
    pub politicians: Option<PathBuf>,
    pub partyfacts: Option<PathBuf>,
    pub stage_directions: Option<PathBuf>,
    pub qa_heuristics: Option<PathBuf>,
}

#[derive(Debug, Clone, Default)]
pub struct LoadedConfig {
    pub day: DayConfig,
    pub politicians_report: Option<LoadReport>,
    pub partyfacts_report: Option<LoadReport>,
}

/// Build the day configuration; anything not given keeps its default.
pub fn load_day_config(paths: &ConfigPaths) -> Result<LoadedConfig, ConfigError> {
    let mut out = LoadedConfig::default();
    if let Some(p) = &paths.politicians {
        let (registry, report) = load_politicians(p)?;
        out.day.registry = registry;
        out.politicians_report = Some(report);
    }
    if let Some(p) = &paths.partyfacts {
        let (map, report) = load_partyfacts(p)?;
        out.day.partyfacts = map;
        out.partyfacts_report = Some(report);
    }
    if let Some(p) = &paths.stage_directions {
        out.day.stage_directions = load_stage_directions(p)?;
    }
    if let Some(p) = &paths.qa_heuristics {
        out.day.qa_heuristics = load_qa_heuristics(p)?;
    }
    Ok(out)
}
