//! Values from a `--config` JSON file. Explicit flags and `WARPWATCH_*`
//! variables (both resolved by clap) take precedence over anything here.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::args::{CountArg, OutputKind};
use crate::error::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub subs: Option<PathBuf>,
    pub edl: Option<PathBuf>,
    pub subs_dir: Option<PathBuf>,
    pub duration_manifest: Option<PathBuf>,
    pub duration_ms: Option<u64>,
    pub sm: Option<f64>,
    pub ss: Option<f64>,
    pub reading_rate: Option<f64>,
    pub target_duration_ms: Option<u64>,
    pub sm_max: Option<f64>,
    pub min_speed: Option<f64>,
    pub max_speed: Option<f64>,
    pub gap_merge_ms: Option<u64>,
    pub count_mode: Option<CountArg>,
    pub center: Option<bool>,
    pub fade: Option<bool>,
    pub fade_alpha: Option<u32>,
    pub fade_max_ms: Option<u64>,
    pub emit: Option<Vec<OutputKind>>,
    pub out_dir: Option<PathBuf>,
}

impl FileConfig {
    /// Relative paths inside the file are taken relative to the file itself.
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut cfg: FileConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Config { path: path.to_path_buf(), message: e.to_string() })?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [&mut cfg.subs, &mut cfg.edl, &mut cfg.subs_dir, &mut cfg.duration_manifest, &mut cfg.out_dir]
            .into_iter()
            .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }
}
