//! Run configuration: a TOML file merged under command-line flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use curvboot::ModelSpec;
use serde::Deserialize;

use crate::CliError;

pub const DEFAULT_CONTROLS: [&str; 3] = ["absenteeism", "mean_age", "region"];
pub const DEFAULT_SPAGHETTI: usize = 5;

/// Keys accepted in a config file. Every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub data: Option<PathBuf>,
    pub response: Option<String>,
    pub focal: Option<String>,
    pub quadratic: Option<bool>,
    pub controls: Option<Vec<String>>,
    #[serde(default)]
    pub reference: BTreeMap<String, f64>,
    pub resamples: Option<usize>,
    pub seed: Option<u64>,
    pub level: Option<f64>,
    pub grid: Option<usize>,
    pub grid_range: Option<[f64; 2]>,
    pub allow_extrapolation: Option<bool>,
    pub skip_budget: Option<f64>,
    pub spaghetti: Option<usize>,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Vec<String>>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })?;
        Self::parse(&text).map_err(|reason| CliError::Config {
            path: path.to_path_buf(),
            reason,
        })
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Format {
    Json,
    Csv,
    Md,
    Svg,
}

impl Format {
    pub const ALL: [Format; 4] = [Format::Json, Format::Csv, Format::Md, Format::Svg];

    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "md" => Ok(Format::Md),
            "svg" => Ok(Format::Svg),
            other => Err(CliError::Usage(format!("unknown output format `{other}` (expected json, csv, md, svg)"))),
        }
    }
}

/// Fully resolved settings for one command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub data: Option<PathBuf>,
    pub spec: ModelSpec,
    pub resamples: usize,
    pub seed: u64,
    pub level: f64,
    pub grid_points: usize,
    pub grid_range: Option<(f64, f64)>,
    pub allow_extrapolation: bool,
    pub skip_budget: f64,
    pub spaghetti: usize,
    pub threads: Option<usize>,
    pub out: PathBuf,
    pub formats: Vec<Format>,
}

impl RunConfig {
    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }

    pub fn data_path(&self) -> Result<&Path, CliError> {
        self.data
            .as_deref()
            .ok_or_else(|| CliError::Usage("no data file given (use --data or `data` in the config)".into()))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.resamples < 1 {
            return Err(CliError::Usage("--resamples must be at least 1".into()));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(CliError::Usage(format!("--level {} outside (0, 1)", self.level)));
        }
        if self.grid_points < 1 {
            return Err(CliError::Usage("--grid must be at least 1".into()));
        }
        if let Some((lo, hi)) = self.grid_range {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(CliError::Usage(format!("--grid-range needs lo < hi, got {lo},{hi}")));
            }
        }
        if !(0.0..1.0).contains(&self.skip_budget) {
            return Err(CliError::Usage(format!("--skip-budget {} outside [0, 1)", self.skip_budget)));
        }
        if self.threads == Some(0) {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        self.spec.validate().map_err(CliError::Core)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_key() {
        let cfg = FileConfig::parse(
            r#"
data = "offices.csv"
response = "performance"
focal = "turnover"
quadratic = true
controls = ["absenteeism", "region"]
resamples = 500
seed = 7
level = 0.9
grid = 50
grid_range = [2.0, 20.0]
allow_extrapolation = true
skip_budget = 0.02
spaghetti = 3
threads = 2
out = "results"
format = ["json", "svg"]

[reference]
region = 2
absenteeism = 3.8
"#,
        )
        .unwrap();
        assert_eq!(cfg.quadratic, Some(true));
        assert_eq!(cfg.grid_range, Some([2.0, 20.0]));
        assert_eq!(cfg.reference["region"], 2.0);
        assert_eq!(cfg.format.as_deref(), Some(&["json".to_string(), "svg".to_string()][..]));
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(FileConfig::parse("resample = 10").is_err());
        assert!(FileConfig::parse("seed = \"x\"").is_err());
    }

    #[test]
    fn empty_file_is_all_defaults() {
        assert_eq!(FileConfig::parse("").unwrap(), FileConfig::default());
    }
}
