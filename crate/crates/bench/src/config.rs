//! Experiment configuration.
//!
//! A run is described by one JSON file:
//!
//! ```json
//! {
//!   "datasets": [{ "name": "facebook", "path": "data/facebook.txt" }],
//!   "methods": ["multilevel", "slashburn", "random"],
//!   "block_widths": [512, 1024],
//!   "seed": 1,
//!   "slashburn_k": 0.005,
//!   "output": "results.csv"
//! }
//! ```
//!
//! Relative paths resolve against the directory holding the config file.
//! A dataset may omit `path` when a `manifest` maps its name to a file.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use commpress::community::Method;
use commpress::io::load_manifest;

use crate::error::{BenchError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

/// A detector followed by the naive community ordering, or a stand-alone
/// ordering strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum BenchMethod {
    Community(Method),
    SlashBurn,
    Random,
    Identity,
}

impl BenchMethod {
    pub fn name(self) -> &'static str {
        match self {
            BenchMethod::Community(m) => m.name(),
            BenchMethod::SlashBurn => "slashburn",
            BenchMethod::Random => "random",
            BenchMethod::Identity => "identity",
        }
    }
}

impl fmt::Display for BenchMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BenchMethod {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "slashburn" => Ok(BenchMethod::SlashBurn),
            "random" => Ok(BenchMethod::Random),
            "identity" => Ok(BenchMethod::Identity),
            _ => s
                .parse::<Method>()
                .map(BenchMethod::Community)
                .map_err(|_| BenchError::config(format!("unknown method {s:?}"))),
        }
    }
}

impl TryFrom<String> for BenchMethod {
    type Error = BenchError;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<BenchMethod> for String {
    fn from(m: BenchMethod) -> String {
        m.name().to_owned()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub datasets: Vec<DatasetSpec>,
    /// JSON object of dataset name to edge-list path.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<PathBuf>,
    pub methods: Vec<BenchMethod>,
    pub block_widths: Vec<usize>,
    #[serde(default)]
    pub seed: u64,
    /// Hubs removed per SlashBurn iteration: a count, or a fraction of `n`
    /// when below 1. Defaults to `⌈0.005·n⌉`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slashburn_k: Option<f64>,
    pub output: PathBuf,
    /// Optional JSON copy of the rows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub json_output: Option<PathBuf>,
    #[serde(default = "default_jobs")]
    pub jobs: usize,
    /// Fill the wall-clock columns. Off by default so output is byte-stable.
    #[serde(default)]
    pub timings: bool,
}

fn default_jobs() -> usize {
    1
}

/// A dataset with its edge-list file resolved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedDataset {
    pub name: String,
    pub path: PathBuf,
}

impl ExperimentConfig {
    /// Reads and validates a config file, resolving relative paths against
    /// its directory.
    pub fn load(path: &Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| BenchError::config(format!("cannot read config {}: {e}", path.display())))?;
        let mut config: ExperimentConfig = serde_json::from_str(&text)
            .map_err(|e| BenchError::config(format!("invalid config {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        config.rebase(base);
        config.validate()?;
        Ok(config)
    }

    fn rebase(&mut self, base: &Path) {
        let join = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        for d in &mut self.datasets {
            if let Some(p) = d.path.as_mut() {
                join(p);
            }
        }
        if let Some(p) = self.manifest.as_mut() {
            join(p);
        }
        join(&mut self.output);
        if let Some(p) = self.json_output.as_mut() {
            join(p);
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.datasets.is_empty() {
            return Err(BenchError::config("no datasets"));
        }
        if self.methods.is_empty() {
            return Err(BenchError::config("no methods"));
        }
        if self.block_widths.is_empty() {
            return Err(BenchError::config("no block widths"));
        }
        if self.block_widths.contains(&0) {
            return Err(BenchError::config("block widths must be at least 1"));
        }
        if self.jobs == 0 {
            return Err(BenchError::config("jobs must be at least 1"));
        }
        if let Some(k) = self.slashburn_k {
            if k.is_nan() || k <= 0.0 || k.is_infinite() {
                return Err(BenchError::config(format!("slashburn_k must be positive, got {k}")));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for d in &self.datasets {
            if !seen.insert(&d.name) {
                return Err(BenchError::config(format!("dataset {:?} listed twice", d.name)));
            }
        }
        let mut seen = std::collections::HashSet::new();
        for m in &self.methods {
            if !seen.insert(m) {
                return Err(BenchError::config(format!("method {m} listed twice")));
            }
        }
        Ok(())
    }

    /// Pairs each dataset with its file, consulting the manifest for entries
    /// without a `path`.
    pub fn resolve_datasets(&self) -> Result<Vec<ResolvedDataset>> {
        let manifest = match &self.manifest {
            Some(p) => {
                Some(load_manifest(p).map_err(|e| BenchError::config(format!("manifest {}: {e}", p.display())))?)
            }
            None => None,
        };
        self.datasets
            .iter()
            .map(|d| {
                let path = match (&d.path, &manifest) {
                    (Some(p), _) => p.clone(),
                    (None, Some(m)) => m
                        .get(&d.name)
                        .cloned()
                        .ok_or_else(|| BenchError::config(format!("dataset {:?} not in manifest", d.name)))?,
                    (None, None) => {
                        return Err(BenchError::config(format!(
                            "dataset {:?} has no path and no manifest",
                            d.name
                        )))
                    }
                };
                Ok(ResolvedDataset {
                    name: d.name.clone(),
                    path,
                })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(json: &str) -> Result<ExperimentConfig> {
        let c: ExperimentConfig = serde_json::from_str(json).map_err(|e| BenchError::config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    #[test]
    fn parses_minimal_config() {
        let c = parse(r#"{"datasets":[{"name":"a","path":"a.txt"}],"methods":["identity","multilevel"],"block_widths":[2],"output":"o.csv"}"#)
            .unwrap();
        assert_eq!(
            c.methods,
            vec![BenchMethod::Identity, BenchMethod::Community(Method::MultiLevel)]
        );
        assert_eq!(c.seed, 0);
        assert_eq!(c.jobs, 1);
        assert!(!c.timings);
    }

    #[test]
    fn rejects_bad_configs() {
        let base = r#""datasets":[{"name":"a","path":"a.txt"}],"output":"o.csv""#;
        for body in [
            r#""methods":[],"block_widths":[2]"#,
            r#""methods":["identity"],"block_widths":[]"#,
            r#""methods":["identity"],"block_widths":[0]"#,
            r#""methods":["pagerank"],"block_widths":[2]"#,
            r#""methods":["identity","identity"],"block_widths":[2]"#,
            r#""methods":["identity"],"block_widths":[2],"slashburn_k":0"#,
            r#""methods":["identity"],"block_widths":[2],"colour":1"#,
        ] {
            let err = parse(&format!("{{{base},{body}}}")).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{body}: {err}");
        }
        let err = parse(r#"{"datasets":[],"methods":["identity"],"block_widths":[2],"output":"o.csv"}"#).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn relative_paths_follow_config_dir() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("m.json"), r#"{"b": "graphs/b.txt"}"#).unwrap();
        let cfg = dir.path().join("run.json");
        std::fs::write(
            &cfg,
            r#"{"datasets":[{"name":"a","path":"a.txt"},{"name":"b"}],"manifest":"m.json","methods":["random"],"block_widths":[4],"output":"out/r.csv"}"#,
        )
        .unwrap();
        let c = ExperimentConfig::load(&cfg).unwrap();
        assert_eq!(c.output, dir.path().join("out/r.csv"));
        let ds = c.resolve_datasets().unwrap();
        assert_eq!(ds[0].path, dir.path().join("a.txt"));
        assert_eq!(ds[1].path, dir.path().join("graphs/b.txt"));
    }

    #[test]
    fn unreadable_config_is_a_config_error() {
        let err = ExperimentConfig::load(Path::new("/nonexistent/run.json")).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn method_names_round_trip() {
        for name in [
            "labelprop",
            "multilevel",
            "fastgreedy",
            "leadingeigen",
            "infomap",
            "slashburn",
            "random",
            "identity",
        ] {
            assert_eq!(name.parse::<BenchMethod>().unwrap().name(), name);
        }
    }
}
