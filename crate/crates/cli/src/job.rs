use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use rab_core::config::{load_json, parse_json, ConfigError};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum JobKind {
    Build,
    Check,
    Walls,
    Holonomy,
    Witness,
    KillCocycle,
    KillHolonomy,
    Davis,
    KillLr,
}

impl fmt::Display for JobKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_possible_value().expect("no skipped variants");
        f.write_str(v.get_name())
    }
}

/// Flags shared by every job; a job file carries the same fields.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct JobArgs {
    /// Main input: presentation, complex, cover or Coxeter graph, by job.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Subgroup of the graph product (holonomy, witness, kill-holonomy).
    #[arg(long)]
    pub subgroup: Option<PathBuf>,
    /// Cocycle on the base complex (kill-cocycle).
    #[arg(long)]
    pub cocycle: Option<PathBuf>,
    /// Finite quotient maps (kill-holonomy) or a single quotient (davis, kill-lr).
    #[arg(long)]
    pub quotients: Option<PathBuf>,
    /// Local reflection system (kill-lr).
    #[arg(long)]
    pub system: Option<PathBuf>,
    #[arg(long)]
    pub radius: Option<usize>,
    #[arg(long)]
    pub cap: Option<usize>,
    /// Report destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// DOT export destination.
    #[arg(long)]
    pub dot: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Strict inequalities in the curvature conditions.
    #[arg(long)]
    pub strict: bool,
    /// Curvature condition: Q, C, C2 or C4.
    #[arg(long)]
    pub condition: Option<String>,
    /// Vertex whose link is exported (check).
    #[arg(long)]
    pub vertex: Option<String>,
    /// Wall index to export (walls).
    #[arg(long)]
    pub wall: Option<usize>,
    /// Use e-walls instead of walls.
    #[arg(long)]
    pub even: bool,
}

/// `{"job": "<kind>", ...JobArgs}`; relative paths resolve against the job file.
#[derive(Debug, Clone)]
pub struct JobConfig {
    pub job: JobKind,
    pub args: JobArgs,
}

impl JobConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let name = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::new(".", e).in_file(&name))?;
        let mut raw: serde_json::Map<String, serde_json::Value> = parse_json(&text).map_err(|e| e.in_file(&name))?;
        let job = raw.remove("job").ok_or_else(|| ConfigError::new("job", "missing").in_file(&name))?;
        let job: JobKind = parse_json(&job.to_string()).map_err(|e| ConfigError::new("job", e.message).in_file(&name))?;
        let known = serde_json::to_value(JobArgs::default()).expect("serializable");
        if let Some(k) = raw.keys().find(|k| !known.as_object().expect("object").contains_key(*k)) {
            return Err(ConfigError::new(k.clone(), "unknown field").in_file(&name));
        }
        let mut args: JobArgs = parse_json(&serde_json::Value::Object(raw).to_string()).map_err(|e| e.in_file(&name))?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [
            &mut args.config,
            &mut args.subgroup,
            &mut args.cocycle,
            &mut args.quotients,
            &mut args.system,
            &mut args.out,
            &mut args.dot,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(JobConfig { job, args })
    }
}

impl JobArgs {
    /// Path of a required input flag, checked to exist.
    pub fn input(&self, field: &str, p: &Option<PathBuf>) -> Result<PathBuf, ConfigError> {
        let p = p.as_ref().ok_or_else(|| ConfigError::new(field, "required"))?;
        if !p.is_file() {
            return Err(ConfigError::new(field, format!("no such file {}", p.display())));
        }
        Ok(p.clone())
    }

    pub fn load<T: DeserializeOwned>(&self, field: &str, p: &Option<PathBuf>) -> Result<(PathBuf, T), ConfigError> {
        let path = self.input(field, p)?;
        let v = load_json(&path)?;
        Ok((path, v))
    }
}
