use std::path::Path;

use rab_core::config::ConfigError;
use serde::Serialize;
use serde_json::Value;

use crate::job::{JobArgs, JobKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// Field order is fixed by the struct; `details` maps are key-sorted.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub job: JobKind,
    pub input: JobArgs,
    pub verdict: Verdict,
    pub summary: String,
    pub details: Value,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    /// Writes the report to `--out` (echoing the summary) or to stdout.
    pub fn emit(&self, out: Option<&Path>) -> Result<(), ConfigError> {
        match out {
            Some(p) => {
                std::fs::write(p, self.to_json()).map_err(|e| ConfigError::new("out", format!("{}: {e}", p.display())))?;
                println!("{}: {}", self.verdict_word(), self.summary);
            }
            None => print!("{}", self.to_json()),
        }
        Ok(())
    }

    fn verdict_word(&self) -> &'static str {
        match self.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        }
    }
}

pub fn write_dot(path: &Path, text: &str) -> Result<(), ConfigError> {
    std::fs::write(path, text).map_err(|e| ConfigError::new("dot", format!("{}: {e}", path.display())))
}
