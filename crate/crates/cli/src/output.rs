//! Artifact directory: files, warnings and the summary report.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use effred::diagrams::{DiagramError, Emitter};
use serde::Serialize;
use serde_json::Value;

use crate::config::ExperimentConfig;
use crate::CliError;

pub struct Run {
    dir: PathBuf,
    artifacts: Vec<String>,
    warnings: Vec<String>,
    results: BTreeMap<String, Value>,
    failed: Option<CliError>,
}

impl Run {
    pub fn new(c: &ExperimentConfig) -> Result<Self, CliError> {
        fs::create_dir_all(&c.out)?;
        Ok(Run {
            dir: c.out.clone(),
            artifacts: Vec::new(),
            warnings: Vec::new(),
            results: BTreeMap::new(),
            failed: None,
        })
    }

    pub fn text(&mut self, name: &str, body: &str) -> Result<(), CliError> {
        fs::write(self.dir.join(name), body)?;
        self.artifacts.push(name.to_string());
        Ok(())
    }

    pub fn json(&mut self, name: &str, v: &impl Serialize) -> Result<(), CliError> {
        let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Failed(e.to_string()))?;
        s.push('\n');
        self.text(name, &s)
    }

    /// Finish writing artifacts, then exit with `e`.
    pub fn fail(&mut self, e: CliError) {
        self.failed.get_or_insert(e);
    }

    pub fn warn(&mut self, w: String) {
        self.warnings.push(w);
    }

    pub fn result(&mut self, key: &str, v: impl Serialize) {
        self.results.insert(
            key.to_string(),
            serde_json::to_value(v).expect("serializable"),
        );
    }

    /// Run `e` to `stages`. Budget exhaustion stops early with a warning;
    /// returns the stage reached.
    pub fn drive(&mut self, what: &str, e: &mut dyn Emitter, stages: u64) -> Result<u64, CliError> {
        while e.stage() < stages {
            match e.step() {
                Ok(()) => {}
                Err(DiagramError::Budget(m)) => {
                    self.warn(format!(
                        "{what}: budget exhausted at stage {}: {m}",
                        e.stage()
                    ));
                    break;
                }
                Err(err) => return Err(err.into()),
            }
        }
        Ok(e.stage())
    }

    /// Write config.toml and summary.json; the summary is also returned for
    /// stdout.
    pub fn finish(mut self, c: &ExperimentConfig) -> Result<String, CliError> {
        self.text("config.toml", &c.to_toml())?;
        let mut artifacts = self.artifacts.clone();
        artifacts.push("summary.json".into());
        artifacts.sort();
        let status = match (&self.failed, self.warnings.is_empty()) {
            (Some(_), _) => "failed",
            (None, true) => "ok",
            (None, false) => "partial",
        };
        let summary = serde_json::json!({
            "command": c.command,
            "status": status,
            "results": self.results,
            "warnings": self.warnings,
            "artifacts": artifacts,
        });
        let mut s = serde_json::to_string_pretty(&summary).expect("serializable");
        s.push('\n');
        fs::write(self.dir.join("summary.json"), &s)?;
        match self.failed {
            Some(e) => Err(e),
            None => Ok(s),
        }
    }
}
