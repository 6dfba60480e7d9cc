//! Run configuration: one flat key-value document per run.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub command: String,
    pub stages: u64,
    pub witness_bound: u64,
    pub generator_bound: usize,
    pub precision: i64,
    pub indices: usize,
    pub k_bound: usize,
    pub seed: u64,
    /// Where artifacts go. Not written back, so runs into different
    /// directories stay byte-identical.
    #[serde(skip)]
    pub out: PathBuf,
    /// Command inputs (structure names, stream literals, file paths).
    #[serde(flatten)]
    pub inputs: BTreeMap<String, String>,
}

/// Values read from flags or a config file; unset entries fall back to the
/// command defaults.
#[derive(Debug, Clone, Default, Deserialize)]
pub struct Overrides {
    pub command: Option<String>,
    pub stages: Option<u64>,
    pub witness_bound: Option<u64>,
    pub generator_bound: Option<usize>,
    pub precision: Option<i64>,
    pub indices: Option<usize>,
    pub k_bound: Option<usize>,
    pub seed: Option<u64>,
    #[serde(flatten)]
    pub inputs: BTreeMap<String, toml::Value>,
}

impl Overrides {
    pub fn read(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    /// Flag values win over `self`.
    pub fn merge(mut self, o: Overrides) -> Self {
        self.command = o.command.or(self.command);
        self.stages = o.stages.or(self.stages);
        self.witness_bound = o.witness_bound.or(self.witness_bound);
        self.generator_bound = o.generator_bound.or(self.generator_bound);
        self.precision = o.precision.or(self.precision);
        self.indices = o.indices.or(self.indices);
        self.k_bound = o.k_bound.or(self.k_bound);
        self.seed = o.seed.or(self.seed);
        self.inputs.extend(o.inputs);
        self
    }
}

fn default_stages(command: &str) -> u64 {
    match command {
        "scott" => effred::scott::DISCRIMINATION_STAGE,
        "reduce-sigma3" => 20_000,
        "g2f" | "rootset" => 3000,
        "henselize" | "transcend" => 200,
        _ => 2000,
    }
}

/// Exponent cap for profiles read off committed prefixes: an entry at the
/// cap counts as infinite, so it has to be reachable within the default
/// stage budget.
fn default_precision(command: &str) -> i64 {
    match command {
        "compare" | "g2f" => 3,
        _ => 8,
    }
}

impl ExperimentConfig {
    pub fn resolve(o: Overrides, out: PathBuf) -> Result<Self, CliError> {
        let command = o
            .command
            .ok_or_else(|| CliError::Usage("no command".into()))?;
        let (w, g) = effred::scott::DISCRIMINATION_BOUNDS;
        let mut inputs = BTreeMap::new();
        for (k, v) in o.inputs {
            let s = match v {
                toml::Value::String(s) => s,
                other => other.to_string(),
            };
            inputs.insert(k, s);
        }
        let c = ExperimentConfig {
            stages: o.stages.unwrap_or_else(|| default_stages(&command)),
            witness_bound: o.witness_bound.unwrap_or(w),
            generator_bound: o.generator_bound.unwrap_or(g),
            precision: o.precision.unwrap_or_else(|| default_precision(&command)),
            indices: o.indices.unwrap_or(8),
            k_bound: o.k_bound.unwrap_or(6),
            seed: o.seed.unwrap_or(0),
            command,
            out,
            inputs,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let zero = [
            ("stages", self.stages == 0),
            ("witness-bound", self.witness_bound == 0),
            ("generator-bound", self.generator_bound == 0),
            ("precision", self.precision <= 0),
            ("indices", self.indices == 0),
            ("k-bound", self.k_bound == 0),
        ];
        match zero.iter().find(|z| z.1) {
            Some((name, _)) => Err(CliError::Usage(format!("--{name} must be positive"))),
            None => Ok(()),
        }
    }

    pub fn input(&self, key: &str) -> Option<&str> {
        self.inputs.get(key).map(String::as_str)
    }

    pub fn require(&self, key: &str) -> Result<&str, CliError> {
        self.input(key)
            .ok_or_else(|| CliError::Usage(format!("{} needs --{key}", self.command)))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("flat config serializes")
    }
}
