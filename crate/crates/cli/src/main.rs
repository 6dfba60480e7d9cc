use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod output;
mod relation;
mod specs;

use config::{ExperimentConfig, Overrides};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("corrupt input: {0}")]
    Corrupt(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Corrupt(_) => 3,
            CliError::Failed(_) => 1,
        }
    }
}

impl From<effred::diagrams::DiagramError> for CliError {
    fn from(e: effred::diagrams::DiagramError) -> Self {
        CliError::Failed(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failed(e.to_string())
    }
}

/// Runs the constructions of the effred library and writes their diagrams
/// and reports.
#[derive(Parser, Debug)]
#[command(name = "effred", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Stage budget.
    #[arg(long, global = true)]
    stages: Option<u64>,
    /// Quantifier range for bounded sentence evaluation.
    #[arg(long, global = true)]
    witness_bound: Option<u64>,
    /// Children expanded per countable connective; also the prime window of
    /// bounded isomorphism checks.
    #[arg(long, global = true)]
    generator_bound: Option<usize>,
    /// Series precision, and the exponent cap of root and type profiles.
    #[arg(long, global = true)]
    precision: Option<i64>,
    /// Number of groups (reduce-sigma3) or polynomials per window (rootset).
    #[arg(long, global = true)]
    indices: Option<usize>,
    /// Triples m < n < indices use k below this.
    #[arg(long, global = true)]
    k_bound: Option<usize>,
    /// Seed for permuted copies and sampled audits.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory. Defaults to $EFFRED_OUT/<command>.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Flat TOML config; flags override its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Build the Scott sentence of a corpus structure and evaluate it on others.
    Scott {
        #[arg(long)]
        structure: Option<String>,
        /// Comma-separated corpus names; defaults to all of the same kind.
        #[arg(long)]
        against: Option<String>,
    },
    /// Group to field functor on a group and a permuted copy.
    G2f {
        /// Rank-1 type such as `2:inf` or `rank:2`.
        #[arg(long)]
        group: Option<String>,
    },
    /// Henselization of F(t).
    Henselize {
        /// `cyclo:N` or `radical:p,q,...`.
        #[arg(long)]
        field: Option<String>,
    },
    /// Pure transcendental extension F(t).
    Transcend {
        #[arg(long)]
        field: Option<String>,
    },
    /// Reduce a Sigma3 relation on a stream family to rank-1 groups.
    #[command(name = "reduce-sigma3")]
    ReduceSigma3 {
        /// e0, const-true, const-false or custom.
        #[arg(long)]
        relation: Option<String>,
        /// Matrix for `custom`, e.g. `y <= x || a(y) == b(y)`.
        #[arg(long)]
        program: Option<String>,
        /// One `prefix|cycle` stream per line; defaults to the built-in sample.
        #[arg(long)]
        oracles: Option<String>,
    },
    /// Rank-1 group of a binary stream; with --other, compare two streams.
    E0 {
        #[arg(long)]
        stream: Option<String>,
        #[arg(long)]
        other: Option<String>,
    },
    /// Rank-1 group coding cofiniteness of a set.
    Cof {
        /// all, empty, finite:.., cofinite:.., multiples:k
        #[arg(long)]
        set: Option<String>,
    },
    /// Cyclotomic field coding infiniteness of a set.
    InfField {
        #[arg(long)]
        set: Option<String>,
    },
    /// Root set of a field presentation.
    Rootset {
        /// Field spec, optionally with `@seed` for a permuted copy.
        #[arg(long)]
        field: Option<String>,
    },
    /// Check a JSONL diagram.
    Audit {
        #[arg(long)]
        file: Option<String>,
        /// group or field; read from the symbols when absent.
        #[arg(long)]
        signature: Option<String>,
    },
    /// Bounded isomorphism check of two groups or two cyclotomic fields.
    Compare {
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        b: Option<String>,
    },
}

impl Cmd {
    fn name_and_inputs(self) -> (&'static str, Vec<(&'static str, Option<String>)>) {
        match self {
            Cmd::Scott { structure, against } => (
                "scott",
                vec![("structure", structure), ("against", against)],
            ),
            Cmd::G2f { group } => ("g2f", vec![("group", group)]),
            Cmd::Henselize { field } => ("henselize", vec![("field", field)]),
            Cmd::Transcend { field } => ("transcend", vec![("field", field)]),
            Cmd::ReduceSigma3 {
                relation,
                program,
                oracles,
            } => (
                "reduce-sigma3",
                vec![
                    ("relation", relation),
                    ("program", program),
                    ("oracles", oracles),
                ],
            ),
            Cmd::E0 { stream, other } => ("e0", vec![("stream", stream), ("other", other)]),
            Cmd::Cof { set } => ("cof", vec![("set", set)]),
            Cmd::InfField { set } => ("inf-field", vec![("set", set)]),
            Cmd::Rootset { field } => ("rootset", vec![("field", field)]),
            Cmd::Audit { file, signature } => {
                ("audit", vec![("file", file), ("signature", signature)])
            }
            Cmd::Compare { a, b } => ("compare", vec![("a", a), ("b", b)]),
        }
    }
}

fn configure(cli: Cli) -> Result<ExperimentConfig, CliError> {
    let (name, inputs) = cli.cmd.name_and_inputs();
    let base = match &cli.config {
        Some(p) => Overrides::read(p)?,
        None => Overrides::default(),
    };
    if base.command.as_deref().is_some_and(|c| c != name) {
        return Err(CliError::Usage(format!(
            "config is for {}, not {name}",
            base.command.unwrap_or_default()
        )));
    }
    let mut flags = Overrides {
        command: Some(name.to_string()),
        stages: cli.stages,
        witness_bound: cli.witness_bound,
        generator_bound: cli.generator_bound,
        precision: cli.precision,
        indices: cli.indices,
        k_bound: cli.k_bound,
        seed: cli.seed,
        ..Default::default()
    };
    for (k, v) in inputs {
        if let Some(v) = v {
            flags.inputs.insert(k.to_string(), toml::Value::String(v));
        }
    }
    let out = match cli.out {
        Some(p) => p,
        None => std::env::var_os("EFFRED_OUT")
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("effred-out"))
            .join(name),
    };
    ExperimentConfig::resolve(base.merge(flags), out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match configure(cli).and_then(|c| commands::run(&c)) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("effred: {e}");
            ExitCode::from(e.code())
        }
    }
}
