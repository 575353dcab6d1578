//! `epsilon`: check proofs, evaluate sequents in finite models and verify
//! the doctrine laws.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use epsilon_core::semantics::DEFAULT_BUDGET;

#[derive(Debug, Parser)]
#[command(
    name = "epsilon",
    version,
    about = "Proof kernel and finite-set semantics for the typed epsilon calculus"
)]
struct Cli {
    /// Emit one JSON object per line instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and well-formedness-check theory, model and proof files.
    Check {
        /// Theory (or combined theory and model) file.
        #[arg(long)]
        theory: PathBuf,
        /// Proof scripts to parse against the theory.
        proofs: Vec<PathBuf>,
    },
    /// Run the proof checker on proof scripts.
    Verify {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long = "proof", required = true)]
        proofs: Vec<PathBuf>,
        /// `json` reports a verdict for every node.
        #[arg(long, value_parser = ["human", "json"])]
        report: Option<String>,
    },
    /// Decide whether a sequent holds in a model.
    Holds {
        #[command(flatten)]
        model: ModelArgs,
        /// A sequent such as `x:A | P(x) |- Q(x)`.
        #[arg(long)]
        sequent: String,
    },
    /// Check proofs, then evaluate every node in every small interpretation.
    Audit {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long = "proof", required = true)]
        proofs: Vec<PathBuf>,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Print the table of a term, typically an epsilon term, in a model.
    Epsilon {
        #[command(flatten)]
        model: ModelArgs,
        /// The term, e.g. `eps x:A. P(x)`.
        #[arg(long, alias = "term")]
        formula: String,
        /// Context the term lives in, e.g. `y:A`.
        #[arg(long, default_value = "")]
        context: String,
    },
    /// Verify the doctrine laws on all small instances.
    Laws {
        /// Largest carrier used by any law.
        #[arg(long, default_value_t = 5)]
        max_size: usize,
        /// Seed for the sampled regime above the exhaustive thresholds.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Samples per instance in the sampled regime.
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },
    /// Search for the first small interpretation refuting a sequent.
    Countermodel {
        #[arg(long)]
        theory: PathBuf,
        #[arg(long)]
        sequent: String,
        #[command(flatten)]
        bounds: Bounds,
    },
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Model file; may also contain the declarations it interprets.
    #[arg(long)]
    model: PathBuf,
    /// Theory file, when the model file holds assignments only.
    #[arg(long)]
    theory: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Args)]
struct Bounds {
    /// Largest carrier tried for each base type.
    #[arg(long, default_value_t = 3)]
    max_carrier: usize,
    /// Maximum number of interpretations to evaluate.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

/// Conditions that end a run early, each with its own exit status.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Parse(String),
    Input(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 64,
            Failure::Parse(_) => 65,
            Failure::Input(_) => 66,
        }
    }
}

/// How a completed run went.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Status {
    Ok = 0,
    Failed = 1,
    Truncated = 2,
}

impl Status {
    /// Failures outrank truncation.
    fn merge(self, other: Status) -> Status {
        match (self, other) {
            (Status::Failed, _) | (_, Status::Failed) => Status::Failed,
            (Status::Truncated, _) | (_, Status::Truncated) => Status::Truncated,
            _ => Status::Ok,
        }
    }
}

/// Writes each report line as soon as it is produced.
struct Out {
    json: bool,
    sink: std::io::StdoutLock<'static>,
}

impl Out {
    fn emit<T: Serialize>(&mut self, value: &T, human: impl FnOnce() -> String) {
        let line = if self.json {
            serde_json::to_string(value).expect("report values serialize")
        } else {
            human()
        };
        // a closed pipe is not worth a panic
        let _ = writeln!(self.sink, "{line}");
        let _ = self.sink.flush();
    }

    /// Human-only text, such as summaries.
    fn note(&mut self, text: impl FnOnce() -> String) {
        if !self.json {
            let _ = writeln!(self.sink, "{}", text());
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                Failure::Usage(String::new()).code()
            } else {
                0
            });
        }
    };
    let mut out = Out {
        json: cli.json,
        sink: std::io::stdout().lock(),
    };
    match commands::run(cli.command, &mut out) {
        Ok(status) => ExitCode::from(status as u8),
        Err(f) => {
            let msg = match &f {
                Failure::Usage(m) | Failure::Parse(m) | Failure::Input(m) => m,
            };
            eprintln!("epsilon: {msg}");
            ExitCode::from(f.code())
        }
    }
}
