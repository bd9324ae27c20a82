//! Command surface: the JSON functor-spec format, one function per
//! subcommand, and the reports they produce.

mod commands;
mod format;

use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::diagramlimits::LimitError;
use crate::exactlin::LinAlgError;
use crate::functorcalc::FunctorError;
use crate::pointedsets::SetsError;
use crate::polyfunctors::PolyError;

pub use commands::{
    cmd_charp, cmd_counterexample, cmd_degree, cmd_derived, cmd_excisive, cmd_limit, cmd_paring, cmd_prim, cmd_random,
    cmd_reconstruct, cmd_sweep, cmd_sympoly, cmd_validate, load_spec, SweepOptions,
};
pub use format::{FunctorKind, FunctorSpecFile};

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("field `{path}`: {message}")]
    Field { path: String, message: String },
    #[error(transparent)]
    Functor(#[from] FunctorError),
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Limit(#[from] LimitError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Functor(#[from] FunctorError),
    #[error(transparent)]
    Linalg(#[from] LinAlgError),
    #[error(transparent)]
    Sets(#[from] SetsError),
    #[error("{0}")]
    Usage(String),
}

/// Outcome of one command. `holds` drives the exit code.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    /// The statement being exercised.
    pub claim: String,
    pub holds: bool,
    /// Short verdict, e.g. "comparison is an isomorphism".
    pub verdict: String,
    /// Human-readable lines.
    pub lines: Vec<String>,
    pub result: Value,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.holds {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "claim": self.claim,
            "holds": self.holds,
            "verdict": self.verdict,
            "result": self.result,
        })
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
        s.push('\n');
        s
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.command, self.claim)?;
        for line in &self.lines {
            writeln!(f, "  {line}")?;
        }
        write!(f, "verdict: {} ({})", self.verdict, if self.holds { "holds" } else { "fails" })
    }
}
