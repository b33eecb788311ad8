//! Batch front end for `isospec`: one JSON job in, one report out.
//!
//! ```text
//! {"command": "bands", "k": 1, "qhat": [1.4142135623730951]}
//! ```
//!
//! Potentials are given as `values` (a full period), `k` + `qhat`
//! (Fourier coordinates of an odd potential) or `k` + `free`
//! (`q_1..q_k` of an odd potential). See `docs/job.md` for every field.

pub mod job;
pub mod report;
pub mod run;

use job::{JobDocument, Options};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// The job document or flags could not be understood.
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Domain(#[from] isospec::Error),
    #[error("could not write output: {0}")]
    Output(String),
}

impl CliError {
    /// 1 for failures of the computation itself, 2 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) | CliError::Output(_) => 1,
            CliError::Malformed(_) => 2,
        }
    }
}

/// Parses, validates and runs a job document.
pub fn execute(text: &str, flags: Options) -> Result<String, CliError> {
    let spec = JobDocument::parse(text)?.validate(flags)?;
    run::run(&spec)
}
