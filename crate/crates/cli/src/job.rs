//! The JSON job document and its validation.

use isospec::asymptotics::{default_grid, geometric_grid};
use isospec::inverse::NewtonOptions;
use isospec::lyapunov::PhiVector;
use isospec::roots::DEFAULT_ROOT_TOL;
use isospec::{OddPotential, Potential};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Bands,
    Heights,
    Phi,
    Iso,
    Asymptotics,
    Verify,
    Oracle,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Bands => "bands",
            Command::Heights => "heights",
            Command::Phi => "phi",
            Command::Iso => "iso",
            Command::Asymptotics => "asymptotics",
            Command::Verify => "verify",
            Command::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Tolerances and output settings; every field is optional in the document.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    pub tol: Option<f64>,
    pub newton_tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub t_grid: Option<String>,
    pub format: Option<Format>,
}

impl Options {
    /// Fields set in `other` win.
    pub fn overridden_by(self, other: Options) -> Options {
        Options {
            tol: other.tol.or(self.tol),
            newton_tol: other.newton_tol.or(self.newton_tol),
            max_iter: other.max_iter.or(self.max_iter),
            t_grid: other.t_grid.or(self.t_grid),
            format: other.format.or(self.format),
        }
    }
}

/// The raw document, before cross-field checks.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobDocument {
    pub command: Command,
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub values: Option<Vec<f64>>,
    #[serde(default)]
    pub qhat: Option<Vec<f64>>,
    #[serde(default)]
    pub free: Option<Vec<f64>>,
    /// `Φ` to invert, for `iso` without a potential.
    #[serde(default)]
    pub target: Option<Vec<f64>>,
    #[serde(default)]
    pub options: Options,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSpec {
    Values(Vec<f64>),
    Qhat(Vec<f64>),
    Free(Vec<f64>),
}

impl PotentialSpec {
    /// Any zero-mean sequence.
    pub fn general(&self) -> Result<Potential, CliError> {
        match self {
            PotentialSpec::Values(v) => Ok(Potential::new(v.clone())?),
            _ => Ok(self.odd()?.potential().clone()),
        }
    }

    pub fn odd(&self) -> Result<OddPotential, CliError> {
        match self {
            PotentialSpec::Values(v) => Ok(OddPotential::from_values(v)?),
            PotentialSpec::Qhat(c) => Ok(OddPotential::from_coords(c)),
            PotentialSpec::Free(f) => Ok(OddPotential::from_free(f)),
        }
    }

    pub fn entries(&self) -> &[f64] {
        match self {
            PotentialSpec::Values(v) | PotentialSpec::Qhat(v) | PotentialSpec::Free(v) => v,
        }
    }

    pub fn is_values(&self) -> bool {
        matches!(self, PotentialSpec::Values(_))
    }
}

/// A validated job with resolved settings.
#[derive(Debug, Clone, PartialEq)]
pub struct JobSpec {
    pub command: Command,
    pub potential: Option<PotentialSpec>,
    pub target: Option<PhiVector>,
    pub root_tol: f64,
    pub newton: NewtonOptions,
    pub t_grid: Vec<f64>,
    pub format: Format,
}

fn malformed(msg: impl Into<String>) -> CliError {
    CliError::Malformed(msg.into())
}

/// `"a:b:n"`, `n` points from `a` down to `b`.
pub fn parse_t_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts[..] else {
        return Err(malformed(format!("t-grid must look like a:b:n, got {s:?}")));
    };
    let a: f64 = a
        .trim()
        .parse()
        .map_err(|_| malformed(format!("bad t-grid start {a:?}")))?;
    let b: f64 = b
        .trim()
        .parse()
        .map_err(|_| malformed(format!("bad t-grid end {b:?}")))?;
    let n: usize = n
        .trim()
        .parse()
        .map_err(|_| malformed(format!("bad t-grid count {n:?}")))?;
    geometric_grid(a, b, n)
        .map_err(|_| malformed(format!("t-grid {s:?} must decrease within (0, 0.3]")))
}

fn positive(name: &str, v: Option<f64>, default: f64) -> Result<f64, CliError> {
    match v {
        None => Ok(default),
        Some(x) if x.is_finite() && x > 0.0 => Ok(x),
        Some(x) => Err(malformed(format!("{name} must be positive, got {x}"))),
    }
}

impl JobDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| malformed(format!("invalid job document: {e}")))
    }

    /// Cross-field checks; `flags` override the document's options.
    pub fn validate(self, flags: Options) -> Result<JobSpec, CliError> {
        let opts = self.options.overridden_by(flags);
        let forms = [
            self.values.map(PotentialSpec::Values),
            self.qhat.map(PotentialSpec::Qhat),
            self.free.map(PotentialSpec::Free),
        ];
        let mut present: Vec<PotentialSpec> = forms.into_iter().flatten().collect();
        if present.len() > 1 {
            return Err(malformed("give exactly one of values, qhat, free"));
        }
        let potential = present.pop();
        match (&potential, self.k) {
            (Some(PotentialSpec::Values(v)), Some(k)) if v.len() != 2 * k => {
                return Err(malformed(format!(
                    "k = {k} needs {} values, got {}",
                    2 * k,
                    v.len()
                )));
            }
            (Some(PotentialSpec::Qhat(c) | PotentialSpec::Free(c)), Some(k)) if c.len() != k => {
                return Err(malformed(format!(
                    "k = {k} needs {k} components, got {}",
                    c.len()
                )));
            }
            (Some(PotentialSpec::Qhat(_) | PotentialSpec::Free(_)), None) => {
                return Err(malformed("qhat and free need k"));
            }
            (Some(PotentialSpec::Qhat(c) | PotentialSpec::Free(c)), _) if c.is_empty() => {
                return Err(malformed("k must be at least 1"));
            }
            _ => {}
        }
        if let Some(PotentialSpec::Values(v)) = &potential {
            if v.len() < 2 {
                return Err(malformed("values need at least two entries"));
            }
        }
        if potential
            .as_ref()
            .is_some_and(|p| p.entries().iter().any(|x| !x.is_finite()))
        {
            return Err(malformed("potential entries must be finite"));
        }

        let target = match self.target {
            Some(_) if self.command != Command::Iso => {
                return Err(malformed("target is only used by iso"));
            }
            Some(t) => {
                if potential.is_some() {
                    return Err(malformed(
                        "iso takes either a potential or a target, not both",
                    ));
                }
                if t.is_empty() || t.iter().any(|x| !x.is_finite()) {
                    return Err(malformed(
                        "target must be a non-empty list of finite numbers",
                    ));
                }
                if self.k.is_some_and(|k| k != t.len()) {
                    return Err(malformed("k does not match the target length"));
                }
                Some(PhiVector(t))
            }
            None => None,
        };
        if potential.is_none() && target.is_none() && self.command != Command::Verify {
            return Err(malformed(format!(
                "{} needs a potential",
                self.command.name()
            )));
        }

        let defaults = NewtonOptions::default();
        let newton = NewtonOptions {
            tol_residual: positive("newton-tol", opts.newton_tol, defaults.tol_residual)?,
            max_iter: opts.max_iter.unwrap_or(defaults.max_iter),
            ..defaults
        };
        let t_grid = match &opts.t_grid {
            Some(s) => parse_t_grid(s)?,
            None => default_grid(),
        };
        Ok(JobSpec {
            command: self.command,
            potential,
            target,
            root_tol: positive("tol", opts.tol, DEFAULT_ROOT_TOL)?,
            newton,
            t_grid,
            format: opts.format.unwrap_or_default(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn validate(text: &str) -> Result<JobSpec, CliError> {
        JobDocument::parse(text)?.validate(Options::default())
    }

    #[test]
    fn accepts_each_potential_form() {
        for doc in [
            r#"{"command":"bands","values":[1,-1]}"#,
            r#"{"command":"bands","k":1,"qhat":[1.0]}"#,
            r#"{"command":"bands","k":2,"free":[0.1,0.2]}"#,
        ] {
            assert!(validate(doc).is_ok(), "{doc}");
        }
    }

    #[test]
    fn rejects_ambiguous_or_inconsistent_documents() {
        for doc in [
            r#"{"command":"bands","values":[1,-1],"qhat":[1]}"#,
            r#"{"command":"bands","k":2,"qhat":[1]}"#,
            r#"{"command":"bands","k":2,"values":[1,-1]}"#,
            r#"{"command":"bands","qhat":[1]}"#,
            r#"{"command":"bands"}"#,
            r#"{"command":"bands","values":[1,-1],"target":[1]}"#,
            r#"{"command":"iso","k":1,"qhat":[1],"target":[1]}"#,
            r#"{"command":"launch","values":[1,-1]}"#,
            r#"{"command":"bands","values":[1,-1],"colour":"red"}"#,
        ] {
            assert!(
                matches!(validate(doc), Err(CliError::Malformed(_))),
                "{doc}"
            );
        }
    }

    #[test]
    fn flags_override_document_options() {
        let doc = JobDocument::parse(
            r#"{"command":"verify","options":{"tol":1e-9,"max_iter":7,"format":"csv"}}"#,
        )
        .unwrap();
        let flags = Options {
            tol: Some(1e-6),
            ..Options::default()
        };
        let spec = doc.validate(flags).unwrap();
        assert_eq!(spec.root_tol, 1e-6);
        assert_eq!(spec.newton.max_iter, 7);
        assert_eq!(spec.format, Format::Csv);
    }

    #[test]
    fn t_grid_syntax() {
        let g = parse_t_grid("0.1:0.001:3").unwrap();
        assert_eq!(g.len(), 3);
        assert!(matches!(
            parse_t_grid("0.1:0.001"),
            Err(CliError::Malformed(_))
        ));
        assert!(matches!(
            parse_t_grid("x:0.001:3"),
            Err(CliError::Malformed(_))
        ));
        assert!(matches!(
            parse_t_grid("0.001:0.1:3"),
            Err(CliError::Malformed(_))
        ));
    }
}
