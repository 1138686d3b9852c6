//! JSON parameter files and the failure modes of the command line.

use std::fmt;
use std::path::Path;

use lamperti_stable::measure::{Direction, LampertiCharacteristics};
use lamperti_stable::{DomainError, Error, NumericalError};
use serde::Deserialize;

/// Failure modes mapped onto the documented exit codes: invalid
/// configuration or input exits with 2, numerical non-convergence with 3.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(out, "{msg}"),
            CliError::Numerical(msg) => write!(out, "{msg}"),
        }
    }
}

impl From<DomainError> for CliError {
    fn from(e: DomainError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<NumericalError> for CliError {
    fn from(e: NumericalError) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(d) => d.into(),
            Error::Numerical(n) => n.into(),
        }
    }
}

/// On-disk parameter schema. The vector-valued fields carry one entry per
/// coordinate; this build is one-dimensional, so each must have exactly one
/// component (`directions` may list one entry per unit direction ±1).
///
/// `theta` and `drift` select alternative parameterizations of the linear
/// term; exactly one of them must be non-null.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    alpha: f64,
    directions: Vec<DirectionEntry>,
    #[serde(default)]
    theta: Option<Vec<f64>>,
    #[serde(default)]
    drift: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DirectionEntry {
    xi: Vec<f64>,
    sigma: f64,
    f: f64,
}

impl ConfigFile {
    pub fn into_characteristics(self) -> Result<LampertiCharacteristics, CliError> {
        let mut directions = Vec::with_capacity(self.directions.len());
        for (i, entry) in self.directions.iter().enumerate() {
            if entry.xi.len() != 1 {
                return Err(CliError::Config(format!(
                    "directions[{i}].xi: expected exactly one component, got {}",
                    entry.xi.len()
                )));
            }
            directions.push(Direction {
                xi: entry.xi[0],
                sigma: entry.sigma,
                f: entry.f,
            });
        }
        let theta = one_component("theta", &self.theta)?;
        let drift = one_component("drift", &self.drift)?;
        let chars = match (theta, drift) {
            (Some(theta), None) => {
                LampertiCharacteristics::new(self.alpha, directions, theta)?
            }
            (None, Some(drift)) => {
                LampertiCharacteristics::with_drift(self.alpha, directions, drift)?
            }
            (Some(_), Some(_)) => {
                return Err(CliError::Config(
                    "theta and drift are alternative parameterizations; \
                     give exactly one and set the other to null"
                        .into(),
                ))
            }
            (None, None) => {
                return Err(CliError::Config(
                    "one of theta or drift is required".into(),
                ))
            }
        };
        Ok(chars)
    }
}

fn one_component(field: &str, values: &Option<Vec<f64>>) -> Result<Option<f64>, CliError> {
    match values {
        None => Ok(None),
        Some(v) if v.len() == 1 => Ok(Some(v[0])),
        Some(v) => Err(CliError::Config(format!(
            "{field}: expected exactly one component, got {}",
            v.len()
        ))),
    }
}

/// Reads and validates a parameter file.
pub fn load(path: &Path) -> Result<LampertiCharacteristics, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let parsed: ConfigFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    parsed.into_characteristics()
}

/// Fallback parameters when no file is given: the symmetric showcase set
/// α = 1/2, f ≡ 1, σ(+1) = σ(−1) = 1, θ = 0.
pub fn default_characteristics() -> LampertiCharacteristics {
    LampertiCharacteristics::new(
        0.5,
        vec![
            Direction { xi: 1.0, sigma: 1.0, f: 1.0 },
            Direction { xi: -1.0, sigma: 1.0, f: 1.0 },
        ],
        0.0,
    )
    .expect("the built-in default parameters are valid")
}

pub fn load_or_default(path: Option<&Path>) -> Result<LampertiCharacteristics, CliError> {
    match path {
        Some(p) => load(p),
        None => Ok(default_characteristics()),
    }
}
