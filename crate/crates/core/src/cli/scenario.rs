use serde::{Deserialize, Serialize};

use crate::dist::{ContinuousPrior, PriorModel};
use crate::error::{Error, Result};
use crate::oracle::TieRule;

pub const DEFAULT_ORACLE_N: usize = 201;
pub const DEFAULT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PriorSpec {
    Binary { pi: f64 },
    TruncatedNormal { mu: f64, sigma: f64 },
    PolynomialCdf { coeffs: Vec<f64> },
    PiecewiseLinearDensity { knots: Vec<(f64, f64)> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSpec {
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

fn default_n() -> usize {
    DEFAULT_ORACLE_N
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

impl Default for OracleSpec {
    fn default() -> Self {
        OracleSpec { n: DEFAULT_ORACLE_N, tol: DEFAULT_TOL }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub prior: PriorSpec,
    pub r_star: f64,
    #[serde(default)]
    pub tie_rule: TieRule,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSpec>,
}

/// A validated prior ready for the solvers.
#[derive(Debug, Clone)]
pub enum Prior {
    Binary { pi: f64 },
    Continuous(ContinuousPrior),
}

impl Prior {
    pub fn mean(&self) -> f64 {
        match self {
            Prior::Binary { pi } => *pi,
            Prior::Continuous(p) => p.mean(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Prior::Binary { .. } => "binary",
            Prior::Continuous(p) => match p.model() {
                PriorModel::TruncatedNormal { .. } => "truncated_normal",
                PriorModel::PolynomialCdf { .. } => "polynomial_cdf",
                PriorModel::PiecewiseLinearDensity { .. } => "piecewise_linear_density",
            },
        }
    }
}

impl PriorSpec {
    pub fn build(&self) -> Result<Prior> {
        Ok(match self {
            PriorSpec::Binary { pi } => {
                if !(*pi > 0.0 && *pi < 1.0) {
                    return Err(Error::Domain(format!("binary prior needs pi in (0, 1), got {pi}")));
                }
                Prior::Binary { pi: *pi }
            }
            PriorSpec::TruncatedNormal { mu, sigma } => {
                Prior::Continuous(ContinuousPrior::truncated_normal(*mu, *sigma)?)
            }
            PriorSpec::PolynomialCdf { coeffs } => Prior::Continuous(ContinuousPrior::polynomial_cdf(coeffs.clone())?),
            PriorSpec::PiecewiseLinearDensity { knots } => {
                Prior::Continuous(ContinuousPrior::piecewise_linear_density(knots.clone())?)
            }
        })
    }
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn oracle_or_default(&self) -> OracleSpec {
        self.oracle.unwrap_or_default()
    }

    /// Checks that do not depend on the prior model.
    pub fn validate(&self) -> Result<()> {
        if !(self.r_star > 0.0 && self.r_star < 1.0) {
            return Err(Error::Domain(format!("r_star = {} must lie in (0, 1)", self.r_star)));
        }
        if let Some(o) = &self.oracle {
            if o.n < 11 {
                return Err(Error::Domain(format!("oracle grid needs n >= 11, got {}", o.n)));
            }
            if !(o.tol > 0.0) {
                return Err(Error::Domain(format!("oracle tol must be positive, got {}", o.tol)));
            }
        }
        Ok(())
    }
}
