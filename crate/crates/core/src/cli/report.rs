use serde::{Deserialize, Serialize};

use crate::dist::MixedDistribution;
use crate::dtu::BindingCase;
use crate::oracle::TieRule;

/// Oracle cross-check attached to a report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleBlock {
    pub value: f64,
    /// `|solver value − oracle value|`.
    pub gap: f64,
    pub n: usize,
    /// `|maxmin − minmax|` of the discretized game.
    pub duality_gap: f64,
}

/// Parameters of the DTU behind a continuous-prior solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Diagnostics {
    pub ell: f64,
    pub y: f64,
    pub beta: f64,
    pub q_top: f64,
    /// Intersections with the prior; absent when the line misses it.
    pub q1: Option<f64>,
    pub q2: Option<f64>,
    /// `v(q₁, ℓ)` at the returned DTU.
    pub v_residual: Option<f64>,
    pub binding_case: BindingCase,
    /// `q₁` of the 0-optimal DTU, when computed.
    pub q1_zero: Option<f64>,
    /// Oracle value reported by the heuristic regime.
    pub oracle_bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveReport {
    pub prior_kind: String,
    pub pi: f64,
    pub r_star: f64,
    pub tie_rule: TieRule,
    pub distribution: MixedDistribution,
    pub value: f64,
    pub flags: Vec<String>,
    pub note: String,
    pub oracle: Option<OracleBlock>,
    pub diagnostics: Option<Diagnostics>,
    pub warnings: Vec<String>,
}

impl SolveReport {
    pub fn has_flag(&self, flag: &str) -> bool {
        self.flags.iter().any(|f| f == flag)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyStatus {
    Pass,
    Fail,
    /// Optimality of the solver output is not established; only the gap is reported.
    Heuristic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyReport {
    pub solver_value: f64,
    pub oracle_value: f64,
    pub gap: f64,
    pub threshold: f64,
    pub n: usize,
    pub duality_gap: f64,
    pub status: VerifyStatus,
    pub flags: Vec<String>,
}

impl VerifyReport {
    pub fn to_text(&self) -> String {
        let status = match self.status {
            VerifyStatus::Pass => "pass",
            VerifyStatus::Fail => "fail",
            VerifyStatus::Heuristic => "heuristic",
        };
        let mut out = format!(
            "solver_value: {:.16e}\noracle_value: {:.16e}\ngap: {:.16e}\n",
            self.solver_value, self.oracle_value, self.gap
        );
        if self.status != VerifyStatus::Heuristic {
            out += &format!("threshold: {:.16e}\n", self.threshold);
        }
        out += &format!("n: {}\nduality_gap: {:.3e}\nflags: {}\nstatus: {status}\n", self.n, self.duality_gap, self.flags.join(";"));
        out
    }
}
