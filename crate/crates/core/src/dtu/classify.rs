use serde::{Deserialize, Serialize};

use super::search::{regularity_warnings, solve_overall, solve_y_optimal, YOptimalResult};
use crate::dist::{sender_value, ContinuousPrior, MixedDistribution, PRIOR_GRID};
use crate::error::{Error, Result};
use crate::oracle::{oracle_solve, OraclePrior, TieRule};

/// Grid used for the oracle bound in the uncharacterized regime.
pub const HEURISTIC_ORACLE_N: usize = 201;

/// Which characterization produced a continuous-prior solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `F(q) ≤ q`: revealing the state attains the `1 − r*` bound.
    FullDisclosure,
    /// Concave prior and `r* ≤ π`: `U[0, 2π]` is the unique optimum.
    ConcaveUniform,
    /// `r* ≤ q₁(ℓ*₀, 0)`: the 0-optimal DTU is optimal.
    SmallRStar,
    /// `r* ≥ π`: no distribution beats every DTU.
    DtuUndominated,
    /// Intermediate `r*`: best DTU found, optimality not established.
    Heuristic,
}

impl Regime {
    pub fn flag(self) -> &'static str {
        match self {
            Regime::FullDisclosure => "full_disclosure",
            Regime::ConcaveUniform => "concave_uniform",
            Regime::SmallRStar => "small_r_star_optimal",
            Regime::DtuUndominated => "dtu_undominated",
            Regime::Heuristic => "heuristic",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuousSolution {
    pub regime: Regime,
    pub distribution: MixedDistribution,
    pub value: f64,
    pub unique: bool,
    pub dtu: Option<YOptimalResult>,
    /// `q₁(ℓ*₀, 0)` when it was computed.
    pub q1_zero: Option<f64>,
    pub y_profile: Vec<(f64, f64)>,
    /// Oracle value at `HEURISTIC_ORACLE_N` points, reported in the heuristic regime.
    pub oracle_bound: Option<f64>,
    pub warnings: Vec<String>,
}

/// Piecewise-linear interpolation of the prior CDF on its tabulation grid.
pub fn prior_as_mixed(prior: &ContinuousPrior) -> MixedDistribution {
    let grid = prior.cdf_grid();
    let pts: Vec<(f64, f64)> = grid
        .iter()
        .enumerate()
        .map(|(k, &c)| (k as f64 / PRIOR_GRID as f64, c))
        .collect();
    MixedDistribution::from_piecewise_linear_cdf(&pts).expect("prior CDF is nondecreasing")
}

/// Dispatches to the matching characterization for a continuous prior.
pub fn classify_and_solve(prior: &ContinuousPrior, r_star: f64, tol: f64) -> Result<ContinuousSolution> {
    if !(r_star > 0.0 && r_star < 1.0) {
        return Err(Error::Domain(format!("r_star = {r_star} outside (0, 1)")));
    }
    let pi = prior.mean();
    let mut warnings: Vec<String> = prior.warnings().to_vec();
    let base = |regime, distribution, value, unique, warnings| ContinuousSolution {
        regime,
        distribution,
        value,
        unique,
        dtu: None,
        q1_zero: None,
        y_profile: Vec::new(),
        oracle_bound: None,
        warnings,
    };

    if prior.dominates_uniform() {
        return Ok(base(Regime::FullDisclosure, prior_as_mixed(prior), 1.0 - r_star, false, warnings));
    }
    if prior.is_concave() && r_star <= pi {
        let g = MixedDistribution::uniform(0.0, 2.0 * pi)?;
        let value = sender_value(&g, r_star);
        return Ok(base(Regime::ConcaveUniform, g, value, true, warnings));
    }

    warnings.extend(regularity_warnings(prior));
    let zero = solve_y_optimal(prior, 0.0, tol)?;
    let q1 = zero.intersections.q1;
    if q1.is_finite() && r_star <= q1 {
        let mut s = base(Regime::SmallRStar, zero.distribution(), zero.value(r_star), false, warnings);
        s.dtu = Some(zero);
        s.q1_zero = Some(q1);
        return Ok(s);
    }

    let overall = solve_overall(prior, r_star, tol)?;
    warnings.extend(overall.warnings.iter().cloned());
    let regime = if r_star >= pi { Regime::DtuUndominated } else { Regime::Heuristic };
    let oracle_bound = if regime == Regime::Heuristic {
        Some(oracle_solve(OraclePrior::Continuous(prior), r_star, TieRule::Against, HEURISTIC_ORACLE_N)?.value)
    } else {
        None
    };
    Ok(ContinuousSolution {
        regime,
        distribution: overall.best.distribution(),
        value: overall.value,
        unique: false,
        dtu: Some(overall.best),
        q1_zero: q1.is_finite().then_some(q1),
        y_profile: overall.y_profile,
        oracle_bound,
        warnings,
    })
}
