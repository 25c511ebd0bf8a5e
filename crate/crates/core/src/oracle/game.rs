use serde::{Deserialize, Serialize};

use super::kernel::TieRule;
use crate::dist::ContinuousPrior;
use crate::error::{Error, Result};

/// Uniform grid `q_k = k/(n−1)` on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: usize,
}

impl GridSpec {
    pub const MIN_POINTS: usize = 3;

    pub fn new(n: usize) -> Result<Self> {
        if n < Self::MIN_POINTS {
            return Err(Error::Parameter(format!("grid needs at least {} points, got {n}", Self::MIN_POINTS)));
        }
        Ok(GridSpec { n })
    }

    pub fn step(&self) -> f64 {
        1.0 / (self.n - 1) as f64
    }

    pub fn point(&self, k: usize) -> f64 {
        k as f64 / (self.n - 1) as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.point(k)).collect()
    }

    /// Nearest interior grid index to `x`.
    pub fn snap(&self, x: f64) -> usize {
        ((x * (self.n - 1) as f64).round() as usize).clamp(1, self.n - 2)
    }
}

/// Prior seen by the oracle.
#[derive(Debug, Clone, Copy)]
pub enum OraclePrior<'a> {
    /// Support `{0, 1}` with mean `pi`; only the mean constraint applies.
    Binary { pi: f64 },
    Continuous(&'a ContinuousPrior),
}

impl OraclePrior<'_> {
    pub fn mean(&self) -> f64 {
        match self {
            OraclePrior::Binary { pi } => *pi,
            OraclePrior::Continuous(p) => p.mean(),
        }
    }
}

/// Discretized maxmin game on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteGame {
    pub grid: GridSpec,
    /// `b_k = ∫₀^{q_k} F`; absent for a binary prior.
    pub prefix_bounds: Option<Vec<f64>>,
    pub mean: f64,
    pub r_star_index: usize,
    /// `q_{r_star_index} − r*`.
    pub snap_error: f64,
    pub tie_rule: TieRule,
}

impl DiscreteGame {
    pub fn r_star(&self) -> f64 {
        self.grid.point(self.r_star_index)
    }
}

pub fn build_game(prior: OraclePrior<'_>, r_star: f64, tie_rule: TieRule, grid: GridSpec) -> Result<DiscreteGame> {
    if !(r_star > 0.0 && r_star < 1.0) {
        return Err(Error::Domain(format!("r_star = {r_star} outside (0, 1)")));
    }
    let mean = prior.mean();
    if !(mean > 0.0 && mean < 1.0) {
        return Err(Error::Domain(format!("prior mean {mean} outside (0, 1)")));
    }
    let prefix_bounds = match prior {
        OraclePrior::Binary { .. } => None,
        OraclePrior::Continuous(p) => {
            let b: Vec<f64> = grid.points().iter().map(|&q| p.cdf_integral(q)).collect();
            if b.iter().any(|v| !v.is_finite()) {
                return Err(Error::Oracle("prefix integral of the prior is not finite".into()));
            }
            Some(b)
        }
    };
    let r_star_index = grid.snap(r_star);
    Ok(DiscreteGame {
        grid,
        prefix_bounds,
        mean,
        r_star_index,
        snap_error: grid.point(r_star_index) - r_star,
        tie_rule,
    })
}
