use serde::{Deserialize, Serialize};

use super::game::{DiscreteGame, GridSpec};
use super::lp::{sender_best_response, type_payoffs, worst_pair};
use super::{cdf_from_pmf, solve};
use crate::dist::{MixedDistribution, NatureResponse};
use crate::error::{Error, Result};

/// Moves each piece of mass to the two neighbouring grid points in
/// proportion to distance, which keeps the mean.
pub fn discretize(g: &MixedDistribution, grid: GridSpec) -> Vec<f64> {
    let m = (grid.n - 1) as f64;
    let mut pmf = vec![0.0; grid.n];
    let mut place = |x: f64, mass: f64| {
        let pos = (x * m).clamp(0.0, m);
        let k = (pos.floor() as usize).min(grid.n - 2);
        let frac = pos - k as f64;
        pmf[k] += mass * (1.0 - frac);
        pmf[k + 1] += mass * frac;
    };
    for a in g.atoms() {
        place(a.at, a.mass);
    }
    for s in g.segments() {
        let density = s.mass / (s.hi - s.lo);
        let first = (s.lo * m).floor() as usize;
        let last = ((s.hi * m).ceil() as usize).min(grid.n - 1);
        for k in first..last.max(first + 1) {
            let lo = s.lo.max(grid.point(k));
            let hi = s.hi.min(grid.point(k + 1));
            if hi > lo {
                place(0.5 * (lo + hi), density * (hi - lo));
            }
        }
    }
    pmf
}

/// Largest violation of the prefix bounds and `|mean residual|` for a grid pmf.
pub fn feasibility_violation(game: &DiscreteGame, pmf: &[f64]) -> f64 {
    let cdf = cdf_from_pmf(pmf);
    let h = game.grid.step();
    let mut running = 0.0;
    let mut worst: f64 = 0.0;
    for j in 1..game.grid.n {
        running += h * cdf[j - 1];
        if let Some(b) = &game.prefix_bounds {
            if j < game.grid.n - 1 {
                worst = worst.max(running - b[j]);
            }
        }
    }
    worst.max((running - (1.0 - game.mean)).abs())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaddleReport {
    pub game_value: f64,
    /// Worst-case payoff of the candidate (Nature best-responds).
    pub guarantee: f64,
    pub nature_response: NatureResponse,
    /// `game_value − guarantee`.
    pub shortfall: f64,
    /// Nature's equilibrium type distribution on the grid.
    pub equilibrium_types: Vec<f64>,
    pub payoff_vs_equilibrium: f64,
    /// Sender's best payoff against the equilibrium types.
    pub best_response_value: f64,
    /// `best_response_value − game_value`.
    pub improvement: f64,
    pub feasibility_violation: f64,
    pub is_saddle: bool,
}

/// Checks whether a grid pmf is an equilibrium strategy for Sender.
pub fn verify_saddle(pmf: &[f64], game: &DiscreteGame, tol: f64) -> Result<SaddleReport> {
    if pmf.len() != game.grid.n {
        return Err(Error::Parameter(format!("pmf has {} entries, grid has {}", pmf.len(), game.grid.n)));
    }
    let sol = solve(game)?;
    let cdf = cdf_from_pmf(pmf);
    let payoff = type_payoffs(&cdf, game.tie_rule);
    let (guarantee, i, j, w) = worst_pair(&payoff, game.r_star_index);
    let nature_response = if i == j {
        NatureResponse::point(game.grid.point(i))
    } else {
        NatureResponse { q_lo: game.grid.point(i), q_hi: game.grid.point(j), weight_lo: w }
    };
    let types = &sol.nature_types;
    let payoff_vs_equilibrium: f64 = types.iter().zip(&payoff).map(|(t, p)| t * p).sum();
    let (best_response_value, _) = sender_best_response(game, types)?;
    let shortfall = sol.value - guarantee;
    let improvement = best_response_value - sol.value;
    let feasibility_violation = feasibility_violation(game, pmf);
    let is_saddle = shortfall <= tol
        && improvement <= tol
        && payoff_vs_equilibrium >= sol.value - tol
        && feasibility_violation <= tol;
    Ok(SaddleReport {
        game_value: sol.value,
        guarantee,
        nature_response,
        shortfall,
        equilibrium_types: types.clone(),
        payoff_vs_equilibrium,
        best_response_value,
        improvement,
        feasibility_violation,
        is_saddle,
    })
}
