//! Discretized zero-sum game between Sender and Nature, solved by linear
//! programming. Used to cross-check the closed forms and the DTU search.

mod game;
mod kernel;
mod lp;
mod saddle;

use serde::{Deserialize, Serialize};

pub use game::{build_game, DiscreteGame, GridSpec, OraclePrior};
pub use kernel::{act_probability, min_over_pairs, pair_enumeration_value, payoff_kernel, unit_grid, TieRule};
pub use lp::{nature_lp, sender_best_response, solve_envelope, solve_maxmin, solve_minmax, type_payoffs, worst_pair};
pub use saddle::{discretize, feasibility_violation, verify_saddle, SaddleReport};

use crate::dist::NatureResponse;
use crate::error::Result;

/// Duality gap above which a solve is logged as suspicious.
pub const GAP_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSolution {
    pub value: f64,
    pub sender_pmf: Vec<f64>,
    pub nature_pair: NatureResponse,
    /// `|maxmin − minmax|` on the grid.
    pub gap_certificate: f64,
    /// Nature's equilibrium type distribution from the minmax side.
    pub nature_types: Vec<f64>,
    pub n: usize,
    pub r_star: f64,
    pub snap_error: f64,
}

/// Grid CDF values from a pmf.
pub fn cdf_from_pmf(pmf: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut out: Vec<f64> = pmf
        .iter()
        .map(|p| {
            acc += p;
            acc.min(1.0)
        })
        .collect();
    if let Some(last) = out.last_mut() {
        *last = 1.0;
    }
    out
}

fn pmf_from_cdf(cdf: &[f64]) -> Vec<f64> {
    let mut prev = 0.0;
    cdf.iter()
        .map(|&c| {
            let p = (c - prev).max(0.0);
            prev = prev.max(c);
            p
        })
        .collect()
}

/// Solves the game from both sides and certifies the value.
pub fn solve(game: &DiscreteGame) -> Result<OracleSolution> {
    let maxmin = solve_maxmin(game)?;
    let (minmax, nature_types) = solve_minmax(game)?;
    let gap = (maxmin.value - minmax).abs();
    if gap > GAP_TOL {
        log::warn!("oracle duality gap {gap:.3e} exceeds {GAP_TOL:.0e} (n = {})", game.grid.n);
    }
    let (i, j, w) = maxmin.pair;
    let nature_pair = if i == j {
        NatureResponse::point(game.grid.point(i))
    } else {
        NatureResponse { q_lo: game.grid.point(i), q_hi: game.grid.point(j), weight_lo: w }
    };
    Ok(OracleSolution {
        value: maxmin.value,
        sender_pmf: pmf_from_cdf(&maxmin.cdf),
        nature_pair,
        gap_certificate: gap,
        nature_types,
        n: game.grid.n,
        r_star: game.r_star(),
        snap_error: game.snap_error,
    })
}

/// Builds and solves the game on an `n`-point grid.
pub fn oracle_solve(prior: OraclePrior<'_>, r_star: f64, tie: TieRule, n: usize) -> Result<OracleSolution> {
    let game = build_game(prior, r_star, tie, GridSpec::new(n)?)?;
    solve(&game)
}
