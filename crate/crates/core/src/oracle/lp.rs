//! Linear programs behind the grid game.
//!
//! Sender's strategy is the vector of CDF values `G_k` on the grid; running
//! integrals `S_k = h Σ_{i<k} G_i` carry the prefix bounds and the mean.

use minilp::{ComparisonOp, LinearExpr, OptimizationDirection, Problem, Solution, Variable};

use super::game::DiscreteGame;
use super::kernel::TieRule;
use crate::error::{Error, Result};

/// Cuts are added until no pair undercuts the LP value by more than this.
const CUT_TOL: f64 = 1e-11;
const MAX_CUT_ROUNDS: usize = 20_000;

fn lp_err(context: &str) -> impl Fn(minilp::Error) -> Error + '_ {
    move |e| Error::Oracle(format!("{context}: {e}"))
}

fn tie_weight(tie: TieRule) -> f64 {
    match tie {
        TieRule::Against => 1.0,
        TieRule::Favor => 0.0,
        TieRule::Even => 0.5,
    }
}

/// `(k, c)` terms with Sender's payoff at type `q_i` equal to `1 − Σ c·G_k`.
pub(crate) fn cdf_terms(i: usize, tie: TieRule) -> Vec<(usize, f64)> {
    let a = tie_weight(tie);
    let mut out = Vec::with_capacity(2);
    if a > 0.0 {
        out.push((i, a));
    }
    if a < 1.0 && i > 0 {
        out.push((i - 1, 1.0 - a));
    }
    out
}

/// Sender's payoff at every grid type given CDF values `g`.
pub fn type_payoffs(g: &[f64], tie: TieRule) -> Vec<f64> {
    (0..g.len())
        .map(|i| 1.0 - cdf_terms(i, tie).iter().map(|&(k, c)| c * g[k]).sum::<f64>())
        .collect()
}

/// Two-point Nature response on grid indices: `(value, lo, hi, weight_lo)`.
pub fn worst_pair(payoff: &[f64], r: usize) -> (f64, usize, usize, f64) {
    let mut best = (payoff[r], r, r, 1.0);
    for i in 0..r {
        for j in r + 1..payoff.len() {
            let w = (j - r) as f64 / (j - i) as f64;
            let v = w * payoff[i] + (1.0 - w) * payoff[j];
            if v < best.0 {
                best = (v, i, j, w);
            }
        }
    }
    best
}

fn add_sender_polytope(p: &mut Problem, game: &DiscreteGame, obj: &[f64]) -> Vec<Variable> {
    let n = game.grid.n;
    let h = game.grid.step();
    let g: Vec<Variable> = (0..n)
        .map(|k| {
            let bounds = if k == n - 1 { (1.0, 1.0) } else { (0.0, 1.0) };
            p.add_var(obj[k], bounds)
        })
        .collect();
    for k in 1..n {
        p.add_constraint(&[(g[k], 1.0), (g[k - 1], -1.0)], ComparisonOp::Ge, 0.0);
    }
    let total = 1.0 - game.mean;
    match &game.prefix_bounds {
        None => {
            let expr: LinearExpr = g[..n - 1].iter().map(|&v| (v, h)).collect();
            p.add_constraint(expr, ComparisonOp::Eq, total);
        }
        Some(b) => {
            let mut prev = p.add_var(0.0, (0.0, 0.0));
            for j in 1..n {
                let bounds = if j == n - 1 { (total, total) } else { (f64::NEG_INFINITY, b[j]) };
                let s = p.add_var(0.0, bounds);
                p.add_constraint(&[(s, 1.0), (prev, -1.0), (g[j - 1], -h)], ComparisonOp::Eq, 0.0);
                prev = s;
            }
        }
    }
    g
}

fn values(sol: &Solution, vars: &[Variable]) -> Vec<f64> {
    vars.iter().map(|&v| sol[v]).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaxminSolution {
    pub value: f64,
    /// CDF values on the grid.
    pub cdf: Vec<f64>,
    pub pair: (usize, usize, f64),
    pub cuts: usize,
}

/// Maximize `u` subject to `u ≤` payoff against every two-point type
/// distribution, with pairs added by constraint generation.
pub fn solve_maxmin(game: &DiscreteGame) -> Result<MaxminSolution> {
    let n = game.grid.n;
    let r = game.r_star_index;
    let mut p = Problem::new(OptimizationDirection::Maximize);
    let g = add_sender_polytope(&mut p, game, &vec![0.0; n]);
    let u = p.add_var(1.0, (f64::NEG_INFINITY, 1.0));
    let cut = |i: usize, j: usize| -> (LinearExpr, f64) {
        let mut expr = LinearExpr::empty();
        expr.add(u, 1.0);
        if i == j {
            for (k, c) in cdf_terms(i, game.tie_rule) {
                expr.add(g[k], c);
            }
        } else {
            let w = (j - r) as f64 / (j - i) as f64;
            for (k, c) in cdf_terms(i, game.tie_rule) {
                expr.add(g[k], w * c);
            }
            for (k, c) in cdf_terms(j, game.tie_rule) {
                expr.add(g[k], (1.0 - w) * c);
            }
        }
        (expr, 1.0)
    };
    for (i, j) in [(r, r), (0, n - 1)] {
        let (e, rhs) = cut(i, j);
        p.add_constraint(e, ComparisonOp::Le, rhs);
    }
    let mut sol = p.solve().map_err(lp_err("maxmin"))?;
    for round in 0..MAX_CUT_ROUNDS {
        let cdf = values(&sol, &g);
        let payoff = type_payoffs(&cdf, game.tie_rule);
        let (worst, i, j, w) = worst_pair(&payoff, r);
        if worst >= sol[u] - CUT_TOL {
            return Ok(MaxminSolution { value: worst.min(sol[u]), cdf, pair: (i, j, w), cuts: round });
        }
        let (e, rhs) = cut(i, j);
        sol = sol.add_constraint(e, ComparisonOp::Le, rhs).map_err(lp_err("maxmin cut"))?;
    }
    Err(Error::Oracle(format!("constraint generation did not converge in {MAX_CUT_ROUNDS} rounds")))
}

/// Against-Sender value via the supporting line of the concave envelope:
/// minimize `a·r* + b` with `a q_k + b ≥ G_k`; the value is `1 −` optimum.
pub fn solve_envelope(game: &DiscreteGame) -> Result<(f64, Vec<f64>)> {
    if game.tie_rule != TieRule::Against {
        return Err(Error::Oracle("envelope formulation applies to the against-Sender rule only".into()));
    }
    let n = game.grid.n;
    let mut p = Problem::new(OptimizationDirection::Minimize);
    let g = add_sender_polytope(&mut p, game, &vec![0.0; n]);
    let a = p.add_var(game.r_star(), (f64::NEG_INFINITY, f64::INFINITY));
    let b = p.add_var(1.0, (f64::NEG_INFINITY, f64::INFINITY));
    for k in 0..n {
        p.add_constraint(&[(a, game.grid.point(k)), (b, 1.0), (g[k], -1.0)], ComparisonOp::Ge, 0.0);
    }
    let sol = p.solve().map_err(lp_err("envelope"))?;
    Ok((1.0 - sol.objective(), values(&sol, &g)))
}

/// Nature's side: minimize over all mean-`r*` grid type distributions the
/// value of Sender's best response, written through the dual of Sender's LP.
/// Returns `(value, type pmf)`.
pub fn solve_minmax(game: &DiscreteGame) -> Result<(f64, Vec<f64>)> {
    let n = game.grid.n;
    let h = game.grid.step();
    let r = game.r_star_index;
    let alpha = tie_weight(game.tie_rule);
    let mut p = Problem::new(OptimizationDirection::Maximize);
    let t: Vec<Variable> = (0..n).map(|_| p.add_var(0.0, (0.0, f64::INFINITY))).collect();
    let mu: Vec<Variable> = (0..n).map(|_| p.add_var(0.0, (0.0, f64::INFINITY))).collect();
    let s = p.add_var(1.0 - game.mean, (f64::NEG_INFINITY, f64::INFINITY));
    let tau = p.add_var(1.0, (f64::NEG_INFINITY, f64::INFINITY));
    // c[k] = Σ_{j > k} λ_j over the interior prefix bounds.
    let c: Option<Vec<Variable>> = game.prefix_bounds.as_ref().map(|b| {
        let lambda: Vec<Option<Variable>> = (0..n)
            .map(|j| (1..n - 1).contains(&j).then(|| p.add_var(-b[j], (0.0, f64::INFINITY))))
            .collect();
        let c: Vec<Variable> = (0..n - 1)
            .map(|k| {
                let bounds = if k == n - 2 { (0.0, 0.0) } else { (f64::NEG_INFINITY, f64::INFINITY) };
                p.add_var(0.0, bounds)
            })
            .collect();
        for k in 0..n.saturating_sub(2) {
            let l = lambda[k + 1].expect("interior bound");
            p.add_constraint(&[(c[k], 1.0), (c[k + 1], -1.0), (l, -1.0)], ComparisonOp::Eq, 0.0);
        }
        c
    });
    p.add_constraint(t.iter().map(|&v| (v, 1.0)).collect::<LinearExpr>(), ComparisonOp::Eq, 1.0);
    p.add_constraint(
        t.iter().enumerate().map(|(i, &v)| (v, i as f64)).collect::<LinearExpr>(),
        ComparisonOp::Eq,
        r as f64,
    );
    for k in 0..n {
        let mut e = LinearExpr::empty();
        e.add(mu[k], 1.0);
        if k + 1 < n {
            e.add(mu[k + 1], -1.0);
            e.add(s, h);
        } else {
            e.add(tau, 1.0);
        }
        if let Some(c) = &c {
            if k < n - 1 {
                e.add(c[k], -h);
            }
        }
        if alpha > 0.0 {
            e.add(t[k], -alpha);
        }
        if alpha < 1.0 && k + 1 < n {
            e.add(t[k + 1], -(1.0 - alpha));
        }
        p.add_constraint(e, ComparisonOp::Eq, 0.0);
    }
    let sol = p.solve().map_err(lp_err("minmax"))?;
    Ok((1.0 - sol.objective(), values(&sol, &t)))
}

/// Sender's best payoff against a fixed type pmf `types`; returns `(value, cdf)`.
pub fn sender_best_response(game: &DiscreteGame, types: &[f64]) -> Result<(f64, Vec<f64>)> {
    let n = game.grid.n;
    let mut d = vec![0.0; n];
    for (i, &ti) in types.iter().enumerate() {
        for (k, c) in cdf_terms(i, game.tie_rule) {
            d[k] += c * ti;
        }
    }
    let mut p = Problem::new(OptimizationDirection::Minimize);
    let g = add_sender_polytope(&mut p, game, &d);
    let sol = p.solve().map_err(lp_err("sender best response"))?;
    let mass: f64 = types.iter().sum();
    Ok((mass - sol.objective(), values(&sol, &g)))
}

/// Nature's exact best response to fixed CDF values over all mean-`r*`
/// grid type distributions (not only two-point ones).
pub fn nature_lp(game: &DiscreteGame, cdf: &[f64]) -> Result<(f64, Vec<f64>)> {
    let payoff = type_payoffs(cdf, game.tie_rule);
    let mut p = Problem::new(OptimizationDirection::Minimize);
    let t: Vec<Variable> = payoff.iter().map(|&v| p.add_var(v, (0.0, f64::INFINITY))).collect();
    p.add_constraint(t.iter().map(|&v| (v, 1.0)).collect::<LinearExpr>(), ComparisonOp::Eq, 1.0);
    p.add_constraint(
        t.iter().enumerate().map(|(i, &v)| (v, i as f64)).collect::<LinearExpr>(),
        ComparisonOp::Eq,
        game.r_star_index as f64,
    );
    let sol = p.solve().map_err(lp_err("nature"))?;
    Ok((sol.objective(), values(&sol, &t)))
}
