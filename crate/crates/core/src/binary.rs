//! Closed-form optimal posteriors for a prior supported on `{0, 1}`.

use serde::{Deserialize, Serialize};

use crate::dist::{sender_value, Atom, MixedDistribution, Segment};
use crate::error::{Error, Result};
use crate::oracle::{pair_enumeration_value, unit_grid, TieRule};

/// Grid used to evaluate closed forms under the favourable and even tie rules.
pub const TIE_EVAL_GRID: usize = 201;
const BOUNDARY_TOL: f64 = 1e-12;
/// Breakpoints of the discretized `qⁿ` witness.
const POWER_WITNESS_POINTS: usize = 2001;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinaryScenario {
    pub pi: f64,
    pub r_star: f64,
    pub tie_rule: TieRule,
}

impl BinaryScenario {
    pub fn new(pi: f64, r_star: f64, tie_rule: TieRule) -> Result<Self> {
        for (name, v) in [("pi", pi), ("r_star", r_star)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::Domain(format!("{name} = {v} must lie in (0, 1)")));
            }
        }
        Ok(BinaryScenario { pi, r_star, tie_rule })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinarySolution {
    pub distribution: MixedDistribution,
    pub value: f64,
    pub unique: bool,
    pub condition_note: String,
}

fn uniform(lo: f64, hi: f64) -> MixedDistribution {
    MixedDistribution::uniform(lo, hi).expect("valid uniform")
}

fn build(atoms: &[(f64, f64)], segs: &[(f64, f64, f64)]) -> MixedDistribution {
    let atoms: Vec<Atom> = atoms.iter().map(|&(at, mass)| Atom { at, mass }).collect();
    let segs: Vec<Segment> = segs.iter().map(|&(lo, hi, mass)| Segment { lo, hi, mass }).collect();
    MixedDistribution::from_parts(&atoms, &segs).expect("closed form is a valid distribution")
}

/// `(1 − π/r) δ₀ + (π/r) U[0, 2r]`.
fn atom_and_uniform(pi: f64, r: f64) -> MixedDistribution {
    build(&[(0.0, 1.0 - pi / r)], &[(0.0, 2.0 * r, pi / r)])
}

/// `(1 − 2π) δ₀ + 2π U[0, 1]`.
fn full_support_utu(pi: f64) -> MixedDistribution {
    build(&[(0.0, 1.0 - 2.0 * pi)], &[(0.0, 1.0, 2.0 * pi)])
}

/// `((1−π)/π) U[0, 2−2π] + ((2π−1)/π) δ₁`.
fn even_high_prior(pi: f64) -> MixedDistribution {
    build(&[(1.0, (2.0 * pi - 1.0) / pi)], &[(0.0, 2.0 - 2.0 * pi, (1.0 - pi) / pi)])
}

fn even_high_type(pi: f64, r: f64) -> MixedDistribution {
    let inner = even_high_prior(r);
    let zero = MixedDistribution::point(0.0).expect("valid point");
    MixedDistribution::mixture(&[(1.0 - pi / r, &zero), (pi / r, &inner)]).expect("valid mixture")
}

fn agree(a: &MixedDistribution, b: &MixedDistribution) {
    let d = a.cdf_distance(b);
    debug_assert!(d <= 1e-9, "adjacent closed forms disagree by {d}");
    if d > 1e-9 {
        log::error!("adjacent closed forms disagree by {d}");
    }
}

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= BOUNDARY_TOL
}

fn against(pi: f64, r: f64) -> (MixedDistribution, bool, &'static str) {
    if pi > 0.5 {
        return (
            uniform(2.0 * pi - 1.0, 1.0),
            false,
            "prior above one half: any mean-pi CDF below the diagonal is optimal",
        );
    }
    let small = uniform(0.0, 2.0 * pi);
    let mid = || atom_and_uniform(pi, r);
    let large = full_support_utu(pi);
    if r <= pi {
        if near(r, pi) {
            agree(&small, &mid());
        }
        (small, true, "r* <= pi <= 1/2")
    } else if r <= 0.5 {
        let g = mid();
        if near(r, 0.5) {
            agree(&g, &large);
        }
        (g, true, "pi <= r* <= 1/2")
    } else {
        if near(r, 0.5) {
            agree(&large, &mid());
        }
        (large, true, "r* >= 1/2")
    }
}

fn favor(pi: f64, r: f64) -> (MixedDistribution, &'static str) {
    if r > 0.5 {
        (build(&[(0.0, 1.0 - pi), (1.0, pi)], &[]), "r* > 1/2")
    } else if pi > 0.5 {
        (build(&[(1.0, 2.0 * pi - 1.0)], &[(0.0, 1.0, 2.0 - 2.0 * pi)]), "r* <= 1/2 < pi")
    } else if r <= pi {
        (uniform(0.0, 2.0 * pi), "r* <= pi <= 1/2")
    } else {
        (atom_and_uniform(pi, r), "pi <= r* <= 1/2")
    }
}

fn even(pi: f64, r: f64) -> (MixedDistribution, &'static str) {
    if pi <= 0.5 && r <= pi {
        let g = uniform(0.0, 2.0 * pi);
        if near(r, pi) {
            agree(&g, &atom_and_uniform(pi, r));
        }
        if near(pi, 0.5) {
            agree(&g, &even_high_prior(pi));
        }
        (g, "r* <= pi <= 1/2")
    } else if r <= 0.5 && pi <= r {
        let g = atom_and_uniform(pi, r);
        if near(r, 0.5) {
            agree(&g, &even_high_type(pi, r));
        }
        (g, "pi <= r* <= 1/2")
    } else if r <= pi {
        let g = even_high_prior(pi);
        if near(r, pi) {
            agree(&g, &even_high_type(pi, r));
        }
        (g, "1/2 <= pi, r* <= pi")
    } else {
        (even_high_type(pi, r), "1/2 <= r*, pi <= r*")
    }
}

/// Worst-case payoff of `g` under `tie`.
///
/// Against Sender this is `1 − Ḡ(r*)`. Otherwise Nature's two-point types
/// range over a uniform grid, `r*`, the CDF knots of `g` and points just
/// right of each atom (where the infimum is approached).
pub fn value_under(g: &MixedDistribution, r_star: f64, tie: TieRule) -> f64 {
    if tie == TieRule::Against {
        return sender_value(g, r_star);
    }
    let mut pts = unit_grid(TIE_EVAL_GRID);
    pts.extend(g.knots());
    pts.extend(g.atoms().iter().filter(|a| a.at < 1.0).map(|a| (a.at + 1e-9).min(1.0)));
    pair_enumeration_value(g, r_star, tie, &pts).0
}

/// Sender-optimal posterior distribution for a binary prior.
pub fn optimal_posterior(s: &BinaryScenario) -> BinarySolution {
    let (pi, r) = (s.pi, s.r_star);
    let (distribution, unique, note) = match s.tie_rule {
        TieRule::Against => against(pi, r),
        TieRule::Favor => {
            let (g, note) = favor(pi, r);
            (g, false, note)
        }
        TieRule::Even => {
            let (g, note) = even(pi, r);
            (g, true, note)
        }
    };
    let value = value_under(&distribution, r, s.tie_rule);
    BinarySolution { distribution, value, unique, condition_note: note.to_string() }
}

/// Whether `g` has mean `pi` and a CDF below the diagonal.
pub fn check_big_pi(g: &MixedDistribution, pi: f64) -> Result<bool> {
    if !(pi > 0.5 && pi < 1.0) {
        return Err(Error::Domain(format!("diagonal condition needs pi in (1/2, 1), got {pi}")));
    }
    if (g.mean() - pi).abs() > 1e-10 {
        return Ok(false);
    }
    let below = |q: f64| g.cdf(q) <= q + 1e-10;
    let dense = (0..=4096).map(|i| i as f64 / 4096.0);
    Ok(g.knots().into_iter().chain(dense).all(below))
}

/// `n` with `pi = n/(n+1)` when such an integer exists.
pub fn power_exponent(pi: f64) -> Option<u32> {
    let n = pi / (1.0 - pi);
    let k = n.round();
    ((n - k).abs() <= 1e-9 && k >= 1.0 && k <= 1e6).then_some(k as u32)
}

/// Piecewise-linear interpolation of `qⁿ`, corrected so its mean is exactly `n/(n+1)`.
pub fn power_witness(n: u32) -> MixedDistribution {
    let m = POWER_WITNESS_POINTS;
    let q: Vec<f64> = (0..m).map(|k| k as f64 / (m - 1) as f64).collect();
    let h = 1.0 / (m - 1) as f64;
    let trap = |vals: &[f64]| h * (vals.iter().sum::<f64>() - 0.5 * (vals[0] + vals[m - 1]));
    let base: Vec<f64> = q.iter().map(|&x| x.powi(n as i32)).collect();
    let tilt: Vec<f64> = q.iter().zip(&base).map(|(&x, &b)| b * (1.0 - x)).collect();
    let delta = (trap(&base) - 1.0 / (n as f64 + 1.0)) / trap(&tilt);
    let pts: Vec<(f64, f64)> = q
        .iter()
        .zip(&base)
        .map(|(&x, &b)| (x, b * (1.0 - delta * (1.0 - x))))
        .collect();
    MixedDistribution::from_piecewise_linear_cdf(&pts).expect("power witness is a valid CDF")
}

/// Distributions attaining the `1 − r*` bound when `pi > 1/2`: the
/// discretized `qⁿ` CDF (only when `pi = n/(n+1)`) and `U[2π−1, 1]`.
pub fn big_pi_witnesses(pi: f64) -> Result<(Option<MixedDistribution>, MixedDistribution)> {
    if !(pi > 0.5 && pi < 1.0) {
        return Err(Error::Domain(format!("witnesses need pi in (1/2, 1), got {pi}")));
    }
    Ok((power_exponent(pi).map(power_witness), uniform(2.0 * pi - 1.0, 1.0)))
}

/// Optimal atom-at-zero upper-truncated uniform: returns `(x*, value)`.
pub fn utu_optimal(pi: f64, r_star: f64) -> Result<(f64, f64)> {
    if !(pi > 0.0 && pi <= 0.5) {
        return Err(Error::Domain(format!("UTU family needs pi in (0, 1/2], got {pi}")));
    }
    if !(r_star > 0.0 && r_star < 1.0) {
        return Err(Error::Domain(format!("r_star = {r_star} must lie in (0, 1)")));
    }
    let x = if r_star <= pi {
        0.0
    } else if r_star <= 0.5 {
        1.0 - pi / r_star
    } else {
        1.0 - 2.0 * pi
    };
    Ok((x, utu_value(pi, r_star, x)))
}

/// Worst-case payoff of `x δ₀ + (1−x) U[0, 2π/(1−x)]`.
pub fn utu_value(pi: f64, r_star: f64, x: f64) -> f64 {
    let s = 1.0 - x;
    (s - r_star * s * s / (2.0 * pi)).max(0.0)
}
