use serde::{Deserialize, Serialize};

use crate::dist::{MixedDistribution, NatureResponse};

/// How an indifferent Receiver (posterior mean equal to type) acts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TieRule {
    /// Indifferent Receivers do not act.
    #[default]
    Against,
    /// Indifferent Receivers act.
    Favor,
    /// Indifferent Receivers act with probability one half.
    Even,
}

impl TieRule {
    pub const ALL: [TieRule; 3] = [TieRule::Against, TieRule::Favor, TieRule::Even];

    pub fn name(self) -> &'static str {
        match self {
            TieRule::Against => "against",
            TieRule::Favor => "favor",
            TieRule::Even => "even",
        }
    }
}

impl std::str::FromStr for TieRule {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "against" => Ok(TieRule::Against),
            "favor" => Ok(TieRule::Favor),
            "even" => Ok(TieRule::Even),
            other => Err(format!("unknown tie rule '{other}' (expected against, favor or even)")),
        }
    }
}

impl std::fmt::Display for TieRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Sender's payoff from a posterior mean `q` facing a Receiver of type `r`.
pub fn payoff_kernel(q: f64, r: f64, tie: TieRule) -> f64 {
    if q > r {
        1.0
    } else if q < r {
        0.0
    } else {
        match tie {
            TieRule::Against => 0.0,
            TieRule::Favor => 1.0,
            TieRule::Even => 0.5,
        }
    }
}

/// Probability that a type-`r` Receiver acts under `g`.
pub fn act_probability(g: &MixedDistribution, r: f64, tie: TieRule) -> f64 {
    match tie {
        TieRule::Against => 1.0 - g.cdf(r),
        TieRule::Favor => 1.0 - g.cdf_left(r),
        TieRule::Even => 1.0 - 0.5 * (g.cdf(r) + g.cdf_left(r)),
    }
}

/// Minimum of `w·h(lo) + (1−w)·h(hi)` over two-point, mean-`r*` type
/// distributions supported on `points`; `payoff[i]` is Sender's payoff at
/// `points[i]`. `points` must be sorted and contain a point on each side of `r*`.
pub fn min_over_pairs(points: &[f64], payoff: &[f64], r_star: f64) -> (f64, NatureResponse) {
    let split = points.partition_point(|&p| p < r_star);
    let mut best = (f64::INFINITY, NatureResponse::point(r_star));
    for i in 0..points.len() {
        if points[i] == r_star {
            if payoff[i] < best.0 {
                best = (payoff[i], NatureResponse::point(r_star));
            }
        }
    }
    for i in 0..split {
        for j in split..points.len() {
            if points[j] <= r_star {
                continue;
            }
            let t = NatureResponse::spanning(points[i], points[j], r_star);
            let v = t.weight_lo * payoff[i] + (1.0 - t.weight_lo) * payoff[j];
            if v < best.0 {
                best = (v, t);
            }
        }
    }
    best
}

/// Worst-case payoff of `g` when Nature may place types on `points ∪ {r*}`.
pub fn pair_enumeration_value(
    g: &MixedDistribution,
    r_star: f64,
    tie: TieRule,
    points: &[f64],
) -> (f64, NatureResponse) {
    let mut pts: Vec<f64> = points.iter().copied().chain(std::iter::once(r_star)).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let payoff: Vec<f64> = pts.iter().map(|&r| act_probability(g, r, tie)).collect();
    min_over_pairs(&pts, &payoff, r_star)
}

/// `k / (n − 1)` for `k = 0..n`.
pub fn unit_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| k as f64 / (n - 1) as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_ties() {
        assert_eq!(payoff_kernel(0.5, 0.5, TieRule::Against), 0.0);
        assert_eq!(payoff_kernel(0.5, 0.5, TieRule::Favor), 1.0);
        assert_eq!(payoff_kernel(0.5, 0.5, TieRule::Even), 0.5);
        assert_eq!(payoff_kernel(0.6, 0.5, TieRule::Against), 1.0);
        assert_eq!(payoff_kernel(0.4, 0.5, TieRule::Favor), 0.0);
    }

    #[test]
    fn pair_value_matches_envelope_for_against() {
        let g = MixedDistribution::uniform(0.0, 0.8).unwrap();
        let (v, t) = pair_enumeration_value(&g, 0.3, TieRule::Against, &unit_grid(201));
        assert!((v - 0.625).abs() < 1e-12);
        // Every pair spanning r* inside [0, 0.8] ties on a linear CDF.
        assert!((t.mean() - 0.3).abs() < 1e-12);
        assert!((t.payoff_against(&g) - 0.375).abs() < 1e-12);
    }

    #[test]
    fn favor_rewards_atom_at_one() {
        let g = MixedDistribution::from_parts(
            &[crate::dist::Atom { at: 0.0, mass: 0.7 }, crate::dist::Atom { at: 1.0, mass: 0.3 }],
            &[],
        )
        .unwrap();
        let (fav, _) = pair_enumeration_value(&g, 0.6, TieRule::Favor, &unit_grid(201));
        let (ag, _) = pair_enumeration_value(&g, 0.6, TieRule::Against, &unit_grid(201));
        assert!((fav - 0.3).abs() < 1e-12);
        assert!((ag - 0.3 * 0.4).abs() < 1e-12);
    }
}
