use serde::{Deserialize, Serialize};

use crate::dist::{ContinuousPrior, PRIOR_GRID};
use crate::numeric::{bisect, golden_section_max};

const ROOT_TOL: f64 = 1e-12;
/// Roots closer than this are reported as one tangency.
pub const TANGENCY_TOL: f64 = 1e-6;

/// Smallest and largest solutions of `βq + y = F(q)` on `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntersectionPair {
    pub q1: f64,
    pub q2: f64,
    pub count: u8,
}

/// Intersections of the line `βq + y` with the prior CDF on `(0, 1]`.
pub fn intersections(beta: f64, y: f64, prior: &ContinuousPrior) -> IntersectionPair {
    let n = PRIOR_GRID;
    let grid = prior.cdf_grid();
    let q = |k: usize| k as f64 / n as f64;
    let h = |x: f64| beta * x + y - prior.cdf(x);
    let mut vals: Vec<f64> = (0..=n).map(|k| beta * q(k) + y - grid[k]).collect();
    if vals[n].abs() <= ROOT_TOL {
        vals[n] = 0.0;
    }
    // With y = 0 the line meets F at the origin, which is not counted.
    let start = if y == 0.0 { 1 } else { 0 };

    let mut roots = Vec::new();
    for k in start..n {
        let (a, b) = (vals[k], vals[k + 1]);
        if a == 0.0 && k > 0 {
            roots.push(q(k));
        } else if a * b < 0.0 {
            let (lo, hi) = bisect(h, q(k), q(k + 1), ROOT_TOL);
            roots.push(0.5 * (lo + hi));
        }
    }
    if vals[n] == 0.0 {
        roots.push(1.0);
    }
    // Both crossings can fall inside one pair of cells near a tangency.
    for k in start.max(1)..n {
        let (a, b, c) = (vals[k - 1], vals[k], vals[k + 1]);
        if b > 0.0 && b <= a && b <= c && a > 0.0 && c > 0.0 {
            let (xm, neg_min) = golden_section_max(|x| -h(x), q(k - 1), q(k + 1), 1e-13);
            let min = -neg_min;
            if min < 0.0 {
                let (l1, h1) = bisect(h, q(k - 1), xm, ROOT_TOL);
                let (l2, h2) = bisect(h, xm, q(k + 1), ROOT_TOL);
                roots.push(0.5 * (l1 + h1));
                roots.push(0.5 * (l2 + h2));
            } else if min <= ROOT_TOL {
                roots.push(xm);
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    match (roots.first(), roots.last()) {
        (Some(&q1), Some(&q2)) => {
            let count = if q2 - q1 <= TANGENCY_TOL { 1 } else { 2 };
            IntersectionPair { q1, q2, count }
        }
        _ => IntersectionPair { q1: f64::NAN, q2: f64::NAN, count: 0 },
    }
}
