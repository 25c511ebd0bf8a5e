use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::intersect::{intersections, IntersectionPair};
use super::params::{ell_lower_bound, v_at, DtuParams};
use crate::dist::{is_mpc_with_points, sender_value, ContinuousPrior, MixedDistribution};
use crate::error::{Error, Result};
use crate::numeric::{bisect, golden_section_max};

/// Tolerance of the Bayes-plausibility post-check on returned DTUs.
pub const MPC_TOL: f64 = 1e-8;
const ELL_SCAN_STEPS: usize = 256;
/// Intercepts evaluated before golden-section refinement.
pub const Y_GRID: usize = 64;
const Y_MARGIN: f64 = 1e-6;

/// Which constraint pins down the minimal lower truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BindingCase {
    /// `v(q₁(ℓ), ℓ) = 0`.
    RootOfV,
    /// `ℓ` sits at the bottom of its admissible range (`ℓ^min_y`, or 0 when
    /// `y ≤ 1 − 2π`).
    EllMin,
}

/// Minimal-slope Bayes-plausible DTU for a fixed intercept.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YOptimalResult {
    pub params: DtuParams,
    pub binding_case: BindingCase,
    /// `v(q₁, ℓ)`; infinite when the line never meets the prior.
    pub v_at_q1: f64,
    pub intersections: IntersectionPair,
}

impl YOptimalResult {
    pub fn distribution(&self) -> MixedDistribution {
        self.params.distribution()
    }

    /// Worst-case Sender payoff at `r*`.
    pub fn value(&self, r_star: f64) -> f64 {
        sender_value(&self.distribution(), r_star)
    }
}

struct Probe {
    params: DtuParams,
    cut: IntersectionPair,
    phi: f64,
}

fn probe(prior: &ContinuousPrior, y: f64, ell: f64) -> Result<Probe> {
    let params = DtuParams::new(y, ell, prior.mean())?;
    let cut = intersections(params.beta, y, prior);
    let phi = if cut.count == 0 { f64::INFINITY } else { v_at(cut.q1, &params, prior) };
    Ok(Probe { params, cut, phi })
}

/// Bayes-plausibility of a DTU, also checked at its intersections with the prior.
pub fn dtu_is_mpc(p: &DtuParams, prior: &ContinuousPrior, tol: f64) -> bool {
    let cut = intersections(p.beta, p.y, prior);
    let extra: Vec<f64> = [cut.q1, cut.q2].into_iter().filter(|q| q.is_finite()).collect();
    is_mpc_with_points(&p.distribution(), prior, tol, &extra).holds
}

/// Minimal lower truncation `ℓ` making the intercept-`y` DTU Bayes-plausible.
pub fn solve_y_optimal(prior: &ContinuousPrior, y: f64, tol: f64) -> Result<YOptimalResult> {
    if !(0.0..1.0).contains(&y) {
        return Err(Error::Domain(format!("intercept y = {y} outside [0, 1)")));
    }
    let pi = prior.mean();
    let lo = ell_lower_bound(y, pi)?;
    let first = probe(prior, y, lo)?;
    let finish = |p: Probe, case: BindingCase| -> Result<YOptimalResult> {
        if !dtu_is_mpc(&p.params, prior, MPC_TOL) {
            return Err(Error::NoSolution(format!(
                "DTU with y = {y}, ell = {} fails the Bayes-plausibility check",
                p.params.ell
            )));
        }
        Ok(YOptimalResult { params: p.params, binding_case: case, v_at_q1: p.phi, intersections: p.cut })
    };
    if first.phi >= 0.0 {
        let case = if first.phi.abs() <= MPC_TOL { BindingCase::RootOfV } else { BindingCase::EllMin };
        return finish(first, case);
    }

    let step = (pi - lo) / ELL_SCAN_STEPS as f64;
    let mut prev = lo;
    for k in 1..=ELL_SCAN_STEPS {
        let ell = if k == ELL_SCAN_STEPS { pi } else { lo + step * k as f64 };
        let p = probe(prior, y, ell)?;
        if p.phi >= 0.0 {
            let phi = |l: f64| probe(prior, y, l).map(|p| p.phi).unwrap_or(f64::NAN);
            let (_, hi) = bisect(phi, prev, ell, tol);
            return finish(probe(prior, y, hi)?, BindingCase::RootOfV);
        }
        prev = ell;
    }
    Err(Error::NoSolution(format!("no Bayes-plausible DTU with intercept {y}")))
}

/// Largest intercept searched: `min(1 − f(1), 1) − 1e-6`.
pub fn y_upper(prior: &ContinuousPrior) -> f64 {
    (1.0 - prior.density(1.0) - Y_MARGIN).min(1.0 - Y_MARGIN).max(0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverallResult {
    pub best: YOptimalResult,
    pub value: f64,
    /// `(y, value)` on the search grid; failed intercepts are omitted.
    pub y_profile: Vec<(f64, f64)>,
    pub warnings: Vec<String>,
}

/// Best y-optimal DTU at `r*` over intercepts in `[0, ȳ]`.
pub fn solve_overall(prior: &ContinuousPrior, r_star: f64, tol: f64) -> Result<OverallResult> {
    if !(r_star > 0.0 && r_star < 1.0) {
        return Err(Error::Domain(format!("r_star = {r_star} outside (0, 1)")));
    }
    let mut warnings = Vec::new();
    if r_star < prior.mean() {
        warnings.push(format!(
            "r* = {r_star} is below the prior mean {}; an optimal DTU is not guaranteed to exist",
            prior.mean()
        ));
    }
    if !(prior.density(1.0) > 0.0) {
        warnings.push("prior density vanishes at 1; an optimal DTU is not guaranteed to exist".into());
    }
    let y_hi = y_upper(prior);
    let ys: Vec<f64> = (0..Y_GRID).map(|i| y_hi * i as f64 / (Y_GRID - 1) as f64).collect();
    let solved: Vec<Option<(f64, YOptimalResult, f64)>> = ys
        .par_iter()
        .map(|&y| match solve_y_optimal(prior, y, tol) {
            Ok(r) => Some((y, r, r.value(r_star))),
            Err(e) => {
                log::debug!("y = {y}: {e}");
                None
            }
        })
        .collect();
    let profile: Vec<(f64, f64)> = solved.iter().flatten().map(|(y, _, v)| (*y, *v)).collect();
    let (best_idx, &(_, mut best, mut best_value)) = solved
        .iter()
        .enumerate()
        .filter_map(|(i, s)| s.as_ref().map(|s| (i, s)))
        .fold(None, |acc: Option<(usize, &(f64, YOptimalResult, f64))>, (i, s)| match acc {
            Some((_, b)) if b.2 >= s.2 => acc,
            _ => Some((i, s)),
        })
        .ok_or_else(|| Error::NoSolution("no intercept produced a Bayes-plausible DTU".into()))?;

    let a = ys[best_idx.saturating_sub(1)];
    let b = ys[(best_idx + 1).min(Y_GRID - 1)];
    if b > a {
        let objective = |y: f64| {
            solve_y_optimal(prior, y, tol).map(|r| r.value(r_star)).unwrap_or(f64::NEG_INFINITY)
        };
        let (y_star, _) = golden_section_max(objective, a, b, tol.max(1e-10));
        if let Ok(r) = solve_y_optimal(prior, y_star, tol) {
            let v = r.value(r_star);
            if v > best_value {
                best = r;
                best_value = v;
            }
        }
    }
    Ok(OverallResult { best, value: best_value, y_profile: profile, warnings })
}

/// Checks of the shape conditions on the prior used by the DTU results.
pub fn regularity_warnings(prior: &ContinuousPrior) -> Vec<String> {
    let pi = prior.mean();
    let f0 = prior.density(0.0);
    let slope0 = prior.density_slope_at_zero();
    let mut out = Vec::new();
    if !(slope0 < 1.0 - 2.0 * pi) {
        out.push(format!("f'(0) = {slope0:.6} is not below 1 - 2pi = {:.6}", 1.0 - 2.0 * pi));
    }
    if !(f0 < 1.0 - 2.0 * pi) {
        out.push(format!("f(0) = {f0:.6} is not below 1 - 2pi = {:.6}", 1.0 - 2.0 * pi));
    }
    if !(f0 < 1.0 / (2.0 * pi)) {
        out.push(format!("f(0) = {f0:.6} is not below 1/(2pi) = {:.6}", 1.0 / (2.0 * pi)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn concave_prior_takes_plain_utu() {
        let p = ContinuousPrior::polynomial_cdf(vec![0.0, 2.0, -1.0]).unwrap();
        let r = solve_y_optimal(&p, 0.0, 1e-12).unwrap();
        assert_eq!(r.params.ell, 0.0);
        assert_eq!(r.binding_case, BindingCase::EllMin);
        let u = MixedDistribution::uniform(0.0, 2.0 / 3.0).unwrap();
        assert!(r.distribution().cdf_distance(&u) < 1e-12);
    }

    #[test]
    fn normal_prior_binds_on_v() {
        let p = ContinuousPrior::truncated_normal(1.0 / 3.0, 0.14).unwrap();
        let r = solve_y_optimal(&p, 0.0, 1e-12).unwrap();
        assert!(r.params.ell > 0.0);
        assert_eq!(r.binding_case, BindingCase::RootOfV);
        assert!(r.v_at_q1.abs() <= 1e-8);
    }
}
