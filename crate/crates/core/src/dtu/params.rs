use serde::{Deserialize, Serialize};

use crate::dist::{Atom, ContinuousPrior, MixedDistribution, Segment};
use crate::error::{Error, Result};
use crate::numeric::{bisect, brent};

const DISCRIMINANT_TOL: f64 = 1e-14;
const ELL_MIN_TOL: f64 = 1e-12;

/// Slope of the mean-`π` DTU with intercept `y` and lower truncation `ℓ`.
pub fn beta_of(ell: f64, y: f64, pi: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&y) {
        return Err(Error::Domain(format!("intercept y = {y} outside [0, 1)")));
    }
    if !(ell >= 0.0 && ell <= pi * (1.0 + 1e-12)) {
        return Err(Error::Domain(format!("lower truncation {ell} outside [0, {pi}]")));
    }
    let a = pi - y * ell;
    let disc = a * a - ell * ell * (1.0 - y) * (1.0 - y);
    if disc < -DISCRIMINANT_TOL {
        return Err(Error::Domain(format!(
            "no mean-{pi} DTU with y = {y}, ell = {ell} (discriminant {disc})"
        )));
    }
    // Rationalized form of ((π − yℓ) − √disc)/ℓ²; finite at ℓ = 0.
    Ok((1.0 - y) * (1.0 - y) / (a + disc.max(0.0).sqrt()))
}

/// Lower truncation at which the DTU slope equals `1 − y`, so that the
/// upper truncation reaches 1. Defined for `y > 1 − 2π`.
pub fn ell_min(y: f64, pi: f64) -> Result<f64> {
    if !(y > 1.0 - 2.0 * pi && y < 1.0) {
        return Err(Error::Domain(format!(
            "minimum truncation needs y in (1 - 2pi, 1) = ({}, 1), got {y}",
            1.0 - 2.0 * pi
        )));
    }
    let target = 1.0 - y;
    let g = |ell: f64| beta_of(ell, y, pi).map(|b| b - target).unwrap_or(f64::NAN);
    let root = brent(g, 0.0, pi, ELL_MIN_TOL)?;
    // Near y = 1 the upper truncation is very sensitive to ℓ, so settle on
    // the float where β ≥ 1 − y (that is, q_top ≤ 1).
    let lo = (root - 4.0 * ELL_MIN_TOL).max(0.0);
    let hi = (root + 4.0 * ELL_MIN_TOL).min(pi);
    if g(lo) < 0.0 && g(hi) >= 0.0 {
        Ok(bisect(g, lo, hi, 0.0).1)
    } else {
        Ok(root)
    }
}

/// Smallest admissible lower truncation for intercept `y`.
pub fn ell_lower_bound(y: f64, pi: f64) -> Result<f64> {
    if y <= 1.0 - 2.0 * pi {
        Ok(0.0)
    } else {
        ell_min(y, pi)
    }
}

/// Double-truncated uniform: `G = 0` on `[0, ℓ)`, `βq + y` on `[ℓ, q_top)`, 1 above.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DtuParams {
    pub y: f64,
    pub ell: f64,
    pub beta: f64,
    pub q_top: f64,
    pub pi: f64,
}

impl DtuParams {
    /// Mean-`π` DTU with the given intercept and lower truncation.
    pub fn new(y: f64, ell: f64, pi: f64) -> Result<Self> {
        if !(pi > 0.0 && pi < 1.0) {
            return Err(Error::Domain(format!("pi = {pi} outside (0, 1)")));
        }
        let beta = beta_of(ell, y, pi)?;
        let q_top = (1.0 - y) / beta;
        if q_top > 1.0 + 1e-9 {
            return Err(Error::Parameter(format!(
                "upper truncation {q_top} exceeds 1 (y = {y}, ell = {ell}); ell must be at least the minimum truncation"
            )));
        }
        let atom = beta * ell + y;
        if atom > 1.0 + 1e-12 {
            return Err(Error::Parameter(format!("atom mass {atom} at ell exceeds 1")));
        }
        Ok(DtuParams { y, ell, beta, q_top: q_top.min(1.0), pi })
    }

    pub fn atom_mass(&self) -> f64 {
        (self.beta * self.ell + self.y).min(1.0)
    }

    pub fn cdf(&self, q: f64) -> f64 {
        if q < self.ell {
            0.0
        } else if q < self.q_top {
            self.beta * q + self.y
        } else {
            1.0
        }
    }

    /// `∫₀ˣ G` in closed form.
    pub fn cdf_integral(&self, x: f64) -> f64 {
        if x <= self.ell {
            return 0.0;
        }
        let upto = x.min(self.q_top);
        let body = 0.5 * self.beta * (upto * upto - self.ell * self.ell) + self.y * (upto - self.ell);
        body + (x - self.q_top).max(0.0)
    }

    pub fn distribution(&self) -> MixedDistribution {
        let atom = self.atom_mass();
        let atoms = [Atom { at: self.ell, mass: atom }];
        let segs = if self.q_top > self.ell {
            vec![Segment { lo: self.ell, hi: self.q_top, mass: 1.0 - atom }]
        } else {
            vec![]
        };
        MixedDistribution::from_parts(&atoms, &segs).expect("DTU parameters define a valid distribution")
    }
}

/// Atom at `ℓ` plus a uniform segment up to `q_top`.
pub fn dtu_distribution(p: &DtuParams) -> MixedDistribution {
    p.distribution()
}

/// `∫₀ˣ F − ∫₀ˣ G` for the DTU `p`.
pub fn v_at(x: f64, p: &DtuParams, prior: &ContinuousPrior) -> f64 {
    let x = x.clamp(0.0, 1.0);
    prior.cdf_integral(x) - p.cdf_integral(x)
}
