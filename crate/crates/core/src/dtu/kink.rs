use super::params::DtuParams;
use crate::dist::{Atom, MixedDistribution, Segment};
use crate::error::{Error, Result};

/// Perturbs a DTU around its kink at `ℓ`.
///
/// Mass `2·mass_shift` is taken from the atom at `ℓ` and spread uniformly,
/// half on `[ℓ − ε, ℓ)` and half on `(ℓ, ℓ + ε]`. The CDF is unchanged
/// outside `(ℓ − ε, ℓ + ε)`, lies above the DTU on `[ℓ − ε, ℓ)` and below it
/// on `[ℓ, ℓ + ε)`; the mean is preserved exactly.
pub fn kink_deviation(p: &DtuParams, eps: f64, mass_shift: f64) -> Result<MixedDistribution> {
    if !(p.y > 0.0 && p.ell > 0.0) {
        return Err(Error::Parameter(format!(
            "kink deviation needs y > 0 and ell > 0, got y = {}, ell = {}",
            p.y, p.ell
        )));
    }
    let window = p.ell.min(p.q_top - p.ell);
    if !(eps > 0.0 && eps < window) {
        return Err(Error::Parameter(format!("eps = {eps} must lie in (0, {window})")));
    }
    if !(mass_shift >= 0.0) {
        return Err(Error::Parameter(format!("mass_shift = {mass_shift} is negative")));
    }
    let atom = p.atom_mass() - 2.0 * mass_shift;
    if atom < 0.0 {
        return Err(Error::Parameter(format!(
            "mass_shift = {mass_shift} exceeds half the atom mass {}",
            p.atom_mass()
        )));
    }
    let base = p.distribution();
    if mass_shift == 0.0 {
        return Ok(base);
    }
    let mut atoms = vec![Atom { at: p.ell, mass: atom }];
    atoms.retain(|a| a.mass > 0.0);
    let mut segs: Vec<Segment> = base.segments().to_vec();
    segs.push(Segment { lo: p.ell - eps, hi: p.ell, mass: mass_shift });
    segs.push(Segment { lo: p.ell, hi: p.ell + eps, mass: mass_shift });
    MixedDistribution::from_parts(&atoms, &segs)
}
