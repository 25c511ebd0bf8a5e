//! C ABI over `persuasion-core`.
//!
//! Every function returns a [`BpStatus`] and writes results through out
//! pointers. On failure, [`bp_last_error_message`] describes the error on
//! the calling thread. Handles are opaque and owned by the caller, who
//! releases them with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use persuasion_core::binary::{optimal_posterior, BinaryScenario};
use persuasion_core::cli::{solve_report, Job, Overrides, ScenarioFile};
use persuasion_core::dist::{nature_best_response, sender_value, Atom, ContinuousPrior, MixedDistribution, Segment};
use persuasion_core::dtu::{classify_and_solve, Regime};
use persuasion_core::oracle::{oracle_solve, OraclePrior, TieRule};
use persuasion_core::Error;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BpStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    InvalidDistribution = 3,
    Parameter = 4,
    NoSolution = 5,
    Oracle = 6,
    Parse = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BpTieRule {
    Against = 0,
    Favor = 1,
    Even = 2,
}

/// Solution family for a continuous prior.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BpRegime {
    FullDisclosure = 0,
    ConcaveUniform = 1,
    SmallRStar = 2,
    DtuUndominated = 3,
    Heuristic = 4,
}

/// Worst-case receiver types: mass `weight_lo` at `q_lo`, the rest at `q_hi`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BpNatureResponse {
    pub q_lo: f64,
    pub q_hi: f64,
    pub weight_lo: f64,
}

/// Opaque distribution of posterior means.
pub struct BpMixed(MixedDistribution);

/// Opaque continuous prior.
pub struct BpPrior(ContinuousPrior);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> BpStatus {
    match e {
        Error::Domain(_) => BpStatus::Domain,
        Error::InvalidDistribution(_) => BpStatus::InvalidDistribution,
        Error::Parameter(_) => BpStatus::Parameter,
        Error::NoSolution(_) => BpStatus::NoSolution,
        Error::Oracle(_) => BpStatus::Oracle,
        Error::Parse(_) => BpStatus::Parse,
    }
}

enum Fail {
    Null(&'static str),
    Core(Error),
    Status(BpStatus, String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> BpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BpStatus::Ok,
        Ok(Err(Fail::Null(what))) => {
            set_error(&format!("null pointer: {what}"));
            BpStatus::NullPointer
        }
        Ok(Err(Fail::Core(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Status(s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            BpStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn write<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &'static str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn tie(t: BpTieRule) -> TieRule {
    match t {
        BpTieRule::Against => TieRule::Against,
        BpTieRule::Favor => TieRule::Favor,
        BpTieRule::Even => TieRule::Even,
    }
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Builds a distribution from atoms `(atom_at[i], atom_mass[i])` and uniform
/// segments `(seg_lo[i], seg_hi[i], seg_mass[i])`.
///
/// # Safety
/// Each array must hold at least its stated number of elements; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bp_mixed_new(
    atom_at: *const f64,
    atom_mass: *const f64,
    n_atoms: usize,
    seg_lo: *const f64,
    seg_hi: *const f64,
    seg_mass: *const f64,
    n_segments: usize,
    out: *mut *mut BpMixed,
) -> BpStatus {
    guard(|| {
        let at = slice(atom_at, n_atoms, "atom_at")?;
        let am = slice(atom_mass, n_atoms, "atom_mass")?;
        let lo = slice(seg_lo, n_segments, "seg_lo")?;
        let hi = slice(seg_hi, n_segments, "seg_hi")?;
        let sm = slice(seg_mass, n_segments, "seg_mass")?;
        let atoms: Vec<Atom> = at.iter().zip(am).map(|(&at, &mass)| Atom { at, mass }).collect();
        let segs: Vec<Segment> =
            lo.iter().zip(hi).zip(sm).map(|((&lo, &hi), &mass)| Segment { lo, hi, mass }).collect();
        let d = MixedDistribution::from_parts(&atoms, &segs)?;
        write(out, boxed(BpMixed(d)), "out")
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bp_mixed_uniform(lo: f64, hi: f64, out: *mut *mut BpMixed) -> BpStatus {
    guard(|| write(out, boxed(BpMixed(MixedDistribution::uniform(lo, hi)?)), "out"))
}

/// # Safety
/// `h` must come from this library and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn bp_mixed_free(h: *mut BpMixed) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Right-continuous CDF at `q`.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bp_mixed_cdf(h: *const BpMixed, q: f64, out: *mut f64) -> BpStatus {
    guard(|| write(out, deref(h, "h")?.0.cdf(q), "out"))
}

/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bp_mixed_mean(h: *const BpMixed, out: *mut f64) -> BpStatus {
    guard(|| write(out, deref(h, "h")?.0.mean(), "out"))
}

/// `∫₀ˣ G`.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bp_mixed_cdf_integral(h: *const BpMixed, x: f64, out: *mut f64) -> BpStatus {
    guard(|| write(out, deref(h, "h")?.0.cdf_integral(x), "out"))
}

fn check_r(r_star: f64) -> Result<(), Fail> {
    if r_star > 0.0 && r_star < 1.0 {
        Ok(())
    } else {
        Err(Fail::Core(Error::Domain(format!("r_star = {r_star} must lie in (0, 1)"))))
    }
}

/// Worst-case sender payoff `1 − Ḡ(r*)`.
///
/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bp_sender_value(h: *const BpMixed, r_star: f64, out: *mut f64) -> BpStatus {
    guard(|| {
        check_r(r_star)?;
        write(out, sender_value(&deref(h, "h")?.0, r_star), "out")
    })
}

/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bp_nature_best_response(
    h: *const BpMixed,
    r_star: f64,
    out: *mut BpNatureResponse,
) -> BpStatus {
    guard(|| {
        check_r(r_star)?;
        let n = nature_best_response(&deref(h, "h")?.0, r_star);
        write(out, BpNatureResponse { q_lo: n.q_lo, q_hi: n.q_hi, weight_lo: n.weight_lo }, "out")
    })
}

/// Optimal posterior distribution for a binary prior with mean `pi`.
/// `out_distribution` may be null when only the value is needed.
///
/// # Safety
/// `out_value` must be writable; `out_distribution` writable or null.
#[no_mangle]
pub unsafe extern "C" fn bp_binary_optimal(
    pi: f64,
    r_star: f64,
    tie_rule: BpTieRule,
    out_value: *mut f64,
    out_distribution: *mut *mut BpMixed,
) -> BpStatus {
    guard(|| {
        let sol = optimal_posterior(&BinaryScenario::new(pi, r_star, tie(tie_rule))?);
        write(out_value, sol.value, "out_value")?;
        if !out_distribution.is_null() {
            out_distribution.write(boxed(BpMixed(sol.distribution)));
        }
        Ok(())
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bp_prior_truncated_normal(mu: f64, sigma: f64, out: *mut *mut BpPrior) -> BpStatus {
    guard(|| write(out, boxed(BpPrior(ContinuousPrior::truncated_normal(mu, sigma)?)), "out"))
}

/// CDF `Σ coeffs[k] qᵏ`.
///
/// # Safety
/// `coeffs` must hold `n` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bp_prior_polynomial_cdf(coeffs: *const f64, n: usize, out: *mut *mut BpPrior) -> BpStatus {
    guard(|| {
        let c = slice(coeffs, n, "coeffs")?.to_vec();
        write(out, boxed(BpPrior(ContinuousPrior::polynomial_cdf(c)?)), "out")
    })
}

/// Density interpolating `(q[i], f[i])`, rescaled to unit mass.
///
/// # Safety
/// `q` and `f` must hold `n` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bp_prior_piecewise_linear_density(
    q: *const f64,
    f: *const f64,
    n: usize,
    out: *mut *mut BpPrior,
) -> BpStatus {
    guard(|| {
        let q = slice(q, n, "q")?;
        let f = slice(f, n, "f")?;
        let knots: Vec<(f64, f64)> = q.iter().copied().zip(f.iter().copied()).collect();
        write(out, boxed(BpPrior(ContinuousPrior::piecewise_linear_density(knots)?)), "out")
    })
}

/// # Safety
/// `h` must come from this library and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn bp_prior_free(h: *mut BpPrior) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bp_prior_mean(h: *const BpPrior, out: *mut f64) -> BpStatus {
    guard(|| write(out, deref(h, "h")?.0.mean(), "out"))
}

/// Solves a continuous-prior problem under the against tie rule.
/// `out_regime` and `out_distribution` may be null.
///
/// # Safety
/// `prior` must be a live handle; out pointers writable or null as stated.
#[no_mangle]
pub unsafe extern "C" fn bp_solve_continuous(
    prior: *const BpPrior,
    r_star: f64,
    tol: f64,
    out_value: *mut f64,
    out_regime: *mut BpRegime,
    out_distribution: *mut *mut BpMixed,
) -> BpStatus {
    guard(|| {
        let p = deref(prior, "prior")?;
        if out_value.is_null() {
            return Err(Fail::Null("out_value"));
        }
        let sol = classify_and_solve(&p.0, r_star, tol)?;
        out_value.write(sol.value);
        if !out_regime.is_null() {
            out_regime.write(match sol.regime {
                Regime::FullDisclosure => BpRegime::FullDisclosure,
                Regime::ConcaveUniform => BpRegime::ConcaveUniform,
                Regime::SmallRStar => BpRegime::SmallRStar,
                Regime::DtuUndominated => BpRegime::DtuUndominated,
                Regime::Heuristic => BpRegime::Heuristic,
            });
        }
        if !out_distribution.is_null() {
            out_distribution.write(boxed(BpMixed(sol.distribution)));
        }
        Ok(())
    })
}

/// Value of the discretized game on an `n`-point grid for a binary prior.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bp_oracle_value_binary(
    pi: f64,
    r_star: f64,
    tie_rule: BpTieRule,
    n: usize,
    out: *mut f64,
) -> BpStatus {
    guard(|| {
        if !(pi > 0.0 && pi < 1.0) {
            return Err(Fail::Core(Error::Domain(format!("pi = {pi} must lie in (0, 1)"))));
        }
        let s = oracle_solve(OraclePrior::Binary { pi }, r_star, tie(tie_rule), n)?;
        write(out, s.value, "out")
    })
}

/// Oracle value for a continuous prior, with its prefix-integral constraints.
///
/// # Safety
/// `prior` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bp_oracle_value_prior(
    prior: *const BpPrior,
    r_star: f64,
    tie_rule: BpTieRule,
    n: usize,
    out: *mut f64,
) -> BpStatus {
    guard(|| {
        let p = deref(prior, "prior")?;
        let s = oracle_solve(OraclePrior::Continuous(&p.0), r_star, tie(tie_rule), n)?;
        write(out, s.value, "out")
    })
}

/// Solves a JSON scenario document and returns the JSON report. Release
/// the string with [`bp_string_free`].
///
/// # Safety
/// `scenario_json` must be a nul-terminated UTF-8 string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bp_solve_scenario_json(scenario_json: *const c_char, out: *mut *mut c_char) -> BpStatus {
    guard(|| {
        if scenario_json.is_null() {
            return Err(Fail::Null("scenario_json"));
        }
        let text = CStr::from_ptr(scenario_json)
            .to_str()
            .map_err(|e| Fail::Status(BpStatus::Parse, format!("scenario is not UTF-8: {e}")))?;
        let scenario = ScenarioFile::parse(text)?;
        let job = Job::new(scenario, &Overrides::default()).map_err(cli_fail)?;
        let report = solve_report(&job).map_err(cli_fail)?;
        let c = CString::new(report.to_json()).expect("JSON has no nul bytes");
        write(out, c.into_raw(), "out")
    })
}

fn cli_fail(e: persuasion_core::cli::CliError) -> Fail {
    let status = if e.code == persuasion_core::cli::EXIT_PARSE { BpStatus::Parse } else { BpStatus::Domain };
    Fail::Status(status, e.to_string())
}

/// # Safety
/// `s` must come from this library and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn bp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
