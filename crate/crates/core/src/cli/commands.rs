use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use super::report::{Diagnostics, OracleBlock, SolveReport, VerifyReport, VerifyStatus};
use super::scenario::{OracleSpec, Prior, ScenarioFile, DEFAULT_TOL};
use crate::binary::{optimal_posterior, BinaryScenario};
use crate::dist::{ContinuousPrior, MixedDistribution};
use crate::dtu::{classify_and_solve, regularity_warnings, solve_y_optimal, Regime};
use crate::error::Error;
use crate::oracle::{oracle_solve, OraclePrior, TieRule};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAIL: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
    /// Shape warnings about the prior, printed alongside domain failures.
    pub warnings: Vec<String>,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { code: EXIT_PARSE, message: message.into(), warnings: Vec::new() }
    }

    fn with_warnings(mut self, warnings: Vec<String>) -> Self {
        self.warnings = warnings;
        self
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Parse(_)) { EXIT_PARSE } else { EXIT_DOMAIN };
        CliError { code, message: e.to_string(), warnings: Vec::new() }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)?;
        for w in &self.warnings {
            write!(f, "\nwarning: {w}")?;
        }
        Ok(())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Command-line values that take precedence over the scenario file.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub tie: Option<TieRule>,
    pub oracle_n: Option<usize>,
    pub tol: Option<f64>,
}

/// A scenario with overrides applied and the prior built.
#[derive(Debug, Clone)]
pub struct Job {
    pub scenario: ScenarioFile,
    pub prior: Prior,
    /// Tolerance handed to the DTU searches.
    pub tol: f64,
}

pub fn read_scenario(path: &Path) -> CliResult<ScenarioFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(ScenarioFile::parse(&text)?)
}

impl Job {
    pub fn new(mut scenario: ScenarioFile, o: &Overrides) -> CliResult<Self> {
        if let Some(t) = o.tie {
            scenario.tie_rule = t;
        }
        if let Some(n) = o.oracle_n {
            let tol = scenario.oracle.map_or(DEFAULT_TOL, |s| s.tol);
            scenario.oracle = Some(OracleSpec { n, tol });
        }
        if let (Some(tol), Some(spec)) = (o.tol, scenario.oracle.as_mut()) {
            spec.tol = tol;
        }
        let tol = o.tol.or(scenario.oracle.map(|s| s.tol)).unwrap_or(DEFAULT_TOL);
        if !(tol > 0.0) {
            return Err(CliError::usage(format!("tolerance must be positive, got {tol}")));
        }
        let prior = scenario.prior.build()?;
        let job = Job { scenario, prior, tol };
        job.scenario.validate().map_err(|e| CliError::from(e).with_warnings(job.prior_warnings()))?;
        if matches!(job.prior, Prior::Continuous(_)) && job.scenario.tie_rule != TieRule::Against {
            return Err(CliError {
                code: EXIT_DOMAIN,
                message: format!("tie rule {} is only available for binary priors", job.scenario.tie_rule),
                warnings: job.prior_warnings(),
            });
        }
        Ok(job)
    }

    fn prior_warnings(&self) -> Vec<String> {
        match &self.prior {
            Prior::Binary { .. } => Vec::new(),
            Prior::Continuous(p) => {
                let mut w = p.warnings().to_vec();
                w.extend(regularity_warnings(p));
                w
            }
        }
    }

    fn oracle_prior(&self) -> OraclePrior<'_> {
        match &self.prior {
            Prior::Binary { pi } => OraclePrior::Binary { pi: *pi },
            Prior::Continuous(p) => OraclePrior::Continuous(p),
        }
    }

    fn fail(&self, e: Error) -> CliError {
        CliError::from(e).with_warnings(self.prior_warnings())
    }
}

/// Closed-form or DTU solution without the oracle block.
fn solve_only(job: &Job) -> CliResult<(SolveReport, Option<Regime>)> {
    let s = &job.scenario;
    let mut report = SolveReport {
        prior_kind: job.prior.kind().to_string(),
        pi: job.prior.mean(),
        r_star: s.r_star,
        tie_rule: s.tie_rule,
        distribution: MixedDistribution::point(job.prior.mean()).expect("mean lies in [0, 1]"),
        value: 0.0,
        flags: Vec::new(),
        note: String::new(),
        oracle: None,
        diagnostics: None,
        warnings: Vec::new(),
    };
    match &job.prior {
        Prior::Binary { pi } => {
            let sol = optimal_posterior(&BinaryScenario::new(*pi, s.r_star, s.tie_rule)?);
            report.distribution = sol.distribution;
            report.value = sol.value;
            report.flags.push("closed_form".into());
            if sol.unique {
                report.flags.push("unique".into());
            }
            report.note = sol.condition_note;
            Ok((report, None))
        }
        Prior::Continuous(prior) => {
            let sol = classify_and_solve(prior, s.r_star, job.tol).map_err(|e| job.fail(e))?;
            report.flags.push(sol.regime.flag().into());
            if sol.unique {
                report.flags.push("unique".into());
            }
            report.note = regime_note(sol.regime).into();
            report.diagnostics = sol.dtu.map(|d| {
                let finite = |x: f64| x.is_finite().then_some(x);
                Diagnostics {
                    ell: d.params.ell,
                    y: d.params.y,
                    beta: d.params.beta,
                    q_top: d.params.q_top,
                    q1: finite(d.intersections.q1),
                    q2: finite(d.intersections.q2),
                    v_residual: finite(d.v_at_q1),
                    binding_case: d.binding_case,
                    q1_zero: sol.q1_zero,
                    oracle_bound: sol.oracle_bound,
                }
            });
            report.distribution = sol.distribution;
            report.value = sol.value;
            report.warnings = sol.warnings;
            Ok((report, Some(sol.regime)))
        }
    }
}

fn regime_note(r: Regime) -> &'static str {
    match r {
        Regime::FullDisclosure => "prior CDF lies below the diagonal; full disclosure attains 1 - r*",
        Regime::ConcaveUniform => "concave prior with r* <= pi; U[0, 2pi] is the unique optimum",
        Regime::SmallRStar => "r* <= q1 of the 0-optimal DTU; that DTU is optimal",
        Regime::DtuUndominated => "r* >= pi; the best DTU is not dominated by any distribution",
        Regime::Heuristic => "intermediate r*; best DTU reported without an optimality guarantee",
    }
}

fn oracle_block(job: &Job, spec: OracleSpec, solver_value: f64) -> CliResult<OracleBlock> {
    let o = oracle_solve(job.oracle_prior(), job.scenario.r_star, job.scenario.tie_rule, spec.n)
        .map_err(|e| job.fail(e))?;
    Ok(OracleBlock { value: o.value, gap: (o.value - solver_value).abs(), n: o.n, duality_gap: o.gap_certificate })
}

pub fn solve_report(job: &Job) -> CliResult<SolveReport> {
    let (mut report, _) = solve_only(job)?;
    if let Some(spec) = job.scenario.oracle {
        report.oracle = Some(oracle_block(job, spec, report.value)?);
    }
    Ok(report)
}

/// Solver against oracle at threshold `3/n`; heuristic solutions only report the gap.
pub fn verify_report(job: &Job) -> CliResult<VerifyReport> {
    let (report, regime) = solve_only(job)?;
    let spec = job.scenario.oracle_or_default();
    let block = oracle_block(job, spec, report.value)?;
    let threshold = 3.0 / spec.n as f64;
    let status = if regime == Some(Regime::Heuristic) {
        VerifyStatus::Heuristic
    } else if block.gap <= threshold {
        VerifyStatus::Pass
    } else {
        VerifyStatus::Fail
    };
    Ok(VerifyReport {
        solver_value: report.value,
        oracle_value: block.value,
        gap: block.gap,
        threshold,
        n: spec.n,
        duality_gap: block.duality_gap,
        status,
        flags: report.flags,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepAxis {
    Pi,
    RStar,
    Y,
}

impl SweepAxis {
    fn column(self) -> &'static str {
        match self {
            SweepAxis::Pi => "pi",
            SweepAxis::RStar => "r_star",
            SweepAxis::Y => "y",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
    pub with_oracle: bool,
}

fn sweep_points(spec: &SweepSpec) -> CliResult<Vec<f64>> {
    let SweepSpec { axis, min, max, steps, .. } = *spec;
    if steps == 0 || !min.is_finite() || !max.is_finite() || min > max || (steps > 1 && min == max) {
        return Err(CliError::usage(format!("bad sweep range [{min}, {max}] with {steps} steps")));
    }
    let in_domain = match axis {
        SweepAxis::Pi | SweepAxis::RStar => min > 0.0 && max < 1.0,
        SweepAxis::Y => min >= 0.0 && max < 1.0,
    };
    if !in_domain {
        return Err(CliError::usage(format!("sweep range [{min}, {max}] leaves the domain of {}", axis.column())));
    }
    if steps == 1 {
        return Ok(vec![min]);
    }
    Ok((0..steps).map(|i| min + (max - min) * i as f64 / (steps - 1) as f64).collect())
}

struct Row {
    x: f64,
    value: f64,
    oracle: Option<f64>,
    flags: Vec<String>,
}

fn sweep_row(job: &Job, spec: &SweepSpec, x: f64) -> Row {
    let mut scenario = job.scenario.clone();
    scenario.oracle = None;
    let result = match spec.axis {
        SweepAxis::Y => {
            let Prior::Continuous(prior) = &job.prior else { unreachable!("checked by the caller") };
            solve_y_optimal(prior, x, job.tol)
                .map(|r| (r.value(scenario.r_star), vec![binding_flag(r.binding_case).to_string()]))
                .map_err(|e| e.to_string())
        }
        SweepAxis::Pi | SweepAxis::RStar => {
            let mut sub = job.clone();
            if spec.axis == SweepAxis::Pi {
                sub.prior = Prior::Binary { pi: x };
            } else {
                sub.scenario.r_star = x;
            }
            solve_only(&sub).map(|(r, _)| (r.value, r.flags)).map_err(|e| e.message)
        }
    };
    let (value, flags) = result.unwrap_or_else(|e| {
        log::warn!("{} = {x}: {e}", spec.axis.column());
        (f64::NAN, vec!["no_solution".to_string()])
    });
    let oracle = spec.with_oracle.then(|| {
        let (prior, r) = match spec.axis {
            SweepAxis::Pi => (Prior::Binary { pi: x }, scenario.r_star),
            SweepAxis::RStar => (job.prior.clone(), x),
            SweepAxis::Y => (job.prior.clone(), scenario.r_star),
        };
        let op = match &prior {
            Prior::Binary { pi } => OraclePrior::Binary { pi: *pi },
            Prior::Continuous(p) => OraclePrior::Continuous(p),
        };
        let n = job.scenario.oracle_or_default().n;
        oracle_solve(op, r, scenario.tie_rule, n).map_or(f64::NAN, |o| o.value)
    });
    Row { x, value, oracle, flags }
}

fn binding_flag(b: crate::dtu::BindingCase) -> &'static str {
    match b {
        crate::dtu::BindingCase::RootOfV => "root_of_v",
        crate::dtu::BindingCase::EllMin => "ell_min",
    }
}

/// CSV with one row per sweep value, in increasing order.
pub fn sweep_csv(job: &Job, spec: &SweepSpec) -> CliResult<String> {
    match (spec.axis, &job.prior) {
        (SweepAxis::Pi, Prior::Continuous(_)) => {
            return Err(CliError::usage("the pi axis needs a binary prior; a continuous prior fixes its mean"))
        }
        (SweepAxis::Y, Prior::Binary { .. }) => return Err(CliError::usage("the y axis needs a continuous prior")),
        _ => {}
    }
    let xs = sweep_points(spec)?;
    let rows: Vec<Row> = xs.par_iter().map(|&x| sweep_row(job, spec, x)).collect();
    let mut out = String::new();
    out.push_str(spec.axis.column());
    out.push_str(",value");
    if spec.with_oracle {
        out.push_str(",oracle_value");
    }
    out.push_str(",flags\n");
    for r in rows {
        write!(out, "{:.16e},{:.16e}", r.x, r.value).unwrap();
        if let Some(o) = r.oracle {
            write!(out, ",{o:.16e}").unwrap();
        }
        writeln!(out, ",{}", r.flags.join(";")).unwrap();
    }
    Ok(out)
}

fn prior_cdf(prior: &Prior, q: f64) -> f64 {
    match prior {
        Prior::Binary { pi } => {
            if q >= 1.0 {
                1.0
            } else {
                1.0 - pi
            }
        }
        Prior::Continuous(p) => ContinuousPrior::cdf(p, q),
    }
}

/// `q, F(q), G*(q), Ḡ*(q)` on `points` equispaced values of `[0, 1]`.
pub fn plot_csv(job: &Job, points: usize) -> CliResult<String> {
    if points < 2 {
        return Err(CliError::usage(format!("plotdata needs at least 2 points, got {points}")));
    }
    let (report, _) = solve_only(job)?;
    let g = &report.distribution;
    let env = g.envelope();
    let mut out = String::from("q,F,G,G_env\n");
    for i in 0..points {
        let q = i as f64 / (points - 1) as f64;
        writeln!(out, "{q:.16e},{:.16e},{:.16e},{:.16e}", prior_cdf(&job.prior, q), g.cdf(q), env.eval(q)).unwrap();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(text: &str) -> Job {
        Job::new(ScenarioFile::parse(text).unwrap(), &Overrides::default()).unwrap()
    }

    #[test]
    fn binary_uniform_report() {
        let j = job(r#"{"prior": {"kind": "binary", "pi": 0.4}, "r_star": 0.3}"#);
        let r = solve_report(&j).unwrap();
        assert!((r.value - 0.625).abs() < 1e-12);
        assert_eq!(r.distribution, MixedDistribution::uniform(0.0, 0.8).unwrap());
        let back: SolveReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn overrides_take_precedence() {
        let s = ScenarioFile::parse(r#"{"prior": {"kind": "binary", "pi": 0.4}, "r_star": 0.3}"#).unwrap();
        let j = Job::new(s, &Overrides { tie: Some(TieRule::Even), oracle_n: Some(51), tol: Some(1e-9) }).unwrap();
        assert_eq!(j.scenario.tie_rule, TieRule::Even);
        assert_eq!(j.scenario.oracle, Some(OracleSpec { n: 51, tol: 1e-9 }));
        assert_eq!(j.tol, 1e-9);
    }

    #[test]
    fn domain_errors_map_to_exit_three() {
        let s = ScenarioFile::parse(r#"{"prior": {"kind": "binary", "pi": 1.4}, "r_star": 0.3}"#).unwrap();
        assert_eq!(Job::new(s, &Overrides::default()).unwrap_err().code, EXIT_DOMAIN);
        let s = ScenarioFile::parse(r#"{"prior": {"kind": "truncated_normal", "mu": 0.33, "sigma": 0.14}, "r_star": 0.3, "tie_rule": "favor"}"#).unwrap();
        let e = Job::new(s, &Overrides::default()).unwrap_err();
        assert_eq!(e.code, EXIT_DOMAIN);
        assert!(!e.warnings.is_empty());
    }

    #[test]
    fn sweep_rejects_bad_ranges() {
        let j = job(r#"{"prior": {"kind": "binary", "pi": 0.3}, "r_star": 0.5}"#);
        let spec = |min, max, steps| SweepSpec { axis: SweepAxis::RStar, min, max, steps, with_oracle: false };
        assert_eq!(sweep_csv(&j, &spec(0.5, 0.2, 3)).unwrap_err().code, EXIT_PARSE);
        assert_eq!(sweep_csv(&j, &spec(0.0, 0.5, 3)).unwrap_err().code, EXIT_PARSE);
        assert_eq!(sweep_csv(&j, &spec(0.1, 0.5, 0)).unwrap_err().code, EXIT_PARSE);
        let csv = sweep_csv(&j, &spec(0.2, 0.4, 3)).unwrap();
        assert_eq!(csv.lines().count(), 4);
    }
}
