//! Double-truncated uniform (DTU) distributions for continuous priors.

mod classify;
mod intersect;
mod kink;
mod params;
mod search;

pub use classify::{classify_and_solve, ContinuousSolution, Regime};
pub use intersect::{intersections, IntersectionPair, TANGENCY_TOL};
pub use kink::kink_deviation;
pub use params::{beta_of, dtu_distribution, ell_lower_bound, ell_min, v_at, DtuParams};
pub use search::{
    dtu_is_mpc, regularity_warnings, solve_overall, solve_y_optimal, y_upper, BindingCase, OverallResult,
    YOptimalResult, MPC_TOL, Y_GRID,
};
