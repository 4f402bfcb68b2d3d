//! Quadrature, improper-integral convergence detection, liminf and limit
//! estimators shared by every condition checker.

mod gauss;
pub mod grid;
mod improper;
mod liminf;
mod limit;
pub mod oscillatory;
mod quad;

pub use gauss::{gauss_legendre, legendre_all};
pub use grid::{envelope_trend, linear_fit, log_grid, LinearFit, Trend};
pub use improper::{integrate_improper, ConvergenceReport, ConvergenceVerdict, ImproperOptions};
pub use liminf::{liminf_ratio, LiminfReport, DEFAULT_J_RANGE, DEFAULT_WINDOW};
pub use limit::{default_lambda_grid, limit_lambda, LimitReport, LimitVerdict, DEFAULT_LIMIT_TOL};
pub use quad::{integrate_adaptive, integrate_with, QuadOptions, QuadResult, SingularEndpoints};
