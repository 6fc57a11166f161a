//! Complex-analytic side of the heights: Fubini–Study sampling on
//! `(ℙ¹(ℂ))^d`, root finding, Jensen evaluation and Monte Carlo integrals.

mod eval;
pub(crate) mod mc;
mod measure;
mod roots;
mod sampling;

pub use eval::{ln_abs_bigint, LogEvaluator, Specializer};
pub use mc::{batch_rng, MCEstimate, MCParams, DEFAULT_BATCH_SIZE, DEFAULT_SAMPLES};
pub use measure::{
    jensen_log_complex, jensen_log_v1, jensen_v1, logmax_integral, logmax_integral_coords, pole_clearance, proximity, v_measure,
    VMeasure, MAX_DEGENERATE_RATE,
};
pub use roots::{roots, roots_complex, DEFAULT_TOL, MAX_ITERATIONS};
pub use sampling::sample_fs;
