//! Exact algebra on `polynomial × exp(quadratic)` phase-space functions.

mod bopp;
pub(crate) mod linalg;
mod polygauss;
mod polynomial;
mod quadform;
mod residual;
mod source;
mod star;

pub use bopp::{apply, bopp_from_symbol, BoppOperator, BoppTerm, Side};
pub use polygauss::{integrate, marginal, Axis, Marginal, PolyGauss};
pub use polynomial::{Polynomial, PolynomialSymbol, PRUNE_REL_TOL};
pub use quadform::QuadForm;
pub use residual::{eigen_residual, low_discrepancy, r_sequence, Rect, SAMPLE_SEED};
pub use star::{gaussian_star, polygauss_star};
