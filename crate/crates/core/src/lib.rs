//! Phase-space quantum mechanics with the Moyal star product.
//!
//! * [`algebra`]: exact star products, Bopp operators and integrals on
//!   polynomial-Gaussian functions.
//! * [`grid`]: a numerical star product on uniform grids and the Wigner
//!   transform of wavefunctions.
//! * [`models`]: harmonic oscillator, Hooke-coupled helium and the damped
//!   oscillator.
//! * [`negativity`]: the negative volume of Wigner functions.

pub mod algebra;
pub mod dd;
pub mod error;
pub mod exec;
pub mod grid;
pub mod io;
pub mod models;
pub mod negativity;
pub mod quadrature;
pub mod verify;

pub use error::{Error, Result};
