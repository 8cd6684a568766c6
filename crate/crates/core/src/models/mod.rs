//! Physical systems: harmonic oscillator, Hooke-coupled helium, and the
//! damped oscillator.

mod damped;
mod helium;
mod oscillator;
pub mod special;

pub use damped::{
    damped_energy, damped_hamiltonian, damped_quasiamplitude, damped_shape, damped_wigner, y_scale,
    z_coordinate, DampedParams, DampedWigner,
};
pub use helium::{
    helium_energy, helium_energy_first_order, helium_excite, helium_excite_sectors, helium_ground,
    helium_residual, helium_wigner, HeliumParams, HeliumState,
};
pub use oscillator::{normalize_amplitude, Oscillator};
pub use special::{hermite_function, kummer, laguerre};
