//! Oscillator with the dissipative coupling `H = ½(q² + p²) − λ q p`.
//!
//! In the coordinate `y = 4z/√(1−λ²)`, `z = ½(q² + p²) − λqp`, the
//! eigenstates are Laguerre-Gaussians `e^{−y/2} L_n(y)` with energies
//! `√(1−λ²)(n+½)`. The map `(q, p) → y` pushes `dq dp` to `(π/2) dy`
//! whatever λ is, so integrals of functions of `y` do not depend on λ.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::special::{laguerre, laguerre_coefficients};
use crate::algebra::{PolyGauss, Polynomial, PolynomialSymbol, QuadForm};
use crate::dd::Cdd;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DampedParams {
    pub lam: f64,
    pub n: u32,
}

impl DampedParams {
    pub fn new(lam: f64, n: u32) -> Result<Self> {
        check_lambda(lam)?;
        Ok(DampedParams { lam, n })
    }
}

fn check_lambda(lam: f64) -> Result<()> {
    if !(lam.abs() < 1.0) {
        return Err(Error::Domain(format!(
            "|lambda| must be below 1, got {lam}"
        )));
    }
    Ok(())
}

pub fn z_coordinate(q: f64, p: f64, lam: f64) -> f64 {
    0.5 * (p * p + q * q) - lam * q * p
}

/// `y = y_scale(λ) · z`
pub fn y_scale(lam: f64) -> f64 {
    4.0 / (1.0 - lam * lam).sqrt()
}

pub fn damped_energy(dp: &DampedParams) -> f64 {
    (1.0 - dp.lam * dp.lam).sqrt() * (dp.n as f64 + 0.5)
}

pub fn damped_hamiltonian(lam: f64) -> PolynomialSymbol {
    Polynomial::from_terms([
        ((2, 0), 0.5.into()),
        ((0, 2), 0.5.into()),
        ((1, 1), (-lam).into()),
    ])
}

/// Exponent of `e^{−y/2}`.
pub fn damped_shape(lam: f64) -> QuadForm {
    let c = y_scale(lam);
    QuadForm::real(0.25 * c, -0.25 * c * lam, 0.25 * c)
}

fn y_symbol(lam: f64) -> Polynomial {
    damped_hamiltonian(lam).scale(y_scale(lam))
}

fn laguerre_of_y(dp: &DampedParams) -> Polynomial {
    let coeffs: Vec<Cdd> = laguerre_coefficients(dp.n)
        .into_iter()
        .map(Cdd::from)
        .collect();
    y_symbol(dp.lam).compose_into(&coeffs)
}

/// `ψ_n = √(2/π) e^{−y/2} L_n(y)`, normalized to `∫ψ⋆ψ† = 1`.
pub fn damped_quasiamplitude(dp: &DampedParams) -> PolyGauss {
    let poly = laguerre_of_y(dp).scale((2.0 / PI).sqrt());
    PolyGauss::new(poly, damped_shape(dp.lam), 1.0)
}

/// `W_n = ((−1)^n / π) e^{−y/2} L_n(y)`.
pub fn damped_wigner(dp: &DampedParams) -> PolyGauss {
    let sign = if dp.n % 2 == 0 { 1.0 } else { -1.0 };
    let poly = laguerre_of_y(dp).scale(sign / PI);
    PolyGauss::new(poly, damped_shape(dp.lam), 1.0)
}

/// Pointwise evaluator of [`damped_wigner`] through the Laguerre recurrence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DampedWigner {
    pub params: DampedParams,
    scale: f64,
    sign: f64,
}

impl DampedWigner {
    pub fn new(params: DampedParams) -> Self {
        DampedWigner {
            params,
            scale: y_scale(params.lam),
            sign: if params.n % 2 == 0 { 1.0 } else { -1.0 },
        }
    }

    pub fn y(&self, q: f64, p: f64) -> f64 {
        self.scale * z_coordinate(q, p, self.params.lam)
    }

    pub fn value(&self, q: f64, p: f64) -> f64 {
        let y = self.y(q, p);
        self.sign / PI * (-0.5 * y).exp() * laguerre(self.params.n, y)
    }

    /// Smallest `y` level set containing every point with `|W| > cut` is
    /// bounded by the ellipse `z = y_cut / scale`; returns its half-widths
    /// along `q` and `p`.
    pub fn ellipse_half_widths(&self, y_cut: f64) -> (f64, f64) {
        // z = ½ xᵀ Z x, Z = [[1, −λ], [−λ, 1]]; extent along q is √(2z (Z⁻¹)_qq)
        let lam = self.params.lam;
        let z = y_cut / self.scale;
        let w = (2.0 * z / (1.0 - lam * lam)).sqrt();
        (w, w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{eigen_residual, polygauss_star, Rect};

    #[test]
    fn z_examples() {
        assert_eq!(z_coordinate(1.0, 1.0, 0.0), 1.0);
        assert_eq!(z_coordinate(1.0, 1.0, 0.5), 0.5);
    }

    #[test]
    fn energies() {
        let e = |lam, n| damped_energy(&DampedParams::new(lam, n).unwrap());
        assert_eq!(e(0.0, 0), 0.5);
        assert!((e(0.6, 1) - 1.2).abs() < 1e-15);
        assert!(DampedParams::new(1.0, 0).is_err());
    }

    #[test]
    fn lambda_zero_ground_is_vacuum() {
        let psi = damped_quasiamplitude(&DampedParams::new(0.0, 0).unwrap());
        assert!(psi.shape().approx_eq(&QuadForm::real(1.0, 0.0, 1.0), 1e-15));
    }

    #[test]
    fn normalization_any_lambda() {
        for lam in [0.0, 0.5, 0.9] {
            for n in [0, 1, 4, 10] {
                let dp = DampedParams::new(lam, n).unwrap();
                let i = damped_wigner(&dp).integrate().unwrap();
                assert!((i - 1.0).norm() < 1e-10, "{lam} {n}: {i}");
            }
        }
    }

    #[test]
    fn parity_at_origin() {
        for n in 0..6 {
            let w = DampedWigner::new(DampedParams::new(0.3, n).unwrap());
            let want = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!((w.value(0.0, 0.0) * PI - want).abs() < 1e-15);
        }
    }

    #[test]
    fn residuals() {
        let r = Rect::square(4.0);
        let dp = DampedParams::new(0.5, 1).unwrap();
        let res = eigen_residual(
            &damped_hamiltonian(0.5),
            &damped_wigner(&dp),
            damped_energy(&dp),
            &r,
            100,
        );
        assert!(res < 1e-10, "{res}");
        let dp = DampedParams::new(0.5, 2).unwrap();
        let res = eigen_residual(&damped_hamiltonian(0.5), &damped_wigner(&dp), 1.0, &r, 100);
        assert!(res > 0.1);
    }

    #[test]
    fn amplitude_squares_to_wigner() {
        let dp = DampedParams::new(0.1, 1).unwrap();
        let psi = damped_quasiamplitude(&dp);
        let w = polygauss_star(&psi, &psi.conj()).unwrap();
        let want = DampedWigner::new(dp);
        for (q, p) in [(0.0, 0.0), (0.5, 0.5), (-1.0, 0.7), (2.0, -1.5)] {
            let v = w.eval(q, p);
            assert!(v.im.abs() < 1e-14);
            assert!((v.re - want.value(q, p)).abs() < 1e-8 * want.value(q, p).abs().max(1e-3));
        }
    }
}
