use std::f64::consts::PI;

use num_complex::Complex64;

use super::special::{hermite_function, laguerre, laguerre_coefficients};
use crate::algebra::{
    apply, bopp_from_symbol, PolyGauss, Polynomial, PolynomialSymbol, QuadForm, Side,
};
use crate::dd::Cdd;
use crate::error::{Error, Result};

/// One-dimensional harmonic oscillator `p²/2m + m ω² q² / 2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Oscillator {
    pub mass: f64,
    pub omega: f64,
    pub hbar: f64,
}

impl Default for Oscillator {
    fn default() -> Self {
        Oscillator {
            mass: 1.0,
            omega: 1.0,
            hbar: 1.0,
        }
    }
}

/// Rescale so that `∫ ψ ψ† = 1` (equal to `∫ ψ⋆ψ†`).
pub fn normalize_amplitude(psi: &PolyGauss) -> Result<PolyGauss> {
    let norm = psi.mul(&psi.conj())?.integrate()?.re;
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::Domain(format!("amplitude norm {norm}")));
    }
    Ok(psi.scale(1.0 / norm.sqrt()))
}

impl Oscillator {
    pub fn new(mass: f64, omega: f64, hbar: f64) -> Result<Self> {
        for (name, v) in [("mass", mass), ("omega", omega), ("hbar", hbar)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Oscillator { mass, omega, hbar })
    }

    pub fn hamiltonian(&self) -> PolynomialSymbol {
        &Polynomial::monomial(0, 2, 0.5 / self.mass)
            + &Polynomial::monomial(2, 0, 0.5 * self.mass * self.omega * self.omega)
    }

    /// `a = √(mω/2ħ) (q + i p / mω)`
    pub fn annihilation(&self) -> PolynomialSymbol {
        let s = (self.mass * self.omega / (2.0 * self.hbar)).sqrt();
        Polynomial::from_terms([
            ((1, 0), Complex64::new(s, 0.0)),
            ((0, 1), Complex64::new(0.0, s / (self.mass * self.omega))),
        ])
    }

    pub fn creation(&self) -> PolynomialSymbol {
        self.annihilation().conj()
    }

    pub fn energy(&self, n: u32) -> f64 {
        self.hbar * self.omega * (n as f64 + 0.5)
    }

    /// Exponent `−(mω/ħ) q² − p²/(mωħ)` shared by the ground amplitude and
    /// every Wigner function of the ladder.
    pub fn shape(&self) -> QuadForm {
        let mw = self.mass * self.omega;
        QuadForm::real(mw / self.hbar, 0.0, 1.0 / (mw * self.hbar))
    }

    /// Solution of `a ⋆ φ₀ = 0`, normalized.
    pub fn ground_amplitude(&self) -> PolyGauss {
        PolyGauss::gaussian(self.shape(), self.hbar).scale((2.0 / (PI * self.hbar)).sqrt())
    }

    /// `(a†⋆)^k ψ`, renormalized.
    pub fn excite(&self, psi: &PolyGauss, k: u32) -> Result<PolyGauss> {
        let op = bopp_from_symbol(&self.creation(), Side::Left, self.hbar);
        let mut out = psi.clone();
        for _ in 0..k {
            out = apply(&op, &out)?;
        }
        if k == 0 {
            return Ok(out);
        }
        normalize_amplitude(&out)
    }

    pub fn amplitude(&self, n: u32) -> Result<PolyGauss> {
        self.excite(&self.ground_amplitude(), n)
    }

    /// `y = 4H/ħω` as a polynomial.
    fn y_symbol(&self) -> Polynomial {
        self.hamiltonian().scale(4.0 / (self.hbar * self.omega))
    }

    /// `W_n = ((−1)^n / πħ) e^{−2H/ħω} L_n(4H/ħω)`.
    pub fn wigner(&self, n: u32) -> PolyGauss {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let coeffs: Vec<Cdd> = laguerre_coefficients(n)
            .into_iter()
            .map(Cdd::from)
            .collect();
        let poly = self.y_symbol().compose_into(&coeffs);
        PolyGauss::new(poly.scale(sign / (PI * self.hbar)), self.shape(), self.hbar)
    }

    /// Pointwise `W_n` without building the polynomial.
    pub fn wigner_value(&self, n: u32, q: f64, p: f64) -> f64 {
        let h = 0.5 * p * p / self.mass + 0.5 * self.mass * self.omega * self.omega * q * q;
        let y = 4.0 * h / (self.hbar * self.omega);
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        sign / (PI * self.hbar) * (-0.5 * y).exp() * laguerre(n, y)
    }

    /// Position-space eigenfunction.
    pub fn wavefunction(&self, n: u32, x: f64) -> f64 {
        let s = (self.mass * self.omega / self.hbar).sqrt();
        s.sqrt() * hermite_function(n, s * x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{eigen_residual, polygauss_star, Rect};

    #[test]
    fn annihilation_kills_ground() {
        for osc in [
            Oscillator::default(),
            Oscillator::new(2.0, 0.7, 0.5).unwrap(),
        ] {
            let op = bopp_from_symbol(&osc.annihilation(), Side::Left, osc.hbar);
            let r = apply(&op, &osc.ground_amplitude()).unwrap();
            assert!(r.poly().max_coeff_norm() <= 1e-12, "{:?}", r.poly());
        }
    }

    #[test]
    fn ground_normalized() {
        let osc = Oscillator::new(1.5, 0.8, 0.6).unwrap();
        let g = osc.ground_amplitude();
        let n = g.mul(&g.conj()).unwrap().integrate().unwrap();
        assert!((n - 1.0).norm() < 1e-14);
    }

    #[test]
    fn ladder_commutator() {
        let osc = Oscillator::new(1.3, 0.9, 0.7).unwrap();
        let a = bopp_from_symbol(&osc.annihilation(), Side::Left, osc.hbar);
        let ad = bopp_from_symbol(&osc.creation(), Side::Left, osc.hbar);
        for f in [osc.ground_amplitude(), osc.amplitude(2).unwrap()] {
            let x = apply(&a, &apply(&ad, &f).unwrap()).unwrap();
            let y = apply(&ad, &apply(&a, &f).unwrap()).unwrap();
            let err = x.try_sub(&y).unwrap().try_sub(&f).unwrap();
            assert!(err.poly().max_coeff_norm() < 1e-12);
        }
    }

    #[test]
    fn excited_amplitude_builds_fock_wigner() {
        let osc = Oscillator::default();
        for n in 0..4 {
            let psi = osc.amplitude(n).unwrap();
            let w = polygauss_star(&psi, &psi.conj()).unwrap();
            let want = osc.wigner(n);
            for (q, p) in [(0.0, 0.0), (0.4, -0.8), (1.3, 0.2)] {
                assert!((w.eval(q, p) - want.eval(q, p)).norm() < 1e-13, "{n}");
            }
        }
    }

    #[test]
    fn eigenpairs() {
        let osc = Oscillator::new(0.8, 1.4, 1.0).unwrap();
        let r = Rect::square(4.0);
        for n in 0..4 {
            let w = osc.wigner(n);
            assert!(eigen_residual(&osc.hamiltonian(), &w, osc.energy(n), &r, 100) < 1e-12);
        }
    }

    #[test]
    fn closed_form_agrees_with_value() {
        let osc = Oscillator::new(2.0, 0.5, 0.8).unwrap();
        let w = osc.wigner(3);
        let (q, p) = (0.3, -0.45);
        assert!((w.eval(q, p).re - osc.wigner_value(3, q, p)).abs() < 1e-14);
        assert!((w.integrate().unwrap() - 1.0).norm() < 1e-13);
    }
}
