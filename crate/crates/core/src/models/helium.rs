//! Two electrons bound harmonically to the nucleus with a Hooke repulsion
//! of strength ξ. In centre-of-mass and relative coordinates `(u, v)` the
//! Hamiltonian splits into two independent oscillators with frequencies
//! `ω_u = ω` and `ω_v = ω√(1−ξ)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::oscillator::Oscillator;
use crate::algebra::{apply, bopp_from_symbol, polygauss_star, r_sequence, PolyGauss, Rect, Side};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeliumParams {
    pub mass: f64,
    pub omega: f64,
    pub xi: f64,
    pub hbar: f64,
}

impl HeliumParams {
    pub fn new(mass: f64, omega: f64, xi: f64, hbar: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&xi) {
            return Err(Error::Domain(format!("xi must lie in [0, 1), got {xi}")));
        }
        Oscillator::new(mass, omega, hbar)?;
        Ok(HeliumParams {
            mass,
            omega,
            xi,
            hbar,
        })
    }

    pub fn omega_v(&self) -> f64 {
        self.omega * (1.0 - self.xi).sqrt()
    }

    pub fn u_sector(&self) -> Oscillator {
        Oscillator {
            mass: self.mass,
            omega: self.omega,
            hbar: self.hbar,
        }
    }

    pub fn v_sector(&self) -> Oscillator {
        Oscillator {
            mass: self.mass,
            omega: self.omega_v(),
            hbar: self.hbar,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeliumState {
    pub nu: u32,
    pub nv: u32,
    pub u_factor: PolyGauss,
    pub v_factor: PolyGauss,
    pub params: HeliumParams,
}

impl HeliumState {
    /// `ψ(u, p_u, v, p_v) = φ(u, p_u) χ(v, p_v)`
    pub fn eval(&self, u: f64, pu: f64, v: f64, pv: f64) -> Complex64 {
        self.u_factor.eval(u, pu) * self.v_factor.eval(v, pv)
    }
}

pub fn helium_ground(params: &HeliumParams) -> HeliumState {
    HeliumState {
        nu: 0,
        nv: 0,
        u_factor: params.u_sector().ground_amplitude(),
        v_factor: params.v_sector().ground_amplitude(),
        params: *params,
    }
}

/// Raise both sectors `k` times.
pub fn helium_excite(state: &HeliumState, k: u32) -> Result<HeliumState> {
    helium_excite_sectors(state, k, k)
}

pub fn helium_excite_sectors(state: &HeliumState, du: u32, dv: u32) -> Result<HeliumState> {
    let p = &state.params;
    Ok(HeliumState {
        nu: state.nu + du,
        nv: state.nv + dv,
        u_factor: p.u_sector().excite(&state.u_factor, du)?,
        v_factor: p.v_sector().excite(&state.v_factor, dv)?,
        params: *p,
    })
}

/// `ħω_u(n_u + ½) + ħω_v(n_v + ½)`.
pub fn helium_energy(nu: u32, nv: u32, params: &HeliumParams) -> f64 {
    params.u_sector().energy(nu) + params.v_sector().energy(nv)
}

/// Ground energy to first order in ξ: `ħω(1 − ξ/4)`.
pub fn helium_energy_first_order(params: &HeliumParams) -> f64 {
    params.hbar * params.omega * (1.0 - params.xi / 4.0)
}

/// Per-sector Wigner functions; the full function is their product.
pub fn helium_wigner(state: &HeliumState) -> Result<(PolyGauss, PolyGauss)> {
    let wu = polygauss_star(&state.u_factor, &state.u_factor.conj())?;
    let wv = polygauss_star(&state.v_factor, &state.v_factor.conj())?;
    Ok((wu, wv))
}

/// Residual of `H ⋆ ψ = E ψ` over `n` low-discrepancy points of
/// `rect_u × rect_v`, relative to `max |ψ|`.
pub fn helium_residual(
    state: &HeliumState,
    e: f64,
    rect_u: &Rect,
    rect_v: &Rect,
    n: usize,
) -> Result<f64> {
    let p = &state.params;
    let hu = bopp_from_symbol(&p.u_sector().hamiltonian(), Side::Left, p.hbar);
    let hv = bopp_from_symbol(&p.v_sector().hamiltonian(), Side::Left, p.hbar);
    let hphi = apply(&hu, &state.u_factor)?;
    let hchi = apply(&hv, &state.v_factor)?;
    let lerp = |t: f64, lo: f64, hi: f64| lo + t * (hi - lo);
    let mut pts = r_sequence(4, n.max(1));
    pts.push(vec![0.5; 4]);
    let mut num = 0.0f64;
    let mut den = 0.0f64;
    for x in pts {
        let u = lerp(x[0], rect_u.qmin, rect_u.qmax);
        let pu = lerp(x[1], rect_u.pmin, rect_u.pmax);
        let v = lerp(x[2], rect_v.qmin, rect_v.qmax);
        let pv = lerp(x[3], rect_v.pmin, rect_v.pmax);
        let phi = state.u_factor.eval(u, pu);
        let chi = state.v_factor.eval(v, pv);
        let r = hphi.eval(u, pu) * chi + phi * hchi.eval(v, pv) - e * phi * chi;
        num = num.max(r.norm());
        den = den.max((phi * chi).norm());
    }
    Ok(if den == 0.0 { f64::INFINITY } else { num / den })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(xi: f64) -> HeliumParams {
        HeliumParams::new(1.0, 1.0, xi, 1.0).unwrap()
    }

    #[test]
    fn energies() {
        assert!((helium_energy(0, 0, &params(0.0)) - 1.0).abs() < 1e-15);
        let p = params(0.1);
        assert!((helium_energy(0, 0, &p) - 0.974341649025257).abs() < 1e-12);
        assert!((helium_energy_first_order(&p) - 0.975).abs() < 1e-15);
        let p = params(0.01);
        assert!((helium_energy(0, 0, &p) - helium_energy_first_order(&p)).abs() <= 1e-5);
        assert!(HeliumParams::new(1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn decoupled_sectors_agree() {
        let s = helium_ground(&params(0.0));
        assert_eq!(s.u_factor, s.v_factor);
    }

    #[test]
    fn v_width_carries_root_factor() {
        let s = helium_ground(&params(0.1));
        let a = s.v_factor.shape();
        assert!((a.aqq.re - 0.9f64.sqrt()).abs() < 1e-15);
        assert!((a.app.re - 1.0 / 0.9f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn excited_residual() {
        let p = params(0.1);
        let s = helium_excite(&helium_ground(&p), 2).unwrap();
        let r = Rect::square(4.0);
        let res = helium_residual(&s, helium_energy(2, 2, &p), &r, &r, 200).unwrap();
        assert!(res < 1e-10, "{res}");
        let bad = helium_residual(&s, helium_energy(2, 2, &p) + 0.01, &r, &r, 200).unwrap();
        assert!(bad > 1e-3);
    }

    #[test]
    fn sectors_normalized() {
        let s = helium_excite_sectors(&helium_ground(&params(0.2)), 1, 3).unwrap();
        let (wu, wv) = helium_wigner(&s).unwrap();
        assert!((wu.integrate().unwrap() - 1.0).norm() < 1e-12);
        assert!((wv.integrate().unwrap() - 1.0).norm() < 1e-12);
        assert!((wu.eval(0.0, 0.0).re + 1.0 / std::f64::consts::PI).abs() < 1e-12);
    }
}
