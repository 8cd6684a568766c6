//! Wigner transform of a 1D wavefunction,
//! `W(q,p) = (2πħ)⁻¹ ∫ dz e^{ipz/ħ} φ*(q+z/2) φ(q−z/2)`.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::{GridField, GridSpec};
use crate::error::{Error, Result};
use crate::exec::{map_indices, Execution};
use crate::quadrature::gauss_legendre;

/// Composite Gauss–Legendre rule used for the `z` integral.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WavefunctionQuadrature {
    pub panels: usize,
    pub order: usize,
}

impl Default for WavefunctionQuadrature {
    fn default() -> Self {
        WavefunctionQuadrature {
            panels: 64,
            order: 16,
        }
    }
}

impl WavefunctionQuadrature {
    fn rule(&self, a: f64, b: f64, x: &[f64], w: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let h = (b - a) / self.panels as f64;
        let mut nodes = Vec::with_capacity(self.panels * self.order);
        let mut weights = Vec::with_capacity(self.panels * self.order);
        for k in 0..self.panels {
            let c = a + (k as f64 + 0.5) * h;
            for (xi, wi) in x.iter().zip(w) {
                nodes.push(c + 0.5 * h * xi);
                weights.push(0.5 * h * wi);
            }
        }
        (nodes, weights)
    }
}

/// `phi` is taken to vanish outside `support`. The `z` range at each `q`
/// is the interval where both `q ± z/2` stay inside it.
pub fn wigner_from_wavefunction<F>(
    phi: F,
    support: (f64, f64),
    spec: &GridSpec,
    hbar: f64,
    quad: WavefunctionQuadrature,
    exec: Execution,
) -> Result<GridField>
where
    F: Fn(f64) -> Complex64 + Sync + Send,
{
    let (lo, hi) = support;
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return Err(Error::Domain(format!(
            "support [{lo}, {hi}] is not a finite interval"
        )));
    }
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(Error::Domain(format!("hbar must be positive, got {hbar}")));
    }
    spec.validate()?;
    if quad.panels == 0 || quad.order == 0 {
        return Err(Error::Domain("empty quadrature rule".into()));
    }
    let (gx, gw) = gauss_legendre(quad.order);

    let (xs, ws) = quad.rule(lo, hi, &gx, &gw);
    let mut norm = 0.0;
    for (x, w) in xs.iter().zip(&ws) {
        let v = phi(*x);
        if !v.is_finite() {
            return Err(Error::Domain(format!("wavefunction is not finite at {x}")));
        }
        norm += w * v.norm_sqr();
    }

    let pref = 1.0 / (2.0 * PI * hbar);
    let rows = map_indices(spec.nq, exec, |i| {
        let q = spec.q(i);
        let mut row = vec![Complex64::new(0.0, 0.0); spec.np];
        let zmax = 2.0 * (q - lo).min(hi - q);
        if zmax <= 0.0 {
            return row;
        }
        let (zs, wz) = quad.rule(-zmax, zmax, &gx, &gw);
        for (z, w) in zs.iter().zip(&wz) {
            let v = w * phi(q + 0.5 * z).conj() * phi(q - 0.5 * z);
            let mut rot = Complex64::cis(spec.pmin * z / hbar);
            let step = Complex64::cis(spec.dp() * z / hbar);
            for r in row.iter_mut() {
                *r += v * rot;
                rot *= step;
            }
        }
        row.iter_mut().for_each(|r| *r *= pref);
        row
    });
    let mut out = GridField::new(*spec, rows.concat(), hbar)?;
    if (norm - 1.0).abs() > 1e-6 {
        out.push_warning(format!("wavefunction norm is {norm:.12} over the support"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::hermite_function;

    fn field(n: u32, spec: &GridSpec) -> GridField {
        wigner_from_wavefunction(
            |x| Complex64::new(hermite_function(n, x), 0.0),
            (-12.0, 12.0),
            spec,
            1.0,
            WavefunctionQuadrature::default(),
            Execution::default(),
        )
        .unwrap()
    }

    #[test]
    fn vacuum_is_gaussian() {
        let s = GridSpec::square(6.0, 41).unwrap();
        let w = field(0, &s);
        assert!(w.warnings().is_empty());
        for i in 0..s.nq {
            for j in 0..s.np {
                let e = (-(s.q(i).powi(2) + s.p(j).powi(2))).exp() / PI;
                assert!((w.get(i, j) - e).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn first_excited_at_origin_and_marginal() {
        let s = GridSpec::square(7.0, 141).unwrap();
        let w = field(1, &s);
        assert!((w.get(70, 70).re + 1.0 / PI).abs() < 1e-12);
        for i in (0..s.nq).step_by(7) {
            let m: f64 = (0..s.np).map(|j| w.get(i, j).re).sum::<f64>() * s.dp();
            let exact = hermite_function(1, s.q(i)).powi(2);
            assert!((m - exact).abs() < 1e-6, "{m} {exact}");
        }
        assert!((w.integral() - 1.0).norm() < 1e-6);
    }

    #[test]
    fn unnormalized_warns_and_bad_support_errors() {
        let s = GridSpec::square(4.0, 16).unwrap();
        let w = wigner_from_wavefunction(
            |x| Complex64::new(2.0 * hermite_function(0, x), 0.0),
            (-10.0, 10.0),
            &s,
            1.0,
            WavefunctionQuadrature::default(),
            Execution::Sequential,
        )
        .unwrap();
        assert_eq!(w.warnings().len(), 1);
        let e = wigner_from_wavefunction(
            |_| Complex64::new(1.0, 0.0),
            (0.0, f64::INFINITY),
            &s,
            1.0,
            WavefunctionQuadrature::default(),
            Execution::Sequential,
        );
        assert!(matches!(e, Err(Error::Domain(_))));
    }
}
