//! Closed-form Moyal product inside the polynomial-Gaussian class.
//!
//! With the integral kernel
//!
//! ```text
//! (f⋆g)(x) = (πħ)^-2 ∫∫ dy dz f(x+y) g(x+z) exp((2i/ħ) yᵀJz)
//! ```
//!
//! and `f = e^{Q_f}`, `g = e^{Q_g}`, the integrand exponent is
//! `−wᵀMw + v·w` for `w = (y, z)`, `v = (∇Q_f, ∇Q_g)` and
//! `M = [[A, −(i/ħ)J], [(i/ħ)J, B]]`. The Gaussian integral gives
//!
//! ```text
//! f⋆g = D^{-1/2} exp(Q_f + Q_g + ¼ vᵀM⁻¹v),   D = det(I + ħ² adj(A) B)
//! ```
//!
//! Linear sources added to both exponents make `Q_f + Q_g + ¼vᵀM⁻¹v` a
//! quadratic form in `(x, s, t)`; polynomial prefactors are reinstated by
//! differentiating in the sources.

use num_complex::Complex64;

use super::linalg::{mat2_adj, mat2_mul, solve, Mat2, C, J, ONE, ZERO};
use super::polygauss::PolyGauss;
use super::polynomial::Polynomial;
use super::quadform::QuadForm;
use super::source::source_expand;
use crate::dd::Cdd;
use crate::error::{Error, Result};

/// `e^{Q_f(s)} ⋆ e^{Q_g(t)} = pref · exp(ζᵀ quad ζ + lin·ζ + constant)` with
/// `ζ = (q, p, s_q, s_p, t_q, t_p)`.
struct Kernel {
    pref: C,
    quad: [[C; 6]; 6],
    lin: [C; 6],
    constant: C,
}

/// `1/√D`, continued from `D = 1` at `ħ = 0` through the eigenvalues of
/// `ħ² adj(A) B`.
fn prefactor(a: &Mat2, b: &Mat2, hbar: f64) -> Result<C> {
    let m = mat2_mul(&mat2_adj(a), b);
    let h2 = hbar * hbar;
    let tr = (m[0][0] + m[1][1]) * h2;
    let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) * h2 * h2;
    let d = ONE + tr + det;
    let scale = 1.0 + tr.norm() + det.norm();
    if d.norm() <= 1e-13 * scale || !d.is_finite() {
        return Err(Error::NonintegrableStar { det: d.norm() });
    }
    let disc = (tr * tr * 0.25 - det).sqrt();
    let mu1 = tr * 0.5 + disc;
    let mu2 = tr * 0.5 - disc;
    Ok(((ONE + mu1).sqrt() * (ONE + mu2).sqrt()).inv())
}

fn kernel(f: &QuadForm, g: &QuadForm, hbar: f64) -> Result<Kernel> {
    let a = f.matrix();
    let b = g.matrix();
    let pref = prefactor(&a, &b, hbar)?;

    let c = C::new(0.0, 1.0 / hbar);
    let mut m = [[ZERO; 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = a[i][j];
            m[2 + i][2 + j] = b[i][j];
            m[i][2 + j] = -c * J[i][j];
            m[2 + i][j] = c * J[i][j];
        }
    }
    // S = M⁻¹ column by column
    let mut s = [[ZERO; 4]; 4];
    for col in 0..4 {
        let mut e = [ZERO; 4];
        e[col] = ONE;
        let x = solve(&m, &e).ok_or(Error::NonintegrableStar { det: 0.0 })?;
        for row in 0..4 {
            s[row][col] = x[row];
        }
    }

    // v = V ζ + v0
    let mut v = [[ZERO; 6]; 4];
    for i in 0..2 {
        for j in 0..2 {
            v[i][j] = -2.0 * a[i][j];
            v[2 + i][j] = -2.0 * b[i][j];
        }
        v[i][2 + i] = ONE;
        v[2 + i][4 + i] = ONE;
    }
    let v0 = [f.l[0], f.l[1], g.l[0], g.l[1]];

    let mut sv = [[ZERO; 6]; 4];
    for i in 0..4 {
        for j in 0..6 {
            sv[i][j] = (0..4).map(|k| s[i][k] * v[k][j]).sum();
        }
    }
    let sv0: [C; 4] = std::array::from_fn(|i| (0..4).map(|k| s[i][k] * v0[k]).sum());

    let mut quad = [[ZERO; 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            quad[i][j] = 0.25 * (0..4).map(|k| v[k][i] * sv[k][j]).sum::<C>();
        }
    }
    for i in 0..2 {
        for j in 0..2 {
            quad[i][j] -= a[i][j] + b[i][j];
        }
        quad[i][2 + i] += 0.5;
        quad[2 + i][i] += 0.5;
        quad[i][4 + i] += 0.5;
        quad[4 + i][i] += 0.5;
    }
    for i in 0..6 {
        for j in i + 1..6 {
            let avg = 0.5 * (quad[i][j] + quad[j][i]);
            quad[i][j] = avg;
            quad[j][i] = avg;
        }
    }

    let mut lin = [ZERO; 6];
    for (j, slot) in lin.iter_mut().enumerate() {
        *slot = 0.5 * (0..4).map(|k| v[k][j] * sv0[k]).sum::<C>();
    }
    lin[0] += f.l[0] + g.l[0];
    lin[1] += f.l[1] + g.l[1];
    let constant = f.k + g.k + 0.25 * (0..4).map(|k| v0[k] * sv0[k]).sum::<C>();

    Ok(Kernel {
        pref,
        quad,
        lin,
        constant,
    })
}

fn check_hbar(f: &PolyGauss, g: &PolyGauss) -> Result<()> {
    if f.hbar() != g.hbar() {
        return Err(Error::Parameter(format!(
            "hbar {} vs {}",
            f.hbar(),
            g.hbar()
        )));
    }
    Ok(())
}

/// Star product of two pure exponentials.
pub fn gaussian_star(g1: &PolyGauss, g2: &PolyGauss) -> Result<PolyGauss> {
    if g1.degree() > 0 || g2.degree() > 0 {
        return Err(Error::Domain(
            "gaussian_star takes functions without polynomial prefactor".into(),
        ));
    }
    polygauss_star(g1, g2)
}

/// Exact star product of two members of the class.
pub fn polygauss_star(f: &PolyGauss, g: &PolyGauss) -> Result<PolyGauss> {
    check_hbar(f, g)?;
    let hbar = f.hbar();
    let k = kernel(f.shape(), g.shape(), hbar)?;

    let mut weights: Vec<([u32; 4], Cdd)> = Vec::with_capacity(f.poly().len() * g.poly().len());
    for ((a1, b1), c1) in f.poly().terms_dd() {
        for ((a2, b2), c2) in g.poly().terms_dd() {
            weights.push(([a1, b1, a2, b2], c1 * c2));
        }
    }
    let cq: [[Complex64; 4]; 4] =
        std::array::from_fn(|i| std::array::from_fn(|j| k.quad[2 + i][2 + j]));
    let lin: [Polynomial; 4] = std::array::from_fn(|i| {
        Polynomial::from_terms([
            ((1, 0), 2.0 * k.quad[2 + i][0]),
            ((0, 1), 2.0 * k.quad[2 + i][1]),
            ((0, 0), k.lin[2 + i]),
        ])
    });
    let poly = source_expand(&weights, &cq, &lin).scale(k.pref);
    let shape = QuadForm {
        aqq: -k.quad[0][0],
        aqp: -k.quad[0][1],
        app: -k.quad[1][1],
        l: [k.lin[0], k.lin[1]],
        k: k.constant,
    };
    Ok(PolyGauss::new(poly, shape, hbar))
}

impl PolyGauss {
    pub fn star(&self, o: &PolyGauss) -> Result<PolyGauss> {
        polygauss_star(self, o)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{apply, bopp_from_symbol, Side};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn vacuum_squares_to_half() {
        let g = PolyGauss::gaussian(QuadForm::real(1.0, 0.0, 1.0), 1.0);
        let r = gaussian_star(&g, &g).unwrap();
        assert!(r.shape().approx_eq(g.shape(), 1e-14));
        assert!((r.poly().coeff(0, 0) - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn unit_is_neutral() {
        let shape = QuadForm {
            l: [c(0.2, -0.1), c(0.0, 0.4)],
            ..QuadForm::real(0.6, 0.2, 1.4)
        };
        let f = PolyGauss::gaussian(shape, 1.0);
        let one = PolyGauss::constant(1.0, 1.0);
        for r in [
            gaussian_star(&f, &one).unwrap(),
            gaussian_star(&one, &f).unwrap(),
        ] {
            assert!(r.shape().approx_eq(f.shape(), 1e-14), "{:?}", r.shape());
            assert!((r.poly().coeff(0, 0) - c(1.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn polynomial_unit() {
        let f = PolyGauss::new(Polynomial::q(), QuadForm::real(1.0, 0.0, 1.0), 1.0);
        let one = PolyGauss::constant(1.0, 1.0);
        let r = polygauss_star(&f, &one).unwrap();
        let err = r.try_sub(&f).unwrap();
        assert!(err.poly().max_coeff_norm() < 1e-14);
    }

    #[test]
    fn agrees_with_bopp_on_polynomial_symbol() {
        // q ⋆ f via the kernel (q as a degree-one member with zero exponent)
        let h = 0.9;
        let f = PolyGauss::new(
            &Polynomial::constant(1.0) + &Polynomial::monomial(1, 1, c(0.0, 0.5)),
            QuadForm::real(0.8, -0.2, 0.5),
            h,
        );
        let s = &Polynomial::monomial(2, 0, 1.0) + &Polynomial::monomial(1, 1, c(0.3, 0.0));
        let lhs = polygauss_star(&PolyGauss::new(s.clone(), QuadForm::zero(), h), &f).unwrap();
        let rhs = apply(&bopp_from_symbol(&s, Side::Left, h), &f).unwrap();
        let err = lhs.try_sub(&rhs).unwrap();
        assert!(err.poly().max_coeff_norm() < 1e-12, "{:?}", err.poly());
        let lhs = polygauss_star(&f, &PolyGauss::new(s.clone(), QuadForm::zero(), h)).unwrap();
        let rhs = apply(&bopp_from_symbol(&s, Side::Right, h), &f).unwrap();
        let err = lhs.try_sub(&rhs).unwrap();
        assert!(err.poly().max_coeff_norm() < 1e-12, "{:?}", err.poly());
    }

    #[test]
    fn non_gaussian_input_rejected() {
        let f = PolyGauss::new(Polynomial::q(), QuadForm::real(1.0, 0.0, 1.0), 1.0);
        assert!(matches!(gaussian_star(&f, &f), Err(Error::Domain(_))));
    }

    #[test]
    fn singular_kernel() {
        // A = B = i/ħ · I drives D to zero: 1 + 2(i)(i) + (i)^4 = 0
        let shape = QuadForm {
            aqq: c(0.0, 1.0),
            app: c(0.0, 1.0),
            ..QuadForm::zero()
        };
        let f = PolyGauss::gaussian(shape, 1.0);
        assert!(matches!(
            gaussian_star(&f, &f),
            Err(Error::NonintegrableStar { .. })
        ));
    }
}
