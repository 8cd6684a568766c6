use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::linalg::{mat2_inv, mat2_vec};
use super::polynomial::Polynomial;
use super::quadform::QuadForm;
use super::source::source_expand;
use crate::dd::Cdd;
use crate::error::{Error, Result};

/// `P(q, p) · exp(Q(q, p))` with a polynomial `P` and quadratic exponent `Q`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyGauss {
    poly: Polynomial,
    shape: QuadForm,
    hbar: f64,
}

/// Integration variable of a marginal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    Q,
    P,
}

impl PolyGauss {
    pub fn new(poly: Polynomial, shape: QuadForm, hbar: f64) -> Self {
        PolyGauss {
            poly: poly.pruned(),
            shape,
            hbar,
        }
    }

    pub fn gaussian(shape: QuadForm, hbar: f64) -> Self {
        Self::new(Polynomial::one(), shape, hbar)
    }

    pub fn constant(c: impl Into<Cdd>, hbar: f64) -> Self {
        Self::new(Polynomial::constant(c), QuadForm::zero(), hbar)
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    pub fn shape(&self) -> &QuadForm {
        &self.shape
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn degree(&self) -> u32 {
        self.poly.degree()
    }

    pub fn eval(&self, q: f64, p: f64) -> Complex64 {
        self.poly.eval(q, p) * self.shape.exponent(q, p).exp()
    }

    pub fn conj(&self) -> Self {
        PolyGauss {
            poly: self.poly.conj(),
            shape: self.shape.conj(),
            hbar: self.hbar,
        }
    }

    pub fn scale(&self, c: impl Into<Cdd>) -> Self {
        PolyGauss {
            poly: self.poly.scale(c),
            shape: self.shape,
            hbar: self.hbar,
        }
    }

    pub fn with_poly(&self, poly: Polynomial) -> Self {
        Self::new(poly, self.shape, self.hbar)
    }

    pub fn swap_variables(&self) -> Self {
        PolyGauss {
            poly: self.poly.swap_variables(),
            shape: self.shape.swap_variables(),
            hbar: self.hbar,
        }
    }

    fn check_hbar(&self, o: &Self) -> Result<()> {
        if self.hbar != o.hbar {
            return Err(Error::Parameter(format!(
                "hbar {} vs {}",
                self.hbar, o.hbar
            )));
        }
        Ok(())
    }

    /// Pointwise product.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check_hbar(o)?;
        Ok(Self::new(
            &self.poly * &o.poly,
            self.shape.add(&o.shape),
            self.hbar,
        ))
    }

    /// Sum of two members sharing an exponent.
    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.check_hbar(o)?;
        if !self.shape.approx_eq(&o.shape, 1e-13) {
            return Err(Error::Parameter(
                "sum of functions with different exponents".into(),
            ));
        }
        Ok(Self::new(&self.poly + &o.poly, self.shape, self.hbar))
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        self.try_add(&o.scale(-1.0))
    }

    pub fn integrate(&self) -> Result<Complex64> {
        integrate(self)
    }

    pub fn marginal(&self, axis: Axis) -> Result<Marginal> {
        marginal(self, axis)
    }
}

fn poly_weights(p: &Polynomial) -> Vec<([u32; 2], Cdd)> {
    p.terms_dd().map(|((a, b), c)| ([a, b], c)).collect()
}

/// Full-plane integral.
pub fn integrate(f: &PolyGauss) -> Result<Complex64> {
    let s = &f.shape;
    if !s.is_normalizable() {
        return Err(Error::Domain(
            "integral of a function whose exponent is not negative definite".into(),
        ));
    }
    let a = s.matrix();
    let ainv = mat2_inv(&a).ok_or_else(|| Error::Domain("singular exponent".into()))?;
    let c = [
        [0.25 * ainv[0][0], 0.25 * ainv[0][1]],
        [0.25 * ainv[1][0], 0.25 * ainv[1][1]],
    ];
    let h = mat2_vec(&ainv, &s.l);
    let lin = [
        Polynomial::constant(0.5 * h[0]),
        Polynomial::constant(0.5 * h[1]),
    ];
    let moments = source_expand(&poly_weights(&f.poly), &c, &lin).coeff(0, 0);
    let quad = 0.25 * (s.l[0] * h[0] + s.l[1] * h[1]);
    let pref = PI / s.det().sqrt() * (s.k + quad).exp();
    Ok(pref * moments)
}

/// One-variable function left after integrating a [`PolyGauss`] along an
/// axis. Stored as a member of the class that does not depend on its second
/// argument.
#[derive(Clone, Debug, PartialEq)]
pub struct Marginal {
    f: PolyGauss,
}

impl Marginal {
    pub fn eval(&self, x: f64) -> Complex64 {
        self.f.eval(x, 0.0)
    }

    /// Ascending polynomial coefficients of the prefactor.
    pub fn coefficients(&self) -> Vec<Complex64> {
        let d = self.f.poly.degree();
        (0..=d).map(|a| self.f.poly.coeff(a, 0)).collect()
    }

    /// `(α, β, κ)` of the exponent `-α x² + β x + κ`.
    pub fn exponent(&self) -> (Complex64, Complex64, Complex64) {
        let s = &self.f.shape;
        (s.aqq, s.l[0], s.k)
    }
}

pub fn marginal(f: &PolyGauss, axis: Axis) -> Result<Marginal> {
    match axis {
        Axis::P => marginal_over_p(f),
        Axis::Q => marginal_over_p(&f.swap_variables()),
    }
}

fn marginal_over_p(f: &PolyGauss) -> Result<Marginal> {
    let s = &f.shape;
    if s.app.re <= 0.0 {
        return Err(Error::Domain(
            "marginal along an axis without Gaussian decay".into(),
        ));
    }
    let app = s.app;
    // exponent in p: -app p² + β(q) p,  β = l_p - 2 aqp q
    let beta = Polynomial::from_terms([((0, 0), s.l[1]), ((1, 0), -2.0 * s.aqp)]);
    let lin = [beta.scale(0.5 / app)];
    let cq = [[0.25 / app]];

    let mut by_power: BTreeMap<u32, Polynomial> = BTreeMap::new();
    for ((a, b), c) in f.poly.terms_dd() {
        by_power.entry(b).or_default().add_term(a, 0, c);
    }
    let weights: Vec<([u32; 1], Polynomial)> =
        by_power.into_iter().map(|(b, p)| ([b], p)).collect();
    let poly = source_expand(&weights, &cq, &lin);

    let shape = QuadForm {
        aqq: s.aqq - s.aqp * s.aqp / app,
        aqp: 0.0.into(),
        app: 0.0.into(),
        l: [s.l[0] - s.aqp * s.l[1] / app, 0.0.into()],
        k: s.k + s.l[1] * s.l[1] / (4.0 * app),
    };
    let pref = (PI / app).sqrt();
    Ok(Marginal {
        f: PolyGauss::new(poly.scale(pref), shape, f.hbar),
    })
}
