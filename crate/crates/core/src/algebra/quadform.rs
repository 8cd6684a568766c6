use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::linalg::Mat2;
use super::polynomial::Polynomial;

/// Exponent `-(A_qq q² + 2 A_qp qp + A_pp p²) + l_q q + l_p p + k`.
///
/// `A` is held as its three independent entries so it is symmetric by
/// construction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadForm {
    pub aqq: Complex64,
    pub aqp: Complex64,
    pub app: Complex64,
    pub l: [Complex64; 2],
    pub k: Complex64,
}

impl Default for QuadForm {
    fn default() -> Self {
        Self::zero()
    }
}

impl QuadForm {
    /// The exponent of the constant function 1.
    pub fn zero() -> Self {
        let z = Complex64::new(0.0, 0.0);
        QuadForm {
            aqq: z,
            aqp: z,
            app: z,
            l: [z, z],
            k: z,
        }
    }

    /// Purely quadratic real exponent.
    pub fn real(aqq: f64, aqp: f64, app: f64) -> Self {
        QuadForm {
            aqq: aqq.into(),
            aqp: aqp.into(),
            app: app.into(),
            ..Self::zero()
        }
    }

    pub fn from_matrix(a: &Mat2, l: [Complex64; 2], k: Complex64) -> Self {
        QuadForm {
            aqq: a[0][0],
            aqp: 0.5 * (a[0][1] + a[1][0]),
            app: a[1][1],
            l,
            k,
        }
    }

    pub fn matrix(&self) -> Mat2 {
        [[self.aqq, self.aqp], [self.aqp, self.app]]
    }

    pub fn det(&self) -> Complex64 {
        self.aqq * self.app - self.aqp * self.aqp
    }

    /// Real part of `A` positive definite.
    pub fn is_normalizable(&self) -> bool {
        let (a, b, c) = (self.aqq.re, self.aqp.re, self.app.re);
        a > 0.0 && a * c - b * b > 0.0
    }

    pub fn exponent(&self, q: f64, p: f64) -> Complex64 {
        -(self.aqq * q * q + 2.0 * self.aqp * q * p + self.app * p * p)
            + self.l[0] * q
            + self.l[1] * p
            + self.k
    }

    pub fn conj(&self) -> Self {
        QuadForm {
            aqq: self.aqq.conj(),
            aqp: self.aqp.conj(),
            app: self.app.conj(),
            l: [self.l[0].conj(), self.l[1].conj()],
            k: self.k.conj(),
        }
    }

    /// Exponent of the pointwise product.
    pub fn add(&self, o: &Self) -> Self {
        QuadForm {
            aqq: self.aqq + o.aqq,
            aqp: self.aqp + o.aqp,
            app: self.app + o.app,
            l: [self.l[0] + o.l[0], self.l[1] + o.l[1]],
            k: self.k + o.k,
        }
    }

    pub fn swap_variables(&self) -> Self {
        QuadForm {
            aqq: self.app,
            aqp: self.aqp,
            app: self.aqq,
            l: [self.l[1], self.l[0]],
            k: self.k,
        }
    }

    /// `∂_q` of the exponent as a degree-one polynomial.
    pub fn grad_q(&self) -> Polynomial {
        Polynomial::from_terms([
            ((1, 0), -2.0 * self.aqq),
            ((0, 1), -2.0 * self.aqp),
            ((0, 0), self.l[0]),
        ])
    }

    /// `∂_p` of the exponent as a degree-one polynomial.
    pub fn grad_p(&self) -> Polynomial {
        Polynomial::from_terms([
            ((1, 0), -2.0 * self.aqp),
            ((0, 1), -2.0 * self.app),
            ((0, 0), self.l[1]),
        ])
    }

    /// True when every coefficient agrees with `o` to `tol` (absolute).
    pub fn approx_eq(&self, o: &Self, tol: f64) -> bool {
        (self.aqq - o.aqq).norm() <= tol
            && (self.aqp - o.aqp).norm() <= tol
            && (self.app - o.app).norm() <= tol
            && (self.l[0] - o.l[0]).norm() <= tol
            && (self.l[1] - o.l[1]).norm() <= tol
            && (self.k - o.k).norm() <= tol
    }
}
