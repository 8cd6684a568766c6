use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::dd::{Cdd, Dd};

/// Coefficients whose magnitude falls below this fraction of the largest
/// coefficient are dropped after every algebraic operation.
pub const PRUNE_REL_TOL: f64 = 1e-14;

/// Sparse polynomial in `(q, p)` with complex coefficients, keyed by the
/// exponent pair `(a, b)` of `q^a p^b`.
#[derive(Clone, Default, PartialEq)]
pub struct Polynomial {
    terms: BTreeMap<(u32, u32), Cdd>,
}

/// Classical phase-space symbol such as a Hamiltonian or a ladder function.
pub type PolynomialSymbol = Polynomial;

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Cdd::ONE)
    }

    pub fn constant(c: impl Into<Cdd>) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn monomial(a: u32, b: u32, c: impl Into<Cdd>) -> Self {
        let mut out = Self::zero();
        out.add_term(a, b, c.into());
        out
    }

    /// The coordinate symbol `q`.
    pub fn q() -> Self {
        Self::monomial(1, 0, 1.0)
    }

    /// The momentum symbol `p`.
    pub fn p() -> Self {
        Self::monomial(0, 1, 1.0)
    }

    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = ((u32, u32), Complex64)>,
    {
        let mut out = Self::zero();
        for ((a, b), c) in terms {
            out.add_term(a, b, c.into());
        }
        out
    }

    pub fn add_term(&mut self, a: u32, b: u32, c: Cdd) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((a, b)).or_insert(Cdd::ZERO);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(a, b));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree `max(a + b)`; zero for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|&(a, b)| a + b).max().unwrap_or(0)
    }

    /// Highest exponents of `q` and `p` separately.
    pub fn partial_degrees(&self) -> (u32, u32) {
        self.terms
            .keys()
            .fold((0, 0), |(mq, mp), &(a, b)| (mq.max(a), mp.max(b)))
    }

    pub fn coeff(&self, a: u32, b: u32) -> Complex64 {
        self.terms
            .get(&(a, b))
            .map(|c| c.to_c64())
            .unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), Complex64)> + '_ {
        self.terms.iter().map(|(&k, c)| (k, c.to_c64()))
    }

    pub(crate) fn terms_dd(&self) -> impl Iterator<Item = ((u32, u32), Cdd)> + '_ {
        self.terms.iter().map(|(&k, &c)| (k, c))
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// True when every coefficient is real.
    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.im.is_zero())
    }

    /// Drop coefficients below `rel_tol` times the largest one.
    pub fn prune(&mut self, rel_tol: f64) {
        let cut = rel_tol * self.max_coeff_norm();
        self.terms.retain(|_, c| !c.is_zero() && c.norm() > cut);
    }

    pub fn pruned(mut self) -> Self {
        self.prune(PRUNE_REL_TOL);
        self
    }

    pub fn scale(&self, c: impl Into<Cdd>) -> Self {
        let c = c.into();
        let mut out = Self::zero();
        for (&(a, b), &v) in &self.terms {
            out.add_term(a, b, v * c);
        }
        out
    }

    pub(crate) fn scale_dd(&self, c: Dd) -> Self {
        let mut out = Self::zero();
        for (&(a, b), &v) in &self.terms {
            out.add_term(a, b, v.scale(c));
        }
        out
    }

    pub fn conj(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&k, c)| (k, c.conj())).collect(),
        }
    }

    /// Exchange the roles of `q` and `p`.
    pub fn swap_variables(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&(a, b), &c)| ((b, a), c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn deriv_q(&self) -> Self {
        let mut out = Self::zero();
        for (&(a, b), &c) in &self.terms {
            if a > 0 {
                out.add_term(a - 1, b, c.scale_f64(a as f64));
            }
        }
        out
    }

    pub fn deriv_p(&self) -> Self {
        let mut out = Self::zero();
        for (&(a, b), &c) in &self.terms {
            if b > 0 {
                out.add_term(a, b - 1, c.scale_f64(b as f64));
            }
        }
        out
    }

    /// `∂_q^i ∂_p^j` of the polynomial.
    pub fn deriv(&self, i: u32, j: u32) -> Self {
        let mut out = self.clone();
        for _ in 0..i {
            out = out.deriv_q();
        }
        for _ in 0..j {
            out = out.deriv_p();
        }
        out
    }

    /// Substitute this polynomial into a univariate polynomial given by its
    /// ascending coefficients: `Σ_k c_k self^k` (Horner form).
    pub fn compose_into(&self, coeffs: &[Cdd]) -> Self {
        let mut acc = Self::zero();
        for &c in coeffs.iter().rev() {
            acc = &acc * self;
            acc.add_term(0, 0, c);
        }
        acc
    }

    pub(crate) fn eval_dd(&self, q: f64, p: f64) -> Cdd {
        let (mq, mp) = self.partial_degrees();
        let qp = powers(q, mq);
        let pp = powers(p, mp);
        let mut acc = Cdd::ZERO;
        for (&(a, b), &c) in &self.terms {
            acc += c.scale(qp[a as usize] * pp[b as usize]);
        }
        acc
    }

    pub fn eval(&self, q: f64, p: f64) -> Complex64 {
        self.eval_dd(q, p).to_c64()
    }
}

fn powers(x: f64, n: u32) -> Vec<Dd> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut acc = Dd::ONE;
    let x = Dd::new(x);
    out.push(acc);
    for _ in 0..n {
        acc = acc * x;
        out.push(acc);
    }
    out
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(a, b), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let c = c.to_c64();
            write!(f, "({}{:+}i) q^{} p^{}", c.re, c.im, a, b)?;
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (&(a, b), &c) in &rhs.terms {
            out.add_term(a, b, c);
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (&(a, b), &c) in &rhs.terms {
            out.add_term(a, b, -c);
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut acc: BTreeMap<(u32, u32), Cdd> = BTreeMap::new();
        for (&(a, b), &c) in &self.terms {
            for (&(a2, b2), &c2) in &rhs.terms {
                *acc.entry((a + a2, b + b2)).or_insert(Cdd::ZERO) += c * c2;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Polynomial { terms: acc }
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(&k, &c)| (k, -c)).collect(),
        }
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}
