use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::polygauss::PolyGauss;
use super::polynomial::{Polynomial, PolynomialSymbol};
use crate::dd::{Cdd, Dd};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    /// `s ⋆ f`
    Left,
    /// `f ⋆ s`
    Right,
}

/// One term `coeff(q, p) · ∂_q^dq ∂_p^dp`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoppTerm {
    pub coeff: Polynomial,
    pub dq: u32,
    pub dp: u32,
}

/// Differential operator realizing star multiplication by a polynomial
/// symbol.
#[derive(Clone, Debug, PartialEq)]
pub struct BoppOperator {
    terms: Vec<BoppTerm>,
    side: Side,
    hbar: f64,
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Expand the star product with `s` into a differential operator.
///
/// With `q⋆ = q + (iħ/2)∂_p` and `p⋆ = p − (iħ/2)∂_q` on the left,
///
/// ```text
/// s ⋆ f = Σ_k (iħ/2)^k / k! Σ_j C(k,j) (−1)^j (∂_q^{k−j} ∂_p^j s)(∂_q^j ∂_p^{k−j} f)
/// ```
///
/// and the right action is the same series with `ħ → −ħ`.
pub fn bopp_from_symbol(s: &PolynomialSymbol, side: Side, hbar: f64) -> BoppOperator {
    let h = match side {
        Side::Left => hbar,
        Side::Right => -hbar,
    };
    let mut merged: BTreeMap<(u32, u32), Polynomial> = BTreeMap::new();
    let mut kfact = Dd::ONE;
    let mut hpow = Dd::ONE;
    for k in 0..=s.degree() {
        if k > 0 {
            kfact = kfact.mul_f64(k as f64);
            hpow = hpow.mul_f64(h / 2.0);
        }
        // i^k
        let ik = match k % 4 {
            0 => Cdd::ONE,
            1 => Cdd::I,
            2 => -Cdd::ONE,
            _ => -Cdd::I,
        };
        let base = ik.scale(hpow / kfact);
        for j in 0..=k {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let c = base.scale_f64(sign * binomial(k, j));
            let ds = s.deriv(k - j, j);
            if ds.is_zero() {
                continue;
            }
            let slot = merged.entry((j, k - j)).or_default();
            *slot = &*slot + &ds.scale(c);
        }
    }
    let terms = merged
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((dq, dp), coeff)| BoppTerm { coeff, dq, dp })
        .collect();
    BoppOperator { terms, side, hbar }
}

impl BoppOperator {
    pub fn identity(hbar: f64) -> Self {
        BoppOperator {
            terms: vec![BoppTerm {
                coeff: Polynomial::one(),
                dq: 0,
                dp: 0,
            }],
            side: Side::Left,
            hbar,
        }
    }

    pub fn terms(&self) -> &[BoppTerm] {
        &self.terms
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Highest `dq + dp` among the terms.
    pub fn order(&self) -> u32 {
        self.terms.iter().map(|t| t.dq + t.dp).max().unwrap_or(0)
    }

    pub fn apply(&self, f: &PolyGauss) -> Result<PolyGauss> {
        apply(self, f)
    }
}

/// Apply a Bopp operator to a member of the closed-form class.
pub fn apply(op: &BoppOperator, f: &PolyGauss) -> Result<PolyGauss> {
    if op.hbar != f.hbar() {
        return Err(Error::Parameter(format!(
            "operator hbar {} vs function hbar {}",
            op.hbar,
            f.hbar()
        )));
    }
    let gq = f.shape().grad_q();
    let gp = f.shape().grad_p();
    // D[i][j]: polynomial part of ∂_q^i ∂_p^j (P e^Q)
    let (mq, mp) = op
        .terms
        .iter()
        .fold((0, 0), |(a, b), t| (a.max(t.dq), b.max(t.dp)));
    let mut table: Vec<Vec<Polynomial>> = Vec::with_capacity(mq as usize + 1);
    let mut row = vec![f.poly().clone()];
    for j in 1..=mp as usize {
        let prev = &row[j - 1];
        row.push(&prev.deriv_p() + &(prev * &gp));
    }
    table.push(row);
    for i in 1..=mq as usize {
        let row: Vec<Polynomial> = table[i - 1]
            .iter()
            .map(|prev| &prev.deriv_q() + &(prev * &gq))
            .collect();
        table.push(row);
    }

    let mut out = Polynomial::zero();
    for t in &op.terms {
        let d = &table[t.dq as usize][t.dp as usize];
        out = &out + &(&t.coeff * d);
    }
    Ok(PolyGauss::new(out, *f.shape(), f.hbar()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::QuadForm;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn position_shift() {
        let op = bopp_from_symbol(&Polynomial::q(), Side::Left, 1.0);
        assert_eq!(op.terms().len(), 2);
        let t0 = &op.terms()[0];
        assert_eq!((t0.dq, t0.dp), (0, 0));
        assert_eq!(t0.coeff, Polynomial::q());
        let t1 = &op.terms()[1];
        assert_eq!((t1.dq, t1.dp), (0, 1));
        assert_eq!(t1.coeff.coeff(0, 0), c(0.0, 0.5));
    }

    #[test]
    fn constant_symbol_is_identity() {
        for side in [Side::Left, Side::Right] {
            let op = bopp_from_symbol(&Polynomial::constant(1.0), side, 0.7);
            assert_eq!(op.terms().len(), 1);
            assert_eq!(op.order(), 0);
        }
    }

    #[test]
    fn qp_expansion() {
        // qp⋆ = qp + (iħ/2)(p∂_p − q∂_q) + (ħ²/4)∂_q∂_p
        let h = 1.3;
        let op = bopp_from_symbol(&Polynomial::monomial(1, 1, 1.0), Side::Left, h);
        let find = |dq, dp| {
            op.terms()
                .iter()
                .find(|t| t.dq == dq && t.dp == dp)
                .unwrap()
                .coeff
                .clone()
        };
        assert_eq!(find(0, 0).coeff(1, 1), c(1.0, 0.0));
        assert!((find(0, 1).coeff(0, 1) - c(0.0, h / 2.0)).norm() < 1e-15);
        assert!((find(1, 0).coeff(1, 0) - c(0.0, -h / 2.0)).norm() < 1e-15);
        assert!((find(1, 1).coeff(0, 0) - c(h * h / 4.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn canonical_commutator() {
        let h = 0.8;
        let f = PolyGauss::new(
            Polynomial::from_terms([((0, 0), c(1.0, 0.0)), ((2, 1), c(0.3, -0.2))]),
            QuadForm::real(0.7, 0.1, 1.2),
            h,
        );
        let q = bopp_from_symbol(&Polynomial::q(), Side::Left, h);
        let p = bopp_from_symbol(&Polynomial::p(), Side::Left, h);
        let qp = apply(&q, &apply(&p, &f).unwrap()).unwrap();
        let pq = apply(&p, &apply(&q, &f).unwrap()).unwrap();
        let diff = qp.try_sub(&pq).unwrap();
        let want = f.scale(c(0.0, h));
        let err = diff.try_sub(&want).unwrap();
        assert!(err.poly().max_coeff_norm() < 1e-12, "{:?}", err.poly());
    }

    #[test]
    fn mismatched_hbar() {
        let f = PolyGauss::constant(1.0, 1.0);
        let op = bopp_from_symbol(&Polynomial::q(), Side::Left, 2.0);
        assert!(matches!(apply(&op, &f), Err(Error::Parameter(_))));
    }
}
