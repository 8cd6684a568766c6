//! Derivatives of a Gaussian generating function with respect to source
//! variables, evaluated at zero sources.
//!
//! Every polynomial prefactor in the closed-form class is reinstated by
//! differentiating `exp(L(x)·u + uᵀ C u)` with respect to `u`:
//!
//! ```text
//! ∂_u^γ exp(L·u + uᵀCu) |₀ = γ! Σ_{δ ≤ γ} e_δ L^{γ-δ} / (γ-δ)!
//! ```
//!
//! with `e_δ` the Taylor coefficients of `exp(uᵀCu)`. Summing against weights
//! `W_γ` regroups into `Σ_κ T_κ L^κ / κ!`, `T_κ = Σ_δ e_δ (κ+δ)! W_{κ+δ}`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::polynomial::Polynomial;
use crate::dd::{Cdd, Dd};

pub(crate) trait Weight: Clone {
    fn zero() -> Self;
    fn add_scaled(&mut self, other: &Self, c: Cdd);
    fn times(&self, p: &Polynomial) -> Polynomial;
}

impl Weight for Cdd {
    fn zero() -> Self {
        Cdd::ZERO
    }
    fn add_scaled(&mut self, other: &Self, c: Cdd) {
        *self += *other * c;
    }
    fn times(&self, p: &Polynomial) -> Polynomial {
        p.scale(*self)
    }
}

impl Weight for Polynomial {
    fn zero() -> Self {
        Polynomial::zero()
    }
    fn add_scaled(&mut self, other: &Self, c: Cdd) {
        *self = &*self + &other.scale(c);
    }
    fn times(&self, p: &Polynomial) -> Polynomial {
        self * p
    }
}

fn factorial(n: u32) -> Dd {
    (1..=n).fold(Dd::ONE, |acc, k| acc.mul_f64(k as f64))
}

fn le<const N: usize>(a: &[u32; N], b: &[u32; N]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Taylor coefficients of `exp(uᵀ C u)` up to `gmax` componentwise.
fn exp_quadratic<const N: usize>(
    cq: &[[Complex64; N]; N],
    gmax: &[u32; N],
) -> BTreeMap<[u32; N], Cdd> {
    let mut quad: Vec<([u32; N], Cdd)> = Vec::new();
    for i in 0..N {
        for j in i..N {
            let c = if i == j {
                cq[i][i]
            } else {
                cq[i][j] + cq[j][i]
            };
            if c.norm() == 0.0 {
                continue;
            }
            let mut e = [0u32; N];
            e[i] += 1;
            e[j] += 1;
            if le(&e, gmax) {
                quad.push((e, c.into()));
            }
        }
    }

    let mut out = BTreeMap::new();
    out.insert([0u32; N], Cdd::ONE);
    let mut term = out.clone();
    let kmax = gmax.iter().sum::<u32>() / 2;
    for k in 1..=kmax {
        let inv_k = Dd::ONE / Dd::new(k as f64);
        let mut next: BTreeMap<[u32; N], Cdd> = BTreeMap::new();
        for (e, &c) in &term {
            for &(d, cd) in &quad {
                let mut s = *e;
                for i in 0..N {
                    s[i] += d[i];
                }
                if le(&s, gmax) {
                    *next.entry(s).or_insert(Cdd::ZERO) += (c * cd).scale(inv_k);
                }
            }
        }
        next.retain(|_, c| !c.is_zero());
        if next.is_empty() {
            break;
        }
        for (e, &c) in &next {
            *out.entry(*e).or_insert(Cdd::ZERO) += c;
        }
        term = next;
    }
    out
}

/// `Σ_γ W_γ ∂_u^γ exp(L(x)·u + uᵀ C u)` at `u = 0`, as a polynomial in `x`.
pub(crate) fn source_expand<const N: usize, W: Weight>(
    weights: &[([u32; N], W)],
    cq: &[[Complex64; N]; N],
    lin: &[Polynomial; N],
) -> Polynomial {
    if weights.is_empty() {
        return Polynomial::zero();
    }
    let mut gmax = [0u32; N];
    for (g, _) in weights {
        for i in 0..N {
            gmax[i] = gmax[i].max(g[i]);
        }
    }
    let e = exp_quadratic(cq, &gmax);

    let mut t: BTreeMap<[u32; N], W> = BTreeMap::new();
    for (g, w) in weights {
        let gf: Dd = g.iter().fold(Dd::ONE, |acc, &k| acc * factorial(k));
        for (d, &ed) in &e {
            if !le(d, g) {
                continue;
            }
            let mut kappa = *g;
            for i in 0..N {
                kappa[i] -= d[i];
            }
            t.entry(kappa)
                .or_insert_with(W::zero)
                .add_scaled(w, ed.scale(gf));
        }
    }

    // pows[i][m] = L_i^m / m!
    let pows: Vec<Vec<Polynomial>> = (0..N)
        .map(|i| {
            let mut v = vec![Polynomial::one()];
            for m in 1..=gmax[i] {
                let next = (&v[m as usize - 1] * &lin[i]).scale_dd(Dd::ONE / Dd::new(m as f64));
                v.push(next);
            }
            v
        })
        .collect();

    let entries: Vec<([u32; N], W)> = t.into_iter().collect();
    nest(&entries, 0, &pows)
}

fn nest<const N: usize, W: Weight>(
    entries: &[([u32; N], W)],
    dim: usize,
    pows: &[Vec<Polynomial>],
) -> Polynomial {
    if dim == N {
        return entries[0].1.times(&Polynomial::one());
    }
    let mut out = Polynomial::zero();
    let mut i = 0;
    while i < entries.len() {
        let m = entries[i].0[dim];
        let mut j = i + 1;
        while j < entries.len() && entries[j].0[dim] == m {
            j += 1;
        }
        let sub = nest(&entries[i..j], dim + 1, pows);
        out = &out + &(&pows[dim][m as usize] * &sub);
        i = j;
    }
    out
}
