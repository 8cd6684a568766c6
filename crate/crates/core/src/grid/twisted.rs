//! Star product as a twisted convolution of discrete spectra.
//!
//! With `f = Σ F_k e^{ik·x}` the plane waves multiply as
//! `e^{ik·x} ⋆ e^{ik'·x} = e^{i(k+k')·x} e^{−(iħ/2)(k_q k'_p − k_p k'_q)}`,
//! so the spectrum of `f ⋆ g` at `K` is `Σ_k F_k G_{K−k} E(k, K)`. On a grid the
//! wavenumbers are `(a Δk_q, b Δk_p)` with signed integers `a, b`, and the phase
//! depends on the single integer `m = a B − b A`. Frequencies of `K − k` that
//! fall outside the grid band are dropped rather than wrapped.

use num_complex::Complex64;
use rustfft::FftDirection;
use std::f64::consts::PI;

use super::fft::{fft2, signed_range, slot};
use super::{check_same, GridField};
use crate::error::Result;
use crate::exec::{map_indices, Execution};

/// Largest tolerated `max|boundary| / max|field|` before a warning is attached.
pub const DECAY_THRESHOLD: f64 = 1e-10;

/// `max |f|` over the box edges relative to `max |f|` overall.
pub fn boundary_ratio(f: &GridField) -> f64 {
    let s = f.spec();
    let peak = f.max_abs();
    if peak == 0.0 {
        return 0.0;
    }
    let mut edge = 0.0f64;
    for i in 0..s.nq {
        edge = edge.max(f.get(i, 0).norm()).max(f.get(i, s.np - 1).norm());
    }
    for j in 0..s.np {
        edge = edge.max(f.get(0, j).norm()).max(f.get(s.nq - 1, j).norm());
    }
    edge / peak
}

pub fn star_numeric(a: &GridField, b: &GridField) -> Result<GridField> {
    star_numeric_with(a, b, Execution::default())
}

pub fn star_numeric_with(a: &GridField, b: &GridField, exec: Execution) -> Result<GridField> {
    twisted(a, b, exec, |theta| Complex64::cis(-theta))
}

/// `A ⋆ B − B ⋆ A`. Swapping the factors negates `m`, so both products
/// collapse into one pass with weight `−2i sin(θ m)`.
pub fn moyal_bracket_numeric(a: &GridField, b: &GridField) -> Result<GridField> {
    moyal_bracket_numeric_with(a, b, Execution::default())
}

pub fn moyal_bracket_numeric_with(
    a: &GridField,
    b: &GridField,
    exec: Execution,
) -> Result<GridField> {
    twisted(a, b, exec, |theta| Complex64::new(0.0, -2.0 * theta.sin()))
}

/// Centred spectrum: entry `(a − lo_q, b − lo_p)` holds frequency `(a, b)`.
fn centred_spectrum(f: &GridField) -> Vec<Complex64> {
    let s = f.spec();
    let (nq, np) = (s.nq, s.np);
    let mut d = f.values().to_vec();
    fft2(&mut d, nq, np, FftDirection::Forward);
    let (loq, hiq) = signed_range(nq);
    let (lop, hip) = signed_range(np);
    let mut out = Vec::with_capacity(nq * np);
    for a in loq..=hiq {
        let row = slot(a, nq) * np;
        for b in lop..=hip {
            out.push(d[row + slot(b, np)]);
        }
    }
    out
}

fn twisted<W>(a: &GridField, b: &GridField, exec: Execution, weight: W) -> Result<GridField>
where
    W: Fn(f64) -> Complex64,
{
    check_same(a, b)?;
    let s = *a.spec();
    let (nq, np) = (s.nq, s.np);
    let n = nq * np;
    let fa = centred_spectrum(a);
    let fb = centred_spectrum(b);
    let (loq, hiq) = signed_range(nq);
    let (lop, hip) = signed_range(np);

    let dkq = 2.0 * PI / (nq as f64 * s.dq());
    let dkp = 2.0 * PI / (np as f64 * s.dp());
    let theta = 0.5 * a.hbar() * dkq * dkp;
    let mmax = (nq as i64) * (np as i64) / 2 + 2;
    let table: Vec<Complex64> = (-mmax..=mmax).map(|m| weight(theta * m as f64)).collect();

    let npi = np as i64;
    let rows = map_indices(nq, exec, |ka| {
        let big_a = loq + ka as i64;
        let mut row = vec![Complex64::new(0.0, 0.0); np];
        let a_lo = loq.max(big_a - hiq);
        let a_hi = hiq.min(big_a - loq);
        for (kb, out) in row.iter_mut().enumerate() {
            let big_b = lop + kb as i64;
            let b_lo = lop.max(big_b - hip);
            let b_hi = hip.min(big_b - lop);
            if b_lo > b_hi {
                continue;
            }
            let mut acc = Complex64::new(0.0, 0.0);
            for x in a_lo..=a_hi {
                let fa_row = (x - loq) * npi - lop;
                let fb_row = (big_a - x - loq) * npi - lop + big_b;
                let m0 = x * big_b + mmax;
                for y in b_lo..=b_hi {
                    let prod = fa[(fa_row + y) as usize] * fb[(fb_row - y) as usize];
                    acc += prod * table[(m0 - y * big_a) as usize];
                }
            }
            *out = acc;
        }
        row
    });

    let mut spec_out = vec![Complex64::new(0.0, 0.0); n];
    for (ka, row) in rows.into_iter().enumerate() {
        let base = slot(loq + ka as i64, nq) * np;
        for (kb, v) in row.into_iter().enumerate() {
            spec_out[base + slot(lop + kb as i64, np)] = v;
        }
    }
    fft2(&mut spec_out, nq, np, FftDirection::Inverse);
    let norm = 1.0 / (n as f64 * n as f64);
    spec_out.iter_mut().for_each(|v| *v *= norm);

    let mut out = GridField::new(s, spec_out, a.hbar())?;
    for (name, f) in [("left", a), ("right", b)] {
        let r = boundary_ratio(f);
        if r > DECAY_THRESHOLD {
            out.push_warning(format!(
                "{name} factor is {r:.3e} of its peak on the boundary (threshold {DECAY_THRESHOLD:e})"
            ));
        }
    }
    Ok(out)
}
