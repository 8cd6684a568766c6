//! 2D FFT helpers and band-limited upsampling.

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use super::{GridField, GridSpec};
use crate::error::{Error, Result};

/// Signed frequency range `[lo, lo + n − 1]` for `n` samples.
pub(crate) fn signed_range(n: usize) -> (i64, i64) {
    let lo = -((n / 2) as i64);
    (lo, lo + n as i64 - 1)
}

/// DFT slot of signed frequency `s`.
pub(crate) fn slot(s: i64, n: usize) -> usize {
    s.rem_euclid(n as i64) as usize
}

/// Unnormalised in-place 2D transform of a row-major `nq × np` array.
pub(crate) fn fft2(data: &mut [Complex64], nq: usize, np: usize, dir: FftDirection) {
    let mut planner = FftPlanner::new();
    let fp = planner.plan_fft(np, dir);
    for row in data.chunks_exact_mut(np) {
        fp.process(row);
    }
    let fq = planner.plan_fft(nq, dir);
    let mut col = vec![Complex64::new(0.0, 0.0); nq];
    for j in 0..np {
        for i in 0..nq {
            col[i] = data[i * np + j];
        }
        fq.process(&mut col);
        for i in 0..nq {
            data[i * np + j] = col[i];
        }
    }
}

fn upsample_1d(x: &[Complex64], r: usize, planner: &mut FftPlanner<f64>) -> Vec<Complex64> {
    let n = x.len();
    let m = n * r;
    let mut spec = x.to_vec();
    planner.plan_fft_forward(n).process(&mut spec);
    let mut out = vec![Complex64::new(0.0, 0.0); m];
    let (lo, hi) = signed_range(n);
    for s in lo..=hi {
        let v = spec[slot(s, n)];
        if n % 2 == 0 && s == lo {
            // split the Nyquist bin so real input stays real
            out[slot(s, m)] += 0.5 * v;
            out[slot(-s, m)] += 0.5 * v;
        } else {
            out[slot(s, m)] = v;
        }
    }
    planner.plan_fft_inverse(m).process(&mut out);
    let inv = 1.0 / n as f64;
    out.iter_mut().for_each(|v| *v *= inv);
    out
}

/// Trigonometric interpolation onto a grid `factor` times finer per axis.
/// The field is treated as one period of a band-limited function, so the
/// refined grid extends `(factor − 1)/factor` of a cell past the upper edges.
pub fn refine(f: &GridField, factor: usize) -> Result<GridField> {
    if factor == 0 {
        return Err(Error::InvalidGrid(
            "refinement factor must be positive".into(),
        ));
    }
    if factor == 1 {
        return Ok(f.clone());
    }
    let s = f.spec();
    let (nq, np) = (s.nq, s.np);
    let (mq, mp) = (nq * factor, np * factor);
    let mut planner = FftPlanner::new();
    let mut rows = Vec::with_capacity(nq * mp);
    for row in f.values().chunks_exact(np) {
        rows.extend(upsample_1d(row, factor, &mut planner));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); mq * mp];
    let mut col = vec![Complex64::new(0.0, 0.0); nq];
    for j in 0..mp {
        for i in 0..nq {
            col[i] = rows[i * mp + j];
        }
        let up = upsample_1d(&col, factor, &mut planner);
        for (i, v) in up.into_iter().enumerate() {
            out[i * mp + j] = v;
        }
    }
    let hq = s.dq() / factor as f64;
    let hp = s.dp() / factor as f64;
    let spec = GridSpec::new(
        s.qmin,
        s.qmin + (mq - 1) as f64 * hq,
        s.pmin,
        s.pmin + (mp - 1) as f64 * hp,
        mq,
        mp,
    )?;
    GridField::new(spec, out, f.hbar())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Execution;
    use crate::grid::sample_fn;

    #[test]
    fn roundtrip() {
        let mut d: Vec<Complex64> = (0..12 * 10)
            .map(|k| Complex64::new(k as f64, -(k as f64).sqrt()))
            .collect();
        let orig = d.clone();
        fft2(&mut d, 12, 10, FftDirection::Forward);
        fft2(&mut d, 12, 10, FftDirection::Inverse);
        for (a, b) in d.iter().zip(&orig) {
            assert!((a / 120.0 - b).norm() < 1e-12);
        }
    }

    #[test]
    fn refine_interpolates_gaussian() {
        let s = GridSpec::square(8.0, 64).unwrap();
        let g = |q: f64, p: f64| Complex64::new((-(q * q + p * p)).exp(), 0.0);
        let f = sample_fn(&s, 1.0, Execution::Sequential, g).unwrap();
        let r = refine(&f, 4).unwrap();
        assert_eq!(r.spec().nq, 256);
        let rs = r.spec();
        let mut err = 0.0f64;
        for i in 0..rs.nq {
            for j in 0..rs.np {
                let (q, p) = (rs.q(i), rs.p(j));
                if q <= 8.0 && p <= 8.0 {
                    err = err.max((r.get(i, j) - g(q, p)).norm());
                }
            }
        }
        assert!(err < 1e-10, "{err}");
        for i in 0..s.nq {
            assert!((r.get(4 * i, 4 * 7) - f.get(i, 7)).norm() < 1e-14);
        }
    }
}
