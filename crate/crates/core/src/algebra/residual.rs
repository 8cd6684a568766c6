use serde::{Deserialize, Serialize};

use super::bopp::{apply, bopp_from_symbol, Side};
use super::polygauss::PolyGauss;
use super::polynomial::PolynomialSymbol;

/// Axis-aligned box in phase space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub qmin: f64,
    pub qmax: f64,
    pub pmin: f64,
    pub pmax: f64,
}

impl Rect {
    pub fn new(qmin: f64, qmax: f64, pmin: f64, pmax: f64) -> Self {
        Rect {
            qmin,
            qmax,
            pmin,
            pmax,
        }
    }

    pub fn square(half: f64) -> Self {
        Rect::new(-half, half, -half, half)
    }

    pub fn area(&self) -> f64 {
        (self.qmax - self.qmin) * (self.pmax - self.pmin)
    }
}

/// Starting offset of every low-discrepancy sequence in the crate.
pub const SAMPLE_SEED: f64 = 0.5;

/// Additive recurrence on the generalized golden ratio in `d` dimensions.
pub fn r_sequence(d: usize, n: usize) -> Vec<Vec<f64>> {
    // root of x^{d+1} = x + 1
    let mut phi = 2.0f64;
    for _ in 0..64 {
        phi = (1.0 + phi).powf(1.0 / (d as f64 + 1.0));
    }
    let alpha: Vec<f64> = (1..=d).map(|k| phi.powi(-(k as i32)).fract()).collect();
    (1..=n)
        .map(|i| {
            alpha
                .iter()
                .map(|a| (SAMPLE_SEED + a * i as f64).fract())
                .collect()
        })
        .collect()
}

/// `n` deterministic points filling `rect`.
pub fn low_discrepancy(n: usize, rect: &Rect) -> Vec<(f64, f64)> {
    r_sequence(2, n)
        .into_iter()
        .map(|u| {
            (
                rect.qmin + u[0] * (rect.qmax - rect.qmin),
                rect.pmin + u[1] * (rect.pmax - rect.pmin),
            )
        })
        .collect()
}

/// `max |(H⋆f)(x) − E f(x)| / max |f|` over the sample set.
///
/// The difference is formed on the polynomial prefactors before evaluation,
/// so exact eigenpairs give residuals at the rounding level of the
/// coefficients rather than of the pointwise values.
pub fn eigen_residual(h: &PolynomialSymbol, f: &PolyGauss, e: f64, rect: &Rect, n: usize) -> f64 {
    let op = bopp_from_symbol(h, Side::Left, f.hbar());
    let hf = apply(&op, f).expect("operator built with the function's hbar");
    let diff = hf.poly() - &f.poly().scale(e);
    let r = PolyGauss::new(diff, *f.shape(), f.hbar());

    let mut pts = low_discrepancy(n.max(1), rect);
    pts.push((0.5 * (rect.qmin + rect.qmax), 0.5 * (rect.pmin + rect.pmax)));
    let mut num = 0.0f64;
    let mut den = 0.0f64;
    for (q, p) in pts {
        num = num.max(r.eval(q, p).norm());
        den = den.max(f.eval(q, p).norm());
    }
    if den == 0.0 {
        return if num == 0.0 { 0.0 } else { f64::INFINITY };
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_fill_the_box() {
        let r = Rect::new(-1.0, 3.0, 0.0, 2.0);
        let pts = low_discrepancy(500, &r);
        assert!(pts
            .iter()
            .all(|&(q, p)| (-1.0..3.0).contains(&q) && (0.0..2.0).contains(&p)));
        // each quadrant gets roughly a quarter
        let n = pts.iter().filter(|&&(q, p)| q < 1.0 && p < 1.0).count();
        assert!((100..150).contains(&n), "{n}");
        assert_eq!(pts, low_discrepancy(500, &r));
    }
}
