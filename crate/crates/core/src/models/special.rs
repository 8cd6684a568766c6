use crate::dd::Dd;
use crate::error::{Error, Result};

/// Laguerre polynomial `L_n(y)` by the three-term recurrence
/// `(k+1) L_{k+1} = (2k+1−y) L_k − k L_{k−1}`.
pub fn laguerre(n: u32, y: f64) -> f64 {
    laguerre_pair(n, y).0
}

/// `(L_n(y), L_{n−1}(y))`, with `L_{−1} = 0`.
pub fn laguerre_pair(n: u32, y: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - y) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// `L_n'(y)` from `y L_n' = n (L_n − L_{n−1})`, valid for `y ≠ 0`.
pub fn laguerre_derivative(n: u32, y: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    if y == 0.0 {
        return -(n as f64);
    }
    let (l, lm) = laguerre_pair(n, y);
    n as f64 * (l - lm) / y
}

/// Ascending power coefficients of `L_n`: `(−1)^k C(n,k) / k!`.
pub fn laguerre_coefficients(n: u32) -> Vec<Dd> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut c = Dd::ONE;
    out.push(c);
    for k in 0..n {
        // c_{k+1} = −c_k (n−k) / (k+1)²
        let kk = (k + 1) as f64;
        c = -(c.mul_f64((n - k) as f64) / Dd::new(kk * kk));
        out.push(c);
    }
    out
}

const KUMMER_MAX_TERMS: usize = 100_000;

/// Confluent hypergeometric function `₁F₁(a; b; y)`.
///
/// Nonpositive integer `a` sums the terminating polynomial exactly. For
/// negative `y` Kummer's transformation `e^y ₁F₁(b−a; b; −y)` keeps the
/// series free of cancellation.
pub fn kummer(a: f64, b: f64, y: f64) -> Result<f64> {
    if b <= 0.0 && b.fract() == 0.0 {
        return Err(Error::Domain(format!(
            "kummer: b = {b} is a nonpositive integer"
        )));
    }
    if !(a.is_finite() && b.is_finite() && y.is_finite()) {
        return Err(Error::Domain("kummer: non-finite argument".into()));
    }
    if a <= 0.0 && a.fract() == 0.0 {
        return Ok(terminating(a, b, y));
    }
    if y < 0.0 {
        let c = b - a;
        let inner = if c <= 0.0 && c.fract() == 0.0 {
            terminating(c, b, -y)
        } else {
            series(c, b, -y)?
        };
        return Ok(y.exp() * inner);
    }
    series(a, b, y)
}

fn terminating(a: f64, b: f64, y: f64) -> f64 {
    let m = (-a) as u32;
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    for k in 0..m {
        let kf = k as f64;
        term = term.mul_f64((a + kf) * y) / Dd::new((b + kf) * (kf + 1.0));
        sum += term;
    }
    sum.to_f64()
}

fn series(a: f64, b: f64, y: f64) -> Result<f64> {
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    for k in 0..KUMMER_MAX_TERMS {
        let kf = k as f64;
        term = term.mul_f64((a + kf) * y) / Dd::new((b + kf) * (kf + 1.0));
        sum += term;
        if !sum.hi.is_finite() {
            break;
        }
        // past the peak the terms shrink geometrically
        let past_peak = (a + kf) * y < (b + kf) * (kf + 1.0);
        if past_peak && term.hi.abs() <= 1e-17 * sum.hi.abs() {
            return Ok(sum.to_f64());
        }
    }
    Err(Error::NonConvergence(format!(
        "kummer series for a={a}, b={b}, y={y}"
    )))
}

/// Normalized Hermite function `π^{-1/4} (2^n n!)^{-1/2} H_n(x) e^{-x²/2}`.
pub fn hermite_function(n: u32, x: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = std::f64::consts::PI.powf(-0.25) * (-0.5 * x * x).exp();
    for k in 0..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series_laguerre(n: u32, y: f64) -> f64 {
        laguerre_coefficients(n)
            .iter()
            .enumerate()
            .map(|(k, c)| c.to_f64() * y.powi(k as i32))
            .sum()
    }

    #[test]
    fn low_orders() {
        for y in [0.0, 0.3, 2.0, 7.5] {
            assert_eq!(laguerre(0, y), 1.0);
            assert!((laguerre(1, y) - (1.0 - y)).abs() < 1e-15);
        }
        assert_eq!(laguerre(1, 2.0), -1.0);
    }

    #[test]
    fn recurrence_matches_series() {
        assert!((laguerre(5, 1.0) - series_laguerre(5, 1.0)).abs() < 1e-13);
        for n in 0..8 {
            for y in [0.1, 1.7, 4.0] {
                assert!((laguerre(n, y) - series_laguerre(n, y)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn derivative_by_difference() {
        let h = 1e-6;
        for n in 1..6 {
            let y = 1.3;
            let fd = (laguerre(n, y + h) - laguerre(n, y - h)) / (2.0 * h);
            assert!((fd - laguerre_derivative(n, y)).abs() < 1e-7);
        }
    }

    #[test]
    fn kummer_identities() {
        for y in [-3.0, 0.0, 0.5, 2.0, 5.0] {
            assert_eq!(kummer(0.0, 1.0, y).unwrap(), 1.0);
            assert!(
                (kummer(1.0, 1.0, y).unwrap() - f64::exp(y)).abs() < 1e-12 * f64::exp(y).max(1.0)
            );
        }
        for n in 0..=10 {
            for i in 0..=20 {
                let y = i as f64;
                let k = kummer(-(n as f64), 1.0, y).unwrap();
                let l = laguerre(n, y);
                assert!(
                    (k - l).abs() <= 1e-12 * l.abs().max(1.0),
                    "{n} {y}: {k} {l}"
                );
            }
        }
    }

    #[test]
    fn kummer_rejects_pole() {
        assert!(matches!(kummer(0.5, -2.0, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn hermite_orthonormal() {
        let h = 0.01;
        let xs: Vec<f64> = (-1200..=1200).map(|i| i as f64 * h).collect();
        for m in 0..4 {
            for n in 0..4 {
                let s: f64 = xs
                    .iter()
                    .map(|&x| hermite_function(m, x) * hermite_function(n, x))
                    .sum::<f64>()
                    * h;
                let want = if m == n { 1.0 } else { 0.0 };
                assert!((s - want).abs() < 1e-10, "{m}{n} {s}");
            }
        }
    }
}
