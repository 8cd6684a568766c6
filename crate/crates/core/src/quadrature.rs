//! One-dimensional quadrature: adaptive Gauss–Kronrod (7/15) with an
//! embedded error estimate, and fixed Gauss–Legendre rules.

#![allow(clippy::excessive_precision)]

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Result of an integration with its estimated absolute error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate<const M: usize> {
    pub value: [f64; M],
    pub error: f64,
}

/// One 15-point Kronrod panel on `[a, b]`. The error is the largest
/// component difference between the 7-point Gauss and 15-point rules.
pub fn gk15<const M: usize, F>(f: &F, a: f64, b: f64) -> Estimate<M>
where
    F: Fn(f64) -> [f64; M],
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = [0.0; M];
    let mut g = [0.0; M];
    for m in 0..M {
        k[m] = WGK[7] * fc[m];
        g[m] = WG[3] * fc[m];
    }
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        for m in 0..M {
            let s = f1[m] + f2[m];
            k[m] += WGK[j] * s;
            if j % 2 == 1 {
                g[m] += WG[j / 2] * s;
            }
        }
    }
    let mut err = 0.0f64;
    for m in 0..M {
        k[m] *= h;
        g[m] *= h;
        err = err.max((k[m] - g[m]).abs());
    }
    Estimate {
        value: k,
        error: err,
    }
}

/// Recursive bisection until each panel meets its share of `tol`
/// (absolute) or `max_depth` is reached.
pub fn adaptive<const M: usize, F>(f: &F, a: f64, b: f64, tol: f64, max_depth: u32) -> Estimate<M>
where
    F: Fn(f64) -> [f64; M],
{
    let whole = gk15(f, a, b);
    refine(f, a, b, whole, tol, max_depth)
}

fn refine<const M: usize, F>(
    f: &F,
    a: f64,
    b: f64,
    whole: Estimate<M>,
    tol: f64,
    depth: u32,
) -> Estimate<M>
where
    F: Fn(f64) -> [f64; M],
{
    if whole.error <= tol || depth == 0 {
        return whole;
    }
    let c = 0.5 * (a + b);
    let left = gk15(f, a, c);
    let right = gk15(f, c, b);
    let l = refine(f, a, c, left, 0.5 * tol, depth - 1);
    let r = refine(f, c, b, right, 0.5 * tol, depth - 1);
    let mut value = [0.0; M];
    for (m, v) in value.iter_mut().enumerate() {
        *v = l.value[m] + r.value[m];
    }
    Estimate {
        value,
        error: l.error + r.error,
    }
}

/// Scalar convenience wrapper.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let e = adaptive(&|x| [f(x)], a, b, tol, 40);
    (e.value[0], e.error)
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..(n + 1) / 2 {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, z);
        if d != 0.0 {
            dp = d;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_is_exact_for_polynomials() {
        let e = gk15(&|x: f64| [x.powi(20)], -1.0, 1.0);
        assert!((e.value[0] - 2.0 / 21.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_handles_kinks() {
        let (v, err) = integrate(|x: f64| (x - 0.3).abs(), -1.0, 1.0, 1e-12);
        let exact = 0.5 * 1.3f64.powi(2) + 0.5 * 0.7f64.powi(2);
        assert!((v - exact).abs() < 1e-11, "{v} {exact} {err}");
    }

    #[test]
    fn legendre_rule() {
        let (x, w) = gauss_legendre(16);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        let m: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(30)).sum();
        assert!((m - 2.0 / 31.0).abs() < 1e-14);
        let (x, _) = gauss_legendre(7);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
        assert!(x[3].abs() < 1e-15);
    }
}
