//! Negative volume of Wigner functions, `η = ∫∫ (|W| − W) dq dp = ∫∫ |W| − 1`.
//!
//! Two independent routes: a radial integral in `y` for the damped family,
//! where `dq dp = (π/2) dy` removes λ, and adaptive 2D quadrature of an
//! arbitrary Wigner function over a box.

use serde::{Deserialize, Serialize};

use crate::algebra::Rect;
use crate::error::{Error, Result};
use crate::exec::{map_indices, Execution};
use crate::grid::{refine, GridField};
use crate::models::special::laguerre_derivative;
use crate::models::{laguerre, DampedParams, DampedWigner};
use crate::quadrature::{adaptive, Estimate};

/// Negativity of the damped family for `n = 0..=9`, to sixteen printed digits.
pub const REFERENCE_ETA: [f64; 10] = [
    0.0,
    0.4261226344263795,
    0.7289892587057898,
    0.9766730799293403,
    1.1913424288065964,
    1.3834384856692004,
    1.5588521972493026,
    1.7212933835545317,
    1.873265816082318,
    2.016572434609475,
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Radial,
    Grid,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "radial" => Ok(Method::Radial),
            "grid" => Ok(Method::Grid),
            _ => Err(Error::Parse(format!("unknown method '{s}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NegativityRecord {
    pub model: String,
    pub n: u32,
    pub lam: f64,
    pub method: Method,
    pub eta: f64,
    pub err_estimate: f64,
}

/// Zeros of `L_n` in increasing order. The zeros of `L_{k+1}` are
/// separated by those of `L_k`, so each level brackets the next.
pub fn laguerre_roots(n: u32) -> Result<Vec<f64>> {
    let mut roots: Vec<f64> = Vec::new();
    for k in 1..=n {
        let upper = 4.0 * k as f64 + 2.0;
        let mut edges = Vec::with_capacity(k as usize + 1);
        edges.push(0.0);
        edges.extend_from_slice(&roots);
        edges.push(upper);
        let mut next = Vec::with_capacity(k as usize);
        for w in edges.windows(2) {
            next.push(bracketed_root(k, w[0], w[1])?);
        }
        roots = next;
    }
    Ok(roots)
}

/// Newton on `L_k` inside `[a, b]`, falling back to bisection whenever a
/// step leaves the bracket.
fn bracketed_root(k: u32, a: f64, b: f64) -> Result<f64> {
    let (mut lo, mut hi) = (a, b);
    let flo = laguerre(k, lo);
    let fhi = laguerre(k, hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::RootBracket(format!(
            "L_{k} has no sign change on [{a}, {b}]"
        )));
    }
    let slo = flo.signum();
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let f = laguerre(k, x);
        if f == 0.0 {
            return Ok(x);
        }
        if f.signum() == slo {
            lo = x;
        } else {
            hi = x;
        }
        let d = laguerre_derivative(k, x);
        let newton = x - f / d;
        let cand = if d != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (cand - x).abs() <= 4.0 * f64::EPSILON * x.abs() || hi - lo <= 4.0 * f64::EPSILON * hi {
            return Ok(cand);
        }
        x = cand;
    }
    Err(Error::RootBracket(format!(
        "L_{k} root on [{a}, {b}] did not converge"
    )))
}

const RADIAL_PANEL_TOL: f64 = 1e-14;

/// η of the `n`-th damped Wigner function from the 1D integral
/// `η = 2 · Σ_{W<0} ∫ ½ e^{−y/2} |L_n(y)| dy` over the nodal intervals.
/// The value holds for every λ; the record carries `lam = 0`.
pub fn eta_radial(n: u32) -> Result<NegativityRecord> {
    let roots = laguerre_roots(n)?;
    let f = |y: f64| [0.5 * (-0.5 * y).exp() * laguerre(n, y)];
    let sign_w = if n % 2 == 0 { 1.0 } else { -1.0 };

    let mut edges = Vec::with_capacity(roots.len() + 2);
    edges.push(0.0);
    edges.extend_from_slice(&roots);
    let mut pieces = Vec::new();
    for w in edges.windows(2) {
        pieces.push(adaptive(&f, w[0], w[1], RADIAL_PANEL_TOL, 40));
    }
    // tail beyond the last zero, in panels until the integrand is spent
    let mut tail = Estimate {
        value: [0.0],
        error: 0.0,
    };
    let mut a = *edges.last().unwrap();
    loop {
        let b = a + 20.0;
        let e = adaptive(&f, a, b, RADIAL_PANEL_TOL, 40);
        tail.value[0] += e.value[0];
        tail.error += e.error;
        a = b;
        if e.value[0].abs() < 1e-20 && a > 4.0 * n as f64 + 10.0 {
            break;
        }
    }
    pieces.push(tail);

    let mut neg = 0.0;
    let mut total = 0.0;
    let mut err = 0.0;
    for e in &pieces {
        let v = e.value[0];
        total += v;
        err += e.error;
        if sign_w * v < 0.0 {
            neg += v.abs();
        }
    }
    Ok(NegativityRecord {
        model: "damped".into(),
        n,
        lam: 0.0,
        method: Method::Radial,
        eta: 2.0 * neg,
        err_estimate: 2.0 * err + (total.abs() - 1.0).abs(),
    })
}

/// Result of a box integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridEta {
    pub eta: f64,
    pub err_estimate: f64,
    pub rect: Rect,
}

const EDGE_SAMPLES: usize = 256;
const BOX_GROWTH: f64 = 1.25;
const Q_STRIPS: usize = 16;

fn boundary_max<F: Fn(f64, f64) -> f64>(f: &F, r: &Rect) -> f64 {
    let mut m = 0.0f64;
    for k in 0..=EDGE_SAMPLES {
        let t = k as f64 / EDGE_SAMPLES as f64;
        let q = r.qmin + t * (r.qmax - r.qmin);
        let p = r.pmin + t * (r.pmax - r.pmin);
        m = m
            .max(f(q, r.pmin).abs())
            .max(f(q, r.pmax).abs())
            .max(f(r.qmin, p).abs())
            .max(f(r.qmax, p).abs());
    }
    m
}

fn grow(r: &Rect) -> Rect {
    let cq = 0.5 * (r.qmin + r.qmax);
    let cp = 0.5 * (r.pmin + r.pmax);
    let hq = 0.5 * BOX_GROWTH * (r.qmax - r.qmin);
    let hp = 0.5 * BOX_GROWTH * (r.pmax - r.pmin);
    Rect::new(cq - hq, cq + hq, cp - hp, cp + hp)
}

fn check_box<F: Fn(f64, f64) -> f64>(f: &F, rect: &Rect, tol: f64) -> Result<()> {
    let limit = |r: &Rect| tol / r.area();
    let m = boundary_max(f, rect);
    if m <= limit(rect) {
        return Ok(());
    }
    let mut r = grow(rect);
    for _ in 0..64 {
        if boundary_max(f, &r) <= limit(&r) {
            break;
        }
        r = grow(&r);
    }
    Err(Error::BoxTooSmall {
        boundary_max: m,
        qmin: r.qmin,
        qmax: r.qmax,
        pmin: r.pmin,
        pmax: r.pmax,
    })
}

/// η of a real Wigner function over `rect` by iterated adaptive
/// Gauss–Kronrod. The normalization `∫W = 1` is re-imposed, so any positive
/// multiple of `W` gives the same η.
pub fn eta_grid<F>(w: F, rect: &Rect, tol: f64, exec: Execution) -> Result<GridEta>
where
    F: Fn(f64, f64) -> f64 + Sync + Send,
{
    if !(tol > 0.0) {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    check_box(&w, rect, tol)?;
    let width_q = (rect.qmax - rect.qmin) / Q_STRIPS as f64;
    let outer_tol = 0.1 * tol / Q_STRIPS as f64;
    let inner_tol = 1e-3 * tol / (rect.qmax - rect.qmin);
    let strips = map_indices(Q_STRIPS, exec, |k| {
        let a = rect.qmin + k as f64 * width_q;
        let b = if k + 1 == Q_STRIPS {
            rect.qmax
        } else {
            a + width_q
        };
        let line = |q: f64| {
            let e = adaptive(
                &|p: f64| {
                    let v = w(q, p);
                    [v.abs(), v]
                },
                rect.pmin,
                rect.pmax,
                inner_tol,
                30,
            );
            e.value
        };
        adaptive(&line, a, b, outer_tol, 30)
    });
    let mut abs = 0.0;
    let mut signed = 0.0;
    let mut err = 0.0;
    for s in &strips {
        abs += s.value[0];
        signed += s.value[1];
        err += s.error;
    }
    if !(signed > 0.0) {
        return Err(Error::Domain(format!(
            "Wigner function integrates to {signed}"
        )));
    }
    Ok(GridEta {
        eta: (abs / signed - 1.0).max(0.0),
        err_estimate: (err + inner_tol * (rect.qmax - rect.qmin)) / signed,
        rect: *rect,
    })
}

/// Box around the ellipse outside which `e^{−y/2}|L_n(y)| < 10⁻¹² / π`.
pub fn damped_box(params: &DampedParams) -> Rect {
    let n = params.n;
    let mut y = 2.0 * 12.0 * 10f64.ln();
    // the polynomial factor can outgrow the exponential margin; walk outwards
    let env = |y: f64| {
        (-0.5 * y).exp()
            * laguerre(n, y)
                .abs()
                .max((y / (n as f64 + 1.0)).powi(n as i32))
    };
    while env(y) > 1e-12 || env(1.5 * y) > 1e-12 {
        y *= 1.1;
    }
    let (hq, hp) = DampedWigner::new(*params).ellipse_half_widths(y);
    Rect::new(-hq, hq, -hp, hp)
}

pub fn eta_grid_damped(params: &DampedParams, tol: f64) -> Result<NegativityRecord> {
    let dw = DampedWigner::new(*params);
    let g = eta_grid(
        |q, p| dw.value(q, p),
        &damped_box(params),
        tol,
        Execution::default(),
    )?;
    Ok(NegativityRecord {
        model: "damped".into(),
        n: params.n,
        lam: params.lam,
        method: Method::Grid,
        eta: g.eta,
        err_estimate: g.err_estimate,
    })
}

/// Fine-spacing target for [`eta_grid_field`].
pub const FIELD_SPACING: f64 = 0.01;

/// η of a sampled field: spectral refinement until the spacing is at most
/// [`FIELD_SPACING`], then the periodic trapezoid rule. The error estimate is
/// the change from a refinement half as fine.
pub fn eta_grid_field(field: &GridField, tol: f64) -> Result<GridEta> {
    let s = field.spec();
    let rect = s.rect();
    let area = rect.area();
    let r = crate::grid::boundary_ratio(field) * field.max_abs();
    if r > tol / area {
        let g = grow(&rect);
        return Err(Error::BoxTooSmall {
            boundary_max: r,
            qmin: g.qmin,
            qmax: g.qmax,
            pmin: g.pmin,
            pmax: g.pmax,
        });
    }
    let h = s.dq().max(s.dp());
    let factor = ((h / FIELD_SPACING).ceil() as usize).clamp(2, 16);
    let at = |k: usize| -> Result<f64> {
        let fine = refine(field, k)?;
        let mut abs = 0.0;
        let mut signed = 0.0;
        for v in fine.values() {
            abs += v.re.abs();
            signed += v.re;
        }
        if !(signed > 0.0) {
            return Err(Error::Domain(format!("field integrates to {signed}")));
        }
        Ok(abs / signed - 1.0)
    };
    let eta = at(factor)?;
    let coarse = at((factor / 2).max(1))?;
    Ok(GridEta {
        eta: eta.max(0.0),
        err_estimate: (eta - coarse).abs(),
        rect,
    })
}

pub fn negativity_table(
    n_max: u32,
    lam: f64,
    method: Method,
    tol: f64,
) -> Result<Vec<NegativityRecord>> {
    let rows = map_indices(n_max as usize + 1, Execution::default(), |n| {
        let n = n as u32;
        match method {
            Method::Radial => eta_radial(n).map(|mut r| {
                r.lam = lam;
                r
            }),
            Method::Grid => DampedParams::new(lam, n).and_then(|p| eta_grid_damped(&p, tol)),
        }
    });
    rows.into_iter().collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaScan {
    pub n: u32,
    pub tol: f64,
    pub radial: NegativityRecord,
    pub grid: Vec<NegativityRecord>,
    pub max_deviation: f64,
    pub pass: bool,
}

/// Grid η at each λ against the λ-free radial value.
pub fn lambda_scan(n: u32, lams: &[f64], tol: f64) -> Result<LambdaScan> {
    let radial = eta_radial(n)?;
    let params = lams
        .iter()
        .map(|&l| DampedParams::new(l, n))
        .collect::<Result<Vec<_>>>()?;
    let grid = map_indices(params.len(), Execution::default(), |i| {
        eta_grid_damped(&params[i], 0.1 * tol)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let max_deviation = grid
        .iter()
        .map(|g| (g.eta - radial.eta).abs())
        .fold(0.0, f64::max);
    Ok(LambdaScan {
        n,
        tol,
        radial,
        grid,
        max_deviation,
        pass: max_deviation <= tol,
    })
}

/// `∫|W|` for the damped family, `1 + η`.
pub fn abs_volume(n: u32) -> Result<f64> {
    Ok(1.0 + eta_radial(n)?.eta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_low_orders() {
        assert!((laguerre_roots(1).unwrap()[0] - 1.0).abs() < 1e-15);
        let r = laguerre_roots(2).unwrap();
        assert!((r[0] - (2.0 - 2f64.sqrt())).abs() < 1e-15);
        assert!((r[1] - (2.0 + 2f64.sqrt())).abs() < 1e-14);
        let r = laguerre_roots(100).unwrap();
        assert_eq!(r.len(), 100);
        assert!(r.windows(2).all(|w| w[0] < w[1]));
        for &x in r.iter().step_by(9) {
            let scale = laguerre_derivative(100, x).abs() * x;
            assert!(laguerre(100, x).abs() < 1e-10 * scale.max(1.0));
        }
    }

    #[test]
    fn radial_closed_forms() {
        assert_eq!(eta_radial(0).unwrap().eta, 0.0);
        // ∫_1^∞ ½ e^{−y/2}(y−1) dy = 2 e^{−1/2}
        let e1 = 4.0 * (-0.5f64).exp() - 2.0;
        let r = eta_radial(1).unwrap();
        assert!((r.eta - e1).abs() < 1e-13, "{}", r.eta - e1);
        assert!(r.err_estimate < 1e-10);
    }

    #[test]
    fn radial_tracks_reference_to_several_digits() {
        for (n, &e) in REFERENCE_ETA.iter().enumerate() {
            let r = eta_radial(n as u32).unwrap();
            assert!((r.eta - e).abs() < 1e-5, "n={n}: {} vs {e}", r.eta);
        }
    }

    #[test]
    fn grid_agrees_with_radial() {
        let p = DampedParams::new(0.5, 2).unwrap();
        let g = eta_grid_damped(&p, 1e-5).unwrap();
        let r = eta_radial(2).unwrap();
        assert!((g.eta - r.eta).abs() < 1e-4, "{} {}", g.eta, r.eta);
    }

    #[test]
    fn grid_rescaled_is_invariant() {
        let dw = DampedWigner::new(DampedParams::new(0.3, 1).unwrap());
        let rect = damped_box(&dw.params);
        let a = eta_grid(|q, p| dw.value(q, p), &rect, 1e-5, Execution::Sequential).unwrap();
        let b = eta_grid(
            |q, p| 3.5 * dw.value(q, p),
            &rect,
            1e-5,
            Execution::Sequential,
        )
        .unwrap();
        assert!((a.eta - b.eta).abs() < 1e-6);
    }

    #[test]
    fn small_box_is_reported() {
        let dw = DampedWigner::new(DampedParams::new(0.0, 0).unwrap());
        let e = eta_grid(
            |q, p| dw.value(q, p),
            &Rect::square(1.0),
            1e-6,
            Execution::Sequential,
        );
        match e {
            Err(Error::BoxTooSmall { qmax, .. }) => assert!(qmax > 3.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn monotone_to_fifty() {
        let t = negativity_table(50, 0.1, Method::Radial, 1e-10).unwrap();
        assert!(t.windows(2).all(|w| w[1].eta > w[0].eta));
    }
}
