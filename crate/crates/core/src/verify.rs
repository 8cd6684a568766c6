//! Cross-engine invariant suite: the exact algebra checked against the
//! grid engine, wavefunction transforms and closed forms.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{
    apply, bopp_from_symbol, eigen_residual, polygauss_star, PolyGauss, Polynomial,
    PolynomialSymbol, QuadForm, Rect, Side,
};
use crate::error::Result;
use crate::exec::Execution;
use crate::grid::{
    grid_distance, moyal_bracket_numeric_with, sample, sample_fn, star_numeric_with,
    wigner_from_wavefunction, GridField, GridSpec, WavefunctionQuadrature,
};
use crate::models::{
    damped_energy, damped_hamiltonian, damped_wigner, helium_energy, helium_excite, helium_ground,
    helium_residual, helium_wigner, hermite_function, DampedParams, HeliumParams, Oscillator,
};
use crate::negativity::eta_radial;

/// Deliberate defects for exercising the suite itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Flip the sign of every damped Wigner function.
    DampedSign,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyOptions {
    /// Nodes per axis for the grid-engine checks on `[−8, 8]²`.
    pub grid_n: usize,
    pub fault: Option<Fault>,
    pub exec: Execution,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            grid_n: 128,
            fault: None,
            exec: Execution::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    fn new(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            value,
            tol,
            pass: value <= tol,
        }
    }
}

/// Grid purity bound on `[−8, 8]²` with `n` nodes per axis. Measured errors
/// for damped `n ≤ 3` at λ = 0.5: `5e−11` at 64², `2e−5` at 48², `0.13` at 32².
pub fn purity_grid_tolerance(n: usize) -> f64 {
    match n {
        128.. => 1e-4,
        64..=127 => 1e-3,
        48..=63 => 1e-2,
        _ => 2e-1,
    }
}

/// Box, grid and super-Gaussian window `exp(−(r/R)^24)` for brackets
/// against a polynomial Hamiltonian.
pub const STATIONARY_HALF: f64 = 14.0;
pub const STATIONARY_NODES: usize = 192;
pub const WINDOW_RADIUS: f64 = 10.0;
pub const WINDOW_ORDER: i32 = 24;

pub fn windowed_symbol(
    h: &PolynomialSymbol,
    spec: &GridSpec,
    hbar: f64,
    exec: Execution,
) -> Result<GridField> {
    sample_fn(spec, hbar, exec, |q, p| {
        let r2 = (q * q + p * p) / (WINDOW_RADIUS * WINDOW_RADIUS);
        h.eval(q, p) * (-r2.powi(WINDOW_ORDER / 2)).exp()
    })
}

/// `(|∫{H,W}|, sup|{H,W}| / sup|H⋆W|)` with `H` windowed.
pub fn stationarity(h: &PolynomialSymbol, w: &PolyGauss, exec: Execution) -> Result<(f64, f64)> {
    let spec = GridSpec::square(STATIONARY_HALF, STATIONARY_NODES)?;
    let hw = windowed_symbol(h, &spec, w.hbar(), exec)?;
    let wf = sample(w, &spec)?;
    let hs = star_numeric_with(&hw, &wf, exec)?;
    let br = moyal_bracket_numeric_with(&hw, &wf, exec)?;
    Ok((br.integral().norm(), br.max_abs() / hs.max_abs()))
}

fn damped(opts: &VerifyOptions, lam: f64, n: u32) -> Result<PolyGauss> {
    let w = damped_wigner(&DampedParams::new(lam, n)?);
    Ok(match opts.fault {
        Some(Fault::DampedSign) => w.scale(-1.0),
        None => w,
    })
}

fn sup_on(f: &PolyGauss, g: &PolyGauss, pts: &[(f64, f64)]) -> f64 {
    let mut d = 0.0f64;
    let mut m = 0.0f64;
    for &(q, p) in pts {
        d = d.max((f.eval(q, p) - g.eval(q, p)).norm());
        m = m.max(f.eval(q, p).norm());
    }
    d / m
}

fn probe_points() -> Vec<(f64, f64)> {
    crate::algebra::low_discrepancy(200, &Rect::square(4.0))
}

/// Every Wigner function the purity checks cover.
fn purity_family(opts: &VerifyOptions) -> Result<Vec<(String, PolyGauss)>> {
    let mut out = Vec::new();
    let osc = Oscillator::default();
    for n in 0..4 {
        out.push((format!("harmonic n={n}"), osc.wigner(n)));
    }
    for n in 0..4 {
        out.push((format!("damped n={n} lam=0.5"), damped(opts, 0.5, n)?));
    }
    let hp = HeliumParams::new(1.0, 1.0, 0.1, 1.0)?;
    let (wu, wv) = helium_wigner(&helium_ground(&hp))?;
    out.push(("helium u-sector xi=0.1".into(), wu));
    out.push(("helium v-sector xi=0.1".into(), wv));
    Ok(out)
}

pub fn run_verify(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let pts = probe_points();
    let hbar = 1.0;

    // q⋆p − p⋆q = iħ acting on a test function
    let f = PolyGauss::gaussian(QuadForm::real(0.8, 0.1, 1.2), hbar)
        .with_poly(Polynomial::q() + Polynomial::constant(0.5));
    let lq = bopp_from_symbol(&Polynomial::q(), Side::Left, hbar);
    let lp = bopp_from_symbol(&Polynomial::p(), Side::Left, hbar);
    let comm = apply(&lq, &apply(&lp, &f)?)?.try_sub(&apply(&lp, &apply(&lq, &f)?)?)?;
    checks.push(Check::new(
        "heisenberg [q,p] = i hbar",
        sup_on(&f.scale(Complex64::i()), &comm, &pts),
        1e-12,
    ));

    let osc = Oscillator::default();
    let a = bopp_from_symbol(&osc.annihilation(), Side::Left, hbar);
    let ad = bopp_from_symbol(&osc.creation(), Side::Left, hbar);
    let psi = osc.amplitude(2)?;
    let c = apply(&a, &apply(&ad, &psi)?)?.try_sub(&apply(&ad, &apply(&a, &psi)?)?)?;
    checks.push(Check::new(
        "ladder [a,a+] = 1",
        sup_on(&psi, &c, &pts),
        1e-12,
    ));

    // purity, both engines
    let spec = GridSpec::square(8.0, opts.grid_n)?;
    let grid_tol = purity_grid_tolerance(opts.grid_n);
    let mut sym = 0.0f64;
    let mut grid = 0.0f64;
    for (_, w) in purity_family(opts)? {
        let target = w.scale(1.0 / (2.0 * PI * w.hbar()));
        sym = sym.max(sup_on(&target, &polygauss_star(&w, &w)?, &pts));
        let wf = sample(&w, &spec)?;
        let ww = star_numeric_with(&wf, &wf, opts.exec)?;
        grid = grid.max(grid_distance(&sample(&target, &spec)?, &ww)?.0);
    }
    checks.push(Check::new("purity W*W = W/(2 pi hbar), exact", sym, 1e-9));
    checks.push(Check::new(
        format!("purity W*W = W/(2 pi hbar), grid {}^2", opts.grid_n),
        grid,
        grid_tol,
    ));

    // parity and normalization of the damped family
    let mut parity = 0.0f64;
    let mut norm = 0.0f64;
    for lam in [0.0, 0.3, 0.9] {
        for n in 0..6 {
            let w = damped(opts, lam, n)?;
            let want = if n % 2 == 0 { 1.0 } else { -1.0 };
            parity = parity.max((w.eval(0.0, 0.0).re * PI - want).abs());
            norm = norm.max((w.integrate()? - 1.0).norm());
        }
    }
    checks.push(Check::new(
        "damped parity pi W_n(0,0) = (-1)^n",
        parity,
        1e-12,
    ));
    checks.push(Check::new("damped normalization", norm, 1e-10));

    let mut res = 0.0f64;
    let rect = Rect::square(4.0);
    for lam in [0.0, 0.1, 0.5, 0.9] {
        for n in 0..=10 {
            let dp = DampedParams::new(lam, n)?;
            res = res.max(eigen_residual(
                &damped_hamiltonian(lam),
                &damped(opts, lam, n)?,
                damped_energy(&dp),
                &rect,
                100,
            ));
        }
    }
    checks.push(Check::new("damped eigen-residual n<=10", res, 1e-9));

    let hp = HeliumParams::new(1.0, 1.0, 0.1, 1.0)?;
    let mut hres = 0.0f64;
    let g = helium_ground(&hp);
    for k in 0..=2 {
        let s = helium_excite(&g, k)?;
        hres = hres.max(helium_residual(
            &s,
            helium_energy(k, k, &hp),
            &rect,
            &rect,
            200,
        )?);
    }
    checks.push(Check::new("helium eigen-residual k<=2", hres, 1e-10));

    // λ = 0 against the transform of Hermite functions
    let ospec = GridSpec::square(6.0, 61)?;
    let mut oracle = 0.0f64;
    for n in 0..=5 {
        let w = wigner_from_wavefunction(
            |x| Complex64::new(hermite_function(n, x), 0.0),
            (-12.0, 12.0),
            &ospec,
            hbar,
            WavefunctionQuadrature::default(),
            opts.exec,
        )?;
        let d = sample(&damped(opts, 0.0, n)?, &ospec)?;
        let sup = w
            .values()
            .iter()
            .zip(d.values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        oracle = oracle.max(sup);
    }
    checks.push(Check::new(
        "damped lam=0 vs Hermite Wigner transform",
        oracle,
        1e-6,
    ));

    // exact star product against the grid engine
    let pairs = [
        (
            PolyGauss::gaussian(QuadForm::real(1.0, 0.0, 1.0), hbar)
                .with_poly(Polynomial::q() * Polynomial::p()),
            PolyGauss::gaussian(QuadForm::real(0.6, -0.2, 0.9), hbar)
                .with_poly(Polynomial::q() - Polynomial::constant(1.0)),
        ),
        (
            PolyGauss::gaussian(QuadForm::real(2.0, 0.0, 0.5), hbar),
            PolyGauss::gaussian(QuadForm::real(2.0, 0.0, 0.5), hbar),
        ),
    ];
    let mut cross = 0.0f64;
    for (f, g) in &pairs {
        let exact = sample(&polygauss_star(f, g)?, &spec)?;
        let num = star_numeric_with(&sample(f, &spec)?, &sample(g, &spec)?, opts.exec)?;
        cross = cross.max(grid_distance(&exact, &num)?.0);
    }
    checks.push(Check::new(
        format!("exact vs grid star product, {}^2", opts.grid_n),
        cross,
        1e-6f64.max(grid_tol * 1e-2),
    ));

    let (int, sup) = stationarity(&damped_hamiltonian(0.5), &damped(opts, 0.5, 2)?, opts.exec)?;
    checks.push(Check::new("stationarity {H,W_2} integral", int, 1e-8));
    checks.push(Check::new("stationarity {H,W_2} sup / sup|H*W|", sup, 1e-6));

    let e1 = eta_radial(1)?.eta;
    checks.push(Check::new(
        "eta(1) = 4 exp(-1/2) - 2",
        (e1 - (4.0 * (-0.5f64).exp() - 2.0)).abs(),
        1e-12,
    ));
    Ok(checks)
}
