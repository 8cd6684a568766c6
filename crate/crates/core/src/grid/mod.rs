//! Uniform phase-space grids and the numerical star product.

mod fft;
mod twisted;
mod wigner;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{PolyGauss, Rect};
use crate::error::{Error, Result};
use crate::exec::{map_indices, Execution};

pub use fft::refine;
pub use twisted::{
    boundary_ratio, moyal_bracket_numeric, moyal_bracket_numeric_with, star_numeric,
    star_numeric_with, DECAY_THRESHOLD,
};
pub use wigner::{wigner_from_wavefunction, WavefunctionQuadrature};

/// Node `i` sits at `min + i (max − min)/(n − 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub qmin: f64,
    pub qmax: f64,
    pub pmin: f64,
    pub pmax: f64,
    pub nq: usize,
    pub np: usize,
}

impl GridSpec {
    pub fn new(qmin: f64, qmax: f64, pmin: f64, pmax: f64, nq: usize, np: usize) -> Result<Self> {
        let s = GridSpec {
            qmin,
            qmax,
            pmin,
            pmax,
            nq,
            np,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn square(half: f64, n: usize) -> Result<Self> {
        Self::new(-half, half, -half, half, n, n)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.qmin, self.qmax, self.pmin, self.pmax]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidGrid("non-finite bounds".into()));
        }
        if !(self.qmax > self.qmin && self.pmax > self.pmin) {
            return Err(Error::InvalidGrid(format!(
                "empty box [{}, {}] x [{}, {}]",
                self.qmin, self.qmax, self.pmin, self.pmax
            )));
        }
        if self.nq < 8 || self.np < 8 {
            return Err(Error::InvalidGrid(format!(
                "need at least 8 nodes per axis, got {} x {}",
                self.nq, self.np
            )));
        }
        Ok(())
    }

    pub fn dq(&self) -> f64 {
        (self.qmax - self.qmin) / (self.nq - 1) as f64
    }

    pub fn dp(&self) -> f64 {
        (self.pmax - self.pmin) / (self.np - 1) as f64
    }

    pub fn q(&self, i: usize) -> f64 {
        self.qmin + i as f64 * self.dq()
    }

    pub fn p(&self, j: usize) -> f64 {
        self.pmin + j as f64 * self.dp()
    }

    pub fn len(&self) -> usize {
        self.nq * self.np
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn rect(&self) -> Rect {
        Rect::new(self.qmin, self.qmax, self.pmin, self.pmax)
    }
}

/// Complex samples on a [`GridSpec`], row-major over `q` then `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridField {
    spec: GridSpec,
    values: Vec<Complex64>,
    hbar: f64,
    warnings: Vec<String>,
}

impl GridField {
    pub fn new(spec: GridSpec, values: Vec<Complex64>, hbar: f64) -> Result<Self> {
        spec.validate()?;
        if values.len() != spec.len() {
            return Err(Error::InvalidGrid(format!(
                "{} values for a {} x {} grid",
                values.len(),
                spec.nq,
                spec.np
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "non-finite value at ({}, {})",
                spec.q(i / spec.np),
                spec.p(i % spec.np)
            )));
        }
        Ok(GridField {
            spec,
            values,
            hbar,
            warnings: Vec::new(),
        })
    }

    pub fn constant(spec: GridSpec, c: Complex64, hbar: f64) -> Result<Self> {
        Self::new(spec, vec![c; spec.len()], hbar)
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub(crate) fn push_warning(&mut self, w: String) {
        self.warnings.push(w);
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.spec.np + j]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Trapezoid rule over the box.
    pub fn integral(&self) -> Complex64 {
        let s = &self.spec;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..s.nq {
            let wi = if i == 0 || i == s.nq - 1 { 0.5 } else { 1.0 };
            let mut row = Complex64::new(0.0, 0.0);
            for j in 0..s.np {
                let wj = if j == 0 || j == s.np - 1 { 0.5 } else { 1.0 };
                row += wj * self.get(i, j);
            }
            acc += wi * row;
        }
        acc * s.dq() * s.dp()
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        GridField {
            spec: self.spec,
            values: self.values.iter().map(|&v| f(v)).collect(),
            hbar: self.hbar,
            warnings: self.warnings.clone(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|v| v * c)
    }

    fn zip(&self, o: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        check_same(self, o)?;
        Ok(GridField {
            spec: self.spec,
            values: self
                .values
                .iter()
                .zip(&o.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
            hbar: self.hbar,
            warnings: Vec::new(),
        })
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a - b)
    }

    /// Pointwise product.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a * b)
    }
}

pub(crate) fn check_same(a: &GridField, b: &GridField) -> Result<()> {
    if a.spec != b.spec {
        return Err(Error::SpecMismatch(format!("{:?} vs {:?}", a.spec, b.spec)));
    }
    if a.hbar != b.hbar {
        return Err(Error::SpecMismatch(format!(
            "hbar {} vs {}",
            a.hbar, b.hbar
        )));
    }
    Ok(())
}

/// Evaluate `f` at every node.
pub fn sample_fn<F>(spec: &GridSpec, hbar: f64, exec: Execution, f: F) -> Result<GridField>
where
    F: Fn(f64, f64) -> Complex64 + Sync + Send,
{
    let rows = map_indices(spec.nq, exec, |i| {
        let q = spec.q(i);
        (0..spec.np).map(|j| f(q, spec.p(j))).collect::<Vec<_>>()
    });
    GridField::new(*spec, rows.concat(), hbar)
}

pub fn sample(f: &PolyGauss, spec: &GridSpec) -> Result<GridField> {
    sample_fn(spec, f.hbar(), Execution::default(), |q, p| f.eval(q, p))
}

/// `(max|A−B| / max|A|, ‖A−B‖₂ / ‖A‖₂)`, relative to the first argument.
pub fn grid_distance(a: &GridField, b: &GridField) -> Result<(f64, f64)> {
    check_same(a, b)?;
    let mut sup_d = 0.0f64;
    let mut sup_a = 0.0f64;
    let mut l2_d = 0.0f64;
    let mut l2_a = 0.0f64;
    for (&x, &y) in a.values.iter().zip(&b.values) {
        let d = (x - y).norm();
        sup_d = sup_d.max(d);
        sup_a = sup_a.max(x.norm());
        l2_d += d * d;
        l2_a += x.norm_sqr();
    }
    let rel = |num: f64, den: f64| {
        if den > 0.0 {
            num / den
        } else if num == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    };
    Ok((rel(sup_d, sup_a), rel(l2_d.sqrt(), l2_a.sqrt())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::QuadForm;
    use std::f64::consts::PI;

    #[test]
    fn spec_validation() {
        assert!(GridSpec::new(0.0, 1.0, 0.0, 1.0, 7, 8).is_err());
        assert!(GridSpec::new(1.0, 1.0, 0.0, 1.0, 8, 8).is_err());
        let s = GridSpec::square(6.0, 13).unwrap();
        assert_eq!(s.dq(), 1.0);
        assert_eq!(s.q(6), 0.0);
    }

    #[test]
    fn constant_and_peak() {
        let s = GridSpec::square(6.0, 128).unwrap();
        let one = sample(&PolyGauss::constant(1.0, 1.0), &s).unwrap();
        assert!(one.values().iter().all(|&v| v == Complex64::new(1.0, 0.0)));
        let w0 = PolyGauss::gaussian(QuadForm::real(1.0, 0.0, 1.0), 1.0).scale(1.0 / PI);
        let f = sample(&w0, &s).unwrap();
        let (imax, _) = f
            .values()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.re.total_cmp(&b.1.re))
            .unwrap();
        let (i, j) = (imax / s.np, imax % s.np);
        assert!(s.q(i).abs() <= 0.5 * s.dq() + 1e-12);
        assert!(s.p(j).abs() <= 0.5 * s.dp() + 1e-12);
        assert!((f.max_abs() - (-(s.q(i).powi(2) + s.p(j).powi(2))).exp() / PI).abs() < 1e-15);
    }

    #[test]
    fn distances() {
        let s = GridSpec::square(6.0, 32).unwrap();
        let w0 = PolyGauss::gaussian(QuadForm::real(1.0, 0.0, 1.0), 1.0).scale(1.0 / PI);
        let a = sample(&w0, &s).unwrap();
        assert_eq!(grid_distance(&a, &a).unwrap(), (0.0, 0.0));
        let b = a.scale(Complex64::new(1.01, 0.0));
        let (sup, l2) = grid_distance(&a, &b).unwrap();
        assert!((sup - 0.01).abs() < 1e-12 && (l2 - 0.01).abs() < 1e-12);
        let c = sample(&w0, &GridSpec::square(5.0, 32).unwrap()).unwrap();
        assert!(matches!(grid_distance(&a, &c), Err(Error::SpecMismatch(_))));
    }

    #[test]
    fn trapezoid_normalization() {
        let s = GridSpec::square(8.0, 101).unwrap();
        let w0 = PolyGauss::gaussian(QuadForm::real(1.0, 0.0, 1.0), 1.0).scale(1.0 / PI);
        let f = sample(&w0, &s).unwrap();
        assert!((f.integral() - 1.0).norm() < 1e-12);
    }
}
