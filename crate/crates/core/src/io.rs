//! Grid CSV and table JSON formats.
//!
//! A grid file starts with `# key: value` header lines, then a `q,p,W`
//! column line, then one row per node in row-major order. Numbers use
//! `{:.16e}`, which is locale-independent and round-trips every `f64`.

use std::io::{BufRead, Write};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{GridField, GridSpec};

pub const FORMAT_VERSION: &str = concat!("moyal ", env!("CARGO_PKG_VERSION"));

/// Ordered header entries written before the grid rows.
pub type Header = Vec<(String, String)>;

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Header entries describing the grid itself.
pub fn grid_header(spec: &GridSpec, hbar: f64) -> Header {
    vec![
        ("qmin".into(), num(spec.qmin)),
        ("qmax".into(), num(spec.qmax)),
        ("pmin".into(), num(spec.pmin)),
        ("pmax".into(), num(spec.pmax)),
        ("nq".into(), spec.nq.to_string()),
        ("np".into(), spec.np.to_string()),
        ("hbar".into(), num(hbar)),
    ]
}

/// Writes the real part of `field`. The caller's `header` goes first, then the
/// grid description, the trapezoid integral and the format version.
pub fn write_grid_csv<W: Write>(
    mut w: W,
    header: &[(String, String)],
    field: &GridField,
) -> Result<()> {
    let s = field.spec();
    for (k, v) in header {
        writeln!(w, "# {k}: {v}")?;
    }
    for (k, v) in grid_header(s, field.hbar()) {
        writeln!(w, "# {k}: {v}")?;
    }
    writeln!(w, "# integral: {}", num(field.integral().re))?;
    let im = field
        .values()
        .iter()
        .map(|v| v.im.abs())
        .fold(0.0, f64::max);
    writeln!(w, "# max_imag: {}", num(im))?;
    for warning in field.warnings() {
        writeln!(w, "# warning: {warning}")?;
    }
    writeln!(w, "# version: {FORMAT_VERSION}")?;
    writeln!(w, "q,p,W")?;
    for i in 0..s.nq {
        let q = num(s.q(i));
        for j in 0..s.np {
            writeln!(w, "{q},{},{}", num(s.p(j)), num(field.get(i, j).re))?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Parsed grid file.
#[derive(Clone, Debug)]
pub struct GridFile {
    pub header: Header,
    pub field: GridField,
}

impl GridFile {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.header
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

pub fn read_grid_csv<R: BufRead>(r: R) -> Result<GridFile> {
    let mut header = Vec::new();
    let mut values = Vec::new();
    let mut seen_columns = false;
    for (ln, line) in r.lines().enumerate() {
        let line = line?;
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((k, v)) = rest.trim().split_once(':') {
                header.push((k.trim().to_string(), v.trim().to_string()));
            }
            continue;
        }
        if !seen_columns {
            if line.trim() != "q,p,W" {
                return Err(Error::Parse(format!(
                    "line {}: expected column header",
                    ln + 1
                )));
            }
            seen_columns = true;
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let w = line
            .rsplit(',')
            .next()
            .ok_or_else(|| Error::Parse(format!("line {}: empty row", ln + 1)))?;
        let v: f64 = w
            .parse()
            .map_err(|_| Error::Parse(format!("line {}: bad number '{w}'", ln + 1)))?;
        values.push(Complex64::new(v, 0.0));
    }
    let find = |k: &str| -> Result<&str> {
        header
            .iter()
            .find(|(key, _)| key == k)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| Error::Parse(format!("missing header '{k}'")))
    };
    let real = |k: &str| -> Result<f64> {
        find(k)?
            .parse()
            .map_err(|_| Error::Parse(format!("bad header '{k}'")))
    };
    let count = |k: &str| -> Result<usize> {
        find(k)?
            .parse()
            .map_err(|_| Error::Parse(format!("bad header '{k}'")))
    };
    let spec = GridSpec::new(
        real("qmin")?,
        real("qmax")?,
        real("pmin")?,
        real("pmax")?,
        count("nq")?,
        count("np")?,
    )?;
    let hbar = real("hbar")?;
    let field = GridField::new(spec, values, hbar)?;
    Ok(GridFile { header, field })
}

/// Pretty JSON followed by a newline.
pub fn write_json<W: Write, T: Serialize + ?Sized>(mut w: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Error::Parse(e.to_string()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Execution;
    use crate::grid::sample_fn;

    #[test]
    fn roundtrip_is_exact() {
        let s = GridSpec::new(-1.0, 2.0, -0.5, 0.5, 9, 8).unwrap();
        let f = sample_fn(&s, 0.7, Execution::Sequential, |q, p| {
            Complex64::new((q * 1.3).sin() * p.exp() / 3.0, 0.0)
        })
        .unwrap();
        let mut buf = Vec::new();
        write_grid_csv(&mut buf, &[("model".into(), "test".into())], &f).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# model: test\n"));
        let back = read_grid_csv(buf.as_slice()).unwrap();
        assert_eq!(back.field.values(), f.values());
        assert_eq!(back.field.spec(), f.spec());
        assert_eq!(back.get("model"), Some("test"));
    }

    #[test]
    fn rejects_garbage() {
        assert!(read_grid_csv("x,y\n".as_bytes()).is_err());
        assert!(read_grid_csv("# nq: 8\nq,p,W\n0,0,abc\n".as_bytes()).is_err());
    }
}
