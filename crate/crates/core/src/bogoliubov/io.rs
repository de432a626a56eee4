//! Text container for coefficient sets.
//!
//! ```text
//! bogoent-coefficients 1
//! modes 1 2 3
//! size 3
//! order exact            (or: order series 1)
//! h 1.0000000000000000e-3   (present iff exact)
//! residual_bound 1.0000000000000000e-10
//! alpha
//! <re> <im> <re> <im> ...   (size rows of 2*size numbers)
//! beta
//! ...
//! ```
//!
//! Numbers use 17 significant digits so every `f64` round-trips exactly.
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::{CMatrix, Complex64};

use super::{BogoCoeffs, OrderTag};

const MAGIC: &str = "bogoent-coefficients 1";

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn format_coeffs(c: &BogoCoeffs) -> String {
    let mut out = String::new();
    let labels: Vec<String> = c.modes().iter().map(|m| m.to_string()).collect();
    let _ = writeln!(out, "{MAGIC}");
    let _ = writeln!(out, "modes {}", labels.join(" "));
    let _ = writeln!(out, "size {}", c.len());
    match c.order() {
        OrderTag::Exact { h } => {
            let _ = writeln!(out, "order exact");
            let _ = writeln!(out, "h {}", num(h));
        }
        OrderTag::Series(k) => {
            let _ = writeln!(out, "order series {k}");
        }
    }
    let _ = writeln!(out, "residual_bound {}", num(c.residual_bound()));
    for (name, mat) in [("alpha", c.alpha()), ("beta", c.beta())] {
        let _ = writeln!(out, "{name}");
        for i in 0..mat.nrows() {
            let row: Vec<String> = mat
                .row(i)
                .iter()
                .flat_map(|z| [num(z.re), num(z.im)])
                .collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
    }
    out
}

pub fn write_coeffs(c: &BogoCoeffs, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, format_coeffs(c))?;
    Ok(())
}

pub fn read_coeffs(path: impl AsRef<Path>) -> Result<BogoCoeffs> {
    parse_coeffs(&std::fs::read_to_string(path)?)
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
}

impl<'a> Lines<'a> {
    fn next_content(&mut self) -> Result<&'a str> {
        for (i, raw) in self.inner.by_ref() {
            let t = raw.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            self.line = i + 1;
            return Ok(t);
        }
        Err(self.err("unexpected end of file"))
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Format {
            line: self.line,
            msg: msg.into(),
        }
    }

    fn keyed(&mut self, key: &str) -> Result<&'a str> {
        let t = self.next_content()?;
        match t.split_once(char::is_whitespace) {
            Some((k, rest)) if k == key => Ok(rest.trim()),
            _ if t == key => Ok(""),
            _ => Err(self.err(format!("expected `{key}`, found `{t}`"))),
        }
    }

    fn float(&self, s: &str) -> Result<f64> {
        s.parse::<f64>()
            .map_err(|_| self.err(format!("invalid number `{s}`")))
    }

    fn matrix(&mut self, name: &str, size: usize) -> Result<CMatrix> {
        let rest = self.keyed(name)?;
        if !rest.is_empty() {
            return Err(self.err(format!("unexpected text after `{name}`")));
        }
        let mut m = CMatrix::zeros(size, size);
        for i in 0..size {
            let row = self.next_content()?;
            let vals: Vec<f64> = row
                .split_whitespace()
                .map(|s| self.float(s))
                .collect::<Result<_>>()?;
            if vals.len() != 2 * size {
                return Err(self.err(format!(
                    "{name} row {} has {} numbers, expected {} (matrix must be square)",
                    i + 1,
                    vals.len(),
                    2 * size
                )));
            }
            for j in 0..size {
                m[(i, j)] = Complex64::new(vals[2 * j], vals[2 * j + 1]);
            }
        }
        Ok(m)
    }
}

pub fn parse_coeffs(text: &str) -> Result<BogoCoeffs> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        line: 0,
    };
    let head = lines.next_content()?;
    if head != MAGIC {
        return Err(lines.err(format!("expected header `{MAGIC}`")));
    }
    let modes: Vec<usize> = lines
        .keyed("modes")?
        .split_whitespace()
        .map(|s| s.parse::<usize>().map_err(|_| lines.err(format!("invalid mode label `{s}`"))))
        .collect::<Result<_>>()?;
    let size_str = lines.keyed("size")?;
    let size: usize = size_str
        .parse()
        .map_err(|_| lines.err(format!("invalid size `{size_str}`")))?;
    if size != modes.len() {
        return Err(lines.err(format!("size {size} disagrees with {} mode labels", modes.len())));
    }
    let order = match lines.keyed("order")? {
        "exact" => {
            let h = lines.keyed("h")?;
            OrderTag::Exact { h: lines.float(h)? }
        }
        other => match other.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["series", k] => OrderTag::Series(
                k.parse()
                    .map_err(|_| lines.err(format!("invalid series order `{k}`")))?,
            ),
            _ => return Err(lines.err(format!("unknown order tag `{other}`"))),
        },
    };
    let bound = lines.keyed("residual_bound")?;
    let bound = lines.float(bound)?;
    let alpha = lines.matrix("alpha", size)?;
    let beta = lines.matrix("beta", size)?;
    if let Ok(extra) = lines.next_content() {
        return Err(lines.err(format!("trailing content `{extra}`")));
    }
    BogoCoeffs::new(modes, alpha, beta, order, bound).map_err(|e| Error::Format {
        line: lines.line,
        msg: e.to_string(),
    })
}
