//! Plain-text model, sample and point files.
//!
//! Models start with a header `bary n kind` or `tcf n kind` (`kind` is `f64`
//! or `c64`), followed by one line per node:
//!
//! ```text
//! bary: z_re z_im f_re f_im w_re w_im
//! tcf:  z_re z_im w_re w_im
//! ```
//!
//! Sample files hold `x_re x_im f_re f_im` lines and point files one or two
//! columns. Blank lines and lines starting with `#` are ignored everywhere.
//! Numbers are written with 17 significant digits, which round-trips binary64.

use std::fmt::Write as _;

use crate::barycentric::BaryModel;
use crate::fit::{Approximant, Representation};
use crate::scalar::{Complex64, Scalar, ScalarKind};
use crate::thiele::TcfModel;
use crate::{Error, Result};

/// A model read from a file, at the precision its header names.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyModel {
    Real(Approximant<f64>),
    Complex(Approximant<Complex64>),
}

impl AnyModel {
    pub fn kind(&self) -> ScalarKind {
        match self {
            AnyModel::Real(_) => ScalarKind::F64,
            AnyModel::Complex(_) => ScalarKind::C64,
        }
    }

    pub fn representation(&self) -> Representation {
        match self {
            AnyModel::Real(m) => m.representation(),
            AnyModel::Complex(m) => m.representation(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            AnyModel::Real(m) => m.len(),
            AnyModel::Complex(m) => m.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

fn pair(z: Complex64) -> String {
    format!("{} {}", fmt_num(z.re), fmt_num(z.im))
}

pub fn write_model<S: Scalar>(model: &Approximant<S>) -> Result<String> {
    let kind = S::KIND;
    if !matches!(kind, ScalarKind::F64 | ScalarKind::C64) {
        return Err(Error::InvalidModel(format!("cannot write a {kind} model")));
    }
    let mut out = String::new();
    match model {
        Approximant::Bary(m) => {
            let _ = writeln!(out, "bary {} {kind}", m.len());
            for ((z, f), w) in m.nodes().iter().zip(m.values()).zip(m.weights()) {
                let _ = writeln!(out, "{} {} {}", pair(z.to_c64()), pair(f.to_c64()), pair(w.to_c64()));
            }
        }
        Approximant::Tcf(m) => {
            let _ = writeln!(out, "tcf {} {kind}", m.len());
            for (z, w) in m.nodes().iter().zip(m.coeffs()) {
                let _ = writeln!(out, "{} {}", pair(z.to_c64()), pair(w.to_c64()));
            }
        }
    }
    Ok(out)
}

/// Non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_numbers(line: usize, s: &str) -> Result<Vec<f64>> {
    s.split_whitespace()
        .map(|tok| {
            tok.parse::<f64>().map_err(|_| Error::Parse { line, message: format!("not a number: `{tok}`") })
        })
        .collect()
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

pub fn read_model(text: &str) -> Result<AnyModel> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| parse_err(0, "empty model file"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [rep, n, kind] = fields[..] else {
        return Err(parse_err(hline, "header must be `<bary|tcf> <n> <kind>`"));
    };
    let rep: Representation = rep.parse().map_err(|_| parse_err(hline, format!("unknown representation `{rep}`")))?;
    let n: usize = n.parse().map_err(|_| parse_err(hline, format!("bad node count `{n}`")))?;
    let kind: ScalarKind = kind.parse().map_err(|_| parse_err(hline, format!("unknown kind `{kind}`")))?;
    let width = match rep {
        Representation::Bary => 6,
        Representation::Tcf => 4,
    };
    let mut rows = Vec::with_capacity(n);
    for (line, s) in lines {
        let v = parse_numbers(line, s)?;
        if v.len() != width {
            return Err(parse_err(line, format!("expected {width} numbers, found {}", v.len())));
        }
        rows.push(v);
    }
    if rows.len() != n {
        return Err(parse_err(hline, format!("header says {n} nodes, file has {}", rows.len())));
    }
    let col = |j: usize| -> Vec<Complex64> { rows.iter().map(|r| Complex64::new(r[2 * j], r[2 * j + 1])).collect() };
    match kind {
        ScalarKind::F64 => {
            if rows.iter().any(|r| r.iter().skip(1).step_by(2).any(|&im| im != 0.0)) {
                return Err(parse_err(hline, "f64 model with nonzero imaginary parts"));
            }
            let re = |j: usize| -> Vec<f64> { col(j).into_iter().map(|z| z.re).collect() };
            Ok(AnyModel::Real(build(rep, re(0), re(1), if width == 6 { re(2) } else { Vec::new() })?))
        }
        ScalarKind::C64 => Ok(AnyModel::Complex(build(rep, col(0), col(1), if width == 6 { col(2) } else { Vec::new() })?)),
        other => Err(parse_err(hline, format!("model files hold f64 or c64 data, not {other}"))),
    }
}

fn build<S: Scalar>(rep: Representation, a: Vec<S>, b: Vec<S>, c: Vec<S>) -> Result<Approximant<S>> {
    Ok(match rep {
        Representation::Bary => Approximant::Bary(BaryModel::new(a, b, c)?),
        Representation::Tcf => Approximant::Tcf(TcfModel::from_coefficients(a, b)?),
    })
}

/// `(points, values)` from `x_re x_im f_re f_im` lines.
pub fn read_samples(text: &str) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let (mut z, mut f) = (Vec::new(), Vec::new());
    for (line, s) in content_lines(text) {
        let v = parse_numbers(line, s)?;
        if v.len() != 4 {
            return Err(parse_err(line, format!("expected 4 numbers, found {}", v.len())));
        }
        z.push(Complex64::new(v[0], v[1]));
        f.push(Complex64::new(v[2], v[3]));
    }
    Ok((z, f))
}

pub fn write_samples(points: &[Complex64], values: &[Complex64]) -> String {
    let mut out = String::new();
    for (&z, &f) in points.iter().zip(values) {
        let _ = writeln!(out, "{} {}", pair(z), pair(f));
    }
    out
}

/// Points given as `x` or `x_re x_im` per line.
pub fn read_points(text: &str) -> Result<Vec<Complex64>> {
    content_lines(text)
        .map(|(line, s)| {
            let v = parse_numbers(line, s)?;
            match v[..] {
                [x] => Ok(Complex64::new(x, 0.0)),
                [re, im] => Ok(Complex64::new(re, im)),
                _ => Err(parse_err(line, format!("expected 1 or 2 numbers, found {}", v.len()))),
            }
        })
        .collect()
}
