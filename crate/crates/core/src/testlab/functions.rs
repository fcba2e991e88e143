//! The experiment test functions with closed-form derivatives up to order 2.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::domain::Domain;
use crate::scalar::{Complex64, Scalar};
use crate::{Error, Result};

/// Grid size used to find `max |f^(m)|`.
pub const SCALING_GRID: usize = 20_001;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FunctionId {
    /// `exp(sin z)`
    E,
    /// `cos(20 x)`
    C,
    /// `tanh(x / eps)`
    T,
    /// `log(1 + eps - z)`
    L,
    /// `arctan(x / eps)`
    A,
    /// `cos(z^10)`
    O,
    /// `sqrt(1 - ((1 - eps) / z)^2)`
    S,
    /// `tan(z^-4)`
    M,
}

impl FunctionId {
    pub const ALL: [FunctionId; 8] =
        [FunctionId::E, FunctionId::C, FunctionId::T, FunctionId::L, FunctionId::A, FunctionId::O, FunctionId::S, FunctionId::M];

    pub fn name(self) -> &'static str {
        match self {
            FunctionId::E => "fE",
            FunctionId::C => "fC",
            FunctionId::T => "fT",
            FunctionId::L => "fL",
            FunctionId::A => "fA",
            FunctionId::O => "fO",
            FunctionId::S => "fS",
            FunctionId::M => "fM",
        }
    }

    pub fn needs_epsilon(self) -> bool {
        matches!(self, FunctionId::T | FunctionId::L | FunctionId::A | FunctionId::S)
    }

    fn defined_on(self, domain: Domain) -> bool {
        match domain {
            Domain::Interval => matches!(self, FunctionId::E | FunctionId::C | FunctionId::T | FunctionId::L | FunctionId::A),
            Domain::Circle => matches!(self, FunctionId::E | FunctionId::O | FunctionId::L | FunctionId::S | FunctionId::M),
        }
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FunctionId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FunctionId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::Parse { line: 0, message: format!("unknown test function `{s}`") })
    }
}

/// A test function on a domain, multiplied by `scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestFunction {
    pub id: FunctionId,
    pub epsilon: Option<f64>,
    pub domain: Domain,
    pub scale: f64,
    /// Set when the requested name was mapped to another function
    /// (`fC` on the circle means `fO`).
    pub alias: Option<FunctionId>,
}

impl TestFunction {
    pub fn new(id: FunctionId, epsilon: Option<f64>, domain: Domain) -> Result<Self> {
        let (id, alias) = match (id, domain) {
            (FunctionId::C, Domain::Circle) => (FunctionId::O, Some(FunctionId::C)),
            _ => (id, None),
        };
        if !id.defined_on(domain) {
            return Err(Error::Domain(format!("{id} is not a test function on the {domain}")));
        }
        match (id.needs_epsilon(), epsilon) {
            (true, None) => return Err(Error::Domain(format!("{id} needs an epsilon"))),
            (false, Some(_)) => return Err(Error::Domain(format!("{id} takes no epsilon"))),
            (true, Some(e)) if !(e > 0.0 && e.is_finite()) => {
                return Err(Error::Domain(format!("epsilon must be positive, got {e}")))
            }
            (true, Some(e)) if id == FunctionId::S && e >= 1.0 => {
                return Err(Error::Domain(format!("fS needs epsilon < 1, got {e}")))
            }
            _ => {}
        }
        Ok(Self { id, epsilon, domain, scale: 1.0, alias })
    }

    pub fn with_scale(self, scale: f64) -> Self {
        Self { scale, ..self }
    }

    /// The same function scaled so that `max |f^(order)| = 1`.
    pub fn normalized_for(self, order: usize) -> Result<Self> {
        let unit = self.with_scale(1.0);
        Ok(unit.with_scale(scaling_constant(&unit, order)?))
    }

    fn eps(&self) -> f64 {
        self.epsilon.unwrap_or(0.0)
    }

    /// `scale * f^(order)(z)` from closed-form derivatives.
    pub fn eval<S: Scalar>(&self, z: S, order: usize) -> Result<S> {
        let z = z.to_c64();
        let v = match self.domain {
            Domain::Interval => Complex64::new(self.eval_real(z.re, order)?, 0.0),
            Domain::Circle => self.eval_complex(z, order)?,
        };
        Ok(S::from_c64(v))
    }

    /// `scale * f^(order)(x)` for the interval functions.
    pub fn eval_real(&self, x: f64, order: usize) -> Result<f64> {
        check_order(order)?;
        let eps = self.eps();
        let v = match self.id {
            FunctionId::E => {
                let (s, c) = x.sin_cos();
                let e = s.exp();
                [e, c * e, (c * c - s) * e][order]
            }
            FunctionId::C => {
                let (s, c) = (20.0 * x).sin_cos();
                [c, -20.0 * s, -400.0 * c][order]
            }
            FunctionId::T => {
                let t = (x / eps).tanh();
                let ch = (x / eps).cosh();
                let sech2 = 1.0 / (ch * ch);
                [t, sech2 / eps, -2.0 * t * sech2 / (eps * eps)][order]
            }
            FunctionId::L => {
                // (1 - x) is exact near x = 1, so the small argument keeps full accuracy.
                let u = (1.0 - x) + eps;
                if u <= 0.0 {
                    return Err(Error::Domain(format!("fL is undefined at x = {x}")));
                }
                [u.ln(), -1.0 / u, -1.0 / (u * u)][order]
            }
            FunctionId::A => {
                let d = eps * eps + x * x;
                [(x / eps).atan(), eps / d, -2.0 * x * eps / (d * d)][order]
            }
            FunctionId::O | FunctionId::S | FunctionId::M => {
                return Err(Error::Domain(format!("{} is defined on the circle only", self.id)))
            }
        };
        Ok(self.scale * v)
    }

    /// `scale * f^(order)(z)` for the circle functions.
    pub fn eval_complex(&self, z: Complex64, order: usize) -> Result<Complex64> {
        check_order(order)?;
        let eps = self.eps();
        let one = Complex64::new(1.0, 0.0);
        let v = match self.id {
            FunctionId::E => {
                let (s, c) = (z.sin(), z.cos());
                let e = s.exp();
                [e, c * e, (c * c - s) * e][order]
            }
            FunctionId::O => {
                let z10 = z.powi(10);
                let (s, c) = (z10.sin(), z10.cos());
                [c, -10.0 * z.powi(9) * s, -90.0 * z.powi(8) * s - 100.0 * z.powi(18) * c][order]
            }
            FunctionId::L => {
                let u = (one - z) + eps;
                if u == Complex64::new(0.0, 0.0) {
                    return Err(Error::Domain(format!("fL is undefined at z = {z}")));
                }
                [u.ln(), -one / u, -one / (u * u)][order]
            }
            FunctionId::S => {
                if z == Complex64::new(0.0, 0.0) {
                    return Err(Error::Domain("fS is undefined at 0".into()));
                }
                let a = 1.0 - eps;
                // 1 - a^2/z^2 = (z - a)(z + a)/z^2; z - a is exact near z = 1.
                let u = (z - a) * (z + a) / (z * z);
                let su = u.sqrt();
                let a2 = a * a;
                let zi = one / z;
                let zi3 = zi * zi * zi;
                match order {
                    0 => su,
                    1 => a2 * zi3 / su,
                    _ => a2 * (-3.0 * zi3 * zi / su - a2 * zi3 * zi3 / (u * su)),
                }
            }
            FunctionId::M => {
                if z == Complex64::new(0.0, 0.0) {
                    return Err(Error::Domain("fM is undefined at 0".into()));
                }
                let zi = one / z;
                let zi2 = zi * zi;
                let v = zi2 * zi2;
                let t = v.tan();
                let c = v.cos();
                let sec2 = one / (c * c);
                match order {
                    0 => t,
                    1 => sec2 * (-4.0 * v * zi),
                    _ => sec2 * (32.0 * t * v * v * zi2 + 20.0 * v * zi2),
                }
            }
            FunctionId::C | FunctionId::T | FunctionId::A => {
                return Err(Error::Domain(format!("{} is defined on the interval only", self.id)))
            }
        };
        Ok(self.scale * v)
    }

    /// Row label used in reports, including the alias note where relevant.
    pub fn label(&self) -> String {
        match self.alias {
            Some(a) => format!("{}({})", self.id, a),
            None => self.id.to_string(),
        }
    }

    /// Parameter values (abscissae or angles) where `|f^(order)|` peaks.
    fn known_extrema(&self, order: usize) -> Vec<f64> {
        let eps = self.eps();
        match (self.domain, self.id) {
            (Domain::Interval, FunctionId::E) if order == 1 => vec![((5f64.sqrt() - 1.0) / 2.0).asin()],
            (Domain::Interval, FunctionId::C) => {
                // Peaks of sin(20x) for order 1, of cos(20x) otherwise.
                let shift = if order == 1 { 0.5 } else { 0.0 };
                (-7..=7).map(|k| (k as f64 + shift) * PI / 20.0).filter(|x| x.abs() <= 1.0).collect()
            }
            (Domain::Interval, FunctionId::T) => match order {
                1 => vec![0.0],
                2 => {
                    let x = eps * (1.0 / 3f64.sqrt()).atanh();
                    vec![-x, x]
                }
                _ => vec![],
            },
            (Domain::Interval, FunctionId::A) => match order {
                1 => vec![0.0],
                2 => vec![-eps / 3f64.sqrt(), eps / 3f64.sqrt()],
                _ => vec![],
            },
            (Domain::Circle, FunctionId::O) => (0..20).map(|k| (PI / 2.0 + k as f64 * PI) / 10.0).collect(),
            (Domain::Circle, FunctionId::S) => vec![0.0, PI],
            (Domain::Circle, FunctionId::M) => (0..8).map(|k| k as f64 * PI / 4.0).collect(),
            _ => vec![],
        }
    }
}

fn check_order(order: usize) -> Result<()> {
    if order > 2 {
        return Err(Error::OrderTooLarge { order, max: 2 });
    }
    Ok(())
}

/// `1 / max |tf^(order)|` over a 20001-point grid plus the known peak
/// locations, polished by a fine local search around the largest sample.
/// `tf`'s own scale is included, so a normalized function gives 1.
pub fn scaling_constant(tf: &TestFunction, order: usize) -> Result<f64> {
    check_order(order)?;
    let domain = tf.domain;
    let mut params: Vec<f64> = domain.uniform_grid(SCALING_GRID).into_iter().map(|z| domain.parameter(z)).collect();
    params.extend(tf.known_extrema(order));
    let magnitude = |t: f64| -> Result<f64> {
        let m = tf.eval(domain.point(t), order)?.magnitude();
        if !m.is_finite() {
            return Err(Error::NonFinite(format!("{} order {order} at parameter {t}", tf.id)));
        }
        Ok(m)
    };
    let (mut best_t, mut best) = (params[0], -1.0);
    for &t in &params {
        let m = magnitude(t)?;
        if m > best {
            best = m;
            best_t = t;
        }
    }
    // Grid spacing, in parameter units.
    let h = match domain {
        Domain::Interval => 2.0 / (SCALING_GRID - 1) as f64,
        Domain::Circle => 2.0 * PI / SCALING_GRID as f64,
    };
    for i in 0..=200 {
        let t = best_t + h * (i as f64 - 100.0) / 100.0;
        if domain == Domain::Interval && t.abs() > 1.0 {
            continue;
        }
        best = best.max(magnitude(t)?);
    }
    if best == 0.0 {
        return Err(Error::Domain(format!("{} order {order} vanishes on the grid", tf.id)));
    }
    Ok(1.0 / best)
}
