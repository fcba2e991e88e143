//! The two approximation domains: the interval `[-1, 1]` and the unit circle.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::scalar::{Complex64, Scalar};
use crate::Error;

const TAU: f64 = 2.0 * PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Domain {
    Interval,
    Circle,
}

impl Domain {
    pub fn name(self) -> &'static str {
        match self {
            Domain::Interval => "interval",
            Domain::Circle => "circle",
        }
    }

    /// Fitting samples: Chebyshev extreme points on the interval, equispaced
    /// angles on the circle.
    pub fn sample_grid(self, m: usize) -> Vec<Complex64> {
        match self {
            Domain::Interval => (0..m)
                .map(|i| {
                    let x = if m == 1 { 0.0 } else { -(PI * i as f64 / (m - 1) as f64).cos() };
                    Complex64::new(x, 0.0)
                })
                .collect(),
            Domain::Circle => (0..m).map(|i| Self::on_circle(TAU * i as f64 / m as f64)).collect(),
        }
    }

    /// `m` uniformly spaced points: endpoints included on the interval,
    /// angles `2*pi*k/m` on the circle.
    pub fn uniform_grid(self, m: usize) -> Vec<Complex64> {
        match self {
            Domain::Interval => (0..m)
                .map(|i| {
                    let x = if m == 1 { 0.0 } else { -1.0 + 2.0 * i as f64 / (m - 1) as f64 };
                    Complex64::new(x, 0.0)
                })
                .collect(),
            Domain::Circle => (0..m).map(|i| Self::on_circle(TAU * i as f64 / m as f64)).collect(),
        }
    }

    /// Real parameter along the domain: abscissa on the interval, angle in
    /// `[0, 2*pi)` on the circle.
    pub fn parameter(self, z: Complex64) -> f64 {
        match self {
            Domain::Interval => z.re,
            Domain::Circle => {
                let t = z.im.atan2(z.re);
                if t < 0.0 {
                    t + TAU
                } else {
                    t
                }
            }
        }
    }

    pub fn point(self, t: f64) -> Complex64 {
        match self {
            Domain::Interval => Complex64::new(t, 0.0),
            Domain::Circle => Self::on_circle(t),
        }
    }

    fn on_circle(t: f64) -> Complex64 {
        let (s, c) = t.sin_cos();
        Complex64::new(c, s)
    }

    /// Point displaced by `offset` along the domain (angularly on the circle),
    /// or `None` when it leaves the interval.
    pub fn offset(self, z: Complex64, offset: f64) -> Option<Complex64> {
        match self {
            Domain::Interval => {
                let x = z.re + offset;
                (-1.0..=1.0).contains(&x).then(|| Complex64::new(x, 0.0))
            }
            Domain::Circle => Some(Self::on_circle(z.im.atan2(z.re) + offset)),
        }
    }

    /// Euclidean distance from `z` to the domain.
    pub fn distance(self, z: Complex64) -> f64 {
        match self {
            Domain::Interval => {
                let x = z.re.clamp(-1.0, 1.0);
                (z - Complex64::new(x, 0.0)).norm()
            }
            Domain::Circle => (z.norm() - 1.0).abs(),
        }
    }

    /// Midpoints between neighbouring points in domain order (cyclically on
    /// the circle).
    pub fn midpoints(self, points: &[Complex64]) -> Vec<Complex64> {
        let mut t: Vec<f64> = points.iter().map(|&z| self.parameter(z)).collect();
        t.sort_by(f64::total_cmp);
        t.dedup();
        let mut out: Vec<Complex64> = t.windows(2).map(|w| self.point(0.5 * (w[0] + w[1]))).collect();
        if self == Domain::Circle && t.len() > 1 {
            out.push(self.point(0.5 * (t[t.len() - 1] + t[0] + TAU)));
        }
        out
    }

    /// `per_gap` equispaced parameter values strictly between each pair of
    /// adjacent nodes (cyclically on the circle; the interval endpoints act as
    /// extra breakpoints).
    pub fn refinement_points<S: Scalar>(self, nodes: &[S], per_gap: usize) -> Vec<Complex64> {
        let mut t: Vec<f64> = nodes.iter().map(|z| self.parameter(z.to_c64())).collect();
        match self {
            Domain::Interval => {
                t.push(-1.0);
                t.push(1.0);
            }
            Domain::Circle => {}
        }
        t.sort_by(f64::total_cmp);
        t.dedup();
        let mut gaps: Vec<(f64, f64)> = t.windows(2).map(|w| (w[0], w[1])).collect();
        if self == Domain::Circle {
            if let (Some(&first), Some(&last)) = (t.first(), t.last()) {
                gaps.push((last, first + TAU));
            }
        }
        let mut out = Vec::with_capacity(gaps.len() * per_gap);
        for (a, b) in gaps {
            for i in 1..=per_gap {
                let s = a + (b - a) * i as f64 / (per_gap + 1) as f64;
                if s > a && s < b {
                    out.push(self.point(s));
                }
            }
        }
        out
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Domain {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "interval" => Ok(Domain::Interval),
            "circle" => Ok(Domain::Circle),
            other => Err(Error::Parse { line: 0, message: format!("unknown domain `{other}`") }),
        }
    }
}
