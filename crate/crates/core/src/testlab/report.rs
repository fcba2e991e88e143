//! Formula, Formula-EP and Direct errors over a test point set.

use rayon::prelude::*;

use super::functions::TestFunction;
use super::points::TestPointSet;
use crate::fit::Approximant;
use crate::scalar::MachineScalar;

/// Max absolute errors over a point set. `excluded` counts points dropped
/// because the model or the reference had a pole or domain error there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    pub formula_err: f64,
    pub formula_ep_err: f64,
    pub direct_err: f64,
    pub excluded: usize,
}

impl ErrorReport {
    /// `formula_err / formula_ep_err`.
    pub fn stability_ratio(&self) -> f64 {
        self.formula_err / self.formula_ep_err
    }
}

fn err_of(a: f64) -> f64 {
    if a.is_nan() {
        f64::INFINITY
    } else {
        a
    }
}

/// Errors of the order-`order` derivative of `model` against `tf`.
///
/// `model` must approximate `tf` itself, scale included; `direct` (if any)
/// approximates `tf`'s `order`-th derivative and is evaluated at order 0.
/// A missing direct model reports NaN.
pub fn error_report<S: MachineScalar>(
    tf: &TestFunction,
    order: usize,
    model: &Approximant<S>,
    points: &TestPointSet,
    direct: Option<&Approximant<S>>,
) -> ErrorReport {
    let extended = model.extend();
    let per_point: Vec<Option<(f64, f64, f64)>> = points
        .points()
        .par_iter()
        .map(|&c| {
            let z = S::from_c64(c);
            let exact = tf.eval(z, order).ok()?;
            let r = model.derivatives(z, order).ok()?.values[order];
            let r_ep = extended.derivatives(z.extend(), order).ok()?.values[order];
            let d = match direct {
                Some(m) => err_of((exact - m.eval(z).ok()?).magnitude()),
                None => f64::NAN,
            };
            Some((err_of((exact - r).magnitude()), err_of((exact - S::round(r_ep)).magnitude()), d))
        })
        .collect();
    let mut rep = ErrorReport { formula_err: 0.0, formula_ep_err: 0.0, direct_err: 0.0, excluded: 0 };
    for p in per_point {
        match p {
            Some((a, b, c)) => {
                rep.formula_err = rep.formula_err.max(a);
                rep.formula_ep_err = rep.formula_ep_err.max(b);
                rep.direct_err = rep.direct_err.max(c);
            }
            None => rep.excluded += 1,
        }
    }
    if direct.is_none() {
        rep.direct_err = f64::NAN;
    }
    rep
}
