//! Greedy Thiele continued-fraction fitting.
//!
//! Each step appends the worst-fit sample as a new node. When its inverse
//! difference breaks down (or overflows) the sample is skipped for this step
//! and the next-worst one is tried. The seed is the largest `|f|` among
//! sample values that are not repeated.

use std::collections::HashMap;

use super::driver::{self, argmax_abs, GreedyBuilder};
use super::{point_key, FitResult, Refinement, SampleSet};
use crate::scalar::Scalar;
use crate::thiele::TcfModel;
use crate::{Error, Result};

struct TcfBuilder<S> {
    model: Option<TcfModel<S>>,
}

impl<S: Scalar> GreedyBuilder<S> for TcfBuilder<S> {
    type Model = TcfModel<S>;

    fn add_node(&mut self, points: &[S], values: &[S], _is_node: &[bool], idx: usize) -> Result<bool> {
        let (z, f) = (points[idx], values[idx]);
        match self.model.as_mut() {
            None => {
                self.model = Some(TcfModel::from_data(&[z], &[f])?);
                Ok(true)
            }
            Some(m) => match m.push_node(z, f) {
                Ok(()) => Ok(true),
                Err(Error::Breakdown { .. } | Error::NonFiniteCoefficient { .. }) => Ok(false),
                Err(e) => Err(e),
            },
        }
    }

    /// The largest `|f|` among values that occur only once. A first
    /// coefficient equal to many sample values (a saturated `tanh`, say)
    /// makes all those samples unreachable, since `r(z) = w_1` only at `z_1`.
    fn seed(&self, values: &[S]) -> usize {
        let mut counts: HashMap<(u64, u64), usize> = HashMap::new();
        for &v in values {
            *counts.entry(point_key(v)).or_default() += 1;
        }
        if values.iter().all(|&v| counts[&point_key(v)] > 1) {
            return argmax_abs(values, |_| true);
        }
        argmax_abs(values, |i| counts[&point_key(values[i])] == 1)
    }

    fn model(&self) -> &TcfModel<S> {
        self.model.as_ref().expect("model exists after the first node")
    }

    fn eval(model: &TcfModel<S>, z: S) -> Result<S> {
        model.eval(z)
    }

    fn nodes(model: &TcfModel<S>) -> &[S] {
        model.nodes()
    }
}

pub fn greedy_tcf_fit<S: Scalar>(samples: &SampleSet<S>, tol: f64, max_nodes: usize) -> FitResult<TcfModel<S>, S> {
    greedy_tcf_fit_refined(samples, tol, max_nodes, None)
}

pub fn greedy_tcf_fit_refined<S: Scalar>(
    samples: &SampleSet<S>,
    tol: f64,
    max_nodes: usize,
    refinement: Option<&Refinement<'_, S>>,
) -> FitResult<TcfModel<S>, S> {
    driver::run(TcfBuilder { model: None }, samples, tol, max_nodes, refinement)
}
