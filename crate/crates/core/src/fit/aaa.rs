//! Discrete AAA: greedy node selection with least-squares barycentric weights.

use super::driver::{self, GreedyBuilder};
use super::svd::{svd_min_right_vector, DenseMatrix};
use super::cleanup::{forced_real_poles, is_clean, spurious_nodes};
use super::{FitResult, Refinement, SampleSet};
use crate::barycentric::BaryModel;
use crate::domain::Domain;
use crate::scalar::Scalar;
use crate::{Error, Result};

/// Consecutive candidates a step may turn down for creating a real pole.
const REJECT_LIMIT: usize = 20;

struct AaaBuilder<S> {
    node_idx: Vec<usize>,
    model: Option<BaryModel<S>>,
    /// The current model is real and its weights force no pole between nodes.
    clean: bool,
    rejections: usize,
}

impl<S: Scalar> GreedyBuilder<S> for AaaBuilder<S> {
    type Model = BaryModel<S>;

    fn add_node(&mut self, points: &[S], values: &[S], is_node: &[bool], idx: usize) -> Result<bool> {
        self.node_idx.push(idx);
        let rows: Vec<usize> = (0..points.len()).filter(|&i| !is_node[i] && i != idx).collect();
        let model = solve(points, values, &self.node_idx, &rows)?;
        let clean = forced_real_poles(&model, false) == Some(0);
        // Once clean, a node that plants a real pole (a doublet the samples
        // cannot see) is passed over in favour of the next-worst sample.
        if self.clean && !clean && self.rejections < REJECT_LIMIT {
            self.node_idx.pop();
            self.rejections += 1;
            return Ok(false);
        }
        self.rejections = 0;
        self.clean = clean;
        self.model = Some(model);
        Ok(true)
    }

    fn model(&self) -> &BaryModel<S> {
        self.model.as_ref().expect("model exists after the first node")
    }

    fn eval(model: &BaryModel<S>, z: S) -> Result<S> {
        model.eval(z)
    }

    fn nodes(model: &BaryModel<S>) -> &[S] {
        model.nodes()
    }

    fn spurious(model: &BaryModel<S>, domain: Domain, fmax: f64) -> Vec<usize> {
        spurious_nodes(model, domain, fmax)
    }

    fn is_clean(model: &BaryModel<S>, domain: Domain, fmax: f64) -> bool {
        is_clean(model, domain, fmax)
    }

    fn remove(&mut self, points: &[S], values: &[S], is_node: &mut [bool], drop: &[usize]) -> Result<Vec<usize>> {
        let dropped: Vec<usize> = drop.iter().map(|&j| self.node_idx[j]).collect();
        for &i in &dropped {
            is_node[i] = false;
        }
        self.node_idx.retain(|i| !dropped.contains(i));
        let rows: Vec<usize> = (0..points.len()).filter(|&i| !is_node[i]).collect();
        let model = solve(points, values, &self.node_idx, &rows)?;
        self.clean = forced_real_poles(&model, false) == Some(0);
        self.model = Some(model);
        Ok(dropped)
    }
}

/// Least-squares barycentric model with the given support, fitted on `rows`.
fn solve<S: Scalar>(points: &[S], values: &[S], support: &[usize], rows: &[usize]) -> Result<BaryModel<S>> {
    let n = support.len();
    if rows.len() < n {
        return Err(Error::Shape(format!("Loewner matrix would be {}x{}", rows.len(), n)));
    }
    // Loewner matrix L[i, k] = (F_i - f_k) / (Z_i - z_k) over non-node samples.
    let loewner = DenseMatrix::from_fn(rows.len(), n, |i, k| {
        let (r, c) = (rows[i], support[k]);
        (values[r] - values[c]) / (points[r] - points[c])
    });
    let weights = svd_min_right_vector(&loewner)?.vector;
    let nodes = support.iter().map(|&k| points[k]).collect();
    let vals = support.iter().map(|&k| values[k]).collect();
    BaryModel::new(nodes, vals, weights)
}

/// AAA on a fixed sample set. Stops when the max sample residual is at most
/// `tol * max|f|`.
pub fn aaa_fit<S: Scalar>(samples: &SampleSet<S>, tol: f64, max_nodes: usize) -> FitResult<BaryModel<S>, S> {
    aaa_fit_refined(samples, tol, max_nodes, None)
}

pub fn aaa_fit_refined<S: Scalar>(
    samples: &SampleSet<S>,
    tol: f64,
    max_nodes: usize,
    refinement: Option<&Refinement<'_, S>>,
) -> FitResult<BaryModel<S>, S> {
    driver::run(AaaBuilder { node_idx: Vec::new(), model: None, clean: false, rejections: 0 }, samples, tol, max_nodes, refinement)
}
