//! Greedy node-selection loop shared by the AAA and continued-fraction fitters.

use std::collections::HashSet;

use super::{point_key, FitError, FitReport, FitResult, Refinement, SampleSet};
use crate::domain::Domain;
use crate::scalar::{Complex64, Scalar};
use crate::{Error, Result};

pub(crate) trait GreedyBuilder<S: Scalar> {
    type Model: Clone;

    /// Tries to make sample `idx` a node. `Ok(false)` means the sample is not
    /// admissible right now and the next-worst one should be tried.
    fn add_node(&mut self, points: &[S], values: &[S], is_node: &[bool], idx: usize) -> Result<bool>;
    fn model(&self) -> &Self::Model;
    /// First node; defaults to the sample of largest `|f|` (first on ties).
    fn seed(&self, values: &[S]) -> usize {
        argmax_abs(values, |_| true)
    }
    fn eval(model: &Self::Model, z: S) -> Result<S>;
    fn nodes(model: &Self::Model) -> &[S];
    /// Positions (in `nodes(model)`) of nodes next to spurious poles of the
    /// model. Builders without such a notion report none.
    fn spurious(_model: &Self::Model, _domain: Domain, _fmax: f64) -> Vec<usize> {
        Vec::new()
    }
    /// Whether the model has no spurious poles; may be cheaper than
    /// `spurious` but must agree with it on clean models.
    fn is_clean(model: &Self::Model, domain: Domain, fmax: f64) -> bool {
        Self::spurious(model, domain, fmax).is_empty()
    }
    /// Drops the nodes at the given positions of the current model, clears
    /// them in `is_node`, refits, and returns their sample indices.
    fn remove(&mut self, _points: &[S], _values: &[S], _is_node: &mut [bool], _drop: &[usize]) -> Result<Vec<usize>> {
        Ok(Vec::new())
    }
}

fn residual<S: Scalar, B: GreedyBuilder<S>>(model: &B::Model, z: S, f: S) -> f64 {
    match B::eval(model, z) {
        Ok(r) => {
            let d = (f - r).magnitude();
            if d.is_nan() {
                f64::INFINITY
            } else {
                d
            }
        }
        Err(_) => f64::INFINITY,
    }
}

pub(crate) fn argmax_abs<S: Scalar>(values: &[S], keep: impl Fn(usize) -> bool) -> usize {
    let mut best = 0;
    let mut big = -1.0;
    for (i, v) in values.iter().enumerate() {
        if keep(i) && v.magnitude() > big {
            big = v.magnitude();
            best = i;
        }
    }
    best
}

fn max_abs<S: Scalar>(values: &[S]) -> f64 {
    values.iter().fold(0.0f64, |acc, v| acc.max(v.magnitude()))
}

/// Converged fits are checked for spurious poles at most this many times.
const MAX_CLEANUPS: usize = 5;

/// Steps without halving the best residual before a fit counts as stalled.
const STALL_STEPS: usize = 10;
/// Only residuals within this factor of the target count as a rounding
/// plateau; larger errors may still be in a slow pre-asymptotic phase.
const PLATEAU_FACTOR: f64 = 1e6;
/// On a stall, check points are only added where the residual exceeds the
/// plateau by this factor; such points expose features the samples missed.
const STALL_FACTOR: f64 = 1e3;

/// Offsets `10^(-k/2)` for k = 2..=30 on either side of every node. Spurious
/// pole-zero pairs tend to settle right next to nodes, where neither the
/// sampling grid nor the in-gap points look.
fn node_offsets() -> impl Iterator<Item = f64> {
    (2..=30).flat_map(|k| {
        let d = 10f64.powf(-(k as f64) / 2.0);
        [-d, d]
    })
}

/// Candidates for refinement: points inside each node gap, midpoints between
/// neighbouring samples, and points close to each node.
fn check_points<S: Scalar>(r: &Refinement<'_, S>, nodes: &[S], samples: &[S]) -> Vec<Complex64> {
    let mut out = r.domain.refinement_points(nodes, r.per_gap);
    let samples: Vec<Complex64> = samples.iter().map(|z| z.to_c64()).collect();
    out.extend(r.domain.midpoints(&samples));
    for z in nodes {
        let z = z.to_c64();
        out.extend(node_offsets().filter_map(|d| r.domain.offset(z, d)));
    }
    out
}

/// A model free of spurious poles may be up to this much worse on the
/// samples than the best one and still be preferred.
const CLEAN_SLACK: f64 = 1e3;

struct State<S> {
    points: Vec<S>,
    values: Vec<S>,
    keys: HashSet<(u64, u64)>,
    is_node: Vec<bool>,
}

impl<S: Scalar> State<S> {
    /// Adds the check points whose residual exceeds `thresh`.
    fn refine<B: GreedyBuilder<S>>(&mut self, model: &B::Model, r: &Refinement<'_, S>, thresh: f64) -> bool {
        if self.points.len() >= r.max_samples {
            return false;
        }
        let mut grew = false;
        for c in check_points(r, B::nodes(model), &self.points) {
            if self.points.len() >= r.max_samples {
                break;
            }
            let z = S::from_c64(c);
            let key = point_key(z);
            if self.keys.contains(&key) {
                continue;
            }
            let f = (r.target)(z);
            if !f.is_finite() {
                continue;
            }
            if residual::<S, B>(model, z, f) > thresh {
                self.keys.insert(key);
                self.points.push(z);
                self.values.push(f);
                self.is_node.push(false);
                grew = true;
            }
        }
        grew
    }

    /// Re-measures a kept model against the current samples.
    fn rescore<B: GreedyBuilder<S>>(&self, slot: &mut Option<(B::Model, f64)>) {
        if let Some((model, err)) = slot {
            *err = self.points.iter().zip(&self.values).map(|(&z, &f)| residual::<S, B>(model, z, f)).fold(0.0, f64::max);
        }
    }

    fn report<M>(self, model: M, err: f64, history: Vec<(usize, f64)>, converged: bool) -> FitReport<M, S> {
        FitReport {
            model,
            achieved_error: err,
            history,
            samples: SampleSet::new(self.points, self.values).expect("sample set stays valid"),
            converged,
        }
    }
}

/// Greedy loop: add the worst-fit sample as a node until the max residual
/// is at most `tol * max|f|`. With a refinement, check points between nodes
/// join the samples when the fit converges, stalls, or runs out of
/// admissible nodes while some check point is far off.
pub(crate) fn run<S: Scalar, B: GreedyBuilder<S>>(
    mut builder: B,
    samples: &SampleSet<S>,
    tol: f64,
    max_nodes: usize,
    refinement: Option<&Refinement<'_, S>>,
) -> FitResult<B::Model, S> {
    if !(tol >= 0.0) {
        return Err(FitError::Failed(Error::Shape(format!("tolerance must be nonnegative, got {tol}"))));
    }
    if max_nodes == 0 {
        return Err(FitError::Failed(Error::Shape("node budget must be positive".into())));
    }
    let mut st = State {
        points: samples.points().to_vec(),
        values: samples.values().to_vec(),
        keys: samples.points().iter().map(|&p| point_key(p)).collect(),
        is_node: vec![false; samples.len()],
    };
    let mut scale = max_abs(&st.values);
    // Before the first node the model is identically zero.
    let mut residuals: Vec<f64> = st.values.iter().map(|v| v.magnitude()).collect();
    let mut history = Vec::new();
    let mut best: Option<(B::Model, f64)> = None;
    // Best iterate without spurious poles, tracked only with a refinement.
    let mut best_clean: Option<(B::Model, f64)> = None;
    // Best residual after each step since the sample set last changed.
    let mut trail: Vec<f64> = Vec::new();
    let mut added = 0;
    // Nodes removed by cleanup never come back.
    let mut banned: HashSet<usize> = HashSet::new();
    let mut cleanups = 0;
    let mut skip_add = false;

    loop {
        // Pick and add a node, falling back to the next-worst sample.
        let mut tried = vec![false; st.points.len()];
        let mut admitted = skip_add;
        skip_add = false;
        if added == 0 && !admitted {
            let idx = builder.seed(&st.values);
            if builder.add_node(&st.points, &st.values, &st.is_node, idx)? {
                st.is_node[idx] = true;
                added += 1;
                admitted = true;
            }
        }
        if added < max_nodes && !admitted {
            loop {
                let mut pick = None;
                let mut worst = -1.0;
                for (i, &r) in residuals.iter().enumerate() {
                    if !st.is_node[i] && !tried[i] && !banned.contains(&i) && r > worst {
                        worst = r;
                        pick = Some(i);
                    }
                }
                let Some(idx) = pick else { break };
                if builder.add_node(&st.points, &st.values, &st.is_node, idx)? {
                    st.is_node[idx] = true;
                    added += 1;
                    admitted = true;
                    break;
                }
                tried[idx] = true;
            }
        }

        let stuck = !admitted;
        if stuck && best.is_none() && added == 0 {
            return Err(FitError::Failed(Error::InvalidModel("no admissible node".into())));
        }
        let model = builder.model();
        residuals = st.points.iter().zip(&st.values).map(|(&z, &f)| residual::<S, B>(model, z, f)).collect();
        let err = residuals.iter().fold(0.0f64, |a, &b| a.max(b));
        let thresh = tol * scale;

        if err <= thresh {
            if let Some(r) = refinement {
                if st.refine::<B>(model, r, thresh) {
                    st.rescore::<B>(&mut best);
                    st.rescore::<B>(&mut best_clean);
                    trail.clear();
                    scale = max_abs(&st.values);
                    residuals = st.points.iter().zip(&st.values).map(|(&z, &f)| residual::<S, B>(model, z, f)).collect();
                    continue;
                }
                if cleanups < MAX_CLEANUPS && !B::is_clean(model, r.domain, scale) {
                    let drop = B::spurious(model, r.domain, scale);
                    if !drop.is_empty() && drop.len() < B::nodes(model).len() {
                        cleanups += 1;
                        history.push((B::nodes(model).len(), err));
                        let dropped = builder.remove(&st.points, &st.values, &mut st.is_node, &drop)?;
                        added -= dropped.len();
                        banned.extend(dropped);
                        best = None;
                        trail.clear();
                        skip_add = true;
                        continue;
                    }
                }
            }
            history.push((B::nodes(model).len(), err));
            let model = model.clone();
            return Ok(st.report(model, err, history, true));
        }

        if !stuck {
            history.push((B::nodes(model).len(), err));
            if best.as_ref().map_or(true, |(_, e)| err < *e) {
                best = Some((model.clone(), err));
            }
            if let Some(r) = refinement {
                if best_clean.as_ref().map_or(true, |(_, e)| err < *e) && B::is_clean(model, r.domain, scale) {
                    best_clean = Some((model.clone(), err));
                }
            }
        }
        let best_err = best.as_ref().map_or(f64::INFINITY, |b| b.1);
        trail.push(best_err);
        let stalled = trail.len() > STALL_STEPS
            && best_err <= PLATEAU_FACTOR * thresh
            && best_err > 0.5 * trail[trail.len() - 1 - STALL_STEPS];
        if stuck || stalled || added >= max_nodes {
            let can_grow = added < max_nodes;
            if let (true, Some(r)) = (can_grow, refinement) {
                let level = if stuck { thresh } else { thresh.max(STALL_FACTOR * best_err.min(err)) };
                if st.refine::<B>(model, r, level) {
                    st.rescore::<B>(&mut best);
                    st.rescore::<B>(&mut best_clean);
                    trail.clear();
                    scale = max_abs(&st.values);
                    residuals = st.points.iter().zip(&st.values).map(|(&z, &f)| residual::<S, B>(model, z, f)).collect();
                    continue;
                }
            }
            // An unconverged fit near its noise floor often owes its last
            // gains to pole-zero pairs that ruin derivatives.
            let clean = best_clean.filter(|c| c.1 <= CLEAN_SLACK * best_err);
            let (model, err) = match (clean, best) {
                (Some(c), _) | (None, Some(c)) => c,
                (None, None) => (model.clone(), err),
            };
            return Err(FitError::NotConverged(Box::new(st.report(model, err, history, false))));
        }
    }
}
