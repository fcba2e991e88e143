//! End-to-end experiments: error tables for both representations and the
//! near-node sweep comparing the naive and stable first derivatives.

use std::any::Any;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::barycentric::BaryModel;
use crate::domain::Domain;
use crate::fit::{aaa_fit, Approximant, fit_on_domain, FitError, FitOptions, Representation, SampleSet, DEFAULT_TOL};
use crate::scalar::{Complex64, MachineScalar};
use crate::testlab::{build_test_point_set, error_report, near_node_offsets, ErrorReport, FunctionId, TestFunction};
use crate::{Error, Result};

pub const CSV_HEADER: &str = "function,epsilon,domain,order,rep,formula,formula_ep,direct,n_nodes,status";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowSpec {
    pub id: FunctionId,
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub domain: Domain,
    pub rows: Vec<RowSpec>,
    pub orders: Vec<usize>,
    pub reps: Vec<Representation>,
    pub fit: FitOptions,
}

const EPSILONS: [f64; 3] = [1e-2, 1e-4, 1e-6];

impl ExperimentSpec {
    /// The full table layout for a domain, orders 1 and 2, both representations.
    pub fn tables(domain: Domain) -> Self {
        let plain = |id| vec![RowSpec { id, epsilon: None }];
        let graded = |id| EPSILONS.iter().map(|&e| RowSpec { id, epsilon: Some(e) }).collect::<Vec<_>>();
        let rows = match domain {
            Domain::Interval => [plain(FunctionId::E), plain(FunctionId::C), graded(FunctionId::T), graded(FunctionId::L), graded(FunctionId::A)].concat(),
            Domain::Circle => [plain(FunctionId::E), plain(FunctionId::O), plain(FunctionId::M), graded(FunctionId::L), graded(FunctionId::S)].concat(),
        };
        Self { domain, rows, orders: vec![1, 2], reps: vec![Representation::Bary, Representation::Tcf], fit: FitOptions::default() }
    }

    pub fn empty(domain: Domain) -> Self {
        Self { rows: Vec::new(), ..Self::tables(domain) }
    }

    /// Keeps only rows for the listed functions. On the circle `fC` selects `fO`.
    pub fn retain_functions(mut self, ids: &[FunctionId]) -> Self {
        let wanted = |id: FunctionId| {
            ids.contains(&id) || (self.domain == Domain::Circle && id == FunctionId::O && ids.contains(&FunctionId::C))
        };
        let aliased = self.domain == Domain::Circle && ids.contains(&FunctionId::C) && !ids.contains(&FunctionId::O);
        self.rows.retain(|r| wanted(r.id));
        if aliased {
            // Remember the requested name so the output can flag it.
            for r in &mut self.rows {
                if r.id == FunctionId::O {
                    r.id = FunctionId::C;
                }
            }
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub function: FunctionId,
    pub epsilon: Option<f64>,
    pub domain: Domain,
    pub order: usize,
    pub rep: Representation,
    /// `None` when the fit itself failed.
    pub report: Option<ErrorReport>,
    pub n_nodes: usize,
    /// `ok`, or `;`-separated notes such as `alias:fC`, `not-converged`.
    pub status: String,
}

impl ResultRow {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }

    pub fn csv_line(&self) -> String {
        let num = |x: f64| format!("{x:.16e}");
        let (f, fe, d) = match &self.report {
            Some(r) => (num(r.formula_err), num(r.formula_ep_err), num(r.direct_err)),
            None => ("nan".into(), "nan".into(), "nan".into()),
        };
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.function,
            self.epsilon.map(num).unwrap_or_default(),
            self.domain,
            self.order,
            self.rep,
            f,
            fe,
            d,
            self.n_nodes,
            self.status
        )
    }
}

pub fn rows_to_csv(rows: &[ResultRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_line());
        out.push('\n');
    }
    out
}

fn note(e: impl std::fmt::Display) -> String {
    e.to_string().replace([',', '\n'], ";")
}

/// A model fitted during an experiment, as handed to an observer.
#[derive(Debug, Clone, Copy)]
pub enum Fitted<'a> {
    Real(&'a Approximant<f64>),
    Complex(&'a Approximant<Complex64>),
}

impl<'a> Fitted<'a> {
    fn of<S: MachineScalar>(model: &'a Approximant<S>) -> Self {
        let any: &dyn Any = model;
        match (any.downcast_ref(), any.downcast_ref()) {
            (Some(m), _) => Fitted::Real(m),
            (_, Some(m)) => Fitted::Complex(m),
            _ => unreachable!("machine scalars are f64 and Complex64"),
        }
    }
}

/// Called with the row, the representation, the derivative order (0 for the
/// base fit, `m` for the direct fit of the m-th derivative) and the model.
pub type Observer<'o> = dyn Fn(RowSpec, Representation, usize, Fitted<'_>) + Sync + 'o;

/// Fits once per (function, representation) and reports every order.
/// Rows come out in spec order: function rows, then representation, then order.
pub fn run_experiment(spec: &ExperimentSpec) -> Vec<ResultRow> {
    run_experiment_observed(spec, &|_, _, _, _| {})
}

/// [`run_experiment`], showing every fitted model to `observe`.
pub fn run_experiment_observed(spec: &ExperimentSpec, observe: &Observer<'_>) -> Vec<ResultRow> {
    let jobs: Vec<(usize, usize)> =
        (0..spec.rows.len()).flat_map(|i| (0..spec.reps.len()).map(move |j| (i, j))).collect();
    let mut out: Vec<((usize, usize), Vec<ResultRow>)> = jobs
        .par_iter()
        .map(|&(i, j)| {
            let (row, rep) = (spec.rows[i], spec.reps[j]);
            let rows = match spec.domain {
                Domain::Interval => run_pair::<f64>(spec, row, rep, observe),
                Domain::Circle => run_pair::<Complex64>(spec, row, rep, observe),
            };
            ((i, j), rows)
        })
        .collect();
    out.sort_by_key(|(k, _)| *k);
    out.into_iter().flat_map(|(_, r)| r).collect()
}

fn run_pair<S: MachineScalar>(
    spec: &ExperimentSpec,
    row: RowSpec,
    rep: Representation,
    observe: &Observer<'_>,
) -> Vec<ResultRow> {
    let mk = |order, report, n_nodes, status: Vec<String>| ResultRow {
        function: row.id,
        epsilon: row.epsilon,
        domain: spec.domain,
        order,
        rep,
        report,
        n_nodes,
        status: if status.is_empty() { "ok".into() } else { status.join(";") },
    };
    let tf = match TestFunction::new(row.id, row.epsilon, spec.domain) {
        Ok(tf) => tf,
        Err(e) => return spec.orders.iter().map(|&m| mk(m, None, 0, vec![note(e.clone())])).collect(),
    };
    let mut base_notes = Vec::new();
    if let Some(a) = tf.alias {
        base_notes.push(format!("alias:{a}"));
    }
    let target = |z: S| tf.eval(z, 0).unwrap_or_else(|_| S::from_f64(f64::NAN));
    let model = match fit_on_domain(rep, spec.domain, &target, &spec.fit) {
        Ok(r) => r.model,
        Err(FitError::NotConverged(r)) => {
            base_notes.push("not-converged".into());
            r.model
        }
        Err(FitError::Failed(e)) => {
            base_notes.push(format!("fit-failed:{}", note(e)));
            return spec.orders.iter().map(|&m| mk(m, None, 0, base_notes.clone())).collect();
        }
    };
    observe(row, rep, 0, Fitted::of(&model));
    let nodes: Vec<Complex64> = model.nodes().iter().map(|z| z.to_c64()).collect();
    let points = build_test_point_set(spec.domain, &nodes);
    spec.orders
        .iter()
        .map(|&m| {
            let mut notes = base_notes.clone();
            let tf_m = match tf.normalized_for(m) {
                Ok(t) => t,
                Err(e) => {
                    notes.push(note(e));
                    return mk(m, None, model.len(), notes);
                }
            };
            let scaled = model.scaled(S::from_f64(tf_m.scale));
            let direct_target = |z: S| tf_m.eval(z, m).unwrap_or_else(|_| S::from_f64(f64::NAN));
            let direct = match fit_on_domain(rep, spec.domain, &direct_target, &spec.fit) {
                Ok(r) => Some(r.model),
                Err(FitError::NotConverged(r)) => {
                    notes.push("direct-not-converged".into());
                    Some(r.model)
                }
                Err(FitError::Failed(e)) => {
                    notes.push(format!("direct-failed:{}", note(e)));
                    None
                }
            };
            if let Some(d) = &direct {
                observe(row, rep, m, Fitted::of(d));
            }
            let report = error_report(&tf_m, m, &scaled, &points, direct.as_ref());
            if report.excluded > 0 {
                notes.push(format!("excluded:{}", report.excluded));
            }
            mk(m, Some(report), model.len(), notes)
        })
        .collect()
}

/// Naive versus stable first-derivative errors at `node + distance`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub node: f64,
    pub node_index: usize,
    pub distances: Vec<f64>,
    pub naive_errors: Vec<f64>,
    pub stable_errors: Vec<f64>,
    /// `1 / max |d/dx e^x|` on the interval. The errors above are raw; this
    /// is the factor that would put them on the scale of the error tables.
    pub scale: f64,
}

impl SweepResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("distance,naive_err,stable_err\n");
        for ((d, a), b) in self.distances.iter().zip(&self.naive_errors).zip(&self.stable_errors) {
            let _ = writeln!(out, "{d:.16e},{a:.16e},{b:.16e}");
        }
        out
    }

    /// `(naive, stable)` errors multiplied by [`SweepResult::scale`].
    pub fn scaled_errors(&self) -> (Vec<f64>, Vec<f64>) {
        let by = |v: &[f64]| v.iter().map(|e| e * self.scale).collect();
        (by(&self.naive_errors), by(&self.stable_errors))
    }

    /// Errors at the grid distance closest to `d`.
    pub fn at(&self, d: f64) -> (f64, f64) {
        let i = (0..self.distances.len())
            .min_by(|&a, &b| (self.distances[a].ln() - d.ln()).abs().total_cmp(&(self.distances[b].ln() - d.ln()).abs()))
            .expect("sweep is never empty");
        (self.naive_errors[i], self.stable_errors[i])
    }
}

/// AAA fit of `exp` on 2000 Chebyshev points of `[-1, 1]` at the default tolerance.
pub fn figure1_model() -> Result<BaryModel<f64>> {
    let samples = SampleSet::on_domain(Domain::Interval, 2000, |x: f64| x.exp())?;
    match aaa_fit(&samples, DEFAULT_TOL, 60) {
        Ok(r) => Ok(r.model),
        Err(FitError::NotConverged(r)) => Err(Error::InvalidModel(format!(
            "exp fit stalled at residual {:e}",
            r.achieved_error
        ))),
        Err(FitError::Failed(e)) => Err(e),
    }
}

/// Sweeps distances `10^-15 .. 10^-3` to the right of the node closest to
/// `target`, comparing both first-derivative formulas with `exp`.
pub fn figure1_sweep(model: &BaryModel<f64>, target: f64) -> SweepResult {
    let node_index = model.nearest_node(target);
    let node = model.nodes()[node_index];
    let distances = near_node_offsets();
    let err = |r: Result<f64>, z: f64| match r {
        Ok(v) if !v.is_nan() => (v - z.exp()).abs(),
        _ => f64::INFINITY,
    };
    let (mut naive_errors, mut stable_errors) = (Vec::new(), Vec::new());
    for &d in &distances {
        let z = node + d;
        naive_errors.push(err(model.derivative_naive(z), z));
        stable_errors.push(err(model.derivatives(z, 1).map(|s| s.values[1]), z));
    }
    SweepResult { node, node_index, distances, naive_errors, stable_errors, scale: (-1.0f64).exp() }
}
