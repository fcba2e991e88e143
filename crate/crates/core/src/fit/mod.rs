//! Building approximants from samples.
//!
//! Both fitters are greedy: each step interpolates the sample with the worst
//! residual. [`aaa_fit`] recomputes barycentric weights from the smallest
//! singular vector of a Loewner matrix; [`greedy_tcf_fit`] appends one
//! continued-fraction coefficient per step. With a [`Refinement`], converged
//! fits are checked between adjacent nodes and any failing check points join
//! the sample set, so features narrower than the base grid get resolved.

mod aaa;
pub mod cleanup;
mod convert;
mod driver;
mod greedy;
mod svd;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

pub use aaa::{aaa_fit, aaa_fit_refined};
pub use convert::{polynomial_bary_weights, tcf_to_barycentric};
pub use greedy::{greedy_tcf_fit, greedy_tcf_fit_refined};
pub use svd::{svd_min_right_vector, DenseMatrix, MinSingular};

use crate::barycentric::BaryModel;
use crate::deriv::DerivStack;
use crate::domain::Domain;
use crate::scalar::{MachineScalar, Scalar};
use crate::thiele::TcfModel;
use crate::{Error, Result};

/// Target relative accuracy used throughout the experiments: 100 machine epsilons.
pub const DEFAULT_TOL: f64 = 100.0 * f64::EPSILON;

#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet<S> {
    points: Vec<S>,
    values: Vec<S>,
}

impl<S: Scalar> SampleSet<S> {
    pub fn new(points: Vec<S>, values: Vec<S>) -> Result<Self> {
        if points.len() != values.len() {
            return Err(Error::Shape(format!("{} points, {} values", points.len(), values.len())));
        }
        if points.len() < 2 {
            return Err(Error::Shape("a sample set needs at least two points".into()));
        }
        let mut seen = HashSet::with_capacity(points.len());
        for (i, (p, v)) in points.iter().zip(&values).enumerate() {
            if !(p.is_finite() && v.is_finite()) {
                return Err(Error::NonFinite(format!("sample {i}")));
            }
            if !seen.insert(point_key(*p)) {
                return Err(Error::DuplicateNode(i));
            }
        }
        Ok(Self { points, values })
    }

    pub fn from_fn(points: Vec<S>, f: impl Fn(S) -> S) -> Result<Self> {
        let values = points.iter().map(|&z| f(z)).collect();
        Self::new(points, values)
    }

    /// `f` sampled on the domain's fitting grid of `m` points.
    pub fn on_domain(domain: Domain, m: usize, f: impl Fn(S) -> S) -> Result<Self> {
        Self::from_fn(domain.sample_grid(m).into_iter().map(S::from_c64).collect(), f)
    }

    pub fn points(&self) -> &[S] {
        &self.points
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

pub(crate) fn point_key<S: Scalar>(z: S) -> (u64, u64) {
    let c = z.to_c64();
    (c.re.to_bits(), c.im.to_bits())
}

/// Outcome of a fit. `achieved_error` is the max residual of `model` over
/// `samples` (the final sample set, including refinement points).
#[derive(Debug, Clone, PartialEq)]
pub struct FitReport<M, S> {
    pub model: M,
    pub achieved_error: f64,
    /// `(node count, max sample residual)` after every step.
    pub history: Vec<(usize, f64)>,
    pub samples: SampleSet<S>,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FitError<M, S> {
    /// Budget exhausted or no admissible node; carries the best model found.
    NotConverged(Box<FitReport<M, S>>),
    Failed(Error),
}

impl<M, S> FitError<M, S> {
    pub fn into_report(self) -> Option<FitReport<M, S>> {
        match self {
            FitError::NotConverged(r) => Some(*r),
            FitError::Failed(_) => None,
        }
    }
}

impl<M, S> fmt::Display for FitError<M, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FitError::NotConverged(r) => write!(
                f,
                "fit did not converge: best residual {:e} with {} history steps",
                r.achieved_error,
                r.history.len()
            ),
            FitError::Failed(e) => write!(f, "fit failed: {e}"),
        }
    }
}

impl<M: fmt::Debug, S: fmt::Debug> std::error::Error for FitError<M, S> {}

impl<M, S> From<Error> for FitError<M, S> {
    fn from(e: Error) -> Self {
        FitError::Failed(e)
    }
}

pub type FitResult<M, S> = std::result::Result<FitReport<M, S>, FitError<M, S>>;

/// Adaptive check points between nodes.
pub struct Refinement<'a, S> {
    pub domain: Domain,
    pub target: &'a (dyn Fn(S) -> S + Sync),
    pub per_gap: usize,
    pub max_samples: usize,
}

impl<'a, S> Refinement<'a, S> {
    pub fn new(domain: Domain, target: &'a (dyn Fn(S) -> S + Sync)) -> Self {
        Self { domain, target, per_gap: 3, max_samples: 20_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Representation {
    Bary,
    Tcf,
}

impl Representation {
    pub fn name(self) -> &'static str {
        match self {
            Representation::Bary => "bary",
            Representation::Tcf => "tcf",
        }
    }
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Representation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bary" => Ok(Representation::Bary),
            "tcf" => Ok(Representation::Tcf),
            other => Err(Error::Parse { line: 0, message: format!("unknown representation `{other}`") }),
        }
    }
}

/// A fitted rational function in either representation.
#[derive(Debug, Clone, PartialEq)]
pub enum Approximant<S> {
    Bary(BaryModel<S>),
    Tcf(TcfModel<S>),
}

impl<S: Scalar> Approximant<S> {
    pub fn representation(&self) -> Representation {
        match self {
            Approximant::Bary(_) => Representation::Bary,
            Approximant::Tcf(_) => Representation::Tcf,
        }
    }

    pub fn nodes(&self) -> &[S] {
        match self {
            Approximant::Bary(m) => m.nodes(),
            Approximant::Tcf(m) => m.nodes(),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes().len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes().is_empty()
    }

    pub fn eval(&self, z: S) -> Result<S> {
        match self {
            Approximant::Bary(m) => m.eval(z),
            Approximant::Tcf(m) => m.eval(z),
        }
    }

    pub fn derivatives(&self, z: S, mu: usize) -> Result<DerivStack<S>> {
        match self {
            Approximant::Bary(m) => m.derivatives(z, mu),
            Approximant::Tcf(m) => m.derivatives(z, mu),
        }
    }

    pub fn scaled(&self, c: S) -> Self {
        match self {
            Approximant::Bary(m) => Approximant::Bary(m.scaled(c)),
            Approximant::Tcf(m) => Approximant::Tcf(m.scaled(c)),
        }
    }
}

impl<S: MachineScalar> Approximant<S> {
    pub fn extend(&self) -> Approximant<S::Extended> {
        match self {
            Approximant::Bary(m) => Approximant::Bary(m.extend()),
            Approximant::Tcf(m) => Approximant::Tcf(m.extend()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub tol: f64,
    pub max_nodes: usize,
    /// Size of the base sampling grid.
    pub samples: usize,
    /// Check points per gap between adjacent nodes; zero disables refinement.
    pub per_gap: usize,
    pub max_samples: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, max_nodes: 150, samples: 2000, per_gap: 3, max_samples: 20_000 }
    }
}

/// Fits `target` on `domain` in the requested representation.
pub fn fit_on_domain<S: Scalar>(
    rep: Representation,
    domain: Domain,
    target: &(dyn Fn(S) -> S + Sync),
    opts: &FitOptions,
) -> FitResult<Approximant<S>, S> {
    let samples = resolve_layers(domain, SampleSet::on_domain(domain, opts.samples, target)?, target, opts.max_samples)?;
    let refinement = Refinement { domain, target, per_gap: opts.per_gap, max_samples: opts.max_samples };
    let refinement = (opts.per_gap > 0).then_some(&refinement);
    match rep {
        Representation::Bary => map_fit(aaa_fit_refined(&samples, opts.tol, opts.max_nodes, refinement), Approximant::Bary),
        Representation::Tcf => {
            map_fit(greedy_tcf_fit_refined(&samples, opts.tol, opts.max_nodes, refinement), Approximant::Tcf)
        }
    }
}

/// Fits fixed samples without refinement.
pub fn fit_samples<S: Scalar>(
    rep: Representation,
    samples: &SampleSet<S>,
    tol: f64,
    max_nodes: usize,
) -> FitResult<Approximant<S>, S> {
    match rep {
        Representation::Bary => map_fit(aaa_fit(samples, tol, max_nodes), Approximant::Bary),
        Representation::Tcf => map_fit(greedy_tcf_fit(samples, tol, max_nodes), Approximant::Tcf),
    }
}

/// Relative jump between neighbouring samples that counts as unresolved.
const JUMP: f64 = 0.1;

/// Midpoint deviation from linear interpolation, relative to `max|f|`, above
/// which a gap between samples counts as unresolved.
const CURVE: f64 = 1e-3;

/// Bisects between neighbouring samples (in domain order) until no pair
/// differs by more than `JUMP * max|f|` and no midpoint strays more than
/// `CURVE * max|f|` from the chord. A grid that steps straight across a
/// narrow layer otherwise gives the fitters almost nothing to see there.
fn resolve_layers<S: Scalar>(
    domain: Domain,
    samples: SampleSet<S>,
    target: &(dyn Fn(S) -> S + Sync),
    max_samples: usize,
) -> Result<SampleSet<S>> {
    let SampleSet { mut points, mut values } = samples;
    let mut keys: HashSet<(u64, u64)> = points.iter().map(|&p| point_key(p)).collect();
    let scale = values.iter().fold(0.0f64, |a, v| a.max(v.magnitude()));
    let mut order: Vec<(f64, usize)> =
        points.iter().enumerate().map(|(i, p)| (domain.parameter(p.to_c64()), i)).collect();
    // Neighbour pairs already checked and left alone.
    let mut settled: HashSet<(usize, usize)> = HashSet::new();
    for _ in 0..64 {
        order.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut pairs: Vec<(f64, f64, usize, usize)> = order.windows(2).map(|w| (w[0].0, w[1].0, w[0].1, w[1].1)).collect();
        if domain == Domain::Circle && order.len() > 1 {
            let (first, last) = (order[0], order[order.len() - 1]);
            pairs.push((last.0, first.0 + 2.0 * std::f64::consts::PI, last.1, first.1));
        }
        let mut grew = false;
        for (ta, tb, ia, ib) in pairs {
            if points.len() >= max_samples {
                break;
            }
            if settled.contains(&(ia, ib)) {
                continue;
            }
            let z = S::from_c64(domain.point(0.5 * (ta + tb)));
            let f = target(z);
            let jump = (values[ia] - values[ib]).magnitude() > JUMP * scale;
            let chord = (values[ia] + values[ib]) * S::from_f64(0.5);
            let bent = (f - chord).magnitude() > CURVE * scale;
            if !(jump || bent) || !f.is_finite() || !keys.insert(point_key(z)) {
                settled.insert((ia, ib));
                continue;
            }
            order.push((domain.parameter(z.to_c64()), points.len()));
            points.push(z);
            values.push(f);
            grew = true;
        }
        if !grew {
            break;
        }
    }
    SampleSet::new(points, values)
}

fn map_fit<M, N, S>(r: FitResult<M, S>, f: impl Fn(M) -> N) -> FitResult<N, S> {
    let lift = |rep: FitReport<M, S>| FitReport {
        model: f(rep.model),
        achieved_error: rep.achieved_error,
        history: rep.history,
        samples: rep.samples,
        converged: rep.converged,
    };
    match r {
        Ok(rep) => Ok(lift(rep)),
        Err(FitError::NotConverged(rep)) => Err(FitError::NotConverged(Box::new(lift(*rep)))),
        Err(FitError::Failed(e)) => Err(FitError::Failed(e)),
    }
}
