//! Thiele continued fractions
//!
//! ```text
//! r(z) = w_1 + (z - z_1) / (w_2 + (z - z_2) / (w_3 + ... (z - z_{n-1}) / w_n))
//! ```
//!
//! The coefficients `w_k` are inverse differences of the interpolation data.
//! Evaluation runs either the tail-ordered `u` recurrence or the
//! single-division `p/q` recurrence; both have the same rounding behaviour
//! since `q_k / p_k` equals the tail `u_k` step by step. Derivatives are the
//! forward-mode derivatives of the `p/q` recurrence.

use crate::barycentric::check_distinct;
use crate::deriv::{check_order, leibniz_quotient, DerivStack};
use crate::scalar::{MachineScalar, Scalar};
use crate::{Error, Result};

const RESCALE_EXP: i32 = 512;
const BIG: f64 = 1.3407807929942597e154; // 2^512
const SMALL: f64 = 7.458340731200207e-155; // 2^-512

#[derive(Debug, Clone, PartialEq)]
pub struct TcfModel<S> {
    nodes: Vec<S>,
    coeffs: Vec<S>,
    values: Vec<S>,
}

impl<S: Scalar> TcfModel<S> {
    /// Inverse-difference construction interpolating `values` at `nodes`.
    pub fn from_data(nodes: &[S], values: &[S]) -> Result<Self> {
        if nodes.len() != values.len() {
            return Err(Error::Shape(format!("{} nodes, {} values", nodes.len(), values.len())));
        }
        if nodes.is_empty() {
            return Err(Error::InvalidModel("continued fraction needs at least one node".into()));
        }
        let mut model = Self::empty();
        for (&z, &f) in nodes.iter().zip(values) {
            model.push_node(z, f)?;
        }
        Ok(model)
    }

    /// A model from explicit coefficients; node values are recovered by evaluation.
    pub fn from_coefficients(nodes: Vec<S>, coeffs: Vec<S>) -> Result<Self> {
        if nodes.len() != coeffs.len() {
            return Err(Error::Shape(format!("{} nodes, {} coefficients", nodes.len(), coeffs.len())));
        }
        if nodes.is_empty() {
            return Err(Error::InvalidModel("continued fraction needs at least one node".into()));
        }
        check_distinct(&nodes)?;
        if let Some(k) = coeffs.iter().position(|w| !w.is_finite()) {
            return Err(Error::NonFiniteCoefficient { k });
        }
        let mut model = Self { nodes, coeffs, values: Vec::new() };
        model.values = model
            .nodes
            .iter()
            .map(|&z| model.eval(z))
            .collect::<Result<Vec<_>>>()?;
        Ok(model)
    }

    fn empty() -> Self {
        Self { nodes: Vec::new(), coeffs: Vec::new(), values: Vec::new() }
    }

    /// Appends one interpolation condition, computing its coefficient from
    /// `t_1 = f_k`, `t_{i+1} = (z_k - z_i) / (t_i - w_i)`, `w_k = t_k`.
    /// On failure the model is left unchanged.
    pub fn push_node(&mut self, z: S, f: S) -> Result<()> {
        let k = self.nodes.len();
        if !(z.is_finite() && f.is_finite()) {
            return Err(Error::NonFinite(format!("interpolation datum {k}")));
        }
        if self.nodes.contains(&z) {
            return Err(Error::DuplicateNode(k));
        }
        let mut t = f;
        for i in 0..k {
            let den = t - self.coeffs[i];
            if den.is_zero() {
                return Err(Error::Breakdown { k, i });
            }
            t = (z - self.nodes[i]) / den;
        }
        if !t.is_finite() {
            return Err(Error::NonFiniteCoefficient { k });
        }
        self.nodes.push(z);
        self.coeffs.push(t);
        self.values.push(f);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[S] {
        &self.nodes
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// Interpolated values at the nodes.
    pub fn values(&self) -> &[S] {
        &self.values
    }

    /// Tail-ordered evaluation: `u_k = a_k / (b_k + u_{k+1})`, `r = b_0 + u_1`.
    pub fn eval_classic(&self, z: S) -> Result<S> {
        let n = self.len();
        let mut u = S::zero();
        for k in (0..n - 1).rev() {
            let den = self.coeffs[k + 1] + u;
            if den.is_zero() {
                return Err(Error::IntermediatePole { term: k + 1 });
            }
            u = (z - self.nodes[k]) / den;
        }
        Ok(self.coeffs[0] + u)
    }

    /// Single-division evaluation through the `p/q` recurrence.
    pub fn eval(&self, z: S) -> Result<S> {
        let (p0, q0) = self.onediv_state(z)?;
        Ok(p0 / q0)
    }

    /// Final `(p_0, q_0)` of the single-division recurrence, up to a common
    /// power-of-two factor. Errors when `q_0 = 0`.
    fn onediv_state(&self, z: S) -> Result<(S, S)> {
        let (p0, q0, _) = self.onediv_state_scaled(z);
        if q0.is_zero() {
            return Err(Error::Pole(z.to_c64()));
        }
        Ok((p0, q0))
    }

    /// Returns `(p_0, q_0, e)` where the true state is `2^e (p_0, q_0)`.
    pub(crate) fn onediv_state_scaled(&self, z: S) -> (S, S, i32) {
        let n = self.len();
        let (mut p, mut q) = (S::one(), S::zero());
        let mut exp = 0;
        for k in (0..n - 1).rev() {
            let next_p = self.coeffs[k + 1] * p + q;
            q = (z - self.nodes[k]) * p;
            p = next_p;
            let big = p.magnitude().max(q.magnitude());
            if big > BIG {
                p = p.mul_pow2(-RESCALE_EXP);
                q = q.mul_pow2(-RESCALE_EXP);
                exp += RESCALE_EXP;
            } else if big < SMALL && big > 0.0 {
                p = p.mul_pow2(RESCALE_EXP);
                q = q.mul_pow2(RESCALE_EXP);
                exp -= RESCALE_EXP;
            }
        }
        (self.coeffs[0] * p + q, p, exp)
    }

    /// `r, r', ..., r^(mu)` from the differentiated `p/q` recurrence.
    pub fn derivatives(&self, z: S, mu: usize) -> Result<DerivStack<S>> {
        check_order(mu)?;
        let n = self.len();
        let mut p = vec![S::zero(); mu + 1];
        let mut q = vec![S::zero(); mu + 1];
        p[0] = S::one();
        for k in (0..n - 1).rev() {
            let a = z - self.nodes[k];
            let b = self.coeffs[k + 1];
            // Descending m so p[m-1] still holds the previous step's value.
            for m in (0..=mu).rev() {
                let next_p = b * p[m] + q[m];
                q[m] = if m == 0 { a * p[0] } else { a * p[m] + S::from_f64(m as f64) * p[m - 1] };
                p[m] = next_p;
            }
            let big = p.iter().chain(q.iter()).fold(0.0f64, |acc, x| acc.max(x.magnitude()));
            if big > BIG {
                p.iter_mut().chain(q.iter_mut()).for_each(|x| *x = x.mul_pow2(-RESCALE_EXP));
            } else if big < SMALL && big > 0.0 {
                p.iter_mut().chain(q.iter_mut()).for_each(|x| *x = x.mul_pow2(RESCALE_EXP));
            }
        }
        let num: Vec<S> = (0..=mu).map(|m| self.coeffs[0] * p[m] + q[m]).collect();
        let den = p;
        if den[0].is_zero() {
            return Err(Error::Pole(z.to_c64()));
        }
        Ok(DerivStack { values: leibniz_quotient(&num, &den) })
    }

    /// The fraction for `c * r`: odd-position coefficients scale by `c`,
    /// even-position ones by `1/c`.
    pub fn scaled(&self, c: S) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, &w)| if k % 2 == 0 { w * c } else { w / c })
            .collect();
        Self {
            nodes: self.nodes.clone(),
            coeffs,
            values: self.values.iter().map(|&f| f * c).collect(),
        }
    }

    pub fn derivatives_many(&self, points: &[S], mu: usize) -> Vec<Result<DerivStack<S>>> {
        use rayon::prelude::*;
        points.par_iter().map(|&z| self.derivatives(z, mu)).collect()
    }
}

impl<S: MachineScalar> TcfModel<S> {
    pub fn extend(&self) -> TcfModel<S::Extended> {
        TcfModel {
            nodes: self.nodes.iter().map(|&x| x.extend()).collect(),
            coeffs: self.coeffs.iter().map(|&x| x.extend()).collect(),
            values: self.values.iter().map(|&x| x.extend()).collect(),
        }
    }
}
