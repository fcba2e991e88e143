//! Barycentric rational functions
//!
//! ```text
//!        sum_k w_k f_k / (z - z_k)     N(z)
//! r(z) = -------------------------  =  ----
//!        sum_k w_k     / (z - z_k)     D(z)
//! ```
//!
//! Derivatives use the nearest node `z_j` and `eps = z - z_j` to form the
//! shifted pair `eps*N/w_j`, `eps*D/w_j`. The `1/eps` terms of node `j` turn
//! into the constants `f_j` and `1`, so differentiating the shifted pair by the
//! Leibniz rule involves no subtraction of large, nearly equal terms. At
//! `eps = 0` the same arithmetic reduces to the at-node formula.

use crate::deriv::{check_order, leibniz_quotient, DerivStack};
use crate::scalar::{MachineScalar, Scalar};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct BaryModel<S> {
    nodes: Vec<S>,
    values: Vec<S>,
    weights: Vec<S>,
}

impl<S: Scalar> BaryModel<S> {
    /// Validates the data and drops nodes whose weight is exactly zero.
    pub fn new(nodes: Vec<S>, values: Vec<S>, weights: Vec<S>) -> Result<Self> {
        let n = nodes.len();
        if values.len() != n || weights.len() != n {
            return Err(Error::Shape(format!(
                "{} nodes, {} values, {} weights",
                n,
                values.len(),
                weights.len()
            )));
        }
        for (k, (&f, &w)) in values.iter().zip(&weights).enumerate() {
            if !(nodes[k].is_finite() && f.is_finite() && w.is_finite()) {
                return Err(Error::NonFinite(format!("model data at index {k}")));
            }
        }
        check_distinct(&nodes)?;
        let mut model = Self { nodes: Vec::with_capacity(n), values: Vec::with_capacity(n), weights: Vec::with_capacity(n) };
        for k in 0..n {
            if !weights[k].is_zero() {
                model.nodes.push(nodes[k]);
                model.values.push(values[k]);
                model.weights.push(weights[k]);
            }
        }
        if model.nodes.is_empty() {
            return Err(Error::InvalidModel("model needs at least one node with nonzero weight".into()));
        }
        Ok(model)
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

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    /// Index of the node closest to `z`; ties go to the smallest index.
    pub fn nearest_node(&self, z: S) -> usize {
        let mut best = 0;
        let mut best_dist = f64::INFINITY;
        for (k, &zk) in self.nodes.iter().enumerate() {
            let d = (z - zk).magnitude();
            if d < best_dist {
                best = k;
                best_dist = d;
            }
        }
        best
    }

    /// `N(z)/D(z)`, returning `f_j` exactly when `z` is the node `z_j`.
    pub fn eval(&self, z: S) -> Result<S> {
        let mut num = S::zero();
        let mut den = S::zero();
        for k in 0..self.len() {
            let delta = z - self.nodes[k];
            if delta.is_zero() {
                return Ok(self.values[k]);
            }
            let t = self.weights[k] / delta;
            num = num + t * self.values[k];
            den = den + t;
        }
        if den.is_zero() {
            return Err(Error::Pole(z.to_c64()));
        }
        Ok(num / den)
    }

    /// The classical generic-point formula `(N' - r D') / D`.
    ///
    /// Loses accuracy like `1/eps` as `z` approaches a node; kept as the
    /// baseline for stability comparisons.
    pub fn derivative_naive(&self, z: S) -> Result<S> {
        let (mut num, mut den) = (S::zero(), S::zero());
        let (mut dnum, mut dden) = (S::zero(), S::zero());
        for k in 0..self.len() {
            let delta = z - self.nodes[k];
            if delta.is_zero() {
                return Err(Error::AtNode { index: k });
            }
            let t = self.weights[k] / delta;
            let dt = -t / delta;
            num = num + t * self.values[k];
            den = den + t;
            dnum = dnum + dt * self.values[k];
            dden = dden + dt;
        }
        if den.is_zero() {
            return Err(Error::Pole(z.to_c64()));
        }
        let r = num / den;
        Ok((dnum - r * dden) / den)
    }

    /// First derivative from the double sum
    /// `N'D - ND' = sum_j sum_k w_j w_k (f_k - f_j) / ((z-z_j)^2 (z-z_k))`,
    /// divided by `D^2`. Quadratic cost; used as an oracle.
    pub fn derivative_double_sum(&self, z: S) -> Result<S> {
        let n = self.len();
        let mut deltas = Vec::with_capacity(n);
        let mut den = S::zero();
        for k in 0..n {
            let delta = z - self.nodes[k];
            if delta.is_zero() {
                return Err(Error::AtNode { index: k });
            }
            den = den + self.weights[k] / delta;
            deltas.push(delta);
        }
        if den.is_zero() {
            return Err(Error::Pole(z.to_c64()));
        }
        let mut acc = S::zero();
        for j in 0..n {
            let outer = self.weights[j] / (deltas[j] * deltas[j]);
            let mut inner = S::zero();
            for k in 0..n {
                inner = inner + self.weights[k] * (self.values[k] - self.values[j]) / deltas[k];
            }
            acc = acc + outer * inner;
        }
        Ok(acc / (den * den))
    }

    /// `r'(z_j) = (1/w_j) sum_{k != j} w_k (f_k - f_j) / (z_j - z_k)`, evaluated
    /// with exactly the operations [`BaryModel::derivatives`] performs at `z = z_j`.
    pub fn derivative_at_node(&self, j: usize) -> Result<S> {
        if j >= self.len() {
            return Err(Error::Shape(format!("node index {j} out of range for {} nodes", self.len())));
        }
        let zj = self.nodes[j];
        let (mut num, mut den) = (S::zero(), S::zero());
        for k in 0..self.len() {
            if k == j {
                continue;
            }
            let d = self.weights[k] / (zj - self.nodes[k]);
            num = num + self.values[k] * d;
            den = den + d;
        }
        let wj = self.weights[j];
        Ok(num / wj - self.values[j] * (den / wj))
    }

    /// Stable evaluation of `r, r', ..., r^(mu)` in `O(n*mu + mu^2)` operations.
    pub fn derivatives(&self, z: S, mu: usize) -> Result<DerivStack<S>> {
        check_order(mu)?;
        let j = self.nearest_node(z);
        // N_j^(m), D_j^(m): sums over k != j of the m-th derivative of w_k/(z - z_k).
        let mut nj = vec![S::zero(); mu + 1];
        let mut dj = vec![S::zero(); mu + 1];
        for k in 0..self.len() {
            if k == j {
                continue;
            }
            let delta = z - self.nodes[k];
            let fk = self.values[k];
            let mut d = self.weights[k] / delta;
            nj[0] = nj[0] + fk * d;
            dj[0] = dj[0] + d;
            for m in 1..=mu {
                d = -(S::from_f64(m as f64) * d) / delta;
                nj[m] = nj[m] + fk * d;
                dj[m] = dj[m] + d;
            }
        }
        let eps = z - self.nodes[j];
        let wj = self.weights[j];
        for m in 0..=mu {
            nj[m] = nj[m] / wj;
            dj[m] = dj[m] / wj;
        }
        // Shifted pair eps*N/w_j and eps*D/w_j with their derivatives.
        let mut num = Vec::with_capacity(mu + 1);
        let mut den = Vec::with_capacity(mu + 1);
        num.push(self.values[j] + eps * nj[0]);
        den.push(S::one() + eps * dj[0]);
        for m in 1..=mu {
            let mm = S::from_f64(m as f64);
            num.push(mm * nj[m - 1] + eps * nj[m]);
            den.push(mm * dj[m - 1] + eps * dj[m]);
        }
        if den[0].is_zero() {
            return Err(Error::Pole(z.to_c64()));
        }
        Ok(DerivStack { values: leibniz_quotient(&num, &den) })
    }

    /// Same rational function scaled by `c` (values multiplied by `c`).
    pub fn scaled(&self, c: S) -> Self {
        Self {
            nodes: self.nodes.clone(),
            values: self.values.iter().map(|&f| f * c).collect(),
            weights: self.weights.clone(),
        }
    }

    /// The stability-relevant kernels evaluated over many points, in parallel
    /// with the output in input order.
    pub fn derivatives_many(&self, points: &[S], mu: usize) -> Vec<Result<DerivStack<S>>> {
        use rayon::prelude::*;
        points.par_iter().map(|&z| self.derivatives(z, mu)).collect()
    }
}

impl<S: MachineScalar> BaryModel<S> {
    /// Promotes every datum exactly to double-double.
    pub fn extend(&self) -> BaryModel<S::Extended> {
        BaryModel {
            nodes: self.nodes.iter().map(|&x| x.extend()).collect(),
            values: self.values.iter().map(|&x| x.extend()).collect(),
            weights: self.weights.iter().map(|&x| x.extend()).collect(),
        }
    }
}

pub(crate) fn check_distinct<S: Scalar>(nodes: &[S]) -> Result<()> {
    for k in 1..nodes.len() {
        if nodes[..k].contains(&nodes[k]) {
            return Err(Error::DuplicateNode(k));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Complex64, DDReal};

    /// Hand algebra: this model is r(z) = 1/(z+2).
    fn inv_shift() -> BaryModel<f64> {
        BaryModel::new(vec![0.0, 1.0], vec![0.5, 1.0 / 3.0], vec![2.0, -3.0]).unwrap()
    }

    fn line() -> BaryModel<f64> {
        BaryModel::new(vec![-1.0, 1.0], vec![0.0, 2.0], vec![1.0, -1.0]).unwrap()
    }

    fn constant() -> BaryModel<f64> {
        BaryModel::new(vec![-0.5, 0.1, 0.7], vec![5.0; 3], vec![1.0, -2.0, 1.5]).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn eval_examples() {
        assert!(rel(inv_shift().eval(2.0).unwrap(), 0.25) < 1e-15);
        assert_eq!(line().eval(0.0).unwrap(), 1.0);
        for (k, &z) in constant().nodes().iter().enumerate() {
            assert_eq!(constant().eval(z).unwrap(), constant().values()[k]);
        }
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(BaryModel::new(vec![0.0, 0.0], vec![1.0, 2.0], vec![1.0, 1.0]), Err(Error::DuplicateNode(1))));
        assert!(matches!(BaryModel::new(vec![0.0], vec![1.0, 2.0], vec![1.0]), Err(Error::Shape(_))));
        assert!(matches!(BaryModel::new(vec![0.0], vec![1.0], vec![0.0]), Err(Error::InvalidModel(_))));
        assert!(matches!(BaryModel::<f64>::new(vec![], vec![], vec![]), Err(Error::InvalidModel(_))));
        let m = BaryModel::new(vec![0.0, 1.0, 2.0], vec![1.0, 2.0, 3.0], vec![1.0, 0.0, -1.0]).unwrap();
        assert_eq!(m.nodes(), &[0.0, 2.0]);
    }

    #[test]
    fn pole_is_reported() {
        // D(z) = 1/z - 1/(z-1) vanishes nowhere finite; use weights (1, 1): D = 0 at z = 1/2.
        let m = BaryModel::new(vec![0.0, 1.0], vec![1.0, 2.0], vec![1.0, 1.0]).unwrap();
        assert!(matches!(m.eval(0.5), Err(Error::Pole(_))));
        assert!(matches!(m.derivatives(0.5, 1), Err(Error::Pole(_))));
    }

    #[test]
    fn naive_formula_far_from_nodes() {
        // d/dz 1/(z+2) = -1/(z+2)^2 = -1/144 at z = 10.
        assert!(rel(inv_shift().derivative_naive(10.0).unwrap(), -1.0 / 144.0) < 1e-15);
        assert!(constant().derivative_naive(3.3).unwrap().abs() <= 1e-12);
        assert_eq!(inv_shift().derivative_naive(1.0), Err(Error::AtNode { index: 1 }));
    }

    #[test]
    fn double_sum_examples() {
        assert!(rel(inv_shift().derivative_double_sum(0.5).unwrap(), -0.16) < 1e-15);
        assert_eq!(constant().derivative_double_sum(0.3).unwrap(), 0.0);
    }

    #[test]
    fn node_formula_examples() {
        assert!(rel(inv_shift().derivative_at_node(0).unwrap(), -0.25) < 1e-15);
        assert_eq!(line().derivative_at_node(0).unwrap(), 1.0);
        assert_eq!(constant().derivative_at_node(1).unwrap(), 0.0);
        assert!(inv_shift().derivative_at_node(2).is_err());
    }

    #[test]
    fn stable_derivatives_of_inverse_shift() {
        // 1/(z+2) at 0: [1/2, -1/4, 1/4].
        let d = inv_shift().derivatives(0.0, 2).unwrap();
        assert_eq!(d.order(), 2);
        for (got, want) in d.values.iter().zip([0.5, -0.25, 0.25]) {
            assert!(rel(*got, want) < 1e-14, "{got} vs {want}");
        }
        // Third derivative -6/(z+2)^4 at z = 0.3.
        let d = inv_shift().derivatives(0.3, 3).unwrap();
        assert!(rel(d.values[3], -6.0 / 2.3f64.powi(4)) < 1e-13);
    }

    #[test]
    fn node_evaluation_is_exact() {
        for m in [inv_shift(), line(), constant()] {
            for j in 0..m.len() {
                let d = m.derivatives(m.nodes()[j], 1).unwrap();
                assert_eq!(d.values[0], m.values()[j]);
                assert_eq!(d.values[1].to_bits(), m.derivative_at_node(j).unwrap().to_bits());
            }
        }
    }

    #[test]
    fn order_cap_enforced() {
        assert!(matches!(inv_shift().derivatives(0.0, 31), Err(Error::OrderTooLarge { .. })));
    }

    #[test]
    fn nearest_node_ties_take_smallest_index() {
        assert_eq!(line().nearest_node(0.0), 0);
        assert_eq!(line().nearest_node(0.1), 1);
    }

    #[test]
    fn complex_and_extended_instances_agree() {
        let m = inv_shift();
        let mc = BaryModel::new(
            m.nodes().iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            m.values().iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            m.weights().iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
        .unwrap();
        let z = Complex64::new(0.2, 0.3);
        let exact = -1.0 / ((z + 2.0) * (z + 2.0));
        assert!((mc.derivatives(z, 1).unwrap().values[1] - exact).norm() < 1e-15);
        let dd = m.extend().derivatives(DDReal::from(0.3), 1).unwrap();
        assert!(rel(dd.values[1].to_f64(), -1.0 / 2.3f64.powi(2)) < 1e-15);
    }

    #[test]
    fn near_node_first_derivative_is_accurate() {
        let z = 1.0 + 1e-13;
        let stable = inv_shift().derivatives(z, 1).unwrap().values[1];
        assert!(rel(stable, -1.0 / (z + 2.0).powi(2)) < 1e-13);
    }
}
