//! Conversions into barycentric form.

use crate::barycentric::{check_distinct, BaryModel};
use crate::scalar::Scalar;
use crate::thiele::TcfModel;
use crate::{Error, Result};

/// `v * 2^e`, split so that intermediate powers of two stay representable.
fn scale2<S: Scalar>(mut v: S, mut e: i64) -> S {
    while e != 0 {
        let step = e.clamp(-900, 900);
        v = v.mul_pow2(step as i32);
        e -= step;
    }
    v
}

/// Pulls the binary exponent out of `v` so the mantissa stays near 1.
fn renorm<S: Scalar>(v: S, e: &mut i64) -> S {
    let m = v.magnitude();
    if m == 0.0 || !m.is_finite() {
        return v;
    }
    let k = m.log2().floor() as i64;
    *e += k;
    let mut v = scale2(v, -k);
    // log2 may round across a power of two; settle the mantissa into [1, 2).
    if v.magnitude() >= 2.0 {
        v = v.mul_pow2(-1);
        *e += 1;
    } else if v.magnitude() < 1.0 {
        v = v.mul_pow2(1);
        *e -= 1;
    }
    v
}

/// `prod_{j != k} (z_k - z_j)` as a mantissa/exponent pair.
fn node_product<S: Scalar>(nodes: &[S], k: usize) -> (S, i64) {
    let mut acc = S::one();
    let mut e = 0i64;
    for (j, &zj) in nodes.iter().enumerate() {
        if j != k {
            acc = renorm(acc * (nodes[k] - zj), &mut e);
        }
    }
    (acc, e)
}

/// Divides every scaled weight by the largest one (first on ties).
fn normalize<S: Scalar>(parts: &[(S, i64)]) -> Vec<S> {
    let parts: Vec<(S, i64)> = parts
        .iter()
        .map(|&(m, e)| {
            let mut e = e;
            (renorm(m, &mut e), e)
        })
        .collect();
    // Mantissas now share the range [1, 2), so compare exponents first.
    let key = |(m, e): &(S, i64)| (*e, m.magnitude());
    let mut big = 0;
    for (k, p) in parts.iter().enumerate() {
        if key(p).partial_cmp(&key(&parts[big])) == Some(std::cmp::Ordering::Greater) {
            big = k;
        }
    }
    let (mb, eb) = parts[big];
    parts.iter().map(|&(m, e)| scale2(m / mb, e - eb)).collect()
}

/// Barycentric weights of the polynomial interpolant,
/// `w_k = 1 / prod_{j != k} (z_k - z_j)`, scaled so the largest has magnitude one.
pub fn polynomial_bary_weights<S: Scalar>(nodes: &[S]) -> Result<Vec<S>> {
    if nodes.is_empty() {
        return Err(Error::Shape("no nodes".into()));
    }
    check_distinct(nodes)?;
    let parts: Vec<(S, i64)> = (0..nodes.len())
        .map(|k| {
            let (m, e) = node_product(nodes, k);
            (S::one() / m, -e)
        })
        .collect();
    Ok(normalize(&parts))
}

/// The same rational function in barycentric form, on the same nodes.
///
/// With `r = N / Q` from the continued fraction, the weights are
/// `w_k = Q(z_k) / prod_{j != k} (z_k - z_j)`.
pub fn tcf_to_barycentric<S: Scalar>(model: &TcfModel<S>) -> Result<BaryModel<S>> {
    let nodes = model.nodes();
    let mut parts = Vec::with_capacity(nodes.len());
    for (k, &z) in nodes.iter().enumerate() {
        let (_, q, qe) = model.onediv_state_scaled(z);
        if q.is_zero() {
            return Err(Error::ZeroWeight(k));
        }
        let mut e = qe as i64;
        let q = renorm(q, &mut e);
        let (m, pe) = node_product(nodes, k);
        parts.push((q / m, e - pe));
    }
    let weights = normalize(&parts);
    if let Some(k) = weights.iter().position(|w| w.is_zero()) {
        return Err(Error::ZeroWeight(k));
    }
    BaryModel::new(nodes.to_vec(), model.values().to_vec(), weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_nodes() {
        assert_eq!(polynomial_bary_weights(&[-1.0, 1.0]).unwrap(), vec![1.0, -1.0]);
        assert_eq!(polynomial_bary_weights(&[3.0]).unwrap(), vec![1.0]);
        assert!(polynomial_bary_weights(&[1.0, 1.0]).is_err());
    }

    #[test]
    fn chebyshev_weights_alternate() {
        // Chebyshev extreme points: weights (-1)^k, halved at the ends.
        let n = 9;
        let x: Vec<f64> = (0..n).map(|i| -(std::f64::consts::PI * i as f64 / (n - 1) as f64).cos()).collect();
        let w = polynomial_bary_weights(&x).unwrap();
        for (k, wk) in w.iter().enumerate() {
            let expect = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
            assert!((wk.abs() - expect).abs() < 1e-12, "{k}: {wk}");
        }
    }

    #[test]
    fn huge_node_sets_do_not_overflow() {
        let x: Vec<f64> = (0..400).map(|i| 1e3 * (i as f64 - 200.0)).collect();
        let w = polynomial_bary_weights(&x).unwrap();
        assert!(w.iter().all(|v| v.is_finite()));
        assert_eq!(w.iter().fold(0.0f64, |a, v| a.max(v.abs())), 1.0);
    }

    #[test]
    fn tcf_conversion_agrees() {
        let nodes = [-0.9, -0.3, 0.2, 0.7, 1.0];
        let f = |x: f64| (x + 0.5) / (x * x + 2.0);
        let vals: Vec<f64> = nodes.iter().map(|&x| f(x)).collect();
        let tcf = TcfModel::from_data(&nodes, &vals).unwrap();
        let bary = tcf_to_barycentric(&tcf).unwrap();
        for &x in &nodes {
            assert_eq!(bary.eval(x).unwrap(), f(x));
        }
        for &x in &[-0.5, 0.0, 0.45, 0.99] {
            assert!((bary.eval(x).unwrap() - tcf.eval(x).unwrap()).abs() < 1e-14);
        }
    }
}
