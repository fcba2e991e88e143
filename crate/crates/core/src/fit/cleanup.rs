//! Removal of spurious pole-zero pairs (Froissart doublets) from AAA fits.
//!
//! A doublet barely changes values at the samples but wrecks derivatives
//! nearby, so a fit that looks converged can still be useless for
//! differentiation. Poles come from the barycentric denominator, residues
//! from a small contour around each pole.

use nalgebra::DMatrix;

use crate::barycentric::BaryModel;
use crate::domain::Domain;
use crate::scalar::{Complex64, Scalar};

/// Residues below this fraction of `max|f|` mark a pole as spurious.
pub const CLEANUP_TOL: f64 = 1e-13;

/// Only poles this close to the domain are candidates; distant poles with
/// small residues are normal and harmless there.
const NEAR_DOMAIN: f64 = 1e-3;

/// Poles this close are on the domain itself. The targets are finite there,
/// so such poles are spurious whatever their residue.
const ON_DOMAIN: f64 = 1e-9;

/// Radius of the contour used for residues.
const CONTOUR_RADIUS: f64 = 1e-5;

/// Zeros of `q(z) = sum_k w_k / (z - z_k)`.
///
/// They are the eigenvalues of `(I - 1 w^T / (w^T 1)) D` on the subspace
/// `w^T x = 0`, with `D = diag(z_k)`; an orthonormal basis of that subspace
/// from one Householder reflection removes the extra zero eigenvalue.
pub fn poles(z: &[Complex64], w: &[Complex64]) -> Vec<Complex64> {
    let n = z.len();
    let sum: Complex64 = w.iter().sum();
    if n < 2 || sum.norm() == 0.0 || !sum.is_finite() {
        return Vec::new();
    }
    // Reflector H with H a ∝ e_1 for a = conj(w); columns 1.. of H span w^T x = 0.
    let a: Vec<Complex64> = w.iter().map(|x| x.conj()).collect();
    let anorm = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let phase = if a[0].norm() > 0.0 { a[0] / a[0].norm() } else { Complex64::new(1.0, 0.0) };
    let mut v = a.clone();
    v[0] += phase * anorm;
    let vnorm2: f64 = v.iter().map(|x| x.norm_sqr()).sum();
    let h = DMatrix::from_fn(n, n, |i, j| {
        let id = if i == j { 1.0 } else { 0.0 };
        Complex64::new(id, 0.0) - v[i] * v[j].conj() * (2.0 / vnorm2)
    });
    let u = h.columns(1, n - 1).into_owned();
    // M U = D U - 1 (w^T D U) / (w^T 1)
    let mut du = u.clone();
    for i in 0..n {
        for j in 0..n - 1 {
            du[(i, j)] *= z[i];
        }
    }
    let mut mu = du.clone();
    for j in 0..n - 1 {
        let s: Complex64 = (0..n).map(|i| w[i] * du[(i, j)]).sum::<Complex64>() / sum;
        for i in 0..n {
            mu[(i, j)] -= s;
        }
    }
    let k = u.adjoint() * mu;
    if k.iter().any(|x| !x.is_finite()) {
        return Vec::new();
    }
    match k.schur().eigenvalues() {
        Some(ev) => ev.iter().copied().filter(|p| p.is_finite()).collect(),
        None => Vec::new(),
    }
}

fn eval_c64(z: &[Complex64], f: &[Complex64], w: &[Complex64], x: Complex64) -> Complex64 {
    let (mut num, mut den) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for k in 0..z.len() {
        let d = x - z[k];
        if d.norm() == 0.0 {
            return f[k];
        }
        let c = w[k] / d;
        num += c * f[k];
        den += c;
    }
    num / den
}

/// Residue estimate `(1/2πi) ∮ r` over a four-point circle around `p`.
pub fn residue(z: &[Complex64], f: &[Complex64], w: &[Complex64], p: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..4 {
        let dz = Complex64::from_polar(CONTOUR_RADIUS, std::f64::consts::FRAC_PI_2 * k as f64);
        acc += eval_c64(z, f, w, p + dz) * dz;
    }
    acc / 4.0
}

/// Indices of nodes sitting nearest to spurious poles, one per pole, without
/// repeats. A pole is spurious when it lies on the domain, or next to it
/// with residue below `CLEANUP_TOL * fmax`.
pub fn spurious_nodes<S: Scalar>(model: &BaryModel<S>, domain: Domain, fmax: f64) -> Vec<usize> {
    let z: Vec<Complex64> = model.nodes().iter().map(|x| x.to_c64()).collect();
    let f: Vec<Complex64> = model.values().iter().map(|x| x.to_c64()).collect();
    let w: Vec<Complex64> = model.weights().iter().map(|x| x.to_c64()).collect();
    let mut out = Vec::new();
    for p in poles(&z, &w) {
        let d = domain.distance(p);
        if d > ON_DOMAIN && (d > NEAR_DOMAIN || residue(&z, &f, &w, p).norm() >= CLEANUP_TOL * fmax) {
            continue;
        }
        let nearest = (0..z.len()).min_by(|&a, &b| (z[a] - p).norm().total_cmp(&(z[b] - p).norm()));
        if let Some(j) = nearest {
            if !out.contains(&j) {
                out.push(j);
            }
        }
    }
    out
}

/// For a real model, the number of real poles the weights force: `q(x) =
/// sum_k w_k / (x - x_k)` runs from `sign(w_k)·∞` to `-sign(w_{k+1})·∞`
/// across a gap between sorted nodes, so same-sign neighbours force a zero
/// of `q` there. With `ends`, the pieces between the outer nodes and ±1 are
/// checked against `q(±1)` as well. `None` for complex data.
pub fn forced_real_poles<S: Scalar>(model: &BaryModel<S>, ends: bool) -> Option<usize> {
    let mut nw = Vec::with_capacity(model.len());
    for (z, w) in model.nodes().iter().zip(model.weights()) {
        let (z, w) = (z.to_c64(), w.to_c64());
        if z.im != 0.0 || w.im != 0.0 {
            return None;
        }
        if w.re != 0.0 {
            nw.push((z.re, w.re));
        }
    }
    if nw.is_empty() {
        return Some(0);
    }
    nw.sort_by(|a, b| a.0.total_cmp(&b.0));
    let q = |x: f64| nw.iter().map(|&(z, w)| w / (x - z)).sum::<f64>();
    let mut count = nw.windows(2).filter(|p| p[0].1.signum() == p[1].1.signum()).count();
    let (first, last) = (nw[0], nw[nw.len() - 1]);
    if ends && first.0 > -1.0 && q(-1.0).signum() != -first.1.signum() {
        count += 1;
    }
    if ends && last.0 < 1.0 && q(1.0).signum() != last.1.signum() {
        count += 1;
    }
    Some(count)
}

/// Whether the model is free of spurious poles.
pub fn is_clean<S: Scalar>(model: &BaryModel<S>, domain: Domain, fmax: f64) -> bool {
    match (domain, forced_real_poles(model, true)) {
        (Domain::Interval, Some(n)) => n == 0,
        _ => spurious_nodes(model, domain, fmax).is_empty(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn poles_of_a_known_denominator() {
        // 1/(z-0) - 2/(z-1) + 1/(z-2) = 2 / (z (z-1) (z-2)): no finite zeros.
        // 1/z + 1/(z-1) has its zero at 1/2.
        let p = poles(&[c(0.0), c(1.0)], &[c(1.0), c(1.0)]);
        assert_eq!(p.len(), 1);
        assert!((p[0] - c(0.5)).norm() < 1e-15);
        // 1/z + 1/(z-1) + 1/(z-2): zeros at 1 ± 1/sqrt(3).
        let mut p = poles(&[c(0.0), c(1.0), c(2.0)], &[c(1.0); 3]);
        p.sort_by(|a, b| a.re.total_cmp(&b.re));
        let r = 1.0 / 3f64.sqrt();
        assert!((p[0] - c(1.0 - r)).norm() < 1e-14 && (p[1] - c(1.0 + r)).norm() < 1e-14);
    }

    #[test]
    fn planted_doublet_is_found() {
        // Interpolant of 1/(x-3) on 3 nodes, plus a node whose weight is tiny:
        // the extra node only adds a pole-zero pair next to it.
        let nodes = vec![-1.0, 0.0, 1.0, 0.4];
        let vals: Vec<f64> = nodes.iter().map(|x| 1.0 / (x - 3.0)).collect();
        // Weights for the exact type-(0,1) interpolant on the first three nodes
        // are proportional to (z_k - 3) times the polynomial weights.
        let mut weights: Vec<f64> = [0.5, -1.0, 0.5].iter().zip(&nodes).map(|(w, z)| w * (z - 3.0)).collect();
        weights.push(1e-15);
        let m = BaryModel::new(nodes, vals, weights).unwrap();
        assert_eq!(spurious_nodes(&m, Domain::Interval, 0.5), vec![3]);
        assert_eq!(forced_real_poles(&m, true), Some(1));
        assert!(!is_clean(&m, Domain::Interval, 0.5));
    }

    #[test]
    fn polynomial_weights_force_no_poles() {
        // Alternating weights of equispaced polynomial interpolation.
        let nodes = vec![-1.0, -0.5, 0.0, 0.5, 1.0];
        let weights = vec![1.0, -4.0, 6.0, -4.0, 1.0];
        let m = BaryModel::new(nodes.clone(), nodes.iter().map(|x| x * x).collect(), weights).unwrap();
        assert_eq!(forced_real_poles(&m, true), Some(0));
        assert!(spurious_nodes(&m, Domain::Interval, 1.0).is_empty());
    }
}
