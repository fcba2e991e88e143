//! Smallest right singular vector by Householder QR followed by one-sided
//! (Hestenes) Jacobi on the triangular factor.

use crate::scalar::Scalar;
use crate::{Error, Result};

pub const MAX_SWEEPS: usize = 30;
pub const ORTHO_TOL: f64 = 1e-15;

/// Dense column-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> DenseMatrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> S {
        self.data[j * self.rows + i]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[j * self.rows + i] = v;
    }

    pub fn column(&self, j: usize) -> &[S] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.rows];
        for (j, &vj) in v.iter().enumerate() {
            for (o, &a) in out.iter_mut().zip(self.column(j)) {
                *o = *o + a * vj;
            }
        }
        out
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|x| x.magnitude().powi(2)).sum::<f64>().sqrt()
    }
}

/// Smallest singular value and a matching unit right singular vector.
#[derive(Debug, Clone, PartialEq)]
pub struct MinSingular<S> {
    pub sigma: f64,
    pub vector: Vec<S>,
}

/// Right singular vector for the smallest singular value of `a` (rows >= cols).
///
/// Conventions: cyclic sweeps over pairs `(p, q)`, `p < q`, in row order;
/// a pair is skipped once `|a_p^H a_q| <= 1e-15 * |a_p| |a_q|`; ties between
/// equal singular values go to the last column; the global phase is fixed by
/// making the largest-magnitude entry (first on ties) real and positive.
pub fn svd_min_right_vector<S: Scalar>(a: &DenseMatrix<S>) -> Result<MinSingular<S>> {
    let (m, n) = (a.rows(), a.cols());
    if n == 0 || m < n {
        return Err(Error::Shape(format!("need rows >= cols >= 1, got {m}x{n}")));
    }
    if a.data.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("matrix entry".into()));
    }
    let r = triangular_factor(a);
    // Rounding leaves every column with absolute noise of about eps * |A|.
    // Columns far below that carry no direction and are left alone; the
    // smallest floor gives the most accurate vector but can cycle, so larger
    // floors are tried from scratch when a run does not converge.
    let noise = f64::EPSILON * r.iter().map(|c| norm_sqr(c)).sum::<f64>().sqrt();
    // Inner products of length-n columns carry about sqrt(n) rounding errors,
    // so the nominal tolerance is widened for long columns.
    let tol = ORTHO_TOL.max((n as f64).sqrt() * f64::EPSILON);
    let mut result = None;
    for factor in [0.1, 1.0, n as f64] {
        let floor = (factor * noise) * (factor * noise);
        if let Some(done) = jacobi(r.clone(), floor, tol) {
            result = Some(done);
            break;
        }
    }
    let Some((cols, mut v)) = result else {
        return Err(Error::SvdNoConvergence { sweeps: MAX_SWEEPS });
    };

    let mut best = 0;
    let mut best_norm = f64::INFINITY;
    for (j, c) in cols.iter().enumerate() {
        let s = norm(c);
        if s <= best_norm {
            best = j;
            best_norm = s;
        }
    }
    let mut vector = std::mem::take(&mut v[best]);
    fix_phase(&mut vector);
    Ok(MinSingular { sigma: best_norm, vector })
}

fn norm_sqr<S: Scalar>(x: &[S]) -> f64 {
    x.iter().map(|v| v.abs_sqr()).sum()
}

fn norm<S: Scalar>(x: &[S]) -> f64 {
    norm_sqr(x).sqrt()
}

/// Cyclic one-sided Jacobi on the columns of `cols`; returns the rotated
/// columns and the accumulated right vectors, or `None` after `MAX_SWEEPS`.
#[allow(clippy::type_complexity)]
fn jacobi<S: Scalar>(mut cols: Vec<Vec<S>>, floor: f64, tol: f64) -> Option<(Vec<Vec<S>>, Vec<Vec<S>>)> {
    let n = cols.len();
    let mut v: Vec<Vec<S>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { S::one() } else { S::zero() }).collect())
        .collect();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                if rotate_pair(&mut cols, &mut v, p, q, floor, tol) {
                    rotated = true;
                }
            }
        }
        if !rotated {
            return Some((cols, v));
        }
    }
    None
}

/// `x^H y`.
fn dot<S: Scalar>(x: &[S], y: &[S]) -> S {
    x.iter().zip(y).fold(S::zero(), |acc, (&a, &b)| acc + a.conj() * b)
}

/// Householder QR; returns the columns of the `n x n` factor `R`.
fn triangular_factor<S: Scalar>(a: &DenseMatrix<S>) -> Vec<Vec<S>> {
    let (m, n) = (a.rows(), a.cols());
    let mut work: Vec<Vec<S>> = (0..n).map(|j| a.column(j).to_vec()).collect();
    for k in 0..n {
        let below = norm_sqr(&work[k][k + 1..]);
        if below == 0.0 {
            continue;
        }
        let x0 = work[k][k];
        let xnorm = (x0.magnitude().powi(2) + below).sqrt();
        let x0_abs = x0.magnitude();
        let phase = if x0_abs == 0.0 { S::one() } else { x0 / S::from_f64(x0_abs) };
        let alpha = -(phase * S::from_f64(xnorm));
        let mut h: Vec<S> = work[k][k..m].to_vec();
        h[0] = h[0] - alpha;
        let hnorm2 = norm_sqr(&h);
        for col in work.iter_mut().skip(k + 1) {
            let s = dot(&h, &col[k..m]) * S::from_f64(2.0 / hnorm2);
            for (c, &hv) in col[k..m].iter_mut().zip(&h) {
                *c = *c - s * hv;
            }
        }
        work[k][k] = alpha;
        for x in &mut work[k][k + 1..] {
            *x = S::zero();
        }
    }
    work.into_iter().map(|mut c| {
        c.truncate(n);
        c
    }).collect()
}

/// One Hestenes rotation orthogonalizing columns `p` and `q`; returns whether
/// the pair needed it.
fn rotate_pair<S: Scalar>(cols: &mut [Vec<S>], v: &mut [Vec<S>], p: usize, q: usize, floor: f64, tol: f64) -> bool {
    let alpha = norm_sqr(&cols[p]);
    let beta = norm_sqr(&cols[q]);
    if alpha <= floor || beta <= floor {
        return false;
    }
    let gamma = dot(&cols[p], &cols[q]);
    let g = gamma.magnitude();
    if g == 0.0 || g <= tol * (alpha * beta).sqrt() {
        return false;
    }
    // Rotate the phase of column q so that a_p^H a_q becomes real and positive.
    let phase = gamma.conj() / S::from_f64(g);
    let zeta = (beta - alpha) / (2.0 * g);
    let t = if zeta.abs() > 1e150 {
        0.5 / zeta
    } else {
        zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = c * t;
    let (cs, ss) = (S::from_f64(c), S::from_f64(s));
    for mat in [cols, v] {
        let (left, right) = mat.split_at_mut(q);
        let (xp, xq) = (&mut left[p], &mut right[0]);
        for (a, b) in xp.iter_mut().zip(xq.iter_mut()) {
            let bq = *b * phase;
            let ap = *a;
            *a = cs * ap - ss * bq;
            *b = ss * ap + cs * bq;
        }
    }
    true
}

fn fix_phase<S: Scalar>(v: &mut [S]) {
    let mut k = 0;
    let mut best = -1.0;
    for (i, x) in v.iter().enumerate() {
        let m = x.magnitude();
        if m > best {
            best = m;
            k = i;
        }
    }
    if best > 0.0 {
        let rot = v[k].conj() / S::from_f64(best);
        for x in v.iter_mut() {
            *x = *x * rot;
        }
        // The pivot is real by construction; drop the rounding residue.
        v[k] = S::from_f64(best);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Complex64;

    #[test]
    fn identity_tie_goes_to_last_column() {
        let a = DenseMatrix::from_fn(3, 3, |i, j| if i == j { 1.0 } else { 0.0 });
        let r = svd_min_right_vector(&a).unwrap();
        assert_eq!(r.vector, vec![0.0, 0.0, 1.0]);
        assert_eq!(r.sigma, 1.0);
    }

    #[test]
    fn rectangular_diagonal() {
        let d = [3.0, 2.0, 1.0];
        let a = DenseMatrix::from_fn(4, 3, |i, j| if i == j { d[j] } else { 0.0 });
        let r = svd_min_right_vector(&a).unwrap();
        assert_eq!(r.vector, vec![0.0, 0.0, 1.0]);
        assert!((r.sigma - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_matrix_single_column() {
        let a = DenseMatrix::<f64>::zeros(5, 1);
        let r = svd_min_right_vector(&a).unwrap();
        assert_eq!(r.vector, vec![1.0]);
        assert_eq!(r.sigma, 0.0);
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(svd_min_right_vector(&DenseMatrix::<f64>::zeros(2, 3)), Err(Error::Shape(_))));
        let mut a = DenseMatrix::<f64>::zeros(3, 2);
        a.set(0, 0, f64::NAN);
        assert!(matches!(svd_min_right_vector(&a), Err(Error::NonFinite(_))));
    }

    #[test]
    fn known_null_vector_complex() {
        // Columns c0, c1 and c2 = c0 + i*c1: null vector is (1, i, -1)/sqrt(3) up to phase.
        let c0 = [1.0, 2.0, 0.5, -1.0];
        let c1 = [0.0, 1.0, -3.0, 2.0];
        let a = DenseMatrix::from_fn(4, 3, |i, j| match j {
            0 => Complex64::new(c0[i], 0.0),
            1 => Complex64::new(c1[i], 0.0),
            _ => Complex64::new(c0[i], c1[i]),
        });
        let r = svd_min_right_vector(&a).unwrap();
        assert!(r.sigma < 1e-14);
        let av = a.mul_vec(&r.vector);
        assert!(av.iter().all(|x| x.norm() < 1e-14));
        assert!((norm(&r.vector) - 1.0).abs() < 1e-14);
        // Pivot is real positive.
        let pivot = r.vector.iter().map(|x| x.norm()).fold(0.0, f64::max);
        assert!(r.vector.iter().any(|x| x.im == 0.0 && x.re == pivot));
    }
}
