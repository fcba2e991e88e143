//! Error-free transformations of binary64 sums and products.

/// Knuth's TwoSum. Returns `(s, e)` with `s = fl(a + b)` and `s + e = a + b` exactly.
#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Dekker's FastTwoSum; requires `|a| >= |b|` (or `a == 0`).
#[inline]
pub fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

/// Returns `(p, e)` with `p = fl(a * b)` and `p + e = a * b` exactly.
///
/// Uses a fused multiply-add. Rust's `f64::mul_add` is always correctly
/// rounded (software fallback where the target lacks an FMA instruction),
/// so the residual is exact on every platform.
#[inline]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

/// Veltkamp split of `a` into two 26-bit halves with `hi + lo = a`.
#[inline]
pub fn split(a: f64) -> (f64, f64) {
    const SPLITTER: f64 = 134_217_729.0; // 2^27 + 1
    let t = SPLITTER * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

/// Dekker's TwoProduct without FMA. Same contract as [`two_prod`] away from overflow.
#[inline]
pub fn two_prod_dekker(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let e = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_sum_has_no_residual() {
        assert_eq!(two_sum(1.0, 2.0), (3.0, 0.0));
    }

    #[test]
    fn residual_recovers_tiny_addend() {
        let tiny = 2f64.powi(-60);
        assert_eq!(two_sum(1.0, tiny), (1.0, tiny));
        assert_eq!(two_sum(tiny, 1.0), (1.0, tiny));
    }

    #[test]
    fn exact_product_has_no_residual() {
        assert_eq!(two_prod(2.0, 3.0), (6.0, 0.0));
        assert_eq!(two_prod(0.0, 12.5), (0.0, 0.0));
    }

    #[test]
    fn square_of_one_plus_ulp_splits_exactly() {
        // (1 + 2^-30)^2 = 1 + 2^-29 + 2^-60: the last term falls below the ulp of 1.
        let x = 1.0 + 2f64.powi(-30);
        let (p, e) = two_prod(x, x);
        assert_eq!(p, 1.0 + 2f64.powi(-29));
        assert_eq!(e, 2f64.powi(-60));
        assert_eq!(two_prod_dekker(x, x), (p, e));
    }

    #[test]
    fn non_finite_propagates() {
        assert!(two_sum(f64::NAN, 1.0).0.is_nan());
        assert!(two_prod(f64::INFINITY, 2.0).0.is_infinite());
    }
}
