//! Derivative stacks and the Leibniz-rule recovery shared by both representations.

use crate::scalar::Scalar;
use crate::{Error, Result};

/// Largest supported derivative order. Binomial coefficients up to this row
/// are exact integers in binary64.
pub const MAX_ORDER: usize = 30;

/// Values `[r, r', ..., r^(mu)]` at one evaluation point.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivStack<S> {
    pub values: Vec<S>,
}

impl<S: Scalar> DerivStack<S> {
    pub fn order(&self) -> usize {
        self.values.len() - 1
    }

    pub fn value(&self) -> S {
        self.values[0]
    }

    pub fn get(&self, m: usize) -> Option<S> {
        self.values.get(m).copied()
    }
}

/// Row `m` of Pascal's triangle, `[C(m,0), ..., C(m,m)]`.
pub fn binomial_row(m: usize) -> Result<Vec<u64>> {
    check_order(m)?;
    let mut row = vec![1u64; m + 1];
    for i in 1..m {
        for k in (1..=i).rev() {
            row[k] += row[k - 1];
        }
    }
    Ok(row)
}

pub(crate) fn check_order(mu: usize) -> Result<()> {
    if mu > MAX_ORDER {
        Err(Error::OrderTooLarge { order: mu, max: MAX_ORDER })
    } else {
        Ok(())
    }
}

/// Solves `r * den = num` order by order with the Leibniz rule:
/// `r^(m) = (num^(m) - sum_{k=1}^{m} C(m,k) r^(m-k) den^(k)) / den^(0)`.
///
/// The caller guarantees `den[0] != 0`.
pub(crate) fn leibniz_quotient<S: Scalar>(num: &[S], den: &[S]) -> Vec<S> {
    let mu = num.len() - 1;
    let mut r = Vec::with_capacity(mu + 1);
    r.push(num[0] / den[0]);
    for m in 1..=mu {
        let row = binomial_row(m).expect("order checked by caller");
        let mut acc = num[m];
        for k in 1..=m {
            acc = acc - S::from_f64(row[k] as f64) * r[m - k] * den[k];
        }
        r.push(acc / den[0]);
    }
    r
}
