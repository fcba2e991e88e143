//! Rational approximants in barycentric and Thiele continued-fraction form,
//! with stable evaluation of derivatives of any order.
//!
//! The barycentric evaluator shifts the numerator and denominator by the
//! distance to the nearest node, which removes the cancellation that makes the
//! classical derivative formula blow up near nodes. The continued-fraction
//! evaluator runs a single-division `p/q` recurrence and its forward-mode
//! derivatives. Both share the Leibniz recovery in [`deriv`].
//!
//! ```
//! use ratderiv::barycentric::BaryModel;
//!
//! // r(z) = 1 / (z + 2) in barycentric form.
//! let model = BaryModel::new(vec![0.0, 1.0], vec![0.5, 1.0 / 3.0], vec![2.0, -3.0]).unwrap();
//! let d = model.derivatives(0.0, 2).unwrap();
//! assert!((d.values[1] + 0.25).abs() < 1e-15);
//! ```

pub mod barycentric;
pub mod deriv;
pub mod domain;
mod error;
pub mod fit;
pub mod harness;
pub mod io;
pub mod scalar;
pub mod testlab;
pub mod thiele;

pub use deriv::{binomial_row, DerivStack, MAX_ORDER};
pub use error::{Error, Result};
pub use scalar::{Complex64, DDComplex, DDReal, MachineScalar, Scalar, ScalarKind};
