//! Numerical laboratory for explicit formulas over the zeros of the Riemann
//! zeta function: smoothed Landau–Gonek identities, Fejér-kernel pair
//! correlation sums, and the zero statistics built on them.

// `!(x > 0.0)` is used deliberately so that NaN fails every domain check
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// reference constants keep every digit of their source evaluation
#![allow(clippy::excessive_precision)]

pub mod arithmetic;
pub mod error;
pub mod formulas;
pub mod kernels;
pub mod special;
pub mod statistics;
pub mod sum;
pub mod zeta;

pub use error::{Error, Result};
pub use num_complex::Complex64;
