//! Fox calculus, double brackets and KKS coactions on truncated free
//! algebras, together with regularized KZ holonomies that realize them
//! numerically.

pub mod brackets;
pub mod coefficients;
pub mod error;
pub mod fox;
pub mod free_hopf;
pub mod holonomy;
pub mod json;
pub mod paths;
pub mod random;
pub mod rep_space;
pub mod suites;
pub mod trivext;

pub use coefficients::{Rational, Scalar};
pub use error::{Error, Result};
pub use free_hopf::{CycTensor, CycWedge, CyclicSeries, FreeSeries, TensorSeries, Word};
