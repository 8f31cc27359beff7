//! The truncated free associative algebra `K<<x_1..x_n>>` with its Hopf
//! structure, plus the sparse containers for `A⊗A`, `|A|`, `|A|⊗A` and `|A|∧|A|`.

mod cyclic;
mod series;
mod tensor;
mod word;

pub use cyclic::{CycTensor, CycWedge, CyclicSeries};
pub use series::{validate_dims, FreeSeries};
pub use tensor::TensorSeries;
pub use word::{words_of_length, words_up_to, Word, MAX_GENERATORS, MAX_WORD_LEN};

use crate::coefficients::Scalar;

/// `x_{i+1}` as a series, for readable call sites.
pub fn x<S: Scalar>(n: usize, degree: usize, i: usize) -> FreeSeries<S> {
    FreeSeries::generator(n, degree, i)
}

/// Multiply a chain of series left to right.
pub fn product<S: Scalar>(factors: &[&FreeSeries<S>]) -> FreeSeries<S> {
    let first = factors.first().expect("empty product");
    factors[1..].iter().fold((*first).clone(), |acc, f| &acc * f)
}
