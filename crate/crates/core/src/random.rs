//! Seeded random inputs for property checks and the CLI's randomized suites.

use num_bigint::BigInt;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coefficients::Rational;
use crate::free_hopf::{FreeSeries, TensorSeries, Word};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_word<R: Rng>(rng: &mut R, n: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    let mut w = Word::empty();
    for _ in 0..len {
        w = w.push(rng.gen_range(0..n));
    }
    w
}

fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    let num = rng.gen_range(-5i64..=5);
    let den = rng.gen_range(1i64..=3);
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Sparse rational series with up to `terms` monomials of length `<= degree`.
pub fn random_rational_series<R: Rng>(rng: &mut R, n: usize, degree: usize, terms: usize) -> FreeSeries<Rational> {
    let mut s = FreeSeries::zero(n, degree);
    for _ in 0..terms {
        s.add_term(random_word(rng, n, degree), small_rational(rng));
    }
    s
}

pub fn random_rational_tensor<R: Rng>(rng: &mut R, n: usize, degree: usize, terms: usize) -> TensorSeries<Rational> {
    let mut t = TensorSeries::zero(n, degree);
    for _ in 0..terms {
        let a = random_word(rng, n, degree);
        let b = random_word(rng, n, degree - a.len());
        t.add_term(a, b, small_rational(rng));
    }
    t
}

/// Random series with `ε = 0` and coefficients of size `<= scale`.
pub fn random_complex_series<R: Rng>(rng: &mut R, n: usize, degree: usize, terms: usize, scale: f64) -> FreeSeries<Complex64> {
    let mut s = FreeSeries::zero(n, degree);
    for _ in 0..terms {
        let w = random_word(rng, n, degree);
        if w.is_empty() {
            continue;
        }
        let c = Complex64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale));
        s.add_term(w, c);
    }
    s
}

/// `exp` of a random primitive element (a combination of generators and commutators).
pub fn random_grouplike<R: Rng>(rng: &mut R, n: usize, degree: usize, scale: f64) -> FreeSeries<Complex64> {
    let mut lie = FreeSeries::<Complex64>::zero(n, degree);
    for i in 0..n {
        let c = Complex64::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale));
        lie.add_term(Word::letter(i), c);
    }
    for i in 0..n {
        for j in 0..n {
            if i < j {
                let c = Complex64::new(rng.gen_range(-scale..scale), 0.0);
                let xi = FreeSeries::generator(n, degree, i);
                let xj = FreeSeries::generator(n, degree, j);
                let br = &(&xi * &xj) - &(&xj * &xi);
                lie += &br.scale(&c);
            }
        }
    }
    lie.exp().expect("primitive element has zero constant term")
}
