//! Coefficient rings, zeta values, Bernoulli numbers and the two one-variable
//! generating series `r_zeta` and `r_am`.
//!
//! Two backends implement [`Scalar`]: exact [`Rational`] arithmetic for the
//! algebraic identities, and IEEE double [`Complex64`] for anything that
//! involves transcendental constants.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::free_hopf::{FreeSeries, Word};

pub type Rational = num_rational::BigRational;

/// Below this magnitude a floating coefficient is dropped from sparse storage.
pub const FLOAT_DROP: f64 = 1e-300;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
{
    const IS_EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_rational(q: &Rational) -> Self;
    /// Fails on the exact backend.
    fn from_complex(c: Complex64) -> Result<Self>;
    fn to_complex(&self) -> Complex64;
    /// Canonical-form test: exact zero, or a float below [`FLOAT_DROP`].
    fn is_negligible(&self) -> bool;
    fn magnitude(&self) -> f64;
    fn inv(&self) -> Option<Self>;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&Rational::new(BigInt::from(num), BigInt::from(den)))
    }
}

impl Scalar for Rational {
    const IS_EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn from_complex(_: Complex64) -> Result<Self> {
        Err(Error::UnsupportedConstant("floating complex constants"))
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }
    fn is_negligible(&self) -> bool {
        Zero::is_zero(self)
    }
    fn magnitude(&self) -> f64 {
        rational_to_f64(&self.abs())
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl Scalar for Complex64 {
    const IS_EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn from_rational(q: &Rational) -> Self {
        Complex64::new(rational_to_f64(q), 0.0)
    }
    fn from_complex(c: Complex64) -> Result<Self> {
        Ok(c)
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
    fn is_negligible(&self) -> bool {
        self.norm() < FLOAT_DROP
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn inv(&self) -> Option<Self> {
        if self.norm() == 0.0 {
            None
        } else {
            Some(1.0 / *self)
        }
    }
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // huge numerator/denominator: scale down by a common power of two
            let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
            let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

pub fn two_pi_i() -> Complex64 {
    Complex64::new(0.0, 2.0 * std::f64::consts::PI)
}

/// Exact Bernoulli number `B_k` for even `k >= 2` (convention `B_1 = -1/2`).
pub fn bernoulli(k: usize) -> Result<Rational> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::Domain(format!(
            "bernoulli({k}): only even indices >= 2 are supported"
        )));
    }
    Ok(bernoulli_table(k).swap_remove(k))
}

/// `B_0..=B_max` from the recursion `sum_{j<=n} C(n+1, j) B_j = 0`.
fn bernoulli_table(max: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(max + 1);
    b.push(<Rational as One>::one());
    for n in 1..=max {
        let mut acc = <Rational as Zero>::zero();
        let mut binom = BigInt::one(); // C(n+1, j), starting at j = 0
        for (j, bj) in b.iter().enumerate() {
            acc += bj * Rational::from_integer(binom.clone());
            binom = binom * BigInt::from(n + 1 - j) / BigInt::from(j + 1);
        }
        // binom is now C(n+1, n)
        b.push(-acc / Rational::from_integer(binom));
    }
    b
}

/// Riemann zeta at an integer `m >= 2`, by Euler–Maclaurin summation.
pub fn zeta(m: u32) -> Result<f64> {
    if m < 2 {
        return Err(Error::Domain(format!("zeta({m}): argument must be >= 2")));
    }
    const CUT: u32 = 12;
    const TERMS: usize = 10;
    let s = m as f64;
    let n = CUT as f64;
    let mut sum: f64 = (1..CUT).rev().map(|k| (k as f64).powf(-s)).sum();
    sum += n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    let bern = bernoulli_table(2 * TERMS);
    // rising factorial s(s+1)...(s+2j-2) / (2j)!
    let mut rising = s;
    let mut fact = 2.0;
    for j in 1..=TERMS {
        let term = rational_to_f64(&bern[2 * j]) / fact * rising * n.powf(-s - (2 * j) as f64 + 1.0);
        sum += term;
        let a = (2 * j - 1) as f64;
        rising *= (s + a) * (s + a + 1.0);
        fact *= ((2 * j + 1) * (2 * j + 2)) as f64;
    }
    Ok(sum)
}

#[derive(Debug, Clone)]
pub struct ConstantTable {
    /// `zeta_values[m]` for `2 <= m <= max`; entries below 2 are unused.
    pub zeta_values: Vec<f64>,
    /// `bernoulli[k]` for `0 <= k <= max`.
    pub bernoulli: Vec<Rational>,
    pub two_pi_i: Complex64,
}

impl ConstantTable {
    pub fn new(max: usize) -> Self {
        let max = max.max(2);
        let zeta_values = (0..=max)
            .map(|m| if m >= 2 { zeta(m as u32).unwrap() } else { f64::NAN })
            .collect();
        ConstantTable { zeta_values, bernoulli: bernoulli_table(max), two_pi_i: two_pi_i() }
    }
}

/// `sign * x_gen` substituted into
/// `r_zeta(x) = -sum_{m>=2} zeta(m) x^{m-1} / (2 pi i)^m`, truncated at `degree`.
pub fn r_zeta_scaled<S: Scalar>(n: usize, generator: usize, sign: i32, degree: usize) -> Result<FreeSeries<S>> {
    let mut out = FreeSeries::zero(n, degree);
    check_generator(n, generator)?;
    if S::IS_EXACT {
        return Err(Error::UnsupportedConstant("zeta values and pi"));
    }
    let tpi = two_pi_i();
    for m in 2..=degree + 1 {
        let power = (m - 1) as i32;
        let c = -zeta(m as u32)? / tpi.powi(m as i32) * (sign as f64).powi(power);
        out.add_term(Word::repeat(generator, m - 1), S::from_complex(c)?);
    }
    Ok(out)
}

pub fn r_zeta_series<S: Scalar>(n: usize, generator: usize, degree: usize) -> Result<FreeSeries<S>> {
    r_zeta_scaled(n, generator, 1, degree)
}

/// `r_am(sign * x_gen) = -1/2 + sum_k B_{2k}/(2k)! (sign x)^{2k-1}`, exact in both backends.
pub fn r_am_scaled<S: Scalar>(n: usize, generator: usize, sign: i32, degree: usize) -> Result<FreeSeries<S>> {
    check_generator(n, generator)?;
    let mut out = FreeSeries::zero(n, degree);
    out.add_term(Word::empty(), S::from_ratio(-1, 2));
    let max_k = (degree + 1) / 2;
    if max_k == 0 {
        return Ok(out);
    }
    let bern = bernoulli_table(2 * max_k);
    let mut fact = BigInt::one();
    for k in 1..=max_k {
        fact *= BigInt::from((2 * k - 1) * (2 * k));
        let mut c = bern[2 * k].clone() / Rational::from_integer(fact.clone());
        if sign < 0 {
            c = -c;
        }
        out.add_term(Word::repeat(generator, 2 * k - 1), S::from_rational(&c));
    }
    Ok(out)
}

pub fn r_am_series<S: Scalar>(n: usize, generator: usize, degree: usize) -> Result<FreeSeries<S>> {
    r_am_scaled(n, generator, 1, degree)
}

fn check_generator(n: usize, generator: usize) -> Result<()> {
    if generator >= n {
        return Err(Error::Domain(format!("generator index {generator} out of range for n = {n}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    /// Brute-force Dirichlet sum with an integral tail correction.
    fn zeta_oracle(m: u32) -> f64 {
        let n = 200_000u32;
        let s = m as f64;
        let head: f64 = (1..n).rev().map(|k| (k as f64).powf(-s)).sum();
        let nf = n as f64;
        head + nf.powf(1.0 - s) / (s - 1.0) + 0.5 * nf.powf(-s) + s / 12.0 * nf.powf(-s - 1.0)
    }

    #[test]
    fn zeta_matches_oracle_and_closed_forms() {
        for m in 2..=10 {
            let z = zeta(m).unwrap();
            assert!(((z - zeta_oracle(m)) / z).abs() < 1e-14, "m = {m}");
        }
        assert!((zeta(2).unwrap() - PI * PI / 6.0).abs() < 1e-15);
        assert!((zeta(4).unwrap() - PI.powi(4) / 90.0).abs() < 1e-14);
        assert!((zeta(3).unwrap() - 1.202_056_903_159_594_3).abs() < 1e-15);
        assert!(zeta(1).is_err());
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(2).unwrap(), q(1, 6));
        assert_eq!(bernoulli(4).unwrap(), q(-1, 30));
        assert_eq!(bernoulli(12).unwrap(), q(-691, 2730));
        assert!(bernoulli(3).is_err());
        assert!(bernoulli(0).is_err());
    }

    /// Akiyama–Tanigawa as an independent route to B_n (gives B_1 = +1/2, even ones agree).
    #[test]
    fn bernoulli_agrees_with_akiyama_tanigawa() {
        let max = 16;
        let mut a: Vec<Rational> = Vec::new();
        let mut at = Vec::new();
        for m in 0..=max {
            a.push(q(1, m as i64 + 1));
            for j in (1..=m).rev() {
                a[j - 1] = Rational::from_integer(BigInt::from(j)) * (&a[j - 1] - &a[j]);
            }
            at.push(a[0].clone());
        }
        for k in (2..=max).step_by(2) {
            assert_eq!(bernoulli(k).unwrap(), at[k], "k = {k}");
        }
    }

    #[test]
    fn euler_formula_links_tables() {
        for k in 1..=6usize {
            let b = rational_to_f64(&bernoulli(2 * k).unwrap()).abs();
            let fact: f64 = (1..=2 * k).map(|i| i as f64).product();
            let lhs = zeta(2 * k as u32).unwrap() * 2.0 * fact / (2.0 * PI).powi(2 * k as i32);
            assert!((lhs - b).abs() < 1e-12 * b.max(1.0), "k = {k}");
        }
    }

    #[test]
    fn r_zeta_examples() {
        let r1 = r_zeta_series::<Complex64>(1, 0, 1).unwrap();
        let c = r1.coeff(&Word::repeat(0, 1));
        assert!((c - Complex64::new(1.0 / 24.0, 0.0)).norm() < 1e-15);
        assert!(r_zeta_series::<Complex64>(1, 0, 0).unwrap().is_zero());
        let r2 = r_zeta_series::<Complex64>(1, 0, 2).unwrap();
        let c2 = r2.coeff(&Word::repeat(0, 2));
        assert!(c2.re.abs() < 1e-18 && c2.im.abs() > 1e-4);
        assert!(matches!(r_zeta_series::<Rational>(1, 0, 2), Err(Error::UnsupportedConstant(_))));
    }

    #[test]
    fn r_am_examples() {
        let r0 = r_am_series::<Rational>(1, 0, 0).unwrap();
        assert_eq!(r0.coeff(&Word::empty()), q(-1, 2));
        assert_eq!(r0.len(), 1);
        let r1 = r_am_series::<Rational>(1, 0, 1).unwrap();
        assert_eq!(r1.coeff(&Word::repeat(0, 1)), q(1, 12));
        let r3 = r_am_series::<Rational>(1, 0, 3).unwrap();
        assert_eq!(r3.coeff(&Word::repeat(0, 3)), q(-1, 720));
    }

    #[test]
    fn r_am_is_antisymmetrized_r_zeta() {
        for d in 0..=12 {
            let plus = r_zeta_scaled::<Complex64>(1, 0, 1, d).unwrap();
            let minus = r_zeta_scaled::<Complex64>(1, 0, -1, d).unwrap();
            let half = FreeSeries::constant(1, d, Complex64::new(0.5, 0.0));
            let lhs = &(&plus - &minus) - &half;
            let am = r_am_series::<Complex64>(1, 0, d).unwrap();
            assert!(lhs.max_abs_diff(&am) < 1e-12, "D = {d}");
        }
    }
}
