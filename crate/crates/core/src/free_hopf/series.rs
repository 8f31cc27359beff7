use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;
use rustc_hash::FxHashMap;

use super::cyclic::CyclicSeries;
use super::tensor::TensorSeries;
use super::word::{Word, MAX_GENERATORS, MAX_WORD_LEN};
use crate::coefficients::Scalar;
use crate::error::{Error, Result};

/// Truncated series in `n` noncommuting variables. Words longer than
/// `degree` are dropped by every operation.
#[derive(Clone, Debug, PartialEq)]
pub struct FreeSeries<S> {
    n: usize,
    degree: usize,
    terms: FxHashMap<Word, S>,
}

pub(crate) fn check_dims(n: usize, degree: usize) {
    assert!(n >= 1 && n <= MAX_GENERATORS, "number of generators {n} not in 1..={MAX_GENERATORS}");
    assert!(degree <= MAX_WORD_LEN, "truncation degree {degree} exceeds {MAX_WORD_LEN}");
}

pub fn validate_dims(n: usize, degree: usize) -> Result<()> {
    if n == 0 || n > MAX_GENERATORS || degree > MAX_WORD_LEN {
        return Err(Error::OutOfRange(format!(
            "n = {n}, D = {degree}: supported range is 1 <= n <= {MAX_GENERATORS}, D <= {MAX_WORD_LEN}"
        )));
    }
    Ok(())
}

impl<S: Scalar> FreeSeries<S> {
    pub fn zero(n: usize, degree: usize) -> Self {
        check_dims(n, degree);
        FreeSeries { n, degree, terms: FxHashMap::default() }
    }

    pub fn one(n: usize, degree: usize) -> Self {
        Self::monomial(n, degree, Word::empty(), S::one())
    }

    pub fn constant(n: usize, degree: usize, c: S) -> Self {
        Self::monomial(n, degree, Word::empty(), c)
    }

    /// The generator `x_{i+1}` (0-based index `i`).
    pub fn generator(n: usize, degree: usize, i: usize) -> Self {
        assert!(i < n, "generator {i} out of range for n = {n}");
        Self::monomial(n, degree, Word::letter(i), S::one())
    }

    pub fn monomial(n: usize, degree: usize, w: Word, c: S) -> Self {
        let mut s = Self::zero(n, degree);
        s.add_term(w, c);
        s
    }

    pub fn from_terms(n: usize, degree: usize, terms: impl IntoIterator<Item = (Word, S)>) -> Self {
        let mut s = Self::zero(n, degree);
        for (w, c) in terms {
            s.add_term(w, c);
        }
        s
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> S {
        self.terms.get(w).cloned().unwrap_or_else(S::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &S)> {
        self.terms.iter()
    }

    /// Terms ordered by (length, lex).
    pub fn sorted_terms(&self) -> Vec<(Word, S)> {
        let mut v: Vec<(Word, S)> = self.terms.iter().map(|(w, c)| (*w, c.clone())).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    /// Accumulate `c` on `w`; silently ignores words longer than the truncation degree.
    pub fn add_term(&mut self, w: Word, c: S) {
        if w.len() > self.degree {
            return;
        }
        debug_assert!(w.max_letter().map_or(true, |l| l < self.n));
        match self.terms.get_mut(&w) {
            Some(v) => {
                *v += c;
                if v.is_negligible() {
                    self.terms.remove(&w);
                }
            }
            None => {
                if !c.is_negligible() {
                    self.terms.insert(w, c);
                }
            }
        }
    }

    pub fn same_shape(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.degree != other.degree {
            return Err(Error::Shape(format!(
                "(n, D) = ({}, {}) vs ({}, {})",
                self.n, self.degree, other.n, other.degree
            )));
        }
        Ok(())
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.n, self.degree);
        for (w, v) in &self.terms {
            out.add_term(*w, v.clone() * c.clone());
        }
        out
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(*w, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(*w, -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let d = self.degree;
        let mut out = Self::zero(self.n, d);
        if self.is_zero() || other.is_zero() {
            return out;
        }
        // bucket the right factor by length to skip pairs that truncate away
        let mut by_len: Vec<Vec<(Word, &S)>> = vec![Vec::new(); d + 1];
        for (w, c) in &other.terms {
            by_len[w.len()].push((*w, c));
        }
        for (w1, c1) in &self.terms {
            for bucket in by_len.iter().take(d + 1 - w1.len()) {
                for (w2, c2) in bucket {
                    out.add_term(w1.concat(*w2), c1.clone() * (*c2).clone());
                }
            }
        }
        out
    }

    /// Copy re-truncated at a different degree.
    pub fn with_degree(&self, degree: usize) -> Self {
        Self::from_terms(self.n, degree, self.terms.iter().map(|(w, c)| (*w, c.clone())))
    }

    /// Copy embedded in a larger alphabet.
    pub fn with_generators(&self, n: usize) -> Self {
        assert!(n >= self.n);
        Self::from_terms(n, self.degree, self.terms.iter().map(|(w, c)| (*w, c.clone())))
    }

    pub fn homogeneous_part(&self, k: usize) -> Self {
        Self::from_terms(
            self.n,
            self.degree,
            self.terms.iter().filter(|(w, _)| w.len() == k).map(|(w, c)| (*w, c.clone())),
        )
    }

    /// Lowest degree of a stored word, `None` for zero.
    pub fn valuation(&self) -> Option<usize> {
        self.terms.keys().map(|w| w.len()).min()
    }

    pub fn map_words(&self, f: impl Fn(Word) -> Option<(Word, S)>) -> Self
    where
        S: Mul<Output = S>,
    {
        let mut out = Self::zero(self.n, self.degree);
        for (w, c) in &self.terms {
            if let Some((w2, k)) = f(*w) {
                out.add_term(w2, c.clone() * k);
            }
        }
        out
    }

    pub fn counit(&self) -> S {
        self.coeff(&Word::empty())
    }

    /// `a - ε(a)`.
    pub fn augmentation_part(&self) -> Self {
        let mut out = self.clone();
        out.terms.remove(&Word::empty());
        out
    }

    pub fn antipode(&self) -> Self {
        self.map_words(|w| {
            let sign = if w.len() % 2 == 0 { S::one() } else { -S::one() };
            Some((w.reverse(), sign))
        })
    }

    pub fn coproduct(&self) -> TensorSeries<S> {
        let mut out = TensorSeries::zero(self.n, self.degree);
        for (w, c) in &self.terms {
            let k = w.len();
            for mask in 0u32..(1u32 << k) {
                let mut left = Word::empty();
                let mut right = Word::empty();
                for i in 0..k {
                    if mask >> (k - 1 - i) & 1 == 1 {
                        left = left.push(w.get(i));
                    } else {
                        right = right.push(w.get(i));
                    }
                }
                out.add_term(left, right, c.clone());
            }
        }
        out
    }

    /// Truncated exponential; requires `ε(a) = 0`.
    pub fn exp(&self) -> Result<Self> {
        if !self.counit().is_negligible() {
            return Err(Error::Domain("exp needs a series with zero constant term".into()));
        }
        let mut out = Self::one(self.n, self.degree);
        let mut power = Self::one(self.n, self.degree);
        for k in 1..=self.degree {
            power = power.mul_unchecked(self).scale(&S::from_ratio(1, k as i64));
            if power.is_zero() {
                break;
            }
            out = &out + &power;
        }
        Ok(out)
    }

    /// Truncated logarithm; requires `ε(g) = 1`.
    pub fn log(&self) -> Result<Self> {
        let c = self.counit();
        if (c - S::one()).magnitude() > 1e-12 {
            return Err(Error::Domain("log needs a series with constant term 1".into()));
        }
        let y = self.augmentation_part();
        let mut out = Self::zero(self.n, self.degree);
        let mut power = Self::one(self.n, self.degree);
        for k in 1..=self.degree {
            power = power.mul_unchecked(&y);
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            out = &out + &power.scale(&S::from_ratio(sign, k as i64));
        }
        Ok(out)
    }

    /// Multiplicative inverse; requires an invertible constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.counit();
        let inv0 = c0
            .inv()
            .ok_or_else(|| Error::Domain("series with zero constant term is not invertible".into()))?;
        // a = c0 (1 + y), a^{-1} = c0^{-1} sum (-y)^k
        let minus_y = self.augmentation_part().scale(&(-inv0.clone()));
        let mut out = Self::one(self.n, self.degree);
        let mut power = Self::one(self.n, self.degree);
        for _ in 1..=self.degree {
            power = power.mul_unchecked(&minus_y);
            if power.is_zero() {
                break;
            }
            out = &out + &power;
        }
        Ok(out.scale(&inv0))
    }

    pub fn is_grouplike(&self, tol: f64) -> bool {
        if (self.counit() - S::one()).magnitude() > tol {
            return false;
        }
        let diff = &self.coproduct() - &TensorSeries::tensor(self, self);
        diff.norm_inf() <= tol
    }

    pub fn cyclic_project(&self) -> CyclicSeries<S> {
        let mut out = CyclicSeries::zero(self.n, self.degree);
        for (w, c) in &self.terms {
            out.add_term(*w, c.clone());
        }
        out
    }

    pub fn norm_inf(&self) -> f64 {
        self.terms.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    /// `max |a_w - b_w|` over all words; shapes may differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut m: f64 = 0.0;
        for (w, c) in &self.terms {
            m = m.max((c.clone() - other.coeff(w)).magnitude());
        }
        for (w, c) in &other.terms {
            if !self.terms.contains_key(w) {
                m = m.max(c.magnitude());
            }
        }
        m
    }

    pub fn to_complex(&self) -> FreeSeries<Complex64> {
        FreeSeries::from_terms(self.n, self.degree, self.terms.iter().map(|(w, c)| (*w, c.to_complex())))
    }

    /// Substitute `x_i -> images[i]` into the series (an algebra map).
    pub fn substitute(&self, images: &[FreeSeries<S>]) -> Result<FreeSeries<S>> {
        if images.len() != self.n {
            return Err(Error::Shape(format!("{} images for {} generators", images.len(), self.n)));
        }
        let target = &images[0];
        for im in images {
            target.same_shape(im)?;
        }
        let mut out = FreeSeries::zero(target.n, target.degree);
        for (w, c) in &self.terms {
            let mut term = FreeSeries::constant(target.n, target.degree, c.clone());
            for l in w.letters() {
                term = term.mul_unchecked(&images[l]);
                if term.is_zero() {
                    break;
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident, $checked:ident) => {
        impl<S: Scalar> $tr<&FreeSeries<S>> for &FreeSeries<S> {
            type Output = FreeSeries<S>;
            /// Panics on mismatched `(n, D)`; use the `checked_*` method to get an error instead.
            fn $f(self, rhs: &FreeSeries<S>) -> FreeSeries<S> {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl<S: Scalar> $tr for FreeSeries<S> {
            type Output = FreeSeries<S>;
            fn $f(self, rhs: FreeSeries<S>) -> FreeSeries<S> {
                (&self).$f(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl<S: Scalar> AddAssign<&FreeSeries<S>> for FreeSeries<S> {
    fn add_assign(&mut self, rhs: &FreeSeries<S>) {
        self.same_shape(rhs).unwrap_or_else(|e| panic!("{e}"));
        for (w, c) in &rhs.terms {
            self.add_term(*w, c.clone());
        }
    }
}

impl<S: Scalar> SubAssign<&FreeSeries<S>> for FreeSeries<S> {
    fn sub_assign(&mut self, rhs: &FreeSeries<S>) {
        self.same_shape(rhs).unwrap_or_else(|e| panic!("{e}"));
        for (w, c) in &rhs.terms {
            self.add_term(*w, -c.clone());
        }
    }
}

impl<S: Scalar> Neg for &FreeSeries<S> {
    type Output = FreeSeries<S>;
    fn neg(self) -> FreeSeries<S> {
        self.scale(&-S::one())
    }
}

impl<S: Scalar> Neg for FreeSeries<S> {
    type Output = FreeSeries<S>;
    fn neg(self) -> FreeSeries<S> {
        (&self).neg()
    }
}
