use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use rustc_hash::FxHashMap;

use super::series::{check_dims, FreeSeries};
use super::word::Word;
use crate::coefficients::Scalar;
use crate::error::{Error, Result};

/// Truncated element of `A ⊗ A`; the bound `degree` applies to the total
/// length `|w1| + |w2|` of each stored pair.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorSeries<S> {
    n: usize,
    degree: usize,
    terms: FxHashMap<(Word, Word), S>,
}

impl<S: Scalar> TensorSeries<S> {
    pub fn zero(n: usize, degree: usize) -> Self {
        check_dims(n, degree);
        TensorSeries { n, degree, terms: FxHashMap::default() }
    }

    pub fn one(n: usize, degree: usize) -> Self {
        let mut t = Self::zero(n, degree);
        t.add_term(Word::empty(), Word::empty(), S::one());
        t
    }

    pub fn from_terms(n: usize, degree: usize, terms: impl IntoIterator<Item = ((Word, Word), S)>) -> Self {
        let mut t = Self::zero(n, degree);
        for ((a, b), c) in terms {
            t.add_term(a, b, c);
        }
        t
    }

    /// `a ⊗ b`.
    pub fn tensor(a: &FreeSeries<S>, b: &FreeSeries<S>) -> Self {
        let mut t = Self::zero(a.n(), a.degree());
        for (wa, ca) in a.terms() {
            for (wb, cb) in b.terms() {
                t.add_term(*wa, *wb, ca.clone() * cb.clone());
            }
        }
        t
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

    pub fn coeff(&self, a: &Word, b: &Word) -> S {
        self.terms.get(&(*a, *b)).cloned().unwrap_or_else(S::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Word, Word), &S)> {
        self.terms.iter()
    }

    pub fn sorted_terms(&self) -> Vec<((Word, Word), S)> {
        let mut v: Vec<_> = self.terms.iter().map(|(k, c)| (*k, c.clone())).collect();
        v.sort_by(|a, b| {
            let ta = a.0 .0.len() + a.0 .1.len();
            let tb = b.0 .0.len() + b.0 .1.len();
            ta.cmp(&tb).then(a.0.cmp(&b.0))
        });
        v
    }

    pub fn add_term(&mut self, a: Word, b: Word, c: S) {
        if a.len() + b.len() > self.degree {
            return;
        }
        let key = (a, b);
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += c;
                if v.is_negligible() {
                    self.terms.remove(&key);
                }
            }
            None => {
                if !c.is_negligible() {
                    self.terms.insert(key, c);
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
        for ((a, b), v) in &self.terms {
            out.add_term(*a, *b, v.clone() * c.clone());
        }
        out
    }

    /// Componentwise product `(a⊗b)(c⊗d) = ac ⊗ bd`.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut out = Self::zero(self.n, self.degree);
        for ((a1, b1), c1) in &self.terms {
            let used = a1.len() + b1.len();
            for ((a2, b2), c2) in &other.terms {
                if used + a2.len() + b2.len() <= self.degree {
                    out.add_term(a1.concat(*a2), b1.concat(*b2), c1.clone() * c2.clone());
                }
            }
        }
        Ok(out)
    }

    /// `P21`: swap the tensor legs.
    pub fn swap(&self) -> Self {
        Self::from_terms(self.n, self.degree, self.terms.iter().map(|((a, b), c)| ((*b, *a), c.clone())))
    }

    /// `(ε ⊗ id)`.
    pub fn counit_left(&self) -> FreeSeries<S> {
        FreeSeries::from_terms(
            self.n,
            self.degree,
            self.terms.iter().filter(|((a, _), _)| a.is_empty()).map(|((_, b), c)| (*b, c.clone())),
        )
    }

    /// `(id ⊗ ε)`.
    pub fn counit_right(&self) -> FreeSeries<S> {
        FreeSeries::from_terms(
            self.n,
            self.degree,
            self.terms.iter().filter(|((_, b), _)| b.is_empty()).map(|((a, _), c)| (*a, c.clone())),
        )
    }

    /// `t' t''`.
    pub fn multiply_legs(&self) -> FreeSeries<S> {
        FreeSeries::from_terms(self.n, self.degree, self.terms.iter().map(|((a, b), c)| (a.concat(*b), c.clone())))
    }

    /// Apply a linear map on words to each leg.
    pub fn map_legs(
        &self,
        left: impl Fn(Word) -> FreeSeries<S>,
        right: impl Fn(Word) -> FreeSeries<S>,
    ) -> Self {
        let mut out = Self::zero(self.n, self.degree);
        for ((a, b), c) in &self.terms {
            let la = left(*a);
            let rb = right(*b);
            for (wa, ca) in la.terms() {
                for (wb, cb) in rb.terms() {
                    out.add_term(*wa, *wb, c.clone() * ca.clone() * cb.clone());
                }
            }
        }
        out
    }

    pub fn norm_inf(&self) -> f64 {
        self.terms.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut m: f64 = 0.0;
        for ((a, b), c) in &self.terms {
            m = m.max((c.clone() - other.coeff(a, b)).magnitude());
        }
        for (k, c) in &other.terms {
            if !self.terms.contains_key(k) {
                m = m.max(c.magnitude());
            }
        }
        m
    }

    pub fn with_degree(&self, degree: usize) -> Self {
        Self::from_terms(self.n, degree, self.terms.iter().map(|(k, c)| (*k, c.clone())))
    }

    pub fn to_complex(&self) -> TensorSeries<Complex64> {
        TensorSeries::from_terms(self.n, self.degree, self.terms.iter().map(|(k, c)| (*k, c.to_complex())))
    }
}

impl<S: Scalar> Add<&TensorSeries<S>> for &TensorSeries<S> {
    type Output = TensorSeries<S>;
    fn add(self, rhs: &TensorSeries<S>) -> TensorSeries<S> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<S: Scalar> Sub<&TensorSeries<S>> for &TensorSeries<S> {
    type Output = TensorSeries<S>;
    fn sub(self, rhs: &TensorSeries<S>) -> TensorSeries<S> {
        let mut out = self.clone();
        out += &rhs.scale(&-S::one());
        out
    }
}

impl<S: Scalar> AddAssign<&TensorSeries<S>> for TensorSeries<S> {
    fn add_assign(&mut self, rhs: &TensorSeries<S>) {
        self.same_shape(rhs).unwrap_or_else(|e| panic!("{e}"));
        for ((a, b), c) in &rhs.terms {
            self.add_term(*a, *b, c.clone());
        }
    }
}

impl<S: Scalar> Mul<&TensorSeries<S>> for &TensorSeries<S> {
    type Output = TensorSeries<S>;
    fn mul(self, rhs: &TensorSeries<S>) -> TensorSeries<S> {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<S: Scalar> Neg for &TensorSeries<S> {
    type Output = TensorSeries<S>;
    fn neg(self) -> TensorSeries<S> {
        self.scale(&-S::one())
    }
}
