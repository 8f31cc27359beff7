use std::ops::{Add, Neg, Sub};

use rustc_hash::FxHashMap;

use super::series::{check_dims, FreeSeries};
use super::word::Word;
use crate::coefficients::Scalar;

fn accumulate<K: std::hash::Hash + Eq + Copy, S: Scalar>(map: &mut FxHashMap<K, S>, key: K, c: S) {
    match map.get_mut(&key) {
        Some(v) => {
            *v += c;
            if v.is_negligible() {
                map.remove(&key);
            }
        }
        None => {
            if !c.is_negligible() {
                map.insert(key, c);
            }
        }
    }
}

fn max_diff<K: std::hash::Hash + Eq, S: Scalar>(a: &FxHashMap<K, S>, b: &FxHashMap<K, S>) -> f64 {
    let mut m: f64 = 0.0;
    for (k, c) in a {
        let other = b.get(k).cloned().unwrap_or_else(S::zero);
        m = m.max((c.clone() - other).magnitude());
    }
    for (k, c) in b {
        if !a.contains_key(k) {
            m = m.max(c.magnitude());
        }
    }
    m
}

/// Element of `|A| = A / [A, A]`, keyed by rotation-minimal words.
#[derive(Clone, Debug, PartialEq)]
pub struct CyclicSeries<S> {
    n: usize,
    degree: usize,
    terms: FxHashMap<Word, S>,
}

impl<S: Scalar> CyclicSeries<S> {
    pub fn zero(n: usize, degree: usize) -> Self {
        check_dims(n, degree);
        CyclicSeries { n, degree, terms: FxHashMap::default() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Adds `c·|w|`; `w` need not be rotation-minimal.
    pub fn add_term(&mut self, w: Word, c: S) {
        if w.len() <= self.degree {
            accumulate(&mut self.terms, w.min_rotation(), c);
        }
    }

    pub fn coeff(&self, w: &Word) -> S {
        self.terms.get(&w.min_rotation()).cloned().unwrap_or_else(S::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &S)> {
        self.terms.iter()
    }

    pub fn sorted_terms(&self) -> Vec<(Word, S)> {
        let mut v: Vec<_> = self.terms.iter().map(|(w, c)| (*w, c.clone())).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.n, self.degree);
        for (w, v) in &self.terms {
            out.add_term(*w, v.clone() * c.clone());
        }
        out
    }

    /// A representative in `A`: each class mapped to its minimal word.
    pub fn lift(&self) -> FreeSeries<S> {
        FreeSeries::from_terms(self.n, self.degree, self.terms.iter().map(|(w, c)| (*w, c.clone())))
    }

    pub fn norm_inf(&self) -> f64 {
        self.terms.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        max_diff(&self.terms, &other.terms)
    }
}

impl<S: Scalar> Add<&CyclicSeries<S>> for &CyclicSeries<S> {
    type Output = CyclicSeries<S>;
    fn add(self, rhs: &CyclicSeries<S>) -> CyclicSeries<S> {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(*w, c.clone());
        }
        out
    }
}

impl<S: Scalar> Sub<&CyclicSeries<S>> for &CyclicSeries<S> {
    type Output = CyclicSeries<S>;
    fn sub(self, rhs: &CyclicSeries<S>) -> CyclicSeries<S> {
        self + &(-rhs)
    }
}

impl<S: Scalar> Neg for &CyclicSeries<S> {
    type Output = CyclicSeries<S>;
    fn neg(self) -> CyclicSeries<S> {
        self.scale(&-S::one())
    }
}

/// Element of `|A| ⊗ A` with total-degree truncation; first key rotation-minimal.
#[derive(Clone, Debug, PartialEq)]
pub struct CycTensor<S> {
    n: usize,
    degree: usize,
    terms: FxHashMap<(Word, Word), S>,
}

impl<S: Scalar> CycTensor<S> {
    pub fn zero(n: usize, degree: usize) -> Self {
        check_dims(n, degree);
        CycTensor { n, degree, terms: FxHashMap::default() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn add_term(&mut self, cyc: Word, w: Word, c: S) {
        if cyc.len() + w.len() <= self.degree {
            accumulate(&mut self.terms, (cyc.min_rotation(), w), c);
        }
    }

    pub fn coeff(&self, cyc: &Word, w: &Word) -> S {
        self.terms.get(&(cyc.min_rotation(), *w)).cloned().unwrap_or_else(S::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Word, Word), &S)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// `(ε ⊗ id)`: the coefficient of the empty cyclic word.
    pub fn counit_left(&self) -> FreeSeries<S> {
        FreeSeries::from_terms(
            self.n,
            self.degree,
            self.terms.iter().filter(|((a, _), _)| a.is_empty()).map(|((_, b), c)| (*b, c.clone())),
        )
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.n, self.degree);
        for ((a, b), v) in &self.terms {
            out.add_term(*a, *b, v.clone() * c.clone());
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        max_diff(&self.terms, &other.terms)
    }
}

impl<S: Scalar> Add<&CycTensor<S>> for &CycTensor<S> {
    type Output = CycTensor<S>;
    fn add(self, rhs: &CycTensor<S>) -> CycTensor<S> {
        let mut out = self.clone();
        for ((a, b), c) in &rhs.terms {
            out.add_term(*a, *b, c.clone());
        }
        out
    }
}

impl<S: Scalar> Sub<&CycTensor<S>> for &CycTensor<S> {
    type Output = CycTensor<S>;
    fn sub(self, rhs: &CycTensor<S>) -> CycTensor<S> {
        self + &rhs.scale(&-S::one())
    }
}

/// Element of `|A| ∧ |A|`. The stored value at `(c1, c2)` with `c1 < c2` in
/// (length, lex) order is the coefficient of `|c1| ⊗ |c2|` in the
/// antisymmetric tensor; the coefficient of `|c2| ⊗ |c1|` is its negative.
#[derive(Clone, Debug, PartialEq)]
pub struct CycWedge<S> {
    n: usize,
    degree: usize,
    terms: FxHashMap<(Word, Word), S>,
}

impl<S: Scalar> CycWedge<S> {
    pub fn zero(n: usize, degree: usize) -> Self {
        check_dims(n, degree);
        CycWedge { n, degree, terms: FxHashMap::default() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Adds `c·(|a|⊗|b| − |b|⊗|a|)`.
    pub fn add_wedge(&mut self, a: Word, b: Word, c: S) {
        if a.len() + b.len() > self.degree {
            return;
        }
        let (a, b) = (a.min_rotation(), b.min_rotation());
        if a < b {
            accumulate(&mut self.terms, (a, b), c);
        } else if b < a {
            accumulate(&mut self.terms, (b, a), -c);
        }
    }

    /// Coefficient of `|a| ⊗ |b|` in the antisymmetric tensor.
    pub fn coeff(&self, a: &Word, b: &Word) -> S {
        let (a, b) = (a.min_rotation(), b.min_rotation());
        if a < b {
            self.terms.get(&(a, b)).cloned().unwrap_or_else(S::zero)
        } else if b < a {
            -self.terms.get(&(b, a)).cloned().unwrap_or_else(S::zero)
        } else {
            S::zero()
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Word, Word), &S)> {
        self.terms.iter()
    }

    pub fn sorted_terms(&self) -> Vec<((Word, Word), S)> {
        let mut v: Vec<_> = self.terms.iter().map(|(k, c)| (*k, c.clone())).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.clone() * c.clone();
        }
        out.terms.retain(|_, v| !v.is_negligible());
        out
    }

    pub fn norm_inf(&self) -> f64 {
        self.terms.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        max_diff(&self.terms, &other.terms)
    }
}

impl<S: Scalar> Add<&CycWedge<S>> for &CycWedge<S> {
    type Output = CycWedge<S>;
    fn add(self, rhs: &CycWedge<S>) -> CycWedge<S> {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            accumulate(&mut out.terms, *k, c.clone());
        }
        out
    }
}

impl<S: Scalar> Sub<&CycWedge<S>> for &CycWedge<S> {
    type Output = CycWedge<S>;
    fn sub(self, rhs: &CycWedge<S>) -> CycWedge<S> {
        self + &rhs.scale(&-S::one())
    }
}
