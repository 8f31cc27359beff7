//! Double brackets induced by Fox pairings, the KKS (reduced) coaction, the
//! necklace bracket and cobracket, and double derivations.

use rustc_hash::FxHashMap;

use crate::coefficients::Scalar;
use crate::error::Result;
use crate::fox::{d_left, d_right, FoxPairing};
use crate::free_hopf::{CycTensor, CycWedge, CyclicSeries, FreeSeries, TensorSeries, Word};

/// All `(w', w'')` in the coproduct of a word, with multiplicity.
pub(crate) fn word_splits(w: Word) -> Vec<(Word, Word)> {
    let k = w.len();
    let mut out = Vec::with_capacity(1 << k);
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
        out.push((left, right));
    }
    out
}

/// Antipode of a word as `(reversed word, sign)`.
#[inline]
pub(crate) fn antipode_word<S: Scalar>(w: Word) -> (Word, S) {
    let sign = if w.len() % 2 == 0 { S::one() } else { -S::one() };
    (w.reverse(), sign)
}

/// `{{a,b}}^ρ = b' S(ρ(a'',b'')') a' ⊗ ρ(a'',b'')''`.
pub fn double_bracket<S: Scalar>(rho: &FoxPairing<S>, a: &FreeSeries<S>, b: &FreeSeries<S>) -> Result<TensorSeries<S>> {
    a.same_shape(b)?;
    let (n, d) = (a.n(), a.degree());
    let shift = rho.degree_shift();
    let mut out = TensorSeries::zero(n, d);
    let mut cache: FxHashMap<(Word, Word), FreeSeries<S>> = FxHashMap::default();
    for (u, cu) in a.terms() {
        for (v, cv) in b.terms() {
            if let Some(s) = shift {
                if (u.len() + v.len()) as i64 + s > d as i64 {
                    continue;
                }
            }
            let c = cu.clone() * cv.clone();
            for (u1, u2) in word_splits(*u) {
                if u2.is_empty() {
                    continue;
                }
                for (v1, v2) in word_splits(*v) {
                    if v2.is_empty() {
                        continue;
                    }
                    let r = cache.entry((u2, v2)).or_insert_with(|| rho.on_words(u2, v2, n, d));
                    for (w, cw) in r.terms() {
                        if u1.len() + v1.len() + w.len() > d {
                            continue;
                        }
                        for (w1, w2) in word_splits(*w) {
                            let (s1, sign) = antipode_word::<S>(w1);
                            out.add_term(v1.concat(s1).concat(u1), w2, c.clone() * cw.clone() * sign);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

pub fn double_bracket_kks<S: Scalar>(a: &FreeSeries<S>, b: &FreeSeries<S>) -> Result<TensorSeries<S>> {
    double_bracket(&FoxPairing::Kks, a, b)
}

/// Deletes one letter from each adjacent equal pair, summed over pairs.
pub fn mu_bar_kks<S: Scalar>(a: &FreeSeries<S>) -> FreeSeries<S> {
    let mut out = FreeSeries::zero(a.n(), a.degree());
    for (w, c) in a.terms() {
        for i in 0..w.len().saturating_sub(1) {
            if w.get(i) == w.get(i + 1) {
                out.add_term(w.remove(i + 1), c.clone());
            }
        }
    }
    out
}

/// `d_μ̄(a) = a' S(μ̄(a'')') ⊗ μ̄(a'')''`.
pub fn d_mu<S: Scalar>(mu_bar: impl Fn(&FreeSeries<S>) -> FreeSeries<S>, a: &FreeSeries<S>) -> TensorSeries<S> {
    let (n, d) = (a.n(), a.degree());
    let mut out = TensorSeries::zero(n, d);
    let mut cache: FxHashMap<Word, FreeSeries<S>> = FxHashMap::default();
    for (u, cu) in a.terms() {
        for (u1, u2) in word_splits(*u) {
            let m = cache
                .entry(u2)
                .or_insert_with(|| mu_bar(&FreeSeries::monomial(n, d, u2, S::one())));
            for (w, cw) in m.terms() {
                if u1.len() + w.len() > d {
                    continue;
                }
                for (w1, w2) in word_splits(*w) {
                    let (s1, sign) = antipode_word::<S>(w1);
                    out.add_term(u1.concat(s1), w2, cu.clone() * cw.clone() * sign);
                }
            }
        }
    }
    out
}

/// `μ(a) = |a' S(μ̄(a'')')| ⊗ μ̄(a'')''`.
pub fn coaction_mu<S: Scalar>(mu_bar: impl Fn(&FreeSeries<S>) -> FreeSeries<S>, a: &FreeSeries<S>) -> CycTensor<S> {
    project_left(&d_mu(mu_bar, a))
}

pub fn coaction_mu_kks<S: Scalar>(a: &FreeSeries<S>) -> CycTensor<S> {
    coaction_mu(mu_bar_kks, a)
}

/// `(|−| ⊗ id)`.
pub fn project_left<S: Scalar>(t: &TensorSeries<S>) -> CycTensor<S> {
    let mut out = CycTensor::zero(t.n(), t.degree());
    for ((l, r), c) in t.terms() {
        out.add_term(*l, *r, c.clone());
    }
    out
}

/// `|t' t''|`.
pub fn cyclic_of_product<S: Scalar>(t: &TensorSeries<S>) -> CyclicSeries<S> {
    t.multiply_legs().cyclic_project()
}

pub fn necklace_bracket<S: Scalar>(a: &FreeSeries<S>, b: &FreeSeries<S>) -> Result<CyclicSeries<S>> {
    Ok(cyclic_of_product(&double_bracket_kks(a, b)?))
}

/// `|d_μ̄(a)| − |P21 d_μ̄(a)|` with `μ̄ = μ̄_KKS`.
pub fn necklace_cobracket<S: Scalar>(a: &FreeSeries<S>) -> CycWedge<S> {
    let d = d_mu(mu_bar_kks, a);
    let mut out = CycWedge::zero(a.n(), a.degree());
    for ((l, r), c) in d.terms() {
        out.add_wedge(*l, *r, c.clone());
    }
    out
}

fn map_pairs<S: Scalar>(t: &TensorSeries<S>, f: impl Fn(Word, Word, &S, &mut TensorSeries<S>)) -> TensorSeries<S> {
    let mut out = TensorSeries::zero(t.n(), t.degree());
    for ((a, b), c) in t.terms() {
        f(*a, *b, c, &mut out);
    }
    out
}

/// `a⊗b ↦ a S(b') ⊗ b''`.
pub fn alpha<S: Scalar>(t: &TensorSeries<S>) -> TensorSeries<S> {
    map_pairs(t, |a, b, c, out| {
        for (b1, b2) in word_splits(b) {
            let (s1, sign) = antipode_word::<S>(b1);
            out.add_term(a.concat(s1), b2, c.clone() * sign);
        }
    })
}

/// `a⊗b ↦ b' ⊗ S(b'') a`.
pub fn beta<S: Scalar>(t: &TensorSeries<S>) -> TensorSeries<S> {
    map_pairs(t, |a, b, c, out| {
        for (b1, b2) in word_splits(b) {
            let (s2, sign) = antipode_word::<S>(b2);
            out.add_term(b1, s2.concat(a), c.clone() * sign);
        }
    })
}

/// `c⊗d ↦ c d' ⊗ d''`.
pub fn alpha_inv<S: Scalar>(t: &TensorSeries<S>) -> TensorSeries<S> {
    map_pairs(t, |a, b, c, out| {
        for (b1, b2) in word_splits(b) {
            out.add_term(a.concat(b1), b2, c.clone());
        }
    })
}

/// `c⊗d ↦ c'' d ⊗ c'`.
pub fn beta_inv<S: Scalar>(t: &TensorSeries<S>) -> TensorSeries<S> {
    map_pairs(t, |a, b, c, out| {
        for (a1, a2) in word_splits(a) {
            out.add_term(a2.concat(b), a1, c.clone());
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FoxSide {
    Left,
    Right,
}

/// `Dd^R_m = α(id⊗d^R_m)Δ` or `Dd^L_m = β(id⊗d^L_m)Δ`.
pub fn double_derivation_from_fox<S: Scalar>(side: FoxSide, m: usize, a: &FreeSeries<S>) -> TensorSeries<S> {
    let (n, d) = (a.n(), a.degree());
    let delta = |w: Word| {
        let mono = FreeSeries::monomial(n, d, w, S::one());
        match side {
            FoxSide::Right => d_right(m, &mono),
            FoxSide::Left => d_left(m, &mono),
        }
    };
    let t = a.coproduct().map_legs(|w| FreeSeries::monomial(n, d, w, S::one()), delta);
    match side {
        FoxSide::Right => alpha(&t),
        FoxSide::Left => beta(&t),
    }
}
