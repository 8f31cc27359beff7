//! Fox derivatives and Fox pairings.

use std::fmt;
use std::sync::Arc;

use crate::coefficients::Scalar;
use crate::error::Result;
use crate::free_hopf::{FreeSeries, Word};

/// `d^R_m`: coefficient of `w` in the result is the coefficient of `x_m w` in `a`.
pub fn d_right<S: Scalar>(m: usize, a: &FreeSeries<S>) -> FreeSeries<S> {
    a.map_words(|w| (w.first() == Some(m)).then(|| (w.slice(1, w.len()), S::one())))
}

/// `d^L_m`: strips a trailing `x_m`.
pub fn d_left<S: Scalar>(m: usize, a: &FreeSeries<S>) -> FreeSeries<S> {
    a.map_words(|w| (w.last() == Some(m)).then(|| (w.slice(0, w.len() - 1), S::one())))
}

type CustomFn<S> = dyn Fn(&FreeSeries<S>, &FreeSeries<S>) -> FreeSeries<S> + Send + Sync;

/// A bilinear map that is a left Fox derivative in its first argument and a
/// right Fox derivative in its second.
#[derive(Clone)]
pub enum FoxPairing<S> {
    Kks,
    Inner(FreeSeries<S>),
    Left(usize),
    Right(usize),
    Transpose(Box<FoxPairing<S>>),
    Scaled(S, Box<FoxPairing<S>>),
    /// Arbitrary bilinear map; the caller vouches for the Fox axioms.
    Custom(Arc<CustomFn<S>>),
}

impl<S: fmt::Debug> fmt::Debug for FoxPairing<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FoxPairing::Kks => write!(f, "Kks"),
            FoxPairing::Inner(g) => write!(f, "Inner({g:?})"),
            FoxPairing::Left(m) => write!(f, "Left({m})"),
            FoxPairing::Right(m) => write!(f, "Right({m})"),
            FoxPairing::Transpose(p) => write!(f, "Transpose({p:?})"),
            FoxPairing::Scaled(c, p) => write!(f, "Scaled({c:?}, {p:?})"),
            FoxPairing::Custom(_) => write!(f, "Custom"),
        }
    }
}

pub fn rho_inner<S: Scalar>(g: FreeSeries<S>) -> FoxPairing<S> {
    FoxPairing::Inner(g)
}

pub fn rho_left<S>(m: usize) -> FoxPairing<S> {
    FoxPairing::Left(m)
}

pub fn rho_right<S>(m: usize) -> FoxPairing<S> {
    FoxPairing::Right(m)
}

pub fn transpose<S>(rho: FoxPairing<S>) -> FoxPairing<S> {
    FoxPairing::Transpose(Box::new(rho))
}

/// `ρ_KKS(a, b)` on full series.
pub fn rho_kks<S: Scalar>(a: &FreeSeries<S>, b: &FreeSeries<S>) -> Result<FreeSeries<S>> {
    FoxPairing::Kks.apply(a, b)
}

impl<S: Scalar> FoxPairing<S> {
    /// Lower bound on `|ρ(u, v)| - |u| - |v|` for nonempty words, `None` if unknown.
    pub fn degree_shift(&self) -> Option<i64> {
        match self {
            FoxPairing::Kks | FoxPairing::Left(_) | FoxPairing::Right(_) => Some(-1),
            FoxPairing::Inner(g) => Some(g.valuation().unwrap_or(0) as i64),
            FoxPairing::Transpose(p) | FoxPairing::Scaled(_, p) => p.degree_shift(),
            FoxPairing::Custom(_) => None,
        }
    }

    /// `ρ(u, v)` for monomials, written into `out` with weight `c`.
    fn add_on_words(&self, u: Word, v: Word, c: S, out: &mut FreeSeries<S>) {
        match self {
            FoxPairing::Kks => {
                if !u.is_empty() && !v.is_empty() && u.last() == v.first() {
                    out.add_term(u.concat(v.slice(1, v.len())), c);
                }
            }
            FoxPairing::Inner(g) => {
                if !u.is_empty() && !v.is_empty() {
                    for (wg, cg) in g.terms() {
                        if u.len() + wg.len() + v.len() <= out.degree() {
                            out.add_term(u.concat(*wg).concat(v), c.clone() * cg.clone());
                        }
                    }
                }
            }
            FoxPairing::Left(m) => {
                if !v.is_empty() && u.last() == Some(*m) {
                    out.add_term(u.slice(0, u.len() - 1).concat(v), c);
                }
            }
            FoxPairing::Right(m) => {
                if !u.is_empty() && v.first() == Some(*m) {
                    out.add_term(u.concat(v.slice(1, v.len())), c);
                }
            }
            FoxPairing::Transpose(p) => {
                // S(ρ(S v, S u)) with S w = (-1)^{|w|} reverse(w)
                let mut inner = FreeSeries::zero(out.n(), out.degree());
                p.add_on_words(v.reverse(), u.reverse(), S::one(), &mut inner);
                let sign = if (u.len() + v.len()) % 2 == 0 { c } else { -c };
                for (w, cw) in inner.antipode().terms() {
                    out.add_term(*w, sign.clone() * cw.clone());
                }
            }
            FoxPairing::Scaled(k, p) => p.add_on_words(u, v, k.clone() * c, out),
            FoxPairing::Custom(f) => {
                let a = FreeSeries::monomial(out.n(), out.degree(), u, S::one());
                let b = FreeSeries::monomial(out.n(), out.degree(), v, S::one());
                for (w, cw) in f(&a, &b).terms() {
                    out.add_term(*w, c.clone() * cw.clone());
                }
            }
        }
    }

    /// `ρ(u, v)` for monomials.
    pub fn on_words(&self, u: Word, v: Word, n: usize, degree: usize) -> FreeSeries<S> {
        let mut out = FreeSeries::zero(n, degree);
        self.add_on_words(u, v, S::one(), &mut out);
        out
    }

    pub fn apply(&self, a: &FreeSeries<S>, b: &FreeSeries<S>) -> Result<FreeSeries<S>> {
        a.same_shape(b)?;
        if let FoxPairing::Custom(f) = self {
            return Ok(f(a, b));
        }
        let mut out = FreeSeries::zero(a.n(), a.degree());
        let shift = self.degree_shift();
        for (u, cu) in a.terms() {
            for (v, cv) in b.terms() {
                if let Some(s) = shift {
                    if (u.len() + v.len()) as i64 + s > a.degree() as i64 {
                        continue;
                    }
                }
                self.add_on_words(*u, *v, cu.clone() * cv.clone(), &mut out);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::Rational;
    use crate::free_hopf::{product, x};
    use crate::random::{random_rational_series, rng};
    use proptest::prelude::*;

    type Q = Rational;

    fn w(l: &[usize]) -> Word {
        Word::from_letters(l).unwrap()
    }

    fn mono(n: usize, d: usize, l: &[usize]) -> FreeSeries<Q> {
        FreeSeries::monomial(n, d, w(l), Q::from_i64(1))
    }

    #[test]
    fn fox_derivative_examples() {
        let (n, d) = (3, 4);
        for q in 0..n {
            for j in 0..n {
                let r = d_right(q, &x::<Q>(n, d, j));
                let expect = if q == j { FreeSeries::one(n, d) } else { FreeSeries::zero(n, d) };
                assert_eq!(r, expect);
            }
        }
        assert_eq!(d_left(0, &mono(n, d, &[0, 1, 0])), mono(n, d, &[0, 1]));
        assert!(d_right(0, &FreeSeries::<Q>::one(n, d)).is_zero());
    }

    #[test]
    fn kks_examples() {
        let (n, d) = (3, 4);
        let x1 = x::<Q>(n, d, 0);
        assert_eq!(rho_kks(&x1, &x1).unwrap(), x1);
        let a = mono(n, d, &[0, 1]);
        let b = mono(n, d, &[1, 2]);
        assert_eq!(rho_kks(&a, &b).unwrap(), mono(n, d, &[0, 1, 2]));
        let one = FreeSeries::one(n, d);
        assert!(rho_kks(&one, &a).unwrap().is_zero());
        assert!(rho_kks(&a, &one).unwrap().is_zero());
    }

    #[test]
    fn inner_left_right_examples() {
        let (n, d) = (3, 4);
        let x1 = x::<Q>(n, d, 0);
        let x2 = x::<Q>(n, d, 1);
        let x3 = x::<Q>(n, d, 2);
        let one = FreeSeries::one(n, d);
        let g = rho_inner(x2.clone());
        assert!(g.apply(&one, &x3).unwrap().is_zero());
        assert_eq!(g.apply(&x1, &x3).unwrap(), product(&[&x1, &x2, &x3]));
        assert_eq!(rho_left::<Q>(0).apply(&x1, &x2).unwrap(), x2);
        assert_eq!(rho_right::<Q>(0).apply(&x2, &x1).unwrap(), x2);
        assert!(rho_left::<Q>(0).apply(&one, &x2).unwrap().is_zero());
    }

    #[test]
    fn transpose_of_kks_on_generators() {
        let (n, d) = (3, 3);
        let t = transpose(FoxPairing::<Q>::Kks);
        for i in 0..n {
            for j in 0..n {
                let r = t.apply(&x(n, d, i), &x(n, d, j)).unwrap();
                let expect = if i == j { -&x::<Q>(n, d, i) } else { FreeSeries::zero(n, d) };
                assert_eq!(r, expect);
            }
        }
    }

    #[test]
    fn shape_mismatch_is_reported() {
        assert!(rho_kks(&x::<Q>(2, 3, 0), &x::<Q>(3, 3, 0)).is_err());
    }

    fn pairings(n: usize, d: usize, seed: u64) -> Vec<FoxPairing<Q>> {
        let g = random_rational_series(&mut rng(seed), n, d, 3);
        vec![
            FoxPairing::Kks,
            rho_inner(g.clone()),
            rho_left(1),
            rho_right(0),
            transpose(FoxPairing::Kks),
            transpose(rho_inner(g)),
            transpose(rho_left(0)),
            FoxPairing::Scaled(Q::from_ratio(-2, 3), Box::new(FoxPairing::Kks)),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn fox_axioms_hold(seed in any::<u64>()) {
            let (n, d) = (3, 5);
            let mut r = rng(seed);
            let a = random_rational_series(&mut r, n, d, 4);
            let b = random_rational_series(&mut r, n, d, 4);
            let c = random_rational_series(&mut r, n, d, 4);
            for rho in pairings(n, d, seed ^ 1) {
                let lhs = rho.apply(&(&a * &b), &c).unwrap();
                let rhs = &(&a * &rho.apply(&b, &c).unwrap()) + &rho.apply(&a, &c).unwrap().scale(&b.counit());
                prop_assert_eq!(lhs, rhs, "left axiom for {:?}", rho);
                let lhs = rho.apply(&a, &(&b * &c)).unwrap();
                let rhs = &(&rho.apply(&a, &b).unwrap() * &c) + &rho.apply(&a, &c).unwrap().scale(&b.counit());
                prop_assert_eq!(lhs, rhs, "right axiom for {:?}", rho);
            }
        }

        #[test]
        fn reconstruction_identity(seed in any::<u64>()) {
            let (n, d) = (3, 5);
            let a = random_rational_series(&mut rng(seed), n, d, 8);
            let mut right = FreeSeries::constant(n, d, a.counit());
            let mut left = right.clone();
            for i in 0..n {
                let xi = x::<Q>(n, d, i);
                right += &(&xi * &d_right(i, &a));
                left += &(&d_left(i, &a) * &xi);
            }
            prop_assert_eq!(&right, &a);
            prop_assert_eq!(&left, &a);
        }

        #[test]
        fn kks_is_skew_and_transpose_involutive(seed in any::<u64>()) {
            let (n, d) = (3, 4);
            let mut r = rng(seed);
            let a = random_rational_series(&mut r, n, d, 5);
            let b = random_rational_series(&mut r, n, d, 5);
            let kks = rho_kks(&a, &b).unwrap();
            let t = transpose(FoxPairing::Kks).apply(&a, &b).unwrap();
            prop_assert!((&kks + &t).is_zero());
            for rho in pairings(n, d, seed) {
                let tt = transpose(transpose(rho.clone()));
                prop_assert_eq!(tt.apply(&a, &b).unwrap(), rho.apply(&a, &b).unwrap());
            }
        }
    }
}
