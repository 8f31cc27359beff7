//! The square-zero extension `A⊗A ⊕ M` (with `M ≅ A`) whose product is
//! twisted by a Fox pairing, and the projection of the Drinfeld–Kohno
//! generators `t_iz, t_iw, t_zw` into it.
//!
//! `M` is the `A⊗A`-bimodule `(f⊗g)·m·(h⊗k) = ε(f) ε(k) g m h`. An element
//! `m ∈ M` stored as the word `w` carries degree `|w| + 1`, so with total
//! truncation `D` the `M` component keeps words of length `< D`.

use crate::coefficients::{r_zeta_scaled, Scalar};
use crate::error::{Error, Result};
use crate::fox::FoxPairing;
use crate::free_hopf::{FreeSeries, TensorSeries, Word};

#[derive(Clone, Debug, PartialEq)]
pub struct TrivExtElement<S> {
    pub tensor: TensorSeries<S>,
    pub m: FreeSeries<S>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DkGenerator {
    /// `t_{i z}` (0-based `i`).
    Iz(usize),
    /// `t_{i w}` (0-based `i`).
    Iw(usize),
    Zw,
}

fn clip<S: Scalar>(m: FreeSeries<S>) -> FreeSeries<S> {
    let d = m.degree();
    if m.terms().all(|(w, _)| w.len() < d) {
        return m;
    }
    FreeSeries::from_terms(m.n(), d, m.terms().filter(|(w, _)| w.len() < d).map(|(w, c)| (*w, c.clone())))
}

impl<S: Scalar> TrivExtElement<S> {
    pub fn zero(n: usize, degree: usize) -> Self {
        TrivExtElement { tensor: TensorSeries::zero(n, degree), m: FreeSeries::zero(n, degree) }
    }

    pub fn one(n: usize, degree: usize) -> Self {
        TrivExtElement { tensor: TensorSeries::one(n, degree), m: FreeSeries::zero(n, degree) }
    }

    pub fn from_tensor(t: TensorSeries<S>) -> Self {
        let m = FreeSeries::zero(t.n(), t.degree());
        TrivExtElement { tensor: t, m }
    }

    pub fn from_m(m: FreeSeries<S>) -> Self {
        TrivExtElement { tensor: TensorSeries::zero(m.n(), m.degree()), m: clip(m) }
    }

    pub fn n(&self) -> usize {
        self.tensor.n()
    }

    pub fn degree(&self) -> usize {
        self.tensor.degree()
    }

    pub fn add(&self, other: &Self) -> Self {
        TrivExtElement { tensor: &self.tensor + &other.tensor, m: &self.m + &other.m }
    }

    pub fn sub(&self, other: &Self) -> Self {
        TrivExtElement { tensor: &self.tensor - &other.tensor, m: &self.m - &other.m }
    }

    pub fn scale(&self, c: &S) -> Self {
        TrivExtElement { tensor: self.tensor.scale(c), m: self.m.scale(c) }
    }

    pub fn is_zero(&self) -> bool {
        self.tensor.is_zero() && self.m.is_zero()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.tensor.max_abs_diff(&other.tensor).max(self.m.max_abs_diff(&other.m))
    }
}

pub fn pi0<S: Scalar>(u: &TrivExtElement<S>) -> TensorSeries<S> {
    u.tensor.clone()
}

pub fn pi1<S: Scalar>(u: &TrivExtElement<S>) -> FreeSeries<S> {
    u.m.clone()
}

/// The algebra `A⊗A ⊕ M` for a given Fox pairing.
#[derive(Clone, Debug)]
pub struct TrivExt<S> {
    pub n: usize,
    pub degree: usize,
    pub rho: FoxPairing<S>,
}

impl<S: Scalar> TrivExt<S> {
    pub fn new(n: usize, degree: usize, rho: FoxPairing<S>) -> Result<Self> {
        crate::free_hopf::validate_dims(n, degree)?;
        if degree == 0 {
            return Err(Error::OutOfRange("the trivial extension needs D >= 1".into()));
        }
        Ok(TrivExt { n, degree, rho })
    }

    /// The extension receiving the Drinfeld–Kohno generators: cocycle `−ρ_KKS`.
    pub fn kks(n: usize, degree: usize) -> Result<Self> {
        Self::new(n, degree, FoxPairing::Scaled(-S::one(), Box::new(FoxPairing::Kks)))
    }

    fn check(&self, u: &TrivExtElement<S>) -> Result<()> {
        if u.n() != self.n || u.degree() != self.degree || u.m.n() != self.n || u.m.degree() != self.degree {
            return Err(Error::Shape(format!(
                "element of shape ({}, {}) in extension of shape ({}, {})",
                u.n(),
                u.degree(),
                self.n,
                self.degree
            )));
        }
        Ok(())
    }

    /// `(a1⊗b1 + c1)(a2⊗b2 + c2)`; the `M` part is
    /// `ε(a1) b1 c2 + c1 a2 ε(b2) + ε(a1) ρ(b1, a2) ε(b2)`.
    pub fn mul(&self, u: &TrivExtElement<S>, v: &TrivExtElement<S>) -> Result<TrivExtElement<S>> {
        self.check(u)?;
        self.check(v)?;
        let tensor = u.tensor.checked_mul(&v.tensor)?;
        let u_right = u.tensor.counit_left();
        let v_left = v.tensor.counit_right();
        let mut m = &u_right * &v.m;
        m += &(&u.m * &v_left);
        m += &self.rho.apply(&u_right, &v_left)?;
        Ok(TrivExtElement { tensor, m: clip(m) })
    }

    pub fn one(&self) -> TrivExtElement<S> {
        TrivExtElement::one(self.n, self.degree)
    }

    /// The unit of `M`.
    pub fn e(&self) -> TrivExtElement<S> {
        TrivExtElement::from_m(FreeSeries::one(self.n, self.degree))
    }

    pub fn x_left(&self, i: usize) -> TrivExtElement<S> {
        TrivExtElement::from_tensor(TensorSeries::from_terms(self.n, self.degree, [((Word::letter(i), Word::empty()), S::one())]))
    }

    pub fn x_right(&self, i: usize) -> TrivExtElement<S> {
        TrivExtElement::from_tensor(TensorSeries::from_terms(self.n, self.degree, [((Word::empty(), Word::letter(i)), S::one())]))
    }

    /// `t_iz ↦ x_i⊗1`, `t_iw ↦ 1⊗x_i`, `t_zw ↦ e`.
    pub fn pi_generator(&self, g: DkGenerator) -> TrivExtElement<S> {
        match g {
            DkGenerator::Iz(i) => self.x_left(i),
            DkGenerator::Iw(i) => self.x_right(i),
            DkGenerator::Zw => self.e(),
        }
    }

    /// Image of a monomial in the generators.
    pub fn pi(&self, word: &[DkGenerator]) -> Result<TrivExtElement<S>> {
        word.iter().try_fold(self.one(), |acc, g| self.mul(&acc, &self.pi_generator(*g)))
    }

    /// Image of a linear combination of monomials.
    pub fn pi_sum(&self, terms: &[(S, Vec<DkGenerator>)]) -> Result<TrivExtElement<S>> {
        let mut out = TrivExtElement::zero(self.n, self.degree);
        for (c, w) in terms {
            out = out.add(&self.pi(w)?.scale(c));
        }
        Ok(out)
    }

    pub fn commutator(&self, u: &TrivExtElement<S>, v: &TrivExtElement<S>) -> Result<TrivExtElement<S>> {
        Ok(self.mul(u, v)?.sub(&self.mul(v, u)?))
    }

    /// Truncated exponential of an element with no constant term.
    pub fn exp(&self, u: &TrivExtElement<S>) -> Result<TrivExtElement<S>> {
        if !u.tensor.coeff(&Word::empty(), &Word::empty()).is_negligible() {
            return Err(Error::Domain("exp needs an element with zero constant term".into()));
        }
        let mut out = self.one();
        let mut power = self.one();
        for k in 1..=self.degree {
            power = self.mul(&power, u)?.scale(&S::from_ratio(1, k as i64));
            if power.is_zero() {
                break;
            }
            out = out.add(&power);
        }
        Ok(out)
    }

    pub fn inverse(&self, u: &TrivExtElement<S>) -> Result<TrivExtElement<S>> {
        let c = u.tensor.coeff(&Word::empty(), &Word::empty());
        if (c - S::one()).magnitude() > 1e-12 {
            return Err(Error::Domain("inverse implemented for elements with constant term 1".into()));
        }
        let y = self.one().sub(u);
        let mut out = self.one();
        let mut power = self.one();
        for _ in 1..=self.degree {
            power = self.mul(&power, &y)?;
            if power.is_zero() {
                break;
            }
            out = out.add(&power);
        }
        Ok(out)
    }

    /// Extends `x_i ↦ images[i]` multiplicatively to the series `a`.
    pub fn algebra_map(&self, a: &FreeSeries<S>, images: &[TrivExtElement<S>]) -> Result<TrivExtElement<S>> {
        if images.len() != self.n || a.n() != self.n {
            return Err(Error::Shape("one image per generator required".into()));
        }
        let mut out = TrivExtElement::zero(self.n, self.degree);
        // memoize prefixes, which are shared heavily by dense series
        let mut cache: rustc_hash::FxHashMap<Word, TrivExtElement<S>> = rustc_hash::FxHashMap::default();
        cache.insert(Word::empty(), self.one());
        let mut words: Vec<(Word, S)> = a.sorted_terms();
        words.retain(|(w, _)| w.len() <= self.degree);
        for (w, c) in words {
            let img = self.prefix_image(w, images, &mut cache)?;
            out = out.add(&img.scale(&c));
        }
        Ok(out)
    }

    fn prefix_image(
        &self,
        w: Word,
        images: &[TrivExtElement<S>],
        cache: &mut rustc_hash::FxHashMap<Word, TrivExtElement<S>>,
    ) -> Result<TrivExtElement<S>> {
        if let Some(v) = cache.get(&w) {
            return Ok(v.clone());
        }
        let head = self.prefix_image(w.slice(0, w.len() - 1), images, cache)?;
        let v = self.mul(&head, &images[w.last().unwrap()])?;
        cache.insert(w, v.clone());
        Ok(v)
    }

    fn delta_images(&self, special: Option<(usize, bool)>) -> Vec<TrivExtElement<S>> {
        (0..self.n)
            .map(|i| match special {
                Some((q, true)) => {
                    let base = self.x_left(i);
                    if i == q { base.add(&self.e()) } else { base }
                }
                Some((p, false)) => {
                    let base = self.x_right(i);
                    if i == p { base.add(&self.e()) } else { base }
                }
                None => self.x_left(i).add(&self.x_right(i)),
            })
            .collect()
    }

    /// `π∘Δ^z_q`: `x_i ↦ t_iz + δ_iq t_zw`.
    pub fn delta_z(&self, q: usize, a: &FreeSeries<S>) -> Result<TrivExtElement<S>> {
        self.check_index(q)?;
        self.algebra_map(a, &self.delta_images(Some((q, true))))
    }

    /// `π∘Δ^w_p`: `x_i ↦ t_iw + δ_ip t_zw`.
    pub fn delta_w(&self, p: usize, a: &FreeSeries<S>) -> Result<TrivExtElement<S>> {
        self.check_index(p)?;
        self.algebra_map(a, &self.delta_images(Some((p, false))))
    }

    /// `π∘Δ^{zw}`: `x_i ↦ t_iz + t_iw`.
    pub fn delta_zw(&self, a: &FreeSeries<S>) -> Result<TrivExtElement<S>> {
        self.algebra_map(a, &self.delta_images(None))
    }

    pub fn square_z(&self, q: usize, a: &FreeSeries<S>) -> Result<FreeSeries<S>> {
        Ok(self.delta_z(q, a)?.m)
    }

    pub fn square_w(&self, p: usize, a: &FreeSeries<S>) -> Result<FreeSeries<S>> {
        Ok(self.delta_w(p, a)?.m)
    }

    pub fn square_zw(&self, a: &FreeSeries<S>) -> Result<FreeSeries<S>> {
        Ok(self.delta_zw(a)?.m)
    }

    /// `π(C⁻¹ e^{−ε t_zw} C)` for `π(C) = c` with vanishing `M` part.
    pub fn conjugated_exponential(&self, c: &TensorSeries<S>, eps: i32) -> Result<TrivExtElement<S>> {
        let cu = TrivExtElement::from_tensor(c.clone());
        let inner = self.exp(&self.e().scale(&S::from_i64(-eps as i64)))?;
        self.mul(&self.mul(&self.inverse(&cu)?, &inner)?, &cu)
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.n {
            return Err(Error::Domain(format!("generator index {i} out of range for n = {}", self.n)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailSide {
    Left,
    Right,
}

/// `π1` of the boundary associators: `−r_ζ(x_q)` on the left, `r_ζ(−x_p)` on the right.
pub fn associator_tail<S: Scalar>(side: TailSide, puncture: usize, n: usize, degree: usize) -> Result<FreeSeries<S>> {
    match side {
        TailSide::Left => Ok(-r_zeta_scaled::<S>(n, puncture, 1, degree)?),
        TailSide::Right => r_zeta_scaled::<S>(n, puncture, -1, degree),
    }
}
