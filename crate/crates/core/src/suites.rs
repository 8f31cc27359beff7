//! Seeded randomized checks of the exact algebraic identities over the
//! rationals. Used by the CLI and by the acceptance tests.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::brackets::{
    alpha, alpha_inv, beta, beta_inv, coaction_mu_kks, cyclic_of_product, double_bracket, double_bracket_kks,
    double_derivation_from_fox, mu_bar_kks, project_left, FoxSide,
};
use crate::coefficients::{Rational, Scalar};
use crate::fox::{d_left, d_right, rho_inner, rho_kks, rho_left, rho_right, transpose, FoxPairing};
use crate::free_hopf::{CycTensor, FreeSeries, TensorSeries};
use crate::random::{random_rational_series, random_rational_tensor, rng};
use crate::trivext::{DkGenerator, TrivExt, TrivExtElement};

type Q = Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteLine {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
}

impl SuiteLine {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

type Check = fn(&mut ChaCha8Rng) -> bool;

/// Series whose words are short enough that products survive truncation.
fn short(r: &mut ChaCha8Rng, n: usize, d: usize, max_len: usize, terms: usize) -> FreeSeries<Q> {
    random_rational_series(r, n, max_len, terms).with_degree(d)
}

fn hopf_coproduct(r: &mut ChaCha8Rng) -> bool {
    let (a, b) = (short(r, 3, 4, 2, 5), short(r, 3, 4, 2, 5));
    (&a * &b).coproduct() == &a.coproduct() * &b.coproduct() && a.coproduct().counit_left() == a
}

fn hopf_antipode(r: &mut ChaCha8Rng) -> bool {
    let a = random_rational_series(r, 2, 4, 6);
    let s_id = a.coproduct().map_legs(
        |w| FreeSeries::monomial(2, 4, w, Q::from_i64(1)).antipode(),
        |w| FreeSeries::monomial(2, 4, w, Q::from_i64(1)),
    );
    s_id.multiply_legs() == FreeSeries::constant(2, 4, a.counit()) && a.antipode().antipode() == a
}

fn fox_reconstruction(r: &mut ChaCha8Rng) -> bool {
    let (n, d) = (3, 4);
    let a = random_rational_series(r, n, d, 8);
    let mut right = FreeSeries::constant(n, d, a.counit());
    let mut left = right.clone();
    for i in 0..n {
        let xi = FreeSeries::generator(n, d, i);
        right += &(&xi * &d_right(i, &a));
        left += &(&d_left(i, &a) * &xi);
    }
    right == a && left == a
}

fn pairings(r: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<FoxPairing<Q>> {
    let g = random_rational_series(r, n, d, 3);
    let m = r.gen_range(0..n);
    vec![FoxPairing::Kks, rho_inner(g), rho_left(m), rho_right(m)]
}

fn fox_pairing_axioms(r: &mut ChaCha8Rng) -> bool {
    let (n, d) = (3, 4);
    let (a, b, c) = (short(r, n, d, 2, 4), short(r, n, d, 2, 4), short(r, n, d, 2, 4));
    pairings(r, n, d).iter().all(|rho| {
        let left = rho.apply(&(&a * &b), &c).unwrap()
            == &(&a * &rho.apply(&b, &c).unwrap()) + &rho.apply(&a, &c).unwrap().scale(&b.counit());
        let right = rho.apply(&a, &(&b * &c)).unwrap()
            == &(&rho.apply(&a, &b).unwrap() * &c) + &rho.apply(&a, &c).unwrap().scale(&b.counit());
        left && right
    })
}

fn kks_skew(r: &mut ChaCha8Rng) -> bool {
    let (a, b) = (random_rational_series(r, 3, 4, 5), random_rational_series(r, 3, 4, 5));
    (&rho_kks(&a, &b).unwrap() + &transpose(FoxPairing::Kks).apply(&a, &b).unwrap()).is_zero()
}

fn double_bracket_axioms(r: &mut ChaCha8Rng) -> bool {
    let (n, d) = (2, 4);
    let (a, b, c) = (short(r, n, d, 2, 4), short(r, n, d, 2, 4), short(r, n, d, 2, 4));
    let one = FreeSeries::one(n, d);
    let lhs = double_bracket_kks(&a, &(&b * &c)).unwrap();
    let rhs = &(&TensorSeries::tensor(&b, &one) * &double_bracket_kks(&a, &c).unwrap())
        + &(&double_bracket_kks(&a, &b).unwrap() * &TensorSeries::tensor(&one, &c));
    let ab = double_bracket_kks(&a, &b).unwrap();
    let ba = double_bracket_kks(&b, &a).unwrap();
    lhs == rhs && (&ba + &ab.swap()).is_zero() && ab.counit_left() == rho_kks(&a, &b).unwrap()
}

fn quasi_derivation(r: &mut ChaCha8Rng) -> bool {
    let (a, b) = (short(r, 3, 4, 2, 4), short(r, 3, 4, 2, 4));
    let lhs = mu_bar_kks(&(&a * &b));
    lhs == &(&(&mu_bar_kks(&a) * &b) + &(&a * &mu_bar_kks(&b))) + &rho_kks(&a, &b).unwrap()
}

fn coaction_product_rule(r: &mut ChaCha8Rng) -> bool {
    let (n, d) = (2, 4);
    let (a, b) = (short(r, n, d, 2, 4), short(r, n, d, 2, 4));
    let mul = |t: &CycTensor<Q>, s: &FreeSeries<Q>, on_right: bool| {
        let mut out = CycTensor::zero(n, d);
        for ((c, u), k) in t.terms() {
            for (v, kv) in s.terms() {
                let w = if on_right { u.concat(*v) } else { v.concat(*u) };
                out.add_term(*c, w, k.clone() * kv.clone());
            }
        }
        out
    };
    let lhs = coaction_mu_kks(&(&a * &b));
    let rhs = &(&mul(&coaction_mu_kks(&a), &b, true) + &mul(&coaction_mu_kks(&b), &a, false))
        + &project_left(&double_bracket_kks(&a, &b).unwrap());
    lhs.counit_left() == mu_bar_kks(&(&a * &b)) && lhs == rhs
}

fn traces_vanish(r: &mut ChaCha8Rng) -> bool {
    let (n, d) = (2, 4);
    let (a, b, g) = (short(r, n, d, 4, 4), short(r, n, d, 4, 4), short(r, n, d, 4, 4));
    let m = r.gen_range(0..n);
    [rho_inner(g), rho_left(m), rho_right(m)]
        .iter()
        .all(|rho| cyclic_of_product(&double_bracket(rho, &a, &b).unwrap()).is_zero())
}

fn fox_double_derivations(r: &mut ChaCha8Rng) -> bool {
    let a = short(r, 3, 4, 4, 6);
    (0..3).all(|m| double_derivation_from_fox(FoxSide::Right, m, &a) == double_derivation_from_fox(FoxSide::Left, m, &a))
}

fn alpha_beta_inverse(r: &mut ChaCha8Rng) -> bool {
    let t = random_rational_tensor(r, 2, 4, 6);
    alpha_inv(&alpha(&t)) == t && alpha(&alpha_inv(&t)) == t && beta_inv(&beta(&t)) == t && beta(&beta_inv(&t)) == t
}

fn random_element(r: &mut ChaCha8Rng, n: usize, d: usize) -> TrivExtElement<Q> {
    let tensor = random_rational_tensor(r, n, d, 5);
    let m = random_rational_series(r, n, d - 1, 3).with_degree(d);
    TrivExtElement { tensor, m }
}

fn trivext_associative(r: &mut ChaCha8Rng) -> bool {
    let (n, d) = (2, 4);
    let t = TrivExt::<Q>::kks(n, d).unwrap();
    let (a, b, c) = (random_element(r, n, d), random_element(r, n, d), random_element(r, n, d));
    t.mul(&t.mul(&a, &b).unwrap(), &c).unwrap() == t.mul(&a, &t.mul(&b, &c).unwrap()).unwrap()
}

fn trivext_relations(r: &mut ChaCha8Rng) -> bool {
    use DkGenerator::{Iw, Iz, Zw};
    let (n, d) = (3, 4);
    let t = TrivExt::<Q>::kks(n, d).unwrap();
    let g = |w| t.pi_generator(w);
    let zero = |u: TrivExtElement<Q>, v: TrivExtElement<Q>| t.commutator(&u, &v).unwrap().is_zero();
    let (i, j) = (r.gen_range(0..n), r.gen_range(0..n));
    (i == j || zero(g(Iz(i)), g(Iw(j))))
        && zero(g(Zw), g(Iz(i)).add(&g(Iw(i))))
        && zero(g(Iz(i)), g(Iw(i)).add(&g(Zw)))
        && zero(g(Iw(i)), g(Iz(i)).add(&g(Zw)))
        && t.pi(&[Zw, Zw]).unwrap().is_zero()
}

fn trivext_squares(r: &mut ChaCha8Rng) -> bool {
    let (n, d) = (3, 4);
    let t = TrivExt::<Q>::kks(n, d).unwrap();
    let a = random_rational_series(r, n, d, 8);
    (0..n).all(|k| t.square_z(k, &a).unwrap() == d_right(k, &a) && t.square_w(k, &a).unwrap() == d_left(k, &a))
        && t.square_zw(&a).unwrap() == -&mu_bar_kks(&a)
}

const CHECKS: [(&str, Check); 14] = [
    ("hopf: coproduct is multiplicative and counital", hopf_coproduct),
    ("hopf: antipode axiom and S^2 = id", hopf_antipode),
    ("fox: reconstruction identity", fox_reconstruction),
    ("fox: pairing axioms for kks, inner, left, right", fox_pairing_axioms),
    ("fox: kks pairing is skew", kks_skew),
    ("double bracket: derivation, antisymmetry, counit gives pairing", double_bracket_axioms),
    ("coaction: quasi-derivation law of mu_bar", quasi_derivation),
    ("coaction: product rule", coaction_product_rule),
    ("brackets: inner and partial inner pairings vanish on traces", traces_vanish),
    ("brackets: D d^R_m = D d^L_m", fox_double_derivations),
    ("brackets: alpha and beta are inverse pairs", alpha_beta_inverse),
    ("trivext: product is associative", trivext_associative),
    ("trivext: relations map to zero", trivext_relations),
    ("trivext: squares are d^R, d^L and -mu_bar", trivext_squares),
];

/// Runs every identity `cases` times with inputs drawn from `seed`.
pub fn algebra_suite(seed: u64, cases: usize) -> Vec<SuiteLine> {
    let mut r = rng(seed);
    CHECKS
        .iter()
        .map(|(name, check)| {
            let failures = (0..cases).filter(|_| !check(&mut r)).count();
            SuiteLine { name, cases, failures }
        })
        .collect()
}
