//! Closed-form right-hand sides for the KKS operations on holonomies, and
//! their comparison with the algebraic operations applied to computed series.

use super::*;
use crate::brackets::{mu_bar_kks, necklace_bracket, necklace_cobracket};
use crate::coefficients::{r_am_series, r_zeta_scaled};
use crate::fox::{d_left, d_right, rho_kks};
use crate::free_hopf::{CycWedge, CyclicSeries, TensorSeries};
use crate::paths::{intersections, shared_legs, LegEnd};
use crate::trivext::{associator_tail, TailSide, TrivExt, TrivExtElement};

fn tangential(a: Anchor, what: &str) -> Result<(usize, C)> {
    match a {
        Anchor::Tangential { puncture, direction } => Ok((puncture, direction)),
        Anchor::Regular(_) => Err(Error::Domain(format!("{what} anchor must be tangential"))),
    }
}

fn real(x: f64) -> C {
    C::new(x, 0.0)
}

/// The operations lower degree, so holonomies are computed one degree above
/// the comparison degree.
fn raised(conn: &Connection) -> Connection {
    Connection::new(conn.punctures().clone(), conn.degree() + 1).with_settings(conn.settings())
}

/// `Hol(ga[s,1]) · Hol(gb[0,t])`, where `ha`, `hb` are the full holonomies.
/// Cut points on the legs of a shared tangential anchor are replaced by their
/// limit at the anchor, where the leg pieces cancel exactly.
pub fn joined_holonomy(
    conn: &Connection,
    ga: &PLPath,
    ha: &FreeSeries<C>,
    s: f64,
    gb: &PLPath,
    hb: &FreeSeries<C>,
    t: f64,
) -> Result<FreeSeries<C>> {
    let one = FreeSeries::one(conn.n(), conn.degree());
    if let Some((leg_b, leg_a)) = shared_legs(gb, t, ga, s) {
        let left = if leg_a == LegEnd::Start { ha } else { &one };
        let right = if leg_b == LegEnd::End { hb } else { &one };
        return Ok(left * right);
    }
    let tail = conn.hol(&ga.piece(s, 1.0)?)?;
    let head = conn.hol(&gb.piece(0.0, t)?)?;
    Ok(&tail * &head)
}

/// `Σ_l ε_l Hol(γ[s_l,1]) Hol(γ[0,t_l])`.
fn crossing_sum(conn: &Connection, path: &PLPath, h: &FreeSeries<C>) -> Result<FreeSeries<C>> {
    let mut out = FreeSeries::zero(conn.n(), conn.degree());
    for x in path.self_intersections()? {
        out += &joined_holonomy(conn, path, h, x.s, path, h, x.t)?.scale(&real(x.sign as f64));
    }
    Ok(out)
}

/// Right-hand side of the reduced coaction formula
/// `H r_ζ(−x_p) + rot H − r_ζ(x_q) H + Σ ε Hol(γ[s,1])Hol(γ[0,t]) − d^L_p H − d^R_q H`
/// for a path between tangential anchors. For loops (`p = q`) this is the
/// formula obtained by setting `p = q = m`.
pub fn mu_bar_rhs(conn: &Connection, path: &PLPath, h: &FreeSeries<C>) -> Result<FreeSeries<C>> {
    let (p, _) = tangential(path.start(), "start")?;
    let (q, _) = tangential(path.end(), "end")?;
    let (n, d) = (conn.n(), conn.degree());
    let rot = path.rotation_number()?;
    let mut out = h * &r_zeta_scaled::<C>(n, p, -1, d)?;
    out += &h.scale(&real(rot));
    out -= &(&r_zeta_scaled::<C>(n, q, 1, d)? * h);
    out += &crossing_sum(conn, path, h)?;
    out -= &d_left(p, h);
    out -= &d_right(q, h);
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct IdentityCheck {
    pub lhs: FreeSeries<C>,
    pub rhs: FreeSeries<C>,
    pub discrepancy: f64,
    /// Numerical accuracy of the holonomies involved.
    pub accuracy: f64,
}

impl IdentityCheck {
    /// Truncates both sides to `degree` before comparing.
    fn new(lhs: FreeSeries<C>, rhs: FreeSeries<C>, accuracy: f64, degree: usize) -> Self {
        let (lhs, rhs) = (lhs.with_degree(degree), rhs.with_degree(degree));
        let discrepancy = lhs.max_abs_diff(&rhs);
        IdentityCheck { lhs, rhs, discrepancy, accuracy }
    }
}

/// Compares `μ̄_KKS(H)` with [`mu_bar_rhs`] up to `conn.degree()`.
pub fn check_mu_bar(conn: &Connection, path: &PLPath) -> Result<IdentityCheck> {
    let d = conn.degree();
    let conn = &raised(conn);
    let res = conn.holonomy(path)?;
    let lhs = mu_bar_kks(&res.series);
    let rhs = mu_bar_rhs(conn, path, &res.series)?;
    Ok(IdentityCheck::new(lhs, rhs, res.accuracy_estimate, d))
}

enum PairShape {
    Paths { p: usize, q: usize, r: usize, s: usize },
    Loops { m: usize },
}

fn pair_shape(g2: &PLPath, g1: &PLPath) -> Result<PairShape> {
    let a = [
        tangential(g1.start(), "start")?,
        tangential(g1.end(), "end")?,
        tangential(g2.start(), "start")?,
        tangential(g2.end(), "end")?,
    ];
    let same = |i: usize, j: usize| a[i].0 == a[j].0 && (a[i].1 - a[j].1).norm() <= 1e-9;
    let shared = |i: usize, j: usize| a[i].0 == a[j].0;
    if (0..4).all(|i| same(0, i)) {
        return Ok(PairShape::Loops { m: a[0].0 });
    }
    for (i, j) in [(0, 1), (0, 2), (0, 3), (1, 3), (2, 3)] {
        if shared(i, j) {
            return Err(Error::Domain(
                "anchors must be distinct except for the end of the first path and the start of the second".into(),
            ));
        }
    }
    if shared(1, 2) && !same(1, 2) {
        return Err(Error::Domain("a shared anchor must use the same direction on both paths".into()));
    }
    Ok(PairShape::Paths { p: a[0].0, q: a[1].0, r: a[2].0, s: a[3].0 })
}

/// Right-hand side of the Fox pairing formula for `ρ_KKS(H2, H1)`, with
/// `γ1: p → q` and `γ2: r → s`. Loops at a common anchor use the loop
/// version of the formula.
pub fn rho_paths(conn: &Connection, g2: &PLPath, g1: &PLPath) -> Result<FreeSeries<C>> {
    let shape = pair_shape(g2, g1)?;
    let (n, d) = (conn.n(), conn.degree());
    let h1 = conn.hol(g1)?;
    let h2 = conn.hol(g2)?;
    let mut out = FreeSeries::zero(n, d);
    for x in intersections(g1, g2)? {
        out += &joined_holonomy(conn, g2, &h2, x.s, g1, &h1, x.t)?.scale(&real(x.sign as f64));
    }
    match shape {
        PairShape::Paths { p, q, r, s } => {
            if q == r {
                out += &(&(&h2 * &r_am_series::<C>(n, r, d)?) * &h1);
            }
            out -= &d_right(s, &h1);
            out -= &d_left(p, &h2);
            out += &(&d_left(q, &h2) * &h1);
            out += &(&h2 * &d_right(r, &h1));
        }
        PairShape::Loops { m } => {
            let one = FreeSeries::one(n, d);
            let (a1, a2) = (&h1 - &one, &h2 - &one);
            out += &(&(&a2 * &r_am_series::<C>(n, m, d)?) * &a1);
            out += &(&d_left(m, &h2) * &a1);
            out += &(&a2 * &d_right(m, &h1));
        }
    }
    Ok(out)
}

pub fn check_rho_paths(conn: &Connection, g2: &PLPath, g1: &PLPath) -> Result<IdentityCheck> {
    let d = conn.degree();
    let conn = &raised(conn);
    let h1 = conn.holonomy(g1)?;
    let h2 = conn.holonomy(g2)?;
    let lhs = rho_kks(&h2.series, &h1.series)?;
    let rhs = rho_paths(conn, g2, g1)?;
    Ok(IdentityCheck::new(lhs, rhs, h1.accuracy_estimate.max(h2.accuracy_estimate), d))
}

#[derive(Debug, Clone)]
pub struct BracketCheck {
    pub lhs: CyclicSeries<C>,
    pub rhs: CyclicSeries<C>,
    pub discrepancy: f64,
    pub crossings: usize,
}

#[derive(Debug, Clone)]
pub struct CobracketCheck {
    pub lhs: CycWedge<C>,
    pub rhs: CycWedge<C>,
    pub discrepancy: f64,
    /// Discrepancy ignoring the terms `1 ∧ |a|`.
    pub discrepancy_mod_constants: f64,
    pub crossings: usize,
}

#[derive(Debug, Clone)]
pub struct GoldmanReport {
    pub bracket: BracketCheck,
    /// Cobracket checks for `γ2` and `γ1`.
    pub cobracket: [CobracketCheck; 2],
    pub accuracy: f64,
}

fn cyclic_diff(a: &CyclicSeries<C>, b: &CyclicSeries<C>, d: usize) -> f64 {
    let one = a.terms().filter(|(w, _)| w.len() <= d).map(|(w, c)| (c - b.coeff(w)).norm());
    let two = b.terms().filter(|(w, _)| w.len() <= d).map(|(w, c)| (c - a.coeff(w)).norm());
    one.chain(two).fold(0.0, f64::max)
}

fn wedge_diff(a: &CycWedge<C>, b: &CycWedge<C>, d: usize, skip_constants: bool) -> f64 {
    let keep = |x: &Word, y: &Word| x.len() + y.len() <= d && !(skip_constants && (x.is_empty() || y.is_empty()));
    let one = a.terms().filter(|((x, y), _)| keep(x, y)).map(|((x, y), c)| (c - b.coeff(x, y)).norm());
    let two = b.terms().filter(|((x, y), _)| keep(x, y)).map(|((x, y), c)| (c - a.coeff(x, y)).norm());
    one.chain(two).fold(0.0, f64::max)
}

fn wedge(a: &FreeSeries<C>, b: &FreeSeries<C>, c: C, out: &mut CycWedge<C>) {
    for (x, u) in a.terms() {
        for (y, v) in b.terms() {
            out.add_wedge(*x, *y, c * u * v);
        }
    }
}

/// `Σ_a ε_a |H1_{a←a} H2_{a←a}|` against `{|H2|, |H1|}`, up to `conn.degree()`.
pub fn check_necklace_bracket(conn: &Connection, g2: &PLPath, g1: &PLPath) -> Result<BracketCheck> {
    let d = conn.degree();
    let conn = &raised(conn);
    let h1 = conn.hol(g1)?;
    let h2 = conn.hol(g2)?;
    let lhs = necklace_bracket(&h2, &h1)?;
    let xs = intersections(g1, g2)?;
    let mut sum = FreeSeries::zero(conn.n(), conn.degree());
    for x in &xs {
        let a = joined_holonomy(conn, g1, &h1, x.t, g2, &h2, x.s)?;
        let b = joined_holonomy(conn, g2, &h2, x.s, g1, &h1, x.t)?;
        sum += &(&a * &b).scale(&real(x.sign as f64));
    }
    let rhs = sum.cyclic_project();
    let discrepancy = cyclic_diff(&lhs, &rhs, d);
    Ok(BracketCheck { lhs, rhs, discrepancy, crossings: xs.len() })
}

/// `δ(|H|)` against `Σ_l ε_l |Hol(γ[t,s])| ∧ |Hol(γ[s,1])Hol(γ[0,t])| + rot·(1 ∧ |H|)`.
pub fn check_necklace_cobracket(conn: &Connection, path: &PLPath) -> Result<CobracketCheck> {
    let d = conn.degree();
    let conn = &raised(conn);
    let h = conn.hol(path)?;
    let lhs = necklace_cobracket(&h);
    let mut rhs = CycWedge::zero(conn.n(), conn.degree());
    let one = FreeSeries::one(conn.n(), conn.degree());
    wedge(&one, &h, real(path.rotation_number()?), &mut rhs);
    let xs = path.self_intersections()?;
    for x in &xs {
        let mid = if shared_legs(path, x.t, path, x.s).is_some() {
            h.clone()
        } else {
            conn.hol(&path.piece(x.t, x.s)?)?
        };
        let rest = joined_holonomy(conn, path, &h, x.s, path, &h, x.t)?;
        wedge(&mid, &rest, real(x.sign as f64), &mut rhs);
    }
    Ok(CobracketCheck {
        discrepancy: wedge_diff(&lhs, &rhs, d, false),
        discrepancy_mod_constants: wedge_diff(&lhs, &rhs, d, true),
        lhs,
        rhs,
        crossings: xs.len(),
    })
}

/// Necklace bracket of two loops at a common tangential anchor and the
/// cobracket of each.
pub fn goldman_bracket_check(conn: &Connection, g2: &PLPath, g1: &PLPath) -> Result<GoldmanReport> {
    if !matches!(pair_shape(g2, g1)?, PairShape::Loops { .. }) {
        return Err(Error::Domain("both paths must be loops at one tangential anchor".into()));
    }
    let bracket = check_necklace_bracket(conn, g2, g1)?;
    let cobracket = [check_necklace_cobracket(conn, g2)?, check_necklace_cobracket(conn, g1)?];
    let r = raised(conn);
    let accuracy = r.holonomy(g1)?.accuracy_estimate.max(r.holonomy(g2)?.accuracy_estimate);
    Ok(GoldmanReport { bracket, cobracket, accuracy })
}

/// The `π_1`-projection of the generalized pentagon equation, evaluated in
/// the trivial extension `A⊗A ⊕ M`. Both sides are the `M` parts of
/// `Φ(t_zw,t_wq) Δ^{zw}(H) e^{rot t_zw} Φ(t_pz,t_zw)` and
/// `Δ^z_q(H) Π_l C_l^{-1} e^{-ε_l t_zw} C_l Δ^w_p(H)` with
/// `π_0(C_l) = Hol(γ[0,t_l]) ⊗ Hol(γ[s_l,1])^{-1}`.
pub fn pentagon_projection_check(conn: &Connection, path: &PLPath) -> Result<IdentityCheck> {
    let (p, _) = tangential(path.start(), "start")?;
    let (q, _) = tangential(path.end(), "end")?;
    let (n, d) = (conn.n(), conn.degree());
    let res = conn.holonomy(path)?;
    let h = &res.series;
    let t = TrivExt::<C>::kks(n, d)?;
    let tail = |side, k| -> Result<TrivExtElement<C>> {
        let mut u = t.one();
        u.m = associator_tail::<C>(side, k, n, d)?;
        Ok(u)
    };
    let rot = t.exp(&t.e().scale(&real(path.rotation_number()?)))?;
    let mut lhs = t.mul(&tail(TailSide::Left, q)?, &t.delta_zw(h)?)?;
    lhs = t.mul(&lhs, &rot)?;
    lhs = t.mul(&lhs, &tail(TailSide::Right, p)?)?;

    let mut rhs = t.delta_z(q, h)?;
    for x in path.self_intersections()? {
        let head = conn.hol(&path.piece(0.0, x.t)?)?;
        let tail = conn.hol(&path.piece(x.s, 1.0)?)?;
        let c = TensorSeries::tensor(&head, &tail.inverse()?);
        rhs = t.mul(&rhs, &t.conjugated_exponential(&c, x.sign as i32)?)?;
    }
    rhs = t.mul(&rhs, &t.delta_w(p, h)?)?;
    let tensor_gap = rhs.tensor.max_abs_diff(&lhs.tensor);
    let mut check = IdentityCheck::new(lhs.m, rhs.m, res.accuracy_estimate, d);
    check.discrepancy = check.discrepancy.max(tensor_gap);
    Ok(check)
}
