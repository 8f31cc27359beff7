//! Matrix representations `Rep(A, N) = Mat_N(ℂ)^n`, the Poisson brackets
//! they inherit from double brackets, and a finite-difference KKS oracle.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::coefficients::r_am_series;
use crate::error::{Error, Result};
use crate::free_hopf::{FreeSeries, TensorSeries, Word};
use crate::holonomy::{coeff_of, joined_holonomy, Connection};
use crate::paths::{intersections, Anchor, PLPath};

mod pi;
mod comparison;

pub use pi::{gl_action, PiBivector};
pub use comparison::{compare_holonomy_brackets, BivectorReport};

type C = Complex64;
pub type Mat = DMatrix<C>;

/// A point `(X_1, …, X_n)` of the representation space.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixTuple {
    mats: Vec<Mat>,
}

impl MatrixTuple {
    pub fn new(mats: Vec<Mat>) -> Result<Self> {
        let size = mats.first().map(|m| m.nrows()).unwrap_or(0);
        if mats.is_empty() || size == 0 {
            return Err(Error::Shape("need at least one non-empty matrix".into()));
        }
        for (l, m) in mats.iter().enumerate() {
            if m.nrows() != size || m.ncols() != size {
                return Err(Error::Shape(format!("matrix {l} is not {size}x{size}")));
            }
            if m.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
                return Err(Error::Validation(format!("matrix {l} has a non-finite entry")));
            }
        }
        Ok(MatrixTuple { mats })
    }

    /// Random matrices with Frobenius norm (hence spectral norm) at most `radius`.
    pub fn random<R: Rng>(rng: &mut R, n: usize, size: usize, radius: f64) -> Self {
        let mats = (0..n)
            .map(|_| {
                let m = Mat::from_fn(size, size, |_, _| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
                let target = radius * rng.gen_range(0.5..1.0);
                m.scale(target / m.norm())
            })
            .collect();
        MatrixTuple { mats }
    }

    pub fn n(&self) -> usize {
        self.mats.len()
    }

    /// Matrix size `N`.
    pub fn size(&self) -> usize {
        self.mats[0].nrows()
    }

    pub fn mats(&self) -> &[Mat] {
        &self.mats
    }

    pub fn get(&self, l: usize) -> &Mat {
        &self.mats[l]
    }

    /// `max_l ‖X_l‖`, Frobenius norm.
    pub fn norm_bound(&self) -> f64 {
        self.mats.iter().map(|m| m.norm()).fold(0.0, f64::max)
    }

    fn shifted(&self, l: usize, a: usize, b: usize, h: f64) -> Self {
        let mut out = self.clone();
        out.mats[l][(a, b)] += h;
        out
    }
}

/// Value of a truncated series at a matrix tuple.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub value: Mat,
    /// `Σ_{k>D} (n r)^k` with `r = max ‖X_l‖`: the dropped tail for unit-size
    /// coefficients. Advisory only.
    pub tail_bound: f64,
}

pub fn tail_bound(n: usize, degree: usize, r: f64) -> f64 {
    let q = n as f64 * r;
    if q >= 1.0 {
        f64::INFINITY
    } else {
        q.powi(degree as i32 + 1) / (1.0 - q)
    }
}

fn check_generators(n: usize, x: &MatrixTuple) -> Result<()> {
    if n != x.n() {
        return Err(Error::Shape(format!("series has {n} generators but {} matrices were given", x.n())));
    }
    Ok(())
}

/// Products `X_w`, built from the longest cached prefix.
struct Monomials<'a> {
    x: &'a MatrixTuple,
    cache: FxHashMap<Word, Mat>,
}

impl<'a> Monomials<'a> {
    fn new(x: &'a MatrixTuple) -> Self {
        Monomials { x, cache: FxHashMap::default() }
    }

    fn get(&mut self, w: Word) -> Mat {
        if let Some(m) = self.cache.get(&w) {
            return m.clone();
        }
        let m = match w.len() {
            0 => Mat::identity(self.x.size(), self.x.size()),
            k => {
                let (head, last) = w.split_at(k - 1);
                self.get(head) * self.x.get(last.get(0))
            }
        };
        self.cache.insert(w, m.clone());
        m
    }
}

/// `Σ_w c_w X_{w_1} ⋯ X_{w_k}`.
pub fn evaluate(series: &FreeSeries<C>, x: &MatrixTuple) -> Result<Evaluation> {
    check_generators(series.n(), x)?;
    let mut mono = Monomials::new(x);
    let mut value = Mat::zeros(x.size(), x.size());
    for (w, c) in series.terms() {
        value += mono.get(*w) * *c;
    }
    let tail_bound = tail_bound(x.n(), series.degree(), x.norm_bound());
    Ok(Evaluation { value, tail_bound })
}

/// Entries `{a_ij, b_uv}` for all index quadruples, stored at
/// `((i N + j) N + u) N + v`.
#[derive(Debug, Clone, PartialEq)]
pub struct BracketTable {
    pub size: usize,
    pub values: Vec<C>,
}

impl BracketTable {
    fn zero(size: usize) -> Self {
        BracketTable { size, values: vec![C::new(0.0, 0.0); size.pow(4)] }
    }

    fn idx(&self, i: usize, j: usize, u: usize, v: usize) -> usize {
        ((i * self.size + j) * self.size + u) * self.size + v
    }

    pub fn get(&self, i: usize, j: usize, u: usize, v: usize) -> C {
        self.values[self.idx(i, j, u, v)]
    }

    fn add(&mut self, i: usize, j: usize, u: usize, v: usize, c: C) {
        let k = self.idx(i, j, u, v);
        self.values[k] += c;
    }

    pub fn max_abs_diff(&self, other: &BracketTable) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// `Σ_{i,u} {a_ii, b_uu}`, the bracket of traces.
    pub fn trace(&self) -> C {
        let n = self.size;
        (0..n).flat_map(|i| (0..n).map(move |u| (i, u))).map(|(i, u)| self.get(i, i, u, u)).sum()
    }

    fn plus(&self, other: &BracketTable) -> BracketTable {
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        BracketTable { size: self.size, values }
    }
}

fn index_check(x: &MatrixTuple, idx: [usize; 4]) -> Result<()> {
    if idx.iter().any(|&k| k >= x.size()) {
        return Err(Error::OutOfRange(format!("matrix index out of range for N = {}", x.size())));
    }
    Ok(())
}

/// `{a_ij, b_uv} = (db)'_{uj} (db)''_{iv}` for `db = {{a, b}}`.
pub fn vdb_bracket(db: &TensorSeries<C>, x: &MatrixTuple, i: usize, j: usize, u: usize, v: usize) -> Result<C> {
    index_check(x, [i, j, u, v])?;
    Ok(vdb_table(db, x)?.get(i, j, u, v))
}

/// [`vdb_bracket`] for every index quadruple.
pub fn vdb_table(db: &TensorSeries<C>, x: &MatrixTuple) -> Result<BracketTable> {
    check_generators(db.n(), x)?;
    let size = x.size();
    let mut mono = Monomials::new(x);
    // Group by left leg so each left monomial pairs with one evaluated right sum.
    let mut by_left: FxHashMap<Word, Mat> = FxHashMap::default();
    for ((a, b), c) in db.terms() {
        let right = mono.get(*b) * *c;
        *by_left.entry(*a).or_insert_with(|| Mat::zeros(size, size)) += right;
    }
    let mut out = BracketTable::zero(size);
    for (a, right) in by_left {
        let left = mono.get(a);
        for (i, j, u, v) in quadruples(size) {
            out.add(i, j, u, v, left[(u, j)] * right[(i, v)]);
        }
    }
    Ok(out)
}

fn quadruples(n: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..n.pow(4)).map(move |k| (k / n.pow(3), (k / n.pow(2)) % n, (k / n) % n, k % n))
}

pub const FD_STEP: f64 = 1e-5;

/// `∂F/∂(X_l)_{ab}` by central differences at steps `h` and `h/2`, combined
/// by Richardson extrapolation.
fn partial<T, F>(f: &F, x: &MatrixTuple, l: usize, a: usize, b: usize, h: f64) -> T
where
    F: Fn(&MatrixTuple) -> T,
    T: std::ops::Sub<Output = T> + std::ops::Mul<C, Output = T> + std::ops::Add<Output = T>,
{
    let central = |h: f64| (f(&x.shifted(l, a, b, h)) - f(&x.shifted(l, a, b, -h))) * C::from(0.5 / h);
    let (d1, d2) = (central(h), central(h / 2.0));
    d2 * C::from(4.0 / 3.0) + d1 * C::from(-1.0 / 3.0)
}

/// Gradients of a scalar function: `grad[l][(a, b)] = ∂F/∂(X_l)_{ab}`.
pub fn gradient<F: Fn(&MatrixTuple) -> C>(f: F, x: &MatrixTuple) -> Vec<Mat> {
    let n = x.size();
    (0..x.n()).map(|l| Mat::from_fn(n, n, |a, b| partial(&f, x, l, a, b, FD_STEP))).collect()
}

/// Gradients of every entry of a matrix-valued function:
/// `jac[l][a * N + b] = ∂F/∂(X_l)_{ab}`.
/// Probes run on the rayon pool; results are collected in a fixed order.
pub fn jacobian<F: Fn(&MatrixTuple) -> Mat + Sync>(f: F, x: &MatrixTuple) -> Vec<Vec<Mat>> {
    let n = x.size();
    let flat: Vec<Mat> = (0..x.n() * n * n)
        .into_par_iter()
        .map(|k| partial(&f, x, k / (n * n), (k % (n * n)) / n, k % n, FD_STEP))
        .collect();
    flat.chunks(n * n).map(|c| c.to_vec()).collect()
}

/// Gradient of the entry `(i, j)` out of a [`jacobian`].
pub fn entry_gradient(jac: &[Vec<Mat>], i: usize, j: usize) -> Vec<Mat> {
    jac.iter().map(|per| {
        let n = per[0].nrows();
        Mat::from_fn(n, n, |a, b| per[a * n + b][(i, j)])
    })
    .collect()
}

/// The KKS bracket on `Mat_N^n` from gradients:
/// `Σ_l tr(X_l [∇_l G, ∇_l F])` with `(∇_l F)_{ba} = ∂F/∂(X_l)_{ab}`.
/// On coordinates this gives `{(X)_ij, (X)_kl} = δ_jk X_il − δ_il X_kj`.
pub fn kks_from_gradients(x: &MatrixTuple, gf: &[Mat], gg: &[Mat]) -> C {
    let mut out = C::new(0.0, 0.0);
    for (l, xl) in x.mats().iter().enumerate() {
        let (f, g) = (gf[l].transpose(), gg[l].transpose());
        out += (xl * (&g * &f - &f * &g)).trace();
    }
    out
}

/// Finite-difference KKS bracket `{F, G}(X)`.
pub fn kks_oracle<F, G>(f: F, g: G, x: &MatrixTuple) -> C
where
    F: Fn(&MatrixTuple) -> C,
    G: Fn(&MatrixTuple) -> C,
{
    kks_from_gradients(x, &gradient(f, x), &gradient(g, x))
}

/// [`kks_oracle`] on all entries of two matrix-valued functions:
/// `{F_ij, G_uv}`.
pub fn kks_table(x: &MatrixTuple, jf: &[Vec<Mat>], jg: &[Vec<Mat>]) -> BracketTable {
    table_from(x.size(), jf, jg, |gf, gg| kks_from_gradients(x, gf, gg))
}

fn table_from(size: usize, jf: &[Vec<Mat>], jg: &[Vec<Mat>], op: impl Fn(&[Mat], &[Mat]) -> C) -> BracketTable {
    let gf: Vec<Vec<Mat>> = (0..size * size).map(|k| entry_gradient(jf, k / size, k % size)).collect();
    let gg: Vec<Vec<Mat>> = (0..size * size).map(|k| entry_gradient(jg, k / size, k % size)).collect();
    let mut out = BracketTable::zero(size);
    for (i, j, u, v) in quadruples(size) {
        out.add(i, j, u, v, op(&gf[i * size + j], &gg[u * size + v]));
    }
    out
}
