use num_complex::Complex64;

use crate::free_hopf::{FreeSeries, Word};

type C = Complex64;

/// Truncated series stored level by level; the word `w_1…w_k` sits at index
/// `Σ w_j n^{k-j}`.
#[derive(Debug, Clone)]
pub(crate) struct Dense {
    n: usize,
    levels: Vec<Vec<C>>,
}

impl Dense {
    pub fn zero(n: usize, degree: usize) -> Self {
        let levels = (0..=degree).map(|k| vec![C::new(0.0, 0.0); n.pow(k as u32)]).collect();
        Dense { n, levels }
    }

    pub fn one(n: usize, degree: usize) -> Self {
        let mut d = Dense::zero(n, degree);
        d.levels[0][0] = C::new(1.0, 0.0);
        d
    }

    pub fn degree(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, k: usize) -> &[C] {
        &self.levels[k]
    }

    pub fn level_mut(&mut self, k: usize) -> &mut [C] {
        &mut self.levels[k]
    }

    /// `exp(c x_p)`.
    pub fn exp_letter(n: usize, degree: usize, p: usize, c: C) -> Self {
        let mut d = Dense::zero(n, degree);
        let mut term = C::new(1.0, 0.0);
        let mut idx = 0;
        for k in 0..=degree {
            d.levels[k][idx] = term;
            term = term * c / (k + 1) as f64;
            idx = idx * n + p;
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.levels.iter().all(|l| l.iter().all(|c| c.norm_sqr() == 0.0))
    }

    pub fn norm_inf(&self) -> f64 {
        self.levels.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn scaled(&self, c: C) -> Self {
        let levels = self.levels.iter().map(|l| l.iter().map(|v| v * c).collect()).collect();
        Dense { n: self.n, levels }
    }

    pub fn add_assign(&mut self, other: &Dense) {
        for (a, b) in self.levels.iter_mut().zip(&other.levels) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
    }

    /// `self += c · x_i · other`.
    pub fn add_left_letter(&mut self, i: usize, c: C, other: &Dense) {
        for k in 1..self.levels.len() {
            let src = &other.levels[k - 1];
            let off = i * src.len();
            for (j, v) in src.iter().enumerate() {
                self.levels[k][off + j] += c * v;
            }
        }
    }

    /// `[x_p, self]`.
    pub fn ad_letter(&self, p: usize) -> Dense {
        let mut out = Dense::zero(self.n, self.degree());
        for k in 1..self.levels.len() {
            let src = &self.levels[k - 1];
            let len = src.len();
            for (j, v) in src.iter().enumerate() {
                out.levels[k][p * len + j] += v;
                out.levels[k][j * self.n + p] -= v;
            }
        }
        out
    }

    pub fn mul(&self, other: &Dense) -> Dense {
        let d = self.degree();
        let mut out = Dense::zero(self.n, d);
        for ka in 0..=d {
            for kb in 0..=d - ka {
                let b = &other.levels[kb];
                let target = &mut out.levels[ka + kb];
                for (ia, va) in self.levels[ka].iter().enumerate() {
                    if va.norm_sqr() == 0.0 {
                        continue;
                    }
                    let off = ia * b.len();
                    for (ib, vb) in b.iter().enumerate() {
                        target[off + ib] += va * vb;
                    }
                }
            }
        }
        out
    }

    pub fn to_series(&self) -> FreeSeries<C> {
        let n = self.n;
        let d = self.degree();
        let mut terms = Vec::new();
        for (k, level) in self.levels.iter().enumerate() {
            for (idx, c) in level.iter().enumerate() {
                if c.norm_sqr() == 0.0 {
                    continue;
                }
                let mut letters = vec![0; k];
                let mut r = idx;
                for slot in letters.iter_mut().rev() {
                    *slot = r % n;
                    r /= n;
                }
                terms.push((Word::from_letters(&letters).expect("word length"), *c));
            }
        }
        FreeSeries::from_terms(n, d, terms)
    }
}
