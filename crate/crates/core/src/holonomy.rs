//! Regularized holonomies of the KZ connection `(1/2πi) Σ x_i dlog(z − z_i)`
//! along piecewise-linear paths.
//!
//! Transport is computed degree by degree on Gauss–Legendre panels. At a
//! tangential anchor `(z_p, v)` the local solution
//! `Ψ_p(z) = G(z)·((z − z_p)/v)^{x_p/2πi}` is evaluated from its convergent
//! Frobenius series, so no cutoff extrapolation is needed.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::coefficients::two_pi_i;
use crate::error::{Error, Result};
use crate::free_hopf::{FreeSeries, Word};
use crate::paths::{Anchor, PLPath, PunctureConfig};

mod checks;
mod dense;

pub use checks::*;
use dense::Dense;

type C = Complex64;

const NODES: usize = 16;
const MAX_PANEL_DEPTH: usize = 60;

struct Rule {
    x: [f64; NODES],
    w: [f64; NODES],
    /// `s[j][l] = ∫_{-1}^{x_j} ℓ_l`.
    s: [[f64; NODES]; NODES],
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    // (P_n(x), P_{n-1}(x))
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

fn rule() -> &'static Rule {
    static RULE: OnceLock<Rule> = OnceLock::new();
    RULE.get_or_init(|| {
        let m = NODES;
        let mut x = [0.0; NODES];
        let mut w = [0.0; NODES];
        for i in 0..m {
            let mut r = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, q) = legendre(m, r);
                let dp = m as f64 * (r * p - q) / (r * r - 1.0);
                let step = p / dp;
                r -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            let (p, q) = legendre(m, r);
            let dp = m as f64 * (r * p - q) / (r * r - 1.0);
            x[m - 1 - i] = r;
            w[m - 1 - i] = 2.0 / ((1.0 - r * r) * dp * dp);
        }
        let mut s = [[0.0; NODES]; NODES];
        for l in 0..m {
            // Legendre coefficients of the Lagrange basis polynomial ℓ_l
            for n in 0..m {
                let c = (2 * n + 1) as f64 / 2.0 * w[l] * legendre(n, x[l]).0;
                for j in 0..m {
                    let int = if n == 0 {
                        x[j] + 1.0
                    } else {
                        (legendre(n + 1, x[j]).0 - legendre(n - 1, x[j]).0) / (2 * n + 1) as f64
                    };
                    s[j][l] += c * int;
                }
            }
        }
        Rule { x, w, s }
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolonomySettings {
    /// Largest admissible panel length relative to its distance from the
    /// nearest puncture.
    pub panel_ratio: f64,
    /// Distances from the anchor at which the two local-solution evaluations
    /// are made, relative to the anchor's convergence radius.
    pub cutoffs: (f64, f64),
    /// Upper bound for the reported accuracy estimate.
    pub accuracy: f64,
}

impl Default for HolonomySettings {
    fn default() -> Self {
        HolonomySettings { panel_ratio: 1.0, cutoffs: (0.25, 0.125), accuracy: 1e-9 }
    }
}

#[derive(Debug, Clone)]
pub struct HolonomyResult {
    pub series: FreeSeries<C>,
    pub accuracy_estimate: f64,
    /// Cutoff distances used at the start and end anchors for the two runs.
    pub cutoffs: [(f64, f64); 2],
}

#[derive(Debug, Clone)]
pub struct Connection {
    punctures: PunctureConfig,
    degree: usize,
    settings: HolonomySettings,
}

impl Connection {
    pub fn new(punctures: PunctureConfig, degree: usize) -> Self {
        Connection { punctures, degree, settings: HolonomySettings::default() }
    }

    pub fn with_settings(mut self, settings: HolonomySettings) -> Self {
        self.settings = settings;
        self
    }

    pub fn n(&self) -> usize {
        self.punctures.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn punctures(&self) -> &PunctureConfig {
        &self.punctures
    }

    pub fn settings(&self) -> HolonomySettings {
        self.settings
    }

    fn check_path(&self, path: &PLPath) -> Result<()> {
        if path.punctures() != &self.punctures {
            return Err(Error::Validation("path and connection use different punctures".into()));
        }
        Ok(())
    }

    /// Parallel transport between regular anchors.
    pub fn transport(&self, path: &PLPath) -> Result<FreeSeries<C>> {
        self.check_path(path)?;
        if path.start().is_tangential() || path.end().is_tangential() {
            return Err(Error::Domain("transport needs regular anchors; use holonomy".into()));
        }
        let one = Dense::one(self.n(), self.degree);
        Ok(self.transport_dense(path.nodes(), one)?.to_series())
    }

    /// `Hol^reg = Ψ_q(z)^{-1} Ψ_p(z)`, evaluated for two cutoff choices.
    pub fn holonomy(&self, path: &PLPath) -> Result<HolonomyResult> {
        self.check_path(path)?;
        let (c1, c2) = self.settings.cutoffs;
        let (h1, d1) = self.holonomy_at(path, c1)?;
        let (h2, d2) = self.holonomy_at(path, c2)?;
        let est = h1.max_abs_diff(&h2);
        if !(est <= self.settings.accuracy) {
            return Err(Error::Accuracy(format!(
                "holonomy estimates differ by {est:.3e} (target {:.1e})",
                self.settings.accuracy
            )));
        }
        Ok(HolonomyResult { series: h2, accuracy_estimate: est, cutoffs: [d1, d2] })
    }

    pub fn hol(&self, path: &PLPath) -> Result<FreeSeries<C>> {
        Ok(self.holonomy(path)?.series)
    }

    fn cutoff(&self, path: &PLPath, at_start: bool, rel: f64) -> f64 {
        let nodes = path.nodes();
        let m = nodes.len();
        let (anchor, leg) = if at_start {
            (path.start(), (nodes[1] - nodes[0]).norm())
        } else {
            (path.end(), (nodes[m - 2] - nodes[m - 1]).norm())
        };
        let p = anchor.puncture().expect("tangential anchor");
        rel * leg.min(self.punctures.isolation(p))
    }

    fn holonomy_at(&self, path: &PLPath, rel: f64) -> Result<(FreeSeries<C>, (f64, f64))> {
        let nodes = path.nodes();
        let m = nodes.len();
        let mut pts = nodes.to_vec();
        let (n, d) = (self.n(), self.degree);
        let (mut ds, mut de) = (0.0, 0.0);
        let init = match path.start() {
            Anchor::Regular(_) => Dense::one(n, d),
            Anchor::Tangential { puncture, direction } => {
                ds = self.cutoff(path, true, rel);
                pts[0] = nodes[0] + direction * ds;
                self.local_solution(puncture, direction * ds, ds)
            }
        };
        let fin = match path.end() {
            Anchor::Regular(_) => None,
            Anchor::Tangential { puncture, direction } => {
                de = self.cutoff(path, false, rel);
                pts[m - 1] = nodes[m - 1] + direction * de;
                Some(self.local_solution(puncture, direction * de, de))
            }
        };
        let psi = self.transport_dense(&pts, init)?.to_series();
        let h = match fin {
            None => psi,
            Some(q) => &q.to_series().inverse()? * &psi,
        };
        Ok((h, (ds, de)))
    }

    /// `Ψ_p(z_p + u) = G(u) exp((x_p/2πi) ln δ)` with `|u| = δ`.
    fn local_solution(&self, p: usize, u: C, delta: f64) -> Dense {
        let (n, d) = (self.n(), self.degree);
        let zp = self.punctures.point(p);
        let tpi = two_pi_i();
        let ratios: Vec<(usize, C)> = (0..n).filter(|&k| k != p).map(|k| (k, u / (self.punctures.point(k) - zp))).collect();
        // Ã_j = -(1/2πi) Σ_k x_k (u/d_k)^{j+1}
        let a_coef = |j: usize| -> Vec<(usize, C)> {
            ratios.iter().map(|&(k, r)| (k, -r.powu(j as u32 + 1) / tpi)).collect()
        };
        let mut terms: Vec<Dense> = vec![Dense::one(n, d)];
        let mut g = Dense::one(n, d);
        let mut a_cache: Vec<Vec<(usize, C)>> = Vec::new();
        let max_terms = 400;
        for k in 1..max_terms {
            while a_cache.len() < k {
                a_cache.push(a_coef(a_cache.len()));
            }
            let mut r = Dense::zero(n, d);
            for j in 0..k {
                let gm = &terms[k - 1 - j];
                for &(gen, c) in &a_cache[j] {
                    r.add_left_letter(gen, c, gm);
                }
            }
            // (k − ad_{x_p}/2πi)^{-1} r = Σ_s (ad/2πi)^s r / k^{s+1}
            let kk = k as f64;
            let mut acc = r.scaled(C::new(1.0 / kk, 0.0));
            let mut cur = acc.clone();
            for _ in 0..d {
                cur = cur.ad_letter(p).scaled(C::new(1.0 / kk, 0.0) / tpi);
                if cur.is_zero() {
                    break;
                }
                acc.add_assign(&cur);
            }
            let size = acc.norm_inf();
            g.add_assign(&acc);
            terms.push(acc);
            if size < 1e-20 && k > 4 {
                break;
            }
        }
        let e = Dense::exp_letter(n, d, p, C::new(delta.ln(), 0.0) / tpi);
        g.mul(&e)
    }

    fn transport_dense(&self, pts: &[C], init: Dense) -> Result<Dense> {
        let mut state = init;
        for w in pts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let mut panels = Vec::new();
            self.panels(a, b, 0.0, 1.0, 0, &mut panels)?;
            for (t0, t1) in panels {
                state = self.panel(a, b, t0, t1, &state);
            }
        }
        Ok(state)
    }

    fn panels(&self, a: C, b: C, t0: f64, t1: f64, depth: usize, out: &mut Vec<(f64, f64)>) -> Result<()> {
        let (p, q) = (a + (b - a) * t0, a + (b - a) * t1);
        let len = (q - p).norm();
        let dist = self
            .punctures
            .points()
            .iter()
            .map(|z| seg_dist(*z, p, q))
            .fold(f64::INFINITY, f64::min);
        if len <= self.settings.panel_ratio * dist {
            out.push((t0, t1));
            return Ok(());
        }
        if depth >= MAX_PANEL_DEPTH || dist < 1e-14 {
            return Err(Error::Accuracy(format!(
                "panel subdivision limit reached on segment {a} -> {b} (too close to a puncture)"
            )));
        }
        let mid = 0.5 * (t0 + t1);
        self.panels(a, b, t0, mid, depth + 1, out)?;
        self.panels(a, b, mid, t1, depth + 1, out)
    }

    fn panel(&self, a: C, b: C, t0: f64, t1: f64, start: &Dense) -> Dense {
        let r = rule();
        let (n, d) = (self.n(), self.degree);
        let half = 0.5 * (t1 - t0);
        let tpi = two_pi_i();
        // ω[i][l] including the panel Jacobian
        let mut omega = vec![[C::new(0.0, 0.0); NODES]; n];
        for l in 0..NODES {
            let t = t0 + half * (r.x[l] + 1.0);
            let z = a + (b - a) * t;
            for (i, zi) in self.punctures.points().iter().enumerate() {
                omega[i][l] = (b - a) * half / (tpi * (z - zi));
            }
        }
        let mut vals: Vec<Vec<[C; NODES]>> = Vec::with_capacity(d + 1);
        vals.push(vec![[start.level(0)[0]; NODES]]);
        let mut end = Dense::zero(n, d);
        end.level_mut(0)[0] = start.level(0)[0];
        for k in 1..=d {
            let prev_len = vals[k - 1].len();
            let mut cur = vec![[C::new(0.0, 0.0); NODES]; prev_len * n];
            for i in 0..n {
                for w in 0..prev_len {
                    let idx = i * prev_len + w;
                    let s0 = start.level(k)[idx];
                    let mut f = [C::new(0.0, 0.0); NODES];
                    let pv = &vals[k - 1][w];
                    for l in 0..NODES {
                        f[l] = omega[i][l] * pv[l];
                    }
                    let mut tot = s0;
                    for l in 0..NODES {
                        tot += f[l] * r.w[l];
                    }
                    end.level_mut(k)[idx] = tot;
                    let out = &mut cur[idx];
                    for j in 0..NODES {
                        let mut acc = s0;
                        for l in 0..NODES {
                            acc += f[l] * r.s[j][l];
                        }
                        out[j] = acc;
                    }
                }
            }
            vals.push(cur);
        }
        end
    }
}

fn seg_dist(p: C, a: C, b: C) -> f64 {
    let ab = b - a;
    let l2 = ab.norm_sqr();
    if l2 == 0.0 {
        return (p - a).norm();
    }
    let u = ((p - a).re * ab.re + (p - a).im * ab.im) / l2;
    (p - (a + ab * u.clamp(0.0, 1.0))).norm()
}

/// The KZ associator: `n = 2`, `z = (0, 1)`, straight path.
pub fn associator(degree: usize, accuracy: f64) -> Result<HolonomyResult> {
    let p = PunctureConfig::on_real_line(2);
    let path = PLPath::straight(p.clone(), 0, 1)?;
    let conn = Connection::new(p, degree).with_settings(HolonomySettings { accuracy, ..Default::default() });
    conn.holonomy(&path)
}

/// Coefficient of a word given by 0-based letters.
pub fn coeff_of(series: &FreeSeries<C>, letters: &[usize]) -> C {
    Word::from_letters(letters).map(|w| series.coeff(&w)).unwrap_or_default()
}

/// Reads `ζ(m)` off the associator: the coefficient of `x_1^{m-1} x_2` is
/// `-ζ(m)/(2πi)^m`.
pub fn zeta_from_associator(phi: &FreeSeries<C>, m: usize) -> f64 {
    let mut w = vec![0; m - 1];
    w.push(1);
    -(coeff_of(phi, &w) * two_pi_i().powu(m as u32)).re
}

#[cfg(test)]
mod tests;
