//! Piecewise-linear paths on the punctured plane: anchors, crossings with
//! signs, rotation numbers, composition and restriction.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Absolute guard for orientation tests. Geometry inside the band is rejected.
pub const GEOM_EPS: f64 = 1e-12;

/// Lateral displacement (relative to the leg length) used to separate legs
/// that leave a tangential anchor along the same ray.
const FAN: f64 = 1e-7;

#[inline]
fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

#[inline]
fn dot(a: Complex64, b: Complex64) -> f64 {
    a.re * b.re + a.im * b.im
}

fn dist_to_segment(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let l2 = ab.norm_sqr();
    if l2 == 0.0 {
        return (p - a).norm();
    }
    let u = (dot(p - a, ab) / l2).clamp(0.0, 1.0);
    (p - (a + ab * u)).norm()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PunctureConfig {
    points: Vec<Complex64>,
    min_distance: f64,
}

impl PunctureConfig {
    pub fn new(points: Vec<Complex64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Validation("no punctures".into()));
        }
        let mut min_distance = f64::INFINITY;
        for (i, a) in points.iter().enumerate() {
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(Error::Validation(format!("puncture {} is not finite", i + 1)));
            }
            for (j, b) in points.iter().enumerate().skip(i + 1) {
                let d = (a - b).norm();
                if d <= GEOM_EPS {
                    return Err(Error::Validation(format!("punctures {} and {} coincide", i + 1, j + 1)));
                }
                min_distance = min_distance.min(d);
            }
        }
        Ok(PunctureConfig { points, min_distance })
    }

    /// `z_k = k` for `k = 0..n`.
    pub fn on_real_line(n: usize) -> Self {
        Self::new((0..n).map(|k| Complex64::new(k as f64, 0.0)).collect()).expect("distinct integers")
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn point(&self, i: usize) -> Complex64 {
        self.points[i]
    }

    /// Infinite for a single puncture.
    pub fn min_distance(&self) -> f64 {
        self.min_distance
    }

    /// Distance from `z_i` to the nearest other puncture.
    pub fn isolation(&self, i: usize) -> f64 {
        let z = self.points[i];
        self.points
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, w)| (w - z).norm())
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Anchor {
    Regular(Complex64),
    Tangential { puncture: usize, direction: Complex64 },
}

impl Anchor {
    /// The tangential base point `(z_p, 1)`.
    pub fn tangential(puncture: usize) -> Self {
        Anchor::Tangential { puncture, direction: Complex64::new(1.0, 0.0) }
    }

    pub fn is_tangential(&self) -> bool {
        matches!(self, Anchor::Tangential { .. })
    }

    pub fn puncture(&self) -> Option<usize> {
        match self {
            Anchor::Tangential { puncture, .. } => Some(*puncture),
            Anchor::Regular(_) => None,
        }
    }

    fn same_as(&self, other: &Anchor) -> bool {
        match (self, other) {
            (Anchor::Regular(a), Anchor::Regular(b)) => (a - b).norm() <= 1e-12 * (1.0 + a.norm()),
            (
                Anchor::Tangential { puncture: p, direction: v },
                Anchor::Tangential { puncture: q, direction: w },
            ) => p == q && (v - w).norm() <= 1e-12,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub t: f64,
    pub s: f64,
    pub point: Complex64,
    pub sign: i8,
}

#[derive(Debug, Clone)]
pub struct PLPath {
    punctures: PunctureConfig,
    start: Anchor,
    end: Anchor,
    vertices: Vec<Complex64>,
    nodes: Vec<Complex64>,
    /// Normalized cumulative arclength at each node.
    cum: Vec<f64>,
}

impl PartialEq for PLPath {
    fn eq(&self, other: &Self) -> bool {
        self.punctures == other.punctures
            && self.start == other.start
            && self.end == other.end
            && self.vertices == other.vertices
    }
}

impl PLPath {
    pub fn new(punctures: PunctureConfig, start: Anchor, end: Anchor, vertices: Vec<Complex64>) -> Result<Self> {
        let path = Self::build(punctures, start, end, vertices)?;
        path.self_intersections()?;
        Ok(path)
    }

    /// Everything except the crossing checks.
    fn build(punctures: PunctureConfig, start: Anchor, end: Anchor, vertices: Vec<Complex64>) -> Result<Self> {
        let n = punctures.len();
        for (name, a) in [("start", &start), ("end", &end)] {
            match a {
                Anchor::Tangential { puncture, direction } => {
                    if *puncture >= n {
                        return Err(Error::Validation(format!("{name} anchor: puncture {} out of range", puncture + 1)));
                    }
                    if (direction.norm() - 1.0).abs() > 1e-9 {
                        return Err(Error::Validation(format!("{name} anchor: direction must have modulus 1")));
                    }
                }
                Anchor::Regular(p) => {
                    if !p.re.is_finite() || !p.im.is_finite() {
                        return Err(Error::Validation(format!("{name} anchor is not finite")));
                    }
                }
            }
        }
        let anchor_point = |a: &Anchor| match a {
            Anchor::Regular(p) => *p,
            Anchor::Tangential { puncture, .. } => punctures.point(*puncture),
        };
        let mut nodes = Vec::with_capacity(vertices.len() + 2);
        nodes.push(anchor_point(&start));
        nodes.extend(vertices.iter().copied());
        nodes.push(anchor_point(&end));

        let mut cum = vec![0.0; nodes.len()];
        for i in 1..nodes.len() {
            let l = (nodes[i] - nodes[i - 1]).norm();
            if l <= GEOM_EPS {
                return Err(Error::Validation(format!("segment {} has zero length", i)));
            }
            cum[i] = cum[i - 1] + l;
        }
        let total = cum[nodes.len() - 1];
        for c in cum.iter_mut() {
            *c /= total;
        }

        let path = PLPath { punctures, start, end, vertices, nodes, cum };
        path.check_anchor_legs()?;
        path.check_punctures()?;
        path.check_turns()?;
        Ok(path)
    }

    fn check_anchor_legs(&self) -> Result<()> {
        let m = self.nodes.len();
        if let Anchor::Tangential { direction, .. } = self.start {
            let d = (self.nodes[1] - self.nodes[0]).unscale((self.nodes[1] - self.nodes[0]).norm());
            if (d - direction).norm() > 1e-9 {
                return Err(Error::Validation("first segment does not leave the start puncture along its direction".into()));
            }
        }
        if let Anchor::Tangential { direction, .. } = self.end {
            let d = (self.nodes[m - 2] - self.nodes[m - 1]).unscale((self.nodes[m - 2] - self.nodes[m - 1]).norm());
            if (d - direction).norm() > 1e-9 {
                return Err(Error::Validation("last segment does not approach the end puncture along its direction".into()));
            }
        }
        Ok(())
    }

    fn check_punctures(&self) -> Result<()> {
        let m = self.nodes.len();
        for (k, z) in self.punctures.points().iter().enumerate() {
            for i in 0..m - 1 {
                let mut d = dist_to_segment(*z, self.nodes[i], self.nodes[i + 1]);
                let own_start = i == 0 && self.start.puncture() == Some(k);
                let own_end = i == m - 2 && self.end.puncture() == Some(k);
                if own_start || own_end {
                    // the leg touches its own puncture only at the anchor
                    let far = if own_start { self.nodes[i + 1] } else { self.nodes[i] };
                    if own_start && own_end {
                        continue;
                    }
                    d = (far - z).norm();
                }
                if d <= GEOM_EPS {
                    return Err(Error::Validation(format!("segment {} passes through puncture {}", i + 1, k + 1)));
                }
            }
        }
        Ok(())
    }

    fn check_turns(&self) -> Result<()> {
        for i in 1..self.nodes.len() - 1 {
            let a = self.nodes[i] - self.nodes[i - 1];
            let b = self.nodes[i + 1] - self.nodes[i];
            if cross(a, b).abs() <= GEOM_EPS * a.norm() * b.norm() && dot(a, b) < 0.0 {
                return Err(Error::Validation(format!("cusp (turning angle pi) at vertex {}", i)));
            }
        }
        Ok(())
    }

    pub fn punctures(&self) -> &PunctureConfig {
        &self.punctures
    }

    pub fn start(&self) -> Anchor {
        self.start
    }

    pub fn end(&self) -> Anchor {
        self.end
    }

    pub fn vertices(&self) -> &[Complex64] {
        &self.vertices
    }

    /// Anchor points and interior vertices, in order.
    pub fn nodes(&self) -> &[Complex64] {
        &self.nodes
    }

    pub fn segment_count(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn segment(&self, i: usize) -> (Complex64, Complex64) {
        (self.nodes[i], self.nodes[i + 1])
    }

    /// Parameter interval `[t_i, t_{i+1}]` of segment `i`.
    pub fn segment_params(&self, i: usize) -> (f64, f64) {
        (self.cum[i], self.cum[i + 1])
    }

    pub fn length(&self) -> f64 {
        self.nodes.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
    }

    fn locate(&self, t: f64) -> (usize, f64) {
        let m = self.nodes.len() - 1;
        let i = match self.cum.binary_search_by(|c| c.partial_cmp(&t).unwrap()) {
            Ok(i) => i.min(m - 1),
            Err(i) => i.saturating_sub(1).min(m - 1),
        };
        let (a, b) = (self.cum[i], self.cum[i + 1]);
        (i, ((t - a) / (b - a)).clamp(0.0, 1.0))
    }

    pub fn point_at(&self, t: f64) -> Complex64 {
        let (i, u) = self.locate(t);
        self.nodes[i] + (self.nodes[i + 1] - self.nodes[i]) * u
    }

    /// Unit velocity direction at parameter `t` (right-continuous at vertices).
    pub fn direction_at(&self, t: f64) -> Complex64 {
        let (i, _) = self.locate(t);
        let d = self.nodes[i + 1] - self.nodes[i];
        d / d.norm()
    }

    pub fn is_loop(&self) -> bool {
        self.start.is_tangential() && self.start.same_as(&self.end)
    }

    /// The same curve traversed backwards.
    pub fn reversed(&self) -> Result<PLPath> {
        let mut v = self.vertices.clone();
        v.reverse();
        PLPath::new(self.punctures.clone(), self.end, self.start, v)
    }

    /// Polyline used by crossing detection: legs at tangential anchors are
    /// fanned out sideways by an amount proportional to `sigma`.
    /// Tangential anchors at the ends of segment `seg`.
    fn leg_anchors(&self, seg: usize) -> Vec<(usize, Complex64)> {
        let mut out = Vec::new();
        if seg == 0 {
            if let Anchor::Tangential { puncture, direction } = self.start {
                out.push((puncture, direction));
            }
        }
        if seg + 1 == self.segment_count() {
            if let Anchor::Tangential { puncture, direction } = self.end {
                out.push((puncture, direction));
            }
        }
        out
    }

    fn fanned(&self, sigma_start: f64, sigma_end: f64) -> Vec<Complex64> {
        let mut pts = self.nodes.clone();
        let m = pts.len();
        if let Anchor::Tangential { direction, .. } = self.start {
            let l = (pts[1] - pts[0]).norm();
            pts[0] += direction * Complex64::i() * (FAN * l * sigma_start);
        }
        if let Anchor::Tangential { direction, .. } = self.end {
            let l = (pts[m - 2] - pts[m - 1]).norm();
            pts[m - 1] += direction * Complex64::i() * (FAN * l * sigma_end);
        }
        pts
    }

    fn param(&self, seg: usize, u: f64) -> f64 {
        self.cum[seg] + (self.cum[seg + 1] - self.cum[seg]) * u
    }

    /// Transverse self-crossings, each once with `t < s`.
    ///
    /// When both ends sit at the same tangential anchor the outgoing leg is
    /// placed on the left (`+i·v`) of the incoming one.
    pub fn self_intersections(&self) -> Result<Vec<Crossing>> {
        let pts = self.fanned(1.0, -1.0);
        let m = pts.len() - 1;
        let closed = matches!((self.start, self.end), (Anchor::Regular(a), Anchor::Regular(b)) if a == b);
        let mut out = Vec::new();
        for i in 0..m {
            for j in i + 2..m {
                if (closed && i == 0 && j == m - 1) || legs_meet_at_puncture(self, i, self, j) {
                    continue;
                }
                if let Some((u, w, point)) = segment_crossing(pts[i], pts[i + 1], pts[j], pts[j + 1])
                    .map_err(|e| Error::Validation(format!("segments {} and {}: {e}", i + 1, j + 1)))?
                {
                    let (u, w) = snap(self.segment(i), self.segment(j), u, w);
                    let a = pts[i + 1] - pts[i];
                    let b = pts[j + 1] - pts[j];
                    out.push(Crossing {
                        t: self.param(i, u),
                        s: self.param(j, w),
                        point,
                        sign: if cross(a, b) > 0.0 { 1 } else { -1 },
                    });
                }
            }
        }
        out.sort_by(|a, b| a.t.partial_cmp(&b.t).unwrap());
        Ok(out)
    }

    /// Rotation number of the tangent in the blackboard framing, from the
    /// start direction to the reversed end direction.
    pub fn rotation_number(&self) -> Result<f64> {
        let (vp, vq) = match (self.start, self.end) {
            (Anchor::Tangential { direction: a, .. }, Anchor::Tangential { direction: b, .. }) => (a, b),
            _ => return Err(Error::Domain("rotation number needs tangential anchors at both ends".into())),
        };
        let mut total = 0.0;
        for i in 1..self.nodes.len() - 1 {
            let a = self.nodes[i] - self.nodes[i - 1];
            let b = self.nodes[i + 1] - self.nodes[i];
            let ang = cross(a, b).atan2(dot(a, b));
            if (ang.abs() - PI).abs() <= 1e-12 {
                return Err(Error::Validation(format!("cusp at vertex {}", i)));
            }
            total += ang;
        }
        // the turning is congruent to arg(-v_q) - arg(v_p) modulo 2π
        let frac = (-vq / vp).arg() / (2.0 * PI);
        let k = (total / (2.0 * PI) - frac).round();
        Ok(k + frac)
    }

    /// Restriction to `[from, to]`. Interior cut points become regular anchors.
    pub fn subpath(&self, from: f64, to: f64) -> Result<PLPath> {
        let piece = self.piece(from, to)?;
        piece.self_intersections()?;
        Ok(piece)
    }

    /// Sub-path without the crossing checks; pieces cut on an overlapping
    /// tangential leg are fine for transport but touch themselves.
    pub(crate) fn piece(&self, from: f64, to: f64) -> Result<PLPath> {
        if !(0.0..=1.0).contains(&from) || !(0.0..=1.0).contains(&to) || from >= to {
            return Err(Error::OutOfRange(format!("subpath [{from}, {to}] is not inside [0, 1]")));
        }
        let tol = 1e-13;
        let start = if from <= tol { self.start } else { Anchor::Regular(self.point_at(from)) };
        let end = if to >= 1.0 - tol { self.end } else { Anchor::Regular(self.point_at(to)) };
        let mut v = Vec::new();
        for (k, &c) in self.cum.iter().enumerate().take(self.nodes.len() - 1).skip(1) {
            if c > from + tol && c < to - tol {
                v.push(self.nodes[k]);
            }
        }
        PLPath::build(self.punctures.clone(), start, end, v)
    }

    /// A straight path between two punctures; directions follow the segment.
    pub fn straight(punctures: PunctureConfig, p: usize, q: usize) -> Result<PLPath> {
        let (a, b) = (punctures.point(p), punctures.point(q));
        let d = (b - a) / (b - a).norm();
        PLPath::new(
            punctures,
            Anchor::Tangential { puncture: p, direction: d },
            Anchor::Tangential { puncture: q, direction: -d },
            vec![],
        )
    }
}

/// Proper crossing of `[p0,p1]` and `[q0,q1]`, as `(u, w, point)`.
fn segment_crossing(
    p0: Complex64,
    p1: Complex64,
    q0: Complex64,
    q1: Complex64,
) -> std::result::Result<Option<(f64, f64, Complex64)>, String> {
    let (dp, dq) = (p1 - p0, q1 - q0);
    let (lp, lq) = (dp.norm(), dq.norm());
    // signed distances of each endpoint from the other segment's line
    let o1 = cross(dq, p0 - q0) / lq;
    let o2 = cross(dq, p1 - q0) / lq;
    let o3 = cross(dp, q0 - p0) / lp;
    let o4 = cross(dp, q1 - p0) / lp;
    let within = |x: Complex64, a: Complex64, d: Complex64, l: f64| {
        let u = dot(x - a, d) / (l * l);
        (-GEOM_EPS / l..=1.0 + GEOM_EPS / l).contains(&u)
    };
    for (o, x, a, d, l) in [(o1, p0, q0, dq, lq), (o2, p1, q0, dq, lq), (o3, q0, p0, dp, lp), (o4, q1, p0, dp, lp)] {
        if o.abs() <= GEOM_EPS && within(x, a, d, l) {
            return Err("endpoint touches the other segment or segments overlap".into());
        }
    }
    if o1.signum() == o2.signum() || o3.signum() == o4.signum() {
        return Ok(None);
    }
    let u = o1 / (o1 - o2);
    let w = o3 / (o3 - o4);
    Ok(Some((u, w, p0 + dp * u)))
}

/// Lateral order of the legs of two paths at a shared tangential anchor,
/// as `(start leg, end leg)` offsets; larger values lie further to the left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LegOrder {
    pub first: (f64, f64),
    pub second: (f64, f64),
}

/// Crossings created by the leg fan sit next to a vertex lying on a leg;
/// move them onto the vertex of the undisplaced geometry.
fn snap(a: (Complex64, Complex64), b: (Complex64, Complex64), u: f64, w: f64) -> (f64, f64) {
    const SNAP: f64 = 1e-6;
    let project = |p: Complex64, (s0, s1): (Complex64, Complex64)| {
        let d = s1 - s0;
        (dot(p - s0, d) / d.norm_sqr()).clamp(0.0, 1.0)
    };
    if w < SNAP || w > 1.0 - SNAP {
        let w = w.round();
        (project(b.0 + (b.1 - b.0) * w, a), w)
    } else if u < SNAP || u > 1.0 - SNAP {
        let u = u.round();
        (u, project(a.0 + (a.1 - a.0) * u, b))
    } else {
        (u, w)
    }
}

/// The two tangential legs of a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LegEnd {
    Start,
    End,
}

impl PLPath {
    /// The leg at the tangential anchor `(puncture, direction)` containing
    /// parameter `t`, if any.
    pub fn leg_at(&self, t: f64, puncture: usize, direction: Complex64) -> Option<LegEnd> {
        let same = |a: Anchor| matches!(a, Anchor::Tangential { puncture: p, direction: v } if p == puncture && (v - direction).norm() <= 1e-9);
        let m = self.segment_count();
        if same(self.start) && t <= self.segment_params(0).1 {
            return Some(LegEnd::Start);
        }
        if same(self.end) && t >= self.segment_params(m - 1).0 {
            return Some(LegEnd::End);
        }
        None
    }
}

/// If parameters `t` on `g1` and `s` on `g2` both lie on legs of one shared
/// tangential anchor, the legs in question.
pub fn shared_legs(g1: &PLPath, t: f64, g2: &PLPath, s: f64) -> Option<(LegEnd, LegEnd)> {
    [g1.start, g1.end].into_iter().find_map(|a| match a {
        Anchor::Tangential { puncture, direction } => {
            Some((g1.leg_at(t, puncture, direction)?, g2.leg_at(s, puncture, direction)?))
        }
        Anchor::Regular(_) => None,
    })
}

/// Legs into the same puncture along different directions only touch there.
fn legs_meet_at_puncture(a: &PLPath, i: usize, b: &PLPath, j: usize) -> bool {
    let lb = b.leg_anchors(j);
    a.leg_anchors(i)
        .iter()
        .any(|(p, v)| lb.iter().any(|(q, w)| p == q && (v - w).norm() > 1e-9))
}

impl Default for LegOrder {
    fn default() -> Self {
        LegOrder { first: (-1.0, -2.0), second: (2.0, 1.0) }
    }
}

/// Transverse crossings of `g1` and `g2`; `t` is the parameter on `g1`, `s`
/// on `g2`, and the sign is that of `γ̇₁ × γ̇₂`.
pub fn intersections(g1: &PLPath, g2: &PLPath) -> Result<Vec<Crossing>> {
    intersections_with_order(g1, g2, LegOrder::default())
}

pub fn intersections_with_order(g1: &PLPath, g2: &PLPath, order: LegOrder) -> Result<Vec<Crossing>> {
    if g1.punctures != g2.punctures {
        return Err(Error::Validation("paths live on different puncture configurations".into()));
    }
    let a = g1.fanned(order.first.0, order.first.1);
    let b = g2.fanned(order.second.0, order.second.1);
    let mut out = Vec::new();
    for i in 0..a.len() - 1 {
        for j in 0..b.len() - 1 {
            if legs_meet_at_puncture(g1, i, g2, j) {
                continue;
            }
            if let Some((u, w, point)) = segment_crossing(a[i], a[i + 1], b[j], b[j + 1])
                .map_err(|e| Error::Validation(format!("segment {} of the first path and {} of the second: {e}", i + 1, j + 1)))?
            {
                let (u, w) = snap(g1.segment(i), g2.segment(j), u, w);
                let sign = if cross(a[i + 1] - a[i], b[j + 1] - b[j]) > 0.0 { 1 } else { -1 };
                out.push(Crossing { t: g1.param(i, u), s: g2.param(j, w), point, sign });
            }
        }
    }
    out.sort_by(|x, y| x.t.partial_cmp(&y.t).unwrap());
    Ok(out)
}

/// `γ₂γ₁`: first `g1`, then `g2`. At a tangential anchor a clockwise
/// half-turn is inserted next to the puncture.
pub fn compose(g2: &PLPath, g1: &PLPath) -> Result<PLPath> {
    if g1.punctures != g2.punctures {
        return Err(Error::Composition("different puncture configurations".into()));
    }
    if !g1.end.same_as(&g2.start) {
        return Err(Error::Composition("end anchor of the first path differs from the start of the second".into()));
    }
    let mut v: Vec<Complex64> = g1.vertices.clone();
    match g1.end {
        Anchor::Regular(p) => v.push(p),
        Anchor::Tangential { puncture, direction } => {
            let z = g1.punctures.point(puncture);
            let mut reach = g1.punctures.isolation(puncture);
            for path in [g1, g2] {
                let m = path.nodes.len();
                for (k, p) in path.nodes.iter().enumerate() {
                    let at_anchor = (k == 0 && path.start.puncture() == Some(puncture))
                        || (k == m - 1 && path.end.puncture() == Some(puncture));
                    if !at_anchor {
                        reach = reach.min((p - z).norm());
                    }
                }
                for i in 0..m - 1 {
                    let leg = (i == 0 && path.start.puncture() == Some(puncture))
                        || (i == m - 2 && path.end.puncture() == Some(puncture));
                    if !leg {
                        reach = reach.min(dist_to_segment(z, path.nodes[i], path.nodes[i + 1]));
                    }
                }
            }
            let r = 0.25 * reach;
            let c = z + direction * r;
            let rho = 0.5 * r;
            for k in 0..=8 {
                let th = -PI / 2.0 - k as f64 * PI / 8.0;
                v.push(c + direction * Complex64::from_polar(rho, th));
            }
        }
    }
    v.extend(g2.vertices.iter().copied());
    PLPath::new(g1.punctures.clone(), g1.start, g2.end, v)
}

#[cfg(test)]
mod tests;
