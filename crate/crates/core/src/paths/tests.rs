use super::*;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cfg(points: &[(f64, f64)]) -> PunctureConfig {
    PunctureConfig::new(points.iter().map(|&(a, b)| c(a, b)).collect()).unwrap()
}

fn regular(points: &[(f64, f64)]) -> PLPath {
    let pts: Vec<_> = points.iter().map(|&(a, b)| c(a, b)).collect();
    let n = pts.len();
    PLPath::new(
        cfg(&[(5.0, 5.0)]),
        Anchor::Regular(pts[0]),
        Anchor::Regular(pts[n - 1]),
        pts[1..n - 1].to_vec(),
    )
    .unwrap()
}

/// Loop based at `(0, 1)` going once around the puncture at 2.
fn loop_around_two(ccw: bool) -> PLPath {
    let mut v = vec![c(1.0, 0.0), c(1.0, -1.0), c(3.0, -1.0), c(3.0, 1.0), c(1.0, 1.0), c(0.5, 0.0)];
    if !ccw {
        v.iter_mut().for_each(|p| *p = p.conj());
    }
    PLPath::new(cfg(&[(0.0, 0.0), (2.0, 0.0)]), Anchor::tangential(0), Anchor::tangential(0), v).unwrap()
}

#[test]
fn puncture_config_rejects_duplicates() {
    assert!(PunctureConfig::new(vec![c(0.0, 0.0), c(0.0, 0.0)]).is_err());
    let p = PunctureConfig::on_real_line(3);
    assert_eq!(p.min_distance(), 1.0);
    assert_eq!(p.isolation(2), 1.0);
}

#[test]
fn embedded_path_has_no_crossings() {
    assert!(regular(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)]).self_intersections().unwrap().is_empty());
}

#[test]
fn figure_eight_signs() {
    let up = regular(&[(-1.0, 0.0), (1.0, 0.0), (1.0, -1.0), (0.0, -1.0), (0.0, 1.0)]);
    let x = up.self_intersections().unwrap();
    assert_eq!(x.len(), 1);
    assert_eq!(x[0].sign, 1);
    assert!(x[0].point.norm() < 1e-12);
    assert!(x[0].t < x[0].s);
    let down = regular(&[(-1.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0), (0.0, -1.0)]);
    assert_eq!(down.self_intersections().unwrap()[0].sign, -1);
}

#[test]
fn degenerate_geometry_is_rejected() {
    let p = cfg(&[(5.0, 5.0)]);
    // passes through its own vertex
    let v = vec![c(1.0, 0.0), c(1.0, 1.0), c(0.5, 0.0)];
    assert!(PLPath::new(p.clone(), Anchor::Regular(c(0.0, 0.0)), Anchor::Regular(c(0.5, -1.0)), v).is_err());
    // cusp
    let v = vec![c(1.0, 0.0)];
    assert!(PLPath::new(p.clone(), Anchor::Regular(c(0.0, 0.0)), Anchor::Regular(c(0.5, 0.0)), v).is_err());
    // through a puncture
    assert!(PLPath::new(p, Anchor::Regular(c(4.0, 4.0)), Anchor::Regular(c(6.0, 6.0)), vec![]).is_err());
}

#[test]
fn tangential_legs_are_validated() {
    let p = cfg(&[(0.0, 0.0), (2.0, 0.0)]);
    assert!(PLPath::new(p.clone(), Anchor::tangential(0), Anchor::Regular(c(1.0, 1.0)), vec![]).is_err());
    assert!(PLPath::new(p.clone(), Anchor::tangential(0), Anchor::Regular(c(1.0, 1.0)), vec![c(1.0, 0.0)]).is_ok());
    let bad = Anchor::Tangential { puncture: 0, direction: c(2.0, 0.0) };
    assert!(PLPath::new(p, bad, Anchor::Regular(c(1.0, 1.0)), vec![c(1.0, 0.0)]).is_err());
}

#[test]
fn rotation_of_simple_loops() {
    assert_eq!(loop_around_two(true).rotation_number().unwrap(), 0.5);
    assert_eq!(loop_around_two(false).rotation_number().unwrap(), -0.5);
    let s = PLPath::straight(PunctureConfig::on_real_line(2), 0, 1).unwrap();
    assert_eq!(s.rotation_number().unwrap(), 0.0);
    let r = regular(&[(0.0, 0.0), (1.0, 0.0)]);
    assert!(matches!(r.rotation_number(), Err(Error::Domain(_))));
}

#[test]
fn vertex_insertion_keeps_rotation_and_crossings() {
    let g = loop_around_two(true);
    let mut v = g.vertices().to_vec();
    v.insert(2, c(2.0, -1.0));
    v.insert(4, c(3.0, 0.25));
    let h = PLPath::new(g.punctures().clone(), g.start(), g.end(), v).unwrap();
    assert_eq!(h.rotation_number().unwrap(), g.rotation_number().unwrap());
    let (a, b) = (g.self_intersections().unwrap(), h.self_intersections().unwrap());
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.sign, y.sign);
        assert!((x.point - y.point).norm() < 1e-6);
    }
}

#[test]
fn crossing_right_angle_and_antisymmetry() {
    let p = cfg(&[(5.0, 5.0)]);
    let g1 = PLPath::new(p.clone(), Anchor::Regular(c(-1.0, 0.0)), Anchor::Regular(c(1.0, 0.0)), vec![]).unwrap();
    let g2 = PLPath::new(p, Anchor::Regular(c(0.0, -1.0)), Anchor::Regular(c(0.0, 1.0)), vec![]).unwrap();
    let x = intersections(&g1, &g2).unwrap();
    assert_eq!(x.len(), 1);
    assert_eq!(x[0].sign, 1);
    assert!((x[0].t - 0.5).abs() < 1e-12 && (x[0].s - 0.5).abs() < 1e-12);
    let y = intersections(&g2, &g1).unwrap();
    assert_eq!(y[0].sign, -1);
    assert_eq!((y[0].t, y[0].s), (x[0].s, x[0].t));
}

#[test]
fn disjoint_loops_do_not_cross() {
    let p = cfg(&[(0.0, 0.0), (5.0, 5.0)]);
    let sq = |o: f64| {
        PLPath::new(
            p.clone(),
            Anchor::Regular(c(o, 1.0)),
            Anchor::Regular(c(o, 1.0)),
            vec![c(o + 1.0, 1.0), c(o + 1.0, 2.0), c(o, 2.0)],
        )
        .unwrap()
    };
    assert!(intersections(&sq(0.0), &sq(3.0)).unwrap().is_empty());
}

#[test]
fn subpath_anchors() {
    let g = regular(&[(-1.0, 0.0), (1.0, 0.0), (1.0, -1.0), (0.0, -1.0), (0.0, 1.0)]);
    assert_eq!(g.subpath(0.0, 1.0).unwrap(), g);
    let x = g.self_intersections().unwrap()[0];
    let head = g.subpath(0.0, x.t).unwrap();
    match head.end() {
        Anchor::Regular(p) => assert!((p - x.point).norm() < 1e-12),
        _ => panic!("expected a regular anchor"),
    }
    let tail = g.subpath(x.s, 1.0).unwrap();
    assert!(matches!(tail.start(), Anchor::Regular(_)));
    assert!(g.subpath(0.5, 0.2).is_err());
    assert!(g.subpath(-0.1, 0.2).is_err());
}

#[test]
fn composition_checks_anchors() {
    let p = PunctureConfig::on_real_line(3);
    let a = PLPath::straight(p.clone(), 0, 1).unwrap();
    let b = PLPath::straight(p.clone(), 1, 2).unwrap();
    assert!(matches!(compose(&a, &b), Err(Error::Composition(_))));
    let ba = compose(&b, &a);
    // a arrives at 1 along direction -1 while b leaves along +1
    assert!(matches!(ba, Err(Error::Composition(_))));
}

/// Path from `(z_p, 1)` to `(z_q, 1)` passing below `z_q`.
fn under(p: &PunctureConfig, from: usize, to: usize, depth: f64) -> PLPath {
    let (a, b) = (p.point(from), p.point(to));
    let v = vec![a + 0.3, c(a.re + 0.3, -depth), c(b.re + 0.6, -depth), b + 0.6];
    PLPath::new(p.clone(), Anchor::tangential(from), Anchor::tangential(to), v).unwrap()
}

#[test]
fn composition_adds_clockwise_half_turn() {
    let p = PunctureConfig::on_real_line(3);
    let a = under(&p, 0, 1, 0.4);
    let b = under(&p, 1, 2, 0.7);
    let ba = compose(&b, &a).unwrap();
    assert_eq!(ba.rotation_number().unwrap(), a.rotation_number().unwrap() + b.rotation_number().unwrap() - 0.5);
    assert_eq!(a.rotation_number().unwrap(), 0.5);
}

#[test]
fn reversal_flips_crossing_signs() {
    let g = regular(&[(-1.0, 0.0), (1.0, 0.0), (1.0, -1.0), (0.0, -1.0), (0.0, 1.0)]);
    let r = g.reversed().unwrap();
    assert_eq!(r.reversed().unwrap(), g);
    assert_eq!(r.self_intersections().unwrap()[0].sign, -g.self_intersections().unwrap()[0].sign);
}

/// A random simple loop at `(0, 1)` around the puncture at `2`.
fn random_loop(seed: u64, ccw: bool) -> PLPath {
    use rand::Rng;
    let mut r = crate::random::rng(seed);
    let out = r.gen_range(0.6..0.9);
    let back = r.gen_range(0.3..0.55);
    let k = r.gen_range(5..9);
    let rad = r.gen_range(0.7..1.0);
    let mut v = vec![c(out, 0.0)];
    for j in 0..k {
        let th = -PI * 0.75 + 1.5 * PI * (j as f64) / (k - 1) as f64;
        let th = th + r.gen_range(-0.05..0.05);
        v.push(c(2.0, 0.0) + Complex64::from_polar(rad, th - PI / 2.0 + PI / 2.0 - PI) * c(-1.0, 0.0));
    }
    v.push(c(back, 0.0));
    if !ccw {
        v.iter_mut().for_each(|p| *p = p.conj());
    }
    PLPath::new(cfg(&[(0.0, 0.0), (2.0, 0.0)]), Anchor::tangential(0), Anchor::tangential(0), v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn rotation_composition_rule(seed in any::<u64>(), ccw1 in any::<bool>(), ccw2 in any::<bool>()) {
        let g1 = random_loop(seed, ccw1);
        let g2 = random_loop(seed ^ 0x9e37, ccw2);
        if let Ok(g) = compose(&g2, &g1) {
            let lhs = g.rotation_number().unwrap();
            prop_assert_eq!(lhs, g1.rotation_number().unwrap() + g2.rotation_number().unwrap() - 0.5);
        }
    }

    #[test]
    fn pairwise_signs_are_antisymmetric(seed in any::<u64>()) {
        let g1 = random_loop(seed, true);
        let g2 = random_loop(seed ^ 77, false);
        let x = intersections_with_order(&g1, &g2, LegOrder { first: (1.0, -1.0), second: (2.0, -2.0) }).unwrap();
        let y = intersections_with_order(&g2, &g1, LegOrder { first: (2.0, -2.0), second: (1.0, -1.0) }).unwrap();
        prop_assert_eq!(x.len(), y.len());
        let mut xs: Vec<_> = x.iter().map(|k| (k.sign, (k.t * 1e9).round() as i64)).collect();
        let mut ys: Vec<_> = y.iter().map(|k| (-k.sign, (k.s * 1e9).round() as i64)).collect();
        xs.sort();
        ys.sort();
        prop_assert_eq!(xs, ys);
    }
}
