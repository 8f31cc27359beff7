use super::*;
use crate::free_hopf::CycWedge;
use crate::paths::compose;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

fn two() -> PunctureConfig {
    PunctureConfig::on_real_line(2)
}

#[test]
fn quadrature_rule_integrates_polynomials() {
    let r = rule();
    let total: f64 = r.w.iter().sum();
    assert!((total - 2.0).abs() < 1e-14);
    for j in 0..NODES {
        // ∫_{-1}^{x} t^3 dt = (x^4 - 1)/4
        let got: f64 = (0..NODES).map(|l| r.s[j][l] * r.x[l].powi(3)).sum();
        assert!((got - (r.x[j].powi(4) - 1.0) / 4.0).abs() < 1e-13);
    }
}

#[test]
fn square_loop_winds_once() {
    let p = two();
    let start = Anchor::Regular(c(-0.5, -0.5));
    let verts = vec![c(0.5, -0.5), c(0.5, 0.5), c(-0.5, 0.5)];
    let path = PLPath::new(p.clone(), start, start, verts).unwrap();
    let h = Connection::new(p, 3).transport(&path).unwrap();
    assert!((coeff_of(&h, &[0]) - c(1.0, 0.0)).norm() < 1e-10);
    assert!(coeff_of(&h, &[1]).norm() < 1e-10);
    assert!((coeff_of(&h, &[0, 0]) - c(0.5, 0.0)).norm() < 1e-10);
}

#[test]
fn transport_is_multiplicative() {
    let p = two();
    let a = Anchor::Regular(c(-0.5, 0.7));
    let b = Anchor::Regular(c(0.4, -0.9));
    let e = Anchor::Regular(c(2.1, 0.3));
    let g1 = PLPath::new(p.clone(), a, b, vec![c(-0.6, -0.4)]).unwrap();
    let g2 = PLPath::new(p.clone(), b, e, vec![c(1.5, -0.8)]).unwrap();
    let conn = Connection::new(p, 4);
    let lhs = conn.transport(&compose(&g2, &g1).unwrap()).unwrap();
    let rhs = &conn.transport(&g2).unwrap() * &conn.transport(&g1).unwrap();
    assert!(lhs.max_abs_diff(&rhs) < 1e-12);
}

#[test]
fn associator_low_degrees() {
    let r = associator(4, 1e-9).unwrap();
    let phi = &r.series;
    assert!(r.accuracy_estimate < 1e-10);
    assert!((phi.coeff(&Word::empty()) - c(1.0, 0.0)).norm() < 1e-14);
    assert!(coeff_of(phi, &[0]).norm() < 1e-12);
    assert!(coeff_of(phi, &[1]).norm() < 1e-12);
    let a = coeff_of(phi, &[0, 1]);
    let b = coeff_of(phi, &[1, 0]);
    assert!((a + b).norm() < 1e-12);
    assert!((a.norm() - 1.0 / 24.0).abs() < 1e-12);
    assert!(phi.is_grouplike(1e-8));
}

#[test]
fn degree_zero_holonomy_is_one() {
    let r = associator(0, 1e-9).unwrap();
    assert_eq!(r.series, FreeSeries::one(2, 0));
}

fn t(p: usize, v: C) -> Anchor {
    Anchor::Tangential { puncture: p, direction: v }
}

fn three_paths() -> Vec<PLPath> {
    let p3 = PunctureConfig::on_real_line(3);
    let up = c(0.0, 1.0);
    vec![
        PLPath::new(p3.clone(), t(0, up), t(2, up), vec![c(0.0, 0.5), c(1.0, 0.8), c(2.0, 0.5)]).unwrap(),
        PLPath::new(
            p3.clone(),
            t(0, c(1.0, 0.0)),
            t(2, c(-1.0, 0.0)),
            vec![c(0.4, 0.0), c(0.6, -0.5), c(1.4, -0.5), c(1.6, 0.0)],
        )
        .unwrap(),
        curl(),
    ]
}

fn curl() -> PLPath {
    let up = c(0.0, 1.0);
    let verts = vec![c(0.0, 0.5), c(1.5, 0.5), c(1.5, -0.5), c(0.5, -0.5), c(0.5, 1.0), c(2.0, 1.0)];
    PLPath::new(PunctureConfig::on_real_line(3), t(0, up), t(2, up), verts).unwrap()
}

fn four() -> PunctureConfig {
    PunctureConfig::new((0..4).map(|k| c(k as f64, 0.0)).collect()).unwrap()
}

/// Loops based at `t(0, 1)` with punctures at 0, 2, -2.
fn loops() -> Vec<PLPath> {
    let p = PunctureConfig::new(vec![c(0.0, 0.0), c(2.0, 0.0), c(-2.0, 0.0)]).unwrap();
    let b = t(0, c(1.0, 0.0));
    let vs = [
        vec![c(1.0, 0.0), c(1.0, -1.0), c(3.0, -1.0), c(3.0, 1.0), c(1.0, 1.0), c(0.45, 0.0)],
        vec![c(1.1, 0.0), c(1.1, 1.1), c(3.1, 1.1), c(3.1, -1.1), c(1.1, -1.1), c(0.42, 0.0)],
        vec![c(0.5, 0.0), c(0.5, 0.5), c(-0.5, 0.5), c(-0.5, -0.5), c(0.7, -0.5), c(0.7, 0.0)],
        vec![c(0.55, 0.0), c(0.55, 0.6), c(-3.0, 0.6), c(-3.0, -0.6), c(0.8, -0.6), c(0.8, 0.0)],
    ];
    vs.into_iter().map(|v| PLPath::new(p.clone(), b, b, v).unwrap()).collect()
}

#[test]
fn coaction_formula_on_open_paths() {
    for path in three_paths() {
        for d in 1..=3 {
            let conn = Connection::new(path.punctures().clone(), d);
            let chk = check_mu_bar(&conn, &path).unwrap();
            assert!(chk.discrepancy < 1e-10, "d={d}: {}", chk.discrepancy);
        }
    }
    assert_eq!(curl().self_intersections().unwrap().len(), 1);
}

#[test]
fn rotation_numbers_of_loops() {
    let rots: Vec<f64> = loops().iter().map(|g| g.rotation_number().unwrap()).collect();
    assert_eq!(rots, vec![0.5, -0.5, 1.5, 1.5]);
}

#[test]
fn loop_coaction_residual_is_constant() {
    let d = 3;
    for g in loops() {
        let conn = Connection::new(g.punctures().clone(), d);
        let chk = check_mu_bar(&conn, &g).unwrap();
        let mut expect = crate::coefficients::r_am_series::<C>(3, 0, d).unwrap();
        expect += &FreeSeries::one(3, d);
        let gap = (&chk.lhs - &chk.rhs).max_abs_diff(&expect.with_degree(d));
        assert!(gap < 1e-10, "{gap}");
    }
}

#[test]
fn fox_pairing_formula_for_paths() {
    let p4 = four();
    let up = c(0.0, 1.0);
    let down = c(0.0, -1.0);
    let g1 = PLPath::new(p4.clone(), t(0, up), t(1, up), vec![c(0.0, 0.5), c(1.0, 0.5)]).unwrap();
    let shared = PLPath::new(p4.clone(), t(1, up), t(3, up), vec![c(1.0, 0.3), c(3.0, 0.3)]).unwrap();
    let cross = PLPath::new(p4.clone(), t(2, up), t(3, down), vec![c(2.0, 0.8), c(0.5, 0.8), c(0.5, -0.6), c(3.0, -0.6)])
        .unwrap();
    let apart = PLPath::new(p4.clone(), t(2, down), t(3, down), vec![c(2.0, -0.3), c(3.0, -0.3)]).unwrap();
    assert_eq!(crate::paths::intersections(&g1, &cross).unwrap().len(), 1);
    let conn = Connection::new(p4, 3);
    for (g2, g1) in [(&shared, &g1), (&cross, &g1), (&apart, &g1), (&g1, &apart)] {
        let chk = check_rho_paths(&conn, g2, g1).unwrap();
        assert!(chk.discrepancy < 1e-10, "{}", chk.discrepancy);
        assert!(chk.lhs.norm_inf() > 1e-3);
    }
}

#[test]
fn fox_pairing_rejects_mismatched_anchors() {
    let p4 = four();
    let up = c(0.0, 1.0);
    let g1 = PLPath::new(p4.clone(), t(0, up), t(1, up), vec![c(0.0, 0.5), c(1.0, 0.5)]).unwrap();
    let g2 = PLPath::new(p4.clone(), t(1, c(0.0, -1.0)), t(3, c(0.0, -1.0)), vec![c(1.0, -0.5), c(3.0, -0.5)]).unwrap();
    let conn = Connection::new(p4, 2);
    assert!(matches!(check_rho_paths(&conn, &g2, &g1), Err(Error::Domain(_))));
    assert!(matches!(check_rho_paths(&conn, &g1, &g1), Err(Error::Domain(_))));
}

#[test]
fn loop_pairings_and_necklace_bracket() {
    let ls = loops();
    let conn = Connection::new(ls[0].punctures().clone(), 3);
    for (i, j) in [(0, 2), (2, 0), (0, 3), (1, 2), (3, 1), (0, 1)] {
        let rho = check_rho_paths(&conn, &ls[j], &ls[i]).unwrap();
        assert!(rho.discrepancy < 1e-10, "rho {i},{j}: {}", rho.discrepancy);
        let g = goldman_bracket_check(&conn, &ls[j], &ls[i]).unwrap();
        assert!(g.bracket.discrepancy < 1e-10, "bracket {i},{j}: {}", g.bracket.discrepancy);
        assert!(g.accuracy < 1e-10);
    }
}

#[test]
fn cobracket_residual_is_half_one_wedge_h() {
    let d = 3;
    for g in loops() {
        let conn = Connection::new(g.punctures().clone(), d);
        let chk = check_necklace_cobracket(&conn, &g).unwrap();
        assert!(chk.discrepancy_mod_constants < 1e-10);
        let h = Connection::new(g.punctures().clone(), d + 1).hol(&g).unwrap();
        let mut expect = CycWedge::zero(3, d + 1);
        for (w, v) in h.terms() {
            if w.len() <= d {
                expect.add_wedge(Word::empty(), *w, v * -0.5);
            }
        }
        let resid = &chk.lhs - &chk.rhs;
        let gap = resid
            .terms()
            .chain(expect.terms())
            .filter(|((a, b), _)| a.len() + b.len() <= d)
            .map(|((a, b), _)| (resid.coeff(a, b) - expect.coeff(a, b)).norm())
            .fold(0.0, f64::max);
        assert!(gap < 1e-10, "{gap}");
    }
}

#[test]
fn pentagon_projection_holds() {
    for path in three_paths() {
        for d in [2, 3] {
            let conn = Connection::new(path.punctures().clone(), d);
            let chk = pentagon_projection_check(&conn, &path).unwrap();
            assert!(chk.discrepancy < 1e-10, "{}", chk.discrepancy);
        }
    }
}

#[test]
fn holonomy_is_invariant_under_regular_homotopy() {
    let p3 = PunctureConfig::on_real_line(3);
    let up = c(0.0, 1.0);
    let a = PLPath::new(p3.clone(), t(0, up), t(2, up), vec![c(0.0, 0.5), c(1.0, 0.8), c(2.0, 0.5)]).unwrap();
    let b = PLPath::new(p3.clone(), t(0, up), t(2, up), vec![c(0.0, 0.3), c(0.7, 1.9), c(1.6, 0.4), c(2.0, 0.2)])
        .unwrap();
    let conn = Connection::new(p3, 4);
    assert!(conn.hol(&a).unwrap().max_abs_diff(&conn.hol(&b).unwrap()) < 1e-11);
}

#[test]
fn associator_recovers_zeta_values() {
    let phi = associator(5, 1e-9).unwrap().series;
    let zeta = [1.6449340668482264, 1.2020569031595942, 1.0823232337111381, 1.0369277551433699];
    for (m, z) in (2..=5).zip(zeta) {
        assert!((zeta_from_associator(&phi, m) - z).abs() < 1e-10, "m={m}");
    }
}
