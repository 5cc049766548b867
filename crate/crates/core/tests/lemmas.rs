mod common;

use lpball::inequality_lab::*;
use lpball::special::gamma;
use lpball::{Direction, Exponent, VerdictStatus};

#[test]
fn catalogue_examples() {
    assert!(check_p_means_deficit(2.0, 4.0, 1.0, 0.6).unwrap().pass());
    let v = check_a1a2(1.0, 50.0, 0.7, 0.7).unwrap();
    assert!(v.pass() && v.lhs == 0.0);
    for p in [5.01, 10.0] {
        assert!(check_R_L2(p).unwrap().pass());
    }
    let c = check_coupling(1.1).unwrap();
    assert!(c.pass() && c.rhs > c.lhs);
    assert!(check_coupling(1.0 + 1e-9).unwrap().lhs < 1e-16);
}

#[test]
fn equicontinuity_on_a_coordinate_axis() {
    let e1 = Direction::basis(3);
    assert_eq!(check_equicontinuity_sections(&e1, 30.0, 1, 0).unwrap().lhs, 0.0);
    let q = 1.3;
    let v = check_equicontinuity_projections(&e1, q, 1, 0).unwrap();
    assert!((v.lhs - (1.0 / gamma(1.0 / q).unwrap() - 1.0).abs()).abs() < 1e-14);
    assert!(v.pass());
}

#[test]
fn equicontinuity_over_random_directions() {
    let mut r = common::rng(31);
    let mut inconclusive = 0;
    for i in 0..100 {
        let a = common::random_direction(&mut r, 3, 8);
        for p in [10.0, 50.0, 100.0] {
            let v = check_equicontinuity_sections(&a, p, 20_000, i).unwrap();
            assert!(!v.failed(), "{a:?} p={p}: {v:?}");
            inconclusive += usize::from(v.status == VerdictStatus::Inconclusive);
        }
        for q in [1.05, 1.2, 1.4] {
            let v = check_equicontinuity_projections(&a, q, 20_000, i).unwrap();
            assert!(!v.failed(), "{a:?} q={q}: {v:?}");
            inconclusive += usize::from(v.status == VerdictStatus::Inconclusive);
        }
    }
    assert!(inconclusive < 6);
}

#[test]
fn goal_checks_reject_far_directions() {
    let far = Direction::new(&[1.0, 0.9, 0.3, 0.3]).unwrap();
    assert!(CaseTwoConfig::section(1e6, 1000.0, 100.0, far.clone()).is_err());
    assert!(CaseTwoConfig::projection(1.0 + 1e-7, 44_822.0, 100.0, far).is_err());
    // p must exceed Lc + 2
    assert!(CaseTwoConfig::section(1e4, 1000.0, 100.0, Direction::extremizer(4)).is_err());
}

#[test]
fn goal_checks_near_the_extremizer() {
    let t = 1e-4;
    let a = Direction::new(&[1.0, 1.0, t, t]).unwrap();
    let cfg = CaseTwoConfig::section(1e6, 1000.0, 100.0, a.clone()).unwrap();
    let v = check_prop_main_section(&cfg, 50_000, 1, GUARD).unwrap();
    assert!(v.pass(), "{v:?}");
    let cfg = CaseTwoConfig::projection(1.0 + 1e-7, 44_822.0, 100.0, a).unwrap();
    let v = check_prop_main_projection(&cfg, 50_000, 1, GUARD).unwrap();
    assert!(v.pass(), "{v:?}");
    assert!(check_prop_main_section(&cfg, 10, 1, GUARD).is_err());
}

#[test]
fn event_bounds_on_a_grid() {
    // alpha <= 1.2/sqrt(L) with L = 100
    for p in [1e2, 1e3, 1e5] {
        for alpha in [1e-6, 1e-4, 1e-2, 0.12] {
            let v = check_radii_event(p, alpha, 100_000, 3, GUARD).unwrap();
            assert!(!v.failed(), "p={p} alpha={alpha}: {v:?}");
        }
    }
    for (a1, a2, alpha) in [(0.71, 0.70, 0.3), (0.6, 0.55, 0.5)] {
        assert!(check_two_atom_small_ball(a1, a2, alpha / 4.0, 200_000, 4, GUARD).unwrap().pass());
    }
}

#[test]
fn constant_brackets() {
    assert!(cp_bounds_check(Exponent::Finite(2e6)).unwrap().pass());
    assert!(cq_bounds_check(1.0 + 1e-7).unwrap().pass());
    assert!(cq_bounds_check(1.1).is_err());
}
