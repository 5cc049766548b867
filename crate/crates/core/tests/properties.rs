use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use lpball::inequality_lab::{
    check_R_L2, check_a1a2, check_coupling, check_p_means_deficit, fit_a1a2, two_atom_small_ball,
};
use lpball::phase::{limit_row, ScanMode};
use lpball::projections::{khinchin_exact, MAX_ENUM_N};
use lpball::sections::cube_section_fourier;
use lpball::*;
use proptest::prelude::*;

fn raw_vector() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0f64..5.0, 1..8).prop_filter("nonzero", |v| v.iter().any(|x| x.abs() > 1e-3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn canonical_form_ignores_signs_and_order(v in raw_vector(), flips in prop::collection::vec(any::<bool>(), 8), rot in 0usize..8) {
        let mut w: Vec<f64> = v.iter().zip(&flips).map(|(&x, &f)| if f { -x } else { x }).collect();
        let k = rot % w.len();
        w.rotate_left(k);
        prop_assert_eq!(canonicalize(&v).unwrap(), canonicalize(&w).unwrap());
    }

    #[test]
    fn deficit_stays_in_range(v in raw_vector()) {
        let a = canonicalize(&v).unwrap();
        let d = deficit(&a);
        prop_assert!((0.0..=2.0 + 1e-12).contains(&d));
        prop_assert!((a.norm(Exponent::TWO) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn power_mean_deficit_on_admissible_tuples(
        ls in -3.0f64..1.0, lr in 0.0f64..3.0, b1 in 0.01f64..=1.0, t in 0.0f64..=1.0,
    ) {
        let sigma = 10f64.powf(ls);
        let r = sigma.max(2.0) * 10f64.powf(lr);
        let lo = (1.0 - sigma / r).max(1e-3);
        let b2 = b1 * (lo + (1.0 - lo) * t);
        prop_assert!(check_p_means_deficit(sigma, r, b1, b2).unwrap().pass());
    }

    #[test]
    fn spread_lemma_on_admissible_pairs(lp in 1.7f64..6.0, u in 0.0f64..=1.0, x in -1.0f64..=1.0, y in -1.0f64..=1.0) {
        let p = 10f64.powf(lp);
        let c = 1.0 + u * ((p / (4.0 * SQRT_2)) * 0.999 - 1.0).min(1e3);
        let w = c / p;
        let (a1, a2) = fit_a1a2(p, FRAC_1_SQRT_2 + w * x, FRAC_1_SQRT_2 + w * y);
        prop_assume!((a1 - FRAC_1_SQRT_2).abs() <= w && (a2 - FRAC_1_SQRT_2).abs() <= w);
        prop_assert!(check_a1a2(c, p, a1, a2).unwrap().pass());
    }

    #[test]
    fn closed_form_checks_are_deterministic(p in 5.01f64..1e7, q in 1.000001f64..1.999) {
        prop_assert_eq!(check_R_L2(p).unwrap(), check_R_L2(p).unwrap());
        prop_assert!(check_R_L2(p).unwrap().pass());
        prop_assert_eq!(check_coupling(q).unwrap(), check_coupling(q).unwrap());
        prop_assert!(check_coupling(q).unwrap().pass());
    }

    #[test]
    fn khinchin_between_bounds(v in prop::collection::vec(0.01f64..1.0, 1..12)) {
        let a = canonicalize(&v).unwrap();
        let k = khinchin_exact(&a, MAX_ENUM_N).unwrap();
        prop_assert!(k >= FRAC_1_SQRT_2 - 1e-12 && k <= 1.0 + 1e-12);
    }

    #[test]
    fn cube_sections_between_one_and_root_two(v in prop::collection::vec(0.05f64..1.0, 1..5)) {
        let a = canonicalize(&v).unwrap();
        let f = cube_section_fourier(&a).unwrap();
        prop_assert!(f >= 1.0 - 1e-9 && f <= SQRT_2 + 1e-9);
    }

    #[test]
    fn small_ball_probability_is_a_cdf(a1 in 0.05f64..1.0, a2 in 0.05f64..1.0, r1 in 0.0f64..2.0, r2 in 0.0f64..2.0) {
        let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        let pl = two_atom_small_ball(a1, a2, lo).unwrap();
        let ph = two_atom_small_ball(a1, a2, hi).unwrap();
        prop_assert!((0.0..=1.0 + 1e-15).contains(&pl) && pl <= ph + 1e-15);
    }

    #[test]
    fn scan_rows_are_consistent(p in 2.01f64..1e4, q in 1.001f64..1.999) {
        for row in [limit_row(ScanMode::Section, p).unwrap(), limit_row(ScanMode::Projection, q).unwrap()] {
            prop_assert_eq!(row.difference, row.diagonal_value - row.ball_value);
        }
    }

    #[test]
    fn plane_norm_is_homogeneous(v in raw_vector(), s in 0.1f64..10.0, p in 1.0f64..50.0) {
        let scaled: Vec<f64> = v.iter().map(|x| s * x).collect();
        let e = Exponent::new(p).unwrap();
        let (n1, n2) = (lp_norm(&v, e), lp_norm(&scaled, e));
        prop_assert!((n2 - s * n1).abs() <= 1e-12 * n2.max(1.0));
    }
}
