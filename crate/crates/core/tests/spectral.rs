mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use torus_obs::geodesics::TorusPoint;
use torus_obs::spectral::*;
use torus_obs::PERIOD;

fn max_coeff_diff(a: &FourierField2D, b: &FourierField2D) -> f64 {
    a.sub(b)
        .unwrap()
        .modes()
        .map(|(_, c)| c.norm())
        .fold(0.0, f64::max)
}

#[test]
fn ball_coeff_matches_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..25 {
        let eps = rng.gen_range(0.05..0.45);
        let m = (rng.gen_range(-30i64..=30), rng.gen_range(-30i64..=30));
        let closed = ball_indicator_coeff(eps, m).unwrap();
        let quad = common::ball_coeff_quadrature(eps, m, 1e-11);
        assert!(
            (closed - quad).abs() < 1e-8,
            "eps {eps} m {m:?}: {closed} vs {quad}"
        );
    }
}

#[test]
fn ball_coeff_decay() {
    for &eps in &[0.1f64, 0.25, 0.4] {
        let start = (10.0 / eps).ceil() as i64;
        for mx in start..start + 40 {
            for my in [0, 3, mx / 2] {
                let r = ((mx * mx + my * my) as f64).sqrt();
                let c = ball_indicator_coeff(eps, (mx, my)).unwrap();
                assert!(
                    c.abs() <= eps.sqrt() * r.powf(-1.5),
                    "eps {eps} m ({mx},{my})"
                );
            }
        }
    }
}

#[test]
fn norm_on_ball_matches_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let u = common::random_field(4, &mut rng);
    let eps = 0.25;
    let exact = norm_on_ball(&u, &BallRegion::centered(eps).unwrap());
    let grid = common::grid_norm_on_ball(&u, eps, 2048);
    assert!((exact - grid).abs() <= 1e-3 * exact, "{exact} vs {grid}");
}

#[test]
fn shifted_ball_matches_translated_field() {
    // ||u||_{B(c, r)} = ||u(. + c)||_{B(0, r)}
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let u = common::random_field(3, &mut rng);
    let (cx, cy) = (0.31, 0.77);
    let shifted = u
        .map_modes(|k| Complex64::cis(std::f64::consts::TAU * (k.0 as f64 * cx + k.1 as f64 * cy)));
    let a = norm_on_ball(&u, &BallRegion::new(TorusPoint::new(cx, cy), 0.2).unwrap());
    let b = norm_on_ball(&shifted, &BallRegion::centered(0.2).unwrap());
    assert!((a - b).abs() < 1e-12 * a.max(1.0), "{a} vs {b}");
}

#[test]
fn mixed_cutoffs_rejected() {
    let a = FourierField2D::zeros(2);
    let b = FourierField2D::zeros(3);
    assert!(a.sub(&b).is_err());
    assert!(inner_on_ball(&a, &b, &BallRegion::centered(0.1).unwrap()).is_err());
}

fn field_strategy() -> impl Strategy<Value = FourierField2D> {
    (1u32..=16, any::<u64>())
        .prop_map(|(k, seed)| common::random_field(k, &mut ChaCha8Rng::seed_from_u64(seed)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn propagation_is_unitary(u in field_strategy(), t in -10.0f64..10.0) {
        let n = u.norm();
        prop_assert!((propagate(&u, t).norm() - n).abs() <= 1e-13 * n);
    }

    #[test]
    fn group_law(u in field_strategy(), s in -256i32..=256, t in -256i32..=256) {
        // dyadic times keep s + t exact; |t| <= 2^-8 keeps 4 pi^2 N |t| 2^-53 well below the tolerance
        let (s, t) = (s as f64 / 65536.0, t as f64 / 65536.0);
        let lhs = propagate(&propagate(&u, t), s);
        let rhs = propagate(&u, s + t);
        prop_assert!(max_coeff_diff(&lhs, &rhs) <= 1e-13);
    }

    #[test]
    fn full_period_identity(u in field_strategy()) {
        prop_assert!(max_coeff_diff(&propagate(&u, PERIOD), &u) <= 1e-13);
    }

    #[test]
    fn defect_bound(u in field_strategy(), h in 0.01f64..1.0, t in -5.0f64..5.0) {
        prop_assert!(propagation_defect_check(&u, h, t).unwrap().pass);
    }

    #[test]
    fn norm_on_ball_monotone_in_radius(seed in any::<u64>(), r in 0.02f64..0.4, dr in 0.0f64..0.09) {
        let u = common::random_field(3, &mut ChaCha8Rng::seed_from_u64(seed));
        let small = norm_on_ball(&u, &BallRegion::centered(r).unwrap());
        let large = norm_on_ball(&u, &BallRegion::centered(r + dr).unwrap());
        prop_assert!(large >= small - 1e-12 * large.max(1.0));
    }

    #[test]
    fn ball_coeff_even_and_bounded(eps in 0.01f64..0.49, a in -50i64..50, b in -50i64..50) {
        let c = ball_indicator_coeff(eps, (a, b)).unwrap();
        prop_assert_eq!(c, ball_indicator_coeff(eps, (-a, -b)).unwrap());
        prop_assert_eq!(c, ball_indicator_coeff(eps, (b, a)).unwrap());
        prop_assert!(c.abs() <= std::f64::consts::PI * eps * eps * (1.0 + 1e-14));
    }
}
