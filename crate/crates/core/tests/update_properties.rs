use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use wanglandau::analysis::{eq3_limit, predict_limit, z_increments};
use wanglandau::wl::{apply_update, linear_increment, linear_update};
use wanglandau::{DesiredFrequencies, PenaltyState, UpdateRule, WlError};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Splits `den` into `parts.len()` positive numerators.
fn rational_phi(parts: &[i64]) -> Vec<BigRational> {
    let den: i64 = parts.iter().sum();
    parts.iter().map(|&p| q(p, den)).collect()
}

proptest! {
    #[test]
    fn linear_update_conserves_sum_exactly(
        parts in prop::collection::vec(1i64..50, 2..6),
        visits in prop::collection::vec(0usize..6, 1..40),
        g in 1i64..1000,
    ) {
        let phi = rational_phi(&parts);
        let gamma = q(g, 1000);
        let mut lt = vec![BigRational::zero(); phi.len()];
        for v in visits {
            let inc = linear_update(&mut lt, v % phi.len(), &phi, &gamma);
            prop_assert!(inc.iter().sum::<BigRational>().is_zero());
        }
        prop_assert!(lt.iter().sum::<BigRational>().is_zero());
    }

    #[test]
    fn linear_z_increments_have_zero_phi_weighted_mean(p in 1i64..999, g in 1i64..=1000) {
        let phi1 = q(p, 1000);
        let phi2 = q(1000 - p, 1000);
        let gamma = q(g, 1000);
        let a = linear_increment(true, &phi1, &gamma) - linear_increment(false, &phi2, &gamma);
        let b = linear_increment(true, &phi2, &gamma) - linear_increment(false, &phi1, &gamma);
        prop_assert!((&phi1 * a - &phi2 * b).is_zero());
    }

    #[test]
    fn linear_limit_is_phi_exactly(p in 1i64..999, g in 1i64..=5000) {
        let phi1 = q(p, 1000);
        let l = eq3_limit(|v, x: &BigRational, y: &BigRational| linear_increment(v, x, y), &phi1, &q(g, 1000));
        prop_assert_eq!(l, phi1);
    }

    #[test]
    fn symmetric_phi_gives_symmetric_limit(g in 0.001f64..1.999) {
        let phi = DesiredFrequencies::new(vec![0.5, 0.5]).unwrap();
        for rule in [UpdateRule::Linear, UpdateRule::LogForm] {
            let l = predict_limit(rule, &phi, g).unwrap();
            prop_assert!((l.0[0] - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn z_increments_match_two_updates(phi1 in 0.05f64..0.95, g in 0.01f64..1.0) {
        let phi = DesiredFrequencies::new(vec![phi1, 1.0 - phi1]).unwrap();
        for rule in [UpdateRule::Linear, UpdateRule::LogForm] {
            let (a, b) = z_increments(rule, phi1, g);
            let p0 = PenaltyState::zeros(2);
            let up = apply_update(rule, &p0, 0, &phi, g).unwrap();
            let down = apply_update(rule, &up, 1, &phi, g).unwrap();
            prop_assert!((up.z(0, 1) - a).abs() < 1e-12);
            prop_assert!((down.z(0, 1) - (a - b)).abs() < 1e-12);
        }
    }
}

#[test]
fn logform_increments_at_half_gamma() {
    // a = log(1.125/0.875), b = log(1.375/0.625), 40-digit reference values
    let (a, b) = z_increments(UpdateRule::LogForm, 0.75, 0.5);
    assert!((a - 0.251_314_428_280_906_08).abs() < 1e-15);
    assert!((b - 0.788_457_360_364_270_2).abs() < 1e-15);
}

#[test]
fn logform_rejects_large_gamma() {
    let phi = DesiredFrequencies::new(vec![0.75, 0.25]).unwrap();
    let p0 = PenaltyState::zeros(2);
    assert!(matches!(apply_update(UpdateRule::LogForm, &p0, 0, &phi, 1.5), Err(WlError::Config(_))));
    assert!(apply_update(UpdateRule::Linear, &p0, 0, &phi, 1.5).is_ok());
}

#[test]
fn linear_example_update() {
    let phi = DesiredFrequencies::new(vec![0.75, 0.25]).unwrap();
    let p = apply_update(UpdateRule::Linear, &PenaltyState::zeros(2), 0, &phi, 1.0).unwrap();
    assert_eq!(p.log_theta(), &[0.25, -0.25]);
}
