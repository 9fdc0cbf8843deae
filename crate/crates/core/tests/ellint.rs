use std::f64::consts::{FRAC_PI_2, PI};

use halfelastica::ellint::*;
use proptest::prelude::*;

fn k_oracle(m: f64) -> f64 {
    gauss_kronrod(
        |t: f64| 1.0 / (1.0 - m * t.sin().powi(2)).sqrt(),
        0.0,
        FRAC_PI_2,
        1e-15,
    )
    .unwrap()
}

fn pi_oracle(n: f64, phi: f64, m: f64) -> f64 {
    gauss_kronrod(
        |t: f64| {
            let s2 = t.sin().powi(2);
            1.0 / ((1.0 - n * s2) * (1.0 - m * s2).sqrt())
        },
        0.0,
        phi,
        1e-15,
    )
    .unwrap()
}

#[test]
fn k_matches_quadrature_at_half() {
    let k = complete_k(0.5).unwrap();
    assert!((k - k_oracle(0.5)).abs() < 1e-12 * k);
    // Frozen from the oracle above.
    assert!((k - 1.854_074_677_301_372).abs() < 1e-13);
}

#[test]
fn k_log_asymptotics() {
    let m = 1.0 - 1e-8;
    let k = complete_k(m).unwrap();
    let approx = (4.0 / (1.0 - m).sqrt()).ln();
    assert!(((k - approx) / k).abs() < 1e-3);
}

#[test]
fn log_regime_is_continuous() {
    let m = 1.0 - 0.9e-12;
    let inside = complete_k(m).unwrap();
    let carlson = carlson_rf(0.0, 1.0 - m, 1.0).unwrap();
    assert!((inside - carlson).abs() < 1e-12 * carlson);
    let pi_log = complete_pi(-0.7, m).unwrap();
    let pi_carlson = carlson_rf(0.0, 1.0 - m, 1.0).unwrap()
        - 0.7 / 3.0 * carlson_rj(0.0, 1.0 - m, 1.0, 1.7).unwrap();
    assert!((pi_log - pi_carlson).abs() < 1e-10 * pi_carlson);
}

#[test]
fn legendre_relation() {
    let m = 0.3;
    let (k, kp) = (complete_k(m).unwrap(), complete_k(1.0 - m).unwrap());
    let (e, ep) = (complete_e(m).unwrap(), complete_e(1.0 - m).unwrap());
    assert!((e * kp + ep * k - k * kp - FRAC_PI_2).abs() < 1e-11);
}

#[test]
fn pi_reduces_to_k_at_zero_characteristic() {
    assert!((complete_pi(0.0, 0.4).unwrap() - complete_k(0.4).unwrap()).abs() < 1e-15);
}

#[test]
fn pi_large_negative_characteristic() {
    let n = -1e6;
    let v = complete_pi(n, 0.5).unwrap();
    let approx = PI / (2.0 * (1.0 - n).sqrt());
    assert!(((v - approx) / v).abs() < 1e-2);
}

#[test]
fn pi_matches_quadrature() {
    let v = complete_pi(-0.5, 0.3).unwrap();
    assert!((v - pi_oracle(-0.5, FRAC_PI_2, 0.3)).abs() < 1e-12 * v);
    let w = incomplete_pi(-0.4, 1.0, 0.2).unwrap();
    assert!((w - pi_oracle(-0.4, 1.0, 0.2)).abs() < 1e-12 * w);
}

#[test]
fn incomplete_pi_at_right_angle_is_complete() {
    let a = incomplete_pi(-2.5, FRAC_PI_2, 0.6).unwrap();
    let b = complete_pi(-2.5, 0.6).unwrap();
    assert!((a - b).abs() < 1e-14 * b);
}

#[test]
fn inverse_sn_roundtrip() {
    let x = jacobi_sn(0.7, 0.3).unwrap();
    assert!((inverse_sn(x, 0.3).unwrap() - 0.7).abs() < 1e-12);
}

#[test]
fn sn_reaches_one_at_quarter_period() {
    let m = 0.85;
    let k = complete_k(m).unwrap();
    assert!((jacobi_sn(k, m).unwrap() - 1.0).abs() < 1e-13);
    assert!((jacobi_am(k, m).unwrap() - FRAC_PI_2).abs() < 1e-7);
}

#[test]
fn oracle_reproduces_arcsine() {
    let v = quad_oracle(|x| 1.0 / (1.0 - x * x).sqrt(), 0.0, 1.0, 1e-12).unwrap();
    assert!((v - FRAC_PI_2).abs() < 1e-12);
}

proptest! {
    #[test]
    fn e_below_k(m in 1e-6f64..0.999_999) {
        prop_assert!(complete_e(m).unwrap() < complete_k(m).unwrap());
    }

    #[test]
    fn k_increasing(m in 0.0f64..0.99, dm in 1e-4f64..0.009) {
        prop_assert!(complete_k(m + dm).unwrap() > complete_k(m).unwrap());
    }

    #[test]
    fn incomplete_f_matches_quadrature(phi in 0.0f64..FRAC_PI_2, m in 0.0f64..0.99) {
        let f = incomplete_f(phi, m).unwrap();
        prop_assert!((f - pi_oracle(0.0, phi, m)).abs() <= 1e-11 * f.max(1.0));
    }

    #[test]
    fn incomplete_e_matches_quadrature(phi in 0.0f64..FRAC_PI_2, m in 0.0f64..0.99) {
        let e = incomplete_e(phi, m).unwrap();
        let o = gauss_kronrod(|t: f64| (1.0 - m * t.sin().powi(2)).sqrt(), 0.0, phi, 1e-15).unwrap();
        prop_assert!((e - o).abs() <= 1e-11 * e.max(1.0));
    }

    #[test]
    fn sn_inverse_roundtrip(u in 0.0f64..1.0, m in 0.0f64..0.95) {
        let k = complete_k(m).unwrap();
        let u = u * k;
        let x = jacobi_sn(u, m).unwrap().clamp(0.0, 1.0);
        prop_assert!((inverse_sn(x, m).unwrap() - u).abs() < 1e-7 + 1e-9 * u);
    }
}
