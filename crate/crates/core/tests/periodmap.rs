use halfelastica::curvegen::angular_function;
use halfelastica::dynamics::{center_period, wavelength, SolveOptions};
use halfelastica::moduli::{chi, eta_pm, exceptional_c, LAMBDA_CRIT};
use halfelastica::periodmap::*;
use halfelastica::{Error, ModulusPoint, Region};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn q(m: i64, n: i64) -> Rational {
    Rational::new(m, n)
}

/// A time-like point at relative height `t` of `(a(λ), η₊(λ))`.
fn t_point(lambda: f64, t: f64) -> ModulusPoint {
    let (a, b) = e2_interval(lambda).unwrap();
    time_like_point(lambda, a + t * (b - a)).unwrap()
}

#[test]
fn q_identity_at_a_lower_point() {
    let k = elliptic_coeffs(&ModulusPoint::new(-1.3, 2.3)).unwrap();
    assert!((k.q_function() - k.q_function_closed()).abs() < 1e-9);
}

#[test]
fn b_plus_c_vanishes_at_the_lower_end() {
    let lambda = -1.2;
    let (a, _) = e2_interval(lambda).unwrap();
    let k = elliptic_coeffs(&time_like_point(lambda, a + 1e-4).unwrap()).unwrap();
    assert!((k.b + k.c).abs() < 1e-2, "{}", k.b + k.c);
    assert!((k.b + k.c - k.b_plus_c_closed()).abs() < 1e-9);
}

#[test]
fn modulus_in_unit_interval_on_grid() {
    for i in 0..24 {
        let lambda = -2.5 + 1.6 * i as f64 / 23.0;
        for j in 1..20 {
            let k = elliptic_coeffs(&t_point(lambda, j as f64 / 20.0)).unwrap();
            assert!(k.m > 0.0 && k.m < 1.0, "m = {} at {lambda}", k.m);
        }
    }
}

#[test]
fn exceptional_coefficients_drop_the_divergent_pair() {
    let lambda = -1.2;
    let p = ModulusPoint::new(lambda, exceptional_c(lambda).unwrap());
    assert_eq!(p.region, Region::E);
    let k = elliptic_coeffs(&p).unwrap();
    assert!(!k.valid_n1b && k.b.is_nan() && k.n1.is_nan());
    assert!(k.jump_term().is_err());
}

#[test]
fn period_map_rejects_non_time_like_points() {
    let p = ModulusPoint::new(-1.3, 1.2);
    assert_eq!(p.region, Region::S);
    assert!(matches!(period_map(&p), Err(Error::RegionMismatch { .. })));
    assert!(period_map_oracle(&p).is_err());
}

#[test]
fn closed_form_matches_quadrature_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..60 {
        let lambda = rng.gen_range(-2.5..LAMBDA_CRIT - 1e-3);
        let p = t_point(lambda, rng.gen_range(0.01..0.99));
        let (a, b) = (period_map(&p).unwrap(), period_map_oracle(&p).unwrap());
        assert!((a - b).abs() < 1e-9, "{p:?}: {a} vs {b}");
    }
}

#[test]
fn closed_form_matches_quadrature_next_to_the_locus() {
    for lambda in [-2.0, -1.5, -1.2, -1.0, -0.95] {
        let c = exceptional_c(lambda).unwrap();
        for d in [-1e-4, -1e-6, -1e-8, 1e-8, 1e-6, 1e-4] {
            let p = ModulusPoint::new(lambda, c + d);
            let (a, b) = (period_map(&p).unwrap(), period_map_oracle(&p).unwrap());
            assert!((a - b).abs() < 1e-8, "{p:?}: {a} vs {b}");
        }
        let e = ModulusPoint::new(lambda, c);
        assert!((period_map(&e).unwrap() - period_map_oracle(&e).unwrap()).abs() < 1e-9);
    }
}

#[test]
fn continuous_across_the_locus() {
    let lambda = -1.2;
    let c = exceptional_c(lambda).unwrap();
    let on = period_map(&ModulusPoint::new(lambda, c)).unwrap();
    for d in [-1e-5, 1e-5] {
        let near = period_map(&ModulusPoint::new(lambda, c + d)).unwrap();
        assert!((near - on).abs() < 1e-3);
    }
}

#[test]
fn jump_term_tends_to_plus_minus_half() {
    for lambda in [-1.5, -1.2, -0.95] {
        let c = exceptional_c(lambda).unwrap();
        let below = elliptic_coeffs(&ModulusPoint::new(lambda, c - 1e-6)).unwrap();
        let above = elliptic_coeffs(&ModulusPoint::new(lambda, c + 1e-6)).unwrap();
        assert!((below.jump_term().unwrap() + 0.5).abs() < 1e-3);
        assert!((above.jump_term().unwrap() - 0.5).abs() < 1e-3);
    }
}

#[test]
fn limits_at_both_ends_for_lambda_below_minus_one() {
    let lambda = -1.3;
    let (a, b) = e2_interval(lambda).unwrap();
    assert!((period_map_at(lambda, a + 1e-5).unwrap() - 1.0).abs() < 0.02);
    assert!((period_map_at(lambda, b - 1e-5).unwrap() - chi(lambda).unwrap()).abs() < 1e-4);
}

#[test]
fn logarithmic_growth_above_minus_one() {
    let lambda = -0.95;
    let (a, _) = e2_interval(lambda).unwrap();
    let p = |d: f64| period_map_at(lambda, a + d).unwrap();
    let log = |d: f64| (4.0 / d.sqrt()).ln();
    // Equal increments of log(4/√δ) give equal increments of P.
    let s1 = (p(1e-6) - p(1e-4)) / (log(1e-6) - log(1e-4));
    let s2 = (p(1e-8) - p(1e-6)) / (log(1e-8) - log(1e-6));
    assert!(s1 > 0.0 && ((s1 - s2) / s2).abs() < 1e-3, "{s1} {s2}");
    assert!(p(1e-8) > p(1e-6) && p(1e-6) > p(1e-4));
}

#[test]
fn r_term_stays_bounded_above_minus_one() {
    let lambda = -0.95;
    let (a, _) = e2_interval(lambda).unwrap();
    let v: Vec<f64> = [1e-4, 1e-6, 1e-8, 1e-10]
        .iter()
        .map(|d| {
            let k = elliptic_coeffs(&time_like_point(lambda, a + d).unwrap()).unwrap();
            k.quartic.c.abs().sqrt() * k.r_term()
        })
        .collect();
    assert!(v.iter().all(|x| x.is_finite() && x.abs() < 10.0));
    assert!((v[3] - v[2]).abs() < (v[1] - v[0]).abs());
}

#[test]
fn angular_function_below_the_locus_has_interior_extrema() {
    let p = ModulusPoint::new(-0.99, 1.05);
    assert_eq!(p.region, Region::Tminus);
    let th = angular_function(&p, 1.0, &SolveOptions::default()).unwrap();
    let turns = th
        .windows(3)
        .filter(|w| (w[1].1 - w[0].1) * (w[2].1 - w[1].1) < 0.0)
        .count();
    assert_eq!(turns, 2);
}

#[test]
fn j_intervals() {
    let (lo, hi) = j_interval(-1.3).unwrap();
    assert_eq!(lo, 1.0);
    assert_eq!(hi, chi(-1.3).unwrap());
    let (lo, hi) = j_interval(-0.95).unwrap();
    assert_eq!(lo, chi(-0.95).unwrap());
    assert!(hi.is_infinite());
    assert!(j_interval(-0.8).is_err());
    for i in 0..50 {
        let lambda = -3.0 + 2.1 * i as f64 / 49.0;
        let (lo, hi) = j_interval(lambda).unwrap();
        assert!(hi > lo);
    }
}

#[test]
fn string_with_tenfold_symmetry() {
    let r = find_string(-1.01, q(11, 10)).unwrap();
    assert_eq!(r.wave_number(), 10);
    assert_eq!(r.turning_number(), 11);
    assert!((r.period - 1.1).abs() <= 1e-9);
    assert!((r.length - 10.0 * r.wavelength).abs() < 1e-12);
    assert_eq!(r.invariants.punctured_class, 1);
    let d = closure_defect(&r, &SolveOptions::default(), 256).unwrap();
    assert!(
        d.position <= 1e-6 && d.frame <= 1e-6 && d.symmetry <= 1e-4,
        "{d:?}"
    );
}

#[test]
fn string_at_lambda_minus_1_2_closes() {
    let r = find_string(-1.2, q(28, 27)).unwrap();
    assert!((r.period - 28.0 / 27.0).abs() <= 1e-9);
    let d = closure_defect(&r, &SolveOptions::default(), 128).unwrap();
    assert!(d.position <= 1e-6, "{d:?}");
}

#[test]
fn find_string_rejects_q_outside_the_interval() {
    // J at λ = −1.2 is (1, 1.0378), which excludes 6/5.
    match find_string(-1.2, q(6, 5)) {
        Err(Error::OutOfInterval { lo, hi, .. }) => assert!(lo == 1.0 && hi < 1.04),
        other => panic!("{other:?}"),
    }
}

#[test]
fn non_rational_period_does_not_close() {
    let r = find_string(-1.01, q(11, 10)).unwrap();
    let mut off = r;
    off.modulus = ModulusPoint::new(r.modulus.lambda, r.modulus.e2 + 1e-3);
    let d = closure_defect(&off, &SolveOptions::default(), 64).unwrap();
    assert!(d.position > 1e-6);
}

#[test]
fn dip_below_chi_is_outside_the_interval() {
    // P at λ = −0.99 dips below χ(λ) before rising to it; values in the dip are not in J.
    let lambda = -0.99;
    let x = chi(lambda).unwrap();
    let scan = scan_period(lambda, 256).unwrap();
    let min = scan.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
    assert!(min < x);
    let inside_dip = q(((0.5 * (min + x)) * 1e5).round() as i64, 100_000);
    assert!(matches!(
        find_strings(lambda, inside_dip),
        Err(Error::OutOfInterval { .. })
    ));
    assert_eq!(find_strings(lambda, q(6, 5)).unwrap().len(), 1);
}

#[test]
fn isotopy_count_for_seven_fifths() {
    let r = find_string(-0.95, q(7, 5)).unwrap();
    assert_eq!(r.invariants.j, 3);
    assert_eq!(r.invariants.isotopy_count, 7);
}

#[test]
fn fiber_endpoint_of_eleven_tenths() {
    let (l, e) = fiber_endpoint(q(11, 10)).unwrap();
    assert!((e - 1.8812).abs() < 5e-4);
    assert!((eta_pm(l).unwrap().1 - e).abs() < 1e-8);
    assert!((l + (1.0 + e.powi(4)) / (2.0 * e.powi(3))).abs() < 1e-15);
    assert!(fiber_endpoint(q(1, 1)).is_err());
    assert!(fiber_endpoint(q(9, 10)).is_err());
}

#[test]
fn fiber_endpoint_tends_to_fourth_root_of_three() {
    let (_, e) = fiber_endpoint(q(1_000_001, 1)).unwrap();
    assert!((e - 3f64.powf(0.25)).abs() < 1e-6);
}

#[test]
fn traced_fiber_of_eleven_tenths() {
    let target = q(11, 10);
    let pts = trace_fiber(target, 120).unwrap();
    assert!(pts.iter().all(|p| p.region.is_t()));
    for p in &pts {
        assert!((period_map(p).unwrap() - 1.1).abs() <= 1e-7);
    }
    let crossings: Vec<_> = pts.iter().filter(|p| p.region == Region::E).collect();
    assert_eq!(crossings.len(), 1);
    assert!((crossings[0].e2 - 1.71966).abs() < 5e-4);
    let first = pts[0];
    assert!((first.lambda + 1.0).abs() < 1e-2 && (first.e2 - 1.0).abs() < 1e-2);
    let (l, e) = fiber_endpoint(target).unwrap();
    let last = pts[pts.len() - 1];
    assert!((last.lambda - l).abs() < 1e-3 && (last.e2 - e).abs() < 1e-2);
    let below = pts.iter().filter(|p| p.e2 < crossings[0].e2);
    assert!(below.clone().all(|p| p.region == Region::Tminus));
    for p in below {
        assert_eq!(family_invariants(target, p).unwrap().punctured_class, 1);
    }
    for p in pts.iter().filter(|p| p.e2 > crossings[0].e2) {
        assert_eq!(p.region, Region::Tplus);
        assert_eq!(family_invariants(target, p).unwrap().punctured_class, 11);
    }
}

#[test]
fn wavelength_decreases_along_the_fiber_to_its_limit() {
    let target = q(11, 10);
    let pts = trace_fiber(target, 60).unwrap();
    let w: Vec<f64> = pts.iter().map(|p| wavelength(p).unwrap()).collect();
    assert!(w.windows(2).all(|x| x[1] < x[0]));
    let (l, _) = fiber_endpoint(target).unwrap();
    let inv = family_invariants(target, &pts[0]).unwrap();
    assert!((inv.limiting_wavelength - center_period(l).unwrap()).abs() < 1e-9);
    assert!(inv.limiting_wavelength < w[w.len() - 1]);
}

#[test]
fn scans_follow_the_monotonicity_pattern() {
    let down = scan_period(-0.98, 128).unwrap();
    assert!(down.windows(2).all(|w| w[1].1 < w[0].1));
    let dip = scan_period(-0.999, 128).unwrap();
    let k = (0..dip.len())
        .min_by(|&i, &j| dip[i].1.total_cmp(&dip[j].1))
        .unwrap();
    assert!(k > 0 && k < dip.len() - 1);
    let up = scan_period(-1.3, 128).unwrap();
    assert!(up.windows(2).all(|w| w[1].1 > w[0].1));
}

#[test]
fn transition_multiplier() {
    let l = monotonicity_transition(-0.999, -0.96, 1e-7).unwrap();
    assert!((l + 0.98148).abs() < 1e-3, "{l}");
    assert!(upper_end_curvature(-0.99).unwrap() < 0.0);
    assert!(upper_end_curvature(-0.97).unwrap() > 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn algebraic_identities(lambda in -3.0f64..-0.88, t in 0.01f64..0.99) {
        let p = t_point(lambda, t);
        prop_assume!(p.region != Region::E);
        let k = elliptic_coeffs(&p).unwrap();
        let scale = k.q_function_closed().abs().max(1.0);
        prop_assert!((k.q_function() - k.q_function_closed()).abs() <= 1e-9 * scale);
        let bc = k.b_plus_c_closed();
        prop_assert!((k.b + k.c - bc).abs() <= 1e-9 * bc.abs().max(1.0));
    }

    #[test]
    fn found_strings_hit_their_target(lambda in -1.6f64..-1.01, num in 1i64..40) {
        let (lo, hi) = j_interval(lambda).unwrap();
        let target = lo + (hi - lo) * (num as f64 / 41.0);
        let r = q((target * 4096.0).round() as i64, 4096);
        prop_assume!(q_in(r, lo, hi));
        for s in find_strings(lambda, r).unwrap() {
            prop_assert!((s.period - *r.numer() as f64 / *r.denom() as f64).abs() <= 1e-9);
            prop_assert_eq!(s.modulus.lambda, lambda);
        }
    }
}

fn q_in(r: Rational, lo: f64, hi: f64) -> bool {
    let x = *r.numer() as f64 / *r.denom() as f64;
    x > lo && x < hi
}
