use std::f64::consts::PI;

use proptest::prelude::*;
use twisted_waveguide::cross_section::{
    coupling_matrices, solve_transverse_modes, solve_transverse_modes_with, CouplingMatrices, CrossSectionSpec, ModeMethod,
    TransverseModeSet,
};
use twisted_waveguide::grid::GridFunction;
use twisted_waveguide::longitudinal::{
    delta_limit_bound_state, BoundProfile, PotentialSpec, Profile, ResolventEngine, ResolventOptions,
};
use twisted_waveguide::width::{
    classify_spectrum, coupling_vector, limit_width_delta, threshold_index, width_coefficient, width_for_target,
    width_vs_nu, TwistProfile, WidthOptions,
};
use twisted_waveguide::Error;

const A_INF: f64 = 0.081_891_970_2;

fn kernel_opts() -> WidthOptions {
    WidthOptions { resolvent: ResolventOptions::with_engine(ResolventEngine::DeltaKernel), ..Default::default() }
}

fn rectangle(count: usize) -> (TransverseModeSet, CouplingMatrices) {
    let spec = CrossSectionSpec::rectangle(PI, PI / 2.0, 64).unwrap();
    let modes = solve_transverse_modes(&spec, count).unwrap();
    let c = coupling_matrices(&modes).unwrap();
    (modes, c)
}

/// Fourier oracle for the point interaction with `v = -2 phi'`: `v` is odd, so
/// the delta does not act on it and `Im <v, r(lambda + i0) v> = pi sum_{+-k} |v^(k)|^2 / 2k`
/// with `|v^(k)|^2 = k^2 / (pi (1/4 + k^2)^2)`.
fn delta_oracle(c1: f64, gap: f64) -> f64 {
    let k = (gap - 0.25).sqrt();
    let vhat2 = k * k / (PI * (0.25 + k * k).powi(2));
    c1 * c1 * PI * 2.0 * vhat2 / (2.0 * k)
}

#[test]
fn classification_examples() {
    let (modes, _) = rectangle(4);
    let delta = PotentialSpec::DeltaLimit.bound_states().unwrap();
    let c = classify_spectrum(&modes, &delta);
    assert!(c.below.iter().any(|e| (e.energy - 4.75).abs() < 1e-12 && e.n == 1));
    let e = c.find(2, 1).unwrap();
    assert!(e.embedded && e.simple && (e.energy - 7.75).abs() < 1e-12);

    let one = solve_transverse_modes(&CrossSectionSpec::rectangle(PI, PI / 2.0, 64).unwrap(), 1).unwrap();
    let c = classify_spectrum(&one, &delta);
    assert_eq!((c.below.len(), c.embedded.len()), (1, 0));

    let pt = PotentialSpec::poschl_teller(1.0).unwrap().bound_states().unwrap();
    let c = classify_spectrum(&modes, &pt);
    assert!(c.embedded.iter().any(|e| (e.energy - 7.866_025_4).abs() < 1e-7));
}

#[test]
fn threshold_index_examples() {
    let t = [5.0, 8.0, 13.0];
    assert_eq!(threshold_index(7.75, &t), 1);
    assert_eq!(threshold_index(4.0, &t), 0);
    assert_eq!(threshold_index(13.5, &t), 3);
    assert_eq!(threshold_index(8.0, &t), 1);
}

#[test]
fn coupling_vector_shape() {
    let phi = delta_limit_bound_state();
    let v = coupling_vector(&TwistProfile::Linear, &phi).unwrap();
    for x in [0.1f64, 0.7, 3.0, 9.0] {
        let expect = (0.5f64).sqrt() * (-x / 2.0).exp();
        assert!((v.eval(x) - expect).abs() < 1e-14);
        assert!((v.eval(-x) + expect).abs() < 1e-14);
    }
    let compact = coupling_vector(&TwistProfile::compact(20.0).unwrap(), &phi).unwrap();
    assert_eq!(compact.eval(40.5), 0.0);
    assert_eq!(compact.eval(-100.0), 0.0);
    let diff = (-4000..=4000)
        .map(|i| i as f64 * 0.02)
        .map(|x| (compact.eval(x) - v.eval(x)).powi(2) * 0.02)
        .sum::<f64>()
        .sqrt();
    assert!(diff <= 1e-6, "{diff}");
}

#[test]
fn sampled_twist_must_cover_the_state() {
    let x: Vec<f64> = (0..=100).map(|i| -5.0 + 0.1 * i as f64).collect();
    let rate = GridFunction::from_fn(x.clone(), |_| 1.0).unwrap();
    let accel = GridFunction::from_fn(x, |_| 0.0).unwrap();
    let t = TwistProfile::Sampled { rate, accel };
    assert!(matches!(coupling_vector(&t, &delta_limit_bound_state()), Err(Error::GridMismatch)));
}

#[test]
fn limit_formula() {
    assert!((limit_width_delta(5.0, 8.0, -2.0 / 3.0).unwrap() - A_INF).abs() < 1e-9);
    assert!((limit_width_delta(5.0, 8.0, -2.0 / 3.0).unwrap() - delta_oracle(2.0 / 3.0, 3.0)).abs() < 1e-12);
    assert_eq!(limit_width_delta(5.0, 8.0, 0.0).unwrap(), 0.0);
    assert!(limit_width_delta(5.0, 5.25 + 1e-12, 1.0).unwrap() < 2e-5);
    assert!(limit_width_delta(5.0, 5.2, 1.0).is_err());
}

#[test]
fn delta_route_matches_closed_form() {
    let (modes, c) = rectangle(6);
    let delta = PotentialSpec::DeltaLimit;
    for opts in [kernel_opts(), WidthOptions::default()] {
        let w = width_for_target(&modes, &c, &delta, &TwistProfile::Linear, 2, 1, &opts).unwrap();
        assert_eq!(w.k_star, 1);
        assert_eq!(w.channels.len(), 1);
        assert!((w.a - A_INF).abs() < 1e-6, "{}", w.a);
        assert_eq!(w.a, w.channels.iter().map(|ch| ch.contribution).sum::<f64>());
        assert!(w.closed_channels.iter().all(|ch| ch.k > 1));
        // C0 = <phi, phi> T2[2][2] for the linear twist.
        assert!((w.c0 - c.t2_at(2, 2)).abs() < 1e-8);
    }
    let json = serde_json::to_value(
        width_for_target(&modes, &c, &delta, &TwistProfile::Linear, 2, 1, &kernel_opts()).unwrap(),
    )
    .unwrap();
    for key in ["E", "n", "j", "k_star", "a", "C0", "channels"] {
        assert!(json.get(key).is_some(), "{key}");
    }
}

#[test]
fn compact_twist_is_local() {
    let (modes, c) = rectangle(6);
    let delta = PotentialSpec::DeltaLimit;
    let lin = width_for_target(&modes, &c, &delta, &TwistProfile::Linear, 2, 1, &kernel_opts()).unwrap();
    let com = width_for_target(&modes, &c, &delta, &TwistProfile::compact(20.0).unwrap(), 2, 1, &kernel_opts()).unwrap();
    assert!((lin.a - com.a).abs() <= 1e-5, "{} {}", lin.a, com.a);
}

#[test]
fn sign_flips_leave_a_unchanged() {
    let (modes, c) = rectangle(6);
    let delta = PotentialSpec::DeltaLimit;
    let base = width_for_target(&modes, &c, &delta, &TwistProfile::Linear, 2, 1, &kernel_opts()).unwrap();

    let mut flipped = c.clone();
    for k in 0..flipped.size() {
        flipped.t1[(1, k)] = -flipped.t1[(1, k)];
        flipped.t1[(k, 1)] = -flipped.t1[(k, 1)];
    }
    let target = *classify_spectrum(&modes, &delta.bound_states().unwrap()).find(2, 1).unwrap();
    let phi = delta_limit_bound_state();
    let w = width_coefficient(&target, &modes, &flipped, &phi, &TwistProfile::Linear, &delta, &kernel_opts()).unwrap();
    assert!((w.a - base.a).abs() < 1e-14);

    let x: Vec<f64> = (0..=8000).map(|i| -40.0 + 0.01 * i as f64).collect();
    let grid = |s: f64| {
        let mut b = phi.clone();
        b.profile = BoundProfile::Grid(GridFunction::from_fn(x.clone(), |t| s * phi.value(t)).unwrap());
        b
    };
    let plus = width_coefficient(&target, &modes, &c, &grid(1.0), &TwistProfile::Linear, &delta, &kernel_opts()).unwrap();
    let minus = width_coefficient(&target, &modes, &c, &grid(-1.0), &TwistProfile::Linear, &delta, &kernel_opts()).unwrap();
    assert!((plus.a - minus.a).abs() < 1e-12);
    assert!((plus.a - A_INF).abs() < 1e-3);
}

#[test]
fn disk_width_vanishes() {
    let spec = CrossSectionSpec::disk(1.0, 64).unwrap();
    let modes = solve_transverse_modes(&spec, 6).unwrap();
    let c = coupling_matrices(&modes).unwrap();
    let delta = PotentialSpec::DeltaLimit;
    let class = classify_spectrum(&modes, &delta.bound_states().unwrap());
    let mut checked = 0;
    for e in class.embedded.iter().filter(|e| e.simple) {
        let w = width_coefficient(e, &modes, &c, &delta_limit_bound_state(), &TwistProfile::Linear, &delta, &kernel_opts())
            .unwrap();
        assert!(w.a.abs() < 1e-10, "n = {} a = {}", e.n, w.a);
        checked += 1;
    }
    assert!(checked > 0);
}

#[test]
fn invalid_targets_are_rejected() {
    let (modes, c) = rectangle(6);
    let delta = PotentialSpec::DeltaLimit;
    let phi = delta_limit_bound_state();
    let class = classify_spectrum(&modes, &delta.bound_states().unwrap());
    let below = class.find(1, 1).unwrap();
    assert!(matches!(
        width_coefficient(below, &modes, &c, &phi, &TwistProfile::Linear, &delta, &kernel_opts()),
        Err(Error::NotEmbedded { .. })
    ));
    // Rectangle modes 5 and 6 share E = 20.
    let degenerate = class.find(5, 1).unwrap();
    assert!(matches!(
        width_coefficient(degenerate, &modes, &c, &phi, &TwistProfile::Linear, &delta, &kernel_opts()),
        Err(Error::Degenerate { .. })
    ));
    let mut near = *class.find(2, 1).unwrap();
    near.energy = 8.0 + 1e-5;
    assert!(matches!(
        width_coefficient(&near, &modes, &c, &phi, &TwistProfile::Linear, &delta, &kernel_opts()),
        Err(Error::ThresholdCollision { k: 2, .. })
    ));
}

#[test]
fn nu_scan_converges() {
    let (modes, c) = rectangle(6);
    let rows = width_vs_nu(&[10.0, 100.0, 1000.0], &modes, &c, &TwistProfile::Linear, 2, 1, &WidthOptions::default())
        .unwrap();
    for r in &rows {
        assert!(r.a > 0.0);
        assert!((r.limit - A_INF).abs() < 1e-6);
    }
    assert!(rows[0].distance > rows[1].distance && rows[1].distance > rows[2].distance, "{rows:?}");
    assert!(rows[2].distance <= 5e-3, "{rows:?}");

    let again = width_vs_nu(&[100.0, 100.0], &modes, &c, &TwistProfile::Linear, 2, 1, &WidthOptions::default()).unwrap();
    assert_eq!(again[0], again[1]);
    assert_eq!(again[0], rows[1]);
}

#[test]
fn numeric_modes_give_the_same_width() {
    let spec = CrossSectionSpec::rectangle(PI, PI / 2.0, 128).unwrap();
    let modes = solve_transverse_modes_with(&spec, 4, ModeMethod::FiniteDifference).unwrap();
    let c = coupling_matrices(&modes).unwrap();
    let w = width_for_target(&modes, &c, &PotentialSpec::DeltaLimit, &TwistProfile::Linear, 2, 1, &kernel_opts()).unwrap();
    let oracle = delta_oracle(c.t1_at(1, 2), modes.energies()[1] - modes.energies()[0]);
    assert!((w.a - oracle).abs() < 1e-6 * oracle.max(1e-3), "{} {oracle}", w.a);
    assert!((w.a - A_INF).abs() < 5e-3 * A_INF);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn width_is_nonnegative_and_balanced(
        b in 0.3f64..0.9,
        nu in 2.0f64..40.0,
        compact in any::<bool>(),
        n in 2usize..4,
    ) {
        let spec = CrossSectionSpec::rectangle(PI, PI * b, 32).unwrap();
        let modes = solve_transverse_modes(&spec, 6).unwrap();
        let c = coupling_matrices(&modes).unwrap();
        let potential = PotentialSpec::poschl_teller(nu).unwrap();
        let states = potential.bound_states().unwrap();
        let class = classify_spectrum(&modes, &states);
        let twist = if compact { TwistProfile::compact(6.0).unwrap() } else { TwistProfile::Linear };
        let target = *class.find(n, 1).unwrap();
        let thresholds = modes.energies();
        let clear = thresholds.iter().all(|t| (t - target.energy).abs() > 1e-3);
        prop_assume!(target.embedded && target.simple && clear);
        let w = width_coefficient(&target, &modes, &c, &states[0], &twist, &potential, &WidthOptions::default()).unwrap();
        for ch in &w.channels {
            prop_assert!(ch.contribution >= -1e-8, "{:?}", ch);
            prop_assert!(ch.im_resolvent >= -1e-8);
        }
        prop_assert_eq!(w.a, w.channels.iter().map(|ch| ch.contribution).sum::<f64>());
        prop_assert_eq!(w.k_star, threshold_index(target.energy, &thresholds));
    }
}
