//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use twisted_waveguide::cross_section::{
    coupling_matrices, solve_transverse_modes, solve_transverse_modes_with, CrossSectionSpec, ModeMethod,
};
use twisted_waveguide::longitudinal::{
    delta_limit_bound_state, depth_parameter, discrete_bound_energies, poschl_teller_energies, resolvent_form_with,
    FnProfile, PotentialSpec, ResolventEngine, ResolventOptions, Side,
};
use twisted_waveguide::scaled_spectrum::{
    assemble, epsilon_scan, essential_rays, ray_distance, spectrum_window, theta_sweep, ScaledOptions, ScaledProblem,
};
use twisted_waveguide::width::{
    classify_spectrum, limit_width_delta, threshold_index, width_coefficient, width_for_target, width_vs_nu,
    TwistProfile, WidthOptions,
};

type Outcome = Result<(bool, String), Box<dyn std::error::Error>>;

const A_INF: f64 = 0.081_891_970_2;
const DELTA_IM: f64 = 0.046_064_2;

fn rectangle(grid_n: usize) -> CrossSectionSpec {
    CrossSectionSpec::rectangle(PI, PI / 2.0, grid_n).unwrap()
}

fn c1_coupling_constant() -> Outcome {
    let t1 = |n: usize| -> Result<f64, Box<dyn std::error::Error>> {
        let modes = solve_transverse_modes_with(&rectangle(n), 2, ModeMethod::FiniteDifference)?;
        Ok(coupling_matrices(&modes)?.t1_at(1, 2))
    };
    let exact = -2.0 / 3.0;
    let errs = [t1(64)?, t1(128)?, t1(256)?].map(|v| ((v - exact) / exact).abs());
    let ratio = errs[1] / errs[2];
    let pass = errs[2] <= 1e-3 && errs[0] > errs[1] && errs[1] > errs[2] && (3.0..5.0).contains(&ratio);
    Ok((pass, format!("rel err {:.2e}/{:.2e}/{:.2e} at n = 64/128/256, refinement ratio {ratio:.2} (tol 1e-3, order 2)", errs[0], errs[1], errs[2])))
}

fn c2_poschl_teller() -> Outcome {
    let mut worst = 0.0f64;
    let mut counts_ok = true;
    for nu in [1.0, 10.0, 0.1] {
        let exact = poschl_teller_energies(nu);
        let fd = discrete_bound_energies(&PotentialSpec::poschl_teller(nu)?, 40.0 + 20.0 / nu, 2e-3 / nu.max(1.0));
        // Bound states j = 1, 2, ... with j < t + 1.
        let t = depth_parameter(nu);
        let rule = (1..).take_while(|&j| (j as f64) < t + 1.0).count();
        counts_ok &= exact.len() == rule && fd.len() == rule;
        if nu >= 1.0 {
            for (a, b) in exact.iter().zip(&fd) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    Ok((worst <= 1e-4 && counts_ok, format!("max |mu_fd - mu_exact| = {worst:.2e} for nu in {{1, 10}} (tol 1e-4); counts match the j < t+1 rule: {counts_ok}")))
}

fn c3_delta_resolvent() -> Outcome {
    let phi = delta_limit_bound_state();
    let mut line = String::new();
    let mut pass = true;
    for engine in [ResolventEngine::ExteriorScaling, ResolventEngine::Extrapolated] {
        let opts = ResolventOptions::with_engine(engine);
        for (scale, want) in [(1.0, DELTA_IM), (-2.0, 4.0 * DELTA_IM)] {
            let p = phi.clone();
            let v = FnProfile { f: move |x| scale * p.derivative(x), decay_length: 2.0, feature_scale: 2.0 };
            let im = resolvent_form_with(&PotentialSpec::DeltaLimit, 2.75, Side::Plus, &v, false, &opts)?.value.im;
            pass &= (im - want).abs() <= 1e-4;
            line += &format!("{engine:?} v={scale}phi': {im:.7} vs {want:.7}; ");
        }
    }
    Ok((pass, format!("{line}(tol 1e-4)")))
}

fn c4_closed_form_limit() -> Outcome {
    let modes = solve_transverse_modes(&rectangle(64), 6)?;
    let c = coupling_matrices(&modes)?;
    let opts = WidthOptions { resolvent: ResolventOptions::with_engine(ResolventEngine::DeltaKernel), ..Default::default() };
    let w = width_for_target(&modes, &c, &PotentialSpec::DeltaLimit, &TwistProfile::Linear, 2, 1, &opts)?;
    let e = modes.energies();
    let limit = limit_width_delta(e[0], e[1], c.t1_at(1, 2))?;
    let pass = (w.a - limit).abs() <= 1e-6 && (limit - A_INF).abs() <= 1e-6;
    Ok((pass, format!("a = {:.9}, closed form {limit:.9}, |diff| = {:.1e} (tol 1e-6)", w.a, (w.a - limit).abs())))
}

fn c5_nu_convergence() -> Outcome {
    let modes = solve_transverse_modes(&rectangle(64), 6)?;
    let c = coupling_matrices(&modes)?;
    let rows = width_vs_nu(&[10.0, 100.0, 1000.0], &modes, &c, &TwistProfile::Linear, 2, 1, &WidthOptions::default())?;
    let d: Vec<f64> = rows.iter().map(|r| (r.a - A_INF).abs()).collect();
    let pass = d[0] > d[1] && d[1] > d[2] && d[2] <= 5e-3;
    let a: Vec<String> = rows.iter().map(|r| format!("{:.6}", r.a)).collect();
    Ok((pass, format!("a(10, 100, 1000) = {}; distances {:.2e} > {:.2e} > {:.2e} (last tol 5e-3)", a.join(", "), d[0], d[1], d[2])))
}

fn pt100_problem() -> Result<(twisted_waveguide::cross_section::TransverseModeSet, twisted_waveguide::cross_section::CouplingMatrices), Box<dyn std::error::Error>> {
    let modes = solve_transverse_modes(&rectangle(64), 6)?;
    let c = coupling_matrices(&modes)?;
    Ok((modes, c))
}

fn c6_golden_rule_vs_resonance() -> Outcome {
    let (modes, c) = pt100_problem()?;
    let potential = PotentialSpec::poschl_teller(100.0)?;
    let twist = TwistProfile::compact(20.0)?;
    let problem = ScaledProblem { modes: &modes, coupling: &c, potential: &potential, twist: &twist };
    let scan = epsilon_scan(&problem, 2, 1, &[0.02, 0.04, 0.06, 0.08], &ScaledOptions::default())?;
    let golden = width_for_target(&modes, &c, &potential, &twist, 2, 1, &WidthOptions::default())?;
    let rel = (scan.fit.a_fit - golden.a).abs() / golden.a;
    let below = scan.rows.iter().all(|r| r.im_e < 0.0);
    Ok((rel <= 0.15 && below, format!("a_fit = {:.6}, golden rule a(100) = {:.6}, rel diff {rel:.3} (tol 0.15); Im E < 0 at every epsilon: {below}", scan.fit.a_fit, golden.a)))
}

fn c7_theta_independence() -> Outcome {
    let (modes, c) = pt100_problem()?;
    let potential = PotentialSpec::poschl_teller(100.0)?;
    let twist = TwistProfile::compact(20.0)?;
    let problem = ScaledProblem { modes: &modes, coupling: &c, potential: &potential, twist: &twist };
    let rows = theta_sweep(&problem, 2, 1, 0.05, &[0.2, 0.25, 0.3, 0.35, 0.4], &ScaledOptions::default())?;
    let z0 = Complex64::new(rows[0].re_e, rows[0].im_e);
    let spread = rows.iter().map(|r| (Complex64::new(r.re_e, r.im_e) - z0).norm() / z0.norm()).fold(0.0, f64::max);

    let free = PotentialSpec::Free;
    let linear = TwistProfile::Linear;
    let free_problem = ScaledProblem { modes: &modes, coupling: &c, potential: &free, twist: &linear };
    let mut dist = Vec::new();
    for (level, length) in [(0, 20.0), (1, 40.0), (2, 80.0)] {
        let opts = ScaledOptions { theta: 0.3, channels: 2, level, h_max: 0.05, exterior_length: Some(length), ..Default::default() };
        let sys = assemble(&free_problem, 0.0, 7.0, &opts)?;
        let rays = essential_rays(0.3, &sys.thresholds);
        let vals = spectrum_window(&sys, rays[0].point(2.0), 8, &opts)?;
        dist.push(vals.iter().map(|v| ray_distance(&rays, *v)).fold(0.0, f64::max));
    }
    let shrinking = dist.windows(2).all(|w| w[1] < w[0]);
    Ok((spread < 1e-4 && shrinking, format!("relative spread over Im theta in [0.2, 0.4] = {spread:.1e} (tol 1e-4); ray distance {:.3}/{:.3}/{:.3} under refinement", dist[0], dist[1], dist[2])))
}

fn c8_symmetry_null() -> Outcome {
    let spec = CrossSectionSpec::disk(1.0, 64)?;
    let modes = solve_transverse_modes(&spec, 6)?;
    let c = coupling_matrices(&modes)?;
    let worst = (1..=6).flat_map(|k| [c.t1_at(k, 1), c.t1_at(k, 6)]).map(|t| t * t).fold(0.0, f64::max);
    let potential = PotentialSpec::poschl_teller(100.0)?;
    let twist = TwistProfile::compact(20.0)?;
    let problem = ScaledProblem { modes: &modes, coupling: &c, potential: &potential, twist: &twist };
    let scan = epsilon_scan(&problem, 6, 1, &[0.02, 0.04, 0.06, 0.08], &ScaledOptions::default())?;
    let null = scan.fit.a_fit.abs() <= 3.0 * scan.fit.std_error + 1e-8;
    Ok((worst <= 1e-10 && null, format!("max |T1[k][n]|^2 for radial n = 1, 6: {worst:.1e} (tol 1e-10); scan slope {:.1e} +- {:.1e}", scan.fit.a_fit, scan.fit.std_error)))
}

fn c9_positivity_and_bookkeeping() -> Outcome {
    let mut runner = TestRunner::new_with_rng(Config::default(), TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    let strategy = (0.3f64..0.9, 2.0f64..60.0, proptest::bool::ANY, 2usize..4, 4.0f64..20.0);
    let (mut cases, mut worst, mut books) = (0, f64::INFINITY, 0.0f64);
    let mut tries = 0;
    while cases < 24 && tries < 200 {
        tries += 1;
        let (b, nu, compact, n, x) = strategy.new_tree(&mut runner).map_err(|e| e.to_string())?.current();
        let spec = CrossSectionSpec::rectangle(PI, PI * b, 32)?;
        let modes = solve_transverse_modes(&spec, 6)?;
        let c = coupling_matrices(&modes)?;
        let potential = PotentialSpec::poschl_teller(nu)?;
        let states = potential.bound_states()?;
        let target = *classify_spectrum(&modes, &states).find(n, 1).expect("pair exists");
        let thresholds = modes.energies();
        if !target.embedded || !target.simple || thresholds.iter().any(|t| (t - target.energy).abs() < 1e-3) {
            continue;
        }
        let twist = if compact { TwistProfile::compact(x)? } else { TwistProfile::Linear };
        let w = width_coefficient(&target, &modes, &c, &states[0], &twist, &potential, &WidthOptions::default())?;
        assert_eq!(w.k_star, threshold_index(target.energy, &thresholds));
        worst = w.channels.iter().map(|ch| ch.contribution).fold(worst, f64::min);
        books = books.max((w.a - w.channels.iter().map(|ch| ch.contribution).sum::<f64>()).abs());
        cases += 1;
    }
    let pass = cases >= 20 && worst >= -1e-8 && books == 0.0;
    Ok((pass, format!("{cases} random configs: min channel contribution {worst:.3e} (tol -1e-8); max |a - sum| = {books:e} (exact)")))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("rectangle coupling constant", c1_coupling_constant),
        ("Poschl-Teller spectrum", c2_poschl_teller),
        ("delta-model resolvent", c3_delta_resolvent),
        ("closed-form limit", c4_closed_form_limit),
        ("nu-convergence", c5_nu_convergence),
        ("golden rule vs direct resonance", c6_golden_rule_vs_resonance),
        ("theta-independence and rays", c7_theta_independence),
        ("symmetry null", c8_symmetry_null),
        ("positivity and bookkeeping", c9_positivity_and_bookkeeping),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let (pass, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!pass);
        println!("[{}] #{} {name}: {detail} [{:.1}s]", if pass { "PASS" } else { "FAIL" }, i + 1, t.elapsed().as_secs_f64());
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
