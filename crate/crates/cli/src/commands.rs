use anyhow::Context;
use clap::ValueEnum;
use num_complex::Complex64;
use serde_json::{json, Value};
use twisted_waveguide::cross_section::{
    coupling_matrices_with, solve_transverse_modes_with, twisted_surface_points, CouplingMatrices, TransverseModeSet,
};
use twisted_waveguide::longitudinal::{
    depth_parameter, discrete_bound_energies, resolvent_form_with, validate_assumption_a, PotentialSpec,
    ResolventEngine, ResolventOptions, Side,
};
use twisted_waveguide::scaled_spectrum::{
    assemble, epsilon_scan, essential_rays, spectrum_window, ScaledProblem,
};
use twisted_waveguide::width::{
    classify_spectrum, coupling_vector, limit_width_delta, threshold_index, width_for_target, width_vs_nu,
};

use crate::config::LoadedConfig;
use crate::output::{num, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Modes,
    Spectrum1d,
    Classify,
    Width,
    Limit,
    NuScan,
    EpsScan,
    Surface,
    Validate,
}

impl Command {
    pub fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

pub struct Outcome {
    pub results: Value,
    pub tables: Vec<Table>,
    pub warnings: Vec<String>,
}

fn outcome(results: Value, tables: Vec<Table>) -> Outcome {
    Outcome { results, tables, warnings: Vec::new() }
}

fn transverse(cfg: &LoadedConfig) -> anyhow::Result<(TransverseModeSet, CouplingMatrices)> {
    let cs = &cfg.config.cross_section;
    let modes = solve_transverse_modes_with(&cfg.spec, cs.modes, cs.method)?;
    let coupling = coupling_matrices_with(&modes, cfg.exec())?;
    Ok((modes, coupling))
}

pub fn run(command: Command, cfg: &LoadedConfig) -> anyhow::Result<Outcome> {
    match command {
        Command::Modes => modes(cfg),
        Command::Spectrum1d => spectrum1d(cfg),
        Command::Classify => classify(cfg),
        Command::Width => width(cfg),
        Command::Limit => limit(cfg),
        Command::NuScan => nu_scan(cfg),
        Command::EpsScan => eps_scan(cfg),
        Command::Surface => surface(cfg),
        Command::Validate => validate(cfg),
    }
}

fn modes(cfg: &LoadedConfig) -> anyhow::Result<Outcome> {
    let (modes, c) = transverse(cfg)?;
    let mut mt = Table::new("modes", &[("n", "mode index, 1-based"), ("energy", "Dirichlet eigenvalue E_n"), ("simple", "1 if E_n is simple")]);
    let mut ct = Table::new("coupling", &[("n", "row index"), ("k", "column index"), ("t1", "<chi_n, d_tau chi_k>"), ("t2", "<chi_n, d_tau^2 chi_k>")]);
    let list: Vec<Value> = modes
        .modes
        .iter()
        .map(|m| {
            let simple = modes.is_simple(m.index);
            mt.push(vec![m.index.to_string(), num(m.energy), u8::from(simple).to_string()]);
            json!({ "n": m.index, "energy": m.energy, "simple": simple, "residual": m.residual })
        })
        .collect();
    for n in 1..=c.size() {
        for k in 1..=c.size() {
            ct.push(vec![n.to_string(), k.to_string(), num(c.t1_at(n, k)), num(c.t2_at(n, k))]);
        }
    }
    let defects: Vec<f64> = (1..=c.size()).map(|n| c.completeness_defect(n)).collect();
    let results = json!({
        "method": modes.method,
        "modes": list,
        "t1": c.t1_rows(),
        "t2": c.t2_rows(),
        "t1_asymmetry": c.asymmetry,
        "completeness_defect": defects,
    });
    Ok(outcome(results, vec![mt, ct]))
}

fn spectrum1d(cfg: &LoadedConfig) -> anyhow::Result<Outcome> {
    let states = cfg.potential.bound_states()?;
    let fd = match &cfg.potential {
        PotentialSpec::PoschlTeller { nu } => discrete_bound_energies(&cfg.potential, 40.0 + 20.0 / nu, 2e-3 / nu.max(1.0)),
        PotentialSpec::Sampled { .. } => states.iter().map(|s| s.mu).collect(),
        _ => discrete_bound_energies(&cfg.potential, 40.0, 1e-3),
    };
    let mut t = Table::new("spectrum1d", &[("j", "bound state index, 1-based"), ("mu", "eigenvalue mu_j"), ("mu_fd", "finite-difference check")]);
    let rows: Vec<Value> = states
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let check = fd.get(i).copied();
            t.push(vec![s.j.to_string(), num(s.mu), check.map(num).unwrap_or_default()]);
            json!({ "j": s.j, "mu": s.mu, "mu_fd": check, "decay_exponent": s.e })
        })
        .collect();
    let depth = match &cfg.potential {
        PotentialSpec::PoschlTeller { nu } => Some(depth_parameter(*nu)),
        _ => None,
    };
    Ok(outcome(json!({ "potential": cfg.potential, "depth_parameter": depth, "bound_states": rows }), vec![t]))
}

fn classify(cfg: &LoadedConfig) -> anyhow::Result<Outcome> {
    let (modes, _) = transverse(cfg)?;
    let c = classify_spectrum(&modes, &cfg.potential.bound_states()?);
    let mut t = Table::new("classify", &[("n", "transverse mode"), ("j", "bound state"), ("E", "E_n + mu_j"), ("embedded", "1 if E >= E_1"), ("simple", "1 if E is simple")]);
    for e in c.below.iter().chain(&c.embedded) {
        t.push(vec![e.n.to_string(), e.j.to_string(), num(e.energy), u8::from(e.embedded).to_string(), u8::from(e.simple).to_string()]);
    }
    Ok(outcome(json!({ "E1": modes.energies()[0], "below": c.below, "embedded": c.embedded }), vec![t]))
}

fn width(cfg: &LoadedConfig) -> anyhow::Result<Outcome> {
    let (modes, c) = transverse(cfg)?;
    let target = cfg.config.target;
    let w = width_for_target(&modes, &c, &cfg.potential, &cfg.twist, target.n, target.j, &cfg.width_options())?;
    let mut t = Table::new("channels", &[("k", "open channel"), ("coupling_sq", "T1[k][n]^2"), ("im_resolvent", "Im <v, r(E - E_k + i0) v>"), ("contribution", "product of the two")]);
    for ch in &w.channels {
        t.push(vec![ch.k.to_string(), num(ch.coupling_sq), num(ch.im_resolvent), num(ch.contribution)]);
    }
    Ok(outcome(serde_json::to_value(&w)?, vec![t]))
}

fn limit(cfg: &LoadedConfig) -> anyhow::Result<Outcome> {
    let l = cfg.config.limit;
    let (e1, e2, c1) = match (l.e1, l.e2, l.c1) {
        (Some(a), Some(b), Some(c)) => (a, b, c),
        _ => {
            let (modes, c) = transverse(cfg)?;
            if modes.len() < 2 {
                return Err(crate::config::ConfigError("limit needs at least two modes".into()).into());
            }
            let e = modes.energies();
            (l.e1.unwrap_or(e[0]), l.e2.unwrap_or(e[1]), l.c1.unwrap_or(c.t1_at(1, 2)))
        }
    };
    let value = limit_width_delta(e1, e2, c1)?;
    let mut warnings = Vec::new();
    if c1.abs() < 1e-12 {
        warnings.push("C_1 = 0: the cross-section couples the first two modes trivially, so the limit width vanishes".to_string());
    }
    let results = json!({ "E1": e1, "E2": e2, "C1": c1, "a_limit": value, "warnings": warnings });
    Ok(Outcome { results, tables: Vec::new(), warnings })
}

fn nu_scan(cfg: &LoadedConfig) -> anyhow::Result<Outcome> {
    let nus = cfg.nus()?;
    let (modes, c) = transverse(cfg)?;
    let target = cfg.config.target;
    let rows = width_vs_nu(&nus, &modes, &c, &cfg.twist, target.n, target.j, &cfg.width_options())?;
    let mut t = Table::new("nu_scan", &[("nu", "well parameter"), ("E", "E_n + mu_j(nu)"), ("a", "golden-rule coefficient"), ("limit", "point-interaction value"), ("distance", "|a - limit|")]);
    for r in &rows {
        t.push(vec![num(r.nu), num(r.energy), num(r.a), num(r.limit), num(r.distance)]);
    }
    Ok(outcome(json!({ "n": target.n, "j": target.j, "rows": rows }), vec![t]))
}

fn eps_scan(cfg: &LoadedConfig) -> anyhow::Result<Outcome> {
    let epsilons = cfg.epsilons()?;
    let (modes, c) = transverse(cfg)?;
    let target = cfg.config.target;
    let opts = cfg.scaled_options();
    let problem = ScaledProblem { modes: &modes, coupling: &c, potential: &cfg.potential, twist: &cfg.twist };
    let scan = epsilon_scan(&problem, target.n, target.j, &epsilons, &opts)?;

    let mut st = Table::new("scan", &[("epsilon", "twist strength"), ("re_E", "Re E(epsilon)"), ("im_E", "Im E(epsilon)"), ("residual", "||(H - E) v|| / ||v||")]);
    for r in &scan.rows {
        st.push(vec![num(r.epsilon), num(r.re_e), num(r.im_e), num(r.residual)]);
    }
    // Spectrum near the target at the largest epsilon, with the rotated continua.
    let eps_max = epsilons.iter().copied().fold(0.0, |m: f64, e| if e.abs() > m.abs() { e } else { m });
    let system = assemble(&problem, eps_max, scan.unperturbed, &opts)?;
    let window = spectrum_window(&system, Complex64::new(scan.unperturbed, 0.0), cfg.config.solver.spectrum_points, &opts)?;
    let mut sp = Table::new("spectrum", &[("re", "Re of an eigenvalue near the target"), ("im", "Im of the eigenvalue")]);
    for z in &window {
        sp.push(vec![num(z.re), num(z.im)]);
    }
    let rays = essential_rays(opts.theta, &system.thresholds);
    let mut rt = Table::new("rays", &[("k", "threshold index"), ("t", "ray parameter"), ("re", "Re(E_k + t e^{-2i Im theta})"), ("im", "Im of the ray point")]);
    for (k, ray) in rays.iter().enumerate() {
        for i in 0..=40 {
            let t = 0.25 * i as f64;
            let z = ray.point(t);
            rt.push(vec![(k + 1).to_string(), num(t), num(z.re), num(z.im)]);
        }
    }
    let results = json!({ "scan": scan, "spectrum_epsilon": eps_max, "rays": rays });
    Ok(outcome(results, vec![st, sp, rt]))
}

fn surface(cfg: &LoadedConfig) -> anyhow::Result<Outcome> {
    let s = cfg.config.surface;
    if !(s.x_max > s.x_min) || s.nx == 0 || s.ns < 3 || !s.epsilon.is_finite() {
        return Err(crate::config::ConfigError("surface needs x_max > x_min, nx >= 1, ns >= 3".into()).into());
    }
    let twist = cfg.twist.clone();
    let pts = twisted_surface_points(&cfg.spec, s.epsilon, |x| twist.alpha(x), (s.x_min, s.x_max), s.nx, s.ns);
    let mut t = Table::new("surface", &[("x", "axial coordinate"), ("y", "first transverse coordinate"), ("z", "second transverse coordinate")]);
    for p in &pts {
        t.push(vec![num(p[0]), num(p[1]), num(p[2])]);
    }
    Ok(outcome(json!({ "epsilon": s.epsilon, "points": pts.len(), "nx": s.nx, "ns": s.ns }), vec![t]))
}

fn validate(cfg: &LoadedConfig) -> anyhow::Result<Outcome> {
    let assumption = validate_assumption_a(&cfg.potential);
    let (modes, _) = transverse(cfg)?;
    let target = cfg.config.target;
    let states = cfg.potential.bound_states()?;
    let state = states
        .iter()
        .find(|b| b.j == target.j)
        .with_context(|| format!("no bound state j = {}", target.j))?;
    let energy = modes.mode(target.n)?.energy + state.mu;
    let thresholds = modes.energies();
    let k_star = threshold_index(energy, &thresholds);
    let v = coupling_vector(&cfg.twist, state)?;
    let mut engines = vec![ResolventEngine::ExteriorScaling, ResolventEngine::Extrapolated];
    if matches!(cfg.potential, PotentialSpec::DeltaLimit) {
        engines.push(ResolventEngine::DeltaKernel);
    }
    let mut checks = Vec::new();
    let mut t = Table::new("engines", &[("k", "channel"), ("engine", "resolvent engine"), ("re", "Re <v, r(E - E_k + i0) v>"), ("im", "Im of the form")]);
    for k in 1..=k_star {
        let lambda = energy - thresholds[k - 1];
        for &engine in &engines {
            let opts = ResolventOptions { engine, h_max: cfg.config.solver.resolvent_h_max, ..Default::default() };
            let r = resolvent_form_with(&cfg.potential, lambda, Side::Plus, &v, false, &opts)?;
            t.push(vec![k.to_string(), format!("{engine:?}"), num(r.value.re), num(r.value.im)]);
            checks.push((k, r.value));
        }
    }
    let spread = (1..=k_star)
        .map(|k| {
            let vals: Vec<Complex64> = checks.iter().filter(|c| c.0 == k).map(|c| c.1).collect();
            vals.iter().flat_map(|a| vals.iter().map(move |b| (a - b).norm())).fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    let results = json!({
        "assumption_a": assumption,
        "assumption_a_holds": assumption.holds(),
        "E": energy,
        "k_star": k_star,
        "engine_spread": spread,
        "max_mode_residual": modes.modes.iter().map(|m| m.residual).fold(0.0, f64::max),
    });
    Ok(outcome(results, vec![t]))
}
