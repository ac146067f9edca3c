use std::f64::consts::PI;

use twisted_waveguide::cross_section::{
    coupling_matrices, solve_transverse_modes, solve_transverse_modes_with, twisted_surface_points, CrossSectionSpec,
    ModeMethod,
};
use twisted_waveguide::Error;

/// `<chi, d_tau^2 chi> = -|d_tau chi|^2` for the sine mode `(p, q)` of
/// `[0,a]x[0,b]`, integrated by hand.
fn rectangle_t2_diagonal(a: f64, b: f64, p: f64, q: f64) -> f64 {
    let amp2 = 4.0 / (a * b);
    let (pp, qq) = (p * PI / a, q * PI / b);
    let y2 = a.powi(3) / 6.0 - a.powi(3) / (4.0 * p * p * PI * PI);
    let z2 = b.powi(3) / 6.0 - b.powi(3) / (4.0 * q * q * PI * PI);
    let norm = amp2 * qq * qq * y2 * (b / 2.0) + amp2 * pp * pp * (a / 2.0) * z2 - 0.5;
    -norm
}

/// Independent midpoint-rule overlap of analytic sine modes.
fn rectangle_t1_midpoint(a: f64, b: f64, (p1, q1): (f64, f64), (p2, q2): (f64, f64), n: usize) -> f64 {
    let amp = 2.0 / (a * b).sqrt();
    let (hy, hz) = (a / n as f64, b / n as f64);
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            let (y, z) = ((i as f64 + 0.5) * hy, (j as f64 + 0.5) * hz);
            let chi1 = amp * (p1 * PI * y / a).sin() * (q1 * PI * z / b).sin();
            let dz = amp * (q2 * PI / b) * (p2 * PI * y / a).sin() * (q2 * PI * z / b).cos();
            let dy = amp * (p2 * PI / a) * (p2 * PI * y / a).cos() * (q2 * PI * z / b).sin();
            s += chi1 * (y * dz - z * dy);
        }
    }
    s * hy * hz
}

#[test]
fn rectangle_eigenvalues_closed_and_numeric() {
    let spec = CrossSectionSpec::rectangle(PI, PI / 2.0, 64).unwrap();
    let closed = solve_transverse_modes(&spec, 4).unwrap();
    assert_eq!(closed.method, ModeMethod::ClosedForm);
    for (e, want) in closed.energies().iter().zip([5.0, 8.0, 13.0, 17.0]) {
        assert!((e - want).abs() < 1e-12);
    }
    let fd = solve_transverse_modes_with(&spec, 4, ModeMethod::FiniteDifference).unwrap();
    for (e, want) in fd.energies().iter().zip([5.0, 8.0, 13.0, 17.0]) {
        assert!((e - want).abs() / want < 5e-3, "{e} vs {want}");
    }
}

#[test]
fn numeric_eigenvalues_converge_at_second_order() {
    let err = |n: usize| {
        let spec = CrossSectionSpec::rectangle(PI, PI / 2.0, n).unwrap();
        let fd = solve_transverse_modes_with(&spec, 2, ModeMethod::FiniteDifference).unwrap();
        (fd.modes[1].energy - 8.0).abs()
    };
    let ratio = err(32) / err(64);
    assert!((ratio - 4.0).abs() < 0.2, "ratio {ratio}");
}

#[test]
fn modes_are_orthonormal_on_both_paths() {
    let spec = CrossSectionSpec::rectangle(2.0, 1.3, 48).unwrap();
    let fd = solve_transverse_modes_with(&spec, 5, ModeMethod::FiniteDifference).unwrap();
    for (a, ma) in fd.modes.iter().enumerate() {
        for (b, mb) in fd.modes.iter().enumerate() {
            let ip = ma.sample(&spec).inner(&mb.sample(&spec)).unwrap();
            let want = if a == b { 1.0 } else { 0.0 };
            assert!((ip - want).abs() < 1e-9, "({a},{b}) {ip}");
        }
    }
}

#[test]
fn square_degeneracy_is_flagged_on_both_paths() {
    let spec = CrossSectionSpec::rectangle(PI, PI, 32).unwrap();
    for method in [ModeMethod::ClosedForm, ModeMethod::FiniteDifference] {
        let set = solve_transverse_modes_with(&spec, 3, method).unwrap();
        assert!(set.is_simple(1));
        assert!(!set.is_simple(2) && !set.is_simple(3));
    }
}

#[test]
fn rectangle_coupling_constant() {
    let spec = CrossSectionSpec::rectangle(PI, PI / 2.0, 64).unwrap();
    let c = coupling_matrices(&solve_transverse_modes(&spec, 4).unwrap()).unwrap();
    assert!((c.t1_at(1, 2) + 2.0 / 3.0).abs() < 1e-12);
    assert!((c.t1_at(2, 1) - 2.0 / 3.0).abs() < 1e-12);
    assert!(c.asymmetry < 1e-8);
    let oracle = rectangle_t1_midpoint(PI, PI / 2.0, (1.0, 1.0), (2.0, 1.0), 800);
    assert!((c.t1_at(1, 2).abs() - oracle.abs()).abs() < 1e-5);
    let t2 = rectangle_t2_diagonal(PI, PI / 2.0, 2.0, 1.0);
    assert!((c.t2_at(2, 2) - t2).abs() < 1e-8, "{} vs {t2}", c.t2_at(2, 2));
    assert!((0..4).all(|n| c.t2[(n, n)] <= 0.0));
    for n in 0..4 {
        assert!(c.t1[(n, n)] == 0.0);
    }
}

#[test]
fn completeness_defect_shrinks_with_truncation() {
    let spec = CrossSectionSpec::rectangle(PI, PI / 2.0, 32).unwrap();
    let defects: Vec<f64> = [4, 8, 16, 32]
        .iter()
        .map(|&k| coupling_matrices(&solve_transverse_modes(&spec, k).unwrap()).unwrap().completeness_defect(1))
        .collect();
    assert!(defects.windows(2).all(|w| w[1] < w[0]), "{defects:?}");
}

#[test]
fn numeric_coupling_matches_closed_form() {
    let spec = CrossSectionSpec::rectangle(PI, PI / 2.0, 128).unwrap();
    let fd = coupling_matrices(&solve_transverse_modes_with(&spec, 3, ModeMethod::FiniteDifference).unwrap()).unwrap();
    assert!((fd.t1_at(1, 2) + 2.0 / 3.0).abs() < 1e-3);
    assert!(fd.asymmetry < 1e-10);
    let t2 = rectangle_t2_diagonal(PI, PI / 2.0, 2.0, 1.0);
    assert!((fd.t2_at(2, 2) - t2).abs() / t2.abs() < 1e-2);
}

#[test]
fn disk_has_vanishing_rotational_coupling() {
    let spec = CrossSectionSpec::disk(1.0, 32).unwrap();
    let set = solve_transverse_modes(&spec, 6).unwrap();
    assert!(set.is_simple(1));
    let c = coupling_matrices(&set).unwrap();
    for k in 1..=6 {
        assert!(c.t1_at(k, 1).abs() < 1e-12);
    }
    assert!(set.angular_derivative(1).unwrap().max_abs() < 1e-12);
    // The first excited pair rotates into itself.
    assert!((c.t1_at(2, 3).abs() - 1.0).abs() < 1e-10);
}

#[test]
fn disk_numeric_path_keeps_radial_rows_null() {
    // The lattice breaks the m = 2 pair into two simple modes that rotate into
    // each other, so only the radial modes (1 and 6) carry a null row.
    let spec = CrossSectionSpec::disk(1.0, 64).unwrap();
    let set = solve_transverse_modes_with(&spec, 6, ModeMethod::FiniteDifference).unwrap();
    let c = coupling_matrices(&set).unwrap();
    for n in [1, 6] {
        assert!(set.is_simple(n));
        for k in 1..=6 {
            assert!(c.t1_at(k, n).abs() < 1e-8, "T1[{k}][{n}] = {}", c.t1_at(k, n));
        }
    }
    assert!(!set.is_simple(2) && !set.is_simple(3));
}

#[test]
fn self_coupling_vanishes() {
    let tri = CrossSectionSpec::polygon(vec![[0.0, 0.0], [3.0, 0.2], [0.5, 2.0]], 48).unwrap();
    let set = solve_transverse_modes(&tri, 3).unwrap();
    assert_eq!(set.method, ModeMethod::FiniteDifference);
    let c = coupling_matrices(&set).unwrap();
    for n in 1..=3 {
        let d = set.angular_derivative(n).unwrap();
        assert!(set.modes[n - 1].sample(&tri).inner(&d).unwrap().abs() < 1e-10);
        assert!(c.t2_at(n, n) < 0.0);
    }
}

#[test]
fn angular_derivative_of_rectangle_ground_state() {
    // Rotation by pi about the centre commutes with d_tau, so with the axis
    // there the field inherits the point-reflection parity of chi_1.
    let spec = CrossSectionSpec::rectangle(PI, PI / 2.0, 32).unwrap();
    let centred = spec.clone().with_axis_offset([PI / 2.0, PI / 4.0]).unwrap();
    let d = solve_transverse_modes(&centred, 1).unwrap().angular_derivative(1).unwrap();
    let g = d.grid;
    for i in 0..=g.ny {
        for j in 0..=g.nz {
            assert!((d.at(i, j) - d.at(g.ny - i, g.nz - j)).abs() < 1e-12);
        }
    }
    let corner = solve_transverse_modes(&spec, 1).unwrap().angular_derivative(1).unwrap();
    assert!(corner.max_abs() > 0.1);
    // Finite-difference check of the sampled field at an interior node.
    let (y, z) = g.point(9, 5);
    let f = |y: f64, z: f64| (2.0 / (PI * PI / 2.0).sqrt()) * y.sin() * (2.0 * z).sin();
    let h = 1e-5;
    let fd = y * (f(y, z + h) - f(y, z - h)) / (2.0 * h) - z * (f(y + h, z) - f(y - h, z)) / (2.0 * h);
    assert!((corner.at(9, 5) - fd).abs() < 1e-8);
}

#[test]
fn coarse_mesh_is_rejected() {
    let tri = CrossSectionSpec::polygon(vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], 16).unwrap();
    assert!(matches!(solve_transverse_modes(&tri, 20), Err(Error::MeshTooCoarse { .. })));
}

#[test]
fn untwisted_surface_is_a_prism() {
    let spec = CrossSectionSpec::disk(0.7, 16).unwrap();
    let pts = twisted_surface_points(&spec, 0.0, |x| x, (-2.0, 2.0), 5, 20);
    assert_eq!(pts.len(), 100);
    for (k, p) in pts.iter().enumerate() {
        let base = pts[k % 20];
        assert_eq!((p[1], p[2]), (base[1], base[2]));
    }
}
