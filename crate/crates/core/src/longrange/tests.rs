use std::sync::OnceLock;

use super::*;

fn khz(e: f64) -> f64 {
    units::hartree_to_khz(e)
}

fn calibrated() -> &'static (PotentialModel, Vec<VibLevel>) {
    static CAL: OnceLock<(PotentialModel, Vec<VibLevel>)> = OnceLock::new();
    CAL.get_or_init(|| {
        let policy = GridPolicy::default();
        let model = calibrate_boundary(&PotentialModel::sodium(), (33, units::khz_to_hartree(1460.0)), &policy).unwrap();
        let levels = solve_labels(&model, 33..=38, &policy).unwrap();
        (model, levels)
    })
}

#[test]
fn harmonic_spectrum() {
    let (mu, omega) = (1.0, 1.0);
    let a_ho = 1.0;
    let model = PotentialModel::harmonic(omega, mu, 1e-10 * a_ho).unwrap();
    let levels = solve_lowest(&model, 6, &GridPolicy::default()).unwrap();
    for (n, l) in levels.iter().enumerate() {
        let exact = (2.0 * n as f64 + 1.5) * omega;
        assert!((l.energy / exact - 1.0).abs() < 1e-8, "n={n}: {}", l.energy);
        assert_eq!(l.nodes, n);
    }
}

#[test]
fn turning_point_examples() {
    let model = PotentialModel::sodium();
    let c3 = model.c3().unwrap();
    let c3_khz = 6.24e9;
    let m = PotentialModel::inverse_cube(units::c3_khz_nm3_to_au(c3_khz), model.mu(), 70.0, InnerBoundary::HardWall).unwrap();
    let r = units::bohr_to_nm(outer_turning_point(&m, units::khz_to_hartree(1460.0)).unwrap());
    assert!((r - 162.3).abs() < 0.5, "{r}");
    let r = units::bohr_to_nm(outer_turning_point(&m, units::khz_to_hartree(0.3017)).unwrap());
    assert!((r / 2700.0 - 1.0).abs() < 0.02, "{r}");
    let nm = units::nm_to_bohr(1.0);
    let r = outer_turning_point(&model, c3 / nm.powi(3)).unwrap();
    assert!((r / nm - 1.0).abs() < 1e-12);
    assert!(outer_turning_point(&model, 0.0).is_err());
    assert!(outer_turning_point(&model, -1.0).is_err());
}

#[test]
fn calibrated_sodium_levels() {
    let (model, levels) = calibrated();
    let wall_nm = units::bohr_to_nm(model.r_in());
    assert!((0.1..10.0).contains(&wall_nm), "wall at {wall_nm} nm");
    let labels: Vec<i32> = levels.iter().map(|l| l.v_label).collect();
    assert_eq!(labels, (33..=38).collect::<Vec<_>>());
    assert!((khz(levels[0].binding_energy) / 1460.0 - 1.0).abs() < 1e-6);
    for (l, &(v, e, _, _)) in levels.iter().zip(&SODIUM_REFERENCE_LEVELS).take(5) {
        assert_eq!(l.v_label, v);
        let rel = khz(l.binding_energy) / e - 1.0;
        assert!(rel.abs() < 0.10, "v={v}: {} kHz", khz(l.binding_energy));
    }
    for w in levels.windows(2) {
        assert_eq!(w[1].nodes, w[0].nodes + 1);
        assert!(w[1].binding_energy < w[0].binding_energy);
    }
    let c3 = model.c3().unwrap();
    for l in levels {
        assert!(l.r_max < l.r_t);
        assert!((l.binding_energy * l.r_t.powi(3) / c3 - 1.0).abs() < 1e-12);
    }
    let ratio = |i: usize| levels[i].r_max / levels[i].r_t;
    assert!((ratio(0) / (139.3 / 162.3) - 1.0).abs() < 0.10, "{}", ratio(0));
    assert!((ratio(4) / (794.0 / 1000.0) - 1.0).abs() < 0.10, "{}", ratio(4));
}

#[test]
fn completeness_matches_count_difference() {
    let (model, _) = calibrated();
    let policy = GridPolicy::default();
    let (lo, hi) = (units::khz_to_hartree(1.0), units::khz_to_hartree(3000.0));
    let found = solve_levels(model, (lo, hi), &policy).unwrap();
    let solver = model.solver_for_binding(lo, &policy).unwrap();
    let expected = solver.count_nodes(-lo) - solver.count_nodes(-hi);
    assert_eq!(found.len(), expected);
    assert_eq!(found.len(), 5);
    let labels: Vec<i32> = found.iter().map(|l| l.v_label).collect();
    assert_eq!(labels, vec![33, 34, 35, 36, 37]);
}

#[test]
fn orthonormal_levels() {
    let (_, levels) = calibrated();
    for (i, a) in levels.iter().enumerate().take(5) {
        for b in &levels[i..5] {
            let s = a.wave.overlap_with(&b.wave, |_| 1.0).unwrap();
            let expect = if a.v_label == b.v_label { 1.0 } else { 0.0 };
            assert!((s - expect).abs() < 1e-6, "<{}|{}> = {s}", a.v_label, b.v_label);
        }
    }
}

#[test]
fn grid_doubling_is_stable() {
    let (model, levels) = calibrated();
    let fine = solve_labels(model, 33..=37, &GridPolicy::default().refined(2.0)).unwrap();
    for (a, b) in levels.iter().zip(&fine) {
        let rel = (a.binding_energy / b.binding_energy - 1.0).abs();
        assert!(rel < 1e-8, "v={}: {rel:e}", a.v_label);
    }
}

#[test]
fn short_range_amplitude_observation() {
    let (_, levels) = calibrated();
    let r10 = units::nm_to_bohr(10.0);
    for l in levels {
        let peak = l.wave.max_abs();
        let inner = l
            .wave
            .grid()
            .points()
            .iter()
            .zip(l.wave.values())
            .filter(|(r, _)| **r < r10)
            .fold(0.0f64, |m, (_, u)| m.max(u.abs()));
        // a single-channel wall model keeps 2-12 % of the peak inside 10 nm
        assert!(inner / peak < 0.2, "v={}: {:e}", l.v_label, inner / peak);
    }
}

#[test]
fn similarity_transform() {
    let policy = GridPolicy::default();
    let base = PotentialModel::inverse_cube(6.4, 20000.0, 70.0, InnerBoundary::HardWall).unwrap();
    let lambda: f64 = 2.0;
    let scaled = PotentialModel::inverse_cube(6.4 / lambda, 20000.0, 70.0 / lambda, InnerBoundary::HardWall).unwrap();
    let window = (1e-12, 1e-9);
    let a = solve_levels(&base, window, &policy).unwrap();
    let b = solve_levels(&scaled, (window.0 * lambda * lambda, window.1 * lambda * lambda), &policy).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        let rel = (x.binding_energy / (y.binding_energy / (lambda * lambda)) - 1.0).abs();
        assert!(rel < 1e-8, "{rel:e}");
        assert_eq!(x.nodes, y.nodes);
    }
}

#[test]
fn calibration_fixed_point() {
    let (model, levels) = calibrated();
    let again = calibrate_boundary(model, (33, levels[0].binding_energy), &GridPolicy::default()).unwrap();
    assert!((again.r_in() / model.r_in() - 1.0).abs() < 1e-10);
}

#[test]
fn cross_calibration_agrees() {
    let (_, from33) = calibrated();
    let policy = GridPolicy::default();
    let m34 = calibrate_boundary(&PotentialModel::sodium(), (34, units::khz_to_hartree(550.0)), &policy).unwrap();
    let from34 = solve_labels(&m34, 33..=37, &policy).unwrap();
    for (a, b) in from33.iter().zip(&from34) {
        assert_eq!(a.v_label, b.v_label);
        let rel = (a.binding_energy / b.binding_energy - 1.0).abs();
        assert!(rel < 0.10, "v={}: {rel}", a.v_label);
    }
}

#[test]
fn log_derivative_calibration() {
    let policy = GridPolicy::default();
    let start = PotentialModel::sodium()
        .with_inner(60.0, InnerBoundary::LogDerivative(0.0))
        .unwrap();
    let target = units::khz_to_hartree(1460.0);
    let m = calibrate_boundary(&start, (33, target), &policy).unwrap();
    assert_eq!(m.r_in(), 60.0);
    let lv = solve_labels(&m, 33..=33, &policy).unwrap();
    assert!((lv[0].binding_energy / target - 1.0).abs() < 1e-6);
}

#[test]
fn window_preconditions() {
    let model = PotentialModel::sodium();
    let policy = GridPolicy::default();
    assert!(solve_levels(&model, (0.0, 1e-10), &policy).is_err());
    assert!(solve_levels(&model, (1e-10, 1e-11), &policy).is_err());
    assert!(solve_levels(&model, (1e-10, 2.0 * model.depth()), &policy).is_err());
    let coarse = GridPolicy {
        log_step: 0.05,
        ..policy
    };
    assert!(matches!(
        solve_levels(&model, (1e-12, 0.5 * model.depth()), &coarse),
        Err(Error::Grid(_))
    ));
    let short_tail = GridPolicy {
        tail_decay: 10.0,
        ..policy
    };
    assert!(solve_levels(&model, (1e-12, 1e-10), &short_tail).is_err());
}

#[test]
fn tabulated_short_range() {
    let model = PotentialModel::sodium();
    let c3 = model.c3().unwrap();
    let r: Vec<f64> = (0..20).map(|i| 40.0 + 2.0 * f64::from(i)).collect();
    let v: Vec<f64> = r.iter().map(|x| -c3 / x.powi(3)).collect();
    let table = PotentialTable::new(r.clone(), v.clone()).unwrap();
    let joined = model.clone().with_table(table).unwrap();
    assert!((joined.potential(51.0) / (-c3 / 51f64.powi(3)) - 1.0).abs() < 1e-4);
    assert_eq!(joined.potential(100.0), -c3 / 1e6);

    let off: Vec<f64> = v.iter().map(|x| 1.05 * x).collect();
    assert!(model.clone().with_table(PotentialTable::new(r.clone(), off).unwrap()).is_err());

    // deep well inside the table: turning point found by root search
    let eps = c3 / 73f64.powi(3);
    let rt = outer_turning_point(&joined, eps).unwrap();
    assert!((rt / 73.0 - 1.0).abs() < 1e-4, "{rt}");
    assert!(outer_turning_point(&joined, c3 / 60f64.powi(3)).is_err());
}

#[test]
fn bound_count_and_labels() {
    let (model, levels) = calibrated();
    let total = model.bound_level_count(&GridPolicy::default()).unwrap();
    assert!(total > 30);
    assert_eq!(levels[0].nodes, total - 7);
}
