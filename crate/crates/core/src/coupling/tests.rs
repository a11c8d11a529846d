use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::grid::{NormConvention, RadialGrid, Spacing};
use crate::scattering::{maxwell_panels, PanelRule};
use crate::trap::{contact_resolving_grid, trap_levels_on};

const MU: f64 = 20954.0;

fn wave_from(grid: RadialGrid, f: impl Fn(f64) -> f64) -> RadialWave {
    let grid = Arc::new(grid);
    let u = grid.points().iter().map(|&r| f(r)).collect();
    RadialWave::new(grid, u, NormConvention::Unit).unwrap().normalized().unwrap()
}

// R² e^{-R/β}: a compact bound-like profile
fn compact_wave(beta: f64) -> RadialWave {
    let grid = RadialGrid::log_with_step(1.0, 80.0 * beta, 1e-3).unwrap();
    wave_from(grid, |r| r * r * (-r / beta).exp())
}

fn synthetic_level(v: i32, binding: f64, wave: RadialWave) -> VibLevel {
    VibLevel {
        v_label: v,
        binding_energy: binding,
        energy: -binding,
        nodes: wave.nodes(),
        r_t: f64::NAN,
        r_max: wave.peak_radius(),
        wave,
    }
}

fn trap_100khz(xi: f64) -> TrapSpec {
    let probe = TrapSpec::for_pair(units::SODIUM_MASS_U, 100.0, 0.0).unwrap();
    TrapSpec::from_xi(probe.omega(), probe.mu(), xi).unwrap()
}

#[test]
fn photon_factor_parsing() {
    for f in PhotonFactor::ALL {
        assert_eq!(f.as_str().parse::<PhotonFactor>().unwrap(), f);
        assert_eq!(f.to_string(), f.as_str());
    }
    assert!("cos".parse::<PhotonFactor>().is_err());
    let k = 0.3;
    assert_eq!(PhotonFactor::Unity.eval(k, 7.0), 1.0);
    assert_eq!(PhotonFactor::CosHalf.eval(k, 2.0), (0.3f64).cos());
    assert_eq!(PhotonFactor::CosFull.eval(k, 2.0), (0.6f64).cos());
}

#[test]
fn identical_waves_overlap_to_one() {
    let spec = trap_100khz(0.042);
    let t = trap_levels(&spec, 1).unwrap();
    let eta = fc_bound_bound(&t[0].wave, &t[0].wave, &LaserSpec::default()).unwrap();
    assert!((eta - 1.0).abs() < 1e-12);
}

#[test]
fn orthogonal_trap_levels() {
    let spec = trap_100khz(0.042);
    let grid = Arc::new(contact_resolving_grid(&spec).unwrap());
    let t = trap_levels_on(&spec, 1, grid).unwrap();
    let eta = fc_bound_bound(&t[0].wave, &t[1].wave, &LaserSpec::default()).unwrap();
    assert!(eta.abs() < 1e-6, "{eta}");
}

#[test]
fn rejects_unnormalized_and_disjoint() {
    let w = compact_wave(10.0);
    let laser = LaserSpec::default();
    assert!(fc_bound_bound(&w.scaled(2.0), &w, &laser).is_err());
    let far = wave_from(RadialGrid::new(1e4, 2e4, 101, Spacing::Uniform).unwrap(), |r| {
        (-(r - 1.5e4).powi(2) / 1e6).exp()
    });
    assert!(matches!(fc_bound_bound(&w, &far, &laser), Err(Error::Grid(_))));
}

#[test]
fn filon_exact_for_linear_envelope() {
    let x: Vec<f64> = (0..=50).map(|i| 1.0 + 0.37 * f64::from(i)).collect();
    let g: Vec<f64> = x.iter().map(|&t| 2.0 - 0.1 * t).collect();
    for (omega, phase) in [(3.1, 0.4), (0.01, 1.2), (-2.0, 0.0), (0.2, 0.3)] {
        // ∫ (a + b x) sin(ωx − φ) dx
        let anti = |t: f64| {
            let th = omega * t - phase;
            -(2.0 - 0.1 * t) * th.cos() / omega - 0.1 * th.sin() / (omega * omega)
        };
        let exact = anti(x[50]) - anti(x[0]);
        let got = filon_sin(&x, &g, omega, phase);
        assert!((got - exact).abs() < 1e-9 * exact.abs().max(1.0), "ω={omega}: {got} vs {exact}");
    }
    // ω → 0: ∫ g (ωx cos φ − sin φ) dx + O(ω²)
    let (omega, phase): (f64, f64) = (1e-9, 0.3);
    let m0: f64 = x.windows(2).map(|w| 0.5 * (w[1] - w[0]) * (4.0 - 0.1 * (w[0] + w[1]))).sum();
    let m1 = 2.0 * (x[50].powi(2) - x[0].powi(2)) / 2.0 - 0.1 * (x[50].powi(3) - x[0].powi(3)) / 3.0;
    let exact = omega * phase.cos() * m1 - phase.sin() * m0;
    let got = filon_sin(&x, &g, omega, phase);
    assert!((got - exact).abs() < 1e-12, "{got} vs {exact}");
}

#[test]
fn filon_branches_agree() {
    for d in [0.0499, 0.0501, 1e-3, 0.049999] {
        let (a, b, c, e) = sinusoid_moments(d);
        let (s, co) = d.sin_cos();
        let d2 = d * d;
        let direct = (s / d, (1.0 - co) / d, (d * s + co - 1.0) / d2, (s - d * co) / d2);
        let tol = if d < 0.01 { 1e-9 } else { 1e-12 };
        assert!((a - direct.0).abs() < tol);
        assert!((b - direct.1).abs() < tol);
        assert!((c - direct.2).abs() < tol);
        assert!((e - direct.3).abs() < tol);
    }
}

#[test]
fn narrow_bump_samples_the_free_wave() {
    let (r0, sigma) = (500.0, 0.5);
    let grid = RadialGrid::new(480.0, 520.0, 8001, Spacing::Uniform).unwrap();
    let bump = wave_from(grid, |r| (-(r - r0).powi(2) / (2.0 * sigma * sigma)).exp());
    let area: f64 = crate::grid::trapezoid(bump.grid().points(), bump.values()).unwrap();
    let (eps, a_sc) = (2e-12, 37.0);
    let k = wavenumber(MU, eps);
    for factor in PhotonFactor::ALL {
        let laser = LaserSpec::default().with_factor(factor);
        let eta = fc_free_bound(&bump, MU, eps, a_sc, &laser).unwrap();
        let expect = energy_norm_amplitude(MU, eps) * (k * (r0 - a_sc)).sin() * laser.photon_factor(r0) * area;
        assert!((eta / expect - 1.0).abs() < 1e-4, "{factor}: {eta} vs {expect}");
    }
}

#[test]
fn wigner_threshold_slope() {
    let w = compact_wave(200.0);
    let laser = LaserSpec::default();
    let eta2 = |e: f64| fc_free_bound(&w, MU, e, 70.0, &laser).unwrap().powi(2);
    let eps = 1e-16;
    let slope = (eta2(eps) / eta2(eps / 100.0)).ln() / 100f64.ln();
    assert!((slope - 0.5).abs() < 0.05, "{slope}");
    assert!((slope - 0.5).abs() < 1e-3, "{slope}");
}

#[test]
fn scattering_length_moves_antinodes() {
    let w = compact_wave(2000.0);
    let laser = LaserSpec::default();
    let eps = 2e-12;
    let a = fc_free_bound(&w, MU, eps, 0.0, &laser).unwrap();
    let b = fc_free_bound(&w, MU, eps, 2000.0, &laser).unwrap();
    assert!((a.abs() - b.abs()).abs() > 0.05 * a.abs().max(b.abs()), "{a} {b}");
}

#[test]
fn free_bound_needs_a_decayed_tail() {
    let grid = RadialGrid::new(1.0, 100.0, 1001, Spacing::Uniform).unwrap();
    let w = wave_from(grid, |r| r.sin() + 1.5);
    assert!(matches!(
        fc_free_bound(&w, MU, 1e-12, 0.0, &LaserSpec::default()),
        Err(Error::Grid(_))
    ));
    assert!(fc_free_bound(&compact_wave(10.0), MU, 0.0, 0.0, &LaserSpec::default()).is_err());
}

#[test]
fn rabi_frequency_unit_oracle() {
    let laser = LaserSpec::default();
    assert_eq!(rabi_frequency(0.0, &laser, 1.0), 0.0);
    let e1 = units::v_per_cm_to_au(1.0);
    let eta = 0.221f64.sqrt();
    let om = rabi_frequency(eta, &laser, e1);
    assert!((rabi_frequency(eta, &laser, 2.0 * e1) / om - 2.0).abs() < 1e-15);
    // SI: Ω = D0 e a0 E η / ħ with E = 100 V/m
    let (e, a0, hbar) = (1.602176634e-19, 0.529177210903e-10, 1.054571817e-34);
    let si = 3.5007 * e * a0 * 100.0 * eta / hbar;
    assert!((units::au_to_rad_per_s(om) / si - 1.0).abs() < 1e-8, "{} vs {si}", units::au_to_rad_per_s(om));
}

#[test]
fn stimulated_rate_scaling() {
    let laser = LaserSpec::default();
    assert_eq!(stimulated_rate(0.0, &laser, 1e-9), 0.0);
    let g1 = stimulated_rate(3.0, &laser, 1e-9);
    let g2 = stimulated_rate(3.0, &laser, 2e-9);
    assert!((g2 / g1 - 4.0).abs() < 1e-14);
    let c = 1e-9 * laser.d0 * 3.0;
    assert!((g1 - 2.0 * PI * c * c).abs() < 1e-14 * g1);
}

#[test]
fn bound_width_prefactor_and_linearity() {
    let laser = LaserSpec::default();
    let spec = trap_100khz(0.042);
    let t = trap_levels(&spec, 0).unwrap().pop().unwrap();
    let level = synthetic_level(33, units::khz_to_hartree(1460.0), t.wave.clone());
    let r = spont_width_bound(&level, &t, &spec, &laser, 0.0).unwrap();
    assert!((r.fc - 1.0).abs() < 1e-12);
    let per_unit_khz = units::angular_au_to_khz(r.rate.unwrap());
    assert!((per_unit_khz / 19.3e3 - 1.0).abs() < 0.01, "{per_unit_khz}");
    let bb = 1e-9;
    let r2 = spont_width_bound(&level, &t, &spec, &laser, bb).unwrap();
    assert!((r2.rate.unwrap() - r.rate.unwrap() - bb).abs() < 1e-22);
    let half = LaserSpec { d0: laser.d0 / 2f64.sqrt(), ..laser };
    let r3 = spont_width_bound(&level, &t, &spec, &half, 0.0).unwrap();
    assert!((r.rate.unwrap() / r3.rate.unwrap() - 2.0).abs() < 1e-12);
    let blue = LaserSpec { omega_a: 1e-12, ..laser };
    assert!(spont_width_bound(&level, &t, &spec, &blue, 0.0).is_err());
}

#[test]
fn free_width_vanishes_as_temperature_drops() {
    let w = compact_wave(500.0);
    let level = synthetic_level(35, 1e-10, w);
    let laser = LaserSpec::default();
    let width = |kt: f64| {
        let ens = maxwell_panels(kt, &PanelRule::default()).unwrap();
        spont_width_free(&level, &ens, MU, 70.0, &laser, 0.0).unwrap().rate.unwrap()
    };
    let (hot, cold) = (width(1e-13), width(1e-17));
    assert!(cold < 1e-4 * hot, "{cold} vs {hot}");
    assert!(cold > 0.0);
    let ens = maxwell_panels(1e-13, &PanelRule::default()).unwrap();
    let r = spont_width_free(&level, &ens, MU, 70.0, &laser, 2.0).unwrap();
    assert!((r.rate.unwrap() - hot - 2.0).abs() < 1e-12);
    assert!(matches!(r.partner, Partner::Thermal { .. }));
}

#[test]
fn photon_factor_matters_only_at_large_separation() {
    let compact = compact_wave(40.0); // confined below ~20 nm
    let spread = compact_wave(4000.0); // µm scale
    let eps = 1e-12;
    let rel = |w: &RadialWave| {
        let u = fc_free_bound(w, MU, eps, 0.0, &LaserSpec::default()).unwrap();
        let c = fc_free_bound(w, MU, eps, 0.0, &LaserSpec::default().with_factor(PhotonFactor::CosHalf)).unwrap();
        (u.abs() - c.abs()).abs() / u.abs()
    };
    assert!(rel(&compact) < 0.01, "{}", rel(&compact));
    assert!(rel(&spread) > 0.05, "{}", rel(&spread));
}

#[test]
fn scan_rows() {
    let spec = trap_100khz(0.0);
    let t = trap_levels(&spec, 1).unwrap();
    let level = synthetic_level(35, 1e-10, t[1].wave.clone());
    let a_t = spec.trap_length();
    let mut a = linspace(-0.2 * a_t, 0.2 * a_t, 9);
    a.push(0.8 * a_t);
    let rows = scan_scattering_length(&level, 0, &spec, &a, &LaserSpec::default()).unwrap();
    assert_eq!(rows.len(), 10);
    let zero = &rows[4];
    assert_eq!(zero.a_sc, 0.0);
    assert_eq!(zero.energy, 1.5 * spec.omega());
    // orthogonal up to the default grid's quadrature error
    assert!(zero.fc.abs() < 1e-4, "{}", zero.fc);
    for w in rows[..9].windows(2) {
        assert!(w[1].energy > w[0].energy);
        assert_eq!(w[0].status, ScanStatus::Ok);
    }
    assert_eq!(rows[9].status, ScanStatus::Regime);
    assert!(rows[9].energy.is_nan());
}

#[test]
fn linspace_edges() {
    assert!(linspace(0.0, 1.0, 0).is_empty());
    assert_eq!(linspace(2.0, 5.0, 1), vec![2.0]);
    assert_eq!(linspace(-1.0, 1.0, 3), vec![-1.0, 0.0, 1.0]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cauchy_schwarz(xi in -0.3f64..0.3, n1 in 0u32..3, n2 in 0u32..3, f in 0usize..3) {
        let spec = trap_100khz(xi);
        let t = trap_levels(&spec, 2).unwrap();
        let laser = LaserSpec::default().with_factor(PhotonFactor::ALL[f]);
        let eta = fc_bound_bound(&t[n1 as usize].wave, &t[n2 as usize].wave, &laser).unwrap();
        prop_assert!(eta.abs() <= 1.0 + 1e-12);
    }
}
