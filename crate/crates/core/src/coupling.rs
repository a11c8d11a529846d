//! Franck–Condon integrals, laser coupling and spontaneous linewidths.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::RadialWave;
use crate::longrange::VibLevel;
use crate::scattering::{energy_norm_amplitude, wavenumber, ThermalEnsemble};
use crate::trap::{trap_levels, TrapLevel, TrapSpec};
use crate::units;

/// Bound tail threshold for free–bound integrals, relative to the peak.
pub const TAIL_CUTOFF: f64 = 1e-8;

/// Innermost radius of free–bound integrals (0.1 nm).
pub const INNER_CUTOFF_NM: f64 = 0.1;

/// Radial form of the laser phase factor inside the overlap integrals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum PhotonFactor {
    #[default]
    Unity,
    /// cos(k_L R / 2)
    CosHalf,
    /// cos(k_L R)
    CosFull,
}

impl PhotonFactor {
    pub const ALL: [PhotonFactor; 3] = [PhotonFactor::Unity, PhotonFactor::CosHalf, PhotonFactor::CosFull];

    pub fn as_str(self) -> &'static str {
        match self {
            PhotonFactor::Unity => "unity",
            PhotonFactor::CosHalf => "cos_half",
            PhotonFactor::CosFull => "cos_full",
        }
    }

    /// Spatial frequency q of cos(q R), in units of k_L; None for unity.
    fn frequency(self, k_l: f64) -> Option<f64> {
        match self {
            PhotonFactor::Unity => None,
            PhotonFactor::CosHalf => Some(0.5 * k_l),
            PhotonFactor::CosFull => Some(k_l),
        }
    }

    pub fn eval(self, k_l: f64, r: f64) -> f64 {
        self.frequency(k_l).map_or(1.0, |q| (q * r).cos())
    }
}

impl fmt::Display for PhotonFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PhotonFactor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unity" => Ok(PhotonFactor::Unity),
            "cos_half" => Ok(PhotonFactor::CosHalf),
            "cos_full" => Ok(PhotonFactor::CosFull),
            other => Err(Error::invalid(format!(
                "unknown photon factor '{other}' (expected unity, cos_half or cos_full)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LaserSpec {
    pub wavelength_nm: f64,
    pub factor: PhotonFactor,
    /// Atomic transition angular frequency, atomic units.
    pub omega_a: f64,
    /// Molecular dipole constant, atomic units.
    pub d0: f64,
    /// ⟨ε̂·μ̂⟩.
    pub orientation: f64,
}

/// Na D2 line frequency in THz.
pub const NA_D2_THZ: f64 = 508.333;
/// Magnitude of the constant molecular dipole, atomic units.
pub const NA_D0: f64 = 3.5007;

impl Default for LaserSpec {
    fn default() -> Self {
        Self {
            wavelength_nm: 589.0,
            factor: PhotonFactor::Unity,
            omega_a: units::rad_per_s_to_au(2.0 * PI * NA_D2_THZ * 1e12),
            d0: NA_D0,
            orientation: 1.0,
        }
    }
}

impl LaserSpec {
    pub fn with_factor(self, factor: PhotonFactor) -> Self {
        Self { factor, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.wavelength_nm > 0.0) || !self.wavelength_nm.is_finite() {
            return Err(Error::invalid(format!("laser wavelength must be positive, got {}", self.wavelength_nm)));
        }
        if !(self.omega_a > 0.0) || !self.omega_a.is_finite() {
            return Err(Error::invalid("atomic transition frequency must be positive"));
        }
        if !self.d0.is_finite() || !self.orientation.is_finite() {
            return Err(Error::invalid("dipole constant and orientation must be finite"));
        }
        Ok(())
    }

    /// k_L = 2π/λ in inverse bohr.
    pub fn k_l(&self) -> f64 {
        2.0 * PI / units::nm_to_bohr(self.wavelength_nm)
    }

    pub fn photon_factor(&self, r: f64) -> f64 {
        self.factor.eval(self.k_l(), r)
    }

    /// 4|D0|²/(3c³), multiplying ω³|η|² in the spontaneous widths.
    pub fn width_prefactor(&self) -> f64 {
        4.0 * self.d0 * self.d0 / (3.0 * units::SPEED_OF_LIGHT_AU.powi(3))
    }
}

/// What the molecular level is coupled to.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Partner {
    Trap { n_t: u32, omega: f64, a_sc: f64 },
    Free { epsilon: f64, a_sc: f64 },
    Thermal { kt: f64, a_sc: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CouplingResult {
    pub v_label: i32,
    pub partner: Partner,
    pub factor: PhotonFactor,
    /// η; per √energy for a free partner, and √⟨|η|²⟩ for a thermal one.
    pub fc: f64,
    pub fc_sq: f64,
    /// Rate or width in atomic units of angular frequency.
    pub rate: Option<f64>,
}

fn check_unit_norm(w: &RadialWave, what: &str) -> Result<()> {
    let n = w.norm_sq();
    if (n - 1.0).abs() > 1e-6 {
        return Err(Error::invalid(format!("{what} is not unit-normalized (norm² = {n})")));
    }
    Ok(())
}

/// η = ∫ u_v u_t f(R) dR for two unit-normalized bound waves.
pub fn fc_bound_bound(v_wave: &RadialWave, t_wave: &RadialWave, laser: &LaserSpec) -> Result<f64> {
    check_unit_norm(v_wave, "molecular wave")?;
    check_unit_norm(t_wave, "trap wave")?;
    let (a, b) = (v_wave.grid(), t_wave.grid());
    if a.last() <= b.first() || b.last() <= a.first() {
        return Err(Error::Grid("the two waves have disjoint grids".into()));
    }
    let k_l = laser.k_l();
    v_wave.overlap_with(t_wave, |r| laser.factor.eval(k_l, r))
}

/// ∫ g(x) sin(ω x − φ) dx for g linear between samples, integrated exactly.
pub fn filon_sin(x: &[f64], g: &[f64], omega: f64, phase: f64) -> f64 {
    let mut sum = 0.0;
    for i in 0..x.len().saturating_sub(1) {
        let dx = x[i + 1] - x[i];
        let d = omega * dx;
        let (s0, c0) = (omega * x[i] - phase).sin_cos();
        let (m_c0, m_s0, m_c1, m_s1) = sinusoid_moments(d);
        let (g0, dg) = (g[i], g[i + 1] - g[i]);
        sum += dx * (g0 * (s0 * m_c0 + c0 * m_s0) + dg * (s0 * m_c1 + c0 * m_s1));
    }
    sum
}

// (1/d)∫₀^d cos t, (1/d)∫₀^d sin t, (1/d²)∫₀^d t cos t, (1/d²)∫₀^d t sin t
fn sinusoid_moments(d: f64) -> (f64, f64, f64, f64) {
    if d.abs() < 0.05 {
        let d2 = d * d;
        let c0 = 1.0 - d2 / 6.0 * (1.0 - d2 / 20.0 * (1.0 - d2 / 42.0));
        let s0 = d / 2.0 * (1.0 - d2 / 12.0 * (1.0 - d2 / 30.0 * (1.0 - d2 / 56.0)));
        let c1 = 0.5 - d2 / 8.0 * (1.0 - d2 / 18.0 * (1.0 - d2 / 40.0));
        let s1 = d / 3.0 * (1.0 - d2 / 10.0 * (1.0 - d2 / 28.0 * (1.0 - d2 / 54.0)));
        return (c0, s0, c1, s1);
    }
    let (s, c) = d.sin_cos();
    let d2 = d * d;
    (s / d, (1.0 - c) / d, (d * s + c - 1.0) / d2, (s - d * c) / d2)
}

/// Grid index range carrying the wave down to `TAIL_CUTOFF` of its peak.
fn support(wave: &RadialWave) -> Result<(usize, usize)> {
    let u = wave.values();
    let r = wave.grid().points();
    let floor = TAIL_CUTOFF * wave.max_abs();
    let last = u
        .iter()
        .rposition(|v| v.abs() >= floor)
        .ok_or_else(|| Error::invalid("bound wave is identically zero"))?;
    if last + 1 >= u.len() && u[u.len() - 1] != 0.0 {
        return Err(Error::Grid(format!(
            "bound wave is still above {TAIL_CUTOFF:e} of its peak at the grid end {:e} bohr",
            r[r.len() - 1]
        )));
    }
    let inner = units::nm_to_bohr(INNER_CUTOFF_NM);
    let first = r.partition_point(|&x| x < inner).min(last);
    Ok((first, (last + 1).min(u.len() - 1)))
}

/// Free–bound FC integral ∫ u_v(R) √(k/πε) sin(k(R − a_sc)) f(R) dR, per √energy.
pub fn fc_free_bound(v_wave: &RadialWave, mu: f64, eps: f64, a_sc: f64, laser: &LaserSpec) -> Result<f64> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::invalid(format!("collision energy must be positive, got {eps}")));
    }
    let (i0, i1) = support(v_wave)?;
    let x = &v_wave.grid().points()[i0..=i1];
    let g = &v_wave.values()[i0..=i1];
    let k = wavenumber(mu, eps);
    let phase = k * a_sc;
    let integral = match laser.factor.frequency(laser.k_l()) {
        None => filon_sin(x, g, k, phase),
        // sin(kR − ka) cos(qR) = ½[sin((k+q)R − ka) + sin((k−q)R − ka)]
        Some(q) => 0.5 * (filon_sin(x, g, k + q, phase) + filon_sin(x, g, k - q, phase)),
    };
    Ok(energy_norm_amplitude(mu, eps) * integral)
}

/// Ω = |⟨ε̂·μ̂⟩ E D0 η| with E the field amplitude in atomic units.
pub fn rabi_frequency(fc: f64, laser: &LaserSpec, field: f64) -> f64 {
    (laser.orientation * field * laser.d0 * fc).abs()
}

/// Γ = 2π (⟨ε̂·μ̂⟩ E D0)² |η_{v−ε}|².
pub fn stimulated_rate(fc_free: f64, laser: &LaserSpec, field: f64) -> f64 {
    let c = laser.orientation * field * laser.d0;
    2.0 * PI * c * c * fc_free * fc_free
}

fn emission_frequency(laser: &LaserSpec, binding: f64, partner_energy: f64) -> Result<f64> {
    let w = laser.omega_a - binding - partner_energy;
    if !(w > 0.0) {
        return Err(Error::invalid(format!("transition frequency {w:e} is not positive")));
    }
    Ok(w)
}

/// (4/3c³) ω³ |D0|² |η|² + γ_bb for a trap-bound partner.
pub fn spont_width_bound(level: &VibLevel, trap: &TrapLevel, spec: &TrapSpec, laser: &LaserSpec, gamma_bb: f64) -> Result<CouplingResult> {
    laser.validate()?;
    let fc = fc_bound_bound(&level.wave, &trap.wave, laser)?;
    let w = emission_frequency(laser, level.binding_energy, trap.energy)?;
    let width = laser.width_prefactor() * w.powi(3) * fc * fc + gamma_bb;
    Ok(CouplingResult {
        v_label: level.v_label,
        partner: Partner::Trap {
            n_t: trap.n,
            omega: spec.omega(),
            a_sc: spec.a_sc(),
        },
        factor: laser.factor,
        fc,
        fc_sq: fc * fc,
        rate: Some(width),
    })
}

/// Thermal free–bound width (4/3c³)|D0|² k_BT ⟨ω³|η_{v−ε}|²⟩ + γ_bb.
pub fn spont_width_free(
    level: &VibLevel,
    ensemble: &ThermalEnsemble,
    mu: f64,
    a_sc: f64,
    laser: &LaserSpec,
    gamma_bb: f64,
) -> Result<CouplingResult> {
    laser.validate()?;
    let terms: Vec<(f64, f64)> = ensemble
        .nodes
        .par_iter()
        .map(|&e| {
            let eta = fc_free_bound(&level.wave, mu, e, a_sc, laser)?;
            let w = emission_frequency(laser, level.binding_energy, e)?;
            Ok((eta * eta, w.powi(3)))
        })
        .collect::<Result<_>>()?;
    let mut mean_sq = 0.0;
    let mut mean_w3_sq = 0.0;
    for ((eta2, w3), wt) in terms.iter().zip(&ensemble.weights) {
        mean_sq += wt * eta2;
        mean_w3_sq += wt * w3 * eta2;
    }
    let width = laser.width_prefactor() * ensemble.kt * mean_w3_sq + gamma_bb;
    Ok(CouplingResult {
        v_label: level.v_label,
        partner: Partner::Thermal { kt: ensemble.kt, a_sc },
        factor: laser.factor,
        fc: mean_sq.sqrt(),
        fc_sq: mean_sq,
        rate: Some(width),
    })
}

/// |η|² for every (level, trap state) pair; rows follow `levels`.
pub fn fc_matrix(levels: &[VibLevel], trap: &[TrapLevel], laser: &LaserSpec) -> Result<Vec<Vec<f64>>> {
    levels
        .par_iter()
        .map(|l| {
            trap.iter()
                .map(|t| fc_bound_bound(&l.wave, &t.wave, laser).map(|x| x * x))
                .collect()
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanStatus {
    Ok,
    /// |ξ| outside the trap model's range; values are NaN.
    Regime,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanRow {
    pub a_sc: f64,
    pub xi: f64,
    /// Trap level energy (Hartree).
    pub energy: f64,
    pub fc: f64,
    pub status: ScanStatus,
}

/// Re-solve trap level `n_t` at each scattering length and couple it to `level`.
pub fn scan_scattering_length(
    level: &VibLevel,
    n_t: u32,
    template: &TrapSpec,
    a_values: &[f64],
    laser: &LaserSpec,
) -> Result<Vec<ScanRow>> {
    laser.validate()?;
    a_values
        .par_iter()
        .map(|&a| {
            let spec = TrapSpec::new(template.omega(), template.mu(), a)?;
            let xi = spec.xi();
            if spec.check_regime().is_err() {
                return Ok(ScanRow {
                    a_sc: a,
                    xi,
                    energy: f64::NAN,
                    fc: f64::NAN,
                    status: ScanStatus::Regime,
                });
            }
            let t = trap_levels(&spec, n_t)?.pop().expect("n_t + 1 levels");
            let fc = fc_bound_bound(&level.wave, &t.wave, laser)?;
            Ok(ScanRow {
                a_sc: a,
                xi,
                energy: t.energy,
                fc,
                status: ScanStatus::Ok,
            })
        })
        .collect()
}

/// Evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

#[cfg(test)]
mod tests;
