//! Energy-normalized s-wave scattering states and Maxwellian collision-energy ensembles.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{NormConvention, RadialGrid, RadialWave};
use crate::quadrature::{gauss_laguerre, gauss_legendre};
use crate::units;

/// Minimum samples per scattering wavelength accepted by [`free_state`].
pub const MIN_POINTS_PER_WAVELENGTH: f64 = 40.0;

/// k = √(2μ ε).
pub fn wavenumber(mu: f64, eps: f64) -> f64 {
    (2.0 * mu * eps).sqrt()
}

/// √(k/(π ε)), the amplitude of an energy-normalized s wave.
pub fn energy_norm_amplitude(mu: f64, eps: f64) -> f64 {
    (wavenumber(mu, eps) / (PI * eps)).sqrt()
}

#[derive(Clone, Debug)]
pub struct FreeState {
    pub epsilon: f64,
    pub k: f64,
    pub a_sc: f64,
    pub wave: RadialWave,
}

impl FreeState {
    pub fn amplitude(&self) -> f64 {
        (self.k / (PI * self.epsilon)).sqrt()
    }

    /// Closed form √(k/πε) sin(k(R − a_sc)).
    pub fn value(&self, r: f64) -> f64 {
        self.amplitude() * (self.k * (r - self.a_sc)).sin()
    }
}

/// Asymptotic scattering state at collision energy `eps` sampled on `grid`.
pub fn free_state(mu: f64, eps: f64, a_sc: f64, grid: Arc<RadialGrid>) -> Result<FreeState> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::invalid(format!("collision energy must be positive, got {eps}")));
    }
    if !(mu > 0.0) {
        return Err(Error::invalid(format!("reduced mass must be positive, got {mu}")));
    }
    let k = wavenumber(mu, eps);
    let max_step = grid
        .points()
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(0.0f64, f64::max);
    let ppw = 2.0 * PI / k / max_step;
    if ppw < MIN_POINTS_PER_WAVELENGTH {
        return Err(Error::Grid(format!(
            "{ppw:.1} points per scattering wavelength, need {MIN_POINTS_PER_WAVELENGTH}"
        )));
    }
    let amp = (k / (PI * eps)).sqrt();
    let u = grid.points().iter().map(|&r| amp * (k * (r - a_sc)).sin()).collect();
    let wave = RadialWave::new(grid, u, NormConvention::PerSqrtEnergy)?;
    Ok(FreeState {
        epsilon: eps,
        k,
        a_sc,
        wave,
    })
}

/// Quadrature over P(ε) ∝ √ε e^{−ε/k_BT}.
#[derive(Clone, Debug, PartialEq)]
pub struct ThermalEnsemble {
    /// k_B T in Hartree.
    pub kt: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl ThermalEnsemble {
    pub fn temperature_k(&self) -> f64 {
        units::hartree_to_kelvin(self.kt)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn average(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&e, &w)| w * f(e)).sum()
    }

    /// ⟨ε^p⟩.
    pub fn moment(&self, p: i32) -> f64 {
        self.average(|e| e.powi(p))
    }
}

fn check_kt(kt: f64) -> Result<()> {
    if !(kt > 0.0) || !kt.is_finite() {
        return Err(Error::invalid(format!("temperature must be positive, got k_BT = {kt}")));
    }
    Ok(())
}

/// n-point generalized Gauss–Laguerre rule (α = 1/2) at temperature `t_kelvin`.
pub fn maxwell_nodes(t_kelvin: f64, n: usize) -> Result<ThermalEnsemble> {
    maxwell_nodes_kt(units::kelvin_to_hartree(t_kelvin), n)
}

/// As [`maxwell_nodes`] with k_BT given in Hartree.
pub fn maxwell_nodes_kt(kt: f64, n: usize) -> Result<ThermalEnsemble> {
    check_kt(kt)?;
    if n < 8 {
        return Err(Error::invalid(format!("Maxwell quadrature needs at least 8 nodes, got {n}")));
    }
    let rule = gauss_laguerre(n, 0.5)?;
    let total: f64 = rule.weights.iter().sum();
    Ok(ThermalEnsemble {
        kt,
        nodes: rule.nodes.iter().map(|x| x * kt).collect(),
        weights: rule.weights.iter().map(|w| w / total).collect(),
    })
}

/// Composite log-panel layout for thermal averages of sharply peaked integrands.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PanelRule {
    /// Range of ε/k_BT.
    pub lo: f64,
    pub hi: f64,
    pub panels_per_decade: usize,
    pub order: usize,
}

impl Default for PanelRule {
    fn default() -> Self {
        Self {
            lo: 1e-12,
            hi: 60.0,
            panels_per_decade: 2,
            order: 16,
        }
    }
}

/// Gauss–Legendre on logarithmic panels of ε/k_BT, weights carrying the Maxwell density.
pub fn maxwell_panels(kt: f64, rule: &PanelRule) -> Result<ThermalEnsemble> {
    check_kt(kt)?;
    if !(rule.lo > 0.0 && rule.hi > rule.lo) || rule.panels_per_decade == 0 || rule.order == 0 {
        return Err(Error::invalid("panel rule needs 0 < lo < hi and nonzero panel counts"));
    }
    let (a, b) = (rule.lo.ln(), rule.hi.ln());
    let decades = (b - a) / std::f64::consts::LN_10;
    let panels = (decades * rule.panels_per_decade as f64).ceil() as usize;
    let width = (b - a) / panels as f64;
    let norm = 2.0 / PI.sqrt();
    let mut nodes = Vec::with_capacity(panels * rule.order);
    let mut weights = Vec::with_capacity(panels * rule.order);
    for p in 0..panels {
        let lo = a + width * p as f64;
        let gl = gauss_legendre(rule.order, lo, lo + width);
        for (&s, &w) in gl.nodes.iter().zip(&gl.weights) {
            // x = e^s, P(x) dx = (2/√π) x^{3/2} e^{−x} ds
            let x = s.exp();
            nodes.push(x * kt);
            weights.push(w * norm * x.powf(1.5) * (-x).exp());
        }
    }
    Ok(ThermalEnsemble { kt, nodes, weights })
}
