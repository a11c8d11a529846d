//! Relative s-wave motion of two atoms in an isotropic harmonic trap with a
//! regularized contact interaction.
//!
//! Energies are the roots of `Γ(3/4 - x/2) / Γ(1/4 - x/2) = 1/(√2 ξ)` with
//! `x = ε/ħω` and `ξ = a_sc/a_t`. The radial functions are
//! `u(R) ∝ R exp(-R̄²/2) U(-ν, 3/2, R̄²)` with `R̄ = R/a_t` and `ν = x/2 - 3/4`.

use std::f64::consts::{PI, SQRT_2};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{trapezoid, NormConvention, RadialGrid, RadialWave, Spacing};
use crate::quadrature::brent;
use crate::specfun::{gen_binom_half, ln_gamma_signed, rgamma, TricomiU};
use crate::units;

/// Largest |ξ| accepted by the trap model.
pub const XI_LIMIT: f64 = 0.5;

/// Default points of the trap-state log grid.
pub const TRAP_GRID_POINTS: usize = 4001;
/// Default trap grid span in units of the trap length.
pub const TRAP_GRID_SPAN: (f64, f64) = (0.02, 12.0);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrapSpec {
    omega: f64,
    mu: f64,
    a_sc: f64,
}

impl TrapSpec {
    /// Angular trap frequency, reduced mass and scattering length, all in atomic units.
    pub fn new(omega: f64, mu: f64, a_sc: f64) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::invalid(format!("trap frequency must be positive, got {omega}")));
        }
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(Error::invalid(format!("reduced mass must be positive, got {mu}")));
        }
        if !a_sc.is_finite() {
            return Err(Error::invalid("scattering length must be finite"));
        }
        Ok(Self { omega, mu, a_sc })
    }

    /// Same trap with the scattering length given in units of the trap length.
    pub fn from_xi(omega: f64, mu: f64, xi: f64) -> Result<Self> {
        let probe = Self::new(omega, mu, 0.0)?;
        Self::new(omega, mu, xi * probe.trap_length())
    }

    /// Homonuclear pair of atoms of mass `mass_u`, trap frequency in kHz, a_sc in nm.
    pub fn for_pair(mass_u: f64, omega_khz: f64, a_sc_nm: f64) -> Result<Self> {
        Self::new(
            units::khz_to_angular_au(omega_khz),
            0.5 * units::amu_to_me(mass_u),
            units::nm_to_bohr(a_sc_nm),
        )
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn a_sc(&self) -> f64 {
        self.a_sc
    }

    /// a_t = √(ħ/μω).
    pub fn trap_length(&self) -> f64 {
        (self.mu * self.omega).sqrt().recip()
    }

    pub fn xi(&self) -> f64 {
        self.a_sc / self.trap_length()
    }

    pub fn with_scattering_length(&self, a_sc: f64) -> Result<Self> {
        Self::new(self.omega, self.mu, a_sc)
    }

    pub fn check_regime(&self) -> Result<()> {
        let xi = self.xi();
        if xi.abs() >= XI_LIMIT {
            return Err(Error::Regime { xi });
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct TrapLevel {
    pub n: u32,
    /// ε/ħω.
    pub x: f64,
    /// ν = x/2 - 3/4.
    pub nu: f64,
    /// ε in Hartree.
    pub energy: f64,
    pub turning_point: f64,
    pub wave: RadialWave,
}

// Γ(1/4 - x/2) / Γ(3/4 - x/2), finite between the poles of the numerator.
fn inverse_lhs(x: f64) -> f64 {
    let b = 0.75 - 0.5 * x;
    let inv_den = rgamma(b);
    if inv_den == 0.0 {
        return 0.0;
    }
    match ln_gamma_signed(0.25 - 0.5 * x) {
        Ok(num) => {
            let den = ln_gamma_signed(b).expect("denominator pole handled above");
            num.div(den).value()
        }
        Err(_) => f64::INFINITY,
    }
}

/// |√2 ξ Γ(3/4 - x/2)/Γ(1/4 - x/2) - 1|, the scaled residual of the root equation.
pub fn root_residual(x: f64, xi: f64) -> f64 {
    if xi == 0.0 {
        return rgamma(0.75 - 0.5 * x).abs();
    }
    let inv = inverse_lhs(x);
    (inv - SQRT_2 * xi).abs() / (SQRT_2 * xi).abs()
}

/// Interval holding the n-th root for the sign of ξ.
pub fn root_bracket(n: u32, xi: f64) -> (f64, f64) {
    let base = 2.0 * f64::from(n);
    if xi >= 0.0 {
        (base + 1.5, base + 2.5)
    } else {
        (base + 0.5, base + 1.5)
    }
}

/// Dimensionless energies x₀ < x₁ < … < x_{n_max}.
pub fn trap_roots(spec: &TrapSpec, n_max: u32) -> Result<Vec<f64>> {
    spec.check_regime()?;
    let xi = spec.xi();
    (0..=n_max).map(|n| trap_root(n, xi)).collect()
}

fn trap_root(n: u32, xi: f64) -> Result<f64> {
    if xi == 0.0 {
        return Ok(2.0 * f64::from(n) + 1.5);
    }
    let (lo, hi) = root_bracket(n, xi);
    let target = SQRT_2 * xi;
    let f = |x: f64| inverse_lhs(x) - target;
    // stay off the pole at the open end of the bracket
    let (a, b) = if xi > 0.0 { (lo, hi - 1e-9) } else { (lo + 1e-9, hi) };
    brent(f, a, b, 1e-13).map_err(|e| match e {
        Error::Bracket { lo, hi, context } => Error::Bracket {
            lo,
            hi,
            context: format!("trap level {n}, xi = {xi}: {context}"),
        },
        other => other,
    })
}

/// ε ≈ [3/2 + 2n + √(2/π) ξ Γ(n+3/2)/(Γ(3/2) n!)] ħω.
pub fn trap_energy_perturbative(n: u32, spec: &TrapSpec) -> f64 {
    let x = 1.5 + 2.0 * f64::from(n) + (2.0 / PI).sqrt() * spec.xi() * gen_binom_half(n);
    x * spec.omega
}

/// Classical turning point of the harmonic potential, ε = ½μω²R².
pub fn trap_turning_point(energy: f64, spec: &TrapSpec) -> f64 {
    (2.0 * energy / spec.mu).sqrt() / spec.omega
}

/// Log grid over [0.02, 12] trap lengths with 4001 points.
pub fn default_trap_grid(spec: &TrapSpec) -> Result<RadialGrid> {
    let at = spec.trap_length();
    RadialGrid::new(
        TRAP_GRID_SPAN.0 * at,
        TRAP_GRID_SPAN.1 * at,
        TRAP_GRID_POINTS,
        Spacing::Log,
    )
}

fn raw_amplitude(u: &TricomiU, r: f64, at: f64) -> Result<f64> {
    let z = (r / at).powi(2);
    Ok(r * (-0.5 * z).exp() * u.eval(z)?)
}

/// Unit-normalized radial function for the dimensionless energy `x`.
///
/// The sign is fixed so that the wave is positive at the classical turning point.
pub fn trap_wavefunction(x: f64, spec: &TrapSpec, grid: Arc<RadialGrid>) -> Result<RadialWave> {
    let at = spec.trap_length();
    if grid.first() > TRAP_GRID_SPAN.0 * at * (1.0 + 1e-9) {
        return Err(Error::Grid(format!(
            "trap grid starts at {:.4} a_t, must start at or below {} a_t",
            grid.first() / at,
            TRAP_GRID_SPAN.0
        )));
    }
    let nu = 0.5 * x - 0.75;
    let u_fn = TricomiU::new(-nu, 1.5)?;
    let raw = grid
        .points()
        .iter()
        .map(|&r| raw_amplitude(&u_fn, r, at))
        .collect::<Result<Vec<f64>>>()?;

    let inside: f64 = trapezoid(grid.points(), &raw.iter().map(|v| v * v).collect::<Vec<_>>())?;
    if !(inside > 0.0) {
        return Err(Error::Grid("trap wave vanishes on the grid".into()));
    }
    // tail beyond the grid, out to ten extra trap lengths
    let r_end = grid.last();
    let tail_r: Vec<f64> = (0..=2000).map(|i| r_end + 10.0 * at * f64::from(i) / 2000.0).collect();
    let tail_u = tail_r
        .iter()
        .map(|&r| raw_amplitude(&u_fn, r, at).map(|v| v * v))
        .collect::<Result<Vec<f64>>>()?;
    let tail = trapezoid(&tail_r, &tail_u)?;
    if tail / (inside + tail) > 1e-8 {
        return Err(Error::Grid(format!(
            "trap grid ends at {:.3} a_t and misses {:.2e} of the norm",
            r_end / at,
            tail / (inside + tail)
        )));
    }

    let r_t = at * (2.0 * x).max(0.0).sqrt();
    let sign = if raw_amplitude(&u_fn, r_t.max(grid.first()), at)? < 0.0 { -1.0 } else { 1.0 };
    let scale = sign / inside.sqrt();
    RadialWave::new(
        grid,
        raw.into_iter().map(|v| v * scale).collect(),
        NormConvention::Unit,
    )
}

/// Log grid starting at 1e-4 a_t. With a_sc ≠ 0 the amplitude at R → 0 is finite, and the
/// default grid misses ~1e-5 of each overlap below 0.02 a_t; this grid keeps that below 1e-7.
pub fn contact_resolving_grid(spec: &TrapSpec) -> Result<RadialGrid> {
    let at = spec.trap_length();
    RadialGrid::new(1e-4 * at, TRAP_GRID_SPAN.1 * at, 2 * TRAP_GRID_POINTS, Spacing::Log)
}

/// Levels 0..=n_max on the default grid.
pub fn trap_levels(spec: &TrapSpec, n_max: u32) -> Result<Vec<TrapLevel>> {
    let grid = Arc::new(default_trap_grid(spec)?);
    trap_levels_on(spec, n_max, grid)
}

pub fn trap_levels_on(spec: &TrapSpec, n_max: u32, grid: Arc<RadialGrid>) -> Result<Vec<TrapLevel>> {
    let roots = trap_roots(spec, n_max)?;
    roots
        .into_iter()
        .enumerate()
        .map(|(n, x)| {
            let energy = x * spec.omega;
            Ok(TrapLevel {
                n: n as u32,
                x,
                nu: 0.5 * x - 0.75,
                energy,
                turning_point: trap_turning_point(energy, spec),
                wave: trap_wavefunction(x, spec, Arc::clone(&grid))?,
            })
        })
        .collect()
}

/// Nodes of a trap wave away from the contact region R ≤ |a_sc|.
pub fn count_trap_nodes(wave: &RadialWave, spec: &TrapSpec) -> usize {
    wave.nodes_beyond(spec.a_sc().abs())
}
