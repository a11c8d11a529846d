//! Near-dissociation vibrational levels of an attractive −C3/R³ potential.
//!
//! Levels come from a direct Numerov eigensolver on a logarithmic grid. The
//! short-range physics is collapsed into one inner boundary parameter (a hard
//! wall position or a fixed log-derivative) that is calibrated against one
//! known level.

mod fit;
mod numerov;
mod table;

use std::f64::consts::PI;
use std::ops::RangeInclusive;
use std::sync::Arc;

use rayon::prelude::*;

pub use fit::{calibrate_c3, leroy_bernstein_fit, C3Fit, LeRoyBernsteinFit};
pub use numerov::{Eigenstate, InnerBoundary, RadialSolver};
pub use table::PotentialTable;

use crate::error::{Error, Result};
use crate::grid::{RadialGrid, RadialWave};
use crate::units;

/// Label given to the least-bound level.
pub const DEFAULT_TOP_LABEL: i32 = 39;

/// Reference near-threshold levels of the Na₂ 0_g⁻ long-range state:
/// `(v, ε/h [kHz], r_t [nm], r_max [nm])`.
pub const SODIUM_REFERENCE_LEVELS: [(i32, f64, f64, f64); 7] = [
    (33, 1460.0, 162.3, 139.3),
    (34, 550.0, 224.8, 190.2),
    (35, 170.0, 332.3, 275.4),
    (36, 39.5, 540.3, 431.5),
    (37, 5.7, 1000.0, 794.0),
    (38, 0.3017, 2700.0, 1900.0),
    (39, 0.0003, 28200.0, 14200.0),
];

/// Hard-wall radius (bohr) used before calibration.
pub const SODIUM_INITIAL_WALL: f64 = 70.0;

/// c3/h in kHz·nm³ from the reference rows v = 33..36.
pub fn default_c3_khz_nm3() -> f64 {
    let rows: Vec<(f64, f64)> = SODIUM_REFERENCE_LEVELS[..4]
        .iter()
        .map(|&(_, e, r, _)| (e, r))
        .collect();
    calibrate_c3(&rows).map(|f| f.c3).unwrap_or(f64::NAN)
}

#[derive(Clone, Debug, PartialEq)]
enum Shape {
    InverseCube { c3: f64, table: Option<PotentialTable> },
    Harmonic { omega: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PotentialModel {
    shape: Shape,
    mu: f64,
    r_in: f64,
    boundary: InnerBoundary,
    top_label: i32,
}

impl PotentialModel {
    /// Pure −c3/R³ outside `r_in`; everything in atomic units.
    pub fn inverse_cube(c3: f64, mu: f64, r_in: f64, boundary: InnerBoundary) -> Result<Self> {
        if !(c3 > 0.0) || !c3.is_finite() {
            return Err(Error::invalid(format!("c3 must be positive, got {c3}")));
        }
        Self::checked(Shape::InverseCube { c3, table: None }, mu, r_in, boundary)
    }

    /// ½μω²R² with a wall at `r_in`; used to validate the solver.
    pub fn harmonic(omega: f64, mu: f64, r_in: f64) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::invalid(format!("oscillator frequency must be positive, got {omega}")));
        }
        Self::checked(Shape::Harmonic { omega }, mu, r_in, InnerBoundary::HardWall)
    }

    /// Na₂ with the reference c3, initial wall and default labels.
    pub fn sodium() -> Self {
        let c3 = units::c3_khz_nm3_to_au(default_c3_khz_nm3());
        let mu = 0.5 * units::amu_to_me(units::SODIUM_MASS_U);
        Self::inverse_cube(c3, mu, SODIUM_INITIAL_WALL, InnerBoundary::HardWall)
            .expect("reference parameters are valid")
    }

    fn checked(shape: Shape, mu: f64, r_in: f64, boundary: InnerBoundary) -> Result<Self> {
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(Error::invalid(format!("reduced mass must be positive, got {mu}")));
        }
        if !(r_in > 0.0) || !r_in.is_finite() {
            return Err(Error::invalid(format!("inner radius must be positive, got {r_in}")));
        }
        if let InnerBoundary::LogDerivative(l) = boundary {
            if !l.is_finite() {
                return Err(Error::invalid("log-derivative must be finite"));
            }
        }
        Ok(Self {
            shape,
            mu,
            r_in,
            boundary,
            top_label: DEFAULT_TOP_LABEL,
        })
    }

    /// Attach short-range points; they must meet the asymptote within 1 % at the last row.
    pub fn with_table(self, table: PotentialTable) -> Result<Self> {
        let Shape::InverseCube { c3, .. } = self.shape else {
            return Err(Error::invalid("tabulated data only applies to the −c3/R³ model"));
        };
        let rs = table.stitch_radius();
        let asym = -c3 / rs.powi(3);
        let jump = (table.outer_value() - asym).abs();
        if jump >= 0.01 * asym.abs() {
            return Err(Error::invalid(format!(
                "tabulated potential misses the asymptote by {:.2}% at {:.4} nm",
                100.0 * jump / asym.abs(),
                units::bohr_to_nm(rs)
            )));
        }
        if self.r_in < table.first_radius() {
            return Err(Error::invalid("inner radius lies below the first tabulated point"));
        }
        Ok(Self {
            shape: Shape::InverseCube {
                c3,
                table: Some(table),
            },
            ..self
        })
    }

    pub fn with_inner(self, r_in: f64, boundary: InnerBoundary) -> Result<Self> {
        let shape = self.shape.clone();
        let top = self.top_label;
        let table_floor = self.table().map(|t| t.first_radius());
        let mut m = Self::checked(shape, self.mu, r_in, boundary)?;
        if table_floor.is_some_and(|f| r_in < f) {
            return Err(Error::invalid("inner radius lies below the first tabulated point"));
        }
        m.top_label = top;
        Ok(m)
    }

    pub fn with_top_label(mut self, top: i32) -> Self {
        self.top_label = top;
        self
    }

    pub fn c3(&self) -> Option<f64> {
        match self.shape {
            Shape::InverseCube { c3, .. } => Some(c3),
            Shape::Harmonic { .. } => None,
        }
    }

    pub fn table(&self) -> Option<&PotentialTable> {
        match &self.shape {
            Shape::InverseCube { table, .. } => table.as_ref(),
            Shape::Harmonic { .. } => None,
        }
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn r_in(&self) -> f64 {
        self.r_in
    }

    pub fn boundary(&self) -> InnerBoundary {
        self.boundary
    }

    pub fn top_label(&self) -> i32 {
        self.top_label
    }

    pub fn is_dissociating(&self) -> bool {
        matches!(self.shape, Shape::InverseCube { .. })
    }

    /// V(R) in Hartree.
    pub fn potential(&self, r: f64) -> f64 {
        match &self.shape {
            Shape::InverseCube { c3, table } => match table {
                Some(t) if r < t.stitch_radius() => t.value(r),
                _ => -c3 / r.powi(3),
            },
            Shape::Harmonic { omega } => 0.5 * self.mu * omega * omega * r * r,
        }
    }

    /// Binding energy at the inner radius; windows must stay below it.
    pub fn depth(&self) -> f64 {
        -self.potential(self.r_in)
    }

    /// 2μc3, the natural length of the −c3/R³ tail.
    pub fn c3_length(&self) -> Option<f64> {
        self.c3().map(|c3| 2.0 * self.mu * c3)
    }

    fn solver(&self, r_end: f64, policy: &GridPolicy) -> Result<RadialSolver> {
        if !(r_end > self.r_in) {
            return Err(Error::Grid(format!(
                "grid end {r_end:e} bohr is not beyond the inner radius {:e}",
                self.r_in
            )));
        }
        let grid = RadialGrid::log_with_step(self.r_in, r_end, policy.log_step)?;
        RadialSolver::new(
            Arc::new(grid),
            self.mu,
            |r| self.potential(r),
            self.boundary,
            policy.tail_decay,
        )
    }

    // grid long enough for the tail of a level bound by `eps_min`
    fn solver_for_binding(&self, eps_min: f64, policy: &GridPolicy) -> Result<RadialSolver> {
        let rt = outer_turning_point(self, eps_min)?;
        let kappa = (2.0 * self.mu * eps_min).sqrt();
        let r_end = (rt + 1.25 * policy.tail_decay / kappa).max(1.05 * rt);
        self.solver(r_end, policy)
    }

    /// Total number of bound levels, from the zero-energy node count.
    pub fn bound_level_count(&self, policy: &GridPolicy) -> Result<usize> {
        let len = self
            .c3_length()
            .ok_or_else(|| Error::invalid("a confining potential has no dissociation threshold"))?;
        let solver = self.solver(policy.zero_energy_reach * len, policy)?;
        Ok(solver.count_nodes_with_continuation(0.0))
    }

    fn label(&self, n: usize, total: usize) -> i32 {
        self.top_label - (total as i32 - 1 - n as i32)
    }

    fn node_index(&self, v: i32, total: usize) -> Option<usize> {
        let n = total as i64 - 1 - i64::from(self.top_label - v);
        usize::try_from(n).ok()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridPolicy {
    /// Step in ln R.
    pub log_step: f64,
    /// e-folds of evanescent decay kept past the outer turning point.
    pub tail_decay: f64,
    /// Lower bound on points per local wavelength in allowed regions.
    pub min_points_per_wavelength: f64,
    /// Extent of the zero-energy count grid, in units of 2μc3.
    pub zero_energy_reach: f64,
    /// Relative energy tolerance of the matching step.
    pub energy_tol: f64,
}

impl Default for GridPolicy {
    fn default() -> Self {
        Self {
            log_step: 2.5e-4,
            tail_decay: 40.0,
            min_points_per_wavelength: 40.0,
            zero_energy_reach: 1e4,
            energy_tol: 1e-12,
        }
    }
}

impl GridPolicy {
    /// Same policy with the step divided by `factor`.
    pub fn refined(&self, factor: f64) -> Self {
        Self {
            log_step: self.log_step / factor,
            ..*self
        }
    }

    fn check(&self) -> Result<()> {
        if !(self.log_step > 0.0 && self.log_step < 0.1) {
            return Err(Error::Grid(format!("log step {} outside (0, 0.1)", self.log_step)));
        }
        if !(self.tail_decay >= 23.0) {
            return Err(Error::Grid(format!(
                "tail decay of {} e-folds leaves more than 1e-10 of the peak",
                self.tail_decay
            )));
        }
        if !(self.energy_tol > 0.0 && self.energy_tol <= 1e-9) {
            return Err(Error::Grid(format!("energy tolerance {} looser than 1e-9", self.energy_tol)));
        }
        Ok(())
    }

    fn check_resolution(&self, solver: &RadialSolver, e: f64) -> Result<()> {
        let ppw = solver.min_points_per_wavelength(e);
        if ppw < self.min_points_per_wavelength {
            return Err(Error::Grid(format!(
                "{ppw:.1} points per local wavelength at E = {e:e}, need {}",
                self.min_points_per_wavelength
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct VibLevel {
    pub v_label: i32,
    /// ε_v > 0 below threshold (for a confining potential: the energy itself).
    pub binding_energy: f64,
    pub energy: f64,
    pub wave: RadialWave,
    pub nodes: usize,
    pub r_t: f64,
    pub r_max: f64,
}

/// Every level with binding energy in `(eps_min, eps_max)`, deepest first.
pub fn solve_levels(model: &PotentialModel, window: (f64, f64), policy: &GridPolicy) -> Result<Vec<VibLevel>> {
    policy.check()?;
    let (eps_min, eps_max) = window;
    if !model.is_dissociating() {
        return Err(Error::invalid("binding windows need a dissociating potential"));
    }
    if !(eps_min > 0.0) {
        return Err(Error::invalid(format!(
            "binding window must stay strictly below threshold, got ε_min = {eps_min}"
        )));
    }
    if !(eps_max > eps_min) {
        return Err(Error::invalid(format!("empty binding window ({eps_min}, {eps_max})")));
    }
    if eps_max >= model.depth() {
        return Err(Error::invalid(format!(
            "window reaches {eps_max:e}, below the potential at the inner radius ({:e})",
            model.depth()
        )));
    }
    let solver = model.solver_for_binding(eps_min, policy)?;
    policy.check_resolution(&solver, -eps_max)?;
    let n_lo = solver.count_nodes(-eps_max);
    let n_hi = solver.count_nodes(-eps_min);
    let total = model.bound_level_count(policy)?;
    collect_levels(model, &solver, n_lo..n_hi, (-eps_max, -eps_min), total, policy)
}

/// Levels with the given labels, least-bound label last.
pub fn solve_labels(model: &PotentialModel, labels: RangeInclusive<i32>, policy: &GridPolicy) -> Result<Vec<VibLevel>> {
    policy.check()?;
    if !model.is_dissociating() {
        return Err(Error::invalid("vibrational labels need a dissociating potential"));
    }
    let (v_lo, v_hi) = (*labels.start(), *labels.end());
    if v_lo > v_hi {
        return Err(Error::invalid(format!("empty label range {v_lo}..={v_hi}")));
    }
    if v_hi > model.top_label {
        return Err(Error::invalid(format!(
            "label {v_hi} lies above the top label {}",
            model.top_label
        )));
    }
    let total = model.bound_level_count(policy)?;
    let n_lo = model
        .node_index(v_lo, total)
        .ok_or_else(|| Error::invalid(format!("label {v_lo} lies below the deepest level")))?;
    let n_hi = model.node_index(v_hi, total).expect("v_hi >= v_lo");

    let depth = model.depth();
    let mut eps_min = 1e-6 * depth;
    let solver = loop {
        let s = model.solver_for_binding(eps_min, policy)?;
        if s.count_nodes(-eps_min) > n_hi {
            break s;
        }
        eps_min /= 30.0;
        if eps_min < 1e-40 {
            return Err(Error::NoConvergence {
                lo: 0.0,
                hi: eps_min,
                context: format!("level {v_hi} not found below threshold"),
            });
        }
    };
    let e_lo = -depth * (1.0 - 1e-12);
    policy.check_resolution(&solver, e_lo)?;
    collect_levels(model, &solver, n_lo..n_hi + 1, (e_lo, -eps_min), total, policy)
}

/// The `count` lowest states of a confining potential.
pub fn solve_lowest(model: &PotentialModel, count: usize, policy: &GridPolicy) -> Result<Vec<VibLevel>> {
    policy.check()?;
    let Shape::Harmonic { omega } = model.shape else {
        return Err(Error::invalid("solve_lowest needs a confining potential"));
    };
    let e_max = (2.0 * count as f64 + 2.0) * omega;
    let r_tp = (2.0 * e_max / model.mu).sqrt() / omega;
    let a_ho = (model.mu * omega).sqrt().recip();
    let solver = model.solver(2.0 * r_tp + 10.0 * a_ho, policy)?;
    policy.check_resolution(&solver, e_max)?;
    let e_min = model.potential(model.r_in);
    collect_levels(model, &solver, 0..count, (e_min, e_max), count, policy)
}

fn collect_levels(
    model: &PotentialModel,
    solver: &RadialSolver,
    nodes: std::ops::Range<usize>,
    (e_lo, e_hi): (f64, f64),
    total: usize,
    policy: &GridPolicy,
) -> Result<Vec<VibLevel>> {
    nodes
        .into_par_iter()
        .map(|n| {
            let st = solver.eigenstate(n, e_lo, e_hi, policy.energy_tol)?;
            if st.nodes != n {
                return Err(Error::NoConvergence {
                    lo: e_lo,
                    hi: e_hi,
                    context: format!("state {n} converged with {} nodes", st.nodes),
                });
            }
            let (v_label, binding) = if model.is_dissociating() {
                (model.label(n, total), -st.energy)
            } else {
                (n as i32, st.energy)
            };
            let r_t = if model.is_dissociating() {
                outer_turning_point(model, binding)?
            } else {
                harmonic_turning_point(model, st.energy)
            };
            let r_max = r_max_probability(&st.wave);
            Ok(VibLevel {
                v_label,
                binding_energy: binding,
                energy: st.energy,
                wave: st.wave,
                nodes: st.nodes,
                r_t,
                r_max,
            })
        })
        .collect()
}

fn harmonic_turning_point(model: &PotentialModel, e: f64) -> f64 {
    match model.shape {
        Shape::Harmonic { omega } => (2.0 * e / model.mu).sqrt() / omega,
        Shape::InverseCube { .. } => f64::NAN,
    }
}

/// Outer root of V(R) = −ε.
pub fn outer_turning_point(model: &PotentialModel, eps: f64) -> Result<f64> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::invalid(format!("binding energy must be positive, got {eps}")));
    }
    let Shape::InverseCube { c3, table } = &model.shape else {
        return Err(Error::invalid("turning points below threshold need a dissociating potential"));
    };
    let r = (c3 / eps).cbrt();
    let Some(t) = table else {
        return Ok(r);
    };
    if r >= t.stitch_radius() {
        return Ok(r);
    }
    // walk inward through the tabulated region for the outermost crossing
    let g = |x: f64| model.potential(x) + eps;
    let rows: Vec<f64> = t.rows().map(|(x, _)| x).filter(|&x| x >= model.r_in).collect();
    let mut hi = t.stitch_radius();
    for &lo in rows.iter().rev() {
        if g(lo) * g(hi) <= 0.0 {
            return crate::quadrature::brent(g, lo, hi, 1e-13 * hi);
        }
        hi = lo;
    }
    Err(Error::Bracket {
        lo: model.r_in,
        hi: t.stitch_radius(),
        context: format!("no outer turning point for ε = {eps:e}"),
    })
}

/// Radius of the maximum of |u|².
pub fn r_max_probability(wave: &RadialWave) -> f64 {
    wave.peak_radius()
}

/// Re-tune the inner boundary so the level labelled `v` sits at binding `eps`.
///
/// A hard wall moves `r_in`; a log-derivative boundary keeps `r_in` and moves
/// L = k₀ cot θ with θ ∈ (0, π).
pub fn calibrate_boundary(model: &PotentialModel, (v, eps): (i32, f64), policy: &GridPolicy) -> Result<PotentialModel> {
    policy.check()?;
    if !model.is_dissociating() {
        return Err(Error::invalid("calibration needs a dissociating potential"));
    }
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::invalid(format!("target binding energy must be positive, got {eps}")));
    }
    if v > model.top_label {
        return Err(Error::invalid(format!("label {v} lies above the top label {}", model.top_label)));
    }
    let e_t = -eps;
    let total = model.bound_level_count(policy)?;
    let mut n = model
        .node_index(v, total)
        .ok_or_else(|| unreachable_target(v, eps, "label below the deepest level"))?;

    for _ in 0..8 {
        let candidate = match model.boundary {
            InnerBoundary::HardWall => place_wall(model, n, eps, policy)?,
            InnerBoundary::LogDerivative(_) => place_log_derivative(model, eps, policy)?,
        };
        let total = candidate.bound_level_count(policy)?;
        let label = candidate.label(n, total);
        if label == v {
            let solver = candidate.solver_for_binding(eps * 0.5, policy)?;
            let st = solver.eigenstate(n, e_t * 1.5, e_t * 0.5, policy.energy_tol)?;
            let rel = (st.energy - e_t).abs() / eps;
            if rel > 1e-6 {
                return Err(Error::NoConvergence {
                    lo: e_t * 1.5,
                    hi: e_t * 0.5,
                    context: format!("calibrated level misses the target by {rel:e}"),
                });
            }
            return Ok(candidate);
        }
        let shifted = n as i64 + i64::from(v - label);
        n = usize::try_from(shifted).map_err(|_| unreachable_target(v, eps, "label below the deepest level"))?;
    }
    Err(unreachable_target(v, eps, "label bookkeeping did not settle"))
}

fn no_placement(eps: f64, why: &str) -> Error {
    Error::NoConvergence {
        lo: eps,
        hi: eps,
        context: format!("no boundary places a level at binding {eps:e} Hartree: {why}"),
    }
}

fn unreachable_target(v: i32, eps: f64, why: &str) -> Error {
    Error::NoConvergence {
        lo: eps,
        hi: eps,
        context: format!("cannot place level {v} at binding {eps:e} Hartree: {why}"),
    }
}

// count of levels below -eps for a trial boundary
fn count_below(model: &PotentialModel, eps: f64, policy: &GridPolicy) -> Result<usize> {
    let solver = model.solver_for_binding(eps, policy)?;
    Ok(solver.count_nodes(-eps))
}

fn place_wall(model: &PotentialModel, n: usize, eps: f64, policy: &GridPolicy) -> Result<PotentialModel> {
    let with_wall = |r: f64| model.clone().with_inner(r, InnerBoundary::HardWall);
    let counts = |r: f64| -> Result<usize> { count_below(&with_wall(r)?, eps, policy) };
    let r_ceiling = 0.5 * outer_turning_point(model, eps)?;
    let r_floor = model
        .table()
        .map(|t| t.first_radius())
        .unwrap_or(1e-2 * model.r_in);
    const STEP: f64 = 1.05;

    // count > n: the level is still below the target, so the wall must move out
    let r0 = model.r_in;
    let (mut lo, mut hi) = if counts(r0)? > n {
        let mut hi = r0;
        loop {
            let lo = hi;
            hi *= STEP;
            if hi > r_ceiling {
                return Err(no_placement(eps, "wall would leave the allowed region"));
            }
            if counts(hi)? <= n {
                break (lo, hi);
            }
        }
    } else {
        let mut lo = r0;
        loop {
            let hi = lo;
            lo /= STEP;
            if lo < r_floor {
                return Err(no_placement(eps, "wall would pass the innermost radius"));
            }
            if counts(lo)? > n {
                break (lo, hi);
            }
        }
    };
    while hi / lo - 1.0 > 1e-14 {
        let mid = (lo * hi).sqrt();
        if mid <= lo || mid >= hi {
            break;
        }
        if counts(mid)? > n {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    with_wall(0.5 * (lo + hi))
}

fn place_log_derivative(model: &PotentialModel, eps: f64, policy: &GridPolicy) -> Result<PotentialModel> {
    let k0 = (2.0 * model.mu * (model.depth() - eps).abs()).sqrt();
    let with_angle = |theta: f64| {
        let l = k0 / theta.tan();
        model.clone().with_inner(model.r_in, InnerBoundary::LogDerivative(l))
    };
    let counts = |theta: f64| -> Result<usize> { count_below(&with_angle(theta)?, eps, policy) };
    let (mut lo, mut hi) = (1e-9, PI - 1e-9);
    let (c_lo, c_hi) = (counts(lo)?, counts(hi)?);
    if c_hi != c_lo + 1 {
        return Err(no_placement(eps, &format!("boundary angle spans counts {c_lo}..{c_hi}")));
    }
    // a half turn of the angle moves exactly one level across the target;
    // the caller re-checks its label
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if counts(mid)? > c_lo {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    with_angle(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests;
