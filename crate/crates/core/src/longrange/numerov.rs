//! Numerov integration of the radial equation on a uniform grid in x = ln R.
//!
//! With φ = u/√R the s-wave equation becomes φ'' = F(x) φ,
//! F = 2μR²(V(R) - E) + 1/4, which Numerov integrates with O(h⁶) local error.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{NormConvention, RadialGrid, RadialWave};
use crate::quadrature::brent;

/// Condition imposed on u at the first grid point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InnerBoundary {
    /// u(r_in) = 0.
    HardWall,
    /// u'(r_in)/u(r_in) = L, in inverse bohr.
    LogDerivative(f64),
}

const RESCALE_ABOVE: f64 = 1e100;

#[derive(Debug)]
pub struct RadialSolver {
    grid: Arc<RadialGrid>,
    h: f64,
    // F(x) = a - E b
    a: Vec<f64>,
    b: Vec<f64>,
    boundary: InnerBoundary,
    tail_decay: f64,
}

/// Outcome of an eigenstate search.
#[derive(Clone, Debug)]
pub struct Eigenstate {
    pub energy: f64,
    pub wave: RadialWave,
    pub nodes: usize,
    /// Grid index of the matching point.
    pub matching_index: usize,
}

impl RadialSolver {
    /// `potential` in Hartree, `grid` must be uniform in ln R.
    pub fn new(
        grid: Arc<RadialGrid>,
        mu: f64,
        potential: impl Fn(f64) -> f64,
        boundary: InnerBoundary,
        tail_decay: f64,
    ) -> Result<Self> {
        let h = grid
            .log_step()
            .ok_or_else(|| Error::Grid("the radial solver needs a log-spaced grid".into()))?;
        let (a, b) = grid
            .points()
            .iter()
            .map(|&r| {
                let b = 2.0 * mu * r * r;
                (b * potential(r) + 0.25, b)
            })
            .unzip();
        Ok(Self {
            grid,
            h,
            a,
            b,
            boundary,
            tail_decay,
        })
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    fn f(&self, i: usize, e: f64) -> f64 {
        self.a[i] - e * self.b[i]
    }

    fn w(&self, i: usize, e: f64) -> f64 {
        1.0 - self.h * self.h * self.f(i, e) / 12.0
    }

    /// Local wavelength check: points per 2π/√(-F) in the allowed region at energy `e`.
    pub fn min_points_per_wavelength(&self, e: f64) -> f64 {
        let fmin = (0..self.len()).map(|i| self.f(i, e)).fold(f64::INFINITY, f64::min);
        if fmin >= 0.0 {
            return f64::INFINITY;
        }
        2.0 * std::f64::consts::PI / (-fmin).sqrt() / self.h
    }

    /// Last index where the motion is classically allowed (F < 0).
    pub fn outer_allowed_index(&self, e: f64) -> Option<usize> {
        (0..self.len()).rev().find(|&i| self.f(i, e) < 0.0)
    }

    fn start_values(&self, e: f64) -> (f64, f64) {
        match self.boundary {
            InnerBoundary::HardWall => (0.0, 1e-20),
            InnerBoundary::LogDerivative(l) => {
                // dφ/dx = φ (R L - 1/2), φ'' = F φ; third-order Taylor step
                let r0 = self.grid.first();
                let d = r0 * l - 0.5;
                let f0 = self.f(0, e);
                let f1 = self.f(1, e);
                let df = (f1 - f0) / self.h;
                let h = self.h;
                let phi0 = 1.0;
                let phi1 = phi0 * (1.0 + h * d + 0.5 * h * h * f0 + h * h * h / 6.0 * (df + f0 * d));
                (phi0, phi1)
            }
        }
    }

    /// Nodes of the outward solution up to the point where it starts growing
    /// in the outer forbidden region (or the grid end).
    pub fn count_nodes(&self, e: f64) -> usize {
        let outer = self.outer_allowed_index(e).unwrap_or(0);
        self.count_nodes_inner(e, Some(outer)).0
    }

    /// Node count over the whole grid plus a final node predicted from a linear
    /// continuation of u past the grid end. At E = 0 this is the number of bound states.
    pub fn count_nodes_with_continuation(&self, e: f64) -> usize {
        let (nodes, phi_prev, phi_last) = self.count_nodes_inner(e, None);
        let n = self.len();
        let r = self.grid.points();
        let (u0, u1) = (phi_prev * r[n - 2].sqrt(), phi_last * r[n - 1].sqrt());
        let du = u1 - u0;
        nodes + usize::from(u1 * du < 0.0 && u1 != 0.0)
    }

    fn count_nodes_inner(&self, e: f64, stop_after: Option<usize>) -> (usize, f64, f64) {
        let (mut p0, mut p1) = self.start_values(e);
        let mut nodes = 0;
        let mut w0 = self.w(0, e);
        let mut w1 = self.w(1, e);
        if p0 * p1 < 0.0 {
            nodes += 1;
        }
        for i in 1..self.len() - 1 {
            let w2 = self.w(i + 1, e);
            let p2 = ((12.0 - 10.0 * w1) * p1 - w0 * p0) / w2;
            if p2 * p1 < 0.0 || (p1 == 0.0 && p2 * p0 < 0.0) {
                nodes += 1;
            }
            if let Some(outer) = stop_after {
                if i + 1 > outer && p2 * (p2 - p1) > 0.0 {
                    return (nodes, p1, p2);
                }
            }
            p0 = p1;
            p1 = p2;
            if p1.abs() > RESCALE_ABOVE {
                p0 /= RESCALE_ABOVE;
                p1 /= RESCALE_ABOVE;
            }
            w0 = w1;
            w1 = w2;
        }
        (nodes, p0, p1)
    }

    fn outward_values(&self, e: f64, upto: usize) -> Vec<f64> {
        let mut phi = vec![0.0; upto + 1];
        let (p0, p1) = self.start_values(e);
        phi[0] = p0;
        phi[1] = p1;
        let (mut w0, mut w1) = (self.w(0, e), self.w(1, e));
        for i in 1..upto {
            let w2 = self.w(i + 1, e);
            phi[i + 1] = ((12.0 - 10.0 * w1) * phi[i] - w0 * phi[i - 1]) / w2;
            if phi[i + 1].abs() > RESCALE_ABOVE {
                phi[..=i + 1].iter_mut().for_each(|p| *p /= RESCALE_ABOVE);
            }
            w0 = w1;
            w1 = w2;
        }
        phi
    }

    /// Index where the inward sweep starts: `tail_decay` e-folds of WKB decay past `from`.
    pub fn tail_start(&self, e: f64, from: usize) -> Result<usize> {
        let mut acc = 0.0;
        for i in from + 1..self.len() {
            let f = self.f(i, e);
            if f > 0.0 {
                acc += f.sqrt() * self.h;
            }
            if acc >= self.tail_decay {
                return Ok(i);
            }
        }
        if acc < 23.0 {
            return Err(Error::Grid(format!(
                "grid ends at {:.4e} bohr with only {acc:.1} e-folds of tail decay at E = {e:e}",
                self.grid.last()
            )));
        }
        Ok(self.len() - 1)
    }

    // inward values on [m, s], indexed from m
    fn inward_values(&self, e: f64, m: usize, s: usize) -> Vec<f64> {
        let len = s - m + 1;
        let mut phi = vec![0.0; len];
        phi[len - 1] = 0.0;
        phi[len - 2] = 1e-30;
        for k in (1..len - 1).rev() {
            let i = m + k;
            phi[k - 1] = ((12.0 - 10.0 * self.w(i, e)) * phi[k] - self.w(i + 1, e) * phi[k + 1])
                / self.w(i - 1, e);
            if phi[k - 1].abs() > RESCALE_ABOVE {
                phi[k - 1..].iter_mut().for_each(|p| *p /= RESCALE_ABOVE);
            }
        }
        phi
    }

    // scaled Wronskian of the outward and inward solutions at m
    fn mismatch(&self, e: f64, m: usize, s: usize) -> f64 {
        let out = self.outward_values(e, m + 1);
        let inw = self.inward_values(e, m, s);
        let so = out.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        let si = inw.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        (out[m] * inw[1] - out[m + 1] * inw[0]) / (so * si)
    }

    /// Energy interval `(lo, hi)` with `count(lo) <= n < count(hi)`, narrowed to `rel_width`.
    pub fn bracket_state(&self, n: usize, mut lo: f64, mut hi: f64, rel_width: f64) -> Result<(f64, f64)> {
        if self.count_nodes(lo) > n || self.count_nodes(hi) <= n {
            return Err(Error::NoConvergence {
                lo,
                hi,
                context: format!("state with {n} nodes is not inside the energy window"),
            });
        }
        for _ in 0..400 {
            let mid = 0.5 * (lo + hi);
            if self.count_nodes(mid) > n {
                hi = mid;
            } else {
                lo = mid;
            }
            if (hi - lo) <= rel_width * mid.abs() {
                break;
            }
        }
        Ok((lo, hi))
    }

    /// Eigenstate with `n` nodes between energies `lo` and `hi`, converged to `rel_tol`.
    pub fn eigenstate(&self, n: usize, lo: f64, hi: f64, rel_tol: f64) -> Result<Eigenstate> {
        let (blo, bhi) = self.bracket_state(n, lo, hi, 1e-7)?;
        let mid = 0.5 * (blo + bhi);
        let m = self
            .outer_allowed_index(mid)
            .ok_or_else(|| Error::Grid(format!("no classically allowed region at E = {mid:e}")))?;
        let m = m.min(self.len() - 3).max(1);
        let s = self.tail_start(mid, m)?.max(m + 2);

        let d = |e: f64| self.mismatch(e, m, s);
        let mut wlo = blo;
        let mut whi = bhi;
        let mut grow = (bhi - blo).max(1e-12 * mid.abs());
        let mut found = d(wlo).signum() != d(whi).signum();
        for _ in 0..40 {
            if found {
                break;
            }
            grow *= 2.0;
            wlo = (blo - grow).max(lo);
            whi = (bhi + grow).min(hi);
            found = d(wlo).signum() != d(whi).signum();
        }
        if !found {
            return Err(Error::NoConvergence {
                lo: blo,
                hi: bhi,
                context: format!("matching condition has no sign change for the {n}-node state"),
            });
        }
        let energy = brent(d, wlo, whi, rel_tol * mid.abs())?;
        let wave = self.assemble(energy, m, s)?;
        let nodes = wave.nodes();
        Ok(Eigenstate {
            energy,
            wave,
            nodes,
            matching_index: m,
        })
    }

    fn assemble(&self, e: f64, m: usize, s: usize) -> Result<RadialWave> {
        let out = self.outward_values(e, m);
        let inw = self.inward_values(e, m, s);
        if inw[0] == 0.0 {
            return Err(Error::Grid("inward solution vanishes at the matching point".into()));
        }
        let scale = out[m] / inw[0];
        let r = self.grid.points();
        let mut u = vec![0.0; self.len()];
        for i in 0..=m {
            u[i] = out[i] * r[i].sqrt();
        }
        for k in 1..inw.len() {
            u[m + k] = scale * inw[k] * r[m + k].sqrt();
        }
        let sign = if u[m] < 0.0 { -1.0 } else { 1.0 };
        let wave = RadialWave::new(Arc::clone(&self.grid), u, NormConvention::Unit)?;
        wave.scaled(sign).normalized()
    }
}
