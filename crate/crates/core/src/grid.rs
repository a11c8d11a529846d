//! Radial grids, sampled radial waves and the trapezoid quadrature used for
//! every radial integral in the crate.

use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spacing {
    /// Constant step in R.
    Uniform,
    /// Constant step in ln R.
    Log,
    /// Arbitrary strictly increasing abscissae (merged grids).
    Irregular,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RadialGrid {
    r: Vec<f64>,
    spacing: Spacing,
}

impl RadialGrid {
    /// Builds a grid from `r_min` to `r_max` (atomic units) with `n` points.
    pub fn new(r_min: f64, r_max: f64, n: usize, spacing: Spacing) -> Result<Self> {
        if !(r_min > 0.0) || !r_min.is_finite() {
            return Err(Error::invalid(format!("grid start must be positive, got {r_min}")));
        }
        if !(r_max > r_min) || !r_max.is_finite() {
            return Err(Error::invalid(format!(
                "grid end {r_max} must exceed grid start {r_min}"
            )));
        }
        if n < 3 {
            return Err(Error::invalid(format!("grid needs at least 3 points, got {n}")));
        }
        let last = (n - 1) as f64;
        let mut r: Vec<f64> = match spacing {
            Spacing::Uniform => {
                let h = (r_max - r_min) / last;
                (0..n).map(|i| r_min + i as f64 * h).collect()
            }
            Spacing::Log => {
                let h = (r_max / r_min).ln() / last;
                (0..n).map(|i| r_min * (i as f64 * h).exp()).collect()
            }
            Spacing::Irregular => {
                return Err(Error::invalid("irregular grids are built from explicit points"))
            }
        };
        r[0] = r_min;
        r[n - 1] = r_max;
        Ok(Self { r, spacing })
    }

    /// Log grid with a prescribed step in ln R; the end point is rounded up to a whole step.
    pub fn log_with_step(r_min: f64, r_max: f64, step: f64) -> Result<Self> {
        if !(step > 0.0) {
            return Err(Error::invalid(format!("log step must be positive, got {step}")));
        }
        if !(r_min > 0.0) || !(r_max > r_min) {
            return Err(Error::invalid(format!("bad grid range [{r_min}, {r_max}]")));
        }
        let n = ((r_max / r_min).ln() / step).ceil() as usize + 1;
        let n = n.max(3);
        let r = (0..n).map(|i| r_min * (i as f64 * step).exp()).collect();
        Ok(Self {
            r,
            spacing: Spacing::Log,
        })
    }

    pub fn from_points(r: Vec<f64>) -> Result<Self> {
        if r.len() < 3 {
            return Err(Error::invalid(format!("grid needs at least 3 points, got {}", r.len())));
        }
        if !(r[0] > 0.0) {
            return Err(Error::invalid(format!("grid start must be positive, got {}", r[0])));
        }
        if let Some(w) = r.windows(2).find(|w| !(w[1] > w[0])) {
            return Err(Error::invalid(format!(
                "grid points must increase strictly ({} then {})",
                w[0], w[1]
            )));
        }
        Ok(Self {
            r,
            spacing: Spacing::Irregular,
        })
    }

    pub fn points(&self) -> &[f64] {
        &self.r
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn first(&self) -> f64 {
        self.r[0]
    }

    pub fn last(&self) -> f64 {
        self.r[self.r.len() - 1]
    }

    pub fn spacing(&self) -> Spacing {
        self.spacing
    }

    /// Step in ln R for log grids.
    pub fn log_step(&self) -> Option<f64> {
        (self.spacing == Spacing::Log).then(|| (self.r[1] / self.r[0]).ln())
    }

    /// Same range with the step divided by `factor` (every old point is kept).
    pub fn refined(&self, factor: usize) -> Self {
        let factor = factor.max(1);
        let mut r = Vec::with_capacity((self.r.len() - 1) * factor + 1);
        for w in self.r.windows(2) {
            for k in 0..factor {
                let t = k as f64 / factor as f64;
                let p = match self.spacing {
                    Spacing::Log => w[0] * (w[1] / w[0]).powf(t),
                    _ => w[0] + t * (w[1] - w[0]),
                };
                r.push(p);
            }
        }
        r.push(self.last());
        Self {
            r,
            spacing: self.spacing,
        }
    }

    /// Index `i` with `r[i] <= x < r[i+1]`, or `None` outside the grid.
    pub fn locate(&self, x: f64) -> Option<usize> {
        if !(x >= self.first() && x <= self.last()) {
            return None;
        }
        let i = self.r.partition_point(|&p| p <= x);
        Some(i.saturating_sub(1).min(self.r.len() - 2))
    }

    pub fn integrate(&self, f: &[f64]) -> Result<f64> {
        integrate(self, f)
    }
}

pub fn make_grid(r_min: f64, r_max: f64, n: usize, spacing: Spacing) -> Result<RadialGrid> {
    RadialGrid::new(r_min, r_max, n, spacing)
}

/// Composite trapezoid rule over the grid abscissae.
pub fn integrate(grid: &RadialGrid, f: &[f64]) -> Result<f64> {
    trapezoid(grid.points(), f)
}

/// Trapezoid rule on arbitrary increasing abscissae; exact for piecewise-linear `f`.
pub fn trapezoid(x: &[f64], f: &[f64]) -> Result<f64> {
    if x.len() != f.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            got: f.len(),
        });
    }
    Ok(x.windows(2)
        .zip(f.windows(2))
        .map(|(xw, fw)| 0.5 * (xw[1] - xw[0]) * (fw[0] + fw[1]))
        .sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormConvention {
    /// ∫|u|² dR = 1.
    Unit,
    /// Energy normalized continuum state, amplitude carries 1/√energy.
    PerSqrtEnergy,
}

/// Reduced radial amplitude `u(R) = R·Φ(R)` sampled on a grid.
#[derive(Clone, Debug)]
pub struct RadialWave {
    grid: Arc<RadialGrid>,
    u: Vec<f64>,
    norm: NormConvention,
}

impl RadialWave {
    pub fn new(grid: Arc<RadialGrid>, u: Vec<f64>, norm: NormConvention) -> Result<Self> {
        if u.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                got: u.len(),
            });
        }
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("wave samples must be finite"));
        }
        Ok(Self { grid, u, norm })
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn shared_grid(&self) -> Arc<RadialGrid> {
        Arc::clone(&self.grid)
    }

    pub fn values(&self) -> &[f64] {
        &self.u
    }

    pub fn convention(&self) -> NormConvention {
        self.norm
    }

    pub fn norm_sq(&self) -> f64 {
        let sq: Vec<f64> = self.u.iter().map(|v| v * v).collect();
        trapezoid(self.grid.points(), &sq).unwrap_or(0.0)
    }

    /// Rescaled to unit norm by a positive factor.
    pub fn normalized(&self) -> Result<Self> {
        let n2 = self.norm_sq();
        if !(n2 > 0.0) || !n2.is_finite() {
            return Err(Error::invalid("cannot normalize a wave with zero norm"));
        }
        let s = n2.sqrt().recip();
        Ok(Self {
            grid: Arc::clone(&self.grid),
            u: self.u.iter().map(|v| v * s).collect(),
            norm: NormConvention::Unit,
        })
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            u: self.u.iter().map(|v| v * factor).collect(),
            norm: self.norm,
        }
    }

    /// Four-point Lagrange interpolation; zero outside the grid.
    pub fn value_at(&self, x: f64) -> f64 {
        let Some(i) = self.grid.locate(x) else {
            return 0.0;
        };
        let r = self.grid.points();
        let n = r.len();
        let lo = i.saturating_sub(1).min(n - 4.min(n));
        let hi = (lo + 4).min(n);
        let mut acc = 0.0;
        for j in lo..hi {
            let mut w = 1.0;
            for m in lo..hi {
                if m != j {
                    w *= (x - r[m]) / (r[j] - r[m]);
                }
            }
            acc += w * self.u[j];
        }
        acc
    }

    pub fn max_abs(&self) -> f64 {
        self.u.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Sign changes of `u` at radii above `r_min`, ignoring samples below `1e-12` of the peak.
    pub fn nodes_beyond(&self, r_min: f64) -> usize {
        let floor = 1e-12 * self.max_abs();
        let mut last_sign = 0.0f64;
        let mut nodes = 0;
        for (&r, &v) in self.grid.points().iter().zip(&self.u) {
            if r <= r_min || v.abs() <= floor {
                continue;
            }
            let s = v.signum();
            if last_sign != 0.0 && s != last_sign {
                nodes += 1;
            }
            last_sign = s;
        }
        nodes
    }

    pub fn nodes(&self) -> usize {
        self.nodes_beyond(0.0)
    }

    /// Radius of the maximum of |u|², refined by a parabola through the three nearest samples.
    pub fn peak_radius(&self) -> f64 {
        let r = self.grid.points();
        let (imax, _) = self
            .u
            .iter()
            .enumerate()
            .fold((0, -1.0), |(bi, bv), (i, v)| {
                if v * v > bv {
                    (i, v * v)
                } else {
                    (bi, bv)
                }
            });
        if imax == 0 || imax + 1 == r.len() {
            return r[imax];
        }
        let (x0, x1, x2) = (r[imax - 1], r[imax], r[imax + 1]);
        let (y0, y1, y2) = (
            self.u[imax - 1].powi(2),
            self.u[imax].powi(2),
            self.u[imax + 1].powi(2),
        );
        let d01 = (y1 - y0) / (x1 - x0);
        let d12 = (y2 - y1) / (x2 - x1);
        let curv = (d12 - d01) / (x2 - x0);
        if curv >= 0.0 {
            return x1;
        }
        let vertex = 0.5 * (x0 + x1) - d01 / (2.0 * curv);
        vertex.clamp(x0, x2)
    }

    /// ∫ u·v·weight(R) dR on the union of both grids restricted to their common range.
    pub fn overlap_with(&self, other: &RadialWave, weight: impl Fn(f64) -> f64) -> Result<f64> {
        if Arc::ptr_eq(&self.grid, &other.grid) || self.grid == other.grid {
            let f: Vec<f64> = self
                .grid
                .points()
                .iter()
                .zip(self.u.iter().zip(&other.u))
                .map(|(&r, (a, b))| a * b * weight(r))
                .collect();
            return trapezoid(self.grid.points(), &f);
        }
        let lo = self.grid.first().max(other.grid.first());
        let hi = self.grid.last().min(other.grid.last());
        if !(hi > lo) {
            return Ok(0.0);
        }
        let x = merge_abscissae(self.grid.points(), other.grid.points(), lo, hi);
        let f: Vec<f64> = x
            .iter()
            .map(|&r| self.value_at(r) * other.value_at(r) * weight(r))
            .collect();
        trapezoid(&x, &f)
    }
}

pub fn normalize(w: &RadialWave) -> Result<RadialWave> {
    w.normalized()
}

/// Sorted union of two increasing point sets inside `[lo, hi]`, near-duplicates removed.
pub fn merge_abscissae(a: &[f64], b: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    let mut x: Vec<f64> = a
        .iter()
        .chain(b)
        .copied()
        .filter(|&r| r >= lo && r <= hi)
        .collect();
    x.push(lo);
    x.push(hi);
    x.sort_by(f64::total_cmp);
    x.dedup_by(|next, prev| (*next - *prev).abs() <= 1e-13 * prev.abs());
    x
}
