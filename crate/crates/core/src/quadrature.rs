//! Gauss rules and scalar root finding.

use crate::error::{Error, Result};
use crate::specfun::ln_gamma;

/// Nodes and weights of an n-point rule.
#[derive(Clone, Debug)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn apply(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Generalized Gauss-Laguerre rule for ∫₀^∞ x^α e^{-x} f(x) dx, α > -1.
pub fn gauss_laguerre(n: usize, alpha: f64) -> Result<GaussRule> {
    if n == 0 {
        return Err(Error::invalid("Gauss-Laguerre rule needs at least one node"));
    }
    if !(alpha > -1.0) {
        return Err(Error::Domain {
            what: "Gauss-Laguerre exponent must exceed -1",
            value: alpha,
        });
    }
    let nf = n as f64;
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    // w_i = Γ(n+α+1) / (n! x_i L_n'(x_i)²)
    let log_scale = ln_gamma(alpha + nf + 1.0)? - ln_gamma(nf + 1.0)?;
    let mut z = 0.0f64;
    for i in 0..n {
        z = match i {
            0 => (1.0 + alpha) * (3.0 + 0.92 * alpha) / (1.0 + 2.4 * nf + 1.8 * alpha),
            1 => z + (15.0 + 6.25 * alpha) / (1.0 + 0.9 * alpha + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                z + ((1.0 + 2.55 * ai) / (1.9 * ai) + 1.26 * ai * alpha / (1.0 + 3.5 * ai))
                    * (z - x[i - 2])
                    / (1.0 + 0.3 * alpha)
            }
        };
        let mut converged = false;
        let mut pp = 0.0;
        for _ in 0..100 {
            let (p1, p2) = laguerre_pair(n, alpha, z);
            pp = (nf * p1 - (nf + alpha) * p2) / z;
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() <= 1e-13 * z.abs() {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence {
                lo: 0.0,
                hi: z,
                context: format!("Gauss-Laguerre node {i} of {n}"),
            });
        }
        // one polishing step past the convergence test
        let (p1, q2) = laguerre_pair(n, alpha, z);
        let pp1 = (nf * p1 - (nf + alpha) * q2) / z;
        if pp1 != 0.0 && pp1.is_finite() {
            z -= p1 / pp1;
            let (p1, p2) = laguerre_pair(n, alpha, z);
            pp = (nf * p1 - (nf + alpha) * p2) / z;
        }
        x[i] = z;
        w[i] = log_scale.exp() / (z * pp * pp);
    }
    Ok(GaussRule {
        nodes: x,
        weights: w,
    })
}

// (L_n^α(z), L_{n-1}^α(z))
fn laguerre_pair(n: usize, alpha: f64, z: f64) -> (f64, f64) {
    let (mut p1, mut p2) = (1.0, 0.0);
    for j in 1..=n {
        let jf = j as f64;
        let p3 = p2;
        p2 = p1;
        p1 = ((2.0 * jf - 1.0 + alpha - z) * p2 - (jf - 1.0 + alpha) * p3) / jf;
    }
    (p1, p2)
}

/// Gauss-Legendre rule on [a, b].
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> GaussRule {
    let n = n.max(1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 1.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 1..=n {
                let jf = j as f64;
                let p3 = p2;
                p2 = p1;
                p1 = ((2.0 * jf - 1.0) * z * p2 - (jf - 1.0) * p3) / jf;
            }
            pp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let wi = 2.0 * half / ((1.0 - z * z) * pp * pp);
        nodes[i] = mid - half * z;
        nodes[n - 1 - i] = mid + half * z;
        weights[i] = wi;
        weights[n - 1 - i] = wi;
    }
    GaussRule { nodes, weights }
}

/// Brent's method on a sign-changing bracket, returning when the bracket is below `xtol`.
pub fn brent(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, xtol: f64) -> Result<f64> {
    let (mut a, mut b) = (a, b);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(Error::Bracket {
            lo: a,
            hi: b,
            context: format!("f(lo) = {fa:e}, f(hi) = {fb:e}"),
        });
    }
    let (mut c, mut fc) = (a, fa);
    let (mut d, mut e) = (b - a, b - a);
    for _ in 0..300 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * m * s, 1.0 - s)
            } else {
                let q0 = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * m * q0 * (q0 - r) - (b - a) * (r - 1.0)),
                    (q0 - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
    }
    Err(Error::NoConvergence {
        lo: b.min(c),
        hi: b.max(c),
        context: "Brent iteration limit".into(),
    })
}
