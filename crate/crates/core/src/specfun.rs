//! Gamma-family functions and confluent hypergeometric functions of real argument.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::{gauss_laguerre, GaussRule};

/// A real number stored as `sign · exp(ln_abs)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignedLog {
    pub ln_abs: f64,
    pub sign: i8,
}

impl SignedLog {
    pub fn from_value(v: f64) -> Self {
        if v == 0.0 {
            Self {
                ln_abs: f64::NEG_INFINITY,
                sign: 0,
            }
        } else {
            Self {
                ln_abs: v.abs().ln(),
                sign: if v > 0.0 { 1 } else { -1 },
            }
        }
    }

    pub fn value(self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            f64::from(self.sign) * self.ln_abs.exp()
        }
    }

    pub fn mul(self, other: Self) -> Self {
        Self {
            ln_abs: self.ln_abs + other.ln_abs,
            sign: self.sign * other.sign,
        }
    }

    pub fn div(self, other: Self) -> Self {
        Self {
            ln_abs: self.ln_abs - other.ln_abs,
            sign: self.sign * other.sign,
        }
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

// Stirling series tail for ln Γ(x), x ≥ 10.
fn ln_gamma_stirling(x: f64) -> f64 {
    const B: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
        -3617.0 / 122_400.0,
    ];
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut p = inv;
    for b in B {
        series += b * p;
        p *= inv2;
    }
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + series
}

// ln Γ(x) for x ≥ 0.5.
fn ln_gamma_positive(x: f64) -> f64 {
    if x >= 10.0 {
        return ln_gamma_stirling(x);
    }
    // shift up into the Stirling range; the product stays well inside f64
    let mut shift = 1.0;
    let mut y = x;
    while y < 10.0 {
        shift *= y;
        y += 1.0;
    }
    ln_gamma_stirling(y) - shift.ln()
}

/// sin(πx) with exact zeros at integers.
pub fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (0.5 * x).round();
    let (s, r) = if r > 0.5 {
        (1.0, 1.0 - r)
    } else if r < -0.5 {
        (1.0, -1.0 - r)
    } else {
        (1.0, r)
    };
    s * (PI * r).sin()
}

fn is_pole(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// ln|Γ(x)| together with the sign of Γ(x).
pub fn ln_gamma_signed(x: f64) -> Result<SignedLog> {
    if !x.is_finite() {
        return Err(Error::Domain {
            what: "gamma argument must be finite",
            value: x,
        });
    }
    if is_pole(x) {
        return Err(Error::Pole(x));
    }
    if x >= 1.0 && x <= 20.0 && x == x.floor() {
        let f: f64 = (1..x as u32).map(f64::from).product();
        return Ok(SignedLog {
            ln_abs: f.ln(),
            sign: 1,
        });
    }
    if x >= 0.5 {
        return Ok(SignedLog {
            ln_abs: ln_gamma_positive(x),
            sign: 1,
        });
    }
    // Γ(x) = π / (sin(πx) Γ(1-x))
    let s = sin_pi(x);
    Ok(SignedLog {
        ln_abs: PI.ln() - s.abs().ln() - ln_gamma_positive(1.0 - x),
        sign: if s > 0.0 { 1 } else { -1 },
    })
}

/// ln|Γ(x)|.
pub fn ln_gamma(x: f64) -> Result<f64> {
    Ok(ln_gamma_signed(x)?.ln_abs)
}

pub fn gamma(x: f64) -> Result<f64> {
    if x > 0.0 && x < 20.0 && x == x.floor() {
        return Ok((1..x as u32).map(f64::from).product());
    }
    Ok(ln_gamma_signed(x)?.value())
}

/// 1/Γ(x), zero at the poles of Γ.
pub fn rgamma(x: f64) -> f64 {
    if is_pole(x) {
        return 0.0;
    }
    match ln_gamma_signed(x) {
        Ok(g) => f64::from(g.sign) * (-g.ln_abs).exp(),
        Err(_) => f64::NAN,
    }
}

/// Γ(a)/Γ(b) with sign, evaluated in log space.
pub fn gamma_ratio(a: f64, b: f64) -> Result<f64> {
    let num = ln_gamma_signed(a)?;
    let den = ln_gamma_signed(b)?;
    Ok(num.div(den).value())
}

/// Lanczos approximation of Γ(x) for x ≥ 0.5, kept as an independent check of the Stirling route.
pub fn gamma_lanczos(x: f64) -> f64 {
    if x < 0.5 {
        return PI / (sin_pi(x) * gamma_lanczos(1.0 - x));
    }
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

/// Largest argument accepted by [`kummer_m`].
pub const KUMMER_MAX_X: f64 = 400.0;

/// Kummer's function M(a, b, x) = ₁F₁(a; b; x) by its power series, 0 ≤ x ≤ 400.
pub fn kummer_m(a: f64, b: f64, x: f64) -> Result<f64> {
    if is_pole(b) {
        return Err(Error::Pole(b));
    }
    if !(0.0..=KUMMER_MAX_X).contains(&x) {
        return Err(Error::Domain {
            what: "Kummer M argument must lie in [0, 400]",
            value: x,
        });
    }
    let mut sum = 1.0f64;
    let mut comp = 0.0f64;
    let mut term = 1.0f64;
    let mut small = 0;
    for n in 0..20_000u32 {
        let nf = f64::from(n);
        term *= (a + nf) * x / ((b + nf) * (nf + 1.0));
        if term == 0.0 {
            break;
        }
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if (term / sum).abs() < 1e-17 {
            small += 1;
            if small >= 3 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    if term == 0.0 {
        return Ok(sum);
    }
    Err(Error::NoConvergence {
        lo: 0.0,
        hi: x,
        context: format!("Kummer series a={a}, b={b}"),
    })
}

/// Below this argument U is built from the two-M connection formula, above it from
/// the Laplace integral plus downward recurrence in `a`.
pub const TRICOMI_SWITCH: f64 = 2.0;
const TRICOMI_NODES: usize = 64;

/// Tricomi's U(a, b, ·) for fixed non-integer `b`, reusable over many arguments.
#[derive(Clone, Debug)]
pub struct TricomiU {
    a: f64,
    b: f64,
    // a + shift ≥ 1
    shift: usize,
    rule_lo: GaussRule,
    rule_hi: GaussRule,
    ln_gamma_lo: f64,
    ln_gamma_hi: f64,
    coef_m1: f64,
    coef_m2: f64,
}

impl TricomiU {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::invalid("Tricomi U parameters must be finite"));
        }
        if b == b.floor() {
            return Err(Error::Domain {
                what: "Tricomi U needs non-integer b",
                value: b,
            });
        }
        let shift = if a >= 1.0 { 0 } else { (1.0 - a).ceil() as usize };
        let a_lo = a + shift as f64;
        Ok(Self {
            a,
            b,
            shift,
            rule_lo: gauss_laguerre(TRICOMI_NODES, a_lo - 1.0)?,
            rule_hi: gauss_laguerre(TRICOMI_NODES, a_lo)?,
            ln_gamma_lo: ln_gamma(a_lo)?,
            ln_gamma_hi: ln_gamma(a_lo + 1.0)?,
            coef_m1: gamma(1.0 - b)? * rgamma(a - b + 1.0),
            coef_m2: gamma(b - 1.0)? * rgamma(a),
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::Domain {
                what: "Tricomi U argument must be positive",
                value: x,
            });
        }
        if x < TRICOMI_SWITCH {
            self.connection(x)
        } else {
            Ok(self.laplace(x))
        }
    }

    fn connection(&self, x: f64) -> Result<f64> {
        let (a, b) = (self.a, self.b);
        let mut u = 0.0;
        if self.coef_m1 != 0.0 {
            u += self.coef_m1 * kummer_m(a, b, x)?;
        }
        if self.coef_m2 != 0.0 {
            u += self.coef_m2 * x.powf(1.0 - b) * kummer_m(a - b + 1.0, 2.0 - b, x)?;
        }
        Ok(u)
    }

    // U(a,b,x) = x^{-a}/Γ(a) ∫ e^{-s} s^{a-1} (1 + s/x)^{b-a-1} ds at a+shift, a+shift+1,
    // then U(a-1) = (2a - b + x) U(a) - a(a - b + 1) U(a+1) down to a.
    fn laplace(&self, x: f64) -> f64 {
        let b = self.b;
        let a_lo = self.a + self.shift as f64;
        let integral = |rule: &GaussRule, ap: f64, lng: f64| -> f64 {
            let c = b - ap - 1.0;
            let s = rule.apply(|s| (c * (s / x).ln_1p()).exp());
            s * (-ap * x.ln() - lng).exp()
        };
        let mut u_hi = integral(&self.rule_hi, a_lo + 1.0, self.ln_gamma_hi);
        let mut u = integral(&self.rule_lo, a_lo, self.ln_gamma_lo);
        let mut ap = a_lo;
        for _ in 0..self.shift {
            let down = (2.0 * ap - b + x) * u - ap * (ap - b + 1.0) * u_hi;
            u_hi = u;
            u = down;
            ap -= 1.0;
        }
        u
    }
}

/// Tricomi's confluent hypergeometric function U(a, b, x) for x > 0 and non-integer b.
pub fn tricomi_u(a: f64, b: f64, x: f64) -> Result<f64> {
    TricomiU::new(a, b)?.eval(x)
}

/// Γ(n + 3/2) / (Γ(3/2) n!), the coefficient of the first-order trap energy shift.
pub fn gen_binom_half(n: u32) -> f64 {
    (1..=n).map(|k| (f64::from(k) + 0.5) / f64::from(k)).product()
}
