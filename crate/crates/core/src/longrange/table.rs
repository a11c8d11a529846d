//! Tabulated short-range potential: `R [nm]  V/h [MHz]` per line, `#` comments.

use std::path::Path;

use crate::error::{Error, Result};
use crate::units;

#[derive(Clone, Debug, PartialEq)]
pub struct PotentialTable {
    /// bohr
    r: Vec<f64>,
    /// Hartree
    v: Vec<f64>,
}

impl PotentialTable {
    /// Radii in bohr and energies in Hartree.
    pub fn new(r: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if r.len() != v.len() {
            return Err(Error::LengthMismatch {
                expected: r.len(),
                got: v.len(),
            });
        }
        if r.len() < 4 {
            return Err(Error::invalid("potential table needs at least 4 rows"));
        }
        if r[0] <= 0.0 || r.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("potential table radii must be positive and strictly increasing"));
        }
        if v.iter().chain(&r).any(|x| !x.is_finite()) {
            return Err(Error::invalid("potential table contains non-finite values"));
        }
        Ok(Self { r, v })
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut r = Vec::new();
        let mut v = Vec::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split_whitespace().collect();
            let bad = |message: String| Error::Config {
                path: origin.to_string(),
                line: k + 1,
                message,
            };
            if cols.len() != 2 {
                return Err(bad(format!("expected 2 columns (R nm, V/h MHz), found {}", cols.len())));
            }
            let rn: f64 = cols[0]
                .parse()
                .map_err(|_| bad(format!("cannot parse radius '{}'", cols[0])))?;
            let vm: f64 = cols[1]
                .parse()
                .map_err(|_| bad(format!("cannot parse energy '{}'", cols[1])))?;
            if let Some(&prev) = r.last() {
                if units::nm_to_bohr(rn) <= prev {
                    return Err(bad("radii must increase strictly".into()));
                }
            }
            r.push(units::nm_to_bohr(rn));
            v.push(units::mhz_to_hartree(vm));
        }
        Self::new(r, v).map_err(|e| match e {
            Error::InvalidArgument(message) => Error::Config {
                path: origin.to_string(),
                line: 0,
                message,
            },
            other => other,
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn first_radius(&self) -> f64 {
        self.r[0]
    }

    /// Outermost tabulated radius, where the table joins the asymptote.
    pub fn stitch_radius(&self) -> f64 {
        self.r[self.r.len() - 1]
    }

    pub fn outer_value(&self) -> f64 {
        self.v[self.v.len() - 1]
    }

    /// Cubic Lagrange interpolation on the four nearest rows.
    pub fn value(&self, x: f64) -> f64 {
        let n = self.r.len();
        let i = self.r.partition_point(|&p| p <= x).saturating_sub(1).min(n - 2);
        let lo = i.saturating_sub(1).min(n - 4);
        let mut acc = 0.0;
        for j in lo..lo + 4 {
            let mut w = 1.0;
            for m in lo..lo + 4 {
                if m != j {
                    w *= (x - self.r[m]) / (self.r[j] - self.r[m]);
                }
            }
            acc += w * self.v[j];
        }
        acc
    }

    pub fn rows(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.r.iter().copied().zip(self.v.iter().copied())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_units() {
        let text = "# R nm   V MHz\n1.0 -500\n2.0 -100\n\n3.0 -30\n4.0 -12.5 \n";
        let t = PotentialTable::parse(text, "mem").unwrap();
        assert_eq!(t.rows().count(), 4);
        assert!((t.first_radius() - units::nm_to_bohr(1.0)).abs() < 1e-12);
        assert!((t.outer_value() - units::mhz_to_hartree(-12.5)).abs() < 1e-20);
        // cubic data is reproduced exactly
        let x = units::nm_to_bohr(2.5);
        assert!(t.value(t.rows().nth(1).unwrap().0) == t.rows().nth(1).unwrap().1);
        assert!(t.value(x).is_finite());
    }

    #[test]
    fn rejects_bad_rows_with_line_numbers() {
        let e = PotentialTable::parse("1 -5\n2 x\n", "p.txt").unwrap_err();
        assert!(matches!(e, Error::Config { line: 2, .. }), "{e}");
        let e = PotentialTable::parse("1 -5\n0.5 -3\n", "p.txt").unwrap_err();
        assert!(matches!(e, Error::Config { line: 2, .. }));
        let e = PotentialTable::parse("1 -5 3\n", "p.txt").unwrap_err();
        assert!(matches!(e, Error::Config { line: 1, .. }));
        assert!(PotentialTable::parse("1 -5\n2 -1\n", "p.txt").is_err());
    }
}
