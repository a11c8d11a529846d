use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct C3Fit {
    /// Mean of ε·r_t³, in the units of the input rows.
    pub c3: f64,
    /// Relative (population) standard deviation of the products.
    pub residual: f64,
}

/// Least-squares constant for the law ε·r_t³ = c3 over `(ε, r_t)` rows.
pub fn calibrate_c3(rows: &[(f64, f64)]) -> Result<C3Fit> {
    if rows.len() < 2 {
        return Err(Error::invalid(format!(
            "c3 calibration needs at least 2 rows, got {}",
            rows.len()
        )));
    }
    let products: Vec<f64> = rows.iter().map(|&(e, r)| e * r.powi(3)).collect();
    let n = products.len() as f64;
    let mean = products.iter().sum::<f64>() / n;
    let var = products.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / n;
    Ok(C3Fit {
        c3: mean,
        residual: var.sqrt() / mean.abs(),
    })
}

/// Near-threshold law ε_v = [H (v_D - v)]⁶ fitted as a straight line in ε^{1/6}.
#[derive(Clone, Debug, PartialEq)]
pub struct LeRoyBernsteinFit {
    pub v_dissociation: f64,
    /// H, in (energy units)^{1/6} per level.
    pub slope: f64,
    /// (ε_fit - ε)/ε for each input level.
    pub residuals: Vec<f64>,
}

impl LeRoyBernsteinFit {
    pub fn energy(&self, v: f64) -> f64 {
        (self.slope * (self.v_dissociation - v)).powi(6)
    }

    pub fn max_abs_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, r| m.max(r.abs()))
    }
}

pub fn leroy_bernstein_fit(levels: &[(i32, f64)]) -> Result<LeRoyBernsteinFit> {
    if levels.len() < 3 {
        return Err(Error::invalid(format!(
            "the near-threshold fit needs at least 3 levels, got {}",
            levels.len()
        )));
    }
    if let Some(&(v, e)) = levels.iter().find(|(_, e)| !(*e > 0.0)) {
        return Err(Error::invalid(format!("level {v} has non-positive binding energy {e}")));
    }
    let n = levels.len() as f64;
    let xs: Vec<f64> = levels.iter().map(|&(v, _)| f64::from(v)).collect();
    let ys: Vec<f64> = levels.iter().map(|&(_, e)| e.powf(1.0 / 6.0)).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("degenerate fit: all levels share one label"));
    }
    let b = sxy / sxx;
    if !(b < 0.0) {
        return Err(Error::invalid("degenerate fit: binding energies do not decrease with v"));
    }
    let slope = -b;
    let v_d = (my - b * mx) / slope;
    let fit = LeRoyBernsteinFit {
        v_dissociation: v_d,
        slope,
        residuals: Vec::new(),
    };
    let residuals = levels
        .iter()
        .map(|&(v, e)| (fit.energy(f64::from(v)) - e) / e)
        .collect();
    Ok(LeRoyBernsteinFit { residuals, ..fit })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE: [(i32, f64, f64); 5] = [
        (33, 1460.0, 162.3),
        (34, 550.0, 224.8),
        (35, 170.0, 332.3),
        (36, 39.5, 540.3),
        (37, 5.7, 1000.0),
    ];

    #[test]
    fn c3_from_reference_rows() {
        let rows: Vec<(f64, f64)> = TABLE[..4].iter().map(|&(_, e, r)| (e, r)).collect();
        let fit = calibrate_c3(&rows).unwrap();
        // hand products: 1460·162.3³ = 6.2418e9, 550·224.8³ = 6.2481e9, ...
        assert!((fit.c3 / 6.24e9 - 1.0).abs() < 0.002, "{}", fit.c3);
        assert!(fit.residual < 0.003);
    }

    #[test]
    fn c3_edge_cases() {
        let same = calibrate_c3(&[(2.0, 3.0), (2.0, 3.0)]).unwrap();
        assert_eq!(same.residual, 0.0);
        assert_eq!(same.c3, 54.0);
        let off = calibrate_c3(&[(1.0, 1.0), (1.1, 1.0)]).unwrap();
        assert!((off.residual - 0.05 / 1.05).abs() < 1e-12);
        assert!(calibrate_c3(&[]).is_err());
        assert!(calibrate_c3(&[(1.0, 1.0)]).is_err());
    }

    #[test]
    fn threshold_fit_on_reference_levels() {
        let levels: Vec<(i32, f64)> = TABLE.iter().map(|&(v, e, _)| (v, e)).collect();
        let fit = leroy_bernstein_fit(&levels).unwrap();
        // (1460/550)^{1/6} ≈ 1.177 puts the threshold near v ≈ 39.7
        assert!((fit.v_dissociation - 39.7).abs() < 0.3, "{}", fit.v_dissociation);
        assert!(fit.max_abs_residual() < 0.15, "{:?}", fit.residuals);
    }

    #[test]
    fn exact_law_is_recovered() {
        let vd = 41.37;
        let levels: Vec<(i32, f64)> = (30..36).map(|v| (v, (0.8 * (vd - f64::from(v))).powi(6))).collect();
        let fit = leroy_bernstein_fit(&levels).unwrap();
        assert!((fit.v_dissociation - vd).abs() < 1e-10);
        assert!((fit.slope - 0.8).abs() < 1e-12);
    }

    #[test]
    fn threshold_fit_preconditions() {
        assert!(leroy_bernstein_fit(&[(33, 1460.0), (34, 550.0)]).is_err());
        assert!(leroy_bernstein_fit(&[(33, 1.0), (33, 2.0), (33, 3.0)]).is_err());
        assert!(leroy_bernstein_fit(&[(33, 1.0), (34, 0.0), (35, 3.0)]).is_err());
    }
}
