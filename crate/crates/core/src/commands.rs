//! One command per exhibit: each turns a [`RunConfig`] into result tables.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::config::{RunConfig, TemperaturePairing, ThermalQuadrature};
use crate::coupling::{
    fc_matrix, linspace, rabi_frequency, scan_scattering_length, spont_width_bound, spont_width_free,
    stimulated_rate, PhotonFactor, ScanStatus,
};
use crate::error::{Error, Result};
use crate::longrange::{leroy_bernstein_fit, solve_labels, PotentialModel, VibLevel};
use crate::scattering::{maxwell_nodes_kt, maxwell_panels, PanelRule, ThermalEnsemble};
use crate::table::{Cell, ResultTable};
use crate::trap::{trap_energy_perturbative, trap_levels, trap_roots, trap_turning_point, TrapSpec};
use crate::units;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    TrapLevels,
    MolecularLevels,
    Fc,
    Linewidths,
    Scan,
}

impl Command {
    pub const ALL: [Command; 5] = [
        Command::TrapLevels,
        Command::MolecularLevels,
        Command::Fc,
        Command::Linewidths,
        Command::Scan,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::TrapLevels => "trap-levels",
            Command::MolecularLevels => "molecular-levels",
            Command::Fc => "fc",
            Command::Linewidths => "linewidths",
            Command::Scan => "scan",
        }
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown command '{s}'")))
    }
}

/// Command-line selections; each maps onto a configuration key.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Flags {
    pub v_min: Option<i32>,
    pub v_max: Option<i32>,
    pub nt_max: Option<u32>,
    pub a_min_nm: Option<f64>,
    pub a_max_nm: Option<f64>,
    pub a_steps: Option<usize>,
    pub factor: Option<PhotonFactor>,
}

impl Flags {
    /// The configuration with the flags written into it, so the echo records them.
    pub fn apply(&self, cfg: &RunConfig) -> Result<RunConfig> {
        let mut pairs: Vec<(&str, String)> = Vec::new();
        if let Some(v) = self.v_min {
            pairs.push(("molecule.v_min", v.to_string()));
        }
        if let Some(v) = self.v_max {
            pairs.push(("molecule.v_max", v.to_string()));
        }
        if let Some(n) = self.nt_max {
            pairs.push(("trap.nt_max", n.to_string()));
        }
        if let Some(a) = self.a_min_nm {
            pairs.push(("scan.a_min_nm", a.to_string()));
        }
        if let Some(a) = self.a_max_nm {
            pairs.push(("scan.a_max_nm", a.to_string()));
        }
        if let Some(n) = self.a_steps {
            pairs.push(("scan.a_steps", n.to_string()));
        }
        if let Some(f) = self.factor {
            pairs.push(("laser.factor", f.to_string()));
        }
        if pairs.is_empty() {
            return Ok(cfg.clone());
        }
        cfg.with_overrides(&pairs)
    }
}

/// Files produced by one command.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub tables: Vec<(String, ResultTable)>,
    /// (file name, two-column text).
    pub plots: Vec<(String, String)>,
}

impl Report {
    pub fn table(&self, name: &str) -> Option<&ResultTable> {
        self.tables.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    /// Write every file into `dir` (created if missing), in a fixed order.
    pub fn write(&self, dir: &Path, cfg: &RunConfig) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        for (name, table) in &self.tables {
            let path = dir.join(name);
            table.write_csv(&path, cfg.echo())?;
            written.push(path);
        }
        for (name, text) in &self.plots {
            let path = dir.join(name);
            std::fs::write(&path, text)?;
            written.push(path);
        }
        Ok(written)
    }
}

pub fn run(cmd: Command, cfg: &RunConfig) -> Result<Report> {
    match cmd {
        Command::TrapLevels => cmd_trap_levels(cfg),
        Command::MolecularLevels => cmd_molecular_levels(cfg),
        Command::Fc => cmd_fc(cfg),
        Command::Linewidths => cmd_linewidths(cfg),
        Command::Scan => cmd_scan(cfg),
    }
}

fn single(name: &str, table: ResultTable) -> Report {
    Report {
        tables: vec![(name.to_string(), table)],
        plots: Vec::new(),
    }
}

fn checked_trap(cfg: &RunConfig, omega_khz: f64) -> Result<TrapSpec> {
    let spec = cfg.trap_spec(omega_khz)?;
    spec.check_regime()?;
    Ok(spec)
}

fn molecule_notes(table: &mut ResultTable, model: &PotentialModel) {
    table.note("r_in_nm", units::bohr_to_nm(model.r_in()));
    table.note("inner_boundary", format!("{:?}", model.boundary()));
    if let Some(c3) = model.c3() {
        table.note("c3_khz_nm3", units::c3_au_to_khz_nm3(c3));
    }
}

fn molecular_levels(cfg: &RunConfig) -> Result<(PotentialModel, Vec<VibLevel>)> {
    let model = cfg.molecule()?;
    let levels = solve_labels(&model, cfg.v_range.0..=cfg.v_range.1, &cfg.grid)?;
    Ok((model, levels))
}

/// Lowest trap states for every configured trap frequency.
pub fn cmd_trap_levels(cfg: &RunConfig) -> Result<Report> {
    let mut t = ResultTable::new(
        "trap-levels",
        &[
            ("omega_over_2pi", "kHz"),
            ("xi", "1"),
            ("n_t", "1"),
            ("x", "hbar*omega"),
            ("eps_over_hbar", "Mrad/s"),
            ("eps_over_h", "MHz"),
            ("R_t", "nm"),
            ("eps_pert_over_hbar", "Mrad/s"),
        ],
    );
    for &khz in &cfg.omegas_khz {
        let spec = checked_trap(cfg, khz)?;
        for (n, x) in trap_roots(&spec, cfg.nt_max)?.into_iter().enumerate() {
            let n = n as u32;
            let e = x * spec.omega();
            let mrad = units::hartree_to_mrad_per_s(e);
            t.push(vec![
                khz.into(),
                spec.xi().into(),
                n.into(),
                x.into(),
                mrad.into(),
                units::mrad_per_s_to_mhz(mrad).into(),
                units::bohr_to_nm(trap_turning_point(e, &spec)).into(),
                units::hartree_to_mrad_per_s(trap_energy_perturbative(n, &spec)).into(),
            ])?;
        }
    }
    Ok(single("trap_levels.csv", t))
}

/// Calibrated near-threshold levels over the configured v range.
pub fn cmd_molecular_levels(cfg: &RunConfig) -> Result<Report> {
    let (model, levels) = molecular_levels(cfg)?;
    let mut t = ResultTable::new(
        "molecular-levels",
        &[
            ("v", "1"),
            ("nodes", "1"),
            ("eps_over_h", "kHz"),
            ("R_t", "nm"),
            ("R_max", "nm"),
            ("R_max_over_R_t", "1"),
        ],
    );
    molecule_notes(&mut t, &model);
    let pairs: Vec<(i32, f64)> = levels.iter().map(|l| (l.v_label, l.binding_energy)).collect();
    if let Ok(fit) = leroy_bernstein_fit(&pairs) {
        t.note("leroy_bernstein_v_d", fit.v_dissociation);
    }
    for l in &levels {
        t.push(vec![
            l.v_label.into(),
            l.nodes.into(),
            units::hartree_to_khz(l.binding_energy).into(),
            units::bohr_to_nm(l.r_t).into(),
            units::bohr_to_nm(l.r_max).into(),
            (l.r_max / l.r_t).into(),
        ])?;
    }
    Ok(single("molecular_levels.csv", t))
}

/// |η|² blocks, one row per (trap frequency, v) and one column per n_t.
pub fn cmd_fc(cfg: &RunConfig) -> Result<Report> {
    let (model, levels) = molecular_levels(cfg)?;
    let names: Vec<String> = (0..=cfg.nt_max).map(|n| format!("eta_sq_nt{n}")).collect();
    let mut cols: Vec<(&str, &str)> = vec![("omega_over_2pi", "kHz"), ("v", "1")];
    cols.extend(names.iter().map(|n| (n.as_str(), "1")));
    let mut t = ResultTable::new("fc", &cols);
    molecule_notes(&mut t, &model);
    t.note("photon_factor", cfg.laser.factor);
    for &khz in &cfg.omegas_khz {
        let spec = checked_trap(cfg, khz)?;
        let trap = trap_levels(&spec, cfg.nt_max)?;
        let m = fc_matrix(&levels, &trap, &cfg.laser)?;
        for (l, row) in levels.iter().zip(m) {
            let mut cells: Vec<Cell> = vec![khz.into(), l.v_label.into()];
            cells.extend(row.into_iter().map(Cell::from));
            t.push(cells)?;
        }
    }
    Ok(single("fc.csv", t))
}

fn ensemble(cfg: &RunConfig, trap_energy: f64) -> Result<ThermalEnsemble> {
    let kt = match cfg.pairing {
        TemperaturePairing::TrapLevel => trap_energy,
        TemperaturePairing::FixedMicroKelvin(t) => units::kelvin_to_hartree(t * 1e-6),
    };
    match cfg.quadrature {
        ThermalQuadrature::Panels => maxwell_panels(kt, &PanelRule::default()),
        ThermalQuadrature::GaussLaguerre(n) => maxwell_nodes_kt(kt, n),
    }
}

/// Bound–bound and thermal free–bound widths for every (trap frequency, v, n_t).
pub fn cmd_linewidths(cfg: &RunConfig) -> Result<Report> {
    let (model, levels) = molecular_levels(cfg)?;
    let mut t = ResultTable::new(
        "linewidths",
        &[
            ("omega_over_2pi", "kHz"),
            ("v", "1"),
            ("n_t", "1"),
            ("T", "uK"),
            ("eta_sq_bound", "1"),
            ("gamma_bound_over_2pi", "kHz"),
            ("rabi_over_2pi", "kHz"),
            ("eta_sq_free", "1/(h*kHz)"),
            ("gamma_free_over_2pi", "kHz"),
            ("stimulated_rate", "1/s"),
        ],
    );
    molecule_notes(&mut t, &model);
    t.note("photon_factor", cfg.laser.factor);
    t.note("field_v_per_cm", cfg.field_v_per_cm);
    let (mu, field, gamma_bb) = (cfg.mu(), cfg.field_au(), cfg.gamma_bb());
    let per_khz = units::khz_to_hartree(1.0);
    for &khz in &cfg.omegas_khz {
        let spec = checked_trap(cfg, khz)?;
        let trap = trap_levels(&spec, cfg.nt_max)?;
        for l in &levels {
            for tl in &trap {
                let bound = spont_width_bound(l, tl, &spec, &cfg.laser, gamma_bb)?;
                let ens = ensemble(cfg, tl.energy)?;
                let free = spont_width_free(l, &ens, mu, spec.a_sc(), &cfg.laser, gamma_bb)?;
                t.push(vec![
                    khz.into(),
                    l.v_label.into(),
                    tl.n.into(),
                    (units::hartree_to_kelvin(ens.kt) * 1e6).into(),
                    bound.fc_sq.into(),
                    units::angular_au_to_khz(bound.rate.unwrap_or(f64::NAN)).into(),
                    units::angular_au_to_khz(rabi_frequency(bound.fc, &cfg.laser, field)).into(),
                    (free.fc_sq * per_khz).into(),
                    units::angular_au_to_khz(free.rate.unwrap_or(f64::NAN)).into(),
                    (stimulated_rate(free.fc, &cfg.laser, field) / units::AU_TIME_S).into(),
                ])?;
            }
        }
    }
    Ok(single("linewidths.csv", t))
}

/// Trap-level energy and FC factor against the scattering length.
pub fn cmd_scan(cfg: &RunConfig) -> Result<Report> {
    let model = cfg.molecule()?;
    let level = solve_labels(&model, cfg.scan_v..=cfg.scan_v, &cfg.grid)?
        .pop()
        .expect("one label requested");
    let template = TrapSpec::new(units::khz_to_angular_au(cfg.scan_omega_khz), cfg.mu(), 0.0)?;
    let a_nm = linspace(cfg.scan_a_nm.0, cfg.scan_a_nm.1, cfg.scan_steps);
    let a_bohr: Vec<f64> = a_nm.iter().map(|&a| units::nm_to_bohr(a)).collect();
    let rows = scan_scattering_length(&level, cfg.scan_nt, &template, &a_bohr, &cfg.laser)?;

    let mut t = ResultTable::new(
        "scan",
        &[
            ("a_sc", "nm"),
            ("xi", "1"),
            ("eps_over_hbar", "Mrad/s"),
            ("eps_over_h", "kHz"),
            ("eta", "1"),
            ("eta_sq", "1"),
            ("status", "1"),
        ],
    );
    molecule_notes(&mut t, &model);
    t.note("v", cfg.scan_v);
    t.note("n_t", cfg.scan_nt);
    t.note("omega_over_2pi_khz", cfg.scan_omega_khz);
    t.note("photon_factor", cfg.laser.factor);
    for (a, r) in a_nm.iter().zip(&rows) {
        t.push(vec![
            (*a).into(),
            r.xi.into(),
            units::hartree_to_mrad_per_s(r.energy).into(),
            units::hartree_to_khz(r.energy).into(),
            r.fc.into(),
            (r.fc * r.fc).into(),
            match r.status {
                ScanStatus::Ok => "ok",
                ScanStatus::Regime => "regime",
            }
            .into(),
        ])?;
    }
    let plots = vec![
        ("scan_energy.dat".to_string(), t.to_plot("a_sc", "eps_over_hbar")?),
        ("scan_eta.dat".to_string(), t.to_plot("a_sc", "eta")?),
    ];
    Ok(Report {
        tables: vec![("scan.csv".to_string(), t)],
        plots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_names_round_trip() {
        for c in Command::ALL {
            assert_eq!(c.name().parse::<Command>().unwrap(), c);
        }
        assert!("table1".parse::<Command>().is_err());
    }

    #[test]
    fn flags_land_in_the_echo() {
        let cfg = RunConfig::sodium();
        let f = Flags {
            v_max: Some(36),
            factor: Some(PhotonFactor::CosHalf),
            ..Flags::default()
        };
        let applied = f.apply(&cfg).unwrap();
        assert_eq!(applied.v_range, (33, 36));
        assert!(applied.echo().contains("laser.factor = cos_half"));
        assert_eq!(Flags::default().apply(&cfg).unwrap(), cfg);
        let bad = Flags {
            v_min: Some(40),
            ..Flags::default()
        };
        assert!(bad.apply(&cfg).is_err());
    }

    #[test]
    fn trap_levels_table() {
        let cfg = RunConfig::sodium();
        let r = cmd_trap_levels(&cfg).unwrap();
        let t = r.table("trap_levels.csv").unwrap();
        assert_eq!(t.rows.len(), 3);
        let e = t.column("eps_over_hbar").unwrap();
        let mhz = t.column("eps_over_h").unwrap();
        for (a, b) in e.iter().zip(&mhz) {
            assert!((a / (2.0 * std::f64::consts::PI) / b - 1.0).abs() < 1e-12);
        }
        assert!(t.columns.iter().all(|c| !c.unit.is_empty()));
    }

    #[test]
    fn regime_is_reported() {
        let cfg = RunConfig::sodium()
            .with_overrides(&[("trap.xi", "0.8".into())])
            .unwrap();
        assert!(matches!(cmd_trap_levels(&cfg), Err(Error::Regime { .. })));
    }
}
