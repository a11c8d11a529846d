//! Run configuration: `section.key = value` lines with `#` comments.
//!
//! Keys carry their unit in the name (`trap.omega_khz`); a value may repeat
//! the unit (`100 kHz`) but a different unit is rejected.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::coupling::{LaserSpec, PhotonFactor};
use crate::error::{Error, Result};
use crate::longrange::{
    calibrate_boundary, default_c3_khz_nm3, GridPolicy, InnerBoundary, PotentialModel, PotentialTable,
};
use crate::trap::TrapSpec;
use crate::units;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Text,
    Real,
    Int,
    Bool,
    RealList,
}

// key, kind, unit, default (None = optional without default)
const KEYS: &[(&str, Kind, &str, Option<&str>)] = &[
    ("species.name", Kind::Text, "", None),
    ("species.mass_u", Kind::Real, "u", None),
    ("trap.omega_khz", Kind::RealList, "khz", Some("100")),
    ("trap.xi", Kind::Real, "", Some("0.042")),
    ("trap.a_sc_nm", Kind::Real, "nm", None),
    ("trap.xi_reference_khz", Kind::Real, "khz", Some("100")),
    ("trap.nt_max", Kind::Int, "", Some("2")),
    ("molecule.c3_khz_nm3", Kind::Real, "khz nm3", None),
    ("molecule.potential_table", Kind::Text, "", None),
    ("molecule.boundary", Kind::Text, "", Some("wall")),
    ("molecule.r_in_nm", Kind::Real, "nm", Some("3.7042")),
    ("molecule.log_derivative_per_nm", Kind::Real, "1/nm", Some("0")),
    ("molecule.calibrate", Kind::Bool, "", Some("true")),
    ("molecule.anchor_v", Kind::Int, "", Some("33")),
    ("molecule.anchor_khz", Kind::Real, "khz", Some("1460")),
    ("molecule.top_label", Kind::Int, "", Some("39")),
    ("molecule.v_min", Kind::Int, "", Some("33")),
    ("molecule.v_max", Kind::Int, "", Some("39")),
    ("laser.wavelength_nm", Kind::Real, "nm", Some("589")),
    ("laser.factor", Kind::Text, "", Some("unity")),
    ("laser.omega_a_thz", Kind::Real, "thz", Some("508.333")),
    ("laser.d0_au", Kind::Real, "au", Some("3.5007")),
    ("laser.orientation", Kind::Real, "", Some("1")),
    ("laser.field_v_per_cm", Kind::Real, "v/cm", Some("1")),
    ("laser.gamma_bb_khz", Kind::Real, "khz", Some("0")),
    ("thermal.pairing", Kind::Text, "", Some("trap_level")),
    ("thermal.temperature_uk", Kind::Real, "uk", None),
    ("thermal.quadrature", Kind::Text, "", Some("panels")),
    ("thermal.nodes", Kind::Int, "", Some("64")),
    ("grid.log_step", Kind::Real, "", Some("2.5e-4")),
    ("grid.tail_decay", Kind::Real, "", Some("40")),
    ("scan.v", Kind::Int, "", Some("35")),
    ("scan.n_t", Kind::Int, "", Some("0")),
    ("scan.omega_khz", Kind::Real, "khz", Some("10")),
    ("scan.a_min_nm", Kind::Real, "nm", Some("-6")),
    ("scan.a_max_nm", Kind::Real, "nm", Some("6")),
    ("scan.a_steps", Kind::Int, "", Some("49")),
    ("output.dir", Kind::Text, "", Some("out")),
];

/// How the trap-pair scattering length is specified.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ScatteringInput {
    /// ξ at the reference trap frequency.
    Xi { xi: f64, reference_khz: f64 },
    AscNm(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub enum PotentialInput {
    C3KhzNm3(f64),
    Table(PathBuf),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryKind {
    Wall,
    LogDerivative,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TemperaturePairing {
    /// T = E_{n_t}/k_B for each trap level.
    TrapLevel,
    FixedMicroKelvin(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThermalQuadrature {
    Panels,
    GaussLaguerre(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub species: String,
    pub mass_u: f64,
    pub omegas_khz: Vec<f64>,
    pub scattering: ScatteringInput,
    pub nt_max: u32,
    pub potential: PotentialInput,
    pub boundary: BoundaryKind,
    pub r_in_nm: f64,
    pub log_derivative_per_nm: f64,
    /// Calibration anchor (v, ε/h in kHz), if enabled.
    pub anchor: Option<(i32, f64)>,
    pub top_label: i32,
    pub v_range: (i32, i32),
    pub laser: LaserSpec,
    pub field_v_per_cm: f64,
    pub gamma_bb_khz: f64,
    pub pairing: TemperaturePairing,
    pub quadrature: ThermalQuadrature,
    pub grid: GridPolicy,
    pub scan_v: i32,
    pub scan_nt: u32,
    pub scan_omega_khz: f64,
    pub scan_a_nm: (f64, f64),
    pub scan_steps: usize,
    pub output_dir: PathBuf,
    echo: String,
}

struct Entry {
    value: String,
    line: usize,
}

struct Parsed<'a> {
    origin: &'a str,
    base: Option<&'a Path>,
    entries: BTreeMap<&'static str, Entry>,
}

impl Parsed<'_> {
    fn err(&self, line: usize, message: impl Into<String>) -> Error {
        Error::Config {
            path: self.origin.to_string(),
            line,
            message: message.into(),
        }
    }

    fn line(&self, key: &str) -> usize {
        self.entries.get(key).map_or(0, |e| e.line)
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.entries
            .get(key)
            .map(|e| e.value.as_str())
            .or_else(|| spec_of(key).and_then(|s| s.3))
    }

    fn real(&self, key: &str) -> Result<Option<f64>> {
        self.raw(key)
            .map(|v| {
                v.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| self.err(self.line(key), format!("{key}: '{v}' is not a finite number")))
            })
            .transpose()
    }

    fn positive(&self, key: &str) -> Result<Option<f64>> {
        let v = self.real(key)?;
        if let Some(x) = v {
            if !(x > 0.0) {
                return Err(self.err(self.line(key), format!("{key} must be positive, got {x}")));
            }
        }
        Ok(v)
    }

    fn int(&self, key: &str) -> Result<i64> {
        let v = self.raw(key).expect("integer keys have defaults");
        v.parse::<i64>()
            .map_err(|_| self.err(self.line(key), format!("{key}: '{v}' is not an integer")))
    }

    fn count(&self, key: &str) -> Result<u32> {
        let n = self.int(key)?;
        u32::try_from(n).map_err(|_| self.err(self.line(key), format!("{key} must be non-negative, got {n}")))
    }

    fn text(&self, key: &str) -> Option<&str> {
        self.raw(key)
    }
}

fn spec_of(key: &str) -> Option<&'static (&'static str, Kind, &'static str, Option<&'static str>)> {
    KEYS.iter().find(|k| k.0 == key)
}

fn normalize_unit(u: &str) -> String {
    u.to_ascii_lowercase()
        .replace(['·', '*'], " ")
        .replace('^', "")
        .replace('µ', "u")
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
}

// split "100 kHz" into ("100", Some("kHz")); lists and text are left whole
fn split_unit(kind: Kind, value: &str) -> (&str, Option<&str>) {
    if !matches!(kind, Kind::Real) {
        return (value, None);
    }
    match value.find(|c: char| c.is_whitespace()) {
        Some(i) => (&value[..i], Some(value[i..].trim())),
        None => (value, None),
    }
}

/// Parse configuration text; `origin` names the source in error messages.
pub fn parse_config(text: &str, origin: &str) -> Result<RunConfig> {
    parse_in(text, origin, None)
}

// relative table paths are resolved against `base`
fn parse_in(text: &str, origin: &str, base: Option<&Path>) -> Result<RunConfig> {
    let mut p = Parsed {
        origin,
        base,
        entries: BTreeMap::new(),
    };
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| p.err(line, format!("expected 'key = value', got '{content}'")))?;
        let (key, value) = (key.trim(), value.trim());
        let spec = spec_of(key).ok_or_else(|| p.err(line, format!("unknown key '{key}'")))?;
        if p.entries.contains_key(spec.0) {
            return Err(p.err(line, format!("duplicate key '{key}'")));
        }
        if value.is_empty() {
            return Err(p.err(line, format!("{key} has an empty value")));
        }
        let (number, unit) = split_unit(spec.1, value);
        if let Some(u) = unit {
            if normalize_unit(u) != spec.2 {
                let expected = if spec.2.is_empty() { "no unit" } else { spec.2 };
                return Err(p.err(line, format!("{key}: unit '{u}' does not match the key's unit ({expected})")));
            }
        }
        p.entries.insert(
            spec.0,
            Entry {
                value: number.to_string(),
                line,
            },
        );
    }
    build(&p)
}

/// Read and validate a configuration file; a relative potential-table path is
/// taken relative to the file's directory.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    parse_in(&text, &path.display().to_string(), path.parent())
}

fn build(p: &Parsed<'_>) -> Result<RunConfig> {
    let species = p
        .entries
        .get("species.name")
        .map(|e| e.value.clone())
        .ok_or_else(|| p.err(0, "missing mandatory key 'species.name'"))?;
    let mass_u = match p.positive("species.mass_u")? {
        Some(m) => m,
        None if species.eq_ignore_ascii_case("na") => units::SODIUM_MASS_U,
        None => {
            return Err(p.err(
                p.line("species.name"),
                format!("missing mandatory key 'species.mass_u' for species '{species}'"),
            ))
        }
    };

    let omegas_khz = p
        .text("trap.omega_khz")
        .expect("default")
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| *x > 0.0 && x.is_finite())
                .ok_or_else(|| {
                    p.err(
                        p.line("trap.omega_khz"),
                        format!("trap.omega_khz must be positive, got '{}'", s.trim()),
                    )
                })
        })
        .collect::<Result<Vec<_>>>()?;

    let scattering = match (p.entries.get("trap.xi"), p.entries.get("trap.a_sc_nm")) {
        (Some(_), Some(b)) => {
            return Err(p.err(b.line, "give only one of 'trap.xi' and 'trap.a_sc_nm'"));
        }
        (_, Some(_)) => ScatteringInput::AscNm(p.real("trap.a_sc_nm")?.expect("present")),
        (xi, None) => {
            let xi = match xi {
                Some(_) => p.real("trap.xi")?.expect("present"),
                None => 0.042,
            };
            ScatteringInput::Xi {
                xi,
                reference_khz: p.positive("trap.xi_reference_khz")?.expect("default"),
            }
        }
    };

    let potential = match (p.entries.get("molecule.c3_khz_nm3"), p.entries.get("molecule.potential_table")) {
        (Some(_), Some(b)) => {
            return Err(p.err(
                b.line,
                "give only one of 'molecule.c3_khz_nm3' and 'molecule.potential_table'",
            ));
        }
        (_, Some(t)) => {
            let path = PathBuf::from(&t.value);
            PotentialInput::Table(match p.base {
                Some(dir) if path.is_relative() => dir.join(path),
                _ => path,
            })
        }
        (Some(_), None) => PotentialInput::C3KhzNm3(p.positive("molecule.c3_khz_nm3")?.expect("present")),
        (None, None) => PotentialInput::C3KhzNm3(default_c3_khz_nm3()),
    };

    let boundary = match p.text("molecule.boundary").expect("default") {
        "wall" => BoundaryKind::Wall,
        "log_derivative" => BoundaryKind::LogDerivative,
        other => {
            return Err(p.err(
                p.line("molecule.boundary"),
                format!("molecule.boundary must be 'wall' or 'log_derivative', got '{other}'"),
            ))
        }
    };
    let calibrate = match p.text("molecule.calibrate").expect("default") {
        "true" => true,
        "false" => false,
        other => {
            return Err(p.err(
                p.line("molecule.calibrate"),
                format!("molecule.calibrate must be true or false, got '{other}'"),
            ))
        }
    };
    let anchor = if calibrate {
        Some((
            p.int("molecule.anchor_v")? as i32,
            p.positive("molecule.anchor_khz")?.expect("default"),
        ))
    } else {
        None
    };
    let v_range = (p.int("molecule.v_min")? as i32, p.int("molecule.v_max")? as i32);
    if v_range.0 > v_range.1 {
        return Err(p.err(p.line("molecule.v_max"), "molecule.v_max is below molecule.v_min"));
    }

    let factor: PhotonFactor = p
        .text("laser.factor")
        .expect("default")
        .parse()
        .map_err(|e: Error| p.err(p.line("laser.factor"), e.to_string()))?;
    let laser = LaserSpec {
        wavelength_nm: p.positive("laser.wavelength_nm")?.expect("default"),
        factor,
        omega_a: units::rad_per_s_to_au(2.0 * std::f64::consts::PI * p.positive("laser.omega_a_thz")?.expect("default") * 1e12),
        d0: p.real("laser.d0_au")?.expect("default"),
        orientation: p.real("laser.orientation")?.expect("default"),
    };
    let gamma_bb_khz = p.real("laser.gamma_bb_khz")?.expect("default");
    if gamma_bb_khz < 0.0 {
        return Err(p.err(p.line("laser.gamma_bb_khz"), "laser.gamma_bb_khz must be non-negative"));
    }

    let pairing = match (p.text("thermal.pairing").expect("default"), p.positive("thermal.temperature_uk")?) {
        ("trap_level", None) => TemperaturePairing::TrapLevel,
        ("fixed", Some(t)) => TemperaturePairing::FixedMicroKelvin(t),
        ("fixed", None) => {
            return Err(p.err(
                p.line("thermal.pairing"),
                "missing mandatory key 'thermal.temperature_uk' for fixed pairing",
            ))
        }
        ("trap_level", Some(_)) => {
            return Err(p.err(
                p.line("thermal.temperature_uk"),
                "thermal.temperature_uk needs thermal.pairing = fixed",
            ))
        }
        (other, _) => {
            return Err(p.err(
                p.line("thermal.pairing"),
                format!("thermal.pairing must be 'trap_level' or 'fixed', got '{other}'"),
            ))
        }
    };
    let quadrature = match p.text("thermal.quadrature").expect("default") {
        "panels" => ThermalQuadrature::Panels,
        "gauss_laguerre" => ThermalQuadrature::GaussLaguerre(p.count("thermal.nodes")? as usize),
        other => {
            return Err(p.err(
                p.line("thermal.quadrature"),
                format!("thermal.quadrature must be 'panels' or 'gauss_laguerre', got '{other}'"),
            ))
        }
    };

    let grid = GridPolicy {
        log_step: p.positive("grid.log_step")?.expect("default"),
        tail_decay: p.positive("grid.tail_decay")?.expect("default"),
        ..GridPolicy::default()
    };

    let scan_a_nm = (
        p.real("scan.a_min_nm")?.expect("default"),
        p.real("scan.a_max_nm")?.expect("default"),
    );
    if scan_a_nm.0 > scan_a_nm.1 {
        return Err(p.err(p.line("scan.a_max_nm"), "scan.a_max_nm is below scan.a_min_nm"));
    }

    let mut cfg = RunConfig {
        species,
        mass_u,
        omegas_khz,
        scattering,
        nt_max: p.count("trap.nt_max")?,
        potential,
        boundary,
        r_in_nm: p.positive("molecule.r_in_nm")?.expect("default"),
        log_derivative_per_nm: p.real("molecule.log_derivative_per_nm")?.expect("default"),
        anchor,
        top_label: p.int("molecule.top_label")? as i32,
        v_range,
        laser,
        field_v_per_cm: p.positive("laser.field_v_per_cm")?.expect("default"),
        gamma_bb_khz,
        pairing,
        quadrature,
        grid,
        scan_v: p.int("scan.v")? as i32,
        scan_nt: p.count("scan.n_t")?,
        scan_omega_khz: p.positive("scan.omega_khz")?.expect("default"),
        scan_a_nm,
        scan_steps: p.count("scan.a_steps")? as usize,
        output_dir: PathBuf::from(p.text("output.dir").expect("default")),
        echo: String::new(),
    };
    cfg.echo = echo(p, &cfg);
    Ok(cfg)
}

// resolved key = value lines, defaults included, in key order
fn echo(p: &Parsed<'_>, cfg: &RunConfig) -> String {
    let mut map: BTreeMap<&str, String> = KEYS
        .iter()
        .filter_map(|k| p.raw(k.0).map(|v| (k.0, v.to_string())))
        .collect();
    if let ScatteringInput::AscNm(_) = cfg.scattering {
        map.remove("trap.xi");
        map.remove("trap.xi_reference_khz");
    }
    match &cfg.potential {
        PotentialInput::C3KhzNm3(c3) => {
            map.insert("molecule.c3_khz_nm3", c3.to_string());
        }
        PotentialInput::Table(path) => {
            map.insert("molecule.potential_table", path.display().to_string());
        }
    }
    let mut out = String::new();
    for (k, v) in map {
        let _ = writeln!(out, "{k} = {v}");
    }
    out
}

impl RunConfig {
    /// Defaults for sodium.
    pub fn sodium() -> Self {
        parse_config("species.name = Na\n", "<defaults>").expect("defaults are valid")
    }

    /// Canonical `key = value` listing of every resolved setting.
    pub fn echo(&self) -> &str {
        &self.echo
    }

    /// Same configuration with some keys replaced, as if edited in the file.
    pub fn with_overrides(&self, pairs: &[(&str, String)]) -> Result<Self> {
        let mut text = String::new();
        for line in self.echo.lines() {
            let key = line.split_once(" = ").map_or(line, |(k, _)| k);
            if !pairs.iter().any(|(k, _)| *k == key) {
                text.push_str(line);
                text.push('\n');
            }
        }
        for (k, v) in pairs {
            let _ = writeln!(text, "{k} = {v}");
        }
        parse_config(&text, "<command line>")
    }

    pub fn mu(&self) -> f64 {
        0.5 * units::amu_to_me(self.mass_u)
    }

    pub fn a_sc_bohr(&self) -> Result<f64> {
        match self.scattering {
            ScatteringInput::AscNm(a) => Ok(units::nm_to_bohr(a)),
            ScatteringInput::Xi { xi, reference_khz } => {
                Ok(TrapSpec::from_xi(units::khz_to_angular_au(reference_khz), self.mu(), xi)?.a_sc())
            }
        }
    }

    pub fn trap_spec(&self, omega_khz: f64) -> Result<TrapSpec> {
        TrapSpec::new(units::khz_to_angular_au(omega_khz), self.mu(), self.a_sc_bohr()?)
    }

    pub fn field_au(&self) -> f64 {
        units::v_per_cm_to_au(self.field_v_per_cm)
    }

    pub fn gamma_bb(&self) -> f64 {
        units::khz_to_angular_au(self.gamma_bb_khz)
    }

    /// Molecular potential with the configured (and, if requested, calibrated) boundary.
    pub fn molecule(&self) -> Result<PotentialModel> {
        let mu = self.mu();
        let r_in = units::nm_to_bohr(self.r_in_nm);
        let boundary = match self.boundary {
            BoundaryKind::Wall => InnerBoundary::HardWall,
            BoundaryKind::LogDerivative => InnerBoundary::LogDerivative(self.log_derivative_per_nm * units::BOHR_NM),
        };
        let model = match &self.potential {
            PotentialInput::C3KhzNm3(c3) => PotentialModel::inverse_cube(units::c3_khz_nm3_to_au(*c3), mu, r_in, boundary)?,
            PotentialInput::Table(path) => {
                let table = PotentialTable::read(path)?;
                let rs = table.stitch_radius();
                let c3 = -table.outer_value() * rs.powi(3);
                PotentialModel::inverse_cube(c3, mu, r_in, boundary)?.with_table(table)?
            }
        };
        let model = model.with_top_label(self.top_label);
        match self.anchor {
            Some((v, khz)) => calibrate_boundary(&model, (v, units::khz_to_hartree(khz)), &self.grid),
            None => Ok(model),
        }
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        Self::sodium()
    }
}
