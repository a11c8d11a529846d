//! Physical constants and conversions between atomic units and lab units.
//!
//! Internally every quantity is in Hartree atomic units (ħ = mₑ = a₀ = e = 1).
//! Energies are displayed in one of two explicitly different ways:
//! `E/h` as a frequency (kHz, MHz) or `E/ħ` as an angular frequency (Mrad/s).
//! The two differ by a factor 2π and the helpers below never mix them.

use std::f64::consts::PI;

/// Bohr radius in nm (CODATA 2018).
pub const BOHR_NM: f64 = 0.052_917_721_090_3;
/// Hartree energy divided by h, in Hz.
pub const HARTREE_HZ: f64 = 6.579_683_920_502e15;
/// Atomic unit of time, in s.
pub const AU_TIME_S: f64 = 2.418_884_326_585_7e-17;
/// Unified atomic mass unit in electron masses.
pub const DALTON_ME: f64 = 1_822.888_486_209;
/// Speed of light in atomic units (inverse fine-structure constant).
pub const SPEED_OF_LIGHT_AU: f64 = 137.035_999_084;
/// Boltzmann constant in Hartree per kelvin.
pub const BOLTZMANN_HARTREE_PER_K: f64 = 3.166_811_563e-6;
/// Atomic unit of electric field, in V/m.
pub const AU_FIELD_V_PER_M: f64 = 5.142_206_747_63e11;

/// Mass of a ²³Na atom in u.
pub const SODIUM_MASS_U: f64 = 22.989_77;

pub fn nm_to_bohr(nm: f64) -> f64 {
    nm / BOHR_NM
}

pub fn bohr_to_nm(bohr: f64) -> f64 {
    bohr * BOHR_NM
}

pub fn amu_to_me(u: f64) -> f64 {
    u * DALTON_ME
}

pub fn me_to_amu(me: f64) -> f64 {
    me / DALTON_ME
}

/// Frequency `E/h` in Hz to energy in Hartree.
pub fn hz_to_hartree(hz: f64) -> f64 {
    hz / HARTREE_HZ
}

pub fn hartree_to_hz(e: f64) -> f64 {
    e * HARTREE_HZ
}

pub fn khz_to_hartree(khz: f64) -> f64 {
    hz_to_hartree(khz * 1e3)
}

pub fn hartree_to_khz(e: f64) -> f64 {
    hartree_to_hz(e) * 1e-3
}

pub fn mhz_to_hartree(mhz: f64) -> f64 {
    hz_to_hartree(mhz * 1e6)
}

pub fn hartree_to_mhz(e: f64) -> f64 {
    hartree_to_hz(e) * 1e-6
}

/// Angular frequency in rad/s to atomic units (equal to the energy `ħω` in Hartree).
pub fn rad_per_s_to_au(w: f64) -> f64 {
    w * AU_TIME_S
}

pub fn au_to_rad_per_s(w: f64) -> f64 {
    w / AU_TIME_S
}

/// `E/ħ` in 10⁶ rad/s to energy in Hartree.
pub fn mrad_per_s_to_hartree(w: f64) -> f64 {
    rad_per_s_to_au(w * 1e6)
}

pub fn hartree_to_mrad_per_s(e: f64) -> f64 {
    au_to_rad_per_s(e) * 1e-6
}

/// Ordinary frequency in kHz to an angular frequency in atomic units.
pub fn khz_to_angular_au(khz: f64) -> f64 {
    rad_per_s_to_au(2.0 * PI * khz * 1e3)
}

pub fn angular_au_to_khz(w: f64) -> f64 {
    au_to_rad_per_s(w) / (2.0 * PI) * 1e-3
}

/// Converts an `E/ħ` value in Mrad/s into the `E/h` value in MHz.
pub fn mrad_per_s_to_mhz(w: f64) -> f64 {
    w / (2.0 * PI)
}

pub fn kelvin_to_hartree(t: f64) -> f64 {
    t * BOLTZMANN_HARTREE_PER_K
}

pub fn hartree_to_kelvin(e: f64) -> f64 {
    e / BOLTZMANN_HARTREE_PER_K
}

pub fn v_per_cm_to_au(field: f64) -> f64 {
    field * 100.0 / AU_FIELD_V_PER_M
}

/// `c3/h` given in kHz·nm³ to atomic units (Hartree·a₀³).
pub fn c3_khz_nm3_to_au(c3: f64) -> f64 {
    khz_to_hartree(c3) / BOHR_NM.powi(3)
}

pub fn c3_au_to_khz_nm3(c3: f64) -> f64 {
    hartree_to_khz(c3) * BOHR_NM.powi(3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn display_conventions_differ_by_two_pi() {
        let e = mrad_per_s_to_hartree(0.96);
        let mhz = hartree_to_mhz(e);
        assert!((mhz - 0.96 / (2.0 * PI)).abs() < 1e-12);
        assert!((mrad_per_s_to_mhz(0.96) - mhz).abs() < 1e-12);
    }

    #[test]
    fn hartree_frequency_matches_time_unit() {
        // ħ = 1 a.u.: E_h/ħ = 1/t_au and E_h/h = 1/(2π t_au)
        let derived = 1.0 / (2.0 * PI * AU_TIME_S);
        assert!((derived / HARTREE_HZ - 1.0).abs() < 1e-11);
    }

    #[test]
    fn trap_frequency_in_atomic_units() {
        let w = khz_to_angular_au(100.0);
        assert!((w - 2.0 * PI * 1e5 * AU_TIME_S).abs() < 1e-25);
        assert!((angular_au_to_khz(w) - 100.0).abs() < 1e-10);
    }

    proptest! {
        #[test]
        fn round_trips(x in 1e-9f64..1e9) {
            let rel = |a: f64, b: f64| ((a - b) / b).abs();
            prop_assert!(rel(bohr_to_nm(nm_to_bohr(x)), x) < 1e-12);
            prop_assert!(rel(hartree_to_khz(khz_to_hartree(x)), x) < 1e-12);
            prop_assert!(rel(hartree_to_mhz(mhz_to_hartree(x)), x) < 1e-12);
            prop_assert!(rel(hartree_to_mrad_per_s(mrad_per_s_to_hartree(x)), x) < 1e-12);
            prop_assert!(rel(me_to_amu(amu_to_me(x)), x) < 1e-12);
            prop_assert!(rel(au_to_rad_per_s(rad_per_s_to_au(x)), x) < 1e-12);
            prop_assert!(rel(hartree_to_kelvin(kelvin_to_hartree(x)), x) < 1e-12);
            prop_assert!(rel(c3_au_to_khz_nm3(c3_khz_nm3_to_au(x)), x) < 1e-12);
        }
    }
}
