//! Photoassociation spectra of atom pairs held in a harmonic trap.
//!
//! The crate solves three kinds of radial problems and couples them:
//!
//! * relative-motion s-wave states of two atoms in an isotropic harmonic trap
//!   with a contact interaction ([`trap`]),
//! * near-threshold vibrational levels of an attractive `-C3/R^3` molecular
//!   potential with a calibrated short-range boundary ([`longrange`]),
//! * energy-normalized s-wave scattering states and Maxwellian energy
//!   ensembles ([`scattering`]),
//!
//! and evaluates Franck-Condon overlaps, Rabi frequencies, stimulated rates and
//! spontaneous linewidths between them ([`coupling`]).
//!
//! Everything is computed in atomic units; [`units`] converts at the edges.

pub mod commands;
pub mod config;
pub mod coupling;
pub mod error;
pub mod grid;
pub mod longrange;
pub mod quadrature;
pub mod scattering;
pub mod specfun;
pub mod table;
pub mod trap;
pub mod units;

pub use error::{Error, Result};
pub use grid::{NormConvention, RadialGrid, RadialWave, Spacing};
