//! Desk-scale digital twin of quantum-enhanced stimulated Brillouin
//! scattering (SBS) spectroscopy and microscopy.
//!
//! The crate models the full measurement chain: material gain spectra,
//! two-mode squeezed versus coherent probe statistics, the modulated
//! balanced-detection electronics with both instrument emulations
//! (RF spectrum analyzer, lock-in amplifier), raster-scanned imaging of
//! material phantoms, photodamage kinetics, and the spectral fitting
//! tooling that inverts the forward model.

pub mod analyzer;
pub mod detection;
pub mod error;
pub mod lockin;
pub mod materials;
pub mod quantum;
pub mod synth;
pub mod trace;
pub mod units;

pub use error::{Result, SimError};
