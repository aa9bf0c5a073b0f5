//! Adiabatic edge-state transfer through extended SSH chains.
//!
//! Energies are in units of the intra-cell coupling scale `g0` and times in
//! `1/g0`. [`hardware`] is the exception and works in SI units.

pub mod disorder;
pub mod dynamics;
pub mod edge;
pub mod ensembles;
pub mod error;
pub mod hardware;
pub mod linalg;
pub mod model;
pub mod spectra;
pub mod spectroscopy;
pub mod topology;

pub use error::{Error, Result};
pub use model::{ChainSpec, QuantumState, C64};
