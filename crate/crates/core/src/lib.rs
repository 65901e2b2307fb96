//! Symmetric two-body entanglement witnesses for many-qubit states.

pub mod banded;
#[cfg(feature = "cli")]
pub mod cli;
pub mod error;
pub mod geometry;
pub mod lmg;
pub mod optimizer;
pub mod oracle;
pub mod parallel;
pub mod report;
pub mod states;
pub mod witness;

pub use error::{Result, WitnessError};
pub use states::{
    dicke, dicke_ghz_superposition, ghz, spin_squeezed, BlochConfig, MeasurementSettings, Mode,
    SymmetricState, WitnessParams,
};
