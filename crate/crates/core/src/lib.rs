//! Coherent two-level dynamics under parabolic-class drives with phase-jump
//! (zero-area) couplings, with the independent-crossing and universal
//! closed forms next to an exactly-unitary numerical propagator.

#![allow(clippy::excessive_precision)]

pub mod adiabatic;
pub mod closed_form;
pub mod error;
pub mod experiments;
pub mod gamma;
pub mod models;
pub mod propagate;
pub mod quad;
pub mod su2;

pub use error::{Error, Result};
pub use models::{DriveModel, ParabolicParams};
pub use propagate::{propagate, transition_probability, Projection, Scheme, SimConfig};
pub use su2::{Basis, FieldSample, Mat2, StateVector, Unitary2};
