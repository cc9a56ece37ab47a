//! Simulator for collective-spin Ramsey interferometry in the Dicke basis.
//!
//! The crate evolves spin-J ensembles (J = N/2) under piecewise-constant
//! pulse schedules, supports entangled probe states (spin cat, GHZ),
//! interaction-based readouts, collective-dephasing master-equation
//! dynamics, ac-field sensing by dc modulation, and dynamical-decoupling
//! lock-in sequences. Every closed-form signal carried by the analytics
//! module is cross-validated against full matrix evolution.

pub mod analytics;
pub mod error;
pub mod evolution;
pub mod protocols;
pub mod spin;
pub mod states;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
