//! Exact state-vector simulation of fermionic circuits within a fixed
//! particle-number and spin-z sector.
//!
//! A sector with `N` spatial orbitals, `N_alpha` spin-up and `N_beta`
//! spin-down electrons is stored as a `dim_alpha x dim_beta` amplitude
//! matrix indexed by occupation strings (see [`sector`]). Gates act
//! directly on that matrix ([`gates`]); Hamiltonians act as linear
//! operators ([`operators`]); [`trotter`] composes gates into product
//! formulas and [`sampling`] draws configurations.

pub mod apps;
pub mod error;
pub mod gates;
pub mod linalg;
pub mod operators;
pub mod sampling;
pub mod sector;
pub mod state;
pub mod trotter;

pub use error::{Error, Result};
pub use sector::{OccupationString, SectorShape, Spin};
pub use state::StateVector;
