//! Exact ground states of electric-field-clocked three-dot molecular QCA
//! circuits.
//!
//! A circuit of `M` three-state cells is modeled in the `3^M` product
//! basis. Applied fields enter each cell's Hamiltonian as a detuning of the
//! active states (in-plane components) and a bias of the null state (the
//! clock, `E_z`); cells interact through exact point-charge electrostatics.

pub mod circuit;
pub mod error;
pub mod hamiltonian;
pub mod icha;
pub mod model;
pub mod observables;
pub mod solver;
pub mod sweep;

pub use error::{QcaError, Result};
