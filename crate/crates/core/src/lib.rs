//! Collective dynamics of `N` all-to-all coupled qubits under the
//! Lipkin-Meshkov-Glick Hamiltonian, with the coupling modulated by
//! short-term synaptic depression and facilitation driven by the excitation
//! level of the population.
//!
//! The fast path works in the symmetric Dicke sector (dimension `N + 1`);
//! [`oracle`] repeats the same dynamics in the full `2^N` space for checking.

pub mod analysis;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod hamiltonian;
pub mod observables;
pub mod oracle;
pub mod plasticity;
pub mod presets;
pub mod spin;
pub mod table;

pub use error::{Error, Result};
