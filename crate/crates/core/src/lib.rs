//! Simulation of entanglement generation between superconducting qubits and a
//! single cavity mode under a nonadiabatically switched coupling.
//!
//! The library models `N` two-level qubits coupled to one truncated cavity
//! mode through a square-wave coupling that is switched on and off at a
//! tunable frequency. It provides:
//!
//! - [`hilbert`]: basis bookkeeping for the composite qubits ⊗ cavity space,
//!   tensor embeddings, partial trace / partial transpose, entropies.
//! - [`model`]: Hamiltonians, the switching waveform and dissipation rates.
//! - [`dynamics`]: exact piecewise-constant propagation of the Schrödinger
//!   and Lindblad equations.
//! - [`perturb`]: second-order perturbative closed forms and the generic
//!   order-by-order coefficient recursion, used as independent oracles.
//! - [`entanglement`]: concurrence, mutual information, negativity and the
//!   three-π residual-entanglement average.
//! - [`harness`]: configuration files, experiment presets, parameter sweeps
//!   and CSV emission. This is what the `lambent` CLI drives.
//!
//! Frequencies are angular and carried in rad/ns throughout the library;
//! configuration files accept linear frequencies in GHz (and rates in MHz)
//! and convert on ingestion. Time is in ns.

pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod harness;
pub mod hilbert;
pub mod linalg;
pub mod model;
pub mod perturb;
pub mod random;

pub use error::{Result, SimError};
pub use linalg::{CMatrix, CVector, C64};
