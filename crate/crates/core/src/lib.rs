//! Numerical toolkit for comparing Pauli-channel noise models against the
//! exact channels they approximate.
//!
//! The crate covers the full pipeline on dense complex matrices:
//!
//! - [`numerics`]: matrix products, Kronecker products, matrix exponentials,
//!   linear solves, Hermitian eigendecomposition.
//! - [`pauli`]: n-qubit Pauli strings and the two operator bases used for
//!   transfer and Choi matrices.
//! - [`channel`]: Kraus channels with validation, application, composition,
//!   tensor products, transfer matrices, and the process (χ) matrix.
//! - [`twirl`]: Pauli twirling of arbitrary channels and conversion of a
//!   Pauli channel into first-order master-equation rates.
//! - [`lindblad`]: extraction of the time-local generator of a channel
//!   family, its Choi matrix, and its Hamiltonian/jump decomposition.
//! - [`backaction`]: non-Hermitian no-jump evolution, the iterated Pauli
//!   map with its fixed point, and divergence-time scans.
//! - [`ctqec`]: continuous-time error correction on the three-qubit
//!   bit-flip code under exact versus Pauli-approximated noise generators.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats, and the command
//! line live in the companion CLI crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod backaction;
pub mod channel;
pub mod ctqec;
mod error;
pub mod lindblad;
pub mod numerics;
pub mod pauli;
pub mod random;
pub mod twirl;

pub use error::{Error, Result};

/// Default entrywise tolerance for Hermiticity, positivity, and
/// trace-preservation validation.
pub const VALIDATION_TOL: f64 = 1e-10;

/// Condition-number cap above which linear solves refuse to proceed.
pub const CONDITION_CAP: f64 = 1e12;

/// Largest qubit count supported by the dense channel representations.
pub const MAX_QUBITS: usize = 5;

/// Largest qubit count for which a 4^n x 4^n process (χ) matrix is built.
pub const MAX_CHI_QUBITS: usize = 3;
