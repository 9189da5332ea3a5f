//! Compilation of second-quantized fermionic Hamiltonians to Pauli-string
//! Hamiltonians on square-lattice qubit layouts.
//!
//! The crate implements six lattice-aware fermion-to-qubit mappings on top of
//! a shared phase-exact Pauli algebra:
//!
//! - linear encoders (S-pattern Jordan-Wigner, Bravyi-Kitaev, parity and
//!   arbitrary labeled forests) in [`linmap`],
//! - auxiliary-qubit stabilizer codes (E-type, square-lattice and sparse
//!   variants, plus the generic computational / Hadamard / anticommuting
//!   flavors) in [`aqcode`],
//! - the Verstraete-Cirac transform as a quantum code in [`vct`],
//! - superfast simulation on the rotated square lattice in [`bksf`].
//!
//! Circuit synthesis for code-space initialization and Pauli propagators
//! lives in [`circuits`], and [`oracle`] provides the brute-force statevector
//! machinery used to verify all of the above at desk scale.

pub mod aqcode;
pub mod bksf;
pub mod circuits;
pub mod fermion;
pub mod gf2;
pub mod lattice;
pub mod linmap;
pub mod oracle;
pub mod pauli;
pub mod vct;

pub mod stats;

pub use pauli::{PauliString, PauliSum};
