//! Dense linear algebra and open-quantum-system primitives.
//!
//! Everything here is deliberately small-scale: dense complex matrices,
//! Jacobi eigendecomposition, labeled tensor-product spaces, density
//! matrices, Kraus channels, and Pauli transfer matrices. The simulator's
//! registers top out around dimension 512, where simple dense routines are
//! both fast enough and easy to audit.

pub mod channel;
mod eigen;
pub mod matrix;
pub mod ptm;
pub mod space;
pub mod state;

pub use channel::{QuantumChannel, TracePreservation};
pub use matrix::ComplexMatrix;
pub use ptm::{from_pauli_vector, pauli_label, pauli_string, pauli_vector, PauliTransferMatrix};
pub use space::HilbertSpace;
pub use state::{state_fidelity, DensityMatrix, Normalization};
