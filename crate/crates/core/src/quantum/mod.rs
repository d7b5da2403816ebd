//! Exact small-system quantum state engine.

mod density;
mod labels;
mod state;

pub use density::{density_from_pure, DensityMatrix, EIGEN_TOL};
pub use labels::{BellOutcome, GhzLabel, LabelBits, PauliOp};
pub(crate) use state::sample_index;
pub use state::{
    apply_local, bell_measure, bell_probabilities, bell_triple, make_bell, make_ghz, tensor,
    StateVector, MAX_QUBITS,
};

/// Qubits held by each party for a pair of triplets `(1,2,3) ⊗ (4,5,6)`:
/// particle `k` maps to index `k - 1`.
pub const ALICE_PAIR: (usize, usize) = (0, 3);
pub const BOB_PAIR: (usize, usize) = (1, 4);
pub const CHARLIE_PAIR: (usize, usize) = (2, 5);
