//! Dense complex matrix algebra and the operator bases used by the
//! witnesses: Pauli products, the phase gate, SU(3) and generalized
//! Gell-Mann matrices, and the qudit substitution for the third party.

mod basis;
mod eigen;
mod matrix;
mod pauli_sum;

pub use basis::{
    gellmann_su3, pauli, pauli_op, phase_gate, qudit_substitute, unit_matrix, GellMannBasis, QuditEmbedding,
};
pub use eigen::{
    hermitian_eigen, hermitian_eigenvalues, min_eigenvalue, singular_values, HermitianEigen, HERMITICITY_TOL,
};
pub use matrix::{kron, partial_transpose, trace_product, ComplexMatrix, Parties, TripartiteDims};
pub use pauli_sum::{parse_triple, triple_expectation, triple_index, PauliSum, PauliTerm, Triple};
