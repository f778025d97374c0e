//! Dense complex linear algebra for the tiny dimensions used here (≤ 16).

mod eigen;
mod matrix;
mod ops;
mod state;

pub use eigen::{hermitian_eig, hermitian_eigenvalues, HermitianEigen, HERMITIAN_TOL};
pub use matrix::{bell_basis_unitary, kron, ComplexMatrix, Pauli, C64, I, ONE, ZERO};
pub use ops::{
    binary_entropy, entropy_bits_of_spectrum, matrix_sqrt_psd, partial_trace,
    partial_trace_matrix, partial_transpose, partial_transpose_matrix, von_neumann_entropy_bits,
};
pub use state::{DensityDocument, DensityMatrix, PureState, PSD_TOL, STATE_HERMITIAN_TOL, STATE_TRACE_TOL};

pub(crate) use ops::matrix_entropy_bits;
pub(crate) use state::check_same_dim;
