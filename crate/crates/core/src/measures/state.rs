use crate::bds::TVector;
use crate::error::{Error, Result};
use crate::linalg::{kron, partial_trace_matrix, ComplexMatrix, DensityMatrix, Pauli};

/// Two-qubit state with its Pauli expansion coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralTwoQubitState {
    pub rho: DensityMatrix,
    /// `r_i = Tr ρ(σ_i⊗𝕀)`
    pub r_vec: [f64; 3],
    /// `s_j = Tr ρ(𝕀⊗σ_j)`
    pub s_vec: [f64; 3],
    /// `t_ij = Tr ρ(σ_i⊗σ_j)`
    pub t_matrix: [[f64; 3]; 3],
}

pub(crate) fn require_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.n_qubits() != 2 {
        return Err(Error::DimensionMismatch {
            expected: "two-qubit state".into(),
            got: format!("{} qubits", rho.n_qubits()),
        });
    }
    Ok(())
}

impl GeneralTwoQubitState {
    pub fn new(rho: &DensityMatrix) -> Result<Self> {
        require_two_qubits(rho)?;
        let id = Pauli::I.matrix();
        let m = rho.matrix();
        let mut r_vec = [0.0; 3];
        let mut s_vec = [0.0; 3];
        let mut t_matrix = [[0.0; 3]; 3];
        for i in 0..3 {
            let si = Pauli::XYZ[i].matrix();
            r_vec[i] = m.trace_product(&kron(&si, &id)).re;
            s_vec[i] = m.trace_product(&kron(&id, &si)).re;
            for j in 0..3 {
                t_matrix[i][j] = m.trace_product(&kron(&si, &Pauli::XYZ[j].matrix())).re;
            }
        }
        Ok(Self {
            rho: rho.clone(),
            r_vec,
            s_vec,
            t_matrix,
        })
    }

    /// `¼(𝕀⊗𝕀 + r·σ⊗𝕀 + 𝕀⊗s·σ + Σ t_ij σ_i⊗σ_j)`.
    pub fn reassemble(&self) -> ComplexMatrix {
        crate::tomography::PauliExpectations {
            r: self.r_vec,
            s: self.s_vec,
            t: self.t_matrix,
        }
        .assemble()
    }

    /// Diagonal of `T` when the state is Bell-diagonal within `tol`.
    pub fn bds_t_vector(&self, tol: f64) -> Option<TVector> {
        let marginal = self
            .r_vec
            .iter()
            .chain(&self.s_vec)
            .all(|v| v.abs() <= tol);
        let off = (0..3).all(|i| (0..3).all(|j| i == j || self.t_matrix[i][j].abs() <= tol));
        (marginal && off).then(|| {
            TVector::new(self.t_matrix[0][0], self.t_matrix[1][1], self.t_matrix[2][2])
        })
    }

    /// Eigenvalues of `TᵀT`, descending.
    pub fn t_gram_eigenvalues(&self) -> [f64; 3] {
        let t = &self.t_matrix;
        let mut g = ComplexMatrix::zeros(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                let v: f64 = (0..3).map(|k| t[k][i] * t[k][j]).sum();
                g[(i, j)] = v.into();
            }
        }
        let ev = crate::linalg::hermitian_eigenvalues(&g).expect("symmetric Gram matrix");
        [ev[0].max(0.0), ev[1].max(0.0), ev[2].max(0.0)]
    }

    /// Singular values of `T`; equals `|t_i|` for Bell-diagonal states.
    pub fn t_singular_values(&self) -> [f64; 3] {
        self.t_gram_eigenvalues().map(f64::sqrt)
    }
}

/// Swaps the two qubits.
pub fn swap_qubits(rho: &DensityMatrix) -> Result<DensityMatrix> {
    require_two_qubits(rho)?;
    let swap = ComplexMatrix::from_real_rows(&[
        &[1.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 1.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 1.0],
    ]);
    DensityMatrix::new(rho.matrix().conjugate_by(&swap))
}

pub(crate) fn marginals(rho: &DensityMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let a = partial_trace_matrix(rho.matrix(), &[0]).expect("two-qubit state");
    let b = partial_trace_matrix(rho.matrix(), &[1]).expect("two-qubit state");
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bds::{bds_density, BellProbabilities};

    #[test]
    fn bell_state_coefficients() {
        let rho = bds_density(&BellProbabilities::new(1.0, 0.0, 0.0, 0.0).unwrap());
        let g = GeneralTwoQubitState::new(&rho).unwrap();
        assert_eq!(g.r_vec, [0.0; 3]);
        let t = g.bds_t_vector(1e-12).unwrap();
        assert!((t.t1 - 1.0).abs() < 1e-14 && (t.t2 + 1.0).abs() < 1e-14 && (t.t3 - 1.0).abs() < 1e-14);
        assert!(g.reassemble().max_abs_diff(rho.matrix()) < 1e-14);
    }

    #[test]
    fn swap_exchanges_marginals() {
        let a = ComplexMatrix::diag_real(&[0.9, 0.1]);
        let b = ComplexMatrix::diag_real(&[0.3, 0.7]);
        let rho = DensityMatrix::new(kron(&a, &b)).unwrap();
        let s = swap_qubits(&rho).unwrap();
        assert!(s.matrix().max_abs_diff(&kron(&b, &a)) < 1e-15);
    }
}
