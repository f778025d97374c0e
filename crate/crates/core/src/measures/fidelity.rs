use crate::bds::WernerParam;
use crate::error::Result;
use crate::linalg::{check_same_dim, hermitian_eigenvalues, matrix_sqrt_psd, DensityMatrix};

/// Uhlmann fidelity `[Tr √(√A B √A)]²`.
pub fn fidelity(exact: &DensityMatrix, measured: &DensityMatrix) -> Result<f64> {
    check_same_dim(exact, measured)?;
    let s = matrix_sqrt_psd(exact.matrix())?;
    let inner = s.matmul(measured.matrix()).matmul(&s).hermitian_part();
    let eig = hermitian_eigenvalues(&inner)?;
    let floor = 64.0 * f64::EPSILON * eig.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    let root_sum: f64 = eig.into_iter().filter(|&v| v > floor).map(f64::sqrt).sum();
    Ok(root_sum * root_sum)
}

/// Fidelity between `werner(w)` and `¼𝕀⊗𝕀`.
pub fn fidelity_worst_werner(w: WernerParam) -> f64 {
    let w = w.value();
    let s = 1.5 * (1.0 - w).sqrt() + 0.5 * (1.0 + 3.0 * w).sqrt();
    0.25 * s * s
}
