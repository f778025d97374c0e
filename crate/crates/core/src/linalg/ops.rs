//! Subsystem operations and spectral matrix functions.

use super::eigen::{hermitian_eig, HermitianEigen};
use super::matrix::ComplexMatrix;
use super::state::{qubit_count, DensityMatrix, PSD_TOL};
use crate::error::{Error, Result};

#[inline]
fn bit(index: usize, qubit: usize, n: usize) -> usize {
    (index >> (n - 1 - qubit)) & 1
}

/// Partial trace of an arbitrary (possibly unnormalized) operator on `n` qubits,
/// keeping `keep` in the given order (first entry becomes most significant).
pub fn partial_trace_matrix(m: &ComplexMatrix, keep: &[usize]) -> Result<ComplexMatrix> {
    let n = qubit_count(m.rows())?;
    validate_keep(keep, n)?;
    let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let sub = |index: usize, qubits: &[usize]| {
        qubits
            .iter()
            .fold(0usize, |acc, &q| (acc << 1) | bit(index, q, n))
    };
    let dk = 1 << keep.len();
    let mut out = ComplexMatrix::zeros(dk, dk);
    let d = m.rows();
    for i in 0..d {
        let ti = sub(i, &traced);
        let ki = sub(i, keep);
        for j in 0..d {
            if sub(j, &traced) == ti {
                out[(ki, sub(j, keep))] += m[(i, j)];
            }
        }
    }
    Ok(out)
}

fn validate_keep(keep: &[usize], n: usize) -> Result<()> {
    if keep.is_empty() || keep.len() >= n {
        return Err(Error::BadSubsystem(format!(
            "keep set {keep:?} must be a nonempty strict subset of {n} qubits"
        )));
    }
    for (i, &q) in keep.iter().enumerate() {
        if q >= n {
            return Err(Error::BadSubsystem(format!("qubit {q} out of range for {n} qubits")));
        }
        if keep[..i].contains(&q) {
            return Err(Error::BadSubsystem(format!("qubit {q} listed twice")));
        }
    }
    Ok(())
}

pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let reduced = partial_trace_matrix(rho.matrix(), keep)?;
    Ok(DensityMatrix::from_matrix_unchecked(reduced))
}

/// Transposes the factor belonging to `qubit`, leaving the others untouched.
pub fn partial_transpose_matrix(m: &ComplexMatrix, qubit: usize) -> Result<ComplexMatrix> {
    let n = qubit_count(m.rows())?;
    if qubit >= n {
        return Err(Error::BadSubsystem(format!("qubit {qubit} out of range for {n} qubits")));
    }
    let mask = 1 << (n - 1 - qubit);
    let d = m.rows();
    let mut out = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            // swap the `qubit` bit between row and column index
            let (bi, bj) = (i & mask, j & mask);
            let ni = (i & !mask) | bj;
            let nj = (j & !mask) | bi;
            out[(ni, nj)] = m[(i, j)];
        }
    }
    Ok(out)
}

/// Partial transpose of a two-qubit state on `subsystem` (0 = A, 1 = B).
pub fn partial_transpose(rho: &DensityMatrix, subsystem: usize) -> Result<ComplexMatrix> {
    if rho.n_qubits() != 2 {
        return Err(Error::DimensionMismatch {
            expected: "two-qubit state".into(),
            got: format!("{} qubits", rho.n_qubits()),
        });
    }
    partial_transpose_matrix(rho.matrix(), subsystem)
}

/// Eigenvalues clamped to zero if they sit in `[-PSD_TOL, 0)`; error below that.
pub(crate) fn psd_eigen(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let mut eig = hermitian_eig(m)?;
    let min = eig.min_value();
    if min < -PSD_TOL {
        return Err(Error::NotPositive { min });
    }
    for v in &mut eig.values {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    Ok(eig)
}

/// Principal square root of a Hermitian PSD matrix.
pub fn matrix_sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(psd_eigen(m)?.map_values(f64::sqrt))
}

/// Shannon entropy in bits of a spectrum; non-positive entries contribute 0.
pub fn entropy_bits_of_spectrum(values: &[f64]) -> f64 {
    values
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy_bits(rho: &DensityMatrix) -> f64 {
    matrix_entropy_bits(rho.matrix())
}

/// Entropy of a Hermitian matrix treated as a state; used on intermediate
/// operators that are valid states by construction.
pub(crate) fn matrix_entropy_bits(m: &ComplexMatrix) -> f64 {
    let eig = hermitian_eig(m).expect("state matrices are Hermitian");
    entropy_bits_of_spectrum(&eig.values)
}

/// Binary entropy `h₂(x)` in bits.
pub fn binary_entropy(x: f64) -> Result<f64> {
    const SLACK: f64 = 1e-12;
    if !(-SLACK..=1.0 + SLACK).contains(&x) || x.is_nan() {
        return Err(Error::Domain {
            value: x,
            domain: "[0, 1]",
        });
    }
    let x = x.clamp(0.0, 1.0);
    Ok(entropy_bits_of_spectrum(&[x, 1.0 - x]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{kron, C64};

    #[test]
    fn partial_trace_of_product() {
        let a = ComplexMatrix::from_real_rows(&[&[0.7, 0.2], &[0.2, 0.3]]);
        let b = ComplexMatrix::from_real_rows(&[&[0.4, 0.0], &[0.0, 0.6]]);
        let rho = DensityMatrix::new(kron(&a, &b)).unwrap();
        let ra = partial_trace(&rho, &[0]).unwrap();
        let rb = partial_trace(&rho, &[1]).unwrap();
        assert!(ra.matrix().max_abs_diff(&a) < 1e-15);
        assert!(rb.matrix().max_abs_diff(&b) < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_bad_keep() {
        let rho = DensityMatrix::maximally_mixed(2);
        assert!(matches!(partial_trace(&rho, &[]), Err(Error::BadSubsystem(_))));
        assert!(matches!(partial_trace(&rho, &[0, 1]), Err(Error::BadSubsystem(_))));
        assert!(matches!(partial_trace(&rho, &[2]), Err(Error::BadSubsystem(_))));
        let rho3 = DensityMatrix::maximally_mixed(3);
        assert!(matches!(partial_trace(&rho3, &[1, 1]), Err(Error::BadSubsystem(_))));
    }

    #[test]
    fn partial_trace_respects_keep_order() {
        let a = ComplexMatrix::diag_real(&[1.0, 0.0]);
        let b = ComplexMatrix::diag_real(&[0.0, 1.0]);
        let c = ComplexMatrix::diag_real(&[0.5, 0.5]);
        let m = kron(&kron(&a, &b), &c);
        let swapped = partial_trace_matrix(&m, &[1, 0]).unwrap();
        assert!(swapped.max_abs_diff(&kron(&b, &a)) < 1e-15);
    }

    #[test]
    fn sqrt_examples() {
        let id = ComplexMatrix::identity(4);
        assert!(matrix_sqrt_psd(&id).unwrap().max_abs_diff(&id) < 1e-14);
        let d = ComplexMatrix::diag_real(&[4.0, 1.0, 0.0, 0.0]);
        let s = matrix_sqrt_psd(&d).unwrap();
        assert!(s.max_abs_diff(&ComplexMatrix::diag_real(&[2.0, 1.0, 0.0, 0.0])) < 1e-14);
        let q = id.scale_real(0.25);
        assert!(matrix_sqrt_psd(&q).unwrap().max_abs_diff(&id.scale_real(0.5)) < 1e-14);
    }

    #[test]
    fn sqrt_clamps_tiny_negative_and_rejects_large() {
        let tiny = ComplexMatrix::diag_real(&[1.0, -5e-10]);
        assert!(matrix_sqrt_psd(&tiny).is_ok());
        let bad = ComplexMatrix::diag_real(&[1.0, -1e-6]);
        assert!(matches!(matrix_sqrt_psd(&bad), Err(Error::NotPositive { .. })));
        let nh = ComplexMatrix::from_rows(&[
            &[C64::new(1.0, 0.0), C64::new(0.0, 1.0)],
            &[C64::new(0.0, 1.0), C64::new(1.0, 0.0)],
        ]);
        assert!(matches!(matrix_sqrt_psd(&nh), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn binary_entropy_values() {
        assert!((binary_entropy(0.5).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        // −¼log₂¼ − ¾log₂¾ evaluated directly
        let direct = -0.25 * 0.25f64.log2() - 0.75 * 0.75f64.log2();
        assert!((binary_entropy(0.25).unwrap() - direct).abs() < 1e-15);
        assert!((binary_entropy(0.25).unwrap() - 0.811_278_124_459_132_8).abs() < 1e-12);
        assert!(binary_entropy(1.1).is_err());
        assert!(binary_entropy(-0.01).is_err());
        assert!(binary_entropy(1.0 + 1e-13).is_ok());
    }

    #[test]
    fn entropy_examples() {
        assert!(von_neumann_entropy_bits(&DensityMatrix::maximally_mixed(2)) - 2.0 < 1e-14);
        let pure = crate::linalg::PureState::basis(2, 3).to_density();
        assert_eq!(von_neumann_entropy_bits(&pure), 0.0);
    }
}
