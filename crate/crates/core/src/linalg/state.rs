use serde::{Deserialize, Serialize};

use super::eigen::hermitian_eig;
use super::matrix::{ComplexMatrix, C64};
use crate::error::{Error, Result};

pub const STATE_HERMITIAN_TOL: f64 = 1e-10;
pub const STATE_TRACE_TOL: f64 = 1e-10;
/// Smallest eigenvalue tolerated before a matrix counts as non-PSD.
pub const PSD_TOL: f64 = 1e-9;

/// Normalized state vector over `n_qubits`, qubit 0 most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let n_qubits = qubit_count(amplitudes.len())?;
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState(format!("squared norm {norm} is not 1")));
        }
        Ok(Self { n_qubits, amplitudes })
    }

    /// Normalizes the input first; fails on the zero vector.
    pub fn normalized(mut amplitudes: Vec<C64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Self::new(amplitudes)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut amplitudes = vec![C64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[index] = C64::new(1.0, 0.0);
        Self { n_qubits, amplitudes }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix {
            n_qubits: self.n_qubits,
            matrix: self.projector(),
        }
    }

    pub fn apply(&self, u: &ComplexMatrix) -> PureState {
        PureState {
            n_qubits: self.n_qubits,
            amplitudes: u.matvec(&self.amplitudes),
        }
    }
}

/// Hermitian, unit-trace, positive semidefinite matrix on `n_qubits`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DensityDocument", into = "DensityDocument")]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, trace and PSD before accepting `matrix`.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: "square matrix".into(),
                got: format!("{}x{}", matrix.rows(), matrix.cols()),
            });
        }
        let n_qubits = qubit_count(matrix.rows())?;
        let deviation = matrix.hermiticity_defect();
        if deviation > STATE_HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STATE_TRACE_TOL || tr.im.abs() > STATE_TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let min = hermitian_eig(&matrix)?.min_value();
        if min < -PSD_TOL {
            return Err(Error::NotPositive { min });
        }
        Ok(Self { n_qubits, matrix })
    }

    /// Wraps a matrix known to be a valid state by construction.
    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        let n_qubits = qubit_count(matrix.rows()).expect("power-of-two dimension");
        Self { n_qubits, matrix }
    }

    /// `matrix / Tr(matrix)` for an unnormalized positive operator.
    pub fn normalized(matrix: ComplexMatrix) -> Result<Self> {
        let tr = matrix.trace().re;
        if tr <= 0.0 {
            return Err(Error::InvalidState(format!("non-positive trace {tr}")));
        }
        Self::new(matrix.scale_real(1.0 / tr).hermitian_part())
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let d = 1 << n_qubits;
        Self {
            n_qubits,
            matrix: ComplexMatrix::identity(d).scale_real(1.0 / d as f64),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Trace distance `½‖ρ − σ‖₁`.
    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        check_same_dim(self, other)?;
        let diff = &self.matrix - &other.matrix;
        let ev = hermitian_eig(&diff.hermitian_part())?;
        Ok(0.5 * ev.values.iter().map(|x| x.abs()).sum::<f64>())
    }
}

pub(crate) fn check_same_dim(a: &DensityMatrix, b: &DensityMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: format!("{}x{}", a.dim(), a.dim()),
            got: format!("{}x{}", b.dim(), b.dim()),
        });
    }
    Ok(())
}

/// JSON form of a density matrix; `imag` may be omitted for real matrices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityDocument {
    pub real: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub imag: Option<Vec<Vec<f64>>>,
}

impl TryFrom<DensityDocument> for DensityMatrix {
    type Error = Error;

    fn try_from(doc: DensityDocument) -> Result<Self> {
        let n = doc.real.len();
        let imag = doc.imag.unwrap_or_else(|| vec![vec![0.0; n]; n]);
        if imag.len() != n || doc.real.iter().chain(&imag).any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: format!("{n}x{n} real and imaginary parts"),
                got: "ragged or mismatched rows".into(),
            });
        }
        let data = doc
            .real
            .iter()
            .zip(&imag)
            .flat_map(|(re, im)| re.iter().zip(im).map(|(&a, &b)| C64::new(a, b)))
            .collect();
        DensityMatrix::new(ComplexMatrix::from_vec(n, n, data)?)
    }
}

impl From<DensityMatrix> for DensityDocument {
    fn from(rho: DensityMatrix) -> Self {
        let m = rho.matrix();
        let part = |f: fn(C64) -> f64| {
            (0..m.rows())
                .map(|i| (0..m.cols()).map(|j| f(m[(i, j)])).collect())
                .collect::<Vec<Vec<f64>>>()
        };
        let imag = part(|z| z.im);
        Self {
            real: part(|z| z.re),
            imag: imag.iter().flatten().any(|&v| v != 0.0).then_some(imag),
        }
    }
}

pub(crate) fn qubit_count(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::DimensionMismatch {
            expected: "power-of-two dimension ≥ 2".into(),
            got: dim.to_string(),
        });
    }
    Ok(dim.trailing_zeros() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_trace() {
        let m = ComplexMatrix::diag_real(&[0.5, 0.6]);
        assert!(matches!(DensityMatrix::new(m), Err(Error::InvalidState(_))));
    }

    #[test]
    fn rejects_negative_eigenvalue() {
        let m = ComplexMatrix::diag_real(&[1.1, -0.1]);
        assert!(matches!(DensityMatrix::new(m), Err(Error::NotPositive { .. })));
    }

    #[test]
    fn rejects_non_power_of_two() {
        let m = ComplexMatrix::identity(3).scale_real(1.0 / 3.0);
        assert!(DensityMatrix::new(m).is_err());
    }

    #[test]
    fn pure_state_norm_check() {
        let half = C64::new(0.5, 0.0);
        assert!(PureState::new(vec![half, half]).is_err());
        assert!(PureState::normalized(vec![half, half]).is_ok());
    }

    #[test]
    fn trace_distance_of_orthogonal_pure_states() {
        let a = PureState::basis(1, 0).to_density();
        let b = PureState::basis(1, 1).to_density();
        assert!((a.trace_distance(&b).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn json_roundtrip_validates() {
        let psi = PureState::normalized(vec![C64::new(1.0, 0.0), C64::new(0.0, 1.0)]).unwrap();
        let rho = psi.to_density();
        let text = serde_json::to_string(&rho).unwrap();
        assert!(text.contains("imag"));
        let back: DensityMatrix = serde_json::from_str(&text).unwrap();
        assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-15);
        let real: DensityMatrix = serde_json::from_str(r#"{"real": [[0.5, 0], [0, 0.5]]}"#).unwrap();
        assert_eq!(real, DensityMatrix::maximally_mixed(1));
        for bad in [
            r#"{"real": [[0.7, 0], [0, 0.7]]}"#,
            r#"{"real": [[1.5, 0], [0, -0.5]]}"#,
            r#"{"real": [[0.5, 0.1], [0, 0.5]]}"#,
            r#"{"real": [[0.5, 0], [0.5]]}"#,
            r#"{"real": [[1.0]], "imag": [[0.0]]}"#,
        ] {
            assert!(serde_json::from_str::<DensityMatrix>(bad).is_err(), "{bad}");
        }
    }
}
