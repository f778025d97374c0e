//! Concurrence, entanglement of formation, CHSH and 3-steering.

use std::f64::consts::{PI, SQRT_2};

use super::optimize::golden_section_max;
use super::state::{require_two_qubits, GeneralTwoQubitState};
use crate::bds::TVector;
use crate::error::Result;
use crate::linalg::{binary_entropy, hermitian_eigenvalues, kron, matrix_sqrt_psd, DensityMatrix, Pauli};

/// Wootters concurrence.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubits(rho)?;
    let yy = kron(&Pauli::Y.matrix(), &Pauli::Y.matrix());
    let tilde = rho.matrix().conj().conjugate_by(&yy);
    let sqrt_rho = matrix_sqrt_psd(rho.matrix())?;
    let r = sqrt_rho.matmul(&tilde).matmul(&sqrt_rho).hermitian_part();
    let mu: Vec<f64> = hermitian_eigenvalues(&r)?
        .into_iter()
        .map(|v| v.max(0.0).sqrt())
        .collect();
    Ok((mu[0] - mu[1] - mu[2] - mu[3]).clamp(0.0, 1.0))
}

/// `h₂(½(1 + √(1 − C²)))` in bits.
pub fn eof_from_concurrence(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    binary_entropy(0.5 * (1.0 + (1.0 - c * c).max(0.0).sqrt())).expect("argument in [½, 1]")
}

pub fn entanglement_of_formation(rho: &DensityMatrix) -> Result<f64> {
    Ok(eof_from_concurrence(concurrence(rho)?))
}

/// Concurrence of a Bell-diagonal state: `max(0, 2p_max − 1)`.
pub fn concurrence_bds(t: TVector) -> Result<f64> {
    t.check_in_tetrahedron()?;
    let pmax = t.raw_probabilities().into_iter().fold(f64::MIN, f64::max);
    Ok((2.0 * pmax - 1.0).clamp(0.0, 1.0))
}

/// `L = max(0, (2√M − 2)/(2√2 − 2))`.
pub fn nonlocality_from_m(m: f64) -> f64 {
    ((2.0 * m.max(0.0).sqrt() - 2.0) / (2.0 * SQRT_2 - 2.0)).max(0.0)
}

/// `(M, L)` with `M` the sum of the two largest eigenvalues of `TᵀT`.
pub fn chsh_quantities(rho: &DensityMatrix) -> Result<(f64, f64)> {
    let g = GeneralTwoQubitState::new(rho)?;
    let ev = g.t_gram_eigenvalues();
    let m = ev[0] + ev[1];
    Ok((m, nonlocality_from_m(m)))
}

/// Closed form for Bell-diagonal states: `M = ‖t‖² − t_min²`, `t_min = min |t_i|`.
pub fn chsh_quantities_bds(t: TVector) -> Result<(f64, f64)> {
    t.check_in_tetrahedron()?;
    let tmin = t.as_array().iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min);
    let m = t.norm().powi(2) - tmin * tmin;
    Ok((m, nonlocality_from_m(m)))
}

fn unit(theta: f64, phi: f64) -> [f64; 3] {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Maximal CHSH expectation `max Tr(ρ ℬ)` searched over measurement directions.
///
/// For fixed `b, b′` the optimal `a, a′` are aligned with `T(b ± b′)`, leaving
/// a four-angle search: a `g × 2g` grid per direction, then coordinate refinement.
pub fn chsh_bruteforce(rho: &DensityMatrix, grid_density: usize) -> Result<f64> {
    let g = GeneralTwoQubitState::new(rho)?;
    let t = g.t_matrix;
    let value = |x: &[f64; 4]| {
        let b = unit(x[0], x[1]);
        let bp = unit(x[2], x[3]);
        let apply = |v: [f64; 3]| -> [f64; 3] {
            std::array::from_fn(|i| (0..3).map(|j| t[i][j] * v[j]).sum())
        };
        let plus = apply(std::array::from_fn(|k| b[k] + bp[k]));
        let minus = apply(std::array::from_fn(|k| b[k] - bp[k]));
        norm3(plus) + norm3(minus)
    };
    let n = grid_density.max(2);
    let angles: Vec<(f64, f64)> = (0..n)
        .flat_map(|i| {
            (0..2 * n).map(move |j| (PI * (i as f64 + 0.5) / n as f64, PI * j as f64 / n as f64))
        })
        .collect();
    let mut best = (f64::MIN, [0.0; 4]);
    for &(t1, p1) in &angles {
        for &(t2, p2) in &angles {
            let x = [t1, p1, t2, p2];
            let v = value(&x);
            if v > best.0 {
                best = (v, x);
            }
        }
    }
    let mut x = best.1;
    let mut half_width = PI / n as f64;
    for _ in 0..8 {
        for k in 0..4 {
            let centre = x[k];
            let (arg, _) = golden_section_max(
                |a| {
                    let mut y = x;
                    y[k] = a;
                    value(&y)
                },
                centre - half_width,
                centre + half_width,
                40,
            );
            let mut y = x;
            y[k] = arg;
            if value(&y) >= value(&x) {
                x = y;
            }
        }
        half_width *= 0.5;
    }
    Ok(value(&x))
}

/// `max(0, (‖t‖ − 1)/(√3 − 1))`.
pub fn steering3(t: TVector) -> Result<f64> {
    t.check_in_tetrahedron()?;
    Ok(steering3_from_norm(t.norm()))
}

pub(crate) fn steering3_from_norm(norm: f64) -> f64 {
    ((norm - 1.0) / (3f64.sqrt() - 1.0)).max(0.0)
}

/// 3-steering from the singular values of `T`, which coincide with `|t_i|`
/// for Bell-diagonal states.
pub fn steering3_general(rho: &DensityMatrix) -> Result<f64> {
    let g = GeneralTwoQubitState::new(rho)?;
    let sv = g.t_singular_values();
    Ok(steering3_from_norm(norm3(sv)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bds::{bds_density, werner_density, BellProbabilities, WernerParam};
    use crate::linalg::ComplexMatrix;

    #[test]
    fn concurrence_examples() {
        for k in 0..4 {
            let mut p = [0.0; 4];
            p[k] = 1.0;
            let rho = bds_density(&BellProbabilities::from_array(p).unwrap());
            assert!((concurrence(&rho).unwrap() - 1.0).abs() < 1e-9);
        }
        let a = ComplexMatrix::diag_real(&[0.8, 0.2]);
        let prod = DensityMatrix::new(kron(&a, &a)).unwrap();
        assert!(concurrence(&prod).unwrap() < 1e-9);
        for w in [0.0, 0.2, 0.5, 0.9] {
            let rho = werner_density(WernerParam::new(w).unwrap());
            let expected = ((3.0 * w - 1.0) / 2.0).max(0.0);
            assert!((concurrence(&rho).unwrap() - expected).abs() < 1e-9, "w={w}");
        }
    }

    #[test]
    fn eof_examples() {
        assert!((eof_from_concurrence(1.0) - 1.0).abs() < 1e-15);
        assert_eq!(eof_from_concurrence(0.0), 0.0);
        let rho = werner_density(WernerParam::new(1.0 / 3.0).unwrap());
        assert!(entanglement_of_formation(&rho).unwrap() < 1e-9);
    }

    #[test]
    fn chsh_examples() {
        let bell = bds_density(&BellProbabilities::new(1.0, 0.0, 0.0, 0.0).unwrap());
        let (m, l) = chsh_quantities(&bell).unwrap();
        assert!((m - 2.0).abs() < 1e-12 && (l - 1.0).abs() < 1e-12);
        assert!((chsh_bruteforce(&bell, 24).unwrap() - 2.0 * SQRT_2).abs() < 0.01);
        let mixed = DensityMatrix::maximally_mixed(2);
        assert_eq!(chsh_quantities(&mixed).unwrap(), (0.0, 0.0));
        assert!(chsh_bruteforce(&mixed, 24).unwrap().abs() < 1e-9);
        let w = werner_density(WernerParam::new(1.0 / SQRT_2).unwrap());
        assert!(chsh_quantities(&w).unwrap().1 < 1e-9);
    }

    #[test]
    fn steering_examples() {
        assert_eq!(steering3(TVector::new(0.0, 0.0, 0.0)).unwrap(), 0.0);
        assert!((steering3(TVector::new(1.0, -1.0, 1.0)).unwrap() - 1.0).abs() < 1e-12);
        let c = -1.0 / 3f64.sqrt();
        assert!(steering3(TVector::new(c, c, c)).unwrap() < 1e-12);
        assert!(steering3(TVector::new(1.0, 1.0, 1.0)).is_err());
    }
}
