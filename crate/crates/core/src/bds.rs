//! Bell-diagonal and Werner states: the probability and correlation-vector
//! charts, conversions between them, and the separability geometry.
//!
//! Computational basis ordering is `|q_a q_b⟩` with qubit `a` the most
//! significant factor throughout the crate.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigenvalues, kron, partial_transpose, ComplexMatrix, DensityMatrix, Pauli,
    PureState, C64,
};

/// Boundary slack for tetrahedron membership, so the Bell corners are inside.
pub const MEMBERSHIP_TOL: f64 = 1e-9;
const PROB_SLACK: f64 = 1e-12;
const PROB_SUM_TOL: f64 = 1e-9;

/// Mixing weights `p_jk` of the four Bell states.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BellProbabilities {
    pub p00: f64,
    pub p01: f64,
    pub p10: f64,
    pub p11: f64,
}

impl BellProbabilities {
    /// Entries within `1e-12` of `[0, 1]` are clamped; the sum must be 1 within `1e-9`.
    pub fn new(p00: f64, p01: f64, p10: f64, p11: f64) -> Result<Self> {
        let mut p = [p00, p01, p10, p11];
        for x in &mut p {
            if x.is_nan() || *x < -PROB_SLACK || *x > 1.0 + PROB_SLACK {
                return Err(Error::Domain {
                    value: *x,
                    domain: "probability [0, 1]",
                });
            }
            *x = x.clamp(0.0, 1.0);
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::Domain {
                value: sum,
                domain: "probability sum 1",
            });
        }
        Ok(Self::from_array_unchecked(p))
    }

    pub fn from_array(p: [f64; 4]) -> Result<Self> {
        Self::new(p[0], p[1], p[2], p[3])
    }

    fn from_array_unchecked(p: [f64; 4]) -> Self {
        Self {
            p00: p[0],
            p01: p[1],
            p10: p[2],
            p11: p[3],
        }
    }

    /// `[p00, p01, p10, p11]`, i.e. indexed by `2j + k`.
    pub fn as_array(&self) -> [f64; 4] {
        [self.p00, self.p01, self.p10, self.p11]
    }

    pub fn uniform() -> Self {
        Self::from_array_unchecked([0.25; 4])
    }

    /// Square-root amplitudes `√p_jk`, indexed by `2j + k`.
    pub fn amplitudes(&self) -> [f64; 4] {
        self.as_array().map(f64::sqrt)
    }
}

/// Diagonal correlation coordinates `(t₁, t₂, t₃)` of a Bell-diagonal state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TVector {
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
}

impl TVector {
    pub const fn new(t1: f64, t2: f64, t3: f64) -> Self {
        Self { t1, t2, t3 }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.t1, self.t2, self.t3]
    }

    pub fn norm(&self) -> f64 {
        self.as_array().iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// The four Bell weights this point corresponds to, without range checks.
    pub fn raw_probabilities(&self) -> [f64; 4] {
        let TVector { t1, t2, t3 } = *self;
        [
            (1.0 + t1 - t2 + t3) / 4.0,
            (1.0 + t1 + t2 - t3) / 4.0,
            (1.0 - t1 + t2 + t3) / 4.0,
            (1.0 - t1 - t2 - t3) / 4.0,
        ]
    }

    pub fn in_tetrahedron(&self) -> bool {
        self.raw_probabilities().iter().all(|&p| p >= -MEMBERSHIP_TOL)
    }

    pub(crate) fn check_in_tetrahedron(&self) -> Result<()> {
        if self.in_tetrahedron() {
            Ok(())
        } else {
            Err(Error::OutsideTetrahedron(self.t1, self.t2, self.t3))
        }
    }
}

/// Werner mixing parameter `w ∈ [0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct WernerParam(f64);

impl WernerParam {
    pub fn new(w: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::Domain {
                value: w,
                domain: "Werner parameter [0, 1]",
            });
        }
        Ok(Self(w))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn t_vector(self) -> TVector {
        TVector::new(-self.0, -self.0, -self.0)
    }

    pub fn probabilities(self) -> BellProbabilities {
        t_to_probs(self.t_vector()).expect("Werner line lies inside the tetrahedron")
    }
}

pub fn probs_to_t(p: &BellProbabilities) -> TVector {
    let BellProbabilities { p00, p01, p10, p11 } = *p;
    TVector {
        t1: p00 + p01 - p10 - p11,
        t2: -p00 + p01 + p10 - p11,
        t3: p00 - p01 + p10 - p11,
    }
}

pub fn t_to_probs(t: TVector) -> Result<BellProbabilities> {
    t.check_in_tetrahedron()?;
    let p = t.raw_probabilities().map(|x| x.max(0.0));
    Ok(BellProbabilities::from_array_unchecked(p))
}

/// Bell state `|β_jk⟩`.
pub fn bell_state(j: u8, k: u8) -> Result<PureState> {
    let s = FRAC_1_SQRT_2;
    let z = 0.0;
    let amps = match (j, k) {
        (0, 0) => [s, z, z, s],
        (0, 1) => [z, s, s, z],
        (1, 0) => [s, z, z, -s],
        (1, 1) => [z, s, -s, z],
        _ => {
            return Err(Error::Domain {
                value: f64::from(j.max(k)),
                domain: "bit {0, 1}",
            })
        }
    };
    PureState::new(amps.iter().map(|&a| C64::new(a, 0.0)).collect())
}

pub fn bell_states() -> [PureState; 4] {
    [(0, 0), (0, 1), (1, 0), (1, 1)].map(|(j, k)| bell_state(j, k).expect("valid bits"))
}

/// `Σ p_jk |β_jk⟩⟨β_jk|`.
pub fn bds_density(p: &BellProbabilities) -> DensityMatrix {
    let mut m = ComplexMatrix::zeros(4, 4);
    for (weight, beta) in p.as_array().iter().zip(bell_states().iter()) {
        if *weight != 0.0 {
            m += &beta.projector().scale_real(*weight);
        }
    }
    DensityMatrix::from_matrix_unchecked(m)
}

/// `¼(𝕀⊗𝕀 + Σ t_i σ_i⊗σ_i)` built directly from the Pauli expansion.
pub fn bds_density_from_t(t: TVector) -> Result<DensityMatrix> {
    t.check_in_tetrahedron()?;
    let mut m = ComplexMatrix::identity(4);
    for (ti, pauli) in t.as_array().iter().zip(Pauli::XYZ) {
        let s = pauli.matrix();
        m += &kron(&s, &s).scale_real(*ti);
    }
    Ok(DensityMatrix::from_matrix_unchecked(m.scale_real(0.25)))
}

pub fn werner_density(w: WernerParam) -> DensityMatrix {
    bds_density(&w.probabilities())
}

/// Octahedron test `|t₁|+|t₂|+|t₃| ≤ 1`.
pub fn is_separable_bds(t: TVector) -> Result<bool> {
    t.check_in_tetrahedron()?;
    Ok(t.t1.abs() + t.t2.abs() + t.t3.abs() <= 1.0 + 1e-12)
}

/// Smallest eigenvalue of the partial transpose on B.
pub fn ppt_min_eigenvalue(rho: &DensityMatrix) -> Result<f64> {
    let pt = partial_transpose(rho, 1)?;
    Ok(*hermitian_eigenvalues(&pt)?.last().expect("non-empty spectrum"))
}

/// Number of lattice steps per axis of the tetrahedron grid; yields 340 points.
pub const TETRAHEDRON_GRID_STEPS: usize = 9;

/// Cubic lattice `t_i ∈ {−1, −1 + 2/k, …, 1}` restricted to the tetrahedron,
/// ordered lexicographically in `(t₁, t₂, t₃)`.
pub fn tetrahedron_grid(steps: usize) -> Vec<TVector> {
    let coord = |m: usize| -1.0 + 2.0 * m as f64 / steps as f64;
    let mut out = Vec::new();
    for a in 0..=steps {
        for b in 0..=steps {
            for c in 0..=steps {
                let t = TVector::new(coord(a), coord(b), coord(c));
                if t.in_tetrahedron() {
                    out.push(t);
                }
            }
        }
    }
    out
}

/// `n` evenly spaced Werner parameters from 0 to 1 inclusive.
pub fn werner_line(n: usize) -> Vec<WernerParam> {
    match n {
        0 => Vec::new(),
        1 => vec![WernerParam(0.0)],
        _ => (0..n)
            .map(|i| WernerParam(i as f64 / (n - 1) as f64))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{partial_trace, ComplexMatrix};

    fn close(a: TVector, b: TVector) -> bool {
        a.as_array()
            .iter()
            .zip(b.as_array())
            .all(|(x, y)| (x - y).abs() < 1e-15)
    }

    #[test]
    fn probability_to_t_examples() {
        let p = BellProbabilities::new(1.0, 0.0, 0.0, 0.0).unwrap();
        assert!(close(probs_to_t(&p), TVector::new(1.0, -1.0, 1.0)));
        assert!(close(probs_to_t(&BellProbabilities::uniform()), TVector::new(0.0, 0.0, 0.0)));
        let p = BellProbabilities::new(0.0, 0.0, 0.0, 1.0).unwrap();
        assert!(close(probs_to_t(&p), TVector::new(-1.0, -1.0, -1.0)));
        // remaining corners
        let p = BellProbabilities::new(0.0, 1.0, 0.0, 0.0).unwrap();
        assert!(close(probs_to_t(&p), TVector::new(1.0, 1.0, -1.0)));
        let p = BellProbabilities::new(0.0, 0.0, 1.0, 0.0).unwrap();
        assert!(close(probs_to_t(&p), TVector::new(-1.0, 1.0, 1.0)));
    }

    #[test]
    fn t_to_probability_examples() {
        assert_eq!(
            t_to_probs(TVector::new(0.0, 0.0, 0.0)).unwrap().as_array(),
            [0.25; 4]
        );
        assert_eq!(
            t_to_probs(TVector::new(-1.0, -1.0, -1.0)).unwrap().as_array(),
            [0.0, 0.0, 0.0, 1.0]
        );
        assert_eq!(
            t_to_probs(TVector::new(-0.5, -0.5, -0.5)).unwrap().as_array(),
            [0.125, 0.125, 0.125, 0.625]
        );
        assert!(matches!(
            t_to_probs(TVector::new(1.0, 1.0, 1.0)),
            Err(Error::OutsideTetrahedron(..))
        ));
    }

    #[test]
    fn probabilities_validation() {
        assert!(BellProbabilities::new(0.5, 0.5, 0.1, 0.0).is_err());
        assert!(BellProbabilities::new(-0.1, 0.6, 0.5, 0.0).is_err());
        let p = BellProbabilities::new(-1e-13, 0.5, 0.5, 1e-13).unwrap();
        assert_eq!(p.p00, 0.0);
    }

    #[test]
    fn bell_states_match_definitions() {
        let s = FRAC_1_SQRT_2;
        let b00 = bell_state(0, 0).unwrap();
        assert_eq!(
            b00.amplitudes().iter().map(|a| a.re).collect::<Vec<_>>(),
            vec![s, 0.0, 0.0, s]
        );
        let b11 = bell_state(1, 1).unwrap();
        assert_eq!(
            b11.amplitudes().iter().map(|a| a.re).collect::<Vec<_>>(),
            vec![0.0, s, -s, 0.0]
        );
        let all = bell_states();
        for i in 0..4 {
            for j in 0..4 {
                let ip = all[i].inner(&all[j]).norm();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((ip - expect).abs() < 1e-15);
            }
        }
        assert!(bell_state(2, 0).is_err());
    }

    #[test]
    fn bds_density_examples() {
        let p = BellProbabilities::new(1.0, 0.0, 0.0, 0.0).unwrap();
        let rho = bds_density(&p);
        assert!(rho
            .matrix()
            .max_abs_diff(&bell_state(0, 0).unwrap().projector())
            < 1e-15);
        let mixed = bds_density(&BellProbabilities::uniform());
        assert!(mixed
            .matrix()
            .max_abs_diff(DensityMatrix::maximally_mixed(2).matrix())
            < 1e-15);
    }

    #[test]
    fn werner_matches_computational_basis_matrix() {
        for &w in &[0.0, 0.2, 0.5, 0.9, 1.0] {
            let rho = werner_density(WernerParam::new(w).unwrap());
            let expected = ComplexMatrix::from_real_rows(&[
                &[1.0 - w, 0.0, 0.0, 0.0],
                &[0.0, 1.0 + w, -2.0 * w, 0.0],
                &[0.0, -2.0 * w, 1.0 + w, 0.0],
                &[0.0, 0.0, 0.0, 1.0 - w],
            ])
            .scale_real(0.25);
            assert!(rho.matrix().max_abs_diff(&expected) < 1e-15, "w = {w}");
        }
    }

    #[test]
    fn werner_endpoints_and_threshold() {
        let w0 = werner_density(WernerParam::new(0.0).unwrap());
        assert!(w0.matrix().max_abs_diff(DensityMatrix::maximally_mixed(2).matrix()) < 1e-15);
        let w1 = werner_density(WernerParam::new(1.0).unwrap());
        assert!(w1.matrix().max_abs_diff(&bell_state(1, 1).unwrap().projector()) < 1e-15);
        let third = werner_density(WernerParam::new(1.0 / 3.0).unwrap());
        assert!(ppt_min_eigenvalue(&third).unwrap().abs() < 1e-12);
        assert!(WernerParam::new(1.2).is_err());
    }

    #[test]
    fn separability_examples() {
        assert!(is_separable_bds(TVector::new(0.0, 0.0, 0.0)).unwrap());
        assert!(!is_separable_bds(TVector::new(1.0, -1.0, 1.0)).unwrap());
        assert!(!is_separable_bds(TVector::new(-0.4, -0.4, -0.4)).unwrap());
        assert!(is_separable_bds(TVector::new(-1.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0)).unwrap());
        assert!(is_separable_bds(TVector::new(1.0, 1.0, 1.0)).is_err());
    }

    #[test]
    fn grid_has_340_points_and_contains_corners() {
        let grid = tetrahedron_grid(TETRAHEDRON_GRID_STEPS);
        assert_eq!(grid.len(), 340);
        for corner in [
            TVector::new(1.0, -1.0, 1.0),
            TVector::new(1.0, 1.0, -1.0),
            TVector::new(-1.0, 1.0, 1.0),
            TVector::new(-1.0, -1.0, -1.0),
        ] {
            assert!(grid.iter().any(|t| close(*t, corner)));
        }
    }

    #[test]
    fn grid_invariants() {
        for t in tetrahedron_grid(TETRAHEDRON_GRID_STEPS) {
            let p = t_to_probs(t).unwrap();
            let back = probs_to_t(&p);
            for (a, b) in back.as_array().iter().zip(t.as_array()) {
                assert!((a - b).abs() < 1e-15);
            }
            let rho = bds_density(&p);
            let via_t = bds_density_from_t(t).unwrap();
            assert!(rho.matrix().max_abs_diff(via_t.matrix()) < 1e-12);

            let mut expected = p.as_array().to_vec();
            expected.sort_by(|a, b| b.total_cmp(a));
            let ev = hermitian_eigenvalues(rho.matrix()).unwrap();
            for (a, b) in ev.iter().zip(&expected) {
                assert!((a - b).abs() < 1e-10);
            }

            let sep = is_separable_bds(t).unwrap();
            let ppt = ppt_min_eigenvalue(&rho).unwrap() >= -1e-9;
            assert_eq!(sep, ppt, "t = {t:?}");

            let half = ComplexMatrix::identity(2).scale_real(0.5);
            for keep in [[0usize], [1]] {
                let marginal = partial_trace(&rho, &keep).unwrap();
                assert!(marginal.matrix().max_abs_diff(&half) < 1e-10);
            }
        }
    }

    #[test]
    fn partial_transpose_flips_t2() {
        for t in tetrahedron_grid(4) {
            let rho = bds_density_from_t(t).unwrap();
            let pt = partial_transpose(&rho, 1).unwrap();
            let TVector { t1, t2, t3 } = t;
            let mut expected = ComplexMatrix::identity(4);
            for (ti, pauli) in [t1, -t2, t3].iter().zip(Pauli::XYZ) {
                let s = pauli.matrix();
                expected += &kron(&s, &s).scale_real(*ti);
            }
            assert!(pt.max_abs_diff(&expected.scale_real(0.25)) < 1e-15);
        }
    }

    #[test]
    fn werner_line_spacing() {
        let line = werner_line(5);
        assert_eq!(
            line.iter().map(|w| w.value()).collect::<Vec<_>>(),
            vec![0.0, 0.25, 0.5, 0.75, 1.0]
        );
    }
}
