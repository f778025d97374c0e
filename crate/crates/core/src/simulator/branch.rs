//! Branching density-matrix evolution.

use std::collections::BTreeMap;

use super::noise::NoiseModel;
use crate::circuits::{Circuit, Gate, GateOp};
use crate::error::{Error, Result};
use crate::linalg::{partial_trace, ComplexMatrix, DensityMatrix, ZERO};

pub const PRUNE_TOL: f64 = 1e-14;

/// Classical register contents; bit `i` at index `i`.
pub type ClassicalKey = Vec<u8>;

/// Unnormalized conditional states keyed by classical register contents.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchState {
    n_qubits: usize,
    n_clbits: usize,
    branches: BTreeMap<ClassicalKey, ComplexMatrix>,
}

pub fn key_string(key: &[u8]) -> String {
    key.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect()
}

impl BranchState {
    /// `|0…0⟩⟨0…0|` with all classical bits 0.
    pub fn initial(n_qubits: usize, n_clbits: usize) -> Self {
        let d = 1 << n_qubits;
        let mut rho = ComplexMatrix::zeros(d, d);
        rho[(0, 0)] = crate::linalg::ONE;
        let mut branches = BTreeMap::new();
        branches.insert(vec![0; n_clbits], rho);
        Self {
            n_qubits,
            n_clbits,
            branches,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_clbits(&self) -> usize {
        self.n_clbits
    }

    pub fn branches(&self) -> &BTreeMap<ClassicalKey, ComplexMatrix> {
        &self.branches
    }

    /// Probability of each classical key.
    pub fn branch_probabilities(&self) -> BTreeMap<String, f64> {
        self.branches
            .iter()
            .map(|(k, m)| (key_string(k), m.trace().re))
            .collect()
    }

    pub fn total_trace(&self) -> f64 {
        self.branches.values().map(|m| m.trace().re).sum()
    }

    pub fn apply_op(&mut self, op: &GateOp, noise: Option<&NoiseModel>) -> Result<()> {
        if let Gate::Measure { qubit, clbit } = op.gate {
            self.measure(qubit, clbit, op.condition.map(|c| (c.clbit, c.value)), noise);
            return Ok(());
        }
        let Some(local) = op.gate.local_matrix() else {
            return Ok(());
        };
        let qubits = op.gate.qubits();
        let p = noise.map_or(0.0, |n| n.depolarizing_for(&op.gate));
        let n = self.n_qubits;
        for (key, rho) in self.branches.iter_mut() {
            if let Some(cond) = op.condition {
                let bit = *key.get(cond.clbit).ok_or_else(|| {
                    Error::MalformedCircuit(format!("condition on missing clbit {}", cond.clbit))
                })?;
                if bit != cond.value {
                    continue;
                }
            }
            *rho = apply_local_unitary(rho, &local, &qubits, n);
            if p > 0.0 {
                *rho = depolarize(rho, &qubits, n, p);
            }
        }
        Ok(())
    }

    fn measure(
        &mut self,
        qubit: usize,
        clbit: usize,
        condition: Option<(usize, u8)>,
        noise: Option<&NoiseModel>,
    ) {
        let n = self.n_qubits;
        let mask = 1usize << (n - 1 - qubit);
        let mut out: BTreeMap<ClassicalKey, ComplexMatrix> = BTreeMap::new();
        let mut add = |key: ClassicalKey, m: ComplexMatrix| {
            if m.trace().re < PRUNE_TOL {
                return;
            }
            match out.get_mut(&key) {
                Some(existing) => *existing += &m,
                None => {
                    out.insert(key, m);
                }
            }
        };
        for (key, rho) in std::mem::take(&mut self.branches) {
            if let Some((cbit, value)) = condition {
                if key[cbit] != value {
                    add(key, rho);
                    continue;
                }
            }
            let projected: [ComplexMatrix; 2] = [0usize, 1].map(|outcome| {
                let mut m = rho.clone();
                let d = m.rows();
                for i in 0..d {
                    for j in 0..d {
                        let bi = usize::from(i & mask != 0);
                        let bj = usize::from(j & mask != 0);
                        if bi != outcome || bj != outcome {
                            m[(i, j)] = ZERO;
                        }
                    }
                }
                m
            });
            for recorded in 0u8..2 {
                let mut acc = ComplexMatrix::zeros(rho.rows(), rho.cols());
                for (truth, proj) in projected.iter().enumerate() {
                    let w = noise.map_or(if usize::from(recorded) == truth { 1.0 } else { 0.0 }, |nm| {
                        nm.readout_prob(recorded, truth as u8)
                    });
                    if w > 0.0 {
                        acc += &proj.scale_real(w);
                    }
                }
                let mut k = key.clone();
                k[clbit] = recorded;
                add(k, acc);
            }
        }
        self.branches = out;
    }

    /// Sum of all branches, normalized.
    pub fn reduced_density(&self) -> DensityMatrix {
        let d = 1 << self.n_qubits;
        let mut total = ComplexMatrix::zeros(d, d);
        for m in self.branches.values() {
            total += m;
        }
        let tr = total.trace().re;
        DensityMatrix::from_matrix_unchecked(total.scale_real(1.0 / tr).hermitian_part())
    }
}

/// Runs `c` from `|0…0⟩`.
pub fn evolve(c: &Circuit, noise: Option<&NoiseModel>) -> Result<BranchState> {
    c.validate()?;
    let mut s = BranchState::initial(c.n_qubits(), c.n_clbits());
    for op in c.ops() {
        s.apply_op(op, noise)?;
    }
    Ok(s)
}

pub fn reduced_density(s: &BranchState) -> DensityMatrix {
    s.reduced_density()
}

/// Normalized state of the circuit's output qubits after evolution.
pub fn output_state(c: &Circuit, noise: Option<&NoiseModel>) -> Result<DensityMatrix> {
    let full = evolve(c, noise)?.reduced_density();
    let identity_order: Vec<usize> = (0..c.n_qubits()).collect();
    if c.output() == identity_order.as_slice() {
        Ok(full)
    } else {
        partial_trace(&full, c.output())
    }
}

#[inline]
fn local_index(index: usize, qubits: &[usize], n: usize) -> usize {
    qubits
        .iter()
        .fold(0usize, |acc, &q| (acc << 1) | ((index >> (n - 1 - q)) & 1))
}

#[inline]
fn with_local(index: usize, qubits: &[usize], n: usize, local: usize) -> usize {
    let k = qubits.len();
    let mut idx = index;
    for (pos, &q) in qubits.iter().enumerate() {
        let shift = n - 1 - q;
        let b = (local >> (k - 1 - pos)) & 1;
        idx = (idx & !(1 << shift)) | (b << shift);
    }
    idx
}

/// `U ρ U†` with `U` acting on `qubits`.
pub(crate) fn apply_local_unitary(
    rho: &ComplexMatrix,
    u: &ComplexMatrix,
    qubits: &[usize],
    n: usize,
) -> ComplexMatrix {
    let d = rho.rows();
    let dl = u.rows();
    let mut left = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        let li = local_index(i, qubits, n);
        for l in 0..dl {
            let coeff = u[(li, l)];
            if coeff == ZERO {
                continue;
            }
            let src = with_local(i, qubits, n, l);
            for j in 0..d {
                left[(i, j)] += coeff * rho[(src, j)];
            }
        }
    }
    let mut out = ComplexMatrix::zeros(d, d);
    for j in 0..d {
        let lj = local_index(j, qubits, n);
        for l in 0..dl {
            let coeff = u[(lj, l)].conj();
            if coeff == ZERO {
                continue;
            }
            let src = with_local(j, qubits, n, l);
            for i in 0..d {
                out[(i, j)] += left[(i, src)] * coeff;
            }
        }
    }
    out
}

/// `(1−p)ρ + p·Tr_Q(ρ) ⊗ 𝕀_Q/d_Q`.
pub(crate) fn depolarize(rho: &ComplexMatrix, qubits: &[usize], n: usize, p: f64) -> ComplexMatrix {
    let d = rho.rows();
    let dq = 1usize << qubits.len();
    let mut out = rho.scale_real(1.0 - p);
    let w = p / dq as f64;
    for i in 0..d {
        let li = local_index(i, qubits, n);
        for j in 0..d {
            if local_index(j, qubits, n) != li {
                continue;
            }
            let mut s = ZERO;
            for m in 0..dq {
                s += rho[(with_local(i, qubits, n, m), with_local(j, qubits, n, m))];
            }
            out[(i, j)] += s * w;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::embed_gate;
    use crate::linalg::{kron, C64};

    fn random_state(n: usize, seed: u64) -> ComplexMatrix {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let d = 1 << n;
        let mut a = ComplexMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                a[(i, j)] = C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            }
        }
        let m = a.matmul(&a.adjoint());
        let tr = m.trace().re;
        m.scale_real(1.0 / tr)
    }

    #[test]
    fn local_application_matches_full_embedding() {
        let rho = random_state(3, 7);
        for gate in [
            Gate::Ry { qubit: 1, angle: 0.4 },
            Gate::H { qubit: 2 },
            Gate::Cnot { control: 2, target: 0 },
            Gate::Cry { control: 0, target: 2, angle: -1.2 },
        ] {
            let full = embed_gate(&gate, 3).unwrap();
            let expected = full.matmul(&rho).matmul(&full.adjoint());
            let got = apply_local_unitary(&rho, &gate.local_matrix().unwrap(), &gate.qubits(), 3);
            assert!(got.max_abs_diff(&expected) < 1e-14, "{gate:?}");
        }
    }

    #[test]
    fn depolarizing_matches_pauli_twirl() {
        // full depolarizing on one qubit = ¼ Σ_P P ρ P
        let rho = random_state(2, 3);
        let got = depolarize(&rho, &[1], 2, 1.0);
        let mut twirl = ComplexMatrix::zeros(4, 4);
        for p in crate::linalg::Pauli::XYZ.iter().copied().chain([crate::linalg::Pauli::I]) {
            let full = kron(&ComplexMatrix::identity(2), &p.matrix());
            twirl += &full.matmul(&rho).matmul(&full).scale_real(0.25);
        }
        assert!(got.max_abs_diff(&twirl) < 1e-14);
    }

    #[test]
    fn full_depolarizing_leaves_touched_qubits_mixed() {
        let mut c = Circuit::new(2, 0);
        c.h(0).cnot(0, 1);
        let noise = NoiseModel::new(0.0, 1.0, 0.0, 0.0).unwrap();
        let rho = evolve(&c, Some(&noise)).unwrap().reduced_density();
        let mixed = ComplexMatrix::identity(4).scale_real(0.25);
        assert!(rho.matrix().max_abs_diff(&mixed) < 1e-14);
    }

    #[test]
    fn repeated_measurement_is_correlated() {
        let mut c = Circuit::new(1, 2);
        c.h(0).measure(0, 0).measure(0, 1);
        let s = evolve(&c, None).unwrap();
        let probs = s.branch_probabilities();
        assert_eq!(probs.len(), 2);
        assert!((probs["00"] - 0.5).abs() < 1e-14 && (probs["11"] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn readout_flip_mixes_records() {
        let mut c = Circuit::new(1, 1);
        c.measure(0, 0);
        let noise = NoiseModel::new(0.0, 0.0, 0.2, 0.0).unwrap();
        let s = evolve(&c, Some(&noise)).unwrap();
        let probs = s.branch_probabilities();
        assert!((probs["1"] - 0.2).abs() < 1e-15);
        // state follows the true outcome in both records
        for m in s.branches().values() {
            assert!(m[(1, 1)].norm() < 1e-15);
        }
    }

    #[test]
    fn conditioned_ops_follow_record() {
        let mut c = Circuit::new(2, 1);
        c.x(0).measure(0, 0);
        c.push_if(Gate::X { qubit: 1 }, 0, 1);
        let s = evolve(&c, None).unwrap();
        let rho = s.reduced_density();
        assert!((rho.matrix()[(3, 3)].re - 1.0).abs() < 1e-15);
    }
}
