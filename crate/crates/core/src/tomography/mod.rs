//! Two-qubit Pauli tomography: settings, counts, linear inversion, PSD projection.

mod counts;

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

pub use counts::{aggregate_counts, Axis, CountsTable, MeasurementSetting};

use crate::circuits::Circuit;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, kron, ComplexMatrix, DensityMatrix, Pauli, STATE_HERMITIAN_TOL};
use crate::simulator::{evolve, outcome_distribution, sample_from_state, BranchState, NoiseModel};

/// Pre-rotation mapping the chosen Pauli eigenbasis onto the computational one.
pub fn basis_rotation_circuit(s: MeasurementSetting) -> Circuit {
    let mut c = Circuit::new(2, 0);
    for (q, axis) in [(0, s.axis_a), (1, s.axis_b)] {
        match axis {
            Axis::X => {
                c.h(q);
            }
            Axis::Y => {
                c.rz(q, -FRAC_PI_2).h(q);
            }
            Axis::Z => {}
        }
    }
    c
}

/// Pauli expectation values of a two-qubit state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliExpectations {
    /// `⟨σ_i ⊗ 𝕀⟩`
    pub r: [f64; 3],
    /// `⟨𝕀 ⊗ σ_j⟩`
    pub s: [f64; 3],
    /// `⟨σ_i ⊗ σ_j⟩`
    pub t: [[f64; 3]; 3],
}

impl PauliExpectations {
    /// `¼(𝕀⊗𝕀 + r·σ⊗𝕀 + 𝕀⊗s·σ + Σ t_ij σ_i⊗σ_j)`.
    pub fn assemble(&self) -> ComplexMatrix {
        let id = Pauli::I.matrix();
        let mut m = kron(&id, &id);
        for i in 0..3 {
            let si = Pauli::XYZ[i].matrix();
            m += &kron(&si, &id).scale_real(self.r[i]);
            m += &kron(&id, &si).scale_real(self.s[i]);
            for j in 0..3 {
                m += &kron(&si, &Pauli::XYZ[j].matrix()).scale_real(self.t[i][j]);
            }
        }
        m.scale_real(0.25)
    }
}

fn parity_sign(bits: &str, positions: &[usize]) -> f64 {
    let ones = positions
        .iter()
        .filter(|&&p| bits.as_bytes()[p] == b'1')
        .count();
    if ones % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Estimates expectations from per-setting outcome frequencies of the two
/// tomography bits. Marginals are averaged over the three settings sharing an axis.
pub fn estimate_expectations(
    freqs: &BTreeMap<MeasurementSetting, BTreeMap<String, f64>>,
) -> Result<PauliExpectations> {
    let mut e = PauliExpectations {
        r: [0.0; 3],
        s: [0.0; 3],
        t: [[0.0; 3]; 3],
    };
    for setting in MeasurementSetting::all() {
        let f = freqs
            .get(&setting)
            .ok_or_else(|| Error::MissingSetting(setting.to_string()))?;
        let total: f64 = f.values().sum();
        if total <= 0.0 {
            return Err(Error::MissingSetting(format!("{setting} has no shots")));
        }
        let mean = |positions: &[usize]| {
            f.iter()
                .map(|(k, &p)| p * parity_sign(k, positions))
                .sum::<f64>()
                / total
        };
        let (i, j) = (setting.axis_a.index(), setting.axis_b.index());
        e.t[i][j] = mean(&[0, 1]);
        e.r[i] += mean(&[0]) / 3.0;
        e.s[j] += mean(&[1]) / 3.0;
    }
    Ok(e)
}

/// Linear-inversion estimate from nine tables (aggregated internally).
/// Hermitian with unit trace; may be non-PSD.
pub fn linear_inversion(tables: &[CountsTable]) -> Result<ComplexMatrix> {
    let mut freqs = BTreeMap::new();
    for t in tables {
        let setting = t
            .setting
            .ok_or_else(|| Error::MissingSetting("table without a setting".into()))?;
        if t.n_tomo_bits != 2 {
            return Err(Error::DimensionMismatch {
                expected: "2 tomography bits".into(),
                got: t.n_tomo_bits.to_string(),
            });
        }
        let agg = aggregate_counts(t);
        if freqs.insert(setting, agg.frequencies()).is_some() {
            return Err(Error::InvalidState(format!("setting {setting} given twice")));
        }
    }
    Ok(estimate_expectations(&freqs)?.assemble())
}

/// Nearest density matrix under eigenvalue truncation with deficit redistribution.
pub fn project_to_physical(m: &ComplexMatrix) -> Result<DensityMatrix> {
    let deviation = m.hermiticity_defect();
    if deviation > STATE_HERMITIAN_TOL.max(1e-9) {
        return Err(Error::NotHermitian { deviation });
    }
    let h = m.hermitian_part();
    let tr = h.trace().re;
    if tr <= 0.0 {
        return Err(Error::InvalidState(format!("non-positive trace {tr}")));
    }
    let mut eig = hermitian_eig(&h.scale_real(1.0 / tr))?;
    eig.values = truncate_spectrum(&eig.values);
    let fixed = eig.reconstruct().hermitian_part();
    let ftr = fixed.trace().re;
    DensityMatrix::new(fixed.scale_real(1.0 / ftr))
}

/// Eigenvalues sorted descending with unit sum; returns the projected spectrum.
pub fn truncate_spectrum(values: &[f64]) -> Vec<f64> {
    let mut out = values.to_vec();
    let mut deficit = 0.0;
    let mut i = out.len();
    while i > 0 && out[i - 1] + deficit / (i as f64) < 0.0 {
        deficit += out[i - 1];
        out[i - 1] = 0.0;
        i -= 1;
    }
    for v in out.iter_mut().take(i) {
        *v += deficit / i as f64;
    }
    out
}

fn two_qubit_output(c: &Circuit) -> Result<()> {
    if c.output().len() != 2 {
        return Err(Error::DimensionMismatch {
            expected: "2 output qubits".into(),
            got: c.output().len().to_string(),
        });
    }
    Ok(())
}

/// Seed for setting `k`: `seed + k`.
pub fn setting_seed(seed: u64, setting: MeasurementSetting) -> u64 {
    seed.wrapping_add(setting.index() as u64)
}

/// Samples all nine settings from an evolved state.
pub fn tomography_tables_from_state(
    state: &BranchState,
    output: &[usize],
    shots: u64,
    seed: u64,
    noise: Option<&NoiseModel>,
) -> Result<Vec<CountsTable>> {
    MeasurementSetting::all()
        .into_iter()
        .map(|s| {
            let mut t = sample_from_state(
                state,
                &basis_rotation_circuit(s),
                output,
                shots,
                setting_seed(seed, s),
                noise,
            )?;
            t.setting = Some(s);
            Ok(t)
        })
        .collect()
}

/// Runs `c` once and samples all nine settings on its output pair.
pub fn tomography_tables(
    c: &Circuit,
    shots: u64,
    seed: u64,
    noise: Option<&NoiseModel>,
) -> Result<Vec<CountsTable>> {
    two_qubit_output(c)?;
    let state = evolve(c, noise)?;
    tomography_tables_from_state(&state, c.output(), shots, seed, noise)
}

/// Shot-based tomography of the circuit's output pair.
pub fn reconstruct(
    c: &Circuit,
    shots: u64,
    seed: u64,
    noise: Option<&NoiseModel>,
) -> Result<DensityMatrix> {
    project_to_physical(&linear_inversion(&tomography_tables(c, shots, seed, noise)?)?)
}

/// Infinite-shot tomography using exact outcome probabilities.
pub fn reconstruct_exact(c: &Circuit, noise: Option<&NoiseModel>) -> Result<DensityMatrix> {
    two_qubit_output(c)?;
    let state = evolve(c, noise)?;
    let mut freqs = BTreeMap::new();
    for s in MeasurementSetting::all() {
        let dist = outcome_distribution(&state, &basis_rotation_circuit(s), c.output(), noise)?;
        let mut agg: BTreeMap<String, f64> = BTreeMap::new();
        for (k, p) in dist {
            *agg.entry(k[..2].to_string()).or_insert(0.0) += p;
        }
        freqs.insert(s, agg);
    }
    project_to_physical(&estimate_expectations(&freqs)?.assemble())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::bell_basis_change;
    use crate::linalg::C64;

    #[test]
    fn rotation_eigenstates_are_deterministic() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // |+⟩|+i⟩ measured in XY
        let plus = [C64::new(s, 0.0), C64::new(s, 0.0)];
        let plus_i = [C64::new(s, 0.0), C64::new(0.0, s)];
        let psi: Vec<C64> = plus.iter().flat_map(|a| plus_i.iter().map(move |b| a * b)).collect();
        let u = basis_rotation_circuit("XY".parse().unwrap()).unitary().unwrap();
        let out = u.matvec(&psi);
        assert!((out[0].norm_sqr() - 1.0).abs() < 1e-14);
        // |0⟩|0⟩ under ZZ
        let u = basis_rotation_circuit("ZZ".parse().unwrap()).unitary().unwrap();
        assert!(u.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-15);
    }

    #[test]
    fn bell_xx_outcomes_are_correlated() {
        let state = evolve(&bell_basis_change(), None).unwrap();
        let rot = basis_rotation_circuit("XX".parse().unwrap());
        let dist = outcome_distribution(&state, &rot, &[0, 1], None).unwrap();
        assert!(dist.get("01").copied().unwrap_or(0.0) < 1e-14);
        assert!(dist.get("10").copied().unwrap_or(0.0) < 1e-14);
    }

    #[test]
    fn exact_tomography_of_bell_state() {
        let rho = reconstruct_exact(&bell_basis_change(), None).unwrap();
        let bell = crate::bds::bell_state(0, 0).unwrap().to_density();
        assert!(rho.matrix().max_abs_diff(bell.matrix()) < 1e-12);
    }

    #[test]
    fn truncation_by_hand() {
        let got = truncate_spectrum(&[1.1, 0.1, -0.1, -0.1]);
        let expected = [1.0, 0.0, 0.0, 0.0];
        for (g, e) in got.iter().zip(expected) {
            assert!((g - e).abs() < 1e-15);
        }
        let psd = [0.5, 0.3, 0.2, 0.0];
        assert_eq!(truncate_spectrum(&psd), psd.to_vec());
    }

    #[test]
    fn projection_of_nonpsd_diagonal() {
        let m = ComplexMatrix::diag_real(&[1.1, 0.1, -0.1, -0.1]);
        let rho = project_to_physical(&m).unwrap();
        assert!(rho.matrix().max_abs_diff(&ComplexMatrix::diag_real(&[1.0, 0.0, 0.0, 0.0])) < 1e-12);
        let again = project_to_physical(rho.matrix()).unwrap();
        assert!(again.matrix().max_abs_diff(rho.matrix()) < 1e-12);
    }

    #[test]
    fn missing_setting_is_reported() {
        let tables = tomography_tables(&bell_basis_change(), 16, 0, None).unwrap();
        assert!(matches!(linear_inversion(&tables[..8]), Err(Error::MissingSetting(_))));
        let mut unlabeled = tables.clone();
        unlabeled[0].setting = None;
        assert!(matches!(linear_inversion(&unlabeled), Err(Error::MissingSetting(_))));
    }
}
