//! Exact outcome distributions and seeded shot sampling.

use std::collections::BTreeMap;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::branch::{evolve, key_string, BranchState};
use super::noise::NoiseModel;
use crate::circuits::{Circuit, GateOp};
use crate::error::{Error, Result};
use crate::tomography::CountsTable;

/// Probability of each recorded key `b ++ d` after rotating and reading out
/// `measured` (b) alongside the circuit's classical register (d).
pub fn outcome_distribution(
    state: &BranchState,
    rotations: &Circuit,
    measured: &[usize],
    noise: Option<&NoiseModel>,
) -> Result<BTreeMap<String, f64>> {
    if rotations.has_measurements() || rotations.n_qubits() != measured.len() {
        return Err(Error::MalformedCircuit(format!(
            "basis rotations must be measurement-free on {} qubits",
            measured.len()
        )));
    }
    let mut rotated = state.clone();
    for op in rotations.ops() {
        let mapped = GateOp {
            gate: op.gate.map_qubits(measured),
            condition: None,
        };
        rotated.apply_op(&mapped, noise)?;
    }
    let n = state.n_qubits();
    let k = measured.len();
    let mut dist = BTreeMap::new();
    for (key, rho) in rotated.branches() {
        let suffix = key_string(key);
        let mut truth = vec![0.0; 1 << k];
        for i in 0..rho.rows() {
            let b = measured
                .iter()
                .fold(0usize, |acc, &q| (acc << 1) | ((i >> (n - 1 - q)) & 1));
            truth[b] += rho[(i, i)].re.max(0.0);
        }
        for recorded in 0..(1usize << k) {
            let mut p = 0.0;
            for (t, &pt) in truth.iter().enumerate() {
                if pt == 0.0 {
                    continue;
                }
                let mut w = pt;
                for pos in 0..k {
                    let rb = ((recorded >> (k - 1 - pos)) & 1) as u8;
                    let tb = ((t >> (k - 1 - pos)) & 1) as u8;
                    w *= match noise {
                        Some(nm) => nm.readout_prob(rb, tb),
                        None => f64::from(u8::from(rb == tb)),
                    };
                }
                p += w;
            }
            if p > 0.0 {
                let bits: String = (0..k)
                    .map(|pos| if (recorded >> (k - 1 - pos)) & 1 == 1 { '1' } else { '0' })
                    .collect();
                *dist.entry(bits + &suffix).or_insert(0.0) += p;
            }
        }
    }
    Ok(dist)
}

/// Draws `shots` outcomes from an already evolved state.
pub fn sample_from_state(
    state: &BranchState,
    rotations: &Circuit,
    measured: &[usize],
    shots: u64,
    seed: u64,
    noise: Option<&NoiseModel>,
) -> Result<CountsTable> {
    if shots == 0 {
        return Err(Error::Domain {
            value: 0.0,
            domain: "shots ≥ 1",
        });
    }
    let dist = outcome_distribution(state, rotations, measured, noise)?;
    let keys: Vec<&String> = dist.keys().collect();
    let weights: Vec<f64> = dist.values().copied().collect();
    let sampler = WeightedIndex::new(&weights)
        .map_err(|e| Error::InvalidState(format!("outcome distribution: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = vec![0u64; keys.len()];
    for _ in 0..shots {
        tally[sampler.sample(&mut rng)] += 1;
    }
    CountsTable::new(
        None,
        measured.len(),
        state.n_clbits(),
        keys.into_iter()
            .zip(tally)
            .filter(|(_, n)| *n > 0)
            .map(|(k, n)| (k.clone(), n)),
    )
}

/// Evolves `c`, rotates its output qubits and samples `shots` readouts.
pub fn sample_counts(
    c: &Circuit,
    basis_rotations: &Circuit,
    shots: u64,
    seed: u64,
    noise: Option<&NoiseModel>,
) -> Result<CountsTable> {
    let state = evolve(c, noise)?;
    sample_from_state(&state, basis_rotations, c.output(), shots, seed, noise)
}
