//! Seeded random states for property tests and benchmarks.

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::bds::BellProbabilities;
use crate::linalg::{partial_trace, ComplexMatrix, DensityMatrix, PureState, C64};

/// Reduced state of a random three-qubit pure state (Gaussian amplitudes).
pub fn random_two_qubit_state<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    let amps: Vec<C64> = (0..8)
        .map(|_| C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect();
    let psi = PureState::normalized(amps).expect("nonzero Gaussian vector");
    partial_trace(&psi.to_density(), &[0, 1]).expect("three-qubit state")
}

/// Uniform point of the probability simplex.
pub fn random_bell_probabilities<R: Rng + ?Sized>(rng: &mut R) -> BellProbabilities {
    let e: [f64; 4] = std::array::from_fn(|_| Exp1.sample(rng));
    let s: f64 = e.iter().sum();
    BellProbabilities::from_array(e.map(|x| x / s)).expect("normalized weights")
}

/// Random pure product state `ρ_A ⊗ ρ_B`.
pub fn random_product_state<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    let one = |rng: &mut R| {
        let v: Vec<C64> = (0..2)
            .map(|_| C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
            .collect();
        PureState::normalized(v).expect("nonzero").projector()
    };
    let a: ComplexMatrix = one(rng);
    let b: ComplexMatrix = one(rng);
    DensityMatrix::new(crate::linalg::kron(&a, &b)).expect("product of states")
}
