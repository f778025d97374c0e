use std::collections::BTreeMap;

use bellsim::bds::{
    bds_density, t_to_probs, tetrahedron_grid, werner_density, werner_line, WernerParam,
    TETRAHEDRON_GRID_STEPS,
};
use bellsim::circuits::{build_werner_circuit, prepare_bds, Circuit, Encoder, Template};
use bellsim::linalg::{kron, ComplexMatrix, DensityMatrix, Pauli};
use bellsim::measures::{fidelity, random_two_qubit_state};
use bellsim::simulator::output_state;
use bellsim::tomography::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `(𝕀 + s·σ)/2` for outcome bit `b` (0 ↔ +1).
fn eigenprojector(axis: Axis, bit: u8) -> ComplexMatrix {
    let sign = if bit == 0 { 0.5 } else { -0.5 };
    let id = Pauli::I.matrix().scale_real(0.5);
    &id + &axis.pauli().matrix().scale_real(sign)
}

/// Born-rule frequencies of every setting, computed without the simulator.
fn born_frequencies(rho: &DensityMatrix) -> BTreeMap<MeasurementSetting, BTreeMap<String, f64>> {
    MeasurementSetting::all()
        .into_iter()
        .map(|s| {
            let mut f = BTreeMap::new();
            for a in 0..2u8 {
                for b in 0..2u8 {
                    let proj = kron(&eigenprojector(s.axis_a, a), &eigenprojector(s.axis_b, b));
                    f.insert(format!("{a}{b}"), rho.matrix().trace_product(&proj).re);
                }
            }
            (s, f)
        })
        .collect()
}

#[test]
fn exact_frequencies_invert_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    for _ in 0..50 {
        let rho = random_two_qubit_state(&mut rng);
        let m = estimate_expectations(&born_frequencies(&rho)).unwrap().assemble();
        assert!(m.max_abs_diff(rho.matrix()) < 1e-10);
        let projected = project_to_physical(&m).unwrap();
        assert!(projected.matrix().max_abs_diff(rho.matrix()) < 1e-9);
    }
}

#[test]
fn exact_reconstruction_of_templates_matches_output_state() {
    for t in tetrahedron_grid(TETRAHEDRON_GRID_STEPS).into_iter().step_by(23) {
        let p = t_to_probs(t).unwrap();
        for template in Template::ALL {
            let c = prepare_bds(&p, Encoder::Compact, template).unwrap();
            let tomo = reconstruct_exact(&c, None).unwrap();
            let direct = output_state(&c, None).unwrap();
            assert!(tomo.matrix().max_abs_diff(direct.matrix()) < 1e-9);
            assert!(tomo.matrix().max_abs_diff(bds_density(&p).matrix()) < 1e-9);
        }
    }
}

#[test]
fn y_rotation_recovers_sign_of_y_marginal() {
    // |+i⟩ ⊗ |0⟩ has ⟨σ_y ⊗ 𝕀⟩ = +1
    let mut c = Circuit::new(2, 0);
    c.h(0).rz(0, std::f64::consts::FRAC_PI_2);
    let rho = reconstruct_exact(&c, None).unwrap();
    let y = kron(&Pauli::Y.matrix(), &Pauli::I.matrix());
    assert!((rho.matrix().trace_product(&y).re - 1.0).abs() < 1e-10);
    let tables = tomography_tables(&c, 4096, 3, None).unwrap();
    let yz = tables
        .iter()
        .find(|t| t.setting == Some("YZ".parse().unwrap()))
        .unwrap();
    assert_eq!(yz.get("00"), 4096);
}

#[test]
fn noiseless_grid_fidelity_at_1024_shots() {
    let mut fids = Vec::new();
    for (i, t) in tetrahedron_grid(TETRAHEDRON_GRID_STEPS).into_iter().enumerate().step_by(7) {
        let p = t_to_probs(t).unwrap();
        let c = prepare_bds(&p, Encoder::Canonical, Template::TwoQubit).unwrap();
        let rho = reconstruct(&c, 1 << 10, i as u64 * 101, None).unwrap();
        fids.push(fidelity(&bds_density(&p), &rho).unwrap());
    }
    let mean = fids.iter().sum::<f64>() / fids.len() as f64;
    assert!(mean >= 0.99, "mean fidelity {mean}");
}

#[test]
fn werner_circuit_line() {
    for (i, w) in werner_line(100).into_iter().enumerate() {
        let c = build_werner_circuit(w);
        let exact = reconstruct_exact(&c, None).unwrap();
        assert!(exact.matrix().max_abs_diff(werner_density(w).matrix()) < 1e-9);
        if i % 10 == 0 {
            let rho = reconstruct(&c, 1 << 12, i as u64, None).unwrap();
            assert!(fidelity(&werner_density(w), &rho).unwrap() > 0.98);
        }
    }
}

#[test]
fn werner_half_trace_distance() {
    let w = WernerParam::new(0.5).unwrap();
    let c = prepare_bds(&w.probabilities(), Encoder::Compact, Template::FourQubit).unwrap();
    let rho = reconstruct(&c, 1 << 10, 17, None).unwrap();
    assert!(rho.trace_distance(&werner_density(w)).unwrap() < 0.1);
}

#[test]
fn error_shrinks_with_shots() {
    let w = WernerParam::new(0.7).unwrap();
    let c = prepare_bds(&w.probabilities(), Encoder::Compact, Template::TwoQubit).unwrap();
    let target = werner_density(w);
    let mean_td = |shots: u64| {
        (0..10)
            .map(|s| reconstruct(&c, shots, s, None).unwrap().trace_distance(&target).unwrap())
            .sum::<f64>()
            / 10.0
    };
    let coarse = mean_td(1 << 8);
    let fine = mean_td(1 << 14);
    assert!(fine < coarse / 3.0, "{fine} vs {coarse}");
}

#[test]
fn aggregation_drops_circuit_bits() {
    let w = WernerParam::new(0.3).unwrap();
    let c = prepare_bds(&w.probabilities(), Encoder::Compact, Template::TwoQubit).unwrap();
    let tables = tomography_tables(&c, 2048, 5, None).unwrap();
    for t in &tables {
        assert_eq!(t.n_circuit_bits, 2);
        let agg = aggregate_counts(t);
        assert_eq!(agg.n_circuit_bits, 0);
        assert_eq!(agg.shots(), t.shots());
        assert_eq!(agg.setting, t.setting);
        let json = t.to_json().unwrap();
        assert!(json.contains('|'));
        assert_eq!(&CountsTable::from_json(&json).unwrap(), t);
    }
}

#[test]
fn missing_setting_is_reported() {
    let c = prepare_bds(&WernerParam::new(0.3).unwrap().probabilities(), Encoder::Compact, Template::FourQubit).unwrap();
    let mut tables = tomography_tables(&c, 64, 0, None).unwrap();
    tables.remove(4);
    assert!(matches!(linear_inversion(&tables), Err(bellsim::Error::MissingSetting(_))));
}

fn counts_strategy() -> impl Strategy<Value = CountsTable> {
    (0usize..4, prop::collection::vec(0u64..500, 1..40)).prop_map(|(ncb, ns)| {
        let n_bits = 2 + ncb;
        let entries = ns
            .into_iter()
            .enumerate()
            .map(|(i, n)| {
                let key: String = (0..n_bits)
                    .map(|b| if (i * 2654435761usize >> b) & 1 == 1 { '1' } else { '0' })
                    .collect();
                (key, n)
            })
            .collect::<Vec<_>>();
        CountsTable::new(None, 2, ncb, entries).unwrap()
    })
}

proptest! {
    #[test]
    fn aggregation_preserves_totals(t in counts_strategy()) {
        let agg = aggregate_counts(&t);
        prop_assert_eq!(agg.shots(), t.shots());
        for key in agg.counts().keys() {
            prop_assert_eq!(key.len(), 2);
        }
        for b in ["00", "01", "10", "11"] {
            let direct: u64 = t.counts().iter().filter(|(k, _)| k.starts_with(b)).map(|(_, n)| n).sum();
            prop_assert_eq!(agg.get(b), direct);
        }
    }

    #[test]
    fn projection_yields_states(seed in any::<u64>(), scale in 0.0f64..0.4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_two_qubit_state(&mut rng);
        let noise = random_two_qubit_state(&mut rng);
        // push the estimate outside the PSD cone while keeping unit trace
        let m = &rho.matrix().scale_real(1.0 + scale) - &noise.matrix().scale_real(scale);
        let p = project_to_physical(&m).unwrap();
        let ev = bellsim::linalg::hermitian_eigenvalues(p.matrix()).unwrap();
        prop_assert!(ev.iter().all(|&v| v >= -1e-12));
        prop_assert!((ev.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn truncation_keeps_unit_sum(mut v in prop::collection::vec(-0.3f64..1.0, 4)) {
        let s: f64 = v.iter().sum();
        prop_assume!(s > 0.1);
        for x in &mut v { *x /= s; }
        v.sort_by(|a, b| b.total_cmp(a));
        let out = truncate_spectrum(&v);
        prop_assert!(out.iter().all(|&x| x >= 0.0));
        prop_assert!((out.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
