//! Circuit IR, encoders, solvers and preparation templates.

mod encoders;
mod ir;
mod templates;

pub use encoders::{
    bell_basis_change, build_g_canonical, build_g_compact, build_g_two_param,
    canonical_amplitudes, solve_canonical_params, solve_compact_params, CanonicalParams,
    CompactParams,
};
pub use ir::{
    embed_gate, embed_local, ry_matrix, Circuit, CircuitDocument, Condition, Gate, GateOp,
    GateRecord,
};
pub use templates::{
    build_four_qubit, build_four_qubit_ancilla, build_two_qubit, build_werner_circuit,
    prepare_bds, Encoder, Template,
};
