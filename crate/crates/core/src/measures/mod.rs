//! Entanglement, non-locality, steering, discord and fidelity of two-qubit states.

mod discord;
mod entanglement;
mod fidelity;
mod optimize;
mod random;
mod report;
mod state;
mod werner;

pub use discord::{
    bloch_basis, classical_correlation_bds, classical_correlation_bruteforce, dephase, discord,
    discord_bds, discord_left, discord_with, mutual_information, mutual_information_bds,
    rel_entropy_discord_asym, DEFAULT_REFINE_ITERS,
};
pub use entanglement::{
    chsh_bruteforce, chsh_quantities, chsh_quantities_bds, concurrence, concurrence_bds,
    entanglement_of_formation, eof_from_concurrence, nonlocality_from_m, steering3,
    steering3_general,
};
pub use fidelity::{fidelity, fidelity_worst_werner};
pub use optimize::{golden_section_max, minimize_bloch};
pub use random::{random_bell_probabilities, random_product_state, random_two_qubit_state};
pub use report::{report, MeasurePath, MeasureReport, BDS_TOL};
pub use state::{swap_qubits, GeneralTwoQubitState};
pub use werner::{
    classical_correlation_werner, concurrence_werner, discord_werner, eof_werner,
    mutual_information_werner, nonlocality_werner, steering3_werner,
};
