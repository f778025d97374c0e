//! Mutual information, classical correlation, discord and relative-entropy discord.
//! Measurements always act on qubit B.

use super::optimize::minimize_bloch;
use super::state::{marginals, require_two_qubits};
use crate::bds::TVector;
use crate::error::{Error, Result};
use crate::linalg::{
    binary_entropy, entropy_bits_of_spectrum, kron, matrix_entropy_bits, partial_trace_matrix,
    von_neumann_entropy_bits, ComplexMatrix, DensityMatrix, Pauli, C64,
};

pub const DEFAULT_REFINE_ITERS: usize = 40;

/// `S(ρ_A) + S(ρ_B) − S(ρ_AB)` in bits.
pub fn mutual_information(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubits(rho)?;
    let (a, b) = marginals(rho);
    let mi = matrix_entropy_bits(&a) + matrix_entropy_bits(&b) - von_neumann_entropy_bits(rho);
    Ok(mi.max(0.0))
}

/// Bell-diagonal mutual information `2 − H(p)`.
pub fn mutual_information_bds(t: TVector) -> Result<f64> {
    t.check_in_tetrahedron()?;
    let p = t.raw_probabilities().map(|x| x.max(0.0));
    Ok((2.0 - entropy_bits_of_spectrum(&p)).max(0.0))
}

/// `1 − h₂((1 + t_max)/2)` with `t_max = max |t_i|`.
pub fn classical_correlation_bds(t: TVector) -> Result<f64> {
    t.check_in_tetrahedron()?;
    let tmax = t.as_array().iter().map(|x| x.abs()).fold(0.0, f64::max).min(1.0);
    Ok(1.0 - binary_entropy((1.0 + tmax) / 2.0)?)
}

pub fn discord_bds(t: TVector) -> Result<f64> {
    Ok((mutual_information_bds(t)? - classical_correlation_bds(t)?).max(0.0))
}

/// Eigenvalues of a 2×2 Hermitian matrix.
fn eig2(m: &ComplexMatrix) -> [f64; 2] {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = m[(0, 1)];
    let mean = 0.5 * (a + d);
    let r = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    [mean + r, mean - r]
}

/// Precomputed blocks `⟨±n|_B ρ |±n⟩_B = ½(ρ_A ± Σ n_j X_j)`, `X_j = Tr_B ρ(𝕀⊗σ_j)`.
struct BMeasurement {
    rho_a: ComplexMatrix,
    x: [ComplexMatrix; 3],
}

impl BMeasurement {
    fn new(rho: &DensityMatrix) -> Self {
        let id = Pauli::I.matrix();
        let x = Pauli::XYZ.map(|p| {
            let op = rho.matrix().matmul(&kron(&id, &p.matrix()));
            partial_trace_matrix(&op, &[0]).expect("two-qubit operator")
        });
        let (rho_a, _) = marginals(rho);
        Self { rho_a, x }
    }

    /// Unnormalized conditional states of A for outcomes ±n.
    fn blocks(&self, theta: f64, phi: f64) -> [ComplexMatrix; 2] {
        let n = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
        let mut nx = ComplexMatrix::zeros(2, 2);
        for (nj, xj) in n.iter().zip(&self.x) {
            nx += &xj.scale_real(*nj);
        }
        [
            (&self.rho_a + &nx).scale_real(0.5),
            (&self.rho_a - &nx).scale_real(0.5),
        ]
    }

    /// `S(χ′)`: entropy of the dephased state, the union of both block spectra.
    fn dephased_entropy(&self, theta: f64, phi: f64) -> f64 {
        let [p, m] = self.blocks(theta, phi);
        let [a, b] = eig2(&p);
        let [c, d] = eig2(&m);
        entropy_bits_of_spectrum(&[a, b, c, d])
    }

    /// `Σ_k p_k S(ρ_A|k) = S(χ′) − H(p)`.
    fn conditional_entropy(&self, theta: f64, phi: f64) -> f64 {
        let [p, m] = self.blocks(theta, phi);
        let probs = [p.trace().re.max(0.0), m.trace().re.max(0.0)];
        let [a, b] = eig2(&p);
        let [c, d] = eig2(&m);
        entropy_bits_of_spectrum(&[a, b, c, d]) - entropy_bits_of_spectrum(&probs)
    }
}

/// `max_{Π_B} [S(ρ_A) − Σ p_k S(ρ_A|k)]` over projective measurements on B.
pub fn classical_correlation_bruteforce(rho: &DensityMatrix, refine_iters: usize) -> Result<f64> {
    require_two_qubits(rho)?;
    let meas = BMeasurement::new(rho);
    let s_a = matrix_entropy_bits(&meas.rho_a);
    let (_, _, min_cond) = minimize_bloch(|t, p| meas.conditional_entropy(t, p), refine_iters);
    Ok((s_a - min_cond).max(0.0))
}

/// `ℐ − 𝒞` with both terms computed generically; clamped at 0.
pub fn discord(rho: &DensityMatrix) -> Result<f64> {
    discord_with(rho, DEFAULT_REFINE_ITERS)
}

pub fn discord_with(rho: &DensityMatrix, refine_iters: usize) -> Result<f64> {
    let mi = mutual_information(rho)?;
    let cc = classical_correlation_bruteforce(rho, refine_iters)?;
    Ok((mi - cc).max(0.0))
}

/// Discord with the measurement on qubit A.
pub fn discord_left(rho: &DensityMatrix) -> Result<f64> {
    discord(&super::state::swap_qubits(rho)?)
}

/// `Σ_k (𝕀⊗|k⟩⟨k|) ρ (𝕀⊗|k⟩⟨k|)` for an orthonormal basis of B.
pub fn dephase(rho: &DensityMatrix, basis_b: [[C64; 2]; 2]) -> Result<DensityMatrix> {
    require_two_qubits(rho)?;
    let inner = |u: &[C64; 2], v: &[C64; 2]| u[0].conj() * v[0] + u[1].conj() * v[1];
    let deviation = [
        (inner(&basis_b[0], &basis_b[0]) - 1.0).norm(),
        (inner(&basis_b[1], &basis_b[1]) - 1.0).norm(),
        inner(&basis_b[0], &basis_b[1]).norm(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    if deviation > 1e-10 {
        return Err(Error::BadBasis(deviation));
    }
    let id = Pauli::I.matrix();
    let mut out = ComplexMatrix::zeros(4, 4);
    for k in &basis_b {
        let proj = kron(&id, &ComplexMatrix::outer(k, k));
        out += &proj.matmul(rho.matrix()).matmul(&proj);
    }
    DensityMatrix::new(out.hermitian_part())
}

/// Basis `{|n⟩, |−n⟩}` for Bloch direction `(θ, φ)`.
pub fn bloch_basis(theta: f64, phi: f64) -> [[C64; 2]; 2] {
    let (s, c) = (theta / 2.0).sin_cos();
    let e = C64::from_polar(1.0, phi);
    [
        [C64::new(c, 0.0), e * s],
        [-e.conj() * s, C64::new(c, 0.0)],
    ]
}

/// `min_{k} S(dephase(ρ)) − S(ρ)` in bits.
pub fn rel_entropy_discord_asym(rho: &DensityMatrix, refine_iters: usize) -> Result<f64> {
    require_two_qubits(rho)?;
    let meas = BMeasurement::new(rho);
    let s = von_neumann_entropy_bits(rho);
    let (_, _, min_s) = minimize_bloch(|t, p| meas.dephased_entropy(t, p), refine_iters);
    Ok((min_s - s).max(0.0))
}
