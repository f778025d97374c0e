//! Two-qubit encoders `G|00⟩ = Σ √p_jk |jk⟩` and their parameter solvers.

use serde::{Deserialize, Serialize};

use super::ir::Circuit;
use crate::bds::BellProbabilities;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompactParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CanonicalParams {
    pub psi: f64,
    pub theta: f64,
    pub phi: f64,
}

fn check_finite(angles: &[f64]) -> Result<()> {
    if let Some(a) = angles.iter().find(|a| !a.is_finite()) {
        return Err(Error::BadEncoder(format!("non-finite angle {a}")));
    }
    Ok(())
}

/// RY(α) on a; CNOT a→b; RY(β) on a; RY(γ) on b.
pub fn build_g_compact(p: CompactParams) -> Result<Circuit> {
    check_finite(&[p.alpha, p.beta, p.gamma])?;
    let mut c = Circuit::new(2, 0);
    c.ry(0, p.alpha).cnot(0, 1).ry(0, p.beta).ry(1, p.gamma);
    Ok(c)
}

/// RY(2ψ) on b; CRY(2θ) b→a; CRY(−2φ) a→b.
pub fn build_g_canonical(p: CanonicalParams) -> Result<Circuit> {
    check_finite(&[p.psi, p.theta, p.phi])?;
    let mut c = Circuit::new(2, 0);
    c.ry(1, 2.0 * p.psi)
        .cry(1, 0, 2.0 * p.theta)
        .cry(0, 1, -2.0 * p.phi);
    Ok(c)
}

/// Independent rotations on each qubit. Only reaches product distributions.
pub fn build_g_two_param(theta_a: f64, theta_b: f64) -> Result<Circuit> {
    check_finite(&[theta_a, theta_b])?;
    let mut c = Circuit::new(2, 0);
    c.ry(0, theta_a).ry(1, theta_b);
    Ok(c)
}

/// H on the first qubit, then CNOT first→second.
pub fn bell_basis_change() -> Circuit {
    let mut c = Circuit::new(2, 0);
    c.h(0).cnot(0, 1);
    c
}

const SINGULAR_COS: f64 = 1e-8;

/// Analytic inversion of the compact encoder.
pub fn solve_compact_params(p: &BellProbabilities) -> CompactParams {
    let [a00, a01, a10, a11] = p.amplitudes();
    let det = a00 * a11 - a01 * a10;
    // 1 ∓ 2det as sums of squares, so cos α keeps full relative precision near ±π/2
    let one_minus = (a00 - a11).powi(2) + (a01 + a10).powi(2);
    let one_plus = (a00 + a11).powi(2) + (a01 - a10).powi(2);
    let cos_alpha = (one_minus * one_plus).sqrt();
    let alpha = (2.0 * det).atan2(cos_alpha);

    if cos_alpha < SINGULAR_COS {
        return CompactParams {
            alpha,
            beta: 2.0 * a10.atan2(a00),
            gamma: 0.0,
        };
    }

    let (sa, ca) = (alpha / 2.0).sin_cos();
    // A = b cᵀ with b = (c_β, s_β), c = (c_γ, s_γ)
    let m = [
        [(ca * a00 - sa * a11) / cos_alpha, (ca * a01 + sa * a10) / cos_alpha],
        [(ca * a10 + sa * a01) / cos_alpha, (ca * a11 - sa * a00) / cos_alpha],
    ];
    let aat = [
        [
            m[0][0] * m[0][0] + m[0][1] * m[0][1],
            m[0][0] * m[1][0] + m[0][1] * m[1][1],
        ],
        [
            m[1][0] * m[0][0] + m[1][1] * m[0][1],
            m[1][0] * m[1][0] + m[1][1] * m[1][1],
        ],
    ];
    let project = |x: [f64; 2]| {
        let v = [
            aat[0][0] * x[0] + aat[0][1] * x[1],
            aat[1][0] * x[0] + aat[1][1] * x[1],
        ];
        let n = v[0].hypot(v[1]);
        (v, n)
    };
    let (mut b, mut n) = project([1.0, 1.0]);
    if n < 1e-12 {
        (b, n) = project([1.0, -1.0]);
    }
    b = [b[0] / n, b[1] / n];
    if b[0] < 0.0 || (b[0] == 0.0 && b[1] < 0.0) {
        b = [-b[0], -b[1]];
    }
    let c = [
        m[0][0] * b[0] + m[1][0] * b[1],
        m[0][1] * b[0] + m[1][1] * b[1],
    ];
    CompactParams {
        alpha,
        beta: 2.0 * b[1].atan2(b[0]),
        gamma: 2.0 * c[1].atan2(c[0]),
    }
}

/// Iterative cosine chain for the canonical encoder.
///
/// Each angle is `atan2(√rest, √head)`, which equals the arccos of the clamped
/// square-root quotient, reads 0/0 as cosine 1, and keeps amplitudes of order
/// `√ε` that the quotient form would round away.
pub fn solve_canonical_params(p: &BellProbabilities) -> CanonicalParams {
    let [p00, p01, p10, p11] = p.as_array().map(|x| x.max(0.0));
    CanonicalParams {
        psi: (p01 + p10 + p11).sqrt().atan2(p00.sqrt()),
        theta: (p10 + p11).sqrt().atan2(p01.sqrt()),
        phi: p10.sqrt().atan2(p11.sqrt()),
    }
}

/// Forward map of the canonical chart: `(√p00, √p01, √p10, √p11)`.
pub fn canonical_amplitudes(p: CanonicalParams) -> [f64; 4] {
    let (sp, cp) = p.psi.sin_cos();
    let (st, ct) = p.theta.sin_cos();
    let (sf, cf) = p.phi.sin_cos();
    [cp, sp * ct, sp * st * sf, sp * st * cf]
}
