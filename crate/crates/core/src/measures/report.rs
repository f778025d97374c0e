use serde::{Deserialize, Serialize};

use super::discord::{
    classical_correlation_bds, classical_correlation_bruteforce, discord_bds, mutual_information,
    mutual_information_bds, DEFAULT_REFINE_ITERS,
};
use super::entanglement::{
    chsh_quantities, chsh_quantities_bds, concurrence, concurrence_bds, eof_from_concurrence,
    steering3, steering3_general,
};
use super::fidelity::fidelity;
use super::state::GeneralTwoQubitState;
use crate::bds::ppt_min_eigenvalue;
use crate::error::Result;
use crate::linalg::DensityMatrix;

/// Tolerance on marginals and off-diagonal correlations for the closed-form path.
pub const BDS_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasurePath {
    ClosedForm,
    Optimizer,
}

/// Every correlation quantity of a two-qubit state. Entropic fields are in bits.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub eof: f64,
    pub concurrence: f64,
    pub chsh_m: f64,
    pub chsh_l: f64,
    pub steering3: f64,
    pub mutual_info: f64,
    pub classical_corr: f64,
    pub discord: f64,
    pub ppt_min_eig: f64,
    pub fidelity_vs_target: Option<f64>,
    pub path: MeasurePath,
}

/// Computes all measures, using closed forms when `rho` is Bell-diagonal
/// within [`BDS_TOL`] and generic optimizers otherwise.
pub fn report(rho: &DensityMatrix, target: Option<&DensityMatrix>) -> Result<MeasureReport> {
    let g = GeneralTwoQubitState::new(rho)?;
    let ppt_min_eig = ppt_min_eigenvalue(rho)?;
    let fidelity_vs_target = target.map(|t| fidelity(t, rho)).transpose()?;
    let bds_t = g
        .bds_t_vector(BDS_TOL)
        .filter(|t| t.in_tetrahedron());
    let r = if let Some(t) = bds_t {
        let c = concurrence_bds(t)?;
        let (m, l) = chsh_quantities_bds(t)?;
        MeasureReport {
            eof: eof_from_concurrence(c),
            concurrence: c,
            chsh_m: m,
            chsh_l: l,
            steering3: steering3(t)?,
            mutual_info: mutual_information_bds(t)?,
            classical_corr: classical_correlation_bds(t)?,
            discord: discord_bds(t)?,
            ppt_min_eig,
            fidelity_vs_target,
            path: MeasurePath::ClosedForm,
        }
    } else {
        let c = concurrence(rho)?;
        let (m, l) = chsh_quantities(rho)?;
        let mi = mutual_information(rho)?;
        let cc = classical_correlation_bruteforce(rho, DEFAULT_REFINE_ITERS)?;
        MeasureReport {
            eof: eof_from_concurrence(c),
            concurrence: c,
            chsh_m: m,
            chsh_l: l,
            steering3: steering3_general(rho)?,
            mutual_info: mi,
            classical_corr: cc,
            discord: (mi - cc).max(0.0),
            ppt_min_eig,
            fidelity_vs_target,
            path: MeasurePath::Optimizer,
        }
    };
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bds::{bds_density, BellProbabilities};

    #[test]
    fn mixed_state_has_no_correlations() {
        let r = report(&DensityMatrix::maximally_mixed(2), None).unwrap();
        assert_eq!(r.path, MeasurePath::ClosedForm);
        for v in [r.eof, r.concurrence, r.chsh_l, r.steering3, r.mutual_info, r.classical_corr, r.discord] {
            assert!(v.abs() < 1e-12);
        }
        assert!((r.ppt_min_eig - 0.25).abs() < 1e-12);
    }

    #[test]
    fn bell_state_corner_values() {
        let rho = bds_density(&BellProbabilities::new(0.0, 0.0, 0.0, 1.0).unwrap());
        let r = report(&rho, Some(&rho)).unwrap();
        let expect = [(r.eof, 1.0), (r.chsh_l, 1.0), (r.steering3, 1.0), (r.mutual_info, 2.0), (r.classical_corr, 1.0), (r.discord, 1.0)];
        for (got, want) in expect {
            assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        }
        assert!((r.fidelity_vs_target.unwrap() - 1.0).abs() < 1e-9);
    }
}
