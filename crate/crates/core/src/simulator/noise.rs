use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::circuits::Gate;
use crate::error::{Error, Result};

/// Parametric noise: depolarizing after gates, bit flips on recorded outcomes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseModel {
    #[serde(default)]
    pub p_depol_1q: f64,
    #[serde(default)]
    pub p_depol_2q: f64,
    #[serde(default)]
    pub readout_flip_0to1: f64,
    #[serde(default)]
    pub readout_flip_1to0: f64,
}

impl NoiseModel {
    pub fn new(
        p_depol_1q: f64,
        p_depol_2q: f64,
        readout_flip_0to1: f64,
        readout_flip_1to0: f64,
    ) -> Result<Self> {
        let m = Self {
            p_depol_1q,
            p_depol_2q,
            readout_flip_0to1,
            readout_flip_1to0,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn noiseless() -> Self {
        Self::default()
    }

    pub fn validate(&self) -> Result<()> {
        for (field, v) in [
            ("p_depol_1q", self.p_depol_1q),
            ("p_depol_2q", self.p_depol_2q),
            ("readout_flip_0to1", self.readout_flip_0to1),
            ("readout_flip_1to0", self.readout_flip_1to0),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::config(field, format!("probability {v} outside [0, 1]")));
            }
        }
        Ok(())
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let m: Self = toml::from_str(text).map_err(|e| Error::config("noise", e.message()))?;
        m.validate()?;
        Ok(m)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn is_noiseless(&self) -> bool {
        *self == Self::default()
    }

    /// Depolarizing probability applied after `gate`. A controlled rotation
    /// is charged as two consecutive two-qubit gates.
    pub fn depolarizing_for(&self, gate: &Gate) -> f64 {
        match gate {
            Gate::Ry { .. } | Gate::Rz { .. } | Gate::H { .. } | Gate::X { .. } => self.p_depol_1q,
            Gate::Cnot { .. } => self.p_depol_2q,
            Gate::Cry { .. } => 1.0 - (1.0 - self.p_depol_2q).powi(2),
            Gate::Measure { .. } | Gate::Barrier => 0.0,
        }
    }

    /// `P(recorded | true)` for a single measured bit.
    pub fn readout_prob(&self, recorded: u8, truth: u8) -> f64 {
        match (truth, recorded) {
            (0, 0) => 1.0 - self.readout_flip_0to1,
            (0, _) => self.readout_flip_0to1,
            (_, 1) => 1.0 - self.readout_flip_1to0,
            _ => self.readout_flip_1to0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_toml() {
        let m = NoiseModel::from_toml_str("p_depol_1q = 0.001\np_depol_2q = 0.02\nreadout_flip_0to1 = 0.01\n")
            .unwrap();
        assert_eq!(m.p_depol_2q, 0.02);
        assert_eq!(m.readout_flip_1to0, 0.0);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(matches!(
            NoiseModel::from_toml_str("p_depol_1q = 1.5"),
            Err(Error::Config { .. })
        ));
        assert!(NoiseModel::from_toml_str("p_depol = 0.1").is_err());
        assert!(NoiseModel::new(0.0, -0.1, 0.0, 0.0).is_err());
    }

    #[test]
    fn cry_counts_twice() {
        let m = NoiseModel::new(0.0, 0.1, 0.0, 0.0).unwrap();
        let g = Gate::Cry { control: 0, target: 1, angle: 0.3 };
        assert!((m.depolarizing_for(&g) - 0.19).abs() < 1e-15);
    }

    #[test]
    fn readout_rows_sum_to_one() {
        let m = NoiseModel::new(0.0, 0.0, 0.1, 0.3).unwrap();
        for truth in 0..2 {
            let s: f64 = (0..2).map(|r| m.readout_prob(r, truth)).sum();
            assert!((s - 1.0).abs() < 1e-15);
        }
    }
}
