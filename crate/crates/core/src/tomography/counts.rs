use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Pauli;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn pauli(self) -> Pauli {
        match self {
            Axis::X => Pauli::X,
            Axis::Y => Pauli::Y,
            Axis::Z => Pauli::Z,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    fn letter(self) -> char {
        ['X', 'Y', 'Z'][self.index()]
    }

    fn from_letter(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'X' => Some(Axis::X),
            'Y' => Some(Axis::Y),
            'Z' => Some(Axis::Z),
            _ => None,
        }
    }
}

/// Local Pauli axes measured on the two output qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MeasurementSetting {
    pub axis_a: Axis,
    pub axis_b: Axis,
}

impl MeasurementSetting {
    pub fn new(axis_a: Axis, axis_b: Axis) -> Self {
        Self { axis_a, axis_b }
    }

    /// The nine settings in `XX, XY, …, ZZ` order.
    pub fn all() -> [MeasurementSetting; 9] {
        std::array::from_fn(|k| Self::new(Axis::ALL[k / 3], Axis::ALL[k % 3]))
    }

    pub fn index(self) -> usize {
        3 * self.axis_a.index() + self.axis_b.index()
    }
}

impl fmt::Display for MeasurementSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.axis_a.letter(), self.axis_b.letter())
    }
}

impl FromStr for MeasurementSetting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.trim().chars().collect();
        match chars.as_slice() {
            [a, b] => match (Axis::from_letter(*a), Axis::from_letter(*b)) {
                (Some(a), Some(b)) => Ok(Self::new(a, b)),
                _ => Err(Error::MissingSetting(format!("unrecognized setting `{s}`"))),
            },
            _ => Err(Error::MissingSetting(format!("unrecognized setting `{s}`"))),
        }
    }
}

impl Serialize for MeasurementSetting {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MeasurementSetting {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shot counts keyed by tomography bits followed by circuit bits.
///
/// Keys are stored without separators; the JSON form writes `b|d` when
/// circuit bits are present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountsTable {
    pub setting: Option<MeasurementSetting>,
    pub n_tomo_bits: usize,
    pub n_circuit_bits: usize,
    counts: BTreeMap<String, u64>,
}

#[derive(Serialize, Deserialize)]
struct CountsDocument {
    #[serde(default)]
    setting: Option<MeasurementSetting>,
    #[serde(default)]
    shots: Option<u64>,
    n_tomo_bits: usize,
    #[serde(default)]
    n_circuit_bits: usize,
    counts: BTreeMap<String, u64>,
}

impl CountsTable {
    pub fn new(
        setting: Option<MeasurementSetting>,
        n_tomo_bits: usize,
        n_circuit_bits: usize,
        counts: impl IntoIterator<Item = (String, u64)>,
    ) -> Result<Self> {
        let mut table = Self {
            setting,
            n_tomo_bits,
            n_circuit_bits,
            counts: BTreeMap::new(),
        };
        for (key, n) in counts {
            let clean: String = key.chars().filter(|&c| c != '|').collect();
            if clean.len() != n_tomo_bits + n_circuit_bits || !clean.chars().all(|c| c == '0' || c == '1') {
                return Err(Error::InvalidState(format!(
                    "count key `{key}` does not have {} bits",
                    n_tomo_bits + n_circuit_bits
                )));
            }
            *table.counts.entry(clean).or_insert(0) += n;
        }
        Ok(table)
    }

    pub fn counts(&self) -> &BTreeMap<String, u64> {
        &self.counts
    }

    pub fn shots(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn get(&self, key: &str) -> u64 {
        let clean: String = key.chars().filter(|&c| c != '|').collect();
        self.counts.get(&clean).copied().unwrap_or(0)
    }

    /// Relative frequencies of each key.
    pub fn frequencies(&self) -> BTreeMap<String, f64> {
        let total = self.shots() as f64;
        self.counts
            .iter()
            .map(|(k, &n)| (k.clone(), n as f64 / total))
            .collect()
    }

    fn display_key(&self, key: &str) -> String {
        if self.n_circuit_bits == 0 {
            key.to_string()
        } else {
            format!("{}|{}", &key[..self.n_tomo_bits], &key[self.n_tomo_bits..])
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = CountsDocument {
            setting: self.setting,
            shots: Some(self.shots()),
            n_tomo_bits: self.n_tomo_bits,
            n_circuit_bits: self.n_circuit_bits,
            counts: self
                .counts
                .iter()
                .map(|(k, &n)| (self.display_key(k), n))
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: CountsDocument = serde_json::from_str(text)?;
        Self::from_document(doc)
    }

    fn from_document(doc: CountsDocument) -> Result<Self> {
        let table = Self::new(doc.setting, doc.n_tomo_bits, doc.n_circuit_bits, doc.counts)?;
        if let Some(shots) = doc.shots {
            if shots != table.shots() {
                return Err(Error::InvalidState(format!(
                    "declared shots {shots} differ from count total {}",
                    table.shots()
                )));
            }
        }
        Ok(table)
    }

    /// Parses either a single table or an array of tables.
    pub fn many_from_json(text: &str) -> Result<Vec<Self>> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let docs: Vec<CountsDocument> = if value.is_array() {
            serde_json::from_value(value)?
        } else {
            vec![serde_json::from_value(value)?]
        };
        docs.into_iter().map(Self::from_document).collect()
    }
}

/// Sums out the circuit bits, keeping only tomography bits.
pub fn aggregate_counts(t: &CountsTable) -> CountsTable {
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for (k, &n) in &t.counts {
        *counts.entry(k[..t.n_tomo_bits].to_string()).or_insert(0) += n;
    }
    CountsTable {
        setting: t.setting,
        n_tomo_bits: t.n_tomo_bits,
        n_circuit_bits: 0,
        counts,
    }
}
