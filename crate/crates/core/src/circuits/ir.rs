//! Gate-level circuit representation with classical bits and conditioning.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kron, ComplexMatrix, C64, ONE, ZERO};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    /// `R_y(θ) = exp(−iYθ/2)`.
    Ry { qubit: usize, angle: f64 },
    /// `R_z(θ) = exp(−iZθ/2)`; used only for tomography pre-rotations.
    Rz { qubit: usize, angle: f64 },
    H { qubit: usize },
    X { qubit: usize },
    Cnot { control: usize, target: usize },
    /// `|0⟩⟨0|⊗𝕀 + |1⟩⟨1|⊗R_y(angle)` on (control, target).
    Cry { control: usize, target: usize, angle: f64 },
    Measure { qubit: usize, clbit: usize },
    Barrier,
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Ry { qubit, .. }
            | Gate::Rz { qubit, .. }
            | Gate::H { qubit }
            | Gate::X { qubit }
            | Gate::Measure { qubit, .. } => vec![qubit],
            Gate::Cnot { control, target } | Gate::Cry { control, target, .. } => {
                vec![control, target]
            }
            Gate::Barrier => Vec::new(),
        }
    }

    pub fn is_measurement(&self) -> bool {
        matches!(self, Gate::Measure { .. })
    }

    pub fn is_unitary(&self) -> bool {
        !matches!(self, Gate::Measure { .. } | Gate::Barrier)
    }

    /// CNOT-equivalent cost: a controlled rotation counts as two CNOTs.
    pub fn cnot_cost(&self) -> usize {
        match self {
            Gate::Cnot { .. } => 1,
            Gate::Cry { .. } => 2,
            _ => 0,
        }
    }

    /// Local matrix acting on `self.qubits()` in listed order.
    pub fn local_matrix(&self) -> Option<ComplexMatrix> {
        let m = match *self {
            Gate::Ry { angle, .. } => ry_matrix(angle),
            Gate::Rz { angle, .. } => {
                let h = angle / 2.0;
                ComplexMatrix::from_rows(&[
                    &[C64::from_polar(1.0, -h), ZERO],
                    &[ZERO, C64::from_polar(1.0, h)],
                ])
            }
            Gate::H { .. } => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                ComplexMatrix::from_real_rows(&[&[s, s], &[s, -s]])
            }
            Gate::X { .. } => ComplexMatrix::from_rows(&[&[ZERO, ONE], &[ONE, ZERO]]),
            Gate::Cnot { .. } => ComplexMatrix::from_real_rows(&[
                &[1.0, 0.0, 0.0, 0.0],
                &[0.0, 1.0, 0.0, 0.0],
                &[0.0, 0.0, 0.0, 1.0],
                &[0.0, 0.0, 1.0, 0.0],
            ]),
            Gate::Cry { angle, .. } => {
                let p0 = ComplexMatrix::diag_real(&[1.0, 0.0]);
                let p1 = ComplexMatrix::diag_real(&[0.0, 1.0]);
                &kron(&p0, &ComplexMatrix::identity(2)) + &kron(&p1, &ry_matrix(angle))
            }
            Gate::Measure { .. } | Gate::Barrier => return None,
        };
        Some(m)
    }

    /// Relabels qubit `q` as `map[q]`.
    pub fn map_qubits(&self, map: &[usize]) -> Gate {
        let m = |q: usize| map[q];
        match *self {
            Gate::Ry { qubit, angle } => Gate::Ry { qubit: m(qubit), angle },
            Gate::Rz { qubit, angle } => Gate::Rz { qubit: m(qubit), angle },
            Gate::H { qubit } => Gate::H { qubit: m(qubit) },
            Gate::X { qubit } => Gate::X { qubit: m(qubit) },
            Gate::Cnot { control, target } => Gate::Cnot {
                control: m(control),
                target: m(target),
            },
            Gate::Cry { control, target, angle } => Gate::Cry {
                control: m(control),
                target: m(target),
                angle,
            },
            Gate::Measure { qubit, clbit } => Gate::Measure { qubit: m(qubit), clbit },
            Gate::Barrier => Gate::Barrier,
        }
    }
}

pub fn ry_matrix(angle: f64) -> ComplexMatrix {
    let (s, c) = (angle / 2.0).sin_cos();
    ComplexMatrix::from_real_rows(&[&[c, -s], &[s, c]])
}

/// Apply only when classical bit `clbit` currently holds `value`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition {
    pub clbit: usize,
    pub value: u8,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GateOp {
    pub gate: Gate,
    pub condition: Option<Condition>,
}

/// Ordered gate list over `n_qubits` qubits and `n_clbits` classical bits.
///
/// `output` lists the qubits holding the prepared state, in the order they
/// form the output register (first entry most significant).
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    n_clbits: usize,
    ops: Vec<GateOp>,
    output: Vec<usize>,
}

impl Circuit {
    pub fn new(n_qubits: usize, n_clbits: usize) -> Self {
        Self {
            n_qubits,
            n_clbits,
            ops: Vec::new(),
            output: (0..n_qubits).collect(),
        }
    }

    /// Builds a circuit from raw ops, validating indices and conditions.
    pub fn from_ops(
        n_qubits: usize,
        n_clbits: usize,
        ops: Vec<GateOp>,
        output: Option<Vec<usize>>,
    ) -> Result<Self> {
        let c = Self {
            n_qubits,
            n_clbits,
            ops,
            output: output.unwrap_or_else(|| (0..n_qubits).collect()),
        };
        c.validate()?;
        Ok(c)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_clbits(&self) -> usize {
        self.n_clbits
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn output(&self) -> &[usize] {
        &self.output
    }

    pub fn with_output(mut self, output: Vec<usize>) -> Self {
        assert!(output.iter().all(|&q| q < self.n_qubits));
        self.output = output;
        self
    }

    pub fn has_measurements(&self) -> bool {
        self.ops.iter().any(|op| op.gate.is_measurement())
    }

    pub fn cnot_cost(&self) -> usize {
        self.ops.iter().map(|op| op.gate.cnot_cost()).sum()
    }

    pub fn gate_count(&self) -> usize {
        self.ops
            .iter()
            .filter(|op| !matches!(op.gate, Gate::Barrier))
            .count()
    }

    fn push_op(&mut self, gate: Gate, condition: Option<Condition>) -> &mut Self {
        for q in gate.qubits() {
            assert!(q < self.n_qubits, "qubit {q} out of range");
        }
        if let Gate::Measure { clbit, .. } = gate {
            assert!(clbit < self.n_clbits, "clbit {clbit} out of range");
        }
        self.ops.push(GateOp { gate, condition });
        self
    }

    pub fn push(&mut self, gate: Gate) -> &mut Self {
        self.push_op(gate, None)
    }

    pub fn push_if(&mut self, gate: Gate, clbit: usize, value: u8) -> &mut Self {
        self.push_op(gate, Some(Condition { clbit, value }))
    }

    pub fn ry(&mut self, qubit: usize, angle: f64) -> &mut Self {
        self.push(Gate::Ry { qubit, angle })
    }

    pub fn rz(&mut self, qubit: usize, angle: f64) -> &mut Self {
        self.push(Gate::Rz { qubit, angle })
    }

    pub fn h(&mut self, qubit: usize) -> &mut Self {
        self.push(Gate::H { qubit })
    }

    pub fn x(&mut self, qubit: usize) -> &mut Self {
        self.push(Gate::X { qubit })
    }

    pub fn cnot(&mut self, control: usize, target: usize) -> &mut Self {
        self.push(Gate::Cnot { control, target })
    }

    pub fn cry(&mut self, control: usize, target: usize, angle: f64) -> &mut Self {
        self.push(Gate::Cry { control, target, angle })
    }

    pub fn measure(&mut self, qubit: usize, clbit: usize) -> &mut Self {
        self.push(Gate::Measure { qubit, clbit })
    }

    pub fn barrier(&mut self) -> &mut Self {
        self.push(Gate::Barrier)
    }

    /// Appends `other` with its qubit `i` placed on `qubit_map[i]`.
    /// Classical bits of `other` must be absent.
    pub fn append_mapped(&mut self, other: &Circuit, qubit_map: &[usize]) -> &mut Self {
        assert_eq!(qubit_map.len(), other.n_qubits);
        assert!(!other.has_measurements() && other.ops.iter().all(|o| o.condition.is_none()));
        for op in &other.ops {
            self.push_op(op.gate.map_qubits(qubit_map), None);
        }
        self
    }

    /// Checks index bounds, and that every condition reads a bit written earlier.
    pub fn validate(&self) -> Result<()> {
        if self.output.is_empty() || self.output.iter().any(|&q| q >= self.n_qubits) {
            return Err(Error::MalformedCircuit(format!(
                "output qubits {:?} invalid for {} qubits",
                self.output, self.n_qubits
            )));
        }
        let mut written = vec![false; self.n_clbits];
        for (idx, op) in self.ops.iter().enumerate() {
            let qubits = op.gate.qubits();
            if let Some(&q) = qubits.iter().find(|&&q| q >= self.n_qubits) {
                return Err(Error::MalformedCircuit(format!(
                    "op {idx}: qubit {q} out of range"
                )));
            }
            if qubits.len() == 2 && qubits[0] == qubits[1] {
                return Err(Error::MalformedCircuit(format!(
                    "op {idx}: control equals target"
                )));
            }
            if let Some(cond) = op.condition {
                if cond.clbit >= self.n_clbits || !written[cond.clbit] {
                    return Err(Error::MalformedCircuit(format!(
                        "op {idx}: condition on unwritten clbit {}",
                        cond.clbit
                    )));
                }
                if cond.value > 1 {
                    return Err(Error::MalformedCircuit(format!(
                        "op {idx}: condition value {} is not a bit",
                        cond.value
                    )));
                }
            }
            if let Gate::Measure { clbit, .. } = op.gate {
                if clbit >= self.n_clbits {
                    return Err(Error::MalformedCircuit(format!(
                        "op {idx}: clbit {clbit} out of range"
                    )));
                }
                written[clbit] = true;
            }
        }
        Ok(())
    }

    /// Full `2^n × 2^n` unitary of a measurement-free, unconditioned circuit.
    pub fn unitary(&self) -> Result<ComplexMatrix> {
        let mut u = ComplexMatrix::identity(1 << self.n_qubits);
        for op in &self.ops {
            if op.condition.is_some() || op.gate.is_measurement() {
                return Err(Error::MalformedCircuit(
                    "unitary requested for a circuit with measurements or conditions".into(),
                ));
            }
            if let Some(g) = embed_gate(&op.gate, self.n_qubits) {
                u = g.matmul(&u);
            }
        }
        Ok(u)
    }

    /// Output amplitudes for input `|0…0⟩`.
    pub fn statevector(&self) -> Result<Vec<C64>> {
        Ok(self.unitary()?.column(0))
    }
}

/// Lifts a gate to the full register (qubit 0 most significant).
pub fn embed_gate(gate: &Gate, n_qubits: usize) -> Option<ComplexMatrix> {
    let local = gate.local_matrix()?;
    let qubits = gate.qubits();
    Some(embed_local(&local, &qubits, n_qubits))
}

/// Embeds `local` (acting on `qubits` in order) into an `n_qubits` register.
pub fn embed_local(local: &ComplexMatrix, qubits: &[usize], n_qubits: usize) -> ComplexMatrix {
    let d = 1usize << n_qubits;
    let k = qubits.len();
    let mut out = ComplexMatrix::zeros(d, d);
    let sub = |index: usize| {
        qubits
            .iter()
            .fold(0usize, |acc, &q| (acc << 1) | ((index >> (n_qubits - 1 - q)) & 1))
    };
    let mut mask = 0usize;
    for &q in qubits {
        mask |= 1 << (n_qubits - 1 - q);
    }
    let place = |base: usize, local_index: usize| {
        let mut idx = base & !mask;
        for (pos, &q) in qubits.iter().enumerate() {
            let b = (local_index >> (k - 1 - pos)) & 1;
            idx |= b << (n_qubits - 1 - q);
        }
        idx
    };
    for col in 0..d {
        let lc = sub(col);
        for lr in 0..(1 << k) {
            let v = local[(lr, lc)];
            if v != ZERO {
                out[(place(col, lr), col)] = v;
            }
        }
    }
    out
}

/// Serialized form: one record per op.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateRecord {
    pub kind: String,
    #[serde(default)]
    pub qubits: Vec<usize>,
    #[serde(default)]
    pub clbits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
    #[serde(default)]
    pub condition: Option<Condition>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitDocument {
    pub n_qubits: usize,
    pub n_clbits: usize,
    pub output: Vec<usize>,
    pub cnot_cost: usize,
    pub ops: Vec<GateRecord>,
}

impl From<&GateOp> for GateRecord {
    fn from(op: &GateOp) -> Self {
        let (kind, angle, clbits) = match op.gate {
            Gate::Ry { angle, .. } => ("ry", Some(angle), vec![]),
            Gate::Rz { angle, .. } => ("rz", Some(angle), vec![]),
            Gate::H { .. } => ("h", None, vec![]),
            Gate::X { .. } => ("x", None, vec![]),
            Gate::Cnot { .. } => ("cnot", None, vec![]),
            Gate::Cry { angle, .. } => ("cry", Some(angle), vec![]),
            Gate::Measure { clbit, .. } => ("measure", None, vec![clbit]),
            Gate::Barrier => ("barrier", None, vec![]),
        };
        GateRecord {
            kind: kind.to_string(),
            qubits: op.gate.qubits(),
            clbits,
            angle,
            condition: op.condition,
        }
    }
}

impl TryFrom<&GateRecord> for GateOp {
    type Error = Error;

    fn try_from(r: &GateRecord) -> Result<Self> {
        let bad = |msg: &str| Error::MalformedCircuit(format!("{} gate: {msg}", r.kind));
        let q = |n: usize| -> Result<&[usize]> {
            if r.qubits.len() == n {
                Ok(&r.qubits)
            } else {
                Err(bad(&format!("expected {n} qubits")))
            }
        };
        let angle = || r.angle.ok_or_else(|| bad("missing angle"));
        let gate = match r.kind.as_str() {
            "ry" => Gate::Ry { qubit: q(1)?[0], angle: angle()? },
            "rz" => Gate::Rz { qubit: q(1)?[0], angle: angle()? },
            "h" => Gate::H { qubit: q(1)?[0] },
            "x" => Gate::X { qubit: q(1)?[0] },
            "cnot" => {
                let qs = q(2)?;
                Gate::Cnot { control: qs[0], target: qs[1] }
            }
            "cry" => {
                let qs = q(2)?;
                Gate::Cry { control: qs[0], target: qs[1], angle: angle()? }
            }
            "measure" => {
                let qs = q(1)?;
                let clbit = *r.clbits.first().ok_or_else(|| bad("missing clbit"))?;
                Gate::Measure { qubit: qs[0], clbit }
            }
            "barrier" => Gate::Barrier,
            other => return Err(Error::MalformedCircuit(format!("unknown gate kind `{other}`"))),
        };
        Ok(GateOp { gate, condition: r.condition })
    }
}

impl Circuit {
    pub fn to_document(&self) -> CircuitDocument {
        CircuitDocument {
            n_qubits: self.n_qubits,
            n_clbits: self.n_clbits,
            output: self.output.clone(),
            cnot_cost: self.cnot_cost(),
            ops: self.ops.iter().map(GateRecord::from).collect(),
        }
    }

    pub fn from_document(doc: &CircuitDocument) -> Result<Self> {
        let ops = doc
            .ops
            .iter()
            .map(GateOp::try_from)
            .collect::<Result<Vec<_>>>()?;
        Self::from_ops(doc.n_qubits, doc.n_clbits, ops, Some(doc.output.clone()))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_document())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_document(&serde_json::from_str(text)?)
    }
}
