//! Preparation templates wrapping an encoder `G` into a full BDS or Werner circuit.

use super::encoders::bell_basis_change;
use super::ir::{Circuit, Gate};
use crate::bds::WernerParam;
use crate::error::{Error, Result};

fn check_encoder(g: &Circuit) -> Result<()> {
    if g.n_qubits() != 2 {
        return Err(Error::BadEncoder(format!(
            "encoder must act on 2 qubits, got {}",
            g.n_qubits()
        )));
    }
    if g.has_measurements() || g.ops().iter().any(|op| op.condition.is_some()) {
        return Err(Error::BadEncoder(
            "encoder must be measurement-free and unconditioned".into(),
        ));
    }
    Ok(())
}

/// Four qubits (a,b,c,d): G on (a,b), copy to (c,d), Bell change on (c,d).
/// The state lives on (c,d).
pub fn build_four_qubit(g: &Circuit) -> Result<Circuit> {
    check_encoder(g)?;
    let mut c = Circuit::new(4, 0);
    c.append_mapped(g, &[0, 1])
        .barrier()
        .cnot(0, 2)
        .cnot(1, 3)
        .barrier()
        .append_mapped(&bell_basis_change(), &[2, 3]);
    Ok(c.with_output(vec![2, 3]))
}

/// G, unread measurements of both qubits, Bell change.
pub fn build_two_qubit(g: &Circuit) -> Result<Circuit> {
    check_encoder(g)?;
    let mut c = Circuit::new(2, 2);
    c.append_mapped(g, &[0, 1])
        .barrier()
        .measure(0, 0)
        .measure(1, 1)
        .barrier()
        .append_mapped(&bell_basis_change(), &[0, 1]);
    Ok(c)
}

/// G, entangle with ancillas (c,d), Bell change on (a,b). The state lives on (a,b).
pub fn build_four_qubit_ancilla(g: &Circuit) -> Result<Circuit> {
    check_encoder(g)?;
    let mut c = Circuit::new(4, 0);
    c.append_mapped(g, &[0, 1])
        .barrier()
        .cnot(0, 2)
        .cnot(1, 3)
        .barrier()
        .append_mapped(&bell_basis_change(), &[0, 1]);
    Ok(c.with_output(vec![0, 1]))
}

/// Werner preparation with one mid-circuit measurement.
///
/// Outcome 1 on `a` (probability w) routes to `B|11⟩`; outcome 0 produces
/// `|+⟩|+⟩` and measures both qubits unread, leaving `𝕀/4`.
pub fn build_werner_circuit(w: WernerParam) -> Circuit {
    let theta = 2.0 * w.value().sqrt().asin();
    let mut c = Circuit::new(2, 3);
    c.ry(0, theta).measure(0, 0).barrier();
    c.push_if(Gate::X { qubit: 1 }, 0, 1)
        .push_if(Gate::H { qubit: 0 }, 0, 1)
        .push_if(Gate::Cnot { control: 0, target: 1 }, 0, 1);
    c.push_if(Gate::H { qubit: 0 }, 0, 0)
        .push_if(Gate::H { qubit: 1 }, 0, 0)
        .push_if(Gate::Measure { qubit: 0, clbit: 1 }, 0, 0)
        .push_if(Gate::Measure { qubit: 1, clbit: 2 }, 0, 0);
    c
}

/// Which preparation template wraps the encoder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Template {
    FourQubit,
    TwoQubit,
    FourQubitAncilla,
}

impl Template {
    pub const ALL: [Template; 3] = [Template::FourQubit, Template::TwoQubit, Template::FourQubitAncilla];

    pub fn build(self, g: &Circuit) -> Result<Circuit> {
        match self {
            Template::FourQubit => build_four_qubit(g),
            Template::TwoQubit => build_two_qubit(g),
            Template::FourQubitAncilla => build_four_qubit_ancilla(g),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Template::FourQubit => "four-qubit",
            Template::TwoQubit => "two-qubit",
            Template::FourQubitAncilla => "four-qubit-ancilla",
        }
    }
}

impl std::str::FromStr for Template {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Template::ALL
            .into_iter()
            .find(|t| t.name() == s.replace('_', "-"))
            .ok_or_else(|| Error::config("template", format!("unknown template `{s}`")))
    }
}

/// Which encoder realizes `G`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Encoder {
    Compact,
    Canonical,
}

impl Encoder {
    pub const ALL: [Encoder; 2] = [Encoder::Compact, Encoder::Canonical];

    pub fn build(self, p: &crate::bds::BellProbabilities) -> Result<Circuit> {
        match self {
            Encoder::Compact => super::build_g_compact(super::solve_compact_params(p)),
            Encoder::Canonical => super::build_g_canonical(super::solve_canonical_params(p)),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Encoder::Compact => "compact",
            Encoder::Canonical => "canonical",
        }
    }
}

impl std::str::FromStr for Encoder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Encoder::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::config("encoder", format!("unknown encoder `{s}`")))
    }
}

/// Full preparation circuit for `p` with the chosen encoder and template.
pub fn prepare_bds(
    p: &crate::bds::BellProbabilities,
    encoder: Encoder,
    template: Template,
) -> Result<Circuit> {
    template.build(&encoder.build(p)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn templates_reject_measuring_encoder() {
        let mut g = Circuit::new(2, 1);
        g.measure(0, 0);
        for t in Template::ALL {
            assert!(matches!(t.build(&g), Err(Error::BadEncoder(_))));
        }
        let wide = Circuit::new(3, 0);
        assert!(build_four_qubit(&wide).is_err());
    }

    #[test]
    fn template_shapes() {
        let g = bell_basis_change();
        let four = build_four_qubit(&g).unwrap();
        assert_eq!((four.n_qubits(), four.output()), (4, &[2usize, 3][..]));
        let anc = build_four_qubit_ancilla(&g).unwrap();
        assert_eq!(anc.output(), &[0, 1]);
        let two = build_two_qubit(&g).unwrap();
        assert_eq!((two.n_qubits(), two.n_clbits()), (2, 2));
        assert!(build_werner_circuit(WernerParam::new(0.3).unwrap()).validate().is_ok());
    }

    #[test]
    fn names_roundtrip() {
        for t in Template::ALL {
            assert_eq!(t.name().parse::<Template>().unwrap(), t);
        }
        for e in Encoder::ALL {
            assert_eq!(e.name().parse::<Encoder>().unwrap(), e);
        }
        assert!("fig9".parse::<Template>().is_err());
    }
}
