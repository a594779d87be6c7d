//! Logical circuits and their JSON form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::SingleQubitGate;

/// One logical gate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    Single { gate: SingleQubitGate, qubit: usize },
    Cz { a: usize, b: usize },
    Cnot { control: usize, target: usize },
    Swap { a: usize, b: usize },
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Single { qubit, .. } => vec![qubit],
            Gate::Cz { a, b } | Gate::Swap { a, b } => vec![a, b],
            Gate::Cnot { control, target } => vec![control, target],
        }
    }

    /// Whether the gate is one of the post-selected two-qubit gates.
    pub fn is_post_selected(&self) -> bool {
        matches!(self, Gate::Cz { .. } | Gate::Cnot { .. })
    }
}

/// A circuit over `qubit_count` path-encoded qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct CircuitIR {
    qubit_count: usize,
    gates: Vec<Gate>,
}

impl CircuitIR {
    pub fn new(qubit_count: usize) -> Result<Self> {
        if qubit_count == 0 {
            return Err(Error::InvalidCircuit("a circuit needs at least one qubit".into()));
        }
        Ok(Self { qubit_count, gates: Vec::new() })
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Appends a gate after checking its qubit indices.
    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        let qs = gate.qubits();
        if let Some(&q) = qs.iter().find(|&&q| q >= self.qubit_count) {
            return Err(Error::InvalidCircuit(format!("qubit {q} out of range for {} qubits", self.qubit_count)));
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(Error::InvalidCircuit(format!("two-qubit gate on a single qubit {}", qs[0])));
        }
        self.gates.push(gate);
        Ok(self)
    }

    pub fn single(&mut self, gate: SingleQubitGate, qubit: usize) -> Result<&mut Self> {
        self.push(Gate::Single { gate, qubit })
    }

    pub fn cz(&mut self, a: usize, b: usize) -> Result<&mut Self> {
        self.push(Gate::Cz { a, b })
    }

    pub fn cnot(&mut self, control: usize, target: usize) -> Result<&mut Self> {
        self.push(Gate::Cnot { control, target })
    }

    pub fn swap(&mut self, a: usize, b: usize) -> Result<&mut Self> {
        self.push(Gate::Swap { a, b })
    }

    /// `H₀; CNOT₀₁; CNOT₁₂; …` preparing an `n`-qubit GHZ state.
    pub fn ghz_chain(n: usize) -> Result<Self> {
        let mut c = Self::new(n)?;
        c.single(SingleQubitGate::H, 0)?;
        for q in 1..n {
            c.cnot(q - 1, q)?;
        }
        Ok(c)
    }

    /// `H₀; CNOT₀₁`.
    pub fn bell() -> Self {
        Self::ghz_chain(2).expect("two qubits")
    }

    pub fn post_selected_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_post_selected()).count()
    }

    /// Parses `{"qubits": n, "gates": [{"g": "H", "q": 0}, {"g": "CNOT", "c": 0, "t": 1}, …]}`.
    ///
    /// Single-qubit gates take `q` (and `angle` for rotations). `CNOT` takes
    /// `c`/`t`; `CZ` and `SWAP` accept either `a`/`b` or `c`/`t`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawCircuit = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut c = Self::new(raw.qubits)?;
        for (i, g) in raw.gates.iter().enumerate() {
            c.push(g.to_gate().map_err(|e| Error::Parse(format!("gate {i}: {e}")))?)?;
        }
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        let raw = RawCircuit { qubits: self.qubit_count, gates: self.gates.iter().map(RawGate::from_gate).collect() };
        serde_json::to_string(&raw).expect("circuit serializes")
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCircuit {
    qubits: usize,
    gates: Vec<RawGate>,
}

#[derive(Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGate {
    g: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    c: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    a: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    b: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    angle: Option<f64>,
}

impl RawGate {
    fn to_gate(&self) -> Result<Gate> {
        let field = |v: Option<usize>, name: &str| {
            v.ok_or_else(|| Error::Parse(format!("{} needs field {name:?}", self.g)))
        };
        let pair = || -> Result<(usize, usize)> {
            match (self.a, self.b, self.c, self.t) {
                (Some(a), Some(b), None, None) | (None, None, Some(a), Some(b)) => Ok((a, b)),
                _ => Err(Error::Parse(format!("{} needs a/b or c/t", self.g))),
            }
        };
        match self.g.to_ascii_uppercase().as_str() {
            "CZ" => pair().map(|(a, b)| Gate::Cz { a, b }),
            "SWAP" => pair().map(|(a, b)| Gate::Swap { a, b }),
            "CNOT" | "CX" => Ok(Gate::Cnot { control: field(self.c, "c")?, target: field(self.t, "t")? }),
            sym => {
                let gate = SingleQubitGate::from_symbol(sym, self.angle)?;
                Ok(Gate::Single { gate, qubit: field(self.q, "q")? })
            }
        }
    }

    fn from_gate(g: &Gate) -> Self {
        match *g {
            Gate::Single { gate, qubit } => {
                let angle = match gate {
                    SingleQubitGate::Rx(d) | SingleQubitGate::Ry(d) | SingleQubitGate::Rz(d) => Some(d),
                    _ => None,
                };
                Self { g: gate.symbol().to_string(), q: Some(qubit), angle, ..Self::default() }
            }
            Gate::Cz { a, b } => Self { g: "CZ".into(), a: Some(a), b: Some(b), ..Self::default() },
            Gate::Swap { a, b } => Self { g: "SWAP".into(), a: Some(a), b: Some(b), ..Self::default() },
            Gate::Cnot { control, target } => {
                Self { g: "CNOT".into(), c: Some(control), t: Some(target), ..Self::default() }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_documented_format() {
        let text = r#"{"qubits": 3, "gates": [{"g":"H","q":0},{"g":"CNOT","c":0,"t":1},{"g":"RZ","q":2,"angle":0.5}]}"#;
        let c = CircuitIR::from_json(text).unwrap();
        assert_eq!(c.qubit_count(), 3);
        assert_eq!(
            c.gates(),
            &[
                Gate::Single { gate: SingleQubitGate::H, qubit: 0 },
                Gate::Cnot { control: 0, target: 1 },
                Gate::Single { gate: SingleQubitGate::Rz(0.5), qubit: 2 },
            ]
        );
        assert_eq!(CircuitIR::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn cz_accepts_both_field_styles() {
        let a = CircuitIR::from_json(r#"{"qubits":2,"gates":[{"g":"cz","a":0,"b":1}]}"#).unwrap();
        let b = CircuitIR::from_json(r#"{"qubits":2,"gates":[{"g":"CZ","c":0,"t":1}]}"#).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_input() {
        for text in [
            "{",
            r#"{"qubits":2,"gates":[{"g":"CCX","q":0}]}"#,
            r#"{"qubits":2,"gates":[{"g":"RX","q":0}]}"#,
            r#"{"qubits":2,"gates":[{"g":"CNOT","c":0}]}"#,
            r#"{"qubits":2,"gates":[{"g":"H","q":0,"x":1}]}"#,
        ] {
            assert!(matches!(CircuitIR::from_json(text), Err(Error::Parse(_))), "{text}");
        }
        assert!(matches!(
            CircuitIR::from_json(r#"{"qubits":2,"gates":[{"g":"H","q":2}]}"#),
            Err(Error::InvalidCircuit(_))
        ));
        assert!(matches!(
            CircuitIR::from_json(r#"{"qubits":2,"gates":[{"g":"CZ","a":1,"b":1}]}"#),
            Err(Error::InvalidCircuit(_))
        ));
        assert!(CircuitIR::new(0).is_err());
    }
}
