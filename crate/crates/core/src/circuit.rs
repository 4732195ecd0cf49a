//! Encoding circuits derived from a reduction log.
//!
//! A [`Circuit`] lists gates by their check-matrix column action, in the
//! order those actions are applied. Replaying the list on the augmented
//! canonical matrix yields generators of the encoded (augmented original)
//! group. Because a column action realizes `P → U† P U`, the physical
//! encoder applies the adjoint of each listed gate, in list order.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::check_matrix::{CheckMatrix, CliffordOp, MatrixError, Op};
use crate::field::{FieldCtx, FieldElement, FieldError};
use crate::reduction::ReductionResult;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CircuitError {
    #[error("malformed circuit file: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("unsupported circuit format version {0}")]
    UnsupportedVersion(u32),
    #[error("gate {gate} touches receiver qudit {qudit}; only qudits 1..={n} may be used")]
    BobQudit { gate: usize, qudit: usize, n: usize },
    #[error("gate {gate} uses qudit index {qudit}, valid range is 1..={n}")]
    IndexOutOfRange { gate: usize, qudit: usize, n: usize },
    #[error("gate {gate}: {source}")]
    InvalidGate { gate: usize, source: MatrixError },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("reduction failed, no circuit to synthesize")]
    ReductionFailed,
    #[error("circuit does not reproduce the encoded generators")]
    PostconditionFailed,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    pub p: u32,
    pub m: u32,
    pub n: usize,
    pub c: usize,
    pub gates: Vec<CliffordOp>,
}

/// Reverses the Clifford part of an operation log and inverts every gate.
/// Row operations are dropped: they relabel generators, not qudits.
pub fn invert_oplog(ctx: &FieldCtx, oplog: &[Op]) -> Vec<CliffordOp> {
    oplog
        .iter()
        .rev()
        .filter_map(|op| match op {
            Op::Clifford(gate) => Some(gate.inverse(ctx)),
            Op::Row(_) => None,
        })
        .flatten()
        .collect()
}

/// The encoding circuit for a successful reduction, checked against its
/// postcondition before it is returned.
pub fn synthesize_encoding_circuit(result: &ReductionResult) -> Result<Circuit, CircuitError> {
    let ctx = result.ctx();
    let circuit = Circuit {
        p: ctx.p(),
        m: ctx.m(),
        n: result.n(),
        c: result.c,
        gates: invert_oplog(ctx, &result.oplog),
    };
    if !circuit.verify_encoding(result)? {
        return Err(CircuitError::PostconditionFailed);
    }
    Ok(circuit)
}

impl Circuit {
    pub fn field(&self) -> Result<FieldCtx, FieldError> {
        FieldCtx::new(self.p, self.m, None)
    }

    /// Applies every gate's column action, in order, to the first `n`
    /// qudits of `matrix`. Receiver columns are never touched.
    pub fn apply_to(&self, matrix: &CheckMatrix) -> Result<CheckMatrix, MatrixError> {
        let mut out = matrix.clone();
        for gate in &self.gates {
            gate.validate(matrix.ctx(), self.n)?;
            out.apply_clifford(gate)?;
        }
        Ok(out)
    }

    /// Whether replaying the circuit on the augmented canonical matrix spans
    /// the same group as the augmented original generators.
    pub fn verify_encoding(&self, result: &ReductionResult) -> Result<bool, CircuitError> {
        if self.n != result.n() || self.c != result.c {
            return Ok(false);
        }
        let encoded = self.apply_to(&result.augmented)?;
        Ok(encoded.row_space_equal(&result.augmented_original())?)
    }

    pub fn to_json(&self) -> String {
        let file = CircuitFile {
            version: FORMAT_VERSION,
            p: self.p,
            m: self.m,
            n: self.n,
            c: self.c,
            gates: self.gates.iter().map(GateRecord::from).collect(),
        };
        serde_json::to_string(&file).expect("circuit records always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, CircuitError> {
        let file: CircuitFile = serde_json::from_str(text)?;
        if file.version != FORMAT_VERSION {
            return Err(CircuitError::UnsupportedVersion(file.version));
        }
        let ctx = FieldCtx::new(file.p, file.m, None)?;
        let mut gates = Vec::with_capacity(file.gates.len());
        for (idx, record) in file.gates.iter().enumerate() {
            let gate_no = idx + 1;
            let gate = record.to_op(gate_no, file.n, file.c)?;
            gate.validate(&ctx, file.n)
                .map_err(|source| CircuitError::InvalidGate { gate: gate_no, source })?;
            gates.push(gate);
        }
        Ok(Circuit {
            p: file.p,
            m: file.m,
            n: file.n,
            c: file.c,
            gates,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct CircuitFile {
    version: u32,
    p: u32,
    m: u32,
    n: usize,
    c: usize,
    gates: Vec<GateRecord>,
}

/// One gate as stored on disk, with 1-based qudit indices.
#[derive(Serialize, Deserialize)]
#[serde(tag = "g", deny_unknown_fields)]
enum GateRecord {
    #[serde(rename = "DFT")]
    Dft { t: usize },
    #[serde(rename = "MUL")]
    Mul { t: usize, gamma: u32 },
    #[serde(rename = "PHASE")]
    Phase { t: usize, gamma: u32 },
    #[serde(rename = "ADD")]
    Add { ctl: usize, tgt: usize },
}

impl From<&CliffordOp> for GateRecord {
    fn from(op: &CliffordOp) -> Self {
        match *op {
            CliffordOp::Dft { target } => GateRecord::Dft { t: target + 1 },
            CliffordOp::Mul { target, gamma } => GateRecord::Mul {
                t: target + 1,
                gamma: gamma.value(),
            },
            CliffordOp::Phase { target, gamma } => GateRecord::Phase {
                t: target + 1,
                gamma: gamma.value(),
            },
            CliffordOp::Add { control, target } => GateRecord::Add {
                ctl: control + 1,
                tgt: target + 1,
            },
        }
    }
}

impl GateRecord {
    fn to_op(&self, gate: usize, n: usize, c: usize) -> Result<CliffordOp, CircuitError> {
        let index = |qudit: usize| -> Result<usize, CircuitError> {
            if qudit >= 1 && qudit <= n {
                Ok(qudit - 1)
            } else if qudit > n && qudit <= n + c {
                Err(CircuitError::BobQudit { gate, qudit, n })
            } else {
                Err(CircuitError::IndexOutOfRange { gate, qudit, n })
            }
        };
        Ok(match *self {
            GateRecord::Dft { t } => CliffordOp::Dft { target: index(t)? },
            GateRecord::Mul { t, gamma } => CliffordOp::Mul {
                target: index(t)?,
                gamma: FieldElement::new(gamma),
            },
            GateRecord::Phase { t, gamma } => CliffordOp::Phase {
                target: index(t)?,
                gamma: FieldElement::new(gamma),
            },
            GateRecord::Add { ctl, tgt } => CliffordOp::Add {
                control: index(ctl)?,
                target: index(tgt)?,
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check_matrix::RowOp;
    use crate::reduction::{canonical_form, reduce, Mode};

    fn el(v: u32) -> FieldElement {
        FieldElement::new(v)
    }

    #[test]
    fn inverting_single_gates() {
        let f5 = FieldCtx::prime(5).unwrap();
        let log = [Op::Clifford(CliffordOp::Phase { target: 0, gamma: el(2) })];
        assert_eq!(invert_oplog(&f5, &log), vec![CliffordOp::Phase { target: 0, gamma: el(3) }]);

        let f7 = FieldCtx::prime(7).unwrap();
        let log = [Op::Clifford(CliffordOp::Mul { target: 1, gamma: el(3) })];
        assert_eq!(invert_oplog(&f7, &log), vec![CliffordOp::Mul { target: 1, gamma: el(5) }]);

        let f2 = FieldCtx::prime(2).unwrap();
        let add = CliffordOp::Add { control: 0, target: 1 };
        let log = [Op::Clifford(add), Op::Row(RowOp::Swap { a: 0, b: 1 })];
        assert_eq!(invert_oplog(&f2, &log), vec![add]);
    }

    #[test]
    fn log_order_is_reversed() {
        let f3 = FieldCtx::prime(3).unwrap();
        let log = [
            Op::Clifford(CliffordOp::Dft { target: 0 }),
            Op::Clifford(CliffordOp::Phase { target: 1, gamma: el(1) }),
        ];
        let inv = invert_oplog(&f3, &log);
        assert_eq!(inv[0], CliffordOp::Phase { target: 1, gamma: el(2) });
        assert_eq!(&inv[1..], &[CliffordOp::Dft { target: 0 }; 3]);
    }

    #[test]
    fn canonical_input_gives_empty_circuit() {
        let ctx = FieldCtx::prime(5).unwrap();
        let res = reduce(&canonical_form(&ctx, 3, 1, 1), Mode::Strict).unwrap();
        let circuit = synthesize_encoding_circuit(&res).unwrap();
        assert!(circuit.gates.is_empty());
        assert_eq!(circuit.to_json(), r#"{"version":1,"p":5,"m":1,"n":3,"c":1,"gates":[]}"#);
    }

    #[test]
    fn json_round_trip_and_validation() {
        let circuit = Circuit {
            p: 3,
            m: 1,
            n: 3,
            c: 1,
            gates: vec![
                CliffordOp::Dft { target: 1 },
                CliffordOp::Add { control: 0, target: 2 },
                CliffordOp::Mul { target: 0, gamma: el(2) },
                CliffordOp::Phase { target: 2, gamma: el(1) },
            ],
        };
        let text = circuit.to_json();
        assert!(text.contains(r#"{"g":"DFT","t":2}"#));
        assert!(text.contains(r#"{"g":"ADD","ctl":1,"tgt":3}"#));
        assert_eq!(Circuit::from_json(&text).unwrap(), circuit);

        let bob = r#"{"version":1,"p":3,"m":1,"n":3,"c":1,"gates":[{"g":"DFT","t":4}]}"#;
        assert!(matches!(
            Circuit::from_json(bob),
            Err(CircuitError::BobQudit { gate: 1, qudit: 4, n: 3 })
        ));
        let zero = r#"{"version":1,"p":3,"m":1,"n":3,"c":0,"gates":[{"g":"MUL","t":1,"gamma":0}]}"#;
        assert!(matches!(Circuit::from_json(zero), Err(CircuitError::InvalidGate { gate: 1, .. })));
        assert!(matches!(Circuit::from_json("{"), Err(CircuitError::Syntax(_))));
        let v2 = r#"{"version":2,"p":3,"m":1,"n":1,"c":0,"gates":[]}"#;
        assert!(matches!(Circuit::from_json(v2), Err(CircuitError::UnsupportedVersion(2))));
    }

    #[test]
    fn worked_example_circuit_reproduces_encoded_group() {
        let m = CheckMatrix::parse(
            "EACM 5 1 4 4
             3 1 1 0 | 1 2 0 2
             0 3 0 4 | 2 4 1 3
             1 1 0 2 | 3 1 1 2
             2 3 1 0 | 4 0 1 3",
        )
        .unwrap();
        let res = reduce(&m, Mode::Strict).unwrap();
        let circuit = synthesize_encoding_circuit(&res).unwrap();
        assert!(circuit.verify_encoding(&res).unwrap());
        let encoded = circuit.apply_to(&res.augmented).unwrap();
        assert!(encoded.is_abelian());
        // The Alice half of the encoded generators spans the input group.
        let alice: Vec<_> = encoded
            .rows()
            .iter()
            .map(|r| crate::pauli::PauliRow {
                alpha: r.alpha[..4].to_vec(),
                beta: r.beta[..4].to_vec(),
            })
            .collect();
        let alice = CheckMatrix::new(m.ctx(), 4, alice).unwrap();
        assert!(alice.row_space_equal(&m).unwrap());
    }
}
