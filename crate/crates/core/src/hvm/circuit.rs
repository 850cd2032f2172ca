//! Circuits of Clifford gates and single-label Pauli measurements, and their
//! JSON form.
//!
//! ```json
//! {"d": 2, "n": 1,
//!  "state": {"preset": "T"},
//!  "ops": [{"gate": {"name": "H", "targets": [0]}},
//!          {"clifford": {"matrix": [["4; 1, 0", "4; 0, 0"], ["4; 0, 0", "4; 0, 1"]]}},
//!          {"measure": {"a": "Z:(1)|X:(0)"}}]}
//! ```
//!
//! Matrix entries use the cyclotomic text form `N; c0, c1, ...`. A `clifford`
//! op may carry `"scale_sq": "1/2"` for unitaries `sqrt(scale_sq) * M`.

use num_rational::BigRational;
use num_traits::One;
use rand::Rng;
use serde::Deserialize;

use super::{HvmError, State};
use crate::exact_arith::{parse_rational, CycMatrix, CycNumber, Matrix};
use crate::pauli::{named_gate, CliffordElement, PhasePoint, PhaseSpace};

#[derive(Debug, Clone)]
pub enum CircuitOp {
    Clifford(CliffordElement),
    /// Measurement of `T_a` for a nonzero label.
    Measure(usize),
}

#[derive(Debug, Clone)]
pub struct Circuit {
    pub space: PhaseSpace,
    pub state: State,
    pub ops: Vec<CircuitOp>,
}

impl Circuit {
    pub fn new(space: &PhaseSpace, state: State, ops: Vec<CircuitOp>) -> Result<Self, HvmError> {
        if state.space() != space {
            return Err(HvmError::Dimension("state and circuit spaces differ".into()));
        }
        for (i, op) in ops.iter().enumerate() {
            match op {
                CircuitOp::Measure(0) => {
                    return Err(HvmError::Circuit(format!("ops[{i}]: trivial measurement")))
                }
                CircuitOp::Measure(a) if *a >= space.size() => {
                    return Err(HvmError::Circuit(format!("ops[{i}]: label out of range")))
                }
                CircuitOp::Clifford(u) if u.space() != space => {
                    return Err(HvmError::Circuit(format!("ops[{i}]: gate dimension mismatch")))
                }
                _ => {}
            }
        }
        Ok(Circuit {
            space: space.clone(),
            state,
            ops,
        })
    }

    pub fn measurement_count(&self) -> usize {
        self.ops
            .iter()
            .filter(|o| matches!(o, CircuitOp::Measure(_)))
            .count()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CircuitJson {
    d: u32,
    n: usize,
    state: StateJson,
    #[serde(default)]
    ops: Vec<OpJson>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StateJson {
    preset: Option<String>,
    matrix: Option<Vec<Vec<String>>>,
}

#[derive(Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
enum OpJson {
    Measure {
        a: String,
    },
    Gate {
        name: String,
        targets: Vec<usize>,
    },
    Clifford {
        matrix: Vec<Vec<String>>,
        #[serde(default)]
        scale_sq: Option<String>,
    },
}

fn parse_matrix(rows: &[Vec<String>], dim: usize, order: u32, at: &str) -> Result<CycMatrix, HvmError> {
    let err = |m: String| HvmError::Circuit(format!("{at}: {m}"));
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(err(format!("matrix must be {dim}x{dim}")));
    }
    let mut out = Vec::with_capacity(dim);
    for (i, r) in rows.iter().enumerate() {
        let mut row = Vec::with_capacity(dim);
        for (j, t) in r.iter().enumerate() {
            // A bare rational is read in the circuit's field.
            let v: CycNumber = match parse_rational(t.trim()) {
                Some(q) if !t.contains(';') => CycNumber::from_rational(order, q),
                _ => t
                    .parse()
                    .map_err(|_| err(format!("entry ({i},{j}) {t:?} is not a cyclotomic number")))?,
            };
            if v.order() != order {
                return Err(err(format!("entry ({i},{j}) has field order {}, expected {order}", v.order())));
            }
            row.push(v);
        }
        out.push(row);
    }
    Ok(Matrix::from_rows(out))
}

/// Parses and validates the JSON circuit format.
pub fn parse_circuit(text: &str) -> Result<Circuit, HvmError> {
    let raw: CircuitJson = serde_json::from_str(text).map_err(|e| {
        HvmError::Circuit(format!("line {} column {}: {e}", e.line(), e.column()))
    })?;
    if raw.d < 2 || raw.n == 0 {
        return Err(HvmError::Circuit(format!("need d >= 2 and n >= 1, got d={} n={}", raw.d, raw.n)));
    }
    let space = PhaseSpace::new(raw.d, raw.n)?;
    let state = match (&raw.state.preset, &raw.state.matrix) {
        (Some(p), None) => State::preset(&space, p)?,
        (None, Some(m)) => {
            let m = parse_matrix(m, space.dim(), space.order(), "state")?;
            State::from_exact(&space, &m)?
        }
        _ => {
            return Err(HvmError::Circuit(
                "state: give exactly one of `preset` or `matrix`".into(),
            ))
        }
    };
    let mut ops = Vec::with_capacity(raw.ops.len());
    for (i, op) in raw.ops.iter().enumerate() {
        let at = format!("ops[{i}]");
        let op = match op {
            OpJson::Measure { a } => {
                let p = PhasePoint::parse(a, space.d())
                    .map_err(|e| HvmError::Circuit(format!("{at}: {e}")))?;
                let idx = space
                    .index(&p)
                    .map_err(|e| HvmError::Circuit(format!("{at}: {e}")))?;
                if idx == 0 {
                    return Err(HvmError::Circuit(format!("{at}: trivial measurement")));
                }
                CircuitOp::Measure(idx)
            }
            OpJson::Gate { name, targets } => CircuitOp::Clifford(
                named_gate(&space, name, targets)
                    .map_err(|e| HvmError::Circuit(format!("{at}: {e}")))?,
            ),
            OpJson::Clifford { matrix, scale_sq } => {
                let m = parse_matrix(matrix, space.dim(), space.order(), &at)?;
                let s = match scale_sq {
                    Some(t) => parse_rational(t).ok_or_else(|| {
                        HvmError::Circuit(format!("{at}: bad scale_sq {t:?}"))
                    })?,
                    None => BigRational::one(),
                };
                CircuitOp::Clifford(
                    CliffordElement::from_matrix(&space, &at, m, s)
                        .map_err(|e| HvmError::Circuit(format!("{at}: {e}")))?,
                )
            }
        };
        ops.push(op);
    }
    Circuit::new(&space, state, ops)
}

/// A random circuit of `depth` ops drawn from `gates` and single-label
/// measurements, with roughly half of the ops measurements.
pub fn random_circuit<R: Rng>(
    state: State,
    gates: &[CliffordElement],
    depth: usize,
    rng: &mut R,
) -> Result<Circuit, HvmError> {
    let space = state.space().clone();
    let mut ops = Vec::with_capacity(depth);
    for _ in 0..depth {
        if gates.is_empty() || rng.gen_bool(0.5) {
            ops.push(CircuitOp::Measure(rng.gen_range(1..space.size())));
        } else {
            ops.push(CircuitOp::Clifford(gates[rng.gen_range(0..gates.len())].clone()));
        }
    }
    Circuit::new(&space, state, ops)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_measurement() {
        let c = parse_circuit(
            r#"{"d":2,"n":1,"state":{"preset":"T"},"ops":[{"measure":{"a":"Z:(1)|X:(0)"}}]}"#,
        )
        .unwrap();
        assert_eq!(c.measurement_count(), 1);
        assert!(matches!(c.ops[0], CircuitOp::Measure(2)));
    }

    #[test]
    fn rejects_trivial_measurement() {
        let e = parse_circuit(
            r#"{"d":2,"n":1,"state":{"preset":"zero"},"ops":[{"measure":{"a":"Z:(0)|X:(0)"}}]}"#,
        )
        .unwrap_err();
        assert!(e.to_string().contains("trivial measurement"), "{e}");
    }

    #[test]
    fn rejects_non_clifford_matrix() {
        // the rotation (3, 4; -4, 3)/5 is unitary but not Clifford
        let e = parse_circuit(
            r#"{"d":2,"n":1,"state":{"preset":"zero"},"ops":[{"clifford":{"matrix":[["4; 3, 0","4; 4, 0"],["4; -4, 0","4; 3, 0"]],"scale_sq":"1/25"}}]}"#,
        )
        .unwrap_err();
        assert!(e.to_string().contains("|X:("), "{e}");
        // without the scale the Hadamard pattern is not unitary
        let e = parse_circuit(
            r#"{"d":2,"n":1,"state":{"preset":"zero"},"ops":[{"clifford":{"matrix":[["4; 1, 0","4; 1, 0"],["4; 1, 0","4; -1, 0"]]}}]}"#,
        )
        .unwrap_err();
        assert!(e.to_string().contains("ops[0]"), "{e}");
        let ok = parse_circuit(
            r#"{"d":2,"n":1,"state":{"preset":"zero"},"ops":[{"clifford":{"matrix":[["4; 1, 0","4; 1, 0"],["4; 1, 0","4; -1, 0"]],"scale_sq":"1/2"}}]}"#,
        );
        assert!(ok.is_ok());
    }

    #[test]
    fn syntax_errors_carry_a_location() {
        let e = parse_circuit("{\"d\":2,\n\"n\":}").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
    }

    #[test]
    fn state_matrix_is_validated() {
        let e = parse_circuit(
            r#"{"d":2,"n":1,"state":{"matrix":[["4; 1, 0","4; 0, 0"],["4; 0, 0","4; 1, 0"]]}}"#,
        )
        .unwrap_err();
        assert!(e.to_string().contains("unit trace"), "{e}");
    }
}
