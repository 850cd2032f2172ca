//! Input states: named presets and explicit matrices.

use num_complex::Complex64;
use num_rational::BigRational;

use super::HvmError;
use crate::exact_arith::{ComplexMatrix, CycMatrix, CycNumber, Matrix};
use crate::polytope::{coeffs_of_matrix_f64, w_of_coeffs_f64, Operator};
use crate::pauli::PhaseSpace;

/// Preset names accepted by [`State::preset`].
pub const PRESETS: &[&str] = &["zero", "mixed", "T", "H", "strange", "norrell"];

/// A density operator, exact when its entries lie in the phase field.
#[derive(Debug, Clone)]
pub struct State {
    space: PhaseSpace,
    name: String,
    exact: Option<Operator>,
    matrix: ComplexMatrix,
}

fn pure_exact(order: u32, amps: &[i64], norm_sq: i64) -> CycMatrix {
    let d = amps.len();
    Matrix::from_fn(d, d, |i, j| CycNumber::from_frac(order, amps[i] * amps[j], norm_sq))
}

fn tensor_power<T: crate::exact_arith::Entry>(m: &Matrix<T>, n: usize) -> Matrix<T> {
    let mut out = m.clone();
    for _ in 1..n {
        out = out.kron(m);
    }
    out
}

impl State {
    /// Single-qudit preset `name`, tensored `n` times.
    ///
    /// * `zero`: `|0><0|`
    /// * `mixed`: `1/d`
    /// * `T` (qubit): `(1 + (X + Y + Z)/sqrt 3)/2`
    /// * `H` (qubit): `(1 + (X + Z)/sqrt 2)/2`
    /// * `strange` (qutrit): `|s><s|`, `|s> = (|1> - |2>)/sqrt 2`
    /// * `norrell` (qutrit): `|m><m|`, `|m> = (-|0> + 2|1> - |2>)/sqrt 6`
    pub fn preset(space: &PhaseSpace, name: &str) -> Result<Self, HvmError> {
        let d = space.d() as usize;
        let order = space.order();
        let bad = || HvmError::Preset(format!("{name} is not available at d = {d}"));
        let exact_one: Option<CycMatrix> = match name {
            "zero" => {
                let mut amps = vec![0; d];
                amps[0] = 1;
                Some(pure_exact(order, &amps, 1))
            }
            "mixed" => Some(Matrix::from_fn(d, d, |i, j| {
                CycNumber::from_frac(order, i64::from(i == j), d as i64)
            })),
            "strange" if d == 3 => Some(pure_exact(order, &[0, 1, -1], 2)),
            "norrell" if d == 3 => Some(pure_exact(order, &[-1, 2, -1], 6)),
            "T" | "H" if d == 2 => None,
            _ => return Err(bad()),
        };
        let state = match exact_one {
            Some(m) => {
                let full = tensor_power(&m, space.n());
                let mut s = State::from_exact(space, &full)?;
                s.name = name.into();
                s
            }
            None => {
                let c = if name == "T" {
                    1.0 / 3f64.sqrt()
                } else {
                    1.0 / 2f64.sqrt()
                };
                let off = if name == "T" {
                    Complex64::new(c, -c)
                } else {
                    Complex64::new(c, 0.0)
                };
                let one = Matrix::from_rows(vec![
                    vec![Complex64::new((1.0 + c) / 2.0, 0.0), off / 2.0],
                    vec![off.conj() / 2.0, Complex64::new((1.0 - c) / 2.0, 0.0)],
                ]);
                State {
                    space: space.clone(),
                    name: name.into(),
                    exact: None,
                    matrix: tensor_power(&one, space.n()),
                }
            }
        };
        Ok(state)
    }

    /// An exact density operator; must be Hermitian with unit trace.
    pub fn from_exact(space: &PhaseSpace, m: &CycMatrix) -> Result<Self, HvmError> {
        if m.rows() != space.dim() || m.cols() != space.dim() {
            return Err(HvmError::Dimension(format!(
                "state is {}x{}, expected {}",
                m.rows(),
                m.cols(),
                space.dim()
            )));
        }
        if !m.is_hermitian() || !m.trace().is_one() {
            return Err(HvmError::Dimension("state is not Hermitian with unit trace".into()));
        }
        Ok(State {
            space: space.clone(),
            name: "matrix".into(),
            exact: Some(Operator::from_matrix(space, m)),
            matrix: m.to_complex(),
        })
    }

    /// An exact trace-one Hermitian operator, possibly outside the state space.
    pub fn from_operator(op: &Operator) -> Self {
        State {
            space: op.space().clone(),
            name: "operator".into(),
            exact: Some(op.clone()),
            matrix: op.to_complex_matrix(),
        }
    }

    pub fn from_complex(space: &PhaseSpace, m: ComplexMatrix) -> Self {
        State {
            space: space.clone(),
            name: "matrix".into(),
            exact: None,
            matrix: m,
        }
    }

    pub fn space(&self) -> &PhaseSpace {
        &self.space
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn exact(&self) -> Option<&Operator> {
        self.exact.as_ref()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Exact character coordinates when they are rational.
    pub fn w_exact(&self) -> Option<Vec<BigRational>> {
        self.exact.as_ref()?.w_rational()
    }

    pub fn w_f64(&self) -> Vec<f64> {
        w_of_coeffs_f64(&self.space, &coeffs_of_matrix_f64(&self.space, &self.matrix))
    }

    /// Smallest eigenvalue, for positivity checks.
    pub fn min_eigenvalue(&self) -> f64 {
        let m = self.matrix.to_nalgebra();
        let h = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        h.symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}
