//! Phase point operators `A_Omega^gamma` and the Pauli bound on vertices.

use std::cmp::Ordering;

use super::{Operator, PolytopeError};
use crate::exact_arith::CycNumber;
use crate::pauli::PhaseSpace;
use crate::stabilizer::{closure, ValueAssignment};

/// `A_Omega^gamma = d^{-n} sum_{b in Omega} omega^{-gamma(b)} T_b` for a set
/// closed under inference and a noncontextual `gamma` on it.
pub fn cnc_phase_point(
    space: &PhaseSpace,
    omega: &[usize],
    gamma: &ValueAssignment,
) -> Result<Operator, PolytopeError> {
    let mut set = omega.to_vec();
    set.sort_unstable();
    set.dedup();
    if closure(space, &set) != set {
        return Err(PolytopeError::InvalidCnc("set is not closed under inference".into()));
    }
    if gamma.domain() != set.as_slice() {
        return Err(PolytopeError::InvalidCnc("assignment domain differs from the set".into()));
    }
    if !gamma.is_noncontextual(space) {
        return Err(PolytopeError::InvalidCnc("assignment is not noncontextual".into()));
    }
    let mut x = vec![CycNumber::zero(space.order()); space.size()];
    for (b, g) in gamma.pairs() {
        x[b] = space.omega(-(g as i64));
    }
    let op = Operator::from_coeffs(space, x);
    if !op.is_hermitian() {
        return Err(PolytopeError::NotHermitian);
    }
    Ok(op)
}

/// Recognizes `x` as some `A_Omega^gamma`, returning `(Omega, gamma)`.
pub fn cnc_type(x: &Operator) -> Option<(Vec<usize>, ValueAssignment)> {
    let space = x.space();
    let d = space.d();
    let mut pairs = Vec::new();
    for (a, xa) in x.coeffs().iter().enumerate() {
        if xa.is_zero() {
            continue;
        }
        let g = (0..d).find(|&g| *xa == space.omega(-(g as i64)))?;
        pairs.push((a, g));
    }
    let omega: Vec<usize> = pairs.iter().map(|p| p.0).collect();
    if closure(space, &omega) != omega {
        return None;
    }
    let gamma = ValueAssignment::from_pairs(pairs);
    gamma.is_noncontextual(space).then_some((omega, gamma))
}

/// Largest `|Tr(T_a X)|`, kept as its exact square.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliBound {
    pub label: usize,
    pub modulus_sq: CycNumber,
}

impl PauliBound {
    /// Exact comparison of the bound with one.
    pub fn cmp_one(&self) -> Ordering {
        self.modulus_sq
            .real_cmp(&CycNumber::one(self.modulus_sq.order()))
            .expect("squared moduli are real")
    }

    pub fn value_f64(&self) -> f64 {
        self.modulus_sq.to_complex64().re.sqrt()
    }
}

/// `max_a |Tr(T_a X)|`, compared through squared moduli.
pub fn pauli_bound(x: &Operator) -> PauliBound {
    let space = x.space();
    let mut best = PauliBound {
        label: 0,
        modulus_sq: x.pauli_expectation(0).norm_sq(),
    };
    for a in 1..space.size() {
        let m = x.pauli_expectation(a).norm_sq();
        if m.real_cmp(&best.modulus_sq).expect("real") == Ordering::Greater {
            best = PauliBound {
                label: a,
                modulus_sq: m,
            };
        }
    }
    best
}
