//! The stabilizer polytope, its dual `Lambda`, vertex enumeration and
//! certification, phase point operators and polar duality checks.
//!
//! Most of the heavy lifting happens in character coordinates: every
//! trace-one Hermitian `X` is `sum_c w_c A_c` with
//! `A_c = d^{-n} sum_u omega^{[c,u]} T_u`, and `Tr(X) = sum_c w_c`. For
//! `d` in `{2, 3, 4, 6}` and every odd `d` the facet functionals of
//! `Lambda` are rational in these coordinates, which lets enumeration run
//! over the integers.

mod cnc;
mod dd;
mod duality;
mod io;
mod operator;
mod vertices;

use std::sync::OnceLock;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::exact_arith::CycNumber;
use crate::pauli::{PauliError, PhaseSpace};
use crate::stabilizer::{stabilizer_states, StabilizerError, StabilizerProjector};

pub use cnc::{cnc_phase_point, cnc_type, pauli_bound, PauliBound};
pub use dd::{brute_force_rays, extreme_rays};
pub use duality::{dilate, duality_dilation_check, polar_dual_vertices, DualityReport};
pub use io::{read_facets, read_vertices, write_facets, write_vertices};
pub use operator::{
    coeffs_of_matrix_f64, functional_row, trace_row, w_of_coeffs_f64, Operator, OperatorVector,
};
pub use vertices::{
    brute_force_vertices, certify_vertex, certify_w, clifford_w_map, enumerate_vertices,
    Certificate, Rejection, VertexSet, WLinearMap, ENUMERATION_LIMIT,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("operator is not Hermitian")]
    NotHermitian,
    #[error("format error: {0}")]
    Format(String),
    #[error("|E| = {size} exceeds the enumeration limit {limit}")]
    Guard { size: usize, limit: usize },
    #[error("facet functionals are not rational in character coordinates at d = {0}")]
    NonRationalFacets(u32),
    #[error("integer overflow during enumeration")]
    Overflow,
    #[error("cone is not pointed or region is unbounded")]
    Unbounded,
    #[error("vertex not found in the vertex set: {0}")]
    MissingVertex(String),
    #[error("invalid phase point data: {0}")]
    InvalidCnc(String),
    #[error(transparent)]
    Stabilizer(#[from] StabilizerError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

/// `Lambda = {X in Herm_1 : Tr(|s><s| X) >= 0 for every stabilizer state}`.
#[derive(Debug)]
pub struct LambdaHRep {
    space: PhaseSpace,
    states: Vec<StabilizerProjector>,
    rows: Option<Vec<Vec<i64>>>,
    functional: OnceLock<Vec<Vec<CycNumber>>>,
}

/// Builds the facet description of `Lambda` from all pure stabilizer states.
pub fn lambda_hrep(d: u32, n: usize) -> Result<LambdaHRep, PolytopeError> {
    if d < 2 || n == 0 {
        return Err(PauliError::BadDimensions { d, n }.into());
    }
    let space = PhaseSpace::new(d, n)?;
    let states = stabilizer_states(d, n)?;
    let rows = if space.adjoint_is_inverse_label() {
        states
            .iter()
            .map(|s| facet_row(&space, s))
            .collect::<Option<Vec<_>>>()
    } else {
        None
    };
    Ok(LambdaHRep {
        space,
        states,
        rows,
        functional: OnceLock::new(),
    })
}

/// `Tr(Pi A_c)` for every `c`, scaled to a primitive integer row.
fn facet_row(space: &PhaseSpace, p: &StabilizerProjector) -> Option<Vec<i64>> {
    let d = space.d();
    let size = space.size();
    let mut q = Vec::with_capacity(size);
    for c in 0..size {
        let mut counts = vec![0i64; d as usize];
        for (b, r) in p.assignment().pairs() {
            let e = (2 * d - r - space.symp(c, b)) % d;
            counts[e as usize] += 1;
        }
        let mut acc = CycNumber::zero(space.order());
        for (k, &m) in counts.iter().enumerate() {
            if m != 0 {
                acc = &acc + &CycNumber::from_int(space.order(), m).mul_root(
                    (k as u32 * space.zeta_per_omega()) as i64,
                );
            }
        }
        q.push(acc.to_rational()?);
    }
    Some(integer_row(&q))
}

/// Smallest positive multiple of a rational vector with integer entries.
pub(crate) fn integer_row(q: &[BigRational]) -> Vec<i64> {
    let mut lcm = num_bigint::BigInt::from(1);
    for v in q {
        lcm = lcm.lcm(v.denom());
    }
    let ints: Vec<num_bigint::BigInt> = q.iter().map(|v| (v * &lcm).to_integer()).collect();
    let mut g = num_bigint::BigInt::zero();
    for v in &ints {
        g = g.gcd(v);
    }
    if g.is_zero() {
        return vec![0; q.len()];
    }
    ints.iter()
        .map(|v| (v / &g).to_i64().expect("row entry fits in i64"))
        .collect()
}

impl LambdaHRep {
    pub fn space(&self) -> &PhaseSpace {
        &self.space
    }

    /// Ambient dimension `d^{2n}` of the character coordinates.
    pub fn dim(&self) -> usize {
        self.space.size()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[StabilizerProjector] {
        &self.states
    }

    /// Integer facet rows in character coordinates, when rational.
    pub fn rows(&self) -> Result<&[Vec<i64>], PolytopeError> {
        self.rows
            .as_deref()
            .ok_or(PolytopeError::NonRationalFacets(self.space.d()))
    }

    /// Facet `k` as the operator vector of its stabilizer state.
    pub fn facet_vector(&self, k: usize) -> OperatorVector {
        OperatorVector::from_matrix(&self.space, self.states[k].matrix())
            .expect("projectors are Hermitian")
    }

    /// Functional rows on operator-vector coordinates.
    pub fn functional_rows(&self) -> &[Vec<CycNumber>] {
        self.functional.get_or_init(|| {
            self.states
                .iter()
                .map(|s| functional_row(&self.space, s.matrix()))
                .collect()
        })
    }

    /// Exact overlaps `Tr(|s><s| X)`.
    pub fn overlaps(&self, x: &Operator) -> Vec<CycNumber> {
        self.states.iter().map(|s| x.projector_trace(s)).collect()
    }

    /// First facet with a negative overlap, if any.
    pub fn violated(&self, x: &Operator) -> Option<usize> {
        self.overlaps(x)
            .iter()
            .position(|t| t.real_sign().map(|s| s.is_lt()).unwrap_or(true))
    }

    /// Exact membership in `Lambda` of a trace-one Hermitian operator.
    pub fn contains(&self, x: &Operator) -> bool {
        x.is_hermitian() && x.trace().is_one() && self.violated(x).is_none()
    }

    /// Smallest overlap of a numeric operator, with the facet attaining it.
    pub fn min_overlap_f64(&self, m: &crate::exact_arith::ComplexMatrix) -> (usize, f64) {
        let x = coeffs_of_matrix_f64(&self.space, m);
        let w = w_of_coeffs_f64(&self.space, &x);
        self.min_overlap_w(&w)
    }

    /// Smallest overlap given numeric character coordinates.
    pub fn min_overlap_w(&self, w: &[f64]) -> (usize, f64) {
        let mut best = (0, f64::INFINITY);
        for (k, s) in self.states.iter().enumerate() {
            let v = overlap_w_f64(&self.space, s, w);
            if v < best.1 {
                best = (k, v);
            }
        }
        best
    }

    /// Human-readable label of facet `k`.
    pub fn facet_label(&self, k: usize) -> String {
        let s = &self.states[k];
        let gens: Vec<String> = s
            .group()
            .generators()
            .iter()
            .map(|&g| format!("{}={}", self.space.point(g), s.assignment().get(g).unwrap_or(0)))
            .collect();
        format!("<{}>", gens.join(", "))
    }
}

/// `Tr(Pi X)` from numeric character coordinates.
fn overlap_w_f64(space: &PhaseSpace, p: &StabilizerProjector, w: &[f64]) -> f64 {
    let d = space.d() as f64;
    let inv = 1.0 / p.group().order() as f64;
    let mut acc = 0.0;
    for (c, wc) in w.iter().enumerate() {
        if *wc == 0.0 {
            continue;
        }
        let mut f = 0.0;
        for (b, r) in p.assignment().pairs() {
            let e = -(r as f64) - space.symp(c, b) as f64;
            f += (std::f64::consts::TAU * e / d).cos();
        }
        acc += wc * f * inv;
    }
    acc
}

/// Exact rational `Tr(X Y)` for character coordinates, `d^n sum_c w_c v_c`.
pub fn hs_inner_w(space: &PhaseSpace, w: &[BigRational], v: &[BigRational]) -> BigRational {
    let s: BigRational = w.iter().zip(v).map(|(a, b)| a * b).sum();
    s * BigRational::from_integer((space.dim() as i64).into())
}

/// Exact matrix of `sum_c w_c A_c`.
pub fn matrix_of_w(space: &PhaseSpace, w: &[BigRational]) -> crate::exact_arith::CycMatrix {
    Operator::from_w(space, w).to_matrix()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn facet_counts_and_mixed_state() {
        for (d, n, count) in [(2, 1, 6), (3, 1, 12), (2, 2, 60)] {
            let h = lambda_hrep(d, n).unwrap();
            assert_eq!(h.len(), count);
            assert_eq!(h.dim(), (d as usize).pow(2 * n as u32));
            let mixed = Operator::maximally_mixed(h.space());
            for t in h.overlaps(&mixed) {
                assert!(t.real_sign().unwrap().is_gt());
            }
            assert!(h.contains(&mixed));
            let rows = h.rows().unwrap();
            let u = vec![1i64; h.dim()];
            for row in rows {
                let v: i64 = row.iter().zip(&u).map(|(a, b)| a * b).sum();
                assert!(v > 0);
            }
        }
    }

    #[test]
    fn integer_rows_match_exact_overlaps() {
        let h = lambda_hrep(3, 1).unwrap();
        let s = h.space().clone();
        let mut x = vec![CycNumber::zero(3); 9];
        x[0] = CycNumber::one(3);
        x[1] = CycNumber::from_frac(3, 1, 4) + CycNumber::root(3, 1);
        x[s.neg(1)] = x[1].conj();
        let op = Operator::from_coeffs(&s, x);
        let w = op.w_rational().unwrap();
        for (k, row) in h.rows().unwrap().iter().enumerate() {
            let val: BigRational = row
                .iter()
                .zip(&w)
                .map(|(a, b)| BigRational::from_integer((*a).into()) * b)
                .sum();
            let exact = op.projector_trace(&h.states()[k]).to_rational().unwrap();
            assert_eq!(val.signum(), exact.signum());
        }
    }

    #[test]
    fn rejects_trivial_dimension() {
        assert!(lambda_hrep(1, 1).is_err());
    }
}
