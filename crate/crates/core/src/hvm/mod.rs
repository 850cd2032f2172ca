//! The hidden-variable model: state decomposition over the vertices of
//! `Lambda`, Clifford dynamics, measurement kernels, sampling and the
//! quantum-mechanical reference.

mod circuit;
pub mod lp;
mod phi;
mod simulate;
mod state;

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

pub use circuit::{parse_circuit, random_circuit, Circuit, CircuitOp};
pub use phi::{phi_map_apply, phi_suite, TraceReductionTally, PhiMapSpec, PhiReport};
pub use simulate::{
    chi_square, model_branches, oracle_simulate, run_shots, simulate_run, thread_count, Branch,
    OracleBranch, ShotRecord, Weight,
};
pub use state::{State, PRESETS};

use crate::exact_arith::ComplexMatrix;
use crate::pauli::{CliffordElement, PauliError, PhaseSpace};
use crate::polytope::{
    clifford_w_map, enumerate_vertices, lambda_hrep, LambdaHRep, Operator, PolytopeError,
    VertexSet, WLinearMap,
};
use crate::stabilizer::{
    projector, value_assignments, IsotropicSubgroup, StabilizerError, ValueAssignment,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HvmError {
    #[error("unknown preset: {0}")]
    Preset(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("state is not in Lambda: facet {facet} has overlap {overlap:.3e}")]
    Infeasible { facet: String, overlap: f64 },
    #[error("no decomposition over the vertex set (incomplete vertex set?)")]
    NoDecomposition,
    #[error("reconstruction residual {0:.3e} exceeds tolerance")]
    Residual(f64),
    #[error("exact mode unavailable: {0}")]
    NotExact(String),
    #[error("circuit error: {0}")]
    Circuit(String),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Stabilizer(#[from] StabilizerError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

/// Arithmetic used by [`decompose_state`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Rational pivoting; needs rational character coordinates.
    Exact,
    #[default]
    Numeric,
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exact" => Ok(Mode::Exact),
            "numeric" => Ok(Mode::Numeric),
            _ => Err(format!("unknown mode {s:?}")),
        }
    }
}

/// Entrywise tolerance on `sum_alpha p(alpha) A_alpha - rho`.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Negative weights above this are clipped to zero.
pub const CLIP_TOL: f64 = 1e-12;

/// Weights `p(alpha)` over the vertex set, sparse.
#[derive(Debug, Clone, PartialEq)]
pub enum Weights {
    Exact(Vec<(usize, BigRational)>),
    Numeric(Vec<(usize, f64)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateDistribution {
    pub weights: Weights,
    /// `max |sum p A - rho|` over matrix entries.
    pub residual: f64,
}

impl StateDistribution {
    pub fn point_mass(alpha: usize) -> Self {
        StateDistribution {
            weights: Weights::Exact(vec![(alpha, BigRational::from_integer(1.into()))]),
            residual: 0.0,
        }
    }

    pub fn support_f64(&self) -> Vec<(usize, f64)> {
        match &self.weights {
            Weights::Exact(v) => v
                .iter()
                .map(|(a, p)| (*a, p.to_f64().unwrap_or(f64::NAN)))
                .collect(),
            Weights::Numeric(v) => v.clone(),
        }
    }

    pub fn exact(&self) -> Option<&[(usize, BigRational)]> {
        match &self.weights {
            Weights::Exact(v) => Some(v),
            Weights::Numeric(_) => None,
        }
    }
}

/// One outcome `r` of a measurement kernel: `Tr(Pi_I^r A_alpha)` and the
/// decomposition of the normalized post-measurement operator.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelBranch {
    pub assignment: ValueAssignment,
    pub prob: BigRational,
    pub next: Vec<(usize, BigRational)>,
}

/// `q_{alpha,I}(beta, r) = prob(r) * next(beta)`.
#[derive(Debug, Clone)]
pub struct TransitionKernel {
    pub source: usize,
    pub group: IsotropicSubgroup,
    pub branches: Vec<KernelBranch>,
    table: Vec<(f64, usize, usize)>,
}

impl TransitionKernel {
    fn new(source: usize, group: IsotropicSubgroup, branches: Vec<KernelBranch>) -> Self {
        let mut acc = 0.0;
        let mut table = Vec::new();
        for (k, b) in branches.iter().enumerate() {
            let pr = b.prob.to_f64().unwrap_or(0.0);
            for (beta, w) in &b.next {
                acc += pr * w.to_f64().unwrap_or(0.0);
                table.push((acc, k, *beta));
            }
        }
        TransitionKernel {
            source,
            group,
            branches,
            table,
        }
    }

    /// `q(beta, r)` for branch `k`.
    pub fn q(&self, k: usize, beta: usize) -> BigRational {
        let b = &self.branches[k];
        b.next
            .iter()
            .find(|(x, _)| *x == beta)
            .map(|(_, w)| w * &b.prob)
            .unwrap_or_else(BigRational::zero)
    }

    /// `sum_{beta, r} q(beta, r)`.
    pub fn total(&self) -> BigRational {
        self.branches
            .iter()
            .flat_map(|b| b.next.iter().map(move |(_, w)| w * &b.prob))
            .sum()
    }

    /// `Q_I(r | alpha)` for branch `k`.
    pub fn marginal(&self, k: usize) -> BigRational {
        self.branches[k].next.iter().map(|(_, w)| w * &self.branches[k].prob).sum()
    }

    /// Branch and next vertex for a uniform sample `u` in `[0, 1)`.
    pub fn sample(&self, u: f64) -> (usize, usize) {
        let total = self.table.last().map(|t| t.0).unwrap_or(0.0);
        let target = u * total;
        let i = self.table.partition_point(|t| t.0 <= target);
        let (_, k, beta) = self.table[i.min(self.table.len() - 1)];
        (k, beta)
    }
}

type CliffordKey = (Vec<usize>, Vec<u32>);
type KernelKey = (usize, Vec<usize>);

/// Facets, vertices and the memo tables of the model at one `(d, n)`.
pub struct Model {
    h: Arc<LambdaHRep>,
    v: Arc<VertexSet>,
    cols: Vec<Vec<BigRational>>,
    cols_f64: Vec<Vec<f64>>,
    matrices: OnceLock<Vec<ComplexMatrix>>,
    kernels: RwLock<HashMap<KernelKey, Arc<TransitionKernel>>>,
    maps: RwLock<HashMap<CliffordKey, Arc<WLinearMap>>>,
}

impl Model {
    /// Builds `Lambda` and enumerates its vertices.
    pub fn new(d: u32, n: usize) -> Result<Self, HvmError> {
        let h = lambda_hrep(d, n)?;
        let v = enumerate_vertices(&h)?;
        Ok(Model::from_parts(Arc::new(h), Arc::new(v)))
    }

    pub fn from_parts(h: Arc<LambdaHRep>, v: Arc<VertexSet>) -> Self {
        let cols = (0..v.len()).map(|a| v.w(a)).collect();
        let cols_f64 = (0..v.len()).map(|a| v.w_f64(a)).collect();
        Model {
            h,
            v,
            cols,
            cols_f64,
            matrices: OnceLock::new(),
            kernels: RwLock::new(HashMap::new()),
            maps: RwLock::new(HashMap::new()),
        }
    }

    pub fn space(&self) -> &PhaseSpace {
        self.h.space()
    }

    pub fn hrep(&self) -> &LambdaHRep {
        &self.h
    }

    pub fn vertices(&self) -> &VertexSet {
        &self.v
    }

    /// Numeric matrices of all vertices.
    pub fn vertex_matrices(&self) -> &[ComplexMatrix] {
        self.matrices.get_or_init(|| {
            (0..self.v.len())
                .map(|a| self.v.operator(a).to_complex_matrix())
                .collect()
        })
    }

    /// `sum_alpha p(alpha) A_alpha` as a numeric matrix.
    pub fn reconstruct(&self, p: &[(usize, f64)]) -> ComplexMatrix {
        let mats = self.vertex_matrices();
        let dim = self.space().dim();
        let mut out = ComplexMatrix::zeros(dim, dim, &num_complex::Complex64::zero());
        for (a, w) in p {
            out = out.add(&mats[*a].scale(&num_complex::Complex64::new(*w, 0.0)));
        }
        out
    }

    /// Exact `sum_alpha p(alpha) w(A_alpha)`.
    pub fn reconstruct_w(&self, p: &[(usize, BigRational)]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.space().size()];
        for (a, w) in p {
            for (o, c) in out.iter_mut().zip(&self.cols[*a]) {
                *o += w * c;
            }
        }
        out
    }

    fn decompose_w_exact(&self, w: &[BigRational]) -> Option<Vec<(usize, BigRational)>> {
        let p = lp::feasible_point(&self.cols, w)?;
        Some(
            p.into_iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .collect(),
        )
    }

    fn clifford_map(&self, u: &CliffordElement) -> Result<Arc<WLinearMap>, HvmError> {
        let space = self.space();
        if u.space() != space {
            return Err(HvmError::Dimension("Clifford acts on a different space".into()));
        }
        let key: CliffordKey = (
            u.symplectic_map().to_vec(),
            (0..space.size()).map(|a| u.phase(a)).collect(),
        );
        if let Some(m) = self.maps.read().expect("map cache").get(&key) {
            return Ok(m.clone());
        }
        let m = Arc::new(clifford_w_map(space, u)?);
        self.maps.write().expect("map cache").insert(key, m.clone());
        Ok(m)
    }

    /// Index of `U A_alpha U^dag`.
    pub fn clifford_update(&self, alpha: usize, u: &CliffordElement) -> Result<usize, HvmError> {
        let m = self.clifford_map(u)?;
        Ok(self.v.clifford_update(alpha, &m)?)
    }

    /// The kernel `q_{alpha, I}`, memoized per `(alpha, I)`.
    pub fn measurement_transition(
        &self,
        alpha: usize,
        group: &IsotropicSubgroup,
    ) -> Result<Arc<TransitionKernel>, HvmError> {
        let key = (alpha, group.elements().to_vec());
        if let Some(k) = self.kernels.read().expect("kernel cache").get(&key) {
            return Ok(k.clone());
        }
        let k = Arc::new(self.compute_kernel(alpha, group)?);
        self.kernels
            .write()
            .expect("kernel cache")
            .entry(key)
            .or_insert(k.clone());
        Ok(k)
    }

    fn compute_kernel(
        &self,
        alpha: usize,
        group: &IsotropicSubgroup,
    ) -> Result<TransitionKernel, HvmError> {
        let a = self.v.operator(alpha);
        let am = a.to_matrix();
        let mut branches = Vec::new();
        for r in value_assignments(group) {
            let p = projector(group, &r)?;
            let t = a
                .projector_trace(&p)
                .to_rational()
                .ok_or_else(|| HvmError::NotExact("outcome probability is not rational".into()))?;
            if t.is_zero() {
                continue;
            }
            let pm = p.matrix();
            let post = Operator::from_matrix(self.space(), &pm.mul(&am).mul(pm));
            let w: Vec<BigRational> = post
                .w_rational()
                .ok_or_else(|| HvmError::NotExact("post-measurement operator".into()))?
                .into_iter()
                .map(|x| x / &t)
                .collect();
            let next = self.decompose_w_exact(&w).ok_or(HvmError::NoDecomposition)?;
            branches.push(KernelBranch {
                assignment: r,
                prob: t,
                next,
            });
        }
        Ok(TransitionKernel::new(alpha, group.clone(), branches))
    }

    /// Number of memoized kernels.
    pub fn cached_kernels(&self) -> usize {
        self.kernels.read().expect("kernel cache").len()
    }
}

fn infeasible(h: &LambdaHRep, k: usize, overlap: f64) -> HvmError {
    HvmError::Infeasible {
        facet: h.facet_label(k),
        overlap,
    }
}

/// A probability vector `p` with `rho = sum_alpha p(alpha) A_alpha`.
pub fn decompose_state(
    model: &Model,
    rho: &State,
    mode: Mode,
) -> Result<StateDistribution, HvmError> {
    let h = model.hrep();
    if rho.space() != model.space() {
        return Err(HvmError::Dimension("state and model spaces differ".into()));
    }
    match mode {
        Mode::Exact => {
            let op = rho
                .exact()
                .ok_or_else(|| HvmError::NotExact("state has no exact form".into()))?;
            if let Some(k) = h.violated(op) {
                let t = op.projector_trace(&h.states()[k]).to_complex64().re;
                return Err(infeasible(h, k, t));
            }
            let w = rho
                .w_exact()
                .ok_or_else(|| HvmError::NotExact("character coordinates are not rational".into()))?;
            let p = model.decompose_w_exact(&w).ok_or(HvmError::NoDecomposition)?;
            if model.reconstruct_w(&p) != w {
                return Err(HvmError::Residual(f64::NAN));
            }
            Ok(StateDistribution {
                weights: Weights::Exact(p),
                residual: 0.0,
            })
        }
        Mode::Numeric => {
            let w = rho.w_f64();
            let (k, m) = h.min_overlap_w(&w);
            if m < -RESIDUAL_TOL {
                return Err(infeasible(h, k, m));
            }
            let p = lp::feasible_point(&model.cols_f64, &w).ok_or(HvmError::NoDecomposition)?;
            let mut support = Vec::new();
            for (a, x) in p.into_iter().enumerate() {
                if x < -CLIP_TOL {
                    return Err(HvmError::Residual(-x));
                }
                if x > 0.0 {
                    support.push((a, x));
                }
            }
            let s: f64 = support.iter().map(|x| x.1).sum();
            for x in &mut support {
                x.1 /= s;
            }
            let residual = model.reconstruct(&support).max_abs_diff(rho.matrix());
            if residual > RESIDUAL_TOL {
                return Err(HvmError::Residual(residual));
            }
            Ok(StateDistribution {
                weights: Weights::Numeric(support),
                residual,
            })
        }
    }
}

/// `r -> sum_alpha p(alpha) Q_I(r | alpha)`, keyed by the assignment.
pub fn born_rule_aggregate(
    model: &Model,
    p: &StateDistribution,
    group: &IsotropicSubgroup,
) -> Result<Vec<(ValueAssignment, f64)>, HvmError> {
    let mut out: Vec<(ValueAssignment, f64)> = value_assignments(group)
        .into_iter()
        .map(|r| (r, 0.0))
        .collect();
    for (alpha, w) in p.support_f64() {
        let k = model.measurement_transition(alpha, group)?;
        for (i, b) in k.branches.iter().enumerate() {
            let slot = out
                .iter_mut()
                .find(|(r, _)| *r == b.assignment)
                .expect("kernel outcome is an assignment");
            slot.1 += w * k.marginal(i).to_f64().unwrap_or(f64::NAN);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{named_gate, PhasePoint};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn zline(space: &PhaseSpace) -> IsotropicSubgroup {
        let z = space
            .index(&PhasePoint::new(space.d(), vec![1], vec![0]).unwrap())
            .unwrap();
        IsotropicSubgroup::generated_by(space, &[z]).unwrap()
    }

    fn cube_vertex(model: &Model, signs: [i64; 3]) -> usize {
        // (1 + sx X + sy Y + sz Z) / 2 with labels Z=(1|0)=2, X=(0|1)=1, Y=(1|1)=3
        let s = model.space();
        let o = s.order();
        let mut x = vec![crate::exact_arith::CycNumber::zero(o); 4];
        x[0] = crate::exact_arith::CycNumber::one(o);
        x[1] = crate::exact_arith::CycNumber::from_int(o, signs[0]);
        x[3] = crate::exact_arith::CycNumber::from_int(o, signs[1]);
        x[2] = crate::exact_arith::CycNumber::from_int(o, signs[2]);
        model.vertices().lookup(&Operator::from_coeffs(s, x)).unwrap()
    }

    #[test]
    fn mixed_qubit_decomposes_exactly() {
        let m = Model::new(2, 1).unwrap();
        let rho = State::preset(m.space(), "mixed").unwrap();
        let p = decompose_state(&m, &rho, Mode::Exact).unwrap();
        let w = m.reconstruct_w(p.exact().unwrap());
        assert_eq!(w, rho.w_exact().unwrap());
        let s: BigRational = p.exact().unwrap().iter().map(|x| x.1.clone()).sum();
        assert_eq!(s, q(1, 1));
        // the uniform mixture is also a certificate
        let uniform: Vec<(usize, BigRational)> = (0..8).map(|a| (a, q(1, 8))).collect();
        assert_eq!(m.reconstruct_w(&uniform), w);
    }

    #[test]
    fn vertex_is_a_point_mass() {
        let m = Model::new(2, 1).unwrap();
        let a = cube_vertex(&m, [1, 1, 1]);
        let rho = State::from_operator(&m.vertices().operator(a));
        let p = decompose_state(&m, &rho, Mode::Exact).unwrap();
        assert_eq!(p.exact().unwrap(), &[(a, q(1, 1))]);
    }

    #[test]
    fn t_state_decomposes_numerically() {
        let m = Model::new(2, 1).unwrap();
        let rho = State::preset(m.space(), "T").unwrap();
        let p = decompose_state(&m, &rho, Mode::Numeric).unwrap();
        assert!(p.residual <= RESIDUAL_TOL);
        let born = born_rule_aggregate(&m, &p, &zline(m.space())).unwrap();
        let p0 = born.iter().find(|(r, _)| r.pairs().all(|(_, v)| v == 0)).unwrap().1;
        assert!((p0 - 0.788675134594813).abs() < 1e-10);
    }

    #[test]
    fn state_outside_lambda_names_a_facet() {
        let m = Model::new(2, 1).unwrap();
        let s = m.space();
        let o = s.order();
        let mut x = vec![crate::exact_arith::CycNumber::zero(o); 4];
        x[0] = crate::exact_arith::CycNumber::one(o);
        x[2] = crate::exact_arith::CycNumber::from_int(o, 2);
        let rho = State::from_operator(&Operator::from_coeffs(s, x));
        match decompose_state(&m, &rho, Mode::Exact) {
            Err(HvmError::Infeasible { overlap, .. }) => assert!((overlap + 0.5).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn hadamard_moves_cube_vertex() {
        let m = Model::new(2, 1).unwrap();
        let h = named_gate(m.space(), "H", &[0]).unwrap();
        let a = cube_vertex(&m, [1, 1, 1]);
        let b = cube_vertex(&m, [1, -1, 1]);
        assert_eq!(m.clifford_update(a, &h).unwrap(), b);
        let id = CliffordElement::identity(m.space());
        assert_eq!(m.clifford_update(a, &id).unwrap(), a);
    }

    #[test]
    fn z_measurement_kernel() {
        let m = Model::new(2, 1).unwrap();
        let a = cube_vertex(&m, [1, 1, 1]);
        let k = m.measurement_transition(a, &zline(m.space())).unwrap();
        assert_eq!(k.total(), q(1, 1));
        assert_eq!(k.branches.len(), 1);
        assert_eq!(k.branches[0].assignment.get(2), Some(0));
        assert_eq!(k.branches[0].prob, q(1, 1));
        let w = m.reconstruct_w(&k.branches[0].next);
        let zero = State::preset(m.space(), "zero").unwrap();
        assert_eq!(w, zero.w_exact().unwrap());
        // trivial measurement returns the source
        let triv = IsotropicSubgroup::trivial(m.space());
        let k0 = m.measurement_transition(a, &triv).unwrap();
        assert_eq!(k0.total(), q(1, 1));
        assert_eq!(m.reconstruct_w(&k0.branches[0].next), m.vertices().w(a));
        assert_eq!(m.cached_kernels(), 2);
    }

    #[test]
    fn qutrit_wigner_vertex_outcomes_are_binary() {
        let m = Model::new(3, 1).unwrap();
        let z = zline(m.space());
        for a in 0..m.vertices().len() {
            let k = m.measurement_transition(a, &z).unwrap();
            assert_eq!(k.total(), q(1, 1));
            for i in 0..k.branches.len() {
                let t = k.marginal(i);
                assert!(t == q(1, 1) || t.is_zero(), "{t}");
            }
        }
    }
}
