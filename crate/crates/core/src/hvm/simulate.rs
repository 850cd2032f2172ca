//! Sampling runs, the exact outcome tree of the model, and the
//! quantum-mechanical reference.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::{Circuit, CircuitOp, HvmError, Model};
use crate::exact_arith::{ComplexMatrix, CycMatrix, CycNumber};
use crate::stabilizer::{projector, value_assignments, IsotropicSubgroup};

/// Probability weights carried through the outcome tree.
pub trait Weight: Clone + Send + Sync {
    fn w_zero() -> Self;
    fn w_one() -> Self;
    fn w_add(&self, o: &Self) -> Self;
    fn w_mul_q(&self, q: &BigRational) -> Self;
    fn w_mul(&self, o: &Self) -> Self;
    fn w_div(&self, o: &Self) -> Self;
    fn w_is_zero(&self) -> bool;
    fn w_f64(&self) -> f64;
}

impl Weight for f64 {
    fn w_zero() -> Self {
        0.0
    }
    fn w_one() -> Self {
        1.0
    }
    fn w_add(&self, o: &Self) -> Self {
        self + o
    }
    fn w_mul_q(&self, q: &BigRational) -> Self {
        self * ToPrimitive::to_f64(q).unwrap_or(f64::NAN)
    }
    fn w_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn w_div(&self, o: &Self) -> Self {
        self / o
    }
    fn w_is_zero(&self) -> bool {
        *self == 0.0
    }
    fn w_f64(&self) -> f64 {
        *self
    }
}

impl Weight for BigRational {
    fn w_zero() -> Self {
        Zero::zero()
    }
    fn w_one() -> Self {
        num_traits::One::one()
    }
    fn w_add(&self, o: &Self) -> Self {
        self + o
    }
    fn w_mul_q(&self, q: &BigRational) -> Self {
        self * q
    }
    fn w_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn w_div(&self, o: &Self) -> Self {
        self / o
    }
    fn w_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn w_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// One outcome sequence of the model with its probability and the
/// conditional distribution over vertices.
#[derive(Debug, Clone)]
pub struct Branch<W> {
    pub outcomes: Vec<u32>,
    pub prob: W,
    pub dist: Vec<(usize, W)>,
}

fn line(model: &Model, a: usize) -> Result<IsotropicSubgroup, HvmError> {
    Ok(IsotropicSubgroup::generated_by(model.space(), &[a])?)
}

/// Exact evolution of the vertex distribution through `circuit`, branching
/// on every outcome with positive probability.
pub fn model_branches<W: Weight>(
    model: &Model,
    circuit: &Circuit,
    p: Vec<(usize, W)>,
) -> Result<Vec<Branch<W>>, HvmError> {
    let mut branches = vec![Branch {
        outcomes: Vec::new(),
        prob: W::w_one(),
        dist: p,
    }];
    for op in &circuit.ops {
        match op {
            CircuitOp::Clifford(u) => {
                for b in &mut branches {
                    for (alpha, _) in &mut b.dist {
                        *alpha = model.clifford_update(*alpha, u)?;
                    }
                }
            }
            CircuitOp::Measure(a) => {
                let group = line(model, *a)?;
                let mut next = Vec::new();
                for b in &branches {
                    let mut by_outcome: BTreeMap<u32, BTreeMap<usize, W>> = BTreeMap::new();
                    for (alpha, w) in &b.dist {
                        let k = model.measurement_transition(*alpha, &group)?;
                        for br in &k.branches {
                            let v = br.assignment.get(*a).expect("label in its own line");
                            let slot = by_outcome.entry(v).or_default();
                            for (beta, x) in &br.next {
                                let q = x * &br.prob;
                                let e = slot.entry(*beta).or_insert_with(W::w_zero);
                                *e = e.w_add(&w.w_mul_q(&q));
                            }
                        }
                    }
                    for (v, m) in by_outcome {
                        let pv = m.values().fold(W::w_zero(), |acc, x| acc.w_add(x));
                        if pv.w_is_zero() {
                            continue;
                        }
                        let mut outcomes = b.outcomes.clone();
                        outcomes.push(v);
                        next.push(Branch {
                            outcomes,
                            prob: b.prob.w_mul(&pv),
                            dist: m.into_iter().map(|(beta, x)| (beta, x.w_div(&pv))).collect(),
                        });
                    }
                }
                branches = next;
            }
        }
    }
    Ok(branches)
}

/// A quantum-mechanical outcome sequence, its probability and the
/// normalized post-measurement state.
#[derive(Debug, Clone)]
pub struct OracleBranch {
    pub outcomes: Vec<u32>,
    pub prob: f64,
    pub state: ComplexMatrix,
    pub exact_prob: Option<CycNumber>,
    pub exact_state: Option<CycMatrix>,
}

/// Probabilities below this are pruned from inexact oracle trees.
const ORACLE_PRUNE: f64 = 1e-13;

/// Chain-rule evaluation of every outcome sequence with dense matrices,
/// exact when the input state is.
pub fn oracle_simulate(circuit: &Circuit) -> Result<Vec<OracleBranch>, HvmError> {
    let space = &circuit.space;
    let exact = circuit.state.exact().map(|op| op.to_matrix());
    let mut branches = vec![OracleBranch {
        outcomes: Vec::new(),
        prob: 1.0,
        state: circuit.state.matrix().clone(),
        exact_prob: exact.as_ref().map(|_| CycNumber::one(space.order())),
        exact_state: exact,
    }];
    for op in &circuit.ops {
        match op {
            CircuitOp::Clifford(u) => {
                let uc = u.unitary_c64();
                let ud = uc.adjoint();
                for b in &mut branches {
                    b.state = uc.mul(&b.state).mul(&ud);
                    if let Some(m) = &b.exact_state {
                        b.exact_state = Some(u.conjugate_matrix(m));
                    }
                }
            }
            CircuitOp::Measure(a) => {
                let group = IsotropicSubgroup::generated_by(space, &[*a])?;
                let projs = value_assignments(&group)
                    .into_iter()
                    .map(|r| {
                        let v = r.get(*a).expect("label in its own line");
                        projector(&group, &r).map(|p| (v, p))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let mut next = Vec::new();
                for b in &branches {
                    for (v, p) in &projs {
                        let pc = p.matrix().to_complex();
                        let post = pc.mul(&b.state).mul(&pc);
                        let t: f64 = (0..space.dim()).map(|i| post.get(i, i).re).sum();
                        let mut outcomes = b.outcomes.clone();
                        outcomes.push(*v);
                        if let Some(m) = &b.exact_state {
                            let pe = p.matrix().mul(m).mul(p.matrix());
                            let te = pe.trace();
                            if te.is_zero() {
                                continue;
                            }
                            let inv = te.try_inv().map_err(|e| HvmError::Circuit(e.to_string()))?;
                            let prob = b.exact_prob.as_ref().expect("exact branch") * &te;
                            next.push(OracleBranch {
                                outcomes,
                                prob: prob.to_complex64().re,
                                state: post.scale(&Complex64::new(1.0 / t, 0.0)),
                                exact_state: Some(pe.scale(&inv)),
                                exact_prob: Some(prob),
                            });
                        } else {
                            if t * b.prob < ORACLE_PRUNE {
                                continue;
                            }
                            next.push(OracleBranch {
                                outcomes,
                                prob: b.prob * t,
                                state: post.scale(&Complex64::new(1.0 / t, 0.0)),
                                exact_prob: None,
                                exact_state: None,
                            });
                        }
                    }
                }
                branches = next;
            }
        }
    }
    Ok(branches)
}

/// Outcomes of one sampled trajectory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShotRecord {
    pub shot: u64,
    pub outcomes: Vec<u32>,
    pub final_vertex: usize,
}

fn sample_index(cum: &[f64], u: f64) -> usize {
    let total = *cum.last().expect("nonempty distribution");
    cum.partition_point(|&c| c <= u * total).min(cum.len() - 1)
}

/// One run of the sampling algorithm. The stream is fixed by `(seed, shot)`.
pub fn simulate_run(
    model: &Model,
    circuit: &Circuit,
    p: &[(usize, f64)],
    seed: u64,
    shot: u64,
) -> Result<ShotRecord, HvmError> {
    if p.is_empty() {
        return Err(HvmError::NoDecomposition);
    }
    let mut cum = Vec::with_capacity(p.len());
    let mut acc = 0.0;
    for (_, w) in p {
        acc += w;
        cum.push(acc);
    }
    run_with(model, circuit, p, &cum, seed, shot)
}

fn run_with(
    model: &Model,
    circuit: &Circuit,
    p: &[(usize, f64)],
    cum: &[f64],
    seed: u64,
    shot: u64,
) -> Result<ShotRecord, HvmError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot);
    let mut alpha = p[sample_index(cum, rng.gen::<f64>())].0;
    let mut outcomes = Vec::new();
    for op in &circuit.ops {
        match op {
            CircuitOp::Clifford(u) => alpha = model.clifford_update(alpha, u)?,
            CircuitOp::Measure(a) => {
                let k = model.measurement_transition(alpha, &line(model, *a)?)?;
                let (i, beta) = k.sample(rng.gen::<f64>());
                outcomes.push(
                    k.branches[i]
                        .assignment
                        .get(*a)
                        .expect("label in its own line"),
                );
                alpha = beta;
            }
        }
    }
    Ok(ShotRecord {
        shot,
        outcomes,
        final_vertex: alpha,
    })
}

/// Worker count: `LAMBDA_HVM_THREADS` when set to a positive integer,
/// otherwise the rayon default.
pub fn thread_count() -> usize {
    std::env::var("LAMBDA_HVM_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(rayon::current_num_threads)
}

/// `shots` independent runs, in shot order.
pub fn run_shots(
    model: &Model,
    circuit: &Circuit,
    p: &[(usize, f64)],
    seed: u64,
    shots: u64,
) -> Result<Vec<ShotRecord>, HvmError> {
    if p.is_empty() {
        return Err(HvmError::NoDecomposition);
    }
    let mut cum = Vec::with_capacity(p.len());
    let mut acc = 0.0;
    for (_, w) in p {
        acc += w;
        cum.push(acc);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count())
        .build()
        .map_err(|e| HvmError::Circuit(e.to_string()))?;
    pool.install(|| {
        (0..shots)
            .into_par_iter()
            .map(|s| run_with(model, circuit, p, &cum, seed, s))
            .collect()
    })
}

/// Pearson statistic of sampled outcome sequences against `expected`
/// probabilities, returning `(statistic, degrees of freedom, p-value)`.
/// Bins with expected count below five are pooled. Outcomes the reference
/// forbids give a p-value of zero.
pub fn chi_square(records: &[ShotRecord], expected: &[(Vec<u32>, f64)]) -> (f64, usize, f64) {
    let n = records.len() as f64;
    let mut counts: HashMap<&[u32], u64> = HashMap::new();
    for r in records {
        *counts.entry(&r.outcomes).or_default() += 1;
    }
    let known: HashMap<&[u32], f64> = expected.iter().map(|(k, p)| (k.as_slice(), *p)).collect();
    if counts.keys().any(|k| known.get(k).copied().unwrap_or(0.0) <= 0.0) {
        return (f64::INFINITY, 0, 0.0);
    }
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let (mut pool_o, mut pool_e) = (0.0, 0.0);
    for (k, p) in expected {
        let e = p * n;
        let o = counts.get(k.as_slice()).copied().unwrap_or(0) as f64;
        if e >= 5.0 {
            bins.push((o, e));
        } else {
            pool_o += o;
            pool_e += e;
        }
    }
    if pool_e > 0.0 {
        bins.push((pool_o, pool_e));
    }
    let stat: f64 = bins.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let df = bins.len().saturating_sub(1);
    if df == 0 {
        return (stat, 0, 1.0);
    }
    let dist = ChiSquared::new(df as f64).expect("positive degrees of freedom");
    (stat, df, 1.0 - dist.cdf(stat))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hvm::{decompose_state, parse_circuit, Mode};

    #[test]
    fn zero_state_always_reads_zero() {
        let c = parse_circuit(
            r#"{"d":2,"n":1,"state":{"preset":"zero"},"ops":[{"measure":{"a":"Z:(1)|X:(0)"}}]}"#,
        )
        .unwrap();
        let m = Model::new(2, 1).unwrap();
        let p = decompose_state(&m, &c.state, Mode::Numeric).unwrap().support_f64();
        for seed in 0..20 {
            let r = simulate_run(&m, &c, &p, seed, 0).unwrap();
            assert_eq!(r.outcomes, vec![0]);
        }
    }

    #[test]
    fn empty_circuit_has_no_outcomes() {
        let c = parse_circuit(r#"{"d":3,"n":1,"state":{"preset":"strange"}}"#).unwrap();
        let m = Model::new(3, 1).unwrap();
        let p = decompose_state(&m, &c.state, Mode::Exact).unwrap().support_f64();
        let r = run_shots(&m, &c, &p, 7, 10).unwrap();
        assert!(r.iter().all(|s| s.outcomes.is_empty()));
    }

    #[test]
    fn runs_are_reproducible() {
        let c = parse_circuit(
            r#"{"d":2,"n":1,"state":{"preset":"T"},"ops":[{"measure":{"a":"Z:(1)|X:(0)"}},{"gate":{"name":"H","targets":[0]}},{"measure":{"a":"Z:(1)|X:(0)"}}]}"#,
        )
        .unwrap();
        let m = Model::new(2, 1).unwrap();
        let p = decompose_state(&m, &c.state, Mode::Numeric).unwrap().support_f64();
        assert_eq!(run_shots(&m, &c, &p, 3, 50).unwrap(), run_shots(&m, &c, &p, 3, 50).unwrap());
    }

    #[test]
    fn oracle_examples() {
        let c = parse_circuit(
            r#"{"d":2,"n":1,"state":{"preset":"zero"},"ops":[{"gate":{"name":"H","targets":[0]}},{"measure":{"a":"Z:(1)|X:(0)"}}]}"#,
        )
        .unwrap();
        let o = oracle_simulate(&c).unwrap();
        assert_eq!(o.len(), 2);
        for b in &o {
            assert_eq!(b.exact_prob.as_ref().unwrap(), &CycNumber::from_frac(4, 1, 2));
        }
        let c = parse_circuit(
            r#"{"d":3,"n":1,"state":{"preset":"zero"},"ops":[{"measure":{"a":"Z:(0)|X:(1)"}}]}"#,
        )
        .unwrap();
        let o = oracle_simulate(&c).unwrap();
        assert_eq!(o.len(), 3);
        for b in &o {
            assert_eq!(b.exact_prob.as_ref().unwrap(), &CycNumber::from_frac(3, 1, 3));
        }
    }

    #[test]
    fn model_tree_matches_oracle_exactly() {
        let c = parse_circuit(
            r#"{"d":3,"n":1,"state":{"preset":"norrell"},"ops":[{"measure":{"a":"Z:(1)|X:(1)"}},{"gate":{"name":"F","targets":[0]}},{"measure":{"a":"Z:(1)|X:(0)"}}]}"#,
        )
        .unwrap();
        let m = Model::new(3, 1).unwrap();
        let p = decompose_state(&m, &c.state, Mode::Exact).unwrap();
        let mut tree = model_branches(&m, &c, p.exact().unwrap().to_vec()).unwrap();
        let mut oracle = oracle_simulate(&c).unwrap();
        tree.sort_by(|a, b| a.outcomes.cmp(&b.outcomes));
        oracle.sort_by(|a, b| a.outcomes.cmp(&b.outcomes));
        assert_eq!(tree.len(), oracle.len());
        for (t, o) in tree.iter().zip(&oracle) {
            assert_eq!(t.outcomes, o.outcomes);
            assert_eq!(
                CycNumber::from_rational(3, t.prob.clone()),
                *o.exact_prob.as_ref().unwrap()
            );
            let w = m.reconstruct_w(&t.dist);
            let post = crate::polytope::Operator::from_matrix(m.space(), o.exact_state.as_ref().unwrap());
            assert_eq!(w, post.w_rational().unwrap());
        }
    }

    #[test]
    fn chi_square_flags_forbidden_outcomes() {
        let recs = vec![ShotRecord {
            shot: 0,
            outcomes: vec![1],
            final_vertex: 0,
        }];
        assert_eq!(chi_square(&recs, &[(vec![0], 1.0)]).2, 0.0);
        let recs: Vec<ShotRecord> = (0..100)
            .map(|s| ShotRecord {
                shot: s,
                outcomes: vec![(s % 2) as u32],
                final_vertex: 0,
            })
            .collect();
        let (stat, df, p) = chi_square(&recs, &[(vec![0], 0.5), (vec![1], 0.5)]);
        assert_eq!((stat, df), (0.0, 1));
        assert!((p - 1.0).abs() < 1e-12);
    }
}
