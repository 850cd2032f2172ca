//! Isotropic subgroups of `E`, noncontextual value assignments and stabilizer
//! projectors.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::OnceLock;

use num_rational::BigRational;
use thiserror::Error;

use crate::exact_arith::{CycMatrix, CycNumber, Matrix};
use crate::pauli::{CliffordElement, PauliError, PhasePoint, PhaseSpace};

/// Largest `|E|` accepted by exhaustive subgroup enumeration.
pub const ENUMERATION_GUARD: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StabilizerError {
    #[error("|E| = {0} exceeds the enumeration guard {ENUMERATION_GUARD}")]
    SizeGuard(usize),
    #[error("labels {0} and {1} do not commute")]
    NotIsotropic(String, String),
    #[error("invalid value assignment: {0}")]
    InvalidAssignment(String),
    #[error("inconsistent projector algebra: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

/// A subgroup of `E` on which the symplectic product vanishes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IsotropicSubgroup {
    space: PhaseSpace,
    elements: Vec<usize>,
    generators: Vec<usize>,
}

impl IsotropicSubgroup {
    /// Span of `gens`, rejected unless isotropic.
    pub fn generated_by(space: &PhaseSpace, gens: &[usize]) -> Result<Self, StabilizerError> {
        for (i, &a) in gens.iter().enumerate() {
            for &b in &gens[i..] {
                if !space.commute(a, b) {
                    return Err(StabilizerError::NotIsotropic(
                        space.point(a).to_string(),
                        space.point(b).to_string(),
                    ));
                }
            }
        }
        Ok(Self::from_commuting(space, gens))
    }

    pub fn from_points(space: &PhaseSpace, gens: &[PhasePoint]) -> Result<Self, StabilizerError> {
        let idx = gens
            .iter()
            .map(|p| space.index(p))
            .collect::<Result<Vec<_>, _>>()?;
        Self::generated_by(space, &idx)
    }

    fn from_commuting(space: &PhaseSpace, gens: &[usize]) -> Self {
        let elements = space.span(gens);
        let mut minimal: Vec<usize> = Vec::new();
        let mut covered = vec![0usize];
        for &g in gens {
            if covered.binary_search(&g).is_err() {
                minimal.push(g);
                covered = space.span(&minimal);
            }
        }
        IsotropicSubgroup {
            space: space.clone(),
            elements,
            generators: minimal,
        }
    }

    pub fn trivial(space: &PhaseSpace) -> Self {
        IsotropicSubgroup {
            space: space.clone(),
            elements: vec![0],
            generators: Vec::new(),
        }
    }

    pub fn space(&self) -> &PhaseSpace {
        &self.space
    }

    /// Sorted element indices.
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, a: usize) -> bool {
        self.elements.binary_search(&a).is_ok()
    }

    pub fn points(&self) -> Vec<PhasePoint> {
        self.elements.iter().map(|&a| self.space.point(a)).collect()
    }

    /// True when no label outside the group commutes with all of it.
    pub fn is_maximal(&self) -> bool {
        self.perp().len() == self.order()
    }

    /// `I^perp` as a sorted label list.
    pub fn perp(&self) -> Vec<usize> {
        (0..self.space.size())
            .filter(|&a| self.generators.iter().all(|&g| self.space.commute(a, g)))
            .collect()
    }

    pub fn intersect(&self, o: &Self) -> Self {
        let common: Vec<usize> = self
            .elements
            .iter()
            .copied()
            .filter(|a| o.contains(*a))
            .collect();
        Self::from_commuting(&self.space, &common)
    }

    /// Subgroup generated by both; errors if the result is not isotropic.
    pub fn join(&self, o: &Self) -> Result<Self, StabilizerError> {
        let gens: Vec<usize> = self.generators.iter().chain(&o.generators).copied().collect();
        Self::generated_by(&self.space, &gens)
    }

    /// Intersection with a label set given sorted.
    pub fn intersect_set(&self, set: &[usize]) -> Self {
        let common: Vec<usize> = self
            .elements
            .iter()
            .copied()
            .filter(|a| set.binary_search(a).is_ok())
            .collect();
        Self::from_commuting(&self.space, &common)
    }

    pub fn image(&self, u: &CliffordElement) -> Self {
        let gens: Vec<usize> = self.generators.iter().map(|&g| u.image(g)).collect();
        Self::from_commuting(&self.space, &gens)
    }
}

/// A function `r` on a label set with `r(a) + r(b) - r(a+b) = -beta(a,b)` on
/// commuting pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ValueAssignment {
    domain: Vec<usize>,
    values: Vec<u32>,
}

impl ValueAssignment {
    /// From `(label, value)` pairs; the domain is sorted.
    pub fn from_pairs(mut pairs: Vec<(usize, u32)>) -> Self {
        pairs.sort_unstable();
        let (domain, values) = pairs.into_iter().unzip();
        ValueAssignment { domain, values }
    }

    pub fn domain(&self) -> &[usize] {
        &self.domain
    }

    pub fn get(&self, a: usize) -> Option<u32> {
        self.domain
            .binary_search(&a)
            .ok()
            .map(|i| self.values[i])
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.domain.iter().copied().zip(self.values.iter().copied())
    }

    pub fn restrict(&self, set: &[usize]) -> Self {
        Self::from_pairs(
            self.pairs()
                .filter(|(a, _)| set.binary_search(a).is_ok())
                .collect(),
        )
    }

    /// Checks `r(0) = 0` (when `0` is in the domain) and the twisted
    /// additivity on every commuting pair whose sum lies in the domain.
    pub fn is_noncontextual(&self, space: &PhaseSpace) -> bool {
        if self.get(0).is_some_and(|v| v != 0) {
            return false;
        }
        let d = space.d();
        for (a, ra) in self.pairs() {
            for (b, rb) in self.pairs() {
                if !space.commute(a, b) {
                    continue;
                }
                let Some(rs) = self.get(space.add(a, b)) else {
                    continue;
                };
                let beta = space.beta_mod(a, b).expect("integral on commuting pairs");
                if (ra + rb + beta) % d != rs % d {
                    return false;
                }
            }
        }
        true
    }

    /// `U.r` on `S_U(domain)`: `U.r(S_U(a)) = r(a) - Phi_U(a)`.
    pub fn transport(&self, u: &CliffordElement) -> Self {
        let d = u.space().d();
        Self::from_pairs(
            self.pairs()
                .map(|(a, v)| (u.image(a), (v + d - u.phase(a)) % d))
                .collect(),
        )
    }
}

/// All isotropic subgroups of `E` (or only the maximal ones), sorted by
/// their element lists.
pub fn enumerate_isotropics(
    d: u32,
    n: usize,
    only_maximal: bool,
) -> Result<Vec<IsotropicSubgroup>, StabilizerError> {
    let space = PhaseSpace::new(d, n)?;
    if space.size() > ENUMERATION_GUARD {
        return Err(StabilizerError::SizeGuard(space.size()));
    }
    let size = space.size();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut queue = VecDeque::new();
    let mut out = Vec::new();
    let start = IsotropicSubgroup::trivial(&space);
    seen.insert(start.elements.clone());
    queue.push_back(start);
    while let Some(g) = queue.pop_front() {
        let mut extended = false;
        for e in 0..size {
            if g.contains(e) || !g.generators.iter().all(|&h| space.commute(e, h)) {
                continue;
            }
            extended = true;
            let mut gens = g.generators.clone();
            gens.push(e);
            let next = IsotropicSubgroup::from_commuting(&space, &gens);
            if seen.insert(next.elements.clone()) {
                queue.push_back(next);
            }
        }
        if !only_maximal || !extended {
            out.push(g);
        }
    }
    out.sort_by(|a, b| a.elements.cmp(&b.elements));
    Ok(out)
}

/// All noncontextual value assignments on the subgroup `I`, by free choice on
/// generators, propagation along a spanning tree and a full consistency check.
pub fn value_assignments(i: &IsotropicSubgroup) -> Vec<ValueAssignment> {
    let space = &i.space;
    let d = space.d();
    let gens = &i.generators;
    // spanning tree: parent[a] = (b, g) with a = b + gens[g]
    let mut order = vec![0usize];
    let mut parent: HashMap<usize, (usize, usize)> = HashMap::new();
    let mut seen: HashSet<usize> = HashSet::from([0]);
    let mut k = 0;
    while k < order.len() {
        let a = order[k];
        for (gi, &g) in gens.iter().enumerate() {
            let s = space.add(a, g);
            if seen.insert(s) {
                parent.insert(s, (a, gi));
                order.push(s);
            }
        }
        k += 1;
    }
    let mut out = Vec::new();
    let combos = (d as usize).pow(gens.len() as u32);
    for c in 0..combos {
        let mut gv = Vec::with_capacity(gens.len());
        let mut rest = c;
        for _ in gens {
            gv.push((rest % d as usize) as u32);
            rest /= d as usize;
        }
        let mut r: HashMap<usize, u32> = HashMap::from([(0, 0)]);
        for &a in &order[1..] {
            let (b, gi) = parent[&a];
            let beta = space.beta_mod(b, gens[gi]).expect("commuting pair");
            r.insert(a, (r[&b] + gv[gi] + beta) % d);
        }
        let va = ValueAssignment::from_pairs(r.into_iter().collect());
        if va.is_noncontextual(space) {
            out.push(va);
        }
    }
    out.sort_by(|a, b| a.values.cmp(&b.values));
    out
}

/// Smallest superset of `omega` closed under inference.
pub fn closure(space: &PhaseSpace, omega: &[usize]) -> Vec<usize> {
    let mut inside = vec![false; space.size()];
    let mut set: Vec<usize> = Vec::new();
    for &a in omega.iter().chain(std::iter::once(&0)) {
        if !inside[a] {
            inside[a] = true;
            set.push(a);
        }
    }
    let mut changed = true;
    while changed {
        changed = false;
        let snapshot = set.clone();
        for (i, &a) in snapshot.iter().enumerate() {
            for &b in &snapshot[i..] {
                if space.commute(a, b) {
                    let s = space.add(a, b);
                    if !inside[s] {
                        inside[s] = true;
                        set.push(s);
                        changed = true;
                    }
                }
            }
        }
    }
    set.sort_unstable();
    set
}

/// All noncontextual value assignments on an arbitrary label set, by
/// backtracking with constraint checks on commuting triples.
pub fn assignments_on_set(space: &PhaseSpace, set: &[usize]) -> Vec<ValueAssignment> {
    let d = space.d();
    let pos: HashMap<usize, usize> = set.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    // constraints[k]: triples (i, j, s) with max index k and r_i + r_j + beta = r_s
    let mut constraints: Vec<Vec<(usize, usize, usize, u32)>> = vec![Vec::new(); set.len()];
    for (i, &a) in set.iter().enumerate() {
        for (j, &b) in set.iter().enumerate().skip(i) {
            if !space.commute(a, b) {
                continue;
            }
            if let Some(&s) = pos.get(&space.add(a, b)) {
                let beta = space.beta_mod(a, b).expect("commuting pair");
                constraints[i.max(j).max(s)].push((i, j, s, beta));
            }
        }
    }
    let mut out = Vec::new();
    let mut vals = vec![0u32; set.len()];
    fn rec(
        k: usize,
        d: u32,
        set: &[usize],
        vals: &mut Vec<u32>,
        cons: &[Vec<(usize, usize, usize, u32)>],
        out: &mut Vec<ValueAssignment>,
    ) {
        if k == set.len() {
            out.push(ValueAssignment::from_pairs(
                set.iter().copied().zip(vals.iter().copied()).collect(),
            ));
            return;
        }
        let range = if set[k] == 0 { 0..1 } else { 0..d };
        for v in range {
            vals[k] = v;
            let ok = cons[k]
                .iter()
                .all(|&(i, j, s, beta)| (vals[i] + vals[j] + beta) % d == vals[s]);
            if ok {
                rec(k + 1, d, set, vals, cons, out);
            }
        }
    }
    rec(0, d, set, &mut vals, &constraints, &mut out);
    out
}

/// Closure under inference, cnc flag and all value assignments on the closure.
pub fn closure_and_cnc(
    space: &PhaseSpace,
    omega: &[PhasePoint],
) -> Result<(Vec<PhasePoint>, bool, Vec<ValueAssignment>), StabilizerError> {
    let idx = omega
        .iter()
        .map(|p| space.index(p))
        .collect::<Result<Vec<_>, _>>()?;
    let cl = closure(space, &idx);
    let assignments = assignments_on_set(space, &cl);
    let pts = cl.iter().map(|&a| space.point(a)).collect();
    Ok((pts, !assignments.is_empty(), assignments))
}

/// `Pi_I^r = (1/|I|) sum_{b in I} omega^{-r(b)} T_b`, with its matrix built on demand.
#[derive(Debug, Clone)]
pub struct StabilizerProjector {
    group: IsotropicSubgroup,
    assignment: ValueAssignment,
    matrix: OnceLock<CycMatrix>,
}

impl PartialEq for StabilizerProjector {
    fn eq(&self, o: &Self) -> bool {
        self.group == o.group && self.assignment == o.assignment
    }
}

impl StabilizerProjector {
    pub fn group(&self) -> &IsotropicSubgroup {
        &self.group
    }

    pub fn assignment(&self) -> &ValueAssignment {
        &self.assignment
    }

    pub fn space(&self) -> &PhaseSpace {
        &self.group.space
    }

    pub fn matrix(&self) -> &CycMatrix {
        self.matrix.get_or_init(|| {
            let space = &self.group.space;
            let dim = space.dim();
            let order = space.order();
            let mut m = Matrix::zeros(dim, dim, &CycNumber::zero(order));
            let inv = BigRational::new(1.into(), (self.group.order() as i64).into());
            for (b, r) in self.assignment.pairs() {
                for j in 0..dim {
                    let (row, e) = space.pauli_entry(b, j);
                    let k = e as i64 - (r * space.zeta_per_omega()) as i64;
                    let v = m.get(row, j) + &CycNumber::root(order, k).scale(&inv);
                    m.set(row, j, v);
                }
            }
            m
        })
    }

    /// Rank `d^n / |I|`.
    pub fn rank(&self) -> usize {
        self.group.space.dim() / self.group.order()
    }

    /// Pauli coefficients `x_a = Tr(T_{-a} Pi)`: `(d^n/|I|) omega^{-r(a)}` on `I`.
    pub fn pauli_coeffs(&self) -> Vec<CycNumber> {
        let space = &self.group.space;
        let mut x = vec![CycNumber::zero(space.order()); space.size()];
        let f = BigRational::new(
            (space.dim() as i64).into(),
            (self.group.order() as i64).into(),
        );
        for (a, r) in self.assignment.pairs() {
            x[a] = space.omega(-(r as i64)).scale(&f);
        }
        x
    }
}

/// Stabilizer projector for a valid `(I, r)`.
pub fn projector(
    i: &IsotropicSubgroup,
    r: &ValueAssignment,
) -> Result<StabilizerProjector, StabilizerError> {
    if r.domain() != i.elements() {
        return Err(StabilizerError::InvalidAssignment(
            "domain differs from the subgroup".into(),
        ));
    }
    if !r.is_noncontextual(&i.space) {
        return Err(StabilizerError::InvalidAssignment(
            "twisted additivity fails".into(),
        ));
    }
    Ok(StabilizerProjector {
        group: i.clone(),
        assignment: r.clone(),
        matrix: OnceLock::new(),
    })
}

/// Outcome of `Pi_I^r Pi_J^s Pi_I^r`.
#[derive(Debug, Clone)]
pub struct ProjectorProduct {
    /// `Tr(Pi_I^r Pi_J^s)`.
    pub trace: CycNumber,
    /// `(|J cap I^perp| / |J|, Pi_{I + J cap I^perp}^{r*s})`, or `None` for the zero operator.
    pub result: Option<(BigRational, StabilizerProjector)>,
}

/// Closed form of the sandwiched product of two stabilizer projectors.
pub fn projector_product(
    i: &IsotropicSubgroup,
    r: &ValueAssignment,
    j: &IsotropicSubgroup,
    s: &ValueAssignment,
) -> Result<ProjectorProduct, StabilizerError> {
    let space = &i.space;
    let order = space.order();
    let cap = i.intersect(j);
    let matches = cap.elements().iter().all(|&a| r.get(a) == s.get(a));
    if !matches {
        return Ok(ProjectorProduct {
            trace: CycNumber::zero(order),
            result: None,
        });
    }
    let trace = BigRational::new(
        (cap.order() as i64 * space.dim() as i64).into(),
        (i.order() as i64 * j.order() as i64).into(),
    );
    let iperp = i.perp();
    let jp = j.intersect_set(&iperp);
    let k = i.join(&jp)?;
    let fixed: Vec<(usize, u32)> = r
        .pairs()
        .chain(s.pairs().filter(|(a, _)| jp.contains(*a)))
        .collect();
    let mut ext = value_assignments(&k)
        .into_iter()
        .filter(|t| fixed.iter().all(|&(a, v)| t.get(a) == Some(v)));
    let star = ext
        .next()
        .ok_or_else(|| StabilizerError::Inconsistent("no r*s assignment".into()))?;
    if ext.next().is_some() {
        return Err(StabilizerError::Inconsistent("r*s is not unique".into()));
    }
    let factor = BigRational::new((jp.order() as i64).into(), (j.order() as i64).into());
    Ok(ProjectorProduct {
        trace: CycNumber::from_rational(order, trace),
        result: Some((factor, projector(&k, &star)?)),
    })
}

/// Extensions of `r` from `I` to the larger isotropic `I'`, verified to sum
/// to `Pi_I^r` exactly.
pub fn coarse_grain(
    i: &IsotropicSubgroup,
    r: &ValueAssignment,
    i_prime: &IsotropicSubgroup,
) -> Result<Vec<ValueAssignment>, StabilizerError> {
    if !i.elements().iter().all(|&a| i_prime.contains(a)) {
        return Err(StabilizerError::Inconsistent("I is not contained in I'".into()));
    }
    let gamma: Vec<ValueAssignment> = value_assignments(i_prime)
        .into_iter()
        .filter(|t| r.pairs().all(|(a, v)| t.get(a) == Some(v)))
        .collect();
    if gamma.len() * i.order() != i_prime.order() {
        return Err(StabilizerError::Inconsistent(format!(
            "{} extensions for index {}",
            gamma.len(),
            i_prime.order() / i.order()
        )));
    }
    let base = projector(i, r)?;
    let zero = CycNumber::zero(i.space.order());
    let dim = i.space.dim();
    let mut sum = Matrix::zeros(dim, dim, &zero);
    for t in &gamma {
        sum = sum.add(projector(i_prime, t)?.matrix());
    }
    if &sum != base.matrix() {
        return Err(StabilizerError::Inconsistent("coarse-grained sum differs".into()));
    }
    Ok(gamma)
}

/// `(U.I, U.r)`, verified by exact conjugation of the projector.
pub fn clifford_transport(
    u: &CliffordElement,
    i: &IsotropicSubgroup,
    r: &ValueAssignment,
) -> Result<(IsotropicSubgroup, ValueAssignment), StabilizerError> {
    let before = projector(i, r)?;
    let i_out = i.image(u);
    let r_out = r.transport(u);
    let after = projector(&i_out, &r_out)?;
    if &u.conjugate_matrix(before.matrix()) != after.matrix() {
        return Err(StabilizerError::Inconsistent("transported projector differs".into()));
    }
    Ok((i_out, r_out))
}

/// All pure stabilizer states `(maximal I, r)`, deduplicated by their exact
/// Pauli coefficients.
pub fn stabilizer_states(d: u32, n: usize) -> Result<Vec<StabilizerProjector>, StabilizerError> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for i in enumerate_isotropics(d, n, true)? {
        for r in value_assignments(&i) {
            let p = projector(&i, &r)?;
            if p.rank() == 1 && seen.insert(p.pauli_coeffs()) {
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// Identity matrix over the phase field of `space`.
pub fn identity_matrix(space: &PhaseSpace) -> CycMatrix {
    CycMatrix::identity(space.dim(), &CycNumber::zero(space.order()))
}
