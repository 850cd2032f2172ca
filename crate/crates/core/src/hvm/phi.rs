//! The map `X -> U (X (x) Pi_J^r) U^dag` from `m` to `n` qudits and its
//! verification.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::HvmError;
use crate::exact_arith::CycNumber;
use crate::pauli::{clifford_generators, CliffordElement, PhaseSpace};
use crate::polytope::{
    certify_w, cnc_phase_point, cnc_type, enumerate_vertices, integer_row, lambda_hrep, Operator,
    Rejection,
};
use crate::stabilizer::{
    enumerate_isotropics, projector, stabilizer_states, value_assignments, IsotropicSubgroup,
    ValueAssignment,
};

/// `Phi_{U,J}^r` with `J` an isotropic subgroup of the trailing `n - m`
/// qudits, given in their own labels.
#[derive(Debug, Clone)]
pub struct PhiMapSpec {
    small: PhaseSpace,
    big: PhaseSpace,
    rest: Option<(PhaseSpace, IsotropicSubgroup, ValueAssignment)>,
    u: CliffordElement,
}

impl PhiMapSpec {
    /// `j` and `r` live on the `n - m` trailing qudits; they must be absent
    /// when `m = n`. `u` defaults to the identity.
    pub fn new(
        d: u32,
        m: usize,
        n: usize,
        j: Option<(IsotropicSubgroup, ValueAssignment)>,
        u: Option<CliffordElement>,
    ) -> Result<Self, HvmError> {
        if m == 0 || m > n {
            return Err(HvmError::Dimension(format!("need 1 <= m <= n, got m={m} n={n}")));
        }
        let small = PhaseSpace::new(d, m)?;
        let big = PhaseSpace::new(d, n)?;
        let rest = match (m < n, j) {
            (true, Some((j, r))) => {
                let rs = PhaseSpace::new(d, n - m)?;
                if j.space() != &rs {
                    return Err(HvmError::Dimension("J must act on the trailing qudits".into()));
                }
                projector(&j, &r)?;
                Some((rs, j, r))
            }
            (false, None) => None,
            _ => {
                return Err(HvmError::Dimension(
                    "J is required exactly when m < n".into(),
                ))
            }
        };
        let u = match u {
            Some(u) if u.space() != &big => {
                return Err(HvmError::Dimension("U must act on all n qudits".into()))
            }
            Some(u) => u,
            None => CliffordElement::identity(&big),
        };
        Ok(PhiMapSpec { small, big, rest, u })
    }

    pub fn small(&self) -> &PhaseSpace {
        &self.small
    }

    pub fn big(&self) -> &PhaseSpace {
        &self.big
    }

    /// `J` in `n`-qudit labels, sorted.
    pub fn j_embedded(&self) -> Vec<usize> {
        match &self.rest {
            Some((rs, j, _)) => {
                let mut v: Vec<usize> = j.elements().iter().map(|&b| self.big.embed_trailing(rs, b)).collect();
                v.sort_unstable();
                v
            }
            None => vec![0],
        }
    }

    /// `r` on the embedded `J`.
    pub fn r_embedded(&self) -> ValueAssignment {
        match &self.rest {
            Some((rs, _, r)) => ValueAssignment::from_pairs(
                r.pairs().map(|(b, v)| (self.big.embed_trailing(rs, b), v)).collect(),
            ),
            None => ValueAssignment::from_pairs(vec![(0, 0)]),
        }
    }
}

/// `U (X (x) Pi_J^r) U^dag`.
pub fn phi_map_apply(x: &Operator, spec: &PhiMapSpec) -> Result<Operator, HvmError> {
    if x.space() != &spec.small {
        return Err(HvmError::Dimension("X must act on the m leading qudits".into()));
    }
    let y = match &spec.rest {
        None => x.clone(),
        Some((_, j, r)) => {
            let p = projector(j, r)?;
            Operator::from_matrix(&spec.big, &x.to_matrix().kron(p.matrix()))
        }
    };
    Ok(y.conjugate(&spec.u))
}

/// Which normalization of the trace-reduction identity held, per instance.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TraceReductionTally {
    pub instances: usize,
    /// `|K| / 2^n` with `K cap E_m`.
    pub two_power: usize,
    /// `|K| / d^n`.
    pub d_power: usize,
    /// `|K cap E_m| |K cap J| / d^n`, the value the summation reaches.
    pub split: usize,
    /// `|K| / d^n` with the projection `pi(K)` of `K` to the leading qudits
    /// and `s'(c) = s(c + b) - r(b)` in place of `K cap E_m` and `s|`.
    pub projected: usize,
    /// Instances where `K != (K cap E_m) + (K cap J)`.
    pub non_split: usize,
}

/// Outcome of [`phi_suite`].
#[derive(Debug, Clone, Default)]
pub struct PhiReport {
    pub d: u32,
    pub identity_ok: bool,
    /// Images of `m`-qudit vertices, and how many certify as vertices.
    pub embedded: usize,
    pub certified: usize,
    pub outside_lambda: usize,
    /// Vertices of `Lambda_m` with at least one image that fails to certify.
    pub non_vertex_sources: Vec<usize>,
    /// Failed images whose character coordinates are nonnegative with more
    /// than one nonzero entry, so they are proper mixtures of phase points.
    pub phase_point_mixtures: usize,
    pub cnc_checked: usize,
    pub cnc_ok: usize,
    pub trace_reduction: TraceReductionTally,
    pub reduced_trace_instances: usize,
    /// Identity holds with `z~_0` included.
    pub reduced_trace_full: usize,
    /// Identity holds with the sum restricted to `a != 0`.
    pub reduced_trace_nonzero_only: usize,
    pub failures: Vec<String>,
}

impl PhiReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn random_clifford<R: Rng>(gens: &[CliffordElement], len: usize, rng: &mut R) -> CliffordElement {
    let mut u = CliffordElement::identity(gens[0].space());
    for _ in 0..len {
        u = gens[rng.gen_range(0..gens.len())].compose(&u);
    }
    u
}

/// `A_{Omega+J}^{gamma*r}` with `(gamma*r)(a + b) = gamma(a) + r(b)`.
fn cnc_image(
    spec: &PhiMapSpec,
    omega: &[usize],
    gamma: &ValueAssignment,
) -> Result<Operator, HvmError> {
    let big = &spec.big;
    let j = spec.j_embedded();
    let r = spec.r_embedded();
    let mut pairs = Vec::with_capacity(omega.len() * j.len());
    for &a in omega {
        let ea = big.embed_leading(&spec.small, a);
        let ga = gamma.get(a).expect("gamma on Omega");
        for &b in &j {
            pairs.push((big.add(ea, b), (ga + r.get(b).expect("r on J")) % big.d()));
        }
    }
    let g = ValueAssignment::from_pairs(pairs);
    let set: Vec<usize> = g.domain().to_vec();
    Ok(cnc_phase_point(big, &set, &g)?.conjugate(&spec.u))
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Runs the `m = 1 -> n = 2` checks at dimension `d`: vertex preservation
/// (under the identity and random Cliffords), the cnc form of images, both
/// trace identities, and the `m = n` identity case.
pub fn phi_suite(d: u32, reduced_trace_instances: usize, seed: u64) -> Result<PhiReport, HvmError> {
    let mut rep = PhiReport {
        d,
        ..Default::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h1 = lambda_hrep(d, 1)?;
    let v1 = enumerate_vertices(&h1)?;
    let h2 = lambda_hrep(d, 2)?;
    let rows2 = h2.rows()?;
    let small = h1.space().clone();
    let big = h2.space().clone();
    let pures = stabilizer_states(d, 1)?;
    let gens = clifford_generators(d, 2)?;
    let unitaries: Vec<CliffordElement> = std::iter::once(CliffordElement::identity(&big))
        .chain((0..2).map(|_| random_clifford(&gens, 6, &mut rng)))
        .collect();

    let same = PhiMapSpec::new(d, 1, 1, None, None)?;
    rep.identity_ok = (0..v1.len()).all(|a| {
        let x = v1.operator(a);
        phi_map_apply(&x, &same).map(|y| y == x).unwrap_or(false)
    });
    if !rep.identity_ok {
        rep.failures.push("m = n, J = {0}, U = 1 is not the identity".into());
    }

    for st in &pures {
        for u in &unitaries {
            let spec = PhiMapSpec::new(
                d,
                1,
                2,
                Some((st.group().clone(), st.assignment().clone())),
                Some(u.clone()),
            )?;
            for a in 0..v1.len() {
                let x = v1.operator(a);
                let y = phi_map_apply(&x, &spec)?;
                rep.embedded += 1;
                let w = y
                    .w_rational()
                    .ok_or_else(|| HvmError::NotExact("image coordinates".into()))?;
                match certify_w(&integer_row(&w), rows2) {
                    Ok(_) => rep.certified += 1,
                    Err(Rejection::Violated { .. }) | Err(Rejection::TraceNotOne) => {
                        rep.outside_lambda += 1;
                        rep.failures.push(format!("image of vertex {a} is outside Lambda_2"));
                    }
                    Err(_) => {
                        if !rep.non_vertex_sources.contains(&a) {
                            rep.non_vertex_sources.push(a);
                        }
                        let support = w.iter().filter(|x| !x.is_zero()).count();
                        if support > 1 && w.iter().all(|x| !x.is_negative()) {
                            rep.phase_point_mixtures += 1;
                        }
                    }
                }
                if let Some((omega, gamma)) = cnc_type(&x) {
                    rep.cnc_checked += 1;
                    let expect = cnc_image(&spec, &omega, &gamma)?;
                    if expect == y && cnc_type(&y).is_some() {
                        rep.cnc_ok += 1;
                    } else {
                        rep.failures.push(format!("cnc form not preserved for vertex {a}"));
                    }
                }
            }
        }
    }

    if rep.certified + rep.outside_lambda != rep.embedded {
        rep.non_vertex_sources.sort_unstable();
        rep.failures.push(format!(
            "{} of {} images are not vertices, from vertices {:?}",
            rep.embedded - rep.certified - rep.outside_lambda,
            rep.embedded,
            rep.non_vertex_sources
        ));
    }

    tally_trace_reduction(&mut rep, &small, &big, &pures, &v1)?;

    let maximal1 = enumerate_isotropics(d, 1, true)?;
    for _ in 0..reduced_trace_instances {
        let st = &pures[rng.gen_range(0..pures.len())];
        let spec = PhiMapSpec::new(d, 1, 2, Some((st.group().clone(), st.assignment().clone())), None)?;
        let ip = &maximal1[rng.gen_range(0..maximal1.len())];
        let sps = value_assignments(ip);
        let sp = &sps[rng.gen_range(0..sps.len())];
        let mut w: Vec<BigRational> = (0..big.size())
            .map(|_| q(rng.gen_range(-4..=4), 7))
            .collect();
        let total: BigRational = w.iter().sum();
        w[0] -= total;
        let y = Operator::from_w(&big, &w);
        let (full, nonzero_only) = reduced_trace_check(&spec, &y, ip, sp)?;
        rep.reduced_trace_instances += 1;
        rep.reduced_trace_full += usize::from(full);
        rep.reduced_trace_nonzero_only += usize::from(nonzero_only);
    }
    if rep.reduced_trace_full != rep.reduced_trace_instances {
        rep.failures.push(format!(
            "trace identity with z~_0 fails on {} of {} instances",
            rep.reduced_trace_instances - rep.reduced_trace_full,
            rep.reduced_trace_instances
        ));
    }
    Ok(rep)
}

fn tally_trace_reduction(
    rep: &mut PhiReport,
    small: &PhaseSpace,
    big: &PhaseSpace,
    pures: &[crate::stabilizer::StabilizerProjector],
    v1: &crate::polytope::VertexSet,
) -> Result<(), HvmError> {
    let d = big.d();
    let dn = q(big.dim() as i64, 1);
    let two_n = q(1 << big.n(), 1);
    let lead: Vec<usize> = (0..small.size()).map(|a| big.embed_leading(small, a)).collect();
    let maximal2 = enumerate_isotropics(d, 2, true)?;
    let xs: Vec<usize> = (0..v1.len()).step_by((v1.len() / 8).max(1)).collect();
    for st in pures {
        let spec = PhiMapSpec::new(d, 1, 2, Some((st.group().clone(), st.assignment().clone())), None)?;
        let j = spec.j_embedded();
        let r = spec.r_embedded();
        let mut e_plus_j: Vec<usize> = lead
            .iter()
            .flat_map(|&a| j.iter().map(move |&b| big.add(a, b)))
            .collect();
        e_plus_j.sort_unstable();
        e_plus_j.dedup();
        for &alpha in &xs {
            let x = v1.operator(alpha);
            let y = phi_map_apply(&x, &spec)?;
            for i in &maximal2 {
                let k: Vec<usize> = i
                    .elements()
                    .iter()
                    .copied()
                    .filter(|a| e_plus_j.binary_search(a).is_ok())
                    .collect();
                let k_j: Vec<usize> = k.iter().copied().filter(|a| j.binary_search(a).is_ok()).collect();
                let k_m: Vec<usize> = k.iter().copied().filter(|a| lead.contains(a)).collect();
                let k_m_small: Vec<usize> = k_m.iter().map(|&a| big.project_leading(small, a)).collect();
                let km_group = IsotropicSubgroup::generated_by(small, &k_m_small)?;
                let split = k_j.len() * k_m.len() == k.len();
                let mut pk: Vec<usize> = k.iter().map(|&a| big.project_leading(small, a)).collect();
                pk.sort_unstable();
                pk.dedup();
                let pk_group = IsotropicSubgroup::generated_by(small, &pk)?;
                for s in value_assignments(i) {
                    let lhs = y.projector_trace(&projector(i, &s)?);
                    let agree = k_j.iter().all(|&b| r.get(b) == s.get(b));
                    let inner = if agree {
                        let sm = ValueAssignment::from_pairs(
                            k_m.iter()
                                .zip(&k_m_small)
                                .map(|(&a, &sa)| (sa, s.get(a).expect("s on I")))
                                .collect(),
                        );
                        x.projector_trace(&projector(&km_group, &sm)?)
                    } else {
                        CycNumber::zero(big.order())
                    };
                    let projected = if agree {
                        let sp = ValueAssignment::from_pairs(
                            k.iter()
                                .map(|&a| {
                                    let c = big.project_leading(small, a);
                                    let b = big.add(a, big.neg(big.embed_leading(small, c)));
                                    let v = s.get(a).expect("s on I") + big.d()
                                        - r.get(b).expect("r on J");
                                    (c, v % big.d())
                                })
                                .collect::<std::collections::BTreeSet<_>>()
                                .into_iter()
                                .collect(),
                        );
                        projector(&pk_group, &sp).map(|p| x.projector_trace(&p)).ok()
                    } else {
                        Some(CycNumber::zero(big.order()))
                    };
                    let kq = q(k.len() as i64, 1);
                    let prod = q((k_j.len() * k_m.len()) as i64, 1);
                    let t = &mut rep.trace_reduction;
                    t.instances += 1;
                    t.non_split += usize::from(!split);
                    t.two_power += usize::from(lhs == inner.scale(&(&kq / &two_n)));
                    t.d_power += usize::from(lhs == inner.scale(&(&kq / &dn)));
                    t.split += usize::from(lhs == inner.scale(&(&prod / &dn)));
                    t.projected += usize::from(projected.is_some_and(|p| lhs == p.scale(&(&kq / &dn))));
                }
            }
        }
    }
    let t = &rep.trace_reduction;
    if t.projected != t.instances {
        rep.failures.push(format!(
            "trace reduction through pi(K) fails on {} of {} instances",
            t.instances - t.projected,
            t.instances
        ));
    }
    Ok(())
}

/// Both sides of the reduced-trace identity, with and without the `a = 0`
/// term of `Y~`.
fn reduced_trace_check(
    spec: &PhiMapSpec,
    y: &Operator,
    ip: &IsotropicSubgroup,
    sp: &ValueAssignment,
) -> Result<(bool, bool), HvmError> {
    let big = &spec.big;
    let small = &spec.small;
    let j = spec.j_embedded();
    let r = spec.r_embedded();
    let order = big.order();
    let zpo = big.zeta_per_omega() as i64;
    let inv_j = q(1, j.len() as i64);
    let z = y.coeffs();
    let zt: Vec<CycNumber> = (0..small.size())
        .map(|a| {
            let ea = big.embed_leading(small, a);
            let mut acc = CycNumber::zero(order);
            for &b in &j {
                let v = &z[big.add(ea, b)];
                if !v.is_zero() {
                    acc = &acc + &v.mul_root(r.get(b).expect("r on J") as i64 * zpo);
                }
            }
            acc.scale(&inv_j)
        })
        .collect();
    let mut zt_nonzero = zt.clone();
    zt_nonzero[0] = CycNumber::zero(order);

    let mut gens: Vec<usize> = ip.generators().iter().map(|&a| big.embed_leading(small, a)).collect();
    gens.extend(&j);
    let sum_group = IsotropicSubgroup::generated_by(big, &gens)?;
    let mut pairs = Vec::new();
    for (a, sa) in sp.pairs() {
        let ea = big.embed_leading(small, a);
        for &b in &j {
            pairs.push((big.add(ea, b), (sa + r.get(b).expect("r on J")) % big.d()));
        }
    }
    let star = ValueAssignment::from_pairs(pairs);
    let lhs = y.projector_trace(&projector(&sum_group, &star)?);
    let p_small = projector(ip, sp)?;
    let full = Operator::from_coeffs(small, zt).projector_trace(&p_small);
    let nonzero_only = Operator::from_coeffs(small, zt_nonzero).projector_trace(&p_small);
    Ok((lhs == full, lhs == nonzero_only))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PhasePoint;

    fn zline(s: &PhaseSpace) -> (IsotropicSubgroup, ValueAssignment) {
        let z = s.index(&PhasePoint::new(s.d(), vec![1], vec![0]).unwrap()).unwrap();
        let g = IsotropicSubgroup::generated_by(s, &[z]).unwrap();
        let r = value_assignments(&g)
            .into_iter()
            .find(|r| r.pairs().all(|(_, v)| v == 0))
            .unwrap();
        (g, r)
    }

    #[test]
    fn equal_sizes_give_the_identity() {
        let s = PhaseSpace::new(3, 1).unwrap();
        let spec = PhiMapSpec::new(3, 1, 1, None, None).unwrap();
        let x = Operator::maximally_mixed(&s);
        assert_eq!(phi_map_apply(&x, &spec).unwrap(), x);
    }

    #[test]
    fn qubit_vertex_embeds_as_two_qubit_vertex() {
        let rest = PhaseSpace::new(2, 1).unwrap();
        let spec = PhiMapSpec::new(2, 1, 2, Some(zline(&rest)), None).unwrap();
        let h1 = lambda_hrep(2, 1).unwrap();
        let v1 = enumerate_vertices(&h1).unwrap();
        let h2 = lambda_hrep(2, 2).unwrap();
        for a in 0..v1.len() {
            let x = v1.operator(a);
            let y = phi_map_apply(&x, &spec).unwrap();
            // X (x) (1 + Z)/2 by direct matrices
            let zero = crate::exact_arith::Matrix::from_rows(vec![
                vec![CycNumber::one(4), CycNumber::zero(4)],
                vec![CycNumber::zero(4), CycNumber::zero(4)],
            ]);
            assert_eq!(y.to_matrix(), x.to_matrix().kron(&zero));
            let w = y.w_rational().unwrap();
            assert!(certify_w(&integer_row(&w), h2.rows().unwrap()).is_ok());
            let (omega, gamma) = cnc_type(&x).unwrap();
            assert_eq!(cnc_image(&spec, &omega, &gamma).unwrap(), y);
        }
    }

    #[test]
    fn qutrit_phase_point_image_is_a_mixture() {
        let rest = PhaseSpace::new(3, 1).unwrap();
        let spec = PhiMapSpec::new(3, 1, 2, Some(zline(&rest)), None).unwrap();
        let h1 = lambda_hrep(3, 1).unwrap();
        let v1 = enumerate_vertices(&h1).unwrap();
        let h2 = lambda_hrep(3, 2).unwrap();
        let rows = h2.rows().unwrap();
        let a = (0..v1.len())
            .find(|&a| v1.w(a).iter().filter(|x| !x.is_zero()).count() == 1)
            .unwrap();
        let w = phi_map_apply(&v1.operator(a), &spec).unwrap().w_rational().unwrap();
        let support: Vec<usize> = (0..w.len()).filter(|&u| !w[u].is_zero()).collect();
        assert_eq!(support.len(), 3);
        for &u in &support {
            assert_eq!(w[u], q(1, 3));
            let mut e = vec![0i64; w.len()];
            e[u] = 1;
            assert!(certify_w(&e, rows).is_ok());
        }
        assert!(certify_w(&integer_row(&w), rows).is_err());
    }

    #[test]
    fn spec_rejects_bad_shapes() {
        assert!(PhiMapSpec::new(2, 2, 1, None, None).is_err());
        assert!(PhiMapSpec::new(2, 1, 2, None, None).is_err());
    }

    #[test]
    fn qubit_suite() {
        let rep = phi_suite(2, 40, 11).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures);
        assert_eq!(rep.embedded, 8 * 6 * 3);
        assert_eq!(rep.certified, rep.embedded);
        assert_eq!(rep.cnc_ok, rep.cnc_checked);
    }
}
