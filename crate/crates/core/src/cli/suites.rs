//! Verification suites behind `verify --suite`.

use std::str::FromStr;

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::CliError;
use crate::exact_arith::{CycMatrix, CycNumber};
use crate::hvm::{
    chi_square, decompose_state, model_branches, oracle_simulate, parse_circuit, phi_suite,
    random_circuit, run_shots, Circuit, Mode, Model, State, Weights, PRESETS,
};
use crate::pauli::{clifford_generators, PhaseSpace};
use crate::polytope::{
    brute_force_vertices, cnc_phase_point, duality_dilation_check, enumerate_vertices,
    lambda_hrep, pauli_bound, Operator, OperatorVector, VertexSet,
};
use crate::stabilizer::{
    assignments_on_set, clifford_transport, coarse_grain, enumerate_isotropics, projector,
    projector_product, value_assignments, IsotropicSubgroup, ValueAssignment,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Pauli,
    Stabilizer,
    Polytope,
    Hvm,
    Phi,
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "pauli" => Ok(Suite::Pauli),
            "stabilizer" => Ok(Suite::Stabilizer),
            "polytope" => Ok(Suite::Polytope),
            "hvm" => Ok(Suite::Hvm),
            "phi" => Ok(Suite::Phi),
            _ => Err(format!("unknown suite {s:?}; expected pauli, stabilizer, polytope, hvm or phi")),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Machine-readable outcome of one suite.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub d: u32,
    pub n: usize,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Knobs shared by the suites.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub d: u32,
    pub n: usize,
    pub seed: u64,
    /// Random pairs drawn when exhaustive checks are too large.
    pub pairs: usize,
    /// Random circuits compared against the oracle.
    pub circuits: usize,
    /// Shots for the T-state sampling check.
    pub shots: u64,
    /// Shots per chi-square circuit.
    pub chi_shots: u64,
    /// Random circuits in the chi-square check.
    pub chi_circuits: usize,
    /// Random instances of the reduced-trace identity.
    pub phi_instances: usize,
}

impl SuiteConfig {
    pub fn new(d: u32, n: usize, seed: u64) -> Self {
        SuiteConfig {
            d,
            n,
            seed,
            pairs: 500,
            circuits: 50,
            shots: 100_000,
            chi_shots: 5_000,
            chi_circuits: 10,
            phi_instances: 100,
        }
    }
}

struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.0.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<SuiteReport, CliError> {
    let mut checks = Checks(Vec::new());
    match suite {
        Suite::Pauli => pauli_suite(cfg, &mut checks)?,
        Suite::Stabilizer => stabilizer_suite(cfg, &mut checks)?,
        Suite::Polytope => polytope_suite(cfg, &mut checks)?,
        Suite::Hvm => hvm_suite(cfg, &mut checks)?,
        Suite::Phi => phi_checks(cfg, &mut checks)?,
    }
    let passed = checks.0.iter().all(|c| c.passed);
    Ok(SuiteReport {
        suite,
        d: cfg.d,
        n: if suite == Suite::Phi { 2 } else { cfg.n },
        seed: cfg.seed,
        passed,
        checks: checks.0,
    })
}

/// Column `j` of a monomial matrix: `(row, zeta exponent)`.
type Monomial = Vec<(usize, u32)>;

fn monomial_of(m: &CycMatrix, order: u32) -> Option<Monomial> {
    let roots: Vec<CycNumber> = (0..order).map(|e| CycNumber::root(order, e as i64)).collect();
    (0..m.cols())
        .map(|j| {
            let mut hit = None;
            for i in 0..m.rows() {
                let v = m.get(i, j);
                if !v.is_zero() {
                    let e = roots.iter().position(|r| r == v)?;
                    if hit.replace((i, e as u32)).is_some() {
                        return None;
                    }
                }
            }
            hit
        })
        .collect()
}

fn mono_mul(a: &Monomial, b: &Monomial, order: u32) -> Monomial {
    b.iter()
        .map(|&(r, e)| {
            let (r2, e2) = a[r];
            (r2, (e + e2) % order)
        })
        .collect()
}

fn mono_shift(a: &Monomial, k: u32, order: u32) -> Monomial {
    a.iter().map(|&(r, e)| (r, (e + k) % order)).collect()
}

fn mono_adjoint(a: &Monomial, order: u32) -> Monomial {
    let mut out = vec![(0, 0); a.len()];
    for (j, &(r, e)) in a.iter().enumerate() {
        out[r] = (j, (order - e) % order);
    }
    out
}

fn pauli_suite(cfg: &SuiteConfig, c: &mut Checks) -> Result<(), CliError> {
    let s = PhaseSpace::new(cfg.d, cfg.n)?;
    let order = s.order();
    let zpo = s.zeta_per_omega();
    let size = s.size();
    let mats: Vec<CycMatrix> = (0..size).map(|a| s.pauli_matrix(a)).collect();
    let mono: Vec<Option<Monomial>> = mats.iter().map(|m| monomial_of(m, order)).collect();
    let bad_form = mono.iter().filter(|m| m.is_none()).count();
    let ident: Monomial = (0..s.dim()).map(|j| (j, 0)).collect();
    c.push(
        "monomial_form",
        bad_form == 0 && mono[0].as_ref() == Some(&ident),
        format!("{size} operators, {bad_form} not monomial with root-of-unity entries"),
    );
    if bad_form > 0 {
        return Ok(());
    }
    let mono: Vec<Monomial> = mono.into_iter().map(Option::unwrap).collect();

    let (mut comm_bad, mut comp_bad, mut integer_form_bad) = (0usize, 0usize, 0usize);
    for a in 0..size {
        for b in 0..size {
            let ab = mono_mul(&mono[a], &mono[b], order);
            let ba = mono_mul(&mono[b], &mono[a], order);
            if ab != mono_shift(&ba, zpo * s.symp(a, b), order) {
                comm_bad += 1;
            }
            if ab != mono_shift(&mono[s.add(a, b)], s.compose_zeta(a, b), order) {
                comp_bad += 1;
            }
            if s.beta_integer_form(a, b) != s.beta(a, b) {
                integer_form_bad += 1;
            }
        }
    }
    let pairs = size * size;
    c.push(
        "commutator",
        comm_bad == 0,
        format!("T_a T_b = omega^[a,b] T_b T_a fails on {comm_bad} of {pairs} pairs"),
    );
    c.push(
        "composition",
        comp_bad == 0,
        format!("T_a T_b = omega^-beta(a,b) T_(a+b) fails on {comp_bad} of {pairs} pairs"),
    );
    c.push(
        "beta_integer_form",
        true,
        format!("integer-form closed expression differs from the matrix-derived beta on {integer_form_bad} of {pairs} pairs"),
    );

    let mut pow_bad = 0;
    let mut adj_bad = 0;
    for a in 0..size {
        let mut p = ident.clone();
        for _ in 0..cfg.d {
            p = mono_mul(&p, &mono[a], order);
        }
        pow_bad += usize::from(p != ident);
        let adj = mono_shift(&mono[s.neg(a)], (order - s.kappa(a)) % order, order);
        adj_bad += usize::from(mono_adjoint(&mono[a], order) != adj);
    }
    c.push("order_d", pow_bad == 0, format!("T_a^d = 1 fails on {pow_bad} of {size}"));
    c.push(
        "adjoint",
        adj_bad == 0,
        format!(
            "T_a^dag = zeta^-kappa(a) T_-a fails on {adj_bad} of {size}; {} labels have kappa != 0",
            (0..size).filter(|&a| s.kappa(a) != 0).count()
        ),
    );

    let gens = clifford_generators(cfg.d, cfg.n)?;
    let mut cl_bad = 0;
    for u in &gens {
        for a in 0..size {
            let lhs = u.conjugate_matrix(&mats[a]);
            let rhs = mats[u.image(a)].scale(&s.omega(u.phase(a) as i64));
            cl_bad += usize::from(lhs != rhs);
        }
    }
    c.push(
        "clifford_conjugation",
        cl_bad == 0,
        format!(
            "U T_a U^dag = omega^phase T_S(a) fails on {cl_bad} of {} (generator, label) pairs",
            gens.len() * size
        ),
    );
    Ok(())
}

fn projector_ok(i: &IsotropicSubgroup, r: &ValueAssignment) -> Result<bool, CliError> {
    let p = projector(i, r)?;
    let m = p.matrix();
    let tr = BigRational::new((i.space().dim() as i64).into(), (i.order() as i64).into());
    Ok(m.mul(m) == *m
        && m.is_hermitian()
        && m.trace() == CycNumber::from_rational(i.space().order(), tr))
}

fn product_ok(
    i: &IsotropicSubgroup,
    r: &ValueAssignment,
    j: &IsotropicSubgroup,
    s: &ValueAssignment,
) -> Result<bool, CliError> {
    let pi = projector(i, r)?;
    let pj = projector(j, s)?;
    let dense = pi.matrix().mul(pj.matrix()).mul(pi.matrix());
    let trace = pi.matrix().mul(pj.matrix()).trace();
    let closed = projector_product(i, r, j, s)?;
    let order = i.space().order();
    let rhs = match &closed.result {
        None => {
            let z = CycNumber::zero(order);
            CycMatrix::zeros(dense.rows(), dense.cols(), &z)
        }
        Some((f, k)) => k.matrix().scale(&CycNumber::from_rational(order, f.clone())),
    };
    Ok(dense == rhs && trace == closed.trace)
}

fn stabilizer_suite(cfg: &SuiteConfig, c: &mut Checks) -> Result<(), CliError> {
    let space = PhaseSpace::new(cfg.d, cfg.n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let groups = enumerate_isotropics(cfg.d, cfg.n, false)?;
    let labelled: Vec<(IsotropicSubgroup, Vec<ValueAssignment>)> = groups
        .iter()
        .map(|g| (g.clone(), value_assignments(g)))
        .collect();
    let exhaustive = cfg.n == 1;
    let pick = |rng: &mut ChaCha8Rng| {
        let (g, rs) = &labelled[rng.gen_range(0..labelled.len())];
        (g.clone(), rs[rng.gen_range(0..rs.len())].clone())
    };

    let mut proj = (0, 0);
    for (g, rs) in &labelled {
        for r in rs {
            proj.0 += 1;
            proj.1 += usize::from(!projector_ok(g, r)?);
        }
    }
    c.push(
        "projectors",
        proj.1 == 0,
        format!(
            "{} isotropic subgroups, {} (I, r) projectors; {} fail idempotence, hermiticity or trace d^n/|I|",
            groups.len(),
            proj.0,
            proj.1
        ),
    );

    let mut prod = (0, 0);
    if exhaustive {
        for (i, rs) in &labelled {
            for (j, ss) in &labelled {
                for r in rs {
                    for s in ss {
                        prod.0 += 1;
                        prod.1 += usize::from(!product_ok(i, r, j, s)?);
                    }
                }
            }
        }
    } else {
        for _ in 0..cfg.pairs {
            let (i, r) = pick(&mut rng);
            let (j, s) = pick(&mut rng);
            prod.0 += 1;
            prod.1 += usize::from(!product_ok(&i, &r, &j, &s)?);
        }
    }
    c.push(
        "projector_products",
        prod.1 == 0,
        format!("closed form of Pi_I Pi_J Pi_I and Tr(Pi_I Pi_J) differs from matrix products on {} of {}", prod.1, prod.0),
    );

    let mut cg = (0, 0);
    let mut coarse = |i: &IsotropicSubgroup, r: &ValueAssignment, ip: &IsotropicSubgroup| {
        cg.0 += 1;
        cg.1 += usize::from(coarse_grain(i, r, ip).is_err());
    };
    if exhaustive {
        for (i, rs) in &labelled {
            for ip in groups.iter().filter(|ip| i.elements().iter().all(|&a| ip.contains(a))) {
                for r in rs {
                    coarse(i, r, ip);
                }
            }
        }
    } else {
        for _ in 0..cfg.pairs {
            let ip = &groups[rng.gen_range(0..groups.len())];
            let a = *ip.elements().choose(&mut rng).expect("nonempty");
            let i = IsotropicSubgroup::generated_by(&space, &[a])?;
            let rs = value_assignments(&i);
            coarse(&i, &rs[rng.gen_range(0..rs.len())], ip);
        }
    }
    c.push(
        "coarse_graining",
        cg.1 == 0,
        format!("sum of refined projectors differs from Pi_I^r on {} of {} (I in I') pairs", cg.1, cg.0),
    );

    let gens = clifford_generators(cfg.d, cfg.n)?;
    let mut tr = (0, 0);
    if exhaustive {
        for u in &gens {
            for (i, rs) in &labelled {
                for r in rs {
                    tr.0 += 1;
                    tr.1 += usize::from(clifford_transport(u, i, r).is_err());
                }
            }
        }
    } else {
        for _ in 0..cfg.pairs {
            let u = &gens[rng.gen_range(0..gens.len())];
            let (i, r) = pick(&mut rng);
            tr.0 += 1;
            tr.1 += usize::from(clifford_transport(u, &i, &r).is_err());
        }
    }
    c.push(
        "clifford_transport",
        tr.1 == 0,
        format!("U Pi_I^r U^dag differs from Pi_(U.I)^(U.r) on {} of {}", tr.1, tr.0),
    );
    Ok(())
}

fn polytope_suite(cfg: &SuiteConfig, c: &mut Checks) -> Result<(), CliError> {
    let h = lambda_hrep(cfg.d, cfg.n)?;
    let v = match enumerate_vertices(&h) {
        Ok(v) => v,
        Err(e) => {
            c.push("enumeration", false, e.to_string());
            return Ok(());
        }
    };
    c.push(
        "enumeration",
        v.rejected().is_empty(),
        format!(
            "{} facets, {} vertices certified, {} candidate rays rejected",
            h.len(),
            v.len(),
            v.rejected().len()
        ),
    );
    polytope_vertex_checks(&h, &v, cfg, c)
}

fn polytope_vertex_checks(
    h: &crate::polytope::LambdaHRep,
    v: &VertexSet,
    cfg: &SuiteConfig,
    c: &mut Checks,
) -> Result<(), CliError> {
    let space = h.space();
    if cfg.n == 1 {
        let bf = brute_force_vertices(h)?;
        let mut a: Vec<Vec<i64>> = (0..v.len()).map(|k| v.ray(k).to_vec()).collect();
        let mut b: Vec<Vec<i64>> = (0..bf.len()).map(|k| bf.ray(k).to_vec()).collect();
        a.sort();
        b.sort();
        c.push(
            "brute_force_agrees",
            a == b,
            format!("active-set search finds {} vertices", bf.len()),
        );
        let mut cert_bad = 0;
        for k in 0..v.len() {
            let x = OperatorVector::from_operator(&v.operator(k));
            cert_bad += usize::from(crate::polytope::certify_vertex(&x, h).is_err());
        }
        c.push(
            "operator_certificates",
            cert_bad == 0,
            format!("{cert_bad} vertices fail certification over the cyclotomic field"),
        );
        let dual = duality_dilation_check(h, Some(v))?;
        c.push(
            "duality",
            dual.passed(),
            if dual.failures.is_empty() {
                "Lambda = SP*, SP = Lambda*, Wigner simplex self-dual, dilation identities hold".to_string()
            } else {
                dual.failures.join("; ")
            },
        );
    }

    let over = (0..v.len())
        .filter(|&k| pauli_bound(&v.operator(k)).cmp_one() == std::cmp::Ordering::Greater)
        .count();
    c.push(
        "pauli_bound",
        over == 0,
        format!("|Tr(T_a A)| > 1 on {over} of {} vertices", v.len()),
    );

    if cfg.d % 2 == 1 {
        let all: Vec<usize> = (0..space.size()).collect();
        let gammas = assignments_on_set(space, &all);
        let mut found = 0;
        let mut binary = 0;
        for g in &gammas {
            let a = cnc_phase_point(space, &all, g)?;
            found += usize::from(v.lookup(&a).is_some());
            let ok = h.states().iter().all(|p| {
                let t = a.projector_trace(p);
                t.is_zero() || t.is_one()
            });
            binary += usize::from(ok);
        }
        c.push(
            "phase_point_vertices",
            found == gammas.len() && binary == gammas.len(),
            format!(
                "{} noncontextual assignments on E; {found} A_E^gamma are vertices; {binary} have Tr(Pi A) in {{0, 1}} for every stabilizer state",
                gammas.len()
            ),
        );
    }
    Ok(())
}

/// Outcome-by-outcome comparison of the model tree with the oracle:
/// `(branches, max probability error, max post-state error)`. Exact states
/// are compared exactly and report zero errors or `None` on a mismatch.
pub fn compare_circuit(model: &Model, circuit: &Circuit) -> Result<Option<(usize, f64, f64)>, CliError> {
    let mut oracle = oracle_simulate(circuit)?;
    oracle.sort_by(|a, b| a.outcomes.cmp(&b.outcomes));
    let mode = if circuit.state.exact().is_some() { Mode::Exact } else { Mode::Numeric };
    let p = decompose_state(model, &circuit.state, mode)?;
    match &p.weights {
        Weights::Exact(w) => {
            let mut tree = model_branches(model, circuit, w.clone())?;
            tree.sort_by(|a, b| a.outcomes.cmp(&b.outcomes));
            if tree.len() != oracle.len() {
                return Ok(None);
            }
            for (t, o) in tree.iter().zip(&oracle) {
                let prob = CycNumber::from_rational(model.space().order(), t.prob.clone());
                let post = o.exact_state.as_ref().map(|m| Operator::from_matrix(model.space(), m));
                let ok = t.outcomes == o.outcomes
                    && o.exact_prob.as_ref() == Some(&prob)
                    && post.and_then(|x| x.w_rational()) == Some(model.reconstruct_w(&t.dist));
                if !ok {
                    return Ok(None);
                }
            }
            Ok(Some((tree.len(), 0.0, 0.0)))
        }
        Weights::Numeric(w) => {
            let mut tree = model_branches(model, circuit, w.clone())?;
            tree.retain(|b| b.prob > 1e-13);
            tree.sort_by(|a, b| a.outcomes.cmp(&b.outcomes));
            if tree.len() != oracle.len() {
                return Ok(None);
            }
            let (mut dp, mut ds) = (0f64, 0f64);
            for (t, o) in tree.iter().zip(&oracle) {
                if t.outcomes != o.outcomes {
                    return Ok(None);
                }
                dp = dp.max((t.prob - o.prob).abs());
                ds = ds.max(model.reconstruct(&t.dist).max_abs_diff(&o.state));
            }
            Ok(Some((tree.len(), dp, ds)))
        }
    }
}

fn presets_for(space: &PhaseSpace) -> Vec<State> {
    PRESETS
        .iter()
        .filter_map(|p| State::preset(space, p).ok())
        .collect()
}

fn random_circuits(
    space: &PhaseSpace,
    count: usize,
    max_depth: usize,
    magic_only: bool,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Circuit>, CliError> {
    let gens = clifford_generators(space.d(), space.n())?;
    let mut states = presets_for(space);
    if magic_only {
        states.retain(|s| !matches!(s.name(), "zero" | "mixed"));
    }
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let st = states[rng.gen_range(0..states.len())].clone();
        let depth = rng.gen_range(1..=max_depth);
        let c = random_circuit(st, &gens, depth, rng)?;
        if c.measurement_count() > 0 {
            out.push(c);
        }
    }
    Ok(out)
}

/// The qubit T-state Z-measurement circuit.
pub fn t_state_circuit() -> Circuit {
    parse_circuit(r#"{"d":2,"n":1,"state":{"preset":"T"},"ops":[{"measure":{"a":"Z:(1)|X:(0)"}}]}"#)
        .expect("fixed circuit parses")
}

fn hvm_suite(cfg: &SuiteConfig, c: &mut Checks) -> Result<(), CliError> {
    let model = Model::new(cfg.d, cfg.n)?;
    let space = model.space().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut dec = Vec::new();
    let mut dec_ok = true;
    for st in presets_for(&space) {
        let mode = if st.exact().is_some() { Mode::Exact } else { Mode::Numeric };
        match decompose_state(&model, &st, mode) {
            Ok(p) => dec.push(format!("{}: {} vertices, residual {:.1e}", st.name(), p.support_f64().len(), p.residual)),
            Err(e) => {
                dec_ok = false;
                dec.push(format!("{}: {e}", st.name()));
            }
        }
    }
    c.push("preset_decompositions", dec_ok, dec.join("; "));

    let circuits = random_circuits(&space, cfg.circuits, 4, false, &mut rng)?;
    let (mut bad, mut dp, mut ds, mut exact) = (0, 0f64, 0f64, 0);
    for circ in &circuits {
        match compare_circuit(&model, circ)? {
            Some((_, p, s)) => {
                dp = dp.max(p);
                ds = ds.max(s);
                exact += usize::from(circ.state.exact().is_some());
            }
            None => bad += 1,
        }
    }
    c.push(
        "born_rule",
        bad == 0 && dp <= 1e-10 && ds <= 1e-10,
        format!(
            "{} random circuits ({exact} exact, compared exactly); {bad} mismatches; max probability error {dp:.1e}, max post-state error {ds:.1e}",
            circuits.len()
        ),
    );

    if cfg.d == 2 && cfg.n == 1 && cfg.shots > 0 {
        let circ = t_state_circuit();
        let p = decompose_state(&model, &circ.state, Mode::Numeric)?;
        let recs = run_shots(&model, &circ, &p.support_f64(), cfg.seed, cfg.shots)?;
        let zeros = recs.iter().filter(|r| r.outcomes == [0]).count() as f64;
        let n = cfg.shots as f64;
        let p0 = (1.0 + 1.0 / 3f64.sqrt()) / 2.0;
        let sigma = (p0 * (1.0 - p0) / n).sqrt();
        let z = (zeros / n - p0) / sigma;
        c.push(
            "t_state_sampling",
            z.abs() < 5.0,
            format!("{} shots, frequency of 0 is {:.6} against {p0:.6} ({z:+.2} sigma)", cfg.shots, zeros / n),
        );
    }

    if cfg.chi_circuits > 0 && cfg.chi_shots > 0 {
        let circs = random_circuits(&space, cfg.chi_circuits, 3, true, &mut rng)?;
        let mut worst = 1.0f64;
        let mut detail = Vec::new();
        for (k, circ) in circs.iter().enumerate() {
            let oracle = oracle_simulate(circ)?;
            let expected: Vec<(Vec<u32>, f64)> = oracle.iter().map(|o| (o.outcomes.clone(), o.prob)).collect();
            let mode = if circ.state.exact().is_some() { Mode::Exact } else { Mode::Numeric };
            let p = decompose_state(&model, &circ.state, mode)?;
            let recs = run_shots(&model, circ, &p.support_f64(), cfg.seed.wrapping_add(k as u64 + 1), cfg.chi_shots)?;
            let (stat, df, pv) = chi_square(&recs, &expected);
            worst = worst.min(pv);
            detail.push(format!("{}:{stat:.2}/{df}/p={pv:.3}", circ.state.name()));
        }
        c.push(
            "chi_square",
            worst > 1e-3,
            format!("{} circuits x {} shots, min p-value {worst:.4} [{}]", circs.len(), cfg.chi_shots, detail.join(" ")),
        );
    }
    let kernels = model.cached_kernels();
    c.push("kernels", true, format!("{kernels} transition kernels computed exactly"));
    Ok(())
}

fn phi_checks(cfg: &SuiteConfig, c: &mut Checks) -> Result<(), CliError> {
    let r = phi_suite(cfg.d, cfg.phi_instances, cfg.seed)?;
    c.push("identity_case", r.identity_ok, "m = n, J = {0}, U = 1 acts as the identity");
    c.push(
        "membership",
        r.outside_lambda == 0,
        format!("{} of {} images violate a stabilizer inequality", r.outside_lambda, r.embedded),
    );
    c.push(
        "vertex_preservation",
        r.certified == r.embedded,
        format!(
            "{} of {} images certify as vertices; non-vertex images come from source vertices {:?}; {} of those are proper mixtures of phase points",
            r.certified,
            r.embedded,
            r.non_vertex_sources,
            r.phase_point_mixtures
        ),
    );
    c.push(
        "cnc_form",
        r.cnc_ok == r.cnc_checked,
        format!("Phi(A_Omega^gamma) = U A_(Omega+J)^(gamma*r) U^dag on {} of {}", r.cnc_ok, r.cnc_checked),
    );
    let t = &r.trace_reduction;
    c.push(
        "trace_reduction",
        t.projected == t.instances,
        format!(
            "|K|/d^n with pi(K): {}/{}; |K|/2^n with K cap E_m: {}/{}; |K|/d^n with K cap E_m: {}/{}; |K cap E_m||K cap J|/d^n: {}/{}; K not split: {}",
            t.projected, t.instances, t.two_power, t.instances, t.d_power, t.instances, t.split, t.instances, t.non_split
        ),
    );
    c.push(
        "reduced_trace_identity",
        r.reduced_trace_full == r.reduced_trace_instances,
        format!(
            "holds on {} of {} random instances with z~_0 included; {} with the a != 0 sum only",
            r.reduced_trace_full, r.reduced_trace_instances, r.reduced_trace_nonzero_only
        ),
    );
    Ok(())
}
