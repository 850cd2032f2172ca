//! Acceptance run. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails.
//!
//! Oracles here are built from scratch where possible: textbook clock and
//! shift matrices, stabilizer projectors found as idempotent line sums, and
//! a dense chain-rule simulator whose measurement projectors come from
//! Lagrange interpolation on the eigenvalues of `T_a`.

use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use lambda_hvm::cli::suites::{run_suite, Suite, SuiteConfig, SuiteReport};
use lambda_hvm::exact_arith::ComplexMatrix;
use lambda_hvm::hvm::{
    decompose_state, model_branches, phi_suite, random_circuit, run_shots, chi_square, Circuit,
    CircuitOp, Mode, Model, State,
};
use lambda_hvm::pauli::{clifford_generators, PhaseSpace};
use lambda_hvm::polytope::{
    clifford_w_map, cnc_type, enumerate_vertices, lambda_hrep, pauli_bound, LambdaHRep, VertexSet,
};
use lambda_hvm::stabilizer::stabilizer_states;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type M = DMatrix<Complex64>;

const SEED: u64 = 20240611;

struct Outcome {
    passed: bool,
    detail: String,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn omega(d: u32, k: i64) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::TAU * k.rem_euclid(d as i64) as f64 / d as f64)
}

fn dense(m: &ComplexMatrix) -> M {
    m.to_nalgebra()
}

fn max_diff(a: &M, b: &M) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn clock(d: u32) -> M {
    M::from_fn(d as usize, d as usize, |i, j| if i == j { omega(d, i as i64) } else { c(0.0) })
}

fn shift(d: u32) -> M {
    let d = d as usize;
    M::from_fn(d, d, |i, j| if i == (j + 1) % d { c(1.0) } else { c(0.0) })
}

/// `Z^z X^x` on each qudit, tensored. Equal to `T_a` up to a phase.
fn textbook_pauli(d: u32, z: &[u32], x: &[u32]) -> M {
    let (zm, xm) = (clock(d), shift(d));
    let mut out = M::identity(1, 1);
    for (&zi, &xi) in z.iter().zip(x) {
        let f = zm.pow(zi) * xm.pow(xi);
        out = out.kronecker(&f);
    }
    out
}

fn textbook_paulis(space: &PhaseSpace) -> Vec<M> {
    (0..space.size())
        .map(|a| {
            let (z, x) = space.digits(a);
            textbook_pauli(space.d(), &z, &x)
        })
        .collect()
}

fn suite(s: Suite, d: u32, n: usize) -> SuiteReport {
    run_suite(s, &SuiteConfig::new(d, n, SEED)).unwrap_or_else(|e| panic!("{s:?} suite at ({d},{n}): {e}"))
}

fn failed_checks(r: &SuiteReport) -> Vec<String> {
    r.checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("({},{}) {}: {}", r.d, r.n, c.name, c.detail))
        .collect()
}

fn two_qubit() -> &'static Result<(LambdaHRep, VertexSet, Duration), String> {
    static CELL: OnceLock<Result<(LambdaHRep, VertexSet, Duration), String>> = OnceLock::new();
    CELL.get_or_init(|| {
        let t = Instant::now();
        let h = lambda_hrep(2, 2).map_err(|e| e.to_string())?;
        let v = enumerate_vertices(&h).map_err(|e| e.to_string())?;
        Ok((h, v, t.elapsed()))
    })
}

fn criterion_1() -> Outcome {
    let mut bad = Vec::new();
    let q = PhaseSpace::new(2, 1).unwrap();
    let i = Complex64::i();
    let xm = M::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
    let zm = M::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]);
    let ym = M::from_row_slice(2, 2, &[c(0.0), -i, i, c(0.0)]);
    for (a, want, name) in [(1, &xm, "X"), (2, &zm, "Z"), (3, &ym, "Y")] {
        if max_diff(&dense(&q.pauli_matrix_c64(a)), want) > 1e-12 {
            bad.push(format!("qubit label {a} is not {name}"));
        }
    }
    let t = PhaseSpace::new(3, 1).unwrap();
    if max_diff(&dense(&t.pauli_matrix_c64(1)), &shift(3)) > 1e-12
        || max_diff(&dense(&t.pauli_matrix_c64(3)), &clock(3)) > 1e-12
    {
        bad.push("qutrit X or Z differs from shift/clock".into());
    }

    let mut rows = Vec::new();
    for (d, n) in [(2, 1), (3, 1), (4, 1), (2, 2), (3, 2)] {
        let space = PhaseSpace::new(d, n).unwrap();
        let book = textbook_paulis(&space);
        let mut phase_bad = 0;
        let mut order_bad = 0;
        for (a, tb) in book.iter().enumerate() {
            let m = dense(&space.pauli_matrix_c64(a));
            // T_a is a phase times Z^z X^x, and its d-th power is the identity.
            let r = (&m * tb.adjoint())[(0, 0)];
            if (r.norm() - 1.0).abs() > 1e-9 || max_diff(&m, &(tb * r)) > 1e-9 {
                phase_bad += 1;
            }
            if max_diff(&m.pow(d), &M::identity(m.nrows(), m.nrows())) > 1e-9 {
                order_bad += 1;
            }
        }
        let r = suite(Suite::Pauli, d, n);
        bad.extend(failed_checks(&r));
        if phase_bad + order_bad > 0 {
            bad.push(format!("({d},{n}): {phase_bad} labels off the textbook operator, {order_bad} with T^d != 1"));
        }
        rows.push(format!("({d},{n})"));
    }
    Outcome {
        passed: bad.is_empty(),
        detail: if bad.is_empty() {
            format!("commutator, composition, order and adjoint identities exact at {}", rows.join(" "))
        } else {
            bad.join("; ")
        },
    }
}

/// Idempotent sums `(1/d) sum_k c_k T_{ka}` over every line through the
/// origin, for a single qudit. The `c_k` range over `2d`-th roots of unity at
/// even `d` since the textbook operators are only correct up to phase.
fn line_projectors(d: u32, book: &[M], space: &PhaseSpace) -> Vec<M> {
    let mut seen: Vec<Vec<usize>> = Vec::new();
    let mut out = Vec::new();
    for a in 1..space.size() {
        let mut line: Vec<usize> = (0..d as i64).map(|k| space.scale(k, a)).collect();
        line.sort_unstable();
        line.dedup();
        if line.len() != d as usize || seen.contains(&line) {
            continue;
        }
        seen.push(line.clone());
        let gen: Vec<usize> = (1..d as i64).map(|k| space.scale(k, a)).collect();
        let dim = book[0].nrows();
        let order = if d.is_multiple_of(2) { 2 * d } else { d };
        let mut phases = vec![0i64; gen.len()];
        loop {
            let mut p = M::identity(dim, dim);
            for (b, &e) in gen.iter().zip(&phases) {
                p += &book[*b] * omega(order, -e);
            }
            p /= c(d as f64);
            if max_diff(&(&p * &p), &p) < 1e-9 {
                out.push(p);
            }
            let mut k = 0;
            while k < phases.len() {
                phases[k] += 1;
                if phases[k] < order as i64 {
                    break;
                }
                phases[k] = 0;
                k += 1;
            }
            if k == phases.len() {
                break;
            }
        }
    }
    out
}

fn same_set(a: &[M], b: &[M], tol: f64) -> bool {
    a.len() == b.len() && a.iter().all(|x| b.iter().any(|y| max_diff(x, y) < tol))
}

fn criterion_2() -> Outcome {
    let mut bad = Vec::new();
    for d in [2u32, 3] {
        let space = PhaseSpace::new(d, 1).unwrap();
        let book = textbook_paulis(&space);
        let oracle = line_projectors(d, &book, &space);
        let lib: Vec<M> = stabilizer_states(d, 1)
            .unwrap()
            .iter()
            .map(|p| dense(&p.matrix().to_complex()))
            .collect();
        if !same_set(&oracle, &lib, 1e-9) {
            bad.push(format!("d={d}: {} library stabilizer states vs {} idempotent line sums", lib.len(), oracle.len()));
        }
    }
    let two = stabilizer_states(2, 2).unwrap().len();
    if two != 60 {
        bad.push(format!("{two} two-qubit stabilizer states, expected 60"));
    }
    let mut done = Vec::new();
    for (d, n) in [(2, 1), (3, 1), (4, 1), (2, 2), (3, 2)] {
        let r = suite(Suite::Stabilizer, d, n);
        bad.extend(failed_checks(&r));
        let pairs = r.check("projector_products").map(|c| c.detail.clone()).unwrap_or_default();
        done.push(format!("({d},{n}) {pairs}"));
    }
    Outcome {
        passed: bad.is_empty(),
        detail: if bad.is_empty() { done.join("; ") } else { bad.join("; ") },
    }
}

fn criterion_3() -> Outcome {
    let h = lambda_hrep(2, 1).unwrap();
    let v = enumerate_vertices(&h).unwrap();
    let i = Complex64::i();
    let xm = M::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
    let zm = M::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]);
    let ym = M::from_row_slice(2, 2, &[c(0.0), -i, i, c(0.0)]);
    let mut oracle = Vec::new();
    for sx in [1.0, -1.0] {
        for sy in [1.0, -1.0] {
            for sz in [1.0, -1.0] {
                let m = (M::identity(2, 2) + &xm * c(sx) + &ym * c(sy) + &zm * c(sz)) / c(2.0);
                oracle.push(m);
            }
        }
    }
    let got: Vec<M> = (0..v.len()).map(|k| dense(&v.operator(k).to_complex_matrix())).collect();
    let r = suite(Suite::Polytope, 2, 1);
    let mut bad = failed_checks(&r);
    if !same_set(&oracle, &got, 1e-12) {
        bad.push(format!("{} vertices do not match (1 +- X +- Y +- Z)/2", got.len()));
    }
    Outcome {
        passed: bad.is_empty(),
        detail: if bad.is_empty() {
            format!(
                "{} vertices equal (1 +- X +- Y +- Z)/2, all certified exactly; {}",
                got.len(),
                r.check("duality").map(|c| c.detail.as_str()).unwrap_or("")
            )
        } else {
            bad.join("; ")
        },
    }
}

fn criterion_4() -> Outcome {
    let d = 3u32;
    let space = PhaseSpace::new(d, 1).unwrap();
    let book = textbook_paulis(&space);
    let stab = line_projectors(d, &book, &space);
    // Every function on the nonzero labels, kept when each line sum is a
    // projector.
    let lines: Vec<[usize; 2]> = {
        let mut ls: Vec<[usize; 2]> = Vec::new();
        for a in 1..space.size() {
            let l = [a.min(space.scale(2, a)), a.max(space.scale(2, a))];
            if !ls.contains(&l) {
                ls.push(l);
            }
        }
        ls
    };
    let mut gammas = Vec::new();
    for code in 0..3usize.pow(8) {
        let mut g = [0i64; 9];
        let mut k = code;
        for slot in g.iter_mut().skip(1) {
            *slot = (k % 3) as i64;
            k /= 3;
        }
        let ok = lines.iter().all(|l| {
            let p = (M::identity(3, 3) + &book[l[0]] * omega(d, -g[l[0]]) + &book[l[1]] * omega(d, -g[l[1]])) / c(3.0);
            max_diff(&(&p * &p), &p) < 1e-9
        });
        if ok {
            gammas.push(g);
        }
    }
    let h = lambda_hrep(3, 1).unwrap();
    let v = enumerate_vertices(&h).unwrap();
    let verts: Vec<M> = (0..v.len()).map(|k| dense(&v.operator(k).to_complex_matrix())).collect();
    let (mut found, mut binary) = (0, 0);
    for g in &gammas {
        let mut a = M::zeros(3, 3);
        for (b, t) in book.iter().enumerate() {
            a += t * omega(d, -g[b]);
        }
        a /= c(3.0);
        found += usize::from(verts.iter().any(|x| max_diff(x, &a) < 1e-9));
        let ok = stab.iter().all(|p| {
            let t = (p * &a).trace();
            t.im.abs() < 1e-9 && (t.re.abs() < 1e-9 || (t.re - 1.0).abs() < 1e-9)
        });
        binary += usize::from(ok);
    }
    let r = suite(Suite::Polytope, 3, 1);
    let mut bad = failed_checks(&r);
    if gammas.len() != 81 || found != gammas.len() || binary != gammas.len() {
        bad.push(format!(
            "{} noncontextual assignments; {found} phase-point operators among the vertices; {binary} with traces in {{0, 1}}",
            gammas.len()
        ));
    }
    Outcome {
        passed: bad.is_empty(),
        detail: if bad.is_empty() {
            format!(
                "{} assignments by brute force over 3^8 functions, all A_E^gamma are vertices with Tr(Pi A) in {{0, 1}} against {} stabilizer states; library: {}",
                gammas.len(),
                stab.len(),
                r.check("phase_point_vertices").map(|c| c.detail.as_str()).unwrap_or("")
            )
        } else {
            bad.join("; ")
        },
    }
}

fn bound_check(space: &PhaseSpace, v: &VertexSet) -> (usize, usize, f64) {
    let book = textbook_paulis(space);
    let mut exact_over = 0;
    let mut dense_over = 0;
    let mut worst = 0f64;
    for k in 0..v.len() {
        let op = v.operator(k);
        exact_over += usize::from(pauli_bound(&op).cmp_one() == std::cmp::Ordering::Greater);
        let a = dense(&op.to_complex_matrix());
        let m = book[1..].iter().map(|t| (t * &a).trace().norm()).fold(0.0, f64::max);
        worst = worst.max(m);
        dense_over += usize::from(m > 1.0 + 1e-9);
    }
    (exact_over, dense_over, worst)
}

fn criterion_5() -> Outcome {
    let mut bad = Vec::new();
    let mut rows = Vec::new();
    for d in [2u32, 3] {
        let h = lambda_hrep(d, 1).unwrap();
        let v = enumerate_vertices(&h).unwrap();
        let (e, n, w) = bound_check(h.space(), &v);
        rows.push(format!("({d},1) {} vertices, max |Tr(T_a A)| {w:.6}", v.len()));
        if e + n > 0 {
            bad.push(format!("({d},1): {e} exact and {n} dense violations"));
        }
    }
    match two_qubit() {
        Ok((h, v, _)) => {
            let (e, n, w) = bound_check(h.space(), v);
            rows.push(format!("(2,2) {} vertices, max |Tr(T_a A)| {w:.6}", v.len()));
            if e + n > 0 {
                bad.push(format!("(2,2): {e} exact and {n} dense violations"));
            }
        }
        Err(e) => rows.push(format!("(2,2) enumeration did not complete: {e}")),
    }
    Outcome {
        passed: bad.is_empty(),
        detail: if bad.is_empty() { rows.join("; ") } else { bad.join("; ") },
    }
}

/// Measurement of `T_a` with outcome `r` for eigenvalue `w^r`.
fn eigenprojector(t: &M, d: u32, r: u32) -> M {
    let dim = t.nrows();
    let mut p = M::identity(dim, dim);
    for k in 0..d {
        if k != r {
            let num = t - M::identity(dim, dim) * omega(d, k as i64);
            p = p * num / (omega(d, r as i64) - omega(d, k as i64));
        }
    }
    p
}

/// Dense chain-rule simulation: outcome sequence to probability and
/// normalized post-state.
fn oracle(circuit: &Circuit) -> BTreeMap<Vec<u32>, (f64, M)> {
    let space = &circuit.space;
    let d = space.d();
    let mut branches: Vec<(Vec<u32>, M)> = vec![(Vec::new(), dense(circuit.state.matrix()))];
    for op in &circuit.ops {
        match op {
            CircuitOp::Clifford(u) => {
                let um = dense(&u.unitary_c64());
                for (_, rho) in &mut branches {
                    *rho = &um * &*rho * um.adjoint();
                }
            }
            CircuitOp::Measure(a) => {
                let t = dense(&space.pauli_matrix_c64(*a));
                let projs: Vec<M> = (0..d).map(|r| eigenprojector(&t, d, r)).collect();
                let mut next = Vec::new();
                for (out, rho) in &branches {
                    for (r, p) in projs.iter().enumerate() {
                        let s = p * rho * p;
                        if s.trace().re > 1e-13 {
                            let mut o = out.clone();
                            o.push(r as u32);
                            next.push((o, s));
                        }
                    }
                }
                branches = next;
            }
        }
    }
    branches
        .into_iter()
        .map(|(o, rho)| {
            let p = rho.trace().re;
            (o, (p, rho / c(p)))
        })
        .collect()
}

fn magic_circuits(d: u32, count: usize, max_depth: usize, rng: &mut ChaCha8Rng) -> Vec<Circuit> {
    let space = PhaseSpace::new(d, 1).unwrap();
    let names: &[&str] = if d == 2 { &["T", "H"] } else { &["strange", "norrell"] };
    let states: Vec<State> = names.iter().map(|n| State::preset(&space, n).unwrap()).collect();
    let gens = clifford_generators(d, 1).unwrap();
    let mut out = Vec::new();
    while out.len() < count {
        let st = states[rng.gen_range(0..states.len())].clone();
        let depth = rng.gen_range(1..=max_depth);
        let circ = random_circuit(st, &gens, depth, rng).unwrap();
        if circ.measurement_count() > 0 {
            out.push(circ);
        }
    }
    out
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut bad = Vec::new();
    let mut rows = Vec::new();
    for d in [2u32, 3] {
        let model = Model::new(d, 1).unwrap();
        let circuits = magic_circuits(d, 50, 4, &mut rng);
        let (mut dp, mut ds, mut outcomes) = (0f64, 0f64, 0);
        let mut lib_agree = 0;
        for circ in &circuits {
            let want = oracle(circ);
            let p = decompose_state(&model, &circ.state, Mode::Numeric).unwrap();
            let tree = model_branches(&model, circ, p.support_f64()).unwrap();
            let got: BTreeMap<Vec<u32>, (f64, M)> = tree
                .into_iter()
                .filter(|b| b.prob > 1e-13)
                .map(|b| {
                    let m = dense(&model.reconstruct(&b.dist));
                    (b.outcomes, (b.prob, m))
                })
                .collect();
            if got.keys().ne(want.keys()) {
                bad.push(format!("d={d}: outcome sets differ on a depth {} circuit", circ.ops.len()));
                continue;
            }
            for (k, (p, rho)) in &want {
                let (q, sigma) = &got[k];
                dp = dp.max((p - q).abs());
                ds = ds.max(max_diff(rho, sigma));
                outcomes += 1;
            }
            if let Ok(Some(_)) = lambda_hvm::cli::suites::compare_circuit(&model, circ) {
                lib_agree += 1;
            }
        }
        if dp > 1e-10 || ds > 1e-10 || lib_agree != circuits.len() {
            bad.push(format!(
                "d={d}: max probability error {dp:.1e}, max post-state error {ds:.1e}, library comparison agrees on {lib_agree} of {}",
                circuits.len()
            ));
        }
        rows.push(format!(
            "d={d}: {} circuits, {outcomes} outcome sequences, max |dp| {dp:.1e}, max post-state error {ds:.1e}",
            circuits.len()
        ));
    }
    Outcome {
        passed: bad.is_empty(),
        detail: if bad.is_empty() { rows.join("; ") } else { bad.join("; ") },
    }
}

fn criterion_7() -> Outcome {
    let mut bad = Vec::new();
    let model = Model::new(2, 1).unwrap();
    let circ = lambda_hvm::cli::suites::t_state_circuit();
    let p = decompose_state(&model, &circ.state, Mode::Numeric).unwrap();
    let shots = 100_000u64;
    let recs = run_shots(&model, &circ, &p.support_f64(), SEED, shots).unwrap();
    let zeros = recs.iter().filter(|r| r.outcomes == [0]).count() as f64;
    let p0 = (1.0 + 1.0 / 3f64.sqrt()) / 2.0;
    let oracle_p0 = oracle(&circ)[&vec![0]].0;
    let sigma = (p0 * (1.0 - p0) / shots as f64).sqrt();
    let z = (zeros / shots as f64 - p0) / sigma;
    if z.abs() >= 5.0 || (oracle_p0 - p0).abs() > 1e-12 {
        bad.push(format!("T-state frequency {:.6} is {z:+.2} sigma from {p0:.6}", zeros / shots as f64));
    }

    let qutrit = Model::new(3, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x7);
    let circs = magic_circuits(3, 10, 3, &mut rng);
    let mut worst = 1f64;
    for (k, circ) in circs.iter().enumerate() {
        let expected: Vec<(Vec<u32>, f64)> = oracle(circ).into_iter().map(|(o, (p, _))| (o, p)).collect();
        let p = decompose_state(&qutrit, &circ.state, Mode::Numeric).unwrap();
        let recs = run_shots(&qutrit, circ, &p.support_f64(), SEED + k as u64, 5_000).unwrap();
        let (_, _, pv) = chi_square(&recs, &expected);
        worst = worst.min(pv);
    }
    if worst <= 1e-3 {
        bad.push(format!("minimum chi-square p-value {worst:.2e} over {} qutrit circuits", circs.len()));
    }
    Outcome {
        passed: bad.is_empty(),
        detail: if bad.is_empty() {
            format!(
                "T-state: {shots} shots, frequency {:.6} vs {p0:.6} ({z:+.2} sigma); qutrit: {} circuits x 5000 shots, min p-value {worst:.4}",
                zeros / shots as f64,
                circs.len()
            )
        } else {
            bad.join("; ")
        },
    }
}

fn criterion_8() -> Outcome {
    let mut bad = Vec::new();
    let mut rows = Vec::new();
    for d in [2u32, 3] {
        let r = phi_suite(d, 100, SEED).unwrap();
        let t = &r.trace_reduction;
        rows.push(format!(
            "d={d}: {}/{} images certify, cnc form {}/{}, reduced trace identity {}/{} (a != 0 sum only {}), trace reduction with |K|/d^n and projected K {}/{} (|K|/2^n form {})",
            r.certified,
            r.embedded,
            r.cnc_ok,
            r.cnc_checked,
            r.reduced_trace_full,
            r.reduced_trace_instances,
            r.reduced_trace_nonzero_only,
            t.projected,
            t.instances,
            t.two_power
        ));
        if !r.passed() {
            bad.push(format!("d={d}: {}", r.failures.join("; ")));
        }
    }
    Outcome {
        passed: bad.is_empty(),
        detail: if bad.is_empty() {
            rows.join("; ")
        } else {
            format!("{} || {}", bad.join("; "), rows.join("; "))
        },
    }
}

fn criterion_9() -> Outcome {
    let (h, v, took) = match two_qubit() {
        Ok(x) => x,
        Err(e) => {
            return Outcome {
                passed: false,
                detail: format!("two-qubit enumeration failed: {e}"),
            }
        }
    };
    let maps: Vec<_> = clifford_generators(2, 2)
        .unwrap()
        .iter()
        .map(|u| clifford_w_map(h.space(), u).unwrap())
        .collect();
    let closed = maps.iter().all(|m| v.clifford_permutation(m).is_ok());
    let orbits = if closed { v.orbits(&maps).unwrap() } else { Vec::new() };
    let cnc_orbits = orbits
        .iter()
        .filter(|o| cnc_type(&v.operator(o[0])).is_some())
        .count();
    let mut sizes: Vec<usize> = orbits.iter().map(Vec::len).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    let note = if orbits.len() == 8 {
        "matches the expected eight".to_string()
    } else {
        "differs from the expected eight".to_string()
    };
    Outcome {
        passed: closed && v.rejected().is_empty() && cnc_orbits > 0,
        detail: format!(
            "{} vertices in {:.1}s, closed under Clifford generators: {closed}; {} orbits {sizes:?} ({note}); {cnc_orbits} cnc-type orbits",
            v.len(),
            took.as_secs_f64(),
            orbits.len()
        ),
    }
}

/// Number, name, time limit in seconds, check.
type Criterion = (u32, &'static str, Option<u64>, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "Pauli algebra", Some(60), criterion_1),
        (2, "stabilizer identities", Some(300), criterion_2),
        (3, "single-qubit Lambda", Some(10), criterion_3),
        (4, "qutrit phase-point vertices", Some(120), criterion_4),
        (5, "Pauli expectation bound", None, criterion_5),
        (6, "exact Born equality", Some(600), criterion_6),
        (7, "sampling", None, criterion_7),
        (8, "Phi map", Some(300), criterion_8),
        (9, "two-qubit orbits", None, criterion_9),
    ];
    let mut failures = 0;
    for (k, name, limit, f) in criteria {
        let t = Instant::now();
        let mut o = f();
        let secs = t.elapsed().as_secs_f64();
        if let Some(l) = limit {
            if secs >= l as f64 {
                o.passed = false;
                o.detail = format!("over the {l}s limit; {}", o.detail);
            }
        }
        failures += usize::from(!o.passed);
        println!(
            "{} criterion {k} ({name}) [{secs:.1}s]: {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!("{} of 9 criteria pass", 9 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
