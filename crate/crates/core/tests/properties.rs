use std::sync::OnceLock;

use lambda_hvm::cli::t_state_circuit;
use lambda_hvm::exact_arith::{ComplexMatrix, CycNumber};
use lambda_hvm::hvm::lp::feasible_point;
use lambda_hvm::hvm::{decompose_state, simulate_run, Mode, Model, State};
use lambda_hvm::pauli::{clifford_generators, CliffordElement, PhaseSpace};
use lambda_hvm::polytope::Operator;
use lambda_hvm::stabilizer::IsotropicSubgroup;
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

type M = DMatrix<Complex64>;

fn dense(m: &ComplexMatrix) -> M {
    m.to_nalgebra()
}

fn max_diff(a: &M, b: &M) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn qutrit() -> &'static Model {
    static M: OnceLock<Model> = OnceLock::new();
    M.get_or_init(|| Model::new(3, 1).unwrap())
}

fn qubit() -> &'static Model {
    static M: OnceLock<Model> = OnceLock::new();
    M.get_or_init(|| Model::new(2, 1).unwrap())
}

fn model(d: u32) -> &'static Model {
    if d == 2 {
        qubit()
    } else {
        qutrit()
    }
}

fn cyc(order: u32, coeffs: &[i64]) -> CycNumber {
    let degree = CycNumber::zero(order).coeffs().len();
    let c = (0..degree)
        .map(|k| BigRational::new(BigInt::from(coeffs[k % coeffs.len()]), BigInt::from(1 + k as i64 % 3)))
        .collect();
    CycNumber::from_coeffs(order, c)
}

fn word(gens: &[CliffordElement], idx: &[usize]) -> CliffordElement {
    let mut u = CliffordElement::identity(gens[0].space());
    for &i in idx {
        u = u.compose(&gens[i % gens.len()]);
    }
    u
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cyclotomic_field_axioms(
        order in prop::sample::select(vec![3u32, 4, 6, 8, 5]),
        a in prop::collection::vec(-5i64..5, 1..6),
        b in prop::collection::vec(-5i64..5, 1..6),
    ) {
        let x = cyc(order, &a);
        let y = cyc(order, &b);
        prop_assert_eq!(&(&(&x + &y) - &y), &x);
        prop_assert_eq!(&(&x * &y), &(&y * &x));
        prop_assert_eq!(&x.conj().conj(), &x);
        let z = (x.to_complex64() * y.to_complex64() - (&x * &y).to_complex64()).norm();
        prop_assert!(z < 1e-9);
        if !x.is_zero() {
            prop_assert!((&x * &x.try_inv().unwrap()).is_one());
        }
        prop_assert!((x.norm_sq().to_complex64().re - x.to_complex64().norm_sqr()).abs() < 1e-9);
    }

    #[test]
    fn pauli_composition_matches_dense_products(
        d in 2u32..6,
        n in 1usize..3,
        a in any::<prop::sample::Index>(),
        b in any::<prop::sample::Index>(),
    ) {
        let space = PhaseSpace::new(d, n).unwrap();
        let (a, b) = (a.index(space.size()), b.index(space.size()));
        let ta = dense(&space.pauli_matrix_c64(a));
        let tb = dense(&space.pauli_matrix_c64(b));
        let ab = dense(&space.pauli_matrix_c64(space.add(a, b)));
        let zeta = Complex64::from_polar(1.0, std::f64::consts::TAU / space.order() as f64);
        prop_assert!(max_diff(&(&ta * &tb), &(ab * zeta.powu(space.compose_zeta(a, b)))) < 1e-9);
        let w = Complex64::from_polar(1.0, std::f64::consts::TAU * space.symp(a, b) as f64 / d as f64);
        prop_assert!(max_diff(&(&ta * &tb), &(&tb * &ta * w)) < 1e-9);
        prop_assert_eq!(space.symp(a, b), (d - space.symp(b, a)) % d);
    }

    #[test]
    fn clifford_inverse_undoes_conjugation(
        d in 2u32..4,
        idx in prop::collection::vec(0usize..16, 1..6),
        a in 1usize..9,
    ) {
        let space = PhaseSpace::new(d, 1).unwrap();
        let gens = clifford_generators(d, 1).unwrap();
        let u = word(&gens, &idx);
        let v = u.compose(&u.inverse());
        let a = a % space.size();
        prop_assert_eq!(v.image(a), a);
        prop_assert_eq!(v.phase(a) % space.order(), 0);
        let um = dense(&u.unitary_c64());
        let id = M::identity(space.dim(), space.dim());
        prop_assert!(max_diff(&(&um * um.adjoint()), &id) < 1e-9);
    }

    #[test]
    fn vertex_updates_agree_with_dense_conjugation(
        d in 2u32..4,
        alpha in any::<prop::sample::Index>(),
        idx in prop::collection::vec(0usize..16, 1..5),
    ) {
        let m = model(d);
        let gens = clifford_generators(d, 1).unwrap();
        let u = word(&gens, &idx);
        let alpha = alpha.index(m.vertices().len());
        let beta = m.clifford_update(alpha, &u).unwrap();
        let um = dense(&u.unitary_c64());
        let a = dense(&m.vertices().operator(alpha).to_complex_matrix());
        let b = dense(&m.vertices().operator(beta).to_complex_matrix());
        prop_assert!(max_diff(&(&um * a * um.adjoint()), &b) < 1e-9);
    }

    #[test]
    fn kernels_are_stochastic_and_reproduce_born_probabilities(
        d in 2u32..4,
        alpha in any::<prop::sample::Index>(),
        a in any::<prop::sample::Index>(),
    ) {
        let m = model(d);
        let space = m.space();
        let alpha = alpha.index(m.vertices().len());
        let a = 1 + a.index(space.size() - 1);
        let group = IsotropicSubgroup::generated_by(space, &[a]).unwrap();
        let k = m.measurement_transition(alpha, &group).unwrap();
        prop_assert!(k.total().is_one());
        let t = dense(&space.pauli_matrix_c64(a));
        let av = dense(&m.vertices().operator(alpha).to_complex_matrix());
        for (i, br) in k.branches.iter().enumerate() {
            prop_assert!(!br.prob.is_negative());
            prop_assert!(br.next.iter().all(|(_, w)| w.is_positive()));
            let r = br.assignment.get(a).unwrap();
            // Eigenprojector of T_a for eigenvalue w^r.
            let dim = space.dim();
            let w = |k: u32| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / d as f64);
            let mut p = M::identity(dim, dim);
            for j in (0..d).filter(|&j| j != r) {
                p = p * (&t - M::identity(dim, dim) * w(j)) / (w(r) - w(j));
            }
            let born = (p * &av).trace().re;
            let q: f64 = num_traits::ToPrimitive::to_f64(&k.marginal(i)).unwrap();
            prop_assert!((born - q).abs() < 1e-9, "{} vs {}", born, q);
        }
    }

    #[test]
    fn exact_mixtures_decompose_and_reconstruct(
        picks in prop::collection::vec((any::<prop::sample::Index>(), 1u32..6), 1..5),
    ) {
        let m = qutrit();
        let v = m.vertices();
        let total: u32 = picks.iter().map(|p| p.1).sum();
        let mut w = vec![BigRational::zero(); m.space().size()];
        for (i, k) in &picks {
            let lam = BigRational::new((*k).into(), total.into());
            for (x, y) in w.iter_mut().zip(v.w(i.index(v.len()))) {
                *x += &lam * y;
            }
        }
        let st = State::from_operator(&Operator::from_w(m.space(), &w));
        let p = decompose_state(m, &st, Mode::Exact).unwrap();
        let exact = p.exact().unwrap();
        prop_assert!(exact.iter().all(|(_, x)| x.is_positive()));
        prop_assert_eq!(exact.iter().map(|x| x.1.clone()).sum::<BigRational>(), BigRational::one());
        prop_assert_eq!(m.reconstruct_w(exact), w);
    }

    #[test]
    fn feasible_points_satisfy_the_system(
        cols in prop::collection::vec(prop::collection::vec(-4i64..5, 3), 2..7),
        lam in prop::collection::vec(0i64..4, 7),
    ) {
        let q = |x: i64| BigRational::from_integer(x.into());
        let b: Vec<BigRational> = (0..3)
            .map(|r| cols.iter().zip(&lam).map(|(c, l)| q(c[r] * l)).sum())
            .collect();
        let qc: Vec<Vec<BigRational>> = cols.iter().map(|c| c.iter().map(|&x| q(x)).collect()).collect();
        let p = feasible_point(&qc, &b).expect("feasible by construction");
        prop_assert!(p.iter().all(|x| !x.is_negative()));
        for r in 0..3 {
            let s: BigRational = qc.iter().zip(&p).map(|(c, x)| &c[r] * x).sum();
            prop_assert_eq!(&s, &b[r]);
        }
    }

    #[test]
    fn runs_are_fixed_by_seed_and_shot(seed in any::<u64>(), shot in 0u64..1000) {
        let m = qubit();
        let circ = t_state_circuit();
        let p = decompose_state(m, &circ.state, Mode::Numeric).unwrap().support_f64();
        let a = simulate_run(m, &circ, &p, seed, shot).unwrap();
        let b = simulate_run(m, &circ, &p, seed, shot).unwrap();
        prop_assert_eq!(a, b);
    }
}
