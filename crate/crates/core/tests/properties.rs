//! Randomized invariants of the index computations, checked against the
//! restriction oracle in exact arithmetic.

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use morse_index::bilinear::{InnerProductSpace, Subspace, SymmetricForm};
use morse_index::constraint::{
    classify, diagonalize_duals, is_s_critical, predict_multi, riesz, sequential_index_drop, solve_dual, Branch,
    Functional, SolveStatus,
};
use morse_index::harness::generate::{self, unimodular};
use morse_index::linalg::{Field, Rational, Tolerances};

type Q = Rational;

fn q(v: i64) -> Q {
    Q::from_integer(v.into())
}

fn symmetric(n: usize, upper: &[i64]) -> DMatrix<i64> {
    let mut m = DMatrix::zeros(n, n);
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            m[(i, j)] = upper[k];
            m[(j, i)] = upper[k];
            k += 1;
        }
    }
    m
}

fn exact_form(a: &DMatrix<i64>) -> SymmetricForm<Q> {
    SymmetricForm::euclidean(a.map(q)).unwrap()
}

fn float_form(a: &DMatrix<i64>) -> SymmetricForm<f64> {
    SymmetricForm::euclidean(a.map(|x| x as f64)).unwrap()
}

fn functional<T: Field>(c: &[i64]) -> Functional<T> {
    Functional::from_ints(c)
}

fn sym_matrix(max_dim: usize) -> impl Strategy<Value = DMatrix<i64>> {
    (1..=max_dim)
        .prop_flat_map(|n| prop::collection::vec(-3i64..=3, n * (n + 1) / 2).prop_map(move |u| symmetric(n, &u)))
}

fn matrix_and_vectors(max_dim: usize, count: usize) -> impl Strategy<Value = (DMatrix<i64>, Vec<Vec<i64>>)> {
    sym_matrix(max_dim).prop_flat_map(move |a| {
        let n = a.nrows();
        (
            Just(a),
            prop::collection::vec(prop::collection::vec(-3i64..=3, n), count),
        )
    })
}

fn spd(seed: u64, n: usize) -> DMatrix<i64> {
    generate::spd_gram(&mut ChaCha8Rng::seed_from_u64(seed), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn inertia_is_a_congruence_invariant(a in sym_matrix(6), seed in any::<u64>()) {
        let p = unimodular(&mut ChaCha8Rng::seed_from_u64(seed), a.nrows());
        let moved = p.transpose() * &a * &p;
        let before = exact_form(&a).inertia().unwrap();
        let after = exact_form(&moved).inertia().unwrap();
        prop_assert_eq!(before.counts(), after.counts());
        prop_assert_eq!(float_form(&a).inertia().unwrap().counts(), before.counts());
    }

    #[test]
    fn single_constraint_prediction_matches_oracle((a, fs) in matrix_and_vectors(6, 1)) {
        prop_assume!(fs[0].iter().any(|x| *x != 0));
        let form = exact_form(&a);
        let phi = functional::<Q>(&fs[0]);
        let full = form.inertia().unwrap();
        let oracle = form.restrict(std::slice::from_ref(&phi)).unwrap().inertia().unwrap();
        let (branch, _) = classify(&form, &phi).unwrap();

        let drop = full.negative as i64 - oracle.negative as i64;
        let change = oracle.zero as i64 - full.zero as i64;
        prop_assert!((0..=1).contains(&drop));
        prop_assert!((-1..=1).contains(&change));
        prop_assert_eq!(drop, branch.index_drop() as i64);
        prop_assert_eq!(change, branch.nullity_change() as i64);
        prop_assert_eq!(is_s_critical(&form, &phi).unwrap(), drop == 1);
    }

    #[test]
    fn float_classification_agrees_when_not_marginal((a, fs) in matrix_and_vectors(6, 1)) {
        prop_assume!(fs[0].iter().any(|x| *x != 0));
        let exact = classify(&exact_form(&a), &functional::<Q>(&fs[0])).unwrap().0;
        let (float, marginal) = classify(&float_form(&a), &functional::<f64>(&fs[0])).unwrap();
        if !marginal {
            prop_assert_eq!(exact, float);
        }
    }

    #[test]
    fn restriction_is_associative((a, fs) in matrix_and_vectors(6, 2)) {
        let form = exact_form(&a);
        let (p1, p2) = (functional::<Q>(&fs[0]), functional::<Q>(&fs[1]));
        let both = form.restrict(&[p1.clone(), p2.clone()]).unwrap().inertia().unwrap();
        let sub = form.kernel_intersection(std::slice::from_ref(&p1)).unwrap();
        let first = form.restrict_to(&sub).unwrap();
        let second = first.restrict(&[p2.pull_back(sub.basis())]).unwrap().inertia().unwrap();
        prop_assert_eq!(both.counts(), second.counts());
    }

    #[test]
    fn out_of_range_witness_is_a_kernel_vector(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = generate::single(&mut rng, 7, Branch::NotInRange);
        let a = DMatrix::from_fn(inst.dim(), inst.dim(), |i, j| inst.form[i][j]);
        let form = exact_form(&a);
        let phi = functional::<Q>(&inst.constraints[0]);
        match solve_dual(&form, &phi).unwrap().status {
            SolveStatus::NotInRange { kernel_component } => {
                prop_assert!((form.matrix() * &kernel_component).iter().all(|x| *x == q(0)));
                prop_assert!(phi.eval(&kernel_component) != q(0));
            }
            SolveStatus::InRange { .. } => prop_assert!(false, "generated functional is in the range"),
        }
    }

    #[test]
    fn riesz_representative_reproduces_the_functional(
        (a, fs) in matrix_and_vectors(5, 2),
        seed in any::<u64>(),
    ) {
        let n = a.nrows();
        let space = InnerProductSpace::new(spd(seed, n).map(q), &Tolerances::default()).unwrap();
        let phi = functional::<Q>(&fs[0]);
        let r = riesz(&space, &phi).unwrap();
        let v = DVector::from_iterator(n, fs[1].iter().map(|x| q(*x)));
        prop_assert_eq!(space.inner(&r, &v), phi.eval(&v));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multi_prediction_ignores_order_and_matches_sequential(seed in any::<u64>(), k in 2usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = generate::multi(&mut rng, 7, k, seed % 3 == 0);
        let a = DMatrix::from_fn(inst.dim(), inst.dim(), |i, j| inst.form[i][j]);
        let form = exact_form(&a);
        let mut cs: Vec<Functional<Q>> = inst.constraints.iter().map(|c| functional(c)).collect();

        let report = predict_multi(&form, &cs).unwrap();
        let oracle = form.restrict(&cs).unwrap().inertia().unwrap();
        prop_assert_eq!(report.predicted_morse_index, oracle.negative);
        prop_assert_eq!(report.predicted_nullity, oracle.zero);

        let full = form.inertia().unwrap();
        prop_assert_eq!(sequential_index_drop(&form, &cs).unwrap(), full.negative - oracle.negative);

        cs.reverse();
        let reversed = predict_multi(&form, &cs).unwrap();
        prop_assert_eq!((reversed.c, reversed.c0), (report.c, report.c0));
    }

    #[test]
    fn diagonalized_duals_are_s_orthogonal(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = generate::multi(&mut rng, 7, 3, false);
        let a = DMatrix::from_fn(inst.dim(), inst.dim(), |i, j| inst.form[i][j]);
        let form = exact_form(&a);
        let cs: Vec<Functional<Q>> = inst.constraints.iter().map(|c| functional(c)).collect();
        let duals = predict_multi(&form, &cs).unwrap().duals;
        let v = diagonalize_duals(&form, &duals).unwrap();
        for i in 0..v.len() {
            for j in 0..i {
                prop_assert_eq!(form.eval(&v[i], &v[j]), q(0));
            }
        }
        prop_assert!(Subspace::new(DMatrix::from_columns(&v), &Tolerances::default()).is_ok());
    }

    #[test]
    fn maximal_negative_subspaces_through_a_vector(a in sym_matrix(6), coeffs in prop::collection::vec(-2i64..=2, 6)) {
        let form = exact_form(&a);
        let mi = form.morse_index().unwrap();
        prop_assume!(mi > 0);
        let n = a.nrows();
        let u = DVector::from_iterator(n, coeffs.iter().take(n).map(|c| q(*c)));
        prop_assume!(form.quadratic(&u) < q(0));

        let w = form.maximal_negative_subspace_through(&u).unwrap();
        prop_assert_eq!(w.dim(), mi);
        prop_assert!(w.contains(&u, form.tolerances()));
        let on_w = form.restrict_to(&w).unwrap().inertia().unwrap();
        prop_assert_eq!(on_w.negative, mi);
    }

    #[test]
    fn s_critical_functionals_see_every_sampled_negative_subspace(
        (a, fs) in matrix_and_vectors(6, 1),
        samples in prop::collection::vec(prop::collection::vec(-2i64..=2, 6), 4),
    ) {
        let form = exact_form(&a);
        let phi = functional::<Q>(&fs[0]);
        prop_assume!(!phi.is_trivial() && form.morse_index().unwrap() > 0);
        let critical = is_s_critical(&form, &phi).unwrap();
        let n = a.nrows();
        for s in &samples {
            let u = DVector::from_iterator(n, s.iter().take(n).map(|c| q(*c)));
            if form.quadratic(&u) >= q(0) {
                continue;
            }
            let w = form.maximal_negative_subspace_through(&u).unwrap();
            let vanishes = w.vectors().iter().all(|v| phi.eval(v) == q(0));
            if critical {
                prop_assert!(!vanishes);
            }
        }
        if !critical {
            // some maximal negative subspace lies inside Ker φ
            let restricted = form.restrict(std::slice::from_ref(&phi)).unwrap();
            prop_assert_eq!(restricted.morse_index().unwrap(), form.morse_index().unwrap());
        }
    }

    #[test]
    fn s_projection_is_idempotent((a, vs) in matrix_and_vectors(6, 2)) {
        let form = exact_form(&a);
        let n = a.nrows();
        let u = DVector::from_iterator(n, vs[0].iter().map(|x| q(*x)));
        let v = DVector::from_iterator(n, vs[1].iter().map(|x| q(*x)));
        prop_assume!(form.quadratic(&u) != q(0));
        let pv = form.s_project(&u, &v).unwrap();
        prop_assert_eq!(form.s_project(&u, &pv).unwrap(), pv.clone());
        prop_assert_eq!(form.eval(&u, &(&v - &pv)), q(0));
    }

    #[test]
    fn float_decomposition_splits_the_space(a in sym_matrix(10), seed in any::<u64>()) {
        let n = a.nrows();
        let gram = spd(seed, n).map(|x| x as f64);
        let space = InnerProductSpace::new(gram, &Tolerances::default()).unwrap();
        let form = SymmetricForm::new(space, a.map(|x| x as f64)).unwrap();
        let d = form.fundamental_decomposition().unwrap();
        let (orth, cross) = form.cross_residuals(&d);
        let scale = a.map(|x| x as f64).norm().max(1.0);
        prop_assert!(orth <= 1e-8 * scale && cross <= 1e-8 * scale, "orth {} cross {}", orth, cross);
        prop_assert_eq!(d.inertia().counts(), exact_form(&a).inertia().unwrap().counts());
        prop_assert_eq!(d.all_vectors().count(), n);
    }
}
