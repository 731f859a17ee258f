//! Property tests for the structural invariants.

mod common;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;

use schurkit::completion::{build_k, default_epsilons};
use schurkit::feasibility::{check_feasible, infeasibility_witness, schur_product};
use schurkit::hermitian::{
    all_singular_values, default_pinv_tol, eigendecompose_hermitian, schur_complement,
    singular_values, spectral_norm, EigenOrder,
};
use schurkit::matrix::{vec_inner, ComplexMatrix};
use schurkit::verify;
use schurkit::Mode;

fn finite_entry() -> impl Strategy<Value = f64> {
    prop_oneof![-1e3..1e3f64, -1.0..1.0f64]
}

prop_compose! {
    fn arb_matrix(max_dim: usize)
        (rows in 1..=max_dim, cols in 1..=max_dim)
        (rows in Just(rows), cols in Just(cols),
         entries in prop::collection::vec((finite_entry(), finite_entry()), rows * cols))
        -> ComplexMatrix
    {
        let data = entries.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
        ComplexMatrix::new(rows, cols, data).unwrap()
    }
}

prop_compose! {
    fn arb_hermitian(max_dim: usize)
        (dim in 1..=max_dim)
        (dim in Just(dim),
         entries in prop::collection::vec((finite_entry(), finite_entry()), dim * dim))
        -> ComplexMatrix
    {
        let data: Vec<Complex64> =
            entries.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
        ComplexMatrix::new(dim, dim, data).unwrap().hermitian_part().unwrap()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn json_round_trip_is_exact(m in arb_matrix(6)) {
        let text = m.to_json_string();
        let back = ComplexMatrix::from_json_str(&text).unwrap();
        prop_assert_eq!(m, back);
    }

    #[test]
    fn eigendecomposition_reconstructs(m in arb_hermitian(6)) {
        let sys = eigendecompose_hermitian(&m, EigenOrder::Nonincreasing).unwrap();
        let residual = m.sub(&sys.reconstruct()).unwrap().frobenius_norm();
        prop_assert!(residual <= 1e-10 * sys.spectral_norm().max(1.0),
            "residual {}", residual);
        // Unitary eigenvectors and the requested order.
        let gram = sys.vectors.adjoint().mul(&sys.vectors).unwrap();
        let unitary_defect = gram.sub(&ComplexMatrix::identity(m.rows())).unwrap().frobenius_norm();
        prop_assert!(unitary_defect <= 1e-12 * (m.rows() as f64));
        for w in sys.values.windows(2) {
            prop_assert!(w[0] >= w[1]);
        }
    }

    #[test]
    fn weyl_bounds_hold(pair in (2usize..=6).prop_flat_map(|d| {
        (prop::collection::vec((finite_entry(), finite_entry()), d * d),
         prop::collection::vec((finite_entry(), finite_entry()), d * d))
            .prop_map(move |(x, y)| {
                let build = |e: Vec<(f64, f64)>| {
                    let data = e.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
                    ComplexMatrix::new(d, d, data).unwrap().hermitian_part().unwrap()
                };
                (build(x), build(y))
            })
    })) {
        let (x, y) = pair;
        let scale = spectral_norm(&x) + spectral_norm(&y);
        prop_assert!(verify::weyl_violation(&x, &y) <= 1e-9 * scale.max(1.0));
    }

    #[test]
    fn singular_value_products_hold((x, y) in (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
        (prop::collection::vec((finite_entry(), finite_entry()), r * c),
         prop::collection::vec((finite_entry(), finite_entry()), r * c))
            .prop_map(move |(x, y)| {
                let build = |e: Vec<(f64, f64)>| {
                    let data = e.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
                    ComplexMatrix::new(r, c, data).unwrap()
                };
                (build(x), build(y))
            })
    })) {
        let scale = spectral_norm(&x) * spectral_norm(&y);
        prop_assert!(verify::singular_product_violation(&x, &y) <= 1e-9 * scale.max(1.0));
    }

    #[test]
    fn generalized_complement_matches_direct_product(seed in 0u64..1000, zero_out in 0usize..3) {
        // With B = -AK and C = K*A the complement D - C A† B equals
        // D + K*AK even for singular Hermitian A.
        let mut rng = rng(seed);
        let n = 3;
        let m = 2;
        let mut values: Vec<f64> = (0..n).map(|_| {
            use rand::Rng;
            rng.gen_range(0.5..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 }
        }).collect();
        for v in values.iter_mut().take(zero_out) { *v = 0.0; }
        let a = hermitian_with_eigenvalues(&mut rng, &values);
        let d = random_hermitian_in(&mut rng, m, -2.0, 2.0);
        let k = random_matrix(&mut rng, n, m);
        let b = a.mul(&k).unwrap().neg();
        let c = k.adjoint().mul(&a).unwrap();
        let via_pinv = schur_complement(&a, &b, &c, &d, default_pinv_tol(&a)).unwrap();
        let direct = schur_product(&a, &d, &k).unwrap();
        let residual = via_pinv.sub(&direct).unwrap().frobenius_norm();
        prop_assert!(residual <= 1e-10 * direct.frobenius_norm().max(1.0), "residual {}", residual);
    }

    #[test]
    fn constructed_norm_is_max_sqrt_epsilon(seed in 0u64..500) {
        let mut rng = rng(seed);
        let instance = random_jframe_instance(&mut rng);
        let schedule = default_epsilons(
            &instance.eigs_a, &instance.eigs_d,
            &instance.inertia_a, &instance.inertia_d, 1.0, Mode::Definite).unwrap();
        let cert = build_k(&instance.eigs_a, &instance.eigs_d, &schedule).unwrap();
        let expected = schedule.epsilons.iter().cloned().fold(0.0f64, f64::max).sqrt();
        let sigma1 = singular_values(&cert.k, 0.0).spectral_norm();
        prop_assert!((sigma1 - expected).abs() <= 1e-11 * expected.max(1.0));
    }

    #[test]
    fn witness_is_valid_under_rank_obstruction(seed in 0u64..300) {
        use rand::Rng;
        let mut rng = rng(seed);
        // r > k: any K admits a witness.
        let n = rng.gen_range(1..=3usize);
        let m = rng.gen_range(n + 1..=n + 3);
        let a_values: Vec<f64> = (0..n).map(|_| rng.gen_range(0.3..2.0)).collect();
        let d_values: Vec<f64> = (0..m).map(|_| -rng.gen_range(0.3..2.0)).collect();
        let a = hermitian_with_eigenvalues(&mut rng, &a_values);
        let d = hermitian_with_eigenvalues(&mut rng, &d_values);
        let k = random_matrix(&mut rng, n, m);
        let v = infeasibility_witness(&a, &d, &k, Mode::Definite, 1e-9).unwrap()
            .expect("rank obstruction guarantees a witness");
        prop_assert!((vec_norm(&v) - 1.0).abs() <= 1e-10);
        let schur = schur_product(&a, &d, &k).unwrap();
        let form = vec_inner(&schur.mul_vec(&v).unwrap(), &v).re;
        prop_assert!(form <= 1e-9, "quadratic form {}", form);
    }

    #[test]
    fn numeric_spectrum_residuals_sound(m in arb_matrix(6).prop_filter("square", |m| m.is_square())) {
        let eigs = verify::numeric_spectrum(&m).unwrap();
        prop_assert_eq!(eigs.len(), m.rows());
        let residual = verify::max_eigenvalue_residual(&m, &eigs);
        prop_assert!(residual <= 1e-8 * (1.0 + spectral_norm(&m)), "residual {}", residual);
    }

    #[test]
    fn singular_values_match_gram_spectrum(m in arb_matrix(5)) {
        let gram = m.adjoint().mul(&m).unwrap();
        let sys = eigendecompose_hermitian(&gram, EigenOrder::Nonincreasing).unwrap();
        let sigmas = all_singular_values(&m);
        let scale = sys.values.first().cloned().unwrap_or(0.0).max(1.0);
        for (s, lam) in sigmas.iter().zip(&sys.values) {
            prop_assert!((s * s - lam).abs() <= 1e-9 * scale);
        }
    }

    #[test]
    fn feasibility_is_monotone_in_kappa(seed in 0u64..500) {
        let mut rng = rng(seed);
        let instance = random_mixed_instance(&mut rng);
        let mut last = false;
        for kappa in [0.25, 0.5, 1.0, 2.0, 4.0] {
            let feasible = check_feasible(
                &instance.eigs_a, &instance.eigs_d, kappa, Mode::Definite, instance.zero_tol)
                .unwrap().feasible;
            prop_assert!(feasible || !last, "feasibility must not flip off as kappa grows");
            last = feasible;
        }
    }
}
