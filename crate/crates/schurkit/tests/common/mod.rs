//! Shared generators for the integration suites. Everything is seeded;
//! the suites are deterministic.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use schurkit::hermitian::{
    eigendecompose_hermitian, inertia, EigenOrder, HermitianEigenSystem, InertiaCounts,
};
use schurkit::matrix::ComplexMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| random_complex(rng))
}

/// Random unitary: eigenvector matrix of a random Hermitian matrix.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let h = random_matrix(rng, n, n).hermitian_part().unwrap();
    eigendecompose_hermitian(&h, EigenOrder::Nonincreasing)
        .unwrap()
        .vectors
}

/// Hermitian matrix with the prescribed eigenvalues and a random basis.
pub fn hermitian_with_eigenvalues(rng: &mut impl Rng, values: &[f64]) -> ComplexMatrix {
    let n = values.len();
    let q = random_unitary(rng, n);
    let scaled = ComplexMatrix::from_fn(n, n, |i, j| q[(i, j)] * values[j]);
    scaled.mul(&q.adjoint()).unwrap().hermitian_part().unwrap()
}

/// Random Hermitian with eigenvalues uniform in [lo, hi].
pub fn random_hermitian_in(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> ComplexMatrix {
    let values: Vec<f64> = (0..n).map(|_| rng.gen_range(lo..hi)).collect();
    hermitian_with_eigenvalues(rng, &values)
}

pub struct Instance {
    pub a: ComplexMatrix,
    pub d: ComplexMatrix,
    pub eigs_a: HermitianEigenSystem,
    pub eigs_d: HermitianEigenSystem,
    pub inertia_a: InertiaCounts,
    pub inertia_d: InertiaCounts,
    pub zero_tol: f64,
}

pub fn analyze(a: ComplexMatrix, d: ComplexMatrix) -> Instance {
    let eigs_a = eigendecompose_hermitian(&a, EigenOrder::Nonincreasing).unwrap();
    let eigs_d = eigendecompose_hermitian(&d, EigenOrder::Nondecreasing).unwrap();
    let zero_tol = schurkit::feasibility::default_zero_tol(&eigs_a, &eigs_d);
    let inertia_a = inertia(&eigs_a, zero_tol);
    let inertia_d = inertia(&eigs_d, zero_tol);
    Instance {
        a,
        d,
        eigs_a,
        eigs_d,
        inertia_a,
        inertia_d,
        zero_tol,
    }
}

/// Mixed-inertia random instance with n, m ≤ 8. A quarter of the
/// instances carry an exact kernel in D so the p > 0 paths get exercised.
pub fn random_mixed_instance(rng: &mut impl Rng) -> Instance {
    let n = rng.gen_range(1..=8);
    let m = rng.gen_range(1..=8);
    let a = random_hermitian_in(rng, n, -3.0, 3.0);
    let mut d_values: Vec<f64> = (0..m).map(|_| rng.gen_range(-3.0..3.0)).collect();
    if rng.gen_bool(0.25) {
        let zeros = rng.gen_range(1..=m.min(2));
        for value in d_values.iter_mut().take(zeros) {
            *value = 0.0;
        }
    }
    let d = hermitian_with_eigenvalues(rng, &d_values);
    analyze(a, d)
}

/// Random (A positive definite, D) pair satisfying the J-frame existence
/// criterion: r ≤ n and λ_i + μ_i > 0 for i ≤ r (with a safety margin).
pub fn random_jframe_instance(rng: &mut impl Rng) -> Instance {
    let n = rng.gen_range(1..=8);
    let m = rng.gen_range(1..=8);
    let mut lambda: Vec<f64> = (0..n).map(|_| rng.gen_range(0.3..3.0)).collect();
    lambda.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let r = rng.gen_range(0..=n.min(m));
    let mut mu = Vec::with_capacity(m);
    if r > 0 {
        let cap = 0.9 * lambda[r - 1];
        for _ in 0..r {
            mu.push(-rng.gen_range(0.01..cap.max(0.02)));
        }
    }
    for _ in r..m {
        mu.push(rng.gen_range(0.05..3.0));
    }
    let a = hermitian_with_eigenvalues(rng, &lambda);
    let d = hermitian_with_eigenvalues(rng, &mu);
    analyze(a, d)
}

pub fn min_eigenvalue(m: &ComplexMatrix) -> f64 {
    eigendecompose_hermitian(m, EigenOrder::Nondecreasing)
        .unwrap()
        .values[0]
}

pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
