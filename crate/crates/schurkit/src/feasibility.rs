//! Existence of a norm-bounded K making D + K*AK positive (semi-)definite.
//!
//! With λ_1 ≥ … ≥ λ_n the eigenvalues of A (k of them positive) and
//! μ_1 ≤ … ≤ μ_m the eigenvalues of D (r nonpositive, p zero), a K with
//! ‖K‖ < κ and D + K*AK positive definite exists iff
//!
//! ```text
//!     r ≤ k   and   κ²λ_i + μ_i > 0   for i = 1, …, r-p,
//! ```
//!
//! and the semidefinite variant relaxes this to r - p ≤ k and ≥ 0 with
//! ‖K‖ ≤ κ. Strict inequalities are realized with a relative tolerance
//! `zero_tol` (default 1e-9·(‖A‖+‖D‖)); the exact-arithmetic statement has
//! no floating-point counterpart.
//!
//! When the rank obstruction holds, no K works: the kernel of K*(A+|A|)K
//! meets the nonpositive eigenspace of D nontrivially, and any vector in
//! the intersection certifies a nonpositive quadratic form. The witness
//! search below runs for an arbitrary given K, so it also exhibits
//! per-K failures of feasible problems (e.g. K = 0 with indefinite D).

use num_complex::Complex64;
use rand::Rng;

use crate::hermitian::{
    self, eigendecompose_hermitian, spectral_norm, EigenOrder, HermitianEigenSystem,
};
use crate::matrix::{vec_norm, ComplexMatrix};
use crate::tolerances;
use crate::Mode;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FeasibilityError {
    #[error("kappa must be positive, got {kappa}")]
    BadKappa { kappa: f64 },
    #[error("eigenvalue order mismatch: {context}")]
    OrderMismatch { context: String },
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
    #[error(transparent)]
    Eigen(#[from] hermitian::HermitianError),
}

/// Outcome of the existence test, with the failing scalar indices
/// (1-based, in the order μ_1 ≤ μ_2 ≤ …) and the rank condition separately.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct FeasibilityVerdict {
    pub mode: Mode,
    pub feasible: bool,
    pub kappa: f64,
    pub violated_indices: Vec<usize>,
    pub rank_condition_ok: bool,
    /// min_i (κ²λ_i + μ_i) over the checked indices; a conditioning
    /// indicator (no guarantee is attached), `None` when no index applies.
    pub scalar_margin: Option<f64>,
}

/// Default relative tolerance for strict inequalities: 1e-9·(‖A‖ + ‖D‖).
pub fn default_zero_tol(eigs_a: &HermitianEigenSystem, eigs_d: &HermitianEigenSystem) -> f64 {
    tolerances::ZERO_TOL_FACTOR * (eigs_a.spectral_norm() + eigs_d.spectral_norm()).max(1.0)
}

fn require_orders(
    eigs_a: &HermitianEigenSystem,
    eigs_d: &HermitianEigenSystem,
) -> Result<(), FeasibilityError> {
    if eigs_a.order != EigenOrder::Nonincreasing {
        return Err(FeasibilityError::OrderMismatch {
            context: "A eigenvalues must be nonincreasing".into(),
        });
    }
    if eigs_d.order != EigenOrder::Nondecreasing {
        return Err(FeasibilityError::OrderMismatch {
            context: "D eigenvalues must be nondecreasing".into(),
        });
    }
    Ok(())
}

/// Counts (k, r, p) from ordered eigensystems under `zero_tol`.
pub fn spectral_counts(
    eigs_a: &HermitianEigenSystem,
    eigs_d: &HermitianEigenSystem,
    zero_tol: f64,
) -> (usize, usize, usize) {
    let k = eigs_a.values.iter().filter(|&&v| v > zero_tol).count();
    let negative = eigs_d.values.iter().filter(|&&v| v < -zero_tol).count();
    let zero = eigs_d
        .values
        .iter()
        .filter(|&&v| v.abs() <= zero_tol)
        .count();
    (k, negative + zero, zero)
}

/// Decide the existence criterion for the given κ and mode.
pub fn check_feasible(
    eigs_a: &HermitianEigenSystem,
    eigs_d: &HermitianEigenSystem,
    kappa: f64,
    mode: Mode,
    zero_tol: f64,
) -> Result<FeasibilityVerdict, FeasibilityError> {
    if kappa.is_nan() || kappa <= 0.0 {
        return Err(FeasibilityError::BadKappa { kappa });
    }
    require_orders(eigs_a, eigs_d)?;

    let (k, r, p) = spectral_counts(eigs_a, eigs_d, zero_tol);
    let rank_condition_ok = match mode {
        Mode::Definite => r <= k,
        Mode::Semidefinite => r - p <= k,
    };

    let kappa_sq = kappa * kappa;
    let n = eigs_a.dim();
    let mut violated_indices = Vec::new();
    let mut scalar_margin: Option<f64> = None;
    for i in 0..(r - p).min(n) {
        let t = kappa_sq * eigs_a.values[i] + eigs_d.values[i];
        scalar_margin = Some(scalar_margin.map_or(t, |m: f64| m.min(t)));
        let ok = match mode {
            Mode::Definite => t > zero_tol,
            Mode::Semidefinite => t >= -zero_tol,
        };
        if !ok {
            violated_indices.push(i + 1);
        }
    }

    Ok(FeasibilityVerdict {
        mode,
        feasible: rank_condition_ok && violated_indices.is_empty(),
        kappa,
        violated_indices,
        rank_condition_ok,
        scalar_margin,
    })
}

/// D + K*AK for concrete blocks.
pub fn schur_product(
    a: &ComplexMatrix,
    d: &ComplexMatrix,
    k: &ComplexMatrix,
) -> Result<ComplexMatrix, FeasibilityError> {
    check_block_dims(a, d, k)?;
    let kak = k.adjoint().mul(&a.mul(k).expect("shape")).expect("shape");
    Ok(d.add(&kak).expect("shape"))
}

fn check_block_dims(
    a: &ComplexMatrix,
    d: &ComplexMatrix,
    k: &ComplexMatrix,
) -> Result<(), FeasibilityError> {
    if !a.is_square() || !d.is_square() || k.rows() != a.rows() || k.cols() != d.rows() {
        return Err(FeasibilityError::DimensionMismatch {
            context: format!(
                "A {}x{}, D {}x{}, K {}x{}",
                a.rows(),
                a.cols(),
                d.rows(),
                d.cols(),
                k.rows(),
                k.cols()
            ),
        });
    }
    Ok(())
}

/// Search for a unit vector v in ker(K*(A+|A|)K) ∩ E, where E is the span
/// of D-eigenvectors with nonpositive (definite mode) resp. negative
/// (semidefinite mode) eigenvalues. Such a v satisfies
/// ⟨(D + K*AK)v, v⟩ ≤ ⟨Dv, v⟩ ≤ 0 and certifies that this particular K
/// fails. Returns `None` when the intersection is trivial.
///
/// The intersection is computed from orthonormal bases B1, B2 as the
/// near-null eigenspace of (I - B1B1*) + (I - B2B2*); over the
/// intersection the Rayleigh quotient of D + K*AK is minimized, which
/// makes the returned witness deterministic.
pub fn infeasibility_witness(
    a: &ComplexMatrix,
    d: &ComplexMatrix,
    k: &ComplexMatrix,
    mode: Mode,
    zero_tol: f64,
) -> Result<Option<Vec<Complex64>>, FeasibilityError> {
    check_block_dims(a, d, k)?;
    let m = d.rows();

    // A + |A| = Q (Λ + |Λ|) Q*.
    let eigs_a = eigendecompose_hermitian(a, EigenOrder::Nonincreasing)?;
    let a_plus_abs = eigs_a.map_eigenvalues(|v| 2.0 * v.max(0.0));
    let gram = k
        .adjoint()
        .mul(&a_plus_abs.mul(k).expect("shape"))
        .expect("shape");
    let eigs_gram = eigendecompose_hermitian(&gram, EigenOrder::Nondecreasing)?;
    let gram_tol = zero_tol * eigs_gram.spectral_norm().max(1.0);
    let kernel: Vec<usize> = (0..m)
        .filter(|&i| eigs_gram.values[i].abs() <= gram_tol)
        .collect();

    let eigs_d = eigendecompose_hermitian(d, EigenOrder::Nondecreasing)?;
    let selected: Vec<usize> = (0..m)
        .filter(|&i| match mode {
            Mode::Definite => eigs_d.values[i] <= zero_tol,
            Mode::Semidefinite => eigs_d.values[i] < -zero_tol,
        })
        .collect();

    if kernel.is_empty() || selected.is_empty() {
        return Ok(None);
    }

    let basis_from = |cols: &[usize], sys: &HermitianEigenSystem| -> ComplexMatrix {
        ComplexMatrix::from_fn(m, cols.len(), |i, j| sys.vectors[(i, cols[j])])
    };
    let b1 = basis_from(&kernel, &eigs_gram);
    let b2 = basis_from(&selected, &eigs_d);

    // (I - B1B1*) + (I - B2B2*) is PSD; its kernel is the intersection.
    let proj_complement = |b: &ComplexMatrix| -> ComplexMatrix {
        let p = b.mul(&b.adjoint()).expect("shape");
        ComplexMatrix::identity(m).sub(&p).expect("shape")
    };
    let stacked = proj_complement(&b1)
        .add(&proj_complement(&b2))
        .expect("shape");
    let eigs_stacked = eigendecompose_hermitian(&stacked, EigenOrder::Nondecreasing)?;
    let null_tol = zero_tol.max(1e-12);
    let intersection: Vec<usize> = (0..m)
        .filter(|&i| eigs_stacked.values[i].abs() <= null_tol)
        .collect();
    if intersection.is_empty() {
        return Ok(None);
    }

    // Minimize the Rayleigh quotient of D + K*AK over the intersection.
    let basis = basis_from(&intersection, &eigs_stacked);
    let schur = schur_product(a, d, k)?;
    let compressed = basis
        .adjoint()
        .mul(&schur.mul(&basis).expect("shape"))
        .expect("shape");
    let compressed = compressed.hermitian_part().expect("square");
    let eigs_c = eigendecompose_hermitian(&compressed, EigenOrder::Nondecreasing)?;
    let y = eigs_c.vectors.column(0);
    let mut v = basis.mul_vec(&y).expect("shape");
    let norm = vec_norm(&v);
    debug_assert!(norm > 0.0);
    for z in &mut v {
        *z /= norm;
    }
    Ok(Some(v))
}

/// Random K with ‖K‖ ≤ κ (random direction, norm κ·t with t ∈ [0, 1)).
pub fn random_contraction(rng: &mut impl Rng, n: usize, m: usize, kappa: f64) -> ComplexMatrix {
    let raw = ComplexMatrix::from_fn(n, m, |_, _| {
        Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)
    });
    let sigma1 = spectral_norm(&raw);
    if sigma1 == 0.0 {
        return ComplexMatrix::zeros(n, m);
    }
    let t: f64 = rng.gen();
    raw.scale(Complex64::new(kappa * t / sigma1, 0.0))
}

/// Statistical check of the only-if direction: the largest minimum
/// eigenvalue of D + K*AK over `samples` random contractions with
/// ‖K‖ ≤ κ. For infeasible instances this must stay ≤ zero_tol.
pub fn max_min_eig_over_contractions(
    a: &ComplexMatrix,
    d: &ComplexMatrix,
    kappa: f64,
    samples: usize,
    rng: &mut impl Rng,
) -> Result<f64, FeasibilityError> {
    let n = a.rows();
    let m = d.rows();
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..samples {
        let k = random_contraction(rng, n, m, kappa);
        let schur = schur_product(a, d, &k)?;
        let eigs = eigendecompose_hermitian(&schur, EigenOrder::Nondecreasing)?;
        worst = worst.max(eigs.values[0]);
    }
    Ok(worst)
}
