//! Frame operators on the indefinite inner product space
//! (C^{n+m}, [·,·]) with Gramian J = diag(I_n, -I_m).
//!
//! A block matrix S = [[A, -AK], [K*A, D]] with A positive definite, K a
//! strict contraction (‖K‖ < 1) and D + K*AK positive definite is exactly
//! the matrix of a frame operator compatible with [·,·] (a J-frame
//! matrix). This module
//!
//! - recognizes J-frame matrices from raw block data (`is_jframe_matrix`),
//! - decides for which (A, D) some strictly contractive K exists
//!   (`jframe_existence`: r ≤ n and λ_i + μ_i > 0 for i ≤ r),
//! - splits S into the positive/negative parts S = S₊ + S₋ acting on the
//!   maximal subspaces M₊ = {(f, K*f)} and M₋ = {0} × C^m (`split_s`),
//! - computes the exact frame bounds (extreme eigenvalues of
//!   C = (I-KK*)^{1/2} A (I-KK*)^{1/2} and of D + K*AK) plus the a-priori
//!   singular-value estimates (`frame_bounds`), and
//! - synthesizes a tight frame family with S as its frame operator
//!   (`synthesize_jframe`), enabling the indefinite
//!   sampling-reconstruction formula f = Σ σ_i [f, S⁻¹f_i] f_i.
//!
//! Matrix square roots go through the Hermitian eigendecomposition with
//! eigenvalues clamped at zero (principal root). (I-KK*)^{-1/2} is
//! refused when 1 - σ_1(K)² < 1e-10: the frame vectors blow up as K
//! approaches the unit sphere.

use num_complex::Complex64;

use crate::completion::{CompletionCertificate, EpsilonSchedule};
use crate::hermitian::{
    eigendecompose_hermitian, spectral_norm, EigenOrder, HermitianEigenSystem, InertiaCounts,
};
use crate::lu::LuDecomposition;
use crate::matrix::{vec_inner, ComplexMatrix};
use crate::spectral::alpha_of;
use crate::tolerances;
use crate::Mode;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum JFrameError {
    #[error("bottom-left block differs from K*A by {residual:e} (tol {tol:e})")]
    BlockInconsistent { residual: f64, tol: f64 },
    #[error("A must be positive definite")]
    ANotPositiveDefinite,
    #[error("matrix is not a J-frame matrix: {failures:?}")]
    NotJFrame { failures: Vec<JFrameFailure> },
    #[error("1 - ‖K‖² = {gap:e} is too small to invert I - KK*")]
    ContractionSingular { gap: f64 },
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
    #[error("eigenvalue order mismatch: A nonincreasing, D nondecreasing required")]
    OrderMismatch,
}

/// Which J-frame matrix condition failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum JFrameFailure {
    ANotHermitian,
    ASingular,
    ANotPositiveDefinite,
    DNotHermitian,
    KNotStrictContraction,
    SchurNotPositiveDefinite,
}

/// The Gramian J = diag(I_{n_plus}, -I_{n_minus}) and its inner product
/// [x, y] = ⟨Jx, y⟩ = Σ_{i≤n₊} x_i conj(y_i) - Σ_j x_{n₊+j} conj(y_{n₊+j}).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndefiniteGram {
    pub n_plus: usize,
    pub n_minus: usize,
}

impl IndefiniteGram {
    pub fn dim(&self) -> usize {
        self.n_plus + self.n_minus
    }

    /// J x.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(x.len(), self.dim());
        x.iter()
            .enumerate()
            .map(|(i, &v)| if i < self.n_plus { v } else { -v })
            .collect()
    }

    /// [x, y].
    pub fn ip(&self, x: &[Complex64], y: &[Complex64]) -> Complex64 {
        vec_inner(&self.apply(x), y)
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let mut j = ComplexMatrix::identity(self.dim());
        for i in self.n_plus..self.dim() {
            j[(i, i)] = Complex64::new(-1.0, 0.0);
        }
        j
    }
}

/// The four a-priori bound expressions from the singular values of K.
/// `beta_plus_upper` uses the largest eigenvalue of I - KK* directly
/// (equal to 1 - σ² for the smallest of the n singular values of K as a
/// Gram factor, which is 0 whenever rank K < n).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct AprioriBounds {
    /// 0 < α₋.
    pub alpha_minus_lower: f64,
    /// β₋ ≤ σ_1²λ_1 + μ_m.
    pub beta_minus_upper: f64,
    /// (1 - σ_1²)λ_n ≤ α₊.
    pub alpha_plus_lower: f64,
    /// β₊ ≤ λ_1 · λ_max(I - KK*).
    pub beta_plus_upper: f64,
}

/// Exact frame bounds: α₊, β₊ are the extreme eigenvalues of
/// C = (I-KK*)^{1/2} A (I-KK*)^{1/2}, α₋, β₋ those of D + K*AK.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct FrameBounds {
    pub alpha_plus: f64,
    pub beta_plus: f64,
    pub alpha_minus: f64,
    pub beta_minus: f64,
    pub apriori: AprioriBounds,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct JFrameReport {
    pub is_jframe_matrix: bool,
    pub witness_failures: Vec<JFrameFailure>,
    pub bounds: Option<FrameBounds>,
}

/// Check the three J-frame matrix conditions on a raw square matrix of
/// size n+m: A positive definite, K = -A⁻¹B strictly contractive, and
/// D + K*AK positive definite. Errors with `BlockInconsistent` when the
/// bottom-left block is not K*A (the matrix is then not of the required
/// form at all); condition failures are reported, not errors.
pub fn is_jframe_matrix(
    s: &ComplexMatrix,
    n: usize,
    m: usize,
    tol: f64,
) -> Result<JFrameReport, JFrameError> {
    if !s.is_square() || s.rows() != n + m || n == 0 || m == 0 {
        return Err(JFrameError::DimensionMismatch {
            context: format!("S is {}x{}, expected ({n}+{m}) square", s.rows(), s.cols()),
        });
    }
    let a = s.block(0, 0, n, n);
    let b = s.block(0, n, n, m);
    let c = s.block(n, 0, m, n);
    let d = s.block(n, n, m, m);

    let mut failures = Vec::new();
    if !a.is_hermitian(tol) {
        failures.push(JFrameFailure::ANotHermitian);
    }
    let lu = LuDecomposition::new(&a).expect("square");
    if lu.is_singular() || lu.pivot_ratio() < 1e-13 {
        failures.push(JFrameFailure::ASingular);
        failures.push(JFrameFailure::ANotPositiveDefinite);
        return Ok(JFrameReport {
            is_jframe_matrix: false,
            witness_failures: failures,
            bounds: None,
        });
    }
    let k = lu.solve_matrix(&b.neg()).expect("shape");

    let block_residual = c
        .sub(&k.adjoint().mul(&a).expect("shape"))
        .expect("shape")
        .frobenius_norm();
    let block_tol = tol * s.frobenius_norm().max(1.0);
    if block_residual > block_tol {
        return Err(JFrameError::BlockInconsistent {
            residual: block_residual,
            tol: block_tol,
        });
    }

    if failures.is_empty() {
        // A Hermitian and invertible; positive definiteness by spectrum.
        let ea = eigendecompose_hermitian(&a, EigenOrder::Nonincreasing).expect("Hermitian");
        let pd_tol = tol * ea.spectral_norm().max(1.0);
        if ea.values[n - 1] <= pd_tol {
            failures.push(JFrameFailure::ANotPositiveDefinite);
        }
    } else {
        failures.push(JFrameFailure::ANotPositiveDefinite);
    }
    if !d.is_hermitian(tol) {
        failures.push(JFrameFailure::DNotHermitian);
    }
    if spectral_norm(&k) >= 1.0 {
        failures.push(JFrameFailure::KNotStrictContraction);
    }
    let schur = d
        .add(&k.adjoint().mul(&a.mul(&k).expect("shape")).expect("shape"))
        .expect("shape")
        .hermitian_part()
        .expect("square");
    let es = eigendecompose_hermitian(&schur, EigenOrder::Nondecreasing).expect("Hermitian");
    if es.values[0] <= tol * es.spectral_norm().max(1.0) {
        failures.push(JFrameFailure::SchurNotPositiveDefinite);
    }

    Ok(JFrameReport {
        is_jframe_matrix: failures.is_empty(),
        witness_failures: failures,
        bounds: None,
    })
}

/// Existence verdict for a strictly contractive completion (κ = 1).
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ExistenceVerdict {
    pub exists: bool,
    pub rank_condition_ok: bool,
    /// 1-based indices i ≤ r-p with λ_i + μ_i ≤ 0; indices with μ_i = 0
    /// satisfy the condition automatically since A is positive definite.
    pub violated_indices: Vec<usize>,
}

/// Decide whether some ‖K‖ < 1 turns (A, D) into a J-frame matrix:
/// r ≤ n and λ_i + μ_i > 0 for i = 1, …, r. Requires A positive definite.
pub fn jframe_existence(
    eigs_a: &HermitianEigenSystem,
    eigs_d: &HermitianEigenSystem,
    zero_tol: f64,
) -> Result<ExistenceVerdict, JFrameError> {
    if eigs_a.order != EigenOrder::Nonincreasing || eigs_d.order != EigenOrder::Nondecreasing {
        return Err(JFrameError::OrderMismatch);
    }
    let n = eigs_a.dim();
    if eigs_a.values[n - 1] <= zero_tol {
        return Err(JFrameError::ANotPositiveDefinite);
    }
    let negative = eigs_d.values.iter().filter(|&&v| v < -zero_tol).count();
    let zero = eigs_d
        .values
        .iter()
        .filter(|&&v| v.abs() <= zero_tol)
        .count();
    let r = negative + zero;
    let p = zero;
    let rank_condition_ok = r <= n;

    let mut violated_indices = Vec::new();
    for i in 0..(r - p).min(n) {
        if eigs_a.values[i] + eigs_d.values[i] <= zero_tol {
            violated_indices.push(i + 1);
        }
    }
    Ok(ExistenceVerdict {
        exists: rank_condition_ok && violated_indices.is_empty(),
        rank_condition_ok,
        violated_indices,
    })
}

/// ε schedule (κ = 1, definite) that makes the completed S similar to a
/// Hermitian matrix: every ε_i is the midpoint of the real-split range
/// (max{-μ_i/λ_i, 0}, min{α_i, 1}), which is nonempty exactly under the
/// existence criterion. All eigenvalues of the resulting S are positive
/// reals and S is diagonalizable.
pub fn real_spectrum_epsilons(
    eigs_a: &HermitianEigenSystem,
    eigs_d: &HermitianEigenSystem,
    inertia_d: &InertiaCounts,
) -> Result<EpsilonSchedule, JFrameError> {
    let verdict = jframe_existence(eigs_a, eigs_d, inertia_d.zero_tol)?;
    if !verdict.exists {
        return Err(JFrameError::NotJFrame { failures: vec![] });
    }
    let r = inertia_d.nonpositive();
    let p = inertia_d.zero;
    let mut epsilons = Vec::with_capacity(r);
    for i in 0..r {
        let lam = eigs_a.values[i];
        let lo = if i < r - p {
            (-eigs_d.values[i] / lam).max(0.0)
        } else {
            0.0
        };
        let alpha = if i < r - p {
            alpha_of(lam, eigs_d.values[i])
        } else {
            0.25
        };
        let hi = alpha.min(1.0);
        debug_assert!(lo < hi);
        epsilons.push(0.5 * (lo + hi));
    }
    Ok(EpsilonSchedule {
        epsilons,
        kappa: 1.0,
        mode: Mode::Definite,
    })
}

/// S = S₊ + S₋ with S₊ = [[A, -AK], [K*A, -K*AK]] and
/// S₋ = diag(0, D + K*AK). The three blocks shared with S are taken from
/// S itself, so additivity is exact there and within one rounding in the
/// bottom-right block.
pub fn split_s(cert: &CompletionCertificate) -> (ComplexMatrix, ComplexMatrix) {
    let n = cert.n();
    let m = cert.m();
    let a = cert.s.block(0, 0, n, n);
    let top_right = cert.s.block(0, n, n, m);
    let bottom_left = cert.s.block(n, 0, m, n);
    let kak = bottom_left.mul(&cert.k).expect("shape");
    let s_plus =
        ComplexMatrix::from_blocks(&a, &top_right, &bottom_left, &kak.neg()).expect("shape");
    let s_minus = cert.s.sub(&s_plus).expect("shape");
    (s_plus, s_minus)
}

fn jframe_gate(cert: &CompletionCertificate, tol: f64) -> Result<(), JFrameError> {
    let report = is_jframe_matrix(&cert.s, cert.n(), cert.m(), tol)?;
    if !report.is_jframe_matrix {
        return Err(JFrameError::NotJFrame {
            failures: report.witness_failures,
        });
    }
    Ok(())
}

/// Exact frame bounds of the synthesized pair of frames, as extreme
/// eigenvalues, together with the a-priori singular-value estimates.
pub fn frame_bounds(cert: &CompletionCertificate, tol: f64) -> Result<JFrameReport, JFrameError> {
    jframe_gate(cert, tol)?;
    let n = cert.n();
    let m = cert.m();
    let a = cert.s.block(0, 0, n, n).hermitian_part().expect("square");
    let d = cert.s.block(n, n, m, m).hermitian_part().expect("square");

    let schur = cert.schur.hermitian_part().expect("square");
    let es = eigendecompose_hermitian(&schur, EigenOrder::Nondecreasing).expect("Hermitian");
    let alpha_minus = es.values[0];
    let beta_minus = es.values[m - 1];

    let gram = contraction_gram(&cert.k);
    let eg = eigendecompose_hermitian(&gram, EigenOrder::Nondecreasing).expect("Hermitian");
    let g_half = eg.map_eigenvalues(|v| v.max(0.0).sqrt());
    let c = g_half.mul(&a.mul(&g_half).expect("shape")).expect("shape");
    let ec = eigendecompose_hermitian(
        &c.hermitian_part().expect("square"),
        EigenOrder::Nondecreasing,
    )
    .expect("Hermitian");
    let alpha_plus = ec.values[0];
    let beta_plus = ec.values[n - 1];

    let ea = eigendecompose_hermitian(&a, EigenOrder::Nonincreasing).expect("Hermitian");
    let ed = eigendecompose_hermitian(&d, EigenOrder::Nondecreasing).expect("Hermitian");
    let sigma1 = spectral_norm(&cert.k);
    let lambda1 = ea.values[0];
    let lambda_n = ea.values[n - 1];
    let mu_m = ed.values[m - 1];

    // eg.values is the spectrum of I - KK* (n values, nondecreasing).
    let apriori = AprioriBounds {
        alpha_minus_lower: 0.0,
        beta_minus_upper: sigma1 * sigma1 * lambda1 + mu_m,
        alpha_plus_lower: (1.0 - sigma1 * sigma1) * lambda_n,
        beta_plus_upper: eg.values[n - 1].max(0.0) * lambda1,
    };

    Ok(JFrameReport {
        is_jframe_matrix: true,
        witness_failures: vec![],
        bounds: Some(FrameBounds {
            alpha_plus,
            beta_plus,
            alpha_minus,
            beta_minus,
            apriori,
        }),
    })
}

fn contraction_gram(k: &ComplexMatrix) -> ComplexMatrix {
    let kk = k.mul(&k.adjoint()).expect("shape");
    ComplexMatrix::identity(k.rows()).sub(&kk).expect("shape")
}

/// Frame bounds computed from the eigenvalue lists of the construction:
/// α₊ = min{(1-ε_i)λ_i, λ_n}, β₊ = max{(1-ε_i)λ_i, λ_{r+1}},
/// α₋ = min{ε_iλ_i + μ_i, μ_{r+1}}, β₋ = max{ε_iλ_i + μ_i, μ_m}
/// (the tail entries appear only when r < n resp. r < m).
pub fn explicit_frame_bounds(
    eigs_a: &HermitianEigenSystem,
    eigs_d: &HermitianEigenSystem,
    epsilons: &[f64],
) -> (f64, f64, f64, f64) {
    let n = eigs_a.dim();
    let m = eigs_d.dim();
    let r = epsilons.len();
    let mut plus: Vec<f64> = epsilons
        .iter()
        .enumerate()
        .map(|(i, &e)| (1.0 - e) * eigs_a.values[i])
        .collect();
    let mut minus: Vec<f64> = epsilons
        .iter()
        .enumerate()
        .map(|(i, &e)| e * eigs_a.values[i] + eigs_d.values[i])
        .collect();
    let mut alpha_plus_candidates = plus.clone();
    if r < n {
        alpha_plus_candidates.push(eigs_a.values[n - 1]);
        plus.push(eigs_a.values[r]);
    }
    let mut alpha_minus_candidates = minus.clone();
    if r < m {
        alpha_minus_candidates.push(eigs_d.values[r]);
        minus.push(eigs_d.values[m - 1]);
    }
    let fold_min = |v: &[f64]| v.iter().cloned().fold(f64::INFINITY, f64::min);
    let fold_max = |v: &[f64]| v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (
        fold_min(&alpha_plus_candidates),
        fold_max(&plus),
        fold_min(&alpha_minus_candidates),
        fold_max(&minus),
    )
}

/// Construction-independent upper estimates for the lower frame bounds:
/// α₊ ≤ min{λ_i + μ_i, λ_n} and α₋ ≤ min{λ_i + μ_i, μ_{r+1}} for every K
/// of the U·E·V* family.
pub fn construction_apriori_estimates(
    eigs_a: &HermitianEigenSystem,
    eigs_d: &HermitianEigenSystem,
    r: usize,
) -> (f64, f64) {
    let n = eigs_a.dim();
    let m = eigs_d.dim();
    let sums = (0..r.min(n)).map(|i| eigs_a.values[i] + eigs_d.values[i]);
    let min_sum = sums.fold(f64::INFINITY, f64::min);
    let alpha_plus_upper = min_sum.min(eigs_a.values[n - 1]);
    let alpha_minus_upper = if r < m {
        min_sum.min(eigs_d.values[r])
    } else {
        min_sum
    };
    (alpha_plus_upper, alpha_minus_upper)
}

/// A finite family of vectors in C^{n+m} with their signatures
/// σ_i = sgn[f_i, f_i].
#[derive(Debug, Clone, PartialEq)]
pub struct JFrameFamily {
    pub vectors: Vec<Vec<Complex64>>,
    pub signatures: Vec<i8>,
    pub gram: IndefiniteGram,
}

impl JFrameFamily {
    /// JSON list of (vector, signature) pairs.
    pub fn to_json(&self) -> String {
        #[derive(serde::Serialize)]
        struct Entry {
            vector: Vec<[f64; 2]>,
            signature: i8,
        }
        let entries: Vec<Entry> = self
            .vectors
            .iter()
            .zip(&self.signatures)
            .map(|(v, &s)| Entry {
                vector: v.iter().map(|z| [z.re, z.im]).collect(),
                signature: s,
            })
            .collect();
        crate::jsonout::render_serialize(&entries)
    }
}

/// Build a tight J-frame (one vector per dimension) whose frame operator
/// is exactly cert.s:
///
/// - negative part: (0, c_j) with c_j the columns of (D + K*AK)^{1/2};
/// - positive part: (u_i, K*u_i) with u_i the columns of
///   (I - KK*)^{-1/2} C^{1/2}.
///
/// Σ σ_i f_i f_i* then telescopes to S₊ + S₋ = S.
pub fn synthesize_jframe(
    cert: &CompletionCertificate,
    tol: f64,
) -> Result<JFrameFamily, JFrameError> {
    jframe_gate(cert, tol)?;
    let n = cert.n();
    let m = cert.m();
    let sigma1 = spectral_norm(&cert.k);
    let gap = 1.0 - sigma1 * sigma1;
    if gap < tolerances::CONTRACTION_GUARD {
        return Err(JFrameError::ContractionSingular { gap });
    }

    let schur = cert.schur.hermitian_part().expect("square");
    let es = eigendecompose_hermitian(&schur, EigenOrder::Nondecreasing).expect("Hermitian");
    let schur_half = es.map_eigenvalues(|v| v.max(0.0).sqrt());

    let a = cert.s.block(0, 0, n, n).hermitian_part().expect("square");
    let gram = contraction_gram(&cert.k);
    let eg = eigendecompose_hermitian(&gram, EigenOrder::Nondecreasing).expect("Hermitian");
    let g_half = eg.map_eigenvalues(|v| v.max(0.0).sqrt());
    let g_inv_half = eg.map_eigenvalues(|v| 1.0 / v.max(f64::MIN_POSITIVE).sqrt());
    let c = g_half.mul(&a.mul(&g_half).expect("shape")).expect("shape");
    let ec = eigendecompose_hermitian(
        &c.hermitian_part().expect("square"),
        EigenOrder::Nondecreasing,
    )
    .expect("Hermitian");
    let c_half = ec.map_eigenvalues(|v| v.max(0.0).sqrt());
    let u_pos = g_inv_half.mul(&c_half).expect("shape");

    let mut vectors = Vec::with_capacity(n + m);
    let mut signatures = Vec::with_capacity(n + m);
    let k_adj = cert.k.adjoint();
    for j in 0..n {
        let u = u_pos.column(j);
        let tail = k_adj.mul_vec(&u).expect("shape");
        let mut v = u;
        v.extend(tail);
        vectors.push(v);
        signatures.push(1);
    }
    for j in 0..m {
        let c_j = schur_half.column(j);
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        v.extend(c_j);
        vectors.push(v);
        signatures.push(-1);
    }

    Ok(JFrameFamily {
        vectors,
        signatures,
        gram: IndefiniteGram {
            n_plus: n,
            n_minus: m,
        },
    })
}

/// The matrix of f ↦ Σ σ_i [f, f_i] f_i, i.e. (Σ σ_i f_i f_i*)·J.
pub fn frame_operator_matrix(family: &JFrameFamily) -> ComplexMatrix {
    let dim = family.gram.dim();
    let mut acc = ComplexMatrix::zeros(dim, dim);
    for (vector, &sig) in family.vectors.iter().zip(&family.signatures) {
        let scale = sig as f64;
        for i in 0..dim {
            for j in 0..dim {
                acc[(i, j)] += vector[i] * vector[j].conj() * scale;
            }
        }
    }
    // Right-multiplying by J negates the trailing n_minus columns.
    for j in family.gram.n_plus..dim {
        for i in 0..dim {
            acc[(i, j)] = -acc[(i, j)];
        }
    }
    acc
}

/// Indefinite sampling reconstruction: Σ σ_i [f, S⁻¹f_i] f_i, which
/// reproduces f when the family's frame operator is S.
pub fn reconstruct(
    family: &JFrameFamily,
    s: &ComplexMatrix,
    f: &[Complex64],
) -> Result<Vec<Complex64>, JFrameError> {
    let dim = family.gram.dim();
    if s.rows() != dim || f.len() != dim {
        return Err(JFrameError::DimensionMismatch {
            context: format!("operator {}x{}, vector {}", s.rows(), s.cols(), f.len()),
        });
    }
    let lu = LuDecomposition::new(s).expect("square");
    let mut acc = vec![Complex64::new(0.0, 0.0); dim];
    for (vector, &sig) in family.vectors.iter().zip(&family.signatures) {
        let dual = lu.solve_vec(vector).map_err(|_| JFrameError::NotJFrame {
            failures: vec![JFrameFailure::SchurNotPositiveDefinite],
        })?;
        let coef = family.gram.ip(f, &dual) * sig as f64;
        for (slot, &v) in acc.iter_mut().zip(vector.iter()) {
            *slot += coef * v;
        }
    }
    Ok(acc)
}

/// ‖J S - (J S)*‖_F: zero exactly when S is symmetric for [·,·].
pub fn indefinite_symmetry_defect(s: &ComplexMatrix, gram: &IndefiniteGram) -> f64 {
    let js = gram.matrix().mul(s).expect("shape");
    js.hermitian_defect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::completion::{build_k, default_epsilons};
    use crate::hermitian::inertia;
    use crate::matrix::vec_norm;

    fn eig_pair(a: &[f64], d: &[f64]) -> (HermitianEigenSystem, HermitianEigenSystem) {
        (
            eigendecompose_hermitian(&ComplexMatrix::diag_real(a), EigenOrder::Nonincreasing)
                .unwrap(),
            eigendecompose_hermitian(&ComplexMatrix::diag_real(d), EigenOrder::Nondecreasing)
                .unwrap(),
        )
    }

    fn default_cert(a: &[f64], d: &[f64], kappa: f64) -> CompletionCertificate {
        let (ea, ed) = eig_pair(a, d);
        let ia = inertia(&ea, 1e-9);
        let id = inertia(&ed, 1e-9);
        let schedule = default_epsilons(&ea, &ed, &ia, &id, kappa, Mode::Definite).unwrap();
        build_k(&ea, &ed, &schedule).unwrap()
    }

    #[test]
    fn gram_reproduces_signature_sum() {
        let gram = IndefiniteGram {
            n_plus: 2,
            n_minus: 1,
        };
        let x = vec![
            Complex64::new(1.0, 1.0),
            Complex64::new(0.0, -2.0),
            Complex64::new(3.0, 0.0),
        ];
        // [x, x] = |x1|² + |x2|² - |x3|² = 2 + 4 - 9 = -3.
        let ip = gram.ip(&x, &x);
        assert!((ip - Complex64::new(-3.0, 0.0)).norm() < 1e-14);
        // Against the explicit Gramian.
        let jx = gram.matrix().mul_vec(&x).unwrap();
        assert!((vec_inner(&jx, &x) - ip).norm() < 1e-14);
    }

    #[test]
    fn recognizes_constructed_jframe_matrix() {
        let cert = default_cert(&[3.0, 1.0], &[-2.0, 5.0], 1.0);
        let report = is_jframe_matrix(&cert.s, 2, 2, 1e-9).unwrap();
        assert!(report.is_jframe_matrix, "{:?}", report.witness_failures);
    }

    #[test]
    fn rejects_negative_schur() {
        let s = ComplexMatrix::diag_real(&[1.0, 1.0, -1.0]);
        let report = is_jframe_matrix(&s, 2, 1, 1e-9).unwrap();
        assert!(!report.is_jframe_matrix);
        assert_eq!(
            report.witness_failures,
            vec![JFrameFailure::SchurNotPositiveDefinite]
        );
    }

    #[test]
    fn one_by_one_example_is_jframe_matrix() {
        // D = [0] is allowed: only D + K*AK must be positive definite.
        let s = ComplexMatrix::from_real_rows(&[&[2.0, -1.0], &[1.0, 0.0]]);
        let report = is_jframe_matrix(&s, 1, 1, 1e-9).unwrap();
        assert!(report.is_jframe_matrix, "{:?}", report.witness_failures);
    }

    #[test]
    fn block_inconsistency_is_an_error() {
        let mut s = ComplexMatrix::from_real_rows(&[&[2.0, -1.0], &[1.0, 0.0]]);
        s[(1, 0)] = Complex64::new(0.3, 0.0);
        assert!(matches!(
            is_jframe_matrix(&s, 1, 1, 1e-9),
            Err(JFrameError::BlockInconsistent { .. })
        ));
    }

    #[test]
    fn existence_criterion() {
        let (ea, ed) = eig_pair(&[3.0, 1.0], &[-2.0, 5.0]);
        let v = jframe_existence(&ea, &ed, 1e-9).unwrap();
        assert!(v.exists);

        // λ + μ = 0 boundary fails.
        let (ea, ed) = eig_pair(&[1.0], &[-1.0]);
        let v = jframe_existence(&ea, &ed, 1e-9).unwrap();
        assert!(!v.exists);
        assert_eq!(v.violated_indices, vec![1]);

        // μ = 0 with positive λ passes (r = 1, p = 1).
        let (ea, ed) = eig_pair(&[2.0], &[0.0]);
        let v = jframe_existence(&ea, &ed, 1e-9).unwrap();
        assert!(v.exists);

        // A not positive definite is a precondition violation.
        let (ea, ed) = eig_pair(&[1.0, -1.0], &[1.0]);
        assert!(matches!(
            jframe_existence(&ea, &ed, 1e-9),
            Err(JFrameError::ANotPositiveDefinite)
        ));
    }

    #[test]
    fn existence_equals_r_form() {
        // The r-p form used here agrees with the full i = 1..r statement.
        for (a, d) in [
            (vec![3.0, 1.0], vec![-2.0, 5.0]),
            (vec![2.0, 1.5], vec![-1.0, 0.0]),
            (vec![1.0], vec![-0.5, 0.0, 2.0]),
            (vec![0.4, 0.2], vec![-0.5, -0.1]),
        ] {
            let (ea, ed) = eig_pair(&a, &d);
            let v = jframe_existence(&ea, &ed, 1e-9).unwrap();
            let n = ea.dim();
            let r = ed.values.iter().filter(|&&x| x <= 1e-9).count();
            let full_form = r <= n && (0..r.min(n)).all(|i| ea.values[i] + ed.values[i] > 1e-9);
            assert_eq!(v.exists, full_form, "A {a:?} D {d:?}");
        }
    }

    #[test]
    fn split_with_zero_k() {
        let cert = default_cert(&[3.0, 1.0], &[1.0, 2.0], 1.0);
        let (s_plus, s_minus) = split_s(&cert);
        assert!(
            s_plus
                .block(0, 0, 2, 2)
                .sub(&cert.s.block(0, 0, 2, 2))
                .unwrap()
                .frobenius_norm()
                == 0.0
        );
        assert!(s_plus.block(2, 2, 2, 2).frobenius_norm() < 1e-15);
        assert!(s_minus.block(0, 0, 2, 2).frobenius_norm() == 0.0);
        assert!(
            s_minus
                .block(2, 2, 2, 2)
                .sub(&cert.schur)
                .unwrap()
                .frobenius_norm()
                < 1e-15
        );
    }

    #[test]
    fn split_one_by_one_example() {
        let (ea, ed) = eig_pair(&[2.0], &[0.0]);
        let schedule = EpsilonSchedule {
            epsilons: vec![0.25],
            kappa: 1.0,
            mode: Mode::Definite,
        };
        let cert = build_k(&ea, &ed, &schedule).unwrap();
        let (s_plus, s_minus) = split_s(&cert);
        let expected_plus = ComplexMatrix::from_real_rows(&[&[2.0, -1.0], &[1.0, -0.5]]);
        let expected_minus = ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[0.0, 0.5]]);
        assert!(s_plus.sub(&expected_plus).unwrap().frobenius_norm() < 1e-14);
        assert!(s_minus.sub(&expected_minus).unwrap().frobenius_norm() < 1e-14);
        // Additivity at machine precision.
        let sum = s_plus.add(&s_minus).unwrap();
        assert!(sum.sub(&cert.s).unwrap().frobenius_norm() < 1e-15);
    }

    #[test]
    fn positive_part_quadratic_form() {
        // [S₊(f, K*f), (f, K*f)] = ⟨(I-KK*)A(I-KK*)f, f⟩.
        let cert = default_cert(&[3.0, 1.0], &[-2.0, 5.0], 1.0);
        let n = 2;
        let (s_plus, _) = split_s(&cert);
        let gram = IndefiniteGram {
            n_plus: 2,
            n_minus: 2,
        };
        let a = cert.s.block(0, 0, n, n);
        let g = contraction_gram(&cert.k);
        let gag = g.mul(&a.mul(&g).unwrap()).unwrap();
        for f in [
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            vec![Complex64::new(0.3, -0.4), Complex64::new(-1.0, 2.0)],
        ] {
            let mut lifted = f.clone();
            lifted.extend(cert.k.adjoint().mul_vec(&f).unwrap());
            let lhs = gram.ip(&s_plus.mul_vec(&lifted).unwrap(), &lifted);
            let rhs = vec_inner(&gag.mul_vec(&f).unwrap(), &f);
            assert!((lhs - rhs).norm() < 1e-12, "lhs {lhs} rhs {rhs}");
        }
    }

    #[test]
    fn frame_bounds_match_explicit_lists() {
        let (ea, ed) = eig_pair(&[3.0, 1.0], &[-2.0, 5.0]);
        let cert = default_cert(&[3.0, 1.0], &[-2.0, 5.0], 1.0);
        let report = frame_bounds(&cert, 1e-9).unwrap();
        let bounds = report.bounds.unwrap();
        // ε1 = 49/72: α₊ = min{23/24, 1}, β₊ = max{23/24, 1}, α₋ = 1/24, β₋ = 5.
        assert!((bounds.alpha_plus - 23.0 / 24.0).abs() < 1e-12);
        assert!((bounds.beta_plus - 1.0).abs() < 1e-12);
        assert!((bounds.alpha_minus - 1.0 / 24.0).abs() < 1e-12);
        assert!((bounds.beta_minus - 5.0).abs() < 1e-12);
        let (ap, bp, am, bm) = explicit_frame_bounds(&ea, &ed, &cert.schedule.epsilons);
        assert!((bounds.alpha_plus - ap).abs() < 1e-10);
        assert!((bounds.beta_plus - bp).abs() < 1e-10);
        assert!((bounds.alpha_minus - am).abs() < 1e-10);
        assert!((bounds.beta_minus - bm).abs() < 1e-10);
        // A-priori estimates hold.
        assert!(bounds.beta_minus <= bounds.apriori.beta_minus_upper + 1e-9);
        assert!(bounds.apriori.alpha_plus_lower <= bounds.alpha_plus + 1e-9);
        assert!(bounds.beta_plus <= bounds.apriori.beta_plus_upper + 1e-9);
        assert!(bounds.alpha_minus > bounds.apriori.alpha_minus_lower);
        // Construction-independent estimates.
        let (apu, amu) = construction_apriori_estimates(&ea, &ed, 1);
        assert!(bounds.alpha_plus <= apu + 1e-9);
        assert!(bounds.alpha_minus <= amu + 1e-9);
    }

    #[test]
    fn frame_bounds_zero_k() {
        let (ea, ed) = eig_pair(&[3.0, 1.0], &[1.0, 2.0]);
        let cert = default_cert(&[3.0, 1.0], &[1.0, 2.0], 1.0);
        let report = frame_bounds(&cert, 1e-9).unwrap();
        let bounds = report.bounds.unwrap();
        assert!((bounds.alpha_plus - 1.0).abs() < 1e-12);
        assert!((bounds.beta_plus - 3.0).abs() < 1e-12);
        assert!((bounds.alpha_minus - 1.0).abs() < 1e-12);
        assert!((bounds.beta_minus - 2.0).abs() < 1e-12);
        let (ap, bp, am, bm) = explicit_frame_bounds(&ea, &ed, &[]);
        assert_eq!((ap, bp, am, bm), (1.0, 3.0, 1.0, 2.0));
    }

    #[test]
    fn frame_bounds_rejects_non_jframe() {
        // Semidefinite-feasible instance with a singular Schur complement.
        let (ea, ed) = eig_pair(&[1.0], &[-1.0]);
        let schedule = EpsilonSchedule {
            epsilons: vec![1.0],
            kappa: 1.0,
            mode: Mode::Semidefinite,
        };
        let cert = build_k(&ea, &ed, &schedule).unwrap();
        assert!(matches!(
            frame_bounds(&cert, 1e-9),
            Err(JFrameError::NotJFrame { .. })
        ));
    }

    #[test]
    fn synthesis_reproduces_operator() {
        let cert = default_cert(&[3.0, 1.0], &[-2.0, 5.0], 1.0);
        let family = synthesize_jframe(&cert, 1e-9).unwrap();
        assert_eq!(family.vectors.len(), 4);
        assert_eq!(family.signatures, vec![1, 1, -1, -1]);
        let op = frame_operator_matrix(&family);
        let residual = op.sub(&cert.s).unwrap().frobenius_norm();
        assert!(residual < 1e-10, "operator residual {residual}");
        // Signatures match the sign of [f, f].
        for (v, &sig) in family.vectors.iter().zip(&family.signatures) {
            let self_ip = family.gram.ip(v, v).re;
            assert!(self_ip * sig as f64 > 0.0, "neutral or mismatched vector");
        }
    }

    #[test]
    fn synthesis_one_by_one_example() {
        let (ea, ed) = eig_pair(&[2.0], &[0.0]);
        let schedule = EpsilonSchedule {
            epsilons: vec![0.25],
            kappa: 1.0,
            mode: Mode::Definite,
        };
        let cert = build_k(&ea, &ed, &schedule).unwrap();
        let family = synthesize_jframe(&cert, 1e-9).unwrap();
        let op = frame_operator_matrix(&family);
        let expected = ComplexMatrix::from_real_rows(&[&[2.0, -1.0], &[1.0, 0.0]]);
        assert!(op.sub(&expected).unwrap().frobenius_norm() < 1e-10);
    }

    #[test]
    fn synthesis_zero_k_reduces_to_square_roots() {
        let cert = default_cert(&[3.0, 1.0], &[1.0, 2.0], 1.0);
        let family = synthesize_jframe(&cert, 1e-9).unwrap();
        // Positive vectors live in C^n × {0}, negative in {0} × C^m.
        for (v, &sig) in family.vectors.iter().zip(&family.signatures) {
            if sig > 0 {
                assert!(vec_norm(&v[2..]) < 1e-14);
            } else {
                assert!(vec_norm(&v[..2]) < 1e-14);
            }
        }
        let op = frame_operator_matrix(&family);
        assert!(op.sub(&cert.s).unwrap().frobenius_norm() < 1e-10);
    }

    #[test]
    fn reconstruction_formula() {
        let cert = default_cert(&[3.0, 1.0], &[-2.0, 5.0], 1.0);
        let family = synthesize_jframe(&cert, 1e-9).unwrap();
        let f = vec![
            Complex64::new(0.7, -0.1),
            Complex64::new(-0.2, 0.9),
            Complex64::new(1.3, 0.4),
            Complex64::new(0.0, -1.1),
        ];
        let rebuilt = reconstruct(&family, &cert.s, &f).unwrap();
        let diff: Vec<Complex64> = rebuilt.iter().zip(&f).map(|(&x, &y)| x - y).collect();
        assert!(
            vec_norm(&diff) <= 1e-8 * vec_norm(&f),
            "residual {}",
            vec_norm(&diff)
        );
    }

    #[test]
    fn indefinite_symmetry_of_constructed_s() {
        let cert = default_cert(&[3.0, 1.0], &[-2.0, 5.0], 1.0);
        let gram = IndefiniteGram {
            n_plus: 2,
            n_minus: 2,
        };
        assert!(indefinite_symmetry_defect(&cert.s, &gram) < 1e-10);
    }

    #[test]
    fn synthesized_family_spans_maximal_subspaces() {
        let cert = default_cert(&[3.0, 1.0, 0.8], &[-2.0, 5.0], 1.0);
        let family = synthesize_jframe(&cert, 1e-9).unwrap();
        let n = 3;
        let m = 2;
        let positives: Vec<&Vec<Complex64>> = family
            .vectors
            .iter()
            .zip(&family.signatures)
            .filter(|(_, &s)| s > 0)
            .map(|(v, _)| v)
            .collect();
        let negatives: Vec<&Vec<Complex64>> = family
            .vectors
            .iter()
            .zip(&family.signatures)
            .filter(|(_, &s)| s < 0)
            .map(|(v, _)| v)
            .collect();
        // Span dimensions n and m (maximality for inertia (n, m)).
        let rank_of = |cols: &[&Vec<Complex64>]| {
            let mat = ComplexMatrix::from_fn(n + m, cols.len(), |i, j| cols[j][i]);
            let sigmas = crate::hermitian::all_singular_values(&mat);
            sigmas.iter().filter(|&&s| s > 1e-10 * sigmas[0]).count()
        };
        assert_eq!(rank_of(&positives), n);
        assert_eq!(rank_of(&negatives), m);
        // [·,·] is positive definite on the positive span: the compressed
        // Gramian F₊* J F₊ has positive eigenvalues (negative analog).
        let gram = family.gram;
        let compressed_sign = |cols: &[&Vec<Complex64>], sign: f64| {
            let q = cols.len();
            let g = ComplexMatrix::from_fn(q, q, |i, j| gram.ip(cols[j], cols[i]));
            let eigs =
                eigendecompose_hermitian(&g.hermitian_part().unwrap(), EigenOrder::Nondecreasing)
                    .unwrap();
            eigs.values.iter().all(|&v| v * sign > 0.0)
        };
        assert!(compressed_sign(&positives, 1.0));
        assert!(compressed_sign(&negatives, -1.0));
    }

    #[test]
    fn real_spectrum_schedule_stays_in_case_b() {
        let (ea, ed) = eig_pair(&[3.0, 1.0], &[-2.0, 0.0, 5.0]);
        let id = inertia(&ed, 1e-9);
        let schedule = real_spectrum_epsilons(&ea, &ed, &id).unwrap();
        assert_eq!(schedule.epsilons.len(), 2);
        // Index 1: midpoint of (2/3, min(25/36, 1)) = 49/72.
        assert!((schedule.epsilons[0] - 49.0 / 72.0).abs() < 1e-14);
        // Index 2 has μ = 0: midpoint of (0, 1/4) = 1/8.
        assert!((schedule.epsilons[1] - 0.125).abs() < 1e-14);
        let cert = build_k(&ea, &ed, &schedule).unwrap();
        let report = is_jframe_matrix(&cert.s, 2, 3, 1e-9).unwrap();
        assert!(report.is_jframe_matrix);
    }
}
