//! Independent numeric oracles.
//!
//! `numeric_spectrum` computes eigenvalues of a general (non-Hermitian)
//! complex matrix by Householder reduction to Hessenberg form followed by
//! an implicit single-shift QR iteration with Wilkinson shifts, deflation,
//! and an exceptional shift every tenth stalled step. It shares nothing
//! with the closed-form prediction path (this module never touches the
//! spectral-analysis code; `no_dependency_on_prediction_path` below pins
//! that), so agreement between the two is evidence, not circularity.
//!
//! The rest of the module: greedy multiset pairing of predicted vs numeric
//! spectra, numeric nullity probes for Jordan structure (singular values
//! below 1e-8·σ_max count as zero — Jordan detection is
//! tolerance-sensitive), and residual checks for the classical block-matrix
//! identities (triangular factorization of a 2x2 block matrix, the
//! determinant product formula, eigenvalue sum bounds for Hermitian pairs,
//! singular-value product bounds, and the compression bound for K*AK).

use num_complex::Complex64;

use crate::hermitian::{
    all_singular_values, eigendecompose_hermitian, singular_values, spectral_norm, EigenOrder,
};
use crate::lu::LuDecomposition;
use crate::matrix::ComplexMatrix;
use crate::tolerances;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VerifyError {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix dimension {dim} exceeds the supported desk scale (200)")]
    TooLarge { dim: usize },
    #[error("QR iteration did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("spectra have different cardinalities: {left} vs {right}")]
    CardinalityMismatch { left: usize, right: usize },
    #[error("blocks have inconsistent dimensions: {context}")]
    DimensionMismatch { context: String },
    #[error("A is singular; the factorization identities need an invertible A")]
    SingularA,
}

const MAX_DIM: usize = 200;

/// Eigenvalues of a general complex matrix, sorted by (re, im).
pub fn numeric_spectrum(m: &ComplexMatrix) -> Result<Vec<Complex64>, VerifyError> {
    if !m.is_square() {
        return Err(VerifyError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n > MAX_DIM {
        return Err(VerifyError::TooLarge { dim: n });
    }
    if n == 1 {
        return Ok(vec![m[(0, 0)]]);
    }

    let mut h = m.clone();
    hessenberg_in_place(&mut h);

    let mut eigenvalues = Vec::with_capacity(n);
    let max_iterations = 100 * n;
    let mut iterations = 0usize;
    let mut hi = n - 1;
    let mut stalled = 0usize;
    let hnorm = h.frobenius_norm().max(f64::MIN_POSITIVE);

    loop {
        // Deflate: find the active window [lo, hi].
        let mut lo = 0;
        for i in (1..=hi).rev() {
            let sub = h[(i, i - 1)].norm();
            let mut thresh = f64::EPSILON * (h[(i - 1, i - 1)].norm() + h[(i, i)].norm());
            if thresh == 0.0 {
                thresh = f64::EPSILON * hnorm;
            }
            if sub <= thresh {
                h[(i, i - 1)] = Complex64::new(0.0, 0.0);
                lo = i;
                break;
            }
        }

        if lo == hi {
            eigenvalues.push(h[(hi, hi)]);
            if hi == 0 {
                break;
            }
            hi -= 1;
            stalled = 0;
            continue;
        }
        if lo + 1 == hi {
            let (e1, e2) = eig2(h[(lo, lo)], h[(lo, hi)], h[(hi, lo)], h[(hi, hi)]);
            eigenvalues.push(e1);
            eigenvalues.push(e2);
            if lo == 0 {
                break;
            }
            hi = lo - 1;
            stalled = 0;
            continue;
        }

        if iterations >= max_iterations {
            return Err(VerifyError::NoConvergence { iterations });
        }
        iterations += 1;
        stalled += 1;

        let shift = if stalled.is_multiple_of(10) {
            // Exceptional shift to break symmetry-induced stalls.
            h[(hi, hi)] + Complex64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(&h, hi)
        };
        qr_step(&mut h, lo, hi, shift);
    }

    eigenvalues.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .expect("finite")
            .then(a.im.partial_cmp(&b.im).expect("finite"))
    });
    Ok(eigenvalues)
}

/// Reduce to upper Hessenberg form by Householder reflections.
fn hessenberg_in_place(h: &mut ComplexMatrix) {
    let n = h.rows();
    for k in 0..n.saturating_sub(2) {
        // Reflector annihilating h[k+2.., k].
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let norm_x = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let phase = if v[0].norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            v[0] / v[0].norm()
        };
        v[0] += phase * norm_x;
        let norm_v = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm_v == 0.0 {
            continue;
        }
        for z in &mut v {
            *z /= norm_v;
        }

        // Left: rows k+1..n over columns k..n.
        for col in k..n {
            let mut w = Complex64::new(0.0, 0.0);
            for (off, vi) in v.iter().enumerate() {
                w += vi.conj() * h[(k + 1 + off, col)];
            }
            let w2 = w * 2.0;
            for (off, vi) in v.iter().enumerate() {
                let delta = *vi * w2;
                h[(k + 1 + off, col)] -= delta;
            }
        }
        // Right: columns k+1..n over all rows.
        for row in 0..n {
            let mut w = Complex64::new(0.0, 0.0);
            for (off, vi) in v.iter().enumerate() {
                w += h[(row, k + 1 + off)] * *vi;
            }
            let w2 = w * 2.0;
            for (off, vi) in v.iter().enumerate() {
                let delta = w2 * vi.conj();
                h[(row, k + 1 + off)] -= delta;
            }
        }
        for i in k + 2..n {
            h[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
}

/// Eigenvalues of [[a, b], [c, d]].
fn eig2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let mid = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (mid * mid - det).sqrt();
    (mid + disc, mid - disc)
}

/// Eigenvalue of the trailing 2x2 block closest to h[hi][hi].
fn wilkinson_shift(h: &ComplexMatrix, hi: usize) -> Complex64 {
    let a = h[(hi - 1, hi - 1)];
    let b = h[(hi - 1, hi)];
    let c = h[(hi, hi - 1)];
    let d = h[(hi, hi)];
    let (e1, e2) = eig2(a, b, c, d);
    if (e1 - d).norm() <= (e2 - d).norm() {
        e1
    } else {
        e2
    }
}

/// Unitary plane rotation [[c, s], [-s̄, c]] with real c ≥ 0 sending
/// (x, y) to (r, 0).
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    let ya = y.norm();
    if ya == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    let xa = x.norm();
    let denom = (xa * xa + ya * ya).sqrt();
    if xa == 0.0 {
        return (0.0, y.conj() / ya);
    }
    let c = xa / denom;
    let s = (x / xa) * y.conj() / denom;
    (c, s)
}

/// One implicit single-shift QR step on the window [lo, hi].
fn qr_step(h: &mut ComplexMatrix, lo: usize, hi: usize, shift: Complex64) {
    let mut x = h[(lo, lo)] - shift;
    let mut y = h[(lo + 1, lo)];
    for i in lo..hi {
        let (c, s) = givens(x, y);
        let col_start = if i > lo { i - 1 } else { lo };
        for col in col_start..=hi {
            let a = h[(i, col)];
            let b = h[(i + 1, col)];
            h[(i, col)] = a * c + b * s;
            h[(i + 1, col)] = -s.conj() * a + b * c;
        }
        let row_end = (i + 2).min(hi);
        for row in lo..=row_end {
            let a = h[(row, i)];
            let b = h[(row, i + 1)];
            h[(row, i)] = a * c + b * s.conj();
            h[(row, i + 1)] = -s * a + b * c;
        }
        if i + 1 < hi {
            x = h[(i + 1, i)];
            y = h[(i + 2, i)];
        }
    }
}

/// Largest residual σ_min(M - ηI) over the given eigenvalues.
pub fn max_eigenvalue_residual(m: &ComplexMatrix, etas: &[Complex64]) -> f64 {
    let n = m.rows();
    let mut worst: f64 = 0.0;
    for &eta in etas {
        let mut shifted = m.clone();
        for i in 0..n {
            shifted[(i, i)] -= eta;
        }
        let sigmas = all_singular_values(&shifted);
        worst = worst.max(sigmas.last().copied().unwrap_or(0.0));
    }
    worst
}

/// Result of pairing a predicted spectrum against a numeric one.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumComparison {
    /// (predicted, numeric, distance), in predicted order.
    pub pairs: Vec<(Complex64, Complex64, f64)>,
    pub max_distance: f64,
    pub matched: bool,
}

/// Greedy nearest-neighbor bijection between two equal-cardinality
/// multisets of complex numbers: globally closest pairs are matched first.
pub fn compare_spectra(
    predicted: &[Complex64],
    numeric: &[Complex64],
    tol: f64,
) -> Result<SpectrumComparison, VerifyError> {
    if predicted.len() != numeric.len() {
        return Err(VerifyError::CardinalityMismatch {
            left: predicted.len(),
            right: numeric.len(),
        });
    }
    let n = predicted.len();
    let mut candidates: Vec<(f64, usize, usize)> = Vec::with_capacity(n * n);
    for (i, &p) in predicted.iter().enumerate() {
        for (j, &q) in numeric.iter().enumerate() {
            candidates.push(((p - q).norm(), i, j));
        }
    }
    candidates.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .expect("finite")
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });
    let mut used_left = vec![false; n];
    let mut used_right = vec![false; n];
    let mut assignment = vec![usize::MAX; n];
    let mut assigned = 0;
    for (_, i, j) in candidates {
        if used_left[i] || used_right[j] {
            continue;
        }
        used_left[i] = true;
        used_right[j] = true;
        assignment[i] = j;
        assigned += 1;
        if assigned == n {
            break;
        }
    }
    let pairs: Vec<(Complex64, Complex64, f64)> = assignment
        .iter()
        .enumerate()
        .map(|(i, &j)| (predicted[i], numeric[j], (predicted[i] - numeric[j]).norm()))
        .collect();
    let max_distance = pairs.iter().map(|p| p.2).fold(0.0, f64::max);
    Ok(SpectrumComparison {
        pairs,
        max_distance,
        matched: max_distance <= tol,
    })
}

fn nullity(m: &ComplexMatrix, tol: f64) -> usize {
    let sigmas = all_singular_values(m);
    let sigma_max = sigmas.first().copied().unwrap_or(0.0);
    if sigma_max == 0.0 {
        return sigmas.len();
    }
    sigmas.iter().filter(|&&s| s < tol * sigma_max).count()
}

/// Numeric nullities of S - ηI and (S - ηI)²; a Jordan chain of length 2
/// at an otherwise simple η shows up as (1, 2).
pub fn jordan_rank_probe(s: &ComplexMatrix, eta: Complex64, tol: f64) -> (usize, usize) {
    let n = s.rows();
    let mut shifted = s.clone();
    for i in 0..n {
        shifted[(i, i)] -= eta;
    }
    let squared = shifted.mul(&shifted).expect("square");
    (nullity(&shifted, tol), nullity(&squared, tol))
}

/// Per-identity tolerances for [`check_identities`].
#[derive(Debug, Clone, Copy)]
pub struct IdentityTolerances {
    /// Factorization residual, relative to max(1, ‖S‖_F).
    pub factorization: f64,
    /// Determinant product formula, relative to |det S|.
    pub determinant: f64,
    /// Additive slack for the eigenvalue/singular-value inequalities.
    pub slack: f64,
}

impl Default for IdentityTolerances {
    fn default() -> Self {
        Self {
            factorization: 1e-10,
            determinant: 1e-8,
            slack: 1e-9,
        }
    }
}

/// Residual report for the classical identities on S = [[A, B], [C, D]]
/// and the compression data K.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct IdentityReport {
    pub factorization_residual: f64,
    pub factorization_ok: bool,
    pub determinant_relative_residual: f64,
    pub determinant_ok: bool,
    /// max over valid (i, j) of λ_j(D + K*AK) - bound; `None` when D or A
    /// is not Hermitian (the inequality needs Hermitian summands).
    pub weyl_max_violation: Option<f64>,
    pub weyl_ok: bool,
    /// max over valid (i, j) of σ_{i+j-1}((AK)K*) - σ_i(AK)σ_j(K).
    pub singular_product_max_violation: Option<f64>,
    pub singular_product_ok: bool,
    /// max over valid j of λ_j(K*AK) - ‖K‖²λ_j(A).
    pub compression_max_violation: Option<f64>,
    pub compression_ok: bool,
}

impl IdentityReport {
    pub fn all_ok(&self) -> bool {
        self.factorization_ok
            && self.determinant_ok
            && self.weyl_ok
            && self.singular_product_ok
            && self.compression_ok
    }
}

/// Check the block factorization S = L·diag(A, S_/A)·R (L, R unit
/// triangular), the determinant formula det S = det A · det S_/A, and —
/// when A and D are Hermitian — the eigenvalue sum bounds on
/// (D, K*AK), the singular-value product bounds on (AK, K), and the
/// compression bound λ_j(K*AK) ≤ ‖K‖²λ_j(A). A must be invertible.
pub fn check_identities(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    d: &ComplexMatrix,
    k: &ComplexMatrix,
    tol: IdentityTolerances,
) -> Result<IdentityReport, VerifyError> {
    let n = a.rows();
    let m = d.rows();
    if !a.is_square()
        || !d.is_square()
        || b.rows() != n
        || b.cols() != m
        || c.rows() != m
        || c.cols() != n
        || k.rows() != n
        || k.cols() != m
    {
        return Err(VerifyError::DimensionMismatch {
            context: format!(
                "A {}x{}, B {}x{}, C {}x{}, D {}x{}, K {}x{}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols(),
                c.rows(),
                c.cols(),
                d.rows(),
                d.cols(),
                k.rows(),
                k.cols()
            ),
        });
    }
    let lu = LuDecomposition::new(a).expect("square");
    if lu.is_singular() || lu.pivot_ratio() < 1e-14 {
        return Err(VerifyError::SingularA);
    }

    let s = ComplexMatrix::from_blocks(a, b, c, d).expect("shape");
    let a_inv_b = lu.solve_matrix(b).expect("shape");
    let c_a_inv = lu.solve_matrix(&c.adjoint()).expect("shape").adjoint();
    let schur = d.sub(&c.mul(&a_inv_b).expect("shape")).expect("shape");

    // L·diag(A, S_/A)·R with L = [[I, 0], [CA^{-1}, I]], R = [[I, A^{-1}B], [0, I]].
    let zeros_nm = ComplexMatrix::zeros(n, m);
    let zeros_mn = ComplexMatrix::zeros(m, n);
    let left = ComplexMatrix::from_blocks(
        &ComplexMatrix::identity(n),
        &zeros_nm,
        &c_a_inv,
        &ComplexMatrix::identity(m),
    )
    .expect("shape");
    let middle = ComplexMatrix::from_blocks(a, &zeros_nm, &zeros_mn, &schur).expect("shape");
    let right = ComplexMatrix::from_blocks(
        &ComplexMatrix::identity(n),
        &a_inv_b,
        &zeros_mn,
        &ComplexMatrix::identity(m),
    )
    .expect("shape");
    let product = left
        .mul(&middle)
        .expect("shape")
        .mul(&right)
        .expect("shape");
    let factorization_residual =
        product.sub(&s).expect("shape").frobenius_norm() / s.frobenius_norm().max(1.0);

    let det_s = crate::lu::determinant(&s).expect("square");
    let det_a = lu.determinant();
    let det_schur = crate::lu::determinant(&schur).expect("square");
    let determinant_relative_residual =
        (det_s - det_a * det_schur).norm() / det_s.norm().max(f64::MIN_POSITIVE);

    let hermitian_inputs =
        a.is_hermitian(tolerances::HERMITIAN_TOL) && d.is_hermitian(tolerances::HERMITIAN_TOL);

    let mut weyl_max_violation = None;
    let mut compression_max_violation = None;
    if hermitian_inputs {
        let kak = k.adjoint().mul(&a.mul(k).expect("shape")).expect("shape");
        weyl_max_violation = Some(weyl_violation(d, &kak));
        compression_max_violation = Some(compression_violation(a, k, &kak));
    }

    let ak = a.mul(k).expect("shape");
    let singular_product_max_violation = Some(singular_product_violation(&ak, k));

    Ok(IdentityReport {
        factorization_residual,
        factorization_ok: factorization_residual <= tol.factorization,
        determinant_relative_residual,
        determinant_ok: determinant_relative_residual <= tol.determinant,
        weyl_max_violation,
        weyl_ok: weyl_max_violation.is_none_or(|v| v <= tol.slack),
        singular_product_max_violation,
        singular_product_ok: singular_product_max_violation.is_none_or(|v| v <= tol.slack),
        compression_max_violation,
        compression_ok: compression_max_violation.is_none_or(|v| v <= tol.slack),
    })
}

/// Largest violation of the two-sided eigenvalue sum bounds for the
/// Hermitian pair (x, y): λ_j(x+y) ≤ λ_i(x) + λ_{j-i+1}(y) for i ≤ j and
/// λ_j(x+y) ≥ λ_i(x) + λ_{j-i+n}(y) for i ≥ j, over all valid pairs.
pub fn weyl_violation(x: &ComplexMatrix, y: &ComplexMatrix) -> f64 {
    let n = x.rows();
    let ex = eigendecompose_hermitian(x, EigenOrder::Nonincreasing).expect("Hermitian");
    let ey = eigendecompose_hermitian(y, EigenOrder::Nonincreasing).expect("Hermitian");
    let sum = x.add(y).expect("shape");
    let es = eigendecompose_hermitian(&sum, EigenOrder::Nonincreasing).expect("Hermitian");
    let mut worst = f64::NEG_INFINITY;
    for j in 0..n {
        for i in 0..=j {
            // upper: λ_j(x+y) - λ_i(x) - λ_{j-i}(y) ≤ 0 (0-based shift).
            worst = worst.max(es.values[j] - ex.values[i] - ey.values[j - i]);
        }
        for i in j..n {
            // lower: λ_i(x) + λ_{j-i+n-1}(y) - λ_j(x+y) ≤ 0.
            worst = worst.max(ex.values[i] + ey.values[j + n - 1 - i] - es.values[j]);
        }
    }
    worst
}

/// Largest violation of σ_{i+j-1}(xy*) ≤ σ_i(x)σ_j(y) over valid indices.
pub fn singular_product_violation(x: &ComplexMatrix, y: &ComplexMatrix) -> f64 {
    let product = x.mul(&y.adjoint()).expect("shape");
    let sx = all_singular_values(x);
    let sy = all_singular_values(y);
    let sp = all_singular_values(&product);
    let rel = |s: &[f64]| -> usize {
        let top = s.first().copied().unwrap_or(0.0);
        s.iter().filter(|&&v| v > 1e-10 * top.max(1e-300)).count()
    };
    let (rx, ry, rp) = (rel(&sx), rel(&sy), rel(&sp));
    let mut worst = f64::NEG_INFINITY;
    for i in 1..=rx {
        for j in 1..=ry {
            if i + j - 1 > rp {
                continue;
            }
            worst = worst.max(sp[i + j - 2] - sx[i - 1] * sy[j - 1]);
        }
    }
    if worst == f64::NEG_INFINITY {
        0.0
    } else {
        worst
    }
}

/// Largest violation of λ_j(K*AK) ≤ ‖K‖²λ_j(A) for
/// j ≤ min{k, m, rank(K*AK)}, where k counts positive eigenvalues of A.
pub fn compression_violation(a: &ComplexMatrix, k: &ComplexMatrix, kak: &ComplexMatrix) -> f64 {
    let ea = eigendecompose_hermitian(a, EigenOrder::Nonincreasing).expect("Hermitian");
    let ztol = ea.default_zero_tol();
    let positives = ea.values.iter().filter(|&&v| v > ztol).count();
    let ew = eigendecompose_hermitian(kak, EigenOrder::Nonincreasing).expect("Hermitian");
    let norm_k_sq = spectral_norm(k).powi(2);
    let rank = {
        let profile = singular_values(kak, 1e-10 * spectral_norm(kak).max(1e-300));
        profile.rank
    };
    let limit = positives.min(k.cols()).min(rank);
    let mut worst = f64::NEG_INFINITY;
    for j in 0..limit {
        worst = worst.max(ew.values[j] - norm_k_sq * ea.values[j]);
    }
    if worst == f64::NEG_INFINITY {
        0.0
    } else {
        worst
    }
}
