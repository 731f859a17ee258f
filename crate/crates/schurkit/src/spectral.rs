//! Closed-form spectrum of the constructed block matrix.
//!
//! Conjugating S by W = diag(U, V) decouples it into 2×2 blocks
//! [[λ_i, -λ_i√ε_i], [λ_i√ε_i, μ_i]], one per construction index, plus a
//! diagonal remainder. Each block contributes the pair
//!
//! ```text
//!     η_i± = (λ_i + μ_i)/2 ± λ_i √(α_i - ε_i),
//!     α_i  = (λ_i - μ_i)² / (4 λ_i²),
//! ```
//!
//! and the remainder contributes the inherited eigenvalues λ_j and μ_j.
//! The position of ε_i relative to -μ_i/λ_i and α_i classifies the pair:
//!
//! - a) 0 < ε_i < -μ_i/λ_i: real split, λ_i > η⁺ > 0 > η⁻ > μ_i;
//! - b) -μ_i/λ_i ≤ ε_i < α_i: real split inside [min{λ_i+μ_i,0}, max{λ_i+μ_i,0}];
//! - c) α_i < ε_i: a non-real conjugate pair;
//! - d) ε_i = α_i: a double eigenvalue (λ_i+μ_i)/2 carrying a Jordan chain
//!   of length 2 (the matrix is not diagonalizable);
//! - e) (definite mode, i > r-p, ε_i = 0): η⁺ = λ_i, η⁻ = μ_i = 0.
//!
//! ε exactly at -μ_i/λ_i counts as case b; ε within a small relative
//! tolerance of α_i is reported as case d, because the eigenvalue formulas
//! are continuous there but the Jordan structure is not. Sweeping ε over
//! its admissible range is a root-locus analysis; `root_locus` tabulates
//! the trajectory with the case boundaries annotated.

use num_complex::Complex64;

use crate::completion::CompletionCertificate;
use crate::hermitian::{HermitianEigenSystem, InertiaCounts};
use crate::jsonout;
use crate::matrix::ComplexMatrix;
use crate::tolerances;
use crate::Mode;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectralError {
    #[error("lambda[{index}] = {value} must be positive for this index")]
    NonpositiveLambda { index: usize, value: f64 },
    #[error("certificate does not match the supplied eigensystems: {context}")]
    CertificateMismatch { context: String },
    #[error("index {index} is degenerate (epsilon = alpha); eigenvectors do not split")]
    JordanDegenerate { index: usize },
    #[error("index {index} is not degenerate (epsilon != alpha)")]
    NotDegenerate { index: usize },
    #[error("grid out of the admissible epsilon range: {context}")]
    GridOutOfRange { context: String },
    #[error("index {index} out of range 1..={scope}")]
    IndexOutOfRange { index: usize, scope: usize },
}

/// α_i = (λ_i - μ_i)²/(4λ_i²) for the leading `scope` index pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaProfile {
    pub alphas: Vec<f64>,
}

pub fn compute_alphas(
    eigs_a: &HermitianEigenSystem,
    eigs_d: &HermitianEigenSystem,
    scope: usize,
) -> Result<AlphaProfile, SpectralError> {
    let mut alphas = Vec::with_capacity(scope);
    for i in 0..scope {
        let lam = eigs_a.values[i];
        if lam <= 0.0 {
            return Err(SpectralError::NonpositiveLambda {
                index: i + 1,
                value: lam,
            });
        }
        let mu = eigs_d.values[i];
        alphas.push(alpha_of(lam, mu));
    }
    Ok(AlphaProfile { alphas })
}

pub(crate) fn alpha_of(lam: f64, mu: f64) -> f64 {
    (lam - mu).powi(2) / (4.0 * lam * lam)
}

/// Which part of the construction produced a predicted eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenOrigin {
    InheritedA,
    InheritedD,
    EtaPlus,
    EtaMinus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseLabel {
    A,
    B,
    C,
    D,
    E,
    Inherited,
}

impl std::fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CaseLabel::A => "a",
            CaseLabel::B => "b",
            CaseLabel::C => "c",
            CaseLabel::D => "d",
            CaseLabel::E => "e",
            CaseLabel::Inherited => "inherited",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredictedEigen {
    pub value: Complex64,
    pub origin: EigenOrigin,
    pub case_label: CaseLabel,
    /// 1-based source index: the construction index for η pairs, the
    /// position within λ resp. μ for inherited values.
    pub index: Option<usize>,
}

/// A Jordan chain of length 2: (S - ηI)·first = second ≠ 0 and
/// (S - ηI)·second = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanChainPair {
    pub eigenvalue: f64,
    pub first: Vec<Complex64>,
    pub second: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumPrediction {
    pub eigens: Vec<PredictedEigen>,
    pub diagonalizable: bool,
    pub jordan_chains: Vec<JordanChainPair>,
}

impl SpectrumPrediction {
    /// The predicted eigenvalue multiset.
    pub fn values(&self) -> Vec<Complex64> {
        self.eigens.iter().map(|e| e.value).collect()
    }
}

/// η_i± for one index; η⁺ is the upper-half-plane member when non-real.
pub(crate) fn eta_pair(lam: f64, mu: f64, eps: f64) -> (Complex64, Complex64) {
    let half = 0.5 * (lam + mu);
    let disc = alpha_of(lam, mu) - eps;
    if disc >= 0.0 {
        let shift = lam * disc.sqrt();
        (
            Complex64::new(half + shift, 0.0),
            Complex64::new(half - shift, 0.0),
        )
    } else {
        let shift = lam * (-disc).sqrt();
        (Complex64::new(half, shift), Complex64::new(half, -shift))
    }
}

fn degenerate(eps: f64, alpha: f64) -> bool {
    (eps - alpha).abs() <= tolerances::DEGENERACY_TOL * alpha.max(1.0)
}

/// Classify one construction index. `beyond_rp` marks indices with μ_i = 0
/// (they never fall into case a because -μ_i/λ_i = 0 there).
fn classify(eps: f64, lam: f64, mu: f64, mode: Mode, beyond_rp: bool) -> CaseLabel {
    if beyond_rp && mode == Mode::Definite && eps == 0.0 {
        return CaseLabel::E;
    }
    let alpha = alpha_of(lam, mu);
    if degenerate(eps, alpha) {
        return CaseLabel::D;
    }
    let lo = -mu / lam;
    if eps < lo {
        CaseLabel::A
    } else if eps < alpha {
        CaseLabel::B
    } else {
        CaseLabel::C
    }
}

fn check_certificate(
    cert: &CompletionCertificate,
    eigs_a: &HermitianEigenSystem,
    eigs_d: &HermitianEigenSystem,
    inertia_d: &InertiaCounts,
    mode: Mode,
) -> Result<(), SpectralError> {
    let mismatch = |context: String| SpectralError::CertificateMismatch { context };
    if cert.schedule.mode != mode {
        return Err(mismatch(format!(
            "certificate mode {} differs from requested {mode}",
            cert.schedule.mode
        )));
    }
    if cert.n() != eigs_a.dim() || cert.m() != eigs_d.dim() {
        return Err(mismatch(format!(
            "certificate is {}x{}, eigensystems are {}x{}",
            cert.n(),
            cert.m(),
            eigs_a.dim(),
            eigs_d.dim()
        )));
    }
    if cert.schedule.epsilons.len() != inertia_d.nonpositive() {
        return Err(mismatch(format!(
            "schedule length {} differs from r = {}",
            cert.schedule.epsilons.len(),
            inertia_d.nonpositive()
        )));
    }
    // The certificate must come from K = U·E·V* for these eigensystems.
    let rebuilt = eigs_a
        .vectors
        .mul(&cert.e)
        .expect("shape")
        .mul(&eigs_d.vectors.adjoint())
        .expect("shape");
    let drift = rebuilt.sub(&cert.k).expect("shape").frobenius_norm();
    let scale = cert.k.frobenius_norm().max(1.0);
    if drift > 1e-10 * scale {
        return Err(mismatch(format!("K differs from U·E·V* by {drift:e}")));
    }
    Ok(())
}

/// Predicted spectrum of cert.s: the inherited eigenvalues plus the η
/// pairs, with case labels, a diagonalizability flag, and explicit Jordan
/// chains for every degenerate index.
pub fn predict_spectrum(
    cert: &CompletionCertificate,
    eigs_a: &HermitianEigenSystem,
    eigs_d: &HermitianEigenSystem,
    inertia_d: &InertiaCounts,
    mode: Mode,
) -> Result<SpectrumPrediction, SpectralError> {
    check_certificate(cert, eigs_a, eigs_d, inertia_d, mode)?;
    let n = eigs_a.dim();
    let m = eigs_d.dim();
    let r = inertia_d.nonpositive();
    let p = inertia_d.zero;
    let scope = match mode {
        Mode::Definite => r,
        Mode::Semidefinite => r - p,
    };

    let mut eigens = Vec::with_capacity(n + m);
    let mut jordan_chains = Vec::new();
    for i in 0..scope {
        let lam = eigs_a.values[i];
        if lam <= 0.0 {
            return Err(SpectralError::NonpositiveLambda {
                index: i + 1,
                value: lam,
            });
        }
        let mu = eigs_d.values[i];
        let eps = cert.schedule.epsilons[i];
        let label = classify(eps, lam, mu, mode, i >= r - p);
        let (plus, minus) = match label {
            CaseLabel::E => (Complex64::new(lam, 0.0), Complex64::new(mu, 0.0)),
            CaseLabel::D => {
                let half = Complex64::new(0.5 * (lam + mu), 0.0);
                (half, half)
            }
            _ => eta_pair(lam, mu, eps),
        };
        eigens.push(PredictedEigen {
            value: plus,
            origin: EigenOrigin::EtaPlus,
            case_label: label,
            index: Some(i + 1),
        });
        eigens.push(PredictedEigen {
            value: minus,
            origin: EigenOrigin::EtaMinus,
            case_label: label,
            index: Some(i + 1),
        });
        if label == CaseLabel::D {
            jordan_chains.push(jordan_chain(cert, eigs_a, eigs_d, i + 1)?);
        }
    }
    for j in scope..n {
        eigens.push(PredictedEigen {
            value: Complex64::new(eigs_a.values[j], 0.0),
            origin: EigenOrigin::InheritedA,
            case_label: CaseLabel::Inherited,
            index: Some(j + 1),
        });
    }
    for j in scope..m {
        eigens.push(PredictedEigen {
            value: Complex64::new(eigs_d.values[j], 0.0),
            origin: EigenOrigin::InheritedD,
            case_label: CaseLabel::Inherited,
            index: Some(j + 1),
        });
    }

    let diagonalizable = jordan_chains.is_empty();
    Ok(SpectrumPrediction {
        eigens,
        diagonalizable,
        jordan_chains,
    })
}

/// W e_j for the block unitary W = diag(U, V); `j` is 0-based over n+m.
/// Columns j < n are eigenvectors for inherited λ values, columns j ≥ n
/// for inherited μ values (valid for indices past the construction scope).
pub fn lifted_basis_vector(
    eigs_a: &HermitianEigenSystem,
    eigs_d: &HermitianEigenSystem,
    j: usize,
) -> Vec<Complex64> {
    let n = eigs_a.dim();
    let m = eigs_d.dim();
    assert!(j < n + m, "basis index out of range");
    let mut v = vec![Complex64::new(0.0, 0.0); n + m];
    if j < n {
        for (i, slot) in v.iter_mut().take(n).enumerate() {
            *slot = eigs_a.vectors[(i, j)];
        }
    } else {
        for i in 0..m {
            v[n + i] = eigs_d.vectors[(i, j - n)];
        }
    }
    v
}

fn index_data(
    cert: &CompletionCertificate,
    eigs_a: &HermitianEigenSystem,
    eigs_d: &HermitianEigenSystem,
    index: usize,
) -> Result<(f64, f64, f64), SpectralError> {
    let scope = cert.schedule.epsilons.len();
    if index == 0 || index > scope {
        return Err(SpectralError::IndexOutOfRange { index, scope });
    }
    let lam = eigs_a.values[index - 1];
    if lam <= 0.0 {
        return Err(SpectralError::NonpositiveLambda { index, value: lam });
    }
    Ok((
        lam,
        eigs_d.values[index - 1],
        cert.schedule.epsilons[index - 1],
    ))
}

/// Eigenvectors of S for the pair η_index±, lifted through W. For ε = 0
/// the pair degenerates to (W e_{index-1}, W e_{n+index-1}).
pub fn eigenvectors(
    cert: &CompletionCertificate,
    eigs_a: &HermitianEigenSystem,
    eigs_d: &HermitianEigenSystem,
    index: usize,
) -> Result<(Vec<Complex64>, Vec<Complex64>), SpectralError> {
    let (lam, mu, eps) = index_data(cert, eigs_a, eigs_d, index)?;
    if degenerate(eps, alpha_of(lam, mu)) {
        return Err(SpectralError::JordanDegenerate { index });
    }
    let n = eigs_a.dim();
    if eps == 0.0 {
        return Ok((
            lifted_basis_vector(eigs_a, eigs_d, index - 1),
            lifted_basis_vector(eigs_a, eigs_d, n + index - 1),
        ));
    }
    let (plus, minus) = eta_pair(lam, mu, eps);
    let build = |eta: Complex64| -> Vec<Complex64> {
        // (f_i, -λ√ε/(μ - η) f_i) lifted by W.
        let t = -Complex64::new(lam * eps.sqrt(), 0.0) / (Complex64::new(mu, 0.0) - eta);
        let m = eigs_d.dim();
        let mut v = vec![Complex64::new(0.0, 0.0); n + m];
        for (i, slot) in v.iter_mut().take(n).enumerate() {
            *slot = eigs_a.vectors[(i, index - 1)];
        }
        for i in 0..m {
            v[n + i] = eigs_d.vectors[(i, index - 1)] * t;
        }
        v
    };
    Ok((build(plus), build(minus)))
}

/// The Jordan chain of length 2 at a degenerate index (ε_i = α_i):
/// first = W((1 + 2/(λ-μ)) e_{i-1} + e_{n+i-1}), second = W(e_{i-1} + e_{n+i-1}),
/// with (S - ηI)·first = second and (S - ηI)·second = 0 at η = (λ+μ)/2.
pub fn jordan_chain(
    cert: &CompletionCertificate,
    eigs_a: &HermitianEigenSystem,
    eigs_d: &HermitianEigenSystem,
    index: usize,
) -> Result<JordanChainPair, SpectralError> {
    let (lam, mu, eps) = index_data(cert, eigs_a, eigs_d, index)?;
    if !degenerate(eps, alpha_of(lam, mu)) {
        return Err(SpectralError::NotDegenerate { index });
    }
    let n = eigs_a.dim();
    let m = eigs_d.dim();
    let weight = Complex64::new(1.0 + 2.0 / (lam - mu), 0.0);
    let mut first = vec![Complex64::new(0.0, 0.0); n + m];
    let mut second = vec![Complex64::new(0.0, 0.0); n + m];
    for i in 0..n {
        first[i] = eigs_a.vectors[(i, index - 1)] * weight;
        second[i] = eigs_a.vectors[(i, index - 1)];
    }
    for i in 0..m {
        first[n + i] = eigs_d.vectors[(i, index - 1)];
        second[n + i] = eigs_d.vectors[(i, index - 1)];
    }
    Ok(JordanChainPair {
        eigenvalue: 0.5 * (lam + mu),
        first,
        second,
    })
}

/// Assemble all n+m closed-form eigenvectors as columns. Fails with
/// `JordanDegenerate` when some ε_i = α_i (no eigenbasis exists then).
pub fn eigenvector_matrix(
    cert: &CompletionCertificate,
    eigs_a: &HermitianEigenSystem,
    eigs_d: &HermitianEigenSystem,
    inertia_d: &InertiaCounts,
    mode: Mode,
) -> Result<ComplexMatrix, SpectralError> {
    check_certificate(cert, eigs_a, eigs_d, inertia_d, mode)?;
    let n = eigs_a.dim();
    let m = eigs_d.dim();
    let scope = match mode {
        Mode::Definite => inertia_d.nonpositive(),
        Mode::Semidefinite => inertia_d.nonpositive() - inertia_d.zero,
    };
    let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(n + m);
    for i in 0..scope {
        let (plus, minus) = eigenvectors(cert, eigs_a, eigs_d, i + 1)?;
        columns.push(plus);
        columns.push(minus);
    }
    for j in scope..n {
        columns.push(lifted_basis_vector(eigs_a, eigs_d, j));
    }
    for j in scope..m {
        columns.push(lifted_basis_vector(eigs_a, eigs_d, n + j));
    }
    Ok(ComplexMatrix::from_fn(n + m, n + m, |i, j| columns[j][i]))
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct RootLocusPoint {
    pub epsilon: f64,
    pub eta_plus: [f64; 2],
    pub eta_minus: [f64; 2],
    pub label: CaseLabel,
}

/// The ε boundaries separating the cases for one index.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct RootLocusBoundaries {
    pub neg_mu_over_lambda: f64,
    pub alpha: f64,
    pub kappa_sq: f64,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct RootLocusTrajectory {
    pub index: usize,
    pub boundaries: RootLocusBoundaries,
    /// Whether some admissible ε yields a non-real pair: true iff
    /// α < κ². For κ ≠ 1 with κ² < α the case-c range is empty and every
    /// admissible ε gives real eigenvalues.
    pub case_c_reachable: bool,
    pub points: Vec<RootLocusPoint>,
}

impl RootLocusTrajectory {
    /// CSV schema: `epsilon,re_eta_plus,im_eta_plus,re_eta_minus,im_eta_minus,label`
    /// with boundary markers as leading comment lines.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# index = {}\n", self.index));
        out.push_str(&format!(
            "# boundary neg_mu_over_lambda = {}\n",
            jsonout::fmt_f64(self.boundaries.neg_mu_over_lambda)
        ));
        out.push_str(&format!(
            "# boundary alpha = {}\n",
            jsonout::fmt_f64(self.boundaries.alpha)
        ));
        out.push_str(&format!(
            "# boundary kappa_sq = {}\n",
            jsonout::fmt_f64(self.boundaries.kappa_sq)
        ));
        out.push_str(&format!("# case_c_reachable = {}\n", self.case_c_reachable));
        out.push_str("epsilon,re_eta_plus,im_eta_plus,re_eta_minus,im_eta_minus,label\n");
        for point in &self.points {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                jsonout::fmt_f64(point.epsilon),
                jsonout::fmt_f64(point.eta_plus[0]),
                jsonout::fmt_f64(point.eta_plus[1]),
                jsonout::fmt_f64(point.eta_minus[0]),
                jsonout::fmt_f64(point.eta_minus[1]),
                point.label
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        jsonout::render_serialize(self)
    }
}

/// Sweep η_index±(ε) over `grid`. The grid must stay inside the ε range the
/// construction admits for this index and mode: (0, κ²) in definite mode
/// ([0, κ²) when μ_index = 0), (0, κ²] in semidefinite mode. Points are
/// returned sorted by ε.
pub fn root_locus(
    eigs_a: &HermitianEigenSystem,
    eigs_d: &HermitianEigenSystem,
    index: usize,
    grid: &[f64],
    kappa: f64,
    mode: Mode,
) -> Result<RootLocusTrajectory, SpectralError> {
    let zero_tol = crate::feasibility::default_zero_tol(eigs_a, eigs_d);
    let (_, r, p) = crate::feasibility::spectral_counts(eigs_a, eigs_d, zero_tol);
    let scope = match mode {
        Mode::Definite => r,
        Mode::Semidefinite => r - p,
    };
    if index == 0 || index > scope {
        return Err(SpectralError::IndexOutOfRange { index, scope });
    }
    let lam = eigs_a.values[index - 1];
    if lam <= 0.0 {
        return Err(SpectralError::NonpositiveLambda { index, value: lam });
    }
    let mu = eigs_d.values[index - 1];
    let beyond_rp = index > r - p;
    let kappa_sq = kappa * kappa;

    for &eps in grid {
        let ok = eps.is_finite()
            && match mode {
                Mode::Definite => {
                    let lower_ok = if beyond_rp { eps >= 0.0 } else { eps > 0.0 };
                    lower_ok && eps < kappa_sq
                }
                Mode::Semidefinite => eps > 0.0 && eps <= kappa_sq,
            };
        if !ok {
            return Err(SpectralError::GridOutOfRange {
                context: format!(
                    "epsilon = {eps} for index {index} in {mode} mode, kappa = {kappa}"
                ),
            });
        }
    }

    let mut sorted: Vec<f64> = grid.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    let alpha = alpha_of(lam, mu);
    let points = sorted
        .into_iter()
        .map(|eps| {
            let label = classify(eps, lam, mu, mode, beyond_rp);
            let (plus, minus) = match label {
                CaseLabel::E => (Complex64::new(lam, 0.0), Complex64::new(mu, 0.0)),
                CaseLabel::D => {
                    let half = Complex64::new(0.5 * (lam + mu), 0.0);
                    (half, half)
                }
                _ => eta_pair(lam, mu, eps),
            };
            RootLocusPoint {
                epsilon: eps,
                eta_plus: [plus.re, plus.im],
                eta_minus: [minus.re, minus.im],
                label,
            }
        })
        .collect();

    Ok(RootLocusTrajectory {
        index,
        boundaries: RootLocusBoundaries {
            neg_mu_over_lambda: -mu / lam,
            alpha,
            kappa_sq,
        },
        case_c_reachable: alpha < kappa_sq,
        points,
    })
}
