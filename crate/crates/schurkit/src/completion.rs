//! Construction of the completing K and the certified block matrix S.
//!
//! With A = U·diag(λ)·U* (nonincreasing) and D = V·diag(μ)·V*
//! (nondecreasing), set E ∈ C^{n×m} to carry √ε_i on its leading diagonal
//! positions i = 1, …, r and zeros elsewhere, and
//!
//! ```text
//!     K = U · E · V*.
//! ```
//!
//! Then ‖K‖ = max_i √ε_i and
//! V*(D + K*AK)V = diag(ε_1λ_1 + μ_1, …, ε_rλ_r + μ_r, μ_{r+1}, …, μ_m),
//! so the sign conditions on ε_iλ_i + μ_i translate directly into
//! definiteness of the Schur complement. The admissible ε ranges depend on
//! the mode:
//!
//! - definite: 0 < ε_i < κ² with ε_iλ_i + μ_i > 0 for i ≤ r-p, and
//!   0 ≤ ε_j < κ² arbitrary for j > r-p;
//! - semidefinite: 0 < ε_i ≤ κ² with ε_iλ_i + μ_i ≥ 0 for i ≤ r-p, and
//!   ε_j = 0 for j > r-p.
//!
//! The default schedule takes midpoints that keep the induced eigenvalue
//! pairs real and the matrix diagonalizable whenever the range allows it.

use num_complex::Complex64;

use crate::feasibility::{check_feasible, default_zero_tol, spectral_counts, FeasibilityError};
use crate::hermitian::{EigenOrder, HermitianEigenSystem, InertiaCounts};
use crate::matrix::ComplexMatrix;
use crate::Mode;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CompletionError {
    #[error("instance is infeasible for the requested mode: {context}")]
    InfeasibleInput { context: String },
    #[error("epsilon schedule invalid: {reason}")]
    ScheduleInvalid { reason: String },
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
    #[error(transparent)]
    Feasibility(#[from] FeasibilityError),
}

/// The construction parameters ε_1, …, ε_r together with the norm budget.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct EpsilonSchedule {
    pub epsilons: Vec<f64>,
    pub kappa: f64,
    pub mode: Mode,
}

impl EpsilonSchedule {
    /// Check every schedule invariant against the eigenvalue data.
    /// `zero_tol` fixes the r/p split of D's spectrum.
    pub fn validate(
        &self,
        eigs_a: &HermitianEigenSystem,
        eigs_d: &HermitianEigenSystem,
        zero_tol: f64,
    ) -> Result<(), CompletionError> {
        let invalid =
            |reason: String| -> CompletionError { CompletionError::ScheduleInvalid { reason } };
        if self.kappa.is_nan() || self.kappa <= 0.0 {
            return Err(invalid(format!(
                "kappa must be positive, got {}",
                self.kappa
            )));
        }
        let (_, r, p) = spectral_counts(eigs_a, eigs_d, zero_tol);
        if self.epsilons.len() != r {
            return Err(invalid(format!(
                "schedule has {} epsilons but D has r = {} nonpositive eigenvalues",
                self.epsilons.len(),
                r
            )));
        }
        let n = eigs_a.dim();
        if r - p > n {
            return Err(invalid(format!("r - p = {} exceeds n = {n}", r - p)));
        }
        let kappa_sq = self.kappa * self.kappa;
        // Tiny absolute slack for sign conditions evaluated at forced
        // boundary points (e.g. ε = κ² with κ²λ + μ = 0 in floating point).
        let slack = 1e-12 * (eigs_a.spectral_norm() + eigs_d.spectral_norm()).max(1.0);
        for (idx, &eps) in self.epsilons.iter().enumerate() {
            if !eps.is_finite() || eps < 0.0 {
                return Err(invalid(format!(
                    "epsilon[{}] = {} out of range",
                    idx + 1,
                    eps
                )));
            }
            if idx < r - p {
                let lam = eigs_a.values[idx];
                let mu = eigs_d.values[idx];
                let scalar = eps * lam + mu;
                match self.mode {
                    Mode::Definite => {
                        if eps <= 0.0 || eps >= kappa_sq {
                            return Err(invalid(format!(
                                "epsilon[{}] = {eps} not in (0, kappa^2 = {kappa_sq})",
                                idx + 1
                            )));
                        }
                        if scalar <= 0.0 {
                            return Err(invalid(format!(
                                "epsilon[{}]·lambda + mu = {scalar} is not positive",
                                idx + 1
                            )));
                        }
                    }
                    Mode::Semidefinite => {
                        if eps <= 0.0 || eps > kappa_sq {
                            return Err(invalid(format!(
                                "epsilon[{}] = {eps} not in (0, kappa^2 = {kappa_sq}]",
                                idx + 1
                            )));
                        }
                        if scalar < -slack {
                            return Err(invalid(format!(
                                "epsilon[{}]·lambda + mu = {scalar} is negative",
                                idx + 1
                            )));
                        }
                    }
                }
            } else {
                match self.mode {
                    Mode::Definite => {
                        if eps >= kappa_sq {
                            return Err(invalid(format!(
                                "epsilon[{}] = {eps} not in [0, kappa^2 = {kappa_sq})",
                                idx + 1
                            )));
                        }
                    }
                    Mode::Semidefinite => {
                        if eps != 0.0 {
                            return Err(invalid(format!(
                                "epsilon[{}] must be 0 in semidefinite mode, got {eps}",
                                idx + 1
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// The constructed completion: E, K = U·E·V*, the assembled block matrix S,
/// and its Schur complement D + K*AK. `zero_tol` records the threshold
/// under which the r/p split of D's spectrum was taken.
#[derive(Debug, Clone)]
pub struct CompletionCertificate {
    pub e: ComplexMatrix,
    pub k: ComplexMatrix,
    pub s: ComplexMatrix,
    pub schur: ComplexMatrix,
    pub schedule: EpsilonSchedule,
    pub zero_tol: f64,
}

impl CompletionCertificate {
    pub fn n(&self) -> usize {
        self.e.rows()
    }

    pub fn m(&self) -> usize {
        self.e.cols()
    }
}

/// Midpoint defaults for the ε parameters, preferring choices that make
/// the spectrum real and the matrix diagonalizable:
///
/// - i ≤ r-p with -μ_i/λ_i < min(α_i, κ²): the midpoint of that interval
///   (real split, diagonalizable);
/// - i ≤ r-p with λ_i + μ_i = 0 (so α_i = -μ_i/λ_i): the midpoint of
///   (α_i, κ²), which necessarily yields a conjugate pair;
/// - forced semidefinite boundary -μ_i/λ_i = κ²: the single admissible
///   value κ²;
/// - j > r-p: κ²/2 in definite mode, 0 in semidefinite mode.
pub fn default_epsilons(
    eigs_a: &HermitianEigenSystem,
    eigs_d: &HermitianEigenSystem,
    inertia_a: &InertiaCounts,
    inertia_d: &InertiaCounts,
    kappa: f64,
    mode: Mode,
) -> Result<EpsilonSchedule, CompletionError> {
    let zero_tol = inertia_d.zero_tol;
    let verdict = check_feasible(eigs_a, eigs_d, kappa, mode, zero_tol)?;
    if !verdict.feasible {
        return Err(CompletionError::InfeasibleInput {
            context: format!(
                "rank_condition_ok = {}, violated_indices = {:?}",
                verdict.rank_condition_ok, verdict.violated_indices
            ),
        });
    }
    debug_assert_eq!(
        inertia_a.positive + inertia_a.zero + inertia_a.negative,
        eigs_a.dim()
    );

    let r = inertia_d.nonpositive();
    let p = inertia_d.zero;
    let kappa_sq = kappa * kappa;
    let mut epsilons = Vec::with_capacity(r);
    for i in 0..r {
        if i < r - p {
            let lam = eigs_a.values[i];
            let mu = eigs_d.values[i];
            let lo = -mu / lam;
            let alpha = (lam - mu).powi(2) / (4.0 * lam * lam);
            let hi = alpha.min(kappa_sq);
            if lo < hi {
                epsilons.push(0.5 * (lo + hi));
            } else if alpha < kappa_sq {
                epsilons.push(0.5 * (alpha + kappa_sq));
            } else {
                debug_assert_eq!(mode, Mode::Semidefinite);
                epsilons.push(kappa_sq);
            }
        } else {
            epsilons.push(match mode {
                Mode::Definite => 0.5 * kappa_sq,
                Mode::Semidefinite => 0.0,
            });
        }
    }
    Ok(EpsilonSchedule {
        epsilons,
        kappa,
        mode,
    })
}

/// Build the certificate from a fully validated schedule, using the
/// default zero threshold for the r/p split.
pub fn build_k(
    eigs_a: &HermitianEigenSystem,
    eigs_d: &HermitianEigenSystem,
    schedule: &EpsilonSchedule,
) -> Result<CompletionCertificate, CompletionError> {
    build_k_with_tol(eigs_a, eigs_d, schedule, default_zero_tol(eigs_a, eigs_d))
}

/// Like [`build_k`] with an explicit zero threshold. The schedule length
/// must equal the count of nonpositive eigenvalues of D under this same
/// threshold; callers that classified the spectrum with a custom
/// tolerance must pass it here.
pub fn build_k_with_tol(
    eigs_a: &HermitianEigenSystem,
    eigs_d: &HermitianEigenSystem,
    schedule: &EpsilonSchedule,
    zero_tol: f64,
) -> Result<CompletionCertificate, CompletionError> {
    require_construction_orders(eigs_a, eigs_d)?;
    schedule.validate(eigs_a, eigs_d, zero_tol)?;
    assemble_schedule(eigs_a, eigs_d, schedule.clone(), zero_tol)
}

fn require_construction_orders(
    eigs_a: &HermitianEigenSystem,
    eigs_d: &HermitianEigenSystem,
) -> Result<(), CompletionError> {
    if eigs_a.order != EigenOrder::Nonincreasing || eigs_d.order != EigenOrder::Nondecreasing {
        return Err(CompletionError::ScheduleInvalid {
            reason: "construction requires A nonincreasing and D nondecreasing".into(),
        });
    }
    Ok(())
}

/// Assemble E, K, S and the Schur complement from raw epsilons without
/// mode/sign validation (only structural checks). This is the path used by
/// root-locus sweeps, which deliberately visit parameter values outside
/// the positivity ranges.
pub fn assemble_schedule(
    eigs_a: &HermitianEigenSystem,
    eigs_d: &HermitianEigenSystem,
    schedule: EpsilonSchedule,
    zero_tol: f64,
) -> Result<CompletionCertificate, CompletionError> {
    require_construction_orders(eigs_a, eigs_d)?;
    let n = eigs_a.dim();
    let m = eigs_d.dim();
    let r = schedule.epsilons.len();
    if r > m {
        return Err(CompletionError::DimensionMismatch {
            context: format!("schedule length {r} exceeds m = {m}"),
        });
    }
    let mut e = ComplexMatrix::zeros(n, m);
    for (i, &eps) in schedule.epsilons.iter().enumerate() {
        if !eps.is_finite() || eps < 0.0 {
            return Err(CompletionError::ScheduleInvalid {
                reason: format!("epsilon[{}] = {eps} out of range", i + 1),
            });
        }
        if eps == 0.0 {
            continue;
        }
        if i >= n {
            return Err(CompletionError::ScheduleInvalid {
                reason: format!(
                    "nonzero epsilon[{}] needs a diagonal slot but n = {n}",
                    i + 1
                ),
            });
        }
        e[(i, i)] = Complex64::new(eps.sqrt(), 0.0);
    }

    let u = &eigs_a.vectors;
    let v = &eigs_d.vectors;
    let k = u.mul(&e).expect("shape").mul(&v.adjoint()).expect("shape");
    let a = eigs_a.reconstruct();
    let d = eigs_d.reconstruct();
    let ak = a.mul(&k).expect("shape");
    let top_right = ak.neg();
    let bottom_left = k.adjoint().mul(&a).expect("shape");
    let s = ComplexMatrix::from_blocks(&a, &top_right, &bottom_left, &d).expect("shape");
    let schur = d.add(&k.adjoint().mul(&ak).expect("shape")).expect("shape");

    Ok(CompletionCertificate {
        e,
        k,
        s,
        schur,
        schedule,
        zero_tol,
    })
}
