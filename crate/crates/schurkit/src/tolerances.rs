//! Named tolerances shared across the crate.
//!
//! The underlying theory is exact; floating point forces thresholds. Every
//! threshold that affects a classification (inertia, rank, feasibility,
//! Jordan degeneracy) is named here so the choice is visible and testable.

/// Relative factor for the default inertia/feasibility zero threshold:
/// `zero_tol = ZERO_TOL_FACTOR * max(1, ‖M‖)`.
pub const ZERO_TOL_FACTOR: f64 = 1e-9;

/// Eigendecomposition reconstruction residual: `‖M - Q Λ Q*‖ ≤
/// RECONSTRUCTION_TOL * max(1, ‖M‖)`.
pub const RECONSTRUCTION_TOL: f64 = 1e-10;

/// Relative Hermitian-symmetry test: `‖M - M*‖ ≤ HERMITIAN_TOL * max(1, ‖M‖_F)`.
pub const HERMITIAN_TOL: f64 = 1e-9;

/// Default pseudo-inverse cutoff: singular values below
/// `PINV_TOL_FACTOR * σ_1` are treated as zero.
pub const PINV_TOL_FACTOR: f64 = 1e-12;

/// Numeric nullity threshold: singular values below
/// `NULLITY_TOL_FACTOR * σ_max` count as zero. Jordan detection is
/// tolerance-sensitive; this is the documented default.
pub const NULLITY_TOL_FACTOR: f64 = 1e-8;

/// Snap width for the Jordan boundary: ε within
/// `DEGENERACY_TOL * max(1, α)` of α is classified as the degenerate case.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Refuse to form (I - KK*)^{-1/2} when 1 - σ_1(K)² falls below this.
pub const CONTRACTION_GUARD: f64 = 1e-10;

/// Residual bound accepted for eigenvalues returned by the non-Hermitian
/// solver: σ_min(M - ηI) ≤ EIGENVALUE_RESIDUAL_TOL * (1 + ‖M‖).
pub const EIGENVALUE_RESIDUAL_TOL: f64 = 1e-8;

/// Maximum Jacobi sweeps for the Hermitian eigensolver.
pub const MAX_JACOBI_SWEEPS: usize = 100;

/// Default zero threshold for a matrix with the given spectral norm.
pub fn default_zero_tol(spectral_norm: f64) -> f64 {
    ZERO_TOL_FACTOR * spectral_norm.max(1.0)
}
