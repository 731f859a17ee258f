//! Completion of non-Hermitian block matrices with positive (semi-)definite
//! Schur complements.
//!
//! Given Hermitian matrices `A` (n×n) and `D` (m×m) and a norm budget κ > 0,
//! this crate decides whether some `K` with ‖K‖ < κ makes the block matrix
//!
//! ```text
//!     S = [ A    -A·K ]
//!         [ K*·A   D  ]
//! ```
//!
//! have a positive (semi-)definite Schur complement `D + K*AK`, constructs
//! such a `K` explicitly from the eigendecompositions of `A` and `D`,
//! predicts the full spectrum of `S` in closed form (including Jordan
//! structure), and applies the machinery to frame operators on the
//! indefinite inner product space (C^{n+m}, [·,·]) with Gramian
//! J = diag(I_n, -I_m).
//!
//! Module map:
//! - [`matrix`], [`lu`]: dense complex matrices, LU solves, determinants.
//! - [`hermitian`]: Hermitian eigendecomposition (cyclic Jacobi), inertia,
//!   singular values, pseudo-inverse Schur complements.
//! - [`feasibility`]: the existence criterion and infeasibility witnesses.
//! - [`completion`]: epsilon schedules, the K = U·E·V* construction, and
//!   the resulting certificate.
//! - [`spectral`]: closed-form eigenvalues η± with case classification,
//!   eigenvectors, Jordan chains, and root-locus sweeps.
//! - [`jframe`]: J-frame matrix recognition, existence, frame bounds, and
//!   frame synthesis with prescribed frame operator.
//! - [`verify`]: independent numeric oracles (non-Hermitian eigensolver,
//!   rank probes, classical identity checks).
//! - [`cli`]: the command-line front end.

pub mod cli;
pub mod completion;
pub mod feasibility;
pub mod hermitian;
pub mod jframe;
pub mod jsonout;
pub mod lu;
pub mod matrix;
pub mod spectral;
pub mod tolerances;
pub mod verify;

pub use matrix::{ComplexMatrix, MatrixError};

/// Which flavor of positivity is requested for the Schur complement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// ‖K‖ < κ and D + K*AK positive definite.
    Definite,
    /// ‖K‖ ≤ κ and D + K*AK positive semidefinite.
    Semidefinite,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Definite => write!(f, "definite"),
            Mode::Semidefinite => write!(f, "semidefinite"),
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "definite" => Ok(Mode::Definite),
            "semidefinite" => Ok(Mode::Semidefinite),
            other => Err(format!(
                "unknown mode `{other}` (expected definite|semidefinite)"
            )),
        }
    }
}
