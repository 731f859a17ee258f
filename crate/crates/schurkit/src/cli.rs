//! Command-line front end.
//!
//! Subcommands: `feasibility`, `construct`, `spectrum`, `rootlocus`,
//! `jframe`, `verify`, `demo`. Matrices come in as JSON files
//! (`{"rows": n, "cols": m, "data": [[re, im], ...]}`), reports go out as
//! deterministic JSON (fixed field order, floats at 17 significant
//! digits), CSV (root locus), or plain text. Exit codes: 0 success,
//! 2 infeasible instance, 1 any other error.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::completion::{
    assemble_schedule, build_k_with_tol, default_epsilons, CompletionCertificate, CompletionError,
    EpsilonSchedule,
};
use crate::feasibility::{
    check_feasible, default_zero_tol, max_min_eig_over_contractions, spectral_counts,
};
use crate::hermitian::{
    eigendecompose_hermitian, inertia, EigenOrder, HermitianEigenSystem, InertiaCounts,
};
use crate::jframe;
use crate::jsonout;
use crate::matrix::{ComplexMatrix, MatrixJson};
use crate::spectral::{self, CaseLabel, EigenOrigin};
use crate::verify;
use crate::Mode;

#[derive(Debug, Parser)]
#[command(
    name = "schurkit",
    version,
    about = "Completion of non-Hermitian block matrices with positive definite Schur complements"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether a completion K with the requested norm budget exists.
    Feasibility(FeasibilityArgs),
    /// Construct K = U·E·V* and emit the full certificate as JSON.
    Construct(ConstructArgs),
    /// Predict the spectrum in closed form and compare with the numeric solver.
    Spectrum(SpectrumArgs),
    /// Sweep the eigenvalue pair of one index over an epsilon grid.
    Rootlocus(RootlocusArgs),
    /// J-frame analysis: recognition, frame bounds, optional synthesis.
    Jframe(JframeArgs),
    /// Run the identity and oracle checks on a constructed instance.
    Verify(VerifyArgs),
    /// Reproduce the 1x1-block worked example for a given a and epsilon.
    Demo(DemoArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Definite,
    Semidefinite,
}

impl From<ModeArg> for Mode {
    fn from(value: ModeArg) -> Mode {
        match value {
            ModeArg::Definite => Mode::Definite,
            ModeArg::Semidefinite => Mode::Semidefinite,
        }
    }
}

#[derive(Debug, Args)]
pub struct FeasibilityArgs {
    /// Path to the Hermitian matrix A (JSON).
    #[arg(short = 'a', long)]
    pub matrix_a: PathBuf,
    /// Path to the Hermitian matrix D (JSON).
    #[arg(short = 'd', long)]
    pub matrix_d: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Definite)]
    pub mode: ModeArg,
    /// Zero threshold for inertia and strict inequalities (default 1e-9·(‖A‖+‖D‖)).
    #[arg(long)]
    pub zero_tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub out: OutputFormat,
    /// Also bisect for the minimal feasible kappa.
    #[arg(long)]
    pub bisect: bool,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(short = 'a', long)]
    pub matrix_a: PathBuf,
    #[arg(short = 'd', long)]
    pub matrix_d: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Definite)]
    pub mode: ModeArg,
    /// Comma-separated epsilon overrides for the leading schedule entries.
    #[arg(long)]
    pub eps: Option<String>,
    #[arg(long)]
    pub zero_tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub out: OutputFormat,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// Certificate JSON produced by `construct` (alternative to -a/-d).
    #[arg(long, conflicts_with_all = ["matrix_a", "matrix_d"])]
    pub cert: Option<PathBuf>,
    #[arg(short = 'a', long, requires = "matrix_d")]
    pub matrix_a: Option<PathBuf>,
    #[arg(short = 'd', long, requires = "matrix_a")]
    pub matrix_d: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Definite)]
    pub mode: ModeArg,
    #[arg(long)]
    pub eps: Option<String>,
    #[arg(long)]
    pub zero_tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub out: OutputFormat,
}

#[derive(Debug, Args)]
pub struct RootlocusArgs {
    #[arg(short = 'a', long)]
    pub matrix_a: PathBuf,
    #[arg(short = 'd', long)]
    pub matrix_d: PathBuf,
    /// 1-based construction index to sweep.
    #[arg(long)]
    pub index: usize,
    /// Grid: either "start:end:step" (clipped to the admissible open
    /// range) or a comma-separated list (validated strictly).
    #[arg(long)]
    pub grid: String,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Definite)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub out: OutputFormat,
}

#[derive(Debug, Args)]
pub struct JframeArgs {
    /// Certificate JSON produced by `construct` (alternative to -a/-d).
    #[arg(long, conflicts_with_all = ["matrix_a", "matrix_d"])]
    pub cert: Option<PathBuf>,
    #[arg(short = 'a', long, requires = "matrix_d")]
    pub matrix_a: Option<PathBuf>,
    #[arg(short = 'd', long, requires = "matrix_a")]
    pub matrix_d: Option<PathBuf>,
    /// Epsilon overrides (matrix-input form only).
    #[arg(long)]
    pub eps: Option<String>,
    #[arg(long)]
    pub zero_tol: Option<f64>,
    /// Also synthesize a tight J-frame with S as its frame operator.
    #[arg(long)]
    pub synthesize: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub out: OutputFormat,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(short = 'a', long)]
    pub matrix_a: PathBuf,
    #[arg(short = 'd', long)]
    pub matrix_d: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Definite)]
    pub mode: ModeArg,
    #[arg(long)]
    pub eps: Option<String>,
    #[arg(long)]
    pub zero_tol: Option<f64>,
    /// Seed for the random-contraction sampling on infeasible instances.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of random contractions sampled when infeasible.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub out: OutputFormat,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    /// The positive 1x1 entry of A.
    #[arg(long, default_value_t = 2.0)]
    pub a: f64,
    /// The construction parameter epsilon in (0, 1).
    #[arg(long, default_value_t = 0.25)]
    pub eps: f64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub out: OutputFormat,
}

/// Successful command result: report text plus the process exit code
/// (0 = success, 2 = infeasible).
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub exit_code: i32,
}

/// Hard failure: message for stderr plus exit code (1 = error,
/// 2 = infeasible input to a command that needs a feasible one).
#[derive(Debug)]
pub struct CliFailure {
    pub message: String,
    pub exit_code: i32,
}

impl CliFailure {
    fn error(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            exit_code: 1,
        }
    }

    fn infeasible(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            exit_code: 2,
        }
    }
}

struct Instance {
    eigs_a: HermitianEigenSystem,
    eigs_d: HermitianEigenSystem,
    inertia_a: InertiaCounts,
    inertia_d: InertiaCounts,
    zero_tol: f64,
}

fn load_matrix(path: &Path) -> Result<ComplexMatrix, CliFailure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliFailure::error(format!("cannot read {}: {e}", path.display())))?;
    ComplexMatrix::from_json_str(&text)
        .map_err(|e| CliFailure::error(format!("cannot parse {}: {e}", path.display())))
}

fn prepare(
    a_path: &Path,
    d_path: &Path,
    zero_tol_flag: Option<f64>,
) -> Result<Instance, CliFailure> {
    let a = load_matrix(a_path)?;
    let d = load_matrix(d_path)?;
    let eigs_a = eigendecompose_hermitian(&a, EigenOrder::Nonincreasing)
        .map_err(|e| CliFailure::error(format!("matrix A: {e}")))?;
    let eigs_d = eigendecompose_hermitian(&d, EigenOrder::Nondecreasing)
        .map_err(|e| CliFailure::error(format!("matrix D: {e}")))?;
    let zero_tol = zero_tol_flag.unwrap_or_else(|| default_zero_tol(&eigs_a, &eigs_d));
    if zero_tol.is_nan() || zero_tol < 0.0 {
        return Err(CliFailure::error(format!(
            "zero_tol must be nonnegative, got {zero_tol}"
        )));
    }
    let inertia_a = inertia(&eigs_a, zero_tol);
    let inertia_d = inertia(&eigs_d, zero_tol);
    Ok(Instance {
        eigs_a,
        eigs_d,
        inertia_a,
        inertia_d,
        zero_tol,
    })
}

fn parse_eps_list(text: &str) -> Result<Vec<f64>, CliFailure> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|e| CliFailure::error(format!("bad epsilon `{part}`: {e}")))
        })
        .collect()
}

fn schedule_for(
    instance: &Instance,
    kappa: f64,
    mode: Mode,
    eps: Option<&str>,
) -> Result<EpsilonSchedule, CliFailure> {
    let mut schedule = default_epsilons(
        &instance.eigs_a,
        &instance.eigs_d,
        &instance.inertia_a,
        &instance.inertia_d,
        kappa,
        mode,
    )
    .map_err(|e| match e {
        CompletionError::InfeasibleInput { .. } => CliFailure::infeasible(render_infeasible(
            &instance.eigs_a,
            &instance.eigs_d,
            kappa,
            mode,
            instance.zero_tol,
        )),
        other => CliFailure::error(other.to_string()),
    })?;
    if let Some(text) = eps {
        let overrides = parse_eps_list(text)?;
        if overrides.len() > schedule.epsilons.len() {
            return Err(CliFailure::error(format!(
                "{} epsilon overrides exceed the schedule length r = {}",
                overrides.len(),
                schedule.epsilons.len()
            )));
        }
        schedule.epsilons[..overrides.len()].copy_from_slice(&overrides);
    }
    Ok(schedule)
}

fn render_infeasible(
    eigs_a: &HermitianEigenSystem,
    eigs_d: &HermitianEigenSystem,
    kappa: f64,
    mode: Mode,
    zero_tol: f64,
) -> String {
    let verdict = check_feasible(eigs_a, eigs_d, kappa, mode, zero_tol);
    match verdict {
        Ok(v) if !v.rank_condition_ok => {
            let (k, r, p) = spectral_counts(eigs_a, eigs_d, zero_tol);
            format!("infeasible: rank obstruction r>k (k = {k}, r = {r}, p = {p}) for {mode} mode")
        }
        Ok(v) => format!(
            "infeasible: kappa^2*lambda_i + mu_i fails at indices {:?} for kappa = {kappa}",
            v.violated_indices
        ),
        Err(e) => format!("infeasible: {e}"),
    }
}

/// The on-disk certificate: schedule, both eigensystems, and all
/// constructed matrices. Everything `spectrum` and `jframe` need to
/// reproduce the in-process results exactly.
#[derive(Debug, Serialize, Deserialize)]
pub struct CertificateFile {
    pub kappa: f64,
    pub mode: Mode,
    pub zero_tol: f64,
    pub epsilons: Vec<f64>,
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
    pub u: MatrixJson,
    pub v: MatrixJson,
    pub e: MatrixJson,
    pub k: MatrixJson,
    pub s: MatrixJson,
    pub schur: MatrixJson,
}

impl CertificateFile {
    pub fn from_parts(
        cert: &CompletionCertificate,
        eigs_a: &HermitianEigenSystem,
        eigs_d: &HermitianEigenSystem,
    ) -> Self {
        Self {
            kappa: cert.schedule.kappa,
            mode: cert.schedule.mode,
            zero_tol: cert.zero_tol,
            epsilons: cert.schedule.epsilons.clone(),
            lambda: eigs_a.values.clone(),
            mu: eigs_d.values.clone(),
            u: eigs_a.vectors.to_json(),
            v: eigs_d.vectors.to_json(),
            e: cert.e.to_json(),
            k: cert.k.to_json(),
            s: cert.s.to_json(),
            schur: cert.schur.to_json(),
        }
    }

    pub fn into_parts(
        self,
    ) -> Result<
        (
            CompletionCertificate,
            HermitianEigenSystem,
            HermitianEigenSystem,
        ),
        CliFailure,
    > {
        let to_matrix = |m: MatrixJson, name: &str| -> Result<ComplexMatrix, CliFailure> {
            ComplexMatrix::try_from(m)
                .map_err(|e| CliFailure::error(format!("certificate field {name}: {e}")))
        };
        let eigs_a = HermitianEigenSystem {
            values: self.lambda,
            vectors: to_matrix(self.u, "u")?,
            order: EigenOrder::Nonincreasing,
        };
        let eigs_d = HermitianEigenSystem {
            values: self.mu,
            vectors: to_matrix(self.v, "v")?,
            order: EigenOrder::Nondecreasing,
        };
        let cert = CompletionCertificate {
            e: to_matrix(self.e, "e")?,
            k: to_matrix(self.k, "k")?,
            s: to_matrix(self.s, "s")?,
            schur: to_matrix(self.schur, "schur")?,
            schedule: EpsilonSchedule {
                epsilons: self.epsilons,
                kappa: self.kappa,
                mode: self.mode,
            },
            zero_tol: self.zero_tol,
        };
        if eigs_a.dim() != cert.e.rows() || eigs_d.dim() != cert.e.cols() {
            return Err(CliFailure::error("certificate dimensions are inconsistent"));
        }
        Ok((cert, eigs_a, eigs_d))
    }
}

fn load_certificate(
    path: &Path,
) -> Result<
    (
        CompletionCertificate,
        HermitianEigenSystem,
        HermitianEigenSystem,
    ),
    CliFailure,
> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliFailure::error(format!("cannot read {}: {e}", path.display())))?;
    let file: CertificateFile = serde_json::from_str(&text).map_err(|e| {
        CliFailure::error(format!("cannot parse certificate {}: {e}", path.display()))
    })?;
    file.into_parts()
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliFailure> {
    match &cli.command {
        Command::Feasibility(args) => run_feasibility(args),
        Command::Construct(args) => run_construct(args),
        Command::Spectrum(args) => run_spectrum(args),
        Command::Rootlocus(args) => run_rootlocus(args),
        Command::Jframe(args) => run_jframe(args),
        Command::Verify(args) => run_verify(args),
        Command::Demo(args) => run_demo(args),
    }
}

#[derive(Serialize)]
struct FeasibilityReport {
    command: &'static str,
    mode: Mode,
    kappa: f64,
    zero_tol: f64,
    k: usize,
    r: usize,
    p: usize,
    feasible: bool,
    rank_condition_ok: bool,
    violated_indices: Vec<usize>,
    scalar_margin: Option<f64>,
    minimal_kappa: Option<f64>,
}

fn run_feasibility(args: &FeasibilityArgs) -> Result<Outcome, CliFailure> {
    let instance = prepare(&args.matrix_a, &args.matrix_d, args.zero_tol)?;
    let mode = args.mode.into();
    let verdict = check_feasible(
        &instance.eigs_a,
        &instance.eigs_d,
        args.kappa,
        mode,
        instance.zero_tol,
    )
    .map_err(|e| CliFailure::error(e.to_string()))?;
    let (k, r, p) = spectral_counts(&instance.eigs_a, &instance.eigs_d, instance.zero_tol);

    let minimal_kappa = if args.bisect {
        minimal_feasible_kappa(&instance, mode)
    } else {
        None
    };

    let report = FeasibilityReport {
        command: "feasibility",
        mode,
        kappa: args.kappa,
        zero_tol: instance.zero_tol,
        k,
        r,
        p,
        feasible: verdict.feasible,
        rank_condition_ok: verdict.rank_condition_ok,
        violated_indices: verdict.violated_indices.clone(),
        scalar_margin: verdict.scalar_margin,
        minimal_kappa,
    };
    let exit_code = if verdict.feasible { 0 } else { 2 };
    let stdout = match args.out {
        OutputFormat::Json => jsonout::render_serialize(&report) + "\n",
        OutputFormat::Text => {
            let mut text = format!(
                "feasibility ({mode}, kappa = {}): {}\n",
                args.kappa,
                if verdict.feasible {
                    "FEASIBLE"
                } else {
                    "INFEASIBLE"
                }
            );
            text.push_str(&format!("  k = {k}, r = {r}, p = {p}\n"));
            if !verdict.rank_condition_ok {
                text.push_str("  rank obstruction: r > k\n");
            }
            if !verdict.violated_indices.is_empty() {
                text.push_str(&format!(
                    "  scalar condition fails at indices {:?}\n",
                    verdict.violated_indices
                ));
            }
            if let Some(kmin) = minimal_kappa {
                text.push_str(&format!("  minimal feasible kappa ~ {kmin}\n"));
            }
            text
        }
        OutputFormat::Csv => return Err(CliFailure::error("csv output is only for rootlocus")),
    };
    Ok(Outcome { stdout, exit_code })
}

/// Bisect for the infimum of feasible kappa (the scalar conditions are
/// monotone in kappa). `None` when the rank condition fails (no kappa
/// works) or the instance is feasible for arbitrarily small kappa.
fn minimal_feasible_kappa(instance: &Instance, mode: Mode) -> Option<f64> {
    let feasible_at = |kappa: f64| -> bool {
        check_feasible(
            &instance.eigs_a,
            &instance.eigs_d,
            kappa,
            mode,
            instance.zero_tol,
        )
        .map(|v| v.feasible)
        .unwrap_or(false)
    };
    let mut hi = 1.0;
    let mut doublings = 0;
    while !feasible_at(hi) {
        hi *= 2.0;
        doublings += 1;
        if doublings > 60 {
            return None;
        }
    }
    let mut lo = hi / 2.0;
    if feasible_at(1e-12) {
        return None;
    }
    while feasible_at(lo) {
        lo /= 2.0;
        if lo < 1e-12 {
            return None;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if feasible_at(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

fn run_construct(args: &ConstructArgs) -> Result<Outcome, CliFailure> {
    let instance = prepare(&args.matrix_a, &args.matrix_d, args.zero_tol)?;
    let mode = args.mode.into();
    let schedule = schedule_for(&instance, args.kappa, mode, args.eps.as_deref())?;
    let cert = build_k_with_tol(
        &instance.eigs_a,
        &instance.eigs_d,
        &schedule,
        instance.zero_tol,
    )
    .map_err(|e| CliFailure::error(e.to_string()))?;
    let file = CertificateFile::from_parts(&cert, &instance.eigs_a, &instance.eigs_d);
    let stdout = match args.out {
        OutputFormat::Json => jsonout::render_serialize(&file) + "\n",
        OutputFormat::Text => {
            let norm_k = crate::hermitian::spectral_norm(&cert.k);
            format!(
                "constructed K ({} x {}), ‖K‖ = {}, epsilons = {:?}\n",
                cert.n(),
                cert.m(),
                norm_k,
                cert.schedule.epsilons
            )
        }
        OutputFormat::Csv => return Err(CliFailure::error("csv output is only for rootlocus")),
    };
    Ok(Outcome {
        stdout,
        exit_code: 0,
    })
}

#[derive(Serialize)]
struct PredictedOut {
    re: f64,
    im: f64,
    origin: EigenOrigin,
    case: CaseLabel,
    index: Option<usize>,
}

#[derive(Serialize)]
struct JordanOut {
    eigenvalue: f64,
    first: Vec<[f64; 2]>,
    second: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct SpectrumReport {
    command: &'static str,
    mode: Mode,
    kappa: f64,
    epsilons: Vec<f64>,
    diagonalizable: bool,
    eigenbasis_condition: Option<f64>,
    predicted: Vec<PredictedOut>,
    jordan_chains: Vec<JordanOut>,
    numeric: Vec<[f64; 2]>,
    max_pairing_distance: f64,
    matched: bool,
}

fn complex_list(values: &[Complex64]) -> Vec<[f64; 2]> {
    values.iter().map(|z| [z.re, z.im]).collect()
}

fn spectrum_report(
    cert: &CompletionCertificate,
    eigs_a: &HermitianEigenSystem,
    eigs_d: &HermitianEigenSystem,
) -> Result<SpectrumReport, CliFailure> {
    let inertia_d = inertia(eigs_d, cert.zero_tol);
    let mode = cert.schedule.mode;
    let prediction = spectral::predict_spectrum(cert, eigs_a, eigs_d, &inertia_d, mode)
        .map_err(|e| CliFailure::error(e.to_string()))?;
    let numeric =
        verify::numeric_spectrum(&cert.s).map_err(|e| CliFailure::error(e.to_string()))?;
    let tol = 1e-8 * (1.0 + crate::hermitian::spectral_norm(&cert.s));
    let comparison = verify::compare_spectra(&prediction.values(), &numeric, tol)
        .map_err(|e| CliFailure::error(e.to_string()))?;
    let eigenbasis_condition = if prediction.diagonalizable {
        let basis = spectral::eigenvector_matrix(cert, eigs_a, eigs_d, &inertia_d, mode)
            .map_err(|e| CliFailure::error(e.to_string()))?;
        let sigmas = crate::hermitian::all_singular_values(&basis);
        let smallest = sigmas.last().copied().unwrap_or(0.0);
        Some(if smallest > 0.0 {
            sigmas[0] / smallest
        } else {
            f64::INFINITY
        })
    } else {
        None
    };
    Ok(SpectrumReport {
        command: "spectrum",
        mode,
        kappa: cert.schedule.kappa,
        epsilons: cert.schedule.epsilons.clone(),
        diagonalizable: prediction.diagonalizable,
        eigenbasis_condition,
        predicted: prediction
            .eigens
            .iter()
            .map(|e| PredictedOut {
                re: e.value.re,
                im: e.value.im,
                origin: e.origin,
                case: e.case_label,
                index: e.index,
            })
            .collect(),
        jordan_chains: prediction
            .jordan_chains
            .iter()
            .map(|c| JordanOut {
                eigenvalue: c.eigenvalue,
                first: complex_list(&c.first),
                second: complex_list(&c.second),
            })
            .collect(),
        numeric: complex_list(&numeric),
        max_pairing_distance: comparison.max_distance,
        matched: comparison.matched,
    })
}

fn cert_from_spectrum_args(
    cert: &Option<PathBuf>,
    matrix_a: &Option<PathBuf>,
    matrix_d: &Option<PathBuf>,
    kappa: f64,
    mode: Mode,
    eps: Option<&str>,
    zero_tol: Option<f64>,
) -> Result<
    (
        CompletionCertificate,
        HermitianEigenSystem,
        HermitianEigenSystem,
    ),
    CliFailure,
> {
    if let Some(path) = cert {
        return load_certificate(path);
    }
    let (Some(a_path), Some(d_path)) = (matrix_a, matrix_d) else {
        return Err(CliFailure::error("provide either --cert or both -a and -d"));
    };
    let instance = prepare(a_path, d_path, zero_tol)?;
    let schedule = schedule_for(&instance, kappa, mode, eps)?;
    let cert = build_k_with_tol(
        &instance.eigs_a,
        &instance.eigs_d,
        &schedule,
        instance.zero_tol,
    )
    .map_err(|e| CliFailure::error(e.to_string()))?;
    Ok((cert, instance.eigs_a, instance.eigs_d))
}

fn run_spectrum(args: &SpectrumArgs) -> Result<Outcome, CliFailure> {
    let (cert, eigs_a, eigs_d) = cert_from_spectrum_args(
        &args.cert,
        &args.matrix_a,
        &args.matrix_d,
        args.kappa,
        args.mode.into(),
        args.eps.as_deref(),
        args.zero_tol,
    )?;
    let report = spectrum_report(&cert, &eigs_a, &eigs_d)?;
    let stdout = match args.out {
        OutputFormat::Json => jsonout::render_serialize(&report) + "\n",
        OutputFormat::Text => {
            let mut text = format!(
                "spectrum ({}, kappa = {}): diagonalizable = {}\n",
                report.mode, report.kappa, report.diagonalizable
            );
            for e in &report.predicted {
                text.push_str(&format!(
                    "  {} {:+e} {:+e}i (case {})\n",
                    match e.origin {
                        EigenOrigin::EtaPlus => "eta+",
                        EigenOrigin::EtaMinus => "eta-",
                        EigenOrigin::InheritedA => "lambda",
                        EigenOrigin::InheritedD => "mu",
                    },
                    e.re,
                    e.im,
                    e.case
                ));
            }
            text.push_str(&format!(
                "  numeric match: max distance {:e} ({})\n",
                report.max_pairing_distance,
                if report.matched { "ok" } else { "MISMATCH" }
            ));
            text
        }
        OutputFormat::Csv => return Err(CliFailure::error("csv output is only for rootlocus")),
    };
    let exit_code = if report.matched { 0 } else { 1 };
    Ok(Outcome { stdout, exit_code })
}

fn parse_grid(text: &str, lower_open: f64, upper_open: f64) -> Result<Vec<f64>, CliFailure> {
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(CliFailure::error(format!(
                "grid `{text}` must be start:end:step"
            )));
        }
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| CliFailure::error(format!("bad grid number `{s}`: {e}")))
        };
        let (start, end, step) = (parse(parts[0])?, parse(parts[1])?, parse(parts[2])?);
        if step.is_nan() || step <= 0.0 {
            return Err(CliFailure::error("grid step must be positive"));
        }
        let mut values = Vec::new();
        let mut v = start;
        let mut iter = 0;
        while v <= end + 1e-12 && iter < 100_000 {
            // Range grids are clipped to the admissible open interval.
            if v > lower_open && v < upper_open {
                values.push(v);
            }
            iter += 1;
            v = start + iter as f64 * step;
        }
        if values.is_empty() {
            return Err(CliFailure::error(
                "grid contains no admissible epsilon values",
            ));
        }
        Ok(values)
    } else {
        parse_eps_list(text)
    }
}

fn run_rootlocus(args: &RootlocusArgs) -> Result<Outcome, CliFailure> {
    let instance = prepare(&args.matrix_a, &args.matrix_d, None)?;
    let mode = args.mode.into();
    let grid = parse_grid(&args.grid, 0.0, args.kappa * args.kappa)?;
    let trajectory = spectral::root_locus(
        &instance.eigs_a,
        &instance.eigs_d,
        args.index,
        &grid,
        args.kappa,
        mode,
    )
    .map_err(|e| CliFailure::error(e.to_string()))?;
    let stdout = match args.out {
        OutputFormat::Csv => trajectory.to_csv(),
        OutputFormat::Json => trajectory.to_json() + "\n",
        OutputFormat::Text => {
            let mut text = format!(
                "root locus for index {} (boundaries: -mu/lambda = {}, alpha = {}, kappa^2 = {})\n",
                trajectory.index,
                trajectory.boundaries.neg_mu_over_lambda,
                trajectory.boundaries.alpha,
                trajectory.boundaries.kappa_sq
            );
            for point in &trajectory.points {
                text.push_str(&format!(
                    "  eps = {:.6}: eta+ = {:+.6}{:+.6}i, eta- = {:+.6}{:+.6}i (case {})\n",
                    point.epsilon,
                    point.eta_plus[0],
                    point.eta_plus[1],
                    point.eta_minus[0],
                    point.eta_minus[1],
                    point.label
                ));
            }
            text
        }
    };
    Ok(Outcome {
        stdout,
        exit_code: 0,
    })
}

#[derive(Serialize)]
struct FamilyEntry {
    vector: Vec<[f64; 2]>,
    signature: i8,
}

#[derive(Serialize)]
struct JframeOut {
    command: &'static str,
    exists: bool,
    rank_condition_ok: bool,
    violated_indices: Vec<usize>,
    is_jframe_matrix: bool,
    witness_failures: Vec<jframe::JFrameFailure>,
    bounds: Option<jframe::FrameBounds>,
    explicit_alpha_plus: Option<f64>,
    explicit_beta_plus: Option<f64>,
    explicit_alpha_minus: Option<f64>,
    explicit_beta_minus: Option<f64>,
    family: Option<Vec<FamilyEntry>>,
    operator_residual: Option<f64>,
}

fn run_jframe(args: &JframeArgs) -> Result<Outcome, CliFailure> {
    let (cert, eigs_a, eigs_d) = if let Some(path) = &args.cert {
        load_certificate(path)?
    } else {
        let (Some(a_path), Some(d_path)) = (&args.matrix_a, &args.matrix_d) else {
            return Err(CliFailure::error("provide either --cert or both -a and -d"));
        };
        let instance = prepare(a_path, d_path, args.zero_tol)?;
        // J-frame analysis pins kappa = 1, definite mode; the default
        // schedule keeps the spectrum real whenever the ranges allow it.
        let schedule = if args.eps.is_some() {
            schedule_for(&instance, 1.0, Mode::Definite, args.eps.as_deref())?
        } else {
            jframe::real_spectrum_epsilons(&instance.eigs_a, &instance.eigs_d, &instance.inertia_d)
                .map_err(|e| match e {
                    jframe::JFrameError::NotJFrame { .. } => {
                        CliFailure::infeasible(render_infeasible(
                            &instance.eigs_a,
                            &instance.eigs_d,
                            1.0,
                            Mode::Definite,
                            instance.zero_tol,
                        ))
                    }
                    other => CliFailure::error(other.to_string()),
                })?
        };
        let cert = build_k_with_tol(
            &instance.eigs_a,
            &instance.eigs_d,
            &schedule,
            instance.zero_tol,
        )
        .map_err(|e| CliFailure::error(e.to_string()))?;
        (cert, instance.eigs_a, instance.eigs_d)
    };

    let zero_tol = cert.zero_tol;
    let existence = jframe::jframe_existence(&eigs_a, &eigs_d, zero_tol)
        .map_err(|e| CliFailure::error(e.to_string()))?;
    let check = jframe::is_jframe_matrix(&cert.s, cert.n(), cert.m(), 1e-9)
        .map_err(|e| CliFailure::error(e.to_string()))?;
    let (bounds, explicit) = if check.is_jframe_matrix {
        let report =
            jframe::frame_bounds(&cert, 1e-9).map_err(|e| CliFailure::error(e.to_string()))?;
        let explicit = jframe::explicit_frame_bounds(&eigs_a, &eigs_d, &cert.schedule.epsilons);
        (report.bounds, Some(explicit))
    } else {
        (None, None)
    };
    let (family, operator_residual) = if args.synthesize && check.is_jframe_matrix {
        let family =
            jframe::synthesize_jframe(&cert, 1e-9).map_err(|e| CliFailure::error(e.to_string()))?;
        let op = jframe::frame_operator_matrix(&family);
        let residual = op.sub(&cert.s).expect("shape").frobenius_norm();
        let entries = family
            .vectors
            .iter()
            .zip(&family.signatures)
            .map(|(v, &s)| FamilyEntry {
                vector: complex_list(v),
                signature: s,
            })
            .collect();
        (Some(entries), Some(residual))
    } else {
        (None, None)
    };

    let out = JframeOut {
        command: "jframe",
        exists: existence.exists,
        rank_condition_ok: existence.rank_condition_ok,
        violated_indices: existence.violated_indices,
        is_jframe_matrix: check.is_jframe_matrix,
        witness_failures: check.witness_failures,
        bounds,
        explicit_alpha_plus: explicit.map(|e| e.0),
        explicit_beta_plus: explicit.map(|e| e.1),
        explicit_alpha_minus: explicit.map(|e| e.2),
        explicit_beta_minus: explicit.map(|e| e.3),
        family,
        operator_residual,
    };
    let stdout = match args.out {
        OutputFormat::Json => jsonout::render_serialize(&out) + "\n",
        OutputFormat::Text => {
            let mut text = format!(
                "jframe: exists = {}, is_jframe_matrix = {}\n",
                out.exists, out.is_jframe_matrix
            );
            if let Some(b) = &out.bounds {
                text.push_str(&format!(
                    "  bounds: alpha+ = {}, beta+ = {}, alpha- = {}, beta- = {}\n",
                    b.alpha_plus, b.beta_plus, b.alpha_minus, b.beta_minus
                ));
            }
            if let Some(res) = out.operator_residual {
                text.push_str(&format!(
                    "  synthesized family operator residual = {res:e}\n"
                ));
            }
            text
        }
        OutputFormat::Csv => return Err(CliFailure::error("csv output is only for rootlocus")),
    };
    let exit_code = if out.is_jframe_matrix { 0 } else { 2 };
    Ok(Outcome { stdout, exit_code })
}

#[derive(Serialize)]
struct VerifyOut {
    command: &'static str,
    mode: Mode,
    kappa: f64,
    feasible: bool,
    identities: Option<verify::IdentityReport>,
    spectrum_max_distance: Option<f64>,
    spectrum_matched: Option<bool>,
    eigenvalue_residual: Option<f64>,
    sampling_samples: Option<usize>,
    sampling_max_min_eig: Option<f64>,
    sampling_never_positive_definite: Option<bool>,
}

fn run_verify(args: &VerifyArgs) -> Result<Outcome, CliFailure> {
    let instance = prepare(&args.matrix_a, &args.matrix_d, args.zero_tol)?;
    let mode = args.mode.into();
    let verdict = check_feasible(
        &instance.eigs_a,
        &instance.eigs_d,
        args.kappa,
        mode,
        instance.zero_tol,
    )
    .map_err(|e| CliFailure::error(e.to_string()))?;

    let mut out = VerifyOut {
        command: "verify",
        mode,
        kappa: args.kappa,
        feasible: verdict.feasible,
        identities: None,
        spectrum_max_distance: None,
        spectrum_matched: None,
        eigenvalue_residual: None,
        sampling_samples: None,
        sampling_max_min_eig: None,
        sampling_never_positive_definite: None,
    };

    if verdict.feasible {
        let schedule = schedule_for(&instance, args.kappa, mode, args.eps.as_deref())?;
        let cert = build_k_with_tol(
            &instance.eigs_a,
            &instance.eigs_d,
            &schedule,
            instance.zero_tol,
        )
        .map_err(|e| CliFailure::error(e.to_string()))?;
        let n = cert.n();
        let m = cert.m();
        let a = cert.s.block(0, 0, n, n);
        let b = cert.s.block(0, n, n, m);
        let c = cert.s.block(n, 0, m, n);
        let d = cert.s.block(n, n, m, m);
        // The factorization identities need an invertible A.
        let identities = match verify::check_identities(
            &a,
            &b,
            &c,
            &d,
            &cert.k,
            verify::IdentityTolerances::default(),
        ) {
            Ok(report) => Some(report),
            Err(verify::VerifyError::SingularA) => None,
            Err(e) => return Err(CliFailure::error(e.to_string())),
        };
        let report = spectrum_report(&cert, &instance.eigs_a, &instance.eigs_d)?;
        let numeric: Vec<Complex64> = report
            .numeric
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        out.eigenvalue_residual = Some(verify::max_eigenvalue_residual(&cert.s, &numeric));
        out.identities = identities;
        out.spectrum_max_distance = Some(report.max_pairing_distance);
        out.spectrum_matched = Some(report.matched);
    } else {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(args.seed);
        let a = instance.eigs_a.reconstruct();
        let d = instance.eigs_d.reconstruct();
        let worst = max_min_eig_over_contractions(&a, &d, args.kappa, args.samples, &mut rng)
            .map_err(|e| CliFailure::error(e.to_string()))?;
        out.sampling_samples = Some(args.samples);
        out.sampling_max_min_eig = Some(worst);
        out.sampling_never_positive_definite = Some(worst <= instance.zero_tol);
    }

    let ok = out.identities.as_ref().map(|r| r.all_ok()).unwrap_or(true)
        && out.spectrum_matched.unwrap_or(true)
        && out.sampling_never_positive_definite.unwrap_or(true);
    let stdout = match args.out {
        OutputFormat::Json => jsonout::render_serialize(&out) + "\n",
        OutputFormat::Text => {
            let mut text = format!(
                "verify ({mode}, kappa = {}): feasible = {}\n",
                args.kappa, out.feasible
            );
            if let Some(r) = &out.identities {
                text.push_str(&format!(
                    "  factorization residual {:e}, determinant residual {:e}, inequalities ok = {}\n",
                    r.factorization_residual,
                    r.determinant_relative_residual,
                    r.weyl_ok && r.singular_product_ok && r.compression_ok
                ));
            }
            if let Some(d) = out.spectrum_max_distance {
                text.push_str(&format!("  spectrum pairing distance {d:e}\n"));
            }
            if let Some(w) = out.sampling_max_min_eig {
                text.push_str(&format!(
                    "  sampled {} contractions, max min-eigenvalue {w:e}\n",
                    out.sampling_samples.unwrap_or(0)
                ));
            }
            text
        }
        OutputFormat::Csv => return Err(CliFailure::error("csv output is only for rootlocus")),
    };
    let exit_code = if !verdict.feasible {
        2
    } else if ok {
        0
    } else {
        1
    };
    Ok(Outcome { stdout, exit_code })
}

#[derive(Serialize)]
struct DemoOut {
    command: &'static str,
    a: f64,
    epsilon: f64,
    alpha: f64,
    k: f64,
    s: MatrixJson,
    schur: f64,
    predicted: Vec<[f64; 2]>,
    case: CaseLabel,
    diagonalizable: bool,
    jordan_nullities: Option<[usize; 2]>,
    numeric: Vec<[f64; 2]>,
    max_pairing_distance: f64,
}

fn run_demo(args: &DemoArgs) -> Result<Outcome, CliFailure> {
    if args.a.is_nan() || args.a <= 0.0 {
        return Err(CliFailure::error(format!(
            "a must be positive, got {}",
            args.a
        )));
    }
    if args.eps.is_nan() || args.eps <= 0.0 || args.eps >= 1.0 {
        return Err(CliFailure::error(format!(
            "eps must lie in (0, 1), got {}",
            args.eps
        )));
    }
    let a_mat = ComplexMatrix::diag_real(&[args.a]);
    let d_mat = ComplexMatrix::diag_real(&[0.0]);
    let eigs_a = eigendecompose_hermitian(&a_mat, EigenOrder::Nonincreasing).expect("diagonal");
    let eigs_d = eigendecompose_hermitian(&d_mat, EigenOrder::Nondecreasing).expect("diagonal");
    let schedule = EpsilonSchedule {
        epsilons: vec![args.eps],
        kappa: 1.0,
        mode: Mode::Definite,
    };
    let cert = assemble_schedule(&eigs_a, &eigs_d, schedule, 1e-9)
        .map_err(|e| CliFailure::error(e.to_string()))?;
    let inertia_d = inertia(&eigs_d, 1e-9);
    let prediction =
        spectral::predict_spectrum(&cert, &eigs_a, &eigs_d, &inertia_d, Mode::Definite)
            .map_err(|e| CliFailure::error(e.to_string()))?;
    let numeric =
        verify::numeric_spectrum(&cert.s).map_err(|e| CliFailure::error(e.to_string()))?;
    let tol = 1e-8 * (1.0 + crate::hermitian::spectral_norm(&cert.s));
    let comparison = verify::compare_spectra(&prediction.values(), &numeric, tol)
        .map_err(|e| CliFailure::error(e.to_string()))?;

    let case = prediction.eigens[0].case_label;
    let jordan_nullities = if case == CaseLabel::D {
        let eta = Complex64::new(prediction.eigens[0].value.re, 0.0);
        let (d1, d2) = verify::jordan_rank_probe(&cert.s, eta, 1e-8);
        Some([d1, d2])
    } else {
        None
    };

    let out = DemoOut {
        command: "demo",
        a: args.a,
        epsilon: args.eps,
        alpha: 0.25,
        k: cert.k[(0, 0)].re,
        s: cert.s.to_json(),
        schur: cert.schur[(0, 0)].re,
        predicted: complex_list(&prediction.values()),
        case,
        diagonalizable: prediction.diagonalizable,
        jordan_nullities,
        numeric: complex_list(&numeric),
        max_pairing_distance: comparison.max_distance,
    };

    let stdout = match args.out {
        OutputFormat::Json => jsonout::render_serialize(&out) + "\n",
        OutputFormat::Text => {
            let mut text = format!(
                "demo: A = [{}], D = [0], kappa = 1, epsilon = {} (alpha = 1/4)\n",
                args.a, args.eps
            );
            text.push_str(&format!(
                "S = [[{}, {}], [{}, 0]], schur complement = [{}]\n",
                args.a,
                -args.a * args.eps.sqrt(),
                args.a * args.eps.sqrt(),
                out.schur
            ));
            match case {
                CaseLabel::D => {
                    text.push_str(&format!(
                        "double eigenvalue {} with a Jordan chain of length 2 (case d); S is NOT diagonalizable\n",
                        0.5 * args.a
                    ));
                    if let Some([d1, d2]) = out.jordan_nullities {
                        text.push_str(&format!(
                            "rank probe: nullity(S - etaI) = {d1}, nullity((S - etaI)^2) = {d2}\n"
                        ));
                    }
                }
                CaseLabel::C => {
                    text.push_str(&format!(
                        "non-real conjugate pair {:+e} ± {:e}i (case c); S is diagonalizable\n",
                        out.predicted[0][0],
                        out.predicted[0][1].abs()
                    ));
                }
                _ => {
                    text.push_str(&format!(
                        "two positive real eigenvalues {:e} and {:e} (case {}); S is diagonalizable\n",
                        out.predicted[0][0], out.predicted[1][0], case
                    ));
                }
            }
            text.push_str(&format!(
                "numeric spectrum agrees to {:e}\n",
                out.max_pairing_distance
            ));
            text
        }
        OutputFormat::Csv => return Err(CliFailure::error("csv output is only for rootlocus")),
    };
    Ok(Outcome {
        stdout,
        exit_code: 0,
    })
}
