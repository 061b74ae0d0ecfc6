//! Command-line driver.
//!
//! Exit codes: 0 on success with all verdicts consistent, 1 on usage or
//! I/O errors, 2 when a verification check is numerically falsified.
//! Reports go to standard output (or --out); diagnostics to standard
//! error.

mod schema;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

use deltaspec::{
    verify_corollary1, verify_corollary2, verify_remark, verify_theorem1, Corollary1Verdict,
    Corollary2Verdict, Error as CoreError, Grid, PointOrigin, RemarkVerdict, SLProblem,
    SpectrumResult, TheoremVerdict,
};
use schema::{GridFile, GridMeta, ReportFile, SolverMeta, Verdicts, VerifyFile};

const EXIT_OK: i32 = 0;
const EXIT_ERROR: i32 = 1;
const EXIT_FALSIFIED: i32 = 2;

#[derive(Parser)]
#[command(
    name = "deltaspec",
    version,
    about = "Spectra of Sturm-Liouville dynamic equations on bounded time scales"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the spectrum, eigenfunctions, and oscillation counts
    Solve {
        /// Problem file (JSON)
        #[arg(long)]
        problem: PathBuf,
        /// Sampling step for dense segments; defaults to (b-a)/1000
        #[arg(long)]
        step: Option<f64>,
        /// Eigenvalue bisection tolerance (relative to the spectral radius)
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// How many eigenvalues to report; defaults to min(M, 8)
        #[arg(long)]
        num_eigs: Option<usize>,
        /// Write the report here instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write eigenfunction samples as CSV (t, y1(t), ..., yk(t))
        #[arg(long)]
        eigenfunctions: Option<PathBuf>,
    },
    /// Check the potential-identification statements on a problem
    Verify {
        #[arg(long)]
        problem: PathBuf,
        /// Which statement to check
        #[arg(long, value_enum, default_value_t = CheckKind::All)]
        check: CheckKind,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dump the realized grid for a problem
    Grid {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckKind {
    Theorem1,
    Corollary1,
    Corollary2,
    Remark,
    All,
}

fn main() {
    let code = match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Solve { problem, step, tol, num_eigs, out, eigenfunctions } => {
            let problem = load_problem(&problem)?;
            let h = step.unwrap_or_else(|| problem.default_step());
            solve(&problem, h, tol, num_eigs, out.as_deref(), eigenfunctions.as_deref())
        }
        Command::Verify { problem, check, step, tol, out } => {
            let problem = load_problem(&problem)?;
            let h = step.unwrap_or_else(|| problem.default_step());
            verify(&problem, check, h, tol, out.as_deref())
        }
        Command::Grid { problem, step, out } => {
            let problem = load_problem(&problem)?;
            let h = step.unwrap_or_else(|| problem.default_step());
            let grid = problem.realize(h)?;
            let file = GridFile {
                a: grid.a(),
                b: grid.b(),
                rho_b: grid.rho_b(),
                n_points: grid.len(),
                step: grid.step(),
                points: grid.points().to_vec(),
                graininess: grid.graininess().to_vec(),
                origin: grid
                    .origin()
                    .iter()
                    .map(|o| {
                        match o {
                            PointOrigin::Original => "original",
                            PointOrigin::Sampled => "sampled",
                        }
                        .to_string()
                    })
                    .collect(),
            };
            emit(out.as_deref(), &serde_json::to_string_pretty(&file)?)?;
            Ok(EXIT_OK)
        }
    }
}

fn load_problem(path: &Path) -> anyhow::Result<SLProblem> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read problem file {}", path.display()))?;
    schema::parse_problem(&text)
}

fn grid_meta(grid: &Arc<Grid>) -> GridMeta {
    GridMeta {
        n_points: grid.len(),
        step: grid.step(),
        a: grid.a(),
        b: grid.b(),
        rho_b: grid.rho_b(),
    }
}

fn solve(
    problem: &SLProblem,
    h: f64,
    tol: f64,
    num_eigs: Option<usize>,
    out: Option<&Path>,
    eigenfunctions: Option<&Path>,
) -> anyhow::Result<i32> {
    let result = deltaspec::spectrum(problem, h, tol)?;
    let m = result.spectrum.len();
    let count = num_eigs.unwrap_or_else(|| m.min(8)).min(m);

    let report = verify_theorem1(problem, h, tol)?;
    let mut notes = Vec::new();
    if report.unexpected_regime {
        notes.push(format!(
            "unexpected-regime: lambda1 exceeds the threshold by {:.3e}",
            report.lambda_excess
        ));
    }

    let file = ReportFile {
        eigenvalues: result.spectrum.eigenvalues()[..count].to_vec(),
        zero_counts: result.eigenpairs[..count].iter().map(|p| p.zero_count).collect(),
        lambda1: report.lambda1,
        threshold: report.threshold,
        verdicts: Verdicts {
            theorem1: Some(theorem1_name(&report.verdict, report.falsified).to_string()),
            ..Verdicts::default()
        },
        q_deviation: report.q_deviation,
        proof_residual: report.proof_residual,
        grid: grid_meta(&result.grid),
        solver: SolverMeta {
            tol,
            cross_check_max_ratio: result.cross_check_worst(),
            residual_max: result
                .eigenpairs
                .iter()
                .fold(0.0f64, |r, p| r.max(p.residual)),
        },
        notes,
    };
    emit(out, &serde_json::to_string_pretty(&file)?)?;

    if let Some(path) = eigenfunctions {
        fs::write(path, eigenfunction_csv(&result, count))
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(if report.falsified { EXIT_FALSIFIED } else { EXIT_OK })
}

fn eigenfunction_csv(result: &SpectrumResult, count: usize) -> String {
    let mut csv = String::from("t");
    for k in 1..=count {
        let _ = write!(csv, ",y{k}");
    }
    csv.push('\n');
    for (i, t) in result.grid.points().iter().enumerate() {
        let _ = write!(csv, "{t:.16e}");
        for pair in &result.eigenpairs[..count] {
            let _ = write!(csv, ",{:.16e}", pair.samples.values()[i]);
        }
        csv.push('\n');
    }
    csv
}

fn theorem1_name(verdict: &TheoremVerdict, falsified: bool) -> &'static str {
    if falsified {
        return "falsified";
    }
    match verdict {
        TheoremVerdict::AppliesQConstant => "theorem-applies-q-constant",
        TheoremVerdict::HypothesisNotMet => "hypothesis-not-met",
    }
}

fn verify(
    problem: &SLProblem,
    check: CheckKind,
    h: f64,
    tol: f64,
    out: Option<&Path>,
) -> anyhow::Result<i32> {
    let report = verify_theorem1(problem, h, tol)?;
    let mut falsified = report.falsified;
    let mut verdicts = Verdicts::default();
    let mut notes = Vec::new();
    if report.unexpected_regime {
        notes.push(format!(
            "unexpected-regime: lambda1 exceeds the threshold by {:.3e}",
            report.lambda_excess
        ));
    }

    if matches!(check, CheckKind::Theorem1 | CheckKind::All) {
        verdicts.theorem1 = Some(theorem1_name(&report.verdict, report.falsified).to_string());
    }
    let wants = |kind: CheckKind| check == kind || check == CheckKind::All;
    let neumann_or_skip = |kind: CheckKind, name: &str| -> anyhow::Result<bool> {
        if problem.is_neumann() {
            return Ok(true);
        }
        // an explicit request for a Neumann-only check on a Robin problem
        // is a usage error; under --check all it is silently inapplicable
        if check == kind {
            anyhow::bail!("{name} requires Neumann conditions (h_a = h_b = 0)");
        }
        Ok(false)
    };

    if wants(CheckKind::Corollary1) && neumann_or_skip(CheckKind::Corollary1, "corollary1")? {
        match verify_corollary1(problem, h, tol) {
            Ok(Corollary1Verdict::Confirmed) => verdicts.corollary1 = Some("confirmed".into()),
            Ok(Corollary1Verdict::MeanMismatch) => {
                verdicts.corollary1 = Some("mean-mismatch".into())
            }
            Err(CoreError::Falsified { claim, detail }) => {
                verdicts.corollary1 = Some("falsified".into());
                notes.push(format!("{claim}: {detail}"));
                falsified = true;
            }
            Err(e) => return Err(e.into()),
        }
    }
    if wants(CheckKind::Corollary2) && neumann_or_skip(CheckKind::Corollary2, "corollary2")? {
        match verify_corollary2(problem, h, tol) {
            Ok(Corollary2Verdict::NegativeEigenvalueFound) => {
                verdicts.corollary2 = Some("negative-eigenvalue-found".into())
            }
            Ok(Corollary2Verdict::NotApplicable) => {
                verdicts.corollary2 = Some("not-applicable".into())
            }
            Err(CoreError::Falsified { claim, detail }) => {
                verdicts.corollary2 = Some("falsified".into());
                notes.push(format!("{claim}: {detail}"));
                falsified = true;
            }
            Err(e) => return Err(e.into()),
        }
    }
    if wants(CheckKind::Remark) && neumann_or_skip(CheckKind::Remark, "remark")? {
        match verify_remark(problem, tol) {
            Ok(RemarkVerdict::Applies) => verdicts.remark = Some("applies".into()),
            Ok(RemarkVerdict::HypothesisNotMet) => {
                verdicts.remark = Some("hypothesis-not-met".into())
            }
            Ok(RemarkVerdict::NotIsolated) => verdicts.remark = Some("not-isolated".into()),
            Err(CoreError::Falsified { claim, detail }) => {
                verdicts.remark = Some("falsified".into());
                notes.push(format!("{claim}: {detail}"));
                falsified = true;
            }
            Err(e) => return Err(e.into()),
        }
        if verdicts.remark.as_deref() != Some("not-isolated") {
            if let Some(note) = remark_qmax_note(problem, h, report.ver_tol)? {
                notes.push(note);
            }
        }
    }

    let grid = problem.realize(h)?;
    let file = VerifyFile {
        lambda1: report.lambda1,
        threshold: report.threshold,
        lambda_excess: report.lambda_excess,
        ver_tol: report.ver_tol,
        q_deviation: report.q_deviation,
        proof_residual: report.proof_residual,
        unexpected_regime: report.unexpected_regime,
        falsified,
        verdicts,
        grid: grid_meta(&grid),
        notes,
    };
    emit(out, &serde_json::to_string_pretty(&file)?)?;
    Ok(if falsified { EXIT_FALSIFIED } else { EXIT_OK })
}

/// The remark compares lambda1 against max q over equation points; when the
/// max over all grid points differs (q at rho(b) or b is an outlier) the
/// report says so.
fn remark_qmax_note(problem: &SLProblem, h: f64, ver_tol: f64) -> anyhow::Result<Option<String>> {
    let grid = problem.realize(h)?;
    let q = deltaspec::SLProblem::sample_potential(problem, &grid)?;
    let n = grid.last_index();
    let max_eq = q.values()[..n - 1]
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let max_all = q.values().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max_all - max_eq > ver_tol {
        return Ok(Some(format!(
            "remark: max q over equation points is {max_eq}, but q reaches {max_all} at or beyond rho(b)"
        )));
    }
    Ok(None)
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n"))
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => println!("{text}"),
    }
    Ok(())
}
