//! Potential identification from the first eigenvalue: the threshold
//! tau = (h_a - h_b + integral of q over [a, rho(b))) / (rho(b) - a),
//! verdicts for the identification theorem, its Neumann corollaries and the
//! isolated-scale remark, and a numerical check of the telescoped integral
//! identity the proof rests on.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::problem::SLProblem;
use crate::solver::{assemble, checked_eigenpair, smallest_eigenvalues, Eigenpair};
use crate::timescale::Grid;

/// Did the threshold condition hold, forcing a constant potential?
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoremVerdict {
    AppliesQConstant,
    HypothesisNotMet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corollary1Verdict {
    Confirmed,
    MeanMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corollary2Verdict {
    NegativeEigenvalueFound,
    NotApplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RemarkVerdict {
    Applies,
    HypothesisNotMet,
    NotIsolated,
}

/// Outcome of the identification checks on one problem.
#[derive(Debug, Clone)]
pub struct AmbarzumyanReport {
    pub lambda1: f64,
    pub threshold: f64,
    pub verdict: TheoremVerdict,
    /// max |q(t_i) - lambda1| over equation points.
    pub q_deviation: f64,
    /// |LHS - RHS| of the telescoped proof identity.
    pub proof_residual: f64,
    /// lambda1 - threshold.
    pub lambda_excess: f64,
    /// lambda1 exceeded the threshold by more than the verdict tolerance;
    /// reported without interpretation.
    pub unexpected_regime: bool,
    /// Threshold condition held but q is not constant: the identification
    /// claim failed numerically on this instance.
    pub falsified: bool,
    /// Verdict band used for the comparisons above.
    pub ver_tol: f64,
    pub corollary2: Option<Corollary2Verdict>,
    pub remark: Option<RemarkVerdict>,
}

/// Band around the threshold inside which λ₁ ≥ τ is accepted: the exact
/// arithmetic inequality needs roundoff room at the equality boundary,
/// which is precisely the interesting (constant-potential) case.
pub fn verdict_tolerance(threshold: f64, lambda1: f64) -> f64 {
    1e-8 * threshold.abs().max(lambda1.abs()).max(1.0)
}

/// The identification threshold
/// tau = (h_a - h_b + integral_a^{rho(b)} q dt) / (rho(b) - a).
pub fn threshold(problem: &SLProblem, grid: &Arc<Grid>) -> Result<f64> {
    let n = grid.last_index();
    if n < 2 {
        return Err(Error::DegenerateScale);
    }
    let q = problem.sample_potential(grid)?;
    let integral = q.delta_integral(0, n - 1)?;
    let span = grid.rho_b() - grid.a();
    Ok((problem.h_a() - problem.h_b() + integral) / span)
}

fn q_deviation(problem: &SLProblem, grid: &Arc<Grid>, lambda1: f64) -> Result<f64> {
    let q = problem.sample_potential(grid)?;
    let n = grid.last_index();
    Ok(q.values()[..n - 1]
        .iter()
        .fold(0.0f64, |d, &v| d.max((v - lambda1).abs())))
}

fn first_eigenpair(problem: &SLProblem, grid: &Arc<Grid>, tol: f64) -> Result<(f64, Eigenpair)> {
    let matrix = assemble(problem, grid)?;
    let lambda1 = smallest_eigenvalues(&matrix, tol, 1)?[0];
    let (pair, _) = checked_eigenpair(problem, grid, lambda1, tol)?;
    Ok((lambda1, pair))
}

/// Checks the threshold condition at the given discretization and renders
/// the verdict. When the condition holds the potential must be constant
/// (equal to λ₁); a nonconstant potential in that regime falsifies the
/// identification claim and is flagged, not hidden.
pub fn verify_theorem1(problem: &SLProblem, h: f64, tol: f64) -> Result<AmbarzumyanReport> {
    let grid = problem.realize(h)?;
    let (lambda1, pair) = first_eigenpair(problem, &grid, tol)?;
    let tau = threshold(problem, &grid)?;
    let ver_tol = verdict_tolerance(tau, lambda1);
    let dev = q_deviation(problem, &grid, lambda1)?;
    let proof_residual = proof_identity_residual(problem, &pair, &grid)?;

    let applies = lambda1 >= tau - ver_tol;
    Ok(AmbarzumyanReport {
        lambda1,
        threshold: tau,
        verdict: if applies {
            TheoremVerdict::AppliesQConstant
        } else {
            TheoremVerdict::HypothesisNotMet
        },
        q_deviation: dev,
        proof_residual,
        lambda_excess: lambda1 - tau,
        unexpected_regime: lambda1 - tau > ver_tol,
        falsified: applies && dev > ver_tol,
        ver_tol,
        corollary2: None,
        remark: None,
    })
}

/// Neumann specialization: λ₁ equal to the mean of q forces q constant.
pub fn verify_corollary1(problem: &SLProblem, h: f64, tol: f64) -> Result<Corollary1Verdict> {
    require_neumann(problem, "corollary 1")?;
    let grid = problem.realize(h)?;
    let (lambda1, _) = first_eigenpair(problem, &grid, tol)?;
    let mean = threshold(problem, &grid)?; // h_a = h_b = 0: tau is the mean
    let ver_tol = verdict_tolerance(mean, lambda1);
    if (lambda1 - mean).abs() > ver_tol {
        return Ok(Corollary1Verdict::MeanMismatch);
    }
    let dev = q_deviation(problem, &grid, lambda1)?;
    if dev > ver_tol {
        return Err(Error::Falsified {
            claim: "mean-eigenvalue identification",
            detail: format!(
                "lambda1 = {lambda1} matches mean(q) = {mean} but q deviates by {dev:.3e}"
            ),
        });
    }
    Ok(Corollary1Verdict::Confirmed)
}

/// Neumann problem with zero-mean, not identically zero potential must have
/// a negative eigenvalue.
pub fn verify_corollary2(problem: &SLProblem, h: f64, tol: f64) -> Result<Corollary2Verdict> {
    require_neumann(problem, "corollary 2")?;
    let grid = problem.realize(h)?;
    let (lambda1, _) = first_eigenpair(problem, &grid, tol)?;
    let tau = threshold(problem, &grid)?;
    let ver_tol = verdict_tolerance(tau, lambda1);

    let q = problem.sample_potential(&grid)?;
    let n = grid.last_index();
    let integral = q.delta_integral(0, n - 1)?;
    let q_sup = q.values()[..n - 1].iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    if integral.abs() > ver_tol || q_sup <= ver_tol {
        return Ok(Corollary2Verdict::NotApplicable);
    }
    if lambda1 >= -ver_tol {
        return Err(Error::Falsified {
            claim: "negative-eigenvalue corollary",
            detail: format!(
                "zero-mean nonzero q but lambda1 = {lambda1} is not below -{ver_tol:.3e}"
            ),
        });
    }
    Ok(Corollary2Verdict::NegativeEigenvalueFound)
}

/// Isolated-scale Neumann variant: λ₁ at or above max q forces q constant.
/// Max is taken over equation points, the only values the operator sees.
pub fn verify_remark(problem: &SLProblem, tol: f64) -> Result<RemarkVerdict> {
    require_neumann(problem, "remark")?;
    if !problem.timescale().is_discrete() {
        return Ok(RemarkVerdict::NotIsolated);
    }
    let grid = problem.realize(1.0)?; // exact on isolated scales
    let (lambda1, _) = first_eigenpair(problem, &grid, tol)?;
    let q = problem.sample_potential(&grid)?;
    let n = grid.last_index();
    let q_max = q.values()[..n - 1]
        .iter()
        .fold(f64::NEG_INFINITY, |m, &v| m.max(v));
    let ver_tol = verdict_tolerance(q_max, lambda1);
    if lambda1 < q_max - ver_tol {
        return Ok(RemarkVerdict::HypothesisNotMet);
    }
    let dev = q_deviation(problem, &grid, lambda1)?;
    if dev > ver_tol {
        return Err(Error::Falsified {
            claim: "isolated-scale max-potential identification",
            detail: format!(
                "lambda1 = {lambda1} >= max q = {q_max} but q deviates by {dev:.3e}"
            ),
        });
    }
    Ok(RemarkVerdict::Applies)
}

/// Runs the theorem check and, on Neumann problems, the applicable
/// corollary and remark checks, assembling one report. Falsifications from
/// the corollary/remark checks propagate as errors.
pub fn verify_all(problem: &SLProblem, h: f64, tol: f64) -> Result<AmbarzumyanReport> {
    let mut report = verify_theorem1(problem, h, tol)?;
    if problem.is_neumann() {
        report.corollary2 = Some(verify_corollary2(problem, h, tol)?);
        report.remark = Some(verify_remark(problem, tol)?);
    }
    Ok(report)
}

/// Evaluates both sides of the telescoped integral identity
///
///   integral_a^{rho(b)} (y^d)^2 / (y^sigma y) dt
///     = h_a - h_b + integral_a^{rho(b)} q dt - lambda1 (rho(b) - a)
///
/// on the first eigenpair and returns |LHS - RHS|. Also verifies the
/// pointwise quotient identity
/// y^dd/y^sigma = (y^d)^2/(y^sigma y) + (y^d/y)^d at every interior index.
pub fn proof_identity_residual(
    problem: &SLProblem,
    first: &Eigenpair,
    grid: &Arc<Grid>,
) -> Result<f64> {
    let y = first.samples.values();
    // the identity divides by y and y^sigma: an exact zero is a breach of
    // the zero-free property (tiny tail values are fine, the terms are
    // ratios of like magnitudes)
    if let Some(i) = y.iter().position(|v| *v == 0.0) {
        return Err(Error::EigenfunctionVanishes(i));
    }
    let mu = grid.graininess();
    let n = grid.last_index();

    let yd: Vec<f64> = (0..n).map(|i| (y[i + 1] - y[i]) / mu[i]).collect();
    let mut lhs = 0.0;
    for i in 0..n - 1 {
        lhs += mu[i] * yd[i] * yd[i] / (y[i + 1] * y[i]);
    }

    let q = problem.sample_potential(grid)?;
    let integral = q.delta_integral(0, n - 1)?;
    let span = grid.rho_b() - grid.a();
    let rhs = problem.h_a() - problem.h_b() + integral - first.lambda * span;

    for i in 0..n - 1 {
        let ydd = (yd[i + 1] - yd[i]) / mu[i];
        let ratio = ydd / y[i + 1];
        let square = yd[i] * yd[i] / (y[i + 1] * y[i]);
        let log_diff = (yd[i + 1] / y[i + 1] - yd[i] / y[i]) / mu[i];
        let defect = (ratio - (square + log_diff)).abs();
        let scale = ratio.abs() + square.abs() + log_diff.abs() + 1.0;
        if defect > 1e-9 * scale {
            return Err(Error::Falsified {
                claim: "pointwise quotient identity",
                detail: format!("index {i}: defect {defect:.3e} against scale {scale:.3e}"),
            });
        }
    }

    Ok((lhs - rhs).abs())
}

fn require_neumann(problem: &SLProblem, check: &'static str) -> Result<()> {
    if !problem.is_neumann() {
        return Err(Error::NotNeumann { check, h_a: problem.h_a(), h_b: problem.h_b() });
    }
    Ok(())
}
