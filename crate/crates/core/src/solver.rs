//! Spectral pipeline for the boundary value problem on a realized grid:
//! tridiagonal assembly with Robin boundary folds, diagonal-similarity
//! symmetrization, Sturm-sequence bisection for the full spectrum, a
//! shooting characteristic function as an independent cross-check, and
//! generalized-zero counting for the oscillation structure.

use std::sync::Arc;

use crate::delta::GridFunction;
use crate::error::{Error, Result};
use crate::problem::SLProblem;
use crate::timescale::Grid;

/// Relative tolerance for treating a sample as a zero of an eigenfunction.
pub const ZERO_EPS: f64 = 1e-9;

/// Scale factor between the bisection tolerance and the residual gate.
const RESIDUAL_FACTOR: f64 = 1e3;

/// Safety factor of the matrix/shooting cross-check: |chi| at a computed
/// eigenvalue may not exceed this multiple of slope * bracket width.
const CROSS_FACTOR: f64 = 64.0;

/// Tridiagonal matrix stored by bands. `sub` couples a row to the previous
/// unknown, `sup` to the next; row r of an assembled operator corresponds
/// to interior equation r-1 and unknown y_{r}.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    sub: Vec<f64>,
    diag: Vec<f64>,
    sup: Vec<f64>,
}

impl Tridiagonal {
    pub fn new(sub: Vec<f64>, diag: Vec<f64>, sup: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || sub.len() + 1 != diag.len() || sup.len() + 1 != diag.len() {
            return Err(Error::BandLengths);
        }
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        if !finite(&sub) || !finite(&diag) || !finite(&sup) {
            return Err(Error::NonFiniteMatrix);
        }
        Ok(Tridiagonal { sub, diag, sup })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn sub(&self) -> &[f64] {
        &self.sub
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn sup(&self) -> &[f64] {
        &self.sup
    }

    pub fn is_symmetric(&self) -> bool {
        self.sub == self.sup
    }

    /// Interval certain to contain every eigenvalue.
    pub fn gershgorin_bounds(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.sub[i - 1].abs() } else { 0.0 }
                + if i < n - 1 { self.sup[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Matrix-vector product defect max_i |(A v)_i - lambda v_i|.
    pub fn defect(&self, v: &[f64], lambda: f64) -> f64 {
        assert_eq!(v.len(), self.dim());
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            let mut acc = self.diag[i] * v[i];
            if i > 0 {
                acc += self.sub[i - 1] * v[i - 1];
            }
            if i < n - 1 {
                acc += self.sup[i] * v[i + 1];
            }
            worst = worst.max((acc - lambda * v[i]).abs());
        }
        worst
    }
}

/// Assembles the interior operator: for equation index i = 0..N-2 the row
/// has subdiagonal -1/mu_i^2, diagonal 1/(mu_i mu_{i+1}) + 1/mu_i^2 + q_i
/// and superdiagonal -1/(mu_i mu_{i+1}); the boundary conditions eliminate
/// y_0 and y_N, folding -1/(mu_0^2 (1+h_a mu_0)) into the first diagonal
/// and -(1+h_b mu_{N-1})/(mu_{N-2} mu_{N-1}) into the last.
pub fn assemble(problem: &SLProblem, grid: &Arc<Grid>) -> Result<Tridiagonal> {
    let n = grid.last_index();
    if n < 2 {
        return Err(Error::GridTooSmall { need: 3, have: grid.len() });
    }
    let mu = grid.graininess();
    let q = problem.sample_potential(grid)?;
    let qv = q.values();

    let fold_a = 1.0 + problem.h_a() * mu[0];
    if fold_a.abs() <= crate::problem::ROBIN_GUARD {
        return Err(Error::SingularRobin { side: "a", value: fold_a });
    }
    let fold_b = 1.0 + problem.h_b() * mu[n - 1];
    if fold_b.abs() <= crate::problem::ROBIN_GUARD {
        return Err(Error::SingularRobin { side: "b", value: fold_b });
    }

    let m = n - 1;
    let mut diag = Vec::with_capacity(m);
    let mut sub = Vec::with_capacity(m - 1);
    let mut sup = Vec::with_capacity(m - 1);
    for i in 0..m {
        diag.push(1.0 / (mu[i] * mu[i + 1]) + 1.0 / (mu[i] * mu[i]) + qv[i]);
        if i > 0 {
            sub.push(-1.0 / (mu[i] * mu[i]));
        }
        if i < m - 1 {
            sup.push(-1.0 / (mu[i] * mu[i + 1]));
        }
    }
    diag[0] -= 1.0 / (mu[0] * mu[0] * fold_a);
    diag[m - 1] -= fold_b / (mu[n - 2] * mu[n - 1]);
    Tridiagonal::new(sub, diag, sup)
}

/// Diagonal similarity transform onto a symmetric tridiagonal with the same
/// spectrum: off-diagonal beta_r = sqrt(sup_r * sub_r), diagonal unchanged.
pub fn symmetrize(m: &Tridiagonal) -> Result<Tridiagonal> {
    if m.is_symmetric() {
        return Ok(m.clone());
    }
    let mut beta = Vec::with_capacity(m.sub.len());
    for (r, (&e, &c)) in m.sup.iter().zip(&m.sub).enumerate() {
        let prod = e * c;
        if prod.is_nan() || prod <= 0.0 {
            return Err(Error::NotSymmetrizable(r + 1));
        }
        beta.push(prod.sqrt());
    }
    Tridiagonal::new(beta.clone(), m.diag.clone(), beta)
}

/// Number of eigenvalues strictly below `x`: the count of negative pivots
/// in the LDL^t factorization of A - xI, with near-zero pivots replaced by
/// a signed guard value.
pub fn count_below(m: &Tridiagonal, x: f64) -> usize {
    assert!(m.is_symmetric(), "count_below needs a symmetric tridiagonal");
    let scale = m
        .diag
        .iter()
        .chain(&m.sub)
        .fold(1.0f64, |s, v| s.max(v.abs()));
    let pivot_guard = f64::EPSILON * scale * scale;
    let mut count = 0usize;
    let mut pivot = m.diag[0] - x;
    if pivot < 0.0 {
        count += 1;
    }
    for i in 1..m.dim() {
        let safe = if pivot.abs() < pivot_guard {
            if pivot >= 0.0 { pivot_guard } else { -pivot_guard }
        } else {
            pivot
        };
        pivot = (m.diag[i] - x) - m.sub[i - 1] * m.sub[i - 1] / safe;
        if pivot < 0.0 {
            count += 1;
        }
    }
    count
}

fn bisect_eigenvalues(m: &Tridiagonal, tol: f64, count: usize) -> Result<Vec<f64>> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::NonPositiveTolerance(tol));
    }
    let sym = symmetrize(m)?;
    let (gl, gh) = sym.gershgorin_bounds();
    let radius = gl.abs().max(gh.abs()).max(1.0);
    let pad = 8.0 * f64::EPSILON * radius + f64::MIN_POSITIVE;
    let (gl, gh) = (gl - pad, gh + pad);
    let abstol = tol * radius;

    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let (mut lo, mut hi) = (gl, gh);
        for _ in 0..210 {
            let target = abstol + 2.0 * f64::EPSILON * lo.abs().max(hi.abs());
            if hi - lo <= target {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if count_below(&sym, mid) <= k {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::BracketFailure(k));
        }
        out.push(0.5 * (lo + hi));
    }
    Ok(out)
}

/// All eigenvalues in ascending order, each bracketed by Sturm bisection to
/// width tol * max(1, Gershgorin radius) plus the floating-point floor.
pub fn eigenvalues(m: &Tridiagonal, tol: f64) -> Result<Spectrum> {
    Spectrum::new(bisect_eigenvalues(m, tol, m.dim())?)
}

/// The lowest `count` eigenvalues only; cheaper than the full spectrum on
/// large grids.
pub fn smallest_eigenvalues(m: &Tridiagonal, tol: f64, count: usize) -> Result<Vec<f64>> {
    bisect_eigenvalues(m, tol, count.min(m.dim()))
}

/// Strictly increasing eigenvalue list of the full interior operator.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue(i));
        }
        for i in 1..values.len() {
            if values[i] <= values[i - 1] {
                return Err(Error::NotStrictlyIncreasing(i));
            }
        }
        Ok(Spectrum { values })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Solves (A - shift I) x = b in place by LU with partial pivoting on the
/// bands (one superdiagonal of fill-in), the dgttrf/dgtts2 scheme. Exactly
/// singular pivots are replaced by a signed tiny value; inverse iteration
/// wants the shift as close to an eigenvalue as possible.
fn solve_shifted(m: &Tridiagonal, shift: f64, b: &mut [f64]) {
    let n = m.dim();
    let mut dl = m.sub.clone();
    let mut d: Vec<f64> = m.diag.iter().map(|v| v - shift).collect();
    let mut du = m.sup.clone();
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    let mut swapped = vec![false; n.saturating_sub(1)];
    let scale = m
        .diag
        .iter()
        .chain(&m.sub)
        .chain(&m.sup)
        .fold(shift.abs().max(1.0), |s, v| s.max(v.abs()));
    let tiny = f64::EPSILON * f64::EPSILON * scale;

    for i in 0..n.saturating_sub(1) {
        if d[i].abs() >= dl[i].abs() {
            if d[i].abs() < tiny {
                d[i] = if d[i] < 0.0 { -tiny } else { tiny };
            }
            let f = dl[i] / d[i];
            dl[i] = f;
            d[i + 1] -= f * du[i];
            if i + 1 < n - 1 {
                du2[i] = 0.0;
            }
        } else {
            let f = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = f;
            let old_next = d[i + 1];
            d[i + 1] = du[i] - f * old_next;
            if i + 1 < n - 1 {
                du2[i] = du[i + 1];
                du[i + 1] *= -f;
            }
            du[i] = old_next;
            swapped[i] = true;
        }
    }
    if d[n - 1].abs() < tiny {
        d[n - 1] = if d[n - 1] < 0.0 { -tiny } else { tiny };
    }

    for i in 0..n.saturating_sub(1) {
        if swapped[i] {
            b.swap(i, i + 1);
        }
        b[i + 1] -= dl[i] * b[i];
    }
    b[n - 1] /= d[n - 1];
    if n >= 2 {
        b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
    }
}

/// Eigenvector of the interior operator at a converged eigenvalue, by
/// inverse iteration. The start vector is aperiodic so it overlaps every
/// eigenvector even on symmetric instances.
fn inverse_iteration(m: &Tridiagonal, lambda: f64) -> Vec<f64> {
    const GOLDEN: f64 = 0.618_033_988_749_894_9;
    let n = m.dim();
    let mut v: Vec<f64> = (0..n)
        .map(|i| ((i + 1) as f64 * GOLDEN).fract() * 2.0 - 1.0)
        .collect();
    for _ in 0..4 {
        solve_shifted(m, lambda, &mut v);
        let sup = v.iter().fold(0.0f64, |s, x| s.max(x.abs()));
        if !sup.is_finite() || sup == 0.0 {
            for (i, x) in v.iter_mut().enumerate() {
                *x = if i % 2 == 0 { 1.0 } else { 0.5 };
            }
            continue;
        }
        let inv = 1.0 / sup;
        for x in &mut v {
            *x *= inv;
        }
    }
    v
}

/// Forward-shot solution of the dynamic equation at a trial lambda.
///
/// Starts from y(a) = 1, y^d(a) = h_a (the boundary condition at a holds by
/// construction) and advances y_{i+1} = y_i + mu_i y^d_i together with
/// y^d_{i+1} = y^d_i + mu_i (q_i - lambda) y_{i+1}. Returns the boundary
/// defect chi = y^d(rho(b)) - h_b y(rho(b)) and the full sample vector.
/// To dodge overflow on fine grids with large lambda the running solution
/// is rescaled by its sup-norm every 64 steps (sign of chi is unaffected;
/// magnitudes are in the rescaled units).
pub fn shoot(problem: &SLProblem, grid: &Arc<Grid>, lambda: f64) -> Result<(f64, GridFunction)> {
    let q = problem.sample_potential(grid)?;
    let qv = q.values();
    let mu = grid.graininess();
    let n = grid.last_index();

    let mut y = Vec::with_capacity(grid.len());
    y.push(1.0);
    let mut yd = problem.h_a();
    for i in 0..n {
        let next = y[i] + mu[i] * yd;
        y.push(next);
        if i < n - 1 {
            yd += mu[i] * (qv[i] - lambda) * next;
        }
        if (i + 1) % 64 == 0 || next.abs() > 1e250 || yd.abs() > 1e250 {
            let sup = y.iter().fold(yd.abs(), |s, v| s.max(v.abs()));
            if sup > 1e120 {
                let inv = 1.0 / sup;
                for v in &mut y {
                    *v *= inv;
                }
                yd *= inv;
            }
        }
    }
    let chi = yd - problem.h_b() * y[n - 1];
    Ok((chi, GridFunction::new(Arc::clone(grid), y)?))
}

/// Eigenvalue with its normalized eigenfunction samples, generalized-zero
/// count, and interior equation residual.
#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub lambda: f64,
    /// Full samples y_0..y_N, normalized to sup-norm 1 and signed so that
    /// y(a) > 0.
    pub samples: GridFunction,
    pub zero_count: usize,
    /// Max defect of the boundary-folded interior equations.
    pub residual: f64,
}

/// Shooting defect at lambda and the derivative scale it is judged
/// against, both relative to the shot solution's sup-norm.
struct ChiObservation {
    chi: f64,
    deriv_sup: f64,
}

fn eigenpair_with_chi(
    problem: &SLProblem,
    grid: &Arc<Grid>,
    lambda: f64,
    tol: f64,
) -> Result<(Eigenpair, ChiObservation)> {
    // chi comes from the shooting route, the eigenvector from inverse
    // iteration on the assembled operator; the two stay independent.
    let (chi_raw, shot) = shoot(problem, grid, lambda)?;
    let shot_sup = shot.sup_norm();
    if shot_sup == 0.0 {
        return Err(Error::AllZero);
    }
    let chi = chi_raw / shot_sup;
    let deriv_sup = shot.delta_derivative()?.sup_norm() / shot_sup;

    let matrix = assemble(problem, grid)?;
    let interior = inverse_iteration(&matrix, lambda);

    let mu = grid.graininess();
    let n = grid.last_index();
    let mut values = Vec::with_capacity(grid.len());
    values.push(interior[0] / (1.0 + problem.h_a() * mu[0]));
    values.extend_from_slice(&interior);
    values.push(interior[n - 2] * (1.0 + problem.h_b() * mu[n - 1]));
    let sup = values.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    if sup == 0.0 {
        return Err(Error::AllZero);
    }
    let sign = if values[0] < 0.0 { -1.0 } else { 1.0 };
    let inv = sign / sup;
    for v in &mut values {
        *v *= inv;
    }

    let q = problem.sample_potential(grid)?;
    let qv = q.values();
    let mut residual = 0.0f64;
    for i in 0..n - 1 {
        let d_here = (values[i + 1] - values[i]) / mu[i];
        let d_next = (values[i + 2] - values[i + 1]) / mu[i + 1];
        let ydd = (d_next - d_here) / mu[i];
        residual = residual.max((-ydd + (qv[i] - lambda) * values[i + 1]).abs());
    }

    let (gl, gh) = matrix.gershgorin_bounds();
    let bound =
        RESIDUAL_FACTOR * tol.max(8.0 * f64::EPSILON) * gl.abs().max(gh.abs()).max(1.0);
    if residual > bound {
        return Err(Error::NotAnEigenvalue { lambda, residual, bound });
    }

    let samples = GridFunction::new(Arc::clone(grid), values)?;
    let zero_count = count_generalized_zeros(&samples)?;
    Ok((Eigenpair { lambda, samples, zero_count, residual }, ChiObservation { chi, deriv_sup }))
}

/// Recovers the eigenpair at a converged eigenvalue by shooting; errors if
/// the equation residual shows lambda was not an eigenvalue.
pub fn eigenpair(
    problem: &SLProblem,
    grid: &Arc<Grid>,
    lambda: f64,
    tol: f64,
) -> Result<Eigenpair> {
    eigenpair_with_chi(problem, grid, lambda, tol).map(|(p, _)| p)
}

/// Normalized shooting defect at lambda: chi divided by the shot
/// solution's sup-norm, so values at different lambda are comparable.
fn chi_normalized(problem: &SLProblem, grid: &Arc<Grid>, lambda: f64) -> Result<f64> {
    let (chi, shot) = shoot(problem, grid, lambda)?;
    let sup = shot.sup_norm();
    if sup == 0.0 {
        return Err(Error::AllZero);
    }
    Ok(chi / sup)
}

/// As `eigenpair`, but also enforces the matrix/shooting duality.
///
/// The normalized defect chi at the matrix eigenvalue must be explainable
/// by the eigenvalue's bracket width: |chi| <= C * |chi'| * width, with the
/// slope chi' estimated by central differences from two extra shots. On a
/// mid-gap value the defect is larger by the gap-to-width ratio, so the
/// check discriminates sharply while tolerating the exponential
/// lambda-sensitivity stiff instances give the shooting route.
pub fn checked_eigenpair(
    problem: &SLProblem,
    grid: &Arc<Grid>,
    lambda: f64,
    tol: f64,
) -> Result<(Eigenpair, CrossCheck)> {
    let (pair, obs) = eigenpair_with_chi(problem, grid, lambda, tol)?;

    let (gl, gh) = assemble(problem, grid)?.gershgorin_bounds();
    let radius = gl.abs().max(gh.abs()).max(1.0);
    let width = (tol.max(8.0 * f64::EPSILON) + 4.0 * f64::EPSILON) * radius;
    // The slope must be sampled at the bracket-width scale: farther out the
    // normalized chi saturates (the growing fundamental solution dominates
    // numerator and denominator alike) and the estimate collapses.
    let delta = 8.0 * width;
    let hi = chi_normalized(problem, grid, lambda + delta)?;
    let lo = chi_normalized(problem, grid, lambda - delta)?;
    let slope = (hi - lo).abs() / (2.0 * delta);
    let floor = 1e-12 * (1.0 + obs.deriv_sup + problem.h_b().abs());
    let bound = CROSS_FACTOR * slope * width + floor;
    if obs.chi.abs() > bound {
        return Err(Error::CrossCheck { lambda, chi: obs.chi, bound });
    }
    Ok((pair, CrossCheck { chi: obs.chi, bound }))
}

/// Counts generalized zeros of a sample vector in the open interval (a, b):
/// interior points that are zeros up to roundoff, plus interior sign-change
/// pairs whose endpoints are not such zeros (a zero subsumes the adjacent
/// sign change: the definition offers zero and node as alternatives for one
/// generalized zero).
///
/// A point is a roundoff zero when |y_j| <= ZERO_EPS * max of its
/// neighbors' magnitudes. The threshold is local: an eigenfunction tail
/// decaying through a high-barrier region legitimately drops many orders
/// below the sup-norm without ever changing sign, and a sup-relative
/// threshold would count every tail sample as a zero. One grid step can
/// shrink the solution by at most a bounded factor, so a sample that is
/// nine orders below both neighbors can only be a genuine crossing.
///
/// Sign changes across the two boundary gaps (a, sigma(a)) and
/// (rho(b), b) are forced by the boundary folds, carry no oscillation
/// information, and are not counted.
pub fn count_generalized_zeros(samples: &GridFunction) -> Result<usize> {
    assert!(samples.is_full(), "zero counting needs values at every grid point");
    if samples.sup_norm() == 0.0 {
        return Err(Error::AllZero);
    }
    let v = samples.values();
    let n = v.len() - 1;
    let is_zero = |j: usize| {
        debug_assert!(j >= 1 && j < n);
        v[j].abs() <= ZERO_EPS * v[j - 1].abs().max(v[j + 1].abs())
    };
    let mut count = 0usize;
    for j in 1..n {
        if is_zero(j) {
            count += 1;
        }
    }
    for i in 1..n.saturating_sub(1) {
        if v[i] * v[i + 1] < 0.0 && !is_zero(i) && !is_zero(i + 1) {
            count += 1;
        }
    }
    Ok(count)
}

/// One matrix/shooting consistency record: the scaled boundary defect at a
/// computed eigenvalue and the tolerance it was held to.
#[derive(Debug, Clone, Copy)]
pub struct CrossCheck {
    pub chi: f64,
    pub bound: f64,
}

/// Full spectral solve on a realized grid: eigenvalues, eigenpairs, and the
/// per-eigenvalue shooting cross-check.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    pub grid: Arc<Grid>,
    pub spectrum: Spectrum,
    pub eigenpairs: Vec<Eigenpair>,
    pub cross_checks: Vec<CrossCheck>,
}

impl SpectrumResult {
    /// Largest |chi| / bound ratio over all eigenvalues.
    pub fn cross_check_worst(&self) -> f64 {
        self.cross_checks
            .iter()
            .fold(0.0f64, |w, c| w.max(c.chi.abs() / c.bound))
    }
}

/// Realizes the scale at step `h` and solves: assemble, symmetrize, bisect
/// all eigenvalues, then recover each eigenpair by shooting and verify that
/// the characteristic function vanishes there.
pub fn spectrum(problem: &SLProblem, h: f64, tol: f64) -> Result<SpectrumResult> {
    let grid = problem.realize(h)?;
    spectrum_on_grid(problem, &grid, tol)
}

/// As `spectrum`, on an existing grid.
pub fn spectrum_on_grid(
    problem: &SLProblem,
    grid: &Arc<Grid>,
    tol: f64,
) -> Result<SpectrumResult> {
    let matrix = assemble(problem, grid)?;
    let spec = eigenvalues(&matrix, tol)?;
    let mut eigenpairs = Vec::with_capacity(spec.len());
    let mut cross_checks = Vec::with_capacity(spec.len());
    for &lambda in spec.eigenvalues() {
        let (pair, check) = checked_eigenpair(problem, grid, lambda, tol)?;
        cross_checks.push(check);
        eigenpairs.push(pair);
    }
    Ok(SpectrumResult { grid: Arc::clone(grid), spectrum: spec, eigenpairs, cross_checks })
}
