//! Shared fixtures for the integration suites: randomized problem
//! generators and an eigenvalue oracle that is independent of the
//! LDL^t/bisection path under test.

#![allow(dead_code)]
// index-chasing reads better than iterator chains in the rotation math
#![allow(clippy::needless_range_loop)]

use rand::Rng;

use deltaspec::{discrete_scale, PotentialSpec, SLProblem, Segment, TimeScale, Tridiagonal};

/// det(A - x I) by the three-term recurrence of leading principal minors.
pub fn charpoly(m: &Tridiagonal, x: f64) -> f64 {
    let n = m.dim();
    let mut prev = 1.0;
    let mut cur = m.diag()[0] - x;
    for r in 1..n {
        let next = (m.diag()[r] - x) * cur - m.sub()[r - 1] * m.sup()[r - 1] * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// All eigenvalues of a symmetrizable tridiagonal matrix by cyclic Jacobi
/// rotations on the dense symmetrized form. Completely independent of the
/// Sturm-count bisection under test, and robust to clustered eigenvalues
/// (interlacing-cascade root finding on the minors is not: a localized top
/// eigenvector can make consecutive minors agree to below one ulp).
pub fn eigenvalues_by_jacobi(m: &Tridiagonal) -> Vec<f64> {
    let n = m.dim();
    let mut a = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        a[i][i] = m.diag()[i];
    }
    for i in 0..n - 1 {
        let beta = (m.sub()[i] * m.sup()[i]).sqrt();
        assert!(beta.is_finite() && beta > 0.0, "matrix not symmetrizable");
        a[i][i + 1] = beta;
        a[i + 1][i] = beta;
    }
    let norm = a
        .iter()
        .flatten()
        .fold(0.0f64, |s, v| s.max(v.abs()))
        .max(1e-300);

    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                off = off.max(a[p][q].abs());
            }
        }
        if off <= 1e-15 * norm {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq.abs() <= 1e-18 * norm {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    if k != p && k != q {
                        let akp = a[k][p];
                        let akq = a[k][q];
                        a[k][p] = c * akp - s * akq;
                        a[p][k] = a[k][p];
                        a[k][q] = s * akp + c * akq;
                        a[q][k] = a[k][q];
                    }
                }
                let app = a[p][p];
                let aqq = a[q][q];
                a[p][p] = app - t * apq;
                a[q][q] = aqq + t * apq;
                a[p][q] = 0.0;
                a[q][p] = 0.0;
            }
        }
    }
    let mut eigs: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    eigs.sort_by(f64::total_cmp);
    eigs
}

pub struct RandomInstance {
    pub problem: SLProblem,
    pub n_points: usize,
}

/// Isolated scale with 4..=13 points and gaps in [0.1, 2].
pub fn random_isolated_scale(rng: &mut impl Rng) -> TimeScale {
    let n_points = rng.random_range(4..=13usize);
    let mut t = rng.random_range(-2.0..=2.0);
    let mut pts = Vec::with_capacity(n_points);
    pts.push(t);
    for _ in 1..n_points {
        t += rng.random_range(0.1..=2.0);
        pts.push(t);
    }
    discrete_scale(&pts).unwrap()
}

/// Per-point potential in [-5, 5], nonconstant over the equation points
/// (spread at least 0.1).
pub fn random_nonconstant_q(rng: &mut impl Rng, n_points: usize) -> Vec<f64> {
    loop {
        let q: Vec<f64> = (0..n_points).map(|_| rng.random_range(-5.0..=5.0)).collect();
        let eq = &q[..n_points - 2];
        let lo = eq.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = eq.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if hi - lo > 0.1 {
            return q;
        }
    }
}

/// Robin coefficient in [-2, 2] whose boundary fold 1 + h*mu stays
/// positive and away from zero (the identification theorem's validity
/// regime; a negative fold admits genuine counterexamples).
pub fn random_positive_fold(rng: &mut impl Rng, mu: f64) -> f64 {
    loop {
        let h = rng.random_range(-2.0..=2.0);
        if 1.0 + h * mu > 0.05 {
            return h;
        }
    }
}

/// Random isolated-scale Robin problem with nonconstant q and positive
/// boundary folds.
pub fn random_robin_instance(rng: &mut impl Rng) -> RandomInstance {
    let ts = random_isolated_scale(rng);
    let n_points = ts.segments().len();
    let q = random_nonconstant_q(rng, n_points);
    let mu_first = ts.graininess(ts.a()).unwrap();
    let rho_b = ts.rho(ts.b()).unwrap();
    let mu_last = ts.graininess(rho_b).unwrap();
    let h_a = random_positive_fold(rng, mu_first);
    let h_b = random_positive_fold(rng, mu_last);
    let problem = SLProblem::new(ts, PotentialSpec::per_segment(&q), h_a, h_b).unwrap();
    RandomInstance { problem, n_points }
}

/// Random isolated-scale Neumann problem with nonconstant q.
pub fn random_neumann_instance(rng: &mut impl Rng) -> RandomInstance {
    let ts = random_isolated_scale(rng);
    let n_points = ts.segments().len();
    let q = random_nonconstant_q(rng, n_points);
    let problem = SLProblem::neumann(ts, PotentialSpec::per_segment(&q)).unwrap();
    RandomInstance { problem, n_points }
}

pub fn integers(n: usize) -> TimeScale {
    discrete_scale(&(0..n).map(|k| k as f64).collect::<Vec<_>>()).unwrap()
}

pub fn unit_interval() -> TimeScale {
    TimeScale::new(vec![Segment::Interval { from: 0.0, to: 1.0 }]).unwrap()
}

/// Max |q(t_i) - c| over the equation points of a realized grid.
pub fn q_deviation_on_grid(problem: &SLProblem, h: f64, c: f64) -> f64 {
    let grid = problem.realize(h).unwrap();
    let q = problem.sample_potential(&grid).unwrap();
    let n = grid.last_index();
    q.values()[..n - 1].iter().fold(0.0f64, |d, &v| d.max((v - c).abs()))
}
