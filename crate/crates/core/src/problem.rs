//! The Sturm-Liouville problem on a time scale: a potential q, Robin
//! coefficients h_a and h_b, and the standing nondegeneracy assumptions
//! a != rho(b), 1 + h_a*mu(a) != 0, 1 + h_b*mu(rho(b)) != 0.

use std::sync::Arc;

use crate::delta::GridFunction;
use crate::error::{Error, Result};
use crate::timescale::{Grid, PointOrigin, Segment, TimeScale};

/// How the potential is specified on one time-scale segment.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialPiece {
    Constant(f64),
    /// Coefficients in ascending degree: c0 + c1*t + c2*t^2 + ...
    Polynomial(Vec<f64>),
    /// (t, value) pairs inside the segment; evaluated by linear
    /// interpolation, clamped beyond the first/last sample.
    Samples(Vec<(f64, f64)>),
}

/// Potential specification: exactly one piece per time-scale segment.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSpec {
    pieces: Vec<PotentialPiece>,
}

impl PotentialSpec {
    pub fn new(pieces: Vec<PotentialPiece>) -> Self {
        PotentialSpec { pieces }
    }

    /// Same constant on every segment of the given scale.
    pub fn constant(ts: &TimeScale, value: f64) -> Self {
        PotentialSpec { pieces: vec![PotentialPiece::Constant(value); ts.segments().len()] }
    }

    /// One constant per segment, e.g. per-point values on a discrete scale.
    pub fn per_segment(values: &[f64]) -> Self {
        PotentialSpec { pieces: values.iter().map(|&v| PotentialPiece::Constant(v)).collect() }
    }

    pub fn pieces(&self) -> &[PotentialPiece] {
        &self.pieces
    }

    fn validate(&self, ts: &TimeScale) -> Result<()> {
        if self.pieces.len() != ts.segments().len() {
            return Err(Error::PieceCountMismatch {
                expected: ts.segments().len(),
                got: self.pieces.len(),
            });
        }
        for (piece, seg) in self.pieces.iter().zip(ts.segments()) {
            if let PotentialPiece::Samples(pairs) = piece {
                if pairs.is_empty() {
                    return Err(Error::EmptySamples);
                }
                let tol = 1e-12 * ts.b().abs().max(1.0);
                for &(t, _) in pairs {
                    if t < seg.from() - tol || t > seg.to() + tol {
                        return Err(Error::SampleOutsideSegment(t));
                    }
                }
            }
        }
        Ok(())
    }

    fn eval_piece(piece: &PotentialPiece, t: f64) -> f64 {
        match piece {
            PotentialPiece::Constant(v) => *v,
            PotentialPiece::Polynomial(coeffs) => {
                coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
            }
            PotentialPiece::Samples(pairs) => {
                // pairs are sorted by t at problem construction
                if t <= pairs[0].0 {
                    return pairs[0].1;
                }
                let last = pairs[pairs.len() - 1];
                if t >= last.0 {
                    return last.1;
                }
                let j = pairs.partition_point(|&(s, _)| s <= t);
                let (t0, v0) = pairs[j - 1];
                let (t1, v1) = pairs[j];
                if t1 == t0 {
                    v0
                } else {
                    v0 + (v1 - v0) * (t - t0) / (t1 - t0)
                }
            }
        }
    }
}

/// Boundary value problem: -y^dd + q*y^sigma = lambda*y^sigma on the scale,
/// with y^d(a) = h_a*y(a) and y^d(rho(b)) = h_b*y(rho(b)).
#[derive(Debug, Clone)]
pub struct SLProblem {
    ts: TimeScale,
    potential: PotentialSpec,
    h_a: f64,
    h_b: f64,
}

/// Robin boundary folds stay this far from singular.
pub const ROBIN_GUARD: f64 = 1e-10;

impl SLProblem {
    pub fn new(ts: TimeScale, potential: PotentialSpec, h_a: f64, h_b: f64) -> Result<Self> {
        let mut pot = potential;
        for piece in &mut pot.pieces {
            if let PotentialPiece::Samples(pairs) = piece {
                pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
            }
        }
        pot.validate(&ts)?;

        let rho_b = ts.rho(ts.b())?;
        let tol = 1e-12 * ts.b().abs().max(1.0);
        if rho_b - ts.a() <= tol {
            return Err(Error::DegenerateScale);
        }
        let fold_a = 1.0 + h_a * ts.graininess(ts.a())?;
        if fold_a.abs() <= ROBIN_GUARD {
            return Err(Error::SingularRobin { side: "a", value: fold_a });
        }
        let fold_b = 1.0 + h_b * ts.graininess(rho_b)?;
        if fold_b.abs() <= ROBIN_GUARD {
            return Err(Error::SingularRobin { side: "b", value: fold_b });
        }
        Ok(SLProblem { ts, potential: pot, h_a, h_b })
    }

    /// Neumann problem (h_a = h_b = 0) with the given potential.
    pub fn neumann(ts: TimeScale, potential: PotentialSpec) -> Result<Self> {
        SLProblem::new(ts, potential, 0.0, 0.0)
    }

    pub fn timescale(&self) -> &TimeScale {
        &self.ts
    }

    pub fn potential(&self) -> &PotentialSpec {
        &self.potential
    }

    pub fn h_a(&self) -> f64 {
        self.h_a
    }

    pub fn h_b(&self) -> f64 {
        self.h_b
    }

    pub fn is_neumann(&self) -> bool {
        self.h_a == 0.0 && self.h_b == 0.0
    }

    /// Realizes the scale with the given step (isolated scales are exact
    /// regardless of the step).
    pub fn realize(&self, h: f64) -> Result<Arc<Grid>> {
        self.ts.realize(h)
    }

    /// Default sampling step (b - a) / 1000.
    pub fn default_step(&self) -> f64 {
        (self.ts.b() - self.ts.a()) / 1000.0
    }

    /// Evaluates the potential at every grid point. Each point is resolved
    /// to its segment; sampled pieces interpolate linearly with clamping.
    pub fn sample_potential(&self, grid: &Arc<Grid>) -> Result<GridFunction> {
        let segments = self.ts.segments();
        let tol = 1e-12 * self.ts.b().abs().max(1.0);
        let mut seg_idx = 0usize;
        let mut values = Vec::with_capacity(grid.len());
        for (&t, &orig) in grid.points().iter().zip(grid.origin()) {
            while seg_idx + 1 < segments.len() && t > segments[seg_idx].to() + tol {
                seg_idx += 1;
            }
            let seg = &segments[seg_idx];
            debug_assert!(
                t >= seg.from() - tol && t <= seg.to() + tol,
                "grid point {t} fell outside segment [{}, {}]",
                seg.from(),
                seg.to()
            );
            debug_assert!(orig == PointOrigin::Original || !seg.is_point());
            let _ = orig;
            values.push(PotentialSpec::eval_piece(&self.potential.pieces[seg_idx], t));
        }
        GridFunction::new(Arc::clone(grid), values)
    }
}

/// Convenience constructor for a discrete scale {x_0, ..., x_n}.
pub fn discrete_scale(points: &[f64]) -> Result<TimeScale> {
    TimeScale::new(points.iter().map(|&p| Segment::Point(p)).collect())
}
