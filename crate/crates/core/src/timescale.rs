//! Bounded time scales: ordered unions of closed intervals and points,
//! with the forward/backward jump operators, graininess, point
//! classification, and finite grid realization.

use std::sync::Arc;

use crate::error::{Error, Result};

/// One connected component of a time scale: a closed interval or a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Segment {
    Point(f64),
    Interval { from: f64, to: f64 },
}

impl Segment {
    pub fn from(&self) -> f64 {
        match *self {
            Segment::Point(t) => t,
            Segment::Interval { from, .. } => from,
        }
    }

    pub fn to(&self) -> f64 {
        match *self {
            Segment::Point(t) => t,
            Segment::Interval { to, .. } => to,
        }
    }

    pub fn is_point(&self) -> bool {
        matches!(self, Segment::Point(_))
    }

    fn validate(&self) -> Result<()> {
        let (from, to) = (self.from(), self.to());
        if !from.is_finite() {
            return Err(Error::NonFiniteEndpoint(from));
        }
        if !to.is_finite() {
            return Err(Error::NonFiniteEndpoint(to));
        }
        if from > to {
            return Err(Error::InvertedSegment { from, to });
        }
        Ok(())
    }
}

/// Density classification of a time-scale point on each side.
///
/// `left_scattered` means rho(t) < t; `right_scattered` means sigma(t) > t.
/// The infimum is never left-scattered and the supremum never
/// right-scattered (rho(a) = a, sigma(b) = b by convention).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointClass {
    pub left_scattered: bool,
    pub right_scattered: bool,
}

impl PointClass {
    pub fn left_dense(&self) -> bool {
        !self.left_scattered
    }

    pub fn right_dense(&self) -> bool {
        !self.right_scattered
    }

    /// Scattered on both sides: rho(t) < t < sigma(t).
    pub fn is_isolated(&self) -> bool {
        self.left_scattered && self.right_scattered
    }
}

/// A bounded time scale: nonempty closed subset of the reals encoded as a
/// sorted, pairwise-disjoint list of segments.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeScale {
    segments: Vec<Segment>,
    a: f64,
    b: f64,
}

impl TimeScale {
    /// Builds a time scale from raw segments: sorts them, merges any that
    /// overlap or touch, and records the extremes a = inf, b = sup.
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::EmptyTimeScale);
        }
        for s in &segments {
            s.validate()?;
        }
        let mut sorted = segments;
        sorted.sort_by(|x, y| x.from().total_cmp(&y.from()));

        let mut merged: Vec<Segment> = Vec::with_capacity(sorted.len());
        for s in sorted {
            match merged.last_mut() {
                Some(last) if s.from() <= last.to() => {
                    // Overlapping or touching: extend the previous component.
                    let from = last.from();
                    let to = last.to().max(s.to());
                    *last = if from == to {
                        Segment::Point(from)
                    } else {
                        Segment::Interval { from, to }
                    };
                }
                _ => merged.push(s),
            }
        }

        let a = merged[0].from();
        let b = merged[merged.len() - 1].to();
        Ok(TimeScale { segments: merged, a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// True when every component is a single point (the scale consists of
    /// isolated points only, endpoints being scattered on their inner side).
    pub fn is_discrete(&self) -> bool {
        self.segments.iter().all(Segment::is_point)
    }

    /// Absolute tolerance for membership tests.
    fn tol(&self) -> f64 {
        1e-12 * self.b.abs().max(1.0)
    }

    /// Index of the segment containing t, if any.
    fn locate(&self, t: f64) -> Option<usize> {
        let tol = self.tol();
        // Segments are few; linear scan keeps the tolerance handling simple.
        self.segments
            .iter()
            .position(|s| t >= s.from() - tol && t <= s.to() + tol)
    }

    pub fn contains(&self, t: f64) -> bool {
        t.is_finite() && self.locate(t).is_some()
    }

    /// Forward jump sigma(t) = inf { s in T : s > t }, with sigma(b) = b.
    pub fn sigma(&self, t: f64) -> Result<f64> {
        let idx = self.locate(t).ok_or(Error::NotInTimeScale(t))?;
        let seg = &self.segments[idx];
        let tol = self.tol();
        if !seg.is_point() && t < seg.to() - tol {
            return Ok(t); // right-dense inside an interval
        }
        // At a segment's right end: jump to the next component, if any.
        match self.segments.get(idx + 1) {
            Some(next) => Ok(next.from()),
            None => Ok(self.b),
        }
    }

    /// Backward jump rho(t) = sup { s in T : s < t }, with rho(a) = a.
    pub fn rho(&self, t: f64) -> Result<f64> {
        let idx = self.locate(t).ok_or(Error::NotInTimeScale(t))?;
        let seg = &self.segments[idx];
        let tol = self.tol();
        if !seg.is_point() && t > seg.from() + tol {
            return Ok(t); // left-dense inside an interval
        }
        match idx.checked_sub(1) {
            Some(prev) => Ok(self.segments[prev].to()),
            None => Ok(self.a),
        }
    }

    /// Graininess mu(t) = sigma(t) - t.
    pub fn graininess(&self, t: f64) -> Result<f64> {
        Ok(self.sigma(t)? - t)
    }

    pub fn classify(&self, t: f64) -> Result<PointClass> {
        let tol = self.tol();
        Ok(PointClass {
            left_scattered: t - self.rho(t)? > tol,
            right_scattered: self.sigma(t)? - t > tol,
        })
    }

    /// Realizes the time scale as a finite grid: every scattered point kept
    /// verbatim, every interval subdivided into equal parts of length <= h.
    pub fn realize(&self, h: f64) -> Result<Arc<Grid>> {
        if !h.is_finite() || h <= 0.0 {
            return Err(Error::NonPositiveStep(h));
        }
        let mut points: Vec<f64> = Vec::new();
        let mut origin: Vec<PointOrigin> = Vec::new();
        for seg in &self.segments {
            match *seg {
                Segment::Point(t) => {
                    points.push(t);
                    origin.push(PointOrigin::Original);
                }
                Segment::Interval { from, to } => {
                    let parts = ((to - from) / h).ceil().max(1.0) as usize;
                    for j in 0..=parts {
                        // Convex combination keeps both endpoints exact.
                        let frac = j as f64 / parts as f64;
                        points.push(from * (1.0 - frac) + to * frac);
                        origin.push(if j == 0 || j == parts {
                            PointOrigin::Original
                        } else {
                            PointOrigin::Sampled
                        });
                    }
                }
            }
        }
        if points.len() < 3 {
            return Err(Error::DegenerateScale);
        }
        let graininess: Vec<f64> = points.windows(2).map(|w| w[1] - w[0]).collect();
        debug_assert!(graininess.iter().all(|&m| m > 0.0));
        Ok(Arc::new(Grid { points, graininess, origin, step: h }))
    }
}

/// Whether a grid point is a member of the original scale's scattered
/// structure or a sample introduced inside a dense segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointOrigin {
    Original,
    Sampled,
}

/// Finite realization of a time scale: strictly increasing points
/// t_0 < ... < t_N with per-gap graininess mu_i = t_{i+1} - t_i.
///
/// On the grid every point except t_N is right-scattered, so the scattered
/// delta-calculus formulas apply everywhere; dense behavior is recovered by
/// refining the sampling step.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    points: Vec<f64>,
    graininess: Vec<f64>,
    origin: Vec<PointOrigin>,
    step: f64,
}

impl Grid {
    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn graininess(&self) -> &[f64] {
        &self.graininess
    }

    pub fn origin(&self) -> &[PointOrigin] {
        &self.origin
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Number of grid points (N + 1).
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The last index N (so points run t_0..t_N).
    pub fn last_index(&self) -> usize {
        self.points.len() - 1
    }

    pub fn a(&self) -> f64 {
        self.points[0]
    }

    pub fn b(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    /// rho(b) = t_{N-1} on the realized grid.
    pub fn rho_b(&self) -> f64 {
        self.points[self.points.len() - 2]
    }
}
