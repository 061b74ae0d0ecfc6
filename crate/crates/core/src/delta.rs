//! Delta derivatives, sigma shifts, and Cauchy delta integrals for
//! functions sampled on a realized grid.
//!
//! Every grid point except the last is right-scattered, so the scattered
//! difference-quotient formula is the delta derivative everywhere and the
//! left-hand sum is the exact delta integral. A derivative shortens the
//! value list by one: a `GridFunction` of length L < grid length represents
//! a function on the first L points (the T^k truncation), which is how the
//! undefined derivative at the supremum is kept out of the domain.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::timescale::Grid;

/// A real-valued function sampled on a grid, possibly truncated to the
/// first `len` points after differentiation.
#[derive(Debug, Clone)]
pub struct GridFunction {
    grid: Arc<Grid>,
    values: Vec<f64>,
}

impl GridFunction {
    /// Wraps sampled values covering every grid point.
    pub fn new(grid: Arc<Grid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch { expected: grid.len(), got: values.len() });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue(i));
        }
        Ok(GridFunction { grid, values })
    }

    /// Samples a scalar function at every grid point.
    pub fn sample(grid: &Arc<Grid>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.points().iter().map(|&t| f(t)).collect();
        Self::new(Arc::clone(grid), values)
    }

    pub(crate) fn truncated(grid: Arc<Grid>, values: Vec<f64>) -> Self {
        debug_assert!(values.len() <= grid.len());
        GridFunction { grid, values }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Covers all grid points (no T^k truncation applied).
    pub fn is_full(&self) -> bool {
        self.values.len() == self.grid.len()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// f composed with the forward jump: value at i is f(sigma(t_i)), i.e.
    /// f_{i+1} for i < N and f_N at the supremum (sigma(b) = b).
    pub fn sigma_shift(&self) -> GridFunction {
        assert!(self.is_full(), "sigma shift needs values at every grid point");
        let n = self.values.len();
        let mut out = Vec::with_capacity(n);
        out.extend_from_slice(&self.values[1..]);
        out.push(self.values[n - 1]);
        GridFunction { grid: Arc::clone(&self.grid), values: out }
    }

    /// Delta derivative (f_{i+1} - f_i) / mu_i on the first len-1 points.
    pub fn delta_derivative(&self) -> Result<GridFunction> {
        if self.values.len() < 2 {
            return Err(Error::GridTooSmall { need: 2, have: self.values.len() });
        }
        let mu = self.grid.graininess();
        let values: Vec<f64> = self
            .values
            .windows(2)
            .enumerate()
            .map(|(i, w)| (w[1] - w[0]) / mu[i])
            .collect();
        Ok(GridFunction::truncated(Arc::clone(&self.grid), values))
    }

    /// Second delta derivative, defined on the first len-2 points.
    pub fn second_delta_derivative(&self) -> Result<GridFunction> {
        if self.values.len() < 3 {
            return Err(Error::GridTooSmall { need: 3, have: self.values.len() });
        }
        self.delta_derivative()?.delta_derivative()
    }

    /// Cauchy delta integral over [t_from, t_to): the left-hand sum
    /// sum_{i=from}^{to-1} mu_i * f_i, exact on the realized grid. The
    /// upper index is capped at N: integration cannot pass the supremum.
    pub fn delta_integral(&self, from: usize, to: usize) -> Result<f64> {
        let max_to = self.values.len().min(self.grid.len() - 1);
        if from > to || to > max_to {
            return Err(Error::IndexRange { from, to, len: max_to });
        }
        let mu = self.grid.graininess();
        Ok((from..to).map(|i| mu[i] * self.values[i]).sum())
    }
}
