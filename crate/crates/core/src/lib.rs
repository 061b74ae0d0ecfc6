//! Spectra of Sturm-Liouville dynamic equations on bounded time scales.
//!
//! A time scale is a closed subset of the reals; on it the delta calculus
//! unifies difference and differential operators. This crate represents
//! bounded time scales as unions of intervals and points, realizes them as
//! finite grids, computes the full spectrum of
//!
//! ```text
//!   -y^dd(t) + q(t) y^sigma(t) = lambda y^sigma(t)
//!   y^d(a) = h_a y(a),   y^d(rho(b)) = h_b y(rho(b))
//! ```
//!
//! by Sturm-sequence bisection on the boundary-folded tridiagonal operator,
//! cross-checks every eigenvalue against an independently shot
//! characteristic function, counts generalized zeros of the eigenfunctions,
//! and tests whether the first eigenvalue reaches the identification
//! threshold that forces the potential to be constant.
//!
//! ```
//! use deltaspec::{discrete_scale, PotentialSpec, SLProblem};
//!
//! let ts = discrete_scale(&[0.0, 1.0, 2.0, 3.0]).unwrap();
//! let problem = SLProblem::neumann(ts, PotentialSpec::per_segment(&[0.0; 4])).unwrap();
//! let result = deltaspec::spectrum(&problem, 1.0, 1e-12).unwrap();
//! assert_eq!(result.spectrum.len(), 2);
//! assert!((result.spectrum.eigenvalues()[1] - 2.0).abs() < 1e-11);
//! ```

pub mod ambarzumyan;
pub mod delta;
mod error;
pub mod problem;
pub mod solver;
pub mod timescale;

pub use ambarzumyan::{
    proof_identity_residual, threshold, verdict_tolerance, verify_all, verify_corollary1,
    verify_corollary2, verify_remark, verify_theorem1, AmbarzumyanReport, Corollary1Verdict,
    Corollary2Verdict, RemarkVerdict, TheoremVerdict,
};
pub use delta::GridFunction;
pub use error::{Error, Result};
pub use problem::{discrete_scale, PotentialPiece, PotentialSpec, SLProblem};
pub use solver::{
    assemble, count_below, count_generalized_zeros, eigenpair, eigenvalues, shoot,
    smallest_eigenvalues, spectrum, spectrum_on_grid, symmetrize, CrossCheck, Eigenpair,
    Spectrum, SpectrumResult, Tridiagonal,
};
pub use timescale::{Grid, PointClass, PointOrigin, Segment, TimeScale};
