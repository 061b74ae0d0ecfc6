use thiserror::Error;

/// Errors produced by time-scale construction, grid realization, and the
/// spectral pipeline.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("time scale needs at least one segment")]
    EmptyTimeScale,

    #[error("segment endpoint is not finite: {0}")]
    NonFiniteEndpoint(f64),

    #[error("interval segment has from > to: [{from}, {to}]")]
    InvertedSegment { from: f64, to: f64 },

    #[error("point t = {0} is not a member of the time scale")]
    NotInTimeScale(f64),

    #[error("sampling step must be positive, got {0}")]
    NonPositiveStep(f64),

    #[error("degenerate time scale: a = rho(b) (grid has fewer than 3 points)")]
    DegenerateScale,

    #[error("grid function has {got} values but the grid has {expected} points")]
    LengthMismatch { expected: usize, got: usize },

    #[error("grid function value at index {0} is not finite")]
    NonFiniteValue(usize),

    #[error("grid too small: need at least {need} points, have {have}")]
    GridTooSmall { need: usize, have: usize },

    #[error("integral index range invalid: from {from} to {to} with length {len}")]
    IndexRange { from: usize, to: usize, len: usize },

    #[error("potential has {got} pieces but the time scale has {expected} segments")]
    PieceCountMismatch { expected: usize, got: usize },

    #[error("potential samples piece needs at least one (t, value) pair")]
    EmptySamples,

    #[error("potential sample point t = {0} lies outside its segment")]
    SampleOutsideSegment(f64),

    #[error("singular Robin condition: 1 + h_{side}*mu = {value:.3e} at the {side} end")]
    SingularRobin { side: &'static str, value: f64 },

    #[error("tridiagonal bands have inconsistent lengths")]
    BandLengths,

    #[error("matrix entry is not finite")]
    NonFiniteMatrix,

    #[error("off-diagonal product is not positive at row {0}; matrix is not symmetrizable")]
    NotSymmetrizable(usize),

    #[error("eigenvalue bracket failed for index {0}")]
    BracketFailure(usize),

    #[error("computed eigenvalues are not strictly increasing at index {0}")]
    NotStrictlyIncreasing(usize),

    #[error("lambda = {lambda} is not an eigenvalue: equation residual {residual:.3e} exceeds {bound:.3e}")]
    NotAnEigenvalue { lambda: f64, residual: f64, bound: f64 },

    #[error("function is identically zero")]
    AllZero,

    #[error("matrix/shooting cross-check failed at lambda = {lambda}: |chi| = {chi:.3e} exceeds {bound:.3e}")]
    CrossCheck { lambda: f64, chi: f64, bound: f64 },

    #[error("{check} requires Neumann conditions (h_a = h_b = 0), got h_a = {h_a}, h_b = {h_b}")]
    NotNeumann { check: &'static str, h_a: f64, h_b: f64 },

    #[error("first eigenfunction vanishes at grid index {0}; zero-free property breached")]
    EigenfunctionVanishes(usize),

    #[error("numerical falsification of {claim}: {detail}")]
    Falsified { claim: &'static str, detail: String },

    #[error("solver tolerance must be positive, got {0}")]
    NonPositiveTolerance(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
