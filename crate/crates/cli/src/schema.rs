//! Problem and report file schemas (JSON, UTF-8, plain decimal numbers).
//!
//! A problem file pairs one potential piece with each time-scale segment:
//!
//! ```json
//! {
//!   "timescale": [
//!     {"type": "interval", "from": 0.0, "to": 1.0},
//!     {"type": "point", "at": 1.5}
//!   ],
//!   "potential": [
//!     {"kind": "poly", "coeffs": [0.0, 1.0]},
//!     {"kind": "const", "value": 2.0}
//!   ],
//!   "ha": 0.0,
//!   "hb": 0.0
//! }
//! ```

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

use deltaspec::{PotentialPiece, PotentialSpec, SLProblem, Segment, TimeScale};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum SegmentRecord {
    Point { at: f64 },
    Interval { from: f64, to: f64 },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PieceRecord {
    Const { value: f64 },
    Poly { coeffs: Vec<f64> },
    Samples { points: Vec<(f64, f64)> },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ProblemFile {
    pub timescale: Vec<SegmentRecord>,
    pub potential: Vec<PieceRecord>,
    pub ha: f64,
    pub hb: f64,
}

impl From<&Segment> for SegmentRecord {
    fn from(s: &Segment) -> Self {
        match *s {
            Segment::Point(at) => SegmentRecord::Point { at },
            Segment::Interval { from, to } => SegmentRecord::Interval { from, to },
        }
    }
}

impl From<&SegmentRecord> for Segment {
    fn from(r: &SegmentRecord) -> Self {
        match *r {
            SegmentRecord::Point { at } => Segment::Point(at),
            SegmentRecord::Interval { from, to } => Segment::Interval { from, to },
        }
    }
}

impl From<&PotentialPiece> for PieceRecord {
    fn from(p: &PotentialPiece) -> Self {
        match p {
            PotentialPiece::Constant(value) => PieceRecord::Const { value: *value },
            PotentialPiece::Polynomial(coeffs) => PieceRecord::Poly { coeffs: coeffs.clone() },
            PotentialPiece::Samples(points) => PieceRecord::Samples { points: points.clone() },
        }
    }
}

impl From<&PieceRecord> for PotentialPiece {
    fn from(r: &PieceRecord) -> Self {
        match r {
            PieceRecord::Const { value } => PotentialPiece::Constant(*value),
            PieceRecord::Poly { coeffs } => PotentialPiece::Polynomial(coeffs.clone()),
            PieceRecord::Samples { points } => PotentialPiece::Samples(points.clone()),
        }
    }
}

/// Decodes and validates a problem file. All standing assumptions are
/// enforced here with messages naming the violated condition.
pub fn parse_problem(text: &str) -> anyhow::Result<SLProblem> {
    let file: ProblemFile = serde_json::from_str(text).context("malformed problem file")?;
    problem_from_file(&file)
}

pub fn problem_from_file(file: &ProblemFile) -> anyhow::Result<SLProblem> {
    if file.timescale.is_empty() {
        bail!("timescale must list at least one segment");
    }
    let segments: Vec<Segment> = file.timescale.iter().map(Into::into).collect();
    let ts = TimeScale::new(segments.clone()).context("invalid time scale")?;
    if ts.segments() != segments.as_slice() {
        bail!(
            "timescale segments must be sorted and pairwise disjoint as written \
             (canonicalization changed the list, so potential pieces cannot be \
             paired with segments unambiguously)"
        );
    }
    let potential: PotentialSpec =
        PotentialSpec::new(file.potential.iter().map(Into::into).collect());
    let problem = SLProblem::new(ts, potential, file.ha, file.hb)
        .context("problem violates a standing assumption")?;
    Ok(problem)
}

/// Inverse of `parse_problem`: field values survive the round trip
/// bit-exactly (shortest-round-trip float formatting).
#[cfg_attr(not(test), allow(dead_code))]
pub fn emit_problem(problem: &SLProblem) -> ProblemFile {
    ProblemFile {
        timescale: problem.timescale().segments().iter().map(SegmentRecord::from).collect(),
        potential: problem.potential().pieces().iter().map(PieceRecord::from).collect(),
        ha: problem.h_a(),
        hb: problem.h_b(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GridMeta {
    pub n_points: usize,
    pub step: f64,
    pub a: f64,
    pub b: f64,
    pub rho_b: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolverMeta {
    pub tol: f64,
    /// max over eigenvalues of |chi| / cross-check tolerance
    pub cross_check_max_ratio: f64,
    pub residual_max: f64,
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct Verdicts {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theorem1: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corollary1: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corollary2: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub remark: Option<String>,
}

/// Output of `solve`: the spectrum with oscillation counts plus the
/// identification summary for the same problem.
#[derive(Debug, Clone, Serialize)]
pub struct ReportFile {
    pub eigenvalues: Vec<f64>,
    pub zero_counts: Vec<usize>,
    pub lambda1: f64,
    pub threshold: f64,
    pub verdicts: Verdicts,
    pub q_deviation: f64,
    pub proof_residual: f64,
    pub grid: GridMeta,
    pub solver: SolverMeta,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Output of `verify`: the identification report fields.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyFile {
    pub lambda1: f64,
    pub threshold: f64,
    pub lambda_excess: f64,
    pub ver_tol: f64,
    pub q_deviation: f64,
    pub proof_residual: f64,
    pub unexpected_regime: bool,
    pub falsified: bool,
    pub verdicts: Verdicts,
    pub grid: GridMeta,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GridFile {
    pub a: f64,
    pub b: f64,
    pub rho_b: f64,
    pub n_points: usize,
    pub step: f64,
    pub points: Vec<f64>,
    pub graininess: Vec<f64>,
    pub origin: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn neumann_integers_file() -> String {
        let segs: Vec<String> = (0..4).map(|k| format!(r#"{{"type":"point","at":{k}}}"#)).collect();
        let pieces: Vec<String> = (0..4).map(|_| r#"{"kind":"const","value":0}"#.to_string()).collect();
        format!(
            r#"{{"timescale":[{}],"potential":[{}],"ha":0,"hb":0}}"#,
            segs.join(","),
            pieces.join(",")
        )
    }

    #[test]
    fn parses_valid_neumann_problem() {
        let p = parse_problem(&neumann_integers_file()).unwrap();
        assert!(p.is_neumann());
        assert_eq!(p.timescale().segments().len(), 4);
        assert_eq!(p.timescale().a(), 0.0);
        assert_eq!(p.timescale().b(), 3.0);
    }

    #[test]
    fn rejects_singular_robin_fold() {
        // mu(a) = 1 and h_a = -1 make 1 + h_a mu(a) = 0
        let text = neumann_integers_file().replace(r#""ha":0"#, r#""ha":-1"#);
        let err = format!("{:#}", parse_problem(&text).unwrap_err());
        assert!(err.contains("singular Robin"), "{err}");
    }

    #[test]
    fn rejects_degenerate_scale() {
        let text = r#"{"timescale":[{"type":"point","at":0}],"potential":[{"kind":"const","value":0}],"ha":0,"hb":0}"#;
        let err = format!("{:#}", parse_problem(text).unwrap_err());
        assert!(err.contains("degenerate time scale"), "{err}");
    }

    #[test]
    fn rejects_piece_count_mismatch() {
        let text = neumann_integers_file().replacen(r#"{"kind":"const","value":0},"#, "", 1);
        let err = format!("{:#}", parse_problem(&text).unwrap_err());
        assert!(err.contains("pieces"), "{err}");
    }

    #[test]
    fn rejects_unknown_kinds_and_syntax() {
        assert!(parse_problem("{not json").is_err());
        let text = neumann_integers_file().replace(r#""kind":"const""#, r#""kind":"mystery""#);
        assert!(parse_problem(&text).is_err());
        let text = neumann_integers_file().replace(r#""type":"point""#, r#""type":"blob""#);
        assert!(parse_problem(&text).is_err());
    }

    #[test]
    fn rejects_non_canonical_segment_order() {
        let text = r#"{"timescale":[{"type":"point","at":3},{"type":"point","at":0},{"type":"point","at":1},{"type":"point","at":2}],"potential":[{"kind":"const","value":0},{"kind":"const","value":0},{"kind":"const","value":0},{"kind":"const","value":0}],"ha":0,"hb":0}"#;
        let err = format!("{:#}", parse_problem(text).unwrap_err());
        assert!(err.contains("sorted"), "{err}");
    }

    #[test]
    fn round_trip_is_bit_exact() {
        // awkward values: negative zero, denormal-ish, long decimals
        let file = ProblemFile {
            timescale: vec![
                SegmentRecord::Interval { from: -0.0, to: 0.1 + 0.2 },
                SegmentRecord::Point { at: 1.5000000000000002 },
                SegmentRecord::Point { at: 2.0 },
            ],
            potential: vec![
                PieceRecord::Poly { coeffs: vec![1.0 / 3.0, -2.0e-15] },
                PieceRecord::Const { value: f64::MIN_POSITIVE },
                PieceRecord::Samples { points: vec![(2.0, 0.3333333333333333)] },
            ],
            ha: 0.1,
            hb: -0.30000000000000004,
        };
        let problem = problem_from_file(&file).unwrap();
        let emitted = emit_problem(&problem);
        assert_eq!(emitted, file);

        // and through the serialized text as well
        let text = serde_json::to_string(&emitted).unwrap();
        let reparsed = emit_problem(&parse_problem(&text).unwrap());
        assert_eq!(reparsed, file);
    }
}
