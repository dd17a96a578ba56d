//! Serialization and independent replay of positivity certificates.
//!
//! The on-disk format is JSON with every rational written as a canonical
//! lowest-terms fraction string, so files are byte-reproducible. Replay
//! re-verifies a file from scratch: the tree must tile the stated region by
//! exact midpoint splits, every leaf's Bernstein coefficients are recomputed
//! exactly and compared with the stored ones, and the stored outcome must
//! match what the leaves actually support. A single tampered digit anywhere
//! fails the replay.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ratpoly::Rational;

use super::bernstein::{bernstein_coefficients, TriangleRegion};
use super::{
    LeafEvidence, NodeBody, Outcome, PolynomialId, PositivityCertificate, SubdivisionNode,
};

use num_traits::Zero;

type PointDto = [String; 2];
type VertsDto = [PointDto; 3];

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct CertificateDto {
    pub polynomial_id: String,
    pub region: VertsDto,
    pub max_depth: u32,
    pub degree: u16,
    pub outcome: OutcomeDto,
    pub tree: NodeDto,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum OutcomeDto {
    Certified,
    Refuted { witness: PointDto, value: String },
    Inconclusive { unresolved: usize },
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct NodeDto {
    pub vertices: VertsDto,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leaf: Option<LeafDto>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub children: Option<Vec<NodeDto>>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LeafDto {
    Positive { coefficients: Vec<String> },
    Negative { witness: PointDto, value: String },
    Inconclusive { coefficients: Vec<String> },
}

fn point_dto(p: &(Rational, Rational)) -> PointDto {
    [p.0.to_string(), p.1.to_string()]
}

fn verts_dto(region: &TriangleRegion) -> VertsDto {
    let [v0, v1, v2] = region.vertices();
    [point_dto(v0), point_dto(v1), point_dto(v2)]
}

fn node_dto(node: &SubdivisionNode) -> NodeDto {
    let vertices = verts_dto(&node.region);
    match &node.body {
        NodeBody::Leaf(evidence) => NodeDto {
            vertices,
            leaf: Some(match evidence {
                LeafEvidence::Positive { coefficients } => LeafDto::Positive {
                    coefficients: coefficients.iter().map(|c| c.to_string()).collect(),
                },
                LeafEvidence::Negative { witness, value } => LeafDto::Negative {
                    witness: point_dto(witness),
                    value: value.to_string(),
                },
                LeafEvidence::Inconclusive { coefficients } => LeafDto::Inconclusive {
                    coefficients: coefficients.iter().map(|c| c.to_string()).collect(),
                },
            }),
            children: None,
        },
        NodeBody::Split(children) => NodeDto {
            vertices,
            leaf: None,
            children: Some(children.iter().map(node_dto).collect()),
        },
    }
}

impl CertificateDto {
    pub fn from_certificate(cert: &PositivityCertificate) -> Self {
        Self {
            polynomial_id: cert.polynomial_id.name().to_string(),
            region: verts_dto(&cert.region),
            max_depth: cert.max_depth,
            degree: cert.degree,
            outcome: match &cert.outcome {
                Outcome::Certified => OutcomeDto::Certified,
                Outcome::Refuted { witness, value } => OutcomeDto::Refuted {
                    witness: point_dto(witness),
                    value: value.to_string(),
                },
                Outcome::Inconclusive { unresolved } => OutcomeDto::Inconclusive {
                    unresolved: *unresolved,
                },
            },
            tree: node_dto(&cert.tree),
        }
    }
}

/// Writes certificates as a pretty-printed JSON array with a trailing
/// newline; the bytes depend only on the certificates.
pub fn write_certificates<P: AsRef<Path>>(
    path: P,
    certs: &[PositivityCertificate],
) -> std::io::Result<()> {
    let dtos: Vec<CertificateDto> = certs.iter().map(CertificateDto::from_certificate).collect();
    let mut out = serde_json::to_vec_pretty(&dtos)?;
    out.push(b'\n');
    let mut file = fs::File::create(path)?;
    file.write_all(&out)
}

pub fn read_certificates<P: AsRef<Path>>(path: P) -> Result<Vec<CertificateDto>, ReplayError> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

#[derive(Error, Debug)]
pub enum ReplayError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed certificate json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown polynomial id {0:?}")]
    UnknownPolynomial(String),
    #[error("unparseable fraction {0:?}")]
    BadFraction(String),
    #[error("certificate degree {degree} is below the polynomial's total degree {needed}")]
    DegreeTooLow { degree: u16, needed: u32 },
    #[error("tree root does not match the stated region")]
    RegionMismatch,
    #[error("node is neither a leaf nor a 4-way split")]
    MalformedNode,
    #[error("split children do not tile their parent by exact midpoints")]
    BadSplit,
    #[error("leaf below stated region exceeds max depth {0}")]
    DepthExceeded(u32),
    #[error("stored Bernstein coefficients differ from exact recomputation at leaf {leaf_index}")]
    CoefficientMismatch { leaf_index: usize },
    #[error("positive leaf {leaf_index} has a nonpositive coefficient")]
    NotPositive { leaf_index: usize },
    #[error("negative leaf {leaf_index}: stored witness value is wrong or not nonpositive")]
    BadWitness { leaf_index: usize },
    #[error("inconclusive leaf {leaf_index} sits above the depth limit")]
    PrematureInconclusive { leaf_index: usize },
    #[error("inconclusive leaf {leaf_index} has all-positive coefficients and would certify")]
    MislabeledInconclusive { leaf_index: usize },
    #[error("stored outcome disagrees with the leaf evidence")]
    OutcomeMismatch,
}

/// What a successful replay verified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplayReport {
    pub polynomial_id: PolynomialId,
    pub leaves_checked: usize,
    pub outcome: OutcomeDto,
}

impl PartialEq for OutcomeDto {
    fn eq(&self, other: &Self) -> bool {
        use OutcomeDto::*;
        match (self, other) {
            (Certified, Certified) => true,
            (Refuted { witness: w1, value: v1 }, Refuted { witness: w2, value: v2 }) => {
                w1 == w2 && v1 == v2
            }
            (Inconclusive { unresolved: a }, Inconclusive { unresolved: b }) => a == b,
            _ => false,
        }
    }
}

impl Eq for OutcomeDto {}

fn parse_rational(s: &str) -> Result<Rational, ReplayError> {
    s.parse::<Rational>()
        .map_err(|_| ReplayError::BadFraction(s.to_string()))
}

fn parse_point(p: &PointDto) -> Result<(Rational, Rational), ReplayError> {
    Ok((parse_rational(&p[0])?, parse_rational(&p[1])?))
}

fn parse_region(v: &VertsDto) -> Result<TriangleRegion, ReplayError> {
    Ok(TriangleRegion::new(
        parse_point(&v[0])?,
        parse_point(&v[1])?,
        parse_point(&v[2])?,
    ))
}

struct ReplayState<'a> {
    f: &'a crate::ratpoly::BiPoly,
    degree: u16,
    max_depth: u32,
    leaves_checked: usize,
    first_negative: Option<(Rational, Rational, Rational)>,
    unresolved: usize,
}

fn replay_node(state: &mut ReplayState, node: &NodeDto, depth: u32) -> Result<(), ReplayError> {
    let region = parse_region(&node.vertices)?;
    match (&node.leaf, &node.children) {
        (Some(leaf), None) => {
            let leaf_index = state.leaves_checked;
            state.leaves_checked += 1;
            match leaf {
                LeafDto::Positive { coefficients } | LeafDto::Inconclusive { coefficients } => {
                    let exact = bernstein_coefficients(state.f, &region, state.degree)
                        .expect("degree already validated");
                    if coefficients.len() != exact.len() {
                        return Err(ReplayError::CoefficientMismatch { leaf_index });
                    }
                    for (stored, recomputed) in coefficients.iter().zip(&exact) {
                        if &parse_rational(stored)? != recomputed {
                            return Err(ReplayError::CoefficientMismatch { leaf_index });
                        }
                    }
                    match leaf {
                        LeafDto::Positive { .. } => {
                            if !exact.iter().all(|c| c > &Rational::zero()) {
                                return Err(ReplayError::NotPositive { leaf_index });
                            }
                        }
                        LeafDto::Inconclusive { .. } => {
                            // the algorithm only gives up at the depth limit
                            // (or on a degenerate cell, which cannot split)
                            if depth < state.max_depth && !region.is_degenerate() {
                                return Err(ReplayError::PrematureInconclusive { leaf_index });
                            }
                            if exact.iter().all(|c| c > &Rational::zero()) {
                                return Err(ReplayError::MislabeledInconclusive { leaf_index });
                            }
                            state.unresolved += 1;
                        }
                        LeafDto::Negative { .. } => unreachable!(),
                    }
                }
                LeafDto::Negative { witness, value } => {
                    let w = parse_point(witness)?;
                    let stored = parse_rational(value)?;
                    let recomputed = state.f.eval(&w.0, &w.1);
                    if recomputed != stored || stored > Rational::zero() {
                        return Err(ReplayError::BadWitness { leaf_index });
                    }
                    if state.first_negative.is_none() {
                        state.first_negative = Some((w.0, w.1, stored));
                    }
                }
            }
            Ok(())
        }
        (None, Some(children)) => {
            if children.len() != 4 {
                return Err(ReplayError::MalformedNode);
            }
            if depth >= state.max_depth {
                return Err(ReplayError::DepthExceeded(state.max_depth));
            }
            let expected = region.midpoint_split();
            for (child, expected_region) in children.iter().zip(&expected) {
                let child_region = parse_region(&child.vertices)?;
                if &child_region != expected_region {
                    return Err(ReplayError::BadSplit);
                }
            }
            for child in children {
                replay_node(state, child, depth + 1)?;
            }
            Ok(())
        }
        _ => Err(ReplayError::MalformedNode),
    }
}

/// Re-verifies one serialized certificate with independent exact
/// recomputation of every leaf.
pub fn replay_certificate(dto: &CertificateDto) -> Result<ReplayReport, ReplayError> {
    let id = PolynomialId::from_name(&dto.polynomial_id)
        .ok_or_else(|| ReplayError::UnknownPolynomial(dto.polynomial_id.clone()))?;
    let f = id.polynomial();
    let needed = f.total_degree().unwrap_or(0);
    if u32::from(dto.degree) < needed {
        return Err(ReplayError::DegreeTooLow {
            degree: dto.degree,
            needed,
        });
    }
    if dto.tree.vertices != dto.region {
        return Err(ReplayError::RegionMismatch);
    }
    let mut state = ReplayState {
        f,
        degree: dto.degree,
        max_depth: dto.max_depth,
        leaves_checked: 0,
        first_negative: None,
        unresolved: 0,
    };
    replay_node(&mut state, &dto.tree, 0)?;

    let expected_outcome = match (&state.first_negative, state.unresolved) {
        (Some((a, b, v)), _) => OutcomeDto::Refuted {
            witness: [a.to_string(), b.to_string()],
            value: v.to_string(),
        },
        (None, 0) => OutcomeDto::Certified,
        (None, n) => OutcomeDto::Inconclusive { unresolved: n },
    };
    if expected_outcome != dto.outcome {
        return Err(ReplayError::OutcomeMismatch);
    }
    Ok(ReplayReport {
        polynomial_id: id,
        leaves_checked: state.leaves_checked,
        outcome: expected_outcome,
    })
}

/// Reads a certificate file and replays every certificate in it.
pub fn replay_certificate_file<P: AsRef<Path>>(path: P) -> Result<Vec<ReplayReport>, ReplayError> {
    let dtos = read_certificates(path)?;
    dtos.iter().map(replay_certificate).collect()
}
