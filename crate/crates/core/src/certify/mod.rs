//! Exact positivity certificates for the criterion polynomial.
//!
//! A certificate is a 4-way midpoint-subdivision tree over a triangle. A
//! leaf is *positive* when every Bernstein coefficient of the polynomial
//! over that cell is positive (which proves positivity on the cell),
//! *negative* when an exact evaluation at a cell sample point is
//! nonpositive (a witness), and *inconclusive* when the depth limit cuts
//! the recursion first. The tool never falls back to floating point to
//! force an answer; inconclusive is a first-class outcome.
//!
//! Leaves are independent work items and are processed in parallel; the
//! tree shape and every coefficient are data-determined, so the final
//! certificate is identical under any scheduling.

mod bernstein;
mod certificate;

pub use bernstein::{
    bernstein_coefficients, corner_positions, multi_indices, MultiIndex, TriangleRegion,
};
pub use certificate::{
    read_certificates, replay_certificate, replay_certificate_file, write_certificates,
    CertificateDto, ReplayError, ReplayReport,
};

use num_traits::Zero;
use thiserror::Error;

use crate::criterion::{assemble_c, reduced_c_tilde};
use crate::ratpoly::{rat, rat_int, BiPoly, Rational};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CertifyError {
    #[error("requested Bernstein degree {degree} is below the polynomial's total degree {needed}")]
    DegreeTooLow { degree: u32, needed: u32 },
    #[error("delta = {0} leaves an empty shrunken triangle")]
    DegenerateRegion(Rational),
}

/// Which cached polynomial a serialized certificate refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolynomialId {
    /// The criterion polynomial `C(a, b)`.
    C,
    /// The reduced polynomial `C/(b - a)`, used to cover the `a = b` wall.
    CTilde,
}

impl PolynomialId {
    pub fn polynomial(self) -> &'static BiPoly {
        match self {
            PolynomialId::C => assemble_c(),
            PolynomialId::CTilde => reduced_c_tilde(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PolynomialId::C => "C",
            PolynomialId::CTilde => "C_tilde",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "C" => Some(PolynomialId::C),
            "C_tilde" => Some(PolynomialId::CTilde),
            _ => None,
        }
    }
}

/// Per-leaf sign evidence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LeafEvidence {
    /// Every Bernstein coefficient over the cell is positive.
    Positive { coefficients: Vec<Rational> },
    /// An exact nonpositive value at a point of the cell.
    Negative {
        witness: (Rational, Rational),
        value: Rational,
    },
    /// Depth limit reached with mixed-sign coefficients.
    Inconclusive { coefficients: Vec<Rational> },
}

/// Node of the subdivision tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubdivisionNode {
    pub region: TriangleRegion,
    pub body: NodeBody,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NodeBody {
    Leaf(LeafEvidence),
    Split(Box<[SubdivisionNode; 4]>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Certified,
    Refuted {
        witness: (Rational, Rational),
        value: Rational,
    },
    Inconclusive {
        unresolved: usize,
    },
}

/// A finished certification run over one region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositivityCertificate {
    pub polynomial_id: PolynomialId,
    pub region: TriangleRegion,
    pub max_depth: u32,
    pub degree: u16,
    pub tree: SubdivisionNode,
    pub outcome: Outcome,
}

impl PositivityCertificate {
    /// Runs [`certify_positive`] on one of the two named polynomials.
    pub fn generate(id: PolynomialId, region: TriangleRegion, max_depth: u32) -> Self {
        let (tree, degree) = certify_tree(id.polynomial(), region.clone(), max_depth);
        let outcome = outcome_of(&tree);
        Self {
            polynomial_id: id,
            region,
            max_depth,
            degree,
            tree,
            outcome,
        }
    }

    pub fn leaf_count(&self) -> usize {
        fn walk(node: &SubdivisionNode) -> usize {
            match &node.body {
                NodeBody::Leaf(_) => 1,
                NodeBody::Split(children) => children.iter().map(walk).sum(),
            }
        }
        walk(&self.tree)
    }
}

/// Subdivides until every leaf is decided or `max_depth` cuts it off, and
/// classifies the run. All arithmetic exact.
pub fn certify_positive(f: &BiPoly, region: &TriangleRegion, max_depth: u32) -> (SubdivisionNode, Outcome) {
    let (tree, _) = certify_tree(f, region.clone(), max_depth);
    let outcome = outcome_of(&tree);
    (tree, outcome)
}

fn certify_tree(f: &BiPoly, region: TriangleRegion, max_depth: u32) -> (SubdivisionNode, u16) {
    let degree = f.total_degree().unwrap_or(0) as u16;
    let tree = process_cell(f, region, degree, 0, max_depth);
    (tree, degree)
}

fn process_cell(
    f: &BiPoly,
    region: TriangleRegion,
    degree: u16,
    depth: u32,
    max_depth: u32,
) -> SubdivisionNode {
    let coefficients = bernstein_coefficients(f, &region, degree)
        .expect("degree is the polynomial's own total degree");
    if coefficients.iter().all(|c| c > &Rational::zero()) {
        return SubdivisionNode {
            region,
            body: NodeBody::Leaf(LeafEvidence::Positive { coefficients }),
        };
    }
    // Corner coefficients are exact vertex values; try them and the
    // centroid as witnesses before splitting.
    let corners = corner_positions(degree);
    for (pos, vertex) in corners.iter().zip(region.vertices()) {
        if coefficients[*pos] <= Rational::zero() {
            let witness = vertex.clone();
            let value = coefficients[*pos].clone();
            return SubdivisionNode {
                region,
                body: NodeBody::Leaf(LeafEvidence::Negative { witness, value }),
            };
        }
    }
    let centroid = region.centroid();
    let centroid_value = f.eval(&centroid.0, &centroid.1);
    if centroid_value <= Rational::zero() {
        return SubdivisionNode {
            region,
            body: NodeBody::Leaf(LeafEvidence::Negative {
                witness: centroid,
                value: centroid_value,
            }),
        };
    }
    if depth >= max_depth || region.is_degenerate() {
        return SubdivisionNode {
            region,
            body: NodeBody::Leaf(LeafEvidence::Inconclusive { coefficients }),
        };
    }
    let [c0, c1, c2, c3] = region.midpoint_split();
    let ((n0, n1), (n2, n3)) = rayon::join(
        || {
            rayon::join(
                || process_cell(f, c0, degree, depth + 1, max_depth),
                || process_cell(f, c1, degree, depth + 1, max_depth),
            )
        },
        || {
            rayon::join(
                || process_cell(f, c2, degree, depth + 1, max_depth),
                || process_cell(f, c3, degree, depth + 1, max_depth),
            )
        },
    );
    SubdivisionNode {
        region,
        body: NodeBody::Split(Box::new([n0, n1, n2, n3])),
    }
}

/// Classifies a finished tree: the first negative leaf in canonical order
/// refutes; otherwise unresolved leaves are counted.
pub fn outcome_of(tree: &SubdivisionNode) -> Outcome {
    fn first_negative(node: &SubdivisionNode) -> Option<(&(Rational, Rational), &Rational)> {
        match &node.body {
            NodeBody::Leaf(LeafEvidence::Negative { witness, value }) => Some((witness, value)),
            NodeBody::Leaf(_) => None,
            NodeBody::Split(children) => children.iter().find_map(first_negative),
        }
    }
    fn unresolved(node: &SubdivisionNode) -> usize {
        match &node.body {
            NodeBody::Leaf(LeafEvidence::Inconclusive { .. }) => 1,
            NodeBody::Leaf(_) => 0,
            NodeBody::Split(children) => children.iter().map(unresolved).sum(),
        }
    }
    if let Some((witness, value)) = first_negative(tree) {
        return Outcome::Refuted {
            witness: witness.clone(),
            value: value.clone(),
        };
    }
    match unresolved(tree) {
        0 => Outcome::Certified,
        n => Outcome::Inconclusive { unresolved: n },
    }
}

/// The delta-shrunken triangle for `C`: `{delta <= a, a + delta <= b <= 1/2}`,
/// with vertices `(d, 2d)`, `(d, 1/2)`, `(1/2 - d, 1/2)`. Empty for
/// `delta > 1/4` (and a single point at exactly `1/4`).
pub fn shrunken_triangle_c(delta: &Rational) -> Result<TriangleRegion, CertifyError> {
    if delta <= &Rational::zero() || delta > &rat(1, 4) {
        return Err(CertifyError::DegenerateRegion(delta.clone()));
    }
    let half = rat(1, 2);
    Ok(TriangleRegion::new(
        (delta.clone(), delta * rat_int(2)),
        (delta.clone(), half.clone()),
        (&half - delta, half),
    ))
}

/// The delta-shrunken triangle for `C~ = C/(b-a)`:
/// `{delta <= a <= b <= 1/2 - delta}`, with vertices `(d, d)`,
/// `(d, 1/2 - d)`, `(1/2 - d, 1/2 - d)`. This one contains the `a = b`
/// diagonal, where `C~` stays positive even though `C` vanishes.
pub fn shrunken_triangle_c_tilde(delta: &Rational) -> Result<TriangleRegion, CertifyError> {
    if delta <= &Rational::zero() || delta > &rat(1, 4) {
        return Err(CertifyError::DegenerateRegion(delta.clone()));
    }
    let top = rat(1, 2) - delta;
    Ok(TriangleRegion::new(
        (delta.clone(), delta.clone()),
        (delta.clone(), top.clone()),
        (top.clone(), top),
    ))
}

/// For each margin `delta`, certifies `C` on its shrunken triangle and
/// `C~` on the diagonal-covering variant, in that order. The walls `a = 0`
/// and `b = 1/2` themselves are covered by the exact univariate
/// factorizations of the identity suite, not by subdivision.
pub fn certify_margin_ladder(
    deltas: &[Rational],
    max_depth: u32,
) -> Result<Vec<PositivityCertificate>, CertifyError> {
    let mut regions = Vec::with_capacity(deltas.len() * 2);
    for delta in deltas {
        regions.push((PolynomialId::C, shrunken_triangle_c(delta)?));
        regions.push((PolynomialId::CTilde, shrunken_triangle_c_tilde(delta)?));
    }
    Ok(regions
        .into_iter()
        .map(|(id, region)| PositivityCertificate::generate(id, region, max_depth))
        .collect())
}

/// The full closed triangle `0 <= a <= b <= 1/2` as a region, with vertices
/// `(0,0)`, `(0,1/2)`, `(1/2,1/2)`.
///
/// Both `C` and `C~` turn out to have *nonnegative* Bernstein coefficient
/// lists over this region at their own degrees. Together with the exact
/// `b = 1/2` edge factorization this pins strict positivity of `C` on the
/// whole half-open triangle `0 < a < b <= 1/2`, not just on shrinkages; the
/// test suite freezes the coefficient signs.
pub fn full_triangle() -> TriangleRegion {
    let half = rat(1, 2);
    TriangleRegion::new(
        (rat_int(0), rat_int(0)),
        (rat_int(0), half.clone()),
        (half.clone(), half),
    )
}

/// One row of a grid scan: the exact value of `C` at `(a, b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanRow {
    pub a: Rational,
    pub b: Rational,
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanResult {
    pub rows: Vec<ScanRow>,
    /// Index of the minimum value (first occurrence in row order).
    pub min_index: usize,
}

impl ScanResult {
    pub fn min_row(&self) -> &ScanRow {
        &self.rows[self.min_index]
    }
}

/// Evaluates `C` exactly on the grid `{(i/(2n), j/(2n)) : 0 < i < j <= n}`,
/// in row order `(i, j)` lexicographic. Requires `n >= 2`.
pub fn scan_grid(n: u32) -> ScanResult {
    assert!(n >= 2, "scan grid needs n >= 2");
    use num_bigint::BigInt;
    use rayon::prelude::*;
    let pairs: Vec<(u32, u32)> = (1..n)
        .flat_map(|i| ((i + 1)..=n).map(move |j| (i, j)))
        .collect();
    let ev = crate::criterion::c_evaluator();
    let den = BigInt::from(2 * n);
    let rows: Vec<ScanRow> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let value = ev.eval(&BigInt::from(i), &BigInt::from(j), &den);
            ScanRow {
                a: rat(i as i64, 2 * n as i64),
                b: rat(j as i64, 2 * n as i64),
                value,
            }
        })
        .collect();
    let min_index = rows
        .iter()
        .enumerate()
        .min_by(|(_, x), (_, y)| x.value.cmp(&y.value))
        .map(|(k, _)| k)
        .unwrap();
    ScanResult { rows, min_index }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criterion::evaluate_c;
    use crate::criterion::Verdict;

    fn region_c_tenth() -> TriangleRegion {
        shrunken_triangle_c(&rat(1, 10)).unwrap()
    }

    #[test]
    fn negative_constant_is_refuted() {
        let f = BiPoly::constant(rat_int(-1));
        let (_, outcome) = certify_positive(&f, &region_c_tenth(), 3);
        match outcome {
            Outcome::Refuted { value, .. } => assert!(value <= Rational::zero()),
            other => panic!("expected refutation, got {other:?}"),
        }
    }

    #[test]
    fn zero_polynomial_is_refuted_not_certified() {
        let f = BiPoly::zero();
        let (_, outcome) = certify_positive(&f, &region_c_tenth(), 2);
        assert!(matches!(outcome, Outcome::Refuted { .. }));
    }

    #[test]
    fn c_certifies_on_interior_triangle() {
        let region = TriangleRegion::new(
            (rat(1, 100), rat(2, 100)),
            (rat(1, 100), rat(1, 2)),
            (rat(49, 100), rat(1, 2)),
        );
        let (_, outcome) = certify_positive(assemble_c(), &region, 12);
        assert_eq!(outcome, Outcome::Certified);
    }

    #[test]
    fn region_straddling_diagonal_never_certifies() {
        // C vanishes on a = b, so a region with that edge in its interior
        // cannot be certified at any depth; with a vertex exactly on the
        // diagonal the corner value 0 refutes immediately.
        let across = TriangleRegion::new(
            (rat(2, 10), rat(1, 10)),
            (rat(4, 10), rat(3, 10)),
            (rat(2, 10), rat(4, 10)),
        );
        let (_, outcome) = certify_positive(assemble_c(), &across, 4);
        assert!(!matches!(outcome, Outcome::Certified), "got {outcome:?}");

        let touching = TriangleRegion::new(
            (rat(2, 10), rat(2, 10)),
            (rat(2, 10), rat(4, 10)),
            (rat(3, 10), rat(4, 10)),
        );
        let (_, outcome) = certify_positive(assemble_c(), &touching, 2);
        match outcome {
            Outcome::Refuted { witness, value } => {
                assert_eq!(value, Rational::zero());
                assert_eq!(witness.0, witness.1);
            }
            other => panic!("expected refutation with a zero witness, got {other:?}"),
        }
    }

    #[test]
    fn refuted_witness_reevaluates_nonpositive() {
        let f = BiPoly::from_terms([((1, 0), rat_int(1)), ((0, 0), rat(-1, 5))]); // a - 1/5
        let (_, outcome) = certify_positive(&f, &region_c_tenth(), 6);
        match outcome {
            Outcome::Refuted { witness, value } => {
                assert_eq!(f.eval(&witness.0, &witness.1), value);
                assert!(value <= Rational::zero());
            }
            other => panic!("expected refutation, got {other:?}"),
        }
    }

    #[test]
    fn certified_region_spot_check() {
        // soundness: a certified region evaluates positive at 100 interior
        // rational sample points
        let region = shrunken_triangle_c_tilde(&rat(1, 8)).unwrap();
        let f = crate::criterion::reduced_c_tilde();
        let (_, outcome) = certify_positive(f, &region, 10);
        assert_eq!(outcome, Outcome::Certified);
        let mut checked = 0;
        for p in 0..10i64 {
            for q in 0..(10 - p) {
                let l0 = rat(2 * p + 1, 40);
                let l1 = rat(2 * q + 1, 40);
                let l2 = rat_int(1) - &l0 - &l1;
                if l2 <= rat_int(0) {
                    continue;
                }
                let (a, b) = region.barycentric_point(&l0, &l1, &l2);
                assert!(f.eval(&a, &b) > Rational::zero());
                checked += 1;
            }
        }
        assert!(checked >= 50, "only {checked} sample points");
    }

    #[test]
    fn certification_is_monotone_in_depth() {
        let region = shrunken_triangle_c(&rat(1, 8)).unwrap();
        let (tree_lo, outcome_lo) = certify_positive(assemble_c(), &region, 10);
        assert_eq!(outcome_lo, Outcome::Certified);
        let (tree_hi, outcome_hi) = certify_positive(assemble_c(), &region, 14);
        assert_eq!(outcome_hi, Outcome::Certified);
        // certified runs stop before the depth limit, so the trees agree
        assert_eq!(tree_lo, tree_hi);
    }

    #[test]
    fn ladder_examples() {
        let certs = certify_margin_ladder(&[rat(1, 10)], 12).unwrap();
        assert_eq!(certs.len(), 2);
        assert_eq!(certs[0].polynomial_id, PolynomialId::C);
        assert_eq!(certs[1].polynomial_id, PolynomialId::CTilde);
        assert!(certs.iter().all(|c| c.outcome == Outcome::Certified));

        // delta = 1/4: the shrunken regions collapse to single points that
        // still certify by direct evaluation
        let certs = certify_margin_ladder(&[rat(1, 4)], 0).unwrap();
        assert!(certs.iter().all(|c| c.outcome == Outcome::Certified));
        assert!(certs.iter().all(|c| c.region.is_degenerate()));

        // delta = 1/2: empty shrunken triangle
        assert_eq!(
            certify_margin_ladder(&[rat(1, 2)], 4),
            Err(CertifyError::DegenerateRegion(rat(1, 2)))
        );
        assert_eq!(
            certify_margin_ladder(&[rat_int(0)], 4),
            Err(CertifyError::DegenerateRegion(rat_int(0)))
        );
    }

    #[test]
    fn depth_limit_reports_inconclusive() {
        // (a - 1/4)^2 + (b - 1/4)^2 - 1/1000: a thin zero disk strictly
        // inside the cell, with positive corners and centroid. Without
        // subdivision the mixed-sign coefficients cannot be resolved; with
        // it, a sample point lands in the disk and refutes.
        let f = BiPoly::from_terms([
            ((2, 0), rat_int(1)),
            ((0, 2), rat_int(1)),
            ((1, 0), rat(-1, 2)),
            ((0, 1), rat(-1, 2)),
            ((0, 0), rat(1, 8) - rat(1, 1000)),
        ]);
        let tri = TriangleRegion::new(
            (rat_int(0), rat_int(0)),
            (rat_int(1), rat_int(0)),
            (rat_int(0), rat_int(1)),
        );
        let (_, shallow) = certify_positive(&f, &tri, 0);
        assert_eq!(shallow, Outcome::Inconclusive { unresolved: 1 });
        let (_, deep) = certify_positive(&f, &tri, 6);
        match deep {
            Outcome::Refuted { witness, value } => {
                assert_eq!(witness, (rat(1, 4), rat(1, 4)));
                assert_eq!(value, rat(-1, 1000));
            }
            other => panic!("expected refutation, got {other:?}"),
        }
    }

    #[test]
    fn full_triangle_coefficients_are_nonnegative() {
        // The coefficient lists over the whole triangle: no negative entry
        // for either polynomial. The zeros sit on the diagonal edge and at
        // the origin corner, exactly where the polynomials vanish.
        let c_coeffs = bernstein_coefficients(assemble_c(), &full_triangle(), 8).unwrap();
        assert_eq!(c_coeffs.len(), 45);
        assert!(c_coeffs.iter().all(|c| c >= &Rational::zero()));
        assert_eq!(c_coeffs.iter().filter(|c| c.is_zero()).count(), 16);
        let min_positive = c_coeffs.iter().filter(|c| !c.is_zero()).min().unwrap();
        assert_eq!(*min_positive, rat(11, 53760));

        let ct = crate::criterion::reduced_c_tilde();
        let ct_coeffs = bernstein_coefficients(ct, &full_triangle(), 7).unwrap();
        assert_eq!(ct_coeffs.len(), 36);
        assert!(ct_coeffs.iter().all(|c| c >= &Rational::zero()));
        assert_eq!(ct_coeffs.iter().filter(|c| c.is_zero()).count(), 7);
    }

    #[test]
    fn scan_grid_examples() {
        let scan = scan_grid(4);
        assert_eq!(scan.rows.len(), 6);
        assert!(scan.rows.iter().all(|r| r.value > Rational::zero()));
        assert!(scan.rows.iter().all(|r| r.a < r.b));

        let scan = scan_grid(2);
        assert_eq!(scan.rows.len(), 1);
        let row = &scan.rows[0];
        assert_eq!((row.a.clone(), row.b.clone()), (rat(1, 4), rat(1, 2)));
        assert_eq!(row.value, evaluate_c(rat(1, 4), rat(1, 2)).value);
        assert_eq!(evaluate_c(rat(1, 4), rat(1, 2)).verdict, Verdict::KStable);
    }
}
