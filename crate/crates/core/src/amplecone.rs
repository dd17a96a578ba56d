//! From integer line-bundle data to normalized triangle coordinates.
//!
//! A divisor is written `D(a, b, c) = -aE + b*diamond + c*heart` with the
//! club coefficient fixed to zero (the unique relation
//! `diamond + heart = E + club` makes that representative canonical).
//! Ampleness is `0 < a < min(b, c)`; ample classes normalize, after scaling
//! by `1/(b+c)` and swapping `b` and `c` if needed, into the triangle
//! `0 < a < b <= 1/2` where the criterion lives.

use std::fmt;

use thiserror::Error;

use crate::criterion::{evaluate_c, CriterionReport};
use crate::ratpoly::{rat_int, Rational};
use crate::rootdata::Weight;

use num_bigint::BigInt;

/// Integer coefficients of `D(a, b, c) = -aE + b*diamond + c*heart`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BundleParams {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl BundleParams {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        Self { a, b, c }
    }
}

impl fmt::Display for BundleParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D({}, {}, {})", self.a, self.b, self.c)
    }
}

/// Image of a bundle in the normalized triangle: `(a/(b+c), min(b,c)/(b+c))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedClass {
    pub a: Rational,
    pub b: Rational,
}

impl NormalizedClass {
    /// Membership in the half-open triangle `0 < a < b <= 1/2`.
    pub fn in_triangle(&self) -> bool {
        self.a > rat_int(0) && self.a < self.b && self.b <= Rational::new(1.into(), 2.into())
    }
}

/// The moment polytope of a bundle: the segment
/// `base_weight + [lo, hi] * alpha2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentSegment {
    pub base_weight: Weight,
    pub lo: Rational,
    pub hi: Rational,
}

impl MomentSegment {
    pub fn length(&self) -> Rational {
        &self.hi - &self.lo
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum AmpleConeError {
    #[error("degenerate scaling: b + c must be positive, got b + c = {0}")]
    DegenerateScaling(i64),
    #[error("empty moment polytope: sup(-b,-c) = {lo} exceeds inf(-a,0) = {hi}")]
    EmptyPolytope { lo: i64, hi: i64 },
    #[error("{0} is not ample: ampleness requires 0 < a < min(b, c)")]
    NotAmple(BundleParams),
}

/// Brion ampleness test: `0 < a < min(b, c)`.
pub fn is_ample(p: &BundleParams) -> bool {
    0 < p.a && p.a < p.b.min(p.c)
}

/// Scales by `1/(b+c)` and swaps `b` and `c` if needed so the second
/// coordinate lands in `(0, 1/2]` ... for ample input. Requires `b + c > 0`.
pub fn normalize(p: &BundleParams) -> Result<NormalizedClass, AmpleConeError> {
    let s = p.b + p.c;
    if s <= 0 {
        return Err(AmpleConeError::DegenerateScaling(s));
    }
    let s_big = BigInt::from(s);
    Ok(NormalizedClass {
        a: Rational::new(p.a.into(), s_big.clone()),
        b: Rational::new(p.b.min(p.c).into(), s_big),
    })
}

/// The moment segment `(b+c)*w2 + [sup(-b,-c), inf(-a,0)] * alpha2`.
pub fn moment_polytope(p: &BundleParams) -> Result<MomentSegment, AmpleConeError> {
    let lo = (-p.b).max(-p.c);
    let hi = (-p.a).min(0);
    if lo > hi {
        return Err(AmpleConeError::EmptyPolytope { lo, hi });
    }
    Ok(MomentSegment {
        base_weight: Weight::w2().scale(&rat_int(p.b + p.c)),
        lo: rat_int(lo),
        hi: rat_int(hi),
    })
}

/// Gates on ampleness, then evaluates the criterion on the normalized class.
pub fn kstability_verdict(p: &BundleParams) -> Result<CriterionReport, AmpleConeError> {
    if !is_ample(p) {
        return Err(AmpleConeError::NotAmple(*p));
    }
    let n = normalize(p)?;
    Ok(evaluate_c(n.a, n.b))
}

/// A divisor over the full basis `E, diamond, heart, club`, used to pin the
/// relation `diamond + heart = E + club` and the canonical club-free
/// representative.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Divisor {
    pub e: i64,
    pub diamond: i64,
    pub heart: i64,
    pub club: i64,
}

impl Divisor {
    pub fn from_bundle(p: &BundleParams) -> Self {
        Self {
            e: -p.a,
            diamond: p.b,
            heart: p.c,
            club: 0,
        }
    }

    /// The relation vector `diamond + heart - E - club`, which represents
    /// the zero class.
    pub fn relation() -> Self {
        Self {
            e: -1,
            diamond: 1,
            heart: 1,
            club: -1,
        }
    }

    pub fn add_scaled(&self, other: &Divisor, k: i64) -> Self {
        Self {
            e: self.e + k * other.e,
            diamond: self.diamond + k * other.diamond,
            heart: self.heart + k * other.heart,
            club: self.club + k * other.club,
        }
    }

    /// Rewrites to the unique representative with club coefficient zero,
    /// substituting `club = diamond + heart - E`.
    pub fn canonicalize(&self) -> BundleParams {
        BundleParams {
            a: self.club - self.e,
            b: self.diamond + self.club,
            c: self.heart + self.club,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criterion::Verdict;
    use crate::ratpoly::rat;

    #[test]
    fn ampleness_examples() {
        // anticanonical: -K = pi*O(3,3) - E
        assert!(is_ample(&BundleParams::new(1, 3, 3)));
        // a = 0 is semi-ample, not ample
        assert!(!is_ample(&BundleParams::new(0, 1, 1)));
        // a = min(b, c) violates the strict inequality
        assert!(!is_ample(&BundleParams::new(2, 2, 5)));
    }

    #[test]
    fn normalize_examples() {
        let n = normalize(&BundleParams::new(1, 3, 3)).unwrap();
        assert_eq!((n.a, n.b), (rat(1, 6), rat(1, 2)));
        let n = normalize(&BundleParams::new(1, 2, 3)).unwrap();
        assert_eq!((n.a, n.b), (rat(1, 5), rat(2, 5)));
        // scale invariance
        assert_eq!(
            normalize(&BundleParams::new(2, 6, 6)).unwrap(),
            normalize(&BundleParams::new(1, 3, 3)).unwrap()
        );
        // swap invariance
        assert_eq!(
            normalize(&BundleParams::new(1, 3, 2)).unwrap(),
            normalize(&BundleParams::new(1, 2, 3)).unwrap()
        );
    }

    #[test]
    fn normalize_rejects_degenerate_scaling() {
        assert_eq!(
            normalize(&BundleParams::new(1, 0, 0)),
            Err(AmpleConeError::DegenerateScaling(0))
        );
        assert!(matches!(
            normalize(&BundleParams::new(1, -3, 1)),
            Err(AmpleConeError::DegenerateScaling(-2))
        ));
    }

    #[test]
    fn moment_polytope_examples() {
        let seg = moment_polytope(&BundleParams::new(1, 3, 3)).unwrap();
        assert_eq!(seg.base_weight, Weight::new(rat_int(0), rat_int(6)));
        assert_eq!((seg.lo, seg.hi), (rat_int(-3), rat_int(-1)));

        let seg = moment_polytope(&BundleParams::new(0, 1, 1)).unwrap();
        assert_eq!(seg.base_weight, Weight::new(rat_int(0), rat_int(2)));
        assert_eq!((seg.lo, seg.hi), (rat_int(-1), rat_int(0)));

        assert_eq!(
            moment_polytope(&BundleParams::new(5, 1, 1)),
            Err(AmpleConeError::EmptyPolytope { lo: -1, hi: -5 })
        );
    }

    #[test]
    fn verdict_examples() {
        let r = kstability_verdict(&BundleParams::new(1, 3, 3)).unwrap();
        assert_eq!(r.verdict, Verdict::KStable);
        assert_eq!(r.value, rat(707, 233280));

        let r = kstability_verdict(&BundleParams::new(1, 100, 100)).unwrap();
        assert_eq!(r.verdict, Verdict::KStable);

        assert!(matches!(
            kstability_verdict(&BundleParams::new(0, 1, 1)),
            Err(AmpleConeError::NotAmple(_))
        ));
    }

    #[test]
    fn ample_iff_triangle_for_sorted_inputs() {
        for a in -2..8i64 {
            for b in 1..8i64 {
                for c in b..8i64 {
                    let p = BundleParams::new(a, b, c);
                    let n = normalize(&p).unwrap();
                    assert_eq!(is_ample(&p), n.in_triangle(), "{p}");
                }
            }
        }
    }

    #[test]
    fn normalization_invariances() {
        for a in 1..5i64 {
            for b in 1..6i64 {
                for c in 1..6i64 {
                    let p = BundleParams::new(a, b, c);
                    let n = normalize(&p).unwrap();
                    for k in 2..4i64 {
                        let scaled = BundleParams::new(k * a, k * b, k * c);
                        assert_eq!(normalize(&scaled).unwrap(), n);
                    }
                    let swapped = BundleParams::new(a, c, b);
                    assert_eq!(normalize(&swapped).unwrap(), n);
                }
            }
        }
    }

    #[test]
    fn moment_length_matches_normalized_gap() {
        for a in 1..5i64 {
            for b in (a + 1)..8i64 {
                for c in b..8i64 {
                    let p = BundleParams::new(a, b, c);
                    assert!(is_ample(&p));
                    let seg = moment_polytope(&p).unwrap();
                    let n = normalize(&p).unwrap();
                    assert!(seg.length() > rat_int(0));
                    assert_eq!(seg.length() / rat_int(b + c), &n.b - &n.a);
                }
            }
        }
    }

    #[test]
    fn relation_vector_fixes_club_free_representative() {
        let p = BundleParams::new(2, 5, 7);
        let d = Divisor::from_bundle(&p);
        // D(a-k, b-k, c-k) + k*(diamond + heart - E) has the same components
        let k = 3;
        let shifted = Divisor::from_bundle(&BundleParams::new(p.a - k, p.b - k, p.c - k));
        let rebuilt = shifted.add_scaled(
            &Divisor {
                e: -1,
                diamond: 1,
                heart: 1,
                club: 0,
            },
            k,
        );
        assert_eq!(rebuilt, d);
        // adding the full relation vector moves all four coefficients but
        // canonicalizes back to the same (a, b, c)
        let moved = d.add_scaled(&Divisor::relation(), k);
        assert_eq!(moved.e, -p.a - k);
        assert_eq!(moved.diamond, p.b + k);
        assert_eq!(moved.heart, p.c + k);
        assert_eq!(moved.club, -k);
        assert_eq!(moved.canonicalize(), p);
        assert_eq!(d.canonicalize(), p);
    }
}
