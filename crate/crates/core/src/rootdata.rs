//! SL3 weight and root data behind the criterion polynomials.
//!
//! The fixed basis is the pair of fundamental weights (w1, w2). Only three
//! positive roots exist here and each carries the linear functional its
//! normalized pairing induces on weight coordinates; that is all the root
//! theory this crate needs.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::ratpoly::{rat, rat_int, Rational, UniPoly};

/// A weight written in the fundamental-weight basis: `x1*w1 + x2*w2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Weight {
    pub x1: Rational,
    pub x2: Rational,
}

impl Weight {
    pub fn new(x1: Rational, x2: Rational) -> Self {
        Self { x1, x2 }
    }

    /// First fundamental weight w1 = (1, 0).
    pub fn w1() -> Self {
        Self::new(rat_int(1), rat_int(0))
    }

    /// Second fundamental weight w2 = (0, 1); this is the weight `chi` of
    /// the moment-segment base point.
    pub fn w2() -> Self {
        Self::new(rat_int(0), rat_int(1))
    }

    /// The simple root alpha2 = 2*w2 - w1 = (-1, 2); this is the spherical
    /// root `sigma` directing the moment segment.
    pub fn alpha2() -> Self {
        Self::new(rat_int(-1), rat_int(2))
    }

    /// Half-sum of positive roots, w1 + w2 = (1, 1).
    pub fn rho() -> Self {
        Self::new(rat_int(1), rat_int(1))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(&self.x1 * c, &self.x2 * c)
    }

    pub fn add(&self, other: &Weight) -> Self {
        Self::new(&self.x1 + &other.x1, &self.x2 + &other.x2)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x1, self.x2)
    }
}

/// The three positive roots of SL3.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootLabel {
    Alpha1,
    Alpha2,
    Alpha1PlusAlpha2,
}

impl RootLabel {
    pub const ALL: [RootLabel; 3] = [
        RootLabel::Alpha1,
        RootLabel::Alpha2,
        RootLabel::Alpha1PlusAlpha2,
    ];
}

impl fmt::Display for RootLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootLabel::Alpha1 => write!(f, "alpha1"),
            RootLabel::Alpha2 => write!(f, "alpha2"),
            RootLabel::Alpha1PlusAlpha2 => write!(f, "alpha1+alpha2"),
        }
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("unknown root label {0:?}; expected alpha1, alpha2 or alpha1+alpha2")]
pub struct UnknownRoot(pub String);

impl FromStr for RootLabel {
    type Err = UnknownRoot;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "alpha1" => Ok(RootLabel::Alpha1),
            "alpha2" => Ok(RootLabel::Alpha2),
            "alpha1+alpha2" => Ok(RootLabel::Alpha1PlusAlpha2),
            other => Err(UnknownRoot(other.to_string())),
        }
    }
}

/// The normalized pairing `<root, x1*w1 + x2*w2> / <alpha1, w1 + w2>` as a
/// linear functional of the weight coordinates: `x1`, `x2` and `(x1+x2)/2`
/// for the three positive roots respectively.
pub fn pairing_ratio(root: RootLabel, w: &Weight) -> Rational {
    match root {
        RootLabel::Alpha1 => w.x1.clone(),
        RootLabel::Alpha2 => w.x2.clone(),
        RootLabel::Alpha1PlusAlpha2 => (&w.x1 + &w.x2) * rat(1, 2),
    }
}

/// Coordinates of the weight line `chi + t*sigma` as polynomials in `t`:
/// `(-t, 1 + 2t)`.
pub fn weight_line() -> (UniPoly, UniPoly) {
    let x1 = UniPoly::monomial(rat_int(-1), 1);
    let x2 = UniPoly::from_coeffs(vec![rat_int(1), rat_int(2)]);
    (x1, x2)
}

/// A derived quantity disagreed with the form it must reproduce; this
/// signals a transcription error, not a runtime condition.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("consistency failure in {context}: computed {computed}, expected {expected}")]
pub struct ConsistencyFailure {
    pub context: &'static str,
    pub computed: String,
    pub expected: String,
}

/// `P(t) = (-2t^3 - 3t^2 - t)/2`, the reference form `build_p` must hit.
pub fn stated_p() -> UniPoly {
    UniPoly::from_coeffs(vec![rat_int(0), rat(-1, 2), rat(-3, 2), rat_int(-1)])
}

/// `Q(t) = (1 - 3t^2)/2`. Taken as given input data; the general formula
/// it comes from is outside this crate and nothing here re-derives it.
pub fn stated_q() -> UniPoly {
    UniPoly::from_coeffs(vec![rat(1, 2), rat_int(0), rat(-3, 2)])
}

/// Builds `P(t)` as the product over the three positive roots of the
/// normalized pairing evaluated on the weight line `chi + t*sigma`, and
/// checks the product against [`stated_p`] coefficient for coefficient.
pub fn build_p() -> Result<UniPoly, ConsistencyFailure> {
    let (x1, x2) = weight_line();
    let half_sum = (&x1 + &x2).scale(&rat(1, 2));
    let product = &(&x1 * &x2) * &half_sum;
    let expected = stated_p();
    if product != expected {
        return Err(ConsistencyFailure {
            context: "build_p",
            computed: product.to_string(),
            expected: expected.to_string(),
        });
    }
    Ok(product)
}
