//! Exact rational scalars and polynomial arithmetic.
//!
//! Everything downstream (the criterion polynomial, the ample-cone
//! normalization, the Bernstein certificates) is built on the types here.
//! No floating point: all arithmetic is exact and all values are kept in
//! canonical form so that equality is structural.

mod bipoly;
mod unipoly;

pub use bipoly::{BiPoly, LineSubstitution, LinearFactor, NotDivisible, ScaledEvaluator};
pub use unipoly::UniPoly;

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

use num_bigint::BigInt;

/// Shorthand constructor; panics on a zero denominator.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Integer as a rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Weight factor for [`symbolic_integral_ab`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntegralWeight {
    /// Integrate `p(t) dt`.
    One,
    /// Integrate `t * p(t) dt`.
    T,
}

/// Integrates `weight(t) * p(t)` over `t` from `-b` to `-a`, symbolically,
/// returning the result as a bivariate polynomial in `(a, b)`.
///
/// Computed by antidifferentiation followed by substitution of the rational
/// endpoints `-b` and `-a`: the result is `H(-a) - H(-b)` where `H` is the
/// antiderivative of the weighted integrand.
pub fn symbolic_integral_ab(p: &UniPoly, weight: IntegralWeight) -> BiPoly {
    let integrand = match weight {
        IntegralWeight::One => p.clone(),
        IntegralWeight::T => &UniPoly::t() * p,
    };
    let h = integrand.antiderivative();
    // h(-x) as a univariate polynomial in x, then read x as a resp. b.
    let h_neg = h.reflect();
    &BiPoly::from_unipoly_in_a(&h_neg) - &BiPoly::from_unipoly_in_b(&h_neg)
}
