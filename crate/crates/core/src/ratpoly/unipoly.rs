//! Dense univariate polynomials with exact rational coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{rat_int, Rational};

/// Univariate polynomial in `t`, stored densely: `coeffs[i]` is the
/// coefficient of `t^i`. Canonical form: no trailing zero coefficient,
/// the zero polynomial is the empty list.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    /// Builds from low-to-high coefficients, trimming trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `coeff * t^exp`
    pub fn monomial(coeff: Rational, exp: usize) -> Self {
        if coeff.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::zero(); exp + 1];
        coeffs[exp] = coeff;
        Self { coeffs }
    }

    /// The variable `t` itself.
    pub fn t() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// `p(-t)`: flips the sign of every odd-degree coefficient.
    pub fn reflect(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        }
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::from_coeffs(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * rat_int(i as i64 + 1))
                .collect(),
        )
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::zero());
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / rat_int(i as i64 + 1));
        }
        Self::from_coeffs(coeffs)
    }

    /// Exact value of the antiderivative difference over `[lower, upper]`.
    pub fn definite_integral(&self, lower: &Rational, upper: &Rational) -> Rational {
        let h = self.antiderivative();
        h.eval(upper) - h.eval(lower)
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) + rhs.coeff(i));
        }
        UniPoly::from_coeffs(coeffs)
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) - rhs.coeff(i));
        }
        UniPoly::from_coeffs(coeffs)
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        UniPoly::from_coeffs(coeffs)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Add for UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: UniPoly) -> UniPoly {
        &self + &rhs
    }
}

impl Sub for UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: UniPoly) -> UniPoly {
        &self - &rhs
    }
}

impl Mul for UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: UniPoly) -> UniPoly {
        &self * &rhs
    }
}

impl Neg for UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        -&self
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c < &Rational::zero() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c < &Rational::zero() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            if i == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                if i == 1 {
                    write!(f, "t")?;
                } else {
                    write!(f, "t^{i}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::rat;

    #[test]
    fn monomial_product() {
        // t * (t + 1) = t^2 + t
        let t = UniPoly::t();
        let t_plus_1 = UniPoly::from_coeffs(vec![rat_int(1), rat_int(1)]);
        let expected = UniPoly::from_coeffs(vec![rat_int(0), rat_int(1), rat_int(1)]);
        assert_eq!(&t * &t_plus_1, expected);
    }

    #[test]
    fn scaling_yields_p() {
        // (-2t^3 - 3t^2 - t) * 1/2
        let raw = UniPoly::from_coeffs(vec![rat_int(0), rat_int(-1), rat_int(-3), rat_int(-2)]);
        let p = raw.scale(&rat(1, 2));
        let expected =
            UniPoly::from_coeffs(vec![rat_int(0), rat(-1, 2), rat(-3, 2), rat_int(-1)]);
        assert_eq!(p, expected);
    }

    #[test]
    fn empty_interval_integral_is_zero() {
        let p = UniPoly::from_coeffs(vec![rat_int(3), rat(1, 7), rat_int(-2)]);
        assert_eq!(p.definite_integral(&rat(5, 3), &rat(5, 3)), Rational::zero());
    }

    #[test]
    fn unit_integrand() {
        let one = UniPoly::constant(rat_int(1));
        assert_eq!(one.definite_integral(&rat_int(0), &rat_int(1)), rat_int(1));
    }

    #[test]
    fn degree_of_product_adds() {
        let p = UniPoly::from_coeffs(vec![rat_int(1), rat_int(2), rat_int(1)]);
        let q = UniPoly::from_coeffs(vec![rat_int(-1), rat_int(1)]);
        assert_eq!((&p * &q).degree(), Some(3));
    }

    #[test]
    fn reflect_flips_odd_terms() {
        let p = UniPoly::from_coeffs(vec![rat_int(1), rat_int(2), rat_int(3), rat_int(4)]);
        let r = p.reflect();
        assert_eq!(
            r,
            UniPoly::from_coeffs(vec![rat_int(1), rat_int(-2), rat_int(3), rat_int(-4)])
        );
        assert_eq!(p.eval(&rat(3, 7)), r.eval(&rat(-3, 7)));
    }

    #[test]
    fn display_reads_naturally() {
        let p = UniPoly::from_coeffs(vec![rat_int(0), rat(-1, 2), rat(-3, 2), rat_int(-1)]);
        assert_eq!(p.to_string(), "-t^3 - 3/2*t^2 - 1/2*t");
        assert_eq!(UniPoly::zero().to_string(), "0");
    }
}
