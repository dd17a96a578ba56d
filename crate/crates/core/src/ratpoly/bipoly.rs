//! Sparse bivariate polynomials in `(a, b)` with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::{rat, Rational, UniPoly};

/// Bivariate polynomial, stored as a map from exponent pair `(i, j)` to the
/// nonzero coefficient of `a^i * b^j`. Equality is exact coefficient-map
/// equality; no zero coefficient is ever stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), Rational>,
}

/// Restriction of a bivariate polynomial to a line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LineSubstitution {
    /// `b := const`; result is univariate in `a`.
    BEquals(Rational),
    /// `a := const`; result is univariate in `b`.
    AEquals(Rational),
    /// `b := a`; result is univariate in `a`.
    BEqualsA,
}

/// The linear factors the criterion analysis divides by.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinearFactor {
    /// `b - a`
    BMinusA,
    /// `a`
    A,
    /// `b`
    B,
    /// `1 - b`
    OneMinusB,
    /// `1 - 2a`
    OneMinusTwoA,
    /// `1 - 2b`
    OneMinusTwoB,
}

impl LinearFactor {
    pub fn as_bipoly(self) -> BiPoly {
        match self {
            LinearFactor::BMinusA => {
                BiPoly::from_terms([((0, 1), Rational::one()), ((1, 0), -Rational::one())])
            }
            LinearFactor::A => BiPoly::monomial(Rational::one(), 1, 0),
            LinearFactor::B => BiPoly::monomial(Rational::one(), 0, 1),
            LinearFactor::OneMinusB => {
                BiPoly::from_terms([((0, 0), Rational::one()), ((0, 1), -Rational::one())])
            }
            LinearFactor::OneMinusTwoA => {
                BiPoly::from_terms([((0, 0), Rational::one()), ((1, 0), -rat(2, 1))])
            }
            LinearFactor::OneMinusTwoB => {
                BiPoly::from_terms([((0, 0), Rational::one()), ((0, 1), -rat(2, 1))])
            }
        }
    }
}

/// Division by a linear factor left a nonzero remainder; this usually means
/// a formula was transcribed wrongly somewhere upstream.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("{factor:?} does not divide the polynomial; remainder {remainder}")]
pub struct NotDivisible {
    pub factor: LinearFactor,
    pub remainder: BiPoly,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0, 0)
    }

    /// `coeff * a^i * b^j`
    pub fn monomial(coeff: Rational, i: u32, j: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert((i, j), coeff);
        }
        Self { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), Rational)>>(iter: I) -> Self {
        let mut p = Self::zero();
        for ((i, j), c) in iter {
            p.add_term(i, j, c);
        }
        p
    }

    fn add_term(&mut self, i: u32, j: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((i, j)) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Terms in `(a_exp, b_exp)` lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    /// Terms ordered by (total degree, a-exponent), the canonical
    /// presentation order for expanded output.
    pub fn terms_by_total_degree(&self) -> Vec<((u32, u32), Rational)> {
        let mut v: Vec<_> = self.terms.iter().map(|(&k, c)| (k, c.clone())).collect();
        v.sort_by_key(|&((i, j), _)| (i + j, i, j));
        v
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree, or `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(&k, v)| (k, v * c)).collect(),
        }
    }

    /// Exact evaluation at `(a, b)`: Horner in `b`, then in `a`.
    pub fn eval(&self, a: &Rational, b: &Rational) -> Rational {
        let by_b = self.as_poly_in_b();
        let mut acc = Rational::zero();
        for coeff_in_a in by_b.iter().rev() {
            acc = acc * b + coeff_in_a.eval(a);
        }
        acc
    }

    /// Reads a univariate polynomial as a polynomial in `a`.
    pub fn from_unipoly_in_a(p: &UniPoly) -> Self {
        Self::from_terms(
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(i, c)| ((i as u32, 0), c.clone())),
        )
    }

    /// Reads a univariate polynomial as a polynomial in `b`.
    pub fn from_unipoly_in_b(p: &UniPoly) -> Self {
        Self::from_terms(
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(i, c)| ((0, i as u32), c.clone())),
        )
    }

    /// Swaps the roles of `a` and `b`.
    pub fn swap_vars(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())).collect(),
        }
    }

    /// View as a polynomial in `b` whose coefficients are polynomials in `a`:
    /// entry `k` is the coefficient of `b^k`.
    pub fn as_poly_in_b(&self) -> Vec<UniPoly> {
        let deg_b = self.terms.keys().map(|&(_, j)| j).max();
        let Some(deg_b) = deg_b else {
            return Vec::new();
        };
        let mut rows: Vec<Vec<Rational>> = vec![Vec::new(); deg_b as usize + 1];
        for (&(i, j), c) in &self.terms {
            let row = &mut rows[j as usize];
            if row.len() <= i as usize {
                row.resize(i as usize + 1, Rational::zero());
            }
            row[i as usize] = c.clone();
        }
        rows.into_iter().map(UniPoly::from_coeffs).collect()
    }

    fn from_poly_in_b(rows: Vec<UniPoly>) -> Self {
        let mut p = Self::zero();
        for (j, row) in rows.into_iter().enumerate() {
            for (i, c) in row.coeffs().iter().enumerate() {
                p.add_term(i as u32, j as u32, c.clone());
            }
        }
        p
    }

    /// Exact restriction to a line, as a univariate polynomial in the
    /// remaining variable.
    pub fn substitute_line(&self, subst: &LineSubstitution) -> UniPoly {
        match subst {
            LineSubstitution::BEquals(c) => {
                let rows = self.as_poly_in_b();
                let mut acc = UniPoly::zero();
                for row in rows.iter().rev() {
                    acc = &acc.scale(c) + row;
                }
                acc
            }
            LineSubstitution::AEquals(c) => self
                .swap_vars()
                .substitute_line(&LineSubstitution::BEquals(c.clone())),
            LineSubstitution::BEqualsA => {
                let rows = self.as_poly_in_b();
                let a = UniPoly::t();
                let mut acc = UniPoly::zero();
                for row in rows.iter().rev() {
                    acc = &(&acc * &a) + row;
                }
                acc
            }
        }
    }

    /// Exact division by one of the linear factors of [`LinearFactor`],
    /// implemented as synthetic division with an exact remainder check.
    pub fn divide_linear_factor(&self, factor: LinearFactor) -> Result<BiPoly, NotDivisible> {
        // Every factor is s*(x - r) for main variable x in {a, b}, scalar s,
        // and r either a rational constant or (for b - a) the other variable.
        match factor {
            LinearFactor::BMinusA => {
                let root = UniPoly::t(); // r = a, as a polynomial in a
                self.synthetic_divide_in_b(&root, &Rational::one(), factor)
            }
            LinearFactor::B => {
                self.synthetic_divide_in_b(&UniPoly::zero(), &Rational::one(), factor)
            }
            LinearFactor::OneMinusB => {
                // 1 - b = -(b - 1)
                self.synthetic_divide_in_b(
                    &UniPoly::constant(Rational::one()),
                    &(-Rational::one()),
                    factor,
                )
            }
            LinearFactor::OneMinusTwoB => {
                // 1 - 2b = -2(b - 1/2)
                self.synthetic_divide_in_b(&UniPoly::constant(rat(1, 2)), &rat(-2, 1), factor)
            }
            LinearFactor::A => Ok(self
                .swap_vars()
                .divide_linear_factor(LinearFactor::B)
                .map_err(|e| NotDivisible {
                    factor,
                    remainder: e.remainder.swap_vars(),
                })?
                .swap_vars()),
            LinearFactor::OneMinusTwoA => Ok(self
                .swap_vars()
                .divide_linear_factor(LinearFactor::OneMinusTwoB)
                .map_err(|e| NotDivisible {
                    factor,
                    remainder: e.remainder.swap_vars(),
                })?
                .swap_vars()),
        }
    }

    /// Divides by `scalar * (b - root(a))`. Synthetic division in `b` over
    /// the ring of polynomials in `a`; the remainder must vanish exactly.
    fn synthetic_divide_in_b(
        &self,
        root: &UniPoly,
        scalar: &Rational,
        factor: LinearFactor,
    ) -> Result<BiPoly, NotDivisible> {
        if self.is_zero() {
            return Ok(BiPoly::zero());
        }
        let rows = self.as_poly_in_b();
        let deg = rows.len() - 1;
        if deg == 0 {
            // Nonzero polynomial of degree zero in b is never divisible.
            return Err(NotDivisible {
                factor,
                remainder: self.clone(),
            });
        }
        let mut quotient: Vec<UniPoly> = vec![UniPoly::zero(); deg];
        let mut carry = rows[deg].clone();
        for k in (1..deg).rev() {
            quotient[k] = carry.clone();
            carry = &rows[k] + &(root * &carry);
        }
        quotient[0] = carry.clone();
        let remainder = &rows[0] + &(root * &carry);
        if !remainder.is_zero() {
            return Err(NotDivisible {
                factor,
                remainder: BiPoly::from_unipoly_in_a(&remainder),
            });
        }
        let inv = Rational::one() / scalar;
        Ok(BiPoly::from_poly_in_b(
            quotient.into_iter().map(|q| q.scale(&inv)).collect(),
        ))
    }
}

impl FromIterator<((u32, u32), Rational)> for BiPoly {
    fn from_iter<I: IntoIterator<Item = ((u32, u32), Rational)>>(iter: I) -> Self {
        Self::from_terms(iter)
    }
}

/// Repeated exact evaluation of one polynomial at rationals over a shared
/// denominator, with the coefficient denominators cleared up front so the
/// inner loop runs on integers:
/// `f(p/d, q/d) = sum(m_ij p^i q^j d^(D-i-j)) / (M d^D)`.
#[derive(Clone, Debug)]
pub struct ScaledEvaluator {
    /// `(i, j, coeff * scale)` with integral entries.
    terms: Vec<(u32, u32, BigInt)>,
    /// Common denominator `M` of the coefficients.
    scale: BigInt,
    degree: u32,
}

impl ScaledEvaluator {
    pub fn new(f: &BiPoly) -> Self {
        let scale = f
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let terms = f
            .terms
            .iter()
            .map(|(&(i, j), c)| {
                let cleared = c * Rational::from_integer(scale.clone());
                debug_assert!(cleared.is_integer());
                (i, j, cleared.to_integer())
            })
            .collect();
        Self {
            terms,
            scale,
            degree: f.total_degree().unwrap_or(0),
        }
    }

    /// Exact value of `f(a_num/den, b_num/den)`; `den` must be positive.
    pub fn eval(&self, a_num: &BigInt, b_num: &BigInt, den: &BigInt) -> Rational {
        assert!(den > &BigInt::zero(), "denominator must be positive");
        if self.terms.is_empty() {
            return Rational::zero();
        }
        let n = self.degree as usize;
        let mut pow_a = Vec::with_capacity(n + 1);
        let mut pow_b = Vec::with_capacity(n + 1);
        let mut pow_d = Vec::with_capacity(n + 1);
        pow_a.push(BigInt::one());
        pow_b.push(BigInt::one());
        pow_d.push(BigInt::one());
        for k in 1..=n {
            pow_a.push(&pow_a[k - 1] * a_num);
            pow_b.push(&pow_b[k - 1] * b_num);
            pow_d.push(&pow_d[k - 1] * den);
        }
        let mut acc = BigInt::zero();
        for (i, j, m) in &self.terms {
            let filler = (self.degree - i - j) as usize;
            acc += m * &pow_a[*i as usize] * &pow_b[*j as usize] * &pow_d[filler];
        }
        Rational::new(acc, &self.scale * &pow_d[n])
    }

    /// Exact value at arbitrary rationals, via their common denominator.
    pub fn eval_rational(&self, a: &Rational, b: &Rational) -> Rational {
        let den = a.denom().lcm(b.denom());
        let a_num = a.numer() * (&den / a.denom());
        let b_num = b.numer() * (&den / b.denom());
        self.eval(&a_num, &b_num, &den)
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, -c);
        }
        out
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                out.add_term(i1 + i2, j1 + j2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly {
            terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect(),
        }
    }
}

impl Add for BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: BiPoly) -> BiPoly {
        &self + &rhs
    }
}

impl Sub for BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: BiPoly) -> BiPoly {
        &self - &rhs
    }
}

impl Mul for BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: BiPoly) -> BiPoly {
        &self * &rhs
    }
}

impl Neg for BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        -&self
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((i, j), c) in self.terms_by_total_degree() {
            if first {
                if c < Rational::zero() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c < Rational::zero() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            let mut wrote = false;
            if !mag.is_one() || (i, j) == (0, 0) {
                write!(f, "{mag}")?;
                wrote = true;
            }
            for (var, exp) in [("a", i), ("b", j)] {
                if exp == 0 {
                    continue;
                }
                if wrote {
                    write!(f, "*")?;
                }
                if exp == 1 {
                    write!(f, "{var}")?;
                } else {
                    write!(f, "{var}^{exp}")?;
                }
                wrote = true;
            }
        }
        Ok(())
    }
}
