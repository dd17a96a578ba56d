//! Exact Bernstein-Bezier coefficients of a bivariate polynomial over a
//! triangle.
//!
//! A polynomial of total degree at most `n` restricted to a triangle has a
//! unique expansion `f = sum c_k * multinomial(n, k) * lambda^k` over the
//! degree-`n` barycentric monomials. The basis functions are nonnegative and
//! sum to one on the triangle, so the coefficients enclose the range of `f`
//! there; in particular all coefficients positive proves `f > 0` on the
//! whole (closed) triangle.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::ratpoly::{rat, BiPoly, Rational};

use super::CertifyError;

/// Multi-index of a degree-`n` barycentric monomial: `(k0, k1, k2)` with
/// `k0 + k1 + k2 = n`.
pub type MultiIndex = (u16, u16, u16);

/// A triangle (more precisely the convex hull of three points, which may
/// degenerate to a segment or a point) with exact rational vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangleRegion {
    vertices: [(Rational, Rational); 3],
}

impl TriangleRegion {
    pub fn new(v0: (Rational, Rational), v1: (Rational, Rational), v2: (Rational, Rational)) -> Self {
        Self { vertices: [v0, v1, v2] }
    }

    pub fn vertices(&self) -> &[(Rational, Rational); 3] {
        &self.vertices
    }

    /// Twice the signed area.
    pub fn area2(&self) -> Rational {
        let [v0, v1, v2] = &self.vertices;
        (&v1.0 - &v0.0) * (&v2.1 - &v0.1) - (&v2.0 - &v0.0) * (&v1.1 - &v0.1)
    }

    pub fn is_degenerate(&self) -> bool {
        self.area2().is_zero()
    }

    /// The point with barycentric coordinates `(l0, l1, l2)`; the weights
    /// must sum to one.
    pub fn barycentric_point(&self, l0: &Rational, l1: &Rational, l2: &Rational) -> (Rational, Rational) {
        debug_assert!((l0 + l1 + l2).is_one());
        let [v0, v1, v2] = &self.vertices;
        (
            l0 * &v0.0 + l1 * &v1.0 + l2 * &v2.0,
            l0 * &v0.1 + l1 * &v1.1 + l2 * &v2.1,
        )
    }

    pub fn centroid(&self) -> (Rational, Rational) {
        let third = rat(1, 3);
        self.barycentric_point(&third, &third, &third)
    }

    /// Splits at the edge midpoints into four children that tile the parent
    /// exactly; the fourth child is the inner (reversed) triangle.
    pub fn midpoint_split(&self) -> [TriangleRegion; 4] {
        let [v0, v1, v2] = &self.vertices;
        let mid = |p: &(Rational, Rational), q: &(Rational, Rational)| {
            let half = rat(1, 2);
            ((&p.0 + &q.0) * &half, (&p.1 + &q.1) * &half)
        };
        let m01 = mid(v0, v1);
        let m12 = mid(v1, v2);
        let m02 = mid(v0, v2);
        [
            TriangleRegion::new(v0.clone(), m01.clone(), m02.clone()),
            TriangleRegion::new(m01.clone(), v1.clone(), m12.clone()),
            TriangleRegion::new(m02.clone(), m12.clone(), v2.clone()),
            TriangleRegion::new(m01, m12, m02),
        ]
    }
}

/// Sparse homogeneous polynomial in the three barycentric coordinates.
#[derive(Clone, Debug, Default)]
struct TriPoly {
    terms: BTreeMap<MultiIndex, Rational>,
}

impl TriPoly {
    fn one() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((0, 0, 0), Rational::one());
        Self { terms }
    }

    fn linear(c0: Rational, c1: Rational, c2: Rational) -> Self {
        let mut terms = BTreeMap::new();
        for (k, c) in [((1, 0, 0), c0), ((0, 1, 0), c1), ((0, 0, 1), c2)] {
            if !c.is_zero() {
                terms.insert(k, c);
            }
        }
        Self { terms }
    }

    fn mul(&self, rhs: &TriPoly) -> TriPoly {
        let mut out: BTreeMap<MultiIndex, Rational> = BTreeMap::new();
        for (&(i0, i1, i2), c1) in &self.terms {
            for (&(j0, j1, j2), c2) in &rhs.terms {
                let key = (i0 + j0, i1 + j1, i2 + j2);
                let prod = c1 * c2;
                use std::collections::btree_map::Entry;
                match out.entry(key) {
                    Entry::Vacant(e) => {
                        e.insert(prod);
                    }
                    Entry::Occupied(mut e) => {
                        *e.get_mut() += prod;
                        if e.get().is_zero() {
                            e.remove();
                        }
                    }
                }
            }
        }
        TriPoly { terms: out }
    }

    fn add_scaled(&mut self, rhs: &TriPoly, scale: &Rational) {
        if scale.is_zero() {
            return;
        }
        for (&k, c) in &rhs.terms {
            use std::collections::btree_map::Entry;
            match self.terms.entry(k) {
                Entry::Vacant(e) => {
                    e.insert(c * scale);
                }
                Entry::Occupied(mut e) => {
                    *e.get_mut() += c * scale;
                    if e.get().is_zero() {
                        e.remove();
                    }
                }
            }
        }
    }
}

fn powers(base: &TriPoly, up_to: usize) -> Vec<TriPoly> {
    let mut v = Vec::with_capacity(up_to + 1);
    v.push(TriPoly::one());
    for k in 1..=up_to {
        let next = v[k - 1].mul(base);
        v.push(next);
    }
    v
}

fn multinomial(n: u16, k: MultiIndex) -> BigInt {
    let mut result = BigInt::one();
    // n! / (k0! k1! k2!) built as a product of binomials
    let mut remaining = n;
    for part in [k.0, k.1, k.2] {
        result *= binomial(remaining, part);
        remaining -= part;
    }
    result
}

fn binomial(n: u16, k: u16) -> BigInt {
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// All degree-`n` multi-indices in the canonical (lexicographic ascending)
/// order used everywhere coefficients are listed.
pub fn multi_indices(degree: u16) -> Vec<MultiIndex> {
    let mut v = Vec::new();
    for k0 in 0..=degree {
        for k1 in 0..=(degree - k0) {
            v.push((k0, k1, degree - k0 - k1));
        }
    }
    v
}

/// Exact Bernstein coefficients of `f` over `region` at the given degree,
/// listed in [`multi_indices`] order. `degree` must be at least the total
/// degree of `f`.
pub fn bernstein_coefficients(
    f: &BiPoly,
    region: &TriangleRegion,
    degree: u16,
) -> Result<Vec<Rational>, CertifyError> {
    let needed = f.total_degree().unwrap_or(0);
    if u32::from(degree) < needed {
        return Err(CertifyError::DegreeTooLow {
            degree: u32::from(degree),
            needed,
        });
    }
    let [v0, v1, v2] = region.vertices();
    let coord_a = TriPoly::linear(v0.0.clone(), v1.0.clone(), v2.0.clone());
    let coord_b = TriPoly::linear(v0.1.clone(), v1.1.clone(), v2.1.clone());
    let unit = TriPoly::linear(Rational::one(), Rational::one(), Rational::one());

    let max_i = f.terms().map(|(&(i, _), _)| i).max().unwrap_or(0) as usize;
    let max_j = f.terms().map(|(&(_, j), _)| j).max().unwrap_or(0) as usize;
    let pow_a = powers(&coord_a, max_i);
    let pow_b = powers(&coord_b, max_j);
    let pow_unit = powers(&unit, degree as usize);

    // Homogenize: sum of c_ij * a(l)^i * b(l)^j * (l0+l1+l2)^(n-i-j).
    let mut hom = TriPoly::default();
    for (&(i, j), c) in f.terms() {
        let filler = degree as usize - i as usize - j as usize;
        let term = pow_a[i as usize].mul(&pow_b[j as usize]).mul(&pow_unit[filler]);
        hom.add_scaled(&term, c);
    }

    let coeffs = multi_indices(degree)
        .into_iter()
        .map(|k| {
            let raw = hom.terms.get(&k).cloned().unwrap_or_else(Rational::zero);
            raw / Rational::from_integer(multinomial(degree, k))
        })
        .collect();
    Ok(coeffs)
}

/// Positions of the three corner coefficients (the ones equal to `f` at the
/// respective vertices) inside the [`multi_indices`] ordering.
pub fn corner_positions(degree: u16) -> [usize; 3] {
    let indices = multi_indices(degree);
    let find = |target: MultiIndex| indices.iter().position(|&k| k == target).unwrap();
    [
        find((degree, 0, 0)),
        find((0, degree, 0)),
        find((0, 0, degree)),
    ]
}
