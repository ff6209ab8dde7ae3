//! Sparse bivariate polynomials over the Gaussian rationals.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use super::scalar::ExactComplex;
use super::AlgebraError;

/// Exponent pair `(i, j)` of the monomial `x^i y^j`.
pub type Exponent = (u32, u32);

/// `Σ a_ij x^i y^j` with only nonzero coefficients stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BiPoly {
    terms: BTreeMap<Exponent, ExactComplex>,
}

/// The two affine charts of the blowup of the origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Chart {
    /// `(x, t) ↦ (x, t·x)`; the exceptional line is `x = 0`.
    T,
    /// `(u, y) ↦ (u·y, y)`; the exceptional line is `y = 0`.
    U,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn constant(c: ExactComplex) -> Self {
        BiPoly::monomial(c, 0, 0)
    }

    pub fn one() -> Self {
        BiPoly::constant(ExactComplex::one())
    }

    pub fn x() -> Self {
        BiPoly::monomial(ExactComplex::one(), 1, 0)
    }

    pub fn y() -> Self {
        BiPoly::monomial(ExactComplex::one(), 0, 1)
    }

    pub fn monomial(c: ExactComplex, i: u32, j: u32) -> Self {
        let mut p = BiPoly::zero();
        p.add_term((i, j), c);
        p
    }

    /// Builds from `(i, j, coefficient)` triples, summing duplicates.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, ExactComplex)>,
    {
        let mut p = BiPoly::zero();
        for (i, j, c) in terms {
            p.add_term((i, j), c);
        }
        p
    }

    /// Shorthand for integer coefficients.
    pub fn from_int_terms(terms: &[(u32, u32, i64)]) -> Self {
        BiPoly::from_terms(terms.iter().map(|&(i, j, c)| (i, j, ExactComplex::from_int(c))))
    }

    pub fn add_term(&mut self, e: Exponent, c: ExactComplex) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> ExactComplex {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &ExactComplex)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = Exponent> + '_ {
        self.terms.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest total degree, `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    /// Smallest total degree (multiplicity at the origin), `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).min()
    }

    pub fn degree_x(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, _)| i).max()
    }

    pub fn degree_y(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, j)| j).max()
    }

    /// Largest `m` with `x^m | f`; zero for the zero polynomial.
    pub fn ord_x(&self) -> u32 {
        self.terms.keys().map(|&(i, _)| i).min().unwrap_or(0)
    }

    /// Largest `n` with `y^n | f`; zero for the zero polynomial.
    pub fn ord_y(&self) -> u32 {
        self.terms.keys().map(|&(_, j)| j).min().unwrap_or(0)
    }

    /// Divides by `x^a y^b`. Panics if the monomial does not divide.
    pub fn div_monomial(&self, a: u32, b: u32) -> BiPoly {
        BiPoly {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| {
                    assert!(i >= a && j >= b, "monomial x^{a} y^{b} does not divide");
                    ((i - a, j - b), c.clone())
                })
                .collect(),
        }
    }

    pub fn mul_monomial(&self, a: u32, b: u32) -> BiPoly {
        BiPoly {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| ((i + a, j + b), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &ExactComplex) -> BiPoly {
        if c.is_zero() {
            return BiPoly::zero();
        }
        BiPoly {
            terms: self.terms.iter().map(|(&e, v)| (e, v * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> BiPoly {
        let mut base = self.clone();
        let mut acc = BiPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Exchanges the roles of `x` and `y`.
    pub fn swap_xy(&self) -> BiPoly {
        BiPoly {
            terms: self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())).collect(),
        }
    }

    /// Exact value at `(x, y)`.
    pub fn eval(&self, x: &ExactComplex, y: &ExactComplex) -> ExactComplex {
        let mut acc = ExactComplex::zero();
        for (&(i, j), c) in &self.terms {
            acc = &acc + &(&(c * &x.pow(i)) * &y.pow(j));
        }
        acc
    }

    /// Pulls `f` back along one blowup chart and factors out the exceptional
    /// equation: `π*f = E^mult · strict` with `E ∤ strict`.
    ///
    /// The result keeps the chart's variable order: `(x, t)` for the T-chart
    /// and `(u, y)` for the U-chart, stored in the `(x, y)` slots.
    pub fn pullback_blowup(&self, chart: Chart) -> Result<(u32, BiPoly), AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroPolynomial);
        }
        let pulled = BiPoly {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| {
                    let e = match chart {
                        // x^i (t x)^j
                        Chart::T => (i + j, j),
                        // (u y)^i y^j
                        Chart::U => (i, i + j),
                    };
                    (e, c.clone())
                })
                .collect(),
        };
        Ok(match chart {
            Chart::T => {
                let m = pulled.ord_x();
                (m, pulled.div_monomial(m, 0))
            }
            Chart::U => {
                let m = pulled.ord_y();
                (m, pulled.div_monomial(0, m))
            }
        })
    }

    /// Coefficients converted to floating point.
    pub fn to_complex_poly(&self) -> super::ComplexPoly {
        super::ComplexPoly::from_terms(self.terms.iter().map(|(&e, c)| (e, c.to_complex64())))
    }
}

impl<'a> Add<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.terms {
            out.add_term(e, -c);
        }
        out
    }
}

impl<'a> Mul<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut out = BiPoly::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                out.add_term((i1 + i2, j1 + j2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
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
