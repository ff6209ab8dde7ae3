//! Floating-point bivariate polynomials, used where coefficients come from
//! numerically located roots (re-expansion checks, witness maps).

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use super::bipoly::Exponent;

#[derive(Clone, Debug, PartialEq, Default)]
pub struct ComplexPoly {
    terms: BTreeMap<Exponent, Complex64>,
}

impl ComplexPoly {
    pub fn zero() -> Self {
        ComplexPoly::default()
    }

    pub fn constant(c: Complex64) -> Self {
        ComplexPoly::monomial(c, 0, 0)
    }

    pub fn one() -> Self {
        ComplexPoly::constant(Complex64::new(1.0, 0.0))
    }

    pub fn x() -> Self {
        ComplexPoly::monomial(Complex64::new(1.0, 0.0), 1, 0)
    }

    pub fn y() -> Self {
        ComplexPoly::monomial(Complex64::new(1.0, 0.0), 0, 1)
    }

    pub fn monomial(c: Complex64, i: u32, j: u32) -> Self {
        let mut p = ComplexPoly::zero();
        p.add_term((i, j), c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponent, Complex64)>>(terms: I) -> Self {
        let mut p = ComplexPoly::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: Exponent, c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        *self.terms.entry(e).or_default() += c;
    }

    pub fn coeff(&self, i: u32, j: u32) -> Complex64 {
        self.terms.get(&(i, j)).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Complex64)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: Complex64) -> ComplexPoly {
        ComplexPoly {
            terms: self.terms.iter().map(|(&e, &v)| (e, v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> ComplexPoly {
        (0..e).fold(ComplexPoly::one(), |acc, _| &acc * self)
    }

    pub fn swap_xy(&self) -> ComplexPoly {
        ComplexPoly {
            terms: self.terms.iter().map(|(&(i, j), &c)| ((j, i), c)).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// The monomial with the largest coefficient modulus (ties: smallest exponent).
    pub fn dominant_term(&self) -> Option<(Exponent, Complex64)> {
        let mut best: Option<(Exponent, Complex64)> = None;
        for (&e, &c) in &self.terms {
            if best.is_none_or(|(_, b)| c.norm() > b.norm()) {
                best = Some((e, c));
            }
        }
        best
    }

    /// Substitutes `x ↦ px(x,y)`, `y ↦ py(x,y)`.
    pub fn compose(&self, px: &ComplexPoly, py: &ComplexPoly) -> ComplexPoly {
        let max_i = self.terms.keys().map(|&(i, _)| i).max().unwrap_or(0);
        let max_j = self.terms.keys().map(|&(_, j)| j).max().unwrap_or(0);
        let mut xpows = vec![ComplexPoly::one()];
        for k in 1..=max_i as usize {
            let next = &xpows[k - 1] * px;
            xpows.push(next);
        }
        let mut ypows = vec![ComplexPoly::one()];
        for k in 1..=max_j as usize {
            let next = &ypows[k - 1] * py;
            ypows.push(next);
        }
        let mut out = ComplexPoly::zero();
        for (&(i, j), &c) in &self.terms {
            let prod = &xpows[i as usize] * &ypows[j as usize];
            for (&e, &v) in &prod.terms {
                out.add_term(e, v * c);
            }
        }
        out
    }

    /// Largest coefficientwise difference.
    pub fn max_diff(&self, other: &ComplexPoly) -> f64 {
        let mut keys: Vec<&Exponent> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .map(|&(i, j)| (self.coeff(i, j) - other.coeff(i, j)).norm())
            .fold(0.0, f64::max)
    }
}

impl<'a> Add<&'a ComplexPoly> for &'a ComplexPoly {
    type Output = ComplexPoly;
    fn add(self, rhs: &ComplexPoly) -> ComplexPoly {
        let mut out = self.clone();
        for (&e, &c) in &rhs.terms {
            out.add_term(e, c);
        }
        out
    }
}

impl<'a> Sub<&'a ComplexPoly> for &'a ComplexPoly {
    type Output = ComplexPoly;
    fn sub(self, rhs: &ComplexPoly) -> ComplexPoly {
        let mut out = self.clone();
        for (&e, &c) in &rhs.terms {
            out.add_term(e, -c);
        }
        out
    }
}

impl<'a> Mul<&'a ComplexPoly> for &'a ComplexPoly {
    type Output = ComplexPoly;
    fn mul(self, rhs: &ComplexPoly) -> ComplexPoly {
        let mut out = ComplexPoly::zero();
        for (&(i1, j1), &c1) in &self.terms {
            for (&(i2, j2), &c2) in &rhs.terms {
                out.add_term((i1 + i2, j1 + j2), c1 * c2);
            }
        }
        out
    }
}
