//! Truncated bivariate power series with double-precision complex coefficients.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use super::AlgebraError;

pub const DEFAULT_SERIES_ORDER: usize = 12;

/// `Σ_{i+j≤N} c_ij t^i x^j`, stored densely by total degree.
///
/// Index of `(i, j)` with `n = i + j` is `n(n+1)/2 + j`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesBivariate {
    order: usize,
    coeffs: Vec<Complex64>,
}

fn idx(i: usize, j: usize) -> usize {
    let n = i + j;
    n * (n + 1) / 2 + j
}

fn len_for(order: usize) -> usize {
    (order + 1) * (order + 2) / 2
}

impl SeriesBivariate {
    pub fn zero(order: usize) -> Self {
        SeriesBivariate {
            order,
            coeffs: vec![Complex64::new(0.0, 0.0); len_for(order)],
        }
    }

    pub fn constant(order: usize, c: Complex64) -> Self {
        let mut s = SeriesBivariate::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        SeriesBivariate::constant(order, Complex64::new(1.0, 0.0))
    }

    /// Terms with `i + j > order` are dropped.
    pub fn from_terms<I>(order: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = ((usize, usize), Complex64)>,
    {
        let mut s = SeriesBivariate::zero(order);
        for ((i, j), c) in terms {
            if i + j <= order {
                s.coeffs[idx(i, j)] += c;
            }
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, i: usize, j: usize) -> Complex64 {
        if i + j > self.order {
            return Complex64::new(0.0, 0.0);
        }
        self.coeffs[idx(i, j)]
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, c: Complex64) {
        assert!(i + j <= self.order, "term beyond truncation order");
        self.coeffs[idx(i, j)] = c;
    }

    pub fn constant_term(&self) -> Complex64 {
        self.coeffs[0]
    }

    pub fn is_unit(&self) -> bool {
        self.coeffs[0].norm() > 0.0
    }

    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), Complex64)> + '_ {
        (0..=self.order).flat_map(move |n| (0..=n).map(move |j| ((n - j, j), self.coeffs[idx(n - j, j)])))
    }

    pub fn scale(&self, c: Complex64) -> SeriesBivariate {
        SeriesBivariate {
            order: self.order,
            coeffs: self.coeffs.iter().map(|&v| v * c).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn max_diff(&self, other: &SeriesBivariate) -> f64 {
        let order = self.order.min(other.order);
        (0..len_for(order))
            .map(|k| (self.coeffs[k] - other.coeffs[k]).norm())
            .fold(0.0, f64::max)
    }

    /// The homogeneous part of total degree `n` multiplied into `acc`'s degree `m` part.
    fn degree_part(&self, n: usize) -> &[Complex64] {
        let start = n * (n + 1) / 2;
        &self.coeffs[start..start + n + 1]
    }

    /// `U^c := exp(c·log U)` truncated at `U`'s order, principal branch on the
    /// constant term.
    ///
    /// Uses the Euler-operator identity `E(W)·U = c·W·E(U)` with
    /// `E = t∂_t + x∂_x`, which on homogeneous parts reads
    /// `n·u₀·W_n = Σ_{k=1..n} (c·k − (n−k))·U_k·W_{n−k}`.
    pub fn unit_power(&self, c: Complex64) -> Result<SeriesBivariate, AlgebraError> {
        self.unit_power_on_branch(c, self.coeffs[0].ln())
    }

    /// [`unit_power`](Self::unit_power) with `log u₀` supplied by the caller,
    /// so that powers of powers stay on one branch.
    pub fn unit_power_on_branch(&self, c: Complex64, log_u0: Complex64) -> Result<SeriesBivariate, AlgebraError> {
        let u0 = self.coeffs[0];
        if u0.norm() == 0.0 {
            return Err(AlgebraError::NotAUnit);
        }
        let order = self.order;
        let mut w = SeriesBivariate::zero(order);
        w.coeffs[0] = (c * log_u0).exp();
        let inv_u0 = 1.0 / u0;
        for n in 1..=order {
            let mut part = vec![Complex64::new(0.0, 0.0); n + 1];
            for k in 1..=n {
                let weight = c * k as f64 - (n - k) as f64;
                if weight == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let uk = self.degree_part(k);
                let wnk = w.degree_part(n - k);
                // product of homogeneous parts: index by y-exponent
                for (a, &ua) in uk.iter().enumerate() {
                    if ua == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for (b, &wb) in wnk.iter().enumerate() {
                        part[a + b] += weight * ua * wb;
                    }
                }
            }
            let scale = inv_u0 / n as f64;
            let start = n * (n + 1) / 2;
            for (j, v) in part.into_iter().enumerate() {
                w.coeffs[start + j] = v * scale;
            }
        }
        Ok(w)
    }
}

impl<'a> Add<&'a SeriesBivariate> for &'a SeriesBivariate {
    type Output = SeriesBivariate;
    fn add(self, rhs: &SeriesBivariate) -> SeriesBivariate {
        let order = self.order.min(rhs.order);
        SeriesBivariate {
            order,
            coeffs: (0..len_for(order)).map(|k| self.coeffs[k] + rhs.coeffs[k]).collect(),
        }
    }
}

impl<'a> Sub<&'a SeriesBivariate> for &'a SeriesBivariate {
    type Output = SeriesBivariate;
    fn sub(self, rhs: &SeriesBivariate) -> SeriesBivariate {
        let order = self.order.min(rhs.order);
        SeriesBivariate {
            order,
            coeffs: (0..len_for(order)).map(|k| self.coeffs[k] - rhs.coeffs[k]).collect(),
        }
    }
}

impl<'a> Mul<&'a SeriesBivariate> for &'a SeriesBivariate {
    type Output = SeriesBivariate;
    fn mul(self, rhs: &SeriesBivariate) -> SeriesBivariate {
        let order = self.order.min(rhs.order);
        let mut out = SeriesBivariate::zero(order);
        for n1 in 0..=order {
            let a = self.degree_part(n1);
            for n2 in 0..=order - n1 {
                let b = rhs.degree_part(n2);
                let start = (n1 + n2) * (n1 + n2 + 1) / 2;
                for (j1, &ca) in a.iter().enumerate() {
                    if ca == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for (j2, &cb) in b.iter().enumerate() {
                        out.coeffs[start + j1 + j2] += ca * cb;
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn constant_unit_any_power() {
        let one = SeriesBivariate::one(6);
        let p = one.unit_power(Complex64::new(0.3, -2.0)).unwrap();
        assert!(p.max_diff(&one) < 1e-15);
    }

    #[test]
    fn integer_power_is_exact_expansion() {
        let u = SeriesBivariate::from_terms(6, [((0, 0), c(1.0)), ((1, 1), c(1.0))]);
        let p = u.unit_power(c(2.0)).unwrap();
        let expected = SeriesBivariate::from_terms(6, [((0, 0), c(1.0)), ((1, 1), c(2.0)), ((2, 2), c(1.0))]);
        assert!(p.max_diff(&expected) < 1e-14);
    }

    #[test]
    fn square_root_binomial() {
        let u = SeriesBivariate::from_terms(8, [((0, 0), c(1.0)), ((1, 0), c(1.0))]);
        let r = u.unit_power(c(0.5)).unwrap();
        assert!((r.coeff(1, 0) - c(0.5)).norm() < 1e-15);
        assert!((r.coeff(2, 0) - c(-0.125)).norm() < 1e-15);
        assert!((r.coeff(3, 0) - c(0.0625)).norm() < 1e-15);
        assert!((&r * &r).max_diff(&u) < 1e-14);
    }

    #[test]
    fn not_a_unit() {
        let u = SeriesBivariate::from_terms(4, [((1, 0), c(1.0))]);
        assert_eq!(u.unit_power(c(2.0)), Err(AlgebraError::NotAUnit));
    }

    #[test]
    fn truncation_drops_high_terms() {
        let a = SeriesBivariate::from_terms(2, [((1, 1), c(1.0))]);
        let sq = &a * &a;
        assert!(sq.max_abs() == 0.0);
    }
}
