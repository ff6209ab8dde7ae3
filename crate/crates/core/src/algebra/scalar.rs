//! Exact Gaussian-rational scalars.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A complex number `re + im·i` with arbitrary-precision rational parts.
///
/// `BigRational` keeps both parts in lowest terms with a positive denominator,
/// so structural equality is exact equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ExactComplex {
    pub re: BigRational,
    pub im: BigRational,
}

impl ExactComplex {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        ExactComplex { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        ExactComplex::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        ExactComplex::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    /// `(a/b) + (c/d)·i`
    pub fn gaussian(a: i64, b: i64, c: i64, d: i64) -> Self {
        ExactComplex::new(
            BigRational::new(BigInt::from(a), BigInt::from(b)),
            BigRational::new(BigInt::from(c), BigInt::from(d)),
        )
    }

    pub fn from_rational(re: BigRational) -> Self {
        ExactComplex::new(re, BigRational::zero())
    }

    pub fn i() -> Self {
        ExactComplex::new(BigRational::zero(), BigRational::one())
    }

    pub fn zero() -> Self {
        ExactComplex::default()
    }

    pub fn one() -> Self {
        ExactComplex::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        ExactComplex::new(self.re.clone(), -self.im.clone())
    }

    /// `re² + im²`
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(ExactComplex::new(&self.re / &n, -&self.im / &n))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = ExactComplex::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// Exactly representable conversion of a finite float pair.
    pub fn from_complex64(z: Complex64) -> Option<Self> {
        Some(ExactComplex::new(
            BigRational::from_float(z.re)?,
            BigRational::from_float(z.im)?,
        ))
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for ExactComplex {
    /// `3/2`, `-i`, `2/3*i`, `(1+2*i)`: the same spelling the polynomial parser reads.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.re)),
            (true, false) => write!(f, "{}", fmt_imag(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { "-" } else { "+" };
                write!(f, "({}{}{})", fmt_rational(&self.re), sign, fmt_imag(&self.im.abs()))
            }
        }
    }
}

fn fmt_imag(im: &BigRational) -> String {
    if im.is_one() {
        "i".to_string()
    } else if (-im).is_one() {
        "-i".to_string()
    } else {
        format!("{}*i", fmt_rational(im))
    }
}

impl<'a> Add<&'a ExactComplex> for &'a ExactComplex {
    type Output = ExactComplex;
    fn add(self, rhs: &ExactComplex) -> ExactComplex {
        ExactComplex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl<'a> Sub<&'a ExactComplex> for &'a ExactComplex {
    type Output = ExactComplex;
    fn sub(self, rhs: &ExactComplex) -> ExactComplex {
        ExactComplex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl<'a> Mul<&'a ExactComplex> for &'a ExactComplex {
    type Output = ExactComplex;
    fn mul(self, rhs: &ExactComplex) -> ExactComplex {
        if self.is_real() && rhs.is_real() {
            return ExactComplex::from_rational(&self.re * &rhs.re);
        }
        ExactComplex::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl<'a> Div<&'a ExactComplex> for &'a ExactComplex {
    type Output = ExactComplex;
    /// Panics on division by zero; use [`ExactComplex::inv`] to test first.
    fn div(self, rhs: &ExactComplex) -> ExactComplex {
        let inv = rhs.inv().expect("division by zero ExactComplex");
        self * &inv
    }
}

impl Neg for &ExactComplex {
    type Output = ExactComplex;
    fn neg(self) -> ExactComplex {
        ExactComplex::new(-&self.re, -&self.im)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<ExactComplex> for ExactComplex {
            type Output = ExactComplex;
            fn $m(self, rhs: ExactComplex) -> ExactComplex {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a ExactComplex> for ExactComplex {
            type Output = ExactComplex;
            fn $m(self, rhs: &ExactComplex) -> ExactComplex {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for ExactComplex {
    type Output = ExactComplex;
    fn neg(self) -> ExactComplex {
        -&self
    }
}

impl From<i64> for ExactComplex {
    fn from(n: i64) -> Self {
        ExactComplex::from_int(n)
    }
}

impl From<BigRational> for ExactComplex {
    fn from(r: BigRational) -> Self {
        ExactComplex::from_rational(r)
    }
}
