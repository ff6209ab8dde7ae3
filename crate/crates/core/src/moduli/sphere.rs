//! Points of the Riemann sphere with an explicit point at infinity.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "RawPoint", into = "RawPoint")]
pub enum SpherePoint {
    Finite(Complex64),
    Infinity,
}

/// Serialized shape: `{"re", "im", "infinite"}`; `re`/`im` are 0 at infinity.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct RawPoint {
    pub re: f64,
    pub im: f64,
    pub infinite: bool,
}

impl From<RawPoint> for SpherePoint {
    fn from(r: RawPoint) -> Self {
        if r.infinite {
            SpherePoint::Infinity
        } else {
            SpherePoint::Finite(Complex64::new(r.re, r.im))
        }
    }
}

impl From<SpherePoint> for RawPoint {
    fn from(p: SpherePoint) -> Self {
        match p {
            SpherePoint::Finite(z) => RawPoint {
                re: z.re,
                im: z.im,
                infinite: false,
            },
            SpherePoint::Infinity => RawPoint {
                re: 0.0,
                im: 0.0,
                infinite: true,
            },
        }
    }
}

impl From<Complex64> for SpherePoint {
    fn from(z: Complex64) -> Self {
        SpherePoint::Finite(z)
    }
}

impl SpherePoint {
    pub fn zero() -> Self {
        SpherePoint::Finite(Complex64::new(0.0, 0.0))
    }

    pub fn real(v: f64) -> Self {
        SpherePoint::Finite(Complex64::new(v, 0.0))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, SpherePoint::Infinity)
    }

    pub fn finite(&self) -> Option<Complex64> {
        match *self {
            SpherePoint::Finite(z) => Some(z),
            SpherePoint::Infinity => None,
        }
    }

    /// Chordal distance; 2 between antipodes.
    pub fn chordal(&self, other: &SpherePoint) -> f64 {
        match (*self, *other) {
            (SpherePoint::Infinity, SpherePoint::Infinity) => 0.0,
            (SpherePoint::Finite(z), SpherePoint::Infinity) | (SpherePoint::Infinity, SpherePoint::Finite(z)) => {
                2.0 / (1.0 + z.norm_sqr()).sqrt()
            }
            (SpherePoint::Finite(z), SpherePoint::Finite(w)) => {
                2.0 * (z - w).norm() / ((1.0 + z.norm_sqr()) * (1.0 + w.norm_sqr())).sqrt()
            }
        }
    }

    /// Finite points by (re, im), infinity last.
    pub fn total_cmp(&self, other: &SpherePoint) -> Ordering {
        match (self, other) {
            (SpherePoint::Infinity, SpherePoint::Infinity) => Ordering::Equal,
            (SpherePoint::Infinity, _) => Ordering::Greater,
            (_, SpherePoint::Infinity) => Ordering::Less,
            (SpherePoint::Finite(a), SpherePoint::Finite(b)) => a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)),
        }
    }
}

/// Fixed-precision text for a complex number, free of `-0`.
pub fn fmt_complex(z: Complex64) -> String {
    let clean = |v: f64| {
        let r = (v * 1e12).round() / 1e12;
        if r == 0.0 {
            0.0
        } else {
            r
        }
    };
    let (re, im) = (clean(z.re), clean(z.im));
    if im == 0.0 {
        format!("{re}")
    } else if re == 0.0 {
        format!("{im}i")
    } else if im < 0.0 {
        format!("{re}-{}i", -im)
    } else {
        format!("{re}+{im}i")
    }
}

impl fmt::Display for SpherePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SpherePoint::Infinity => write!(f, "inf"),
            SpherePoint::Finite(z) => write!(f, "{}", fmt_complex(z)),
        }
    }
}
