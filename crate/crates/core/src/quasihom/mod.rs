//! Quasi-homogeneous weights, the normal form
//! `μ·x^m·y^n·∏(y^p − λ_ℓ x^q)` and the stratum of a reduced curve.

pub mod roots;

use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{BiPoly, ComplexPoly, ExactComplex, UniPoly};
use crate::moduli::SpherePoint;

/// Relative tolerance of the re-expansion check in [`decompose`].
pub const REEXPANSION_TOLERANCE: f64 = 1e-8;
/// Roots closer than this times `max|λ|` count as equal.
pub const DISTINCT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuasiHomError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("not quasi-homogeneous")]
    NotQuasiHomogeneous,
    #[error("single monomial x^{i}*y^{j}: weights are not unique")]
    MonomialDegenerate { i: u32, j: u32 },
    #[error("root finder did not converge")]
    RootFindingDivergence,
    #[error("re-expansion mismatch (relative residual {residual:e})")]
    ReExpansionMismatch { residual: f64 },
    #[error("curve is not reduced: {reason}")]
    NotReduced { reason: String },
    #[error("constant germ defines no curve")]
    ConstantGerm,
}

/// `p·i + q·j = d` on the whole support, `gcd(p, q) = 1`, `p ≤ q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Weights {
    pub p: u32,
    pub q: u32,
    pub d: u32,
    /// x and y were exchanged to get `p ≤ q`.
    pub swapped: bool,
}

/// The primitive positive weights carried by the support of `f`.
pub fn detect_weights(f: &BiPoly) -> Result<Weights, QuasiHomError> {
    let pts: Vec<(u32, u32)> = f.support().collect();
    match pts.len() {
        0 => return Err(QuasiHomError::ZeroPolynomial),
        1 => {
            return Err(QuasiHomError::MonomialDegenerate {
                i: pts[0].0,
                j: pts[0].1,
            })
        }
        _ => {}
    }
    let di = pts[1].0 as i64 - pts[0].0 as i64;
    let dj = pts[1].1 as i64 - pts[0].1 as i64;
    // p·di + q·dj = 0 with p, q > 0
    let (p, q) = if dj < 0 && di > 0 {
        (-dj, di)
    } else if dj > 0 && di < 0 {
        (dj, -di)
    } else {
        return Err(QuasiHomError::NotQuasiHomogeneous);
    };
    let g = p.gcd(&q);
    let (p, q) = (p / g, q / g);
    let d = p * pts[0].0 as i64 + q * pts[0].1 as i64;
    if pts.iter().any(|&(i, j)| p * i as i64 + q * j as i64 != d) {
        return Err(QuasiHomError::NotQuasiHomogeneous);
    }
    let (p, q, d) = (p as u32, q as u32, d as u32);
    Ok(if p > q {
        Weights {
            p: q,
            q: p,
            d,
            swapped: true,
        }
    } else {
        Weights {
            p,
            q,
            d,
            swapped: false,
        }
    })
}

/// `f = x^m·y^n·commode` with `commode` divisible by neither variable.
pub fn strip_monomial(f: &BiPoly) -> (u32, u32, BiPoly) {
    let (m, n) = (f.ord_x(), f.ord_y());
    (m, n, f.div_monomial(m, n))
}

/// Leading coefficient and the roots of `g(z) = Σ_j a_{q(k−j), pj} z^j`,
/// repeated by multiplicity and sorted by (re, im).
pub fn commode_factor(f: &BiPoly, w: &Weights) -> Result<(ExactComplex, Vec<Complex64>), QuasiHomError> {
    let (p, q) = (w.p, w.q);
    let (i0, j0) = f.support().next().ok_or(QuasiHomError::ZeroPolynomial)?;
    let dprime = p * i0 + q * j0;
    if dprime % (p * q) != 0 {
        return Err(QuasiHomError::NotQuasiHomogeneous);
    }
    let k = dprime / (p * q);
    let mut g = vec![ExactComplex::zero(); k as usize + 1];
    for (&(i, j), c) in f.terms() {
        if p * i + q * j != dprime || i % q != 0 || j % p != 0 {
            return Err(QuasiHomError::NotQuasiHomogeneous);
        }
        g[(j / p) as usize] = c.clone();
    }
    let g = UniPoly::new(g);
    let mu = g.leading().cloned().ok_or(QuasiHomError::ZeroPolynomial)?;
    let mut lambdas = Vec::with_capacity(k as usize);
    for (factor, mult) in g.squarefree_decomposition() {
        let roots = if factor.degree() == Some(1) {
            // monic: z + c0
            vec![(-&factor.coeff(0)).to_complex64()]
        } else {
            let coeffs: Vec<Complex64> = factor.coeffs().iter().map(ExactComplex::to_complex64).collect();
            let mut r = roots::find_roots(&coeffs).ok_or(QuasiHomError::RootFindingDivergence)?;
            if factor.coeffs().iter().all(ExactComplex::is_real) {
                for z in &mut r {
                    if z.im.abs() <= 1e-14 * z.norm() {
                        z.im = 0.0;
                    }
                }
            }
            r
        };
        for r in roots {
            for _ in 0..mult {
                lambdas.push(r);
            }
        }
    }
    sort_complex(&mut lambdas);
    Ok((mu, lambdas))
}

fn sort_complex(v: &mut [Complex64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// `μ·x^m·y^n·∏_ℓ (y^p − λ_ℓ x^q)` in the coordinates after the optional swap.
#[derive(Debug, Clone, PartialEq)]
pub struct QHNormalForm {
    pub mu: ExactComplex,
    pub m: u32,
    pub n: u32,
    pub weights: Weights,
    /// Roots with multiplicity; bitwise-equal entries are one repeated root.
    pub lambdas: Vec<Complex64>,
    /// The source was a single monomial; `weights` is then (1, 1) by convention.
    pub degenerate: bool,
}

impl QHNormalForm {
    pub fn k(&self) -> usize {
        self.lambdas.len()
    }

    /// Distinct roots with their multiplicities.
    pub fn root_multiplicities(&self) -> Vec<(Complex64, u32)> {
        let mut out: Vec<(Complex64, u32)> = Vec::new();
        for &l in &self.lambdas {
            match out.iter_mut().find(|(z, _)| *z == l) {
                Some(entry) => entry.1 += 1,
                None => out.push((l, 1)),
            }
        }
        out
    }

    /// The re-expanded polynomial, in normalized coordinates.
    pub fn expand(&self) -> ComplexPoly {
        let (p, q) = (self.weights.p, self.weights.q);
        let mut acc = ComplexPoly::monomial(self.mu.to_complex64(), self.m, self.n);
        for &l in &self.lambdas {
            let factor = ComplexPoly::from_terms([((0, p), Complex64::new(1.0, 0.0)), ((q, 0), -l)]);
            acc = &acc * &factor;
        }
        acc
    }

    /// The source polynomial in its original coordinates, re-expanded.
    pub fn expand_original(&self) -> ComplexPoly {
        let e = self.expand();
        if self.weights.swapped {
            e.swap_xy()
        } else {
            e
        }
    }
}

/// Weights, monomial part and commode roots of `f`, checked by re-expansion.
pub fn decompose(f: &BiPoly) -> Result<QHNormalForm, QuasiHomError> {
    let weights = match detect_weights(f) {
        Ok(w) => w,
        Err(QuasiHomError::MonomialDegenerate { i, j }) => {
            return Ok(QHNormalForm {
                mu: f.coeff(i, j),
                m: i,
                n: j,
                weights: Weights {
                    p: 1,
                    q: 1,
                    d: i + j,
                    swapped: false,
                },
                lambdas: Vec::new(),
                degenerate: true,
            });
        }
        Err(e) => return Err(e),
    };
    let work = if weights.swapped { f.swap_xy() } else { f.clone() };
    let (m, n, commode) = strip_monomial(&work);
    let (mu, lambdas) = commode_factor(&commode, &weights)?;
    let nf = QHNormalForm {
        mu,
        m,
        n,
        weights,
        lambdas,
        degenerate: false,
    };
    let source = work.to_complex_poly();
    let residual = nf.expand().max_diff(&source) / source.max_abs();
    if !(residual <= REEXPANSION_TOLERANCE) {
        return Err(QuasiHomError::ReExpansionMismatch { residual });
    }
    Ok(nf)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum Stratum {
    Type11 { n: usize },
    Type1q { q: u32, n: usize },
    Typepq { p: u32, q: u32, n: usize },
}

impl Stratum {
    pub fn n(&self) -> usize {
        match *self {
            Stratum::Type11 { n } | Stratum::Type1q { n, .. } | Stratum::Typepq { n, .. } => n,
        }
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Stratum::Type11 { n } => write!(f, "(1,1,{n})"),
            Stratum::Type1q { q, n } => write!(f, "(1,{q},{n})"),
            Stratum::Typepq { p, q, n } => write!(f, "({p},{q},{n})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveType {
    pub stratum: Stratum,
    pub flag_m: u8,
    pub flag_k: u8,
    /// Sorted, infinity last.
    pub lambdas: Vec<SpherePoint>,
}

impl CurveType {
    /// Builds a type from its parts, sorting the points.
    pub fn new(stratum: Stratum, flag_m: u8, flag_k: u8, mut lambdas: Vec<SpherePoint>) -> Self {
        lambdas.sort_by(|a, b| a.total_cmp(b));
        CurveType {
            stratum,
            flag_m,
            flag_k,
            lambdas,
        }
    }

    /// `x^{flag_m}·y^{flag_k}·∏(y^p − λx^q)`, with `λ = ∞` read as the factor `x`.
    pub fn polynomial(&self) -> ComplexPoly {
        let (p, q) = match self.stratum {
            Stratum::Type11 { .. } => (1, 1),
            Stratum::Type1q { q, .. } => (1, q),
            Stratum::Typepq { p, q, .. } => (p, q),
        };
        let mut acc = ComplexPoly::monomial(Complex64::new(1.0, 0.0), self.flag_m as u32, self.flag_k as u32);
        for l in &self.lambdas {
            let factor = match l {
                SpherePoint::Infinity => ComplexPoly::x(),
                SpherePoint::Finite(z) => ComplexPoly::from_terms([((0, p), Complex64::new(1.0, 0.0)), ((q, 0), -*z)]),
            };
            acc = &acc * &factor;
        }
        acc
    }
}

fn not_reduced(reason: impl Into<String>) -> QuasiHomError {
    QuasiHomError::NotReduced { reason: reason.into() }
}

/// The stratum and point configuration of a reduced curve.
pub fn classify_curve(nf: &QHNormalForm) -> Result<CurveType, QuasiHomError> {
    if nf.m > 1 {
        return Err(not_reduced(format!("x appears with exponent {}", nf.m)));
    }
    if nf.n > 1 {
        return Err(not_reduced(format!("y appears with exponent {}", nf.n)));
    }
    let scale = nf.lambdas.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for (a, la) in nf.lambdas.iter().enumerate() {
        for lb in &nf.lambdas[a + 1..] {
            if (la - lb).norm() <= DISTINCT_TOLERANCE * scale {
                return Err(not_reduced("repeated root"));
            }
        }
    }
    let mut points: Vec<SpherePoint> = nf.lambdas.iter().map(|&z| SpherePoint::Finite(z)).collect();
    let (p, q) = (nf.weights.p, nf.weights.q);
    if nf.degenerate && nf.m == 0 && nf.n == 0 {
        return Err(QuasiHomError::ConstantGerm);
    }
    if p == 1 && q == 1 {
        if nf.n == 1 {
            points.push(SpherePoint::zero());
        }
        if nf.m == 1 {
            points.push(SpherePoint::Infinity);
        }
        return Ok(CurveType::new(Stratum::Type11 { n: points.len() }, 0, 0, points));
    }
    if p == 1 {
        if nf.n == 1 {
            points.push(SpherePoint::zero());
        }
        return Ok(CurveType::new(
            Stratum::Type1q { q, n: points.len() },
            nf.m as u8,
            0,
            points,
        ));
    }
    Ok(CurveType::new(
        Stratum::Typepq { p, q, n: points.len() },
        nf.m as u8,
        nf.n as u8,
        points,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_poly;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn poly(s: &str) -> BiPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn weights_examples() {
        assert_eq!(
            detect_weights(&poly("y^2 - x^3")).unwrap(),
            Weights {
                p: 2,
                q: 3,
                d: 6,
                swapped: false
            }
        );
        assert_eq!(
            detect_weights(&poly("x^2 + y^2")).unwrap(),
            Weights {
                p: 1,
                q: 1,
                d: 2,
                swapped: false
            }
        );
        assert_eq!(
            detect_weights(&poly("y^2 - x^3 - x^2")),
            Err(QuasiHomError::NotQuasiHomogeneous)
        );
        assert_eq!(
            detect_weights(&poly("x^2*y^3")),
            Err(QuasiHomError::MonomialDegenerate { i: 2, j: 3 })
        );
    }

    #[test]
    fn weights_swap() {
        let w = detect_weights(&poly("x^2 - y^3")).unwrap();
        assert_eq!(
            w,
            Weights {
                p: 2,
                q: 3,
                d: 6,
                swapped: true
            }
        );
    }

    #[test]
    fn axis_weights_rejected() {
        // x^2 + x: both points on the x-axis
        assert_eq!(
            detect_weights(&poly("x^2 + x")),
            Err(QuasiHomError::NotQuasiHomogeneous)
        );
    }

    #[test]
    fn strip_examples() {
        assert_eq!(strip_monomial(&poly("x*y*(y^2-x^3)")), (1, 1, poly("y^2-x^3")));
        assert_eq!(strip_monomial(&poly("y^2-x^3")), (0, 0, poly("y^2-x^3")));
        assert_eq!(strip_monomial(&poly("x^3")), (3, 0, BiPoly::one()));
    }

    #[test]
    fn commode_examples() {
        let w = Weights {
            p: 2,
            q: 3,
            d: 12,
            swapped: false,
        };
        let (mu, l) = commode_factor(&poly("y^4 - x^6"), &w).unwrap();
        assert!(mu.is_one());
        assert_eq!(l, vec![c(-1.0), c(1.0)]);
        let (mu, l) = commode_factor(&poly("2y^2 - 2x^3"), &Weights { d: 6, ..w }).unwrap();
        assert_eq!(mu, ExactComplex::from_int(2));
        assert_eq!(l, vec![c(1.0)]);
    }

    #[test]
    fn decompose_examples() {
        let nf = decompose(&poly("x*(y^2-x^3)")).unwrap();
        assert_eq!((nf.m, nf.n, nf.weights.p, nf.weights.q), (1, 0, 2, 3));
        assert_eq!(nf.lambdas, vec![c(1.0)]);
        let nf = decompose(&poly("x^2*y^3")).unwrap();
        assert!(nf.degenerate);
        assert_eq!((nf.m, nf.n, nf.k()), (2, 3, 0));
    }

    #[test]
    fn decompose_nonlinear_factor() {
        // roots of z^3 - 2 are irrational
        let nf = decompose(&poly("y^6 - 2x^9")).unwrap();
        assert_eq!(nf.k(), 3);
        for l in &nf.lambdas {
            assert!((l.powu(3) - c(2.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn classify_examples() {
        let t = classify_curve(&decompose(&poly("x*(y-x)*(y+x)")).unwrap()).unwrap();
        assert_eq!(t.stratum, Stratum::Type11 { n: 3 });
        assert_eq!(
            t.lambdas,
            vec![SpherePoint::real(-1.0), SpherePoint::real(1.0), SpherePoint::Infinity]
        );
        let t = classify_curve(&decompose(&poly("x*y*(y^2-x^3)")).unwrap()).unwrap();
        assert_eq!(t.stratum, Stratum::Typepq { p: 2, q: 3, n: 1 });
        assert_eq!((t.flag_m, t.flag_k), (1, 1));
        let e = classify_curve(&decompose(&poly("(y^2-x^3)^2")).unwrap());
        assert!(matches!(e, Err(QuasiHomError::NotReduced { .. })));
    }

    #[test]
    fn classify_degenerate_and_smooth() {
        let t = classify_curve(&decompose(&poly("x*y")).unwrap()).unwrap();
        assert_eq!(t.stratum, Stratum::Type11 { n: 2 });
        assert_eq!(t.lambdas, vec![SpherePoint::zero(), SpherePoint::Infinity]);
        let t = classify_curve(&decompose(&poly("y - x^3")).unwrap()).unwrap();
        assert_eq!(t.stratum, Stratum::Type1q { q: 3, n: 1 });
        assert_eq!(
            classify_curve(&decompose(&poly("5")).unwrap()),
            Err(QuasiHomError::ConstantGerm)
        );
    }

    #[test]
    fn curve_polynomial_matches_normal_form() {
        let f = poly("x*y*(y^2-x^3)*(y^2+2x^3)");
        let nf = decompose(&f).unwrap();
        let t = classify_curve(&nf).unwrap();
        assert!(t.polynomial().max_diff(&f.to_complex_poly()) < 1e-12);
    }
}
