#![allow(dead_code)]

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use qhmod_core::algebra::{BiPoly, ExactComplex};
use qhmod_core::moduli::{GroupElement, SpherePoint};
use qhmod_core::quasihom::{CurveType, Stratum};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rational(rng: &mut ChaCha8Rng, max: i64) -> BigRational {
    let num = rng.gen_range(-max..=max);
    let den = rng.gen_range(1..=max);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn gaussian(rng: &mut ChaCha8Rng, max: i64) -> ExactComplex {
    ExactComplex::new(rational(rng, max), rational(rng, max))
}

pub fn nonzero_gaussian(rng: &mut ChaCha8Rng, max: i64) -> ExactComplex {
    loop {
        let z = gaussian(rng, max);
        if !z.is_zero() {
            return z;
        }
    }
}

pub struct QhSample {
    pub f: BiPoly,
    pub mu: ExactComplex,
    pub m: u32,
    pub n: u32,
    pub p: u32,
    pub q: u32,
    pub lambdas: Vec<ExactComplex>,
}

/// `μ·x^m·y^n·∏(y^p − λx^q)` with coprime `p < q ≤ 9`, up to five distinct λ.
pub fn random_qh(rng: &mut ChaCha8Rng) -> QhSample {
    let (p, q) = loop {
        let q = rng.gen_range(2..=9u32);
        let p = rng.gen_range(1..q);
        if p.gcd(&q) == 1 {
            break (p, q);
        }
    };
    let k = rng.gen_range(1..=5usize);
    let mut lambdas: Vec<ExactComplex> = Vec::new();
    while lambdas.len() < k {
        let l = nonzero_gaussian(rng, 20);
        if !lambdas.contains(&l) {
            lambdas.push(l);
        }
    }
    let mu = nonzero_gaussian(rng, 20);
    let (m, n) = (rng.gen_range(0..=1), rng.gen_range(0..=1));
    let mut f = BiPoly::monomial(mu.clone(), m, n);
    for l in &lambdas {
        let mut factor = BiPoly::monomial(ExactComplex::one(), 0, p);
        factor.add_term((q, 0), -l);
        f = &f * &factor;
    }
    QhSample {
        f,
        mu,
        m,
        n,
        p,
        q,
        lambdas,
    }
}

pub fn complex(rng: &mut ChaCha8Rng, r: f64) -> Complex64 {
    Complex64::new(rng.gen_range(-r..r), rng.gen_range(-r..r))
}

fn separated(points: &[SpherePoint], cand: &SpherePoint, gap: f64) -> bool {
    points.iter().all(|p| p.chordal(cand) > gap)
}

/// `n` points pairwise at chordal distance above 0.05.
pub fn random_points(rng: &mut ChaCha8Rng, n: usize, allow_inf: bool, nonzero: bool) -> Vec<SpherePoint> {
    let mut pts = Vec::new();
    if allow_inf && rng.gen_bool(0.5) && n > 0 {
        pts.push(SpherePoint::Infinity);
    }
    while pts.len() < n {
        let z = complex(rng, 3.0);
        if nonzero && z.norm() < 0.2 {
            continue;
        }
        let cand = SpherePoint::Finite(z);
        if separated(&pts, &cand, 0.05) {
            pts.push(cand);
        }
    }
    pts
}

#[derive(Clone, Copy, Debug)]
pub enum Kind {
    T11,
    T1q,
    Tpq,
}

pub fn random_curve(rng: &mut ChaCha8Rng, kind: Kind, n: usize) -> CurveType {
    match kind {
        Kind::T11 => CurveType::new(Stratum::Type11 { n }, 0, 0, random_points(rng, n, true, false)),
        Kind::T1q => {
            let q = rng.gen_range(2..=5);
            CurveType::new(
                Stratum::Type1q { q, n },
                rng.gen_range(0..=1),
                0,
                random_points(rng, n, false, false),
            )
        }
        Kind::Tpq => {
            let (p, q) = loop {
                let q = rng.gen_range(3..=7u32);
                let p = rng.gen_range(2..q);
                if p.gcd(&q) == 1 {
                    break (p, q);
                }
            };
            CurveType::new(
                Stratum::Typepq { p, q, n },
                rng.gen_range(0..=1),
                rng.gen_range(0..=1),
                random_points(rng, n, false, true),
            )
        }
    }
}

pub fn random_element(rng: &mut ChaCha8Rng, kind: Kind) -> GroupElement {
    let modulus = |rng: &mut ChaCha8Rng| {
        Complex64::from_polar(rng.gen_range(0.3..3.0), rng.gen_range(0.0..std::f64::consts::TAU))
    };
    match kind {
        Kind::T11 => loop {
            let (a, b, c, d) = (
                complex(rng, 2.0),
                complex(rng, 2.0),
                complex(rng, 2.0),
                complex(rng, 2.0),
            );
            if (a * d - b * c).norm() > 0.3 {
                break GroupElement::mobius(a, b, c, d).unwrap();
            }
        },
        Kind::T1q => GroupElement::affine(modulus(rng), complex(rng, 2.0)),
        Kind::Tpq => GroupElement::scaling(modulus(rng)),
    }
}

pub fn act(g: &GroupElement, a: &CurveType) -> CurveType {
    CurveType::new(
        a.stratum,
        a.flag_m,
        a.flag_k,
        a.lambdas.iter().map(|&z| g.apply(z)).collect(),
    )
}

/// Moves one finite point by an offset of modulus in [0.1, 1], keeping the
/// configuration separated.
pub fn perturb(rng: &mut ChaCha8Rng, a: &CurveType) -> CurveType {
    loop {
        let idx = rng.gen_range(0..a.lambdas.len());
        let Some(z) = a.lambdas[idx].finite() else { continue };
        let shift = Complex64::from_polar(rng.gen_range(0.1..1.0), rng.gen_range(0.0..std::f64::consts::TAU));
        let cand = SpherePoint::Finite(z + shift);
        let others: Vec<SpherePoint> = a
            .lambdas
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != idx)
            .map(|(_, &p)| p)
            .collect();
        if !separated(&others, &cand, 0.05) || cand.finite().is_some_and(|w| w.norm() < 0.05) {
            continue;
        }
        let mut pts = others;
        pts.push(cand);
        return CurveType::new(a.stratum, a.flag_m, a.flag_k, pts);
    }
}

pub fn kinds() -> [(Kind, usize, usize); 3] {
    // (kind, smallest n with moduli, largest n)
    [(Kind::T11, 4, 7), (Kind::T1q, 3, 6), (Kind::Tpq, 2, 5)]
}
