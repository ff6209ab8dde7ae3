//! Equivalence of classified curves: orbit search under the stratum group,
//! canonical fingerprints and verified witness maps.

mod sphere;

pub use sphere::{fmt_complex, RawPoint, SpherePoint};

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::ComplexPoly;
use crate::quasihom::{CurveType, QHNormalForm, Stratum};

pub const DEFAULT_TOLERANCE: f64 = 1e-8;
/// Largest relative residual accepted for a witness built by the search.
pub const WITNESS_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModuliError {
    #[error("triple points are not pairwise distinct")]
    DegenerateTriple,
    #[error("match error {error:e} is within an order of magnitude of the tolerance {tolerance:e}")]
    ToleranceAmbiguity { error: f64, tolerance: f64 },
}

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// An element of PSL(2,C), Aff(C) or GL(1,C) acting on λ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum GroupElement {
    /// `z ↦ (az+b)/(cz+d)` with `ad − bc = 1`.
    Mobius {
        a: [f64; 2],
        b: [f64; 2],
        c: [f64; 2],
        d: [f64; 2],
    },
    /// `z ↦ az + b`.
    Affine { a: [f64; 2], b: [f64; 2] },
    /// `z ↦ az`.
    Scaling { a: [f64; 2] },
}

fn pack(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn unpack(v: [f64; 2]) -> Complex64 {
    cx(v[0], v[1])
}

impl GroupElement {
    /// Normalizes to determinant one; `None` if singular.
    pub fn mobius(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Option<Self> {
        let det = a * d - b * c;
        if det.norm() == 0.0 || !det.is_finite() {
            return None;
        }
        let s = det.sqrt();
        Some(GroupElement::Mobius {
            a: pack(a / s),
            b: pack(b / s),
            c: pack(c / s),
            d: pack(d / s),
        })
    }

    pub fn affine(a: Complex64, b: Complex64) -> Self {
        GroupElement::Affine { a: pack(a), b: pack(b) }
    }

    pub fn scaling(a: Complex64) -> Self {
        GroupElement::Scaling { a: pack(a) }
    }

    /// Coefficients `(a, b, c, d)` of the element viewed as a Möbius map.
    pub fn matrix(&self) -> [Complex64; 4] {
        let one = cx(1.0, 0.0);
        let zero = cx(0.0, 0.0);
        match *self {
            GroupElement::Mobius { a, b, c, d } => [unpack(a), unpack(b), unpack(c), unpack(d)],
            GroupElement::Affine { a, b } => [unpack(a), unpack(b), zero, one],
            GroupElement::Scaling { a } => [unpack(a), zero, zero, one],
        }
    }

    pub fn apply(&self, z: SpherePoint) -> SpherePoint {
        let [a, b, c, d] = self.matrix();
        match z {
            SpherePoint::Infinity => {
                if c.norm() == 0.0 {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::Finite(a / c)
                }
            }
            SpherePoint::Finite(z) => {
                let den = c * z + d;
                if den.norm() == 0.0 {
                    SpherePoint::Infinity
                } else {
                    SpherePoint::Finite((a * z + b) / den)
                }
            }
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        match (*self, *other) {
            (GroupElement::Scaling { a: a1 }, GroupElement::Scaling { a: a2 }) => {
                GroupElement::scaling(unpack(a1) * unpack(a2))
            }
            (GroupElement::Mobius { .. }, _) | (_, GroupElement::Mobius { .. }) => {
                let [a1, b1, c1, d1] = self.matrix();
                let [a2, b2, c2, d2] = other.matrix();
                GroupElement::mobius(
                    a1 * a2 + b1 * c2,
                    a1 * b2 + b1 * d2,
                    c1 * a2 + d1 * c2,
                    c1 * b2 + d1 * d2,
                )
                .expect("product of invertible maps")
            }
            _ => {
                let [a1, b1, ..] = self.matrix();
                let [a2, b2, ..] = other.matrix();
                GroupElement::affine(a1 * a2, a1 * b2 + b1)
            }
        }
    }

    pub fn inverse(&self) -> GroupElement {
        match *self {
            GroupElement::Scaling { a } => GroupElement::scaling(1.0 / unpack(a)),
            GroupElement::Affine { a, b } => {
                let a = unpack(a);
                GroupElement::affine(1.0 / a, -unpack(b) / a)
            }
            GroupElement::Mobius { a, b, c, d } => GroupElement::Mobius {
                a: d,
                b: pack(-unpack(b)),
                c: pack(-unpack(c)),
                d: a,
            },
        }
    }
}

fn distinct3(z: &[SpherePoint; 3]) -> bool {
    const EPS: f64 = 1e-12;
    z[0].chordal(&z[1]) > EPS && z[0].chordal(&z[2]) > EPS && z[1].chordal(&z[2]) > EPS
}

/// Matrix of the map sending `z1, z2, z3` to `0, 1, ∞`.
fn to_standard(z: &[SpherePoint; 3]) -> [Complex64; 4] {
    use SpherePoint::{Finite, Infinity};
    let one = cx(1.0, 0.0);
    let zero = cx(0.0, 0.0);
    match (z[0], z[1], z[2]) {
        (Infinity, Finite(z2), Finite(z3)) => [zero, z2 - z3, one, -z3],
        (Finite(z1), Infinity, Finite(z3)) => [one, -z1, one, -z3],
        (Finite(z1), Finite(z2), Infinity) => [one, -z1, zero, z2 - z1],
        (Finite(z1), Finite(z2), Finite(z3)) => [z2 - z3, -z1 * (z2 - z3), z2 - z1, -z3 * (z2 - z1)],
        _ => unreachable!("distinct triple has at most one point at infinity"),
    }
}

/// The Möbius map with `z_i ↦ w_i`.
pub fn mobius_from_triples(z: [SpherePoint; 3], w: [SpherePoint; 3]) -> Result<GroupElement, ModuliError> {
    if !distinct3(&z) || !distinct3(&w) {
        return Err(ModuliError::DegenerateTriple);
    }
    let [a1, b1, c1, d1] = to_standard(&z);
    let [a2, b2, c2, d2] = to_standard(&w);
    // inverse of the second (adjugate), then compose
    let (ia, ib, ic, id) = (d2, -b2, -c2, a2);
    GroupElement::mobius(
        ia * a1 + ib * c1,
        ia * b1 + ib * d1,
        ic * a1 + id * c1,
        ic * b1 + id * d1,
    )
    .ok_or(ModuliError::DegenerateTriple)
}

/// A polynomial map `T(x, y) = (px, py)` of the plane.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneMap {
    pub px: ComplexPoly,
    pub py: ComplexPoly,
}

impl PlaneMap {
    pub fn identity() -> Self {
        PlaneMap {
            px: ComplexPoly::x(),
            py: ComplexPoly::y(),
        }
    }

    pub fn swap() -> Self {
        PlaneMap {
            px: ComplexPoly::y(),
            py: ComplexPoly::x(),
        }
    }

    /// `T*f = f∘T`.
    pub fn pull(&self, f: &ComplexPoly) -> ComplexPoly {
        f.compose(&self.px, &self.py)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &PlaneMap) -> PlaneMap {
        PlaneMap {
            px: inner.pull(&self.px),
            py: inner.pull(&self.py),
        }
    }

    /// The map attached to a group element on the stratum with weights `(p, q)`.
    pub fn from_element(g: &GroupElement, p: u32, q: u32) -> PlaneMap {
        match *g {
            GroupElement::Mobius { .. } => {
                let [a, b, c, d] = g.matrix();
                PlaneMap {
                    px: ComplexPoly::from_terms([((1, 0), d), ((0, 1), c)]),
                    py: ComplexPoly::from_terms([((1, 0), b), ((0, 1), a)]),
                }
            }
            GroupElement::Affine { a, b } => PlaneMap {
                px: ComplexPoly::x(),
                py: ComplexPoly::from_terms([((0, 1), unpack(a)), ((q, 0), unpack(b))]),
            },
            GroupElement::Scaling { a } => PlaneMap {
                px: ComplexPoly::x(),
                py: ComplexPoly::monomial(unpack(a).powf(1.0 / p as f64), 0, 1),
            },
        }
    }
}

/// `T*f_target = α·f_source`.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub element: GroupElement,
    pub map: PlaneMap,
    pub alpha: Complex64,
    /// `permutation[i]` is the target index matched with source root `i`.
    pub permutation: Vec<usize>,
    /// Relative coefficient residual of the defining identity.
    pub residual: f64,
}

/// Relative residual `max|T*f_target − α·f_source| / max|α·f_source|`.
pub fn witness_residual(map: &PlaneMap, alpha: Complex64, f_source: &ComplexPoly, f_target: &ComplexPoly) -> f64 {
    let lhs = map.pull(f_target);
    let rhs = f_source.scale(alpha);
    let scale = rhs.max_abs().max(lhs.max_abs()).max(f64::MIN_POSITIVE);
    lhs.max_diff(&rhs) / scale
}

/// Checks a witness against two polynomials.
pub fn verify_witness(w: &Witness, f_source: &ComplexPoly, f_target: &ComplexPoly) -> (bool, f64) {
    let r = witness_residual(&w.map, w.alpha, f_source, f_target);
    (r <= WITNESS_TOLERANCE, r)
}

/// `α` read off the dominant coefficient of `f_source`.
pub fn recover_alpha(map: &PlaneMap, f_source: &ComplexPoly, f_target: &ComplexPoly) -> Complex64 {
    match f_source.dominant_term() {
        Some(((i, j), c)) => map.pull(f_target).coeff(i, j) / c,
        None => cx(1.0, 0.0),
    }
}

impl Witness {
    /// Builds the witness for `g` and computes `α` and the residual.
    pub fn build(g: GroupElement, source: &CurveType, target: &CurveType, permutation: Vec<usize>) -> Witness {
        let (p, q) = weights_of(&source.stratum);
        let map = PlaneMap::from_element(&g, p, q);
        let fs = source.polynomial();
        let ft = target.polynomial();
        let alpha = recover_alpha(&map, &fs, &ft);
        let residual = witness_residual(&map, alpha, &fs, &ft);
        Witness {
            element: g,
            map,
            alpha,
            permutation,
            residual,
        }
    }

    /// Witness for `A ~ C` from `self: A ~ B` and `next: B ~ C`.
    pub fn then(&self, next: &Witness, f_a: &ComplexPoly, f_c: &ComplexPoly) -> Witness {
        let map = next.map.compose(&self.map);
        let alpha = self.alpha * next.alpha;
        let permutation = self
            .permutation
            .iter()
            .map(|&i| next.permutation.get(i).copied().unwrap_or(i))
            .collect();
        let residual = witness_residual(&map, alpha, f_a, f_c);
        Witness {
            element: next.element.compose(&self.element),
            map,
            alpha,
            permutation,
            residual,
        }
    }

    /// Moves a witness between normalized curve polynomials to the original
    /// inputs `μ·(f∘σ)`, `σ` being the optional coordinate swap.
    pub fn lift(&self, a: &QHNormalForm, b: &QHNormalForm, f_source: &ComplexPoly, f_target: &ComplexPoly) -> Witness {
        let sigma = |nf: &QHNormalForm| {
            if nf.weights.swapped {
                PlaneMap::swap()
            } else {
                PlaneMap::identity()
            }
        };
        let map = sigma(b).compose(&self.map.compose(&sigma(a)));
        let alpha = self.alpha * b.mu.to_complex64() / a.mu.to_complex64();
        let residual = witness_residual(&map, alpha, f_source, f_target);
        Witness {
            map,
            alpha,
            residual,
            ..self.clone()
        }
    }
}

fn weights_of(s: &Stratum) -> (u32, u32) {
    match *s {
        Stratum::Type11 { .. } => (1, 1),
        Stratum::Type1q { q, .. } => (1, q),
        Stratum::Typepq { p, q, .. } => (p, q),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceVerdict {
    pub equivalent: bool,
    pub witness: Option<Witness>,
    /// Why a negative verdict holds.
    pub certificate: Option<String>,
}

impl EquivalenceVerdict {
    fn negative(reason: String) -> Self {
        EquivalenceVerdict {
            equivalent: false,
            witness: None,
            certificate: Some(reason),
        }
    }
}

/// Distance used for multiset matching on a stratum.
fn point_distance(stratum: &Stratum, scale: f64, a: &SpherePoint, b: &SpherePoint) -> f64 {
    match stratum {
        Stratum::Type11 { .. } => a.chordal(b),
        _ => match (a.finite(), b.finite()) {
            (Some(z), Some(w)) => (z - w).norm() / scale,
            _ => f64::INFINITY,
        },
    }
}

/// Greedy nearest pairing of `images` with `targets`: (max error, permutation).
fn match_multisets(stratum: &Stratum, images: &[SpherePoint], targets: &[SpherePoint]) -> (f64, Vec<usize>) {
    let scale = targets
        .iter()
        .filter_map(SpherePoint::finite)
        .map(|z| z.norm())
        .fold(1.0, f64::max);
    let mut used = vec![false; targets.len()];
    let mut perm = Vec::with_capacity(images.len());
    let mut worst: f64 = 0.0;
    for im in images {
        let mut best: Option<(usize, f64)> = None;
        for (j, t) in targets.iter().enumerate() {
            if used[j] {
                continue;
            }
            let d = point_distance(stratum, scale, im, t);
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((j, d));
            }
        }
        match best {
            Some((j, d)) => {
                used[j] = true;
                perm.push(j);
                worst = worst.max(d);
            }
            None => return (f64::INFINITY, perm),
        }
    }
    (worst, perm)
}

const PADDING: [(f64, f64); 8] = [
    (0.0, 0.0),
    (1.0, 0.0),
    (-1.0, 0.0),
    (2.0, 0.0),
    (0.0, 1.0),
    (-2.0, 0.0),
    (0.0, -1.0),
    (3.0, 0.0),
];

/// `pts` extended by fixed points far from all of them, up to `len` entries.
fn padded(pts: &[SpherePoint], len: usize, allow_infinity: bool) -> Vec<SpherePoint> {
    let mut out = pts.to_vec();
    let mut pool: Vec<SpherePoint> = Vec::new();
    if allow_infinity {
        pool.push(SpherePoint::Infinity);
    }
    pool.extend(PADDING.iter().map(|&(re, im)| SpherePoint::Finite(cx(re, im))));
    for cand in pool {
        if out.len() >= len {
            break;
        }
        if out.iter().all(|p| p.chordal(&cand) > 0.1) {
            out.push(cand);
        }
    }
    out
}

fn ordered_tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(n: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !cur.contains(&i) {
                cur.push(i);
                rec(n, len, cur, out);
                cur.pop();
            }
        }
    }
    rec(n, len, &mut cur, &mut out);
    out
}

/// Candidate group elements, in a fixed order.
fn candidates(a: &CurveType, b: &CurveType) -> Vec<GroupElement> {
    let (la, lb) = (&a.lambdas, &b.lambdas);
    let n = la.len();
    match a.stratum {
        Stratum::Type11 { .. } => {
            if n <= 3 {
                let src = padded(la, 3, true);
                let tgt = padded(lb, 3, true);
                return mobius_from_triples([src[0], src[1], src[2]], [tgt[0], tgt[1], tgt[2]])
                    .into_iter()
                    .collect();
            }
            ordered_tuples(n, 3)
                .into_iter()
                .filter_map(|t| mobius_from_triples([la[0], la[1], la[2]], [lb[t[0]], lb[t[1]], lb[t[2]]]).ok())
                .collect()
        }
        Stratum::Type1q { .. } => {
            let affine = |z0: Complex64, z1: Complex64, w0: Complex64, w1: Complex64| {
                let s = (w1 - w0) / (z1 - z0);
                GroupElement::affine(s, w0 - s * z0)
            };
            let fin = |v: &[SpherePoint]| v.iter().filter_map(SpherePoint::finite).collect::<Vec<_>>();
            if n <= 2 {
                let src = fin(&padded(la, 2, false));
                let tgt = fin(&padded(lb, 2, false));
                return vec![affine(src[0], src[1], tgt[0], tgt[1])];
            }
            let (fa, fb) = (fin(la), fin(lb));
            ordered_tuples(n, 2)
                .into_iter()
                .map(|t| affine(fa[0], fa[1], fb[t[0]], fb[t[1]]))
                .collect()
        }
        Stratum::Typepq { .. } => {
            let fa: Vec<Complex64> = la.iter().filter_map(SpherePoint::finite).collect();
            let fb: Vec<Complex64> = lb.iter().filter_map(SpherePoint::finite).collect();
            if fa.is_empty() || fb.is_empty() {
                return vec![GroupElement::scaling(cx(1.0, 0.0))];
            }
            fb.iter().map(|&w| GroupElement::scaling(w / fa[0])).collect()
        }
    }
}

/// Largest witness residual accepted at matching tolerance `tol`.
pub fn witness_bound(tol: f64) -> f64 {
    WITNESS_TOLERANCE.max(tol)
}

/// [`decide_equivalence_with`] at [`DEFAULT_TOLERANCE`].
pub fn decide_equivalence(a: &CurveType, b: &CurveType) -> Result<EquivalenceVerdict, ModuliError> {
    decide_equivalence_with(a, b, DEFAULT_TOLERANCE)
}

/// Exhaustive candidate search in the stratum group.
pub fn decide_equivalence_with(a: &CurveType, b: &CurveType, tol: f64) -> Result<EquivalenceVerdict, ModuliError> {
    if a.stratum != b.stratum {
        return Ok(EquivalenceVerdict::negative(format!(
            "strata differ: {} vs {}",
            a.stratum, b.stratum
        )));
    }
    if (a.flag_m, a.flag_k) != (b.flag_m, b.flag_k) {
        return Ok(EquivalenceVerdict::negative(format!(
            "axis flags differ: (m={}, k={}) vs (m={}, k={})",
            a.flag_m, a.flag_k, b.flag_m, b.flag_k
        )));
    }
    let mut best = f64::INFINITY;
    let mut marginal: Option<f64> = None;
    for g in candidates(a, b) {
        let images: Vec<SpherePoint> = a.lambdas.iter().map(|&z| g.apply(z)).collect();
        let (err, perm) = match_multisets(&a.stratum, &images, &b.lambdas);
        best = best.min(err);
        if err <= tol / 10.0 {
            let w = Witness::build(g, a, b, perm);
            if w.residual <= witness_bound(tol) {
                return Ok(EquivalenceVerdict {
                    equivalent: true,
                    witness: Some(w),
                    certificate: None,
                });
            }
            marginal = Some(marginal.map_or(err, |m: f64| m.min(err)));
        } else if err <= 10.0 * tol {
            marginal = Some(marginal.map_or(err, |m: f64| m.min(err)));
        }
    }
    if let Some(error) = marginal {
        return Err(ModuliError::ToleranceAmbiguity { error, tolerance: tol });
    }
    Ok(EquivalenceVerdict::negative(format!(
        "no element of the {} group maps one configuration onto the other (best match error {best:.3e})",
        group_name(&a.stratum)
    )))
}

fn group_name(s: &Stratum) -> &'static str {
    match s {
        Stratum::Type11 { .. } => "Moebius",
        Stratum::Type1q { .. } => "affine",
        Stratum::Typepq { .. } => "scaling",
    }
}

/// A decimal rounding of one real coordinate: `mant·10^exp`, trailing zeros stripped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Quantized {
    mant: i64,
    exp: i32,
}

impl Quantized {
    fn new(v: f64) -> Quantized {
        let (mut mant, mut exp) = if v.abs() < 1.0 {
            ((v * 1e7).round() as i64, -7)
        } else {
            let e = v.abs().log10().floor() as i32 - 6;
            ((v / 10f64.powi(e)).round() as i64, e)
        };
        if mant == 0 {
            return Quantized { mant: 0, exp: 0 };
        }
        while mant % 10 == 0 {
            mant /= 10;
            exp += 1;
        }
        Quantized { mant, exp }
    }

    fn value(&self) -> f64 {
        self.mant as f64 * 10f64.powi(self.exp)
    }

    fn text(&self) -> String {
        let sign = if self.mant < 0 { "-" } else { "" };
        let digits = self.mant.unsigned_abs().to_string();
        if self.exp >= 0 {
            return format!("{sign}{digits}{}", "0".repeat(self.exp as usize));
        }
        let shift = (-self.exp) as usize;
        let padded = format!("{digits:0>width$}", width = shift + 1);
        let (int, frac) = padded.split_at(padded.len() - shift);
        format!("{sign}{int}.{frac}")
    }
}

type QPoint = (Quantized, Quantized);

fn cmp_tuple(a: &[QPoint], b: &[QPoint]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let o =
            x.0.value()
                .total_cmp(&y.0.value())
                .then(x.1.value().total_cmp(&y.1.value()));
        if o != std::cmp::Ordering::Equal {
            return o;
        }
    }
    a.len().cmp(&b.len())
}

fn normalized_tuple(g: &GroupElement, pts: &[SpherePoint], skip: &[usize]) -> Vec<QPoint> {
    let mut out: Vec<QPoint> = pts
        .iter()
        .enumerate()
        .filter(|(i, _)| !skip.contains(i))
        .map(|(_, &z)| {
            let w = g.apply(z).finite().unwrap_or(cx(f64::INFINITY, 0.0));
            (Quantized::new(w.re), Quantized::new(w.im))
        })
        .collect();
    out.sort_by(|a, b| cmp_tuple(std::slice::from_ref(a), std::slice::from_ref(b)));
    out
}

/// Orbit invariant: stratum, flags and the minimal normalized point tuple.
pub fn canonical_fingerprint(a: &CurveType) -> String {
    let pts = &a.lambdas;
    let n = pts.len();
    let zero = SpherePoint::zero();
    let one = SpherePoint::real(1.0);
    let mut best: Option<Vec<QPoint>> = None;
    let mut consider = |t: Vec<QPoint>| {
        if best.as_ref().is_none_or(|b| cmp_tuple(&t, b).is_lt()) {
            best = Some(t);
        }
    };
    match a.stratum {
        Stratum::Type11 { .. } if n > 3 => {
            for t in ordered_tuples(n, 3) {
                if let Ok(g) =
                    mobius_from_triples([pts[t[0]], pts[t[1]], pts[t[2]]], [zero, one, SpherePoint::Infinity])
                {
                    consider(normalized_tuple(&g, pts, &t));
                }
            }
        }
        Stratum::Type1q { .. } if n > 2 => {
            for t in ordered_tuples(n, 2) {
                if let (Some(z0), Some(z1)) = (pts[t[0]].finite(), pts[t[1]].finite()) {
                    let s = 1.0 / (z1 - z0);
                    consider(normalized_tuple(&GroupElement::affine(s, -s * z0), pts, &t));
                }
            }
        }
        Stratum::Typepq { .. } if n > 1 => {
            for i in 0..n {
                if let Some(z) = pts[i].finite() {
                    consider(normalized_tuple(&GroupElement::scaling(1.0 / z), pts, &[i]));
                }
            }
        }
        _ => {}
    }
    let body: Vec<String> = best
        .unwrap_or_default()
        .iter()
        .map(|(re, im)| format!("({},{})", re.text(), im.text()))
        .collect();
    format!("{}|m{}|k{}|{}", a.stratum, a.flag_m, a.flag_k, body.join(";"))
}
