//! Embedded resolution of a quasi-homogeneous germ by point blowups.
//!
//! The curve is tracked through its local model `Y^a = c·X^b` (`a ≤ b`) at the
//! unique non-resolved point, so every center is found symbolically. Each
//! blowup uses the chart `Y = T·X`; when the new exponents come out with
//! `a > b` the roles of the two axes are exchanged.
//!
//! Component ids run along the chain starting from the first exceptional
//! line; `birth` keeps the creation order.

mod export;

pub use export::{export_graph, parse_graph_json, GraphFormat};

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::moduli::SpherePoint;
use crate::quasihom::QHNormalForm;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResolutionError {
    #[error("weights ({p},{q}) are not coprime")]
    NotCoprime { p: u32, q: u32 },
    #[error("weights ({p},{q}) must satisfy 1 <= p <= q")]
    InvalidWeights { p: u32, q: u32 },
}

/// One division `q = s·p + r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EuclidStep {
    pub q: u32,
    pub p: u32,
    pub s: u32,
    pub r: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EuclidChain {
    pub steps: Vec<EuclidStep>,
}

impl EuclidChain {
    /// Number of blowups, `Σ s_j`.
    pub fn blowups(&self) -> usize {
        self.steps.iter().map(|s| s.s as usize).sum()
    }
}

pub fn euclid_chain(p: u32, q: u32) -> Result<EuclidChain, ResolutionError> {
    if p == 0 || p > q {
        return Err(ResolutionError::InvalidWeights { p, q });
    }
    if p.gcd(&q) != 1 {
        return Err(ResolutionError::NotCoprime { p, q });
    }
    let mut steps = Vec::new();
    let (mut a, mut b) = (q, p);
    loop {
        let (s, r) = a.div_rem(&b);
        steps.push(EuclidStep { q: a, p: b, s, r });
        if r == 0 {
            break;
        }
        a = b;
        b = r;
    }
    Ok(EuclidChain { steps })
}

/// Self-intersections in chain order from the Euclid data alone.
///
/// Phase `j` consists of the `s_j` blowups of step `j`. Inside a phase every
/// component but the last is a −2 line. The last one of the final phase is
/// the −1 line, the last one of phase `m−1` has weight `−(s_m + 1)` and the
/// last one of an earlier phase `j` has weight `−(s_{j+1} + 2)`. Along the
/// chain the odd phases come first in birth order, then the even phases in
/// reverse, higher phases sitting nearer the −1 line.
pub fn chain_weights_formula(chain: &EuclidChain) -> Vec<i64> {
    let m = chain.steps.len();
    let s: Vec<i64> = chain.steps.iter().map(|st| st.s as i64).collect();
    let phase_weights = |j: usize| -> Vec<i64> {
        let mut w = vec![-2; s[j] as usize];
        let last = if j + 1 == m {
            -1
        } else if j + 2 == m {
            -(s[m - 1] + 1)
        } else {
            -(s[j + 1] + 2)
        };
        *w.last_mut().expect("s_j >= 1") = last;
        w
    };
    let mut out = Vec::with_capacity(chain.blowups());
    for j in (0..m).step_by(2) {
        out.extend(phase_weights(j));
    }
    let mut even: Vec<usize> = (1..m).step_by(2).collect();
    even.reverse();
    for j in even {
        let mut w = phase_weights(j);
        w.reverse();
        out.extend(w);
    }
    out
}

/// A branch of the strict transform meeting a component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "RawAttachment", into = "RawAttachment")]
pub struct Attachment {
    pub position: SpherePoint,
    pub mult: u32,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct RawAttachment {
    re: f64,
    im: f64,
    infinite: bool,
    mult: u32,
}

impl From<RawAttachment> for Attachment {
    fn from(r: RawAttachment) -> Self {
        let position = if r.infinite {
            SpherePoint::Infinity
        } else {
            SpherePoint::Finite(Complex64::new(r.re, r.im))
        };
        Attachment { position, mult: r.mult }
    }
}

impl From<Attachment> for RawAttachment {
    fn from(a: Attachment) -> Self {
        let (re, im) = a.position.finite().map_or((0.0, 0.0), |z| (z.re, z.im));
        RawAttachment {
            re,
            im,
            infinite: a.position.is_infinite(),
            mult: a.mult,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub id: usize,
    pub birth: usize,
    pub self_int: i64,
    /// Order of the pullback of x along the component.
    pub vx: u64,
    /// Order of the pullback of y along the component.
    pub vy: u64,
    /// `p·vy − q·vx`, the order of `y^p/x^q`.
    pub e_fib: i64,
    pub principal: bool,
    pub attachments: Vec<Attachment>,
}

/// The resolution chain. Valuations refer to the normalized coordinates
/// (after the swap that makes `p ≤ q`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualGraph {
    pub components: Vec<Component>,
    pub edges: Vec<(usize, usize)>,
    /// Component met by the strict transform of `x = 0`.
    pub x_line: usize,
    /// Component met by the strict transform of `y = 0`.
    pub y_line: usize,
}

impl DualGraph {
    pub fn component(&self, id: usize) -> Option<&Component> {
        self.components.iter().find(|c| c.id == id)
    }

    pub fn principal(&self) -> Option<&Component> {
        self.components.iter().find(|c| c.principal)
    }

    pub fn neighbors(&self, id: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == id {
                    Some(b)
                } else if b == id {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn self_intersections(&self) -> Vec<i64> {
        self.components.iter().map(|c| c.self_int).collect()
    }

    /// Connected, acyclic, every vertex of degree at most two.
    pub fn is_linear_chain(&self) -> bool {
        let n = self.components.len();
        if n == 0 || self.edges.len() + 1 != n {
            return false;
        }
        if self.components.iter().any(|c| self.neighbors(c.id).len() > 2) {
            return false;
        }
        // connectivity by walking from id 1
        let mut seen = vec![false; n + 1];
        let mut stack = vec![self.components[0].id];
        while let Some(v) = stack.pop() {
            if v > n || seen[v] {
                continue;
            }
            seen[v] = true;
            stack.extend(self.neighbors(v));
        }
        self.components.iter().all(|c| c.id <= n && seen[c.id])
    }
}

/// Blows down −1 lines one at a time; true when the whole chain disappears.
pub fn is_contractible(g: &DualGraph) -> bool {
    let mut weights: Vec<(usize, i64)> = g.components.iter().map(|c| (c.id, c.self_int)).collect();
    let mut edges: Vec<(usize, usize)> = g.edges.clone();
    while !weights.is_empty() {
        let Some(pos) = weights.iter().position(|&(_, w)| w == -1) else {
            return false;
        };
        let (v, _) = weights.remove(pos);
        let nbrs: Vec<usize> = edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect();
        edges.retain(|&(a, b)| a != v && b != v);
        for &u in &nbrs {
            if let Some(entry) = weights.iter_mut().find(|(id, _)| *id == u) {
                entry.1 += 1;
            }
        }
        if let [u, w] = nbrs[..] {
            edges.push((u.min(w), u.max(w)));
        }
    }
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Axis {
    Component(usize),
    XLine,
    YLine,
}

struct Proto {
    self_int: i64,
    vx: u64,
    vy: u64,
    attachments: Vec<Attachment>,
}

fn valuation(axis: Axis, protos: &[Proto]) -> (u64, u64) {
    match axis {
        Axis::XLine => (1, 0),
        Axis::YLine => (0, 1),
        Axis::Component(c) => (protos[c].vx, protos[c].vy),
    }
}

/// Runs the blowup sequence for the normal form. A single monomial is
/// resolved with weights (1, 1).
pub fn simulate_resolution(nf: &QHNormalForm) -> DualGraph {
    let (p, q) = (nf.weights.p as u64, nf.weights.q as u64);
    let (mut a, mut b) = (p, q);
    let (mut x_axis, mut y_axis) = (Axis::XLine, Axis::YLine);
    // true when y^p/x^q equals X^b/Y^a instead of Y^a/X^b
    let mut flipped = false;
    let mut protos: Vec<Proto> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let (mut x_line, mut y_line) = (0, 0);
    let principal;
    let line_mult = |axis: Axis| match axis {
        Axis::XLine => nf.m,
        Axis::YLine => nf.n,
        Axis::Component(_) => 0,
    };
    loop {
        let new = protos.len();
        let (vx1, vy1) = valuation(x_axis, &protos);
        let (vx2, vy2) = valuation(y_axis, &protos);
        for axis in [x_axis, y_axis] {
            if let Axis::Component(c) = axis {
                protos[c].self_int -= 1;
            }
        }
        match (x_axis, y_axis) {
            (Axis::Component(u), Axis::Component(v)) => {
                edges.retain(|&e| e != (u.min(v), u.max(v)));
                edges.push((u, new));
                edges.push((v, new));
            }
            (Axis::Component(u), _) | (_, Axis::Component(u)) => edges.push((u, new)),
            _ => {}
        }
        protos.push(Proto {
            self_int: -1,
            vx: vx1 + vx2,
            vy: vy1 + vy2,
            attachments: Vec::new(),
        });
        let last = a == 1 && b == 1;
        // the X axis leaves through the other chart: T = ∞ on the new line
        let far = if last && flipped {
            SpherePoint::zero()
        } else {
            SpherePoint::Infinity
        };
        let near = if flipped {
            SpherePoint::Infinity
        } else {
            SpherePoint::zero()
        };
        let mut land = |axis: Axis, at: SpherePoint, protos: &mut Vec<Proto>| {
            match axis {
                Axis::XLine => x_line = new,
                Axis::YLine => y_line = new,
                Axis::Component(_) => return,
            }
            let mult = line_mult(axis);
            if mult > 0 {
                protos[new].attachments.push(Attachment { position: at, mult });
            }
        };
        land(x_axis, far, &mut protos);
        if last {
            land(y_axis, near, &mut protos);
            for (lambda, mult) in nf.root_multiplicities() {
                protos[new].attachments.push(Attachment {
                    position: SpherePoint::Finite(lambda),
                    mult,
                });
            }
            principal = new;
            break;
        }
        b -= a;
        x_axis = Axis::Component(new);
        if b < a {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut x_axis, &mut y_axis);
            flipped = !flipped;
        }
    }
    assemble(protos, edges, principal, x_line, y_line, p, q)
}

fn assemble(
    protos: Vec<Proto>,
    edges: Vec<(usize, usize)>,
    principal: usize,
    x_line: usize,
    y_line: usize,
    p: u64,
    q: u64,
) -> DualGraph {
    let n = protos.len();
    // walk the chain from the first-born line, which is an end
    let mut order = vec![0usize];
    let mut prev: Option<usize> = None;
    while order.len() < n {
        let cur = *order.last().expect("nonempty");
        let next = edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == cur {
                    Some(b)
                } else if b == cur {
                    Some(a)
                } else {
                    None
                }
            })
            .find(|&v| Some(v) != prev)
            .expect("resolution graph is a connected chain");
        prev = Some(cur);
        order.push(next);
    }
    let mut id_of = vec![0usize; n];
    for (pos, &birth) in order.iter().enumerate() {
        id_of[birth] = pos + 1;
    }
    let components = order
        .iter()
        .map(|&birth| {
            let pr = &protos[birth];
            let mut attachments = pr.attachments.clone();
            attachments.sort_by(|u, v| u.position.total_cmp(&v.position));
            Component {
                id: id_of[birth],
                birth: birth + 1,
                self_int: pr.self_int,
                vx: pr.vx,
                vy: pr.vy,
                e_fib: (p * pr.vy) as i64 - (q * pr.vx) as i64,
                principal: birth == principal,
                attachments,
            }
        })
        .collect();
    let mut edges: Vec<(usize, usize)> = edges
        .into_iter()
        .map(|(u, v)| {
            let (a, b) = (id_of[u], id_of[v]);
            (a.min(b), a.max(b))
        })
        .collect();
    edges.sort_unstable();
    DualGraph {
        components,
        edges,
        x_line: id_of[x_line],
        y_line: id_of[y_line],
    }
}

/// The predicted order of the pullback of the curve along a component,
/// `m·vx + n·vy + k·min(p·vy, q·vx)`.
pub fn pullback_order(nf: &QHNormalForm, c: &Component) -> u64 {
    let (p, q) = (nf.weights.p as u64, nf.weights.q as u64);
    nf.m as u64 * c.vx + nf.n as u64 * c.vy + nf.k() as u64 * (p * c.vy).min(q * c.vx)
}

/// Attachment points on the principal line, in the coordinate `y^p/x^q`.
#[derive(Debug, Clone, PartialEq)]
pub struct Representative {
    pub points: Vec<SpherePoint>,
    /// Set for chains of at most two lines, where no line is principal in the
    /// strict sense; the points are then those on the −1 line.
    pub no_principal_line: bool,
}

pub fn attachment_representative(g: &DualGraph) -> Representative {
    let host = g.principal().or_else(|| g.components.iter().find(|c| c.self_int == -1));
    let points = host.map_or_else(Vec::new, |c| c.attachments.iter().map(|a| a.position).collect());
    Representative {
        points,
        no_principal_line: g.components.len() <= 2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_poly;
    use crate::quasihom::decompose;

    fn graph(src: &str) -> (QHNormalForm, DualGraph) {
        let nf = decompose(&parse_poly(src).unwrap()).unwrap();
        let g = simulate_resolution(&nf);
        (nf, g)
    }

    fn step(q: u32, p: u32, s: u32, r: u32) -> EuclidStep {
        EuclidStep { q, p, s, r }
    }

    #[test]
    fn euclid_examples() {
        assert_eq!(
            euclid_chain(2, 3).unwrap().steps,
            vec![step(3, 2, 1, 1), step(2, 1, 2, 0)]
        );
        assert_eq!(euclid_chain(1, 7).unwrap().steps, vec![step(7, 1, 7, 0)]);
        let c = euclid_chain(3, 5).unwrap();
        assert_eq!(c.steps, vec![step(5, 3, 1, 2), step(3, 2, 1, 1), step(2, 1, 2, 0)]);
        assert_eq!(c.blowups(), 4);
        assert_eq!(euclid_chain(2, 4), Err(ResolutionError::NotCoprime { p: 2, q: 4 }));
    }

    #[test]
    fn formula_examples() {
        assert_eq!(chain_weights_formula(&euclid_chain(2, 3).unwrap()), vec![-3, -1, -2]);
        assert_eq!(chain_weights_formula(&euclid_chain(1, 2).unwrap()), vec![-2, -1]);
        assert_eq!(chain_weights_formula(&euclid_chain(1, 1).unwrap()), vec![-1]);
        assert_eq!(
            chain_weights_formula(&euclid_chain(2, 5).unwrap()),
            vec![-2, -3, -1, -2]
        );
        assert_eq!(
            chain_weights_formula(&euclid_chain(3, 5).unwrap()),
            vec![-3, -2, -1, -3]
        );
    }

    #[test]
    fn cusp() {
        let (nf, g) = graph("y^2 - x^3");
        assert_eq!(g.self_intersections(), vec![-3, -1, -2]);
        let vals: Vec<(u64, u64)> = g.components.iter().map(|c| (c.vx, c.vy)).collect();
        assert_eq!(vals, vec![(1, 1), (2, 3), (1, 2)]);
        let orders: Vec<u64> = g.components.iter().map(|c| pullback_order(&nf, c)).collect();
        assert_eq!(orders, vec![2, 6, 3]);
        let e: Vec<i64> = g.components.iter().map(|c| c.e_fib).collect();
        assert_eq!(e, vec![-1, 0, 1]);
        assert_eq!(g.principal().unwrap().id, 2);
        assert_eq!(g.principal().unwrap().attachments.len(), 1);
        assert_eq!(g.edges, vec![(1, 2), (2, 3)]);
        assert_eq!((g.x_line, g.y_line), (1, 3));
        let births: Vec<usize> = g.components.iter().map(|c| c.birth).collect();
        assert_eq!(births, vec![1, 3, 2]);
    }

    #[test]
    fn tangent_lines() {
        let (_, g) = graph("x*(y-x)*(y+x)");
        assert_eq!(g.self_intersections(), vec![-1]);
        let rep = attachment_representative(&g);
        assert!(rep.no_principal_line);
        assert_eq!(
            rep.points,
            vec![SpherePoint::real(-1.0), SpherePoint::real(1.0), SpherePoint::Infinity]
        );
    }

    #[test]
    fn parabolas() {
        let (_, g) = graph("(y-x^2)*(y-2x^2)*(y+3x^2)");
        assert_eq!(g.self_intersections(), vec![-2, -1]);
        let pts = attachment_representative(&g).points;
        let expected = [SpherePoint::real(-3.0), SpherePoint::real(1.0), SpherePoint::real(2.0)];
        assert_eq!(pts.len(), 3);
        assert!(pts.iter().zip(&expected).all(|(a, b)| a.chordal(b) < 1e-12));
    }

    #[test]
    fn two_cusps_attach_at_their_roots() {
        let (_, g) = graph("(y^2-x^3)*(y^2+x^3)");
        let rep = attachment_representative(&g);
        assert!(!rep.no_principal_line);
        assert_eq!(rep.points, vec![SpherePoint::real(-1.0), SpherePoint::real(1.0)]);
    }

    #[test]
    fn axis_branches_land_on_the_ends() {
        let (_, g) = graph("x*y*(y^2-x^3)");
        assert_eq!(
            g.component(1).unwrap().attachments,
            vec![Attachment {
                position: SpherePoint::Infinity,
                mult: 1
            }]
        );
        assert_eq!(
            g.component(3).unwrap().attachments,
            vec![Attachment {
                position: SpherePoint::Infinity,
                mult: 1
            }]
        );
    }

    #[test]
    fn contraction() {
        let (_, g) = graph("y^5 - x^8");
        assert!(g.is_linear_chain());
        assert!(is_contractible(&g));
        let mut broken = g.clone();
        broken.components[0].self_int -= 1;
        assert!(!is_contractible(&broken));
    }

    #[test]
    fn monomial_single_blowup() {
        let (nf, g) = graph("y");
        assert_eq!(g.self_intersections(), vec![-1]);
        assert_eq!(pullback_order(&nf, &g.components[0]), 1);
    }
}
