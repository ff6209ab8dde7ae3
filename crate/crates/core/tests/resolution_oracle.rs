use num_integer::Integer;
use qhmod_core::algebra::{BiPoly, Chart};
use qhmod_core::quasihom::decompose;
use qhmod_core::resolution::{
    chain_weights_formula, euclid_chain, is_contractible, pullback_order, simulate_resolution,
};

fn coprime_pairs(max_q: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for q in 1..=max_q {
        for p in 1..=q {
            if p.gcd(&q) == 1 {
                out.push((p, q));
            }
        }
    }
    out
}

/// `x^m·y^n·∏(y^p − λx^q)` with integer λ.
fn curve(p: u32, q: u32, m: u32, n: u32, lambdas: &[i64]) -> (BiPoly, BiPoly) {
    let mut commode = BiPoly::one();
    for &l in lambdas {
        let factor = BiPoly::from_int_terms(&[(0, p, 1), (q, 0, -l)]);
        commode = &commode * &factor;
    }
    (commode.mul_monomial(m, n), commode)
}

/// Blows up the origin chart by chart, choosing the chart from the tangent
/// cone of the curve, and records the order of the total transform along each
/// new exceptional line.
fn blowup_orders(total: &BiPoly, commode: &BiPoly) -> Vec<u32> {
    let mut total = total.clone();
    let mut strict = commode.clone();
    let mut orders = Vec::new();
    loop {
        let low = strict.order().expect("nonzero");
        let cone: Vec<(u32, u32)> = strict.support().filter(|&(i, j)| i + j == low).collect();
        let chart = if cone.iter().all(|&(i, _)| i == 0) {
            Some(Chart::T)
        } else if cone.iter().all(|&(_, j)| j == 0) {
            Some(Chart::U)
        } else {
            None
        };
        let used = chart.unwrap_or(Chart::T);
        let (mult, rest) = total.pullback_blowup(used).unwrap();
        orders.push(mult);
        total = match used {
            Chart::T => rest.mul_monomial(mult, 0),
            Chart::U => rest.mul_monomial(0, mult),
        };
        strict = strict.pullback_blowup(used).unwrap().1;
        if chart.is_none() {
            return orders;
        }
        // the center must lie on the strict transform
        assert!(strict.coeff(0, 0).is_zero());
    }
}

#[test]
fn pullback_orders_match_bookkeeping() {
    for (p, q) in coprime_pairs(13) {
        for (m, n, lambdas) in [
            (0, 0, vec![1]),
            (1, 1, vec![1, -2]),
            (2, 0, vec![3]),
            (0, 3, vec![1, 1]),
        ] {
            let (f, commode) = curve(p, q, m, n, &lambdas);
            let nf = decompose(&f).unwrap();
            let g = simulate_resolution(&nf);
            let mut by_birth = g.components.clone();
            by_birth.sort_by_key(|c| c.birth);
            let predicted: Vec<u32> = by_birth.iter().map(|c| pullback_order(&nf, c) as u32).collect();
            assert_eq!(blowup_orders(&f, &commode), predicted, "p={p} q={q} m={m} n={n}");
        }
    }
}

#[test]
fn chains_for_all_pairs() {
    for (p, q) in coprime_pairs(30) {
        let chain = euclid_chain(p, q).unwrap();
        let (f, _) = curve(p, q, 0, 0, &[1]);
        let g = simulate_resolution(&decompose(&f).unwrap());
        assert!(g.is_linear_chain(), "({p},{q})");
        assert_eq!(g.components.len(), chain.blowups());
        assert_eq!(g.components.iter().filter(|c| c.self_int == -1).count(), 1);
        assert!(is_contractible(&g));
        assert_eq!(chain_weights_formula(&chain), g.self_intersections(), "({p},{q})");
        for c in &g.components {
            assert_eq!(c.e_fib == 0, c.principal, "({p},{q}) D{}", c.id);
        }
    }
}

#[test]
fn commode_curves_meet_only_the_principal_line() {
    for (p, q) in coprime_pairs(12) {
        let (f, _) = curve(p, q, 0, 0, &[1, 2, -3]);
        let g = simulate_resolution(&decompose(&f).unwrap());
        for c in &g.components {
            assert_eq!(c.attachments.is_empty(), !c.principal);
        }
        let principal = g.principal().unwrap();
        assert_eq!(principal.attachments.len(), 3);
        assert_eq!(principal.attachments.iter().map(|a| a.mult).sum::<u32>(), 3);
    }
}

#[test]
fn axis_lines_land_on_chain_ends() {
    for (p, q) in coprime_pairs(12) {
        let (f, _) = curve(p, q, 1, 1, &[5]);
        let g = simulate_resolution(&decompose(&f).unwrap());
        assert_eq!(g.x_line, 1);
        assert_eq!(g.y_line, g.components.len());
    }
}

#[test]
fn repeated_roots_carry_multiplicity() {
    let f = BiPoly::from_int_terms(&[(0, 2, 1), (3, 0, -1)]).pow(2);
    let g = simulate_resolution(&decompose(&f).unwrap());
    let principal = g.principal().unwrap();
    assert_eq!(principal.attachments.len(), 1);
    assert_eq!(principal.attachments[0].mult, 2);
}
