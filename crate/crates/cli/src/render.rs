use num_complex::Complex64;
use qhmod_core::algebra::ComplexPoly;
use qhmod_core::moduli::fmt_complex;
use qhmod_core::quasihom::QHNormalForm;

fn monomial(i: u32, j: u32) -> String {
    let var = |name: &str, e: u32| match e {
        0 => None,
        1 => Some(name.to_string()),
        _ => Some(format!("{name}^{e}")),
    };
    [var("x", i), var("y", j)]
        .into_iter()
        .flatten()
        .collect::<Vec<_>>()
        .join("*")
}

/// Coefficient text and whether it should follow a minus sign.
fn coefficient(c: Complex64) -> (String, bool) {
    let text = fmt_complex(c);
    if text[1..].contains(['+', '-']) {
        (format!("({text})"), false)
    } else if let Some(rest) = text.strip_prefix('-') {
        (rest.to_string(), true)
    } else {
        (text, false)
    }
}

fn term(c: Complex64, i: u32, j: u32) -> (String, bool) {
    let (coef, negative) = coefficient(c);
    let mono = monomial(i, j);
    let text = match (coef.as_str(), mono.is_empty()) {
        (_, true) => coef,
        ("1", false) => mono,
        _ => format!("{coef}*{mono}"),
    };
    (text, negative)
}

/// Terms by descending total degree, then descending power of x.
pub fn complex_poly(f: &ComplexPoly) -> String {
    let mut terms: Vec<(&(u32, u32), &Complex64)> = f.terms().filter(|(_, c)| fmt_complex(**c) != "0").collect();
    terms.sort_by_key(|(&(i, j), _)| std::cmp::Reverse((i + j, i)));
    let mut out = String::new();
    for (k, (&(i, j), &c)) in terms.iter().enumerate() {
        let (text, negative) = term(c, i, j);
        match (k, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&text);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `μ·x^m·y^n·∏(y^p − λx^q)` written out factor by factor.
pub fn normal_form(nf: &QHNormalForm) -> String {
    let mut parts = Vec::new();
    let mu = nf.mu.to_complex64();
    let (coef, negative) = coefficient(mu);
    let lead = if negative { format!("-{coef}") } else { coef };
    if lead != "1" {
        parts.push(lead);
    }
    let mono = monomial(nf.m, nf.n);
    if !mono.is_empty() {
        parts.push(mono);
    }
    let (p, q) = (nf.weights.p, nf.weights.q);
    for (l, mult) in nf.root_multiplicities() {
        let (tail, negative) = term(-l, q, 0);
        let factor = format!("{} {} {tail}", monomial(0, p), if negative { "-" } else { "+" });
        parts.push(if mult > 1 {
            format!("({factor})^{mult}")
        } else {
            format!("({factor})")
        });
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}
