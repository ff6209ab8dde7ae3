mod common;

use common::{gaussian, nonzero_gaussian, rng};
use num_complex::Complex64;
use qhmod_core::algebra::{laurent_residue, BiPoly, Chart, ExactComplex, SeriesBivariate, UniPoly};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn random_poly(r: &mut ChaCha8Rng, terms: usize, deg: u32) -> BiPoly {
    let mut f = BiPoly::zero();
    for _ in 0..terms {
        let (i, j) = (r.gen_range(0..=deg), r.gen_range(0..=deg));
        f.add_term((i, j), gaussian(r, 9));
    }
    f
}

#[test]
fn addition_cancels() {
    let mut r = rng(21);
    for _ in 0..200 {
        let f = random_poly(&mut r, 6, 5);
        let g = random_poly(&mut r, 6, 5);
        assert_eq!(&(&f + &g) - &g, f);
        assert_eq!(&(&f * &g), &(&g * &f));
    }
}

#[test]
fn pullback_reconstructs_total_transform() {
    let mut r = rng(22);
    for _ in 0..100 {
        let f = random_poly(&mut r, 5, 4).mul_monomial(r.gen_range(0..2), r.gen_range(0..2));
        if f.is_zero() {
            continue;
        }
        for chart in [Chart::T, Chart::U] {
            let (mult, strict) = f.pullback_blowup(chart).unwrap();
            assert_eq!(mult, f.order().unwrap());
            for _ in 0..3 {
                let (a, b) = (gaussian(&mut r, 7), gaussian(&mut r, 7));
                let (lhs, e) = match chart {
                    Chart::T => (f.eval(&a, &(&b * &a)), &a),
                    Chart::U => (f.eval(&(&a * &b), &b), &b),
                };
                assert_eq!(lhs, &e.pow(mult) * &strict.eval(&a, &b));
            }
        }
    }
}

/// Division by increasing powers of `x`, carried far enough to reach `x^{-1}`.
fn residue_by_division(num: &UniPoly, den: &UniPoly) -> ExactComplex {
    let s = den.valuation().unwrap();
    let steps = s + 1;
    let mut rem: Vec<ExactComplex> = num.coeffs().to_vec();
    rem.resize(rem.len() + den.coeffs().len() + steps, ExactComplex::zero());
    let lead = den.coeff(s);
    let mut quotient = Vec::new();
    // quotient coefficient of x^{k-s} comes from rem[k]
    for k in 0..steps {
        let c = &rem[k] / &lead;
        for (l, d) in den.coeffs().iter().enumerate().skip(s) {
            let idx = k + l - s;
            rem[idx] = &rem[idx] - &(&c * d);
        }
        quotient.push(c);
    }
    if s == 0 {
        ExactComplex::zero()
    } else {
        quotient[s - 1].clone()
    }
}

#[test]
fn residue_matches_long_division() {
    let mut r = rng(23);
    for _ in 0..300 {
        let num = UniPoly::new((0..r.gen_range(1..6)).map(|_| gaussian(&mut r, 9)).collect());
        let s = r.gen_range(0..5);
        let mut den_coeffs = vec![ExactComplex::zero(); s];
        den_coeffs.push(nonzero_gaussian(&mut r, 9));
        den_coeffs.extend((0..r.gen_range(0..4)).map(|_| gaussian(&mut r, 9)));
        let den = UniPoly::new(den_coeffs);
        assert_eq!(laurent_residue(&num, &den).unwrap(), residue_by_division(&num, &den));
    }
}

#[test]
fn unit_powers_add() {
    let mut r = rng(24);
    let order = 8;
    for _ in 0..50 {
        let mut u = SeriesBivariate::one(order);
        for i in 0..=order {
            for j in 0..=order - i {
                if i + j > 0 {
                    u.set_coeff(i, j, common::complex(&mut r, 0.5));
                }
            }
        }
        let a = common::complex(&mut r, 2.0);
        let b = common::complex(&mut r, 2.0);
        let lhs = &u.unit_power(a).unwrap() * &u.unit_power(b).unwrap();
        let rhs = u.unit_power(a + b).unwrap();
        assert!(lhs.max_diff(&rhs) / rhs.max_abs().max(1.0) < 1e-12);
        let one = u.unit_power(Complex64::new(1.0, 0.0)).unwrap();
        assert!(one.max_diff(&u) < 1e-12);
    }
}
