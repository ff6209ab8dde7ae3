//! Dense one-variable polynomials over the Gaussian rationals, Laurent
//! expansion at the origin and residues.

use super::scalar::ExactComplex;
use super::AlgebraError;

/// Coefficients in ascending degree; empty for zero, last entry nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UniPoly {
    coeffs: Vec<ExactComplex>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<ExactComplex>) -> Self {
        while coeffs.last().is_some_and(ExactComplex::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        UniPoly::new(coeffs.iter().map(|&c| ExactComplex::from_int(c)).collect())
    }

    pub fn zero() -> Self {
        UniPoly::default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[ExactComplex] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> ExactComplex {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&ExactComplex> {
        self.coeffs.last()
    }

    /// Order of vanishing at the origin.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &ExactComplex::from_int(k as i64))
                .collect(),
        )
    }

    pub fn monic(&self) -> UniPoly {
        match self.leading() {
            None => UniPoly::zero(),
            Some(lc) => {
                let inv = lc.inv().expect("nonzero leading coefficient");
                UniPoly::new(self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![ExactComplex::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (a, ca) in self.coeffs.iter().enumerate() {
            for (b, cb) in other.coeffs.iter().enumerate() {
                out[a + b] = &out[a + b] + &(ca * cb);
            }
        }
        UniPoly::new(out)
    }

    /// Euclidean division `self = q·d + r`.
    pub fn div_rem(&self, d: &UniPoly) -> Result<(UniPoly, UniPoly), AlgebraError> {
        let dl = d.leading().ok_or(AlgebraError::ZeroDenominator)?;
        let dl_inv = dl.inv().expect("nonzero");
        let dd = d.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((UniPoly::zero(), self.clone()));
        }
        let mut quot = vec![ExactComplex::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &dl_inv;
            if c.is_zero() {
                continue;
            }
            for (l, dc) in d.coeffs.iter().enumerate() {
                rem[k + l] = &rem[k + l] - &(&c * dc);
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((UniPoly::new(quot), UniPoly::new(rem)))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Yun's square-free decomposition: monic `(factor, multiplicity)` pairs
    /// with pairwise coprime, square-free factors whose product (with
    /// multiplicities) is `self` up to its leading coefficient.
    pub fn squarefree_decomposition(&self) -> Vec<(UniPoly, u32)> {
        let mut out = Vec::new();
        if self.degree().is_none_or(|d| d == 0) {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let mut a = f.gcd(&df);
        let mut b = f.div_rem(&a).expect("gcd divides").0;
        let mut c = df.div_rem(&a).expect("gcd divides").0;
        let mut d = sub(&c, &b.derivative());
        let mut mult = 1;
        loop {
            a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), mult));
            }
            b = b.div_rem(&a).expect("gcd divides").0;
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            c = d.div_rem(&a).expect("gcd divides").0;
            d = sub(&c, &b.derivative());
            mult += 1;
        }
        out
    }
}

fn sub(a: &UniPoly, b: &UniPoly) -> UniPoly {
    let n = a.coeffs.len().max(b.coeffs.len());
    UniPoly::new((0..n).map(|k| &a.coeff(k) - &b.coeff(k)).collect())
}

/// A truncated Laurent series `Σ_{k≥0} c_k x^{valuation + k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentTail {
    pub valuation: i64,
    pub coefficients: Vec<ExactComplex>,
}

impl LaurentTail {
    /// Expands `num/den` at the origin through the power `x^upto`.
    ///
    /// With `den = x^s·u`, `u(0) ≠ 0`, this computes `num·u^{-1}` as a power
    /// series and shifts it by `-s`.
    pub fn expand(num: &UniPoly, den: &UniPoly, upto: i64) -> Result<LaurentTail, AlgebraError> {
        let s = den.valuation().ok_or(AlgebraError::ZeroDenominator)? as i64;
        let u: Vec<ExactComplex> = den.coeffs[s as usize..].to_vec();
        let len = upto + s + 1;
        if len <= 0 {
            return Ok(LaurentTail {
                valuation: -s,
                coefficients: Vec::new(),
            });
        }
        let len = len as usize;
        let u0_inv = u[0].inv().expect("u(0) nonzero");
        // series inverse of u
        let mut inv = vec![ExactComplex::zero(); len];
        inv[0] = u0_inv.clone();
        for k in 1..len {
            let mut acc = ExactComplex::zero();
            for l in 1..=k.min(u.len() - 1) {
                acc = &acc + &(&u[l] * &inv[k - l]);
            }
            inv[k] = -&(&acc * &u0_inv);
        }
        let mut coeffs = vec![ExactComplex::zero(); len];
        for (a, ca) in num.coeffs.iter().enumerate().take(len) {
            for (b, cb) in inv.iter().enumerate().take(len - a) {
                coeffs[a + b] = &coeffs[a + b] + &(ca * cb);
            }
        }
        let mut tail = LaurentTail {
            valuation: -s,
            coefficients: coeffs,
        };
        tail.normalize();
        Ok(tail)
    }

    fn normalize(&mut self) {
        let lead = self.coefficients.iter().position(|c| !c.is_zero());
        match lead {
            Some(k) => {
                self.coefficients.drain(..k);
                self.valuation += k as i64;
            }
            None => self.coefficients.clear(),
        }
    }

    pub fn coeff(&self, power: i64) -> ExactComplex {
        let k = power - self.valuation;
        if k < 0 {
            return ExactComplex::zero();
        }
        self.coefficients.get(k as usize).cloned().unwrap_or_default()
    }
}

/// Coefficient of `x^{-1}` in the Laurent expansion of `num/den` at 0.
pub fn laurent_residue(num: &UniPoly, den: &UniPoly) -> Result<ExactComplex, AlgebraError> {
    let s = den.valuation().ok_or(AlgebraError::ZeroDenominator)?;
    if s == 0 {
        return Ok(ExactComplex::zero());
    }
    let u = UniPoly::new(den.coeffs[s..].to_vec());
    // coefficient of x^{s-1} in num·u^{-1}
    let target = s - 1;
    let u0_inv = u.coeff(0).inv().expect("u(0) nonzero");
    let mut inv = vec![ExactComplex::zero(); target + 1];
    inv[0] = u0_inv.clone();
    for k in 1..=target {
        let mut acc = ExactComplex::zero();
        for l in 1..=k {
            acc = &acc + &(&u.coeff(l) * &inv[k - l]);
        }
        inv[k] = -&(&acc * &u0_inv);
    }
    let mut res = ExactComplex::zero();
    for a in 0..=target {
        res = &res + &(&num.coeff(a) * &inv[target - a]);
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residue_examples() {
        let r = laurent_residue(&UniPoly::from_ints(&[1, 2]), &UniPoly::from_ints(&[0, 0, 1])).unwrap();
        assert_eq!(r, ExactComplex::from_int(2));
        let r = laurent_residue(&UniPoly::from_ints(&[1]), &UniPoly::from_ints(&[0, 1, -1])).unwrap();
        assert_eq!(r, ExactComplex::one());
        let r = laurent_residue(&UniPoly::from_ints(&[1]), &UniPoly::from_ints(&[0, 0, 1])).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn residue_zero_denominator() {
        assert_eq!(
            laurent_residue(&UniPoly::from_ints(&[1]), &UniPoly::zero()),
            Err(AlgebraError::ZeroDenominator)
        );
    }

    #[test]
    fn laurent_expand_geometric() {
        // 1/(x(1-x)) = x^-1 + 1 + x + ...
        let t = LaurentTail::expand(&UniPoly::from_ints(&[1]), &UniPoly::from_ints(&[0, 1, -1]), 3).unwrap();
        assert_eq!(t.valuation, -1);
        for p in -1..=3 {
            assert_eq!(t.coeff(p), ExactComplex::one());
        }
        assert!(t.coeff(-2).is_zero());
    }

    #[test]
    fn squarefree_of_repeated_root() {
        // (z-1)^2 (z+1)
        let f = UniPoly::from_ints(&[1, -1, -1, 1]);
        let parts = f.squarefree_decomposition();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0], (UniPoly::from_ints(&[1, 1]), 1));
        assert_eq!(parts[1], (UniPoly::from_ints(&[-1, 1]), 2));
    }

    #[test]
    fn gcd_is_monic() {
        let a = UniPoly::from_ints(&[-2, 0, 2]); // 2(z^2-1)
        let b = UniPoly::from_ints(&[3, 3]); // 3(z+1)
        assert_eq!(a.gcd(&b), UniPoly::from_ints(&[1, 1]));
    }
}
