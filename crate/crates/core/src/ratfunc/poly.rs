//! Laurent polynomials in `T` with coefficients in the label ring.

use std::collections::BTreeMap;
use std::fmt;

use crate::coeffring::{BirElement, FracExp, Specialization};
use crate::error::Result;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TPoly {
    coeffs: BTreeMap<i64, BirElement>,
}

impl TPoly {
    pub fn zero() -> Self {
        TPoly::default()
    }

    pub fn one() -> Self {
        TPoly::monomial(BirElement::one(), 0)
    }

    pub fn monomial(c: BirElement, deg: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(deg, c);
        }
        TPoly { coeffs }
    }

    /// `L^a - T^b`.
    pub fn geometric(a: FracExp, b: i64) -> Self {
        let mut p = TPoly::monomial(BirElement::lpow(a), 0);
        p.add_at(b, &BirElement::scalar(-1));
        p
    }

    /// `T - L^s`.
    pub fn linear_root(s: FracExp) -> Self {
        let mut p = TPoly::monomial(BirElement::one(), 1);
        p.add_at(0, &-BirElement::lpow(s));
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, BirElement> {
        &self.coeffs
    }

    pub fn coeff(&self, deg: i64) -> BirElement {
        self.coeffs.get(&deg).cloned().unwrap_or_default()
    }

    pub fn min_deg(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_deg(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn add_at(&mut self, deg: i64, c: &BirElement) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(deg).or_default();
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&deg);
        }
    }

    pub fn add(&self, other: &TPoly) -> TPoly {
        let mut out = self.clone();
        for (d, c) in &other.coeffs {
            out.add_at(*d, c);
        }
        out
    }

    pub fn sub(&self, other: &TPoly) -> TPoly {
        let mut out = self.clone();
        for (d, c) in &other.coeffs {
            out.add_at(*d, &-c);
        }
        out
    }

    pub fn mul(&self, other: &TPoly) -> TPoly {
        let mut out = TPoly::zero();
        for (da, ca) in &self.coeffs {
            for (db, cb) in &other.coeffs {
                out.add_at(da + db, &(ca * cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &BirElement) -> TPoly {
        let mut out = TPoly::zero();
        for (d, x) in &self.coeffs {
            out.add_at(*d, &(x * c));
        }
        out
    }

    pub fn shift(&self, k: i64) -> TPoly {
        TPoly {
            coeffs: self.coeffs.iter().map(|(d, c)| (d + k, c.clone())).collect(),
        }
    }

    pub fn map_coeffs(&self, hom: &Specialization) -> Result<TPoly> {
        let mut out = TPoly::zero();
        for (d, c) in &self.coeffs {
            out.add_at(*d, &c.specialize(hom)?);
        }
        Ok(out)
    }

    /// Exact division by a polynomial whose leading and trailing
    /// coefficients are units `L^e` (up to sign); `None` if it does not divide.
    pub fn div_exact(&self, d: &TPoly) -> Option<TPoly> {
        if self.is_zero() {
            return Some(TPoly::zero());
        }
        let dlo = d.min_deg()?;
        let dhi = d.max_deg()?;
        let lead = d.coeffs[&dhi].clone();
        let inv = unit_inverse(&lead)?;
        let mut rem = self.clone();
        let mut quot = TPoly::zero();
        let lo = self.min_deg().unwrap();
        while let Some(top) = rem.max_deg() {
            // the divisor has a nonzero lowest coefficient, so the quotient
            // cannot reach below lo - dlo
            if top - dhi < lo - dlo {
                return None;
            }
            let c = &rem.coeffs[&top] * &inv;
            let q = TPoly::monomial(c, top - dhi);
            rem = rem.sub(&q.mul(d));
            quot = quot.add(&q);
        }
        Some(quot)
    }

    /// Multiplicity of `T = L^s` as a root.
    pub fn root_multiplicity(&self, s: FracExp) -> u32 {
        if self.is_zero() {
            return u32::MAX;
        }
        let lin = TPoly::linear_root(s);
        let mut p = self.clone();
        let mut k = 0;
        while let Some(q) = p.div_exact(&lin) {
            p = q;
            k += 1;
        }
        k
    }

    /// Largest denominator among the L-exponents.
    pub fn exp_denominator(&self) -> i64 {
        use num_integer::Integer;
        self.coeffs.values().fold(1, |acc, c| acc.lcm(&c.exp_denominator()))
    }
}

/// Inverse of `±L^e`.
fn unit_inverse(c: &BirElement) -> Option<BirElement> {
    if c.len() != 1 {
        return None;
    }
    let (label, e, k) = c.terms().next()?;
    if !label.is_point() || (k != 1 && k != -1) {
        return None;
    }
    Some(BirElement::lpow(-e).scale(k))
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .rev()
            .map(|(d, c)| match d {
                0 => format!("({c})"),
                1 => format!("({c})*T"),
                _ => format!("({c})*T^{d}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn difference_of_squares_divides() {
        let num = TPoly::geometric(FracExp::int(2), 2);
        let den = TPoly::geometric(FracExp::int(1), 1);
        let q = num.div_exact(&den).unwrap();
        // (L^2 - T^2)/(L - T) = L + T
        let mut want = TPoly::monomial(BirElement::l(), 0);
        want.add_at(1, &BirElement::one());
        assert_eq!(q, want);
    }

    #[test]
    fn non_divisor_is_rejected() {
        let num = TPoly::geometric(FracExp::int(3), 2);
        let den = TPoly::geometric(FracExp::int(1), 1);
        assert!(num.div_exact(&den).is_none());
    }

    #[test]
    fn fractional_root() {
        // L^5 - T^6 vanishes at T = L^(5/6) exactly once
        let p = TPoly::geometric(FracExp::int(5), 6);
        assert_eq!(p.root_multiplicity(FracExp::new(5, 6)), 1);
        let sq = p.mul(&p);
        assert_eq!(sq.root_multiplicity(FracExp::new(5, 6)), 2);
        assert_eq!(p.root_multiplicity(FracExp::int(1)), 0);
    }

    #[test]
    fn laurent_shift_survives_division() {
        let den = TPoly::geometric(FracExp::int(1), 1);
        let num = den.mul(&TPoly::monomial(BirElement::scalar(3), -4));
        assert_eq!(num.div_exact(&den).unwrap(), TPoly::monomial(BirElement::scalar(3), -4));
    }
}
