//! Rational functions in `T` kept as sums of terms over geometric factors
//! `(L^a T^-b - 1)`.

mod normal;
mod poly;
mod top;

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::coeffring::{BirElement, FracExp, Specialization};
use crate::error::{Error, Result};

pub use normal::{NormalForm, Pole};
pub use poly::TPoly;
pub use top::{LinearFactor, TopNormal, TopTerm, TopZeta};

/// The factor `L^a T^-b - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DenFactor {
    a: FracExp,
    b: i64,
}

impl DenFactor {
    pub fn new(a: impl Into<FracExp>, b: i64) -> Result<Self> {
        let a = a.into();
        if !a.is_positive() || b < 1 {
            return Err(Error::BadParameters(format!(
                "denominator factor needs a > 0 and b >= 1, got a = {a}, b = {b}"
            )));
        }
        Ok(DenFactor { a, b })
    }

    pub fn a(self) -> FracExp {
        self.a
    }

    pub fn b(self) -> i64 {
        self.b
    }

    /// `a/b`; the candidate pole is its negative.
    pub fn ratio(self) -> Ratio<i64> {
        self.a.ratio() / self.b
    }

    /// `L^a - T^b`, the factor after clearing `T^-b`.
    pub fn cleared(self) -> TPoly {
        TPoly::geometric(self.a, self.b)
    }
}

impl fmt::Display for DenFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.a == FracExp::int(1) {
            "L".to_string()
        } else if self.a.is_integer() {
            format!("L^{}", self.a)
        } else {
            format!("L^({})", self.a)
        };
        let t = if self.b == 1 { "T^-1".to_string() } else { format!("T^-{}", self.b) };
        write!(f, "({l}*{t} - 1)")
    }
}

/// `coeff * T^tpow / prod(den)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaTerm {
    pub coeff: BirElement,
    pub tpow: i64,
    pub den: Vec<DenFactor>,
}

impl ZetaTerm {
    pub fn new(coeff: BirElement, tpow: i64, mut den: Vec<DenFactor>) -> Self {
        den.sort();
        ZetaTerm { coeff, tpow, den }
    }
}

/// Coefficients of `T^0 .. T^m`, zero entries omitted.
pub type Series = BTreeMap<i64, BirElement>;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaExpr {
    terms: Vec<ZetaTerm>,
}

impl ZetaExpr {
    pub fn zero() -> Self {
        ZetaExpr::default()
    }

    pub fn from_terms(terms: Vec<ZetaTerm>) -> Self {
        ZetaExpr {
            terms: terms.into_iter().filter(|t| !t.coeff.is_zero()).collect(),
        }
    }

    pub fn term(coeff: BirElement, tpow: i64, den: Vec<DenFactor>) -> Self {
        ZetaExpr::from_terms(vec![ZetaTerm::new(coeff, tpow, den)])
    }

    pub fn constant(c: BirElement) -> Self {
        ZetaExpr::term(c, 0, vec![])
    }

    pub fn terms(&self) -> &[ZetaTerm] {
        &self.terms
    }

    pub fn push(&mut self, t: ZetaTerm) {
        if !t.coeff.is_zero() {
            self.terms.push(t);
        }
    }

    pub fn add(&self, other: &ZetaExpr) -> ZetaExpr {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        ZetaExpr { terms }
    }

    pub fn negate(&self) -> ZetaExpr {
        ZetaExpr {
            terms: self
                .terms
                .iter()
                .map(|t| ZetaTerm::new(-&t.coeff, t.tpow, t.den.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, other: &ZetaExpr) -> ZetaExpr {
        self.add(&other.negate())
    }

    pub fn mul(&self, other: &ZetaExpr) -> ZetaExpr {
        let mut out = ZetaExpr::zero();
        for x in &self.terms {
            for y in &other.terms {
                let mut den = x.den.clone();
                den.extend(y.den.iter().copied());
                out.push(ZetaTerm::new(&x.coeff * &y.coeff, x.tpow + y.tpow, den));
            }
        }
        out
    }

    pub fn scale(&self, c: &BirElement) -> ZetaExpr {
        ZetaExpr::from_terms(
            self.terms
                .iter()
                .map(|t| ZetaTerm::new(&t.coeff * c, t.tpow, t.den.clone()))
                .collect(),
        )
    }

    /// Merge terms sharing `(tpow, den)`.
    pub fn compact(&self) -> ZetaExpr {
        let mut acc: BTreeMap<(i64, Vec<DenFactor>), BirElement> = BTreeMap::new();
        for t in &self.terms {
            *acc.entry((t.tpow, t.den.clone())).or_default() += &t.coeff;
        }
        ZetaExpr::from_terms(
            acc.into_iter()
                .map(|((tpow, den), coeff)| ZetaTerm { coeff, tpow, den })
                .collect(),
        )
    }

    pub fn specialize(&self, hom: &Specialization) -> Result<ZetaExpr> {
        let mut out = ZetaExpr::zero();
        for t in &self.terms {
            out.push(ZetaTerm::new(t.coeff.specialize(hom)?, t.tpow, t.den.clone()));
        }
        Ok(out)
    }

    pub fn rho(&self) -> ZetaExpr {
        self.specialize(&Specialization::Rho).expect("rho is total")
    }

    /// Coefficients of `T^0..T^m` of the power series expansion.
    pub fn series_expand(&self, m: i64) -> Result<Series> {
        let mut out: Series = BTreeMap::new();
        for t in &self.terms {
            let start = t.tpow + t.den.iter().map(|f| f.b).sum::<i64>();
            if start < 0 {
                return Err(Error::NegativeOrder(start));
            }
            if start > m {
                continue;
            }
            let mut acc: BTreeMap<i64, BirElement> = BTreeMap::new();
            acc.insert(t.tpow, t.coeff.clone());
            for f in &t.den {
                let mut next: BTreeMap<i64, BirElement> = BTreeMap::new();
                for (d, c) in &acc {
                    let mut k = 1;
                    while d + k * f.b <= m {
                        let e = next.entry(d + k * f.b).or_default();
                        *e += &c.shift_l(-(f.a * k));
                        k += 1;
                    }
                }
                acc = next;
            }
            for (d, c) in acc {
                if d <= m && !c.is_zero() {
                    let e = out.entry(d).or_default();
                    *e += &c;
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    /// Value at `T = infinity`, where each factor tends to `-1`.
    pub fn limit_t_to_infinity(&self) -> Result<BirElement> {
        if self.terms.iter().all(|t| t.tpow <= 0) {
            let mut out = BirElement::zero();
            for t in &self.terms {
                if t.tpow == 0 {
                    let sign = if t.den.len() % 2 == 0 { 1 } else { -1 };
                    out += &t.coeff.scale(sign);
                }
            }
            return Ok(out);
        }
        // positive powers can only cancel across terms; decide on one fraction
        let (num, den) = normal::single_fraction(self, None)?;
        let total: i64 = den.iter().map(|f| f.b).sum();
        match num.max_deg() {
            None => Ok(BirElement::zero()),
            Some(d) if d > total => Err(Error::DivergentTerm(d - total)),
            Some(d) if d == total => {
                let sign = if den.len() % 2 == 0 { 1 } else { -1 };
                Ok(num.coeff(d).scale(sign))
            }
            Some(_) => Ok(BirElement::zero()),
        }
    }

    pub fn normalize(&self, hom: Option<&Specialization>) -> Result<NormalForm> {
        NormalForm::from_expr(self, hom)
    }

    /// Whether the two expressions are the same rational function
    /// (after `hom`, if given).
    pub fn same_function(&self, other: &ZetaExpr, hom: Option<&Specialization>) -> Result<bool> {
        let (num, _) = normal::single_fraction(&self.sub(other), hom)?;
        Ok(num.is_zero())
    }

    /// Poles at `T = L^-s0` of the rho-specialized function.
    pub fn poles(&self) -> Result<Vec<Pole>> {
        Ok(self.normalize(Some(&Specialization::Rho))?.poles())
    }
}

impl fmt::Display for ZetaExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})", t.coeff)?;
            if t.tpow != 0 {
                write!(f, "*T^{}", t.tpow)?;
            }
            if !t.den.is_empty() {
                let ds: Vec<String> = t.den.iter().map(|d| d.to_string()).collect();
                write!(f, "/({})", ds.join("*"))?;
            }
        }
        Ok(())
    }
}

/// `L^a T^-b - 1` with integer data; a shorthand for tests and generators.
pub fn den(a: i64, b: i64) -> DenFactor {
    DenFactor::new(FracExp::int(a), b).expect("positive data")
}

/// Checks `L^nu T^-N - 1 = sum_{J proper subset of K} prod_{i in K \ J} (L^nu_i T^-N_i - 1)`
/// with `nu = sum nu_i`, `N = sum N_i`.
pub fn telescope_identity_check(k: &[DenFactor]) -> bool {
    if k.is_empty() {
        return false;
    }
    let bump = |f: &DenFactor| {
        ZetaExpr::term(BirElement::lpow(f.a()), -f.b(), vec![]).sub(&ZetaExpr::constant(BirElement::one()))
    };
    let total = k.iter().fold(FracExp::zero(), |acc, f| acc + f.a());
    let n: i64 = k.iter().map(|f| f.b()).sum();
    let lhs = bump(&DenFactor::new(total, n).expect("positive data"));
    let mut rhs = ZetaExpr::zero();
    let full = (1u32 << k.len()) - 1;
    for kept in 0..full {
        // product over the complement of `kept`
        let mut prod = ZetaExpr::constant(BirElement::one());
        for (i, f) in k.iter().enumerate() {
            if kept >> i & 1 == 0 {
                prod = prod.mul(&bump(f));
            }
        }
        rhs = rhs.add(&prod);
    }
    lhs.same_function(&rhs, None).unwrap_or(false)
}
