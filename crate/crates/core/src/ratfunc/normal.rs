use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::poly::TPoly;
use super::{DenFactor, ZetaExpr, ZetaTerm};
use crate::coeffring::{ratio_text, BirElement, FracExp, Specialization};
use crate::error::Result;

/// One fraction `num / prod(L^a - T^b)` after whole-factor cancellation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub num: TPoly,
    pub den: Vec<DenFactor>,
    pub qmax: i64,
}

/// A pole at `T = L^-s0` of the given order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pole {
    pub s0: Ratio<i64>,
    pub order: u32,
}

impl Pole {
    pub fn new(s0: Ratio<i64>, order: u32) -> Self {
        Pole { s0, order }
    }
}

impl fmt::Display for Pole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (order {})", self.s0, self.order)
    }
}

impl Serialize for Pole {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Pole", 2)?;
        st.serialize_field("s0", &ratio_text(self.s0))?;
        st.serialize_field("order", &self.order)?;
        st.end()
    }
}

/// Numerator over the multiset-maximal common denominator, no cancellation.
pub(crate) fn single_fraction(
    x: &ZetaExpr,
    hom: Option<&Specialization>,
) -> Result<(TPoly, Vec<DenFactor>)> {
    let mut common: BTreeMap<DenFactor, usize> = BTreeMap::new();
    for t in x.terms() {
        let mut here: BTreeMap<DenFactor, usize> = BTreeMap::new();
        for f in &t.den {
            *here.entry(*f).or_default() += 1;
        }
        for (f, k) in here {
            let e = common.entry(f).or_default();
            *e = (*e).max(k);
        }
    }
    // memoize the products of missing factors, which repeat a lot
    let mut cache: BTreeMap<Vec<DenFactor>, TPoly> = BTreeMap::new();
    let mut num = TPoly::zero();
    for t in x.terms() {
        let coeff = match hom {
            Some(h) => t.coeff.specialize(h)?,
            None => t.coeff.clone(),
        };
        if coeff.is_zero() {
            continue;
        }
        let mut missing: Vec<DenFactor> = Vec::new();
        let mut here: BTreeMap<DenFactor, usize> = BTreeMap::new();
        for f in &t.den {
            *here.entry(*f).or_default() += 1;
        }
        for (f, k) in &common {
            let have = here.get(f).copied().unwrap_or(0);
            for _ in have..*k {
                missing.push(*f);
            }
        }
        let prod = cache
            .entry(missing.clone())
            .or_insert_with(|| missing.iter().fold(TPoly::one(), |acc, f| acc.mul(&f.cleared())))
            .clone();
        let shift = t.tpow + t.den.iter().map(|f| f.b()).sum::<i64>();
        num = num.add(&prod.scale(&coeff).shift(shift));
    }
    let den = common
        .into_iter()
        .flat_map(|(f, k)| std::iter::repeat_n(f, k))
        .collect();
    Ok((num, den))
}

impl NormalForm {
    pub fn from_expr(x: &ZetaExpr, hom: Option<&Specialization>) -> Result<NormalForm> {
        let (num, den) = single_fraction(x, hom)?;
        Ok(NormalForm::cancel(num, den))
    }

    /// Greedy whole-factor cancellation in the fixed (sorted) factor order.
    pub fn cancel(mut num: TPoly, mut den: Vec<DenFactor>) -> NormalForm {
        den.sort();
        if num.is_zero() {
            den.clear();
        }
        let mut changed = true;
        while changed {
            changed = false;
            let mut i = 0;
            while i < den.len() {
                if let Some(q) = num.div_exact(&den[i].cleared()) {
                    num = q;
                    den.remove(i);
                    changed = true;
                } else {
                    i += 1;
                }
            }
        }
        let qmax = den
            .iter()
            .fold(num.exp_denominator(), |acc, f| acc.lcm(&f.a().denom()));
        NormalForm { num, den, qmax }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Same rational function, checked by cross multiplication.
    pub fn equivalent(&self, other: &NormalForm) -> bool {
        let a = other.den.iter().fold(self.num.clone(), |acc, f| acc.mul(&f.cleared()));
        let b = self.den.iter().fold(other.num.clone(), |acc, f| acc.mul(&f.cleared()));
        a == b
    }

    /// Back to term shape: `sum c T^d / prod(L^a - T^b)`.
    pub fn to_expr(&self) -> ZetaExpr {
        let shift: i64 = self.den.iter().map(|f| f.b()).sum();
        // L^a - T^b = T^b (L^a T^-b - 1)
        let mut out = ZetaExpr::zero();
        for (d, c) in self.num.coeffs() {
            out.push(ZetaTerm::new(c.clone(), d - shift, self.den.clone()));
        }
        out
    }

    /// Poles at `T = L^-s0` (untwisted), grouped by ratio `a/b`.
    pub fn poles(&self) -> Vec<Pole> {
        let mut groups: BTreeMap<Ratio<i64>, u32> = BTreeMap::new();
        for f in &self.den {
            *groups.entry(f.ratio()).or_default() += 1;
        }
        let mut out = Vec::new();
        for (r, count) in groups {
            let mult = self.num.root_multiplicity(FracExp::from_ratio(r)).min(count);
            if count > mult {
                out.push(Pole::new(-r, count - mult));
            }
        }
        out.sort_by(|x, y| y.s0.cmp(&x.s0));
        out
    }

    /// Factors left after cancellation; twisted poles can only sit on these.
    pub fn surviving_factors(&self) -> &[DenFactor] {
        &self.den
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        let ds: Vec<String> = self
            .den
            .iter()
            .map(|d| {
                let l = if d.a() == FracExp::int(1) { "L".to_string() } else { format!("L^({})", d.a()) };
                format!("({l} - T^{})", d.b())
            })
            .collect();
        write!(f, "[{}] / [{}]", self.num, ds.join("*"))
    }
}

#[derive(Serialize)]
struct NormalJson<'a> {
    num: Vec<(i64, &'a BirElement)>,
    den: &'a [DenFactor],
    qmax: i64,
}

impl Serialize for NormalForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        NormalJson {
            num: self.num.coeffs().iter().map(|(d, c)| (*d, c)).collect(),
            den: &self.den,
            qmax: self.qmax,
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::super::den;
    use super::*;
    use proptest::prelude::*;

    fn r(p: i64, q: i64) -> Ratio<i64> {
        Ratio::new(p, q)
    }

    #[test]
    fn exact_division_removes_factor() {
        // (L^2 - T^2)/(L - T) = L + T
        let num = TPoly::geometric(FracExp::int(2), 2);
        let nf = NormalForm::cancel(num, vec![den(1, 1)]);
        assert!(nf.den.is_empty());
        let mut want = TPoly::monomial(BirElement::l(), 0);
        want.add_at(1, &BirElement::one());
        assert_eq!(nf.num, want);
    }

    #[test]
    fn cusp_keeps_both_factors() {
        let x = ZetaExpr::term(BirElement::lpow(3), -1, vec![den(5, 6), den(1, 1)]);
        let nf = x.normalize(Some(&Specialization::Rho)).unwrap();
        assert_eq!(nf.den, vec![den(1, 1), den(5, 6)]);
        assert_eq!(nf.poles(), vec![Pole::new(r(-5, 6), 1), Pole::new(r(-1, 1), 1)]);
    }

    #[test]
    fn double_factor_gives_double_pole() {
        let x = ZetaExpr::term(BirElement::one(), 0, vec![den(1, 1), den(1, 1)]);
        assert_eq!(x.poles().unwrap(), vec![Pole::new(r(-1, 1), 2)]);
    }

    #[test]
    fn common_factor_does_not_change_poles() {
        // (L^2 - T^2)/((L - T)(L^2 - T^2)) has a simple pole at -1
        let nf = NormalForm::cancel(TPoly::geometric(FracExp::int(2), 2), vec![den(1, 1), den(2, 2)]);
        assert_eq!(nf.poles(), vec![Pole::new(r(-1, 1), 1)]);
    }

    #[test]
    fn normal_form_round_trips_through_terms() {
        let x = ZetaExpr::term(BirElement::lpow(3), -1, vec![den(5, 6), den(1, 1)]);
        let nf = x.normalize(None).unwrap();
        assert!(nf.to_expr().same_function(&x, None).unwrap());
        assert_eq!(nf.to_expr().series_expand(20).unwrap(), x.series_expand(20).unwrap());
    }

    fn arb_expr() -> impl Strategy<Value = ZetaExpr> {
        let f = (1i64..4, 1i64..3, 1i64..4)
            .prop_map(|(p, q, b)| DenFactor::new(FracExp::new(p, q), b).unwrap());
        let t = (-3i64..4, 0i64..3, proptest::collection::vec(f, 0..3), 1i64..3).prop_map(|(c, tp, den, k)| {
            ZetaTerm::new(BirElement::lpow(FracExp::int(c)).scale(k), tp, den)
        });
        proptest::collection::vec(t, 0..4).prop_map(ZetaExpr::from_terms)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn normalization_preserves_series(x in arb_expr()) {
            let nf = x.normalize(None).unwrap();
            prop_assert_eq!(nf.to_expr().series_expand(30).unwrap(), x.series_expand(30).unwrap());
            let again = NormalForm::cancel(nf.num.clone(), nf.den.clone());
            prop_assert_eq!(&again, &nf);
        }

        #[test]
        fn poles_ignore_common_factors(x in arb_expr(), a in 1i64..4, b in 1i64..4) {
            let nf = x.normalize(None).unwrap();
            let f = den(a, b);
            let mut bigger = nf.den.clone();
            bigger.push(f);
            let padded = NormalForm { num: nf.num.mul(&f.cleared()), den: bigger, qmax: nf.qmax };
            prop_assert_eq!(padded.poles(), nf.poles());
            prop_assert!(padded.equivalent(&nf));
        }
    }
}
