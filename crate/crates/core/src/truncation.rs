//! Contact-locus side: truncations built from lists of dlt valuations.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::coeffring::{ratio_serde, BirElement, FracExp};
use crate::complex::WeightedDualComplex;
use crate::error::{Error, Result};
use crate::ratfunc::{DenFactor, Series, ZetaExpr, ZetaTerm};

/// A divisorial valuation with its order `N`, log discrepancy `nu` and the
/// class of its center.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DltValuation {
    #[serde(rename = "N")]
    pub n: i64,
    #[serde(with = "ratio_serde")]
    pub nu: Ratio<i64>,
    pub cls: BirElement,
    pub over_sigma: bool,
}

impl DltValuation {
    pub fn new(n: i64, nu: impl Into<Ratio<i64>>, cls: BirElement, over_sigma: bool) -> Self {
        DltValuation {
            n,
            nu: nu.into(),
            cls,
            over_sigma,
        }
    }

    /// Checks `N >= 1`, `nu > 0` and that the class has dimension `dim - 1`.
    pub fn check(&self, dim: usize) -> Result<()> {
        if self.n < 1 || self.nu <= Ratio::from_integer(0) {
            return Err(Error::BadParameters(format!("valuation {self} has N < 1 or nu <= 0")));
        }
        let top = FracExp::int(dim as i64 - 1);
        for (label, e, _) in self.cls.terms() {
            if e + FracExp::int(label.dim() as i64) != top {
                return Err(Error::BadParameters(format!(
                    "valuation {self} class is not of dimension {top}"
                )));
            }
        }
        Ok(())
    }

    fn factor(&self) -> DenFactor {
        DenFactor::new(FracExp::from_ratio(self.nu), self.n).expect("checked valuation")
    }
}

impl fmt::Display for DltValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(N = {}, nu = {}, {})", self.n, self.nu, self.cls)
    }
}

/// Coefficients of `T^1 .. T^m`: the sum over valuations with `N | k` of
/// `cls * L^(1 - nu k / N)`. Zero coefficients are left out.
pub fn dlt_truncation(vals: &[DltValuation], m: i64, local: bool) -> Series {
    let mut out = Series::new();
    for v in vals.iter().filter(|v| !local || v.over_sigma) {
        let mut k = v.n;
        while k <= m {
            let e = FracExp::int(1) - FracExp::from_ratio(v.nu * (k / v.n));
            let c = v.cls.shift_l(e);
            let slot = out.entry(k).or_insert_with(BirElement::zero);
            *slot += &c;
            if slot.is_zero() {
                out.remove(&k);
            }
            k += v.n;
        }
    }
    out
}

/// `sum cls * L / (L^nu T^-N - 1)`.
pub fn sum_over_valuations(vals: &[DltValuation], local: bool) -> ZetaExpr {
    let mut out = ZetaExpr::zero();
    for v in vals.iter().filter(|v| !local || v.over_sigma) {
        out.push(ZetaTerm::new(&v.cls * &BirElement::l(), 0, vec![v.factor()]));
    }
    out
}

/// Where the two sides of the truncation identity disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TruncationMismatch {
    pub k: i64,
    pub from_zeta: BirElement,
    pub from_valuations: BirElement,
}

/// Compares the series of `zeta_bir` with the valuation truncation up to `T^m`.
pub fn main_theorem_mismatches(
    c: &WeightedDualComplex,
    vals: &[DltValuation],
    m: i64,
    local: bool,
) -> Result<Vec<TruncationMismatch>> {
    let series = c.zeta_bir(local).series_expand(m)?;
    let trunc = dlt_truncation(vals, m, local);
    let mut out = Vec::new();
    for k in 0..=m {
        let a = series.get(&k).cloned().unwrap_or_else(BirElement::zero);
        let b = trunc.get(&k).cloned().unwrap_or_else(BirElement::zero);
        if a != b {
            out.push(TruncationMismatch {
                k,
                from_zeta: a,
                from_valuations: b,
            });
        }
    }
    Ok(out)
}

pub fn verify_main_theorem(c: &WeightedDualComplex, vals: &[DltValuation], m: i64, local: bool) -> bool {
    main_theorem_mismatches(c, vals, m, local).is_ok_and(|v| v.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{face, StratumComponent, VertexData};
    use crate::ratfunc::den;

    fn l(k: i64) -> BirElement {
        BirElement::lpow(k)
    }

    fn cusp_dlt() -> WeightedDualComplex {
        WeightedDualComplex::from_parts(
            2,
            vec![
                VertexData::new(0, 6, 5, l(1)).over_sigma(true),
                VertexData::new(1, 1, 1, l(1)).strict(),
            ],
            vec![(face(&[0, 1]), vec![StratumComponent::new(l(0))])],
        )
        .unwrap()
    }

    #[test]
    fn single_smooth_valuation() {
        let d = BirElement::class("D", 1);
        let t = dlt_truncation(&[DltValuation::new(1, 1, d.clone(), true)], 3, false);
        for k in 1..=3 {
            assert_eq!(t[&k], &d * &l(1 - k));
        }
    }

    #[test]
    fn empty_and_single_sums() {
        assert_eq!(sum_over_valuations(&[], false), ZetaExpr::zero());
        let one = sum_over_valuations(&[DltValuation::new(2, 3, l(1), true)], true);
        assert_eq!(one, ZetaExpr::term(l(2), 0, vec![den(3, 2)]));
    }

    #[test]
    fn cusp_truncation_picks_up_the_edge_valuation() {
        let c = cusp_dlt();
        let vals = c.quasi_monomial_valuations(24);
        let t = dlt_truncation(&vals, 12, true);
        assert_eq!(t.get(&6), Some(&l(-3)));
        assert_eq!(t.get(&7), Some(&l(-4)));
        assert!((1..6).all(|k| !t.contains_key(&k)));
        assert!(verify_main_theorem(&c, &vals, 24, true));
        // vertices alone miss T^7
        let vertices_only: Vec<DltValuation> = vals.iter().filter(|v| v.n == 6 || v.n == 1).cloned().collect();
        let bad = main_theorem_mismatches(&c, &vertices_only, 12, true).unwrap();
        assert_eq!(bad.first().map(|x| x.k), Some(7));
    }

    #[test]
    fn prefix_stability() {
        let vals = cusp_dlt().quasi_monomial_valuations(30);
        let long = dlt_truncation(&vals, 30, false);
        let short = dlt_truncation(&vals, 11, false);
        let cut: Series = long.into_iter().filter(|(k, _)| *k <= 11).collect();
        assert_eq!(cut, short);
    }

    #[test]
    fn sum_matches_truncation() {
        let vals = cusp_dlt().quasi_monomial_valuations(20);
        let s = sum_over_valuations(&vals, false).series_expand(20).unwrap();
        assert_eq!(s, dlt_truncation(&vals, 20, false));
    }

    #[test]
    fn valuation_checks() {
        assert!(DltValuation::new(1, 1, l(1), true).check(2).is_ok());
        assert!(DltValuation::new(1, 1, l(2), true).check(2).is_err());
        assert!(DltValuation::new(0, 1, l(1), true).check(2).is_err());
    }
}
