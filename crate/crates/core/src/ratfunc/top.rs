//! Topological zeta functions: rational functions of one variable `s`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::normal::Pole;
use crate::coeffring::ratio_text;

/// `N s + nu`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearFactor {
    pub n: i64,
    pub nu: Ratio<i64>,
}

impl LinearFactor {
    pub fn new(n: i64, nu: impl Into<Ratio<i64>>) -> Self {
        LinearFactor { n, nu: nu.into() }
    }

    pub fn root(self) -> Ratio<i64> {
        -self.nu / self.n
    }
}

impl Serialize for LinearFactor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (self.n, ratio_text(self.nu)).serialize(s)
    }
}

/// `chi / prod(N_i s + nu_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TopTerm {
    pub chi: i64,
    pub den: Vec<LinearFactor>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TopZeta {
    pub terms: Vec<TopTerm>,
}

/// `num(s) / prod (s - root)^k` with no common roots, leading scalar folded
/// into `num`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopNormal {
    /// Coefficients, lowest degree first.
    pub num: Vec<BigRational>,
    pub den: Vec<(Ratio<i64>, u32)>,
}

fn big(r: Ratio<i64>) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

fn trim(p: &mut Vec<BigRational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn mul_linear(p: &[BigRational], root: &BigRational) -> Vec<BigRational> {
    // p * (s - root)
    let mut out = vec![BigRational::zero(); p.len() + 1];
    for (i, c) in p.iter().enumerate() {
        out[i + 1] += c;
        out[i] -= c * root;
    }
    out
}

/// Divide by `(s - root)` when it is a root; `None` otherwise.
fn div_root(p: &[BigRational], root: &BigRational) -> Option<Vec<BigRational>> {
    if p.is_empty() {
        return None;
    }
    let n = p.len() - 1;
    let mut q = vec![BigRational::zero(); n];
    let mut carry = BigRational::zero();
    for i in (0..=n).rev() {
        let v = &p[i] + &carry;
        if i == 0 {
            return if v.is_zero() { Some(q) } else { None };
        }
        q[i - 1] = v.clone();
        carry = v * root;
    }
    None
}

impl TopZeta {
    pub fn zero() -> Self {
        TopZeta::default()
    }

    pub fn push(&mut self, chi: i64, mut den: Vec<LinearFactor>) {
        if chi != 0 {
            den.sort();
            self.terms.push(TopTerm { chi, den });
        }
    }

    pub fn add(&self, other: &TopZeta) -> TopZeta {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        TopZeta { terms }
    }

    pub fn normalize(&self) -> TopNormal {
        let mut common: BTreeMap<Ratio<i64>, u32> = BTreeMap::new();
        let mut per_term: Vec<(BigRational, BTreeMap<Ratio<i64>, u32>)> = Vec::new();
        for t in &self.terms {
            let mut roots: BTreeMap<Ratio<i64>, u32> = BTreeMap::new();
            let mut scale = BigRational::from_integer(BigInt::from(t.chi));
            for f in &t.den {
                *roots.entry(f.root()).or_default() += 1;
                scale /= BigRational::from_integer(BigInt::from(f.n));
            }
            for (r, k) in &roots {
                let e = common.entry(*r).or_default();
                *e = (*e).max(*k);
            }
            per_term.push((scale, roots));
        }
        let mut num: Vec<BigRational> = Vec::new();
        for (scale, roots) in per_term {
            let mut p = vec![scale];
            for (r, k) in &common {
                let have = roots.get(r).copied().unwrap_or(0);
                for _ in have..*k {
                    p = mul_linear(&p, &big(*r));
                }
            }
            if num.len() < p.len() {
                num.resize(p.len(), BigRational::zero());
            }
            for (i, c) in p.into_iter().enumerate() {
                num[i] += c;
            }
        }
        trim(&mut num);
        if num.is_empty() {
            return TopNormal { num, den: vec![] };
        }
        let mut den = Vec::new();
        for (r, k) in common {
            let root = big(r);
            let mut left = k;
            while left > 0 {
                match div_root(&num, &root) {
                    Some(q) => {
                        num = q;
                        left -= 1;
                    }
                    None => break,
                }
            }
            if left > 0 {
                den.push((r, left));
            }
        }
        TopNormal { num, den }
    }

    /// Roots of the reduced denominator with their orders, largest first.
    pub fn poles(&self) -> Vec<Pole> {
        let mut out: Vec<Pole> = self
            .normalize()
            .den
            .into_iter()
            .map(|(r, k)| Pole::new(r, k))
            .collect();
        out.sort_by(|x, y| y.s0.cmp(&x.s0));
        out
    }
}

impl TopNormal {
    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    /// Value at a rational point that is not a pole.
    pub fn eval(&self, s: Ratio<i64>) -> Option<BigRational> {
        let x = big(s);
        let mut den = BigRational::one();
        for (r, k) in &self.den {
            for _ in 0..*k {
                den *= &x - big(*r);
            }
        }
        if den.is_zero() {
            return None;
        }
        let mut num = BigRational::zero();
        for c in self.num.iter().rev() {
            num = num * &x + c;
        }
        Some(num / den)
    }
}

fn s_times(n: i64) -> String {
    if n == 1 {
        "s".to_string()
    } else {
        format!("{n}s")
    }
}

impl fmt::Display for TopZeta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let ds: Vec<String> = t.den.iter().map(|l| format!("({} + {})", s_times(l.n), l.nu)).collect();
                if ds.is_empty() {
                    format!("{}", t.chi)
                } else {
                    format!("{}/({})", t.chi, ds.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Display for TopNormal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num.is_empty() {
            return write!(f, "0");
        }
        let ns: Vec<String> = self
            .num
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*s"),
                _ => format!("{c}*s^{i}"),
            })
            .collect();
        let ds: Vec<String> = self
            .den
            .iter()
            .map(|(r, k)| {
                let lin = if *r < Ratio::from_integer(0) { format!("(s + {})", -r) } else { format!("(s - {r})") };
                if *k == 1 { lin } else { format!("{lin}^{k}") }
            })
            .collect();
        if ds.is_empty() {
            write!(f, "{}", ns.join(" + "))
        } else {
            write!(f, "({}) / ({})", ns.join(" + "), ds.join("*"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Ratio<i64> {
        Ratio::new(p, q)
    }

    #[test]
    fn single_simple_pole() {
        let mut z = TopZeta::zero();
        z.push(1, vec![LinearFactor::new(1, 1)]);
        assert_eq!(z.poles(), vec![Pole::new(r(-1, 1), 1)]);
    }

    #[test]
    fn cancelling_pair_has_no_poles() {
        let mut z = TopZeta::zero();
        z.push(1, vec![LinearFactor::new(2, 2)]);
        z.push(-1, vec![LinearFactor::new(2, 2)]);
        assert!(z.poles().is_empty());
        assert!(z.normalize().is_zero());
    }

    #[test]
    fn cusp_sum() {
        // (2-1)/(2s+2) + (2-1)/(3s+3) + (2-3)/(6s+5) + three edge terms
        let f = |n: i64, nu: i64| LinearFactor::new(n, nu);
        let mut z = TopZeta::zero();
        z.push(1, vec![f(2, 2)]);
        z.push(1, vec![f(3, 3)]);
        z.push(-1, vec![f(6, 5)]);
        z.push(1, vec![f(2, 2), f(6, 5)]);
        z.push(1, vec![f(3, 3), f(6, 5)]);
        z.push(1, vec![f(6, 5), f(1, 1)]);
        assert_eq!(z.poles(), vec![Pole::new(r(-5, 6), 1), Pole::new(r(-1, 1), 1)]);
        // value at s = 0 equals the sum of chi/nu products: 1/2 + 1/3 - 1/5 + 1/10 + 1/15 + 1/5 = 1
        assert_eq!(z.normalize().eval(r(0, 1)).unwrap(), BigRational::one());
    }

    #[test]
    fn node_double_pole() {
        let mut z = TopZeta::zero();
        z.push(1, vec![LinearFactor::new(1, 1), LinearFactor::new(1, 1)]);
        assert_eq!(z.poles(), vec![Pole::new(r(-1, 1), 2)]);
    }
}
