//! Coefficient ring: integer combinations of opaque birational class labels
//! times rational powers of `L`.
//!
//! Labels never interact beyond multiset union, so the ring is free on
//! (label, exponent) pairs and equality is structural.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A rational exponent of `L`, kept in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FracExp(Ratio<i64>);

impl FracExp {
    pub fn new(numer: i64, denom: i64) -> Self {
        FracExp(Ratio::new(numer, denom))
    }

    pub fn int(n: i64) -> Self {
        FracExp(Ratio::from_integer(n))
    }

    pub fn zero() -> Self {
        FracExp(Ratio::zero())
    }

    pub fn from_ratio(r: Ratio<i64>) -> Self {
        FracExp(r)
    }

    pub fn ratio(self) -> Ratio<i64> {
        self.0
    }

    pub fn numer(self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(self) -> bool {
        self.0.is_integer()
    }
}

impl Add for FracExp {
    type Output = FracExp;
    fn add(self, rhs: FracExp) -> FracExp {
        FracExp(self.0 + rhs.0)
    }
}

impl Sub for FracExp {
    type Output = FracExp;
    fn sub(self, rhs: FracExp) -> FracExp {
        FracExp(self.0 - rhs.0)
    }
}

impl Neg for FracExp {
    type Output = FracExp;
    fn neg(self) -> FracExp {
        FracExp(-self.0)
    }
}

impl Mul<i64> for FracExp {
    type Output = FracExp;
    fn mul(self, rhs: i64) -> FracExp {
        FracExp(self.0 * rhs)
    }
}

impl From<i64> for FracExp {
    fn from(n: i64) -> Self {
        FracExp::int(n)
    }
}

impl From<Ratio<i64>> for FracExp {
    fn from(r: Ratio<i64>) -> Self {
        FracExp(r)
    }
}

impl fmt::Display for FracExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for FracExp {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_ratio(s).map(FracExp)
    }
}

pub(crate) fn parse_ratio(s: &str) -> Result<Ratio<i64>> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Ratio::new(p, q))
        }
        None => s.parse::<i64>().map(Ratio::from_integer).map_err(|_| bad()),
    }
}

/// Canonical "p/q" text, used in JSON.
pub(crate) fn ratio_text(r: Ratio<i64>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Serde helpers for plain `Ratio<i64>` fields written as "p/q".
pub(crate) mod ratio_serde {
    use num_rational::Ratio;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Ratio<i64>, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&super::ratio_text(*r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Ratio<i64>, D::Error> {
        let f = super::FracExp::deserialize(d)?;
        Ok(f.ratio())
    }
}

impl Serialize for FracExp {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&ratio_text(self.0))
    }
}

impl<'de> Deserialize<'de> for FracExp {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::String(s) => s.parse().map_err(serde::de::Error::custom),
            serde_json::Value::Number(n) => n
                .as_i64()
                .map(FracExp::int)
                .ok_or_else(|| serde::de::Error::custom("exponent must be an integer or \"p/q\"")),
            _ => Err(serde::de::Error::custom("exponent must be an integer or \"p/q\"")),
        }
    }
}

/// Opaque name of an irreducible birational class.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Symbol(pub String);

impl Symbol {
    pub fn new(s: impl Into<String>) -> Self {
        Symbol(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

/// A product of class symbols with its total dimension.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ClassLabel {
    symbols: Vec<Symbol>,
    dim: u32,
}

impl ClassLabel {
    /// The class of a point.
    pub fn point() -> Self {
        ClassLabel::default()
    }

    pub fn single(sym: impl Into<String>, dim: u32) -> Self {
        ClassLabel {
            symbols: vec![Symbol::new(sym)],
            dim,
        }
    }

    pub fn from_parts(mut symbols: Vec<Symbol>, dim: u32) -> Result<Self> {
        if symbols.is_empty() && dim != 0 {
            return Err(Error::Parse("the empty label has dimension 0".into()));
        }
        symbols.sort();
        Ok(ClassLabel { symbols, dim })
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn is_point(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn product(&self, other: &ClassLabel) -> ClassLabel {
        let mut symbols = self.symbols.clone();
        symbols.extend(other.symbols.iter().cloned());
        symbols.sort();
        ClassLabel {
            symbols,
            dim: self.dim + other.dim,
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.symbols.len() == 1 {
            return write!(f, "{{{}:{}}}", self.symbols[0].0, self.dim);
        }
        // composite labels print each factor; the total dim goes on the last one
        for (k, s) in self.symbols.iter().enumerate() {
            if k + 1 == self.symbols.len() {
                let rest = self.dim;
                write!(f, "{{{}:{}}}", s.0, rest)?;
            } else {
                write!(f, "{{{}:0}}", s.0)?;
            }
        }
        Ok(())
    }
}

/// A ring homomorphism out of the label ring.
#[derive(Clone, Debug)]
pub enum Specialization {
    /// `{Z} -> L^(dim Z)`, `L -> L`.
    Rho,
    /// Every symbol and `L` go to 1.
    Count,
    /// Explicit images of symbols (scalar-label elements); `L` is fixed.
    Custom(BTreeMap<Symbol, BirElement>),
}

/// Finite sum of `coeff * label * L^exp`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BirElement {
    terms: BTreeMap<(ClassLabel, FracExp), i64>,
}

impl BirElement {
    pub fn zero() -> Self {
        BirElement::default()
    }

    pub fn one() -> Self {
        BirElement::scalar(1)
    }

    pub fn scalar(c: i64) -> Self {
        BirElement::monomial(ClassLabel::point(), FracExp::zero(), c)
    }

    /// `L`.
    pub fn l() -> Self {
        BirElement::lpow(FracExp::int(1))
    }

    pub fn lpow(e: impl Into<FracExp>) -> Self {
        BirElement::monomial(ClassLabel::point(), e.into(), 1)
    }

    /// The class `{sym}` of an irreducible variety of dimension `dim`.
    pub fn class(sym: impl Into<String>, dim: u32) -> Self {
        BirElement::monomial(ClassLabel::single(sym, dim), FracExp::zero(), 1)
    }

    pub fn monomial(label: ClassLabel, exp: FracExp, coeff: i64) -> Self {
        let mut terms = BTreeMap::new();
        if coeff != 0 {
            terms.insert((label, exp), coeff);
        }
        BirElement { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ClassLabel, FracExp, i64)> {
        self.terms.iter().map(|((l, e), c)| (l, *e, *c))
    }

    fn add_term(&mut self, label: ClassLabel, exp: FracExp, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let key = (label, exp);
        let slot = self.terms.entry(key.clone()).or_insert(0);
        *slot += coeff;
        if *slot == 0 {
            self.terms.remove(&key);
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return BirElement::zero();
        }
        BirElement {
            terms: self.terms.iter().map(|(key, c)| (key.clone(), c * k)).collect(),
        }
    }

    /// Multiply by `L^e`.
    pub fn shift_l(&self, e: FracExp) -> Self {
        BirElement {
            terms: self
                .terms
                .iter()
                .map(|((l, x), c)| ((l.clone(), *x + e), *c))
                .collect(),
        }
    }

    /// True when every label is the point class.
    pub fn is_scalar(&self) -> bool {
        self.terms.keys().all(|(l, _)| l.is_point())
    }

    /// Maximal dimension `dim(label) + exp` over the terms.
    pub fn max_weight(&self) -> Option<FracExp> {
        self.terms
            .keys()
            .map(|(l, e)| *e + FracExp::int(l.dim as i64))
            .max()
    }

    pub fn min_exp(&self) -> Option<FracExp> {
        self.terms.keys().map(|(_, e)| *e).min()
    }

    /// Least common multiple of the exponent denominators.
    pub fn exp_denominator(&self) -> i64 {
        self.terms.keys().fold(1, |acc, (_, e)| acc.lcm(&e.denom()))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = BirElement::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn specialize(&self, hom: &Specialization) -> Result<BirElement> {
        let mut out = BirElement::zero();
        for ((label, exp), c) in &self.terms {
            match hom {
                Specialization::Rho => {
                    out.add_term(ClassLabel::point(), *exp + FracExp::int(label.dim as i64), *c)
                }
                Specialization::Count => out.add_term(ClassLabel::point(), FracExp::zero(), *c),
                Specialization::Custom(map) => {
                    let mut img = BirElement::lpow(*exp).scale(*c);
                    for s in &label.symbols {
                        let v = map
                            .get(s)
                            .ok_or_else(|| Error::UnknownSymbol(s.0.clone()))?;
                        if !v.is_scalar() {
                            return Err(Error::NonScalarLabel(v.to_string()));
                        }
                        img = &img * v;
                    }
                    out += &img;
                }
            }
        }
        Ok(out)
    }

    pub fn rho(&self) -> BirElement {
        self.specialize(&Specialization::Rho)
            .expect("rho is defined on every label")
    }

    /// Image under the counting homomorphism, as an integer.
    pub fn count(&self) -> i64 {
        self.terms.values().sum()
    }

    /// Constant term under `L -> 0`; defined on scalar elements with
    /// nonnegative exponents.
    pub fn phi_eval(&self) -> Result<i64> {
        let mut out = 0;
        for ((label, exp), c) in &self.terms {
            if !label.is_point() {
                return Err(Error::NonScalarLabel(label.to_string()));
            }
            if exp.is_negative() {
                return Err(Error::NegativeExponent(exp.to_string()));
            }
            if exp.is_zero() {
                out += c;
            }
        }
        Ok(out)
    }
}

impl AddAssign<&BirElement> for BirElement {
    fn add_assign(&mut self, rhs: &BirElement) {
        for ((l, e), c) in &rhs.terms {
            self.add_term(l.clone(), *e, *c);
        }
    }
}

impl AddAssign for BirElement {
    fn add_assign(&mut self, rhs: BirElement) {
        *self += &rhs;
    }
}

impl Add<&BirElement> for &BirElement {
    type Output = BirElement;
    fn add(self, rhs: &BirElement) -> BirElement {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&BirElement> for &BirElement {
    type Output = BirElement;
    fn sub(self, rhs: &BirElement) -> BirElement {
        let mut out = self.clone();
        for ((l, e), c) in &rhs.terms {
            out.add_term(l.clone(), *e, -c);
        }
        out
    }
}

impl Neg for &BirElement {
    type Output = BirElement;
    fn neg(self) -> BirElement {
        self.scale(-1)
    }
}

impl Mul<&BirElement> for &BirElement {
    type Output = BirElement;
    fn mul(self, rhs: &BirElement) -> BirElement {
        let mut out = BirElement::zero();
        for ((la, ea), ca) in &self.terms {
            for ((lb, eb), cb) in &rhs.terms {
                out.add_term(la.product(lb), *ea + *eb, ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<BirElement> for BirElement {
            type Output = BirElement;
            fn $m(self, rhs: BirElement) -> BirElement {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&BirElement> for BirElement {
            type Output = BirElement;
            fn $m(self, rhs: &BirElement) -> BirElement {
                (&self).$m(rhs)
            }
        }
        impl $tr<BirElement> for &BirElement {
            type Output = BirElement;
            fn $m(self, rhs: BirElement) -> BirElement {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for BirElement {
    type Output = BirElement;
    fn neg(self) -> BirElement {
        self.scale(-1)
    }
}

impl Zero for BirElement {
    fn zero() -> Self {
        BirElement::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for BirElement {
    fn one() -> Self {
        BirElement::one()
    }
}

impl From<i64> for BirElement {
    fn from(c: i64) -> Self {
        BirElement::scalar(c)
    }
}

impl fmt::Display for BirElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, ((label, exp), c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if k == 0 {
                if *c < 0 {
                    write!(f, "-")?;
                }
            } else if *c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !label.is_point() {
                factors.push(label.to_string());
            }
            if !exp.is_zero() {
                if *exp == FracExp::int(1) {
                    factors.push("L".into());
                } else if exp.is_integer() && !exp.is_negative() {
                    factors.push(format!("L^{exp}"));
                } else {
                    factors.push(format!("L^({exp})"));
                }
            }
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == 1 {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{mag}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl FromStr for BirElement {
    type Err = Error;

    /// Parses the `Display` syntax, e.g. `{H:1}*L^2 - 3*L^(1/6) + 2`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse(format!("{msg} in `{s}`"));
        let src: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        if src.is_empty() {
            return Err(bad("empty expression"));
        }
        let mut out = BirElement::zero();
        let mut i = 0;
        while i < src.len() {
            let mut sign = 1;
            if src[i] == '+' || src[i] == '-' {
                if src[i] == '-' {
                    sign = -1;
                }
                i += 1;
            } else if i > 0 {
                return Err(bad("expected + or -"));
            }
            let mut coeff: i64 = 1;
            let mut syms = Vec::new();
            let mut dim = 0u32;
            let mut exp = FracExp::zero();
            let mut seen = false;
            loop {
                if i >= src.len() || src[i] == '+' || src[i] == '-' {
                    break;
                }
                if src[i] == '*' {
                    i += 1;
                    continue;
                }
                seen = true;
                if src[i].is_ascii_digit() {
                    let st = i;
                    while i < src.len() && src[i].is_ascii_digit() {
                        i += 1;
                    }
                    let n: i64 = src[st..i].iter().collect::<String>().parse().map_err(|_| bad("bad integer"))?;
                    coeff *= n;
                } else if src[i] == '{' {
                    let st = i + 1;
                    while i < src.len() && src[i] != '}' {
                        i += 1;
                    }
                    if i >= src.len() {
                        return Err(bad("unclosed brace"));
                    }
                    let body: String = src[st..i].iter().collect();
                    i += 1;
                    let (name, d) = body.split_once(':').ok_or_else(|| bad("class needs `name:dim`"))?;
                    let d: u32 = d.parse().map_err(|_| bad("bad class dimension"))?;
                    if name.is_empty() {
                        return Err(bad("empty class name"));
                    }
                    syms.push(Symbol::new(name));
                    dim += d;
                } else if src[i] == 'L' {
                    i += 1;
                    if i < src.len() && src[i] == '^' {
                        i += 1;
                        let (txt, next) = if i < src.len() && src[i] == '(' {
                            let st = i + 1;
                            while i < src.len() && src[i] != ')' {
                                i += 1;
                            }
                            if i >= src.len() {
                                return Err(bad("unclosed parenthesis"));
                            }
                            (src[st..i].iter().collect::<String>(), i + 1)
                        } else {
                            let st = i;
                            if i < src.len() && src[i] == '-' {
                                i += 1;
                            }
                            while i < src.len() && (src[i].is_ascii_digit() || src[i] == '/') {
                                i += 1;
                            }
                            (src[st..i].iter().collect::<String>(), i)
                        };
                        i = next;
                        exp = exp + txt.parse::<FracExp>()?;
                    } else {
                        exp = exp + FracExp::int(1);
                    }
                } else {
                    return Err(bad("unexpected character"));
                }
            }
            if !seen {
                return Err(bad("empty term"));
            }
            let label = ClassLabel::from_parts(syms, dim)?;
            out.add_term(label, exp, sign * coeff);
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    symbols: Vec<Symbol>,
    dim: u32,
    exp: FracExp,
    coeff: i64,
}

impl Serialize for BirElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let list: Vec<TermJson> = self
            .terms
            .iter()
            .map(|((l, e), c)| TermJson {
                symbols: l.symbols.clone(),
                dim: l.dim,
                exp: *e,
                coeff: *c,
            })
            .collect();
        list.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BirElement {
    /// Accepts the canonical term list, a bare integer, or the text syntax.
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Terms(Vec<TermJson>),
            Int(i64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Terms(list) => {
                let mut out = BirElement::zero();
                for t in list {
                    let label = ClassLabel::from_parts(t.symbols, t.dim).map_err(serde::de::Error::custom)?;
                    out.add_term(label, t.exp, t.coeff);
                }
                Ok(out)
            }
            Repr::Int(c) => Ok(BirElement::scalar(c)),
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn h() -> BirElement {
        BirElement::class("H", 1)
    }

    #[test]
    fn monomial_exponents_add() {
        let x = &h() * &BirElement::lpow(2);
        let y = &x * &BirElement::lpow(-1);
        assert_eq!(y, &h() * &BirElement::l());
    }

    #[test]
    fn difference_of_squares() {
        let a = &h() + &BirElement::l();
        let b = &h() - &BirElement::l();
        let want = &(&h() * &h()) - &BirElement::lpow(2);
        assert_eq!(&a * &b, want);
        assert_eq!((&h() * &h()).terms().next().unwrap().0.dim(), 2);
    }

    #[test]
    fn rho_sends_class_to_its_dimension() {
        // {H} of dim n-2 with n = 3 times L goes to L^(n-1)
        let x = &h() * &BirElement::l();
        assert_eq!(x.rho(), BirElement::lpow(2));
        assert_eq!(BirElement::lpow(-3).rho(), BirElement::lpow(-3));
    }

    #[test]
    fn count_of_alternating_sum() {
        let e1 = BirElement::class("E1", 1);
        let e12 = BirElement::class("E12", 0);
        let x = -(&(&e1 * &BirElement::l()) - &(&e12 * &BirElement::lpow(2)));
        assert_eq!(x.count(), 0);
    }

    #[test]
    fn custom_specialization() {
        let mut map = BTreeMap::new();
        map.insert(Symbol::new("H"), &BirElement::l() + &BirElement::one());
        let x = &h() * &BirElement::l();
        let y = x.specialize(&Specialization::Custom(map.clone())).unwrap();
        assert_eq!(y, &BirElement::lpow(2) + &BirElement::l());
        let z = BirElement::class("G", 1);
        assert!(matches!(
            z.specialize(&Specialization::Custom(map)),
            Err(Error::UnknownSymbol(s)) if s == "G"
        ));
    }

    #[test]
    fn phi_takes_constant_term() {
        let x = &BirElement::scalar(3) + &BirElement::l().scale(2);
        assert_eq!(x.phi_eval().unwrap(), 3);
        assert_eq!(BirElement::lpow(FracExp::new(1, 6)).phi_eval().unwrap(), 0);
        assert_eq!(BirElement::scalar(1 - 4).phi_eval().unwrap(), -3);
        assert!(matches!(BirElement::lpow(-1).phi_eval(), Err(Error::NegativeExponent(_))));
        assert!(matches!(h().phi_eval(), Err(Error::NonScalarLabel(_))));
    }

    #[test]
    fn text_round_trip() {
        let x = &(&(&h() * &BirElement::lpow(2)) - &BirElement::lpow(FracExp::new(1, 6)).scale(3))
            + &BirElement::scalar(2);
        let s = x.to_string();
        assert_eq!(s.parse::<BirElement>().unwrap(), x);
        assert_eq!("L^-2".parse::<BirElement>().unwrap(), BirElement::lpow(-2));
        assert_eq!("-L".parse::<BirElement>().unwrap(), -BirElement::l());
        assert_eq!("0".parse::<BirElement>().unwrap(), BirElement::zero());
    }

    #[test]
    fn json_round_trip_is_canonical() {
        let x = &(&h() * &BirElement::lpow(FracExp::new(-1, 2))) + &BirElement::scalar(4);
        let js = serde_json::to_string(&x).unwrap();
        assert_eq!(
            js,
            r#"[{"symbols":[],"dim":0,"exp":"0/1","coeff":4},{"symbols":["H"],"dim":1,"exp":"-1/2","coeff":1}]"#
        );
        let back: BirElement = serde_json::from_str(&js).unwrap();
        assert_eq!(back, x);
        let from_text: BirElement = serde_json::from_str(r#""{H:1}*L^(-1/2) + 4""#).unwrap();
        assert_eq!(from_text, x);
    }

    pub(crate) fn arb_element() -> impl Strategy<Value = BirElement> {
        let sym = prop_oneof![Just(("A", 1u32)), Just(("B", 2u32)), Just(("C", 0u32))];
        let term = (
            proptest::option::of(sym),
            -6i64..6,
            1i64..4,
            -4i64..5,
        )
            .prop_map(|(s, p, q, c)| {
                let label = match s {
                    Some((n, d)) => ClassLabel::single(n, d),
                    None => ClassLabel::point(),
                };
                BirElement::monomial(label, FracExp::new(p, q), c)
            });
        proptest::collection::vec(term, 0..5).prop_map(|ts| {
            ts.into_iter().fold(BirElement::zero(), |acc, t| &acc + &t)
        })
    }

    fn arb_poly() -> impl Strategy<Value = BirElement> {
        proptest::collection::vec((0i64..4, 1i64..4, -4i64..5), 0..5).prop_map(|ts| {
            ts.into_iter().fold(BirElement::zero(), |acc, (p, q, c)| {
                &acc + &BirElement::lpow(FracExp::new(p, q)).scale(c)
            })
        })
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_element(), b in arb_element(), c in arb_element()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &BirElement::one(), a.clone());
            prop_assert!((&a - &a).is_zero());
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        }

        #[test]
        fn rho_and_count_are_homomorphisms(a in arb_element(), b in arb_element()) {
            prop_assert_eq!((&a * &b).rho(), &a.rho() * &b.rho());
            prop_assert_eq!((&a + &b).rho(), &a.rho() + &b.rho());
            prop_assert_eq!((&a * &b).count(), a.count() * b.count());
            prop_assert_eq!((&a + &b).count(), a.count() + b.count());
        }

        #[test]
        fn phi_is_multiplicative(a in arb_poly(), b in arb_poly()) {
            prop_assert_eq!((&a * &b).phi_eval().unwrap(), a.phi_eval().unwrap() * b.phi_eval().unwrap());
        }

        #[test]
        fn text_and_json_round_trip(a in arb_element()) {
            prop_assert_eq!(a.to_string().parse::<BirElement>().unwrap(), a.clone());
            let js = serde_json::to_string(&a).unwrap();
            prop_assert_eq!(serde_json::from_str::<BirElement>(&js).unwrap(), a);
        }
    }
}
