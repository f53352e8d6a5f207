//! Normalised residues at candidate poles, decided exactly in `Z[U, U^-1]`
//! with `U = L^(1/q)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::dlt::DltCurveGraph;
use crate::complex::{VertexId, VertexKind};
use crate::error::{Error, Result};
use crate::ratfunc::Pole;

type Laurent = BTreeMap<i64, BigInt>;

fn l_mul(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = Laurent::new();
    for (i, x) in a {
        for (j, y) in b {
            *out.entry(i + j).or_insert_with(BigInt::zero) += x * y;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn l_add(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = a.clone();
    for (i, y) in b {
        *out.entry(*i).or_insert_with(BigInt::zero) += y;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn l_const(c: i64) -> Laurent {
    let mut out = Laurent::new();
    if c != 0 {
        out.insert(0, BigInt::from(c));
    }
    out
}

/// A fraction of Laurent polynomials in `U = L^(1/q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UFraction {
    q: i64,
    num: Laurent,
    den: Laurent,
}

impl UFraction {
    pub fn constant(q: i64, c: Ratio<i64>) -> Self {
        UFraction {
            q,
            num: l_const(*c.numer()),
            den: l_const(*c.denom()),
        }
    }

    /// `1/(L^alpha - 1)`; `alpha` must be a nonzero multiple of `1/q`.
    pub fn geometric_inverse(q: i64, alpha: Ratio<i64>) -> Self {
        let k = alpha * q;
        debug_assert!(k.is_integer() && !k.is_zero());
        let mut den = l_const(-1);
        den.insert(k.to_integer(), BigInt::one());
        UFraction { q, num: l_const(1), den }
    }

    /// `L^e`.
    pub fn lpow(q: i64, e: Ratio<i64>) -> Self {
        let mut num = Laurent::new();
        num.insert((e * q).to_integer(), BigInt::one());
        UFraction { q, num, den: l_const(1) }
    }

    pub fn add(&self, other: &UFraction) -> UFraction {
        UFraction {
            q: self.q,
            num: l_add(&l_mul(&self.num, &other.den), &l_mul(&other.num, &self.den)),
            den: l_mul(&self.den, &other.den),
        }
    }

    pub fn mul(&self, other: &UFraction) -> UFraction {
        UFraction {
            q: self.q,
            num: l_mul(&self.num, &other.num),
            den: l_mul(&self.den, &other.den),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    /// Value under `L -> 0`; `None` when it blows up.
    pub fn phi(&self) -> Option<BigRational> {
        let (Some((&dn, cn)), Some((&dd, cd))) = (self.num.iter().next(), self.den.iter().next()) else {
            return Some(BigRational::zero());
        };
        match dn.cmp(&dd) {
            std::cmp::Ordering::Greater => Some(BigRational::zero()),
            std::cmp::Ordering::Equal => Some(BigRational::new(cn.clone(), cd.clone())),
            std::cmp::Ordering::Less => None,
        }
    }

    fn poly_text(&self, p: &Laurent) -> String {
        if p.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (e, c)) in p.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let power = match Ratio::new(*e, self.q) {
                r if r.is_zero() => String::new(),
                r if r.is_one() => "L".into(),
                r if r.is_integer() => format!("L^{r}"),
                r => format!("L^({r})"),
            };
            match (power.is_empty(), mag.is_one()) {
                (true, _) => s.push_str(&mag.to_string()),
                (false, true) => s.push_str(&power),
                (false, false) => s.push_str(&format!("{mag}*{power}")),
            }
        }
        s
    }
}

impl fmt::Display for UFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "({}) / ({})", self.poly_text(&self.num), self.poly_text(&self.den))
    }
}

impl Serialize for UFraction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_string().serialize(s)
    }
}

/// Which branch of the case analysis a component falls in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResidueCase {
    /// `(r, t) = (2, 0)`: the contribution vanishes.
    TwoZero,
    /// `r = 1`, `alpha_1 > 0`.
    SinglePositive,
    /// `r > 1`, all `alpha_i > 0`.
    AllPositive,
    /// `r = 2`, `alpha_1 < 0`.
    TwoWithNegative,
    /// `r > 2`, some `alpha_i < 0`.
    ManyWithNegative,
    /// A branch of the strict transform.
    Strict,
    /// A neighbour has the same ratio: order two at the lct.
    LctOrderTwo,
}

fn opt_big<S: Serializer>(v: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    v.as_ref().map(|r| r.to_string()).serialize(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueContribution {
    pub vertex: VertexId,
    pub r: usize,
    pub t: u32,
    pub alphas: Vec<String>,
    pub case: ResidueCase,
    pub value: Option<UFraction>,
    /// What `L -> 0` gives for the quantity the case looks at.
    #[serde(serialize_with = "opt_big")]
    pub phi: Option<BigRational>,
    pub phi_of: &'static str,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PoleCertificate {
    pub pole: Pole,
    pub contributions: Vec<ResidueContribution>,
    pub total: Option<UFraction>,
    pub nonzero: bool,
    pub lct_order_two: bool,
}

impl PoleCertificate {
    pub fn certified(&self) -> bool {
        self.nonzero || self.lct_order_two
    }
}

impl DltCurveGraph {
    /// Common denominator of the alphas at the given components, so that
    /// each `L^alpha` is a power of `U`.
    fn exponent_denominator(&self, ids: &[VertexId]) -> Result<i64> {
        let c = self.complex();
        let mut q = 1i64;
        for v in ids {
            let Some(data) = c.vertex(*v) else { continue };
            let ratio = data.ratio();
            for w in self.neighbours(*v) {
                let d = c.vertex(w).expect("neighbour exists");
                let den = *(d.nu - ratio * d.n).denom();
                let g = q.gcd(&den);
                q = (q / g).checked_mul(den).ok_or(Error::Overflow("residue exponent denominator"))?;
            }
        }
        Ok(q)
    }

    fn residue_at(&self, v: VertexId, q: i64) -> Result<ResidueContribution> {
        let c = self.complex();
        let data = c.vertex(v).ok_or_else(|| Error::NoSuchComponent {
            stratum: format!("{{{v}}}"),
            index: 0,
        })?;
        let ratio = data.ratio();
        let nbrs = self.neighbours(v);
        let alphas: Vec<Ratio<i64>> = nbrs
            .iter()
            .map(|w| {
                let d = c.vertex(*w).expect("neighbour exists");
                d.nu - ratio * d.n
            })
            .collect();
        let (r, t) = (nbrs.len(), self.t(v));
        let texts = alphas.iter().map(|a| a.to_string()).collect();
        let unsupported = |why: &str| {
            Err(Error::UnsupportedConfiguration(format!(
                "component {v} with (r, t) = ({r}, {t}): {why}"
            )))
        };
        let mut out = ResidueContribution {
            vertex: v,
            r,
            t,
            alphas: texts,
            case: ResidueCase::Strict,
            value: None,
            phi: None,
            phi_of: "R",
        };
        if alphas.iter().any(|a| a.is_zero()) {
            out.case = ResidueCase::LctOrderTwo;
            return Ok(out);
        }
        if data.kind == VertexKind::Strict {
            if r != 1 {
                return unsupported("a branch must meet exactly one exceptional curve");
            }
            let value = UFraction::geometric_inverse(q, alphas[0]);
            out.phi = value.phi();
            out.value = Some(value);
            return Ok(out);
        }
        let mut value = UFraction::constant(q, Ratio::from_integer(1));
        for a in &alphas {
            value = value.add(&UFraction::geometric_inverse(q, *a));
        }
        value = value.mul(&UFraction::constant(q, Ratio::new(1, data.n)));
        let negative = alphas.iter().filter(|a| a.is_negative()).count();
        out.case = match (r, t) {
            (0, _) | (1, 0) | (1, 1) => return unsupported("cannot occur on a dlt model"),
            (2, 0) => ResidueCase::TwoZero,
            _ if negative == 0 && r == 1 => ResidueCase::SinglePositive,
            _ if negative == 0 => ResidueCase::AllPositive,
            _ if negative > 1 => return unsupported("more than one negative alpha"),
            _ if r == 1 => return unsupported("a single neighbour with negative alpha"),
            _ if r == 2 => ResidueCase::TwoWithNegative,
            _ => ResidueCase::ManyWithNegative,
        };
        if out.case == ResidueCase::TwoWithNegative {
            let a1 = *alphas.iter().find(|a| a.is_negative()).expect("one negative");
            out.phi = value.mul(&UFraction::lpow(q, a1)).phi();
            out.phi_of = "R / L^(-alpha_1)";
        } else {
            out.phi = value.phi();
        }
        out.value = Some(value);
        Ok(out)
    }

    /// Residue data of one component at its own candidate pole.
    pub fn residue_certificate(&self, v: VertexId) -> Result<ResidueContribution> {
        self.residue_at(v, self.exponent_denominator(&[v])?)
    }

    /// One certificate per candidate pole: residues of all components with
    /// that ratio, summed.
    pub fn residue_certificates(&self) -> Result<Vec<PoleCertificate>> {
        if let Some(nc) = self.normal_crossing() {
            return Err(Error::UnsupportedConfiguration(format!("{nc:?} germ is excluded")));
        }
        let mut groups: BTreeMap<Ratio<i64>, Vec<VertexId>> = BTreeMap::new();
        for v in self.complex().vertices() {
            groups.entry(v.ratio()).or_default().push(v.id);
        }
        let mut out = Vec::new();
        for (ratio, ids) in groups.into_iter().rev() {
            let q = self.exponent_denominator(&ids)?;
            let contributions = ids
                .iter()
                .map(|v| self.residue_at(*v, q))
                .collect::<Result<Vec<_>>>()?;
            let lct_order_two = contributions.iter().any(|c| c.case == ResidueCase::LctOrderTwo);
            let total = contributions
                .iter()
                .filter_map(|c| c.value.clone())
                .reduce(|a, b| a.add(&b));
            let nonzero = total.as_ref().is_some_and(|t| !t.is_zero());
            out.push(PoleCertificate {
                pole: Pole::new(-ratio, if lct_order_two { 2 } else { 1 }),
                contributions,
                total,
                nonzero,
                lct_order_two,
            });
        }
        out.sort_by(|a, b| b.pole.s0.cmp(&a.pole.s0));
        Ok(out)
    }

    /// Certified poles equal the poles of the local zeta function.
    pub fn certificates_match_poles(&self) -> Result<bool> {
        let certified: Vec<Pole> = self
            .residue_certificates()?
            .into_iter()
            .filter(PoleCertificate::certified)
            .map(|c| c.pole)
            .collect();
        Ok(certified == self.zeta_bir_local().poles()?)
    }
}

#[cfg(test)]
mod tests {
    use super::super::bundled_germs;
    use super::super::tests::cusp;
    use super::*;

    fn big(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn cusp_exceptional_residue() {
        let dg = cusp().contract_twigs().unwrap();
        let c = dg.residue_certificate(VertexId(3)).unwrap();
        assert_eq!(c.case, ResidueCase::SinglePositive);
        assert_eq!(c.alphas, vec!["1/6"]);
        // U/(6(U - 1)) with U = L^(1/6)
        let want = UFraction::lpow(6, Ratio::new(1, 6))
            .mul(&UFraction::geometric_inverse(6, Ratio::new(1, 6)))
            .mul(&UFraction::constant(6, Ratio::new(1, 6)));
        let diff = c.value.unwrap().add(&want.mul(&UFraction::constant(6, Ratio::from_integer(-1))));
        assert!(diff.is_zero());
    }

    #[test]
    fn cusp_branch_residue() {
        let dg = cusp().contract_twigs().unwrap();
        let c = dg.residue_certificate(VertexId(4)).unwrap();
        assert_eq!(c.case, ResidueCase::Strict);
        assert_eq!(c.alphas, vec!["-1"]);
        assert_eq!(c.value.unwrap().to_string(), "(1) / (-1 + L^-1)");
    }

    #[test]
    fn cusp_certificates() {
        let dg = cusp().contract_twigs().unwrap();
        let certs = dg.residue_certificates().unwrap();
        assert_eq!(certs.len(), 2);
        assert!(certs.iter().all(|c| c.nonzero));
        assert!(dg.certificates_match_poles().unwrap());
    }

    #[test]
    fn two_zero_vertex_has_zero_residue() {
        let dg = cusp().contract_twigs().unwrap().refine(7).unwrap();
        let c = dg.residue_certificate(VertexId(5)).unwrap();
        assert_eq!(c.case, ResidueCase::TwoZero);
        assert!(c.value.unwrap().is_zero());
        assert!(dg.certificates_match_poles().unwrap());
    }

    #[test]
    fn phi_values_follow_the_cases() {
        for (name, g) in bundled_germs() {
            if g.normal_crossing().is_some() {
                continue;
            }
            let dg = g.contract_twigs().unwrap();
            for v in dg.exceptional().map(|v| v.id).collect::<Vec<_>>() {
                let c = dg.residue_certificate(v).unwrap();
                let n = dg.complex().vertex(v).unwrap().n;
                match c.case {
                    ResidueCase::AllPositive => assert_eq!(c.phi, Some(big(1 - c.r as i64, n)), "{name}"),
                    ResidueCase::ManyWithNegative => assert_eq!(c.phi, Some(big(2 - c.r as i64, n)), "{name}"),
                    ResidueCase::TwoWithNegative => assert_eq!(c.phi, Some(big(1, n)), "{name}"),
                    _ => {}
                }
            }
            assert!(dg.certificates_match_poles().unwrap(), "{name}");
        }
    }
}
