//! Weighted dual complexes of dlt resolutions and the operations on them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Ratio;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::coeffring::{ratio_serde, BirElement, FracExp};
use crate::error::{Error, Result};
use crate::ratfunc::{DenFactor, LinearFactor, Pole, TopZeta, ZetaExpr, ZetaTerm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A set of vertices naming a stratum `E_I`.
pub type Face = BTreeSet<VertexId>;

pub fn face(ids: &[u32]) -> Face {
    ids.iter().map(|&i| VertexId(i)).collect()
}

fn face_text(f: &Face) -> String {
    let ids: Vec<String> = f.iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", ids.join(","))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Exceptional,
    Strict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexData {
    pub id: VertexId,
    #[serde(rename = "N")]
    pub n: i64,
    #[serde(with = "ratio_serde")]
    pub nu: Ratio<i64>,
    pub cls: BirElement,
    pub over_sigma: bool,
    pub kind: VertexKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub open_chi: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub open_cls: Option<BirElement>,
}

impl VertexData {
    pub fn new(id: u32, n: i64, nu: impl Into<Ratio<i64>>, cls: BirElement) -> Self {
        VertexData {
            id: VertexId(id),
            n,
            nu: nu.into(),
            cls,
            over_sigma: false,
            kind: VertexKind::Exceptional,
            open_chi: None,
            open_cls: None,
        }
    }

    pub fn over_sigma(mut self, flag: bool) -> Self {
        self.over_sigma = flag;
        self
    }

    pub fn strict(mut self) -> Self {
        self.kind = VertexKind::Strict;
        self
    }

    pub fn with_chi(mut self, chi: i64) -> Self {
        self.open_chi = Some(chi);
        self
    }

    pub fn with_open_cls(mut self, c: BirElement) -> Self {
        self.open_cls = Some(c);
        self
    }

    /// `nu / N`.
    pub fn ratio(&self) -> Ratio<i64> {
        self.nu / self.n
    }

    pub fn factor(&self) -> DenFactor {
        DenFactor::new(FracExp::from_ratio(self.nu), self.n).expect("validated vertex data")
    }

    fn linear(&self) -> LinearFactor {
        LinearFactor::new(self.n, self.nu)
    }
}

/// One irreducible component of a stratum `E_I`, `|I| >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumComponent {
    pub cls: BirElement,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub open_chi: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub open_cls: Option<BirElement>,
}

impl StratumComponent {
    pub fn new(cls: BirElement) -> Self {
        StratumComponent {
            cls,
            open_chi: None,
            open_cls: None,
        }
    }

    pub fn with_chi(mut self, chi: i64) -> Self {
        self.open_chi = Some(chi);
        self
    }

    pub fn with_open_cls(mut self, c: BirElement) -> Self {
        self.open_cls = Some(c);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedDualComplex {
    n: usize,
    vertices: BTreeMap<VertexId, VertexData>,
    cells: BTreeMap<Face, Vec<StratumComponent>>,
}

/// Result of the log canonical threshold check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LctReport {
    #[serde(with = "ratio_serde")]
    pub lct: Ratio<i64>,
    pub order: u32,
    pub poles: Vec<Pole>,
    /// `(-lct, order)` is among the poles.
    pub has_pole: bool,
    /// No pole lies to the right of `-lct`.
    pub maximal: bool,
}

impl LctReport {
    pub fn consistent(&self) -> bool {
        self.has_pole && self.maximal
    }
}

impl WeightedDualComplex {
    pub fn new(n: usize) -> Self {
        WeightedDualComplex {
            n,
            vertices: BTreeMap::new(),
            cells: BTreeMap::new(),
        }
    }

    /// Build and validate.
    pub fn from_parts(
        n: usize,
        vertices: Vec<VertexData>,
        cells: Vec<(Face, Vec<StratumComponent>)>,
    ) -> Result<Self> {
        let mut c = WeightedDualComplex::new(n);
        for v in vertices {
            if c.vertices.insert(v.id, v.clone()).is_some() {
                return Err(Error::MalformedComplex(format!("duplicate vertex id {}", v.id)));
            }
        }
        for (f, comps) in cells {
            c.cells.entry(f).or_default().extend(comps);
        }
        c.validate()?;
        Ok(c)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> impl Iterator<Item = &VertexData> {
        self.vertices.values()
    }

    pub fn vertex(&self, id: VertexId) -> Option<&VertexData> {
        self.vertices.get(&id)
    }

    pub fn cells(&self) -> &BTreeMap<Face, Vec<StratumComponent>> {
        &self.cells
    }

    pub fn edges(&self) -> impl Iterator<Item = (&Face, &Vec<StratumComponent>)> {
        self.cells.iter().filter(|(f, _)| f.len() == 2)
    }

    fn next_id(&self) -> VertexId {
        VertexId(self.vertices.keys().next_back().map_or(0, |v| v.0 + 1))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::MalformedComplex(m));
        for v in self.vertices.values() {
            if v.n < 1 {
                return bad(format!("vertex {} has N = {} < 1", v.id, v.n));
            }
            if !v.nu.is_positive() {
                return bad(format!("vertex {} has nu = {} <= 0", v.id, v.nu));
            }
            if v.cls.is_zero() {
                return bad(format!("vertex {} has zero class", v.id));
            }
            let top = FracExp::int(self.n as i64 - 1);
            for (label, e, _) in v.cls.terms() {
                if e + FracExp::int(label.dim() as i64) != top {
                    return bad(format!("vertex {} class {} is not of dimension {}", v.id, v.cls, top));
                }
            }
        }
        for (f, comps) in &self.cells {
            if f.len() < 2 {
                return bad(format!("cell {} has fewer than two vertices", face_text(f)));
            }
            if f.len() > self.n {
                return bad(format!("cell {} has more than n = {} vertices", face_text(f), self.n));
            }
            if comps.is_empty() {
                return bad(format!("cell {} has no components", face_text(f)));
            }
            if let Some(v) = f.iter().find(|v| !self.vertices.contains_key(v)) {
                return bad(format!("cell {} uses unknown vertex {}", face_text(f), v));
            }
            let cap = FracExp::int((self.n - f.len()) as i64);
            for comp in comps {
                if comp.cls.is_zero() {
                    return bad(format!("cell {} has a zero class", face_text(f)));
                }
                if comp.cls.max_weight().is_some_and(|w| w > cap) {
                    return bad(format!(
                        "cell {} class {} exceeds dimension {}",
                        face_text(f),
                        comp.cls,
                        cap
                    ));
                }
            }
            if f.len() > 2 {
                for drop in f {
                    let mut sub = f.clone();
                    sub.remove(drop);
                    if !self.cells.contains_key(&sub) {
                        return bad(format!(
                            "cell {} is present but its face {} is not",
                            face_text(f),
                            face_text(&sub)
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    fn in_sigma(&self, f: &Face) -> bool {
        f.iter().any(|v| self.vertices[v].over_sigma)
    }

    /// Every stratum with its classes, singletons included.
    fn strata(&self) -> Vec<(Face, Vec<(BirElement, Option<i64>, Option<BirElement>)>)> {
        let mut out = Vec::new();
        for v in self.vertices.values() {
            let mut f = Face::new();
            f.insert(v.id);
            out.push((f, vec![(v.cls.clone(), v.open_chi, v.open_cls.clone())]));
        }
        for (f, comps) in &self.cells {
            out.push((
                f.clone(),
                comps
                    .iter()
                    .map(|c| (c.cls.clone(), c.open_chi, c.open_cls.clone()))
                    .collect(),
            ));
        }
        out
    }

    fn factors(&self, f: &Face) -> Vec<DenFactor> {
        f.iter().map(|v| self.vertices[v].factor()).collect()
    }

    /// `sum_I {E_I} prod_{i in I} L/(L^nu_i T^-N_i - 1)`; with `local`, only
    /// strata meeting the vertices over the distinguished subset.
    pub fn zeta_bir(&self, local: bool) -> ZetaExpr {
        let mut out = ZetaExpr::zero();
        for (f, comps) in self.strata() {
            if local && !self.in_sigma(&f) {
                continue;
            }
            let lk = BirElement::lpow(f.len() as i64);
            let den = self.factors(&f);
            for (cls, _, _) in comps {
                out.push(ZetaTerm::new(&cls * &lk, 0, den.clone()));
            }
        }
        out
    }

    /// `sum_I [E_I^o] prod (L - 1)/(L^nu_i T^-N_i - 1)`, in the same formal ring.
    pub fn zeta_motivic(&self) -> Result<ZetaExpr> {
        let lm1 = &BirElement::l() - &BirElement::one();
        let mut out = ZetaExpr::zero();
        for (f, comps) in self.strata() {
            let den = self.factors(&f);
            let scale = lm1.pow(f.len() as u32);
            for (k, (_, _, open)) in comps.into_iter().enumerate() {
                let open = open.ok_or_else(|| {
                    Error::MissingOpenClass(format!("stratum {} component {}", face_text(&f), k))
                })?;
                out.push(ZetaTerm::new(&open * &scale, 0, den.clone()));
            }
        }
        Ok(out)
    }

    /// `sum_I chi(E_I^o) prod 1/(N_i s + nu_i)`.
    pub fn zeta_topological(&self, local: bool) -> Result<TopZeta> {
        let mut out = TopZeta::zero();
        for (f, comps) in self.strata() {
            if local && !self.in_sigma(&f) {
                continue;
            }
            let den: Vec<LinearFactor> = f.iter().map(|v| self.vertices[v].linear()).collect();
            for (k, (_, chi, _)) in comps.into_iter().enumerate() {
                let chi = chi.ok_or_else(|| {
                    Error::MissingChi(format!("stratum {} component {}", face_text(&f), k))
                })?;
                out.push(chi, den.clone());
            }
        }
        Ok(out)
    }

    /// Blow up component `index` of `E_K`, `|K| >= 2`; the dual complex
    /// changes by a stellar subdivision of that cell.
    pub fn stellar_subdivide(&self, k: &Face, index: usize, over_sigma: Option<bool>) -> Result<Self> {
        let (out, _) = self.stellar_subdivide_with_id(k, index, over_sigma)?;
        Ok(out)
    }

    /// As `stellar_subdivide`, also returning the new vertex.
    pub fn stellar_subdivide_with_id(
        &self,
        k: &Face,
        index: usize,
        over_sigma: Option<bool>,
    ) -> Result<(Self, VertexId)> {
        let missing = || Error::NoSuchComponent {
            stratum: face_text(k),
            index,
        };
        if k.len() < 2 {
            return Err(missing());
        }
        let comps = self.cells.get(k).ok_or_else(missing)?;
        let z = comps.get(index).ok_or_else(missing)?.clone();
        let above: Vec<Face> = self
            .cells
            .keys()
            .filter(|f| f.len() > k.len() && f.is_superset(k))
            .cloned()
            .collect();
        if comps.len() > 1 && !above.is_empty() {
            return Err(Error::AmbiguousIncidence(face_text(k)));
        }

        let v0 = self.next_id();
        let n0: i64 = k.iter().map(|v| self.vertices[v].n).sum();
        let nu0: Ratio<i64> = k.iter().map(|v| self.vertices[v].nu).sum();
        let flag = over_sigma.unwrap_or_else(|| self.in_sigma(k));

        // (I, class of a top cell of sigma_I containing tau_Z)
        let mut tops: Vec<(Face, BirElement)> = vec![(k.clone(), z.cls.clone())];
        for f in &above {
            for c in &self.cells[f] {
                tops.push((f.clone(), c.cls.clone()));
            }
        }

        let mut out = self.clone();
        let list = out.cells.get_mut(k).unwrap();
        list.remove(index);
        if list.is_empty() {
            out.cells.remove(k);
        }
        for f in &above {
            out.cells.remove(f);
        }

        let kv: Vec<VertexId> = k.iter().copied().collect();
        let mut vertex_cls = BirElement::zero();
        for (i, cls) in &tops {
            let rest: Face = i.difference(k).copied().collect();
            // proper subsets L of K
            for mask in 0u32..(1u32 << kv.len()) - 1 {
                let l: Face = kv
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| mask >> b & 1 == 1)
                    .map(|(_, v)| *v)
                    .collect();
                let weight = (kv.len() - l.len() - 1) as i64;
                let c = cls * &BirElement::lpow(weight);
                let mut j: Face = rest.union(&l).copied().collect();
                j.insert(v0);
                if j.len() == 1 {
                    vertex_cls += &c;
                } else {
                    out.cells.entry(j).or_default().push(StratumComponent::new(c));
                }
            }
        }
        out.vertices.insert(
            v0,
            VertexData {
                id: v0,
                n: n0,
                nu: nu0,
                cls: vertex_cls,
                over_sigma: flag,
                kind: VertexKind::Exceptional,
                open_chi: None,
                open_cls: None,
            },
        );
        out.validate()?;
        Ok((out, v0))
    }

    /// Blow up a point on a surface complex: a general point of `E_k` when
    /// `|K| = 1`, or a point of `E_K` when `|K| = 2`.
    pub fn point_blowup_surface(&self, k: &Face, index: usize, over_sigma: Option<bool>) -> Result<Self> {
        Ok(self.point_blowup_surface_with_id(k, index, over_sigma)?.0)
    }

    pub fn point_blowup_surface_with_id(
        &self,
        k: &Face,
        index: usize,
        over_sigma: Option<bool>,
    ) -> Result<(Self, VertexId)> {
        if self.n != 2 {
            return Err(Error::BadDimension(self.n));
        }
        match k.len() {
            1 => {
                let j = *k.iter().next().unwrap();
                let vj = self.vertices.get(&j).ok_or_else(|| Error::NoSuchComponent {
                    stratum: face_text(k),
                    index: 0,
                })?;
                let v0 = self.next_id();
                let mut out = self.clone();
                out.vertices.insert(
                    v0,
                    VertexData::new(v0.0, vj.n, vj.nu + 1, BirElement::l())
                        .over_sigma(over_sigma.unwrap_or(vj.over_sigma)),
                );
                let mut e = Face::new();
                e.insert(j);
                e.insert(v0);
                out.cells.insert(e, vec![StratumComponent::new(BirElement::one())]);
                out.validate()?;
                Ok((out, v0))
            }
            2 => self.stellar_subdivide_with_id(k, index, over_sigma),
            _ => Err(Error::BadParameters(format!(
                "surface point blow-up needs |K| in {{1, 2}}, got {}",
                k.len()
            ))),
        }
    }

    /// Subdivide edges until every edge has `N_i + N_j > m`.
    pub fn make_m_separating(&self, m: i64) -> Result<Self> {
        if self.n != 2 {
            return Err(Error::BadDimension(self.n));
        }
        let mut c = self.clone();
        loop {
            let hit = c
                .cells
                .keys()
                .find(|f| f.iter().map(|v| c.vertices[v].n).sum::<i64>() <= m)
                .cloned();
            match hit {
                Some(f) => c = c.stellar_subdivide(&f, 0, None)?,
                None => return Ok(c),
            }
        }
    }

    pub fn is_m_separating(&self, m: i64) -> bool {
        self.edges()
            .all(|(f, _)| f.iter().map(|v| self.vertices[v].n).sum::<i64>() > m)
    }

    /// `-lim_{T -> inf} zeta_bir`.
    pub fn nearby_cycles(&self, local: bool) -> BirElement {
        -self
            .zeta_bir(local)
            .limit_t_to_infinity()
            .expect("zeta terms carry no positive powers of T")
    }

    /// Euler characteristic of the dual complex, counting components.
    pub fn euler_char(&self) -> i64 {
        let mut chi = self.vertices.len() as i64;
        for (f, comps) in &self.cells {
            let sign = if f.len() % 2 == 0 { -1 } else { 1 };
            chi += sign * comps.len() as i64;
        }
        chi
    }

    fn neighbours(&self, v: VertexId) -> BTreeSet<VertexId> {
        self.cells
            .keys()
            .filter(|f| f.contains(&v))
            .flat_map(|f| f.iter().copied())
            .filter(|w| *w != v)
            .collect()
    }

    /// Log canonical threshold, expected order of the pole at `-lct`, and a
    /// check of both against the poles of the rational zeta function.
    pub fn lct_pole_order(&self, local: bool) -> Result<Option<LctReport>> {
        let relevant: Vec<&VertexData> = self
            .vertices
            .values()
            .filter(|v| {
                !local
                    || v.over_sigma
                    || self.neighbours(v.id).iter().any(|w| self.vertices[w].over_sigma)
            })
            .collect();
        let Some(lct) = relevant.iter().map(|v| v.ratio()).min() else {
            return Ok(None);
        };
        let mut order = 0u32;
        for (f, _) in self.strata() {
            if local && !self.in_sigma(&f) {
                continue;
            }
            if f.iter().all(|v| self.vertices[v].ratio() == lct) {
                order = order.max(f.len() as u32);
            }
        }
        let poles = self.zeta_bir(local).poles()?;
        let has_pole = poles.contains(&Pole::new(-lct, order));
        let maximal = poles.iter().all(|p| p.s0 <= -lct);
        Ok(Some(LctReport {
            lct,
            order,
            poles,
            has_pole,
            maximal,
        }))
    }

    /// Quasi-monomial divisorial valuations on the cells (vertices included)
    /// with `N <= max_n`: primitive positive weights `w` on a face `I` give
    /// `N = sum w_i N_i`, `nu = sum w_i nu_i` and class `{Z} L^(|I|-1)`.
    pub fn quasi_monomial_valuations(&self, max_n: i64) -> Vec<crate::truncation::DltValuation> {
        use crate::truncation::DltValuation;
        let mut out = Vec::new();
        for (f, comps) in self.strata() {
            let vs: Vec<&VertexData> = f.iter().map(|v| &self.vertices[v]).collect();
            let flag = self.in_sigma(&f);
            let lift = BirElement::lpow(f.len() as i64 - 1);
            let caps: Vec<i64> = vs.iter().map(|v| v.n).collect();
            for w in positive_weights(&caps, max_n) {
                if w.iter().fold(0i64, |g, &a| num_integer::gcd(g, a)) != 1 {
                    continue;
                }
                let n: i64 = w.iter().zip(&vs).map(|(a, v)| a * v.n).sum();
                let nu: Ratio<i64> = w.iter().zip(&vs).map(|(a, v)| v.nu * *a).sum();
                for (cls, _, _) in &comps {
                    out.push(DltValuation {
                        n,
                        nu,
                        cls: cls * &lift,
                        over_sigma: flag,
                    });
                }
            }
        }
        out
    }
}

/// All `w` in `Z_{>0}^k` with `sum w_i N_i <= max_n`.
fn positive_weights(ns: &[i64], max_n: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut w = Vec::with_capacity(ns.len());
    fn go(ns: &[i64], left: i64, w: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        let Some((&first, rest)) = ns.split_first() else {
            out.push(w.clone());
            return;
        };
        let reserve: i64 = rest.iter().sum();
        let mut a = 1;
        while a * first + reserve <= left {
            w.push(a);
            go(rest, left - a * first, w, out);
            w.pop();
            a += 1;
        }
    }
    go(ns, max_n, &mut w, &mut out);
    out
}

#[derive(Serialize, Deserialize)]
struct CellJson {
    #[serde(rename = "I")]
    ids: Vec<VertexId>,
    components: Vec<StratumComponent>,
}

#[derive(Serialize, Deserialize)]
struct ComplexJson {
    n: usize,
    vertices: Vec<VertexData>,
    #[serde(default)]
    cells: Vec<CellJson>,
}

impl Serialize for WeightedDualComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexJson {
            n: self.n,
            vertices: self.vertices.values().cloned().collect(),
            cells: self
                .cells
                .iter()
                .map(|(f, c)| CellJson {
                    ids: f.iter().copied().collect(),
                    components: c.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightedDualComplex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let js = ComplexJson::deserialize(d)?;
        WeightedDualComplex::from_parts(
            js.n,
            js.vertices,
            js.cells
                .into_iter()
                .map(|c| (c.ids.into_iter().collect(), c.components))
                .collect(),
        )
        .map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for WeightedDualComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "complex of dimension {}", self.n)?;
        for v in self.vertices.values() {
            writeln!(
                f,
                "  vertex {}: N = {}, nu = {}, class {}{}",
                v.id,
                v.n,
                v.nu,
                v.cls,
                if v.over_sigma { ", over sigma" } else { "" }
            )?;
        }
        for (k, comps) in &self.cells {
            let cs: Vec<String> = comps.iter().map(|c| c.cls.to_string()).collect();
            writeln!(f, "  cell {}: {}", face_text(k), cs.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::Specialization;
    use crate::ratfunc::den;

    fn l(k: i64) -> BirElement {
        BirElement::lpow(k)
    }

    fn r(p: i64, q: i64) -> Ratio<i64> {
        Ratio::new(p, q)
    }

    fn pt() -> StratumComponent {
        StratumComponent::new(BirElement::one())
    }

    /// E3 (N 6, nu 5) and the strict transform, one edge.
    pub(crate) fn cusp_dlt() -> WeightedDualComplex {
        WeightedDualComplex::from_parts(
            2,
            vec![
                VertexData::new(0, 6, 5, l(1)).over_sigma(true),
                VertexData::new(1, 1, 1, l(1)).strict(),
            ],
            vec![(face(&[0, 1]), vec![pt()])],
        )
        .unwrap()
    }

    fn cusp_minimal() -> WeightedDualComplex {
        WeightedDualComplex::from_parts(
            2,
            vec![
                VertexData::new(0, 2, 2, l(1)).over_sigma(true),
                VertexData::new(1, 3, 3, l(1)).over_sigma(true),
                VertexData::new(2, 6, 5, l(1)).over_sigma(true),
                VertexData::new(3, 1, 1, l(1)).strict(),
            ],
            vec![
                (face(&[0, 2]), vec![pt()]),
                (face(&[1, 2]), vec![pt()]),
                (face(&[2, 3]), vec![pt()]),
            ],
        )
        .unwrap()
    }

    fn cone_blowup(n: usize, d: i64) -> WeightedDualComplex {
        let h = BirElement::class("H", n as u32 - 2);
        WeightedDualComplex::from_parts(
            n,
            vec![
                VertexData::new(0, 1, 1, &h * &l(1)).strict(),
                VertexData::new(1, d, n as i64, l(n as i64 - 1)).over_sigma(true),
            ],
            vec![(face(&[0, 1]), vec![StratumComponent::new(h)])],
        )
        .unwrap()
    }

    #[test]
    fn cone_blowup_matches_closed_form() {
        // L^3({H}L^2 T^-4 + L T^-1 - 1)/((L^3 T^-4 - 1)(L T^-1 - 1))
        let h = BirElement::class("H", 1);
        let fs = vec![den(3, 4), den(1, 1)];
        let want = ZetaExpr::from_terms(vec![
            ZetaTerm::new(&h * &l(5), -4, fs.clone()),
            ZetaTerm::new(l(4), -1, fs.clone()),
            ZetaTerm::new(-l(3), 0, fs),
        ]);
        let got = cone_blowup(3, 4).zeta_bir(false);
        assert!(got.same_function(&want, None).unwrap());
    }

    #[test]
    fn isolated_vertex() {
        let d = BirElement::class("D", 1);
        let c = WeightedDualComplex::from_parts(2, vec![VertexData::new(0, 1, 1, d.clone())], vec![]).unwrap();
        let want = ZetaExpr::term(&d * &l(1), 0, vec![den(1, 1)]);
        assert_eq!(c.zeta_bir(false), want);
        assert_eq!(c.nearby_cycles(false), &d * &l(1));
    }

    #[test]
    fn edge_subdivision_data_and_invariance() {
        let c = cusp_dlt();
        let (s, v0) = c.stellar_subdivide_with_id(&face(&[0, 1]), 0, None).unwrap();
        let nv = s.vertex(v0).unwrap();
        assert_eq!((nv.n, nv.nu), (7, r(6, 1)));
        assert_eq!(nv.cls, l(1));
        assert_eq!(s.edges().count(), 2);
        assert!(s.edges().all(|(_, c)| c == &vec![pt()]));
        for local in [false, true] {
            assert!(s.zeta_bir(local).same_function(&c.zeta_bir(local), None).unwrap());
        }
        assert_eq!(s.euler_char(), 1);
        assert_eq!(c.euler_char(), 1);
    }

    #[test]
    fn triangle_subdivision_in_dimension_three() {
        let a = BirElement::class("A", 2);
        let b = BirElement::class("B", 2);
        let c3 = BirElement::class("C", 2);
        let c = WeightedDualComplex::from_parts(
            3,
            vec![
                VertexData::new(0, 2, 3, a).over_sigma(true),
                VertexData::new(1, 3, 2, b),
                VertexData::new(2, 1, 1, c3),
            ],
            vec![
                (face(&[0, 1]), vec![StratumComponent::new(BirElement::class("P", 1))]),
                (face(&[0, 2]), vec![StratumComponent::new(l(1))]),
                (face(&[1, 2]), vec![StratumComponent::new(BirElement::class("Q", 1))]),
                (face(&[0, 1, 2]), vec![pt(), pt()]),
            ],
        )
        .unwrap();
        // blow up one of the two triple points
        let (s, v0) = c.stellar_subdivide_with_id(&face(&[0, 1, 2]), 1, None).unwrap();
        assert_eq!(s.vertex(v0).unwrap().cls, l(2));
        assert_eq!(s.cells()[&face(&[0, 1, 2])].len(), 1);
        assert_eq!(s.cells()[&face(&[0, 1, 3])], vec![pt()]);
        assert_eq!(s.cells()[&face(&[0, 3])], vec![StratumComponent::new(l(1))]);
        for local in [false, true] {
            assert!(s.zeta_bir(local).same_function(&c.zeta_bir(local), None).unwrap());
        }
        // then an edge whose stratum carries higher cells
        let (t, w) = s.stellar_subdivide_with_id(&face(&[0, 1]), 0, None).unwrap();
        let p = BirElement::class("P", 1);
        assert_eq!(t.vertex(w).unwrap().cls, &p * &l(1));
        assert!(t.zeta_bir(false).same_function(&c.zeta_bir(false), None).unwrap());
        assert_eq!(t.euler_char(), c.euler_char());
    }

    #[test]
    fn ambiguous_incidence_is_refused() {
        let c = WeightedDualComplex::from_parts(
            3,
            vec![
                VertexData::new(0, 1, 1, l(2)),
                VertexData::new(1, 1, 1, l(2)),
                VertexData::new(2, 1, 1, l(2)),
            ],
            vec![
                (face(&[0, 1]), vec![StratumComponent::new(l(1)), StratumComponent::new(l(1))]),
                (face(&[0, 2]), vec![StratumComponent::new(l(1))]),
                (face(&[1, 2]), vec![StratumComponent::new(l(1))]),
                (face(&[0, 1, 2]), vec![pt()]),
            ],
        )
        .unwrap();
        assert!(matches!(
            c.stellar_subdivide(&face(&[0, 1]), 0, None),
            Err(Error::AmbiguousIncidence(_))
        ));
        assert!(matches!(
            c.stellar_subdivide(&face(&[0, 2]), 3, None),
            Err(Error::NoSuchComponent { .. })
        ));
    }

    #[test]
    fn point_blowups() {
        let c = cusp_dlt();
        let (b, v) = c.point_blowup_surface_with_id(&face(&[0]), 0, None).unwrap();
        let nv = b.vertex(v).unwrap();
        assert_eq!((nv.n, nv.nu), (6, r(6, 1)));
        let via_point = c.point_blowup_surface(&face(&[0, 1]), 0, None).unwrap();
        let via_stellar = c.stellar_subdivide(&face(&[0, 1]), 0, None).unwrap();
        assert_eq!(via_point, via_stellar);
        let three = WeightedDualComplex::from_parts(3, vec![VertexData::new(0, 1, 1, l(2))], vec![]).unwrap();
        assert!(matches!(
            three.point_blowup_surface(&face(&[0]), 0, None),
            Err(Error::BadDimension(3))
        ));
    }

    #[test]
    fn two_point_blowups_create_a_new_pole() {
        let c = cusp_dlt();
        let (b1, v1) = c.point_blowup_surface_with_id(&face(&[0]), 0, None).unwrap();
        let (b2, v2) = b1.point_blowup_surface_with_id(&[v1].into_iter().collect(), 0, None).unwrap();
        let nv = b2.vertex(v2).unwrap();
        assert_eq!((nv.n, nv.nu), (6, r(7, 1)));
        let poles = b2.zeta_bir(true).poles().unwrap();
        assert!(poles.iter().any(|p| p.s0 == r(-7, 6)));
        let before = c.zeta_bir(true).poles().unwrap();
        assert!(before.iter().all(|p| p.s0 != r(-7, 6)));
    }

    #[test]
    fn m_separating_refinement() {
        let c = cusp_minimal();
        assert_eq!(c.make_m_separating(6).unwrap(), c);
        assert_eq!(c.make_m_separating(0).unwrap(), c);
        let s = c.make_m_separating(7).unwrap();
        assert_eq!(s.vertices().count(), 5);
        let new = s.vertex(VertexId(4)).unwrap();
        assert_eq!((new.n, new.nu), (7, r(6, 1)));
        assert!(s.is_m_separating(7));
        let deep = c.make_m_separating(16).unwrap();
        assert!(deep.is_m_separating(16));
        for v in c.vertices() {
            assert_eq!(deep.vertex(v.id).unwrap(), v);
        }
        assert!(deep.zeta_bir(true).same_function(&c.zeta_bir(true), None).unwrap());
    }

    #[test]
    fn euler_characteristics() {
        let seg = cusp_dlt();
        assert_eq!(seg.euler_char(), 1);
        let tri = WeightedDualComplex::from_parts(
            2,
            vec![
                VertexData::new(0, 1, 1, l(1)),
                VertexData::new(1, 1, 1, l(1)),
                VertexData::new(2, 1, 1, l(1)),
            ],
            vec![
                (face(&[0, 1]), vec![pt()]),
                (face(&[1, 2]), vec![pt()]),
                (face(&[0, 2]), vec![pt()]),
            ],
        )
        .unwrap();
        assert_eq!(tri.euler_char(), 0);
        assert_eq!(tri.nearby_cycles(false).count(), 0);
        assert_eq!(seg.nearby_cycles(false).count(), seg.euler_char());
    }

    #[test]
    fn lct_of_cusp_and_of_crossing_lines() {
        let rep = cusp_dlt().lct_pole_order(true).unwrap().unwrap();
        assert_eq!((rep.lct, rep.order), (r(5, 6), 1));
        assert!(rep.consistent());
        let snc = WeightedDualComplex::from_parts(
            2,
            vec![
                VertexData::new(0, 1, 1, l(1)).strict(),
                VertexData::new(1, 1, 1, l(1)).strict(),
            ],
            vec![(face(&[0, 1]), vec![pt()])],
        )
        .unwrap();
        let rep = snc.lct_pole_order(false).unwrap().unwrap();
        assert_eq!((rep.lct, rep.order), (r(1, 1), 2));
        assert_eq!(rep.poles, vec![Pole::new(r(-1, 1), 2)]);
        assert!(rep.consistent());
        assert!(snc.lct_pole_order(true).unwrap().is_none());
    }

    #[test]
    fn motivic_and_topological() {
        let e = BirElement::class("Eo", 1);
        let c = WeightedDualComplex::from_parts(
            2,
            vec![VertexData::new(0, 2, 3, l(1)).with_open_cls(e.clone()).with_chi(2)],
            vec![],
        )
        .unwrap();
        let z = c.zeta_motivic().unwrap();
        assert_eq!(z, ZetaExpr::term(&e * &(&l(1) - &l(0)), 0, vec![den(3, 2)]));
        let t = c.zeta_topological(false).unwrap();
        assert_eq!(t.poles(), vec![Pole::new(r(-3, 2), 1)]);
        assert!(matches!(cusp_dlt().zeta_motivic(), Err(Error::MissingOpenClass(_))));
        assert!(matches!(cusp_dlt().zeta_topological(false), Err(Error::MissingChi(_))));
    }

    #[test]
    fn smooth_divisor_motivic_series() {
        let d = BirElement::class("D", 1);
        let c = WeightedDualComplex::from_parts(2, vec![VertexData::new(0, 1, 1, l(1)).with_open_cls(d.clone())], vec![])
            .unwrap();
        let s = c.zeta_motivic().unwrap().series_expand(5).unwrap();
        for m in 1..=5 {
            assert_eq!(s[&m], &(&d * &(&l(1) - &l(0))) * &l(-m));
        }
    }

    #[test]
    fn node_motivic_poles() {
        // xy: two lines and their point
        let c = WeightedDualComplex::from_parts(
            2,
            vec![
                VertexData::new(0, 1, 1, l(1)).with_open_cls(&l(1) - &l(0)),
                VertexData::new(1, 1, 1, l(1)).with_open_cls(&l(1) - &l(0)),
            ],
            vec![(face(&[0, 1]), vec![pt().with_open_cls(l(0))])],
        )
        .unwrap();
        let poles = c.zeta_motivic().unwrap().normalize(Some(&Specialization::Rho)).unwrap().poles();
        assert!(poles.iter().all(|p| p.s0 == r(-1, 1)));
    }

    #[test]
    fn validation_catches_bad_data() {
        let bad_dim = WeightedDualComplex::from_parts(2, vec![VertexData::new(0, 1, 1, l(2))], vec![]);
        assert!(matches!(bad_dim, Err(Error::MalformedComplex(_))));
        let no_face = WeightedDualComplex::from_parts(
            3,
            vec![
                VertexData::new(0, 1, 1, l(2)),
                VertexData::new(1, 1, 1, l(2)),
                VertexData::new(2, 1, 1, l(2)),
            ],
            vec![
                (face(&[0, 1]), vec![StratumComponent::new(l(1))]),
                (face(&[0, 1, 2]), vec![pt()]),
            ],
        );
        assert!(matches!(no_face, Err(Error::MalformedComplex(_))));
        let too_big = WeightedDualComplex::from_parts(
            2,
            vec![
                VertexData::new(0, 1, 1, l(1)),
                VertexData::new(1, 1, 1, l(1)),
                VertexData::new(2, 1, 1, l(1)),
            ],
            vec![
                (face(&[0, 1]), vec![pt()]),
                (face(&[1, 2]), vec![pt()]),
                (face(&[0, 2]), vec![pt()]),
                (face(&[0, 1, 2]), vec![pt()]),
            ],
        );
        assert!(too_big.is_err());
    }

    #[test]
    fn json_round_trip() {
        let c = cusp_minimal().make_m_separating(9).unwrap();
        let js = serde_json::to_string(&c).unwrap();
        let back: WeightedDualComplex = serde_json::from_str(&js).unwrap();
        assert_eq!(back, c);
        assert!(js.contains(r#""nu":"5/1""#));
    }
}
