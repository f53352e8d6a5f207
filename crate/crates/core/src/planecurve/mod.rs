//! Plane curve germs through the dual graph of their minimal log resolution.

mod construct;
mod dlt;
mod residue;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use construct::{random_germs, BlowupScript, Center};
pub use dlt::{
    compare_top_bir, predict_poles_top, zeta_top_local, CompareReport, DltCurveGraph, NormalCrossing,
};
pub use residue::{PoleCertificate, ResidueCase, ResidueContribution, UFraction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveVertexKind {
    Exceptional,
    Branch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveVertex {
    pub id: u32,
    pub kind: CurveVertexKind,
    #[serde(rename = "N")]
    pub n: i64,
    pub nu: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<i64>,
}

impl CurveVertex {
    pub fn exceptional(id: u32, n: i64, nu: i64, kappa: i64) -> Self {
        CurveVertex {
            id,
            kind: CurveVertexKind::Exceptional,
            n,
            nu,
            kappa: Some(kappa),
        }
    }

    pub fn branch(id: u32) -> Self {
        CurveVertex {
            id,
            kind: CurveVertexKind::Branch,
            n: 1,
            nu: 1,
            kappa: None,
        }
    }

    pub fn is_exceptional(&self) -> bool {
        self.kind == CurveVertexKind::Exceptional
    }

    pub fn ratio(&self) -> Ratio<i64> {
        Ratio::new(self.nu, self.n)
    }
}

/// Dual graph of the minimal log resolution of a reduced germ at a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveDualGraph {
    vertices: BTreeMap<u32, CurveVertex>,
    edges: BTreeSet<(u32, u32)>,
    point: String,
}

fn edge(a: u32, b: u32) -> (u32, u32) {
    (a.min(b), a.max(b))
}

impl CurveDualGraph {
    pub fn from_parts(vertices: Vec<CurveVertex>, edges: Vec<(u32, u32)>, point: impl Into<String>) -> Result<Self> {
        let mut g = CurveDualGraph {
            vertices: BTreeMap::new(),
            edges: BTreeSet::new(),
            point: point.into(),
        };
        for v in vertices {
            let id = v.id;
            if g.vertices.insert(id, v).is_some() {
                return Err(Error::MalformedComplex(format!("duplicate curve vertex {id}")));
            }
        }
        for (a, b) in edges {
            if a == b {
                return Err(Error::MalformedComplex(format!("loop at curve vertex {a}")));
            }
            if !g.vertices.contains_key(&a) || !g.vertices.contains_key(&b) {
                return Err(Error::MalformedComplex(format!("edge {a}-{b} uses an unknown vertex")));
            }
            g.edges.insert(edge(a, b));
        }
        g.check_shape()?;
        Ok(g)
    }

    fn check_shape(&self) -> Result<()> {
        let bad = |m: String| Err(Error::MalformedComplex(m));
        let exc: Vec<u32> = self.exceptional().map(|v| v.id).collect();
        for v in self.vertices.values() {
            match v.kind {
                CurveVertexKind::Branch => {
                    if v.n != 1 || v.nu != 1 {
                        return bad(format!("branch {} must have N = nu = 1", v.id));
                    }
                    if self.degree(v.id) > 1 {
                        return bad(format!("branch {} is not a leaf", v.id));
                    }
                }
                CurveVertexKind::Exceptional => {
                    if v.n < 1 || v.nu < 1 {
                        return bad(format!("vertex {} has N or nu below 1", v.id));
                    }
                    if v.kappa.is_none_or(|k| k < 1) {
                        return bad(format!("vertex {} needs kappa >= 1", v.id));
                    }
                }
            }
        }
        if self.vertices.values().all(|v| !v.is_exceptional()) {
            // smooth or normal crossings: one branch, or two meeting branches
            let ok = matches!((self.vertices.len(), self.edges.len()), (1, 0) | (2, 1));
            return if ok {
                Ok(())
            } else {
                bad("without exceptional curves only a smooth branch or a node is allowed".into())
            };
        }
        for &(a, b) in &self.edges {
            if !self.vertices[&a].is_exceptional() && !self.vertices[&b].is_exceptional() {
                return bad(format!("branches {a} and {b} meet outside the exceptional locus"));
            }
        }
        let exc_edges = self
            .edges
            .iter()
            .filter(|(a, b)| self.vertices[a].is_exceptional() && self.vertices[b].is_exceptional())
            .count();
        if exc_edges + 1 != exc.len() {
            return bad("exceptional curves do not form a tree".into());
        }
        // connected: walk from the first exceptional vertex
        let mut seen = BTreeSet::from([exc[0]]);
        let mut stack = vec![exc[0]];
        while let Some(v) = stack.pop() {
            for w in self.neighbours(v) {
                if self.vertices[&w].is_exceptional() && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        if seen.len() != exc.len() {
            return bad("exceptional curves are not connected".into());
        }
        if self.branches().any(|b| self.degree(b.id) == 0) {
            return bad("a branch misses the exceptional locus".into());
        }
        Ok(())
    }

    pub fn point(&self) -> &str {
        &self.point
    }

    pub fn vertex(&self, id: u32) -> Option<&CurveVertex> {
        self.vertices.get(&id)
    }

    pub fn vertices(&self) -> impl Iterator<Item = &CurveVertex> {
        self.vertices.values()
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.edges.iter().copied()
    }

    pub fn exceptional(&self) -> impl Iterator<Item = &CurveVertex> {
        self.vertices.values().filter(|v| v.is_exceptional())
    }

    pub fn branches(&self) -> impl Iterator<Item = &CurveVertex> {
        self.vertices.values().filter(|v| !v.is_exceptional())
    }

    pub fn neighbours(&self, id: u32) -> Vec<u32> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == id {
                    Some(b)
                } else if b == id {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn degree(&self, id: u32) -> usize {
        self.neighbours(id).len()
    }

    pub fn normal_crossing(&self) -> Option<NormalCrossing> {
        if self.exceptional().next().is_some() {
            return None;
        }
        Some(if self.vertices.len() == 1 {
            NormalCrossing::Smooth
        } else {
            NormalCrossing::Node
        })
    }

    /// Every `kappa = 1` curve has at least three special points.
    pub fn is_minimal(&self) -> bool {
        self.exceptional()
            .all(|v| v.kappa != Some(1) || self.degree(v.id) >= 3)
    }

    /// Same graph with one kappa changed; used to inject faults.
    pub fn with_kappa(&self, id: u32, kappa: i64) -> Result<Self> {
        let mut g = self.clone();
        let v = g
            .vertices
            .get_mut(&id)
            .filter(|v| v.is_exceptional())
            .ok_or_else(|| Error::BadParameters(format!("no exceptional vertex {id}")))?;
        v.kappa = Some(kappa);
        Ok(g)
    }

    /// Checks the four numerical relations at every exceptional vertex.
    pub fn validate_numerics(&self) -> NumericsReport {
        let mut rows = Vec::new();
        for v in self.exceptional() {
            let kappa = v.kappa.unwrap_or(0);
            let nbrs: Vec<&CurveVertex> = self.neighbours(v.id).iter().map(|w| &self.vertices[w]).collect();
            let sum_n: i64 = nbrs.iter().map(|w| w.n).sum();
            let sum_nu: i64 = nbrs.iter().map(|w| w.nu - 1).sum::<i64>() + 2;
            let alphas: Vec<Ratio<i64>> = nbrs
                .iter()
                .map(|w| Ratio::from_integer(w.nu) - Ratio::new(v.nu * w.n, v.n))
                .collect();
            let alpha_sum: Ratio<i64> =
                alphas.iter().map(|a| a - Ratio::from_integer(1)).sum::<Ratio<i64>>() + Ratio::from_integer(2);
            let one = Ratio::from_integer(1);
            rows.push(NumericsRow {
                vertex: v.id,
                kappa,
                degree: nbrs.len(),
                alphas: alphas.iter().map(|a| a.to_string()).collect(),
                sums_of_n: kappa * v.n == sum_n,
                sums_of_nu: kappa * v.nu == sum_nu,
                alpha_balance: alpha_sum == Ratio::from_integer(0),
                alpha_bounds: alphas.iter().all(|a| *a >= -one && *a < one),
                detail: format!(
                    "kappa*N = {} vs {sum_n}; kappa*nu = {} vs {sum_nu}; alpha sum {alpha_sum}",
                    kappa * v.n,
                    kappa * v.nu
                ),
            });
        }
        NumericsReport { rows }
    }
}

/// One line per exceptional vertex: relations (i) to (iv).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NumericsRow {
    pub vertex: u32,
    pub kappa: i64,
    pub degree: usize,
    pub alphas: Vec<String>,
    /// `kappa N = sum N_i`
    pub sums_of_n: bool,
    /// `kappa nu = sum (nu_i - 1) + 2`
    pub sums_of_nu: bool,
    /// `sum (alpha_i - 1) + 2 = 0`
    pub alpha_balance: bool,
    /// `-1 <= alpha_i < 1`
    pub alpha_bounds: bool,
    pub detail: String,
}

impl NumericsRow {
    pub fn passes(&self) -> bool {
        self.sums_of_n && self.sums_of_nu && self.alpha_balance && self.alpha_bounds
    }

    fn first_failure(&self) -> Option<&'static str> {
        [
            (self.sums_of_n, "(i) kappa N = sum N_i"),
            (self.sums_of_nu, "(ii) kappa nu = sum (nu_i - 1) + 2"),
            (self.alpha_balance, "(iii) sum (alpha_i - 1) + 2 = 0"),
            (self.alpha_bounds, "(iv) -1 <= alpha_i < 1"),
        ]
        .into_iter()
        .find(|(ok, _)| !ok)
        .map(|(_, name)| name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NumericsReport {
    pub rows: Vec<NumericsRow>,
}

impl NumericsReport {
    pub fn passes(&self) -> bool {
        self.rows.iter().all(NumericsRow::passes)
    }

    /// The first failing relation as an error.
    pub fn check(&self) -> Result<()> {
        for row in &self.rows {
            if let Some(relation) = row.first_failure() {
                return Err(Error::ValidationFailure {
                    vertex: row.vertex.to_string(),
                    relation,
                    detail: row.detail.clone(),
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for NumericsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vertex  kappa  deg  (i)   (ii)  (iii) (iv)  alphas")?;
        let mark = |b: bool| if b { "ok  " } else { "FAIL" };
        for r in &self.rows {
            writeln!(
                f,
                "{:<7} {:<6} {:<4} {}  {}  {}  {}  {}",
                r.vertex,
                r.kappa,
                r.degree,
                mark(r.sums_of_n),
                mark(r.sums_of_nu),
                mark(r.alpha_balance),
                mark(r.alpha_bounds),
                r.alphas.join(" ")
            )?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CurveJson {
    vertices: Vec<CurveVertex>,
    edges: Vec<(u32, u32)>,
    #[serde(default = "default_point")]
    point: String,
}

fn default_point() -> String {
    "a".into()
}

impl Serialize for CurveDualGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CurveJson {
            vertices: self.vertices.values().cloned().collect(),
            edges: self.edges.iter().copied().collect(),
            point: self.point.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CurveDualGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let js = CurveJson::deserialize(d)?;
        CurveDualGraph::from_parts(js.vertices, js.edges, js.point).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for CurveDualGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in self.vertices.values() {
            match v.kind {
                CurveVertexKind::Exceptional => writeln!(
                    f,
                    "  E{}: N = {}, nu = {}, kappa = {}, degree {}",
                    v.id,
                    v.n,
                    v.nu,
                    v.kappa.unwrap_or(0),
                    self.degree(v.id)
                )?,
                CurveVertexKind::Branch => writeln!(f, "  branch {}", v.id)?,
            }
        }
        let es: Vec<String> = self.edges.iter().map(|(a, b)| format!("{a}-{b}")).collect();
        writeln!(f, "  edges: {}", es.join(" "))
    }
}

macro_rules! bundled {
    ($($name:literal),* $(,)?) => {
        const BUNDLED: &[(&str, &str)] = &[
            $(($name, include_str!(concat!("../../data/curves/", $name, ".json")))),*
        ];
    };
}

bundled!(
    "smooth", "node", "cusp", "tacnode", "a4", "ordinary3", "ordinary4", "ordinary5", "ordinary6", "e6", "e8"
);

/// The shipped example germs.
pub fn bundled_germs() -> Vec<(&'static str, CurveDualGraph)> {
    BUNDLED
        .iter()
        .map(|(name, text)| (*name, serde_json::from_str(text).expect("bundled curve data is valid")))
        .collect()
}

pub fn bundled_germ(name: &str) -> Option<CurveDualGraph> {
    bundled_germs().into_iter().find(|(n, _)| *n == name).map(|(_, g)| g)
}

/// The scripts the bundled graphs were produced from.
pub fn bundled_scripts() -> Vec<(&'static str, BlowupScript)> {
    use Center::*;
    let ordinary = |d: usize| BlowupScript::new(vec![Origin], vec![1; d]);
    vec![
        ("cusp", BlowupScript::new(vec![Origin, Free(1), Satellite(1, 2)], vec![3])),
        ("tacnode", BlowupScript::new(vec![Origin, Free(1)], vec![2, 2])),
        ("a4", BlowupScript::new(vec![Origin, Free(1), Free(2), Satellite(2, 3)], vec![4])),
        ("ordinary3", ordinary(3)),
        ("ordinary4", ordinary(4)),
        ("ordinary5", ordinary(5)),
        ("ordinary6", ordinary(6)),
        ("e6", BlowupScript::new(vec![Origin, Free(1), Satellite(1, 2), Satellite(1, 3)], vec![4])),
        ("e8", BlowupScript::new(vec![Origin, Free(1), Satellite(1, 2), Satellite(2, 3)], vec![4])),
    ]
}

/// A single smooth branch.
pub fn smooth_germ() -> CurveDualGraph {
    CurveDualGraph::from_parts(vec![CurveVertex::branch(0)], vec![], "a").expect("valid")
}

/// Two transversal smooth branches.
pub fn node_germ() -> CurveDualGraph {
    CurveDualGraph::from_parts(vec![CurveVertex::branch(0), CurveVertex::branch(1)], vec![(0, 1)], "a")
        .expect("valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn cusp() -> CurveDualGraph {
        CurveDualGraph::from_parts(
            vec![
                CurveVertex::exceptional(1, 2, 2, 3),
                CurveVertex::exceptional(2, 3, 3, 2),
                CurveVertex::exceptional(3, 6, 5, 1),
                CurveVertex::branch(4),
            ],
            vec![(1, 3), (2, 3), (3, 4)],
            "a",
        )
        .unwrap()
    }

    #[test]
    fn cusp_numerics_pass() {
        let rep = cusp().validate_numerics();
        assert!(rep.passes(), "{rep}");
        assert_eq!(rep.rows.len(), 3);
        let e3 = rep.rows.iter().find(|r| r.vertex == 3).unwrap();
        assert_eq!(e3.alphas, vec!["1/3", "1/2", "1/6"]);
    }

    #[test]
    fn corrupt_kappa_fails_first_relation() {
        let bad = cusp().with_kappa(1, 4).unwrap();
        match bad.validate_numerics().check() {
            Err(Error::ValidationFailure { vertex, relation, .. }) => {
                assert_eq!(vertex, "1");
                assert!(relation.starts_with("(i)"));
            }
            other => panic!("expected a failure, got {other:?}"),
        }
    }

    #[test]
    fn node_is_vacuous() {
        let rep = node_germ().validate_numerics();
        assert!(rep.rows.is_empty() && rep.passes());
        assert_eq!(node_germ().normal_crossing(), Some(NormalCrossing::Node));
        assert_eq!(smooth_germ().normal_crossing(), Some(NormalCrossing::Smooth));
    }

    #[test]
    fn shape_errors() {
        let cyc = CurveDualGraph::from_parts(
            vec![
                CurveVertex::exceptional(1, 1, 2, 1),
                CurveVertex::exceptional(2, 1, 2, 1),
                CurveVertex::exceptional(3, 1, 2, 1),
            ],
            vec![(1, 2), (2, 3), (1, 3)],
            "a",
        );
        assert!(cyc.is_err());
        let loose = CurveDualGraph::from_parts(
            vec![CurveVertex::exceptional(1, 1, 2, 1), CurveVertex::branch(2)],
            vec![],
            "a",
        );
        assert!(loose.is_err());
    }

    #[test]
    fn bundled_data_matches_the_constructor() {
        let germs = bundled_germs();
        for (name, script) in bundled_scripts() {
            let built = script.build().unwrap();
            let shipped = germs.iter().find(|(n, _)| *n == name).unwrap();
            assert_eq!(&built, &shipped.1, "{name}");
        }
        assert_eq!(bundled_germ("node").unwrap(), node_germ());
        assert_eq!(bundled_germ("smooth").unwrap(), smooth_germ());
        assert_eq!(bundled_germ("cusp").unwrap(), cusp());
    }

    #[test]
    fn json_round_trip() {
        for (_, g) in bundled_germs() {
            let js = serde_json::to_string(&g).unwrap();
            let back: CurveDualGraph = serde_json::from_str(&js).unwrap();
            assert_eq!(back, g);
        }
    }
}
