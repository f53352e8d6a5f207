//! Twig contraction, the local zeta functions and the pole comparison.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use super::{CurveDualGraph, CurveVertex};
use crate::coeffring::{ratio_text, BirElement, Specialization};
use crate::complex::{LctReport, StratumComponent, VertexData, VertexId, VertexKind, WeightedDualComplex};
use crate::error::{Error, Result};
use crate::ratfunc::{den, DenFactor, LinearFactor, Pole, TopZeta, ZetaExpr, ZetaTerm};
use crate::truncation::{self, DltValuation};

/// Germs excluded from the general pipeline, with fixed zeta functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NormalCrossing {
    Smooth,
    Node,
}

/// The minimal dlt model: the minimal resolution with its twigs contracted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DltCurveGraph {
    complex: WeightedDualComplex,
    /// Contracted twigs at each surviving vertex.
    twigs: BTreeMap<VertexId, u32>,
    normal_crossing: Option<NormalCrossing>,
}

fn to_vertex(v: &CurveVertex) -> VertexData {
    let d = VertexData::new(v.id, v.n, v.nu, BirElement::l());
    if v.is_exceptional() {
        d.over_sigma(true)
    } else {
        d.strict()
    }
}

impl CurveDualGraph {
    /// Removes every maximal chain of exceptional curves that starts at a
    /// curve with one special point and runs through curves with two.
    pub fn contract_twigs(&self) -> Result<DltCurveGraph> {
        let mut removed: BTreeSet<u32> = BTreeSet::new();
        let mut twigs: BTreeMap<u32, u32> = BTreeMap::new();
        for leaf in self.exceptional().filter(|v| self.degree(v.id) == 1) {
            let mut prev = leaf.id;
            let mut chain = vec![leaf.id];
            let mut cur = self.neighbours(leaf.id)[0];
            while self.vertices[&cur].is_exceptional() && self.degree(cur) == 2 {
                chain.push(cur);
                let next = self.neighbours(cur).into_iter().find(|w| *w != prev).expect("degree two");
                prev = cur;
                cur = next;
            }
            if !(self.vertices[&cur].is_exceptional() && self.degree(cur) >= 3) {
                return Err(Error::UnsupportedConfiguration(format!(
                    "chain from E{} does not end at a curve with three special points",
                    leaf.id
                )));
            }
            removed.extend(chain);
            *twigs.entry(cur).or_default() += 1;
        }
        let survivors: Vec<VertexData> = self
            .vertices()
            .filter(|v| !removed.contains(&v.id))
            .map(to_vertex)
            .collect();
        if !survivors.iter().any(|v| v.kind == VertexKind::Exceptional) && self.normal_crossing().is_none() {
            return Err(Error::EverythingContracted);
        }
        let cells: Vec<_> = self
            .edges()
            .filter(|(a, b)| !removed.contains(a) && !removed.contains(b))
            .map(|(a, b)| {
                (
                    [VertexId(a), VertexId(b)].into_iter().collect(),
                    vec![StratumComponent::new(BirElement::one())],
                )
            })
            .collect();
        let complex = WeightedDualComplex::from_parts(2, survivors, cells)?;
        let twigs = complex
            .vertices()
            .filter(|v| v.kind == VertexKind::Exceptional)
            .map(|v| (v.id, twigs.get(&v.id.0).copied().unwrap_or(0)))
            .collect();
        Ok(DltCurveGraph {
            complex,
            twigs,
            normal_crossing: self.normal_crossing(),
        })
    }
}

impl DltCurveGraph {
    pub fn complex(&self) -> &WeightedDualComplex {
        &self.complex
    }

    pub fn normal_crossing(&self) -> Option<NormalCrossing> {
        self.normal_crossing
    }

    pub fn exceptional(&self) -> impl Iterator<Item = &VertexData> {
        self.complex.vertices().filter(|v| v.kind == VertexKind::Exceptional)
    }

    /// Components meeting `v`, with repetition by component count.
    pub fn neighbours(&self, v: VertexId) -> Vec<VertexId> {
        let mut out = Vec::new();
        for (f, comps) in self.complex.edges() {
            if f.contains(&v) {
                let w = *f.iter().find(|w| **w != v).expect("edge has two ends");
                out.extend(std::iter::repeat_n(w, comps.len()));
            }
        }
        out
    }

    pub fn r(&self, v: VertexId) -> usize {
        self.neighbours(v).len()
    }

    pub fn t(&self, v: VertexId) -> u32 {
        self.twigs.get(&v).copied().unwrap_or(0)
    }

    pub fn special_points(&self, v: VertexId) -> usize {
        self.r(v) + self.t(v) as usize
    }

    /// No exceptional component with fewer than two special points is left.
    pub fn has_no_admissible_twig(&self) -> bool {
        self.exceptional().all(|v| self.special_points(v.id) >= 2)
    }

    pub fn zeta_bir_local(&self) -> ZetaExpr {
        match self.normal_crossing {
            Some(NormalCrossing::Smooth) => ZetaExpr::zero(),
            Some(NormalCrossing::Node) => ZetaExpr::term(BirElement::lpow(2), 0, vec![den(2, 2)]),
            None => self.complex.zeta_bir(true),
        }
    }

    /// `-nu/N` for exceptional components with at least three special
    /// points, and `-1`.
    pub fn predict_poles_bir(&self) -> BTreeSet<Ratio<i64>> {
        match self.normal_crossing {
            Some(NormalCrossing::Smooth) => BTreeSet::new(),
            Some(NormalCrossing::Node) => BTreeSet::from([Ratio::from_integer(-1)]),
            None => self
                .exceptional()
                .filter(|v| self.special_points(v.id) >= 3)
                .map(|v| -v.ratio())
                .chain([Ratio::from_integer(-1)])
                .collect(),
        }
    }

    /// Subdivide edges until the model is `m`-separating; new vertices carry no twigs.
    pub fn refine(&self, m: i64) -> Result<DltCurveGraph> {
        let complex = self.complex.make_m_separating(m)?;
        let twigs = complex
            .vertices()
            .filter(|v| v.kind == VertexKind::Exceptional)
            .map(|v| (v.id, self.t(v.id)))
            .collect();
        Ok(DltCurveGraph {
            complex,
            twigs,
            normal_crossing: self.normal_crossing,
        })
    }

    /// `L^2/(L^nu T^-N - 1) (1 + sum_i 1/(L^nu_i T^-N_i - 1))` over the neighbours of `v`.
    pub fn contribution(&self, v: VertexId) -> Result<ZetaExpr> {
        let data = self.complex.vertex(v).ok_or_else(|| Error::NoSuchComponent {
            stratum: format!("{{{v}}}"),
            index: 0,
        })?;
        let own = data.factor();
        let l2 = BirElement::lpow(2);
        let mut out = ZetaExpr::term(l2.clone(), 0, vec![own]);
        for w in self.neighbours(v) {
            let f = self.complex.vertex(w).expect("neighbour exists").factor();
            out.push(ZetaTerm::new(l2.clone(), 0, vec![own, f]));
        }
        Ok(out)
    }

    /// Whether no factor with the ratio of `v` survives in its own contribution.
    pub fn contribution_cancels(&self, v: VertexId) -> Result<bool> {
        let ratio = self.complex.vertex(v).map(|d| d.ratio());
        let nf = self.contribution(v)?.normalize(Some(&Specialization::Rho))?;
        Ok(nf.den.iter().all(|f: &DenFactor| Some(f.ratio()) != ratio))
    }

    /// Dlt valuations with `N <= max_n`.
    pub fn valuations(&self, max_n: i64) -> Vec<DltValuation> {
        self.complex.quasi_monomial_valuations(max_n)
    }

    pub fn max_n(&self) -> i64 {
        self.complex.vertices().map(|v| v.n).max().unwrap_or(1)
    }

    /// Series of the local zeta function against the valuation truncation.
    pub fn verify_main_theorem(&self, m: i64) -> bool {
        if self.normal_crossing.is_some() {
            return false;
        }
        truncation::verify_main_theorem(&self.complex, &self.valuations(m), m, true)
    }

    pub fn lct(&self) -> Result<Option<LctReport>> {
        self.complex.lct_pole_order(true)
    }
}

/// `sum (2 - deg)/(N s + nu)` over exceptional curves plus
/// `sum 1/((N_i s + nu_i)(N_j s + nu_j))` over edges.
pub fn zeta_top_local(g: &CurveDualGraph) -> TopZeta {
    let lin = |v: &CurveVertex| LinearFactor::new(v.n, v.nu);
    let mut out = TopZeta::zero();
    for v in g.exceptional() {
        out.push(2 - g.degree(v.id) as i64, vec![lin(v)]);
    }
    for (a, b) in g.edges() {
        out.push(1, vec![lin(g.vertex(a).unwrap()), lin(g.vertex(b).unwrap())]);
    }
    out
}

/// `-nu/N` for exceptional curves meeting at least three others, and `-1/N`
/// for branches.
pub fn predict_poles_top(g: &CurveDualGraph) -> BTreeSet<Ratio<i64>> {
    let mut out: BTreeSet<Ratio<i64>> = g
        .exceptional()
        .filter(|v| g.degree(v.id) >= 3)
        .map(|v| -v.ratio())
        .collect();
    out.extend(g.branches().map(|b| Ratio::new(-1, b.n)));
    out
}

fn ratio_set<S: Serializer>(set: &BTreeSet<Ratio<i64>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    set.iter().map(|r| ratio_text(*r)).collect::<Vec<_>>().serialize(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompareReport {
    #[serde(serialize_with = "ratio_set")]
    pub predicted_top: BTreeSet<Ratio<i64>>,
    #[serde(serialize_with = "ratio_set")]
    pub predicted_bir: BTreeSet<Ratio<i64>>,
    pub actual_top: Vec<Pole>,
    pub actual_bir: Vec<Pole>,
}

impl CompareReport {
    fn problems(&self) -> Vec<String> {
        let locs = |ps: &[Pole]| ps.iter().map(|p| p.s0).collect::<BTreeSet<_>>();
        let show = |s: &BTreeSet<Ratio<i64>>| s.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", ");
        let list = |ps: &[Pole]| ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ");
        let mut out = Vec::new();
        if locs(&self.actual_top) != self.predicted_top {
            out.push(format!(
                "topological poles {{{}}} differ from predicted {{{}}}",
                list(&self.actual_top),
                show(&self.predicted_top)
            ));
        }
        if locs(&self.actual_bir) != self.predicted_bir {
            out.push(format!(
                "birational poles {{{}}} differ from predicted {{{}}}",
                list(&self.actual_bir),
                show(&self.predicted_bir)
            ));
        }
        if self.actual_top != self.actual_bir {
            out.push(format!(
                "topological {{{}}} and birational {{{}}} poles differ",
                list(&self.actual_top),
                list(&self.actual_bir)
            ));
        }
        out
    }
}

/// Both zeta functions, both predictions, both actual pole lists; fails with
/// the full difference unless all four agree.
pub fn compare_top_bir(g: &CurveDualGraph) -> Result<CompareReport> {
    if let Some(nc) = g.normal_crossing() {
        return Err(Error::UnsupportedConfiguration(format!(
            "{nc:?} germ already has normal crossings and is excluded"
        )));
    }
    let dg = g.contract_twigs()?;
    let report = CompareReport {
        predicted_top: predict_poles_top(g),
        predicted_bir: dg.predict_poles_bir(),
        actual_top: zeta_top_local(g).poles(),
        actual_bir: dg.zeta_bir_local().poles()?,
    };
    let problems = report.problems();
    if problems.is_empty() {
        Ok(report)
    } else {
        let mut msg = String::new();
        for p in problems {
            let _ = writeln!(msg, "  {p}");
        }
        Err(Error::ComparisonFailure(msg))
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::cusp;
    use super::super::{bundled_germ, bundled_germs, node_germ};
    use super::*;

    fn r(p: i64, q: i64) -> Ratio<i64> {
        Ratio::new(p, q)
    }

    #[test]
    fn cusp_contracts_to_one_edge() {
        let dg = cusp().contract_twigs().unwrap();
        let e3 = VertexId(3);
        assert_eq!(dg.complex().vertices().count(), 2);
        assert_eq!((dg.r(e3), dg.t(e3)), (1, 2));
        assert_eq!(dg.complex().edges().count(), 1);
        assert!(dg.has_no_admissible_twig());
        let want = ZetaExpr::term(BirElement::lpow(3), -1, vec![den(5, 6), den(1, 1)]);
        assert!(dg.zeta_bir_local().same_function(&want, None).unwrap());
        assert_eq!(dg.predict_poles_bir(), BTreeSet::from([r(-5, 6), r(-1, 1)]));
    }

    #[test]
    fn ordinary_points_keep_everything() {
        for d in 3..=6 {
            let g = bundled_germ(&format!("ordinary{d}")).unwrap();
            let dg = g.contract_twigs().unwrap();
            assert_eq!(dg.complex().vertices().count(), d + 1);
            let want = BTreeSet::from([r(-2, d as i64), r(-1, 1)]);
            assert_eq!(predict_poles_top(&g), want);
            assert_eq!(dg.predict_poles_bir(), want);
            let top: BTreeSet<_> = zeta_top_local(&g).poles().iter().map(|p| p.s0).collect();
            assert_eq!(top, want);
        }
    }

    #[test]
    fn tacnode_contracts_hanging_chain_only() {
        let g = bundled_germ("tacnode").unwrap();
        let dg = g.contract_twigs().unwrap();
        assert!(dg.complex().vertex(VertexId(1)).is_none());
        assert_eq!((dg.r(VertexId(2)), dg.t(VertexId(2))), (2, 1));
    }

    #[test]
    fn node_values() {
        let g = node_germ();
        assert_eq!(zeta_top_local(&g).poles(), vec![Pole::new(r(-1, 1), 2)]);
        let dg = g.contract_twigs().unwrap();
        assert_eq!(dg.zeta_bir_local(), ZetaExpr::term(BirElement::lpow(2), 0, vec![den(2, 2)]));
        assert!(matches!(compare_top_bir(&g), Err(Error::UnsupportedConfiguration(_))));
    }

    #[test]
    fn cusp_comparison() {
        let rep = compare_top_bir(&cusp()).unwrap();
        let want = vec![Pole::new(r(-5, 6), 1), Pole::new(r(-1, 1), 1)];
        assert_eq!(rep.actual_top, want);
        assert_eq!(rep.actual_bir, want);
    }

    #[test]
    fn bundled_comparisons_and_truncations() {
        for (name, g) in bundled_germs() {
            if g.normal_crossing().is_some() {
                continue;
            }
            compare_top_bir(&g).unwrap_or_else(|e| panic!("{name}: {e}"));
            let dg = g.contract_twigs().unwrap();
            assert!(dg.verify_main_theorem(2 * dg.max_n()), "{name}");
        }
    }

    #[test]
    fn chain_vertex_contribution_cancels() {
        let dg = cusp().contract_twigs().unwrap().refine(7).unwrap();
        let new = VertexId(5);
        assert_eq!((dg.r(new), dg.t(new)), (2, 0));
        assert!(dg.contribution_cancels(new).unwrap());
        assert!(!dg.contribution_cancels(VertexId(3)).unwrap());
    }

    #[test]
    fn random_germs_agree() {
        for (script, g) in super::super::random_germs(11, 30) {
            let rep = compare_top_bir(&g).unwrap_or_else(|e| panic!("{script:?}: {e}"));
            let dg = g.contract_twigs().unwrap();
            assert!(dg.certificates_match_poles().unwrap(), "{script:?}");
            assert!(dg.verify_main_theorem(dg.max_n() + 3), "{script:?}");
            assert!(!rep.actual_bir.is_empty());
        }
    }

    #[test]
    fn corrupt_graph_is_caught_by_comparison_inputs() {
        let bad = cusp().with_kappa(3, 2).unwrap();
        assert!(bad.validate_numerics().check().is_err());
    }
}
