//! Worked families with known answers: cones over smooth hypersurfaces, line
//! and hyperplane arrangements, log canonical skeleta, and random small
//! complexes for fuzzing.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::coeffring::BirElement;
use crate::complex::{face, StratumComponent, VertexData, WeightedDualComplex};
use crate::error::{Error, Result};
use crate::ratfunc::{den, Series, ZetaExpr, ZetaTerm};
use crate::truncation::{sum_over_valuations, DltValuation};

fn l(k: i64) -> BirElement {
    BirElement::lpow(k)
}

/// A generated complex together with the closed forms it should reproduce.
#[derive(Clone, Debug, Serialize)]
pub struct ConeExample {
    pub n: usize,
    pub d: i64,
    pub complex: WeightedDualComplex,
    pub expected: ZetaExpr,
    pub expected_local: ZetaExpr,
}

/// The cone `f = 0` in `A^n` over a smooth degree `d` hypersurface `H` of
/// `P^(n-1)`; `{H}` is the opaque symbol `H` of dimension `n - 2`.
///
/// For `d < n` the pair is already dlt and the complex is the single vertex
/// `D`. Otherwise it is the blow-up of the origin: `D~` and `E` meeting along
/// a copy of `H`. The local forms are taken above the origin.
pub fn cone_example(n: usize, d: i64) -> Result<ConeExample> {
    if n < 3 {
        return Err(Error::BadParameters(format!("cones need n >= 3, got {n}")));
    }
    if d < 1 {
        return Err(Error::BadParameters(format!("cones need d >= 1, got {d}")));
    }
    let h = BirElement::class("H", n as u32 - 2);
    let strict_term = ZetaExpr::term(&h * &l(2), 0, vec![den(1, 1)]);
    if d < n as i64 {
        let complex = WeightedDualComplex::from_parts(n, vec![VertexData::new(0, 1, 1, &h * &l(1)).strict()], vec![])?;
        return Ok(ConeExample {
            n,
            d,
            complex,
            expected: strict_term,
            expected_local: ZetaExpr::zero(),
        });
    }
    let ni = n as i64;
    let complex = WeightedDualComplex::from_parts(
        n,
        vec![
            VertexData::new(0, 1, 1, &h * &l(1)).strict(),
            VertexData::new(1, d, ni, l(ni - 1)).over_sigma(true),
        ],
        vec![(face(&[0, 1]), vec![StratumComponent::new(h.clone())])],
    )?;
    // L^n ({H} L^2 T^-d + L T^-1 - 1) / ((L^n T^-d - 1)(L T^-1 - 1))
    let fs = vec![den(ni, d), den(1, 1)];
    let expected = ZetaExpr::from_terms(vec![
        ZetaTerm::new(&h * &l(ni + 2), -d, fs.clone()),
        ZetaTerm::new(l(ni + 1), -1, fs.clone()),
        ZetaTerm::new(-l(ni), 0, fs),
    ]);
    let expected_local = expected.sub(&strict_term);
    Ok(ConeExample {
        n,
        d,
        complex,
        expected,
        expected_local,
    })
}

/// The `T^m` coefficient of the cone zeta function assembled valuation by
/// valuation, `i` running over `(-m/d, 0]`, plus `L^(n - mn/d)` when `d | m`.
pub fn cone_sm_coefficient(n: usize, d: i64, m: i64) -> BirElement {
    let ni = n as i64;
    let h = BirElement::class("H", n as u32 - 2);
    let mut out = BirElement::zero();
    // -m/d < i <= 0
    let mut i = 0;
    while i * d > -m {
        out += &h.shift_l((2 - m - i * (d - ni)).into());
        i -= 1;
    }
    if m % d == 0 {
        out += &l(ni - m * ni / d);
    }
    out
}

/// Compares [`cone_sm_coefficient`] with the `T^m` coefficient of the
/// closed form. Only meaningful for `d >= n`; returns false otherwise.
pub fn sm_enumeration_check(n: usize, d: i64, m: i64) -> bool {
    if d < n as i64 || m < 1 {
        return false;
    }
    let Ok(ex) = cone_example(n, d) else { return false };
    let Ok(series) = ex.expected.series_expand(m) else { return false };
    series.get(&m).cloned().unwrap_or_default() == cone_sm_coefficient(n, d, m)
}

/// An affine hyperplane `sum a_i x_i = c`, stored as `[a_1, .., a_n, c]`.
/// Rational equations can be cleared to integers first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Hyperplane(pub Vec<i64>);

/// An intersection of hyperplanes, named by every hyperplane containing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub hyperplanes: BTreeSet<usize>,
    /// codimension, which is also the log discrepancy of its blow-up
    pub nu: i64,
    /// number of hyperplanes containing it
    #[serde(rename = "N")]
    pub n: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ArrangementJson", into = "ArrangementJson")]
pub struct ArrangementLattice {
    n: usize,
    hyperplanes: Vec<Hyperplane>,
    edges: Vec<Edge>,
}

#[derive(Serialize, Deserialize)]
struct ArrangementJson {
    n: usize,
    hyperplanes: Vec<Hyperplane>,
}

impl TryFrom<ArrangementJson> for ArrangementLattice {
    type Error = Error;
    fn try_from(j: ArrangementJson) -> Result<Self> {
        ArrangementLattice::new(j.n, j.hyperplanes)
    }
}

impl From<ArrangementLattice> for ArrangementJson {
    fn from(a: ArrangementLattice) -> Self {
        ArrangementJson {
            n: a.n,
            hyperplanes: a.hyperplanes,
        }
    }
}

type Row = Vec<Ratio<i64>>;

fn rank(rows: &[Row]) -> usize {
    let mut m: Vec<Row> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != Ratio::from_integer(0)) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c];
        for i in 0..m.len() {
            if i != r && m[i][c] != Ratio::from_integer(0) {
                let f = m[i][c] / pivot;
                for k in c..cols {
                    let sub = m[r][k] * f;
                    m[i][k] -= sub;
                }
            }
        }
        r += 1;
    }
    r
}

impl ArrangementLattice {
    /// Builds the intersection lattice. Two hyperplanes with proportional
    /// equations are a `DegenerateArrangement`.
    pub fn new(n: usize, hyperplanes: Vec<Hyperplane>) -> Result<Self> {
        if n == 0 || hyperplanes.is_empty() {
            return Err(Error::BadParameters("an arrangement needs n >= 1 and a hyperplane".into()));
        }
        for (i, h) in hyperplanes.iter().enumerate() {
            if h.0.len() != n + 1 {
                return Err(Error::BadParameters(format!("hyperplane {i} needs {} numbers", n + 1)));
            }
            if h.0[..n].iter().all(|&a| a == 0) {
                return Err(Error::DegenerateArrangement(format!("hyperplane {i} has no linear part")));
            }
        }
        let rows: Vec<Row> = hyperplanes
            .iter()
            .map(|h| h.0.iter().map(|&a| Ratio::from_integer(a)).collect())
            .collect();
        for i in 0..rows.len() {
            for j in 0..i {
                if rank(&[rows[i].clone(), rows[j].clone()]) == 1 {
                    return Err(Error::DegenerateArrangement(format!("hyperplanes {j} and {i} coincide")));
                }
            }
        }
        let linear = |set: &BTreeSet<usize>| -> Vec<Row> { set.iter().map(|&i| rows[i][..n].to_vec()).collect() };
        let full = |set: &BTreeSet<usize>| -> Vec<Row> { set.iter().map(|&i| rows[i].clone()).collect() };
        // None when the hyperplanes in `set` have empty intersection
        let close = |set: &BTreeSet<usize>| -> Option<(BTreeSet<usize>, usize)> {
            let r = rank(&linear(set));
            if rank(&full(set)) != r {
                return None;
            }
            let mut out = set.clone();
            for h in 0..rows.len() {
                let mut bigger = set.clone();
                bigger.insert(h);
                if rank(&full(&bigger)) == r {
                    out.insert(h);
                }
            }
            Some((out, r))
        };

        let mut found: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::new();
        let mut queue: Vec<BTreeSet<usize>> = Vec::new();
        for h in 0..rows.len() {
            let (s, r) = close(&BTreeSet::from([h])).expect("a hyperplane is nonempty");
            if found.insert(s.clone(), r).is_none() {
                queue.push(s);
            }
        }
        while let Some(e) = queue.pop() {
            for h in 0..rows.len() {
                if e.contains(&h) {
                    continue;
                }
                let mut s = e.clone();
                s.insert(h);
                if let Some((s, r)) = close(&s) {
                    if !found.contains_key(&s) {
                        found.insert(s.clone(), r);
                        queue.push(s);
                    }
                }
            }
        }
        let mut edges: Vec<Edge> = found
            .into_iter()
            .map(|(s, r)| Edge {
                n: s.len() as i64,
                nu: r as i64,
                hyperplanes: s,
            })
            .collect();
        edges.sort_by(|a, b| (a.nu, &a.hyperplanes).cmp(&(b.nu, &b.hyperplanes)));
        Ok(ArrangementLattice { n, hyperplanes, edges })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    /// Every edge, hyperplanes first, by codimension.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Nonempty chains `Z_1 > Z_2 > ...` of edges, as index lists.
    pub fn chains(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn go(a: &ArrangementLattice, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            let start = cur.last().map_or(0, |&i| i + 1);
            for j in start..a.edges.len() {
                let ok = cur.last().is_none_or(|&i| {
                    let (lo, hi) = (&a.edges[i], &a.edges[j]);
                    hi.nu > lo.nu && hi.hyperplanes.is_superset(&lo.hyperplanes)
                });
                if ok {
                    cur.push(j);
                    out.push(cur.clone());
                    go(a, cur, out);
                    cur.pop();
                }
            }
        }
        go(self, &mut cur, &mut out);
        out
    }

    /// `L^n sum_chains prod 1/(L^nu_Z T^-N_Z - 1)`.
    pub fn chain_sum(&self) -> ZetaExpr {
        let ln = l(self.n as i64);
        ZetaExpr::from_terms(
            self.chains()
                .into_iter()
                .map(|c| {
                    let fs = c.iter().map(|&i| den(self.edges[i].nu, self.edges[i].n)).collect();
                    ZetaTerm::new(ln.clone(), 0, fs)
                })
                .collect(),
        )
    }

    /// The chain sum read with `L^nu_Z T^N_Z - 1` in the denominators,
    /// expanded to `T^m`.
    pub fn positive_reading_series(&self, m: i64) -> Series {
        let mut out = Series::new();
        for c in self.chains() {
            let mut acc = Series::from([(0, l(self.n as i64))]);
            for &i in &c {
                let e = &self.edges[i];
                let mut next = Series::new();
                for (deg, coeff) in &acc {
                    let mut k = 0;
                    while deg + k * e.n <= m {
                        *next.entry(deg + k * e.n).or_default() += &-coeff.shift_l((e.nu * k).into());
                        k += 1;
                    }
                }
                acc = next;
            }
            for (deg, coeff) in acc {
                *out.entry(deg).or_default() += &coeff;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// For plane arrangements, the blow-up of every intersection point:
    /// lines are strict, points lie over the distinguished set.
    pub fn blowup_complex(&self) -> Result<WeightedDualComplex> {
        if self.n != 2 {
            return Err(Error::BadDimension(self.n));
        }
        let mut vertices = Vec::new();
        let mut cells = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            let v = VertexData::new(i as u32, e.n, e.nu, l(1));
            if e.nu == 1 {
                vertices.push(v.strict());
            } else {
                vertices.push(v.over_sigma(true));
                for (j, line) in self.edges.iter().enumerate().filter(|(_, x)| x.nu == 1) {
                    if e.hyperplanes.is_superset(&line.hyperplanes) {
                        cells.push((face(&[j as u32, i as u32]), vec![StratumComponent::new(BirElement::one())]));
                    }
                }
            }
        }
        WeightedDualComplex::from_parts(2, vertices, cells)
    }
}

/// The chain sum, and for plane arrangements the blow-up complex after
/// checking that both give the same function.
pub fn arrangement_zeta(arr: &ArrangementLattice) -> Result<(ZetaExpr, Option<WeightedDualComplex>)> {
    let z = arr.chain_sum();
    if arr.dim() != 2 {
        return Ok((z, None));
    }
    let c = arr.blowup_complex()?;
    let direct = c.zeta_bir(false);
    if !z.same_function(&direct, None)? {
        return Err(Error::ComparisonFailure(format!("chain sum {z}\ncomplex {direct}")));
    }
    Ok((z, Some(c)))
}

/// `d` lines through the origin.
pub fn concurrent_lines(d: i64) -> Result<ArrangementLattice> {
    ArrangementLattice::new(2, (0..d).map(|i| Hyperplane(vec![1, i, 0])).collect())
}

/// `k` lines `y = i x + i^2`, no three through a point.
pub fn generic_lines(k: i64) -> Result<ArrangementLattice> {
    ArrangementLattice::new(2, (1..=k).map(|i| Hyperplane(vec![i, -1, -i * i])).collect())
}

/// Named plane arrangements of at most six lines.
pub fn bundled_line_arrangements() -> Vec<(String, ArrangementLattice)> {
    let mut out = Vec::new();
    let mut add = |name: String, hs: Vec<Vec<i64>>| {
        let a = ArrangementLattice::new(2, hs.into_iter().map(Hyperplane).collect()).expect("bundled arrangement");
        out.push((name, a));
    };
    for d in 2..=6 {
        add(format!("concurrent-{d}"), concurrent_lines(d).unwrap().hyperplanes.into_iter().map(|h| h.0).collect());
    }
    for k in 2..=6 {
        add(format!("generic-{k}"), generic_lines(k).unwrap().hyperplanes.into_iter().map(|h| h.0).collect());
    }
    // x, y, x - y through the origin and extra lines in general position
    let triple = vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, -1, 0]];
    let extra = [vec![1, 2, 3], vec![3, 1, 5], vec![2, 5, -7]];
    for k in 0..=3 {
        let mut hs = triple.clone();
        hs.extend(extra[..k].iter().cloned());
        add(format!("triple-plus-{k}"), hs);
    }
    add("parallel-pair-and-transversal".into(), vec![vec![1, 0, 0], vec![1, 0, 1], vec![0, 1, 0]]);
    add("grid-2x2".into(), vec![vec![1, 0, 0], vec![1, 0, 1], vec![0, 1, 0], vec![0, 1, 1]]);
    // the braid arrangement cut by a plane: four triple points
    add(
        "complete-quadrilateral".into(),
        vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 1], vec![1, -1, 0], vec![1, 0, 1]],
    );
    add(
        "quadruple-and-two".into(),
        vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0], vec![1, -1, 0], vec![1, 0, 1], vec![0, 1, 1]],
    );
    out
}

/// The coordinate hyperplanes of `A^n`.
pub fn boolean_arrangement(n: usize) -> Result<ArrangementLattice> {
    ArrangementLattice::new(
        n,
        (0..n)
            .map(|i| {
                let mut h = vec![0; n + 1];
                h[i] = 1;
                Hyperplane(h)
            })
            .collect(),
    )
}

/// The snc complex of the coordinate hyperplanes: a full simplex whose
/// strata are coordinate subspaces.
pub fn boolean_complex(n: usize) -> Result<WeightedDualComplex> {
    let vertices = (0..n as u32).map(|i| VertexData::new(i, 1, 1, l(n as i64 - 1)).strict()).collect();
    let mut cells = Vec::new();
    for mask in 1u32..(1 << n) {
        let ids: Vec<u32> = (0..n as u32).filter(|b| mask >> b & 1 == 1).collect();
        if ids.len() >= 2 {
            cells.push((face(&ids), vec![StratumComponent::new(l((n - ids.len()) as i64))]));
        }
    }
    WeightedDualComplex::from_parts(n, vertices, cells)
}

/// A log canonical place: `nu = N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkeletonValuation {
    #[serde(rename = "N")]
    pub n: i64,
    pub cls: BirElement,
    #[serde(default = "yes")]
    pub over_sigma: bool,
}

fn yes() -> bool {
    true
}

impl SkeletonValuation {
    pub fn new(n: i64, cls: BirElement, over_sigma: bool) -> Self {
        SkeletonValuation { n, cls, over_sigma }
    }

    fn valuation(&self) -> DltValuation {
        DltValuation::new(self.n, self.n, self.cls.clone(), self.over_sigma)
    }
}

/// `sum {E} L / ((L T^-1)^N_E - 1)`.
pub fn skeleton_zeta(sk: &[SkeletonValuation], local: bool) -> ZetaExpr {
    let vals: Vec<DltValuation> = sk.iter().map(SkeletonValuation::valuation).collect();
    sum_over_valuations(&vals, local)
}

/// The skeleton of `xy = 0` up to `N <= max_n`: both branches, then every
/// monomial valuation with coprime positive weights, centered at the origin.
pub fn node_skeleton(max_n: i64) -> Vec<SkeletonValuation> {
    let mut out = vec![
        SkeletonValuation::new(1, l(1), false),
        SkeletonValuation::new(1, l(1), false),
    ];
    for total in 2..=max_n {
        for a in 1..total {
            if num_integer::gcd(a, total - a) == 1 {
                out.push(SkeletonValuation::new(total, l(1), true));
            }
        }
    }
    out
}

/// A random valid complex with `2 <= n <= max_n` and at most `max_vertices`
/// vertices. Classes are formal sums mixing powers of `L` with symbols; only
/// faces with nothing above them get several components, so every stellar
/// subdivision applies.
pub fn random_complex<R: Rng>(rng: &mut R, max_n: usize, max_vertices: usize) -> WeightedDualComplex {
    random_complex_with(rng, max_n, max_vertices, false)
}

/// As [`random_complex`]; with `irreducible` every class is a single
/// monomial `{Z} L^k`, as for an actual variety, so COUNT gives 1 on it.
pub fn random_complex_with<R: Rng>(
    rng: &mut R,
    max_n: usize,
    max_vertices: usize,
    irreducible: bool,
) -> WeightedDualComplex {
    let n = rng.gen_range(2..=max_n.max(2));
    let nv = rng.gen_range(1..=max_vertices.max(1)) as u32;
    let class = |rng: &mut R, dim: i64| -> BirElement {
        let mut c = BirElement::zero();
        let terms = if irreducible { 1 } else { rng.gen_range(1..=2) };
        for _ in 0..terms {
            let k = rng.gen_range(0..=dim);
            let coeff = if irreducible { 1 } else { rng.gen_range(1..=2) };
            let term = if k == 0 || rng.gen_bool(0.3) {
                l(dim)
            } else {
                let sym = ["A", "B", "C"][rng.gen_range(0..3)];
                BirElement::class(format!("{sym}{k}"), k as u32).shift_l((dim - k).into())
            };
            c += &term.scale(coeff);
        }
        c
    };
    let vertices: Vec<VertexData> = (0..nv)
        .map(|id| {
            let nu: Ratio<i64> = if rng.gen_bool(0.2) {
                Ratio::new(rng.gen_range(1..=7), 2)
            } else {
                Ratio::from_integer(rng.gen_range(1..=4))
            };
            let cls = class(rng, n as i64 - 1);
            VertexData::new(id, rng.gen_range(1..=4), nu, cls).over_sigma(rng.gen_bool(0.6))
        })
        .collect();

    let mut faces: BTreeSet<Vec<u32>> = BTreeSet::new();
    for size in 2..=n.min(nv as usize) {
        let mut candidates: Vec<Vec<u32>> = Vec::new();
        subsets(nv, size, &mut Vec::new(), 0, &mut candidates);
        for f in candidates {
            let boundary_ok = size == 2
                || (0..size).all(|skip| {
                    let sub: Vec<u32> = f.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, v)| *v).collect();
                    faces.contains(&sub)
                });
            if boundary_ok && rng.gen_bool(0.5) {
                faces.insert(f);
            }
        }
    }
    let maximal: Vec<bool> = faces
        .iter()
        .map(|f| !faces.iter().any(|g| g.len() > f.len() && f.iter().all(|v| g.contains(v))))
        .collect();
    let cells = faces
        .iter()
        .zip(maximal)
        .map(|(f, top)| {
            let count = if top && rng.gen_bool(0.3) { 2 } else { 1 };
            let comps = (0..count)
                .map(|_| StratumComponent::new(class(rng, (n - f.len()) as i64)))
                .collect();
            (face(f), comps)
        })
        .collect();
    WeightedDualComplex::from_parts(n, vertices, cells).expect("generated complex is valid")
}

fn subsets(nv: u32, size: usize, cur: &mut Vec<u32>, from: u32, out: &mut Vec<Vec<u32>>) {
    if cur.len() == size {
        out.push(cur.clone());
        return;
    }
    for v in from..nv {
        cur.push(v);
        subsets(nv, size, cur, v + 1, out);
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::Specialization;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cone_below_degree() {
        let ex = cone_example(3, 2).unwrap();
        assert_eq!(ex.complex.vertices().count(), 1);
        assert!(ex.complex.zeta_bir(false).same_function(&ex.expected, None).unwrap());
        assert!(ex.complex.zeta_bir(true).normalize(None).unwrap().is_zero());
        assert!(ex.complex.nearby_cycles(true).is_zero());
    }

    #[test]
    fn cone_closed_forms() {
        for (n, d) in [(3, 3), (3, 4), (4, 5), (3, 7)] {
            let ex = cone_example(n, d).unwrap();
            assert_eq!(ex.complex.vertices().count(), 2, "d = n uses the blow-up");
            for (local, want) in [(false, &ex.expected), (true, &ex.expected_local)] {
                assert!(ex.complex.zeta_bir(local).same_function(want, None).unwrap(), "{n} {d} {local}");
            }
        }
        assert!(cone_example(2, 3).is_err());
    }

    #[test]
    fn cone_enumeration() {
        assert!(sm_enumeration_check(3, 4, 4));
        assert!(sm_enumeration_check(3, 4, 5));
        assert!(sm_enumeration_check(3, 3, 1));
        for (n, d) in [(3, 3), (3, 4), (4, 5), (3, 5)] {
            assert!((1..=3 * d).all(|m| sm_enumeration_check(n, d, m)), "{n} {d}");
        }
        assert!(!sm_enumeration_check(3, 2, 2));
        // i in {-1, 0} for (3, 4, 5)
        let h = BirElement::class("H", 1);
        let want = &h.shift_l((-3).into()) + &h.shift_l((-2).into());
        assert_eq!(cone_sm_coefficient(3, 4, 5), want);
    }

    #[test]
    fn lattice_of_three_concurrent_lines() {
        let a = concurrent_lines(3).unwrap();
        assert_eq!(a.edges().len(), 4);
        let point = a.edges().last().unwrap();
        assert_eq!((point.nu, point.n), (2, 3));
        assert_eq!(a.chains().len(), 7);
        // L^2 [3/(L T^-1 - 1) + 1/(L^2 T^-3 - 1) + 3/((L T^-1 - 1)(L^2 T^-3 - 1))]
        let want = ZetaExpr::from_terms(vec![
            ZetaTerm::new(l(2).scale(3), 0, vec![den(1, 1)]),
            ZetaTerm::new(l(2), 0, vec![den(2, 3)]),
            ZetaTerm::new(l(2).scale(3), 0, vec![den(1, 1), den(2, 3)]),
        ]);
        let (z, c) = arrangement_zeta(&a).unwrap();
        assert!(z.same_function(&want, None).unwrap());
        assert_eq!(c.unwrap().vertices().count(), 4);
    }

    #[test]
    fn lattice_edge_cases() {
        let par = ArrangementLattice::new(2, vec![Hyperplane(vec![1, 0, 0]), Hyperplane(vec![1, 0, 1])]).unwrap();
        assert_eq!(par.edges().len(), 2);
        let dup = ArrangementLattice::new(2, vec![Hyperplane(vec![1, 1, 0]), Hyperplane(vec![2, 2, 0])]);
        assert!(matches!(dup, Err(Error::DegenerateArrangement(_))));
        assert!(ArrangementLattice::new(2, vec![Hyperplane(vec![0, 0, 1])]).is_err());
        assert!(ArrangementLattice::new(2, vec![Hyperplane(vec![1, 0])]).is_err());
        let g = generic_lines(4).unwrap();
        assert_eq!(g.edges().len(), 4 + 6);
        assert!(g.edges().iter().filter(|e| e.nu == 2).all(|e| e.n == 2));
    }

    #[test]
    fn bundled_arrangements_agree_with_complexes() {
        let all = bundled_line_arrangements();
        assert!(all.len() >= 15);
        for (name, a) in &all {
            assert!(a.hyperplanes().len() <= 6, "{name}");
            assert!(arrangement_zeta(a).is_ok(), "{name}");
        }
    }

    #[test]
    fn positive_exponent_reading_is_wrong() {
        for (_, a) in bundled_line_arrangements() {
            let direct = a.blowup_complex().unwrap().zeta_bir(false).series_expand(6).unwrap();
            assert_ne!(a.positive_reading_series(6), direct);
            assert_eq!(a.chain_sum().series_expand(6).unwrap(), direct);
        }
    }

    #[test]
    fn boolean_arrangement_matches_snc_complex() {
        for n in 2..=4 {
            let a = boolean_arrangement(n).unwrap();
            let c = boolean_complex(n).unwrap();
            assert!(a.chain_sum().same_function(&c.zeta_bir(false), None).unwrap(), "{n}");
        }
        let c = boolean_complex(3).unwrap();
        let vals = c.quasi_monomial_valuations(8);
        let trunc = crate::truncation::dlt_truncation(&vals, 8, false);
        assert_eq!(boolean_arrangement(3).unwrap().chain_sum().series_expand(8).unwrap(), trunc);
    }

    #[test]
    fn two_generic_lines_near_the_node() {
        let c = generic_lines(2).unwrap().blowup_complex().unwrap();
        let want = ZetaExpr::term(l(2), 0, vec![den(1, 1), den(1, 1)]);
        assert!(c.zeta_bir(true).same_function(&want, None).unwrap());
    }

    #[test]
    fn skeleta() {
        let d = BirElement::class("D", 1);
        let one = skeleton_zeta(&[SkeletonValuation::new(1, d.clone(), true)], false);
        assert_eq!(one, ZetaExpr::term(&d * &l(1), 0, vec![den(1, 1)]));
        let e1 = BirElement::class("E1", 1);
        let e2 = BirElement::class("E2", 1);
        let two = skeleton_zeta(
            &[SkeletonValuation::new(1, e1, true), SkeletonValuation::new(2, e2, true)],
            false,
        );
        assert_eq!(two.terms().len(), 2);
        let long = two.series_expand(12).unwrap();
        let short = two.series_expand(5).unwrap();
        assert!(short.iter().all(|(k, c)| long.get(k) == Some(c)));
    }

    #[test]
    fn node_skeleton_matches_the_blown_up_node() {
        let c = generic_lines(2).unwrap().blowup_complex().unwrap();
        let sk = skeleton_zeta(&node_skeleton(12), true).series_expand(12).unwrap();
        assert_eq!(sk, c.zeta_bir(true).series_expand(12).unwrap());
        let global = skeleton_zeta(&node_skeleton(12), false).rho().series_expand(12).unwrap();
        assert_eq!(global, c.zeta_bir(false).rho().series_expand(12).unwrap());
    }

    #[test]
    fn random_complexes_are_subdivision_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let c = random_complex(&mut rng, 4, 6);
            let before = c.zeta_bir(false);
            for (f, comps) in c.cells() {
                for i in 0..comps.len() {
                    let s = c.stellar_subdivide(f, i, None).unwrap();
                    assert!(s
                        .zeta_bir(false)
                        .same_function(&before, Some(&Specialization::Rho))
                        .unwrap());
                }
            }
        }
    }
}
