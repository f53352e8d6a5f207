//! Building minimal resolution graphs from sequences of point blow-ups.

use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{edge, CurveDualGraph, CurveVertex};
use crate::error::{Error, Result};

/// Where a blow-up happens. Exceptional curves are numbered from 1 in the
/// order they are created.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Center {
    /// The singular point itself; only as the first step.
    Origin,
    /// A general point of `E_i`.
    Free(usize),
    /// The intersection point of `E_i` and `E_j`.
    Satellite(usize, usize),
}

/// Blow-ups followed by curvettes: smooth branches meeting the named
/// exceptional curves transversally at general points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupScript {
    pub steps: Vec<Center>,
    pub curvettes: Vec<usize>,
}

impl BlowupScript {
    pub fn new(steps: Vec<Center>, curvettes: Vec<usize>) -> Self {
        BlowupScript { steps, curvettes }
    }

    /// Runs the script. The result need not be minimal; see `is_minimal`.
    pub fn build(&self) -> Result<CurveDualGraph> {
        let k = self.steps.len();
        if k == 0 || self.steps[0] != Center::Origin {
            return Err(Error::BadParameters("a script starts with the origin".into()));
        }
        // curves through each center, and the intersection graph as it grows
        let mut through: Vec<Vec<usize>> = Vec::with_capacity(k);
        let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut kappa = vec![0i64; k + 1];
        for (idx, step) in self.steps.iter().enumerate() {
            let j = idx + 1;
            let p = match *step {
                Center::Origin if j == 1 => vec![],
                Center::Origin => return Err(Error::BadParameters("origin can only be blown up first".into())),
                Center::Free(i) if (1..j).contains(&i) => vec![i],
                Center::Satellite(a, b) if edges.contains(&(a.min(b), a.max(b))) => vec![a.min(b), a.max(b)],
                other => return Err(Error::BadParameters(format!("step {j}: no such center {other:?}"))),
            };
            if p.len() == 2 {
                edges.remove(&(p[0], p[1]));
            }
            for &i in &p {
                kappa[i] += 1;
                edges.insert((i, j));
            }
            kappa[j] = 1;
            through.push(p);
        }
        if let Some(bad) = self.curvettes.iter().find(|c| !(1..=k).contains(*c)) {
            return Err(Error::BadParameters(format!("curvette on unknown curve E{bad}")));
        }
        if self.curvettes.is_empty() {
            return Err(Error::BadParameters("a script needs at least one curvette".into()));
        }

        // coefficient of E_l in the total transform of E_j
        let mut total = vec![vec![0i64; k + 1]; k + 1];
        for j in 1..=k {
            total[j][j] = 1;
            for l in j + 1..=k {
                total[j][l] = through[l - 1].iter().map(|&i| total[j][i]).sum();
            }
        }
        let mult: Vec<i64> = (0..=k)
            .map(|j| if j == 0 { 0 } else { self.curvettes.iter().map(|&c| total[j][c]).sum() })
            .collect();
        let mut n = vec![0i64; k + 1];
        let mut nu = vec![0i64; k + 1];
        for j in 1..=k {
            let p = &through[j - 1];
            n[j] = p.iter().map(|&i| n[i]).sum::<i64>() + mult[j];
            nu[j] = p.iter().map(|&i| nu[i]).sum::<i64>() + 2 - p.len() as i64;
        }

        let mut vertices: Vec<CurveVertex> = (1..=k)
            .map(|j| CurveVertex::exceptional(j as u32, n[j], nu[j], kappa[j]))
            .collect();
        let mut all_edges: Vec<(u32, u32)> = edges.iter().map(|&(a, b)| edge(a as u32, b as u32)).collect();
        for (b, &c) in self.curvettes.iter().enumerate() {
            let id = (k + 1 + b) as u32;
            vertices.push(CurveVertex::branch(id));
            all_edges.push((c as u32, id));
        }
        CurveDualGraph::from_parts(vertices, all_edges, "a")
    }
}

/// Distinct minimal germs from random scripts, reproducible from the seed.
pub fn random_germs(seed: u64, count: usize) -> Vec<(BlowupScript, CurveDualGraph)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<(BlowupScript, CurveDualGraph)> = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < 200 * count.max(1) {
        attempts += 1;
        let len = rng.gen_range(1..=6);
        let mut steps = vec![Center::Origin];
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for j in 2..=len {
            let satellite = !edges.is_empty() && rng.gen_bool(0.5);
            if satellite {
                let (a, b) = edges.remove(rng.gen_range(0..edges.len()));
                steps.push(Center::Satellite(a, b));
                edges.push((a, j));
                edges.push((b, j));
            } else {
                let i = rng.gen_range(1..j);
                steps.push(Center::Free(i));
                edges.push((i, j));
            }
        }
        let branches = rng.gen_range(1..=3);
        let curvettes: Vec<usize> = (0..branches)
            .map(|_| if rng.gen_bool(0.6) { len } else { rng.gen_range(1..=len) })
            .collect();
        let script = BlowupScript::new(steps, curvettes);
        let Ok(g) = script.build() else { continue };
        if g.is_minimal() && !out.iter().any(|(_, h)| *h == g) {
            out.push((script, g));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use Center::*;

    fn data(g: &CurveDualGraph, id: u32) -> (i64, i64, i64) {
        let v = g.vertex(id).unwrap();
        (v.n, v.nu, v.kappa.unwrap())
    }

    #[test]
    fn cusp_script() {
        let g = BlowupScript::new(vec![Origin, Free(1), Satellite(1, 2)], vec![3]).build().unwrap();
        assert_eq!(data(&g, 1), (2, 2, 3));
        assert_eq!(data(&g, 2), (3, 3, 2));
        assert_eq!(data(&g, 3), (6, 5, 1));
        assert!(g.is_minimal());
        assert!(g.validate_numerics().passes());
    }

    #[test]
    fn simple_singularities() {
        let e6 = BlowupScript::new(vec![Origin, Free(1), Satellite(1, 2), Satellite(1, 3)], vec![4]);
        let g = e6.build().unwrap();
        assert_eq!((data(&g, 4).0, data(&g, 4).1), (12, 7));
        let e8 = BlowupScript::new(vec![Origin, Free(1), Satellite(1, 2), Satellite(2, 3)], vec![4]);
        let g = e8.build().unwrap();
        assert_eq!((data(&g, 4).0, data(&g, 4).1), (15, 8));
        let a4 = BlowupScript::new(vec![Origin, Free(1), Free(2), Satellite(2, 3)], vec![4]);
        let g = a4.build().unwrap();
        assert_eq!((data(&g, 4).0, data(&g, 4).1), (10, 7));
        assert!(g.is_minimal() && g.validate_numerics().passes());
    }

    #[test]
    fn tacnode_and_ordinary_points() {
        let g = BlowupScript::new(vec![Origin, Free(1)], vec![2, 2]).build().unwrap();
        assert_eq!(data(&g, 2), (4, 3, 1));
        assert_eq!(data(&g, 1), (2, 2, 2));
        for d in 3..7 {
            let g = BlowupScript::new(vec![Origin], vec![1; d]).build().unwrap();
            assert_eq!(data(&g, 1), (d as i64, 2, 1));
            assert!(g.is_minimal());
        }
        let two = BlowupScript::new(vec![Origin], vec![1, 1]).build().unwrap();
        assert!(!two.is_minimal());
    }

    #[test]
    fn bad_scripts() {
        assert!(BlowupScript::new(vec![Free(1)], vec![1]).build().is_err());
        assert!(BlowupScript::new(vec![Origin, Satellite(1, 2)], vec![1]).build().is_err());
        assert!(BlowupScript::new(vec![Origin], vec![2]).build().is_err());
        assert!(BlowupScript::new(vec![Origin], vec![]).build().is_err());
    }

    #[test]
    fn random_germs_are_valid_and_reproducible() {
        let a = random_germs(7, 25);
        assert_eq!(a.len(), 25);
        for (s, g) in &a {
            assert!(g.validate_numerics().passes(), "{s:?}\n{g}");
            assert!(g.is_minimal());
        }
        assert_eq!(a, random_germs(7, 25));
    }
}
