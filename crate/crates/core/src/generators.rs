//! Instance families: the exponential-spread triple, a non-realizable
//! triple, a gap-sensitive quadruple and the stretchability reduction.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::duality::{intersection_order, PointSet, VerticalLineConfig};
use crate::error::{Error, Result};
use crate::geom::{perm, PathPerm, Point2};
use crate::lp::{build_embedding_lp, embedding_var, feasible, minimize, LpProblem, Optimum};
use crate::rat::Rat;
use crate::sequences::{is_allowable_sequence, PathSet};

/// The triple on `n = 3m + 2` vertices whose embeddings need slopes
/// exponential in `m`.
pub fn gen_expo(m: usize) -> Result<PathSet> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be positive".into()));
    }
    let n = 3 * m + 2;
    let p1: Vec<usize> = (1..=n).collect();
    let mut p2 = vec![1];
    p2.extend((1..=m).map(|i| 3 * i));
    p2.push(2);
    p2.extend((4..=n).filter(|x| x % 3 != 0));
    let mut p3: Vec<usize> = (3..=n).filter(|x| x % 3 != 1).rev().collect();
    p3.push(2);
    p3.extend((1..=m).rev().map(|i| 3 * i + 1));
    p3.push(1);
    PathSet::from_orders(&[p1, p2, p3])
}

/// `2^m (2m + 3) + 2m - 1`.
pub fn expo_lower_bound(m: usize) -> Rat {
    let m = m as i64;
    let pow = Rat::from(num_bigint::BigInt::from(2).pow(m as u32));
    pow * Rat::from(2 * m + 3) + Rat::from(2 * m - 1)
}

/// The LP behind the spread bound: `P_2` and `P_3` on vertical lines one unit
/// apart, the first path encoded as increasing slopes at unit steps, and the
/// slope of line 1 pinned to zero. Returns the problem and the objective
/// (slope of line `n`).
pub fn expo_spread_lp(m: usize) -> Result<(LpProblem, Vec<(usize, Rat)>)> {
    let ps = gen_expo(m)?;
    let n = ps.n();
    let seq = [ps.paths()[1].clone(), ps.paths()[2].clone()];
    let mut lp = build_embedding_lp(&seq, &VerticalLineConfig::unit(2))?;
    let slope = |j: usize| {
        vec![
            (embedding_var(n, 1, j), Rat::one()),
            (embedding_var(n, 0, j), Rat::from(-1)),
        ]
    };
    // at x = -∞ the top-to-bottom order is by increasing slope
    for w in ps.paths()[0].order().windows(2) {
        let mut row = slope(w[1]);
        row.extend(slope(w[0]).into_iter().map(|(v, a)| (v, -a)));
        lp.add_ge(row, 1);
    }
    lp.add_eq(slope(1), 0);
    Ok((lp, slope(n)))
}

/// Minimum slope of line `n` over [`expo_spread_lp`].
pub fn expo_min_top_slope(m: usize) -> Result<Rat> {
    let (lp, obj) = expo_spread_lp(m)?;
    match minimize(&lp, &obj)? {
        Optimum::Optimal { value, .. } => Ok(value),
        other => Err(Error::InvalidInput(format!("spread LP did not solve: {other:?}"))),
    }
}

/// Frozen output of [`search_nonrealizable_triple`]`(9, 1, 20)`: an
/// allowable triple whose LP at the canonical vertical lines is infeasible.
pub fn gen_nonrealizable_triple() -> PathSet {
    PathSet::new(NONREALIZABLE.iter().map(|p| perm(p)).collect()).expect("fixture is valid")
}

const NONREALIZABLE: [[usize; 9]; 3] = [
    [1, 2, 3, 4, 5, 6, 7, 8, 9],
    [1, 7, 3, 5, 4, 8, 9, 6, 2],
    [8, 7, 3, 9, 5, 6, 4, 2, 1],
];

/// Largest `t` such that some placement with coordinates in `[-1, 1]` keeps
/// every consecutive pair of `seq` (read at `x = 0, 1, 2`) at least `t` apart.
/// Positive exactly when the triple is realizable in this order.
pub fn triple_margin(seq: &[PathPerm; 3]) -> Result<Rat> {
    let n = seq[0].len();
    // a_j at x = 0, c_j at x = 2; the middle ordinate is (a_j + c_j) / 2
    let (a, c, t) = (|j: usize| j - 1, |j: usize| n + j - 1, 2 * n);
    let mut lp = LpProblem::new(2 * n + 1);
    let value = |i: usize, j: usize| -> Vec<(usize, Rat)> {
        match i {
            0 => vec![(a(j), Rat::one())],
            1 => vec![(a(j), Rat::one()), (c(j), Rat::one())],
            _ => vec![(c(j), Rat::one())],
        }
    };
    for (i, path) in seq.iter().enumerate() {
        for w in path.order().windows(2) {
            let mut row = value(i, w[0]);
            row.extend(value(i, w[1]).into_iter().map(|(v, x)| (v, -x)));
            row.push((t, Rat::from(-1)));
            lp.add_ge(row, 0);
        }
    }
    for v in 0..2 * n {
        lp.add_ge(vec![(v, Rat::one())], -1);
        lp.add_ge(vec![(v, Rat::from(-1))], -1);
    }
    match minimize(&lp, &[(t, Rat::from(-1))])? {
        Optimum::Optimal { value, .. } => Ok(-value),
        other => Err(Error::InvalidInput(format!("margin LP did not solve: {other:?}"))),
    }
}

/// Simulated annealing over allowable triples `⟨id, P, Q⟩` on `n` vertices,
/// driving [`triple_margin`] down by adjacent transpositions until it
/// vanishes. `budget` counts restarts of 2000 steps each.
pub fn search_nonrealizable_triple(n: usize, seed: u64, budget: usize) -> Result<Option<PathSet>> {
    if n < 3 {
        return Err(Error::InvalidInput("need at least 3 vertices".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p0 = PathPerm::identity(n);
    let swapped = |p: &PathPerm, i: usize| {
        let mut o = p.order().to_vec();
        o.swap(i, i + 1);
        PathPerm::new(o).expect("transposition keeps a permutation")
    };
    for _ in 0..budget {
        let mut o1: Vec<usize> = (1..=n).collect();
        o1.shuffle(&mut rng);
        let mut p1 = PathPerm::new(o1)?;
        // start from the middle order and drift away within allowable triples
        let mut p2 = p1.clone();
        for _ in 0..4 * n {
            let q = swapped(&p2, rng.gen_range(0..n - 1));
            if is_allowable_sequence(&[p0.clone(), p1.clone(), q.clone()]) {
                p2 = q;
            }
        }
        let mut cur = triple_margin(&[p0.clone(), p1.clone(), p2.clone()])?;
        let mut temp = 0.05f64;
        for _ in 0..2000 {
            let i = rng.gen_range(0..n - 1);
            let (q1, q2) = if rng.gen_bool(0.5) {
                (swapped(&p1, i), p2.clone())
            } else {
                (p1.clone(), swapped(&p2, i))
            };
            temp *= 0.999;
            let triple = [p0.clone(), q1, q2];
            if triple[1] == triple[0] || triple[2] == triple[0] || triple[1] == triple[2] {
                continue;
            }
            if !is_allowable_sequence(&triple) {
                continue;
            }
            let m = triple_margin(&triple)?;
            let uphill = (&m - &cur).to_f64();
            if uphill <= 0.0 || rng.gen_bool((-uphill / temp).exp().clamp(0.0, 1.0)) {
                let [_, q1, q2] = triple;
                p1 = q1;
                p2 = q2;
                cur = m;
            }
            if !cur.is_positive() {
                return Ok(Some(PathSet::new(vec![p0, p1, p2])?));
            }
        }
    }
    Ok(None)
}

/// Four paths with two vertical-line configurations that share the outer
/// lines: the LP is feasible at `cfg_a` and infeasible at `cfg_b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapSensitive {
    pub paths: PathSet,
    pub cfg_a: VerticalLineConfig,
    pub cfg_b: VerticalLineConfig,
}

/// Frozen output of [`find_gap_sensitive`]`(20000, 7)`.
pub fn gap_sensitive_fixture() -> GapSensitive {
    let r = |v: &[(i64, i64)]| {
        VerticalLineConfig::new(v.iter().map(|&(p, q)| Rat::new(p, q)).collect()).expect("increasing")
    };
    GapSensitive {
        paths: PathSet::new(GAP_PATHS.iter().map(|p| perm(p)).collect()).expect("fixture is valid"),
        cfg_a: r(&GAP_A),
        cfg_b: r(&GAP_B),
    }
}

const GAP_PATHS: [[usize; 7]; 4] = [
    [6, 4, 7, 2, 1, 3, 5],
    [6, 7, 4, 1, 2, 3, 5],
    [1, 6, 2, 3, 7, 5, 4],
    [1, 3, 2, 6, 5, 7, 4],
];
const GAP_A: [(i64, i64); 4] = [(-6, 1), (-2, 1), (0, 1), (1, 1)];
const GAP_B: [(i64, i64); 4] = [(-6, 1), (-5, 4), (-3, 4), (1, 1)];

/// Random small integer point sets read at four vertical lines in the dual;
/// the two middle lines are pulled toward each other until the LP fails.
pub fn find_gap_sensitive(budget: usize, seed: u64) -> Result<Option<GapSensitive>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..budget {
        let n = rng.gen_range(4..=7);
        let pts: Vec<Point2> = (0..n)
            .map(|_| Point2::new(rng.gen_range(-6i64..=6), rng.gen_range(-6i64..=6)))
            .collect();
        let Ok(pts) = PointSet::new(pts) else { continue };
        let mut xs: Vec<i64> = (-8..=8).collect();
        xs.shuffle(&mut rng);
        let mut xs: Vec<Rat> = xs[..4].iter().map(|&x| Rat::from(x)).collect();
        xs.sort();
        let lines = pts.dual_lines();
        let Ok(paths) = xs.iter().map(|x| intersection_order(&lines, x)).collect::<Result<Vec<_>>>() else {
            continue;
        };
        if paths.iter().collect::<HashSet<_>>().len() < 4 {
            continue;
        }
        let cfg_a = VerticalLineConfig::new(xs.clone())?;
        let mid = (&xs[1] + &xs[2]) * Rat::new(1, 2);
        let mut s = Rat::new(1, 2);
        for _ in 0..6 {
            let x2 = &mid - &(&(&mid - &xs[1]) * &s);
            let x3 = &mid + &(&(&xs[2] - &mid) * &s);
            let cfg_b = VerticalLineConfig::new(vec![xs[0].clone(), x2, x3, xs[3].clone()])?;
            if !feasible(&build_embedding_lp(&paths, &cfg_b)?)?.is_feasible() {
                let found = GapSensitive {
                    paths: PathSet::new(paths)?,
                    cfg_a,
                    cfg_b,
                };
                return Ok(Some(found));
            }
            s = s * Rat::new(1, 2);
        }
    }
    Ok(None)
}

/// An x-monotone pseudoline arrangement given by its crossing sequence.
///
/// Orders are read bottom to top; `initial` is the order at the far left.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawWiring")]
pub struct WiringDiagram {
    n: usize,
    initial: PathPerm,
    crossings: Vec<(usize, usize)>,
}

#[derive(Deserialize)]
struct RawWiring {
    n: usize,
    #[serde(default)]
    initial: Option<PathPerm>,
    crossings: Vec<(usize, usize)>,
}

impl TryFrom<RawWiring> for WiringDiagram {
    type Error = Error;

    fn try_from(raw: RawWiring) -> Result<Self> {
        let initial = raw.initial.unwrap_or_else(|| PathPerm::identity(raw.n));
        if initial.len() != raw.n {
            return Err(Error::InvalidWiring("initial order has the wrong length".into()));
        }
        WiringDiagram::new(initial, raw.crossings)
    }
}

impl WiringDiagram {
    /// Checks that each crossing swaps two neighbours and every pair crosses
    /// exactly once.
    pub fn new(initial: PathPerm, crossings: Vec<(usize, usize)>) -> Result<Self> {
        let n = initial.len();
        let w = WiringDiagram { n, initial, crossings };
        let mut order = w.initial.order().to_vec();
        let mut pos: Vec<usize> = vec![0; n + 1];
        for (p, &v) in order.iter().enumerate() {
            pos[v] = p;
        }
        let mut seen = HashSet::new();
        for &(a, b) in &w.crossings {
            if a == 0 || b == 0 || a > n || b > n || a == b {
                return Err(Error::InvalidWiring(format!("bad crossing ({a}, {b})")));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::InvalidWiring(format!("pair ({a}, {b}) crosses twice")));
            }
            let (pa, pb) = (pos[a], pos[b]);
            if pa.abs_diff(pb) != 1 {
                return Err(Error::InvalidWiring(format!("({a}, {b}) are not neighbours")));
            }
            order.swap(pa, pb);
            pos[a] = pb;
            pos[b] = pa;
        }
        if seen.len() != n * (n - 1) / 2 {
            return Err(Error::InvalidWiring(format!(
                "{} of {} pairs cross",
                seen.len(),
                n * (n - 1) / 2
            )));
        }
        Ok(w)
    }

    /// Random sweep: repeatedly cross a uniformly chosen pair of neighbours
    /// that have not crossed yet.
    pub fn random(initial: PathPerm, rng: &mut impl Rng) -> Self {
        let mut order = initial.order().to_vec();
        let mut crossings = Vec::new();
        loop {
            let cand: Vec<usize> = (0..order.len() - 1)
                .filter(|&i| initial.precedes(order[i], order[i + 1]))
                .collect();
            let Some(&i) = cand.choose(rng) else { break };
            crossings.push((order[i], order[i + 1]));
            order.swap(i, i + 1);
        }
        WiringDiagram::new(initial, crossings).expect("random sweep is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn initial(&self) -> &PathPerm {
        &self.initial
    }

    pub fn crossings(&self) -> &[(usize, usize)] {
        &self.crossings
    }

    /// Bottom-to-top orders before the first crossing and after each one.
    pub fn snapshots(&self) -> Vec<PathPerm> {
        let mut order = self.initial.order().to_vec();
        let mut out = vec![self.initial.clone()];
        for &(a, b) in &self.crossings {
            let pa = order.iter().position(|&v| v == a).expect("label present");
            let pb = order.iter().position(|&v| v == b).expect("label present");
            order.swap(pa, pb);
            out.push(PathPerm::new(order.clone()).expect("still a permutation"));
        }
        out
    }

    /// Pseudolines above crossing `t`.
    pub fn above(&self, t: usize) -> Vec<usize> {
        let before = &self.snapshots()[t];
        let (a, b) = self.crossings[t];
        let top = before.rank(a).max(before.rank(b));
        before.order()[top + 1..].to_vec()
    }

    pub fn relabeled(&self, map: &[usize]) -> Result<WiringDiagram> {
        let crossings = self.crossings.iter().map(|&(a, b)| (map[a - 1], map[b - 1])).collect();
        WiringDiagram::new(self.initial.relabeled(map)?, crossings)
    }
}

/// Paths over vertex subsets, to be embedded with directions in list order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GmseInstance {
    pub n: usize,
    pub paths: Vec<Vec<usize>>,
}

impl GmseInstance {
    pub fn relabeled(&self, map: &[usize]) -> GmseInstance {
        GmseInstance {
            n: self.n,
            paths: self
                .paths
                .iter()
                .map(|p| p.iter().map(|&v| map[v - 1]).collect())
                .collect(),
        }
    }
}

/// The first path is the left-end order; then, crossing by crossing, the
/// pair `(i, j)` with `i` before `j` in that order contributes `⟨j, i, l⟩`
/// for each pseudoline `l` above the crossing and `⟨l, j, i⟩` for each one
/// below it.
pub fn reduce_stretchability(w: &WiringDiagram) -> GmseInstance {
    let p1 = w.initial();
    let mut paths = vec![p1.order().to_vec()];
    let snaps = w.snapshots();
    for (t, &(a, b)) in w.crossings().iter().enumerate() {
        let (i, j) = if p1.precedes(a, b) { (a, b) } else { (b, a) };
        let before = &snaps[t];
        let top = before.rank(i).max(before.rank(j));
        for &l in before.order() {
            if l == i || l == j {
                continue;
            }
            if before.rank(l) > top {
                paths.push(vec![j, i, l]);
            } else {
                paths.push(vec![l, j, i]);
            }
        }
    }
    GmseInstance { n: w.n(), paths }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::Feasibility;
    use crate::embedder::{solve_three_free, Decision, Rejection};

    #[test]
    fn expo_instances() {
        let ps = gen_expo(1).unwrap();
        assert_eq!(ps.paths()[0], perm(&[1, 2, 3, 4, 5]));
        assert_eq!(ps.paths()[1], perm(&[1, 3, 2, 4, 5]));
        assert_eq!(ps.paths()[2], perm(&[5, 3, 2, 4, 1]));
        let ps = gen_expo(2).unwrap();
        assert_eq!(ps.n(), 8);
        assert_eq!(ps.paths()[1], perm(&[1, 3, 6, 2, 4, 5, 7, 8]));
        assert!(gen_expo(0).is_err());
    }

    #[test]
    fn expo_bound_values() {
        let got: Vec<Rat> = (1..=5).map(expo_lower_bound).collect();
        let want: Vec<Rat> = [11, 31, 77, 183, 425].iter().map(|&v| Rat::from(v)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn expo_spread_small() {
        assert!(expo_min_top_slope(1).unwrap() >= expo_lower_bound(1));
        assert!(expo_min_top_slope(2).unwrap() >= expo_lower_bound(2));
    }

    #[test]
    fn expo_is_realizable() {
        for m in 1..=3 {
            let ps = gen_expo(m).unwrap();
            let Decision::Yes(e) = solve_three_free(&ps).unwrap() else { panic!("m = {m}") };
            assert!(e.verify(&ps));
        }
    }

    #[test]
    fn nonrealizable_fixture() {
        let ps = gen_nonrealizable_triple();
        assert_eq!(ps.n(), 9);
        let aps = crate::sequences::adjust(&ps, 1, 2).unwrap();
        assert!(crate::sequences::allowable_order(&aps).is_some());
        let Decision::No(Rejection::LpInfeasible { lp, certificate }) = solve_three_free(&ps).unwrap() else {
            panic!()
        };
        assert!(certificate.verify(&lp));
    }

    #[test]
    fn gap_fixture() {
        let g = gap_sensitive_fixture();
        assert_eq!(g.paths.k(), 4);
        let (a, b) = (g.cfg_a.xs(), g.cfg_b.xs());
        assert_eq!((&a[0], &a[3]), (&b[0], &b[3]));
        assert!(a[1] != b[1] && a[2] != b[2]);
        let lp_a = build_embedding_lp(g.paths.paths(), &g.cfg_a).unwrap();
        let Feasibility::Feasible(sol) = feasible(&lp_a).unwrap() else { panic!() };
        assert!(lp_a.is_satisfied_by(&sol.assignment));
        let lp_b = build_embedding_lp(g.paths.paths(), &g.cfg_b).unwrap();
        let Feasibility::Infeasible(cert) = feasible(&lp_b).unwrap() else { panic!() };
        assert!(cert.verify(&lp_b));
    }

    #[test]
    fn wiring_validation() {
        let id = PathPerm::identity(3);
        assert!(WiringDiagram::new(id.clone(), vec![(1, 2), (1, 3), (2, 3)]).is_ok());
        assert!(WiringDiagram::new(id.clone(), vec![(1, 3), (1, 2), (2, 3)]).is_err());
        assert!(WiringDiagram::new(id.clone(), vec![(1, 2), (1, 3)]).is_err());
        assert!(WiringDiagram::new(id, vec![(1, 2), (2, 1), (1, 3), (2, 3)]).is_err());
        let w: WiringDiagram = serde_json::from_str(r#"{"n":3,"crossings":[[1,2],[1,3],[2,3]]}"#).unwrap();
        assert_eq!(w.snapshots().last().unwrap(), &perm(&[3, 2, 1]));
        assert_eq!(w.above(0), vec![3]);
        assert!(w.above(1).is_empty());
        assert_eq!(w.above(2), vec![1]);
    }

    #[test]
    fn three_line_reduction() {
        let w = WiringDiagram::new(PathPerm::identity(3), vec![(1, 2), (1, 3), (2, 3)]).unwrap();
        let g = reduce_stretchability(&w);
        assert_eq!(
            g.paths,
            vec![vec![1, 2, 3], vec![2, 1, 3], vec![2, 3, 1], vec![3, 2, 1]]
        );
        let w = WiringDiagram::new(PathPerm::identity(2), vec![(1, 2)]).unwrap();
        assert_eq!(reduce_stretchability(&w).paths, vec![vec![1, 2]]);
    }
}
