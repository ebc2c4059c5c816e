//! Path sets, allowable sequences and circular sequences of point sets.
//!
//! A sequence of paths is allowable when no pair of vertices changes its
//! relative order, changes back, and changes again along the sequence; i.e.
//! every pair flips at most once. The circular sequence of a point set is the
//! list of projection orders seen while a projection line rotates by 180
//! degrees, and is the model example of an allowable sequence.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::duality::PointSet;
use crate::error::{Degeneracy, Error, Result};
use crate::geom::{Direction, PathPerm, Point2};

/// `k >= 1` spanning paths on the vertex set `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<PathPerm>", into = "Vec<PathPerm>")]
pub struct PathSet {
    n: usize,
    paths: Vec<PathPerm>,
}

impl PathSet {
    pub fn new(paths: Vec<PathPerm>) -> Result<Self> {
        let Some(first) = paths.first() else {
            return Err(Error::InvalidInput("path set must contain at least one path".into()));
        };
        let n = first.len();
        if let Some(p) = paths.iter().find(|p| p.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "path {p:?} has {} vertices, expected {n}",
                p.len()
            )));
        }
        Ok(PathSet { n, paths })
    }

    pub fn from_orders(orders: &[Vec<usize>]) -> Result<Self> {
        PathSet::new(
            orders
                .iter()
                .map(|o| PathPerm::new(o.clone()))
                .collect::<Result<_>>()?,
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.paths.len()
    }

    pub fn paths(&self) -> &[PathPerm] {
        &self.paths
    }

    pub fn into_paths(self) -> Vec<PathPerm> {
        self.paths
    }
}

impl TryFrom<Vec<PathPerm>> for PathSet {
    type Error = Error;
    fn try_from(paths: Vec<PathPerm>) -> Result<Self> {
        PathSet::new(paths)
    }
}

impl From<PathSet> for Vec<PathPerm> {
    fn from(ps: PathSet) -> Self {
        ps.paths
    }
}

/// A path set with some members reversed so that `anchor.0` precedes
/// `anchor.1` in every path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjustedPathSet {
    pub base: PathSet,
    pub anchor: (usize, usize),
    pub flipped: Vec<bool>,
    paths: Vec<PathPerm>,
}

impl AdjustedPathSet {
    pub fn paths(&self) -> &[PathPerm] {
        &self.paths
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn as_path_set(&self) -> PathSet {
        PathSet::new(self.paths.clone()).expect("adjusted paths share n")
    }
}

pub fn adjust(ps: &PathSet, i: usize, j: usize) -> Result<AdjustedPathSet> {
    let n = ps.n();
    for v in [i, j] {
        if v == 0 || v > n {
            return Err(Error::InvalidVertex { index: v, n });
        }
    }
    if i == j {
        return Err(Error::InvalidInput(format!("anchor pair ({i}, {j}) must be distinct")));
    }
    let mut flipped = Vec::with_capacity(ps.k());
    let mut paths = Vec::with_capacity(ps.k());
    for p in ps.paths() {
        if p.precedes(i, j) {
            flipped.push(false);
            paths.push(p.clone());
        } else {
            flipped.push(true);
            paths.push(p.reversed());
        }
    }
    Ok(AdjustedPathSet {
        base: ps.clone(),
        anchor: (i, j),
        flipped,
        paths,
    })
}

/// True iff no vertex pair flips, flips back and flips again along `seq`.
pub fn is_allowable_sequence(seq: &[PathPerm]) -> bool {
    let Some(first) = seq.first() else {
        return true;
    };
    let n = first.len();
    if seq.iter().any(|p| p.len() != n) {
        return false;
    }
    if seq.len() < 3 {
        return true;
    }
    for a in 1..=n {
        for b in a + 1..=n {
            let mut changes = 0;
            let mut prev = first.precedes(a, b);
            for p in &seq[1..] {
                let cur = p.precedes(a, b);
                if cur != prev {
                    changes += 1;
                    if changes > 1 {
                        return false;
                    }
                    prev = cur;
                }
            }
        }
    }
    true
}

/// An ordering of a path set; `source[t]` is the index of `paths[t]` in the
/// set it was taken from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathSequence {
    pub paths: Vec<PathPerm>,
    pub source: Vec<usize>,
}

impl PathSequence {
    pub fn reversed(&self) -> PathSequence {
        let mut paths = self.paths.clone();
        let mut source = self.source.clone();
        paths.reverse();
        source.reverse();
        PathSequence { paths, source }
    }
}

/// Equal paths grouped by first appearance.
struct Classes {
    reps: Vec<PathPerm>,
    members: Vec<Vec<usize>>,
}

fn coalesce(paths: &[PathPerm]) -> Classes {
    let mut reps: Vec<PathPerm> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    for (idx, p) in paths.iter().enumerate() {
        match reps.iter().position(|r| r == p) {
            Some(c) => members[c].push(idx),
            None => {
                reps.push(p.clone());
                members.push(vec![idx]);
            }
        }
    }
    Classes { reps, members }
}

/// Lexicographic pair cursor over `1 <= a < b <= n`.
#[derive(Clone, Copy)]
struct PairCursor {
    a: usize,
    b: usize,
}

impl PairCursor {
    fn start() -> Self {
        PairCursor { a: 1, b: 2 }
    }

    fn advance(&mut self, n: usize) {
        self.b += 1;
        if self.b > n {
            self.a += 1;
            self.b = self.a + 1;
        }
    }

    fn valid(&self, n: usize) -> bool {
        self.b <= n
    }
}

struct Arranger<'a> {
    reps: &'a [PathPerm],
    n: usize,
    out: Vec<usize>,
}

impl Arranger<'_> {
    fn uniform(&self, group: &[usize], a: usize, b: usize) -> Option<Option<bool>> {
        let mut value = None;
        for &c in group {
            let v = self.reps[c].precedes(a, b);
            match value {
                None => value = Some(v),
                Some(u) if u != v => return None,
                _ => {}
            }
        }
        Some(value)
    }

    /// Order `block`, which sits between everything in `left` and `right`.
    fn arrange(&mut self, block: Vec<usize>, left: &[usize], right: &[usize], cursor: PairCursor) -> bool {
        if block.len() <= 1 {
            self.out.extend(block);
            return true;
        }
        let mut cur = cursor;
        let (a, b) = loop {
            if !cur.valid(self.n) {
                // distinct paths always differ in some pair
                unreachable!("block of distinct paths without a splitting pair");
            }
            let (a, b) = (cur.a, cur.b);
            let first = self.reps[block[0]].precedes(a, b);
            if block.iter().any(|&c| self.reps[c].precedes(a, b) != first) {
                break (a, b);
            }
            cur.advance(self.n);
        };
        let (Some(lv), Some(rv)) = (self.uniform(left, a, b), self.uniform(right, a, b)) else {
            return false;
        };
        if let (Some(l), Some(r)) = (lv, rv) {
            if l == r {
                return false;
            }
        }
        let first_value = match (lv, rv) {
            (Some(l), _) => l,
            (None, Some(r)) => !r,
            (None, None) => self.reps[block[0]].precedes(a, b),
        };
        let (head, tail): (Vec<usize>, Vec<usize>) = block
            .into_iter()
            .partition(|&c| self.reps[c].precedes(a, b) == first_value);

        let mut right_of_head: Vec<usize> = tail.clone();
        right_of_head.extend_from_slice(right);
        if !self.arrange(head.clone(), left, &right_of_head, cur) {
            return false;
        }
        let mut left_of_tail: Vec<usize> = left.to_vec();
        left_of_tail.extend_from_slice(&head);
        self.arrange(tail, &left_of_tail, right, cur)
    }
}

/// The allowable ordering of an adjusted path set, if one exists.
///
/// The ordering is unique up to reversal once duplicates are merged; equal
/// paths are emitted next to each other in input order. Each recursion step
/// splits the current block by the lexicographically first vertex pair whose
/// relative order differs inside it, and places the two halves according to
/// how that pair is ordered in the paths already fixed on either side.
pub fn allowable_order(aps: &AdjustedPathSet) -> Option<PathSequence> {
    order_paths(aps.paths())
}

pub(crate) fn order_paths(paths: &[PathPerm]) -> Option<PathSequence> {
    let classes = coalesce(paths);
    let n = paths.first()?.len();
    let mut arranger = Arranger {
        reps: &classes.reps,
        n,
        out: Vec::with_capacity(classes.reps.len()),
    };
    let all: Vec<usize> = (0..classes.reps.len()).collect();
    if !arranger.arrange(all, &[], &[], PairCursor::start()) {
        return None;
    }
    let ordered_reps: Vec<PathPerm> = arranger.out.iter().map(|&c| classes.reps[c].clone()).collect();
    if !is_allowable_sequence(&ordered_reps) {
        return None;
    }
    let mut seq = PathSequence {
        paths: Vec::with_capacity(paths.len()),
        source: Vec::with_capacity(paths.len()),
    };
    for c in arranger.out {
        for &idx in &classes.members[c] {
            seq.paths.push(paths[idx].clone());
            seq.source.push(idx);
        }
    }
    Some(seq)
}

/// One transposition of the rotating sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Swap {
    /// Labels `(i, j)` with `i < j`.
    pub pair: (usize, usize),
    /// Direction `p_j - p_i` of the supporting line.
    pub support: Direction,
    /// Projection direction at which the pair ties.
    pub normal: Direction,
}

/// One half-period of the circular sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircularSequence {
    pub initial: PathPerm,
    pub swaps: Vec<Swap>,
    pub snapshots: Vec<PathPerm>,
    /// Set when degenerate ties were broken symbolically; snapshots then
    /// include orders no single projection realizes.
    pub perturbed: bool,
}

impl CircularSequence {
    pub fn n(&self) -> usize {
        self.initial.len()
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct CircularOptions {
    /// Break simultaneous swaps by index pair instead of rejecting the input.
    pub perturb: bool,
}

pub fn circular_sequence(pts: &PointSet) -> Result<CircularSequence> {
    circular_sequence_with(pts, CircularOptions::default())
}

fn diff(a: &Point2, b: &Point2) -> (crate::rat::Rat, crate::rat::Rat) {
    (&b.x - &a.x, &b.y - &a.y)
}

/// Normal of `p_j - p_i` with angle in `(0, π]`.
fn swap_normal(support: &Direction) -> Direction {
    let (a, b) = (&support.dx, &support.dy);
    if a.is_positive() {
        Direction { dx: -b, dy: a.clone() }
    } else if a.is_negative() {
        Direction { dx: b.clone(), dy: -a }
    } else {
        Direction { dx: -b.abs(), dy: crate::rat::Rat::zero() }
    }
}

/// Angle order on `(0, π]`.
fn normal_cmp(a: &Direction, b: &Direction) -> Ordering {
    match a.cross(b).signum() {
        1 => Ordering::Less,
        -1 => Ordering::Greater,
        _ => Ordering::Equal,
    }
}

pub fn circular_sequence_with(pts: &PointSet, opts: CircularOptions) -> Result<CircularSequence> {
    let n = pts.len();
    if n < 2 {
        return Err(Error::InvalidInput("circular sequence needs at least two points".into()));
    }
    let p = pts.points();

    let mut swaps: Vec<Swap> = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let (dx, dy) = diff(&p[i], &p[j]);
            let support = Direction { dx, dy };
            let normal = swap_normal(&support);
            swaps.push(Swap {
                pair: (i + 1, j + 1),
                support,
                normal,
            });
        }
    }
    // stable: equal angles stay in lexicographic pair order
    swaps.sort_by(|s, t| normal_cmp(&s.normal, &t.normal));

    if !opts.perturb {
        let degeneracy = find_degeneracies(p, &swaps);
        if !degeneracy.is_empty() {
            return Err(Error::DegeneratePosition(degeneracy));
        }
    }

    // start just after angle 0: sort by x, ties by y
    let mut order: Vec<usize> = (1..=n).collect();
    order.sort_by(|&a, &b| {
        let (pa, pb) = (&p[a - 1], &p[b - 1]);
        pa.x.cmp(&pb.x).then_with(|| pa.y.cmp(&pb.y))
    });
    let initial = PathPerm::new(order.clone())?;
    let mut pos = vec![0usize; n + 1];
    for (k, &v) in order.iter().enumerate() {
        pos[v] = k;
    }

    let mut snapshots = Vec::with_capacity(swaps.len() + 1);
    snapshots.push(initial.clone());
    let mut emitted: Vec<Swap> = Vec::with_capacity(swaps.len());
    let mut perturbed = false;

    let mut start = 0;
    while start < swaps.len() {
        let mut end = start + 1;
        while end < swaps.len() && normal_cmp(&swaps[start].normal, &swaps[end].normal) == Ordering::Equal {
            end += 1;
        }
        let mut pending: Vec<Swap> = swaps[start..end].to_vec();
        if pending.len() > 1 {
            perturbed = true;
        }
        while !pending.is_empty() {
            // first pending pair (lexicographic) that is currently adjacent
            let Some(idx) = pending
                .iter()
                .position(|s| pos[s.pair.0].abs_diff(pos[s.pair.1]) == 1)
            else {
                return Err(Error::InvalidInput(
                    "sweep reached a state without an adjacent pending swap".into(),
                ));
            };
            let s = pending.remove(idx);
            let (a, b) = s.pair;
            let (pa, pb) = (pos[a], pos[b]);
            order.swap(pa, pb);
            pos[a] = pb;
            pos[b] = pa;
            snapshots.push(PathPerm::new(order.clone())?);
            emitted.push(s);
        }
        start = end;
    }

    Ok(CircularSequence {
        initial,
        swaps: emitted,
        snapshots,
        perturbed,
    })
}

fn find_degeneracies(p: &[Point2], sorted_swaps: &[Swap]) -> Degeneracy {
    let n = p.len();
    let mut deg = Degeneracy::default();
    for i in 0..n {
        for j in i + 1..n {
            let (ax, ay) = diff(&p[i], &p[j]);
            for k in j + 1..n {
                let (bx, by) = diff(&p[i], &p[k]);
                if (&ax * &by - &ay * &bx).is_zero() {
                    deg.collinear.push([i + 1, j + 1, k + 1]);
                }
            }
        }
    }
    let mut start = 0;
    while start < sorted_swaps.len() {
        let mut end = start + 1;
        while end < sorted_swaps.len()
            && normal_cmp(&sorted_swaps[start].normal, &sorted_swaps[end].normal) == Ordering::Equal
        {
            end += 1;
        }
        for s in start..end {
            for t in s + 1..end {
                let (a, b) = (sorted_swaps[s].pair, sorted_swaps[t].pair);
                let shares = a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1;
                if !shares {
                    deg.parallel.push([a, b]);
                }
            }
        }
        start = end;
    }
    deg
}

/// Whether `p` or its reverse appears among the snapshots.
pub fn contains_permutation(cs: &CircularSequence, p: &PathPerm) -> bool {
    if p.len() != cs.n() {
        return false;
    }
    let r = p.reversed();
    cs.snapshots.iter().any(|s| s == p || *s == r)
}
