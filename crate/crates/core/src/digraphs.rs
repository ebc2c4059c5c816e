//! Digraph front end: topological orders, implied paths and the reduction to
//! the path solvers.
//!
//! Planarity, upward planarity and the existence of an including planar
//! st-digraph are caller obligations; nothing here checks them.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::embedder::{solve_fixed, solve_three_free, Decision};
use crate::error::{Error, Result};
use crate::geom::{Direction, PathPerm};
use crate::sequences::PathSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawDigraph")]
pub struct Digraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    #[serde(skip)]
    out: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
struct RawDigraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<RawDigraph> for Digraph {
    type Error = Error;

    fn try_from(raw: RawDigraph) -> Result<Self> {
        Digraph::new(raw.n, raw.edges)
    }
}

impl Digraph {
    /// Vertices are `1..=n`; duplicate edges are dropped.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDigraph(format!("need at least 2 vertices, got {n}")));
        }
        let mut out = vec![Vec::new(); n + 1];
        let mut kept = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            for w in [u, v] {
                if w == 0 || w > n {
                    return Err(Error::InvalidVertex { index: w, n });
                }
            }
            if u == v {
                return Err(Error::InvalidDigraph(format!("self-loop at {u}")));
            }
            if !out[u].contains(&v) {
                out[u].push(v);
                kept.push((u, v));
            }
        }
        Ok(Digraph { n, edges: kept, out })
    }

    /// The directed path `order[0] -> order[1] -> ...`.
    pub fn path(order: &[usize]) -> Result<Self> {
        Digraph::new(order.len(), order.windows(2).map(|w| (w[0], w[1])).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.out.get(u).is_some_and(|o| o.contains(&v))
    }

    fn find_cycle(&self, alive: &[bool]) -> Vec<usize> {
        // every alive vertex has an alive predecessor, so walking backwards
        // along alive edges must repeat a vertex
        let mut pred = vec![0; self.n + 1];
        for &(u, v) in &self.edges {
            if alive[u] && alive[v] {
                pred[v] = u;
            }
        }
        let start = (1..=self.n).find(|&v| alive[v]).expect("some vertex is on a cycle");
        let mut seen = vec![usize::MAX; self.n + 1];
        let mut walk = Vec::new();
        let mut v = start;
        while seen[v] == usize::MAX {
            seen[v] = walk.len();
            walk.push(v);
            v = pred[v];
        }
        let mut cycle = walk[seen[v]..].to_vec();
        cycle.reverse();
        cycle
    }
}

/// A topological order of a specific digraph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TopOrder {
    order: PathPerm,
}

impl TopOrder {
    pub fn new(g: &Digraph, order: PathPerm) -> Result<Self> {
        if order.len() != g.n() {
            return Err(Error::DimensionMismatch(format!(
                "order has {} vertices, digraph {}",
                order.len(),
                g.n()
            )));
        }
        if let Some(&(u, v)) = g.edges().iter().find(|&&(u, v)| !order.precedes(u, v)) {
            return Err(Error::OrderViolatesEdge(u, v));
        }
        Ok(TopOrder { order })
    }

    pub fn order(&self) -> &PathPerm {
        &self.order
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    Smallest,
    Largest,
}

/// Kahn's algorithm, taking the smallest available source first.
pub fn topological_order(g: &Digraph) -> Result<TopOrder> {
    topological_order_with(g, TieBreak::Smallest)
}

pub fn topological_order_with(g: &Digraph, tie: TieBreak) -> Result<TopOrder> {
    let n = g.n();
    let mut indeg = vec![0usize; n + 1];
    for &(_, v) in g.edges() {
        indeg[v] += 1;
    }
    // keys are negated for the largest-first policy
    let key = |v: usize| -> i64 {
        match tie {
            TieBreak::Smallest => v as i64,
            TieBreak::Largest => -(v as i64),
        }
    };
    let mut ready: BinaryHeap<Reverse<(i64, usize)>> =
        (1..=n).filter(|&v| indeg[v] == 0).map(|v| Reverse((key(v), v))).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse((_, u))) = ready.pop() {
        order.push(u);
        for &v in &g.out[u] {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                ready.push(Reverse((key(v), v)));
            }
        }
    }
    if order.len() < n {
        let mut alive = vec![false; n + 1];
        for v in 1..=n {
            alive[v] = indeg[v] > 0;
        }
        return Err(Error::Cyclic(g.find_cycle(&alive)));
    }
    TopOrder::new(g, PathPerm::new(order)?)
}

/// A Hamiltonian path through the order makes it the only topological order.
pub fn is_order_unique(g: &Digraph, t: &TopOrder) -> bool {
    t.order().order().windows(2).all(|w| g.has_edge(w[0], w[1]))
}

pub fn implied_path(t: &TopOrder) -> PathPerm {
    t.order().clone()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DirectionMode {
    Fixed(Vec<Direction>),
    /// Any directions; exactly three digraphs.
    FreeThree,
}

/// Record attached to every digraph result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Caveat {
    pub st_digraph_precondition_checked: bool,
    pub note: &'static str,
}

impl Default for Caveat {
    fn default() -> Self {
        Caveat {
            st_digraph_precondition_checked: false,
            note: "each digraph must have an including planar st-digraph preserving its \
                   topological order; this was not checked, and only vertex positions and \
                   straight-line drawings of the implied paths are produced",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigraphSolution {
    pub implied_paths: PathSet,
    pub decision: Decision,
    pub caveat: Caveat,
}

/// Solve the path problem on the orders implied by `orders`. Orders must be
/// valid for their digraphs; `None` entries are filled with the canonical
/// topological order.
pub fn solve_digraphs(gs: &[Digraph], orders: &[Option<PathPerm>], mode: &DirectionMode) -> Result<DigraphSolution> {
    if gs.len() != orders.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} digraphs against {} orders",
            gs.len(),
            orders.len()
        )));
    }
    let mut paths = Vec::with_capacity(gs.len());
    for (g, o) in gs.iter().zip(orders) {
        let t = match o {
            Some(p) => TopOrder::new(g, p.clone())?,
            None => topological_order(g)?,
        };
        paths.push(implied_path(&t));
    }
    let implied_paths = PathSet::new(paths)?;
    let decision = match mode {
        DirectionMode::Fixed(dirs) => solve_fixed(&implied_paths, dirs)?,
        DirectionMode::FreeThree => solve_three_free(&implied_paths)?,
    };
    Ok(DigraphSolution {
        implied_paths,
        decision,
        caveat: Caveat::default(),
    })
}
