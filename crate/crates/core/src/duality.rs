//! Directions as dual vertical lines, projection orders, and the projective
//! map that sends a vertical line to infinity.
//!
//! Convention used throughout the crate: the order in which dual lines meet a
//! vertical line is read top to bottom (descending ordinate). With this
//! convention a direction `v = (dx, dy)` with `dy > 0` projects the primal
//! points in exactly the order their dual lines cross `x = -dx/dy`.


use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{point_to_dual, Direction, DualLine, PathPerm, Point2};
use crate::rat::Rat;

/// Strictly increasing x-coordinates of dual vertical lines.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Rat>", into = "Vec<Rat>")]
pub struct VerticalLineConfig {
    xs: Vec<Rat>,
}

impl VerticalLineConfig {
    pub fn new(xs: Vec<Rat>) -> Result<Self> {
        if xs.is_empty() {
            return Err(Error::InvalidInput("empty vertical line configuration".into()));
        }
        if xs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NonIncreasingConfig);
        }
        Ok(VerticalLineConfig { xs })
    }

    /// Lines at `0, 1, ..., k-1`.
    pub fn unit(k: usize) -> Self {
        VerticalLineConfig {
            xs: (0..k).map(Rat::from).collect(),
        }
    }

    pub fn xs(&self) -> &[Rat] {
        &self.xs
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// `q_i = x_{i+1} - x_i`.
    pub fn gaps(&self) -> Vec<Rat> {
        self.xs.windows(2).map(|w| &w[1] - &w[0]).collect()
    }

    /// Upward directions `(-x, 1)` corresponding to each vertical line.
    pub fn directions(&self) -> Vec<Direction> {
        self.xs.iter().map(vertical_to_direction).collect()
    }
}

impl TryFrom<Vec<Rat>> for VerticalLineConfig {
    type Error = Error;
    fn try_from(xs: Vec<Rat>) -> Result<Self> {
        VerticalLineConfig::new(xs)
    }
}

impl From<VerticalLineConfig> for Vec<Rat> {
    fn from(cfg: VerticalLineConfig) -> Self {
        cfg.xs
    }
}

/// Labeled primal points; index `j` (0-based) is vertex `j + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point2>", into = "Vec<Point2>")]
pub struct PointSet {
    points: Vec<Point2>,
}

impl PointSet {
    pub fn new(points: Vec<Point2>) -> Result<Self> {
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i] == points[j] {
                    return Err(Error::DegeneratePosition(crate::error::Degeneracy {
                        coincident: vec![(i + 1, j + 1)],
                        ..Default::default()
                    }));
                }
            }
        }
        Ok(PointSet { points })
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Vertex `v` (1-based).
    pub fn point(&self, v: usize) -> &Point2 {
        &self.points[v - 1]
    }

    pub fn dual_lines(&self) -> Vec<DualLine> {
        self.points.iter().map(point_to_dual).collect()
    }
}

impl TryFrom<Vec<Point2>> for PointSet {
    type Error = Error;
    fn try_from(points: Vec<Point2>) -> Result<Self> {
        PointSet::new(points)
    }
}

impl From<PointSet> for Vec<Point2> {
    fn from(ps: PointSet) -> Self {
        ps.points
    }
}

/// Where the dual vertical line of a direction sits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerticalPosition {
    Finite(Rat),
    /// Horizontal directions: the order is given by the slopes of the lines.
    AtInfinity,
}

/// `x = -1/α` for a direction of slope `α`, computed as `-dx/dy` so that a
/// vertical direction lands on `x = 0`.
pub fn direction_to_vertical(v: &Direction) -> VerticalPosition {
    if v.dy.is_zero() {
        VerticalPosition::AtInfinity
    } else {
        VerticalPosition::Finite(-&v.dx / &v.dy)
    }
}

/// The upward direction `(-x, 1)` whose dual vertical line is `x`.
pub fn vertical_to_direction(x: &Rat) -> Direction {
    Direction::new(-x, Rat::one()).expect("dy = 1 is non-zero")
}

/// Sort `1..=n` by `key` in the given direction, reporting the first tie.
fn sorted_labels(
    keys: Vec<Rat>,
    descending: bool,
    tie: impl Fn(usize, usize) -> Error,
) -> Result<PathPerm> {
    let mut idx: Vec<usize> = (0..keys.len()).collect();
    idx.sort_by(|&a, &b| {
        let ord = keys[a].cmp(&keys[b]);
        if descending {
            ord.reverse()
        } else {
            ord
        }
    });
    for w in idx.windows(2) {
        if keys[w[0]] == keys[w[1]] {
            let (a, b) = (w[0].min(w[1]) + 1, w[0].max(w[1]) + 1);
            return Err(tie(a, b));
        }
    }
    PathPerm::new(idx.into_iter().map(|i| i + 1).collect())
}

/// Vertex labels sorted by `<p_j, v>` ascending.
pub fn projection_order(pts: &PointSet, v: &Direction) -> Result<PathPerm> {
    let keys = pts.points().iter().map(|p| p.dot(v)).collect();
    sorted_labels(keys, false, Error::ProjectionTie)
}

/// Line labels sorted by ordinate at `x`, top to bottom.
pub fn intersection_order(lines: &[DualLine], x: &Rat) -> Result<PathPerm> {
    let keys = lines.iter().map(|l| l.eval(x)).collect();
    sorted_labels(keys, true, Error::OrdinateTie)
}

/// Order on a vertical line at `x = +∞`: descending slope.
pub fn slope_order(lines: &[DualLine]) -> Result<PathPerm> {
    let keys = lines.iter().map(|l| l.slope.clone()).collect();
    sorted_labels(keys, true, Error::OrdinateTie)
}

/// `(x, y) -> (1/(c - x), y/(c - x))`, undefined on `x = c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectiveMap {
    pub c: Rat,
}

impl ProjectiveMap {
    pub fn new(c: impl Into<Rat>) -> Self {
        ProjectiveMap { c: c.into() }
    }

    pub fn apply_point(&self, p: &Point2) -> Option<Point2> {
        let w = &self.c - &p.x;
        let inv = w.recip()?;
        Some(Point2 {
            x: inv.clone(),
            y: &p.y * &inv,
        })
    }

    /// `y = a x + b` maps to `Y = (a c + b) X - a`.
    pub fn apply_line(&self, l: &DualLine) -> DualLine {
        DualLine {
            slope: l.eval(&self.c),
            intercept: -&l.slope,
        }
    }

    pub fn invert_line(&self, l: &DualLine) -> DualLine {
        let a = -&l.intercept;
        let b = &l.slope - &(&a * &self.c);
        DualLine {
            slope: a,
            intercept: b,
        }
    }

    pub fn apply_vertical(&self, d: &Rat) -> Option<Rat> {
        (&self.c - d).recip()
    }

    pub fn invert_vertical(&self, x: &Rat) -> Option<Rat> {
        x.recip().map(|r| &self.c - &r)
    }
}

/// Map lines and vertical probes through `m`.
///
/// Afterwards the slope order of the images equals the order of the originals
/// on `x = c`; a probe `x = d` maps to `x = 1/(c - d)`, keeping its order when
/// `d < c` and reversing it when `d > c` (the map flips orientation there).
pub fn send_to_infinity(
    lines: &[DualLine],
    m: &ProjectiveMap,
    probes: &[Rat],
) -> Result<(Vec<DualLine>, Vec<Rat>)> {
    let images = lines.iter().map(|l| m.apply_line(l)).collect();
    let probes = probes
        .iter()
        .map(|d| {
            m.apply_vertical(d)
                .ok_or_else(|| Error::DegenerateMap(d.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((images, probes))
}
