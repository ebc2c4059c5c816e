//! Primal/dual geometric primitives and directed spanning paths.

use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rat::Rat;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Point2 {
    pub x: Rat,
    pub y: Rat,
}

impl Point2 {
    pub fn new(x: impl Into<Rat>, y: impl Into<Rat>) -> Self {
        Point2 {
            x: x.into(),
            y: y.into(),
        }
    }

    pub fn dot(&self, v: &Direction) -> Rat {
        &self.x * &v.dx + &self.y * &v.dy
    }
}

/// A direction of monotonicity. Orientation matters: `v` and `-v` differ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Direction {
    pub dx: Rat,
    pub dy: Rat,
}

#[derive(Deserialize)]
struct RawDirection {
    dx: Rat,
    dy: Rat,
}

impl<'de> Deserialize<'de> for Direction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawDirection::deserialize(deserializer)?;
        Direction::new(raw.dx, raw.dy).map_err(serde::de::Error::custom)
    }
}

impl Direction {
    pub fn new(dx: impl Into<Rat>, dy: impl Into<Rat>) -> Result<Self> {
        let (dx, dy) = (dx.into(), dy.into());
        if dx.is_zero() && dy.is_zero() {
            return Err(Error::ZeroDirection);
        }
        Ok(Direction { dx, dy })
    }

    /// Slope `dy/dx`, or `None` for a vertical direction.
    pub fn slope(&self) -> Option<Rat> {
        if self.dx.is_zero() {
            None
        } else {
            Some(&self.dy / &self.dx)
        }
    }

    pub fn is_horizontal(&self) -> bool {
        self.dy.is_zero()
    }

    pub fn is_vertical(&self) -> bool {
        self.dx.is_zero()
    }

    pub fn negated(&self) -> Direction {
        Direction {
            dx: -&self.dx,
            dy: -&self.dy,
        }
    }

    pub fn scaled(&self, factor: &Rat) -> Direction {
        assert!(factor.is_positive(), "directions scale by positive factors only");
        Direction {
            dx: &self.dx * factor,
            dy: &self.dy * factor,
        }
    }

    /// `self × other`; positive when `other` is counterclockwise from `self`.
    pub fn cross(&self, other: &Direction) -> Rat {
        &self.dx * &other.dy - &self.dy * &other.dx
    }

    /// Same line through the origin (parallel or anti-parallel).
    pub fn is_parallel_to(&self, other: &Direction) -> bool {
        self.cross(other).is_zero()
    }
}

/// Non-vertical dual line `y = slope * x + intercept`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DualLine {
    pub slope: Rat,
    pub intercept: Rat,
}

impl DualLine {
    pub fn new(slope: impl Into<Rat>, intercept: impl Into<Rat>) -> Self {
        DualLine {
            slope: slope.into(),
            intercept: intercept.into(),
        }
    }

    /// Line through `(x0, y0)` and `(x1, y1)`, `x0 != x1`.
    pub fn through(x0: &Rat, y0: &Rat, x1: &Rat, y1: &Rat) -> Self {
        assert!(x0 != x1, "vertical line requested");
        let slope = (y1 - y0) / (x1 - x0);
        let intercept = y0 - &(&slope * x0);
        DualLine { slope, intercept }
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        &self.slope * x + &self.intercept
    }
}

/// `(a, b)` maps to the line `y = a x - b`.
pub fn point_to_dual(p: &Point2) -> DualLine {
    DualLine {
        slope: p.x.clone(),
        intercept: -&p.y,
    }
}

pub fn dual_to_point(l: &DualLine) -> Point2 {
    Point2 {
        x: l.slope.clone(),
        y: -&l.intercept,
    }
}

/// A directed spanning path, stored as a permutation of `1..=n`.
#[derive(Clone)]
pub struct PathPerm {
    order: Vec<usize>,
    rank: Vec<usize>,
}

impl PathPerm {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        if n < 2 {
            return Err(Error::InvalidPermutation(format!(
                "path needs at least 2 vertices, got {n}"
            )));
        }
        let mut rank = vec![usize::MAX; n];
        for (pos, &v) in order.iter().enumerate() {
            if v == 0 || v > n {
                return Err(Error::InvalidVertex { index: v, n });
            }
            if rank[v - 1] != usize::MAX {
                return Err(Error::InvalidPermutation(format!("vertex {v} repeated")));
            }
            rank[v - 1] = pos;
        }
        Ok(PathPerm { order, rank })
    }

    pub fn identity(n: usize) -> Self {
        PathPerm::new((1..=n).collect()).expect("identity is a permutation")
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn into_order(self) -> Vec<usize> {
        self.order
    }

    /// 0-based position of vertex `v` (1-based label).
    pub fn rank(&self, v: usize) -> usize {
        self.rank[v - 1]
    }

    pub fn precedes(&self, a: usize, b: usize) -> bool {
        self.rank[a - 1] < self.rank[b - 1]
    }

    pub fn reversed(&self) -> PathPerm {
        let mut order = self.order.clone();
        order.reverse();
        let n = order.len();
        let rank = self.rank.iter().map(|r| n - 1 - r).collect();
        PathPerm { order, rank }
    }

    /// Apply a relabeling `v -> map[v - 1]`.
    pub fn relabeled(&self, map: &[usize]) -> Result<PathPerm> {
        PathPerm::new(self.order.iter().map(|&v| map[v - 1]).collect())
    }
}

impl PartialEq for PathPerm {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
    }
}

impl Eq for PathPerm {}

impl Hash for PathPerm {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.order.hash(state);
    }
}

impl PartialOrd for PathPerm {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PathPerm {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.order.cmp(&other.order)
    }
}

impl fmt::Debug for PathPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨")?;
        for (i, v) in self.order.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "⟩")
    }
}

impl Serialize for PathPerm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.order.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PathPerm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let order = Vec::<usize>::deserialize(deserializer)?;
        PathPerm::new(order).map_err(serde::de::Error::custom)
    }
}

/// Shorthand used heavily in tests: `perm(&[2, 1, 3])`.
pub fn perm(order: &[usize]) -> PathPerm {
    PathPerm::new(order.to_vec()).expect("valid permutation literal")
}
