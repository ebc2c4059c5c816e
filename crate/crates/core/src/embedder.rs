//! Deciding and constructing monotone simultaneous embeddings.
//!
//! Every solver works in the dual: a direction `v` with `dy > 0` becomes the
//! vertical line `x = -dx/dy`, and a point set realizes `P_i` along `v_i`
//! exactly when the dual lines cross that vertical line top to bottom in the
//! order `P_i`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::duality::{
    direction_to_vertical, projection_order, vertical_to_direction, PointSet, VerticalLineConfig,
    VerticalPosition,
};
use crate::error::{Error, Result};
use crate::geom::{dual_to_point, Direction, DualLine, PathPerm, Point2};
use crate::lp::{build_embedding_lp, feasible, lines_from_solution, FarkasCertificate, Feasibility, LpProblem};
use crate::rat::Rat;
use crate::sequences::{adjust, allowable_order, circular_sequence, is_allowable_sequence, PathSet};

/// Which procedure produced an embedding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    TwoPathConstruction,
    /// LP at the given directions, solved after the shear with parameter
    /// `shear` (0 = no shear).
    FixedDirections { shear: u32 },
    /// LP at the canonical vertical lines `x = 0, 1, 2`.
    ThreeFree,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub points: PointSet,
    /// One per input path, in input order.
    pub directions: Vec<Direction>,
    pub provenance: Provenance,
}

impl Embedding {
    pub fn verify(&self, paths: &PathSet) -> bool {
        verify(&self.points, &self.directions, paths, false)
    }
}

/// Why an instance has no embedding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Rejection {
    /// No ordering of the adjusted paths is an allowable sequence.
    NotAllowable,
    /// Allowable orderings exist, but not in the radial order of the
    /// directions.
    RadialOrderMismatch,
    /// Two paths with equally oriented parallel directions differ.
    ParallelConflict { paths: (usize, usize) },
    LpInfeasible {
        lp: LpProblem,
        certificate: FarkasCertificate,
    },
}

impl Rejection {
    pub fn code(&self) -> &'static str {
        match self {
            Rejection::NotAllowable => "NOT_ALLOWABLE",
            Rejection::RadialOrderMismatch => "RADIAL_ORDER_MISMATCH",
            Rejection::ParallelConflict { .. } => "PARALLEL_CONFLICT",
            Rejection::LpInfeasible { .. } => "LP_INFEASIBLE",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    Yes(Embedding),
    No(Rejection),
}

impl Decision {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Yes(_))
    }

    pub fn embedding(&self) -> Option<&Embedding> {
        match self {
            Decision::Yes(e) => Some(e),
            Decision::No(_) => None,
        }
    }

    pub fn rejection(&self) -> Option<&Rejection> {
        match self {
            Decision::Yes(_) => None,
            Decision::No(r) => Some(r),
        }
    }
}

/// Projection along each `dirs[i]` equals `paths[i]`, or its reverse when
/// `allow_reverse` is set. Ties count as failure.
pub fn verify(points: &PointSet, dirs: &[Direction], paths: &PathSet, allow_reverse: bool) -> bool {
    if dirs.len() != paths.k() || points.len() != paths.n() {
        return false;
    }
    dirs.iter().zip(paths.paths()).all(|(v, p)| match projection_order(points, v) {
        Ok(q) => q == *p || (allow_reverse && q == p.reversed()),
        Err(_) => false,
    })
}

/// Explicit construction for two paths: line `v` passes through
/// `(x_1, -rank_1(v))` and `(x_2, -rank_2(v))`.
pub fn embed_two_paths(p1: &PathPerm, p2: &PathPerm, cfg: &VerticalLineConfig) -> Result<Embedding> {
    if cfg.len() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "two paths need two vertical lines, got {}",
            cfg.len()
        )));
    }
    if p1.len() != p2.len() {
        return Err(Error::DimensionMismatch("paths differ in length".into()));
    }
    let (x1, x2) = (&cfg.xs()[0], &cfg.xs()[1]);
    let lines: Vec<DualLine> = (1..=p1.len())
        .map(|v| {
            let y1 = -Rat::from(p1.rank(v) + 1);
            let y2 = -Rat::from(p2.rank(v) + 1);
            DualLine::through(x1, &y1, x2, &y2)
        })
        .collect();
    let points = PointSet::new(lines.iter().map(dual_to_point).collect())?;
    Ok(Embedding {
        points,
        directions: cfg.directions(),
        provenance: Provenance::TwoPathConstruction,
    })
}

/// Symmetric unimodular shear `T = [[1, λ], [λ, λ² + 1]]`. Directions map by
/// `T⁻¹`, points back by `T⁻¹`; inner products are preserved.
struct Shear {
    lambda: Rat,
}

impl Shear {
    fn inverse_apply(&self, x: &Rat, y: &Rat) -> (Rat, Rat) {
        let l = &self.lambda;
        let ll1 = l * l + Rat::one();
        (&ll1 * x - l * y, y - l * x)
    }

    fn direction(&self, v: &Direction) -> Direction {
        let (dx, dy) = self.inverse_apply(&v.dx, &v.dy);
        Direction { dx, dy }
    }

    fn point_back(&self, p: &Point2) -> Point2 {
        let (x, y) = self.inverse_apply(&p.x, &p.y);
        Point2 { x, y }
    }
}

fn choose_shear(dirs: &[Direction]) -> u32 {
    (0u32..)
        .find(|&l| {
            let s = Shear { lambda: Rat::from(l as i64) };
            dirs.iter().all(|v| !s.direction(v).dy.is_zero())
        })
        .expect("at most one bad parameter per direction")
}

fn check_sizes(paths: &PathSet, k: usize) -> Result<()> {
    if paths.k() != k {
        return Err(Error::DimensionMismatch(format!(
            "{} paths against {k} directions",
            paths.k()
        )));
    }
    Ok(())
}

/// Label for a failed allowability test on the direction sequence.
fn order_rejection(paths: &PathSet) -> Result<Rejection> {
    let aps = adjust(paths, 1, 2)?;
    Ok(match allowable_order(&aps) {
        None => Rejection::NotAllowable,
        Some(_) => Rejection::RadialOrderMismatch,
    })
}

/// Decide the embedding problem for fixed directions.
pub fn solve_fixed(paths: &PathSet, dirs: &[Direction]) -> Result<Decision> {
    check_sizes(paths, dirs.len())?;
    let shear_param = choose_shear(dirs);
    let shear = Shear {
        lambda: Rat::from(shear_param as i64),
    };

    // (x_φ, path, original index), all directions turned upward
    let mut slots: Vec<(Rat, PathPerm, usize)> = Vec::with_capacity(dirs.len());
    for (i, (v, p)) in dirs.iter().zip(paths.paths()).enumerate() {
        let mut w = shear.direction(v);
        let mut p = p.clone();
        if w.dy.is_negative() {
            w = w.negated();
            p = p.reversed();
        }
        let VerticalPosition::Finite(x) = direction_to_vertical(&w) else {
            unreachable!("shear leaves no horizontal direction");
        };
        slots.push((x, p, i));
    }
    slots.sort_by(|a, b| a.0.cmp(&b.0).then(a.2.cmp(&b.2)));
    let mut merged: Vec<(Rat, PathPerm)> = Vec::with_capacity(slots.len());
    let mut owner: Vec<usize> = Vec::new();
    for (x, p, i) in slots {
        if let Some((lx, lp)) = merged.last() {
            if *lx == x {
                if *lp != p {
                    let first = *owner.last().expect("owner tracks merged");
                    return Ok(Decision::No(Rejection::ParallelConflict { paths: (first, i) }));
                }
                continue;
            }
        }
        merged.push((x, p));
        owner.push(i);
    }

    let seq: Vec<PathPerm> = merged.iter().map(|(_, p)| p.clone()).collect();
    if !is_allowable_sequence(&seq) {
        return Ok(Decision::No(order_rejection(paths)?));
    }
    let cfg = VerticalLineConfig::new(merged.iter().map(|(x, _)| x.clone()).collect())?;
    let lp = build_embedding_lp(&seq, &cfg)?;
    match feasible(&lp)? {
        Feasibility::Infeasible(certificate) => Ok(Decision::No(Rejection::LpInfeasible { lp, certificate })),
        Feasibility::Feasible(sol) => {
            let lines = lines_from_solution(&sol, &cfg, paths.n());
            let embed = |lines: &[DualLine]| -> Result<Option<Embedding>> {
                let pts: Vec<Point2> = lines
                    .iter()
                    .map(|l| shear.point_back(&dual_to_point(l)))
                    .collect();
                let Ok(points) = PointSet::new(pts) else {
                    return Ok(None);
                };
                let e = Embedding {
                    points,
                    directions: dirs.to_vec(),
                    provenance: Provenance::FixedDirections { shear: shear_param },
                };
                Ok(e.verify(paths).then_some(e))
            };
            let e = polish(&lines, cfg.xs(), embed)?;
            Ok(Decision::Yes(e))
        }
    }
}

/// Nudge LP lines into general position without changing any order on the
/// vertical lines `xs`. LP vertices tend to have collinear dual points; the
/// gap of 1 between neighbouring ordinates leaves room for a perturbation of
/// size at most 1/4 per line at every `x` in `xs`.
fn polish(
    lines: &[DualLine],
    xs: &[Rat],
    embed: impl Fn(&[DualLine]) -> Result<Option<Embedding>>,
) -> Result<Embedding> {
    let reach = xs.iter().map(Rat::abs).max().unwrap_or_else(Rat::zero);
    let bound = (Rat::from(4) * (Rat::one() + reach)).recip().expect("positive");
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d6f6e6f);
    let mut last = None;
    for _ in 0..32 {
        let mut jitter = || {
            let t = Rat::new(rng.gen_range(-997i64..=997), 997);
            &t * &bound
        };
        let moved: Vec<DualLine> = lines
            .iter()
            .map(|l| DualLine {
                slope: &l.slope + &jitter(),
                intercept: &l.intercept + &jitter(),
            })
            .collect();
        if let Some(e) = embed(&moved)? {
            if circular_sequence(&e.points).is_ok() {
                return Ok(e);
            }
            last = Some(e);
        }
    }
    // general position is cosmetic: fall back to any verified witness
    match last {
        Some(e) => Ok(e),
        None => embed(lines)?.ok_or_else(|| Error::InvalidInput("LP witness failed verification".into())),
    }
}

/// Decide whether three paths embed for some choice of directions.
///
/// Paths are adjusted with respect to the anchor pair `(1, 2)`. For distinct
/// adjusted paths the allowable order is unique up to reversal, and reversing
/// it corresponds to mirroring `x -> -x`, so the canonical lines `x = 0, 1, 2`
/// in that order decide the instance.
pub fn solve_three_free(paths: &PathSet) -> Result<Decision> {
    if paths.k() != 3 {
        return Err(Error::DimensionMismatch(format!(
            "free-direction solving needs exactly 3 paths, got {}",
            paths.k()
        )));
    }
    let aps = adjust(paths, 1, 2)?;
    let Some(order) = allowable_order(&aps) else {
        return Ok(Decision::No(Rejection::NotAllowable));
    };
    let cfg = VerticalLineConfig::unit(3);
    let lp = build_embedding_lp(&order.paths, &cfg)?;
    match feasible(&lp)? {
        Feasibility::Infeasible(certificate) => Ok(Decision::No(Rejection::LpInfeasible { lp, certificate })),
        Feasibility::Feasible(sol) => {
            let mut directions = vec![None; 3];
            for (pos, &src) in order.source.iter().enumerate() {
                let v = vertical_to_direction(&cfg.xs()[pos]);
                directions[src] = Some(if aps.flipped[src] { v.negated() } else { v });
            }
            let directions: Vec<Direction> = directions.into_iter().map(|d| d.expect("every path placed")).collect();
            let lines = lines_from_solution(&sol, &cfg, paths.n());
            let embed = |lines: &[DualLine]| -> Result<Option<Embedding>> {
                let Ok(points) = PointSet::new(lines.iter().map(dual_to_point).collect()) else {
                    return Ok(None);
                };
                let e = Embedding {
                    points,
                    directions: directions.clone(),
                    provenance: Provenance::ThreeFree,
                };
                Ok(e.verify(paths).then_some(e))
            };
            Ok(Decision::Yes(polish(&lines, cfg.xs(), embed)?))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RadialConsistencyReport {
    pub trials: usize,
    /// Verdict of [`solve_three_free`].
    pub free_feasible: bool,
    /// Direction triples on which [`solve_fixed`] disagreed.
    pub counterexamples: Vec<Vec<Direction>>,
}

impl RadialConsistencyReport {
    pub fn consistent(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

fn random_positive(rng: &mut impl Rng) -> Rat {
    Rat::new(rng.gen_range(1i64..=40), rng.gen_range(1i64..=9))
}

/// Sample direction triples in the radial order of the allowable sequence
/// and check that [`solve_fixed`] always agrees with [`solve_three_free`].
///
/// Each triple is built from increasing vertical lines, rescaled by positive
/// factors and then moved by a random invertible linear map, which changes
/// neither projection orders up to the corresponding point transform nor
/// feasibility.
pub fn radial_consistency(paths: &PathSet, trials: usize, seed: u64) -> Result<RadialConsistencyReport> {
    let free = solve_three_free(paths)?;
    let aps = adjust(paths, 1, 2)?;
    let order = allowable_order(&aps);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counterexamples = Vec::new();
    for _ in 0..trials {
        let mut xs: Vec<Rat> = Vec::new();
        while xs.len() < 3 {
            let x = Rat::new(rng.gen_range(-60i64..=60), rng.gen_range(1i64..=12));
            if !xs.contains(&x) {
                xs.push(x);
            }
        }
        xs.sort();
        // without an allowable order any placement is as good as another
        let (source, flipped): (Vec<usize>, Vec<bool>) = match &order {
            Some(o) => (o.source.clone(), aps.flipped.clone()),
            None => (vec![0, 1, 2], vec![false; 3]),
        };
        let mut dirs = vec![None; 3];
        for (pos, &src) in source.iter().enumerate() {
            let v = vertical_to_direction(&xs[pos]).scaled(&random_positive(&mut rng));
            dirs[src] = Some(if flipped[src] { v.negated() } else { v });
        }
        let (a, b, c, d) = loop {
            let m: [i64; 4] = std::array::from_fn(|_| rng.gen_range(-4i64..=4));
            if m[0] * m[3] - m[1] * m[2] != 0 {
                break (Rat::from(m[0]), Rat::from(m[1]), Rat::from(m[2]), Rat::from(m[3]));
            }
        };
        let dirs: Vec<Direction> = dirs
            .into_iter()
            .map(|v| {
                let v = v.expect("every path placed");
                Direction {
                    dx: &a * &v.dx + &b * &v.dy,
                    dy: &c * &v.dx + &d * &v.dy,
                }
            })
            .collect();
        let fixed = solve_fixed(paths, &dirs)?;
        if fixed.is_yes() != free.is_yes() {
            counterexamples.push(dirs);
        }
    }
    Ok(RadialConsistencyReport {
        trials,
        free_feasible: free.is_yes(),
        counterexamples,
    })
}
