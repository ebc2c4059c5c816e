//! Independent oracles and random instance builders shared by the
//! integration tests. Nothing here calls the code under test for its answer.
#![allow(dead_code)]

use monoseq::duality::{projection_order, PointSet};
use monoseq::generators::WiringDiagram;
use monoseq::sequences::PathSet;
use monoseq::{Direction, PathPerm, Point2, Rat};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn pos(p: &[usize]) -> Vec<usize> {
    let mut r = vec![0; p.len() + 1];
    for (i, &v) in p.iter().enumerate() {
        r[v] = i;
    }
    r
}

/// Each pair changes relative order at most once along `seq`.
pub fn allowable_brute(seq: &[Vec<usize>]) -> bool {
    if seq.len() < 3 {
        return true;
    }
    let n = seq[0].len();
    let ranks: Vec<Vec<usize>> = seq.iter().map(|p| pos(p)).collect();
    for a in 1..=n {
        for b in a + 1..=n {
            let signs: Vec<bool> = ranks.iter().map(|r| r[a] < r[b]).collect();
            let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
            if changes > 1 {
                return false;
            }
        }
    }
    true
}

/// Every allowable ordering of `paths`, as value sequences.
pub fn all_allowable_orderings(paths: &[Vec<usize>]) -> Vec<Vec<Vec<usize>>> {
    let k = paths.len();
    let mut idx: Vec<usize> = (0..k).collect();
    let mut out = Vec::new();
    permute(&mut idx, 0, &mut |perm| {
        let seq: Vec<Vec<usize>> = perm.iter().map(|&i| paths[i].clone()).collect();
        if allowable_brute(&seq) && !out.contains(&seq) {
            out.push(seq);
        }
    });
    out
}

fn permute(a: &mut Vec<usize>, start: usize, f: &mut impl FnMut(&[usize])) {
    if start == a.len() {
        f(a);
        return;
    }
    for i in start..a.len() {
        a.swap(start, i);
        permute(a, start + 1, f);
        a.swap(start, i);
    }
}

fn sort_by_key(points: &[(i64, i64)], key: impl Fn(i64, i64) -> Rat) -> Vec<usize> {
    let mut idx: Vec<usize> = (1..=points.len()).collect();
    idx.sort_by(|&i, &j| {
        let (a, b) = (points[i - 1], points[j - 1]);
        key(a.0, a.1).cmp(&key(b.0, b.1))
    });
    idx
}

/// Projection orders while a direction turns from angle 0⁺ to π⁺, sampled
/// strictly between consecutive swap events. Directions `(t, 1)` with `t`
/// decreasing cover the open upper half-plane; swaps whose normal is
/// horizontal happen at π.
pub fn angle_sweep(points: &[(i64, i64)]) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut events: Vec<Rat> = Vec::new();
    let mut at_pi = false;
    for i in 0..n {
        for j in i + 1..n {
            let (dx, dy) = (points[j].0 - points[i].0, points[j].1 - points[i].1);
            // normal (-dy, dx) or its negation, taken with positive y part
            let (nx, ny) = if dx > 0 { (-dy, dx) } else { (dy, -dx) };
            if ny == 0 {
                at_pi = true;
            } else {
                events.push(Rat::new(nx, ny));
            }
        }
    }
    events.sort();
    events.dedup();
    let first = {
        let mut idx: Vec<usize> = (1..=n).collect();
        idx.sort_by_key(|&i| points[i - 1]);
        idx
    };
    let mut snaps = vec![first.clone()];
    let mut samples = Vec::new();
    // descending cot = ascending angle
    for w in events.windows(2).rev() {
        samples.push((&w[0] + &w[1]) * Rat::new(1, 2));
    }
    if let Some(lowest) = events.first() {
        samples.push(lowest - &Rat::one());
    }
    for t in samples {
        let s = sort_by_key(points, |x, y| &t * &Rat::from(x) + Rat::from(y));
        if snaps.last() != Some(&s) {
            snaps.push(s);
        }
    }
    if at_pi {
        let mut last = first;
        last.reverse();
        snaps.push(last);
    }
    snaps
}

pub fn random_points(rng: &mut impl Rng, n: usize, span: i64) -> Vec<(i64, i64)> {
    loop {
        let pts: Vec<(i64, i64)> = (0..n)
            .map(|_| (rng.gen_range(-span..=span), rng.gen_range(-span..=span)))
            .collect();
        let mut uniq = pts.clone();
        uniq.sort();
        uniq.dedup();
        if uniq.len() == n {
            return pts;
        }
    }
}

/// No three collinear and no two connecting lines parallel.
pub fn in_general_position(points: &[(i64, i64)]) -> bool {
    let n = points.len();
    let mut dirs: Vec<(i64, i64)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let (mut dx, mut dy) = (points[j].0 - points[i].0, points[j].1 - points[i].1);
            if dx < 0 || (dx == 0 && dy < 0) {
                dx = -dx;
                dy = -dy;
            }
            let g = gcd(dx.abs(), dy.abs());
            dirs.push((dx / g, dy / g));
        }
    }
    let total = dirs.len();
    dirs.sort();
    dirs.dedup();
    dirs.len() == total
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn random_general_points(rng: &mut impl Rng, n: usize, span: i64) -> Vec<(i64, i64)> {
    loop {
        let pts = random_points(rng, n, span);
        if in_general_position(&pts) {
            return pts;
        }
    }
}

pub fn point_set(points: &[(i64, i64)]) -> PointSet {
    PointSet::new(points.iter().map(|&(x, y)| Point2::new(x, y)).collect()).unwrap()
}

pub fn random_direction(rng: &mut impl Rng, span: i64) -> Direction {
    loop {
        let (dx, dy) = (rng.gen_range(-span..=span), rng.gen_range(-span..=span));
        if (dx, dy) != (0, 0) {
            return Direction::new(dx, dy).unwrap();
        }
    }
}

/// Projection orders at `k` random directions, retrying on ties.
pub fn extracted_paths(rng: &mut impl Rng, pts: &PointSet, k: usize) -> (PathSet, Vec<Direction>) {
    let mut paths = Vec::new();
    let mut dirs = Vec::new();
    while paths.len() < k {
        let v = random_direction(rng, 9);
        if let Ok(p) = projection_order(pts, &v) {
            paths.push(p);
            dirs.push(v);
        }
    }
    (PathSet::new(paths).unwrap(), dirs)
}

pub fn random_perm(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (1..=n).collect();
    v.shuffle(rng);
    v
}

pub fn random_wiring(rng: &mut impl Rng, n: usize) -> WiringDiagram {
    let initial = PathPerm::new(random_perm(rng, n)).unwrap();
    WiringDiagram::random(initial, rng)
}
