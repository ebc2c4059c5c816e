mod common;

use common::*;
use monoseq::digraphs::{
    is_order_unique, solve_digraphs, topological_order, topological_order_with, Digraph, DirectionMode, TieBreak,
};
use monoseq::duality::{projection_order, VerticalLineConfig};
use monoseq::embedder::{embed_two_paths, solve_fixed, solve_three_free, Decision};
use monoseq::format::{InstanceFile, PointsFile, Verdict, WiringFile};
use monoseq::generators::{reduce_stretchability, WiringDiagram};
use monoseq::lp::{feasible, Feasibility, LpProblem};
use monoseq::sequences::{adjust, allowable_order, circular_sequence, contains_permutation, is_allowable_sequence, PathSet};
use monoseq::{Direction, PathPerm, Rat};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn perm_strategy(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((1..=n).collect::<Vec<usize>>()).prop_shuffle()
}

fn perms(k: usize, n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<Vec<usize>>> {
    n.prop_flat_map(move |n| proptest::collection::vec(perm_strategy(n), k))
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

type Row = (Vec<i64>, bool, i64);

fn lp_strategy() -> impl Strategy<Value = (usize, Vec<Row>)> {
    (1usize..=4).prop_flat_map(|v| {
        let row = (proptest::collection::vec(-4i64..=4, v), any::<bool>(), -6i64..=6);
        (Just(v), proptest::collection::vec(row, 1..=6))
    })
}

fn build_lp(v: usize, rows: &[Row]) -> LpProblem {
    let mut lp = LpProblem::new(v);
    for (coeffs, is_eq, rhs) in rows {
        let c: Vec<(usize, Rat)> = coeffs
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0)
            .map(|(i, &a)| (i, Rat::from(a)))
            .collect();
        if *is_eq {
            lp.add_eq(c, *rhs);
        } else {
            lp.add_ge(c, *rhs);
        }
    }
    lp
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn lp_answers_carry_checkable_evidence((v, rows) in lp_strategy()) {
        let lp = build_lp(v, &rows);
        match feasible(&lp).unwrap() {
            Feasibility::Feasible(sol) => prop_assert!(lp.is_satisfied_by(&sol.assignment)),
            Feasibility::Infeasible(cert) => prop_assert!(cert.verify(&lp)),
        }
    }

    #[test]
    fn allowable_order_output_is_allowable(ps in perms(5, 2..=7), anchor in (0usize..7, 0usize..7)) {
        let n = ps[0].len();
        let (i, j) = (anchor.0 % n + 1, anchor.1 % n + 1);
        prop_assume!(i != j);
        let set = PathSet::from_orders(&ps).unwrap();
        let aps = adjust(&set, i, j).unwrap();
        if let Some(seq) = allowable_order(&aps) {
            prop_assert!(is_allowable_sequence(&seq.paths));
            let orders: Vec<Vec<usize>> = seq.paths.iter().map(|p| p.order().to_vec()).collect();
            prop_assert!(allowable_brute(&orders));
            let mut got = orders.clone();
            got.sort();
            let mut want: Vec<Vec<usize>> = aps.paths().iter().map(|p| p.order().to_vec()).collect();
            want.sort();
            prop_assert_eq!(got, want);
        } else {
            let values: Vec<Vec<usize>> = aps.paths().iter().map(|p| p.order().to_vec()).collect();
            prop_assert!(all_allowable_orderings(&values).is_empty());
        }
    }

    #[test]
    fn circular_sequence_laws(seed in any::<u64>(), n in 2usize..=8) {
        let mut r = rng(seed);
        let raw = random_general_points(&mut r, n, 20);
        let pts = point_set(&raw);
        let cs = circular_sequence(&pts).unwrap();
        prop_assert_eq!(cs.swaps.len(), n * (n - 1) / 2);
        prop_assert_eq!(cs.snapshots.last().unwrap(), &cs.initial.reversed());
        for w in cs.snapshots.windows(2) {
            let moved = w[0].order().iter().zip(w[1].order()).filter(|(a, b)| a != b).count();
            prop_assert_eq!(moved, 2, "consecutive snapshots differ by one adjacent swap");
        }
        let (ps, _) = extracted_paths(&mut r, &pts, 4);
        for p in ps.paths() {
            prop_assert!(contains_permutation(&cs, p) || contains_permutation(&cs, &p.reversed()));
        }
    }

    #[test]
    fn two_path_embeddings_verify(pq in perms(2, 2..=30), x1 in -10i64..10, gap in 1i64..20, den in 1i64..4) {
        let p1 = PathPerm::new(pq[0].clone()).unwrap();
        let p2 = PathPerm::new(pq[1].clone()).unwrap();
        let x1 = Rat::new(x1, den);
        let cfg = VerticalLineConfig::new(vec![x1.clone(), &x1 + Rat::new(gap, den)]).unwrap();
        let e = embed_two_paths(&p1, &p2, &cfg).unwrap();
        prop_assert!(e.verify(&PathSet::new(vec![p1, p2]).unwrap()));
    }

    #[test]
    fn linear_maps_preserve_fixed_direction_answers(
        seed in any::<u64>(),
        n in 3usize..=6,
        k in 2usize..=4,
        m in (-3i64..=3, -3i64..=3, -3i64..=3, -3i64..=3),
        scrambled in any::<bool>(),
    ) {
        let (a, b, c, d) = m;
        prop_assume!(a * d - b * c != 0);
        let mut r = rng(seed);
        let pts = point_set(&random_points(&mut r, n, 12));
        let (mut ps, dirs) = extracted_paths(&mut r, &pts, k);
        if scrambled {
            let mut paths = ps.into_paths();
            paths[0] = PathPerm::new(random_perm(&mut r, n)).unwrap();
            ps = PathSet::new(paths).unwrap();
        }
        let mapped: Vec<Direction> = dirs
            .iter()
            .map(|v| {
                let (dx, dy) = (&v.dx, &v.dy);
                Direction::new(Rat::from(a) * dx + Rat::from(b) * dy, Rat::from(c) * dx + Rat::from(d) * dy).unwrap()
            })
            .collect();
        let before = solve_fixed(&ps, &dirs).unwrap();
        let after = solve_fixed(&ps, &mapped).unwrap();
        prop_assert_eq!(before.is_yes(), after.is_yes());
        if !scrambled {
            prop_assert!(before.is_yes());
        }
        for dec in [&before, &after] {
            if let Decision::Yes(e) = dec {
                prop_assert!(e.verify(&ps));
            }
        }
    }

    #[test]
    fn path_digraphs_reduce_to_their_paths(ps in perms(3, 3..=7)) {
        let gs: Vec<Digraph> = ps.iter().map(|o| Digraph::path(o).unwrap()).collect();
        let sol = solve_digraphs(&gs, &[None, None, None], &DirectionMode::FreeThree).unwrap();
        let set = PathSet::from_orders(&ps).unwrap();
        prop_assert_eq!(&sol.implied_paths, &set);
        prop_assert_eq!(sol.decision, solve_three_free(&set).unwrap());
    }

    #[test]
    fn hamiltonian_dags_ignore_tie_breaking(order in (2usize..=12).prop_flat_map(perm_strategy), seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = order.len();
        let mut edges: Vec<(usize, usize)> = order.windows(2).map(|w| (w[0], w[1])).collect();
        for _ in 0..r.gen_range(0..=2 * n) {
            let (x, y) = (r.gen_range(0..n), r.gen_range(0..n));
            if x < y {
                edges.push((order[x], order[y]));
            }
        }
        let g = Digraph::new(n, edges).unwrap();
        let t = topological_order(&g).unwrap();
        prop_assert!(is_order_unique(&g, &t));
        prop_assert_eq!(t.order().order(), order.as_slice());
        prop_assert_eq!(topological_order_with(&g, TieBreak::Largest).unwrap(), t);
    }

    #[test]
    fn reduction_commutes_with_relabeling(seed in any::<u64>(), n in 2usize..=7) {
        let mut r = rng(seed);
        let w = random_wiring(&mut r, n);
        let map = random_perm(&mut r, n);
        let g = reduce_stretchability(&w);
        prop_assert_eq!(g.paths.len(), 1 + (n - 2) * n * (n - 1) / 2);
        prop_assert_eq!(reduce_stretchability(&w.relabeled(&map).unwrap()), g.relabeled(&map));
    }

    #[test]
    fn json_round_trips(seed in any::<u64>(), n in 3usize..=7) {
        let mut r = rng(seed);
        let pts = point_set(&random_general_points(&mut r, n, 15));
        let (ps, _) = extracted_paths(&mut r, &pts, 3);

        let inst = InstanceFile::from_paths(&ps);
        let back = InstanceFile::parse(&serde_json::to_string(&inst).unwrap()).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(back.path_set().unwrap(), ps.clone());

        let dec = solve_three_free(&ps).unwrap();
        let Decision::Yes(e) = &dec else { return Err(TestCaseError::fail("extracted triple rejected")) };
        let pf = PointsFile::from_embedding(e);
        let back = PointsFile::parse(&serde_json::to_string_pretty(&pf).unwrap()).unwrap();
        prop_assert_eq!(back.point_set().unwrap(), e.points.clone());

        let v = Verdict::yes(e);
        let back: Verdict = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        prop_assert_eq!(back, v);

        let w = random_wiring(&mut r, n);
        let text = serde_json::to_string(&WiringFile::new(w.clone())).unwrap();
        prop_assert_eq!(WiringFile::parse(&text).unwrap(), w.clone());
        let back: WiringDiagram = serde_json::from_str(&serde_json::to_string(&w).unwrap()).unwrap();
        prop_assert_eq!(back, w);

        let lp = monoseq::lp::build_embedding_lp(ps.paths(), &VerticalLineConfig::unit(3)).unwrap();
        let back: LpProblem = serde_json::from_str(&serde_json::to_string(&lp).unwrap()).unwrap();
        prop_assert_eq!(back, lp);
    }

    #[test]
    fn projection_order_is_a_snapshot_or_its_reverse(seed in any::<u64>(), n in 2usize..=7) {
        let mut r = rng(seed);
        let raw = random_general_points(&mut r, n, 20);
        let pts = point_set(&raw);
        let sweep = angle_sweep(&raw);
        let v = random_direction(&mut r, 50);
        if let Ok(p) = projection_order(&pts, &v) {
            let o = p.order().to_vec();
            let mut rev = o.clone();
            rev.reverse();
            prop_assert!(sweep.contains(&o) || sweep.contains(&rev));
        }
    }
}
