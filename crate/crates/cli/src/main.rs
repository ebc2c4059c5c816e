mod svg;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use monoseq::digraphs::{solve_digraphs, Caveat, DirectionMode};
use monoseq::duality::{intersection_order, VerticalLineConfig};
use monoseq::embedder::{self, embed_two_paths, solve_fixed, solve_three_free, Decision, Embedding};
use monoseq::format::{
    CircseqFile, GmseFile, InstanceFile, PointsFile, SwapRecord, Verdict, WiringFile, CIRCSEQ_SCHEMA,
};
use monoseq::generators::{
    find_gap_sensitive, gap_sensitive_fixture, gen_expo, gen_nonrealizable_triple, reduce_stretchability,
    WiringDiagram,
};
use monoseq::sequences::{adjust, allowable_order, circular_sequence_with, contains_permutation, CircularOptions, PathSet};
use monoseq::{Direction, PathPerm, Rat};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

const FEASIBLE: u8 = 0;
const INFEASIBLE: u8 = 1;
const FAILURE: u8 = 2;

/// Monotone simultaneous embeddings of directed paths, in exact arithmetic.
///
/// Exit status: 0 feasible or valid, 1 infeasible or invalid, 2 error.
#[derive(Parser)]
#[command(name = "monoseq", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Fixed directions if the instance has any, otherwise free directions.
    Auto,
    /// Directions from the file or from `--config`.
    Fixed,
    /// Any three directions.
    ThreeFree,
}

#[derive(clap::Args)]
struct SolveArgs {
    #[arg(long, value_enum, default_value_t = Mode::Auto)]
    mode: Mode,
    /// Use a named vertical-line configuration from the file as directions.
    #[arg(long)]
    config: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether instances have an embedding and print verdicts.
    Decide {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        solve: SolveArgs,
        /// Worker threads for multiple files.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Construct an embedding and write points and a drawing.
    Embed {
        file: PathBuf,
        #[command(flatten)]
        solve: SolveArgs,
        /// SVG output.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Points JSON output; printed to stdout when no output is given.
        #[arg(long)]
        points: Option<PathBuf>,
        /// Draw the dual line arrangement instead of the point set.
        #[arg(long)]
        dual: bool,
        /// Significant digits for SVG coordinates.
        #[arg(long, default_value_t = 12)]
        precision: usize,
    },
    /// Check that a points file realizes the paths of an instance.
    Verify {
        instance: PathBuf,
        points: PathBuf,
        /// Accept reversed projection orders.
        #[arg(long)]
        allow_reverse: bool,
    },
    /// Adjust a path set and print its allowable order.
    Order {
        file: PathBuf,
        /// The pair (i, j) that the adjustment fixes as i before j.
        #[arg(long, num_args = 2, value_names = ["I", "J"], default_values_t = [1, 2])]
        anchor: Vec<usize>,
    },
    /// Print one half-period of the circular sequence of a point set.
    Circseq {
        points: PathBuf,
        /// Instance whose paths must appear in the sequence.
        #[arg(long)]
        check: Option<PathBuf>,
        /// Break degenerate ties symbolically instead of failing.
        #[arg(long)]
        perturb: bool,
    },
    /// Print the dual lines of a points file and their orders on vertical lines.
    Dual {
        points: PathBuf,
        /// Abscissae of vertical lines; defaults to the duals of the file's directions.
        #[arg(long = "at", allow_hyphen_values = true)]
        at: Vec<Rat>,
    },
    /// Generate instances.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Replace the digraphs of an instance by the paths they imply.
    Reduce { file: PathBuf },
}

#[derive(Subcommand)]
enum GenKind {
    /// The triple whose embeddings need exponentially spread slopes.
    Expo {
        #[arg(long)]
        m: usize,
    },
    /// A triple with no embedding for any directions.
    Nonrealizable,
    /// Four paths whose feasibility depends on the gaps between directions.
    GapSensitive {
        /// Rerun the search; without a seed the frozen result of seed 7 is printed.
        #[arg(long, env = "MONOSEQ_SEED")]
        seed: Option<u64>,
        #[arg(long, default_value_t = 20_000)]
        budget: usize,
    },
    /// The path instance encoding a wiring diagram.
    Gmse { wiring: PathBuf },
    /// A random wiring diagram.
    Wiring {
        #[arg(long)]
        n: usize,
        #[arg(long, env = "MONOSEQ_SEED", default_value_t = 0)]
        seed: u64,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_instance(path: &Path) -> Result<InstanceFile> {
    InstanceFile::parse(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn read_points(path: &Path) -> Result<PointsFile> {
    PointsFile::parse(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("values serialize") + "\n"
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn directions_for(inst: &InstanceFile, config: Option<&str>) -> Result<Option<Vec<Direction>>> {
    match config {
        Some(name) => {
            let cfg = inst.config(name).ok_or_else(|| anyhow!("no configuration named {name:?}"))?;
            Ok(Some(cfg.directions()))
        }
        None => Ok(inst.directions.clone()),
    }
}

struct Solved {
    paths: PathSet,
    decision: Decision,
    caveat: Option<Caveat>,
}

fn solve(inst: &InstanceFile, args: &SolveArgs) -> Result<Solved> {
    let dirs = directions_for(inst, args.config.as_deref())?;
    let k = inst.digraphs.as_ref().filter(|_| inst.paths.is_empty()).map_or(inst.paths.len(), Vec::len);
    let mode = match (args.mode, &dirs) {
        (Mode::Fixed, None) => bail!("fixed mode needs directions in the file or --config"),
        (Mode::Fixed, Some(d)) | (Mode::Auto, Some(d)) => DirectionMode::Fixed(d.clone()),
        (Mode::ThreeFree, _) => DirectionMode::FreeThree,
        (Mode::Auto, None) if k == 3 => DirectionMode::FreeThree,
        // at most two paths always embed; use the canonical directions
        (Mode::Auto, None) if k <= 2 => DirectionMode::Fixed(VerticalLineConfig::unit(k).directions()),
        (Mode::Auto, None) => bail!("free directions are supported for at most three paths; give directions"),
    };

    if inst.paths.is_empty() {
        if let Some(gs) = &inst.digraphs {
            let (graphs, orders) = inst.digraph_inputs(gs)?;
            let sol = solve_digraphs(&graphs, &orders, &mode)?;
            return Ok(Solved {
                paths: sol.implied_paths,
                decision: sol.decision,
                caveat: Some(sol.caveat),
            });
        }
    }
    let paths = inst.path_set()?;
    let decision = match &mode {
        DirectionMode::FreeThree => solve_three_free(&paths)?,
        DirectionMode::Fixed(d) if dirs.is_none() && paths.k() == 2 => {
            let [p1, p2] = paths.paths() else { unreachable!() };
            Decision::Yes(embed_two_paths(p1, p2, &VerticalLineConfig::unit(2))?)
        }
        DirectionMode::Fixed(d) => solve_fixed(&paths, d)?,
    };
    Ok(Solved { paths, decision, caveat: None })
}

fn verdict(s: &Solved) -> Verdict {
    let mut v = match &s.decision {
        Decision::Yes(e) => Verdict::yes(e),
        Decision::No(r) => Verdict::no(r),
    };
    v.caveat = s.caveat.as_ref().map(|c| c.note.to_string());
    v
}

fn status(d: &Decision) -> u8 {
    if d.is_yes() {
        FEASIBLE
    } else {
        INFEASIBLE
    }
}

fn decide(files: &[PathBuf], args: &SolveArgs, jobs: usize) -> Result<u8> {
    let run = |f: &PathBuf| read_instance(f).and_then(|inst| solve(&inst, args));
    if let [single] = files {
        let s = run(single)?;
        print!("{}", to_json(&verdict(&s)));
        return Ok(status(&s.decision));
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?;
    let results: Vec<Result<Solved>> = pool.install(|| files.par_iter().map(run).collect());
    let mut code = FEASIBLE;
    let mut report = Vec::new();
    for (f, r) in files.iter().zip(results) {
        let file = f.display().to_string();
        match r {
            Ok(s) => {
                code = code.max(status(&s.decision));
                report.push(json!({ "file": file, "verdict": verdict(&s) }));
            }
            Err(e) => {
                code = FAILURE;
                report.push(json!({ "file": file, "error": format!("{e:#}") }));
            }
        }
    }
    print!("{}", to_json(&report));
    Ok(code)
}

fn embed(file: &Path, args: &SolveArgs, svg_out: Option<&Path>, points_out: Option<&Path>, dual: bool, digits: usize) -> Result<u8> {
    let s = solve(&read_instance(file)?, args)?;
    let e: &Embedding = match &s.decision {
        Decision::Yes(e) => e,
        Decision::No(r) => {
            eprintln!("no embedding: {}", r.code());
            print!("{}", to_json(&verdict(&s)));
            return Ok(INFEASIBLE);
        }
    };
    let points = to_json(&PointsFile::from_embedding(e));
    if let Some(p) = svg_out {
        let drawing = if dual {
            svg::dual(&e.points, &e.directions, digits)
        } else {
            svg::primal(&e.points, &s.paths, &e.directions, digits)
        };
        fs::write(p, drawing).with_context(|| format!("writing {}", p.display()))?;
    }
    if points_out.is_some() || svg_out.is_none() {
        emit(&points, points_out)?;
    }
    Ok(FEASIBLE)
}

fn verify(instance: &Path, points: &Path, allow_reverse: bool) -> Result<u8> {
    let inst = read_instance(instance)?;
    let pf = read_points(points)?;
    let dirs = pf
        .directions
        .clone()
        .or_else(|| inst.directions.clone())
        .ok_or_else(|| anyhow!("no directions in either file"))?;
    let ok = embedder::verify(&pf.point_set()?, &dirs, &inst.path_set()?, allow_reverse);
    print!("{}", to_json(&json!({ "valid": ok })));
    Ok(if ok { FEASIBLE } else { INFEASIBLE })
}

fn order(file: &Path, anchor: &[usize]) -> Result<u8> {
    let ps = read_instance(file)?.path_set()?;
    let aps = adjust(&ps, anchor[0], anchor[1])?;
    let adjusted: Vec<&[usize]> = aps.paths().iter().map(|p| p.order()).collect();
    let (code, body) = match allowable_order(&aps) {
        Some(seq) => (
            FEASIBLE,
            json!({
                "anchor": anchor,
                "adjusted": adjusted,
                "allowable": true,
                "order": seq.source.iter().map(|i| i + 1).collect::<Vec<_>>(),
                "sequence": seq.paths,
            }),
        ),
        None => (INFEASIBLE, json!({ "anchor": anchor, "adjusted": adjusted, "allowable": false })),
    };
    print!("{}", to_json(&body));
    Ok(code)
}

fn circseq(points: &Path, check: Option<&Path>, perturb: bool) -> Result<u8> {
    let pts = read_points(points)?.point_set()?;
    let cs = circular_sequence_with(&pts, CircularOptions { perturb })?;
    let contained = match check {
        Some(f) => {
            let ps = read_instance(f)?.path_set()?;
            Some(ps.paths().iter().map(|p| contains_permutation(&cs, p)).collect::<Vec<bool>>())
        }
        None => None,
    };
    let all = contained.as_ref().is_none_or(|c| c.iter().all(|&b| b));
    let file = CircseqFile {
        schema: CIRCSEQ_SCHEMA.into(),
        perturbed: cs.perturbed,
        snapshots: cs.snapshots.iter().map(|p| p.order().to_vec()).collect(),
        swaps: cs
            .swaps
            .iter()
            .map(|s| SwapRecord {
                pair: s.pair,
                normal: s.normal.clone(),
            })
            .collect(),
        contained,
    };
    print!("{}", to_json(&file));
    Ok(if all { FEASIBLE } else { INFEASIBLE })
}

fn dual(points: &Path, at: &[Rat]) -> Result<u8> {
    let pf = read_points(points)?;
    let pts = pf.point_set()?;
    let lines = pts.dual_lines();
    let xs: Vec<Rat> = if at.is_empty() {
        pf.directions
            .iter()
            .flatten()
            .filter_map(|d| match monoseq::duality::direction_to_vertical(d) {
                monoseq::duality::VerticalPosition::Finite(x) => Some(x),
                monoseq::duality::VerticalPosition::AtInfinity => None,
            })
            .collect()
    } else {
        at.to_vec()
    };
    let orders = xs
        .iter()
        .map(|x| {
            let order = intersection_order(&lines, x).ok();
            json!({ "x": x, "order": order })
        })
        .collect::<Vec<_>>();
    print!("{}", to_json(&json!({ "lines": lines, "orders": orders })));
    Ok(FEASIBLE)
}

fn gen(kind: &GenKind, out: Option<&Path>) -> Result<u8> {
    let text = match kind {
        GenKind::Expo { m } => to_json(&InstanceFile::from_paths(&gen_expo(*m)?)),
        GenKind::Nonrealizable => to_json(&InstanceFile::from_paths(&gen_nonrealizable_triple())),
        GenKind::GapSensitive { seed, budget } => {
            let g = match seed {
                None => gap_sensitive_fixture(),
                Some(s) => find_gap_sensitive(*budget, *s)?
                    .ok_or_else(|| anyhow!("no gap-sensitive instance within {budget} trials of seed {s}"))?,
            };
            to_json(&InstanceFile::from_gap_sensitive(&g))
        }
        GenKind::Gmse { wiring } => {
            let w = WiringFile::parse(&read(wiring)?).with_context(|| format!("in {}", wiring.display()))?;
            to_json(&GmseFile::new(reduce_stretchability(&w)))
        }
        GenKind::Wiring { n, seed } => {
            if *n < 2 {
                bail!("a wiring diagram needs at least two pseudolines");
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let w = WiringDiagram::random(PathPerm::identity(*n), &mut rng);
            to_json(&WiringFile::new(w))
        }
    };
    emit(&text, out)?;
    Ok(FEASIBLE)
}

fn reduce(file: &Path) -> Result<u8> {
    let inst = read_instance(file)?;
    if inst.digraphs.is_none() {
        bail!("instance has no digraphs");
    }
    let mut reduced = InstanceFile::from_paths(&inst.path_set()?);
    reduced.directions = inst.directions.clone();
    reduced.configs = inst.configs.clone();
    eprintln!("note: {}", Caveat::default().note);
    print!("{}", to_json(&reduced));
    Ok(FEASIBLE)
}

fn run(cli: Cli) -> Result<u8> {
    match &cli.command {
        Command::Decide { files, solve, jobs } => decide(files, solve, *jobs),
        Command::Embed {
            file,
            solve,
            svg,
            points,
            dual,
            precision,
        } => embed(file, solve, svg.as_deref(), points.as_deref(), *dual, *precision),
        Command::Verify {
            instance,
            points,
            allow_reverse,
        } => verify(instance, points, *allow_reverse),
        Command::Order { file, anchor } => order(file, anchor),
        Command::Circseq { points, check, perturb } => circseq(points, check.as_deref(), *perturb),
        Command::Dual { points, at } => dual(points, at),
        Command::Gen { kind, out } => gen(kind, out.as_deref()),
        Command::Reduce { file } => reduce(file),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { FAILURE } else { FEASIBLE });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(FAILURE)
        }
    }
}
