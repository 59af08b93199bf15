//! Command-line front end. `run` is the whole program; the binary only wires
//! it to the process streams so tests can drive it in-process.

use std::ffi::OsString;
use std::fs;
use std::io::{BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::bounds::{derive_bounds, BoundRecord};
use crate::constructions::{conjectured_mu5, ConstructionSpec};
use crate::encoder::{
    decode_model, default_split, encode_maxsat, encode_sat, make_cubes_with, model_to_assignment, parse_wcnf,
    write_cubes, write_dimacs, write_wcnf, WcnfFormula, WcnfStyle,
};
use crate::geom::{count_convex_kgons, signotope_of, PointSet};
use crate::maxsat_bb::{combine_cube_results, solve_cubes, solve_exact_with, BranchOrder, SolveConfig, SolveError};
use crate::realizer::{realize, to_svg, RealizationStatus, RealizerConfig};
use crate::signotope::{check_axioms, count_convex_cases, SignotopeAssignment};
use crate::sls::{sls_portfolio, PortfolioMode, SlsConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Debug)]
enum Failure {
    Input(String),
    Budget(String),
    Mismatch(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => EXIT_INPUT,
            Failure::Budget(_) => EXIT_BUDGET,
            Failure::Mismatch(_) => EXIT_MISMATCH,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Budget(m) | Failure::Mismatch(m) => m,
        }
    }
}

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

type Outcome = Result<(), Failure>;

#[derive(Parser, Debug)]
#[command(name = "pentagons", version, about = "Convex pentagons in planar point sets: counting, encodings, search and bounds")]
struct Cli {
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the SAT or MaxSAT formula for n points.
    Encode(EncodeArgs),
    /// Generate a point set.
    Construct(ConstructArgs),
    /// Count convex k-gons of a point set.
    Count(CountArgs),
    /// Print the signotope of a point set.
    Signotope(PointsArg),
    /// Local search for assignments with few convex pentagons.
    Sls(SlsArgs),
    /// Exact MaxSAT optimum.
    Solve(SolveArgs),
    /// Search for points realizing a signotope.
    Realize(RealizeArgs),
    /// Print the cube split of the formula for n points.
    Cubes(CubesArgs),
    /// Bounds on the minimum number of convex pentagons, as CSV.
    Bounds(BoundsArgs),
    /// Cross-check geometric and combinatorial pentagon counts.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct EncodeArgs {
    #[arg(long)]
    n: usize,
    /// Add the unit clauses fixing the orientations around point 1.
    #[arg(long)]
    symmetry: bool,
    /// Leave out the signotope axioms (plain SAT formula only).
    #[arg(long)]
    no_axioms: bool,
    /// MaxSAT output file; `-` for stdout.
    #[arg(long)]
    wcnf: Option<PathBuf>,
    /// SAT output file; `-` for stdout.
    #[arg(long)]
    cnf: Option<PathBuf>,
    /// Cube output file; `-` for stdout.
    #[arg(long)]
    cubes: Option<PathBuf>,
    /// Splitting triples, e.g. `3,4,5;5,6,7`.
    #[arg(long)]
    split: Option<String>,
    #[arg(long, value_enum, default_value_t = StyleArg::Classic)]
    style: StyleArg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StyleArg {
    /// `p wcnf` header with explicit top weight.
    Classic,
    /// Header-less format with `h` for hard clauses.
    Modern,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Pinwheel,
    Parabolic,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Number of points; a multiple of 4 for the pinwheel.
    #[arg(long)]
    n: Option<usize>,
    /// Points per pinwheel spoke.
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Args, Debug)]
struct PointsArg {
    /// Point-set JSON file; stdin when absent or `-`.
    #[arg(long)]
    points: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CountArgs {
    #[command(flatten)]
    points: PointsArg,
    #[arg(long, default_value_t = 5)]
    k: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Seeds,
    Restarts,
}

#[derive(Args, Debug)]
struct SlsArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Portfolio size: seeds `seed, seed+1, ...`.
    #[arg(long, default_value_t = 1)]
    seeds: u64,
    #[arg(long, value_enum, default_value_t = ModeArg::Seeds)]
    mode: ModeArg,
    #[arg(long, default_value_t = 10_000_000)]
    max_flips: u64,
    #[arg(long, default_value_t = 100_000)]
    restart_interval: u64,
    #[arg(long)]
    no_axioms: bool,
    /// Stop once this many clauses or fewer are falsified.
    #[arg(long)]
    target: Option<u64>,
    /// Print `c flips=<k> best=<b>` to stderr every this many flips.
    #[arg(long)]
    progress: Option<u64>,
    /// Wall-clock limit per run, seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Write the best assignment here in signotope text format.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OrderArg {
    Lex,
    Occ,
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// Solve the formula for n points.
    #[arg(long, conflicts_with = "wcnf")]
    n: Option<usize>,
    /// Solve a WCNF file instead.
    #[arg(long)]
    wcnf: Option<PathBuf>,
    /// Known upper bound, or `conjectured`.
    #[arg(long)]
    ub_hint: Option<String>,
    /// Drop the symmetry units (with --n).
    #[arg(long)]
    no_symmetry: bool,
    /// Split with the default cubes and solve each (with --n).
    #[arg(long)]
    cubes: bool,
    #[arg(long, default_value_t = 1_000_000_000)]
    max_propagations: u64,
    #[arg(long, value_enum, default_value_t = OrderArg::Occ)]
    order: OrderArg,
    /// Try the false phase of decision variables first.
    #[arg(long)]
    false_first: bool,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Write the optimal model as a `v ... 0` line.
    #[arg(long)]
    model_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RealizeArgs {
    /// Signotope text file; stdin when absent or `-`.
    #[arg(long)]
    signotope: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Draw the convex hull in the SVG.
    #[arg(long)]
    hull: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    restarts: usize,
    #[arg(long, default_value_t = 1e-3)]
    epsilon: f64,
    /// Side of the bounding box.
    #[arg(long = "box", default_value_t = 10.0)]
    box_size: f64,
    #[arg(long, default_value_t = 200_000)]
    max_iters: usize,
    /// Seconds.
    #[arg(long, default_value_t = 120.0)]
    time_limit: f64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args, Debug)]
struct CubesArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    split: Option<String>,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    /// One or more n; `a..b` ranges are inclusive.
    #[arg(long, required = true, num_args = 1..)]
    n: Vec<String>,
    /// Extra premise `m=r` meaning mu_5(m) >= r.
    #[arg(long)]
    from: Option<String>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, conflicts_with = "signotope")]
    points: Option<PathBuf>,
    #[arg(long)]
    signotope: Option<PathBuf>,
}

/// Runs the program on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_INPUT } else {
                let _ = write!(stdout, "{e}");
                EXIT_OK
            };
        }
    };
    let mut ctx = Ctx { json: cli.json, stdin, stdout, stderr };
    let result = match cli.command {
        Command::Encode(a) => ctx.encode(a),
        Command::Construct(a) => ctx.construct(a),
        Command::Count(a) => ctx.count(a),
        Command::Signotope(a) => ctx.signotope(a),
        Command::Sls(a) => ctx.sls(a),
        Command::Solve(a) => ctx.solve(a),
        Command::Realize(a) => ctx.realize(a),
        Command::Cubes(a) => ctx.cubes(a),
        Command::Bounds(a) => ctx.bounds(a),
        Command::Verify(a) => ctx.verify(a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(ctx.stderr, "error: {}", f.message());
            f.code()
        }
    }
}

struct Ctx<'a> {
    json: bool,
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

fn is_stdio(p: &Option<PathBuf>) -> bool {
    p.as_deref().is_none_or(|p| p == Path::new("-"))
}

fn parse_split(s: &str) -> Result<Vec<(usize, usize, usize)>, Failure> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let v: Vec<usize> = t.split(',').map(|x| x.trim().parse::<usize>()).collect::<Result<_, _>>().map_err(input)?;
            match v.as_slice() {
                [a, b, c] => Ok((*a, *b, *c)),
                _ => Err(Failure::Input(format!("split triple {t:?} needs three labels"))),
            }
        })
        .collect()
}

fn parse_n_list(items: &[String]) -> Result<Vec<u64>, Failure> {
    let mut out = Vec::new();
    for item in items {
        for part in item.split(',') {
            if let Some((a, b)) = part.split_once("..") {
                let a: u64 = a.trim().parse().map_err(input)?;
                let b: u64 = b.trim().parse().map_err(input)?;
                out.extend(a..=b);
            } else {
                out.push(part.trim().parse().map_err(input)?);
            }
        }
    }
    Ok(out)
}

impl Ctx<'_> {
    fn read(&mut self, path: &Option<PathBuf>) -> Result<String, Failure> {
        if is_stdio(path) {
            let mut s = String::new();
            self.stdin.read_to_string(&mut s).map_err(input)?;
            Ok(s)
        } else {
            let p = path.as_ref().expect("checked");
            fs::read_to_string(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))
        }
    }

    fn emit(&mut self, path: &Option<PathBuf>, bytes: &[u8]) -> Outcome {
        if is_stdio(path) {
            self.stdout.write_all(bytes).map_err(input)
        } else {
            let p = path.as_ref().expect("checked");
            fs::write(p, bytes).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))
        }
    }

    fn print_json(&mut self, v: &Value) -> Outcome {
        writeln!(self.stdout, "{}", serde_json::to_string(v).expect("json value")).map_err(input)
    }

    fn read_points(&mut self, path: &Option<PathBuf>) -> Result<PointSet, Failure> {
        let text = self.read(path)?;
        PointSet::from_json(&text).map_err(input)
    }

    fn read_signotope(&mut self, path: &Option<PathBuf>) -> Result<SignotopeAssignment, Failure> {
        let text = self.read(path)?;
        SignotopeAssignment::from_text(&text).map_err(input)
    }

    fn encode(&mut self, a: EncodeArgs) -> Outcome {
        let style = match a.style {
            StyleArg::Classic => WcnfStyle::Classic,
            StyleArg::Modern => WcnfStyle::Modern,
        };
        let split = match &a.split {
            Some(s) => parse_split(s)?,
            None => default_split(a.n),
        };
        let mut summary = json!({ "n": a.n });
        let wants_cnf = a.cnf.is_some() || a.no_axioms;
        if a.wcnf.is_some() || !wants_cnf {
            if a.no_axioms {
                return Err(Failure::Input("--no-axioms applies to the SAT formula only".into()));
            }
            let f = encode_maxsat(a.n, a.symmetry).map_err(input)?;
            let mut buf = Vec::new();
            write_wcnf(&f, &mut buf, style).map_err(input)?;
            let sym = if a.symmetry { crate::encoder::symmetry_units(a.n).len() } else { 0 };
            summary["wcnf"] = json!({
                "vars": f.num_vars,
                "hard": f.hard.len() - sym,
                "soft": f.soft.len(),
                "symmetry": sym,
                "top": f.top,
            });
            if !self.json || !is_stdio(&a.wcnf) {
                self.emit(&a.wcnf, &buf)?;
            }
        }
        if wants_cnf {
            let f = encode_sat(a.n, !a.no_axioms).map_err(input)?;
            let mut buf = Vec::new();
            write_dimacs(&f, &mut buf).map_err(input)?;
            summary["cnf"] = json!({ "vars": f.num_vars, "clauses": f.clauses.len() });
            if !self.json || !is_stdio(&a.cnf) {
                self.emit(&a.cnf, &buf)?;
            }
        }
        if a.cubes.is_some() {
            let cubes = make_cubes_with(a.n, &split).map_err(input)?;
            let mut buf = Vec::new();
            write_cubes(&cubes, &mut buf).map_err(input)?;
            summary["cubes"] = json!(cubes.len());
            if !self.json || !is_stdio(&a.cubes) {
                self.emit(&a.cubes, &buf)?;
            }
        }
        if self.json {
            self.print_json(&summary)?;
        }
        Ok(())
    }

    fn construct(&mut self, a: ConstructArgs) -> Outcome {
        let spec = match a.kind {
            KindArg::Parabolic => {
                let n = a.n.ok_or_else(|| Failure::Input("parabolic needs --n".into()))?;
                ConstructionSpec::Parabolic { n }
            }
            KindArg::Pinwheel => {
                let k = match (a.k, a.n) {
                    (Some(k), _) => k,
                    (None, Some(n)) if n % 4 == 0 => n / 4,
                    (None, Some(n)) => return Err(Failure::Input(format!("pinwheel needs n divisible by 4, got {n}"))),
                    (None, None) => return Err(Failure::Input("pinwheel needs --k or --n".into())),
                };
                ConstructionSpec::Pinwheel { k }
            }
        };
        let points = spec.build().map_err(input)?;
        if self.json {
            // One invocation: points, their pentagon count and signotope.
            let count = count_convex_kgons(&points, 5).map_err(input)?;
            let sig = signotope_of(&points).map_err(input)?;
            let pts: Value = serde_json::from_str(&points.to_json()).expect("own output");
            self.print_json(&json!({
                "construction": spec,
                "n": points.len(),
                "points": pts["points"],
                "count5": count,
                "conjectured": conjectured_mu5(points.len() as u64).to_string(),
                "signotope": sig.to_text(),
            }))
        } else {
            self.emit(&None, points.to_json().as_bytes())
        }
    }

    fn count(&mut self, a: CountArgs) -> Outcome {
        let points = self.read_points(&a.points.points)?;
        let count = count_convex_kgons(&points, a.k).map_err(input)?;
        if self.json {
            self.print_json(&json!({ "n": points.len(), "k": a.k, "count": count }))
        } else {
            writeln!(self.stdout, "{count}").map_err(input)
        }
    }

    fn signotope(&mut self, a: PointsArg) -> Outcome {
        let points = self.read_points(&a.points)?;
        let sig = signotope_of(&points).map_err(input)?;
        if self.json {
            self.print_json(&json!({ "n": sig.n(), "signotope": sig.to_text() }))
        } else {
            self.emit(&None, sig.to_text().as_bytes())
        }
    }

    fn sls(&mut self, a: SlsArgs) -> Outcome {
        let cfg = SlsConfig {
            seed: a.seed,
            max_flips: a.max_flips,
            restart_interval: a.restart_interval,
            include_axioms: !a.no_axioms,
            target: a.target,
            time_limit: a.time_limit.map(Duration::from_secs_f64),
            ..SlsConfig::default()
        };
        let mode = match a.mode {
            ModeArg::Seeds => PortfolioMode::DistinctSeeds,
            ModeArg::Restarts => PortfolioMode::DistinctRestarts,
        };
        let seeds: Vec<u64> = (0..a.seeds.max(1)).map(|i| a.seed + i).collect();
        let result = if let (Some(every), true) = (a.progress, seeds.len() == 1 && mode == PortfolioMode::DistinctSeeds) {
            let c = SlsConfig { progress_interval: Some(every), ..cfg };
            let stderr = &mut *self.stderr;
            let r = crate::sls::sls_minimize_with_progress(a.n, &c, &mut |f, b| {
                let _ = writeln!(stderr, "c flips={f} best={b}");
            })
            .map_err(input)?;
            crate::sls::PortfolioResult { mode, harvest: vec![(r.best_falsified, r.best_assignment.clone())], runs: vec![r], best: 0 }
        } else {
            sls_portfolio(a.n, &cfg, &seeds, mode, a.jobs).map_err(input)?
        };
        let best = result.best_run();
        // Independent recount of the reported best.
        let formula = encode_sat(a.n, !a.no_axioms).map_err(input)?;
        let recount = formula.count_falsified(best.best_assignment.values()) as u64;
        if recount != best.best_falsified {
            return Err(Failure::Mismatch(format!("recount {recount} != reported {}", best.best_falsified)));
        }
        if let Some(out) = &a.out {
            self.emit(&Some(out.clone()), best.best_assignment.to_text().as_bytes())?;
        }
        let s = best.summary();
        let mut v = json!({ "n": s.n, "best": s.best, "flips": s.flips, "restarts": s.restarts, "seed": s.seed });
        if self.json {
            v["axiom_violations"] = json!(best.axiom_violations);
            v["mode"] = json!(result.mode);
            v["time"] = json!(result.runs.iter().map(|r| r.wall_time.as_secs_f64()).sum::<f64>());
            v["runs"] = result.runs.iter().map(|r| serde_json::to_value(r.summary()).expect("summary")).collect();
        }
        self.print_json(&v)
    }

    fn solve(&mut self, a: SolveArgs) -> Outcome {
        let formula: WcnfFormula = match (&a.n, &a.wcnf) {
            (Some(n), None) => encode_maxsat(*n, !a.no_symmetry).map_err(input)?,
            (None, Some(p)) => {
                let file = fs::File::open(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
                parse_wcnf(BufReader::new(file)).map_err(input)?
            }
            _ => return Err(Failure::Input("solve needs exactly one of --n and --wcnf".into())),
        };
        let ub_hint = match a.ub_hint.as_deref() {
            None => None,
            Some("conjectured") => {
                let n = a.n.ok_or_else(|| Failure::Input("--ub-hint conjectured needs --n".into()))?;
                Some(conjectured_mu5(n as u64) as u64)
            }
            Some(s) => Some(s.parse::<u64>().map_err(input)?),
        };
        let cfg = SolveConfig {
            ub_hint,
            max_propagations: Some(a.max_propagations),
            order: match a.order {
                OrderArg::Lex => BranchOrder::Lexicographic,
                OrderArg::Occ => BranchOrder::Occurrences,
            },
            true_first: !a.false_first,
        };
        let started = std::time::Instant::now();
        let mut cube_optima = None;
        let result = if a.cubes {
            let n = a.n.ok_or_else(|| Failure::Input("--cubes needs --n".into()))?;
            let cubes = make_cubes_with(n, &default_split(n)).map_err(input)?;
            let results = solve_cubes(&formula, &cubes, &cfg, a.jobs);
            cube_optima = Some(
                results
                    .iter()
                    .map(|r| match &r.result {
                        Ok(s) => json!(s.optimum),
                        Err(_) => Value::Null,
                    })
                    .collect::<Vec<_>>(),
            );
            combine_cube_results(&results)
        } else {
            solve_exact_with(&formula, &cfg)
        };
        let elapsed = started.elapsed().as_secs_f64();
        let solution = match result {
            Ok(s) => s,
            Err(SolveError::BudgetExceeded { lower, upper, propagations, .. }) => {
                self.print_json(&json!({
                    "n": a.n,
                    "status": "budget_exceeded",
                    "lower": lower,
                    "upper": upper,
                    "propagations": propagations,
                    "time": elapsed,
                }))?;
                return Err(Failure::Budget(format!("budget exhausted; optimum in [{lower}, {}]", upper.map_or("?".into(), |u| u.to_string()))));
            }
            Err(e) => return Err(Failure::Input(e.to_string())),
        };
        // The witness must re-evaluate to the optimum.
        let assignment = model_to_assignment(&solution.model, formula.num_vars);
        if formula.cost(&assignment) != Some(solution.optimum) {
            return Err(Failure::Mismatch("witness model does not re-evaluate to the optimum".into()));
        }
        if let Some(n) = a.n {
            let sig = decode_model(n, &solution.model).map_err(input)?;
            let count = count_convex_cases(&sig);
            if !check_axioms(&sig).is_empty() || count != solution.optimum {
                return Err(Failure::Mismatch(format!("witness has {count} convex pentagons, optimum {}", solution.optimum)));
            }
        }
        if let Some(p) = &a.model_file {
            let mut line = String::from("v");
            for l in &solution.model {
                line.push_str(&format!(" {l}"));
            }
            line.push_str(" 0\n");
            self.emit(&Some(p.clone()), line.as_bytes())?;
        }
        let mut v = json!({
            "n": a.n,
            "optimum": solution.optimum,
            "model_file": a.model_file.as_ref().map(|p| p.display().to_string()),
            "propagations": solution.propagations,
            "time": elapsed,
        });
        if let Some(c) = cube_optima {
            v["cube_optima"] = Value::Array(c);
        }
        self.print_json(&v)
    }

    fn realize(&mut self, a: RealizeArgs) -> Outcome {
        let sig = self.read_signotope(&a.signotope)?;
        let cfg = RealizerConfig {
            epsilon: a.epsilon,
            k: a.box_size,
            restarts: a.restarts,
            max_iters: a.max_iters,
            seed: a.seed,
            time_limit: Some(Duration::from_secs_f64(a.time_limit.max(0.0))),
            jobs: a.jobs,
            ..RealizerConfig::default()
        };
        let r = realize(&sig, &cfg).map_err(input)?;
        let Some(points) = r.points.as_ref().filter(|_| r.status == RealizationStatus::Realized) else {
            if self.json {
                self.print_json(&json!({ "n": sig.n(), "status": "not_found", "time": r.elapsed.as_secs_f64() }))?;
            }
            return Err(Failure::Budget("no realization found within the budget".into()));
        };
        if let Some(svg) = &a.svg {
            self.emit(&Some(svg.clone()), to_svg(points, a.hull).as_bytes())?;
        }
        if self.json {
            let pts: Value = serde_json::from_str(&points.to_json()).expect("own output");
            self.print_json(&json!({
                "n": sig.n(),
                "status": "realized",
                "points": pts["points"],
                "achieved_margin": r.achieved_margin,
                "min_orientation_slack": r.min_orientation_slack,
                "restart": r.restart,
                "time": r.elapsed.as_secs_f64(),
            }))
        } else {
            self.emit(&None, points.to_json().as_bytes())
        }
    }

    fn cubes(&mut self, a: CubesArgs) -> Outcome {
        let split = match &a.split {
            Some(s) => parse_split(s)?,
            None => default_split(a.n),
        };
        let cubes = make_cubes_with(a.n, &split).map_err(input)?;
        if self.json {
            let list: Vec<&Vec<i32>> = cubes.iter().map(|c| &c.literals).collect();
            self.print_json(&json!({ "n": a.n, "split": split, "cubes": list }))
        } else {
            let mut buf = Vec::new();
            write_cubes(&cubes, &mut buf).map_err(input)?;
            self.emit(&None, &buf)
        }
    }

    fn bounds(&mut self, a: BoundsArgs) -> Outcome {
        let premise = match &a.from {
            Some(s) => {
                let (m, r) = s.split_once('=').ok_or_else(|| Failure::Input(format!("--from expects m=r, got {s:?}")))?;
                Some((m.trim().parse::<u64>().map_err(input)?, r.trim().parse::<BigUint>().map_err(input)?))
            }
            None => None,
        };
        let records: Vec<BoundRecord> = parse_n_list(&a.n)?
            .into_iter()
            .map(|n| derive_bounds(n, premise.clone().filter(|(m, _)| *m <= n)))
            .collect::<Result<_, _>>()
            .map_err(input)?;
        if self.json {
            self.print_json(&serde_json::to_value(&records).expect("records"))
        } else {
            let mut out = String::from(BoundRecord::csv_header());
            out.push('\n');
            for r in &records {
                out.push_str(&r.csv_row());
                out.push('\n');
            }
            self.emit(&None, out.as_bytes())
        }
    }

    fn verify(&mut self, a: VerifyArgs) -> Outcome {
        let (n, geometric, sig) = if a.signotope.is_some() {
            (None, None, self.read_signotope(&a.signotope)?)
        } else {
            let points = self.read_points(&a.points)?;
            let g = count_convex_kgons(&points, 5).map_err(input)?;
            (Some(points.len()), Some(g), signotope_of(&points).map_err(input)?)
        };
        let violations = check_axioms(&sig);
        if !violations.is_empty() {
            return Err(Failure::Input(format!("signotope violates {} axiom clause(s), first: {}", violations.len(), violations[0])));
        }
        let cases = count_convex_cases(&sig);
        let clauses = if sig.n() >= 5 {
            encode_sat(sig.n(), false).map_err(input)?.count_falsified(sig.values()) as u64
        } else {
            0
        };
        let agree = cases == clauses && geometric.is_none_or(|g| g == cases);
        if self.json {
            self.print_json(&json!({
                "n": n.unwrap_or(sig.n()),
                "geometric": geometric,
                "signotope": cases,
                "clauses": clauses,
                "agree": agree,
            }))?;
        } else if agree {
            writeln!(self.stdout, "ok {cases}").map_err(input)?;
        }
        if agree {
            Ok(())
        } else {
            Err(Failure::Mismatch(format!("counts disagree: geometric {geometric:?}, signotope {cases}, clauses {clauses}")))
        }
    }
}
