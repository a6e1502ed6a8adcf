//! `cycle-rescue`: solve and verify search and rescue games on a cycle.

mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rescue_core::continuous::{self, ContinuousGame};
use rescue_core::dispatch;
use rescue_core::matrix::{self, CERTIFICATE_TOL};
use rescue_core::multi;
use rescue_core::{enumerate_expanding_searches, CycleGame, Error};

use output::{fmt_f64, Report};

const EXIT_USAGE: u8 = 1;
const EXIT_VERIFY: u8 = 2;
const EXIT_SOLVER: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "cycle-rescue",
    version,
    about = "Search and rescue games on a cycle"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve an instance with the most specific solver that applies.
    Solve(Instance),
    /// Compare the solver's value with the exhaustive matrix-game oracle.
    Verify(Instance),
    /// Count three-vertex instances where the two-sweep solution is optimal.
    Grid3(GridArgs),
    /// Bounds for the game on a continuous circle.
    Continuous(ContinuousArgs),
    /// List expanding searches, or balanced placements when --k is given.
    Enumerate(EnumerateArgs),
}

#[derive(Args, Debug)]
struct Instance {
    /// Number of non-root vertices (optional when --p is a list).
    #[arg(long)]
    n: Option<usize>,
    /// Number of targets.
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Success probabilities: a comma-separated list, or one value for all.
    #[arg(long, value_delimiter = ',', required = true)]
    p: Vec<f64>,
    /// Searcher may switch direction after finding a target.
    #[arg(long)]
    adaptive: bool,
    /// Also solve with the oracle and report the difference (solve only).
    #[arg(long)]
    oracle: bool,
    /// Write the strategy supports as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GridArgs {
    /// Values for p1 (default 0.1,...,0.9).
    #[arg(long, value_delimiter = ',')]
    p1: Vec<f64>,
    /// Values for p2 (default 0.1,...,0.9).
    #[arg(long, value_delimiter = ',')]
    p2: Vec<f64>,
    /// Values for p3 (default 0.1,...,0.9).
    #[arg(long, value_delimiter = ',')]
    p3: Vec<f64>,
    /// Write one row per triple as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ContinuousArgs {
    /// Number of targets.
    #[arg(long)]
    k: usize,
    /// Survival base.
    #[arg(long, conflicts_with_all = ["sweep", "gap"])]
    p: Option<f64>,
    /// Tabulate the bounds on N evenly spaced values of p.
    #[arg(long, value_name = "N", conflicts_with = "gap")]
    sweep: Option<usize>,
    /// Locate the largest difference between the bounds.
    #[arg(long)]
    gap: bool,
    /// Monte Carlo samples of the split-sweep Searcher against the offset
    /// Hider (with --p).
    #[arg(long, default_value_t = 0, requires = "p")]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV output for --sweep (standard output when omitted).
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[arg(long)]
    n: usize,
    /// List the balanced placements of this many targets instead.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    csv: Option<PathBuf>,
}

/// A command's failure and the exit status it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidInstance(_) | Error::InvalidStrategy(_) => EXIT_USAGE,
            _ => EXIT_SOLVER,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_SOLVER,
            message: e.to_string(),
        }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure {
            code: EXIT_SOLVER,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

type Outcome = std::result::Result<Report, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let start = Instant::now();
    let outcome = match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Grid3(a) => cmd_grid3(a),
        Command::Continuous(a) => cmd_continuous(a),
        Command::Enumerate(a) => cmd_enumerate(a),
    };
    eprintln!("elapsed_ms = {:.3}", start.elapsed().as_secs_f64() * 1e3);
    match outcome {
        Ok(report) => {
            // A closed pipe downstream is not an error worth reporting.
            let _ = write!(std::io::stdout().lock(), "{report}");
            ExitCode::from(report.exit_code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn build_game(a: &Instance) -> std::result::Result<CycleGame, Failure> {
    let p = match (a.n, a.p.len()) {
        (Some(n), 1) => vec![a.p[0]; n],
        (Some(n), m) if n != m => {
            return Err(usage(format!("--n {n} does not match {m} probabilities")));
        }
        (None, 1) => return Err(usage("--n is required when --p is a single value")),
        _ => a.p.clone(),
    };
    Ok(CycleGame::new(p, a.k)?)
}

fn instance_header(r: &mut Report, command: &str, game: &CycleGame, adaptive: bool) {
    r.kv("command", command);
    r.kv("n", game.n());
    r.kv("k", game.k());
    r.kv("p", output::join_f64(game.probs()));
    r.kv("adaptive", adaptive);
}

fn cmd_solve(a: &Instance) -> Outcome {
    let game = build_game(a)?;
    let sol = dispatch::solve(&game, a.adaptive)?;
    let mut r = Report::default();
    instance_header(&mut r, "solve", &game, a.adaptive);
    r.kv("method", sol.method);
    r.kv("value", fmt_f64(sol.value));
    if let Some(g) = sol.guarantee {
        r.kv("searcher_floor", fmt_f64(g.searcher_floor));
        r.kv("hider_ceiling", fmt_f64(g.hider_ceiling));
        r.kv("ratio", fmt_f64(g.ratio()));
    }
    r.kv("hider_support", sol.hider.len());
    for (i, (h, q)) in sol.hider.iter().enumerate() {
        r.kv(&format!("hider[{i}]"), format!("{h} {}", fmt_f64(q)));
    }
    r.kv("searcher_support", sol.searcher.len());
    for (i, (s, q)) in sol.searcher.iter().enumerate() {
        r.kv(&format!("searcher[{i}]"), format!("{s} {}", fmt_f64(q)));
    }
    if a.oracle {
        let oracle = if a.adaptive {
            matrix::adaptive_oracle_solution(&game)?.value
        } else {
            matrix::oracle_value(&game)?
        };
        let (lo, hi) = sol.bounds();
        let diff = (sol.value - oracle).abs();
        r.kv("oracle", fmt_f64(oracle));
        r.kv("difference", fmt_f64(diff));
        let ok = if sol.method.is_exact() {
            diff <= CERTIFICATE_TOL
        } else {
            lo - CERTIFICATE_TOL <= oracle && oracle <= hi + CERTIFICATE_TOL
        };
        r.kv("verified", ok);
        if !ok {
            r.exit_code = EXIT_VERIFY;
        }
    }
    if let Some(path) = &a.csv {
        let mut w = output::csv_writer(path)?;
        w.write_record(["player", "strategy", "probability"])?;
        for (h, q) in sol.hider.iter() {
            w.write_record(["hider", &h.to_string(), &fmt_f64(q)])?;
        }
        for (s, q) in sol.searcher.iter() {
            w.write_record(["searcher", &s.to_string(), &fmt_f64(q)])?;
        }
        w.flush()?;
    }
    Ok(r)
}

fn cmd_verify(a: &Instance) -> Outcome {
    let game = build_game(a)?;
    let v = dispatch::verify(&game, a.adaptive)?;
    let mut r = Report::default();
    instance_header(&mut r, "verify", &game, a.adaptive);
    r.kv("method", v.method);
    r.kv("closed_form", fmt_f64(v.closed_form));
    r.kv("oracle", fmt_f64(v.oracle));
    r.kv("difference", fmt_f64(v.difference));
    if let Some(g) = v.bracket {
        r.kv("searcher_floor", fmt_f64(g.searcher_floor));
        r.kv("hider_ceiling", fmt_f64(g.hider_ceiling));
    }
    r.kv("tolerance", fmt_f64(CERTIFICATE_TOL));
    r.kv("passed", v.passed);
    if !v.passed {
        r.exit_code = EXIT_VERIFY;
    }
    Ok(r)
}

fn cmd_grid3(a: &GridArgs) -> Outcome {
    let pick = |v: &Vec<f64>| {
        if v.is_empty() {
            dispatch::decile_grid()
        } else {
            v.clone()
        }
    };
    let report = dispatch::condition_grid(&pick(&a.p1), &pick(&a.p2), &pick(&a.p3))?;
    let mut r = Report::default();
    r.kv("command", "grid3");
    r.kv("count", report.count);
    r.kv("total", report.total);
    r.kv(
        "fraction",
        fmt_f64(report.count as f64 / report.total as f64),
    );
    if let Some(path) = &a.csv {
        let mut w = output::csv_writer(path)?;
        w.write_record(["p1", "p2", "p3", "boundary", "holds"])?;
        for row in &report.rows {
            w.write_record([
                fmt_f64(row.p[0]),
                fmt_f64(row.p[1]),
                fmt_f64(row.p[2]),
                row.boundary.to_string(),
                row.holds.to_string(),
            ])?;
        }
        w.flush()?;
    }
    Ok(r)
}

fn cmd_continuous(a: &ContinuousArgs) -> Outcome {
    let mut r = Report::default();
    r.kv("command", "continuous");
    r.kv("k", a.k);
    if a.gap {
        let (p, gap) = continuous::max_bound_gap(a.k)?;
        r.kv("p_star", fmt_f64(p));
        r.kv("gap_star", fmt_f64(gap));
        return Ok(r);
    }
    if let Some(points) = a.sweep {
        if points == 0 {
            return Err(usage("--sweep needs at least one point"));
        }
        ContinuousGame::new(a.k, 0.5)?;
        let rows: Vec<[f64; 5]> = (1..=points)
            .map(|i| {
                let p = i as f64 / (points + 1) as f64;
                let b = continuous::continuous_bounds(
                    &ContinuousGame::new(a.k, p).expect("p in (0, 1)"),
                );
                [p, b.lower, b.upper, b.ratio, b.gap]
            })
            .collect();
        let header = ["p", "lower", "upper", "ratio", "gap"];
        match &a.csv {
            Some(path) => {
                let mut w = output::csv_writer(path)?;
                output::write_rows(&mut w, &header, &rows)?;
                r.kv("rows", rows.len());
                r.kv("csv", path.display());
            }
            None => {
                let mut w = csv::WriterBuilder::new()
                    .terminator(csv::Terminator::Any(b'\n'))
                    .from_writer(std::io::stdout());
                output::write_rows(&mut w, &header, &rows)?;
                return Ok(Report::empty());
            }
        }
        return Ok(r);
    }
    let p =
        a.p.ok_or_else(|| usage("one of --p, --sweep or --gap is required"))?;
    let g = ContinuousGame::new(a.k, p)?;
    let b = continuous::continuous_bounds(&g);
    r.kv("p", fmt_f64(p));
    r.kv(
        "adaptive_value",
        fmt_f64(continuous::continuous_adaptive_solution(&g)?.value),
    );
    r.kv("lower", fmt_f64(b.lower));
    r.kv("upper", fmt_f64(b.upper));
    r.kv("ratio", fmt_f64(b.ratio));
    r.kv("gap", fmt_f64(b.gap));
    if a.samples > 0 {
        let est = continuous::star_vs_star_monte_carlo(&g, a.samples, a.seed)?;
        r.kv("samples", a.samples);
        r.kv("seed", a.seed);
        r.kv("mc_mean", fmt_f64(est.mean));
        r.kv("mc_std_err", fmt_f64(est.std_err));
    }
    Ok(r)
}

fn cmd_enumerate(a: &EnumerateArgs) -> Outcome {
    let mut r = Report::default();
    r.kv("command", "enumerate");
    r.kv("n", a.n);
    let mut rows: Vec<[String; 2]> = Vec::new();
    let header = match a.k {
        Some(k) => {
            let family = multi::enumerate_snk(a.n, k)?;
            r.kv("k", k);
            r.kv("count", family.size());
            r.kv("minus", family.minus);
            r.kv("plus", family.plus);
            for (i, h) in family.members.iter().enumerate() {
                let gaps = multi::spacing_profile(h, a.n)?;
                let gaps: Vec<String> = gaps.gaps().iter().map(|g| g.to_string()).collect();
                r.kv(&format!("placement[{i}]"), h);
                rows.push([h.to_string(), gaps.join(" ")]);
            }
            ["placement", "gaps"]
        }
        None => {
            let searches = enumerate_expanding_searches(a.n)?;
            r.kv("count", searches.len());
            for (i, s) in searches.iter().enumerate() {
                r.kv(&format!("search[{i}]"), format!("{s} {}", s.move_string()));
                rows.push([s.to_string(), s.move_string()]);
            }
            ["order", "moves"]
        }
    };
    if let Some(path) = &a.csv {
        let mut w = output::csv_writer(path)?;
        w.write_record(header)?;
        for row in &rows {
            w.write_record(row)?;
        }
        w.flush()?;
    }
    Ok(r)
}
