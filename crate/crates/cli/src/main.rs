//! Non-interactive command-line front end: loads polytope and function
//! fixtures from JSON, applies the smoothing operators, and emits the
//! diagnostic reports as CSV. Exit codes: 0 all checks passed, 1 a check
//! failed, 2 input or usage error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use lelonglab_core::report::format_value;
use lelonglab_core::{
    apply, dini_index, example12_report, fixtures, hs, hs_nonmonotone_report, lipschitz_estimate,
    monotone_check, nonuniform_witness, perera_example_report, CPoint, Cell, DistanceFn,
    DistanceSpec, Evaluable, FunctionSpec, Kernel, MonotoneSpec, OpKind, Polytope, Report,
    SearchConfig,
};

#[derive(Parser)]
#[command(
    name = "lelonglab",
    version,
    about = "Support functions, log-support envelopes, smoothing operators, and continuity diagnostics for compact convex exponent sets",
    propagate_version = true
)]
struct Cli {
    /// Seed for sampled diagnostics.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect a polytope file or run a structural check.
    Polytope(PolytopeArgs),
    /// Evaluate the log-support function of a polytope.
    Hs(HsArgs),
    /// Apply a smoothing operator, or check a whole delta family.
    Reg(RegArgs),
    /// Emit one of the standard diagnostic reports.
    #[command(subcommand)]
    Report(ReportCommand),
    /// First index where a decreasing operator family falls under a majorant.
    Dini(DiniArgs),
}

#[derive(Args)]
struct PolytopeArgs {
    /// Polytope JSON: `{"n": 2, "vertices": [[0,0],[1,0],...]}`.
    #[arg(long)]
    file: PathBuf,
    /// Structural check to run; prints true or false.
    #[arg(long, value_enum)]
    check: Option<PolytopeCheck>,
    /// Comma-separated coordinates for the member check.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    point: Option<Vec<f64>>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolytopeCheck {
    /// Is the set closed under lowering coordinates toward zero?
    Lower,
    /// Does --point lie in the hull?
    Member,
}

#[derive(Args)]
struct HsArgs {
    /// Polytope JSON file.
    #[arg(long)]
    file: PathBuf,
    /// Comma-separated log-moduli of one evaluation point ("-inf" allowed).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    logmod: Option<Vec<String>>,
    /// JSON file with one point: {"logmod": [...], "arg": [...]}.
    #[arg(long)]
    point: Option<PathBuf>,
    /// JSON file with an array of points.
    #[arg(long)]
    grid: Option<PathBuf>,
    /// Write values as CSV here instead of printing them.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OpArg {
    /// Infimal convolution against a distance weight.
    A,
    /// Supremal convolution with a logarithmic penalty.
    B,
    /// Average over per-variable multiplicative dilations.
    C,
    /// Log of the averaged exponential over the same dilations.
    D,
    /// Additive smoothing at euclidean scale delta.
    Std,
}

impl From<OpArg> for OpKind {
    fn from(op: OpArg) -> OpKind {
        match op {
            OpArg::A => OpKind::InfConv,
            OpArg::B => OpKind::SupConv,
            OpArg::C => OpKind::IntConv,
            OpArg::D => OpKind::LogIntConv,
            OpArg::Std => OpKind::StdSmooth,
        }
    }
}

#[derive(Args)]
struct RegArgs {
    /// Operator to apply.
    #[arg(long, value_enum)]
    op: OpArg,
    /// Smoothing scale.
    #[arg(long)]
    delta: f64,
    /// Function JSON: {"kind": "hs"|"tropical"|"polylog", ...}.
    #[arg(long = "fn")]
    function: PathBuf,
    /// Comma-separated log-moduli of one evaluation point.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    logmod: Option<Vec<String>>,
    /// JSON file with one point.
    #[arg(long)]
    point: Option<PathBuf>,
    /// JSON file with an array of points.
    #[arg(long)]
    grid: Option<PathBuf>,
    /// Distance weight JSON {"kind": "euclidean" | "weighted_sup", ...}.
    #[arg(long)]
    mu: Option<PathBuf>,
    /// Quadrature orders as RADIALxANGULAR, e.g. 24x32.
    #[arg(long)]
    kernel: Option<String>,
    /// Family check to run instead of a single application.
    #[arg(long, value_enum)]
    check: Option<RegCheck>,
    /// Decreasing delta family for the check; defaults to three halvings of --delta.
    #[arg(long, value_delimiter = ',')]
    deltas: Option<Vec<f64>>,
    /// Allowed pointwise rise in the family check.
    #[arg(long)]
    tol: Option<f64>,
    /// Expert override m1,m2 of the supremal localization envelope.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    bounds: Option<Vec<f64>>,
    /// Write the report CSV here instead of printing it.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegCheck {
    /// Values decrease and gaps shrink as delta falls.
    Monotone,
}

#[derive(Subcommand)]
enum ReportCommand {
    /// Slow-regularization profile of the plane quadrilateral family.
    Ex12(Ex12Args),
    /// Corner-triangle probe where the naive prediction grows like log R.
    Perera(PereraArgs),
    /// Polynomial-count diagnostic on a nested decreasing chain.
    Hsmono(HsmonoArgs),
    /// Search a polytope for a uniform-continuity counterexample.
    Witness(WitnessArgs),
    /// Largest sampled difference quotient of a function.
    Lipschitz(LipschitzArgs),
}

#[derive(Args)]
struct Ex12Args {
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    #[arg(long, default_value_t = 3.0)]
    b: f64,
    #[arg(long, default_value_t = 0.5)]
    delta: f64,
    /// Increasing radii above 1.
    #[arg(long, value_delimiter = ',', default_values_t = [1e1, 1e2, 1e3, 1e4])]
    radii: Vec<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PereraArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [2.0, 4.0, 8.0])]
    radii: Vec<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HsmonoArgs {
    /// Polytope JSON files forming a nested decreasing chain; defaults to
    /// the inscribed quarter-disc chain.
    #[arg(long, value_delimiter = ',')]
    files: Option<Vec<PathBuf>>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WitnessArgs {
    /// Polytope JSON file.
    #[arg(long)]
    file: PathBuf,
    /// Modulus placed on the zeroed coordinates, in (0, 1).
    #[arg(long, default_value_t = 0.5)]
    delta: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LipschitzArgs {
    /// Function JSON file.
    #[arg(long = "fn")]
    function: PathBuf,
    /// Sample pairs to draw.
    #[arg(long, default_value_t = 10_000)]
    pairs: usize,
    /// Half-width of the sampling box.
    #[arg(long = "box", default_value_t = 3.0)]
    box_radius: f64,
    /// Fail (exit 1) when the estimate exceeds this bound by more than 1e-6.
    #[arg(long)]
    bound: Option<f64>,
}

#[derive(Args)]
struct DiniArgs {
    /// Function JSON file; the majorant is its value plus --margin.
    #[arg(long = "fn")]
    function: PathBuf,
    /// Operator generating the decreasing family.
    #[arg(long, value_enum)]
    op: OpArg,
    /// Strictly decreasing deltas.
    #[arg(long, value_delimiter = ',')]
    deltas: Vec<f64>,
    /// JSON file with an array of evaluation points.
    #[arg(long)]
    grid: PathBuf,
    /// Majorant margin above the function values.
    #[arg(long, default_value_t = 0.05)]
    margin: f64,
    /// Distance weight JSON for the infimal convolution.
    #[arg(long)]
    mu: Option<PathBuf>,
    /// Quadrature orders as RADIALxANGULAR.
    #[arg(long)]
    kernel: Option<String>,
    /// Write the value table CSV here.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("LELONG_THREADS") {
        match threads.parse::<usize>() {
            Ok(k) if k >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(k)
                    .build_global();
            }
            _ => {
                eprintln!("error: LELONG_THREADS must be a positive integer, got {threads:?}");
                return ExitCode::from(2);
            }
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

/// Ok(true): everything checked out. Ok(false): a check failed (exit 1).
/// Err: input problem (exit 2).
fn run(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::Polytope(args) => run_polytope(args),
        Command::Hs(args) => run_hs(args),
        Command::Reg(args) => run_reg(args),
        Command::Report(report) => run_report(report, cli.seed),
        Command::Dini(args) => run_dini(args),
    }
}

fn load_polytope(path: &Path) -> Result<Polytope, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("bad polytope in {}: {e}", path.display()))
}

fn load_function(path: &Path) -> Result<Arc<dyn Evaluable>, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let spec: FunctionSpec = serde_json::from_str(&text)
        .map_err(|e| format!("bad function in {}: {e}", path.display()))?;
    spec.build()
        .map_err(|e| format!("invalid function in {}: {e}", path.display()))
}

fn load_distance(path: Option<&PathBuf>, n: usize) -> Result<DistanceFn, String> {
    match path {
        None => Ok(DistanceFn::euclidean(n)),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| format!("cannot read {}: {e}", p.display()))?;
            let spec: DistanceSpec = serde_json::from_str(&text)
                .map_err(|e| format!("bad distance weight in {}: {e}", p.display()))?;
            spec.build(n)
                .map_err(|e| format!("invalid distance weight in {}: {e}", p.display()))
        }
    }
}

fn parse_kernel(spec: Option<&String>) -> Result<Kernel, String> {
    match spec {
        None => Ok(Kernel::standard().clone()),
        Some(s) => {
            let (r, a) = s
                .split_once('x')
                .ok_or_else(|| format!("kernel must look like 24x32, got {s:?}"))?;
            let r: usize = r
                .parse()
                .map_err(|_| format!("bad radial order in {s:?}"))?;
            let a: usize = a
                .parse()
                .map_err(|_| format!("bad angular order in {s:?}"))?;
            if r == 0 || a == 0 {
                return Err(format!("kernel orders must be positive, got {s:?}"));
            }
            Ok(Kernel::new(r, a))
        }
    }
}

fn parse_logmod(parts: &[String]) -> Result<CPoint, String> {
    let lm: Vec<f64> = parts
        .iter()
        .map(|s| {
            let t = s.trim();
            if t == "-inf" {
                Ok(f64::NEG_INFINITY)
            } else {
                t.parse::<f64>()
                    .map_err(|_| format!("bad log-modulus {t:?}"))
            }
        })
        .collect::<Result<_, String>>()?;
    let n = lm.len();
    CPoint::new(lm, vec![0.0; n]).map_err(|e| e.to_string())
}

fn load_point_file(path: &Path) -> Result<CPoint, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("bad point in {}: {e}", path.display()))
}

fn load_grid_file(path: &Path) -> Result<Vec<CPoint>, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let points: Vec<CPoint> = serde_json::from_str(&text)
        .map_err(|e| format!("bad point array in {}: {e}", path.display()))?;
    if points.is_empty() {
        return Err(format!("{} holds no points", path.display()));
    }
    Ok(points)
}

/// Resolve exactly one of --logmod, --point, --grid into a point list.
fn resolve_points(
    logmod: Option<&Vec<String>>,
    point: Option<&PathBuf>,
    grid: Option<&PathBuf>,
) -> Result<Vec<CPoint>, String> {
    match (logmod, point, grid) {
        (Some(parts), None, None) => Ok(vec![parse_logmod(parts)?]),
        (None, Some(p), None) => Ok(vec![load_point_file(p)?]),
        (None, None, Some(g)) => load_grid_file(g),
        _ => Err("give exactly one of --logmod, --point, --grid".into()),
    }
}

/// CSV to the file when given, to stdout otherwise; the pass flag goes to
/// the diagnostic stream so piped output stays clean.
fn emit_report(report: &Report, out: Option<&PathBuf>) -> Result<(), String> {
    match out {
        Some(path) => {
            report
                .write_csv(path)
                .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{}", report.to_csv()),
    }
    if let Some(passed) = report.passed() {
        eprintln!("passed: {passed}");
    }
    Ok(())
}

fn run_polytope(args: PolytopeArgs) -> Result<bool, String> {
    let p = load_polytope(&args.file)?;
    match args.check {
        Some(PolytopeCheck::Lower) => {
            println!("{}", p.is_lower());
            Ok(true)
        }
        Some(PolytopeCheck::Member) => {
            let point = args
                .point
                .ok_or_else(|| "the member check needs --point".to_string())?;
            if point.len() != p.dim() {
                return Err(format!(
                    "point has {} coordinates, polytope needs {}",
                    point.len(),
                    p.dim()
                ));
            }
            println!(
                "{}",
                p.hull_residual(&point) <= lelonglab_core::MEMBERSHIP_TOL
            );
            Ok(true)
        }
        None => {
            println!("dimension: {}", p.dim());
            println!("vertices: {}", p.vertices().len());
            println!("extreme points: {}", p.extreme_points().len());
            println!("sigma: {}", format_value(p.sigma()));
            println!("lower: {}", p.is_lower());
            Ok(true)
        }
    }
}

fn run_hs(args: HsArgs) -> Result<bool, String> {
    let p = load_polytope(&args.file)?;
    let points = resolve_points(
        args.logmod.as_ref(),
        args.point.as_ref(),
        args.grid.as_ref(),
    )?;
    for z in &points {
        if z.dim() != p.dim() {
            return Err(format!(
                "point has {} coordinates, polytope needs {}",
                z.dim(),
                p.dim()
            ));
        }
    }
    let values: Vec<f64> = points.iter().map(|z| hs(&p, z)).collect();
    if args.out.is_some() {
        let mut report = Report::new(&["index", "value"]);
        for (k, &v) in values.iter().enumerate() {
            report.push_row(vec![Cell::Num(k as f64), Cell::Num(v)]);
        }
        emit_report(&report, args.out.as_ref())?;
    } else {
        for v in values {
            println!("{}", format_value(v));
        }
    }
    Ok(true)
}

fn parse_bounds(bounds: Option<&Vec<f64>>) -> Result<Option<(f64, f64)>, String> {
    match bounds {
        None => Ok(None),
        Some(v) if v.len() == 2 => Ok(Some((v[0], v[1]))),
        Some(v) => Err(format!(
            "--bounds needs exactly two numbers, got {}",
            v.len()
        )),
    }
}

fn run_reg(args: RegArgs) -> Result<bool, String> {
    let u = load_function(&args.function)?;
    let n = u.dim();
    let mu = load_distance(args.mu.as_ref(), n)?;
    let kernel = parse_kernel(args.kernel.as_ref())?;
    let bounds = parse_bounds(args.bounds.as_ref())?;
    let kind: OpKind = args.op.into();
    let search = SearchConfig::default();
    let points = resolve_points(
        args.logmod.as_ref(),
        args.point.as_ref(),
        args.grid.as_ref(),
    )?;
    for z in &points {
        if z.dim() != n {
            return Err(format!(
                "point has {} coordinates, function needs {n}",
                z.dim()
            ));
        }
    }

    match args.check {
        None => {
            let mut values = Vec::with_capacity(points.len());
            for z in &points {
                let out = apply(
                    kind,
                    u.as_ref(),
                    args.delta,
                    z,
                    &mu,
                    &kernel,
                    &search,
                    bounds,
                )
                .map_err(|e| e.to_string())?;
                if out.underflow {
                    eprintln!("note: clamped an averaging node at the value floor");
                }
                if out.neg_inf_weight > 0.0 {
                    eprintln!(
                        "note: dilation mass {} sat on a pole",
                        format_value(out.neg_inf_weight)
                    );
                }
                values.push(out.value);
            }
            if args.out.is_some() {
                let mut report = Report::new(&["index", "value"]);
                for (k, &v) in values.iter().enumerate() {
                    report.push_row(vec![Cell::Num(k as f64), Cell::Num(v)]);
                }
                emit_report(&report, args.out.as_ref())?;
            } else {
                for v in values {
                    println!("{}", format_value(v));
                }
            }
            Ok(true)
        }
        Some(RegCheck::Monotone) => {
            let deltas = match &args.deltas {
                Some(d) => d.clone(),
                None => vec![
                    args.delta,
                    args.delta / 2.0,
                    args.delta / 4.0,
                    args.delta / 8.0,
                ],
            };
            let tol = args.tol.unwrap_or(match kind {
                // searched operators resolve to search accuracy; kernel
                // averages carry quadrature scatter on kinked integrands
                OpKind::InfConv | OpKind::SupConv => 1e-6,
                _ => 1e-6 + 5e-4,
            });
            let spec = MonotoneSpec {
                kind,
                deltas: &deltas,
                grid: &points,
                tol,
                mu: Some(&mu),
                kernel: Some(&kernel),
                search,
                bounds,
            };
            let report = monotone_check(u.as_ref(), &spec).map_err(|e| e.to_string())?;
            let passed = report.passed() == Some(true);
            emit_report(&report, args.out.as_ref())?;
            Ok(passed)
        }
    }
}

fn run_report(report: ReportCommand, seed: u64) -> Result<bool, String> {
    match report {
        ReportCommand::Ex12(args) => {
            let table = example12_report(
                args.a,
                args.b,
                args.delta,
                &args.radii,
                &SearchConfig::default(),
            )
            .map_err(|e| e.to_string())?;
            let passed = table.passed() == Some(true);
            emit_report(&table, args.out.as_ref())?;
            Ok(passed)
        }
        ReportCommand::Perera(args) => {
            let table = perera_example_report(&args.radii).map_err(|e| e.to_string())?;
            let passed = table.passed() == Some(true);
            emit_report(&table, args.out.as_ref())?;
            Ok(passed)
        }
        ReportCommand::Hsmono(args) => {
            let chain: Vec<Polytope> = match &args.files {
                Some(files) => files
                    .iter()
                    .map(|f| load_polytope(f))
                    .collect::<Result<_, _>>()?,
                None => fixtures::inscribed_chain(),
            };
            let table = hs_nonmonotone_report(&chain).map_err(|e| e.to_string())?;
            let passed = table.passed() == Some(true);
            emit_report(&table, args.out.as_ref())?;
            Ok(passed)
        }
        ReportCommand::Witness(args) => {
            let p = load_polytope(&args.file)?;
            match nonuniform_witness(&p, args.delta) {
                Ok((offset, profile)) => {
                    let offset_json = serde_json::to_string(&offset)
                        .map_err(|e| format!("cannot serialize the offset: {e}"))?;
                    eprintln!("offset: {offset_json}");
                    eprintln!("diverging: {}", profile.diverging);
                    let sound = profile.table.passed() == Some(true);
                    emit_report(&profile.table, args.out.as_ref())?;
                    Ok(sound && profile.diverging)
                }
                Err(lelonglab_core::DiagnosticsError::IsLowerSet) => {
                    eprintln!(
                        "no witness: the set is lower, so its log-support is uniformly continuous"
                    );
                    Ok(false)
                }
                Err(e) => Err(e.to_string()),
            }
        }
        ReportCommand::Lipschitz(args) => {
            let u = load_function(&args.function)?;
            if args.pairs == 0 {
                return Err("--pairs must be positive".into());
            }
            if args.box_radius.is_nan() || args.box_radius <= 0.0 {
                return Err("--box must be positive".into());
            }
            let slope = lipschitz_estimate(u.as_ref(), args.pairs, args.box_radius, seed);
            println!("{}", format_value(slope));
            match args.bound {
                Some(bound) => Ok(slope <= bound + 1e-6),
                None => Ok(true),
            }
        }
    }
}

fn run_dini(args: DiniArgs) -> Result<bool, String> {
    let u = load_function(&args.function)?;
    let n = u.dim();
    let mu = load_distance(args.mu.as_ref(), n)?;
    let kernel = parse_kernel(args.kernel.as_ref())?;
    let kind: OpKind = args.op.into();
    let search = SearchConfig::default();
    if args.deltas.is_empty() {
        return Err("--deltas must list at least one value".into());
    }
    let grid = load_grid_file(&args.grid)?;
    for z in &grid {
        if z.dim() != n {
            return Err(format!(
                "point has {} coordinates, function needs {n}",
                z.dim()
            ));
        }
    }
    if args.margin.is_nan() || args.margin <= 0.0 {
        return Err("--margin must be positive".into());
    }

    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(args.deltas.len());
    for &delta in &args.deltas {
        let row: Vec<f64> = grid
            .iter()
            .map(|z| {
                apply(kind, u.as_ref(), delta, z, &mu, &kernel, &search, None)
                    .map(|o| o.value)
                    .map_err(|e| e.to_string())
            })
            .collect::<Result<_, String>>()?;
        rows.push(row);
    }
    let majorant: Vec<f64> = grid.iter().map(|z| u.eval(z) + args.margin).collect();

    if args.out.is_some() {
        let mut columns: Vec<String> = vec!["delta".to_string()];
        columns.extend((0..grid.len()).map(|k| format!("p{k}")));
        let names: Vec<&str> = columns.iter().map(|s| s.as_str()).collect();
        let mut table = Report::new(&names);
        for (&delta, row) in args.deltas.iter().zip(&rows) {
            let mut cells = vec![Cell::Num(delta)];
            cells.extend(row.iter().map(|&v| Cell::Num(v)));
            table.push_row(cells);
        }
        emit_report(&table, args.out.as_ref())?;
    }

    match dini_index(&rows, &majorant) {
        Ok(index) => {
            println!("{index}");
            Ok(true)
        }
        Err(e) => {
            eprintln!("{e}");
            Ok(false)
        }
    }
}
