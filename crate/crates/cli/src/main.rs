use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use fosterlab::exact::{self, ExactConfig};
use fosterlab::foster::{self, CheckMode};
use fosterlab::graph::{self, Graph, ScalarKind};
use fosterlab::lattice::{self, BoundaryMode, LatticeFamily, PairClass, SubdividedPair};
use fosterlab::randwalk::{self, WalkSimConfig};
use fosterlab::solver::{self, ExtrapolationModel, Method, SolveConfig, SweepBoundary, SweepConfig};
use fosterlab::walks::WalkFilter;
use fosterlab::{suite, FosterError, GraphError, LatticeError, OracleError, SimError, SolveError};

mod demo;
mod output;

use output::{Format, OutputRecord};

#[derive(Debug, Parser)]
#[command(name = "fosterlab", version, about = "Effective resistances, Foster sum rules and hitting times")]
struct Cli {
    /// Worker threads for the parallel core (0 = one per core).
    #[arg(long, global = true, env = "FOSTERLAB_THREADS", default_value_t = 0)]
    threads: usize,

    /// Emit a JSON record.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,

    /// Emit the results as `field,value` CSV.
    #[arg(long, global = true)]
    csv: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a lattice ball or torus and write it as an edge list.
    Lattice(LatticeArgs),
    /// Effective resistance on a graph file or an infinite lattice.
    Resist(ResistArgs),
    /// Finite Foster identity or lattice sum rule.
    Sumrule(SumruleArgs),
    /// Run every reproduction check and report pass/fail.
    Demo(demo::DemoArgs),
    /// Monte Carlo hitting time against the exact value.
    Hittime(HittimeArgs),
}

#[derive(Debug, Args)]
struct LatticeArgs {
    #[arg(long)]
    family: LatticeFamily,
    /// Graph-distance radius around the origin.
    #[arg(long, conflicts_with = "torus", required_unless_present = "torus")]
    ball: Option<usize>,
    /// Cells per axis with periodic wrapping.
    #[arg(long)]
    torus: Option<usize>,
    /// Edge-list destination.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Torus side lengths (or ball radii) used for extrapolation.
    #[arg(long, value_delimiter = ',', default_values_t = [16usize, 32, 64])]
    pub sizes: Vec<usize>,
    #[arg(long, value_enum, default_value = "torus")]
    pub boundary: BoundaryArg,
    #[arg(long, default_value = "inv-poly")]
    pub model: ExtrapolationModel,
    /// CG relative residual target.
    #[arg(long, default_value_t = 1e-10)]
    pub cg_tol: f64,
    /// CG iteration cap (default 20·√n).
    #[arg(long)]
    pub max_iter: Option<usize>,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum BoundaryArg {
    Torus,
    Ball,
}

impl SweepArgs {
    pub fn solve_config(&self) -> SolveConfig {
        SolveConfig { tolerance: self.cg_tol, max_iterations: self.max_iter, ..SolveConfig::default() }
    }

    pub fn sweep_config(&self) -> SweepConfig {
        SweepConfig {
            sizes: self.sizes.clone(),
            boundary: match self.boundary {
                BoundaryArg::Torus => SweepBoundary::Torus,
                BoundaryArg::Ball => SweepBoundary::Ball,
            },
            model: self.model,
            solve: self.solve_config(),
        }
    }
}

#[derive(Debug, Args)]
struct ResistArgs {
    /// Edge-list file.
    #[arg(long, requires_all = ["i", "j"], conflicts_with = "family")]
    file: Option<PathBuf>,
    #[arg(long)]
    i: Option<usize>,
    #[arg(long)]
    j: Option<usize>,
    /// Use the exact rational oracle instead of CG.
    #[arg(long)]
    exact: bool,
    #[arg(long, requires = "pair")]
    family: Option<LatticeFamily>,
    /// Pair class: a name (d1, d2, turn60, ...) or `dx,dy[,sub]`.
    #[arg(long, allow_hyphen_values = true)]
    pair: Option<String>,
    /// Read `--pair` as a subdivided-lattice class (d1, 2a, 2b, d3).
    #[arg(long)]
    subdivided: bool,
    #[command(flatten)]
    sweep: SweepArgs,
}

#[derive(Debug, Args)]
struct SumruleArgs {
    #[arg(long, conflicts_with = "family")]
    file: Option<PathBuf>,
    #[arg(long)]
    family: Option<LatticeFamily>,
    #[arg(long)]
    r: usize,
    /// Lattice sum over non-degenerate walks only.
    #[arg(long)]
    nondegenerate: bool,
    /// Lattice r = 2 rule in midpoint form.
    #[arg(long, conflicts_with = "nondegenerate")]
    midpoint: bool,
    /// Force exact arithmetic on a file.
    #[arg(long, conflicts_with = "float")]
    exact: bool,
    /// Force floating point on a file.
    #[arg(long)]
    float: bool,
    /// Replace the file's conductances with seeded random rationals.
    #[arg(long)]
    weighted: bool,
    /// Also check the hitting-time form of the identity.
    #[arg(long)]
    hitting: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Relative tolerance for lattice sums.
    #[arg(long, default_value_t = 0.01)]
    rel_tol: f64,
    #[command(flatten)]
    sweep: SweepArgs,
}

#[derive(Debug, Args)]
struct HittimeArgs {
    #[arg(long)]
    file: PathBuf,
    #[arg(long)]
    i: usize,
    #[arg(long)]
    j: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100_000)]
    replications: u64,
    #[arg(long, default_value_t = 10_000_000)]
    step_cap: u64,
    /// Also simulate the reverse direction and compare with C·R.
    #[arg(long)]
    commute: bool,
}

/// Failure with its exit code: 2 usage, 3 numerical, 4 invalid graph.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
    InvalidGraph(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::InvalidGraph(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Numerical(m) | CliError::InvalidGraph(m) => m,
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::Io(_) => CliError::Usage(e.to_string()),
            _ => CliError::InvalidGraph(e.to_string()),
        }
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::Graph(g) => g.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::SizeCap { .. } => CliError::Usage(e.to_string()),
            OracleError::Singular => CliError::Numerical(e.to_string()),
            _ => CliError::InvalidGraph(e.to_string()),
        }
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::NoConvergence { .. } | SolveError::DegenerateFit => CliError::Numerical(e.to_string()),
            SolveError::Disconnected | SolveError::InvalidVertex { .. } => CliError::InvalidGraph(e.to_string()),
            SolveError::Lattice(l) => l.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<FosterError> for CliError {
    fn from(e: FosterError) -> Self {
        match e {
            FosterError::Oracle(x) => x.into(),
            FosterError::Solve(x) => x.into(),
            FosterError::Lattice(x) => x.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Disconnected | SimError::InvalidVertex { .. } => CliError::InvalidGraph(e.to_string()),
            SimError::StepCap { .. } => CliError::Numerical(e.to_string()),
            SimError::Oracle(x) => x.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

/// What a command hands back for printing.
pub struct Outcome {
    pub config: Value,
    pub results: Value,
    pub provenance: Vec<String>,
    pub text: String,
    /// Exit with code 3 after printing.
    pub failed: bool,
}

fn load_graph(path: &PathBuf) -> Result<Graph, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    Ok(graph::parse_edge_list(&text)?)
}

fn cmd_lattice(a: &LatticeArgs) -> Result<Outcome, CliError> {
    let mode = match (a.ball, a.torus) {
        (Some(r), None) => BoundaryMode::Ball(r),
        (None, Some(l)) => BoundaryMode::Torus(l),
        _ => return Err(CliError::Usage("pass exactly one of --ball or --torus".into())),
    };
    let lg = lattice::build(a.family, mode)?;
    let boundary = lattice::boundary_fraction(&lg).ok();
    if let Some(path) = &a.out {
        let file = fs::File::create(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        graph::save_edge_list(&lg.graph, std::io::BufWriter::new(file))?;
    }
    let results = json!({
        "n": lg.graph.n(),
        "m": lg.graph.m(),
        "origin": lg.origin,
        "boundary_fraction": boundary,
    });
    let text = format!(
        "n = {}\nm = {}\nboundary fraction = {}\n",
        lg.graph.n(),
        lg.graph.m(),
        boundary.map_or("n/a (torus)".to_string(), |b| format!("{b:.6}"))
    );
    Ok(Outcome {
        config: json!({"family": a.family, "mode": mode, "out": a.out}),
        results,
        provenance: vec![],
        text,
        failed: false,
    })
}

fn cmd_resist(a: &ResistArgs) -> Result<Outcome, CliError> {
    if let Some(path) = &a.file {
        let g = load_graph(path)?;
        let (i, j) = (a.i.expect("clap requires i"), a.j.expect("clap requires j"));
        let config = json!({"file": path, "i": i, "j": j, "exact": a.exact, "solve": a.sweep.solve_config()});
        if a.exact {
            let r = exact::exact_resistance(&g, i, j, &ExactConfig::default())?;
            let exact_text = format!("{}/{}", r.numer(), r.denom());
            let value = graph::ratio_to_f64(&r);
            let results = json!({"pair": [i, j], "method": Method::Exact, "exact": exact_text, "value": value});
            return Ok(Outcome {
                config,
                results,
                provenance: vec![],
                text: format!("R({i},{j}) = {exact_text} ≈ {value:.17}\n"),
                failed: false,
            });
        }
        let report = solver::cg_resistance(&g, i, j, &a.sweep.solve_config())?;
        let text = format!(
            "R({i},{j}) ≈ {:.17} (cg, {} iterations, residual {:.1e})\n",
            report.value, report.iterations, report.residual
        );
        return Ok(Outcome { config, results: output::to_value(&report), provenance: vec![], text, failed: false });
    }
    let (Some(family), Some(pair)) = (a.family, a.pair.as_deref()) else {
        return Err(CliError::Usage("pass --file with --i/--j, or --family with --pair".into()));
    };
    let sweep = a.sweep.sweep_config();
    let report = if a.subdivided {
        let which: SubdividedPair = pair.parse()?;
        solver::subdivided_pair_resistance(family, which, &sweep)?
    } else {
        solver::infinite_pair_resistance(&PairClass::parse(family, pair)?, &sweep)?
    };
    let mut text = format!(
        "{}: R ≈ {:.10} (± {:.1e})\n",
        report.label.as_deref().unwrap_or(""),
        report.value,
        report.error_estimate.unwrap_or(0.0)
    );
    let mut provenance = vec![];
    if let Some(cf) = &report.closed_form {
        text.push_str(&format!("closed form {} = {:.10} [{}]\n", cf.expr, cf.value, cf.source));
        provenance.push(cf.source.clone());
    }
    Ok(Outcome {
        config: json!({"family": family, "pair": pair, "subdivided": a.subdivided, "sweep": sweep}),
        results: output::to_value(&report),
        provenance,
        text,
        failed: false,
    })
}

fn cmd_sumrule(a: &SumruleArgs) -> Result<Outcome, CliError> {
    if let Some(path) = &a.file {
        let mut g = load_graph(path)?;
        if a.weighted {
            g = suite::with_seeded_weights(&g, a.seed);
        }
        let exact_ok = g.scalar_kind() == ScalarKind::Exact && g.n() <= ExactConfig::default().size_cap;
        let mode = if a.float || (!a.exact && !exact_ok) { CheckMode::Float } else { CheckMode::Exact };
        let context = path.display().to_string();
        let report = foster::finite_foster_check(&g, a.r, mode, &context)?;
        let mut results = json!({"foster": report});
        let mut text = format!(
            "{context} r={}: lhs = {}, rhs = {}, residual = {}\n",
            a.r, report.lhs, report.rhs, report.residual
        );
        if a.hitting {
            let hf = foster::finite_hitting_form_check(&g, a.r, &context)?;
            text.push_str(&format!("hitting form: lhs = {}, rhs = {}, residual = {}\n", hf.lhs, hf.rhs, hf.residual));
            results["hitting"] = output::to_value(&hf);
        }
        return Ok(Outcome {
            config: json!({"file": path, "r": a.r, "mode": mode, "weighted": a.weighted, "seed": a.seed}),
            results,
            provenance: vec![],
            text,
            failed: false,
        });
    }
    let Some(family) = a.family else {
        return Err(CliError::Usage("pass --file or --family".into()));
    };
    let sweep = a.sweep.sweep_config();
    let filter = if a.nondegenerate { WalkFilter::NonDegenerate } else { WalkFilter::All };
    let report = if a.midpoint {
        if a.r != 2 {
            return Err(CliError::Usage("--midpoint applies to r = 2 only".into()));
        }
        foster::midpoint_second_rule_lhs(family, &sweep)?
    } else {
        foster::infinite_sum_rule_lhs(family, a.r, filter, &sweep)?
    };
    let passed = report.holds(a.rel_tol);
    let text = format!(
        "{family} r={} ({} walks{}): lhs ≈ {:.6}, rhs = {}, relative error {:.2e} [{}]\n",
        report.r,
        report.walks,
        if a.midpoint { ", midpoint form" } else if a.nondegenerate { ", non-degenerate" } else { "" },
        report.lhs,
        report.rhs,
        report.relative_error,
        if passed { "within tolerance" } else { "outside tolerance" }
    );
    let mut results = output::to_value(&report);
    results["passed"] = Value::Bool(passed);
    Ok(Outcome {
        config: json!({
            "family": family, "r": a.r, "nondegenerate": a.nondegenerate,
            "midpoint": a.midpoint, "rel_tol": a.rel_tol, "sweep": sweep,
        }),
        results,
        provenance: vec![],
        text,
        failed: false,
    })
}

fn cmd_hittime(a: &HittimeArgs) -> Result<Outcome, CliError> {
    let g = load_graph(&a.file)?;
    let cfg = WalkSimConfig { seed: a.seed, replications: a.replications, step_cap: a.step_cap, ..WalkSimConfig::default() };
    let config = json!({"file": a.file, "i": a.i, "j": a.j, "sim": cfg, "commute": a.commute});
    if a.commute {
        let rep = randwalk::commute_check(&g, a.i, a.j, &cfg)?;
        let text = format!(
            "E_{i}T_{j} + E_{j}T_{i} ≈ {:.6} ± {:.2e}; C·R = {:.6}; z = {:.3}\n",
            rep.commute_mean,
            rep.commute_std_err,
            rep.expected,
            rep.z_score,
            i = a.i,
            j = a.j
        );
        return Ok(Outcome { config, results: output::to_value(&rep), provenance: vec![], text, failed: false });
    }
    let est = randwalk::simulate_hitting_time(&g, a.i, a.j, &cfg)?;
    let exact_cfg = ExactConfig::default();
    let exact = if g.scalar_kind() == ScalarKind::Exact && g.n() <= exact_cfg.size_cap {
        let h = exact::exact_hitting_times(&g, &exact_cfg)?;
        Some(h.get(a.i, a.j).clone())
    } else {
        None
    };
    let exact_value = exact.as_ref().map(graph::ratio_to_f64);
    let z = exact_value.map(|x| if est.std_err > 0.0 { (est.mean - x) / est.std_err } else if est.mean == x { 0.0 } else { f64::INFINITY });
    let mut text = format!("E_{}T_{} ≈ {:.6} ± {:.2e} ({} walks)\n", a.i, a.j, est.mean, est.std_err, est.replications);
    if let (Some(e), Some(x), Some(z)) = (&exact, exact_value, z) {
        text.push_str(&format!("exact {}/{} ≈ {x:.6}, z = {z:.3}\n", e.numer(), e.denom()));
    }
    let results = json!({
        "estimate": est,
        "exact": exact.as_ref().map(|e| format!("{}/{}", e.numer(), e.denom())),
        "exact_value": exact_value,
        "z_score": z,
    });
    Ok(Outcome { config, results, provenance: vec![], text, failed: false })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        if let Err(e) = fosterlab::par::init_threads(cli.threads) {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let format = if cli.json {
        Format::Json
    } else if cli.csv {
        Format::Csv
    } else {
        Format::Text
    };
    let started = Instant::now();
    let (name, outcome) = match &cli.command {
        Command::Lattice(a) => ("lattice", cmd_lattice(a)),
        Command::Resist(a) => ("resist", cmd_resist(a)),
        Command::Sumrule(a) => ("sumrule", cmd_sumrule(a)),
        Command::Demo(a) => ("demo", demo::run(a)),
        Command::Hittime(a) => ("hittime", cmd_hittime(a)),
    };
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {}", e.message());
            return ExitCode::from(e.code());
        }
    };
    match format {
        Format::Text => print!("{}", outcome.text),
        Format::Csv => print!("{}", output::to_csv(&outcome.results)),
        Format::Json => {
            let record = OutputRecord::new(name, outcome.config, outcome.results, outcome.provenance, started);
            println!("{}", serde_json::to_string_pretty(&record).expect("serializable"));
        }
    }
    if outcome.failed {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    }
}
