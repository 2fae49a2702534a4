//! `planar-search` command-line front end.

mod output;

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use planar_search::cone_search::minimize_cone;
use planar_search::format::{sig17, sig6, to_json};
use planar_search::hybrid::{combined_bound, cost_curve, gamma_sweep};
use planar_search::offset::{agent_costs, select_parameters, OffsetPlan, SpeedProfile};
use planar_search::oracle_sim::{
    empirical_search_cost, ConeStrategy, EmpiricalReport, HybridStrategy, OffsetStrategy, SearchStrategy, TargetGrid,
    WedgeStrategy,
};
use planar_search::spiral_core::{kappa_n, participation_factor, unit_cost, UnitSpiralSolution};
use planar_search::wedge_search::minimize_wedge;
use planar_search::SearchError;
use serde_json::json;
use thiserror::Error;

use crate::output::{resolve_out, write_csv, write_text};

const EXIT_OTHER: u8 = 1;
const EXIT_DOMAIN: u8 = 2;
const EXIT_GAP: u8 = 3;
const EXIT_USAGE: u8 = 64;

const FACTOR_ROWS: [u64; 8] = [1, 2, 3, 4, 5, 10, 100, 1000];

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("CSV output failed: {0}")]
    Csv(#[from] csv::Error),
    #[error("verification failed: {0}")]
    Gap(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Search(SearchError::Domain(_)) => EXIT_DOMAIN,
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Gap(_) => EXIT_GAP,
            _ => EXIT_OTHER,
        }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

/// Planar point search with agents of different speeds: analytic costs,
/// trajectory plans, curves and brute-force verification.
#[derive(Debug, Parser)]
#[command(name = "planar-search", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Expansion factor of the optimal spiral for n unit-speed agents.
    Kappa {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        json: bool,
    },
    /// Optimal spiral cost for n unit-speed agents.
    UnitCost {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        json: bool,
    },
    /// Off-Set spiral plan for a list of agent speeds.
    Offset {
        #[arg(long, value_delimiter = ',', required = true)]
        speeds: Vec<f64>,
        #[arg(long)]
        json: bool,
        /// Write the JSON plan to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bouncing search in a cone.
    Cone {
        #[arg(long, allow_hyphen_values = true)]
        phi: f64,
        #[command(flatten)]
        angle: AngleUnit,
        #[arg(long)]
        json: bool,
    },
    /// Shortcut spiral in the complement of a cone, or a sweep over angles.
    #[command(group(ArgGroup::new("mode").required(true).args(["phi", "sweep"])))]
    Wedge {
        #[arg(long, allow_hyphen_values = true)]
        phi: Option<f64>,
        #[command(flatten)]
        angle: AngleUnit,
        /// Number of cone angles in the sweep.
        #[arg(long, requires = "out")]
        sweep: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Cone and wedge hybrid for a slow agent, or a sweep of gamma over angles.
    #[command(group(ArgGroup::new("mode").required(true).args(["speed", "sweep"])))]
    Hybrid {
        #[arg(long, allow_hyphen_values = true)]
        speed: Option<f64>,
        #[arg(long, requires = "out")]
        sweep: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Best upper bound for two agents as a function of the slow speed.
    Curve {
        #[arg(long, default_value_t = 0.01)]
        c_min: f64,
        #[arg(long, default_value_t = 1.0)]
        c_max: f64,
        #[arg(long, default_value_t = 400)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Unit-spiral constants and participation factors.
    Tables {
        #[arg(long)]
        json: bool,
    },
    /// Compare an analytic cost with a brute-force grid of targets.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct AngleUnit {
    /// Read angles in degrees instead of radians.
    #[arg(long)]
    degrees: bool,
}

impl AngleUnit {
    fn radians(&self, x: f64) -> f64 {
        if self.degrees {
            x.to_radians()
        } else {
            x
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyKind {
    Uniform,
    Offset,
    Cone,
    Wedge,
    Hybrid,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    strategy: StrategyKind,
    /// Agent count for the uniform strategy.
    #[arg(long)]
    n: Option<u64>,
    #[arg(long, value_delimiter = ',', conflicts_with = "plan")]
    speeds: Option<Vec<f64>>,
    /// Off-Set plan in JSON, as written by `offset --json`.
    #[arg(long)]
    plan: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<f64>,
    #[command(flatten)]
    angle: AngleUnit,
    #[arg(long, allow_hyphen_values = true)]
    speed: Option<f64>,
    #[arg(long, default_value_t = 720)]
    grid_angles: usize,
    #[arg(long, default_value_t = 512)]
    grid_radii: usize,
    /// Largest accepted relative gap; 0.005, or 0.01 for the hybrid.
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
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
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Kappa { n, json } => kappa(n, json),
        Command::UnitCost { n, json } => unit_cost_cmd(n, json),
        Command::Offset { speeds, json, out } => offset(&speeds, json, out),
        Command::Cone { phi, angle, json } => cone(angle.radians(phi), json),
        Command::Wedge {
            phi,
            angle,
            sweep,
            out,
            json,
        } => match (phi, sweep) {
            (Some(phi), _) => wedge(angle.radians(phi), json),
            (None, Some(points)) => wedge_sweep(points, out),
            (None, None) => unreachable!("clap enforces one mode"),
        },
        Command::Hybrid {
            speed,
            sweep,
            out,
            json,
        } => match (speed, sweep) {
            (Some(c), _) => hybrid(c, json),
            (None, Some(points)) => hybrid_sweep(points, out),
            (None, None) => unreachable!("clap enforces one mode"),
        },
        Command::Curve {
            c_min,
            c_max,
            steps,
            out,
        } => curve(c_min, c_max, steps, &out),
        Command::Tables { json } => tables(json),
        Command::Verify(args) => verify(&args),
    }
}

fn kappa(n: u64, json: bool) -> CliResult {
    let k = kappa_n(n)?;
    if json {
        println!("{}", to_json(&json!({ "n": n, "kappa": k }))?);
    } else {
        println!("{k:.6}");
    }
    Ok(())
}

fn unit_cost_cmd(n: u64, json: bool) -> CliResult {
    if json {
        let doc = match UnitSpiralSolution::new(n) {
            Ok(s) => serde_json::to_value(s)?,
            Err(_) => json!({ "n": n, "kappa": null, "cost": null }),
        };
        println!("{}", to_json(&doc)?);
    } else {
        println!("{:.5}", unit_cost(n));
    }
    Ok(())
}

fn offset(speeds: &[f64], json: bool, out: Option<PathBuf>) -> CliResult {
    let profile = SpeedProfile::new(speeds)?;
    let plan = select_parameters(&profile)?;
    let doc = to_json(&plan)?;
    if let Some(path) = out {
        write_text(&resolve_out(&path), &(doc.clone() + "\n"))?;
    }
    if json {
        println!("{doc}");
        return Ok(());
    }
    let costs = agent_costs(&plan, &profile)?;
    println!("participants   {} (agents 0..={})", plan.nu, plan.mu);
    println!("expansion k    {}", sig6(plan.k));
    println!("predicted cost {}", sig6(plan.predicted_cost));
    println!("agent  speed     phase     cost");
    for (i, cost) in costs.per_agent.iter().enumerate() {
        println!(
            "{i:>5}  {:<8}  {:<8}  {}",
            sig6(profile.speeds()[i]),
            sig6(plan.phases[i]),
            sig6(*cost)
        );
    }
    for i in plan.nu..profile.len() {
        println!("{i:>5}  {:<8}  idle", sig6(profile.speeds()[i]));
    }
    Ok(())
}

fn cone(phi: f64, json: bool) -> CliResult {
    let plan = minimize_cone(phi)?;
    if json {
        println!("{}", to_json(&plan)?);
    } else {
        println!("phi        {}", sig6(plan.phi));
        println!("theta*     {}", sig6(plan.theta_star));
        println!("alpha      {}", sig6(plan.alpha));
        println!("beta       {}", sig6(plan.beta));
        println!("F_phi      {}", sig6(plan.f_phi));
        println!("cost       {}", sig6(plan.cost));
    }
    Ok(())
}

fn wedge(phi: f64, json: bool) -> CliResult {
    let plan = minimize_wedge(phi)?;
    if json {
        println!("{}", to_json(&plan)?);
    } else {
        println!("phi        {}", sig6(plan.phi));
        println!("lambda*    {}", sig6(plan.lambda_star));
        println!("k_lambda   {}", sig6(plan.k_lambda));
        println!("alpha      {}", sig6(plan.alpha_lambda));
        println!("R_phi      {}", sig6(plan.r_phi));
    }
    Ok(())
}

fn sweep_angles(points: usize) -> CliResult<Vec<f64>> {
    if points < 2 {
        return Err(SearchError::Domain("sweep needs at least two points".into()).into());
    }
    let (lo, hi) = (0.005, PI - 0.005);
    Ok((0..points)
        .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
        .collect())
}

fn wedge_sweep(points: usize, out: Option<PathBuf>) -> CliResult {
    let out = out.expect("clap requires --out with --sweep");
    let mut rows = Vec::with_capacity(points);
    for phi in sweep_angles(points)? {
        let p = minimize_wedge(phi)?;
        let gap = (p.k_lambda * phi).exp() - p.lambda_star;
        rows.push(vec![sig17(phi), sig17(p.lambda_star), sig17(p.k_lambda), sig17(gap), sig17(p.r_phi)]);
    }
    let path = resolve_out(&out);
    write_csv(&path, &["phi", "lambda_star", "k_lambda", "shortcut_gap", "r_phi"], &rows)?;
    println!("wrote {} rows to {}", rows.len(), path.display());
    Ok(())
}

fn hybrid(c: f64, json: bool) -> CliResult {
    let point = combined_bound(c)?;
    if json {
        println!("{}", to_json(&point)?);
        return Ok(());
    }
    let opt = |x: Option<f64>| x.map_or_else(|| "none".to_string(), sig6);
    println!("speed c        {}", sig6(point.c));
    println!("spiral bound   {}", sig6(point.spiral_bound));
    println!("hybrid bound   {}", opt(point.hybrid_bound));
    println!("cone angle     {}", opt(point.phi_used));
    println!("combined       {}", sig6(point.combined));
    Ok(())
}

fn hybrid_sweep(points: usize, out: Option<PathBuf>) -> CliResult {
    let out = out.expect("clap requires --out with --sweep");
    let rows: Vec<Vec<String>> = gamma_sweep(points)?
        .iter()
        .map(|p| vec![sig17(p.phi), sig17(p.gamma), sig17(p.cone.cost), sig17(p.wedge.r_phi)])
        .collect();
    let path = resolve_out(&out);
    write_csv(&path, &["phi", "gamma", "cone_cost", "r_phi"], &rows)?;
    println!("wrote {} rows to {}", rows.len(), path.display());
    Ok(())
}

fn curve(c_min: f64, c_max: f64, steps: usize, out: &std::path::Path) -> CliResult {
    let points = cost_curve(c_min, c_max, steps)?;
    let opt = |x: Option<f64>| x.map_or_else(String::new, sig17);
    let rows: Vec<Vec<String>> = points
        .iter()
        .map(|p| {
            vec![
                sig17(p.c),
                sig17(p.spiral_bound),
                opt(p.hybrid_bound),
                sig17(p.combined),
                opt(p.phi_used),
            ]
        })
        .collect();
    let path = resolve_out(out);
    write_csv(&path, &["c", "spiral_bound", "hybrid_bound", "combined", "phi_used"], &rows)?;
    println!("wrote {} rows to {}", rows.len(), path.display());
    Ok(())
}

fn tables(json: bool) -> CliResult {
    let spirals: Vec<UnitSpiralSolution> = (1..=7).map(UnitSpiralSolution::new).collect::<Result<_, _>>()?;
    let factors: Vec<(u64, f64)> = FACTOR_ROWS
        .iter()
        .map(|&l| participation_factor(l).map(|p| (l, p)))
        .collect::<Result<_, _>>()?;
    if json {
        let doc = json!({
            "unit_spirals": spirals,
            "participation_factors": factors
                .iter()
                .map(|(l, p)| json!({ "l": l, "p": p }))
                .collect::<Vec<_>>(),
        });
        println!("{}", to_json(&doc)?);
        return Ok(());
    }
    println!("n   kappa_n    U_n");
    for s in &spirals {
        println!("{:<3} {:.6}   {:.5}", s.n, s.kappa, s.cost);
    }
    println!();
    println!("l     p_l");
    for (l, p) in &factors {
        println!("{l:<5} {p:.5}");
    }
    Ok(())
}

fn require<T>(value: Option<T>, flag: &str, strategy: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::Usage(format!("--strategy {strategy} requires --{flag}")))
}

fn load_plan(path: &std::path::Path) -> CliResult<OffsetStrategy> {
    let path = resolve_out(path);
    let text = std::fs::read_to_string(&path).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    let plan: OffsetPlan = serde_json::from_str(&text)?;
    let profile = SpeedProfile::new(&plan.speeds)?;
    let fresh = select_parameters(&profile)?;
    if fresh.predicted_cost.to_bits() != plan.predicted_cost.to_bits() {
        return Err(CliError::Gap(format!(
            "plan predicts {} but its speeds give {}",
            sig17(plan.predicted_cost),
            sig17(fresh.predicted_cost)
        )));
    }
    Ok(OffsetStrategy::from_plan(plan, profile)?)
}

fn build_strategy(args: &VerifyArgs) -> CliResult<Box<dyn SearchStrategy>> {
    Ok(match args.strategy {
        StrategyKind::Uniform => {
            let n = require(args.n, "n", "uniform")?;
            Box::new(OffsetStrategy::uniform(n as usize)?)
        }
        StrategyKind::Offset => match (&args.plan, &args.speeds) {
            (Some(path), _) => Box::new(load_plan(path)?),
            (None, Some(speeds)) => Box::new(OffsetStrategy::new(SpeedProfile::new(speeds)?)?),
            (None, None) => return Err(CliError::Usage("--strategy offset requires --speeds or --plan".into())),
        },
        StrategyKind::Cone => {
            let phi = args.angle.radians(require(args.phi, "phi", "cone")?);
            Box::new(ConeStrategy::new(minimize_cone(phi)?))
        }
        StrategyKind::Wedge => {
            let phi = args.angle.radians(require(args.phi, "phi", "wedge")?);
            Box::new(WedgeStrategy::new(minimize_wedge(phi)?))
        }
        StrategyKind::Hybrid => {
            let c = require(args.speed, "speed", "hybrid")?;
            if !(c > 0.0 && c < 1.0) {
                return Err(SearchError::Domain(format!("slow speed must lie in (0, 1), got {c}")).into());
            }
            Box::new(HybridStrategy::new(c)?)
        }
    })
}

fn verify(args: &VerifyArgs) -> CliResult {
    let strategy = build_strategy(args)?;
    let grid = TargetGrid::new(args.grid_angles, args.grid_radii)?;
    let tolerance = args.tolerance.unwrap_or(match args.strategy {
        StrategyKind::Hybrid => 0.01,
        _ => 0.005,
    });
    let report = empirical_search_cost(strategy.as_ref(), &grid)?;
    print_report(&report, tolerance, args.json)?;
    if !report.undershoots() {
        return Err(CliError::Gap(format!(
            "empirical cost {} exceeds the analytic {}",
            sig17(report.empirical_cost),
            sig17(report.analytic_cost)
        )));
    }
    if report.relative_gap > tolerance {
        return Err(CliError::Gap(format!(
            "relative gap {} exceeds tolerance {}",
            sig6(report.relative_gap),
            sig6(tolerance)
        )));
    }
    Ok(())
}

fn print_report(report: &EmpiricalReport, tolerance: f64, json: bool) -> CliResult {
    if json {
        println!("{}", to_json(report)?);
        return Ok(());
    }
    println!("strategy        {}", report.strategy_id);
    println!("grid            {} x {}", report.grid.angles, report.grid.radii);
    println!("analytic cost   {}", sig6(report.analytic_cost));
    println!("empirical cost  {}", sig6(report.empirical_cost));
    println!("relative gap    {} (tolerance {})", sig6(report.relative_gap), sig6(tolerance));
    println!(
        "worst target    radius {} angle {}",
        sig6(report.worst_target.radius),
        sig6(report.worst_target.angle)
    );
    Ok(())
}
