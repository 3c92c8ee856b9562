//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for runtime or numerical failures, 2 for
//! malformed input (scenario files, parameter paths, flags).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::dynamics::{
    best_response_dynamics, integrate_replicator, BestResponseConfig, ReplicatorConfig, Schedule,
    TieBreak,
};
use crate::equilibrium::{enumerate_nash, flip_conditions, AnalysisOptions};
use crate::error::{Error, Result};
use crate::interventions::{Intervention, MechanismCap};
use crate::model::{ActionProfile, BenefitSpec};
use crate::report::{self, Series};
use crate::scalar::{Exact, Scalar};
use crate::scenario_file::{InterventionFile, ScenarioFile};
use crate::sweep::{
    critical_threshold, sweep_parameter, Grid, Observables, ParamPath, Predicate, SweepSpec,
};

pub const THREADS_ENV: &str = "WARDGAMES_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "wardgames",
    version,
    about = "Equilibria, intervention thresholds and dynamics of ward capacity-signalling games"
)]
struct Cli {
    /// Worker threads, 0 for one per core. Overrides WARDGAMES_THREADS.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Enumerate pure equilibria and per-ward flip margins.
    Analyze(AnalyzeArgs),
    /// Best-response or replicator dynamics, as CSV.
    Dynamics(DynamicsArgs),
    /// Sweep one parameter over a grid, or locate where a predicate flips.
    Sweep(SweepArgs),
    /// Analysis plus a canonical sweep and margin chart per intervention.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    scenario: PathBuf,
    /// Also write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Indifference tolerance; defaults to options.epsilon.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Use f64 even when exact rational arithmetic is available.
    #[arg(long)]
    float: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ScheduleArg {
    RoundRobin,
    Random,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TieBreakArg {
    Stay,
    Expose,
    Buffer,
}

#[derive(Debug, Args)]
struct DynamicsArgs {
    scenario: PathBuf,
    /// Starting profile such as EBBB, or a starting share x0 with --replicator.
    #[arg(long)]
    initial: String,
    #[arg(long)]
    replicator: bool,
    #[arg(long, value_enum, default_value = "round-robin")]
    schedule: ScheduleArg,
    /// Seed for --schedule random; defaults to options.rng_seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "stay")]
    tie_break: TieBreakArg,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    scenario: PathBuf,
    /// Parameter to vary, e.g. interventions[0].penalty.
    #[arg(long)]
    path: String,
    #[arg(long, allow_negative_numbers = true)]
    lo: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    hi: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// Explicit grid, comma separated; replaces --lo/--hi/--steps for the table.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    values: Option<Vec<f64>>,
    /// Comma-separated subset of nash_set, classification, welfare_gap, flip_margins.
    #[arg(long)]
    observables: Option<String>,
    /// Bisect for the value where --predicate changes over [lo, hi].
    #[arg(long, requires = "predicate")]
    critical: bool,
    #[arg(long)]
    predicate: Option<String>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// With --critical, also write the sweep table here.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write the main output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ReportArgs {
    scenario: PathBuf,
    /// Output directory, created if missing.
    #[arg(long)]
    bundle: PathBuf,
    /// Grid points per canonical sweep.
    #[arg(long, default_value_t = 41)]
    steps: usize,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    float: bool,
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 2 } else { 0 };
            let rendered = err.render().to_string();
            let _ = if err.use_stderr() {
                stderr.write_all(rendered.as_bytes())
            } else {
                stdout.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(cli, stdout, stderr) {
        Ok(()) => 0,
        Err(err) => {
            let _ = writeln!(stderr, "error: {err}");
            if err.is_config() {
                2
            } else {
                1
            }
        }
    }
}

fn resolve_threads(flag: Option<usize>) -> Result<usize> {
    if let Some(threads) = flag {
        return Ok(threads);
    }
    match std::env::var(THREADS_ENV) {
        Ok(text) => text.trim().parse().map_err(|_| {
            Error::config(
                THREADS_ENV,
                format!("expected a non-negative integer, got {text:?}"),
            )
        }),
        Err(_) => Ok(0),
    }
}

fn execute(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let threads = resolve_threads(cli.threads)?;
    match cli.command {
        Command::Analyze(args) => analyze(args, threads, stdout, stderr),
        Command::Dynamics(args) => dynamics(args, stdout, stderr),
        Command::Sweep(args) => sweep(args, threads, stdout),
        Command::Report(args) => bundle(args, threads, stdout, stderr),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn emit(out: Option<&Path>, stdout: &mut dyn Write, contents: &str) -> Result<()> {
    match out {
        Some(path) => write_file(path, contents),
        None => stdout
            .write_all(contents.as_bytes())
            .map_err(|source| Error::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

fn load(path: &Path, stderr: &mut dyn Write) -> Result<ScenarioFile> {
    let file = crate::scenario_file::load_scenario_file(path)?;
    for warning in file.to_scenario::<f64>()?.warnings() {
        let _ = writeln!(stderr, "warning: {warning}");
    }
    Ok(file)
}

fn lift<T: Scalar>(name: &str, value: f64) -> Result<T> {
    T::from_f64_checked(value)
        .ok_or_else(|| Error::config(name, format!("{value} is not representable")))
}

fn check_epsilon(epsilon: f64) -> Result<f64> {
    if epsilon >= 0.0 && epsilon.is_finite() {
        Ok(epsilon)
    } else {
        Err(Error::config(
            "epsilon",
            format!("must be finite and non-negative, got {epsilon}"),
        ))
    }
}

/// Largest magnitude and finest decimal resolution for which exact
/// arithmetic stays far from `i128` overflow.
const EXACT_MAGNITUDE: f64 = 1e6;
const EXACT_RESOLUTION: i128 = 1_000_000;

fn exact_fits(value: &Value) -> bool {
    match value {
        Value::Number(n) => n.as_f64().is_some_and(|v| {
            v.abs() <= EXACT_MAGNITUDE
                && Exact::from_f64_checked(v).is_some_and(|r| EXACT_RESOLUTION % r.denom() == 0)
        }),
        Value::Array(items) => items.iter().all(exact_fits),
        Value::Object(map) => map.iter().all(|(key, v)| key == "options" || exact_fits(v)),
        _ => true,
    }
}

/// Whether `analyze` can run in exact rational arithmetic without risk of
/// overflow: short decimals of moderate size, and no fractional concave
/// exponent.
fn exact_supported(file: &ScenarioFile, epsilon: f64) -> bool {
    let gamma_ok = match file.to_scenario::<f64>().map(|s| s.benefit().clone()) {
        Ok(BenefitSpec::Concave { gamma, .. }) => gamma == 1.0,
        Ok(_) => true,
        Err(_) => false,
    };
    let value = serde_json::to_value(file).expect("scenario files always serialize");
    gamma_ok && exact_fits(&value) && exact_fits(&json!(epsilon))
}

fn analysis_in<T: Scalar>(
    file: &ScenarioFile,
    arithmetic: &str,
    epsilon: f64,
    threads: usize,
) -> Result<(String, Value)> {
    let scenario = file.to_scenario::<T>()?;
    let epsilon: T = lift("epsilon", epsilon)?;
    let options = AnalysisOptions {
        threads,
        ..AnalysisOptions::with_epsilon(epsilon)
    };
    let equilibria = enumerate_nash(&scenario, &options)?;
    let flip = flip_conditions(&scenario, epsilon)?;
    let text = report::analysis_text(arithmetic, &equilibria, &flip);
    let value = report::analysis_json(file, arithmetic, &scenario.warnings(), &equilibria, &flip);
    Ok((text, value))
}

fn run_analysis(
    file: &ScenarioFile,
    epsilon: f64,
    float: bool,
    threads: usize,
) -> Result<(String, Value)> {
    if !float && exact_supported(file, epsilon) {
        analysis_in::<Exact>(file, "exact", epsilon, threads)
    } else {
        analysis_in::<f64>(file, "f64", epsilon, threads)
    }
}

fn analyze(
    args: AnalyzeArgs,
    threads: usize,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<()> {
    let file = load(&args.scenario, stderr)?;
    let epsilon = check_epsilon(args.epsilon.unwrap_or(file.options.epsilon))?;
    let (text, value) = run_analysis(&file, epsilon, args.float, threads)?;
    emit(None, stdout, &text)?;
    if let Some(out) = &args.out {
        write_file(out, &report::to_json_text(&value))?;
    }
    Ok(())
}

fn dynamics(args: DynamicsArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let file = load(&args.scenario, stderr)?;
    let scenario = file.to_scenario::<f64>()?;
    if args.replicator {
        let x0: f64 = args.initial.trim().parse().map_err(|_| {
            Error::config(
                "initial",
                format!(
                    "expected a share in [0, 1] with --replicator, got {:?}",
                    args.initial
                ),
            )
        })?;
        if !(0.0..=1.0).contains(&x0) {
            return Err(Error::config(
                "initial",
                format!("share {x0} outside [0, 1]"),
            ));
        }
        let config = ReplicatorConfig {
            t_end: args.t_end.unwrap_or(file.options.t_end),
            dt: args.dt.unwrap_or(file.options.dt),
        };
        if !(config.dt > 0.0 && config.dt.is_finite()) {
            return Err(Error::config(
                "dt",
                format!("must be positive, got {}", config.dt),
            ));
        }
        if !(config.t_end >= 0.0 && config.t_end.is_finite()) {
            return Err(Error::config(
                "t_end",
                format!("must be non-negative, got {}", config.t_end),
            ));
        }
        let result = integrate_replicator(&scenario, x0, &config)?;
        emit(
            args.out.as_deref(),
            stdout,
            &report::replicator_csv(&result),
        )?;
        let _ = writeln!(stderr, "final x: {}", report::num(result.final_x()));
        let _ = writeln!(
            stderr,
            "fixed points: {}",
            report::fixed_points_text(&result.fixed_points)
        );
        return Ok(());
    }

    let initial: ActionProfile = args.initial.parse().map_err(|_| {
        Error::config(
            "initial",
            format!(
                "expected a profile over E/B such as EBBB, got {:?}",
                args.initial
            ),
        )
    })?;
    if initial.len() != scenario.n() {
        return Err(Error::config(
            "initial",
            format!(
                "profile has {} entries but the scenario has {} wards",
                initial.len(),
                scenario.n()
            ),
        ));
    }
    let config = BestResponseConfig {
        schedule: match args.schedule {
            ScheduleArg::RoundRobin => Schedule::RoundRobin,
            ScheduleArg::Random => {
                Schedule::RandomSeeded(args.seed.unwrap_or(file.options.rng_seed))
            }
        },
        max_iters: args.max_iters.unwrap_or(file.options.max_iters),
        tie_break: match args.tie_break {
            TieBreakArg::Stay => TieBreak::PreferStay,
            TieBreakArg::Expose => TieBreak::PreferExpose,
            TieBreakArg::Buffer => TieBreak::PreferBuffer,
        },
        epsilon: check_epsilon(args.epsilon.unwrap_or(file.options.epsilon))?,
    };
    if config.max_iters == 0 {
        return Err(Error::config("max_iters", "must be at least 1"));
    }
    let trace = best_response_dynamics(&scenario, &initial, &config)?;
    emit(args.out.as_deref(), stdout, &report::dynamics_csv(&trace))?;
    let _ = writeln!(
        stderr,
        "{} after {} turns: {}",
        trace.terminal.name(),
        trace.iterations,
        trace.final_profile()
    );
    Ok(())
}

fn table_grid(args: &SweepArgs) -> Result<Option<Grid<f64>>> {
    if let Some(values) = &args.values {
        return Ok(Some(Grid::Values(values.clone())));
    }
    match (args.lo, args.hi, args.steps) {
        (Some(lo), Some(hi), Some(steps)) => Ok(Some(Grid::Range { lo, hi, steps })),
        (_, _, None) => Ok(None),
        _ => Err(Error::config("grid", "--steps needs both --lo and --hi")),
    }
}

fn sweep(args: SweepArgs, threads: usize, stdout: &mut dyn Write) -> Result<()> {
    let mut sink = std::io::sink();
    let file = load(&args.scenario, &mut sink)?;
    let scenario = file.to_scenario::<f64>()?;
    let path: ParamPath = args.path.parse()?;
    let epsilon = check_epsilon(args.epsilon.unwrap_or(file.options.epsilon))?;
    let observables = match &args.observables {
        Some(text) => text.parse()?,
        None => Observables::all(),
    };
    let options = AnalysisOptions {
        threads,
        ..AnalysisOptions::with_epsilon(epsilon)
    };
    let grid = table_grid(&args)?;
    let table = |grid: Grid<f64>| -> Result<String> {
        let spec = SweepSpec {
            path: path.clone(),
            grid,
            observables,
        };
        let rows = sweep_parameter(&scenario, &spec, &options)?;
        Ok(report::sweep_csv(&rows, scenario.n(), observables))
    };

    if args.critical {
        let (Some(lo), Some(hi)) = (args.lo, args.hi) else {
            return Err(Error::config("critical", "--critical needs --lo and --hi"));
        };
        let predicate: Predicate = args.predicate.as_deref().unwrap_or_default().parse()?;
        let result = critical_threshold(&scenario, &path, lo, hi, predicate, epsilon)?;
        let value = report::threshold_json(&file, path.as_str(), lo, hi, &result);
        emit(args.out.as_deref(), stdout, &report::to_json_text(&value))?;
        if let Some(csv_path) = &args.csv {
            let grid =
                grid.ok_or_else(|| Error::config("csv", "--csv needs --steps or --values"))?;
            write_file(csv_path, &table(grid)?)?;
        }
        return Ok(());
    }

    let grid =
        grid.ok_or_else(|| Error::config("grid", "give --lo, --hi and --steps, or --values"))?;
    emit(args.out.as_deref(), stdout, &table(grid)?)
}

/// Canonical sweep for one intervention: the parameter, its range, the
/// predicate whose switch point is reported, and whether the chart shows
/// margins against all-Buffer (true) or all-Expose (false).
struct Canonical {
    path: String,
    lo: f64,
    hi: f64,
    predicate: Predicate,
    against_buffering: bool,
}

fn canonical_sweep(file: &ScenarioFile, index: usize) -> Result<Canonical> {
    let scenario = file.to_scenario::<f64>()?;
    let wards = scenario.wards();
    let max_gap = wards
        .iter()
        .map(|w| w.cost_expose - w.cost_buffer)
        .fold(0.0f64, f64::max);
    let unit = if max_gap > 0.0 { max_gap } else { 1.0 };
    let max_cost = wards.iter().map(|w| w.cost_expose).fold(0.0f64, f64::max);
    Ok(match &scenario.interventions()[index] {
        Intervention::EffortReduction(e) => Canonical {
            path: format!("interventions[{index}].delta_expose"),
            lo: 0.0,
            hi: 2.0 * unit.max(e.delta_expose),
            predicate: Predicate::AllBufferNotNash,
            against_buffering: true,
        },
        Intervention::Observability(o) => Canonical {
            path: format!("interventions[{index}].penalty"),
            lo: 0.0,
            hi: 2.0 * (unit / o.p0.max(0.1)).max(o.penalty),
            predicate: Predicate::AllBufferNotNash,
            against_buffering: true,
        },
        Intervention::Mechanism(m) => {
            let path = match &m.capped_cost_expose {
                MechanismCap::Broadcast(_) => format!("interventions[{index}].capped_cost_expose"),
                MechanismCap::PerWard(caps) => {
                    let widest =
                        (0..caps.len())
                            .fold(0, |best, i| if caps[i] > caps[best] { i } else { best });
                    format!("interventions[{index}].capped_cost_expose[{widest}]")
                }
            };
            Canonical {
                path,
                lo: 0.0,
                hi: if max_cost > 0.0 { max_cost } else { 1.0 },
                predicate: Predicate::AllExposeNash,
                against_buffering: false,
            }
        }
    })
}

fn kind_name(spec: &InterventionFile) -> &'static str {
    match spec {
        InterventionFile::Effort { .. } => "effort",
        InterventionFile::Observability { .. } => "observability",
        InterventionFile::Mechanism { .. } => "mechanism",
    }
}

type Point = (f64, f64);

fn margin_series(
    rows: &[crate::sweep::SweepRow<f64>],
    n: usize,
    against_buffering: bool,
) -> Vec<Series> {
    let per_ward: Vec<Vec<(f64, f64)>> = (0..n)
        .map(|i| {
            rows.iter()
                .filter_map(|row| {
                    let w = &row.flip.as_ref()?.wards[i];
                    let margin = if against_buffering {
                        w.against_buffering.margin
                    } else {
                        w.cooperative.margin
                    };
                    Some((row.value, margin))
                })
                .collect()
        })
        .collect();
    let mut groups: Vec<(Vec<usize>, &[Point])> = Vec::new();
    for (i, points) in per_ward.iter().enumerate() {
        match groups.iter_mut().find(|(_, p)| *p == points) {
            Some((members, _)) => members.push(i),
            None => groups.push((vec![i], points)),
        }
    }
    groups
        .into_iter()
        .map(|(members, points)| Series {
            label: if members.len() == 1 {
                format!("ward {}", members[0])
            } else {
                format!(
                    "wards {}",
                    members
                        .iter()
                        .map(|m| m.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                )
            },
            points: points.to_vec(),
        })
        .collect()
}

fn bundle(
    args: ReportArgs,
    threads: usize,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<()> {
    let file = load(&args.scenario, stderr)?;
    let epsilon = check_epsilon(args.epsilon.unwrap_or(file.options.epsilon))?;
    if args.steps < 2 {
        return Err(Error::config("steps", "must be at least 2"));
    }
    fs::create_dir_all(&args.bundle).map_err(|source| Error::Io {
        path: args.bundle.display().to_string(),
        source,
    })?;
    let (_, analysis) = run_analysis(&file, epsilon, args.float, threads)?;
    let scenario = file.to_scenario::<f64>()?;
    let options = AnalysisOptions {
        threads,
        ..AnalysisOptions::with_epsilon(epsilon)
    };

    let mut written = Vec::new();
    let mut sweeps = Vec::new();
    for (index, spec) in file.interventions.iter().enumerate() {
        let kind = kind_name(spec);
        let canonical = canonical_sweep(&file, index)?;
        let path: ParamPath = canonical.path.parse()?;
        let sweep_spec = SweepSpec {
            path: path.clone(),
            grid: Grid::Range {
                lo: canonical.lo,
                hi: canonical.hi,
                steps: args.steps,
            },
            observables: Observables::all(),
        };
        let rows = sweep_parameter(&scenario, &sweep_spec, &options)?;
        let csv_name = format!("sweep_{index}_{kind}.csv");
        write_file(
            &args.bundle.join(&csv_name),
            &report::sweep_csv(&rows, scenario.n(), Observables::all()),
        )?;

        let reference = if canonical.against_buffering {
            "all-Buffer"
        } else {
            "all-Expose"
        };
        let svg_name = format!("margin_{index}_{kind}.svg");
        let svg = report::margin_svg(
            &format!("{kind}: deviation margin at {reference}"),
            &canonical.path,
            &margin_series(&rows, scenario.n(), canonical.against_buffering),
        );
        write_file(&args.bundle.join(&svg_name), &svg)?;

        let threshold = match critical_threshold(
            &scenario,
            &path,
            canonical.lo,
            canonical.hi,
            canonical.predicate,
            epsilon,
        ) {
            Ok(result) => {
                report::threshold_value(path.as_str(), canonical.lo, canonical.hi, &result)
            }
            Err(Error::Bracket(message)) => {
                json!({"predicate": canonical.predicate.name(), "error": message})
            }
            Err(err) => return Err(err),
        };
        sweeps.push(json!({
            "intervention": index,
            "kind": kind,
            "path": canonical.path,
            "lo": canonical.lo,
            "hi": canonical.hi,
            "steps": args.steps,
            "csv": csv_name,
            "svg": svg_name,
            "threshold": threshold,
        }));
        written.push(csv_name);
        written.push(svg_name);
    }
    write_file(
        &args.bundle.join("report.json"),
        &report::to_json_text(&report::bundle_json(&file, analysis, sweeps)),
    )?;
    written.insert(0, "report.json".into());
    let listing: String = written
        .iter()
        .map(|name| format!("{}\n", args.bundle.join(name).display()))
        .collect();
    emit(None, stdout, &listing)
}
