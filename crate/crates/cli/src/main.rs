//! `mgplan`: validate, build, solve and analyse microgrid planning studies described
//! by a run-configuration file.

use std::fs;
use std::io::ErrorKind;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mgplan::analysis::{
    annual_emissions, compute_evpi, compute_vss, cost_breakdown, dispatch_table, extract_design, write_design_csv,
    write_dispatch_csv, write_emissions_csv, write_vss_csv, CostBreakdown, EmissionRow,
};
use mgplan::model::{Family, MilpInstance};
use mgplan::solve::{mps_string, parse_solution_file, solution_string, Backend, Solution, SolveStatus};
use mgplan::study::{BackendSpec, RunConfig, Study};

const MODEL_FILE: &str = "model.mps";
const SOLUTION_FILE: &str = "solution.sol";

/// Exit code for a missing configuration, profile or catalog file.
const EXIT_MISSING: u8 = 2;
/// Exit code for a solve that finished without an optimal plan.
const EXIT_NOT_OPTIMAL: u8 = 3;

#[derive(Parser)]
#[command(name = "mgplan", version, about = "Stochastic design and dispatch of renewable microgrids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load every input, build the model and print its size.
    Validate(Common),
    /// Write the model as fixed-format MPS.
    Build(Common),
    /// Solve the model and write the solution and CSV reports.
    Solve(Common),
    /// Rewrite the CSV reports from an existing solution file.
    Report {
        #[command(flatten)]
        common: Common,
        /// Solution file; defaults to the one in the output directory.
        #[arg(long)]
        solution: Option<PathBuf>,
    },
    /// Compute the value of the stochastic solution and of perfect information.
    Vss(Common),
}

#[derive(Args)]
struct Common {
    /// Run-configuration JSON.
    #[arg(long, short)]
    config: PathBuf,
    /// Overrides the backend named in the configuration.
    #[arg(long, value_enum)]
    backend: Option<BackendKind>,
    /// External solver command with `{mps}` and `{sol}` placeholders. Without one the
    /// configuration's command is used, then the MGPLAN_SOLVER_CMD variable.
    #[arg(long)]
    solver_cmd: Option<String>,
    /// Output directory; defaults to the configuration's.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Lift the electricity purchase cap and the surplus bounds.
    #[arg(long)]
    relaxed: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendKind {
    Exact,
    External,
}

struct Loaded {
    config: RunConfig,
    study: Study,
    instance: MilpInstance,
    out: PathBuf,
}

impl Common {
    fn load(&self) -> Result<Loaded> {
        let config = RunConfig::load(&self.config)?;
        let mut study = config.assemble()?;
        if self.relaxed {
            study.config = study.config.relaxed();
        }
        let instance = study.instance()?;
        let out = self.out.clone().unwrap_or_else(|| config.out_dir());
        Ok(Loaded {
            config,
            study,
            instance,
            out,
        })
    }

    fn backend(&self, config: &RunConfig) -> Result<Backend> {
        let spec = match (self.backend, &config.backend) {
            (Some(BackendKind::Exact), BackendSpec::Exact { .. }) | (None, _) => config.backend.clone(),
            (Some(BackendKind::Exact), _) => BackendSpec::Exact { time_limit: None },
            (Some(BackendKind::External), BackendSpec::External { command }) => BackendSpec::External {
                command: command.clone(),
            },
            (Some(BackendKind::External), _) => BackendSpec::External { command: None },
        };
        // the command line wins over the file, which wins over the environment
        let spec = match spec {
            BackendSpec::External { command } => BackendSpec::External {
                command: self.solver_cmd.clone().or(command),
            },
            exact => exact,
        };
        Ok(spec.backend()?)
    }
}

fn create_out(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn write(path: PathBuf, bytes: impl AsRef<[u8]>) -> Result<()> {
    fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn family_counts(instance: &MilpInstance) -> String {
    [
        Family::Install,
        Family::Forced,
        Family::Commitment,
        Family::Storage,
        Family::Balance,
        Family::Peak,
        Family::Emission,
    ]
    .iter()
    .map(|&f| format!("{f:?}={}", instance.rows_in(f)))
    .collect::<Vec<_>>()
    .join(" ")
}

fn validate(c: &Common) -> Result<ExitCode> {
    let l = c.load()?;
    let m = &l.instance;
    println!("study {}: {} equipment, {} scenarios", l.study.name, l.study.catalog.equipment.len(), l.study.set.len());
    for s in &l.study.set.scenarios {
        println!("  scenario {} probability {}", s.id, s.probability);
    }
    println!(
        "variables {} ({} integer, {} continuous)",
        m.num_cols(),
        m.num_integer(),
        m.num_cols() - m.num_integer()
    );
    println!("constraints {} ({})", m.num_rows(), family_counts(m));
    Ok(ExitCode::SUCCESS)
}

fn build(c: &Common) -> Result<ExitCode> {
    let l = c.load()?;
    create_out(&l.out)?;
    let path = l.out.join(MODEL_FILE);
    write(path.clone(), mps_string(&l.instance))?;
    println!("wrote {} ({} columns, {} rows)", path.display(), l.instance.num_cols(), l.instance.num_rows());
    Ok(ExitCode::SUCCESS)
}

/// Writes design, dispatch, emissions and cost CSVs and returns the cost breakdown.
fn write_reports(l: &Loaded, solution: &Solution) -> Result<CostBreakdown> {
    let Study {
        catalog, set, config, ..
    } = &l.study;
    let mut design = Vec::new();
    write_design_csv(&mut design, &extract_design(solution, catalog))?;
    write(l.out.join("design.csv"), design)?;

    let mut dispatch = Vec::new();
    let mut emissions = Vec::new();
    for w in 0..set.len() {
        for k in 0..set.grid.years {
            let mut block = Vec::new();
            write_dispatch_csv(&mut block, w, k, &dispatch_table(solution, catalog, set, w, k)?)?;
            // keep the header of the first block only
            let body = if dispatch.is_empty() {
                &block[..]
            } else {
                let start = block.iter().position(|&b| b == b'\n').map_or(block.len(), |i| i + 1);
                &block[start..]
            };
            dispatch.extend_from_slice(body);
            emissions.push(EmissionRow {
                scenario: w + 1,
                year: k + 1,
                tco2: annual_emissions(solution, set, w, k)?,
            });
        }
    }
    write(l.out.join("dispatch.csv"), dispatch)?;
    let mut buf = Vec::new();
    write_emissions_csv(&mut buf, &emissions)?;
    write(l.out.join("emissions.csv"), buf)?;

    let cost = cost_breakdown(solution, catalog, set, config)?;
    let rows = [
        ("initial", cost.initial),
        ("om", cost.om),
        ("purchases", cost.purchases),
        ("peak", cost.peak),
        ("cap_trade_income", cost.cap_trade_income),
        ("sng_income", cost.sng_income),
        ("net_present_cost", cost.net_present_cost),
    ];
    let text: String = std::iter::once("component,value\n".to_string())
        .chain(rows.iter().map(|(name, v)| format!("{name},{v}\n")))
        .collect();
    write(l.out.join("cost.csv"), text)?;
    Ok(cost)
}

fn print_summary(l: &Loaded, solution: &Solution, cost: &CostBreakdown) {
    println!("status {}", solution.status);
    println!("net present cost {:.2}", cost.net_present_cost);
    for item in extract_design(solution, &l.study.catalog).items {
        match item.capacity_kwh {
            Some(cap) => println!("  {} {:.1} kW / {:.1} kWh", item.equipment, item.rated_kw, cap),
            None => println!("  {} {:.1} kW", item.equipment, item.rated_kw),
        }
    }
}

fn solve(c: &Common) -> Result<ExitCode> {
    let l = c.load()?;
    let backend = c.backend(&l.config)?;
    create_out(&l.out)?;
    write(l.out.join(MODEL_FILE), mps_string(&l.instance))?;
    let solution = backend.solve(&l.instance)?;
    write(l.out.join(SOLUTION_FILE), solution_string(&l.instance, &solution))?;
    if solution.status != SolveStatus::Optimal {
        println!("status {}", solution.status);
        return Ok(ExitCode::from(EXIT_NOT_OPTIMAL));
    }
    let cost = write_reports(&l, &solution)?;
    print_summary(&l, &solution, &cost);
    Ok(ExitCode::SUCCESS)
}

fn report(c: &Common, solution_path: Option<&Path>) -> Result<ExitCode> {
    let l = c.load()?;
    let path = solution_path.map_or_else(|| l.out.join(SOLUTION_FILE), Path::to_path_buf);
    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    let solution = parse_solution_file(&l.instance, &text)?;
    if solution.status != SolveStatus::Optimal {
        println!("status {}", solution.status);
        return Ok(ExitCode::from(EXIT_NOT_OPTIMAL));
    }
    create_out(&l.out)?;
    let cost = write_reports(&l, &solution)?;
    print_summary(&l, &solution, &cost);
    Ok(ExitCode::SUCCESS)
}

fn vss(c: &Common) -> Result<ExitCode> {
    let l = c.load()?;
    let backend = c.backend(&l.config)?;
    let Study {
        catalog, set, config, ..
    } = &l.study;
    let result = compute_vss(catalog, set, config, &backend)?;
    create_out(&l.out)?;
    let mut buf = Vec::new();
    write_vss_csv(&mut buf, std::slice::from_ref(&result))?;
    let name = if c.relaxed { "vss_relaxed.csv" } else { "vss.csv" };
    write(l.out.join(name), buf)?;
    println!("SS {}", result.ss);
    println!("EVS {}", result.evs);
    println!("VSS {}", if result.vss.is_infinite() { "+inf".to_string() } else { result.vss.to_string() });
    for (id, status) in &result.recourse {
        if *status != SolveStatus::Optimal {
            println!("  recourse {id}: {status}");
        }
    }
    match compute_evpi(catalog, set, config, &backend) {
        Ok(e) => println!("WS {}\nEVPI {}", e.ws, e.evpi),
        Err(e) => println!("EVPI unavailable: {e}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Validate(c) => validate(c),
        Command::Build(c) => build(c),
        Command::Solve(c) => solve(c),
        Command::Report { common, solution } => report(common, solution.as_deref()),
        Command::Vss(c) => vss(c),
    }
}

fn is_missing_file(e: &anyhow::Error) -> bool {
    e.chain().any(|cause| match cause.downcast_ref::<mgplan::Error>() {
        Some(mgplan::Error::Io { source, .. }) => source.kind() == ErrorKind::NotFound,
        _ => cause
            .downcast_ref::<std::io::Error>()
            .is_some_and(|io| io.kind() == ErrorKind::NotFound),
    })
}

/// The error chain joined with `: `, skipping causes already quoted by their parent.
fn describe(e: &anyhow::Error) -> String {
    let mut parts: Vec<String> = Vec::new();
    for cause in e.chain() {
        let text = cause.to_string();
        if !parts.last().is_some_and(|p| p.ends_with(&text)) {
            parts.push(text);
        }
    }
    parts.join(": ")
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", describe(&e));
            if is_missing_file(&e) {
                ExitCode::from(EXIT_MISSING)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
