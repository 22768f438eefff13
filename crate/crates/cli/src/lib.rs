//! Command-line front end for the coagulation-fragmentation solvers.

pub mod expr;
pub mod problem_file;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use coagfrag::discretize::DiscreteKernels;
use coagfrag::harness::{
    all_examples, doubling_levels, emit_table, example_by_name, example_names,
    run_convergence_with, ConvergenceOptions, ExampleDef, RunManifest, SelfComparison,
    TableFormat,
};
use coagfrag::measures::{project_initial, GridSpec};
use coagfrag::stepper::{
    solve, write_state_csv, CflPolicy, Limiter, SchemeConfig, Storage, TimeOrder, Variant,
};

use problem_file::ProblemFile;

#[derive(Debug, Parser)]
#[command(name = "coagfrag", version, about = "High-resolution schemes for coagulation-fragmentation on measures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one simulation and write its final state and manifest.
    Run(RunArgs),
    /// Run a grid-refinement study and write the error table.
    Converge(ConvergeArgs),
    /// List the built-in examples.
    Examples(ExamplesArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Explicit,
    SemiImplicit,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Explicit => Variant::Explicit,
            VariantArg::SemiImplicit => Variant::SemiImplicit,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LimiterArg {
    Min,
    Paper,
    Off,
}

impl From<LimiterArg> for Limiter {
    fn from(l: LimiterArg) -> Self {
        match l {
            LimiterArg::Min => Limiter::Standard,
            LimiterArg::Paper => Limiter::PaperLiteral,
            LimiterArg::Off => Limiter::Off,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StorageArg {
    All,
    Final,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CflArg {
    Enforce,
    Warn,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ComparisonArg {
    Restrict,
    Direct,
}

#[derive(Debug, Args)]
#[group(id = "source", required = true, multiple = false)]
pub struct Source {
    /// Built-in example name (see `coagfrag examples`).
    #[arg(long, group = "source")]
    pub example: Option<String>,
    /// JSON problem file.
    #[arg(long, group = "source")]
    pub problem: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SchemeArgs {
    #[arg(long, value_enum, default_value = "explicit")]
    pub variant: VariantArg,
    /// Time order.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub order: u8,
    #[arg(long, value_enum, default_value = "min")]
    pub limiter: LimiterArg,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub scheme: SchemeArgs,
    /// Number of cells (defaults to the example's base level).
    #[arg(long)]
    pub nx: Option<usize>,
    /// Number of time steps.
    #[arg(long, conflicts_with = "dt")]
    pub nt: Option<usize>,
    /// Time step; `T / dt` must be an integer.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Override the final time.
    #[arg(long)]
    pub t_final: Option<f64>,
    #[arg(long, default_value = "coagfrag-out")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "final")]
    pub storage: StorageArg,
    /// Override the example's CFL policy.
    #[arg(long, value_enum)]
    pub cfl_policy: Option<CflArg>,
    /// Split per-cell loops across threads.
    #[arg(long)]
    pub parallel: bool,
    /// Print the manifest to stdout.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub scheme: SchemeArgs,
    /// Base cell count.
    #[arg(long)]
    pub nx: Option<usize>,
    /// Base step count.
    #[arg(long)]
    pub nt: Option<usize>,
    /// Number of levels, each doubling Nx and Nt.
    #[arg(long, default_value_t = 4)]
    pub levels: usize,
    /// Comparison of successive levels when no exact solution is known.
    #[arg(long, value_enum, default_value = "restrict")]
    pub comparison: ComparisonArg,
    /// Run the levels one after another.
    #[arg(long)]
    pub sequential: bool,
    #[arg(long, default_value = "coagfrag-out")]
    pub out: PathBuf,
    /// Also write `convergence.json` and print JSON instead of CSV.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ExamplesArgs {
    #[arg(long)]
    pub json: bool,
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => cmd_run(&args),
        Command::Converge(args) => cmd_converge(&args),
        Command::Examples(args) => cmd_examples(&args, &mut io::stdout().lock()),
    }
}

fn load_source(source: &Source) -> Result<ExampleDef> {
    if let Some(name) = &source.example {
        return example_by_name(name).ok_or_else(|| {
            anyhow!(
                "unknown example `{name}`; valid names: {}",
                example_names().join(", ")
            )
        });
    }
    let path = source.problem.as_ref().expect("clap requires a source");
    ProblemFile::load(path)?.into_example()
}

fn create_out(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating output directory {}", dir.display()))
}

fn create_file(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    let path = dir.join(name);
    let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

pub fn cmd_run(args: &RunArgs) -> Result<()> {
    let mut ex = load_source(&args.source)?;
    if let Some(t) = args.t_final {
        ex.t_final = t;
    }
    let nx = args.nx.unwrap_or(ex.base_level.0);
    let variant = Variant::from(args.scheme.variant);
    let config = match (args.nt, args.dt) {
        (_, Some(dt)) => SchemeConfig::new(variant, dt, ex.t_final),
        (Some(nt), None) => SchemeConfig::with_steps(variant, nt, ex.t_final)?,
        (None, None) => SchemeConfig::with_steps(variant, ex.base_level.1, ex.t_final)?,
    };
    let storage = match args.storage {
        StorageArg::All => Storage::AllSteps,
        StorageArg::Final => Storage::FinalOnly,
    };
    let cfl_policy = match args.cfl_policy {
        Some(CflArg::Enforce) => CflPolicy::Enforce,
        Some(CflArg::Warn) => CflPolicy::Warn,
        None => ex.cfl_policy,
    };
    let config = config
        .time_order(TimeOrder::from_number(args.scheme.order)?)
        .limiter(args.scheme.limiter.into())
        .cfl_policy(cfl_policy)
        .storage(storage)
        .parallel(args.parallel);

    let grid = GridSpec::new(ex.x_max, nx)?;
    let mu0 = project_initial(&ex.initial, &grid)?;
    let kernels = DiscreteKernels::build(&ex.spec, &grid)?;
    let start = Instant::now();
    let trajectory = solve(&mu0, &ex.spec, &kernels, &config)?;
    let wall = start.elapsed().as_secs_f64();

    create_out(&args.out)?;
    let mut w = create_file(&args.out, "final_state.csv")?;
    write_state_csv(&mut w, trajectory.final_time(), trajectory.final_state())?;
    w.flush()?;
    if storage == Storage::AllSteps {
        let mut w = create_file(&args.out, "trajectory.csv")?;
        trajectory.write_csv(&mut w)?;
        w.flush()?;
    }

    let manifest = RunManifest::new(
        ex.name.clone(),
        &grid,
        &config,
        trajectory.diagnostics.clone(),
        wall,
        ex.notes.clone(),
    );
    let mut w = create_file(&args.out, "manifest.json")?;
    serde_json::to_writer_pretty(&mut w, &manifest)?;
    writeln!(w)?;
    w.flush()?;

    if args.json {
        println!("{}", serde_json::to_string_pretty(&manifest)?);
    } else {
        let d = &trajectory.diagnostics;
        println!(
            "{}: {} cells, {} steps of dt = {:e} (CFL bound {:e}{})",
            ex.name,
            nx,
            d.steps,
            d.dt,
            d.cfl_bound,
            if d.cfl_violated { ", exceeded" } else { "" }
        );
        println!("min mass {:e}, first-moment drift {:e}", d.min_mass, d.first_moment_drift);
        println!("wrote {}", args.out.display());
    }
    Ok(())
}

pub fn cmd_converge(args: &ConvergeArgs) -> Result<()> {
    let ex = load_source(&args.source)?;
    if args.levels == 0 {
        bail!("--levels must be at least 1");
    }
    let base = (
        args.nx.unwrap_or(ex.base_level.0),
        args.nt.unwrap_or(ex.base_level.1),
    );
    let levels = doubling_levels(base, args.levels);
    let opts = ConvergenceOptions {
        time_order: TimeOrder::from_number(args.scheme.order)?,
        limiter: args.scheme.limiter.into(),
        comparison: match args.comparison {
            ComparisonArg::Restrict => SelfComparison::Restrict,
            ComparisonArg::Direct => SelfComparison::Direct,
        },
        parallel_levels: !args.sequential,
    };
    let rows = run_convergence_with(&ex, args.scheme.variant.into(), &levels, &opts)?;

    create_out(&args.out)?;
    let mut w = create_file(&args.out, "convergence.csv")?;
    emit_table(&rows, TableFormat::Csv, &mut w)?;
    w.flush()?;
    let stdout = &mut io::stdout().lock();
    if args.json {
        let mut w = create_file(&args.out, "convergence.json")?;
        emit_table(&rows, TableFormat::Json, &mut w)?;
        w.flush()?;
        emit_table(&rows, TableFormat::Json, &mut *stdout)?;
    } else {
        emit_table(&rows, TableFormat::Csv, &mut *stdout)?;
    }
    Ok(())
}

pub fn cmd_examples<W: Write>(args: &ExamplesArgs, out: &mut W) -> Result<()> {
    let infos: Vec<_> = all_examples().iter().map(ExampleDef::info).collect();
    if args.json {
        serde_json::to_writer_pretty(&mut *out, &infos)?;
        writeln!(out)?;
        return Ok(());
    }
    for info in &infos {
        writeln!(
            out,
            "{:<10} {:<28} T = {:<4} x_max = {:<4} {}",
            info.name, info.reproduces, info.t_final, info.x_max, info.summary
        )?;
    }
    Ok(())
}
