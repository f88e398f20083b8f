//! `lookout` — Monte Carlo see-and-be-seen encounter simulator.
//!
//! Subcommands: `generate` encounter sets, `project-areas` from meshes,
//! `simulate` one parameter cell, `sweep` the full grid, `analyze`
//! stored outcomes, and `chart` a report. Exit codes: 0 success,
//! 1 input error, 2 runtime error, 3 statistical-validity failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use lookout_core::acquisition::DovMode;
use lookout_core::chart::emit_charts;
use lookout_core::config::SimConfig;
use lookout_core::encounters::{AirframeClass, generate_set, read_set, write_set};
use lookout_core::error::Error;
use lookout_core::silhouette::{TriangleMesh, build_area_table};
use lookout_core::sweep::{
    CellKey, SweepOutput, SweepResult, analyze_outcomes, cell_grid, nominal_prepass,
    obtain_encounter_set, report_csv, run_sweep, simulate_cell, write_outcomes,
    write_sweep_output,
};

#[derive(Parser)]
#[command(name = "lookout", version, about = "See-and-be-seen visual acquisition and collision-risk simulator")]
struct Cli {
    /// Configuration file (TOML); flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Master seed override.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker thread count (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Output directory override.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    FixedWing,
    RotaryWing,
}

impl From<ClassArg> for AirframeClass {
    fn from(c: ClassArg) -> Self {
        match c {
            ClassArg::FixedWing => AirframeClass::FixedWing,
            ClassArg::RotaryWing => AirframeClass::RotaryWing,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DovArg {
    Uniform,
    Weighted,
    Stochastic,
}

impl From<DovArg> for DovMode {
    fn from(d: DovArg) -> Self {
        match d {
            DovArg::Uniform => DovMode::Uniform,
            DovArg::Weighted => DovMode::WeightedScaling,
            DovArg::Stochastic => DovMode::StochasticScan,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AvoidanceArg {
    On,
    Off,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an importance-sampled encounter set.
    Generate(GenerateArgs),
    /// Rasterize a triangle mesh into a projected-area table.
    ProjectAreas(ProjectAreasArgs),
    /// Simulate a single (β, visibility, DOV, class) cell.
    Simulate(SimulateArgs),
    /// Run the full factorial parameter sweep and emit reports + charts.
    Sweep,
    /// Recompute reports from stored outcome records.
    Analyze(AnalyzeArgs),
    /// Render charts from a stored report.
    Chart(ChartArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum, default_value = "fixed-wing")]
    class: ClassArg,
    /// Number of encounters (default: config `encounters_per_set`).
    #[arg(long)]
    count: Option<usize>,
    /// Output file (default: <output>/encounters_<class>.jsonl).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ProjectAreasArgs {
    /// Triangle mesh in OBJ-subset format (v/f lines), body frame, ft.
    #[arg(long)]
    mesh: PathBuf,
    #[arg(long, default_value_t = 15)]
    az_step: u32,
    #[arg(long, default_value_t = 15)]
    el_step: u32,
    /// Rasterization pixels across the silhouette bounding box.
    #[arg(long, default_value_t = 1024)]
    resolution: u32,
    #[arg(long)]
    airframe_id: Option<String>,
    /// Output CSV (a .meta.json sidecar is written next to it).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    /// Encounter-set file (default: generated per the config).
    #[arg(long)]
    encounters: Option<PathBuf>,
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    visibility_nmi: f64,
    #[arg(long, value_enum, default_value = "weighted")]
    dov: DovArg,
    #[arg(long, value_enum, default_value = "fixed-wing")]
    class: ClassArg,
    /// `off` forces pilots to never maneuver (nominal-equivalent run).
    #[arg(long, value_enum, default_value = "on")]
    avoidance: AvoidanceArg,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Directory of per-cell outcome files (*.jsonl).
    #[arg(long)]
    outcomes: PathBuf,
}

#[derive(Args)]
struct ChartArgs {
    /// Report JSON produced by `sweep` or `analyze`.
    #[arg(long)]
    report: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    if let Some(jobs) = cli.jobs
        && let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global()
    {
        eprintln!("error: could not configure {jobs} worker threads: {e}");
        return ExitCode::from(2);
    }

    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let code = e
                .downcast_ref::<Error>()
                .map(|err| err.exit_code())
                .unwrap_or(2);
            ExitCode::from(code as u8)
        }
    }
}

fn load_config(cli: &Cli) -> anyhow::Result<SimConfig> {
    let mut config = match &cli.config {
        Some(path) => SimConfig::from_toml_path(path)?,
        None => SimConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.master_seed = seed;
    }
    if let Some(output) = &cli.output {
        config.output_dir = output.clone();
    }
    config.validate()?;
    Ok(config)
}

fn run(cli: &Cli) -> anyhow::Result<ExitCode> {
    let config = load_config(cli)?;
    match &cli.command {
        Command::Generate(args) => generate(&config, args),
        Command::ProjectAreas(args) => project_areas(args),
        Command::Simulate(args) => simulate(&config, args),
        Command::Sweep => sweep(&config),
        Command::Analyze(args) => analyze(&config, args),
        Command::Chart(args) => chart(&config, args),
    }
}

fn generate(config: &SimConfig, args: &GenerateArgs) -> anyhow::Result<ExitCode> {
    let class: AirframeClass = args.class.into();
    let count = args.count.unwrap_or(config.encounters_per_set);
    let set = generate_set(&config.scheme, class, count, config.master_seed)?;
    let path = match &args.out {
        Some(p) => p.clone(),
        None => {
            std::fs::create_dir_all(&config.output_dir)?;
            config.output_dir.join(format!(
                "encounters_{}.jsonl",
                class.to_string().replace('-', "_")
            ))
        }
    };
    write_set(&path, &set)?;
    println!("wrote {count} {class} encounters to {}", path.display());
    Ok(ExitCode::SUCCESS)
}

fn project_areas(args: &ProjectAreasArgs) -> anyhow::Result<ExitCode> {
    let mesh = TriangleMesh::from_obj_file(&args.mesh)?;
    let airframe_id = args.airframe_id.clone().unwrap_or_else(|| {
        args.mesh
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "airframe".to_string())
    });
    let table = build_area_table(&mesh, &airframe_id, args.az_step, args.el_step, args.resolution)?;
    table.write_csv(&args.out)?;
    println!(
        "wrote {} ({} x {} grid) to {}",
        airframe_id,
        table.azimuth_grid_deg().len(),
        table.elevation_grid_deg().len(),
        args.out.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn simulate(config: &SimConfig, args: &SimulateArgs) -> anyhow::Result<ExitCode> {
    let mut config = config.clone();
    if matches!(args.avoidance, AvoidanceArg::Off) {
        config.avoidance = false;
    }
    let class: AirframeClass = args.class.into();
    let set = match &args.encounters {
        Some(path) => read_set(path)?,
        None => obtain_encounter_set(&config, class)?,
    };
    let nominal = nominal_prepass(&config, &set)?;
    let key = CellKey {
        airframe_class: class,
        dov_mode: args.dov.into(),
        beta: args.beta,
        visibility_nmi: args.visibility_nmi,
    };
    let outcomes = simulate_cell(&config, &set, &nominal, key)?;

    std::fs::create_dir_all(&config.output_dir)?;
    let outcome_path = config.output_dir.join(format!("{}.jsonl", key.slug()));
    write_outcomes(&outcome_path, &key, &outcomes)?;

    let bootstrap = lookout_core::metrics::BootstrapConfig {
        resamples: config.bootstrap_resamples,
        seed: config.master_seed,
    };
    match lookout_core::metrics::risk_ratio(&outcomes, &bootstrap) {
        Ok(report) => {
            println!(
                "{} β={} R={} nmi: total {:.4} (unresolved {:.4}, induced {:.4}) over {} encounters; outcomes in {}",
                key.slug(),
                args.beta,
                args.visibility_nmi,
                report.total,
                report.unresolved,
                report.induced,
                report.n_encounters,
                outcome_path.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Err(e @ Error::ZeroDenominator) => {
            eprintln!("error: {e}");
            Ok(ExitCode::from(3))
        }
        Err(e) => Err(e.into()),
    }
}

fn sweep(config: &SimConfig) -> anyhow::Result<ExitCode> {
    let cells = cell_grid(config).len();
    eprintln!(
        "sweep: {} cells x {} encounters per set (seed {})",
        cells, config.encounters_per_set, config.master_seed
    );
    let output: SweepOutput = run_sweep(config)?;
    let written = write_sweep_output(&output, &config.output_dir)?;
    let charts = emit_charts(&output.result, &config.output_dir.join("charts"))?;
    for path in written.iter().take(2).chain(charts.iter()) {
        eprintln!("  wrote {}", path.display());
    }
    print!("{}", report_csv(&output.result));

    let invalid = output.result.cells.iter().filter(|c| c.report.is_none()).count();
    if invalid > 0 {
        eprintln!("{invalid} cell(s) had zero weighted nominal NMACs");
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

fn analyze(config: &SimConfig, args: &AnalyzeArgs) -> anyhow::Result<ExitCode> {
    let result: SweepResult =
        analyze_outcomes(&args.outcomes, config.master_seed, config.bootstrap_resamples)?;
    std::fs::create_dir_all(&config.output_dir)?;
    let json_path = config.output_dir.join("report.json");
    std::fs::write(&json_path, serde_json::to_string_pretty(&result)?)?;
    let csv_path = config.output_dir.join("report.csv");
    std::fs::write(&csv_path, report_csv(&result))?;
    print!("{}", report_csv(&result));
    eprintln!("wrote {} and {}", csv_path.display(), json_path.display());
    let invalid = result.cells.iter().filter(|c| c.report.is_none()).count();
    if invalid > 0 {
        eprintln!("{invalid} cell(s) had zero weighted nominal NMACs");
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

fn chart(config: &SimConfig, args: &ChartArgs) -> anyhow::Result<ExitCode> {
    let text = std::fs::read_to_string(&args.report)?;
    let result: SweepResult = serde_json::from_str(&text)
        .map_err(|e| Error::input(format!("{}: {e}", args.report.display())))?;
    let files = emit_charts(&result, &config.output_dir.join("charts"))?;
    for f in &files {
        println!("wrote {}", f.display());
    }
    Ok(ExitCode::SUCCESS)
}
