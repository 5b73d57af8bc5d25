use std::io::{ErrorKind, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use mhd_core::scenarios::{self, ExperimentConfig, ScenarioName};

mod plot;

#[derive(Parser)]
#[command(
    name = "mhd",
    version,
    about = "Quasi-homogeneous ideal MHD experiments on the 2-D torus"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one preset and write diagnostics.
    Simulate(RunArgs),
    /// Compare the primitive, Elsässer and vorticity paths.
    Equivalence(RunArgs),
    /// Observed growth time against lifespan bounds over a list of ε.
    Sweep(RunArgs),
    /// Closed-form residuals of the uniform-flow examples.
    Counterexamples(RunArgs),
    /// Convergence of the linear iteration scheme.
    Iterate(RunArgs),
    /// Bernstein, transport and commutator probes.
    Probes(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML experiment file; optional for `counterexamples`.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory, overriding `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for `random-band` data and the probes, overriding the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Also write SVG plots of a simulation.
    #[arg(long)]
    plots: bool,
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("MHD_THREADS") {
        let n: usize = v
            .parse()
            .with_context(|| format!("MHD_THREADS={v} is not a thread count"))?;
        if n == 0 {
            bail!("MHD_THREADS must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    Ok(())
}

fn load(scenario: ScenarioName, args: &RunArgs) -> Result<ExperimentConfig> {
    let mut cfg = match &args.config {
        Some(path) => {
            let cfg = ExperimentConfig::from_path(path)
                .with_context(|| format!("reading {}", path.display()))?;
            if cfg.scenario != scenario {
                bail!(
                    "{} describes scenario `{}`, not `{}`",
                    path.display(),
                    cfg.scenario,
                    scenario
                );
            }
            cfg
        }
        None if scenario == ScenarioName::Counterexamples => ExperimentConfig::new(scenario),
        None => bail!("`{scenario}` needs --config <path>"),
    };
    if let Some(dir) = &args.out {
        cfg.output.dir = Some(dir.clone());
    }
    if let Some(seed) = args.seed {
        cfg.preset.seed = seed;
        cfg.probes.seed = seed;
    }
    cfg.output.plots |= args.plots;
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    configure_threads()?;
    let (scenario, args) = match &cli.command {
        Command::Simulate(a) => (ScenarioName::Simulate, a),
        Command::Equivalence(a) => (ScenarioName::Equivalence, a),
        Command::Sweep(a) => (ScenarioName::Sweep, a),
        Command::Counterexamples(a) => (ScenarioName::Counterexamples, a),
        Command::Iterate(a) => (ScenarioName::Iterate, a),
        Command::Probes(a) => (ScenarioName::Probes, a),
    };
    let cfg = load(scenario, args)?;
    let summary = if scenario == ScenarioName::Simulate {
        let out = scenarios::run_simulate(&cfg)?;
        if cfg.output.plots {
            match &cfg.output.dir {
                Some(dir) => plot::write_plots(dir, &out.record)?,
                None => eprintln!("--plots ignored: no output directory"),
            }
        }
        serde_json::to_value(&out.report)?
    } else {
        scenarios::run(&cfg)?
    };
    let text = serde_json::to_string_pretty(&summary)?;
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}
