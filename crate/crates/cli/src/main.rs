//! `mmwsim`: run spectrum-access campaigns, dump deployments, check configs.
//!
//! Precedence for every setting: command-line flag, then `MMWSIM_SEED`
//! (seed only), then the config file, then the built-in default.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 invalid configuration or usage.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mmwsim::config::ConfigError;
use mmwsim::montecarlo::Scene;
use mmwsim::output::{write_results, write_samples};
use mmwsim::{parse_scenario, run_campaign, AntennaCase, OutputFormat, Regime, ScenarioConfig};

#[derive(Debug, Parser)]
#[command(name = "mmwsim", version, about = "Multi-operator mmWave spectrum-access simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a campaign and write percentile statistics.
    Run(RunArgs),
    /// Write the geometry of one iteration as CSV.
    DumpDeployment(DumpArgs),
    /// Check a config file and report every violation.
    Validate(ConfigArgs),
}

#[derive(Debug, Args)]
struct ConfigArgs {
    /// Scenario file (`key = value` lines); defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    config: ConfigArgs,
    /// Output file; stdout when absent (`output.path`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv | json (`output.format`).
    #[arg(long)]
    format: Option<OutputFormat>,
    /// Campaign seed (`seed`).
    #[arg(long, env = "MMWSIM_SEED")]
    seed: Option<u64>,
    /// Iterations per grid cell (`iterations`).
    #[arg(long)]
    iterations: Option<usize>,
    /// BS per km² per operator, comma separated (`sweep.densities`).
    #[arg(long, value_delimiter = ',')]
    densities: Option<Vec<f64>>,
    /// hybrid | licensed | pooled, comma separated (`sweep.regimes`).
    #[arg(long, value_delimiter = ',')]
    regimes: Option<Vec<Regime>>,
    /// i | ii | custom, comma separated (`sweep.cases`).
    #[arg(long = "case", value_delimiter = ',')]
    cases: Option<Vec<AntennaCase>>,
    /// Worker threads, 0 = all CPUs (`jobs`).
    #[arg(long)]
    jobs: Option<usize>,
    /// Also write every per-iteration sample to this CSV (`output.dump_samples`).
    #[arg(long)]
    dump_samples: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DumpArgs {
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long, env = "MMWSIM_SEED")]
    seed: Option<u64>,
    /// BS per km² per operator (`bs_density`).
    #[arg(long)]
    density: Option<f64>,
    #[arg(long, default_value_t = 0)]
    iteration: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Invalid(String),
    Runtime(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Io { .. } => Failure::Runtime(e.to_string()),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

fn load(args: &ConfigArgs) -> Result<ScenarioConfig, Failure> {
    match &args.config {
        None => Ok(ScenarioConfig::default()),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Runtime(format!("cannot read {}: {e}", path.display())))?;
            Ok(parse_scenario(&text)?)
        }
    }
}

fn validated(config: ScenarioConfig) -> Result<ScenarioConfig, Failure> {
    config
        .validate()
        .map_err(|e| Failure::Invalid(format!("invalid configuration:\n{e}")))
}

fn apply_run_flags(mut c: ScenarioConfig, a: &RunArgs) -> ScenarioConfig {
    if let Some(v) = &a.out {
        c.output.path = Some(v.clone());
    }
    if let Some(v) = a.format {
        c.output.format = v;
    }
    if let Some(v) = a.seed {
        c.seed = v;
    }
    if let Some(v) = a.iterations {
        c.iterations = v;
    }
    if let Some(v) = &a.densities {
        c.sweep.densities = v.clone();
    }
    if let Some(v) = &a.regimes {
        c.sweep.regimes = v.clone();
    }
    if let Some(v) = &a.cases {
        c.sweep.cases = v.clone();
    }
    if let Some(v) = a.jobs {
        c.jobs = v;
    }
    if let Some(v) = &a.dump_samples {
        c.output.dump_samples = Some(v.clone());
    }
    c
}

fn run(args: RunArgs) -> Result<(), Failure> {
    let config = validated(apply_run_flags(load(&args.config)?, &args))?;
    let campaign = run_campaign(
        &config,
        &config.sweep.densities,
        &config.sweep.regimes,
        &config.sweep.cases,
        config.jobs,
    )
    .map_err(|e| Failure::Runtime(e.to_string()))?;

    match &config.output.path {
        Some(path) => write_results(&campaign.stats, config.output.format, path)
            .map_err(|e| Failure::Runtime(e.to_string()))?,
        None => {
            let text = mmwsim::output::render(&campaign.stats, config.output.format)
                .map_err(|e| Failure::Runtime(e.to_string()))?;
            print!("{text}");
        }
    }
    if let Some(path) = &config.output.dump_samples {
        write_samples(&campaign.samples, path).map_err(|e| Failure::Runtime(e.to_string()))?;
    }
    Ok(())
}

fn dump(args: DumpArgs) -> Result<(), Failure> {
    let mut config = load(&args.config)?;
    if let Some(s) = args.seed {
        config.seed = s;
    }
    if let Some(d) = args.density {
        config.bs_density = d;
    }
    let config = validated(config)?;
    let scene = Scene::build(&config, args.iteration);
    let result = match &args.out {
        Some(path) => std::fs::File::create(path)
            .and_then(|f| scene.deployment.write_csv(std::io::BufWriter::new(f)))
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => scene
            .deployment
            .write_csv(std::io::stdout().lock())
            .map_err(|e| e.to_string()),
    };
    result.map_err(Failure::Runtime)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(a) => run(a),
        Command::DumpDeployment(a) => dump(a),
        Command::Validate(a) => load(&a).and_then(validated).map(|_| {
            println!("ok");
        }),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
