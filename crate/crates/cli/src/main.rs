use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use fracfisher::observe::{
    compare_models, execute_run, format_table, run_oracle_suite, write_comparison,
};
use fracfisher::{Error, RunConfig};

const EXIT_CONFIG: u8 = 1;
const EXIT_SOLVER: u8 = 2;
const EXIT_VERIFY: u8 = 3;

/// Time-fractional Fisher–KPP simulations.
#[derive(Debug, Parser)]
#[command(name = "fracfisher", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one trajectory and write timeseries, snapshots and the resolved config.
    Run(RunArgs),
    /// Run both models on the same setup and report the half-capacity times.
    Compare(RunArgs),
    /// Run the built-in oracle checks.
    Verify,
    /// One run per fractional order, sharing the output directory.
    ///
    /// The orders come from `--alpha a1,a2,...`.
    Sweep(RunArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Configuration file; defaults when omitted.
    config: Option<PathBuf>,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Debug, Args, Default)]
struct Overrides {
    /// Fractional order in (0, 1]; a comma-separated list for `sweep`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    alpha: Vec<String>,
    /// consistent | caputo
    #[arg(long)]
    model: Option<String>,
    /// Number of time steps.
    #[arg(long = "N")]
    n: Option<String>,
    /// Cells per axis (sets nx and ny).
    #[arg(long)]
    nx: Option<String>,
    /// Temporal grading exponent (>= 1).
    #[arg(long)]
    gamma: Option<String>,
    /// circle | four_circles | blob | file | constant
    #[arg(long)]
    ic: Option<String>,
    /// neumann | dirichlet | dirichlet:<value>
    #[arg(long)]
    bc: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<String>,
}

impl Overrides {
    fn pairs(&self) -> Vec<(&'static str, String)> {
        let mut v = Vec::new();
        if let [a] = self.alpha.as_slice() {
            v.push(("physics.alpha", a.clone()));
        }
        for (k, x) in [
            ("physics.model", &self.model),
            ("time.N", &self.n),
            ("mesh.nx", &self.nx),
            ("mesh.ny", &self.nx),
            ("time.gamma", &self.gamma),
            ("ic.kind", &self.ic),
            ("output.directory", &self.out),
        ] {
            if let Some(x) = x {
                v.push((k, x.clone()));
            }
        }
        if let Some(bc) = &self.bc {
            match bc.split_once(':') {
                Some((kind, value)) => {
                    v.push(("physics.bc", kind.to_string()));
                    v.push(("physics.bc_value", value.to_string()));
                }
                None => v.push(("physics.bc", bc.clone())),
            }
        }
        v
    }
}

fn load(path: Option<&Path>, overrides: &[(&str, String)]) -> Result<RunConfig, Error> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Error::Io {
            path: p.to_path_buf(),
            source: e,
        })?,
        None => String::new(),
    };
    let pairs: Vec<(&str, &str)> = overrides.iter().map(|(k, v)| (*k, v.as_str())).collect();
    RunConfig::load_with_overrides(&text, &pairs)
}

fn exit_code(e: &Error) -> u8 {
    if e.is_solver_failure() {
        EXIT_SOLVER
    } else {
        EXIT_CONFIG
    }
}

fn run_one(config: &RunConfig) -> Result<(), Error> {
    let start = Instant::now();
    log::info!(
        "{}: {} model, alpha = {}, {}x{} cells, N = {}",
        config.run_name(),
        config.physics.model,
        config.physics.alpha,
        config.mesh.nx,
        config.mesh.ny,
        config.time.n
    );
    let traj = execute_run(config)?;
    let last = traj.rows.last().expect("at least u^0");
    println!(
        "{}: t = {} mass = {:.6} range [{:.4}, {:.4}] ({:.1} s) -> {}",
        config.run_name(),
        last.t,
        last.mass,
        last.min_u,
        last.max_u,
        start.elapsed().as_secs_f64(),
        config.run_dir().display()
    );
    Ok(())
}

fn compare(config: &RunConfig) -> Result<(), Error> {
    let cmp = compare_models(config)?;
    let name =
        config.output.name.clone().unwrap_or_else(|| {
            format!("compare_alpha{}_{}", config.physics.alpha, config.ic.kind())
        });
    let dir = config.output.directory.join(name);
    std::fs::create_dir_all(&dir).map_err(|e| Error::Io {
        path: dir.clone(),
        source: e,
    })?;
    write_comparison(&cmp, &dir.join("mass.csv"))?;
    print!("{}", cmp.summary());
    println!("mass curves -> {}", dir.join("mass.csv").display());
    Ok(())
}

fn single(args: &RunArgs) -> Result<RunConfig, Error> {
    if args.overrides.alpha.len() > 1 {
        return Err(Error::InvalidArgument(
            "several --alpha values need the sweep subcommand".into(),
        ));
    }
    load(args.config.as_deref(), &args.overrides.pairs())
}

fn sweep(args: &RunArgs) -> Result<(), Error> {
    if args.overrides.alpha.is_empty() {
        return Err(Error::InvalidArgument(
            "sweep needs --alpha a1,a2,...".into(),
        ));
    }
    // validate every order before the first run starts
    let mut configs = Vec::new();
    for alpha in &args.overrides.alpha {
        let mut pairs = args.overrides.pairs();
        pairs.retain(|(k, _)| *k != "physics.alpha");
        pairs.push(("physics.alpha", alpha.clone()));
        let mut c = load(args.config.as_deref(), &pairs)?;
        if let Some(name) = &c.output.name {
            c.output.name = Some(format!("{name}_alpha{}", c.physics.alpha));
        }
        configs.push(c);
    }
    for c in &configs {
        run_one(c)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(EXIT_CONFIG),
            };
        }
    };
    let result = match &cli.command {
        Command::Verify => {
            let checks = run_oracle_suite();
            print!("{}", format_table(&checks));
            return if checks.iter().all(|c| c.passed) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VERIFY)
            };
        }
        Command::Run(args) => single(args).and_then(|c| run_one(&c)),
        Command::Compare(args) => single(args).and_then(|c| compare(&c)),
        Command::Sweep(args) => sweep(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
