//! `misp run | verify | gen`.
//!
//! Exit codes: 0 success, 1 failed verification or runtime error,
//! 2 malformed configuration, 3 resource limit.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use misp::harness::{generate_instance, monte_carlo, Family, SimulationReport};
use misp::Error;

mod config;

use config::{ConfigError, Experiment, ExperimentConfig, InstanceSource};

#[derive(Parser)]
#[command(name = "misp", version, about = "Secretary algorithms for matroid intersections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte Carlo experiment and write JSON and CSV reports.
    Run(RunArgs),
    /// Run the acceptance suite, or the listed criteria.
    Verify {
        criteria: Vec<usize>,
    },
    /// Write a generated instance.
    Gen {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when absent.
        #[arg(short = 'o', long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// JSON config file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Instance file.
    #[arg(long)]
    instance: Option<PathBuf>,
    #[arg(long)]
    algo: Option<String>,
    /// Sampling probability override.
    #[arg(short = 'p', long = "p")]
    p: Option<f64>,
    /// Column sparsity for sparse linear matroids.
    #[arg(long)]
    sparsity: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// uniform, decreasing, increasing, opt-last, opt-first, or a permutation like 2,0,1.
    #[arg(long)]
    order: Option<String>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    out_json: Option<PathBuf>,
    #[arg(long)]
    out_csv: Option<PathBuf>,
}

impl RunArgs {
    fn into_config(self) -> Result<ExperimentConfig, ConfigError> {
        let file = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        let flags = ExperimentConfig {
            instance: self.instance.map(InstanceSource::Path),
            algo: self.algo,
            p: self.p,
            sparsity: self.sparsity,
            trials: self.trials,
            seed: self.seed,
            order: self.order,
            threads: self.threads,
            out_json: self.out_json,
            out_csv: self.out_csv,
        };
        Ok(file.overlay(flags))
    }
}

enum Failure {
    Config(String),
    Run(Error),
    Verify(usize),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Run(Error::ResourceLimit(_)) => 3,
            // the algorithm cannot handle this instance as configured
            Failure::Run(Error::InvalidArgument(_) | Error::Parse(_)) => 2,
            Failure::Run(_) | Failure::Verify(_) => 1,
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.0)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

fn main() -> ExitCode {
    let result = match Cli::parse().command {
        Command::Run(args) => args.into_config().map_err(Failure::from).and_then(|c| run(c.resolve()?)),
        Command::Verify { criteria } => verify(&criteria),
        Command::Gen { family, size, seed, out } => gen(family, size, seed, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Config(msg) => eprintln!("misp: bad configuration: {msg}"),
                Failure::Run(e) => eprintln!("misp: {e}"),
                Failure::Verify(n) => eprintln!("misp: {n} criteria failed"),
            }
            ExitCode::from(failure.code())
        }
    }
}

fn run(exp: Experiment) -> Result<(), Failure> {
    let start = Instant::now();
    let simulate = || monte_carlo(&exp.instance, &exp.algorithm, &exp.order, exp.trials, exp.seed);
    let report = match exp.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Failure::Config(format!("thread pool: {e}")))?
            .install(simulate)?,
        None => simulate()?,
    };
    write_atomically(&exp.out_json, report.to_json()?.as_bytes())?;
    let mut csv = Vec::new();
    report.write_csv(&mut csv)?;
    write_atomically(&exp.out_csv, &csv)?;
    print!("{}", summary(&exp, &report));
    println!("report      {} {}", exp.out_json.display(), exp.out_csv.display());
    eprintln!("wall time   {:.2}s", start.elapsed().as_secs_f64());
    Ok(())
}

/// Writes through a sibling temporary file so a report is either the old
/// one or the complete new one.
fn write_atomically(path: &Path, bytes: &[u8]) -> Result<(), Error> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn summary(exp: &Experiment, report: &SimulationReport) -> String {
    let est = report.estimate();
    let mut out = String::new();
    let mut line = |k: &str, v: String| out.push_str(&format!("{k:<12}{v}\n"));
    line("instance", format!("{} (n = {}, k = {})", exp.stem, report.n, exp.instance.k()));
    line("algorithm", report.algorithm.kind.to_string());
    line("order", report.order.clone());
    line("trials", format!("{} (seed {})", report.trials, report.seed));
    line("OPT", format!("{:?} weight {}", report.opt, report.opt_value));
    line("mean ratio", format!("{:.4} ± {:.4}", est.mean, est.std_err));
    match (report.bound, report.margin()) {
        (Some(bound), Some(margin)) => {
            line("bound", format!("{bound:.6}"));
            let verdict = if margin >= 0.0 { "pass" } else { "FAIL" };
            line("margin", format!("{margin:+.4} {verdict}"));
        }
        _ => line("bound", "none".into()),
    }
    if let Some((e, f)) = report.weakest_guaranteed_element() {
        line("weakest", format!("e{e} selected {:.4} ± {:.4}", f.mean, f.std_err));
    }
    out
}

fn verify(only: &[usize]) -> Result<(), Failure> {
    if let Some(&id) = only.iter().find(|&&id| misp_verify::select(&[id]).is_empty()) {
        return Err(Failure::Config(format!("no criterion {id}")));
    }
    let verdicts = misp_verify::run(only, |v| println!("{v}"));
    let failed = verdicts.iter().filter(|v| !v.passed).count();
    println!("acceptance: {} passed, {failed} failed", verdicts.len() - failed);
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Verify(failed))
    }
}

fn gen(family: Family, size: usize, seed: u64, out: Option<&Path>) -> Result<(), Failure> {
    let text = generate_instance(family, size, seed)?.to_json()? + "\n";
    match out {
        Some(path) => write_atomically(path, text.as_bytes())?,
        None => std::io::stdout().write_all(text.as_bytes()).map_err(Error::from)?,
    }
    Ok(())
}
