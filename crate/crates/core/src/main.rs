use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};

use clap::{Parser, Subcommand};
use seepage_core::config::{parse_config_with, ConfigError, ScenarioConfig};
use seepage_core::driver::DriverError;
use seepage_core::output::{progress_line, run_to_dir, RunError};

#[derive(Parser)]
#[command(name = "seepage", version, about = "Fluid-structure-contact simulation with a porous wall layer")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one configuration.
    Simulate {
        config: PathBuf,
        /// Override a parameter, e.g. `--set porous.k=1e-4`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Print one line per accepted step.
        #[arg(long)]
        verbose: bool,
    },
    /// Run one child process per value of a parameter.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        param: String,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Number of simultaneous child processes.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Print the fully resolved configuration.
    Config {
        config: Option<PathBuf>,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
}

enum Failure {
    Config(String),
    Io(String),
    Mesh(String),
    Solver(String),
}

impl Failure {
    fn report(&self) -> ExitCode {
        let (category, code, msg) = match self {
            Failure::Config(m) => ("config", 2, m),
            Failure::Io(m) => ("io", 3, m),
            Failure::Mesh(m) => ("mesh", 4, m),
            Failure::Solver(m) => ("solver", 5, m),
        };
        eprintln!("error[{category}]: {msg}");
        ExitCode::from(code)
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<RunError> for Failure {
    fn from(e: RunError) -> Self {
        match e {
            RunError::Io(e) => Failure::Io(e.to_string()),
            RunError::Driver(DriverError::Mesh(e)) => Failure::Mesh(e.to_string()),
            RunError::Driver(e @ DriverError::Solver { .. }) => Failure::Solver(e.to_string()),
        }
    }
}

fn split_overrides(set: &[String]) -> Result<Vec<(String, String)>, Failure> {
    set.iter()
        .map(|s| {
            s.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.to_string()))
                .ok_or_else(|| Failure::Config(format!("override `{s}` must be KEY=VALUE")))
        })
        .collect()
}

fn load(path: Option<&Path>, set: &[String]) -> Result<ScenarioConfig, Failure> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?,
        None => String::new(),
    };
    Ok(parse_config_with(&text, &split_overrides(set)?)?)
}

fn simulate(config: &Path, set: &[String], out: &Path, verbose: bool) -> Result<(), Failure> {
    let cfg = load(Some(config), set)?;
    std::fs::create_dir_all(out).map_err(|e| Failure::Io(e.to_string()))?;
    std::fs::write(out.join("config.toml"), cfg.to_text()).map_err(|e| Failure::Io(e.to_string()))?;
    let mut stdout = std::io::stdout();
    let summary = run_to_dir(&cfg, out, |_, report| {
        if verbose {
            let _ = progress_line(&mut stdout, &report.record);
        }
    })?;
    println!("{} steps written to {}", summary.log.len() - 1, summary.csv.display());
    Ok(())
}

fn sanitize(s: &str) -> String {
    s.chars().map(|c| if c.is_ascii_alphanumeric() || "._-".contains(c) { c } else { '_' }).collect()
}

fn sweep(config: &Path, param: &str, values: &[String], set: &[String], out: &Path, jobs: usize) -> Result<(), Failure> {
    // fail early on a bad configuration or parameter
    for v in values {
        let mut all = set.to_vec();
        all.push(format!("{param}={v}"));
        load(Some(config), &all)?;
    }
    let exe = std::env::current_exe().map_err(|e| Failure::Io(e.to_string()))?;
    let mut failed = Vec::new();
    for chunk in values.chunks(jobs.max(1)) {
        let mut children = Vec::new();
        for v in chunk {
            let dir = out.join(format!("{}={}", sanitize(param), sanitize(v)));
            let mut cmd = Command::new(&exe);
            cmd.arg("simulate").arg(config).arg("--out").arg(&dir);
            for s in set {
                cmd.arg("--set").arg(s);
            }
            cmd.arg("--set").arg(format!("{param}={v}"));
            let child = cmd.spawn().map_err(|e| Failure::Io(e.to_string()))?;
            children.push((v.clone(), child));
        }
        for (v, mut child) in children {
            let status = child.wait().map_err(|e| Failure::Io(e.to_string()))?;
            if !status.success() {
                failed.push(format!("{param}={v} (exit {})", status.code().unwrap_or(-1)));
            }
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Solver(format!("sweep runs failed: {}", failed.join(", "))))
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Cmd::Simulate { config, set, out, verbose } => simulate(config, set, out, *verbose),
        Cmd::Sweep { config, param, values, set, out, jobs } => sweep(config, param, values, set, out, *jobs),
        Cmd::Config { config, set } => load(config.as_deref(), set).map(|c| print!("{}", c.to_text())),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.report(),
    }
}
