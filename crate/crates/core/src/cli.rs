//! Command-line front end: one subcommand per experiment plus `accept`.
//!
//! Exit codes: 0 success, 1 failed acceptance criteria, 2 configuration
//! errors, 3 numerical errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{preset, ConfigError, ExperimentConfig, LoadedConfig};
use crate::experiments::suite::acceptance;
use crate::experiments::{run, Lab, LabError, Report};
use crate::parallel::with_threads;

#[derive(Debug, Parser)]
#[command(name = "kleinlab", version, about = "Experiments on Schottky groups and their conformal measures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Configuration file, or the name of a bundled preset.
    #[arg(long, default_value = "octahedral")]
    pub config: String,
    /// Seed for every random draw; required by sampling subcommands.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Directory receiving the JSON summary and CSV files.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (0 = one per core).
    #[arg(long, env = "KLEINLAB_THREADS", default_value_t = 0)]
    pub threads: usize,
    /// What to print on standard output.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Critical exponent by two estimators.
    EstimateDelta(Common),
    /// Patterson–Sullivan measure and its conformality residuals.
    PsBuild(Common),
    /// Local mass-scaling exponent of ν.
    Shadow(Common),
    /// Eigenfunction check of φ̃₀.
    Phi0Check(Common),
    /// Conditional leaf measures against μ^PS.
    Conditional(Common),
    /// Recurrence of unipotent orbits to a box.
    Flow(Common),
    /// Window statistic of unipotent orbits.
    Window(Common),
    /// Hopf ratio sequences.
    Hopf(Common),
    /// Projections of ν.
    Project(Common),
    /// Riesz energies of ν.
    Energy(Common),
    /// Box-counting dimension of the limit set.
    Boxdim(Common),
    /// BR correlations under the frame flow.
    Mixing(Common),
    /// Escape of unipotent orbits for Fuchsian groups.
    Escape(Common),
    /// The full acceptance suite.
    Accept {
        /// Run only these criteria (comma separated ids).
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
        #[arg(long, env = "KLEINLAB_THREADS", default_value_t = 0)]
        threads: usize,
        /// Write the criteria as JSON to this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

impl Command {
    fn split(&self) -> Option<(&'static str, &Common)> {
        Some(match self {
            Command::EstimateDelta(c) => ("estimate-delta", c),
            Command::PsBuild(c) => ("ps-build", c),
            Command::Shadow(c) => ("shadow", c),
            Command::Phi0Check(c) => ("phi0-check", c),
            Command::Conditional(c) => ("conditional", c),
            Command::Flow(c) => ("flow", c),
            Command::Window(c) => ("window", c),
            Command::Hopf(c) => ("hopf", c),
            Command::Project(c) => ("project", c),
            Command::Energy(c) => ("energy", c),
            Command::Boxdim(c) => ("boxdim", c),
            Command::Mixing(c) => ("mixing", c),
            Command::Escape(c) => ("escape", c),
            Command::Accept { .. } => return None,
        })
    }
}

/// Subcommands that draw random samples and so need an explicit seed.
pub const SAMPLING: &[&str] = &["shadow", "phi0-check", "flow", "window", "hopf", "boxdim", "mixing", "escape"];

/// Reads a configuration from a path or a preset name.
pub fn load_config(spec: &str) -> Result<LoadedConfig, ConfigError> {
    let path = Path::new(spec);
    if path.exists() {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Parse(format!("{spec}: {e}")))?;
        return ExperimentConfig::parse(&text);
    }
    match preset(spec) {
        Some(text) => ExperimentConfig::parse(text),
        None => Err(ConfigError::Parse(format!("{spec}: no such file or preset"))),
    }
}

fn write_outputs(dir: &Path, report: &Report) -> Result<(), std::io::Error> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(format!("{}.json", report.name)), report.summary_json())?;
    for a in &report.artifacts {
        std::fs::write(dir.join(&a.file), &a.bytes)?;
    }
    Ok(())
}

fn experiment(name: &str, common: &Common, stdout: &mut dyn Write) -> Result<(), LabError> {
    let mut loaded = load_config(&common.config)?;
    if common.seed.is_none() && SAMPLING.contains(&name) {
        return Err(ConfigError::Field { field: "seed", msg: format!("`{name}` samples at random; pass --seed").into() }.into());
    }
    if let Some(out) = &common.out {
        loaded.config.out = Some(out.display().to_string());
    }
    let lab = Lab::new(loaded, common.seed)?;
    let report = with_threads(common.threads, || run(name, &lab))?;
    if let Some(dir) = &lab.config.out {
        write_outputs(Path::new(dir), &report).map_err(crate::io::IoError::from)?;
    }
    match common.format {
        Format::Json => stdout.write_all(report.summary_json().as_bytes()),
        Format::Csv => match report.artifacts.first() {
            Some(a) => stdout.write_all(&a.bytes),
            None => stdout.write_all(report.summary_json().as_bytes()),
        },
    }
    .map_err(crate::io::IoError::from)?;
    Ok(())
}

fn exit_code(e: &LabError, stderr: &mut dyn Write) -> i32 {
    match e {
        LabError::Config(c) => {
            let _ = writeln!(stderr, "configuration error: {c}");
            2
        }
        other => {
            let _ = writeln!(stderr, "numerical error ({}): {other}", other.kind());
            3
        }
    }
}

/// Runs the parsed command and returns the process exit code.
pub fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    if let Some((name, common)) = cli.command.split() {
        return match experiment(name, common, stdout) {
            Ok(()) => 0,
            Err(e) => exit_code(&e, stderr),
        };
    }
    let Command::Accept { only, threads, out } = &cli.command else { unreachable!() };
    let criteria = match with_threads(*threads, || acceptance(only)) {
        Ok(c) => c,
        Err(e) => return exit_code(&e, stderr),
    };
    for c in &criteria {
        let _ = writeln!(stdout, "{}", c.line());
        let _ = writeln!(stderr, "criterion {} took {:.1} s", c.id, c.seconds);
    }
    if let Some(dir) = out {
        let json = serde_json::to_string_pretty(&criteria).expect("criteria serialise") + "\n";
        if let Err(e) = std::fs::create_dir_all(dir).and_then(|_| std::fs::write(dir.join("acceptance.json"), json)) {
            let _ = writeln!(stderr, "numerical error (IoError): {e}");
            return 3;
        }
    }
    let failed: Vec<String> = criteria.iter().filter(|c| !c.pass).map(|c| c.id.to_string()).collect();
    if failed.is_empty() {
        0
    } else {
        let _ = writeln!(stderr, "failed criteria: {}", failed.join(", "));
        1
    }
}

/// Parses `args` and runs; clap usage errors exit with code 2.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli, stdout, stderr),
        Err(e) if e.use_stderr() => {
            let _ = write!(stderr, "{e}");
            2
        }
        Err(e) => {
            let _ = write!(stdout, "{e}");
            0
        }
    }
}
