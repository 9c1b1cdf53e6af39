use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use elastowave::cli::{cmd_limits, cmd_presets, cmd_sample, cmd_validate, parse_config, Format, RunConfig};
use elastowave::verify::check_names;
use elastowave::{Error, Result};

#[derive(Parser)]
#[command(name = "elastowave", version, about = "Elastodynamic fields of moving point and line forces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Run configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    /// Worker threads (falls back to ELASTOWAVE_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed of the randomized checks; overrides run.seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Sample u, β and v on the configured grid.
    Sample,
    /// Run the self-check suite; exits 1 if any check fails.
    Validate {
        /// Print the check names and exit.
        #[arg(long)]
        list: bool,
        /// Perturb the fields fed to the consistency checks.
        #[arg(long)]
        inject_corruption: bool,
    },
    /// Compare a resting source with the Stokes and Kelvin solutions.
    Limits,
    /// List trajectory and force presets.
    Presets,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

fn load(path: Option<&Path>) -> Result<RunConfig> {
    let path = path.ok_or_else(|| Error::Config(vec!["--config is required".into()]))?;
    parse_config(&std::fs::read_to_string(path)?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn threads(cli: &Cli) -> Result<Option<usize>> {
    if let Some(n) = cli.threads {
        return Ok(Some(n));
    }
    match std::env::var("ELASTOWAVE_THREADS") {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Config(vec![format!("ELASTOWAVE_THREADS must be an integer, got `{v}`")])),
        Err(_) => Ok(None),
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    if let Some(n) = threads(cli)? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(vec![e.to_string()]))?;
    }
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Sample => {
            let config = load(cli.config.as_deref())?;
            let grid = cmd_sample(&config)?;
            let format = match cli.format {
                Some(FormatArg::Csv) => Format::Csv,
                Some(FormatArg::Json) => Format::Json,
                None => config.format,
            };
            let text = match format {
                Format::Csv => grid.to_csv(),
                Format::Json => grid.to_json() + "\n",
            };
            emit(out.or(config.output.as_deref()), &text)?;
        }
        Command::Validate { list, inject_corruption } => {
            if *list {
                println!("{}", check_names().join("\n"));
                return Ok(ExitCode::SUCCESS);
            }
            let config = cli.config.as_deref().map(|p| load(Some(p))).transpose()?;
            let seed = cli.seed.or(config.as_ref().map(|c| c.seed)).unwrap_or(0);
            let (pass, reports) = cmd_validate(config.as_ref(), seed, *inject_corruption)?;
            for r in &reports {
                eprintln!(
                    "{} {:<34} max_rel_err={:.3e} tolerance={:.0e}",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.name,
                    r.max_rel_err,
                    r.tolerance
                );
            }
            let json = serde_json::to_string_pretty(&reports).expect("serializable report");
            emit(out, &(json + "\n"))?;
            if !pass {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Limits => {
            let config = load(cli.config.as_deref())?;
            let report = cmd_limits(&config)?;
            emit(out, &(serde_json::to_string_pretty(&report).expect("serializable report") + "\n"))?;
        }
        Command::Presets => print!("{}", cmd_presets()),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
