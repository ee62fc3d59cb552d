use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use rotovort_cli::config::{FormatCfg, GasCfg, RunConfig};
use rotovort_cli::output::Value;
use rotovort_cli::{commands, config, info, sweep, CliError};

/// Numerical laboratory for rapidly rotating dilute Bose gases on the flat
/// disc trap: Thomas-Fermi profiles, GP minimization, vortex censuses, trial
/// states and scaling regimes.
#[derive(Parser)]
#[command(name = "rotovort", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Base RNG seed (overrides the config).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads for sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    /// Output directory; results go to stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Output format (overrides the config).
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,

    /// Quick override of gas.epsilon.
    #[arg(long, global = true)]
    epsilon: Option<f64>,

    /// Quick override of gas.omega.
    #[arg(long, global = true)]
    omega: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Scattering length of the configured pair potential.
    Scatter,
    /// Closed-form 2D Thomas-Fermi profile on the unit disc.
    Tf2d,
    /// 3D Thomas-Fermi profile in an anharmonic trap.
    Tf3d,
    /// Scaling map and rotation regime of the 3D TF theory.
    Regime,
    /// Minimize the rotating GP functional and report the census.
    Gp,
    /// Vortex-lattice trial state energy.
    Lattice,
    /// Giant-vortex trial state energy.
    Giant,
    /// Crossover markers and subleading-energy prediction.
    Asympt,
    /// Critical-frequency estimates for a quadratic trap.
    Harmonic,
    /// Run an epsilon x omega sweep of a subcommand.
    Sweep,
    /// Run the invariant self-check battery.
    Check,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => config::parse_config(path)?,
        None => RunConfig::default(),
    };

    // flag overrides
    if let Some(eps) = cli.epsilon {
        let omega = cli.omega.or(cfg.gas.map(|g| g.omega)).unwrap_or(0.0);
        cfg.gas = Some(GasCfg { epsilon: eps, omega });
    } else if let Some(omega) = cli.omega {
        match &mut cfg.gas {
            Some(gas) => gas.omega = omega,
            None => {
                return Err(CliError::Config(vec![
                    "--omega given without --epsilon or a gas block".into(),
                ]))
            }
        }
    }
    if cfg.gas.map_or(false, |g| !(g.epsilon > 0.0) || g.omega < 0.0) {
        return Err(CliError::Config(vec![
            "gas parameters must satisfy epsilon > 0 and omega >= 0".into(),
        ]));
    }
    let seed = cli
        .seed
        .or(cfg.seed)
        .unwrap_or(42);
    let out_dir = cli.out.as_deref();
    let format = match cli.format {
        Some(FormatArg::Csv) => FormatCfg::Csv,
        Some(FormatArg::Json) => FormatCfg::Json,
        None => cfg.output.clone().unwrap_or_default().format,
    };

    info!("command starting (seed {seed})");

    let records = match &cli.command {
        Command::Scatter => commands::scatter(&cfg)?,
        Command::Tf2d => commands::tf2d(&cfg, out_dir)?,
        Command::Tf3d => commands::tf3d(&cfg, out_dir)?,
        Command::Regime => commands::regime(&cfg)?,
        Command::Gp => commands::gp(&cfg, seed, out_dir)?,
        Command::Lattice => commands::lattice(&cfg, out_dir)?,
        Command::Giant => commands::giant(&cfg)?,
        Command::Asympt => commands::asympt(&cfg)?,
        Command::Harmonic => commands::harmonic(&cfg)?,
        Command::Check => {
            let stdout = std::io::stdout();
            let ok = commands::check(&mut stdout.lock())?;
            return Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
        Command::Sweep => {
            let outcome = sweep::run_sweep(&cfg, seed, cli.jobs, out_dir)?;
            if out_dir.is_none() {
                let stdout = std::io::stdout();
                rotovort_cli::output::emit(
                    &mut stdout.lock(),
                    &outcome.records,
                    &outcome.columns,
                    format,
                )?;
            }
            return Ok(if outcome.clean {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            });
        }
    };

    let columns = records
        .first()
        .map(|r| r.columns())
        .unwrap_or_default();
    commands::emit_records(&records, &columns, format, out_dir)?;

    // single GP runs report solver non-convergence through the exit code
    let unconverged = records
        .iter()
        .any(|r| matches!(r.get("converged"), Some(Value::Bool(false))));
    Ok(if unconverged {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    })
}
