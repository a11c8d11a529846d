use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pa_spectra::commands::{run, Command, Flags};
use pa_spectra::config::load_config;
use pa_spectra::coupling::PhotonFactor;
use pa_spectra::Error;

#[derive(Parser)]
#[command(name = "pa-spectra", version, about = "Photoassociation spectra of trapped atom pairs")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Lowest trap-bound s-wave states (energies and turning points).
    TrapLevels(Common),
    /// Near-threshold molecular levels with the calibrated inner boundary.
    MolecularLevels(Common),
    /// Franck-Condon factors between molecular and trap states.
    Fc(Common),
    /// Bound-bound and thermal free-bound spontaneous widths.
    Linewidths(Common),
    /// Trap energy and FC factor against the scattering length.
    Scan(Common),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Output directory; defaults to `output.dir` from the config.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    v_min: Option<i32>,
    #[arg(long, allow_hyphen_values = true)]
    v_max: Option<i32>,
    #[arg(long)]
    nt_max: Option<u32>,
    /// Scan start, nm.
    #[arg(long, allow_hyphen_values = true)]
    a_min: Option<f64>,
    /// Scan end, nm.
    #[arg(long, allow_hyphen_values = true)]
    a_max: Option<f64>,
    #[arg(long)]
    a_steps: Option<usize>,
    /// unity, cos_half or cos_full.
    #[arg(long)]
    factor: Option<PhotonFactor>,
}

impl Sub {
    fn split(self) -> (Command, Common) {
        match self {
            Sub::TrapLevels(c) => (Command::TrapLevels, c),
            Sub::MolecularLevels(c) => (Command::MolecularLevels, c),
            Sub::Fc(c) => (Command::Fc, c),
            Sub::Linewidths(c) => (Command::Linewidths, c),
            Sub::Scan(c) => (Command::Scan, c),
        }
    }
}

fn execute(cmd: Command, args: Common) -> Result<Vec<PathBuf>, Error> {
    if let Ok(n) = std::env::var("PA_SPECTRA_THREADS") {
        let n: usize = n
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("PA_SPECTRA_THREADS must be a positive integer, got '{n}'")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    }
    let flags = Flags {
        v_min: args.v_min,
        v_max: args.v_max,
        nt_max: args.nt_max,
        a_min_nm: args.a_min,
        a_max_nm: args.a_max,
        a_steps: args.a_steps,
        factor: args.factor,
    };
    let cfg = flags.apply(&load_config(&args.config)?)?;
    let report = run(cmd, &cfg)?;
    let dir = args.out.unwrap_or_else(|| cfg.output_dir.clone());
    report.write(&dir, &cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, args) = cli.command.split();
    match execute(cmd, args) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            eprintln!("error[{}]: {msg}", e.category());
            ExitCode::FAILURE
        }
    }
}
