use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use edgewire::{csv, hubbard, lattice, protocol, Complex64, SpinAmplitudes, Teleporter, Variant, WireParams};

/// Dimerized-chain edge modes and edge-mode spin teleportation.
#[derive(Debug, Parser)]
#[command(name = "edgewire", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Analytic and numerical single-particle spectrum of the chain.
    Spectrum {
        #[command(flatten)]
        wire: WireArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Site densities of the mid-gap zero mode.
    Zeromode {
        #[command(flatten)]
        wire: WireArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Two-edge Hubbard ground state, printed as JSON.
    Hubbard {
        #[arg(long)]
        e2: f64,
        #[arg(long)]
        lambda: f64,
    },
    /// Seeded teleportation trials, written as a JSON report.
    Teleport {
        #[arg(long, value_enum)]
        variant: VariantArg,
        /// Amplitude of spin up, as RE,IM.
        #[arg(long, default_value = "1,0", value_parser = parse_complex, allow_hyphen_values = true)]
        g1: Complex64,
        /// Amplitude of spin down, as RE,IM.
        #[arg(long, default_value = "0,0", value_parser = parse_complex, allow_hyphen_values = true)]
        g2: Complex64,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, clap::Args)]
struct WireArgs {
    /// Number of sites (odd).
    #[arg(long)]
    sites: usize,
    #[arg(long)]
    t: f64,
    #[arg(long, allow_hyphen_values = true)]
    tprime: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VariantArg {
    Electronic,
    Coldatom,
    Mixed,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Electronic => Variant::Electronic,
            VariantArg::Coldatom => Variant::ColdAtom,
            VariantArg::Mixed => Variant::Mixed,
        }
    }
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = s.split_once(',').ok_or_else(|| format!("expected RE,IM, got '{s}'"))?;
    let part = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("'{p}': {e}"));
    Ok(Complex64::new(part(re)?, part(im)?))
}

enum Failure {
    Invalid(edgewire::Error),
    Io(PathBuf, io::Error),
}

impl From<edgewire::Error> for Failure {
    fn from(e: edgewire::Error) -> Self {
        Failure::Invalid(e)
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path).map(BufWriter::new).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn finish(path: &Path, result: io::Result<()>) -> Result<(), Failure> {
    result.map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn wire(args: &WireArgs) -> Result<WireParams, Failure> {
    Ok(WireParams::new(args.sites, args.t, args.tprime)?)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Spectrum { wire: args, out } => {
            let params = wire(&args)?;
            let analytic = lattice::analytic_spectrum(&params);
            let numeric = lattice::numerical_spectrum(&params);
            let mut f = create(&out)?;
            finish(&out, csv::write_spectrum(&mut f, &analytic, &numeric).and_then(|_| f.flush()))
        }
        Command::Zeromode { wire: args, out } => {
            let params = wire(&args)?;
            let mode = lattice::zero_mode(&params);
            if mode.delocalized {
                eprintln!("warning: t = t', the zero mode is spread over the whole chain");
            }
            let mut f = create(&out)?;
            finish(&out, csv::write_density(&mut f, &mode.level.density()).and_then(|_| f.flush()))
        }
        Command::Hubbard { e2, lambda } => {
            let params = hubbard::CouplingParams::new(e2, lambda)?;
            for w in params.warnings() {
                eprintln!("warning: {w}");
            }
            let report = hubbard::report(&params)?;
            println!("{}", serde_json::to_string_pretty(&report).expect("plain data serializes"));
            Ok(())
        }
        Command::Teleport { variant, g1, g2, trials, seed, out } => {
            let g = SpinAmplitudes::with_tolerance(g1, g2, 1e-6)?;
            let teleporter = Teleporter::new()?;
            let report = protocol::run_trials(&teleporter, &g, variant.into(), trials, seed)?;
            let mut f = create(&out)?;
            finish(&out, writeln!(f, "{}", report.to_json()).and_then(|_| f.flush()))?;
            println!(
                "trials={} min_fidelity={} mean_rounds={}",
                report.trials, report.min_fidelity, report.mean_rounds
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Io(path, e)) => {
            eprintln!("error: {}: {e}", path.display());
            ExitCode::FAILURE
        }
    }
}
