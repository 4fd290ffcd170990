use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use carlitz_core::algebra::{FieldDescriptor, Fq, PolyRing};
use carlitz_core::herbrand::{self, BcReport, ClassifyOptions, ClassifyReport, Format};
use carlitz_core::witt::{StructuralLift, DEFAULT_PRECISION};
use carlitz_core::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Overrides the worker thread count.
const THREADS_ENV: &str = "CARLITZ_THREADS";

#[derive(Parser)]
#[command(name = "carlitz", version, about = "Bernoulli-Carlitz numbers and irregular primes of F_q[t]")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the irregular primes of degree at most --max-degree.
    Scan {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        max_degree: usize,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Classify every eigenspace index for one prime.
    Classify {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        prime: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Print BC_n mod p for 0 <= n <= q^d - 2.
    Bc {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        prime: String,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct FieldArgs {
    /// Size of the constant field.
    #[arg(long)]
    q: u64,
    /// Modulus defining F_q over F_p, as a polynomial in x.
    #[arg(long)]
    fq_modulus: Option<String>,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    format: OutputFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// Starting Witt precision; raised automatically when an L-value saturates.
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    precision: u32,
    /// Cross-check against the local expansion at the prime.
    #[arg(long)]
    check_local: bool,
    /// Add per-prime timings to the output.
    #[arg(long)]
    timings: bool,
    /// Perturb the lifted modulus of the Witt ring by p times this value.
    #[arg(long, default_value_t = 0)]
    witt_lift_shift: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Table,
    Json,
    Csv,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Format {
        match f {
            OutputFormat::Table => Format::Table,
            OutputFormat::Json => Format::Json,
            OutputFormat::Csv => Format::Csv,
        }
    }
}

impl FieldArgs {
    fn field(&self) -> carlitz_core::Result<Fq> {
        match &self.fq_modulus {
            Some(m) => FieldDescriptor::with_modulus_text(self.q, m),
            None => FieldDescriptor::with_order(self.q),
        }
    }
}

impl RunArgs {
    fn options(&self) -> ClassifyOptions {
        let lift = match self.witt_lift_shift {
            0 => StructuralLift::Naive,
            s => StructuralLift::Shifted(s),
        };
        ClassifyOptions { precision: self.precision, check_local: self.check_local, timings: self.timings, lift }
    }
}

fn with_output(args: &OutputArgs, emit: impl FnOnce(&mut dyn Write) -> carlitz_core::Result<()>) -> carlitz_core::Result<()> {
    match &args.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            emit(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            emit(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> carlitz_core::Result<()> {
    match cli.command {
        Command::Scan { field, max_degree, run } => {
            let fq = field.field()?;
            let report = herbrand::scan(&fq, max_degree, &run.options())?;
            with_output(&run.output, |w| herbrand::emit_scan(&report, run.output.format.into(), w))
        }
        Command::Classify { field, prime, run } => {
            let fq = field.field()?;
            let ring = PolyRing::new(fq.clone());
            let report = herbrand::classify_prime(&ring, &ring.parse(&prime)?, &run.options())?;
            let report = ClassifyReport::new(&fq, report);
            with_output(&run.output, |w| herbrand::emit_classify(&report, run.output.format.into(), w))
        }
        Command::Bc { field, prime, output } => {
            let fq = field.field()?;
            let ring = PolyRing::new(fq);
            let report = BcReport::compute(&ring, &ring.parse(&prime)?)?;
            with_output(&output, |w| herbrand::emit_bc(&report, output.format.into(), w))
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer, got {value:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(1);
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Consistency(_) | Error::PrecisionCap(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
