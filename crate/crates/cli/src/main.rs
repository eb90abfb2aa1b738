use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use batchkron_cli::{
    parse_sizes, run_bench, write_csv, write_table, BenchConfig, Dims, Format, Precision,
};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "batchkron",
    version,
    about = "Batched Kronecker product kernels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Time kron2/kron3 over square sizes and report GFlop/s.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Choice {
    Single,
    Double,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum DimsChoice {
    #[value(name = "2d")]
    Two,
    #[value(name = "3d")]
    Three,
    Both,
}

#[derive(clap::Args)]
struct BenchArgs {
    /// Sizes as `a..b` (inclusive) or a comma separated list.
    #[arg(long, default_value = "1..16")]
    sizes: String,
    #[arg(long, value_enum, default_value = "both")]
    precision: Choice,
    #[arg(long, value_enum, default_value = "both")]
    dims: DimsChoice,
    /// Batch entries; defaults to 100000 (single) and 50000 (double).
    #[arg(long)]
    batch: Option<usize>,
    #[arg(long, default_value_t = 10)]
    reps: usize,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    beta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run each kernel once and verify; skip warm-up and repetitions.
    #[arg(long)]
    verify_only: bool,
}

impl BenchArgs {
    fn config(self) -> Result<BenchConfig, batchkron_cli::BenchError> {
        let precisions = match self.precision {
            Choice::Single => vec![Precision::Single],
            Choice::Double => vec![Precision::Double],
            Choice::Both => Precision::ALL.to_vec(),
        };
        let dims = match self.dims {
            DimsChoice::Two => vec![Dims::Two],
            DimsChoice::Three => vec![Dims::Three],
            DimsChoice::Both => Dims::ALL.to_vec(),
        };
        Ok(BenchConfig {
            sizes: parse_sizes(&self.sizes)?,
            precisions,
            dims,
            batch: self.batch,
            reps: self.reps,
            alpha: self.alpha,
            beta: self.beta,
            seed: self.seed,
            format: self.format,
            out: self.out,
            verify_only: self.verify_only,
            memory_budget: None,
        })
    }
}

fn bench(args: BenchArgs) -> Result<(), batchkron_cli::BenchError> {
    let config = args.config()?;
    let report = run_bench(&config)?;
    for n in &report.notices {
        eprintln!("notice: {n}");
    }
    let mut sink: Box<dyn Write> = match &config.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    };
    match config.format {
        Format::Csv => write_csv(&mut sink, &report.records)?,
        Format::Table => write_table(&mut sink, &report.records)?,
    }
    sink.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let Command::Bench(args) = Cli::parse().command;
    match bench(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
