use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hhmat::config::{BenchConfig, Mode, ReportFormat};
use hhmat::error::CliError;
use hhmat::verify::VerifyConfig;
use hypersparse::{CutSchedule, StreamConfig, ValueMode};

#[derive(Parser)]
#[command(
    name = "hhmat",
    about = "Streaming-insert benchmark and ingest tool for hierarchical hypersparse matrices",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the multi-worker streaming-insert benchmark and write a report.
    Bench(BenchArgs),
    /// Check the hierarchy against a flat oracle on a small stream.
    Verify(VerifyArgs),
    /// Stream a TSV edge-list file into a hierarchical matrix and summarize.
    Ingest(IngestArgs),
    /// Dump a generated stream as a TSV edge list.
    Gen(GenArgs),
}

#[derive(Args, Clone)]
struct StreamArgs {
    /// Bits per endpoint index; the matrix is 2^scale x 2^scale.
    #[arg(long, default_value_t = 32)]
    scale: u32,

    /// R-MAT quadrant probabilities a,b,c,d (must sum to 1).
    #[arg(long, default_value = "0.57,0.19,0.19,0.05")]
    skew: String,

    /// Triples per batch.
    #[arg(long = "batch-size", default_value_t = 100_000)]
    batch_size: u64,

    /// Number of batches in the stream.
    #[arg(long = "batches", default_value_t = 100)]
    batches: u64,

    /// Stream seed; the whole stream is a pure function of the config.
    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Triple values: "ones" (constant 1) or "random" (random +/-1).
    #[arg(long = "value-mode", default_value = "ones")]
    value_mode: String,
}

impl StreamArgs {
    fn to_config(&self) -> Result<StreamConfig, CliError> {
        let cfg = StreamConfig {
            scale: self.scale,
            skew: parse_skew(&self.skew)?,
            batch_size: self.batch_size,
            num_batches: self.batches,
            seed: self.seed,
            value_mode: parse_value_mode(&self.value_mode)?,
        };
        cfg.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    stream: StreamArgs,

    /// Concurrent workers, each with a private matrix and batch slice.
    #[arg(long, default_value_t = 1)]
    workers: usize,

    /// Untimed batches each worker ingests before measurement.
    #[arg(long, default_value_t = 10)]
    warmup: u64,

    /// Comma-separated cut schedule; empty string for a single flat layer.
    #[arg(long, default_value = "32768,524288,8388608")]
    cuts: String,

    /// "hierarchical" or "flat" (single-layer baseline).
    #[arg(long, default_value = "hierarchical")]
    mode: String,

    /// Pre-generate batches so timing covers insertion only; "false" fuses
    /// generation into the timed loop.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pregen: bool,

    /// Report file; the report is printed to stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,

    /// Report format: "json" or "csv".
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    stream: StreamArgs,

    /// Comma-separated cut schedule; empty string for a single flat layer.
    #[arg(long, default_value = "32768,524288,8388608")]
    cuts: String,
}

#[derive(Args)]
struct IngestArgs {
    /// TSV edge-list file: row<TAB>col<TAB>value per line, no header.
    path: PathBuf,

    /// Comma-separated cut schedule; empty string for a single flat layer.
    #[arg(long, default_value = "32768,524288,8388608")]
    cuts: String,

    /// Matrix row count.
    #[arg(long, default_value_t = 1 << 32)]
    rows: u64,

    /// Matrix column count.
    #[arg(long, default_value_t = 1 << 32)]
    cols: u64,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    stream: StreamArgs,

    /// Destination file; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn parse_skew(s: &str) -> Result<[f64; 4], CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(CliError::Config(format!(
            "--skew needs four comma-separated weights, got {s:?}"
        )));
    }
    let mut skew = [0.0; 4];
    for (slot, part) in skew.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("bad skew weight {part:?}")))?;
    }
    Ok(skew)
}

fn parse_cuts(s: &str) -> Result<CutSchedule, CliError> {
    let trimmed = s.trim();
    if trimmed.is_empty() {
        return Ok(CutSchedule::flat());
    }
    let mut cuts = Vec::new();
    for part in trimmed.split(',') {
        let cut: u64 = part
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("bad cut value {part:?}")))?;
        cuts.push(cut);
    }
    CutSchedule::new(cuts).map_err(|e| CliError::Config(e.to_string()))
}

fn parse_value_mode(s: &str) -> Result<ValueMode, CliError> {
    match s {
        "ones" => Ok(ValueMode::ConstantOne),
        "random" => Ok(ValueMode::UnitRandom),
        other => Err(CliError::Config(format!(
            "--value-mode must be \"ones\" or \"random\", got {other:?}"
        ))),
    }
}

fn parse_mode(s: &str) -> Result<Mode, CliError> {
    match s {
        "hierarchical" => Ok(Mode::Hierarchical),
        "flat" => Ok(Mode::FlatBaseline),
        other => Err(CliError::Config(format!(
            "--mode must be \"hierarchical\" or \"flat\", got {other:?}"
        ))),
    }
}

fn parse_format(s: &str) -> Result<ReportFormat, CliError> {
    match s {
        "json" => Ok(ReportFormat::Json),
        "csv" => Ok(ReportFormat::Csv),
        other => Err(CliError::Config(format!(
            "--format must be \"json\" or \"csv\", got {other:?}"
        ))),
    }
}

fn cmd_bench(args: &BenchArgs) -> Result<(), CliError> {
    let cfg = BenchConfig {
        workers: args.workers,
        stream: args.stream.to_config()?,
        cuts: parse_cuts(&args.cuts)?,
        mode: parse_mode(&args.mode)?,
        warmup_batches: args.warmup,
        pregen: args.pregen,
        output: args.output.clone(),
        format: parse_format(&args.format)?,
    };
    let outcome = hhmat::run_bench(&cfg)?;
    let report = &outcome.report;
    eprintln!(
        "{} worker(s), {} timed triples in {:.3} s: {} updates/s aggregate",
        report.workers.len(),
        hhmat::report::total_triples(&report.workers),
        report.wall_seconds,
        report.aggregate_updates_per_second
    );
    match &cfg.output {
        Some(path) => eprintln!("report written to {}", path.display()),
        None => println!("{}", report.render(cfg.format)),
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let cfg = VerifyConfig {
        stream: args.stream.to_config()?,
        cuts: parse_cuts(&args.cuts)?,
    };
    let summary = hhmat::run_verify(&cfg)?;
    println!(
        "verify PASS: {} triples in {} batches, flatten matches flat oracle ({} entries)",
        summary.triples, summary.batches, summary.nnz
    );
    println!("cascades per level: {:?}", summary.cascades_per_level);
    Ok(())
}

fn cmd_ingest(args: &IngestArgs) -> Result<(), CliError> {
    let summary = hhmat::run_ingest(&args.path, parse_cuts(&args.cuts)?, args.rows, args.cols)?;
    println!(
        "ingested {} triples in {:.3} s ({} updates/s)",
        summary.triples, summary.wall_seconds, summary.updates_per_second
    );
    println!("nnz: {}", summary.nnz);
    println!("value sum: {}", summary.value_sum);
    println!("cascades per level: {:?}", summary.cascades_per_level);
    println!("top row sums:");
    for (row, sum) in &summary.top_row_sums {
        println!("  {row}\t{sum}");
    }
    println!("top col sums:");
    for (col, sum) in &summary.top_col_sums {
        println!("  {col}\t{sum}");
    }
    Ok(())
}

fn cmd_gen(args: &GenArgs) -> Result<(), CliError> {
    let cfg = args.stream.to_config()?;
    let written = match &args.output {
        Some(path) => {
            let file = std::fs::File::create(path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            let mut out = BufWriter::new(file);
            let n = hhmat::write_stream_tsv(&cfg, &mut out)?;
            out.flush().map_err(|e| CliError::Io(e.to_string()))?;
            eprintln!("wrote {n} triples to {}", path.display());
            n
        }
        None => {
            let stdout = std::io::stdout();
            let mut out = BufWriter::new(stdout.lock());
            let n = hhmat::write_stream_tsv(&cfg, &mut out)?;
            out.flush().map_err(|e| CliError::Io(e.to_string()))?;
            n
        }
    };
    debug_assert_eq!(u128::from(written), cfg.total_triples());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Bench(args) => cmd_bench(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Ingest(args) => cmd_ingest(args),
        Command::Gen(args) => cmd_gen(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
