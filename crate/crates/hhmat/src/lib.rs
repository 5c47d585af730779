//! Benchmark, verification, and ingest machinery behind the `hhmat` binary.
//!
//! The binary is a thin argument-parsing layer; everything it does is
//! callable from here, which is how the integration tests drive it.

pub mod config;
pub mod error;
pub mod ingest;
pub mod report;
pub mod runner;
pub mod verify;

pub use config::{physical_cores, BenchConfig, Mode, ReportFormat};
pub use error::CliError;
pub use ingest::{run_ingest, write_stream_tsv, IngestSummary};
pub use report::{aggregate_rate, emit_report, BenchReport, ConfigEcho, WorkerReport};
pub use runner::{run_bench, run_bench_keeping_matrices, BenchOutcome};
pub use verify::{run_verify, run_verify_with_hook, VerifyConfig, VerifySummary};
