//! Benchmark and verification harness for the `batchkron` kernels.
//!
//! Generates seeded batches, times `kron2` / `kron3`, converts the median
//! time into GFlop/s and checks a sample of entries against the oracle.

pub mod baseline;
pub mod config;
pub mod error;
pub mod generate;
pub mod report;
pub mod run;

pub use config::{default_batch, parse_sizes, BenchConfig, Dims, Format, Precision};
pub use error::BenchError;
pub use generate::{generate_batch, Generated};
pub use report::{format_g, write_csv, write_table};
pub use run::{flops_kron, plan_batch, run_bench, BenchRecord, Report};
