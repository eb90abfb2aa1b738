use batchkron::KronError;
use thiserror::Error;

use crate::config::{Dims, Precision};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("cannot allocate {bytes} bytes for the batch")]
    Allocation { bytes: u128 },
    #[error(transparent)]
    Kernel(#[from] KronError),
    #[error(
        "verification failed for size {size} {precision} {dims}: entry {entry}, \
         max abs error {max_abs:.3e}, max rel error {max_rel:.3e}, first failing index {index}"
    )]
    Verification {
        size: usize,
        precision: Precision,
        dims: Dims,
        entry: usize,
        max_abs: f64,
        max_rel: f64,
        index: usize,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
