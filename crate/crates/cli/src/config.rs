use std::fmt;
use std::path::PathBuf;

use clap::ValueEnum;

use crate::error::BenchError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, ValueEnum)]
pub enum Precision {
    Single,
    Double,
}

impl Precision {
    pub const ALL: [Precision; 2] = [Precision::Single, Precision::Double];

    pub fn name(self) -> &'static str {
        match self {
            Precision::Single => "single",
            Precision::Double => "double",
        }
    }

    pub fn bytes(self) -> usize {
        match self {
            Precision::Single => 4,
            Precision::Double => 8,
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, ValueEnum)]
pub enum Dims {
    #[value(name = "2d")]
    Two,
    #[value(name = "3d")]
    Three,
}

impl Dims {
    pub const ALL: [Dims; 2] = [Dims::Two, Dims::Three];

    pub fn name(self) -> &'static str {
        match self {
            Dims::Two => "2d",
            Dims::Three => "3d",
        }
    }

    pub fn rank(self) -> u32 {
        match self {
            Dims::Two => 2,
            Dims::Three => 3,
        }
    }
}

impl fmt::Display for Dims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Csv,
}

/// Default batch size per precision: 100,000 single, 50,000 double.
pub fn default_batch(precision: Precision) -> usize {
    match precision {
        Precision::Single => 100_000,
        Precision::Double => 50_000,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub precisions: Vec<Precision>,
    pub dims: Vec<Dims>,
    /// `None` selects [`default_batch`] per precision.
    pub batch: Option<usize>,
    pub reps: usize,
    pub alpha: f64,
    pub beta: f64,
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
    /// Run each kernel once and verify it; no warm-up, no repetitions.
    pub verify_only: bool,
    /// Upper bound on batch memory in bytes. `None` reads the available
    /// system memory where possible.
    pub memory_budget: Option<u64>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: (1..=16).collect(),
            precisions: Precision::ALL.to_vec(),
            dims: Dims::ALL.to_vec(),
            batch: None,
            reps: 10,
            alpha: 1.0,
            beta: 0.0,
            seed: 0,
            format: Format::Table,
            out: None,
            verify_only: false,
            memory_budget: None,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |m: &str| Err(BenchError::Config(m.to_owned()));
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return bad("sizes must be non-empty and >= 1");
        }
        if self.precisions.is_empty() || self.dims.is_empty() {
            return bad("at least one precision and one dimension are required");
        }
        if self.batch == Some(0) {
            return bad("batch must be >= 1");
        }
        if self.reps == 0 {
            return bad("reps must be >= 1");
        }
        if !self.alpha.is_finite() || !self.beta.is_finite() {
            return bad("alpha and beta must be finite");
        }
        Ok(())
    }

    pub fn batch_for(&self, precision: Precision) -> usize {
        self.batch.unwrap_or_else(|| default_batch(precision))
    }
}

/// Parses `a..b` (inclusive), a comma separated list, or a single size.
pub fn parse_sizes(s: &str) -> Result<Vec<usize>, BenchError> {
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| BenchError::Config(format!("bad size `{}`", t.trim())))
    };
    let sizes = if let Some((lo, hi)) = s.split_once("..") {
        let (lo, hi) = (num(lo)?, num(hi.trim_start_matches('='))?);
        if lo > hi {
            return Err(BenchError::Config(format!("empty size range `{s}`")));
        }
        (lo..=hi).collect()
    } else {
        s.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(BenchError::Config("sizes must be >= 1".into()));
    }
    Ok(sizes)
}
