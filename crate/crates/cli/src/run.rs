use std::time::Instant;

use batchkron::oracle::{expected_kron2, expected_kron3, Discrepancy};
use batchkron::{
    kron2, kron3, kron3_workspace_size, Array3Layout, Array3View, BatchView, BatchViewMut, Element,
    KronError, KronProblem2D, KronProblem3D, MatrixLayout, MatrixView, Workspace,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{BenchConfig, Dims, Precision};
use crate::error::BenchError;
use crate::generate::{generate_batch, Generated};

/// Entries checked against the oracle per benchmark point.
pub const VERIFY_SAMPLE: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub size: usize,
    pub precision: Precision,
    pub dims: Dims,
    pub batch: usize,
    /// Median wall time of one kernel call.
    pub seconds: f64,
    pub gflops: f64,
    pub verified: bool,
}

impl BenchRecord {
    pub fn flops_per_entry(&self) -> u64 {
        flops_kron(self.size, self.dims)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub records: Vec<BenchRecord>,
    /// Human readable notes, e.g. batches shrunk to fit in memory.
    pub notices: Vec<String>,
}

/// Flops per batch entry for real square size-`m` operands: `4m^3` in 2-D,
/// `6m^4` in 3-D.
pub fn flops_kron(m: usize, dims: Dims) -> u64 {
    let m = m as u64;
    match dims {
        Dims::Two => 4 * m.pow(3),
        Dims::Three => 6 * m.pow(4),
    }
}

pub fn gflops(flops_per_entry: u64, batch: usize, seconds: f64) -> f64 {
    flops_per_entry as f64 * batch as f64 / (seconds * 1e9)
}

/// Halves `requested` until `count * bytes_per_entry` fits in `budget`.
pub fn plan_batch(
    requested: usize,
    bytes_per_entry: u128,
    budget: Option<u64>,
) -> (usize, Option<String>) {
    let Some(budget) = budget else {
        return (requested, None);
    };
    let mut count = requested;
    while count > 1 && count as u128 * bytes_per_entry > budget as u128 {
        count /= 2;
    }
    let notice = (count != requested).then(|| {
        format!(
            "batch reduced from {requested} to {count} to fit a memory budget of {budget} bytes"
        )
    });
    (count, notice)
}

/// `MemAvailable` from `/proc/meminfo`, in bytes.
fn available_memory() -> Option<u64> {
    let info = std::fs::read_to_string("/proc/meminfo").ok()?;
    let line = info.lines().find(|l| l.starts_with("MemAvailable:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}

fn median(times: &mut [f64]) -> f64 {
    times.sort_by(f64::total_cmp);
    let n = times.len();
    if n % 2 == 1 {
        times[n / 2]
    } else {
        0.5 * (times[n / 2 - 1] + times[n / 2])
    }
}

/// Runs every (size, precision, dims) combination in ascending size order,
/// single before double and 2-D before 3-D.
pub fn run_bench(config: &BenchConfig) -> Result<Report, BenchError> {
    config.validate()?;
    let mut sizes = config.sizes.clone();
    sizes.sort_unstable();
    sizes.dedup();
    let mut precisions = config.precisions.clone();
    precisions.sort_unstable();
    precisions.dedup();
    let mut dims = config.dims.clone();
    dims.sort_unstable();
    dims.dedup();
    let budget = config
        .memory_budget
        .or_else(|| available_memory().map(|b| b / 2));

    let mut report = Report::default();
    for &size in &sizes {
        for &precision in &precisions {
            for &d in &dims {
                let point = Point {
                    size,
                    precision,
                    dims: d,
                    budget,
                };
                let record = match precision {
                    Precision::Single => point.run::<f32>(config, &mut report.notices)?,
                    Precision::Double => point.run::<f64>(config, &mut report.notices)?,
                };
                report.records.push(record);
            }
        }
    }
    Ok(report)
}

struct Point {
    size: usize,
    precision: Precision,
    dims: Dims,
    budget: Option<u64>,
}

impl Point {
    fn seed(&self, base: u64) -> u64 {
        base ^ ((self.size as u64) << 8 | (self.precision as u64) << 4 | self.dims as u64)
    }

    fn work_len(&self, count: usize) -> Result<usize, KronError> {
        match self.dims {
            Dims::Two => Ok(0),
            Dims::Three => kron3_workspace_size(&KronProblem3D::<f64>::square(self.size), count),
        }
    }

    fn allocate<T: Element>(
        &self,
        seed: u64,
        requested: usize,
        notices: &mut Vec<String>,
    ) -> Result<(Generated<T>, Vec<T>), BenchError> {
        let m = self.size as u128;
        let entry = match self.dims {
            Dims::Two => 2 * m * m,
            Dims::Three => 3 * m * m * m,
        };
        let (mut count, notice) = plan_batch(
            requested,
            entry * std::mem::size_of::<T>() as u128,
            self.budget,
        );
        notices.extend(notice.map(|n| self.note(&n)));
        loop {
            let attempt = generate_batch::<T>(seed, self.size, self.dims, count).and_then(|g| {
                let len = self.work_len(count)?;
                let mut work = Vec::new();
                work.try_reserve_exact(len)
                    .map_err(|_| BenchError::Allocation {
                        bytes: len as u128 * std::mem::size_of::<T>() as u128,
                    })?;
                work.resize(len, T::ZERO);
                Ok((g, work))
            });
            match attempt {
                Err(BenchError::Allocation { bytes }) if count > 1 => {
                    notices.push(self.note(&format!(
                        "allocation of {bytes} bytes failed; batch reduced from {count} to {}",
                        count / 2
                    )));
                    count /= 2;
                }
                other => return other,
            }
        }
    }

    fn note(&self, msg: &str) -> String {
        format!("size {} {} {}: {msg}", self.size, self.precision, self.dims)
    }

    fn run<T: Element>(
        &self,
        config: &BenchConfig,
        notices: &mut Vec<String>,
    ) -> Result<BenchRecord, BenchError> {
        let seed = self.seed(config.seed);
        let (mut g, mut work) =
            self.allocate::<T>(seed, config.batch_for(self.precision), notices)?;
        let alpha = T::from_f64(config.alpha);
        let beta = T::from_f64(config.beta);
        let mut y = std::mem::take(&mut g.y);
        let e = g.entry_len();

        let picks: Vec<usize> = if g.count <= VERIFY_SAMPLE {
            (0..g.count).collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
            let mut v = rand::seq::index::sample(&mut rng, g.count, VERIFY_SAMPLE).into_vec();
            v.sort_unstable();
            v
        };
        let prior: Vec<Vec<T>> = picks
            .iter()
            .map(|&p| y[p * e..(p + 1) * e].to_vec())
            .collect();

        let mut timed = || -> Result<f64, BenchError> {
            let t = Instant::now();
            apply(&g, &mut y, &mut work, alpha, beta)?;
            Ok(t.elapsed().as_secs_f64())
        };
        let mut times = if config.verify_only {
            vec![timed()?]
        } else {
            timed()?;
            (0..config.reps)
                .map(|_| timed())
                .collect::<Result<Vec<_>, _>>()?
        };
        let seconds = median(&mut times);

        // Repeated calls with beta != 0 accumulate; reset the sampled
        // entries and apply once more so their prior values are known.
        for (&p, y0) in picks.iter().zip(&prior) {
            y[p * e..(p + 1) * e].copy_from_slice(y0);
        }
        apply(&g, &mut y, &mut work, alpha, beta)?;
        for (&p, y0) in picks.iter().zip(&prior) {
            let d = check_entry(&g, p, y0, &y[p * e..(p + 1) * e], alpha, beta)?;
            if let Some(index) = d.first_failure {
                return Err(BenchError::Verification {
                    size: self.size,
                    precision: self.precision,
                    dims: self.dims,
                    entry: p,
                    max_abs: d.max_abs,
                    max_rel: d.max_rel,
                    index,
                });
            }
        }

        Ok(BenchRecord {
            size: self.size,
            precision: self.precision,
            dims: self.dims,
            batch: g.count,
            seconds,
            gflops: gflops(flops_kron(self.size, self.dims), g.count, seconds),
            verified: true,
        })
    }
}

fn apply<T: Element>(
    g: &Generated<T>,
    y: &mut [T],
    work: &mut [T],
    alpha: T,
    beta: T,
) -> Result<(), KronError> {
    let m = g.size;
    let a = MatrixView::tight(&g.a, m, m)?;
    let b = MatrixView::tight(&g.b, m, m)?;
    match g.dims {
        Dims::Two => {
            let l = MatrixLayout::tight(m, m);
            let xb = BatchView::packed(&g.x, l, g.count)?;
            let mut yb = BatchViewMut::packed(y, l, g.count)?;
            let p = KronProblem2D::square(m).with_scalars(alpha, beta);
            kron2(&p, &a, &b, &xb, &mut yb)
        }
        Dims::Three => {
            let c = MatrixView::tight(&g.c, m, m)?;
            let l = Array3Layout::tight(m, m, m);
            let xb = BatchView::packed(&g.x, l, g.count)?;
            let mut yb = BatchViewMut::packed(y, l, g.count)?;
            let p = KronProblem3D::square(m).with_scalars(alpha, beta);
            kron3(&p, &a, &b, &c, &xb, &mut yb, &mut Workspace::new(work))
        }
    }
}

fn check_entry<T: Element>(
    g: &Generated<T>,
    p: usize,
    prior: &[T],
    out: &[T],
    alpha: T,
    beta: T,
) -> Result<Discrepancy, KronError> {
    let m = g.size;
    let e = g.entry_len();
    let x = &g.x[p * e..(p + 1) * e];
    let a = MatrixView::tight(&g.a, m, m)?;
    let b = MatrixView::tight(&g.b, m, m)?;
    let expected = match g.dims {
        Dims::Two => {
            let p2 = KronProblem2D::square(m).with_scalars(alpha, beta);
            let y0 = MatrixView::tight(prior, m, m)?;
            expected_kron2(&p2, &a, &b, &MatrixView::tight(x, m, m)?, Some(&y0))?
        }
        Dims::Three => {
            let p3 = KronProblem3D::square(m).with_scalars(alpha, beta);
            let c = MatrixView::tight(&g.c, m, m)?;
            let y0 = Array3View::tight(prior, m, m, m)?;
            expected_kron3(&p3, &a, &b, &c, &Array3View::tight(x, m, m, m)?, Some(&y0))?
        }
    };
    let actual: Vec<f64> = out.iter().map(|v| v.to_f64()).collect();
    Ok(expected.compare(&actual, T::TOLERANCE))
}
