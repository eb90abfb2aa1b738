use batchkron::Element;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::Dims;
use crate::error::BenchError;

/// Square operands and a tight batch for one benchmark point.
///
/// `c` is empty for 2-D problems. Entries of `x` and `y` are stored
/// back to back with minimal leading dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct Generated<T> {
    pub size: usize,
    pub dims: Dims,
    pub count: usize,
    pub a: Vec<T>,
    pub b: Vec<T>,
    pub c: Vec<T>,
    pub x: Vec<T>,
    pub y: Vec<T>,
}

impl<T> Generated<T> {
    /// Elements in one batch entry.
    pub fn entry_len(&self) -> usize {
        self.size.pow(self.dims.rank())
    }
}

/// Bytes needed for the X and Y buffers of `count` entries.
pub fn batch_bytes(size: usize, dims: Dims, elem_bytes: usize, count: usize) -> u128 {
    2 * (size as u128).pow(dims.rank()) * count as u128 * elem_bytes as u128
}

fn filled<T: Element>(rng: &mut ChaCha8Rng, len: usize) -> Result<Vec<T>, BenchError> {
    let mut v = Vec::new();
    v.try_reserve_exact(len)
        .map_err(|_| BenchError::Allocation {
            bytes: len as u128 * std::mem::size_of::<T>() as u128,
        })?;
    v.extend((0..len).map(|_| T::from_f64(rng.random_range(-1.0..=1.0))));
    Ok(v)
}

/// Seeded values uniform in `[-1, 1]`; the same arguments always give
/// bit-identical buffers.
pub fn generate_batch<T: Element>(
    seed: u64,
    size: usize,
    dims: Dims,
    count: usize,
) -> Result<Generated<T>, BenchError> {
    let too_big = || BenchError::Allocation {
        bytes: batch_bytes(size, dims, std::mem::size_of::<T>(), count),
    };
    let len = size
        .checked_pow(dims.rank())
        .and_then(|e| e.checked_mul(count))
        .ok_or_else(too_big)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = filled(&mut rng, size * size)?;
    let b = filled(&mut rng, size * size)?;
    let c = match dims {
        Dims::Two => Vec::new(),
        Dims::Three => filled(&mut rng, size * size)?,
    };
    let x = filled(&mut rng, len)?;
    let y = filled(&mut rng, len)?;
    Ok(Generated {
        size,
        dims,
        count,
        a,
        b,
        c,
        x,
        y,
    })
}
