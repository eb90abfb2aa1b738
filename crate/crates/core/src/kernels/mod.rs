//! Batched production kernels.
//!
//! | kernel   | per entry `p`                                              |
//! |----------|------------------------------------------------------------|
//! | `kron1`  | `Y^p <- alpha op(A) X^p + beta Y^p`                        |
//! | `kron2`  | `Y^p <- alpha op(A) op(X^p) op(B)^T + beta Y^p`            |
//! | `gemm_a` | `C^p <- alpha op(A^p) op(B) + beta C^p`                    |
//! | `kron3`  | `Y^p <- alpha K(op(A), op(B), op(C))(X^p) + beta Y^p`      |
//!
//! The constant matrices are op-resolved once per call into small private
//! copies, so the per-entry loops only ever see plain column-major operands.
//! Entries are processed in parallel in chunks of consecutive entries. Every
//! output element is produced by exactly one worker with a fixed
//! ascending-index summation order, so results do not depend on the number
//! of threads.
//!
//! BLAS conventions apply: with `beta == 0` the prior output is never read,
//! and with `alpha == 0` the inputs are never read.

mod gemm_a;
mod kron1;
mod kron2;
mod kron3;

pub use gemm_a::gemm_a;
pub use kron1::kron1;
pub use kron2::kron2;
pub use kron3::{kron3, kron3_workspace_size};

use rayon::prelude::*;

use crate::element::Element;
use crate::error::KronError;
use crate::layout::{op_dims, MatrixOp, MatrixView};

/// Target working set of one chunk of batch entries.
const CHUNK_BYTES: usize = 256 * 1024;

/// Shape and scalars of a batched 2-D Kronecker action.
///
/// `m_a x n_a` and `m_b x n_b` are the dimensions of `op(A)` and `op(B)`.
/// Each `op(X^p)` is `n_a x n_b` and each `Y^p` is `m_a x m_b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KronProblem2D<T> {
    pub op_a: MatrixOp,
    pub op_b: MatrixOp,
    pub op_x: MatrixOp,
    pub m_a: usize,
    pub n_a: usize,
    pub m_b: usize,
    pub n_b: usize,
    pub alpha: T,
    pub beta: T,
}

impl<T: Element> KronProblem2D<T> {
    /// No transposes, `alpha = 1`, `beta = 0`.
    pub fn new(m_a: usize, n_a: usize, m_b: usize, n_b: usize) -> Self {
        KronProblem2D {
            op_a: MatrixOp::NoTranspose,
            op_b: MatrixOp::NoTranspose,
            op_x: MatrixOp::NoTranspose,
            m_a,
            n_a,
            m_b,
            n_b,
            alpha: T::ONE,
            beta: T::ZERO,
        }
    }

    pub fn square(m: usize) -> Self {
        Self::new(m, m, m, m)
    }

    pub fn with_ops(mut self, op_a: MatrixOp, op_b: MatrixOp, op_x: MatrixOp) -> Self {
        self.op_a = op_a;
        self.op_b = op_b;
        self.op_x = op_x;
        self
    }

    pub fn with_scalars(mut self, alpha: T, beta: T) -> Self {
        self.alpha = alpha;
        self.beta = beta;
        self
    }
}

/// Shape and scalars of a batched 3-D Kronecker action.
///
/// Each `X^p` is `n_a x n_b x n_c` and each `Y^p` is `m_a x m_b x m_c`.
/// There is no op on `X`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KronProblem3D<T> {
    pub op_a: MatrixOp,
    pub op_b: MatrixOp,
    pub op_c: MatrixOp,
    pub m_a: usize,
    pub n_a: usize,
    pub m_b: usize,
    pub n_b: usize,
    pub m_c: usize,
    pub n_c: usize,
    pub alpha: T,
    pub beta: T,
}

impl<T: Element> KronProblem3D<T> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(m_a: usize, n_a: usize, m_b: usize, n_b: usize, m_c: usize, n_c: usize) -> Self {
        KronProblem3D {
            op_a: MatrixOp::NoTranspose,
            op_b: MatrixOp::NoTranspose,
            op_c: MatrixOp::NoTranspose,
            m_a,
            n_a,
            m_b,
            n_b,
            m_c,
            n_c,
            alpha: T::ONE,
            beta: T::ZERO,
        }
    }

    pub fn square(m: usize) -> Self {
        Self::new(m, m, m, m, m, m)
    }

    pub fn with_ops(mut self, op_a: MatrixOp, op_b: MatrixOp, op_c: MatrixOp) -> Self {
        self.op_a = op_a;
        self.op_b = op_b;
        self.op_c = op_c;
        self
    }

    pub fn with_scalars(mut self, alpha: T, beta: T) -> Self {
        self.alpha = alpha;
        self.beta = beta;
        self
    }
}

/// Caller-provided scratch memory for [`kron3`].
///
/// Entry `p` uses elements `p * m_a * m_b * n_c ..` of the buffer. Contents
/// on entry are ignored and contents on exit are unspecified.
#[derive(Debug)]
pub struct Workspace<'a, T> {
    buf: &'a mut [T],
}

impl<'a, T> Workspace<'a, T> {
    pub fn new(buf: &'a mut [T]) -> Self {
        Workspace { buf }
    }

    pub fn capacity(&self) -> usize {
        self.buf.len()
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [T] {
        self.buf
    }
}

pub(crate) fn check_op_matrix<T: Copy>(
    operand: &'static str,
    op: MatrixOp,
    view: &MatrixView<'_, T>,
    expected: (usize, usize),
) -> Result<(), KronError> {
    check_dims(operand, op_dims(op, view.rows(), view.cols()), expected)
}

pub(crate) fn check_dims(
    operand: &'static str,
    found: (usize, usize),
    expected: (usize, usize),
) -> Result<(), KronError> {
    if found != expected {
        return Err(KronError::MatrixShape {
            operand,
            expected,
            found,
        });
    }
    Ok(())
}

pub(crate) fn check_counts(input: usize, output: usize) -> Result<(), KronError> {
    if input != output {
        return Err(KronError::BatchCount { input, output });
    }
    Ok(())
}

/// Tight column-major copy of `view`, optionally transposed and conjugated.
pub(crate) fn materialize<T: Element>(
    data: &[T],
    rows: usize,
    cols: usize,
    ld: usize,
    transpose: bool,
    conj: bool,
) -> Vec<T> {
    let mut out = Vec::with_capacity(rows * cols);
    materialize_into(&mut out, data, rows, cols, ld, transpose, conj);
    out
}

/// Same as [`materialize`] but reuses `out`'s allocation.
pub(crate) fn materialize_into<T: Element>(
    out: &mut Vec<T>,
    data: &[T],
    rows: usize,
    cols: usize,
    ld: usize,
    transpose: bool,
    conj: bool,
) {
    out.clear();
    if rows == 0 || cols == 0 {
        return;
    }
    let fix = |v: T| if conj { v.conj() } else { v };
    if transpose {
        for i in 0..rows {
            for j in 0..cols {
                out.push(fix(data[i + j * ld]));
            }
        }
    } else {
        for j in 0..cols {
            out.extend(data[j * ld..j * ld + rows].iter().map(|&v| fix(v)));
        }
    }
}

/// `op(M)` as a tight column-major matrix.
pub(crate) fn resolve_op<T: Element>(op: MatrixOp, view: &MatrixView<'_, T>) -> Vec<T> {
    materialize(
        view.as_slice(),
        view.rows(),
        view.cols(),
        view.ld(),
        op.is_transposed(),
        op == MatrixOp::ConjTranspose,
    )
}

/// `op(M)^T` as a tight column-major matrix.
pub(crate) fn resolve_op_transposed<T: Element>(op: MatrixOp, view: &MatrixView<'_, T>) -> Vec<T> {
    materialize(
        view.as_slice(),
        view.rows(),
        view.cols(),
        view.ld(),
        !op.is_transposed(),
        op == MatrixOp::ConjTranspose,
    )
}

#[inline(always)]
pub(crate) fn axpy<T: Element>(acc: &mut [T], x: &[T], s: T) {
    for (a, &v) in acc.iter_mut().zip(x) {
        *a += v * s;
    }
}

/// `dst <- alpha * acc + beta * dst`, never reading `dst` when `beta == 0`.
#[inline(always)]
pub(crate) fn store<T: Element>(dst: &mut [T], acc: &[T], alpha: T, beta: T) {
    if beta == T::ZERO {
        for (d, &a) in dst.iter_mut().zip(acc) {
            *d = alpha * a;
        }
    } else {
        for (d, &a) in dst.iter_mut().zip(acc) {
            *d = alpha * a + beta * *d;
        }
    }
}

/// `dst <- beta * dst`, writing zeros when `beta == 0`.
#[inline]
pub(crate) fn scale<T: Element>(dst: &mut [T], beta: T) {
    if beta == T::ZERO {
        dst.fill(T::ZERO);
    } else {
        for d in dst {
            *d = beta * *d;
        }
    }
}

/// `op(A) op(X) op(B)^T` core shared by `kron2` and the first stage of
/// `kron3`.
///
/// `a` is `op(A)` (`m_a x n_a`, tight) and `bt` is `op(B)^T` (`n_b x m_b`,
/// tight). `x` is an `n_a x n_b` matrix with column stride `ldx`. `t` holds
/// `m_a * n_b` and `col` holds `m_a` elements of scratch.
pub(crate) struct Apply2<'s, T> {
    pub a: &'s [T],
    pub bt: &'s [T],
    pub m_a: usize,
    pub n_a: usize,
    pub m_b: usize,
    pub n_b: usize,
}

impl<T: Element> Apply2<'_, T> {
    #[inline]
    #[allow(clippy::too_many_arguments)]
    pub fn run(
        &self,
        x: &[T],
        ldx: usize,
        t: &mut [T],
        col: &mut [T],
        y: &mut [T],
        ldy: usize,
        alpha: T,
        beta: T,
    ) {
        let (m_a, n_a, m_b, n_b) = (self.m_a, self.n_a, self.m_b, self.n_b);
        // T = op(A) X, one column at a time.
        for m in 0..n_b {
            let tcol = &mut t[m * m_a..(m + 1) * m_a];
            tcol.fill(T::ZERO);
            if n_a == 0 {
                continue;
            }
            let xcol = &x[m * ldx..m * ldx + n_a];
            for (l, &xv) in xcol.iter().enumerate() {
                axpy(tcol, &self.a[l * m_a..(l + 1) * m_a], xv);
            }
        }
        // Y(:, j) = sum_m T(:, m) op(B)(j, m)
        for j in 0..m_b {
            col.fill(T::ZERO);
            let brow = &self.bt[j * n_b..(j + 1) * n_b];
            for (m, &bv) in brow.iter().enumerate() {
                axpy(col, &t[m * m_a..(m + 1) * m_a], bv);
            }
            store(&mut y[j * ldy..j * ldy + m_a], col, alpha, beta);
        }
    }
}

/// Number of consecutive entries handed to one worker at a time.
pub(crate) fn chunk_len(count: usize, bytes_per_entry: usize, hint: usize) -> usize {
    if hint > 0 {
        return count.div_ceil(hint).max(1);
    }
    let by_cache = (CHUNK_BYTES / bytes_per_entry.max(1)).max(1);
    let by_balance = count.div_ceil(rayon::current_num_threads() * 4).max(1);
    by_cache.min(by_balance)
}

/// Layout of the output batch as seen by the driver.
#[derive(Debug, Clone, Copy)]
pub(crate) struct OutputBatch {
    pub count: usize,
    pub stride: usize,
    pub span: usize,
}

/// Calls `body(scratch, p, y_p, work_p)` for every batch entry `p`.
///
/// `y` is the used region of the output buffer, `work` holds `work_per`
/// elements per entry (possibly zero). Chunks of `chunk` consecutive entries
/// run in parallel; each chunk gets its own scratch from `init`.
pub(crate) fn for_each_entry<T, S, I, F>(
    y: &mut [T],
    out: OutputBatch,
    chunk: usize,
    work: &mut [T],
    work_per: usize,
    init: I,
    body: F,
) where
    T: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, usize, &mut [T], &mut [T]) + Sync + Send,
{
    let OutputBatch {
        count,
        stride,
        span,
    } = out;
    debug_assert!(span > 0 && stride >= span && chunk > 0);
    debug_assert_eq!(y.len(), (count - 1) * stride + span);
    let run_chunk = |s: &mut S, ci: usize, block: &mut [T], wblock: &mut [T]| {
        for q in 0..chunk {
            let p = ci * chunk + q;
            if p >= count {
                break;
            }
            let ye = &mut block[q * stride..q * stride + span];
            let we = &mut wblock[q * work_per..(q + 1) * work_per];
            body(s, p, ye, we);
        }
    };
    if work_per == 0 {
        y.par_chunks_mut(stride * chunk)
            .enumerate()
            .for_each_init(&init, |s, (ci, block)| run_chunk(s, ci, block, &mut []));
    } else {
        let work = &mut work[..count * work_per];
        y.par_chunks_mut(stride * chunk)
            .zip(work.par_chunks_mut(work_per * chunk))
            .enumerate()
            .for_each_init(&init, |s, (ci, (block, wblock))| {
                run_chunk(s, ci, block, wblock)
            });
    }
}
