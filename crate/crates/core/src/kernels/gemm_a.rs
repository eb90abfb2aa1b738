use std::mem::size_of;

use super::{
    axpy, check_counts, check_dims, check_op_matrix, chunk_len, for_each_entry, materialize_into,
    resolve_op, scale, store, OutputBatch,
};
use crate::element::Element;
use crate::error::KronError;
use crate::layout::{
    op_dims, BatchView, BatchViewMut, EntryLayout, MatrixLayout, MatrixOp, MatrixView,
};

/// Batched GEMM with a varying left factor and a shared right factor
/// (`TGEMM_A`):
///
/// ```text
/// C^p <- alpha * op(A^p) op(B) + beta * C^p,   p = 0 .. count
/// ```
///
/// `op(A^p)` is `m x k`, `op(B)` is `k x n` and `C^p` is `m x n`. `op(B)` is
/// resolved once per call and shared by every entry. `parallel_hint` is the
/// suggested number of work chunks (the GPU grid size); zero picks a default.
#[allow(clippy::too_many_arguments)]
pub fn gemm_a<T: Element>(
    op_a: MatrixOp,
    op_b: MatrixOp,
    m: usize,
    n: usize,
    k: usize,
    alpha: T,
    a: &BatchView<'_, T, MatrixLayout>,
    b: &MatrixView<'_, T>,
    beta: T,
    c: &mut BatchViewMut<'_, T, MatrixLayout>,
    parallel_hint: usize,
) -> Result<(), KronError> {
    let al = *a.layout();
    check_dims("op(A)", op_dims(op_a, al.rows, al.cols), (m, k))?;
    check_op_matrix("op(B)", op_b, b, (k, n))?;
    check_dims("C", c.layout().dims(), (m, n))?;
    check_counts(a.count(), c.count())?;

    let count = c.count();
    if count == 0 || m == 0 || n == 0 {
        return Ok(());
    }
    let cl = *c.layout();
    let out = OutputBatch {
        count,
        stride: c.stride(),
        span: cl.span()?,
    };
    let chunk = chunk_len(
        count,
        (a.stride() + c.stride()) * size_of::<T>(),
        parallel_hint,
    );

    if alpha == T::ZERO {
        for_each_entry(
            c.used_mut(),
            out,
            chunk,
            &mut [],
            0,
            || (),
            |_, _, ce, _| {
                for j in 0..n {
                    scale(&mut ce[j * cl.ld..j * cl.ld + m], beta);
                }
            },
        );
        return Ok(());
    }

    let br = resolve_op(op_b, b);
    let conj_a = op_a == MatrixOp::ConjTranspose;
    for_each_entry(
        c.used_mut(),
        out,
        chunk,
        &mut [],
        0,
        || (vec![T::ZERO; m], Vec::with_capacity(m * k)),
        |(col, at), p, ce, _| {
            let ae = a.entry(p);
            let (ap, lda): (&[T], usize) = if op_a.is_transposed() {
                materialize_into(at, ae, k, m, al.ld, true, conj_a);
                (at, m)
            } else {
                (ae, al.ld)
            };
            for j in 0..n {
                col.fill(T::ZERO);
                for (l, &bv) in br[j * k..(j + 1) * k].iter().enumerate() {
                    axpy(col, &ap[l * lda..l * lda + m], bv);
                }
                store(&mut ce[j * cl.ld..j * cl.ld + m], col, alpha, beta);
            }
        },
    );
    Ok(())
}
