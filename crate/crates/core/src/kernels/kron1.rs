use std::mem::size_of;

use super::{
    axpy, check_counts, check_dims, check_op_matrix, chunk_len, for_each_entry, resolve_op, scale,
    store, OutputBatch,
};
use crate::element::Element;
use crate::error::KronError;
use crate::layout::{BatchView, BatchViewMut, MatrixOp, MatrixView, VectorLayout};

/// Batched 1-D Kronecker action (`TKRON1`), a batched GEMV:
/// `Y^p <- alpha * op(A) X^p + beta * Y^p`.
///
/// `X` and `Y` carry independent batch strides.
#[allow(clippy::too_many_arguments)]
pub fn kron1<T: Element>(
    op_a: MatrixOp,
    m_a: usize,
    n_a: usize,
    alpha: T,
    a: &MatrixView<'_, T>,
    x: &BatchView<'_, T, VectorLayout>,
    beta: T,
    y: &mut BatchViewMut<'_, T, VectorLayout>,
) -> Result<(), KronError> {
    check_op_matrix("op(A)", op_a, a, (m_a, n_a))?;
    check_dims("X", (x.layout().len, 1), (n_a, 1))?;
    check_dims("Y", (y.layout().len, 1), (m_a, 1))?;
    check_counts(x.count(), y.count())?;

    let count = y.count();
    if count == 0 || m_a == 0 {
        return Ok(());
    }
    let out = OutputBatch {
        count,
        stride: y.stride(),
        span: m_a,
    };
    let chunk = chunk_len(count, (x.stride() + y.stride()) * size_of::<T>(), 0);

    if alpha == T::ZERO {
        for_each_entry(
            y.used_mut(),
            out,
            chunk,
            &mut [],
            0,
            || (),
            |_, _, ye, _| scale(ye, beta),
        );
        return Ok(());
    }

    let ar = resolve_op(op_a, a);
    for_each_entry(
        y.used_mut(),
        out,
        chunk,
        &mut [],
        0,
        || vec![T::ZERO; m_a],
        |acc, p, ye, _| {
            acc.fill(T::ZERO);
            for (l, &xv) in x.entry(p).iter().enumerate() {
                axpy(acc, &ar[l * m_a..(l + 1) * m_a], xv);
            }
            store(ye, acc, alpha, beta);
        },
    );
    Ok(())
}
