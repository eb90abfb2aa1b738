use std::mem::size_of;

use super::{
    check_counts, check_dims, check_op_matrix, chunk_len, for_each_entry, materialize_into,
    resolve_op, resolve_op_transposed, scale, Apply2, KronProblem2D, OutputBatch,
};
use crate::element::Element;
use crate::error::KronError;
use crate::layout::{
    op_dims, BatchView, BatchViewMut, EntryLayout, MatrixLayout, MatrixOp, MatrixView,
};

/// Batched 2-D Kronecker action (`TKRON2`).
///
/// For every entry `p`:
///
/// ```text
/// Y^p <- alpha * op(A) op(X^p) op(B)^T + beta * Y^p
/// ```
///
/// which is `vec(Y^p) = alpha (op(B) ⊗ op(A)) vec(op(X^p)) + beta vec(Y^p)`.
/// The leading dimension of `X` describes the stored matrix, so with
/// `op_x = Transpose` each `X^p` is stored `n_b x n_a`.
///
/// `A`, `B` correspond to `transa, ma, na, A, lda` and `transb, mb, nb, B,
/// ldb`; the batch views carry `ldx, ldxp` and `ldy, ldyp`.
pub fn kron2<T: Element>(
    problem: &KronProblem2D<T>,
    a: &MatrixView<'_, T>,
    b: &MatrixView<'_, T>,
    x: &BatchView<'_, T, MatrixLayout>,
    y: &mut BatchViewMut<'_, T, MatrixLayout>,
) -> Result<(), KronError> {
    let KronProblem2D {
        op_a,
        op_b,
        op_x,
        m_a,
        n_a,
        m_b,
        n_b,
        alpha,
        beta,
    } = *problem;
    check_op_matrix("op(A)", op_a, a, (m_a, n_a))?;
    check_op_matrix("op(B)", op_b, b, (m_b, n_b))?;
    let xl = *x.layout();
    check_dims("op(X)", op_dims(op_x, xl.rows, xl.cols), (n_a, n_b))?;
    check_dims("Y", y.layout().dims(), (m_a, m_b))?;
    check_counts(x.count(), y.count())?;

    let count = y.count();
    let yl = *y.layout();
    let span = yl.span()?;
    if count == 0 || span == 0 {
        return Ok(());
    }
    let out = OutputBatch {
        count,
        stride: y.stride(),
        span,
    };
    let bytes = (x.stride() + y.stride()) * size_of::<T>();
    let chunk = chunk_len(count, bytes, 0);

    if alpha == T::ZERO {
        for_each_entry(
            y.used_mut(),
            out,
            chunk,
            &mut [],
            0,
            || (),
            |_, _, ye, _| {
                for j in 0..m_b {
                    scale(&mut ye[j * yl.ld..j * yl.ld + m_a], beta);
                }
            },
        );
        return Ok(());
    }

    let ar = resolve_op(op_a, a);
    let bt = resolve_op_transposed(op_b, b);
    let core = Apply2 {
        a: &ar,
        bt: &bt,
        m_a,
        n_a,
        m_b,
        n_b,
    };
    let conj_x = op_x == MatrixOp::ConjTranspose;
    for_each_entry(
        y.used_mut(),
        out,
        chunk,
        &mut [],
        0,
        || {
            (
                vec![T::ZERO; m_a * n_b],
                vec![T::ZERO; m_a],
                Vec::with_capacity(n_a * n_b),
            )
        },
        |(t, col, xt), p, ye, _| {
            let xe = x.entry(p);
            if op_x.is_transposed() {
                materialize_into(xt, xe, n_b, n_a, xl.ld, true, conj_x);
                core.run(xt, n_a.max(1), t, col, ye, yl.ld, alpha, beta);
            } else {
                core.run(xe, xl.ld, t, col, ye, yl.ld, alpha, beta);
            }
        },
    );
    Ok(())
}
