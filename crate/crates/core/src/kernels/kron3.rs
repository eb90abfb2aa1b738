use std::mem::size_of;

use super::{
    axpy, check_counts, check_op_matrix, chunk_len, for_each_entry, resolve_op,
    resolve_op_transposed, scale, store, Apply2, KronProblem3D, OutputBatch, Workspace,
};
use crate::element::Element;
use crate::error::KronError;
use crate::layout::{Array3Layout, BatchView, BatchViewMut, EntryLayout, MatrixView};

/// Workspace elements `kron3` needs for `batch_count` entries:
/// `m_a * m_b * n_c * batch_count`, one `m_a x m_b x n_c` intermediate per
/// entry.
pub fn kron3_workspace_size<T>(
    problem: &KronProblem3D<T>,
    batch_count: usize,
) -> Result<usize, KronError> {
    per_entry_workspace(problem)?
        .checked_mul(batch_count)
        .ok_or(KronError::Overflow)
}

fn per_entry_workspace<T>(problem: &KronProblem3D<T>) -> Result<usize, KronError> {
    problem
        .m_a
        .checked_mul(problem.m_b)
        .and_then(|v| v.checked_mul(problem.n_c))
        .ok_or(KronError::Overflow)
}

fn check_array(
    operand: &'static str,
    layout: &Array3Layout,
    expected: [usize; 3],
) -> Result<(), KronError> {
    if layout.dims() != expected {
        return Err(KronError::ArrayShape {
            operand,
            expected,
            found: layout.dims(),
        });
    }
    Ok(())
}

/// Batched 3-D Kronecker action (`TKRON3`).
///
/// For every entry `p`, with `Y^p` of shape `m_a x m_b x m_c` and `X^p` of
/// shape `n_a x n_b x n_c`:
///
/// ```text
/// Y^p[i,j,k] <- alpha * sum_{l,m,n} op(A)[i,l] op(B)[j,m] op(C)[k,n] X^p[l,m,n]
///               + beta * Y^p[i,j,k]
/// ```
///
/// Evaluated by sum factorization in two stages through the caller's
/// workspace:
///
/// 1. `tmp(:,:,n) = op(A) X^p(:,:,n) op(B)^T` for each plane `n`,
/// 2. `Y^p(:,j,:) <- alpha tmp(:,j,:) op(C)^T + beta Y^p(:,j,:)` for each `j`.
///
/// `work` must hold at least [`kron3_workspace_size`] elements.
#[allow(clippy::too_many_arguments)]
pub fn kron3<T: Element>(
    problem: &KronProblem3D<T>,
    a: &MatrixView<'_, T>,
    b: &MatrixView<'_, T>,
    c: &MatrixView<'_, T>,
    x: &BatchView<'_, T, Array3Layout>,
    y: &mut BatchViewMut<'_, T, Array3Layout>,
    work: &mut Workspace<'_, T>,
) -> Result<(), KronError> {
    let KronProblem3D {
        op_a,
        op_b,
        op_c,
        m_a,
        n_a,
        m_b,
        n_b,
        m_c,
        n_c,
        alpha,
        beta,
    } = *problem;
    check_op_matrix("op(A)", op_a, a, (m_a, n_a))?;
    check_op_matrix("op(B)", op_b, b, (m_b, n_b))?;
    check_op_matrix("op(C)", op_c, c, (m_c, n_c))?;
    let xl = *x.layout();
    let yl = *y.layout();
    check_array("X", &xl, [n_a, n_b, n_c])?;
    check_array("Y", &yl, [m_a, m_b, m_c])?;
    check_counts(x.count(), y.count())?;
    let count = y.count();
    let required = kron3_workspace_size(problem, count)?;
    if work.capacity() < required {
        return Err(KronError::WorkspaceTooSmall {
            required,
            capacity: work.capacity(),
        });
    }

    let span = yl.span()?;
    if count == 0 || span == 0 {
        return Ok(());
    }
    let out = OutputBatch {
        count,
        stride: y.stride(),
        span,
    };
    let per = per_entry_workspace(problem)?;
    let bytes = (x.stride() + y.stride() + per) * size_of::<T>();
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
                for k in 0..m_c {
                    for j in 0..m_b {
                        let o = j * yl.ld + k * yl.ld2;
                        scale(&mut ye[o..o + m_a], beta);
                    }
                }
            },
        );
        return Ok(());
    }

    let ar = resolve_op(op_a, a);
    let bt = resolve_op_transposed(op_b, b);
    let cr = resolve_op(op_c, c);
    let stage1 = Apply2 {
        a: &ar,
        bt: &bt,
        m_a,
        n_a,
        m_b,
        n_b,
    };
    let plane = m_a * m_b;
    for_each_entry(
        y.used_mut(),
        out,
        chunk,
        work.as_mut_slice(),
        per,
        || {
            (
                vec![T::ZERO; m_a * n_b],
                vec![T::ZERO; m_a],
                vec![T::ZERO; plane],
            )
        },
        |(t, col, acc), p, ye, tmp| {
            let xe = x.entry(p);
            // Stage 1: tmp(:,:,n) = op(A) X(:,:,n) op(B)^T
            for n in 0..n_c {
                let xn = if n_a == 0 || n_b == 0 {
                    &xe[..0]
                } else {
                    &xe[n * xl.ld2..]
                };
                let tn = &mut tmp[n * plane..(n + 1) * plane];
                stage1.run(xn, xl.ld, t, col, tn, m_a, T::ONE, T::ZERO);
            }
            // Stage 2: Y(:,:,k) <- alpha sum_n op(C)[k,n] tmp(:,:,n) + beta Y(:,:,k).
            // Column j of each tmp plane is the strided m_a x n_c matrix
            // tmp(:,j,:), so this is the per-j GEMM with op(C)^T applied to
            // all j at once.
            for k in 0..m_c {
                acc.fill(T::ZERO);
                for n in 0..n_c {
                    axpy(acc, &tmp[n * plane..(n + 1) * plane], cr[k + n * m_c]);
                }
                for j in 0..m_b {
                    let o = j * yl.ld + k * yl.ld2;
                    store(
                        &mut ye[o..o + m_a],
                        &acc[j * m_a..(j + 1) * m_a],
                        alpha,
                        beta,
                    );
                }
            }
        },
    );
    Ok(())
}
