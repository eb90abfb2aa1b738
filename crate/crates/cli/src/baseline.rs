//! Unfused reference path for throughput comparison: two generic GEMM
//! calls per batch entry through a temporary buffer.

use batchkron::Element;

/// Column-major `C <- alpha op(A) op(B) + beta C`, in the loop order of the
/// reference BLAS `xGEMM`.
#[allow(clippy::too_many_arguments)]
pub fn gemm<T: Element>(
    trans_a: bool,
    trans_b: bool,
    m: usize,
    n: usize,
    k: usize,
    alpha: T,
    a: &[T],
    lda: usize,
    b: &[T],
    ldb: usize,
    beta: T,
    c: &mut [T],
    ldc: usize,
) {
    let bv = |l: usize, j: usize| {
        if trans_b {
            b[j + l * ldb]
        } else {
            b[l + j * ldb]
        }
    };
    for j in 0..n {
        let col = &mut c[j * ldc..j * ldc + m];
        if trans_a {
            for (i, ci) in col.iter_mut().enumerate() {
                let mut t = T::ZERO;
                for l in 0..k {
                    t += a[l + i * lda] * bv(l, j);
                }
                *ci = if beta == T::ZERO {
                    alpha * t
                } else {
                    alpha * t + beta * *ci
                };
            }
        } else {
            if beta == T::ZERO {
                col.fill(T::ZERO);
            } else if beta != T::ONE {
                col.iter_mut().for_each(|v| *v = beta * *v);
            }
            for l in 0..k {
                let t = alpha * bv(l, j);
                for (ci, &ai) in col.iter_mut().zip(&a[l * lda..l * lda + m]) {
                    *ci += t * ai;
                }
            }
        }
    }
}

/// `Y^p <- alpha A X^p B^T + beta Y^p` for square size-`m` tight entries,
/// computed as `tmp = A X^p` followed by `Y^p = alpha tmp B^T + beta Y^p`.
#[allow(clippy::too_many_arguments)]
pub fn unfused_kron2<T: Element>(
    m: usize,
    alpha: T,
    a: &[T],
    b: &[T],
    x: &[T],
    beta: T,
    y: &mut [T],
    tmp: &mut [T],
) {
    let e = m * m;
    for (xe, ye) in x.chunks_exact(e).zip(y.chunks_exact_mut(e)) {
        gemm(false, false, m, m, m, T::ONE, a, m, xe, m, T::ZERO, tmp, m);
        gemm(false, true, m, m, m, alpha, tmp, m, b, m, beta, ye, m);
    }
}
