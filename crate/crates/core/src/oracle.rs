//! Brute-force reference implementations.
//!
//! Everything here works in `f64` regardless of the input element type and
//! follows the defining formulas literally: the explicit Kronecker matrix is
//! built, vectors are stacked column by column, and the 2-D/3-D actions are
//! evaluated as plain nested sums. Cost is O(m^4) per 2-D entry and O(m^6)
//! per 3-D entry, so keep operands small.

use crate::element::Element;
use crate::error::KronError;
use crate::kernels::{KronProblem2D, KronProblem3D};
use crate::layout::{op_dims, Array3View, MatrixOp, MatrixView, MatrixViewMut};

/// Owned column-major matrix with `ld = rows`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// # Panics
    /// If `data.len() != rows * cols`.
    pub fn from_col_major(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(
            data.len(),
            rows * cols,
            "storage length must be rows * cols"
        );
        DenseMatrix { rows, cols, data }
    }

    /// Builds a matrix from row slices, e.g. `[[1, 2], [3, 4]]`.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(nrows, ncols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            assert_eq!(row.len(), ncols, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    /// Copies the logical elements of any view.
    pub fn from_view<T: Element>(view: &MatrixView<'_, T>) -> Self {
        let mut m = Self::zeros(view.rows(), view.cols());
        for j in 0..view.cols() {
            for i in 0..view.rows() {
                m.set(i, j, view.get(i, j).to_f64());
            }
        }
        m
    }

    /// `op(view)` as an owned matrix.
    pub fn from_view_op<T: Element>(op: MatrixOp, view: &MatrixView<'_, T>) -> Self {
        let m = Self::from_view(view);
        if op.is_transposed() {
            m.transpose()
        } else {
            m
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i + j * self.rows]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i + j * self.rows] = v;
    }

    pub fn view(&self) -> MatrixView<'_, f64> {
        MatrixView::tight(&self.data, self.rows, self.cols).expect("dense storage is tight")
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for j in 0..self.cols {
            for i in 0..self.rows {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn abs(&self) -> Self {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v.abs()).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    /// Dense matrix-vector product.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols, "matvec length mismatch");
        let mut y = vec![0.0; self.rows];
        for (i, yi) in y.iter_mut().enumerate() {
            for (j, xj) in x.iter().enumerate() {
                *yi += self.get(i, j) * xj;
            }
        }
        y
    }
}

/// Owned column-major 3-D array with tight strides.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseArray3 {
    dims: [usize; 3],
    data: Vec<f64>,
}

impl DenseArray3 {
    pub fn zeros(dim1: usize, dim2: usize, dim3: usize) -> Self {
        DenseArray3 {
            dims: [dim1, dim2, dim3],
            data: vec![0.0; dim1 * dim2 * dim3],
        }
    }

    pub fn from_view<T: Element>(view: &Array3View<'_, T>) -> Self {
        let [d1, d2, d3] = view.dims();
        let mut a = Self::zeros(d1, d2, d3);
        for k in 0..d3 {
            for j in 0..d2 {
                for i in 0..d1 {
                    a.set(i, j, k, view.get(i, j, k).to_f64());
                }
            }
        }
        a
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[i + self.dims[0] * (j + self.dims[1] * k)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        self.data[i + self.dims[0] * (j + self.dims[1] * k)] = v;
    }

    pub fn view(&self) -> Array3View<'_, f64> {
        let [d1, d2, d3] = self.dims;
        Array3View::tight(&self.data, d1, d2, d3).expect("dense storage is tight")
    }

    pub fn abs(&self) -> Self {
        DenseArray3 {
            dims: self.dims,
            data: self.data.iter().map(|v| v.abs()).collect(),
        }
    }
}

/// The explicit Kronecker product `A ⊗ B`: block `(i, j)` is `A[i, j] * B`.
pub fn kron_matrix<T: Element>(
    a: &MatrixView<'_, T>,
    b: &MatrixView<'_, T>,
) -> Result<DenseMatrix, KronError> {
    let rows = a.rows().checked_mul(b.rows()).ok_or(KronError::Overflow)?;
    let cols = a.cols().checked_mul(b.cols()).ok_or(KronError::Overflow)?;
    rows.checked_mul(cols).ok_or(KronError::Overflow)?;
    let mut k = DenseMatrix::zeros(rows, cols);
    for ja in 0..a.cols() {
        for ia in 0..a.rows() {
            let aij = a.get(ia, ja).to_f64();
            for jb in 0..b.cols() {
                for ib in 0..b.rows() {
                    k.set(
                        ia * b.rows() + ib,
                        ja * b.cols() + jb,
                        aij * b.get(ib, jb).to_f64(),
                    );
                }
            }
        }
    }
    Ok(k)
}

/// Column-stacking vectorization of a matrix.
pub fn vec2<T: Element>(x: &MatrixView<'_, T>) -> Vec<f64> {
    let mut v = Vec::with_capacity(x.rows() * x.cols());
    for j in 0..x.cols() {
        for i in 0..x.rows() {
            v.push(x.get(i, j).to_f64());
        }
    }
    v
}

/// Vectorization of a 3-D array: columns of plane 0, then plane 1, ...
/// Padding elements are skipped.
pub fn vec3<T: Element>(x: &Array3View<'_, T>) -> Vec<f64> {
    let [d1, d2, d3] = x.dims();
    let mut v = Vec::with_capacity(d1 * d2 * d3);
    for k in 0..d3 {
        for j in 0..d2 {
            for i in 0..d1 {
                v.push(x.get(i, j, k).to_f64());
            }
        }
    }
    v
}

fn expect_dims(
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

/// `Y[i, j] = sum_l sum_m A[i, l] X[l, m] B[j, m]`, i.e. `Y = A X B^T`.
pub fn ref_kron2_apply<T: Element>(
    a: &MatrixView<'_, T>,
    b: &MatrixView<'_, T>,
    x: &MatrixView<'_, T>,
) -> Result<DenseMatrix, KronError> {
    expect_dims("X", (x.rows(), x.cols()), (a.cols(), b.cols()))?;
    let mut y = DenseMatrix::zeros(a.rows(), b.rows());
    for j in 0..b.rows() {
        for i in 0..a.rows() {
            let mut s = 0.0;
            for l in 0..a.cols() {
                for m in 0..b.cols() {
                    s += a.get(i, l).to_f64() * x.get(l, m).to_f64() * b.get(j, m).to_f64();
                }
            }
            y.set(i, j, s);
        }
    }
    Ok(y)
}

/// `Y[i, j, k] = sum_l sum_m sum_n A[i, l] B[j, m] C[k, n] X[l, m, n]`.
pub fn ref_kron3_apply<T: Element>(
    a: &MatrixView<'_, T>,
    b: &MatrixView<'_, T>,
    c: &MatrixView<'_, T>,
    x: &Array3View<'_, T>,
) -> Result<DenseArray3, KronError> {
    let expected = [a.cols(), b.cols(), c.cols()];
    if x.dims() != expected {
        return Err(KronError::ArrayShape {
            operand: "X",
            expected,
            found: x.dims(),
        });
    }
    let (a, b, c) = (
        DenseMatrix::from_view(a),
        DenseMatrix::from_view(b),
        DenseMatrix::from_view(c),
    );
    let x = DenseArray3::from_view(x);
    let ([m_a, m_b, m_c], [n_a, n_b, n_c]) = ([a.rows(), b.rows(), c.rows()], expected);
    let mut y = DenseArray3::zeros(m_a, m_b, m_c);
    // Every term a(i,l) b(j,m) c(k,n) x(l,m,n) is added one at a time;
    // the loops only run over i innermost to walk memory contiguously.
    for k in 0..m_c {
        for n in 0..n_c {
            let ckn = c.get(k, n);
            for j in 0..m_b {
                let col = &mut y.data[(j + k * m_b) * m_a..(j + 1 + k * m_b) * m_a];
                for m in 0..n_b {
                    let w = b.get(j, m) * ckn;
                    for l in 0..n_a {
                        let xs = w * x.data[l + (m + n * n_b) * n_a];
                        let al = &a.as_slice()[l * m_a..(l + 1) * m_a];
                        for (yi, &ai) in col.iter_mut().zip(al) {
                            *yi += ai * xs;
                        }
                    }
                }
            }
        }
    }
    Ok(y)
}

/// `C <- alpha * op(A) op(B) + beta * C` by a triple loop in `f64`.
///
/// With `beta == 0` the prior contents of `C` are never read; with
/// `alpha == 0` neither `A` nor `B` is.
pub fn ref_gemm<T: Element>(
    op_a: MatrixOp,
    op_b: MatrixOp,
    alpha: f64,
    a: &MatrixView<'_, T>,
    b: &MatrixView<'_, T>,
    beta: f64,
    c: &mut MatrixViewMut<'_, T>,
) -> Result<(), KronError> {
    let (m, k) = op_dims(op_a, a.rows(), a.cols());
    let (kb, n) = op_dims(op_b, b.rows(), b.cols());
    expect_dims("op(B)", (kb, n), (k, n))?;
    expect_dims("C", (c.rows(), c.cols()), (m, n))?;
    let op_at = |i: usize, l: usize| match op_a {
        MatrixOp::NoTranspose => a.get(i, l),
        _ => a.get(l, i).conj(),
    };
    let op_bt = |l: usize, j: usize| match op_b {
        MatrixOp::NoTranspose => b.get(l, j),
        _ => b.get(j, l).conj(),
    };
    for j in 0..n {
        for i in 0..m {
            let mut s = 0.0;
            if alpha != 0.0 {
                for l in 0..k {
                    s += op_at(i, l).to_f64() * op_bt(l, j).to_f64();
                }
            }
            let prior = if beta == 0.0 {
                0.0
            } else {
                beta * c.get(i, j).to_f64()
            };
            c.set(i, j, T::from_f64(alpha * s + prior));
        }
    }
    Ok(())
}

/// Outcome of comparing a kernel result against oracle values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Discrepancy {
    pub max_abs: f64,
    pub max_rel: f64,
    /// First index whose relative error exceeds the tolerance.
    pub first_failure: Option<usize>,
}

impl Discrepancy {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Elementwise comparison with relative error
/// `|actual - expected| / max(|expected|, scale)`.
///
/// `scale` should hold the same operator applied to the absolute values of
/// the inputs; it bounds the magnitude of every partial sum, so cancellation
/// in `expected` does not turn rounding noise into a large relative error.
/// Non-finite actual values always fail.
pub fn compare(actual: &[f64], expected: &[f64], scale: &[f64], tol: f64) -> Discrepancy {
    assert_eq!(actual.len(), expected.len());
    assert_eq!(actual.len(), scale.len());
    let mut out = Discrepancy {
        max_abs: 0.0,
        max_rel: 0.0,
        first_failure: None,
    };
    for (idx, ((&a, &e), &s)) in actual.iter().zip(expected).zip(scale).enumerate() {
        let abs = (a - e).abs();
        let denom = e.abs().max(s.abs());
        let rel = if !a.is_finite() {
            f64::INFINITY
        } else if abs == 0.0 {
            0.0
        } else if denom == 0.0 {
            f64::INFINITY
        } else {
            abs / denom
        };
        out.max_abs = out
            .max_abs
            .max(if a.is_finite() { abs } else { f64::INFINITY });
        out.max_rel = out.max_rel.max(rel);
        if rel > tol && out.first_failure.is_none() {
            out.first_failure = Some(idx);
        }
    }
    out
}

/// Oracle values for one output entry, in `vec` order, together with the
/// magnitude bound used by [`compare`].
#[derive(Debug, Clone, PartialEq)]
pub struct Expected {
    pub values: Vec<f64>,
    pub scale: Vec<f64>,
}

impl Expected {
    /// `alpha * action + beta * prior`, where `abs_action` is the same
    /// operator applied to absolute values.
    fn blend(
        alpha: f64,
        action: Vec<f64>,
        abs_action: Vec<f64>,
        beta: f64,
        prior: Option<Vec<f64>>,
    ) -> Self {
        let mut values: Vec<f64> = action.iter().map(|v| alpha * v).collect();
        let mut scale: Vec<f64> = abs_action.iter().map(|v| alpha.abs() * v).collect();
        if beta != 0.0 {
            let prior = prior.expect("beta != 0 needs the prior output");
            for ((v, s), p) in values.iter_mut().zip(scale.iter_mut()).zip(prior) {
                *v += beta * p;
                *s += (beta * p).abs();
            }
        }
        Expected { values, scale }
    }

    pub fn compare(&self, actual: &[f64], tol: f64) -> Discrepancy {
        compare(actual, &self.values, &self.scale, tol)
    }
}

/// Expected `Y^p` of a `kron2` call, given `X^p` and (when `beta != 0`) the
/// prior `Y^p`.
pub fn expected_kron2<T: Element>(
    problem: &KronProblem2D<T>,
    a: &MatrixView<'_, T>,
    b: &MatrixView<'_, T>,
    x: &MatrixView<'_, T>,
    prior: Option<&MatrixView<'_, T>>,
) -> Result<Expected, KronError> {
    let a = DenseMatrix::from_view_op(problem.op_a, a);
    let b = DenseMatrix::from_view_op(problem.op_b, b);
    let x = DenseMatrix::from_view_op(problem.op_x, x);
    let y = ref_kron2_apply(&a.view(), &b.view(), &x.view())?;
    let ya = ref_kron2_apply(&a.abs().view(), &b.abs().view(), &x.abs().view())?;
    Ok(Expected::blend(
        problem.alpha.to_f64(),
        y.data,
        ya.data,
        problem.beta.to_f64(),
        prior.map(vec2),
    ))
}

/// Expected `Y^p` of a `kron3` call.
pub fn expected_kron3<T: Element>(
    problem: &KronProblem3D<T>,
    a: &MatrixView<'_, T>,
    b: &MatrixView<'_, T>,
    c: &MatrixView<'_, T>,
    x: &Array3View<'_, T>,
    prior: Option<&Array3View<'_, T>>,
) -> Result<Expected, KronError> {
    let a = DenseMatrix::from_view_op(problem.op_a, a);
    let b = DenseMatrix::from_view_op(problem.op_b, b);
    let c = DenseMatrix::from_view_op(problem.op_c, c);
    let x = DenseArray3::from_view(x);
    let y = ref_kron3_apply(&a.view(), &b.view(), &c.view(), &x.view())?;
    let ya = ref_kron3_apply(
        &a.abs().view(),
        &b.abs().view(),
        &c.abs().view(),
        &x.abs().view(),
    )?;
    Ok(Expected::blend(
        problem.alpha.to_f64(),
        y.data,
        ya.data,
        problem.beta.to_f64(),
        prior.map(vec3),
    ))
}

/// Expected `C^p` of a `gemm_a` call.
#[allow(clippy::too_many_arguments)]
pub fn expected_gemm<T: Element>(
    op_a: MatrixOp,
    op_b: MatrixOp,
    alpha: T,
    a: &MatrixView<'_, T>,
    b: &MatrixView<'_, T>,
    beta: T,
    prior: Option<&MatrixView<'_, T>>,
) -> Result<Expected, KronError> {
    let (m, _) = op_dims(op_a, a.rows(), a.cols());
    let (_, n) = op_dims(op_b, b.rows(), b.cols());
    let (a, b) = (DenseMatrix::from_view(a), DenseMatrix::from_view(b));
    let mut y = DenseMatrix::zeros(m, n);
    let mut ya = DenseMatrix::zeros(m, n);
    {
        let mut yv = MatrixViewMut::tight(&mut y.data, m, n)?;
        ref_gemm(op_a, op_b, 1.0, &a.view(), &b.view(), 0.0, &mut yv)?;
        let mut yav = MatrixViewMut::tight(&mut ya.data, m, n)?;
        ref_gemm(
            op_a,
            op_b,
            1.0,
            &a.abs().view(),
            &b.abs().view(),
            0.0,
            &mut yav,
        )?;
    }
    Ok(Expected::blend(
        alpha.to_f64(),
        y.data,
        ya.data,
        beta.to_f64(),
        prior.map(vec2),
    ))
}

/// Expected `Y^p` of a `kron1` call.
pub fn expected_kron1<T: Element>(
    op_a: MatrixOp,
    alpha: T,
    a: &MatrixView<'_, T>,
    x: &[T],
    beta: T,
    prior: Option<&[T]>,
) -> Result<Expected, KronError> {
    let a = DenseMatrix::from_view_op(op_a, a);
    if a.cols() != x.len() {
        return Err(KronError::MatrixShape {
            operand: "X",
            expected: (a.cols(), 1),
            found: (x.len(), 1),
        });
    }
    let x: Vec<f64> = x.iter().map(|v| v.to_f64()).collect();
    let xa: Vec<f64> = x.iter().map(|v| v.abs()).collect();
    Ok(Expected::blend(
        alpha.to_f64(),
        a.matvec(&x),
        a.abs().matvec(&xa),
        beta.to_f64(),
        prior.map(|p| p.iter().map(|v| v.to_f64()).collect()),
    ))
}
