//! Test fixtures: random operands, tight/padded batch layouts, and oracle
//! checks for every kernel. Shared with the acceptance suite.

#![allow(dead_code)]

use batchkron::oracle::{self, Discrepancy, Expected};
use batchkron::{
    gemm_a, kron1, kron2, kron3, kron3_workspace_size, op_dims, pack, unpack, Array3Layout,
    BatchView, BatchViewMut, Element, EntryLayout, KronProblem2D, KronProblem3D, MatrixLayout,
    MatrixOp, MatrixView, VectorLayout, Workspace,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const NO_TRANS: MatrixOp = MatrixOp::NoTranspose;
pub const TRANS: MatrixOp = MatrixOp::Transpose;
pub const OPS: [MatrixOp; 2] = [NO_TRANS, TRANS];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` values uniform in `[-1, 1]`.
pub fn uniform<T: Element>(rng: &mut ChaCha8Rng, n: usize) -> Vec<T> {
    (0..n)
        .map(|_| T::from_f64(rng.random_range(-1.0..=1.0)))
        .collect()
}

/// `n` small integers in `[-4, 4]`; products and sums stay exact in `f64`.
pub fn integers<T: Element>(rng: &mut ChaCha8Rng, n: usize) -> Vec<T> {
    (0..n)
        .map(|_| T::from_f64(rng.random_range(-4i32..=4) as f64))
        .collect()
}

/// How a batch is laid out in memory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pad {
    Tight,
    /// `ld = dim + 3`, `ld2 = ld * dim2 + 5`, `stride = footprint + 7`.
    Padded,
}

pub fn matrix_layout(rows: usize, cols: usize, pad: Pad) -> (MatrixLayout, usize) {
    let l = match pad {
        Pad::Tight => MatrixLayout::tight(rows, cols),
        Pad::Padded => MatrixLayout::new(rows, cols, rows.max(1) + 3),
    };
    let stride = l.footprint().unwrap() + if pad == Pad::Padded { 7 } else { 0 };
    (l, stride)
}

pub fn array_layout(d1: usize, d2: usize, d3: usize, pad: Pad) -> (Array3Layout, usize) {
    let l = match pad {
        Pad::Tight => Array3Layout::tight(d1, d2, d3),
        Pad::Padded => {
            let ld = d1.max(1) + 3;
            Array3Layout::new(d1, d2, d3, ld, ld * d2 + 5)
        }
    };
    let stride = l.footprint().unwrap() + if pad == Pad::Padded { 7 } else { 0 };
    (l, stride)
}

/// A stored (pre-op) constant matrix together with its layout.
pub struct Stored<T> {
    pub data: Vec<T>,
    pub layout: MatrixLayout,
}

impl<T: Element> Stored<T> {
    /// Storage for a matrix whose `op` is `rows x cols`, from logical values
    /// in `vec` order of the *stored* matrix.
    pub fn new(op: MatrixOp, rows: usize, cols: usize, values: &[T], pad: Pad) -> Self {
        let (sr, sc) = op_dims(op, rows, cols);
        let (layout, _) = matrix_layout(sr, sc, pad);
        let data = pack(
            values,
            &layout,
            1,
            layout.footprint().unwrap(),
            T::from_f64(f64::NAN),
        )
        .unwrap();
        Stored { data, layout }
    }

    pub fn random(rng: &mut ChaCha8Rng, op: MatrixOp, rows: usize, cols: usize, pad: Pad) -> Self {
        let v = uniform(rng, rows * cols);
        Self::new(op, rows, cols, &v, pad)
    }

    pub fn view(&self) -> MatrixView<'_, T> {
        MatrixView::from_layout(&self.data, self.layout).unwrap()
    }
}

fn nan<T: Element>() -> T {
    T::from_f64(f64::NAN)
}

/// Assert that every entry of `out` matches the oracle.
pub fn assert_passed(what: &str, p: usize, d: &Discrepancy) {
    assert!(
        d.passed(),
        "{what}: entry {p} differs from oracle: max_rel {:.3e}, max_abs {:.3e}, first index {:?}",
        d.max_rel,
        d.max_abs,
        d.first_failure
    );
}

pub fn to_f64<T: Element>(v: &[T]) -> Vec<f64> {
    v.iter().map(|x| x.to_f64()).collect()
}

// ---------------------------------------------------------------- kron2

pub struct Kron2Case<T> {
    pub problem: KronProblem2D<T>,
    pub a: Vec<T>,
    pub b: Vec<T>,
    /// Logical values of each stored `X^p`, entry after entry.
    pub x: Vec<T>,
    /// Logical prior values of each `Y^p`.
    pub y0: Vec<T>,
    pub count: usize,
}

impl<T: Element> Kron2Case<T> {
    pub fn random(rng: &mut ChaCha8Rng, problem: KronProblem2D<T>, count: usize) -> Self {
        let p = &problem;
        Kron2Case {
            a: uniform(rng, p.m_a * p.n_a),
            b: uniform(rng, p.m_b * p.n_b),
            x: uniform(rng, p.n_a * p.n_b * count),
            y0: uniform(rng, p.m_a * p.m_b * count),
            problem,
            count,
        }
    }

    pub fn stored_x(&self) -> (usize, usize) {
        op_dims(self.problem.op_x, self.problem.n_a, self.problem.n_b)
    }

    /// Runs `kron2` and returns the logical output values.
    pub fn run(&self, pad: Pad) -> Vec<T> {
        let p = &self.problem;
        let a = Stored::new(p.op_a, p.m_a, p.n_a, &self.a, pad);
        let b = Stored::new(p.op_b, p.m_b, p.n_b, &self.b, pad);
        let (xr, xc) = self.stored_x();
        let (xl, xs) = matrix_layout(xr, xc, pad);
        let (yl, ys) = matrix_layout(p.m_a, p.m_b, pad);
        let xbuf = pack(&self.x, &xl, self.count, xs, nan()).unwrap();
        let mut ybuf = pack(&self.y0, &yl, self.count, ys, nan()).unwrap();
        let xb = BatchView::new(&xbuf, xl, self.count, xs).unwrap();
        let mut yb = BatchViewMut::new(&mut ybuf, yl, self.count, ys).unwrap();
        kron2(p, &a.view(), &b.view(), &xb, &mut yb).unwrap();
        unpack(&yb.as_view())
    }

    /// Oracle values for every entry, given the case's prior `Y`.
    pub fn expected(&self) -> Vec<Expected> {
        let p = &self.problem;
        let a = Stored::new(p.op_a, p.m_a, p.n_a, &self.a, Pad::Tight);
        let b = Stored::new(p.op_b, p.m_b, p.n_b, &self.b, Pad::Tight);
        let (xr, xc) = self.stored_x();
        let (xn, yn) = (xr * xc, p.m_a * p.m_b);
        (0..self.count)
            .map(|q| {
                let x = MatrixView::tight(&self.x[q * xn..(q + 1) * xn], xr, xc).unwrap();
                let y0 = MatrixView::tight(&self.y0[q * yn..(q + 1) * yn], p.m_a, p.m_b).unwrap();
                oracle::expected_kron2(p, &a.view(), &b.view(), &x, Some(&y0)).unwrap()
            })
            .collect()
    }

    pub fn check(&self, out: &[T]) -> Vec<Discrepancy> {
        let n = out.len() / self.count.max(1);
        self.expected()
            .iter()
            .enumerate()
            .map(|(q, e)| e.compare(&to_f64(&out[q * n..(q + 1) * n]), T::TOLERANCE))
            .collect()
    }

    pub fn assert_matches_oracle(&self, what: &str, out: &[T]) {
        for (q, d) in self.check(out).iter().enumerate() {
            assert_passed(what, q, d);
        }
    }
}

// ---------------------------------------------------------------- kron3

pub struct Kron3Case<T> {
    pub problem: KronProblem3D<T>,
    pub a: Vec<T>,
    pub b: Vec<T>,
    pub c: Vec<T>,
    pub x: Vec<T>,
    pub y0: Vec<T>,
    pub count: usize,
}

impl<T: Element> Kron3Case<T> {
    pub fn random(rng: &mut ChaCha8Rng, problem: KronProblem3D<T>, count: usize) -> Self {
        let p = &problem;
        Kron3Case {
            a: uniform(rng, p.m_a * p.n_a),
            b: uniform(rng, p.m_b * p.n_b),
            c: uniform(rng, p.m_c * p.n_c),
            x: uniform(rng, p.n_a * p.n_b * p.n_c * count),
            y0: uniform(rng, p.m_a * p.m_b * p.m_c * count),
            problem,
            count,
        }
    }

    pub fn run(&self, pad: Pad) -> Vec<T> {
        let p = &self.problem;
        let a = Stored::new(p.op_a, p.m_a, p.n_a, &self.a, pad);
        let b = Stored::new(p.op_b, p.m_b, p.n_b, &self.b, pad);
        let c = Stored::new(p.op_c, p.m_c, p.n_c, &self.c, pad);
        let (xl, xs) = array_layout(p.n_a, p.n_b, p.n_c, pad);
        let (yl, ys) = array_layout(p.m_a, p.m_b, p.m_c, pad);
        let xbuf = pack(&self.x, &xl, self.count, xs, nan()).unwrap();
        let mut ybuf = pack(&self.y0, &yl, self.count, ys, nan()).unwrap();
        let mut work = vec![nan(); kron3_workspace_size(p, self.count).unwrap()];
        let xb = BatchView::new(&xbuf, xl, self.count, xs).unwrap();
        let mut yb = BatchViewMut::new(&mut ybuf, yl, self.count, ys).unwrap();
        kron3(
            p,
            &a.view(),
            &b.view(),
            &c.view(),
            &xb,
            &mut yb,
            &mut Workspace::new(&mut work),
        )
        .unwrap();
        unpack(&yb.as_view())
    }

    /// Oracle values for every entry, given the case's prior `Y`.
    pub fn expected(&self) -> Vec<Expected> {
        let p = &self.problem;
        let a = Stored::new(p.op_a, p.m_a, p.n_a, &self.a, Pad::Tight);
        let b = Stored::new(p.op_b, p.m_b, p.n_b, &self.b, Pad::Tight);
        let c = Stored::new(p.op_c, p.m_c, p.n_c, &self.c, Pad::Tight);
        let (xn, yn) = (p.n_a * p.n_b * p.n_c, p.m_a * p.m_b * p.m_c);
        (0..self.count)
            .map(|q| {
                let x = batchkron::Array3View::tight(
                    &self.x[q * xn..(q + 1) * xn],
                    p.n_a,
                    p.n_b,
                    p.n_c,
                )
                .unwrap();
                let y0 = batchkron::Array3View::tight(
                    &self.y0[q * yn..(q + 1) * yn],
                    p.m_a,
                    p.m_b,
                    p.m_c,
                )
                .unwrap();
                oracle::expected_kron3(p, &a.view(), &b.view(), &c.view(), &x, Some(&y0)).unwrap()
            })
            .collect()
    }

    pub fn check(&self, out: &[T]) -> Vec<Discrepancy> {
        let n = out.len() / self.count.max(1);
        self.expected()
            .iter()
            .enumerate()
            .map(|(q, e)| e.compare(&to_f64(&out[q * n..(q + 1) * n]), T::TOLERANCE))
            .collect()
    }

    pub fn assert_matches_oracle(&self, what: &str, out: &[T]) {
        for (q, d) in self.check(out).iter().enumerate() {
            assert_passed(what, q, d);
        }
    }
}

// ---------------------------------------------------------------- gemm_a

pub struct GemmCase<T> {
    pub op_a: MatrixOp,
    pub op_b: MatrixOp,
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub alpha: T,
    pub beta: T,
    /// Logical values of each stored `A^p`.
    pub a: Vec<T>,
    pub b: Vec<T>,
    pub c0: Vec<T>,
    pub count: usize,
}

impl<T: Element> GemmCase<T> {
    #[allow(clippy::too_many_arguments)]
    pub fn random(
        rng: &mut ChaCha8Rng,
        op_a: MatrixOp,
        op_b: MatrixOp,
        (m, n, k): (usize, usize, usize),
        alpha: T,
        beta: T,
        count: usize,
    ) -> Self {
        GemmCase {
            op_a,
            op_b,
            m,
            n,
            k,
            alpha,
            beta,
            a: uniform(rng, m * k * count),
            b: uniform(rng, k * n),
            c0: uniform(rng, m * n * count),
            count,
        }
    }

    pub fn run(&self, pad: Pad, hint: usize) -> Vec<T> {
        let (ar, ac) = op_dims(self.op_a, self.m, self.k);
        let (al, as_) = matrix_layout(ar, ac, pad);
        let (cl, cs) = matrix_layout(self.m, self.n, pad);
        let b = Stored::new(self.op_b, self.k, self.n, &self.b, pad);
        let abuf = pack(&self.a, &al, self.count, as_, nan()).unwrap();
        let mut cbuf = pack(&self.c0, &cl, self.count, cs, nan()).unwrap();
        let ab = BatchView::new(&abuf, al, self.count, as_).unwrap();
        let mut cb = BatchViewMut::new(&mut cbuf, cl, self.count, cs).unwrap();
        gemm_a(
            self.op_a,
            self.op_b,
            self.m,
            self.n,
            self.k,
            self.alpha,
            &ab,
            &b.view(),
            self.beta,
            &mut cb,
            hint,
        )
        .unwrap();
        unpack(&cb.as_view())
    }

    pub fn check(&self, out: &[T]) -> Vec<Discrepancy> {
        let (ar, ac) = op_dims(self.op_a, self.m, self.k);
        let b = Stored::new(self.op_b, self.k, self.n, &self.b, Pad::Tight);
        let (an, cn) = (ar * ac, self.m * self.n);
        (0..self.count)
            .map(|q| {
                let a = MatrixView::tight(&self.a[q * an..(q + 1) * an], ar, ac).unwrap();
                let c0 = MatrixView::tight(&self.c0[q * cn..(q + 1) * cn], self.m, self.n).unwrap();
                let e = oracle::expected_gemm(
                    self.op_a,
                    self.op_b,
                    self.alpha,
                    &a,
                    &b.view(),
                    self.beta,
                    Some(&c0),
                )
                .unwrap();
                e.compare(&to_f64(&out[q * cn..(q + 1) * cn]), T::TOLERANCE)
            })
            .collect()
    }

    pub fn assert_matches_oracle(&self, what: &str, out: &[T]) {
        for (q, d) in self.check(out).iter().enumerate() {
            assert_passed(what, q, d);
        }
    }
}

// ---------------------------------------------------------------- kron1

pub struct Kron1Case<T> {
    pub op_a: MatrixOp,
    pub m_a: usize,
    pub n_a: usize,
    pub alpha: T,
    pub beta: T,
    pub a: Vec<T>,
    pub x: Vec<T>,
    pub y0: Vec<T>,
    pub count: usize,
}

impl<T: Element> Kron1Case<T> {
    pub fn random(
        rng: &mut ChaCha8Rng,
        op_a: MatrixOp,
        (m_a, n_a): (usize, usize),
        alpha: T,
        beta: T,
        count: usize,
    ) -> Self {
        Kron1Case {
            op_a,
            m_a,
            n_a,
            alpha,
            beta,
            a: uniform(rng, m_a * n_a),
            x: uniform(rng, n_a * count),
            y0: uniform(rng, m_a * count),
            count,
        }
    }

    pub fn run(&self, pad: Pad) -> Vec<T> {
        let extra = if pad == Pad::Padded { 5 } else { 0 };
        let (xl, yl) = (VectorLayout::new(self.n_a), VectorLayout::new(self.m_a));
        let (xs, ys) = (self.n_a + extra, self.m_a + extra + 2);
        let a = Stored::new(self.op_a, self.m_a, self.n_a, &self.a, pad);
        let xbuf = pack(&self.x, &xl, self.count, xs, nan()).unwrap();
        let mut ybuf = pack(&self.y0, &yl, self.count, ys, nan()).unwrap();
        let xb = BatchView::new(&xbuf, xl, self.count, xs).unwrap();
        let mut yb = BatchViewMut::new(&mut ybuf, yl, self.count, ys).unwrap();
        kron1(
            self.op_a,
            self.m_a,
            self.n_a,
            self.alpha,
            &a.view(),
            &xb,
            self.beta,
            &mut yb,
        )
        .unwrap();
        unpack(&yb.as_view())
    }

    pub fn check(&self, out: &[T]) -> Vec<Discrepancy> {
        let a = Stored::new(self.op_a, self.m_a, self.n_a, &self.a, Pad::Tight);
        (0..self.count)
            .map(|q| {
                let x = &self.x[q * self.n_a..(q + 1) * self.n_a];
                let y0 = &self.y0[q * self.m_a..(q + 1) * self.m_a];
                let e = oracle::expected_kron1(
                    self.op_a,
                    self.alpha,
                    &a.view(),
                    x,
                    self.beta,
                    Some(y0),
                )
                .unwrap();
                e.compare(
                    &to_f64(&out[q * self.m_a..(q + 1) * self.m_a]),
                    T::TOLERANCE,
                )
            })
            .collect()
    }

    pub fn assert_matches_oracle(&self, what: &str, out: &[T]) {
        for (q, d) in self.check(out).iter().enumerate() {
            assert_passed(what, q, d);
        }
    }
}

/// Runs `f` inside a dedicated rayon pool with `threads` workers.
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

/// `kron3` rebuilt from public calls: `kron2` over every plane into an
/// explicit tmp buffer, then one `gemm_a` per column index `j` applying
/// `op(C)^T` to the strided `tmp(:, j, :)` slices. Tight layouts only.
pub fn compose_kron3<T: Element>(case: &Kron3Case<T>) -> Vec<T> {
    let p = &case.problem;
    let n = case.count;
    let a = Stored::new(p.op_a, p.m_a, p.n_a, &case.a, Pad::Tight);
    let b = Stored::new(p.op_b, p.m_b, p.n_b, &case.b, Pad::Tight);
    let c = Stored::new(p.op_c, p.m_c, p.n_c, &case.c, Pad::Tight);
    let (yl, ys) = array_layout(p.m_a, p.m_b, p.m_c, Pad::Tight);
    let mut y = pack(&case.y0, &yl, n, ys, nan()).unwrap();

    // Stage 1: every plane of every X^p is one 2-D batch entry.
    let planes = n * p.n_c;
    let plane_in = MatrixLayout::tight(p.n_a, p.n_b);
    let plane_out = MatrixLayout::tight(p.m_a, p.m_b);
    let mut tmp = vec![nan::<T>(); planes * p.m_a * p.m_b];
    {
        let xb = BatchView::packed(&case.x, plane_in, planes).unwrap();
        let mut tb = BatchViewMut::packed(&mut tmp, plane_out, planes).unwrap();
        let p2 = KronProblem2D::new(p.m_a, p.n_a, p.m_b, p.n_b).with_ops(p.op_a, p.op_b, NO_TRANS);
        kron2(&p2, &a.view(), &b.view(), &xb, &mut tb).unwrap();
    }

    // Stage 2: Y^p(:, j, :) <- alpha tmp(:, j, :) op(C)^T + beta Y^p(:, j, :)
    let op_ct = if p.op_c.is_transposed() {
        NO_TRANS
    } else {
        TRANS
    };
    let tmp_entry = p.m_a * p.m_b * p.n_c;
    for j in 0..p.m_b {
        let ab = BatchView::new(
            &tmp[j * p.m_a..],
            MatrixLayout::new(p.m_a, p.n_c, p.m_a * p.m_b),
            n,
            tmp_entry,
        )
        .unwrap();
        let mut cb = BatchViewMut::new(
            &mut y[j * yl.ld..],
            MatrixLayout::new(p.m_a, p.m_c, yl.ld2),
            n,
            ys,
        )
        .unwrap();
        gemm_a(
            NO_TRANS,
            op_ct,
            p.m_a,
            p.m_c,
            p.n_c,
            p.alpha,
            &ab,
            &c.view(),
            p.beta,
            &mut cb,
            0,
        )
        .unwrap();
    }
    y
}
