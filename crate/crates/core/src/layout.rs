//! Column-major strided views over caller-owned flat buffers.
//!
//! Every view is a descriptor (shape plus strides) over a slice. Indexing is
//! 0-based:
//!
//! * matrix element `(i, j)` lives at `i + j * ld`,
//! * 3-D element `(i, j, k)` lives at `i + j * ld + k * ld2`,
//! * batch entry `p` starts at `p * stride`.
//!
//! Constructors validate all stride invariants, so kernels can rely on any
//! view they receive.

use std::fmt::Debug;

use crate::error::LayoutError;

/// The `op` mapping applied to a matrix argument, BLAS style.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum MatrixOp {
    #[default]
    NoTranspose,
    Transpose,
    /// Conjugate transpose. Identical to [`MatrixOp::Transpose`] for real types.
    ConjTranspose,
}

impl MatrixOp {
    pub const ALL: [MatrixOp; 3] = [
        MatrixOp::NoTranspose,
        MatrixOp::Transpose,
        MatrixOp::ConjTranspose,
    ];

    #[inline]
    pub fn is_transposed(self) -> bool {
        !matches!(self, MatrixOp::NoTranspose)
    }

    /// Parses the BLAS character codes `N`, `T` and `C` (case-insensitive).
    pub fn from_blas_char(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'N' => Some(MatrixOp::NoTranspose),
            'T' => Some(MatrixOp::Transpose),
            'C' => Some(MatrixOp::ConjTranspose),
            _ => None,
        }
    }
}

/// Dimensions of `op(M)` for a stored `stored_rows x stored_cols` matrix `M`.
#[inline]
pub fn op_dims(op: MatrixOp, stored_rows: usize, stored_cols: usize) -> (usize, usize) {
    if op.is_transposed() {
        (stored_cols, stored_rows)
    } else {
        (stored_rows, stored_cols)
    }
}

/// Shape descriptor of a single batch entry.
pub trait EntryLayout: Copy + Debug + Send + Sync {
    /// Checks the stride invariants of one entry.
    fn validate(&self) -> Result<(), LayoutError>;

    /// Elements reserved by one entry: `ld * cols` (2-D), `ld2 * dim3` (3-D).
    /// A batch stride must be at least this large.
    fn footprint(&self) -> Result<usize, LayoutError>;

    /// Elements actually addressed by one entry, counted from its first
    /// element. Zero when the entry has no elements.
    fn span(&self) -> Result<usize, LayoutError>;

    /// Number of logical elements.
    fn len(&self) -> usize;

    /// Calls `f` with the offset of every logical element, in `vec` order
    /// (first index fastest).
    fn visit_offsets(&self, f: &mut dyn FnMut(usize));

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A contiguous vector (the entry type of `kron1` batches).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VectorLayout {
    pub len: usize,
}

impl VectorLayout {
    pub fn new(len: usize) -> Self {
        VectorLayout { len }
    }
}

impl EntryLayout for VectorLayout {
    fn validate(&self) -> Result<(), LayoutError> {
        Ok(())
    }
    fn footprint(&self) -> Result<usize, LayoutError> {
        Ok(self.len)
    }
    fn span(&self) -> Result<usize, LayoutError> {
        Ok(self.len)
    }
    fn len(&self) -> usize {
        self.len
    }
    fn visit_offsets(&self, f: &mut dyn FnMut(usize)) {
        (0..self.len).for_each(f)
    }
}

/// A column-major `rows x cols` matrix with leading dimension `ld`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatrixLayout {
    pub rows: usize,
    pub cols: usize,
    pub ld: usize,
}

impl MatrixLayout {
    pub fn new(rows: usize, cols: usize, ld: usize) -> Self {
        MatrixLayout { rows, cols, ld }
    }

    /// Layout with the smallest legal leading dimension.
    pub fn tight(rows: usize, cols: usize) -> Self {
        MatrixLayout {
            rows,
            cols,
            ld: rows.max(1),
        }
    }

    #[inline(always)]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i + j * self.ld
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }
}

impl EntryLayout for MatrixLayout {
    fn validate(&self) -> Result<(), LayoutError> {
        let required = self.rows.max(1);
        if self.ld < required {
            return Err(LayoutError::LeadingDimension {
                ld: self.ld,
                required,
            });
        }
        Ok(())
    }

    fn footprint(&self) -> Result<usize, LayoutError> {
        self.ld.checked_mul(self.cols).ok_or(LayoutError::Overflow)
    }

    fn span(&self) -> Result<usize, LayoutError> {
        if self.rows == 0 || self.cols == 0 {
            return Ok(0);
        }
        self.ld
            .checked_mul(self.cols - 1)
            .and_then(|v| v.checked_add(self.rows))
            .ok_or(LayoutError::Overflow)
    }

    fn len(&self) -> usize {
        self.rows * self.cols
    }

    fn visit_offsets(&self, f: &mut dyn FnMut(usize)) {
        for j in 0..self.cols {
            for i in 0..self.rows {
                f(self.index(i, j));
            }
        }
    }
}

/// A column-major `dim1 x dim2 x dim3` array with column stride `ld` and
/// plane stride `ld2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Array3Layout {
    pub dim1: usize,
    pub dim2: usize,
    pub dim3: usize,
    pub ld: usize,
    pub ld2: usize,
}

impl Array3Layout {
    pub fn new(dim1: usize, dim2: usize, dim3: usize, ld: usize, ld2: usize) -> Self {
        Array3Layout {
            dim1,
            dim2,
            dim3,
            ld,
            ld2,
        }
    }

    pub fn tight(dim1: usize, dim2: usize, dim3: usize) -> Self {
        let ld = dim1.max(1);
        Array3Layout {
            dim1,
            dim2,
            dim3,
            ld,
            ld2: ld * dim2,
        }
    }

    #[inline(always)]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        i + j * self.ld + k * self.ld2
    }

    pub fn dims(&self) -> [usize; 3] {
        [self.dim1, self.dim2, self.dim3]
    }

    /// Layout of a single plane, relative to its first element.
    pub fn plane(&self) -> MatrixLayout {
        MatrixLayout::new(self.dim1, self.dim2, self.ld)
    }
}

impl EntryLayout for Array3Layout {
    fn validate(&self) -> Result<(), LayoutError> {
        let required = self.dim1.max(1);
        if self.ld < required {
            return Err(LayoutError::LeadingDimension {
                ld: self.ld,
                required,
            });
        }
        let required = self
            .ld
            .checked_mul(self.dim2)
            .ok_or(LayoutError::Overflow)?;
        if self.ld2 < required {
            return Err(LayoutError::PlaneStride {
                ld2: self.ld2,
                required,
            });
        }
        Ok(())
    }

    fn footprint(&self) -> Result<usize, LayoutError> {
        self.ld2.checked_mul(self.dim3).ok_or(LayoutError::Overflow)
    }

    fn span(&self) -> Result<usize, LayoutError> {
        if self.dim1 == 0 || self.dim2 == 0 || self.dim3 == 0 {
            return Ok(0);
        }
        let planes = self.ld2.checked_mul(self.dim3 - 1);
        let cols = self.ld.checked_mul(self.dim2 - 1);
        planes
            .zip(cols)
            .and_then(|(p, c)| p.checked_add(c))
            .and_then(|v| v.checked_add(self.dim1))
            .ok_or(LayoutError::Overflow)
    }

    fn len(&self) -> usize {
        self.dim1 * self.dim2 * self.dim3
    }

    fn visit_offsets(&self, f: &mut dyn FnMut(usize)) {
        for k in 0..self.dim3 {
            for j in 0..self.dim2 {
                for i in 0..self.dim1 {
                    f(self.index(i, j, k));
                }
            }
        }
    }
}

/// Checks a uniform-stride batch of `count` entries shaped like `layout`
/// over a buffer of `buffer_len` elements.
///
/// Fails on the first violated invariant: entry strides, then
/// `stride >= footprint` (entries never overlap), then the buffer length,
/// which must cover `(count - 1) * stride + span` elements.
pub fn validate_batch<L: EntryLayout>(
    layout: &L,
    count: usize,
    stride: usize,
    buffer_len: usize,
) -> Result<(), LayoutError> {
    layout.validate()?;
    let footprint = layout.footprint()?;
    if stride < footprint {
        return Err(LayoutError::BatchStride { stride, footprint });
    }
    let required = required_len(layout, count, stride)?;
    if buffer_len < required {
        return Err(LayoutError::BufferTooShort {
            len: buffer_len,
            required,
        });
    }
    Ok(())
}

fn required_len<L: EntryLayout>(
    layout: &L,
    count: usize,
    stride: usize,
) -> Result<usize, LayoutError> {
    let span = layout.span()?;
    if count == 0 || span == 0 {
        return Ok(0);
    }
    stride
        .checked_mul(count - 1)
        .and_then(|v| v.checked_add(span))
        .ok_or(LayoutError::Overflow)
}

/// Scatters logical values (entry after entry, each in `vec` order) into a
/// new strided buffer. Padding elements are set to `fill`.
pub fn pack<T: Copy, L: EntryLayout>(
    values: &[T],
    layout: &L,
    count: usize,
    stride: usize,
    fill: T,
) -> Result<Vec<T>, LayoutError> {
    validate_batch(layout, count, stride, usize::MAX)?;
    let per = layout.len();
    assert_eq!(values.len(), per * count, "need len() values per entry");
    let mut buf = vec![fill; required_len(layout, count, stride)?];
    for (p, chunk) in values.chunks(per.max(1)).take(count).enumerate() {
        let base = p * stride;
        let mut it = chunk.iter();
        layout.visit_offsets(&mut |o| buf[base + o] = *it.next().expect("len() values"));
    }
    Ok(buf)
}

/// Gathers the logical values of every entry of a batch, in `vec` order.
pub fn unpack<T: Copy, L: EntryLayout>(batch: &BatchView<'_, T, L>) -> Vec<T> {
    let mut out = Vec::with_capacity(batch.layout.len() * batch.count);
    for p in 0..batch.count {
        let base = p * batch.stride;
        batch
            .layout
            .visit_offsets(&mut |o| out.push(batch.data[base + o]));
    }
    out
}

/// Read-only column-major matrix view.
#[derive(Debug, Clone, Copy)]
pub struct MatrixView<'a, T> {
    data: &'a [T],
    layout: MatrixLayout,
}

impl<'a, T: Copy> MatrixView<'a, T> {
    pub fn new(data: &'a [T], rows: usize, cols: usize, ld: usize) -> Result<Self, LayoutError> {
        Self::from_layout(data, MatrixLayout::new(rows, cols, ld))
    }

    /// View with `ld = max(rows, 1)`.
    pub fn tight(data: &'a [T], rows: usize, cols: usize) -> Result<Self, LayoutError> {
        Self::from_layout(data, MatrixLayout::tight(rows, cols))
    }

    pub fn from_layout(data: &'a [T], layout: MatrixLayout) -> Result<Self, LayoutError> {
        validate_batch(&layout, 1, layout.footprint()?, data.len())?;
        Ok(MatrixView { data, layout })
    }

    #[inline(always)]
    pub fn get(&self, i: usize, j: usize) -> T {
        debug_assert!(i < self.layout.rows && j < self.layout.cols);
        self.data[self.layout.index(i, j)]
    }

    pub fn rows(&self) -> usize {
        self.layout.rows
    }
    pub fn cols(&self) -> usize {
        self.layout.cols
    }
    pub fn ld(&self) -> usize {
        self.layout.ld
    }
    pub fn layout(&self) -> MatrixLayout {
        self.layout
    }
    pub fn as_slice(&self) -> &'a [T] {
        self.data
    }
}

/// Mutable column-major matrix view.
#[derive(Debug)]
pub struct MatrixViewMut<'a, T> {
    data: &'a mut [T],
    layout: MatrixLayout,
}

impl<'a, T: Copy> MatrixViewMut<'a, T> {
    pub fn new(
        data: &'a mut [T],
        rows: usize,
        cols: usize,
        ld: usize,
    ) -> Result<Self, LayoutError> {
        Self::from_layout(data, MatrixLayout::new(rows, cols, ld))
    }

    pub fn tight(data: &'a mut [T], rows: usize, cols: usize) -> Result<Self, LayoutError> {
        Self::from_layout(data, MatrixLayout::tight(rows, cols))
    }

    pub fn from_layout(data: &'a mut [T], layout: MatrixLayout) -> Result<Self, LayoutError> {
        validate_batch(&layout, 1, layout.footprint()?, data.len())?;
        Ok(MatrixViewMut { data, layout })
    }

    #[inline(always)]
    pub fn get(&self, i: usize, j: usize) -> T {
        debug_assert!(i < self.layout.rows && j < self.layout.cols);
        self.data[self.layout.index(i, j)]
    }

    #[inline(always)]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        debug_assert!(i < self.layout.rows && j < self.layout.cols);
        self.data[self.layout.index(i, j)] = v;
    }

    pub fn rows(&self) -> usize {
        self.layout.rows
    }
    pub fn cols(&self) -> usize {
        self.layout.cols
    }
    pub fn layout(&self) -> MatrixLayout {
        self.layout
    }
    pub fn as_view(&self) -> MatrixView<'_, T> {
        MatrixView {
            data: self.data,
            layout: self.layout,
        }
    }
}

/// Read-only column-major 3-D array view.
#[derive(Debug, Clone, Copy)]
pub struct Array3View<'a, T> {
    data: &'a [T],
    layout: Array3Layout,
}

impl<'a, T: Copy> Array3View<'a, T> {
    pub fn new(data: &'a [T], layout: Array3Layout) -> Result<Self, LayoutError> {
        validate_batch(&layout, 1, layout.footprint()?, data.len())?;
        Ok(Array3View { data, layout })
    }

    pub fn tight(
        data: &'a [T],
        dim1: usize,
        dim2: usize,
        dim3: usize,
    ) -> Result<Self, LayoutError> {
        Self::new(data, Array3Layout::tight(dim1, dim2, dim3))
    }

    #[inline(always)]
    pub fn get(&self, i: usize, j: usize, k: usize) -> T {
        debug_assert!(i < self.layout.dim1 && j < self.layout.dim2 && k < self.layout.dim3);
        self.data[self.layout.index(i, j, k)]
    }

    /// Plane `k` as a `dim1 x dim2` matrix view.
    pub fn plane(&self, k: usize) -> MatrixView<'a, T> {
        assert!(k < self.layout.dim3, "plane {k} out of range");
        let layout = self.layout.plane();
        let span = layout.span().expect("validated layout");
        let data = if span == 0 {
            &self.data[..0]
        } else {
            let start = k * self.layout.ld2;
            &self.data[start..start + span]
        };
        MatrixView { data, layout }
    }

    pub fn dims(&self) -> [usize; 3] {
        self.layout.dims()
    }
    pub fn layout(&self) -> Array3Layout {
        self.layout
    }
    pub fn as_slice(&self) -> &'a [T] {
        self.data
    }
}

/// Mutable column-major 3-D array view.
#[derive(Debug)]
pub struct Array3ViewMut<'a, T> {
    data: &'a mut [T],
    layout: Array3Layout,
}

impl<'a, T: Copy> Array3ViewMut<'a, T> {
    pub fn new(data: &'a mut [T], layout: Array3Layout) -> Result<Self, LayoutError> {
        validate_batch(&layout, 1, layout.footprint()?, data.len())?;
        Ok(Array3ViewMut { data, layout })
    }

    #[inline(always)]
    pub fn get(&self, i: usize, j: usize, k: usize) -> T {
        debug_assert!(i < self.layout.dim1 && j < self.layout.dim2 && k < self.layout.dim3);
        self.data[self.layout.index(i, j, k)]
    }

    #[inline(always)]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: T) {
        debug_assert!(i < self.layout.dim1 && j < self.layout.dim2 && k < self.layout.dim3);
        self.data[self.layout.index(i, j, k)] = v;
    }

    pub fn dims(&self) -> [usize; 3] {
        self.layout.dims()
    }
    pub fn layout(&self) -> Array3Layout {
        self.layout
    }
    pub fn as_view(&self) -> Array3View<'_, T> {
        Array3View {
            data: self.data,
            layout: self.layout,
        }
    }
}

/// A read-only batch of `count` entries spaced `stride` elements apart.
#[derive(Debug, Clone, Copy)]
pub struct BatchView<'a, T, L> {
    data: &'a [T],
    layout: L,
    count: usize,
    stride: usize,
}

impl<'a, T: Copy, L: EntryLayout> BatchView<'a, T, L> {
    pub fn new(data: &'a [T], layout: L, count: usize, stride: usize) -> Result<Self, LayoutError> {
        validate_batch(&layout, count, stride, data.len())?;
        Ok(BatchView {
            data,
            layout,
            count,
            stride,
        })
    }

    /// Batch whose stride equals the entry footprint.
    pub fn packed(data: &'a [T], layout: L, count: usize) -> Result<Self, LayoutError> {
        let stride = layout.footprint()?;
        Self::new(data, layout, count, stride)
    }

    pub fn layout(&self) -> &L {
        &self.layout
    }
    pub fn count(&self) -> usize {
        self.count
    }
    pub fn stride(&self) -> usize {
        self.stride
    }
    pub fn as_slice(&self) -> &'a [T] {
        self.data
    }

    /// Elements of entry `p`, starting at its first element and covering
    /// its span.
    pub fn entry(&self, p: usize) -> &'a [T] {
        assert!(p < self.count, "batch entry {p} out of range");
        let start = p * self.stride;
        let span = self.layout.span().expect("validated layout");
        &self.data[start..start + span]
    }
}

impl<'a, T: Copy> BatchView<'a, T, MatrixLayout> {
    pub fn matrix(&self, p: usize) -> MatrixView<'a, T> {
        MatrixView {
            data: self.entry(p),
            layout: self.layout,
        }
    }
}

impl<'a, T: Copy> BatchView<'a, T, Array3Layout> {
    pub fn array(&self, p: usize) -> Array3View<'a, T> {
        Array3View {
            data: self.entry(p),
            layout: self.layout,
        }
    }
}

/// A mutable batch of `count` entries spaced `stride` elements apart.
#[derive(Debug)]
pub struct BatchViewMut<'a, T, L> {
    data: &'a mut [T],
    layout: L,
    count: usize,
    stride: usize,
}

impl<'a, T: Copy, L: EntryLayout> BatchViewMut<'a, T, L> {
    pub fn new(
        data: &'a mut [T],
        layout: L,
        count: usize,
        stride: usize,
    ) -> Result<Self, LayoutError> {
        validate_batch(&layout, count, stride, data.len())?;
        Ok(BatchViewMut {
            data,
            layout,
            count,
            stride,
        })
    }

    pub fn packed(data: &'a mut [T], layout: L, count: usize) -> Result<Self, LayoutError> {
        let stride = layout.footprint()?;
        Self::new(data, layout, count, stride)
    }

    pub fn layout(&self) -> &L {
        &self.layout
    }
    pub fn count(&self) -> usize {
        self.count
    }
    pub fn stride(&self) -> usize {
        self.stride
    }
    pub fn as_slice(&self) -> &[T] {
        self.data
    }

    pub fn as_view(&self) -> BatchView<'_, T, L> {
        BatchView {
            data: self.data,
            layout: self.layout,
            count: self.count,
            stride: self.stride,
        }
    }

    pub fn entry_mut(&mut self, p: usize) -> &mut [T] {
        assert!(p < self.count, "batch entry {p} out of range");
        let start = p * self.stride;
        let span = self.layout.span().expect("validated layout");
        &mut self.data[start..start + span]
    }

    /// The addressed region of the buffer: entries `0..count` and the
    /// padding between them.
    pub(crate) fn used_mut(&mut self) -> &mut [T] {
        let span = self.layout.span().expect("validated layout");
        let end = if self.count == 0 || span == 0 {
            0
        } else {
            (self.count - 1) * self.stride + span
        };
        &mut self.data[..end]
    }
}

impl<'a, T: Copy> BatchViewMut<'a, T, MatrixLayout> {
    pub fn matrix_mut(&mut self, p: usize) -> MatrixViewMut<'_, T> {
        let layout = self.layout;
        MatrixViewMut {
            data: self.entry_mut(p),
            layout,
        }
    }
}

impl<'a, T: Copy> BatchViewMut<'a, T, Array3Layout> {
    pub fn array_mut(&mut self, p: usize) -> Array3ViewMut<'_, T> {
        let layout = self.layout;
        Array3ViewMut {
            data: self.entry_mut(p),
            layout,
        }
    }
}
