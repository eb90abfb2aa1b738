//! Batched Kronecker product action for small dense operands.
//!
//! The component matrices `A`, `B` (and `C` in 3-D) are fixed for a whole
//! batch while the operands `X^p` vary. For every batch entry `p` the kernels
//! compute
//!
//! ```text
//! 1-D:  Y^p <- alpha * op(A) X^p                      + beta * Y^p
//! 2-D:  Y^p <- alpha * op(A) op(X^p) op(B)^T          + beta * Y^p
//! 3-D:  vec(Y^p) <- alpha * (op(C) x op(B) x op(A)) vec(X^p) + beta * vec(Y^p)
//! ```
//!
//! without ever forming the Kronecker product matrix. All buffers are
//! column-major and owned by the caller; the library only describes them
//! through strided views (see [`layout`]).
//!
//! The [`oracle`] module holds brute-force reference implementations that
//! build the explicit product matrix. They exist to check the kernels.

pub mod element;
pub mod error;
pub mod kernels;
pub mod layout;
pub mod oracle;

pub use element::Element;
pub use error::{KronError, LayoutError};
pub use kernels::{
    gemm_a, kron1, kron2, kron3, kron3_workspace_size, KronProblem2D, KronProblem3D, Workspace,
};
pub use layout::{
    op_dims, pack, unpack, validate_batch, Array3Layout, Array3View, Array3ViewMut, BatchView,
    BatchViewMut, EntryLayout, MatrixLayout, MatrixOp, MatrixView, MatrixViewMut, VectorLayout,
};
