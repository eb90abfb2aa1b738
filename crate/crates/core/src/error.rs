use thiserror::Error;

/// A strided view whose descriptor does not describe a valid layout.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LayoutError {
    #[error("ld < max(rows, 1) ({ld} < {required})")]
    LeadingDimension { ld: usize, required: usize },
    #[error("ld2 < ld·dim2 ({ld2} < {required})")]
    PlaneStride { ld2: usize, required: usize },
    #[error("batch_stride < entry footprint ({stride} < {footprint})")]
    BatchStride { stride: usize, footprint: usize },
    #[error("buffer too short: {len} elements, layout needs {required}")]
    BufferTooShort { len: usize, required: usize },
    #[error("layout size overflows usize")]
    Overflow,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KronError {
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error("{operand} is {found:?} but the problem needs {expected:?}")]
    MatrixShape {
        operand: &'static str,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("{operand} is {found:?} but the problem needs {expected:?}")]
    ArrayShape {
        operand: &'static str,
        expected: [usize; 3],
        found: [usize; 3],
    },
    #[error("batch counts differ: input has {input}, output has {output}")]
    BatchCount { input: usize, output: usize },
    #[error("workspace holds {capacity} elements but {required} are required")]
    WorkspaceTooSmall { required: usize, capacity: usize },
    #[error("problem size overflows usize")]
    Overflow,
}
