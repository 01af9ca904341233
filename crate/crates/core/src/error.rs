use thiserror::Error;

/// Everything that can go wrong while parsing, transforming, embedding or
/// authenticating an image.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed Netpbm header: {0}")]
    MalformedHeader(String),

    #[error("truncated raster: expected {expected} samples, found {found}")]
    TruncatedRaster { expected: usize, found: usize },

    #[error("unsupported maxval {0} (covers and secrets must be 8-bit, maxval <= 255)")]
    UnsupportedMaxval(u32),

    #[error("stego container must have maxval 65535, found {0}")]
    NotAStegoContainer(u32),

    #[error("zero image dimension ({width}x{height})")]
    ZeroDimension { width: usize, height: usize },

    #[error("dimensions must be even, got {width}x{height}")]
    OddDimension { width: usize, height: usize },

    #[error("sample {value} at index {index} exceeds maxval {maxval}")]
    SampleOutOfRange {
        index: usize,
        value: u32,
        maxval: u32,
    },

    #[error("sample {value} cannot be stored in the biased 16-bit container")]
    ContainerOverflow { value: i32 },

    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize, usize),
        right: (usize, usize, usize),
    },

    #[error("beta {0} out of range 0..=255")]
    BetaOutOfRange(i32),

    #[error("subbands do not reconstruct to integers at block ({row}, {col})")]
    NonIntegerReconstruction { row: usize, col: usize },

    #[error("cover authentication failed at block ({row}, {col}) of plane {plane}: {reason}")]
    Tampered {
        plane: usize,
        row: usize,
        col: usize,
        reason: &'static str,
    },

    #[error("digit count {0} is not a multiple of 4")]
    RaggedDigits(usize),

    #[error("invalid quaternary digit {0}")]
    InvalidDigit(u8),

    #[error("capacity exceeded: {required} digits required, {available} available")]
    CapacityExceeded { required: usize, available: usize },

    #[error("no WASTIR payload or wrong key: {0}")]
    NoPayload(&'static str),

    #[error("raw mode requires an explicit digit count")]
    MissingDigitCount,

    #[error("image payload of {width}x{height} does not match {len} payload bytes")]
    FrameSizeMismatch { width: u32, height: u32, len: usize },

    #[error("negative MSE {0}")]
    NegativeMse(f64),

    #[error("reference image has zero energy")]
    ZeroEnergy,
}

pub type Result<T> = std::result::Result<T, Error>;
