use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A tensor shape is empty or has a zero-length axis.
    ZeroDim,
    /// Two tensors (or a shape and its data) disagree in size.
    ShapeMismatch { expected: usize, actual: usize },
    /// NaN or infinity where only finite values are accepted.
    NonFiniteInput,
    /// Fewer samples than a statistic needs.
    InsufficientData { count: u64, required: u64 },
    /// A model or numeric parameter is outside its domain.
    InvalidParameter(&'static str),
    /// ReLU-only operation called on a leaky model.
    LeakNotZero,
    /// Target moments cannot come from any distribution (variance <= 0).
    InvalidMoments,
    /// The moment-matching solver could not bracket a root.
    NoSolution,
    /// A clipping range with `c_min >= c_max` or non-finite endpoints.
    InvalidRange,
    BadLevelCount(usize),
    EmptyTensor,
    /// Data is constant where spread is required.
    DegenerateData,
    EmptySamples,
    NonMonotoneResult,
    IndexOutOfRange { index: usize, n_levels: usize },
    BadMagic,
    UnsupportedVersion(u8),
    TruncatedPayload,
    HeaderInconsistent(&'static str),
    /// Bytes left over after the declared content was decoded.
    TrailingBytes(usize),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroDim => f.write_str("tensor shape is empty or has a zero dimension"),
            Error::ShapeMismatch { expected, actual } => {
                write!(f, "shape mismatch: expected {expected} elements, got {actual}")
            }
            Error::NonFiniteInput => f.write_str("input contains NaN or infinite values"),
            Error::InsufficientData { count, required } => {
                write!(f, "need at least {required} samples, have {count}")
            }
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::LeakNotZero => f.write_str("operation requires a plain ReLU model (leak = 0)"),
            Error::InvalidMoments => f.write_str("variance must be positive"),
            Error::NoSolution => f.write_str("no model matches the given moments"),
            Error::InvalidRange => f.write_str("clipping range needs finite c_min < c_max"),
            Error::BadLevelCount(n) => write!(f, "unsupported number of quantizer levels: {n}"),
            Error::EmptyTensor => f.write_str("tensor has no elements"),
            Error::DegenerateData => f.write_str("data has no spread"),
            Error::EmptySamples => f.write_str("no training samples"),
            Error::NonMonotoneResult => {
                f.write_str("quantizer design produced non-monotone levels or thresholds")
            }
            Error::IndexOutOfRange { index, n_levels } => {
                write!(f, "index {index} out of range for {n_levels} levels")
            }
            Error::BadMagic => f.write_str("bad magic bytes"),
            Error::UnsupportedVersion(v) => write!(f, "unsupported format version {v}"),
            Error::TruncatedPayload => f.write_str("data ends before the declared content"),
            Error::HeaderInconsistent(what) => write!(f, "inconsistent header: {what}"),
            Error::TrailingBytes(n) => write!(f, "{n} unexpected trailing bytes"),
        }
    }
}

impl core::error::Error for Error {}
