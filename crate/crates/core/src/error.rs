use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A size or count argument was zero or otherwise degenerate.
    InvalidDimension(&'static str),
    /// A scalar argument fell outside its admissible range.
    OutOfRange { what: &'static str, value: f64 },
    /// A point does not lie in the requested bin.
    NotInBin,
    /// Input data contained NaN or infinity.
    NonFinite(&'static str),
    /// Two inputs that must agree in length did not.
    LengthMismatch { expected: usize, found: usize },
    /// No bin is eligible for the principled weighting schemes.
    NoEligibleBins,
    /// The schedule produced fewer than one bin per axis.
    HorizonTooSmall(u64),
    /// The decision passed to `update` is not one of the policy's arms.
    UnknownArm(f64),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidDimension(what) => write!(f, "invalid dimension: {what}"),
            Error::OutOfRange { what, value } => write!(f, "{what} out of range: {value}"),
            Error::NotInBin => write!(f, "point does not lie in the given bin"),
            Error::NonFinite(what) => write!(f, "non-finite value in {what}"),
            Error::LengthMismatch { expected, found } => {
                write!(f, "length mismatch: expected {expected}, found {found}")
            }
            Error::NoEligibleBins => write!(
                f,
                "no bin has misidentification probability at or below xi; increase n or h"
            ),
            Error::HorizonTooSmall(t) => write!(f, "horizon {t} too small for the schedule"),
            Error::UnknownArm(y) => write!(f, "decision {y} is not an arm of this policy"),
        }
    }
}

impl core::error::Error for Error {}
