use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter `{name}` must be {requirement}, got {value}")]
    Domain {
        name: &'static str,
        requirement: &'static str,
        value: f64,
    },
    #[error("degenerate denominator in {context} (|value| = {value:e})")]
    DegenerateDenominator { context: &'static str, value: f64 },
    #[error("pole of cot(omega * xbar): |sin| = {value:e}")]
    Pole { value: f64 },
    #[error("feedback has no influence at omega = {omega} (slope {slope:e})")]
    NoFeedbackInfluence { omega: f64, slope: f64 },
    #[error("fundamental matrix overflow at xbar = {x}")]
    Overflow { x: f64 },
    #[error("boundary system is numerically full rank (normalized residual {residual:e}); not an eigenvalue")]
    FullRank { residual: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
