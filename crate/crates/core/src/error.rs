use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("zero divisor query in a division algebra")]
    ZeroInverse,

    #[error("point outside the open unit ball: |x| = {modulus}")]
    OutsideBall { modulus: f64 },

    #[error("reciprocal undefined at 0: N(f) vanishes (|a0| = {modulus})")]
    ReciprocalUndefined { modulus: f64 },

    #[error("expected a purely imaginary unit octonion")]
    NotImaginaryUnit,

    #[error("identity not testable at this point: {reason}")]
    IdentityNotTestable { reason: &'static str },

    #[error("functional requires real a0 (imaginary part {imag})")]
    NonRealConstantTerm { imag: f64 },

    #[error("hypothesis violated: f(0) outside the half-space (Re a0 = {re})")]
    OutsideHalfspace { re: f64 },

    #[error("parameter {name} = {value} outside {range}")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("probe misuse: r = {r} inside the verified region (radius {radius})")]
    ProbeMisuse { r: f64, radius: f64 },

    #[error(
        "coefficient condition L(d) <= m violated, theorem inapplicable: L = {l_value} > m = {m}"
    )]
    LConditionViolated { l_value: f64, m: f64 },

    #[error("no sign change on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("corpus generation failed: {0}")]
    Corpus(String),

    #[error("serialization: {0}")]
    Serde(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_range(
    name: &'static str,
    value: f64,
    range: &'static str,
    ok: bool,
) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange { name, value, range })
    }
}
