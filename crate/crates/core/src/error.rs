use thiserror::Error;

use crate::polarimeter::MeasurementSetting;

/// Errors raised when a value violates one of the invariants of the
/// two-qubit toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite component in {what}")]
    NonFinite { what: &'static str },

    #[error("ket is not normalized: norm = {norm}")]
    NotNormalized { norm: f64 },

    #[error("matrix is not Hermitian: max |m - m^dagger| = {residual:e}")]
    NonHermitian { residual: f64 },

    #[error("trace must be 1: trace = {trace}")]
    TraceViolation { trace: f64 },

    #[error("matrix has a negative eigenvalue: min eigenvalue = {min_eigenvalue:e}")]
    NegativeSpectrum { min_eigenvalue: f64 },

    #[error("matrix is not unitary: max |u u^dagger - 1| = {residual:e}")]
    NotUnitary { residual: f64 },

    #[error("mixture has no terms")]
    EmptyMixture,

    #[error("mixture weight is negative: {weight}")]
    NegativeWeight { weight: f64 },

    #[error("mixture weights must sum to 1: sum = {sum}")]
    WeightSum { sum: f64 },

    #[error("Werner parameter must lie in [0, 1]: p = {p}")]
    WernerOutOfRange { p: f64 },

    #[error("sector fractions must each lie in [0, 1] and sum to 1: {f_singlet} + {f_b} + {f_c}")]
    PartitionSum { f_singlet: f64, f_b: f64, f_c: f64 },

    #[error("sectors B and C must be balanced: f_b = {f_b}, f_c = {f_c}")]
    UnbalancedPartition { f_b: f64, f_c: f64 },

    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),

    #[error("coincidence record for {setting} has zero total")]
    ZeroTotal { setting: MeasurementSetting },

    #[error("coincidence counts sum to {sum} but total is {total}")]
    CountMismatch { sum: u64, total: u64 },

    #[error("witness estimate needs correlated settings, got {setting}")]
    UncorrelatedSetting { setting: MeasurementSetting },

    #[error("witness estimate needs exactly one record for {setting}")]
    MissingOrDuplicateSetting { setting: MeasurementSetting },
}

pub type Result<T> = std::result::Result<T, Error>;
