//! Elliptic curves over `Q`: invariants, formal groups, local reduction,
//! L-series coefficients, Tate parameters and the bad-prime factorization
//! record.

pub mod curve;
pub mod factor;
pub mod formal;
pub(crate) mod fp;
pub mod lseries;
pub mod qparam;
pub mod tate;

use thiserror::Error;

pub use curve::{CurveInvariants, WeierstrassCurve};
pub use factor::{factorize, FactorizationRecord, Projection};
pub use formal::{formal_expansion, formal_w, series_to_curve, MIN_INVERSION_ORDER};
pub use lseries::{ap_bruteforce, ap_count, conductor, l_coefficients, local_data, LocalData, AP_LIMIT};
pub use qparam::{
    composition_residual, inverse_composition, j_q_expansion, j_q_expansion_via_e6, tate_parameter,
    tate_parameter_coefficients, TateParameter,
};
pub use tate::{tate_reduce, Kodaira, ReductionData, ReductionKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EllipticError {
    #[error("curve is singular (zero discriminant)")]
    SingularCurve,
    #[error("curve has non-integral coefficients")]
    NonIntegralCurve,
    #[error("series truncated at order {got}; at least {needed} is needed")]
    InsufficientOrder { needed: usize, got: usize },
    #[error("series coefficient A{index} is not that of any Weierstrass curve")]
    InconsistentSeries { index: usize },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("cannot parse curve: {0}")]
    Parse(String),
    #[error("prime {p} exceeds the point-counting limit {limit}")]
    PrimeTooLarge { p: u64, limit: u64 },
    #[error("v_p(j) = {0:?} is not negative; no Tate parameter exists")]
    BadReductionRequired(Option<i64>),
    #[error("the curves share no multiplicative prime")]
    NoCommonBadPrime,
    #[error("curve has additive reduction at {0}")]
    NotSemistable(u64),
    #[error("could not fully factor the discriminant {0}")]
    FactorizationIncomplete(String),
}

pub type Result<T> = std::result::Result<T, EllipticError>;
