//! Newform-side coefficient vectors, the linear family between two of them,
//! and a weighted `l^2` stand-in for the Petersson distance.
//!
//! The distance is `sqrt(sum_{n <= N} n^-2 (a_f(n) - a_g(n))^2)`. The weight
//! `n^-2` compensates the `O(n)` growth of weight-2 coefficients so the
//! profile stays summable; it is a proxy, not the Petersson integral.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::elliptic::{l_coefficients, local_data, EllipticError, ReductionKind, WeierstrassCurve};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModularError {
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
    #[error("curve has additive reduction at {0}")]
    NotSemistable(u64),
    #[error("combined leading coefficient vanishes")]
    DegenerateCombination,
    #[error("vectors have different lengths ({left} and {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("family parameter {0} is outside [0, 1]")]
    ParameterOutOfRange(String),
}

pub type Result<T> = std::result::Result<T, ModularError>;

/// Truncated `q`-expansion `a(1), ..., a(n_max)` with its level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientVector {
    #[serde(with = "crate::json::bigint")]
    pub level: BigInt,
    pub n_max: usize,
    #[serde(with = "crate::json::rational_vec")]
    pub coeffs: Vec<BigRational>,
}

impl CoefficientVector {
    pub fn new(level: BigInt, coeffs: Vec<BigRational>) -> Self {
        Self {
            level,
            n_max: coeffs.len(),
            coeffs,
        }
    }

    pub fn from_ints(level: i64, coeffs: &[i64]) -> Self {
        Self::new(
            level.into(),
            coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect(),
        )
    }

    /// `a(n)`, 1-based.
    pub fn a(&self, n: usize) -> &BigRational {
        &self.coeffs[n - 1]
    }

    fn check_len(&self, other: &Self) -> Result<()> {
        if self.n_max != other.n_max {
            return Err(ModularError::LengthMismatch {
                left: self.n_max,
                right: other.n_max,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricConfig {
    /// Only `a(n)` with `n <= n_max` enter the distance.
    pub n_max: usize,
    /// `w_n = n^-weight_exponent`.
    pub weight_exponent: f64,
}

impl MetricConfig {
    pub fn new(n_max: usize) -> Self {
        Self {
            n_max,
            weight_exponent: 2.0,
        }
    }

    pub fn weight(&self, n: usize) -> f64 {
        (n as f64).powf(-self.weight_exponent)
    }
}

/// Coefficient vector attached to a semi-stable curve: its L-series
/// coefficients at level equal to the conductor.
pub fn newform_vector(curve: &WeierstrassCurve, n_max: usize) -> Result<CoefficientVector> {
    let local = local_data(curve)?;
    if let Some(r) = local.bad.iter().find(|r| r.kind != ReductionKind::Multiplicative) {
        return Err(ModularError::NotSemistable(r.prime));
    }
    Ok(l_coefficients(curve, n_max)?)
}

fn check_t(t: &BigRational) -> Result<()> {
    if *t < BigRational::zero() || *t > BigRational::one() {
        return Err(ModularError::ParameterOutOfRange(t.to_string()));
    }
    Ok(())
}

/// `(1 - t) f1 + t f2` without normalization.
pub fn combine_unscaled(f1: &CoefficientVector, f2: &CoefficientVector, t: &BigRational) -> Result<CoefficientVector> {
    f1.check_len(f2)?;
    check_t(t)?;
    let s = BigRational::one() - t;
    let coeffs = f1
        .coeffs
        .iter()
        .zip(&f2.coeffs)
        .map(|(a, b)| &s * a + t * b)
        .collect();
    let level = if t.is_zero() {
        f1.level.clone()
    } else if t.is_one() {
        f2.level.clone()
    } else {
        f1.level.lcm(&f2.level)
    };
    Ok(CoefficientVector::new(level, coeffs))
}

/// Member `t` of the linear family, rescaled so that `a(1) = 1`.
///
/// Off the endpoints the level is the lcm of the two levels.
pub fn combine(f1: &CoefficientVector, f2: &CoefficientVector, t: &BigRational) -> Result<CoefficientVector> {
    let mut v = combine_unscaled(f1, f2, t)?;
    let lead = v.coeffs.first().cloned().unwrap_or_default();
    if lead.is_zero() {
        return Err(ModularError::DegenerateCombination);
    }
    if !lead.is_one() {
        v.coeffs.iter_mut().for_each(|c| *c /= &lead);
    }
    Ok(v)
}

pub fn distance(f: &CoefficientVector, g: &CoefficientVector, cfg: &MetricConfig) -> Result<f64> {
    f.check_len(g)?;
    let sum: f64 = f
        .coeffs
        .iter()
        .zip(&g.coeffs)
        .enumerate()
        .take(cfg.n_max)
        .map(|(i, (a, b))| {
            let d = (a - b).to_f64().unwrap_or(f64::INFINITY);
            cfg.weight(i + 1) * d * d
        })
        .sum();
    Ok(sum.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn endpoints_and_midpoint() {
        let f1 = CoefficientVector::from_ints(11, &[1, -2, -1, 2]);
        let f2 = CoefficientVector::from_ints(37, &[1, 0, -3, 2]);
        assert_eq!(combine(&f1, &f2, &rat(0, 1)).unwrap(), f1);
        assert_eq!(combine(&f1, &f2, &rat(1, 1)).unwrap(), f2);
        let mid = combine(&f1, &f2, &rat(1, 2)).unwrap();
        assert_eq!(*mid.a(2), rat(-1, 1));
        assert_eq!(mid.level, 407.into());
    }

    #[test]
    fn clearance_and_degeneracy() {
        let f1 = CoefficientVector::from_ints(1, &[1, 4]);
        let f2 = CoefficientVector::from_ints(1, &[-1, 0]);
        assert_eq!(combine(&f1, &f2, &rat(1, 2)), Err(ModularError::DegenerateCombination));
        let v = combine(&f1, &f2, &rat(1, 4)).unwrap();
        assert_eq!(v.coeffs, vec![rat(1, 1), rat(6, 1)]);
        assert!(matches!(combine(&f1, &f2, &rat(3, 2)), Err(ModularError::ParameterOutOfRange(_))));
    }

    #[test]
    fn single_term_distance() {
        let f = CoefficientVector::from_ints(1, &[1, 3, 0]);
        let g = CoefficientVector::from_ints(1, &[1, 0, 0]);
        let cfg = MetricConfig::new(3);
        assert!((distance(&f, &g, &cfg).unwrap() - 1.5).abs() < 1e-15);
        assert_eq!(distance(&f, &f, &cfg).unwrap(), 0.0);
    }

    #[test]
    fn curve_vectors() {
        let e = WeierstrassCurve::from_ints([1, 1, 0, -11, 0]);
        let v = newform_vector(&e, 20).unwrap();
        assert_eq!(v, l_coefficients(&e, 20).unwrap());
        assert_eq!(v.level, 33.into());
        let additive = WeierstrassCurve::from_ints([0, 0, 1, 0, -7]);
        assert_eq!(newform_vector(&additive, 5), Err(ModularError::NotSemistable(3)));
    }
}
