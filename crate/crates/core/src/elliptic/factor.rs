//! Pairs of semi-stable curves glued over a common multiplicative prime.
//!
//! At such a prime both curves are Tate curves `G_m / q^Z`; the record keeps
//! the two Tate parameters, the two conductors and accessors for the two
//! coordinate projections.

use num_bigint::BigInt;
use serde::Serialize;

use super::curve::WeierstrassCurve;
use super::lseries::{local_data, LocalData};
use super::qparam::{tate_parameter, TateParameter};
use super::tate::ReductionKind;
use super::{EllipticError, Result};

/// One side of the fibre product.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Projection {
    pub curve: WeierstrassCurve,
    #[serde(with = "crate::json::bigint")]
    pub level: BigInt,
    pub q: TateParameter,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorizationRecord {
    pub prime: u64,
    first: Projection,
    second: Projection,
}

impl FactorizationRecord {
    pub fn proj1(&self) -> &Projection {
        &self.first
    }

    pub fn proj2(&self) -> &Projection {
        &self.second
    }
}

fn semistable(curve: &WeierstrassCurve) -> Result<LocalData> {
    let local = local_data(curve)?;
    match local.bad.iter().find(|r| r.kind != ReductionKind::Multiplicative) {
        Some(r) => Err(EllipticError::NotSemistable(r.prime)),
        None => Ok(local),
    }
}

/// Glues `e1` and `e2` at their smallest common multiplicative prime, with
/// Tate parameters expanded to `terms` terms.
pub fn factorize(e1: &WeierstrassCurve, e2: &WeierstrassCurve, terms: usize) -> Result<FactorizationRecord> {
    let l1 = semistable(e1)?;
    let l2 = semistable(e2)?;
    let m2 = l2.multiplicative_primes();
    let p = l1
        .multiplicative_primes()
        .into_iter()
        .find(|p| m2.contains(p))
        .ok_or(EllipticError::NoCommonBadPrime)?;
    let side = |curve: &WeierstrassCurve, local: LocalData| -> Result<Projection> {
        let q = tate_parameter(&curve.j_invariant()?, terms, p)?;
        Ok(Projection {
            curve: curve.clone(),
            level: local.conductor,
            q,
        })
    };
    Ok(FactorizationRecord {
        prime: p,
        first: side(e1, l1)?,
        second: side(e2, l2)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal() {
        let e = WeierstrassCurve::from_ints([0, -1, 1, 0, 0]);
        let r = factorize(&e, &e, 8).unwrap();
        assert_eq!(r.prime, 11);
        assert_eq!(r.proj1().q, r.proj2().q);
        assert_eq!(r.proj1().level, 11.into());
    }

    #[test]
    fn shared_eleven() {
        // conductors 11 and 33 = 3 * 11
        let e1 = WeierstrassCurve::from_ints([0, -1, 1, 0, 0]);
        let e2 = WeierstrassCurve::from_ints([1, 1, 0, -11, 0]);
        let r = factorize(&e1, &e2, 8).unwrap();
        assert_eq!(r.prime, 11);
        assert_eq!(r.proj2().level, 33.into());
        assert!(r.proj1().q.valuation > 0 && r.proj2().q.valuation > 0);
    }

    #[test]
    fn failures() {
        let e11 = WeierstrassCurve::from_ints([0, -1, 1, 0, 0]);
        let e37 = WeierstrassCurve::from_ints([0, 0, 1, -1, 0]);
        assert_eq!(factorize(&e11, &e37, 4), Err(EllipticError::NoCommonBadPrime));
        // conductor 27: additive at 3
        let e27 = WeierstrassCurve::from_ints([0, 0, 1, 0, -7]);
        assert_eq!(factorize(&e27, &e11, 4), Err(EllipticError::NotSemistable(3)));
    }
}
