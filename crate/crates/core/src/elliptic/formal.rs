//! Formal group expansion `w(z) = z^3 (1 + A1 z + A2 z^2 + ...)` of a
//! Weierstrass curve near the origin, and its inverse.
//!
//! With `z = -x/y` and `w = -1/y` the curve equation becomes the fixed-point
//! problem `w = z^3 + a1 z w + a2 z^2 w + a3 w^2 + a4 z w^2 + a6 w^3`. Each
//! `a_i` first appears in `A_i`, linearly and with coefficient 1, so the map
//! from `(a1, a2, a3, a4, a6)` to `(A1, ..., A6)` is triangular.

use num_rational::BigRational;
use num_traits::Zero;

use super::curve::WeierstrassCurve;
use super::{EllipticError, Result};
use crate::series::TruncatedSeries;

/// Smallest truncation order that determines every coefficient (`a6` first
/// shows up in `A6`).
pub const MIN_INVERSION_ORDER: usize = 6;

/// `w(z)` up to and including `z^(3 + order)`, over `Q`.
///
/// `w` starts at `z^3`, so the right-hand side at degree `n` only involves
/// coefficients of degree below `n`; the fixed point is solved degree by
/// degree, carrying `w^2` and `w^3` along.
pub fn formal_w(curve: &WeierstrassCurve, order: usize) -> Vec<BigRational> {
    let len = 4 + order;
    let zero = BigRational::zero;
    let mut w = vec![zero(); len];
    let mut w2 = vec![zero(); len];
    let mut w3 = vec![zero(); len];
    w[3] = BigRational::from_integer(1.into());
    for n in 4..len {
        w2[n] = (3..=n - 3).fold(zero(), |acc, i| acc + &w[i] * &w[n - i]);
        w3[n] = (6..=n - 3).fold(zero(), |acc, i| acc + &w2[i] * &w[n - i]);
        w[n] = &curve.a1 * &w[n - 1] + &curve.a2 * &w[n - 2] + &curve.a3 * &w2[n] + &curve.a4 * &w2[n - 1]
            + &curve.a6 * &w3[n];
    }
    w
}

/// `A_1..A_order` as a [`TruncatedSeries`]; the curve must be integral.
pub fn formal_expansion(curve: &WeierstrassCurve, order: usize) -> Result<TruncatedSeries> {
    if !curve.is_integral() {
        return Err(EllipticError::NonIntegralCurve);
    }
    let w = formal_w(curve, order);
    let coefficients = w[4..]
        .iter()
        .map(|c| {
            debug_assert!(c.is_integer());
            c.to_integer()
        })
        .collect();
    Ok(TruncatedSeries::new(coefficients))
}

/// Recovers `[a1, a2, a3, a4, a6]` from `A_1..A_J`, `J >= 6`, and checks that
/// every remaining coefficient agrees with the recovered curve.
pub fn series_to_curve(series: &TruncatedSeries) -> Result<WeierstrassCurve> {
    let order = series.truncation_order();
    if order < MIN_INVERSION_ORDER {
        return Err(EllipticError::InsufficientOrder {
            needed: MIN_INVERSION_ORDER,
            got: order,
        });
    }
    let target: Vec<BigRational> = series
        .coefficients
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    let mut a: [BigRational; 5] = Default::default();
    // slot k of `a` is first visible in A_{index[k]}
    let index = [1usize, 2, 3, 4, 6];
    for (k, &i) in index.iter().enumerate() {
        a[k] = BigRational::zero();
        let trial = WeierstrassCurve::new(a[0].clone(), a[1].clone(), a[2].clone(), a[3].clone(), a[4].clone());
        let w = formal_w(&trial, i);
        a[k] = &target[i - 1] - &w[3 + i];
    }
    let [a1, a2, a3, a4, a6] = a;
    let curve = WeierstrassCurve::new(a1, a2, a3, a4, a6);
    let w = formal_w(&curve, order);
    for (j, want) in target.iter().enumerate() {
        if &w[4 + j] != want {
            return Err(EllipticError::InconsistentSeries { index: j + 1 });
        }
    }
    Ok(curve)
}

/// `A_j` values of the `a1`-only curve: `A_j = a1^j`.
#[cfg(test)]
fn geometric(a: i64, order: usize) -> Vec<num_bigint::BigInt> {
    (1..=order as u32).map(|j| num_bigint::BigInt::from(a).pow(j)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn a1_only_is_geometric() {
        let e = WeierstrassCurve::from_ints([3, 0, 0, 0, 0]);
        let s = formal_expansion(&e, 6).unwrap();
        assert_eq!(s.coefficients, geometric(3, 6));
        let back = series_to_curve(&s).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn zero_curve_gives_pure_cube() {
        let e = WeierstrassCurve::from_ints([0, 0, 0, 0, 0]);
        let s = formal_expansion(&e, 7).unwrap();
        assert!(s.coefficients.iter().all(Zero::is_zero));
        assert_eq!(series_to_curve(&s).unwrap(), e);
    }

    #[test]
    fn a4_first_appears_in_a4() {
        let e = WeierstrassCurve::from_ints([0, 0, 0, 5, 0]);
        let s = formal_expansion(&e, 6).unwrap();
        assert_eq!(s.coefficients[..4], [0, 0, 0, 5].map(BigInt::from));
    }

    #[test]
    fn low_order_closed_forms() {
        let e = WeierstrassCurve::from_ints([2, -3, 5, 7, -11]);
        let s = formal_expansion(&e, 3).unwrap();
        // A1 = a1, A2 = a1^2 + a2, A3 = a1^3 + 2 a1 a2 + a3
        assert_eq!(s.coefficients[0], BigInt::from(2));
        assert_eq!(s.coefficients[1], BigInt::from(4 - 3));
        assert_eq!(s.coefficients[2], BigInt::from(8 + 2 * 2 * -3 + 5));
    }

    #[test]
    fn order_five_is_not_enough() {
        let s = formal_expansion(&WeierstrassCurve::from_ints([1, 1, 1, 1, 1]), 5).unwrap();
        assert_eq!(
            series_to_curve(&s),
            Err(EllipticError::InsufficientOrder { needed: 6, got: 5 })
        );
    }

    #[test]
    fn foreign_series_rejected() {
        let mut s = formal_expansion(&WeierstrassCurve::from_ints([1, 0, 2, 0, 1]), 8).unwrap();
        s.coefficients[4] += 1;
        assert_eq!(
            series_to_curve(&s),
            Err(EllipticError::InconsistentSeries { index: 5 })
        );
    }

    #[test]
    fn rational_curves_need_integral_models() {
        let e: WeierstrassCurve = "[1/2,0,0,0,0]".parse().unwrap();
        assert_eq!(formal_expansion(&e, 6), Err(EllipticError::NonIntegralCurve));
    }
}
