//! The `q`-expansion of `j` and its inverse, the Tate parameter
//! `q = w + 744 w^2 + 750420 w^3 + ...` with `w = 1/j`.
//!
//! Everything is generated from Eisenstein series; no coefficient of `j` is
//! tabulated.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{EllipticError, Result};
use crate::padic::{valuation_of_rational, PadicNumber};

type Series = Vec<BigInt>;

fn mul(a: &[BigInt], b: &[BigInt], len: usize) -> Series {
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `a / b` for `b` with constant term 1.
fn div(a: &[BigInt], b: &[BigInt], len: usize) -> Series {
    debug_assert!(b[0].is_one());
    let mut out = vec![BigInt::zero(); len];
    for n in 0..len {
        let mut c = a.get(n).cloned().unwrap_or_default();
        for k in 1..=n.min(b.len() - 1) {
            c -= &b[k] * &out[n - k];
        }
        out[n] = c;
    }
    out
}

/// `f(g(w))` for `g` without constant term.
fn compose(f: &[BigInt], g: &[BigInt], len: usize) -> Series {
    debug_assert!(g.first().is_none_or(Zero::is_zero));
    let mut out = vec![BigInt::zero(); len];
    for c in f.iter().take(len).rev() {
        out = mul(&out, g, len);
        out[0] += c;
    }
    out
}

fn divisor_power_sum(n: u64, k: u32) -> BigInt {
    (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| BigInt::from(d).pow(k)).sum()
}

fn eisenstein(scale: i64, k: u32, len: usize) -> Series {
    let mut e: Series = (0..len as u64)
        .map(|n| BigInt::from(scale) * divisor_power_sum(n, k))
        .collect();
    if len > 0 {
        e[0] = BigInt::one();
    }
    e
}

/// `E4 = 1 + 240 sum sigma_3(n) q^n`.
pub fn eisenstein_e4(len: usize) -> Vec<BigInt> {
    eisenstein(240, 3, len)
}

/// `E6 = 1 - 504 sum sigma_5(n) q^n`.
pub fn eisenstein_e6(len: usize) -> Vec<BigInt> {
    eisenstein(-504, 5, len)
}

/// `prod (1 - q^n)^24`, i.e. `Delta / q`.
fn eta24(len: usize) -> Series {
    let mut p = vec![BigInt::zero(); len];
    if len == 0 {
        return p;
    }
    p[0] = BigInt::one();
    for n in 1..len {
        for _ in 0..24 {
            // multiply by (1 - q^n) in place, high degree first
            for i in (n..len).rev() {
                let t = p[i - n].clone();
                p[i] -= t;
            }
        }
    }
    p
}

/// First `len` coefficients of `q j(q) = 1 + 744 q + 196884 q^2 + ...`,
/// computed as `E4^3 / prod (1 - q^n)^24`.
pub fn j_q_expansion(len: usize) -> Vec<BigInt> {
    let e4 = eisenstein_e4(len);
    let e4_3 = mul(&mul(&e4, &e4, len), &e4, len);
    div(&e4_3, &eta24(len), len)
}

/// Same coefficients by the independent route `1728 E4^3 / (E4^3 - E6^2)`.
pub fn j_q_expansion_via_e6(len: usize) -> Vec<BigInt> {
    let big = len + 1;
    let e4 = eisenstein_e4(big);
    let e6 = eisenstein_e6(big);
    let e4_3 = mul(&mul(&e4, &e4, big), &e4, big);
    let e6_2 = mul(&e6, &e6, big);
    // (E4^3 - E6^2) / (1728 q) has constant term 1
    let d: Series = (1..big)
        .map(|n| (&e4_3[n] - &e6_2[n]) / BigInt::from(1728))
        .collect();
    div(&e4_3[..len], &d, len)
}

/// `g(q) = q / j(q) = prod (1 - q^n)^24 / E4^3`, so that `1/j = q g(q)`.
fn g_series(len: usize) -> Series {
    let e4 = eisenstein_e4(len);
    let e4_3 = mul(&mul(&e4, &e4, len), &e4, len);
    div(&eta24(len), &e4_3, len)
}

/// `h_1, ..., h_terms` with `q = sum h_n w^n`, `w = 1/j`, obtained by
/// reverting `w = q g(q)` through the fixed point `q = w / g(q)`.
pub fn tate_parameter_coefficients(terms: usize) -> Vec<BigInt> {
    let len = terms + 1;
    let g = g_series(len);
    let mut w = vec![BigInt::zero(); len];
    if len > 1 {
        w[1] = BigInt::one();
    }
    let mut q = w.clone();
    for _ in 0..terms {
        let next = div(&w, &compose(&g, &q, len), len);
        if next == q {
            break;
        }
        q = next;
    }
    q.split_off(1)
}

/// `1/j(q(w))` with `q` truncated after `h.len()` terms; equals `w` up to
/// `w^{terms}` when the coefficients are right.
pub fn inverse_composition(h: &[BigInt]) -> Vec<BigInt> {
    let len = h.len() + 1;
    let q: Series = std::iter::once(BigInt::zero()).chain(h.iter().cloned()).collect();
    mul(&q, &compose(&g_series(len), &q, len), len)
}

/// Coefficients of `w j(q(w)) - 1` below `w^{terms}`; all vanish when
/// `q(w)` inverts `j`.
pub fn composition_residual(h: &[BigInt]) -> Vec<BigInt> {
    let len = h.len();
    let jq = j_q_expansion(len);
    let q: Series = std::iter::once(BigInt::zero()).chain(h.iter().cloned()).collect();
    // j(q) = (q j)(q) / q and q/w = h_1 + h_2 w + ...
    let mut r = div(&compose(&jq, &q, len), h, len);
    r[0] -= BigInt::one();
    r
}

/// Tate parameter of a `j` with `|j|_p > 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TateParameter {
    pub prime: u64,
    #[serde(with = "crate::json::rational")]
    pub j: BigRational,
    #[serde(with = "crate::json::bigint_vec")]
    pub coefficients: Vec<BigInt>,
    /// `sum_{n <= terms} h_n j^-n` in `Q_p`, correct to its precision.
    pub value: PadicNumber,
    pub valuation: i64,
}

pub fn tate_parameter(j: &BigRational, terms: usize, p: u64) -> Result<TateParameter> {
    if !crate::padic::is_prime(p) {
        return Err(EllipticError::NotPrime(p));
    }
    let vj = valuation_of_rational(j, p);
    let vw = match vj {
        Some(v) if v < 0 => -v,
        other => return Err(EllipticError::BadReductionRequired(other)),
    };
    let terms = terms.max(1);
    let h = tate_parameter_coefficients(terms);
    let w = j.recip();
    let mut sum = BigRational::zero();
    let mut pow = BigRational::one();
    for hn in &h {
        pow *= &w;
        sum += BigRational::from_integer(hn.clone()) * &pow;
    }
    let precision = u32::try_from(terms as i64 * vw).unwrap_or(u32::MAX);
    let value = PadicNumber::from_rational(p, precision, &sum).expect("prime and precision checked");
    let valuation = value.valuation().expect("h_1 = 1 keeps q nonzero");
    Ok(TateParameter {
        prime: p,
        j: j.clone(),
        coefficients: h,
        value,
        valuation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn j_expansion_two_routes() {
        let a = j_q_expansion(12);
        assert_eq!(a[..4], ints(&[1, 744, 196884, 21493760]));
        assert_eq!(a, j_q_expansion_via_e6(12));
    }

    #[test]
    fn first_tate_coefficients() {
        let h = tate_parameter_coefficients(4);
        assert_eq!(h[0], BigInt::one());
        assert_eq!(h[1], BigInt::from(744));
        assert_eq!(h[2], BigInt::from(750420));
    }

    #[test]
    fn compositions_vanish() {
        for terms in [1usize, 2, 5, 10, 14] {
            let h = tate_parameter_coefficients(terms);
            let inv = inverse_composition(&h);
            let mut w = vec![BigInt::zero(); terms + 1];
            w[1] = BigInt::one();
            assert_eq!(inv, w);
            assert!(composition_residual(&h).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn eleven_a3_parameter() {
        let j = BigRational::new((-4096).into(), 11.into());
        let t = tate_parameter(&j, 10, 11).unwrap();
        assert_eq!(t.valuation, 1);
        assert_eq!(
            tate_parameter(&j, 10, 5).unwrap_err(),
            EllipticError::BadReductionRequired(Some(0))
        );
        let j0 = BigRational::zero();
        assert_eq!(
            tate_parameter(&j0, 10, 5).unwrap_err(),
            EllipticError::BadReductionRequired(None)
        );
    }
}
