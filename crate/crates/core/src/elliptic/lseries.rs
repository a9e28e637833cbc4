//! Traces of Frobenius and Dirichlet coefficients of `L(s, E)`.

use num_bigint::{BigInt, BigUint};
use num_prime::nt_funcs::factors;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::curve::WeierstrassCurve;
use super::fp;
use super::tate::{integral_discriminant, tate_reduce, ReductionData, ReductionKind};
use super::{EllipticError, Result};
use crate::modular::CoefficientVector;
use crate::padic::{is_prime, residue_u64};

/// Largest prime at which `a_p` is computed by counting points.
pub const AP_LIMIT: u64 = 10_000;

/// Bad-prime data of a curve, sorted by prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalData {
    pub bad: Vec<ReductionData>,
    pub conductor: BigInt,
}

impl LocalData {
    pub fn at(&self, p: u64) -> Option<&ReductionData> {
        self.bad.iter().find(|r| r.prime == p)
    }

    pub fn is_semistable(&self) -> bool {
        self.bad.iter().all(|r| r.kind == ReductionKind::Multiplicative)
    }

    pub fn multiplicative_primes(&self) -> Vec<u64> {
        self.bad
            .iter()
            .filter(|r| r.kind == ReductionKind::Multiplicative)
            .map(|r| r.prime)
            .collect()
    }
}

/// Runs Tate's algorithm at every prime dividing the discriminant of the
/// integral model.
pub fn local_data(curve: &WeierstrassCurve) -> Result<LocalData> {
    curve.nonsingular_invariants()?;
    let disc = integral_discriminant(curve);
    let (primes, rest) = factors(disc.magnitude().clone(), None);
    if let Some(rest) = rest {
        let rest: Vec<String> = rest.iter().map(BigUint::to_string).collect();
        return Err(EllipticError::FactorizationIncomplete(rest.join("*")));
    }
    let primes: Vec<u64> = primes
        .keys()
        .map(|p| {
            p.to_u64()
                .ok_or_else(|| EllipticError::FactorizationIncomplete(p.to_string()))
        })
        .collect::<Result<_>>()?;
    let reductions: Vec<ReductionData> = primes
        .par_iter()
        .map(|&p| tate_reduce(curve, p))
        .collect::<Result<_>>()?;
    let bad: Vec<ReductionData> = reductions
        .into_iter()
        .filter(|r| r.kind != ReductionKind::Good)
        .collect();
    let conductor = bad
        .iter()
        .map(|r| BigInt::from(r.prime).pow(r.conductor_exponent))
        .product();
    Ok(LocalData { bad, conductor })
}

pub fn conductor(curve: &WeierstrassCurve) -> Result<BigInt> {
    Ok(local_data(curve)?.conductor)
}

fn residues(model: &WeierstrassCurve, p: u64) -> [u64; 5] {
    model
        .coefficients()
        .map(|a| residue_u64(&a.to_integer(), p))
}

/// `a_p` of a model with good reduction at `p` (coefficients already mod `p`).
fn ap_good(a: [u64; 5], p: u64) -> i64 {
    if p == 2 {
        return p as i64 + 1 - count_points(a, p) as i64;
    }
    let [a1, a2, a3, a4, a6] = a;
    let m = |x, y| fp::mulmod(x, y, p);
    let b2 = (m(a1, a1) + m(4, a2)) % p;
    let b4 = (m(2, a4) + m(a1, a3)) % p;
    let b6 = (m(a3, a3) + m(4, a6)) % p;
    let cubic = [b6, m(2, b4), b2, 4 % p];
    -(0..p).map(|x| fp::legendre(fp::eval(&cubic, x, p), p)).sum::<i64>()
}

/// Projective points of `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` over
/// `F_p`, by enumerating every affine pair.
fn count_points(a: [u64; 5], p: u64) -> u64 {
    let [a1, a2, a3, a4, a6] = a;
    let m = |x, y| fp::mulmod(x, y, p);
    let mut count = 1;
    for x in 0..p {
        let rhs = fp::eval(&[a6, a4, a2, 1], x, p);
        let lin = (m(a1, x) + a3) % p;
        for y in 0..p {
            if (m(y, y) + m(lin, y)) % p == rhs {
                count += 1;
            }
        }
    }
    count
}

/// A model integral at `p` whose reduction is the reduction type at `p`.
fn model_at(curve: &WeierstrassCurve, p: u64) -> Result<(WeierstrassCurve, Option<ReductionData>)> {
    let (integral, _) = curve.integral_model();
    let delta = integral_discriminant(curve);
    if residue_u64(&delta, p) != 0 {
        return Ok((integral, None));
    }
    let r = tate_reduce(curve, p)?;
    Ok((r.minimal_model.clone(), Some(r)))
}

fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(EllipticError::NotPrime(p));
    }
    if p > AP_LIMIT {
        return Err(EllipticError::PrimeTooLarge { p, limit: AP_LIMIT });
    }
    Ok(())
}

/// `a_p`: `p + 1 - #E(F_p)` at good primes, `+1`/`-1` for split/non-split
/// multiplicative reduction and `0` for additive reduction.
pub fn ap_count(curve: &WeierstrassCurve, p: u64) -> Result<i64> {
    check_prime(p)?;
    curve.nonsingular_invariants()?;
    let (model, local) = model_at(curve, p)?;
    match local.and_then(|r| r.bad_ap()) {
        Some(ap) => Ok(ap),
        None => Ok(ap_good(residues(&model, p), p)),
    }
}

/// `p + 1 - #E(F_p)` on the minimal model by enumerating all `p^2` affine
/// pairs. At bad primes the singular point is counted as well, which makes
/// the result the same `±1`/`0` that [`ap_count`] reports.
pub fn ap_bruteforce(curve: &WeierstrassCurve, p: u64) -> Result<i64> {
    check_prime(p)?;
    let r = tate_reduce(curve, p)?;
    Ok(p as i64 + 1 - count_points(residues(&r.minimal_model, p), p) as i64)
}

fn smallest_prime_factors(n: usize) -> Vec<usize> {
    let mut spf = vec![0; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            for j in (i..=n).step_by(i) {
                if spf[j] == 0 {
                    spf[j] = i;
                }
            }
        }
    }
    spf
}

/// `a(1..=n_max)` of `L(s, E) = sum a(n) n^-s`, with the curve's conductor
/// as level.
pub fn l_coefficients(curve: &WeierstrassCurve, n_max: usize) -> Result<CoefficientVector> {
    let local = local_data(curve)?;
    let spf = smallest_prime_factors(n_max);
    let primes: Vec<u64> = (2..=n_max).filter(|&n| spf[n] == n).map(|n| n as u64).collect();
    if let Some(&p) = primes.last() {
        check_prime(p)?;
    }
    let aps: Vec<i64> = primes
        .par_iter()
        .map(|&p| match local.at(p) {
            Some(r) => Ok(r.bad_ap().expect("bad prime")),
            None => ap_count(curve, p),
        })
        .collect::<Result<_>>()?;

    let mut a = vec![0i64; n_max + 1];
    if n_max >= 1 {
        a[1] = 1;
    }
    for (&p, &ap) in primes.iter().zip(&aps) {
        let good = local.at(p).is_none();
        let (p, mut prev, mut cur) = (p as usize, 1i64, ap);
        let mut q = p;
        loop {
            a[q] = cur;
            if q > n_max / p {
                break;
            }
            q *= p;
            let next = if good { ap * cur - p as i64 * prev } else { ap * cur };
            prev = cur;
            cur = next;
        }
    }
    for n in 2..=n_max {
        let p = spf[n];
        let mut pk = p;
        while (n / pk).is_multiple_of(p) {
            pk *= p;
        }
        if pk != n {
            a[n] = a[pk] * a[n / pk];
        }
    }
    let coeffs = a[1..]
        .iter()
        .map(|&x| BigRational::from_integer(BigInt::from(x)))
        .collect();
    Ok(CoefficientVector::new(local.conductor, coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_point_counts() {
        let e = WeierstrassCurve::from_ints([0, 0, 1, -1, 0]);
        assert_eq!(ap_bruteforce(&e, 2).unwrap(), -2);
        assert_eq!(ap_count(&e, 2).unwrap(), -2);
        let f = WeierstrassCurve::from_ints([0, -1, 1, 0, 0]);
        assert_eq!(ap_bruteforce(&f, 3).unwrap(), -1);
        assert_eq!(ap_count(&f, 3).unwrap(), -1);
    }

    #[test]
    fn character_sum_agrees_with_enumeration() {
        for a in [[0, 0, 1, -1, 0], [1, -1, 1, -3, 5], [0, 1, 0, -7, 2], [1, 0, 0, 4, -9]] {
            let e = WeierstrassCurve::from_ints(a);
            for p in [2u64, 3, 5, 7, 11, 13, 37, 53, 97] {
                assert_eq!(ap_count(&e, p).unwrap(), ap_bruteforce(&e, p).unwrap(), "{e} at {p}");
            }
        }
    }

    #[test]
    fn hecke_recursion_and_multiplicativity() {
        let e = WeierstrassCurve::from_ints([0, 0, 1, -1, 0]);
        let v = l_coefficients(&e, 30).unwrap();
        let a = |n: usize| v.a(n).to_integer();
        assert_eq!(a(1), 1.into());
        assert_eq!(a(2), (-2).into());
        assert_eq!(a(4), 2.into());
        assert_eq!(a(6), a(2) * a(3));
        assert_eq!(v.level, 37.into());
        // 37a1: q - 2q^2 - 3q^3 + 2q^4 - 2q^5 + 6q^6 - q^7 + 6q^9 + 4q^10
        let known = [1, -2, -3, 2, -2, 6, -1, 0, 6, 4];
        for (n, k) in known.iter().enumerate() {
            assert_eq!(a(n + 1), (*k).into(), "a({})", n + 1);
        }
    }

    #[test]
    fn multiplicative_prime_powers() {
        // 11a3 is split at 11: a(11^k) = 1
        let e = WeierstrassCurve::from_ints([0, -1, 1, 0, 0]);
        let v = l_coefficients(&e, 121).unwrap();
        assert_eq!(v.a(11).to_integer(), 1.into());
        assert_eq!(v.a(121).to_integer(), 1.into());
        assert_eq!(v.level, 11.into());
    }

    #[test]
    fn hasse_bound() {
        let e = WeierstrassCurve::from_ints([1, -1, 1, -3, 5]);
        let local = local_data(&e).unwrap();
        for p in (2..500u64).filter(|&p| is_prime(p) && local.at(p).is_none()) {
            let ap = ap_count(&e, p).unwrap();
            assert!((ap * ap) as u64 <= 4 * p, "a_{p} = {ap}");
        }
    }

    #[test]
    fn conductors_of_table_curves() {
        let cases: &[([i64; 5], u64)] = &[
            ([0, -1, 1, 0, 0], 11),
            ([1, 1, 1, -10, -10], 15),
            ([0, 1, 1, -9, -15], 19),
            ([0, 1, 0, 4, 4], 20),
            ([0, -1, 0, -4, 4], 24),
            ([1, 0, 1, -5, -8], 26),
            ([0, 0, 1, 0, -7], 27),
            ([0, 0, 0, -1, 0], 32),
            ([1, 1, 0, -11, 0], 33),
            ([0, 0, 0, 0, 1], 36),
            ([0, 0, 1, -1, 0], 37),
            ([0, 1, 0, 3, -1], 44),
            ([0, 1, 0, -4, -4], 48),
            ([1, -1, 0, -2, -1], 49),
            ([1, 0, 1, -1, -2], 50),
            ([1, -1, 0, 12, 8], 54),
            ([0, 0, 0, 1, 0], 64),
            ([0, 1, 0, -2, 0], 96),
            ([0, 0, 0, -2, 0], 256),
        ];
        for (a, n) in cases {
            let e = WeierstrassCurve::from_ints(*a);
            assert_eq!(conductor(&e).unwrap(), BigInt::from(*n), "{e}");
        }
    }

    #[test]
    fn limits() {
        let e = WeierstrassCurve::from_ints([0, 0, 1, -1, 0]);
        assert_eq!(ap_count(&e, 10_007), Err(EllipticError::PrimeTooLarge { p: 10_007, limit: AP_LIMIT }));
        assert_eq!(ap_count(&e, 9), Err(EllipticError::NotPrime(9)));
    }
}
