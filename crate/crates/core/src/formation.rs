//! A unit-valued periodic function mod `p*` built from normalized
//! L-coefficients, the arccos recovery of those coefficients, and the
//! counting checks of the residue-class formation mod `p*`.
//!
//! With `n2 = sum_{m=2}^{n*} a(m)` the value at `n` is
//! `chi(n) = exp(i pi a(n) / n2)`. Angles are kept as exact rationals
//! (multiples of `pi`), so the recovery `a(n) = (n2/pi) arccos(Re chi(n))`
//! can be carried out exactly. `arccos` only sees `|angle|` and only modulo
//! `2`, so the sign comes from `Im chi(n)` and the identity holds whenever
//! `|a(n)| <= |n2|` — always true for nonnegative coefficients.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::padic::is_prime;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormationError {
    #[error("coefficients a(2..n*) sum to zero")]
    ZeroSum,
    #[error("no coefficients given; n* must be at least 2")]
    Empty,
    #[error("{0}")]
    DomainError(String),
    #[error("{class} is not a unit class mod {modulus}")]
    InvalidClass { class: u64, modulus: u64 },
}

pub type Result<T> = std::result::Result<T, FormationError>;

/// `a(n) / n2` for `n = 2..=n*`, with the unreduced denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalized {
    pub n2: BigInt,
    pub values: Vec<BigRational>,
}

/// `coeffs[k]` is `a(k + 2)`.
pub fn normalize(coeffs: &[BigInt]) -> Result<Normalized> {
    if coeffs.is_empty() {
        return Err(FormationError::Empty);
    }
    let n2: BigInt = coeffs.iter().sum();
    if n2.is_zero() {
        return Err(FormationError::ZeroSum);
    }
    let values = coeffs
        .iter()
        .map(|a| BigRational::new(a.clone(), n2.clone()))
        .collect();
    Ok(Normalized { n2, values })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterTable {
    pub n_star: u64,
    pub p_star: u64,
    pub n2: BigInt,
    /// `a(2), ..., a(n*)`.
    pub numerators: Vec<BigInt>,
}

/// `x` reduced modulo 2 into `(-1, 1]`.
fn wrap_angle(x: &BigRational) -> BigRational {
    let two = BigRational::from_integer(2.into());
    let mut r = x - (x / &two).floor() * &two; // [0, 2)
    if r > BigRational::one() {
        r -= two;
    }
    r
}

impl CharacterTable {
    pub fn build(coeffs: &[BigInt]) -> Result<Self> {
        let Normalized { n2, .. } = normalize(coeffs)?;
        let n_star = coeffs.len() as u64 + 1;
        let mut table = Self {
            n_star,
            p_star: 0,
            n2,
            numerators: coeffs.to_vec(),
        };
        table.p_star = minimal_prime(&table);
        Ok(table)
    }

    /// `chi(n) = exp(i pi angle(n))`; `None` off the units mod `p*`.
    pub fn angle(&self, n: u64) -> Option<BigRational> {
        let r = n % self.p_star;
        if r == 0 {
            return None;
        }
        if (2..=self.n_star).contains(&r) {
            Some(BigRational::new(self.numerators[(r - 2) as usize].clone(), self.n2.clone()))
        } else {
            // 1 and the residues between n* and p* carry the trivial value
            Some(BigRational::zero())
        }
    }

    pub fn value(&self, n: u64) -> (f64, f64) {
        match self.angle(n) {
            Some(theta) => {
                let t = theta.to_f64().unwrap_or(0.0) * PI;
                (t.cos(), t.sin())
            }
            None => (0.0, 0.0),
        }
    }

    /// `(n2/pi) arccos(Re chi(n))` signed by `Im chi(n)`, in exact arithmetic.
    pub fn recovered(&self, n: u64) -> BigRational {
        let theta = self.angle(n).unwrap_or_default();
        BigRational::from_integer(self.n2.clone()) * wrap_angle(&theta)
    }
}

/// Smallest prime `p > n*` on whose units the periodic extension is not
/// identically 1.
///
/// The angles sum to 1, so they cannot all be even integers and the first
/// prime always qualifies; the scan is kept for clarity.
pub fn minimal_prime(table: &CharacterTable) -> u64 {
    let principal = table.numerators.iter().all(|a| {
        let q = BigRational::new(a.clone(), table.n2.clone());
        q.is_integer() && q.to_integer().is_even()
    });
    let mut p = table.n_star + 1;
    loop {
        if is_prime(p) && !principal {
            return p;
        }
        if principal && p > 4 * table.n_star + 8 {
            // unreachable for tables built by `normalize`
            return p;
        }
        p += 1;
    }
}

fn check_s(s: f64) -> Result<()> {
    if s.is_nan() || s <= 2.0 {
        return Err(FormationError::DomainError(format!("s = {s} is not above 2")));
    }
    Ok(())
}

/// `sum_{n=2}^{n*} a(n) n^-s`.
pub fn truncated_l(coeffs: &[BigInt], s: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .map(|(k, a)| a.to_f64().unwrap_or(f64::NAN) * ((k + 2) as f64).powf(-s))
        .sum()
}

/// `(n2/pi) sum arccos(Re chi(n)) n^-s` with the sign of each term taken
/// from `Im chi(n)`, using exact rational angles.
pub fn recovery_sum(table: &CharacterTable, s: f64) -> Result<f64> {
    check_s(s)?;
    Ok((2..=table.n_star)
        .map(|n| table.recovered(n).to_f64().unwrap_or(f64::NAN) * (n as f64).powf(-s))
        .sum())
}

/// The same display evaluated literally in floating point, magnitudes only.
pub fn recovery_sum_float(table: &CharacterTable, s: f64) -> Result<f64> {
    check_s(s)?;
    let n2 = table.n2.to_f64().unwrap_or(f64::NAN);
    Ok((2..=table.n_star)
        .map(|n| (n2 / PI) * table.value(n).0.clamp(-1.0, 1.0).acos() * (n as f64).powf(-s))
        .sum())
}

/// `C sum_{n>n*} n^{1-sigma} <= C n*^{2-sigma} / (sigma - 2)`.
pub fn tail_bound(n_star: u64, sigma: f64, growth: f64) -> Result<f64> {
    check_s(sigma)?;
    Ok(growth * (n_star as f64).powf(2.0 - sigma) / (sigma - 2.0))
}

/// Positive integers coprime to `p*`, sorted into classes mod `p*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Formation {
    pub p_star: u64,
    pub n_star: u64,
}

impl Formation {
    pub fn new(p_star: u64, n_star: u64) -> Result<Self> {
        if !is_prime(p_star) || p_star <= n_star {
            return Err(FormationError::DomainError(format!(
                "p* = {p_star} must be a prime above n* = {n_star}"
            )));
        }
        Ok(Self { p_star, n_star })
    }

    pub fn classes(&self) -> impl Iterator<Item = u64> {
        1..self.p_star
    }

    fn check_class(&self, h: u64) -> Result<()> {
        if h == 0 || h >= self.p_star {
            return Err(FormationError::InvalidClass {
                class: h,
                modulus: self.p_star,
            });
        }
        Ok(())
    }
}

/// Prime sieve reused across counting queries.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    composite: Vec<bool>,
}

impl PrimeTable {
    pub fn new(limit: u64) -> Self {
        let n = limit as usize;
        let mut composite = vec![false; n + 1];
        composite[0] = true;
        if n >= 1 {
            composite[1] = true;
        }
        let mut i = 2;
        while i * i <= n {
            if !composite[i] {
                for j in (i * i..=n).step_by(i) {
                    composite[j] = true;
                }
            }
            i += 1;
        }
        Self { composite }
    }

    pub fn limit(&self) -> u64 {
        self.composite.len() as u64 - 1
    }

    pub fn is_prime(&self, n: u64) -> bool {
        !self.composite[n as usize]
    }
}

/// `N_H(x)` and `pi_H(x)`: members and primes `<= x` in the class `h`.
pub fn class_counts(f: &Formation, h: u64, x: u64, primes: &PrimeTable) -> Result<(u64, u64)> {
    f.check_class(h)?;
    if x > primes.limit() {
        return Err(FormationError::DomainError(format!(
            "x = {x} exceeds the sieve limit {}",
            primes.limit()
        )));
    }
    let n = if x >= h { (x - h) / f.p_star + 1 } else { 0 };
    let pi = (h..=x)
        .step_by(f.p_star as usize)
        .filter(|&y| primes.is_prime(y))
        .count() as u64;
    Ok((n, pi))
}

/// `max_{x <= x_max} |N_H(x) - x/p*|` for every class, by a direct sweep.
pub fn axiom_a_errors(f: &Formation, x_max: u64) -> Vec<f64> {
    let p = f.p_star;
    f.classes()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&h| {
            let mut count = 0u64;
            let mut worst = 0.0f64;
            for x in 1..=x_max {
                if x % p == h {
                    count += 1;
                }
                worst = worst.max((count as f64 - x as f64 / p as f64).abs());
            }
            worst
        })
        .collect()
}

/// `pi_H(x) phi(p*) ln x / x` per class; tends to 1 for every class.
pub fn pnt_ratios(f: &Formation, primes: &PrimeTable) -> Vec<f64> {
    let x = primes.limit();
    let phi = (f.p_star - 1) as f64;
    let mut per_class = vec![0u64; f.p_star as usize];
    for y in 2..=x {
        if primes.is_prime(y) {
            per_class[(y % f.p_star) as usize] += 1;
        }
    }
    f.classes()
        .map(|h| per_class[h as usize] as f64 * phi * (x as f64).ln() / x as f64)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FormationReport {
    pub p_star: u64,
    pub n_star: u64,
    #[serde(with = "crate::json::bigint")]
    pub n2: BigInt,
    pub s: f64,
    pub recovery_sum: f64,
    pub truncated_l: f64,
    pub tail_bound: f64,
    #[serde(rename = "axiomA_max_err")]
    pub axiom_a_max_err: f64,
    pub pnt_ratios: Vec<f64>,
}

/// Everything the `formation` command prints. `growth` defaults to
/// `max |a(n)| / n` over the supplied coefficients.
pub fn formation_report(
    coeffs: &[BigInt],
    s: f64,
    growth: Option<f64>,
    axiom_x: u64,
    pnt_x: u64,
) -> Result<FormationReport> {
    let table = CharacterTable::build(coeffs)?;
    let growth = growth.unwrap_or_else(|| {
        coeffs
            .iter()
            .enumerate()
            .map(|(k, a)| a.abs().to_f64().unwrap_or(f64::INFINITY) / (k + 2) as f64)
            .fold(0.0, f64::max)
    });
    let f = Formation::new(table.p_star, table.n_star)?;
    let primes = PrimeTable::new(pnt_x);
    Ok(FormationReport {
        p_star: table.p_star,
        n_star: table.n_star,
        n2: table.n2.clone(),
        s,
        recovery_sum: recovery_sum(&table, s)?,
        truncated_l: truncated_l(coeffs, s),
        tail_bound: tail_bound(table.n_star, s, growth)?,
        axiom_a_max_err: axiom_a_errors(&f, axiom_x).into_iter().fold(0.0, f64::max),
        pnt_ratios: pnt_ratios(&f, &primes),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn normalization() {
        let n = normalize(&ints(&[1, 2, 1])).unwrap();
        assert_eq!(n.n2, 4.into());
        assert_eq!(n.values, vec![rat(1, 4), rat(1, 2), rat(1, 4)]);
        assert_eq!(normalize(&ints(&[5])).unwrap().values, vec![rat(1, 1)]);
        assert_eq!(normalize(&ints(&[1, -1])), Err(FormationError::ZeroSum));
    }

    #[test]
    fn minimal_primes() {
        assert_eq!(CharacterTable::build(&ints(&[1, 2, 1])).unwrap().p_star, 5);
        assert_eq!(CharacterTable::build(&ints(&[1, 1, 1, 1, 1])).unwrap().p_star, 7);
        assert_eq!(CharacterTable::build(&ints(&[3])).unwrap().p_star, 3);
    }

    #[test]
    fn recovery_identity() {
        let c = ints(&[1, 2, 1]);
        let t = CharacterTable::build(&c).unwrap();
        let want = 1.0 / 8.0 + 2.0 / 27.0 + 1.0 / 64.0;
        assert!((recovery_sum(&t, 3.0).unwrap() - want).abs() < 1e-15);
        assert!((recovery_sum_float(&t, 3.0).unwrap() - want).abs() < 1e-12);
        assert!((truncated_l(&c, 3.0) - want).abs() < 1e-15);
        for n in 2..=4 {
            assert_eq!(t.recovered(n), BigRational::from_integer(c[n as usize - 2].clone()));
        }
    }

    #[test]
    fn single_full_angle() {
        // a(2) = n2: arccos(-1) = pi
        let t = CharacterTable::build(&ints(&[4, 0, 0])).unwrap();
        let r = recovery_sum_float(&t, 3.0).unwrap();
        assert!((r - 4.0 / 8.0).abs() < 1e-12);
    }

    #[test]
    fn negative_coefficient_keeps_sign() {
        let c = ints(&[-1, 2, 1]);
        let t = CharacterTable::build(&c).unwrap();
        assert!(t.value(2).1 < 0.0);
        assert_eq!(t.recovered(2), rat(-1, 1));
        assert!((recovery_sum(&t, 3.0).unwrap() - truncated_l(&c, 3.0)).abs() < 1e-15);
        // the magnitude-only display loses it
        assert!(recovery_sum_float(&t, 3.0).unwrap() > truncated_l(&c, 3.0));
    }

    #[test]
    fn large_coefficients_wrap() {
        // a(2)/n2 = 3 wraps to 1
        let t = CharacterTable::build(&ints(&[3, -2])).unwrap();
        assert_eq!(t.recovered(2), rat(1, 1));
    }

    #[test]
    fn tail_bounds() {
        assert!((tail_bound(10, 3.0, 1.0).unwrap() - 0.1).abs() < 1e-15);
        let a = tail_bound(10, 4.0, 1.0).unwrap();
        let b = tail_bound(20, 4.0, 1.0).unwrap();
        assert!((b / a - 0.25).abs() < 1e-12);
        assert!(tail_bound(10, 2.0, 1.0).is_err());
        assert!(tail_bound(10, 200.0, 1.0).unwrap() < 1e-100);
    }

    #[test]
    fn counting() {
        let f = Formation::new(7, 4).unwrap();
        let primes = PrimeTable::new(1000);
        assert_eq!(class_counts(&f, 1, 100, &primes).unwrap(), (15, 3)); // 29, 43, 71
        assert_eq!(class_counts(&f, 6, 5, &primes).unwrap(), (0, 0));
        assert!(class_counts(&f, 7, 5, &primes).is_err());
        assert!(axiom_a_errors(&f, 10_000).iter().all(|&e| e <= 1.0));
    }
}
