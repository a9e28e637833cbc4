//! Power series `u(x) = x^3 (1 + A1 x + A2 x^2 + ...)` acting on the maximal
//! ideal `pZ_p` as a dynamical system.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::padic::{PadicError, PadicNumber};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("argument of valuation {0:?} is outside the maximal ideal")]
    OutOfDomain(Option<i64>),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error("series is bound to prime {series} but argument lives over {argument}")]
    PrimeMismatch { series: u64, argument: u64 },
    #[error("valuation overflow after {0} steps")]
    ValuationOverflow(usize),
    #[error("cannot parse series literal: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, SeriesError>;

/// `x^3 (1 + sum_j A_j x^j)` truncated after `A_J`.
///
/// The coefficients are plain integers so the same object can be read over
/// `Z_p` for any `p` or handed to the elliptic-curve code over `Q`. `prime`
/// binds the series to one `Z_p` when known.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncatedSeries {
    pub prime: Option<u64>,
    #[serde(with = "crate::json::bigint_vec")]
    pub coefficients: Vec<BigInt>,
}

impl TruncatedSeries {
    pub fn new(coefficients: Vec<BigInt>) -> Self {
        Self {
            prime: None,
            coefficients,
        }
    }

    pub fn from_i64(coefficients: &[i64]) -> Self {
        Self::new(coefficients.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Pure cube map `x^3` truncated at order `order`.
    pub fn cube(order: usize) -> Self {
        Self::new(vec![BigInt::zero(); order])
    }

    pub fn with_prime(mut self, p: u64) -> Self {
        self.prime = Some(p);
        self
    }

    pub fn truncation_order(&self) -> usize {
        self.coefficients.len()
    }

    /// `A_j` for `j >= 1`; zero past the truncation order.
    pub fn coefficient(&self, j: usize) -> BigInt {
        if j == 0 {
            return BigInt::from(1);
        }
        self.coefficients.get(j - 1).cloned().unwrap_or_default()
    }

    fn check_prime(&self, x: &PadicNumber) -> Result<()> {
        match self.prime {
            Some(p) if p != x.prime() => Err(SeriesError::PrimeMismatch {
                series: p,
                argument: x.prime(),
            }),
            _ => Ok(()),
        }
    }

    /// `u(x)` for `v(x) >= 1`.
    ///
    /// The unit factor `1 + sum A_j x^j` is summed exactly modulo `p^N`; it is
    /// `1 mod p`, so the result is `p^(3v) * u^3 * (unit factor)`.
    pub fn evaluate(&self, x: &PadicNumber) -> Result<PadicNumber> {
        self.check_prime(x)?;
        let Some(v) = x.valuation() else {
            return Ok(x.clone());
        };
        if v < 1 {
            return Err(SeriesError::OutOfDomain(Some(v)));
        }
        let p = x.prime();
        let n = x.precision();
        let modulus = BigInt::from(BigUint::from(p).pow(n));
        let pv = BigInt::from(p).pow(v as u32);
        let xi = BigInt::from(x.unit().clone()) * &pv;
        // Horner on the unit factor, every step reduced mod p^N
        let mut acc = BigInt::zero();
        for a in self.coefficients.iter().rev() {
            acc = ((acc + a) * &xi).mod_floor(&modulus);
        }
        let factor = (acc + BigInt::from(1)).mod_floor(&modulus);
        let unit = BigInt::from(x.unit().clone());
        let cube_unit = (&unit * &unit * &unit * factor).mod_floor(&modulus);
        let digits = digits_of(&cube_unit, p, n);
        Ok(PadicNumber::from_digits(p, 3 * v, &digits)?)
    }

    pub fn iterate(&self, seed: &PadicNumber, steps: usize) -> Result<OrbitRecord> {
        let mut iterates = vec![seed.clone()];
        for k in 0..steps {
            let last = iterates.last().expect("orbit starts with the seed");
            if let Some(v) = last.valuation() {
                if v.checked_mul(3).is_none() {
                    return Err(SeriesError::ValuationOverflow(k));
                }
            }
            let next = self.evaluate(last)?;
            iterates.push(next);
        }
        Ok(OrbitRecord::new(iterates))
    }

    /// `x` lies in `V_n = u^{-1}(p^n Z_p \ p^{n+1} Z_p)` iff `v(u(x)) = n`,
    /// which over `Q_p` happens iff `3 v(x) = n`. Zero lies in no `V_n`.
    pub fn vn_membership(&self, x: &PadicNumber, n: i64) -> Result<bool> {
        let image = self.evaluate(x)?;
        Ok(image.valuation() == Some(n))
    }
}

fn digits_of(n: &BigInt, p: u64, count: u32) -> Vec<u64> {
    let pb = BigInt::from(p);
    let mut m = n.clone();
    let mut out = Vec::with_capacity(count as usize);
    for _ in 0..count {
        let (q, r) = m.div_mod_floor(&pb);
        out.push(u64::try_from(r).expect("digit below p"));
        m = q;
    }
    out
}

/// Orbit of a seed under a series together with its valuation profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub seed: PadicNumber,
    pub iterates: Vec<PadicNumber>,
    /// `None` marks the fixed point 0.
    pub valuations: Vec<Option<i64>>,
}

impl OrbitRecord {
    fn new(iterates: Vec<PadicNumber>) -> Self {
        Self {
            seed: iterates[0].clone(),
            valuations: iterates.iter().map(PadicNumber::valuation).collect(),
            iterates,
        }
    }

    /// Whether valuations strictly increase along the orbit (attraction to 0).
    pub fn attracted_to_zero(&self) -> bool {
        self.valuations.windows(2).all(|w| match (w[0], w[1]) {
            (Some(a), Some(b)) => b > a,
            (_, None) => true,
            (None, Some(_)) => false,
        })
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coefficients.is_empty() {
            return write!(f, "x^3");
        }
        write!(f, "x^3*(1")?;
        for (i, a) in self.coefficients.iter().enumerate() {
            let j = i + 1;
            let sign = if a.is_negative() { '-' } else { '+' };
            let mag = a.abs();
            if j == 1 {
                write!(f, " {sign} {mag}*x")?;
            } else {
                write!(f, " {sign} {mag}*x^{j}")?;
            }
        }
        write!(f, ")")
    }
}

impl FromStr for TruncatedSeries {
    type Err = SeriesError;

    /// Accepts `x^3` or `x^3*(1 + A1*x + A2*x^2 + ...)`. Terms may omit the
    /// coefficient (`x`, `-x^4`) or the `*` (`2x^2`); repeated powers add.
    fn from_str(s: &str) -> Result<Self> {
        let err = |m: &str| SeriesError::Parse(format!("{m} in {s:?}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let rest = compact
            .strip_prefix("x^3")
            .ok_or_else(|| err("missing leading x^3"))?;
        if rest.is_empty() {
            return Ok(Self::new(Vec::new()));
        }
        let body = rest
            .strip_prefix("*(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| err("expected x^3*( ... )"))?;
        let mut terms: Vec<String> = Vec::new();
        for (i, c) in body.char_indices() {
            if (c == '+' || c == '-') && i > 0 {
                terms.push(String::new());
            }
            if terms.is_empty() {
                terms.push(String::new());
            }
            terms.last_mut().expect("pushed above").push(c);
        }
        let mut coeffs: Vec<BigInt> = Vec::new();
        let mut constant = BigInt::zero();
        for term in &terms {
            let (neg, t) = match term.as_bytes().first() {
                Some(b'-') => (true, &term[1..]),
                Some(b'+') => (false, &term[1..]),
                _ => (false, term.as_str()),
            };
            if t.is_empty() {
                return Err(err("empty term"));
            }
            let (coef, power) = match t.find('x') {
                None => (t.parse::<BigInt>().map_err(|_| err("bad constant"))?, 0usize),
                Some(pos) => {
                    let c = t[..pos].trim_end_matches('*');
                    let c = if c.is_empty() {
                        BigInt::from(1)
                    } else {
                        c.parse::<BigInt>().map_err(|_| err("bad coefficient"))?
                    };
                    let tail = &t[pos + 1..];
                    let k = if tail.is_empty() {
                        1
                    } else {
                        tail.strip_prefix('^')
                            .and_then(|e| e.parse::<usize>().ok())
                            .ok_or_else(|| err("bad exponent"))?
                    };
                    (c, k)
                }
            };
            let coef = if neg { -coef } else { coef };
            if power == 0 {
                constant += coef;
            } else {
                if coeffs.len() < power {
                    coeffs.resize(power, BigInt::zero());
                }
                coeffs[power - 1] += coef;
            }
        }
        if constant != BigInt::from(1) {
            return Err(err("unit factor must have constant term 1"));
        }
        Ok(Self::new(coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pn(p: u64, n: i64) -> PadicNumber {
        PadicNumber::from_int(p, 16, n).unwrap()
    }

    #[test]
    fn cube_map_triples_valuation() {
        let u = TruncatedSeries::cube(4);
        let y = u.evaluate(&pn(5, 10)).unwrap();
        assert_eq!(y.valuation(), Some(3));
        assert_eq!(y, pn(5, 1000));
    }

    #[test]
    fn evaluates_x_cubed_times_one_plus_x() {
        let u = TruncatedSeries::from_i64(&[1]);
        let y = u.evaluate(&pn(3, 3)).unwrap();
        assert_eq!(y, pn(3, 108));
        assert_eq!(y.valuation(), Some(3));
    }

    #[test]
    fn zero_is_fixed() {
        let u = TruncatedSeries::from_i64(&[4, -2, 7]);
        let z = PadicNumber::zero(3, 8).unwrap();
        assert_eq!(u.evaluate(&z).unwrap(), z);
    }

    #[test]
    fn units_rejected() {
        let u = TruncatedSeries::cube(2);
        assert_eq!(
            u.evaluate(&pn(3, 2)),
            Err(SeriesError::OutOfDomain(Some(0)))
        );
    }

    #[test]
    fn orbit_valuations_follow_cubing() {
        let u = TruncatedSeries::from_i64(&[2, 1]);
        let orbit = u.iterate(&pn(3, 3), 3).unwrap();
        assert_eq!(orbit.valuations, vec![Some(1), Some(3), Some(9), Some(27)]);
        assert!(orbit.attracted_to_zero());
        let still = u.iterate(&pn(3, 3), 0).unwrap();
        assert_eq!(still.iterates, vec![pn(3, 3)]);
    }

    #[test]
    fn exact_orbit_over_two() {
        let u = TruncatedSeries::from_i64(&[1]);
        let orbit = u.iterate(&pn(2, 2), 2).unwrap();
        let x1 = BigInt::from(24);
        let x2 = x1.pow(3) * BigInt::from(25);
        assert_eq!(orbit.iterates[1], pn(2, 24));
        assert_eq!(orbit.iterates[2], PadicNumber::from_bigint(2, 16, &x2).unwrap());
        assert_eq!(orbit.valuations, vec![Some(1), Some(3), Some(9)]);
    }

    #[test]
    fn vn_only_for_multiples_of_three() {
        let u = TruncatedSeries::from_i64(&[1, 1]);
        assert!(u.vn_membership(&pn(3, 3), 3).unwrap());
        assert!(!u.vn_membership(&pn(3, 3), 4).unwrap());
        for v in 1..=5u32 {
            let x = pn(3, 3i64.pow(v) * 2);
            for n in 1..=16 {
                assert_eq!(u.vn_membership(&x, n).unwrap(), n == 3 * v as i64);
            }
        }
    }

    #[test]
    fn literal_round_trip() {
        let u: TruncatedSeries = "x^3*(1 + 2*x - x^2 + 0*x^3)".parse().unwrap();
        assert_eq!(u.coefficients, TruncatedSeries::from_i64(&[2, -1, 0]).coefficients);
        assert_eq!(u.to_string(), "x^3*(1 + 2*x - 1*x^2 + 0*x^3)");
        let again: TruncatedSeries = u.to_string().parse().unwrap();
        assert_eq!(again, u);
        let bare: TruncatedSeries = "x^3".parse().unwrap();
        assert_eq!(bare.truncation_order(), 0);
        let loose: TruncatedSeries = "x^3*(x^2 + 1 - 3x)".parse().unwrap();
        assert_eq!(loose.coefficients, TruncatedSeries::from_i64(&[-3, 1]).coefficients);
        assert!("x^2*(1+x)".parse::<TruncatedSeries>().is_err());
        assert!("x^3*(2+x)".parse::<TruncatedSeries>().is_err());
    }

    #[test]
    fn bound_prime_is_enforced() {
        let u = TruncatedSeries::cube(1).with_prime(5);
        assert!(matches!(
            u.evaluate(&pn(3, 3)),
            Err(SeriesError::PrimeMismatch { .. })
        ));
    }
}
