//! Fixed-precision p-adic numbers.
//!
//! A nonzero element of `Q_p` is stored as `p^v * u` where `u` is a unit of
//! `Z_p` known modulo `p^N`. `N` (the precision) counts the base-`p` digits
//! of the unit that are retained. Every operand of a binary operation must
//! share the same prime and precision.
//!
//! When addition cancels leading digits the surviving digits are shifted
//! down and the vacated high digits are filled with zeros. If every retained
//! digit cancels the result is reported as [`PadicError::PrecisionExhausted`]
//! instead of silently becoming zero.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PadicError {
    #[error("all retained digits cancelled")]
    PrecisionExhausted,
    #[error("element of valuation {0} is not a unit")]
    NonUnitInverse(i64),
    #[error("zero is not on any side of zero")]
    ZeroArgument,
    #[error("operands live over different primes ({0} and {1})")]
    PrimeMismatch(u64, u64),
    #[error("operands carry different precisions ({0} and {1})")]
    PrecisionMismatch(u32, u32),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("precision must be positive")]
    ZeroPrecision,
    #[error("digit {digit} out of range for prime {prime}")]
    InvalidDigit { digit: u64, prime: u64 },
    #[error("leading unit digit must be nonzero")]
    ZeroLeadingDigit,
}

pub type Result<T> = std::result::Result<T, PadicError>;

/// Deterministic trial-division primality test; adequate for the primes used
/// as p-adic bases.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// `v_p(n)` for a nonzero integer.
pub fn valuation_of_int(n: &BigInt, p: u64) -> Option<i64> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        m = q;
        v += 1;
    }
}

/// `v_p(x)` for a nonzero rational.
pub fn valuation_of_rational(x: &BigRational, p: u64) -> Option<i64> {
    let vn = valuation_of_int(x.numer(), p)?;
    let vd = valuation_of_int(x.denom(), p).expect("denominator is nonzero");
    Some(vn - vd)
}

/// Strips every factor of `p` from a nonzero integer, returning the cofactor
/// and the number of factors removed.
pub(crate) fn split_power(n: &BigInt, p: u64) -> (BigInt, i64) {
    let pb = BigInt::from(p);
    let mut m = n.clone();
    let mut v = 0;
    while !m.is_zero() && (&m % &pb).is_zero() {
        m /= &pb;
        v += 1;
    }
    (m, v)
}

/// Inverse of `a` modulo `m`, if it exists.
pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PadicNumber {
    prime: u64,
    precision: u32,
    /// `None` encodes zero.
    valuation: Option<i64>,
    /// Unit part modulo `p^precision`; never divisible by `p` unless zero.
    unit: BigUint,
}

impl PadicNumber {
    fn check_base(prime: u64, precision: u32) -> Result<()> {
        if !is_prime(prime) {
            return Err(PadicError::NotPrime(prime));
        }
        if precision == 0 {
            return Err(PadicError::ZeroPrecision);
        }
        Ok(())
    }

    fn modulus_of(prime: u64, precision: u32) -> BigUint {
        BigUint::from(prime).pow(precision)
    }

    pub fn zero(prime: u64, precision: u32) -> Result<Self> {
        Self::check_base(prime, precision)?;
        Ok(Self {
            prime,
            precision,
            valuation: None,
            unit: BigUint::zero(),
        })
    }

    pub fn from_int(prime: u64, precision: u32, n: i64) -> Result<Self> {
        Self::from_bigint(prime, precision, &BigInt::from(n))
    }

    pub fn from_bigint(prime: u64, precision: u32, n: &BigInt) -> Result<Self> {
        Self::from_rational(prime, precision, &BigRational::from_integer(n.clone()))
    }

    pub fn from_rational(prime: u64, precision: u32, x: &BigRational) -> Result<Self> {
        Self::check_base(prime, precision)?;
        if x.is_zero() {
            return Self::zero(prime, precision);
        }
        let (num, vn) = split_power(x.numer(), prime);
        let (den, vd) = split_power(x.denom(), prime);
        let modulus = BigInt::from(Self::modulus_of(prime, precision));
        let inv = mod_inverse(&den, &modulus).expect("cofactor is prime to p");
        let unit = (num * inv).mod_floor(&modulus);
        Ok(Self {
            prime,
            precision,
            valuation: Some(vn - vd),
            unit: unit.to_biguint().expect("reduced residue is nonnegative"),
        })
    }

    /// Builds `p^valuation * (d0 + d1 p + ...)` from an explicit digit list of
    /// length `precision`.
    pub fn from_digits(prime: u64, valuation: i64, digits: &[u64]) -> Result<Self> {
        let precision = u32::try_from(digits.len()).map_err(|_| PadicError::ZeroPrecision)?;
        Self::check_base(prime, precision)?;
        if let Some(&d) = digits.iter().find(|&&d| d >= prime) {
            return Err(PadicError::InvalidDigit { digit: d, prime });
        }
        if digits[0] == 0 {
            return Err(PadicError::ZeroLeadingDigit);
        }
        let mut unit = BigUint::zero();
        for &d in digits.iter().rev() {
            unit = unit * prime + d;
        }
        Ok(Self {
            prime,
            precision,
            valuation: Some(valuation),
            unit,
        })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        self.valuation
    }

    pub fn is_zero(&self) -> bool {
        self.valuation.is_none()
    }

    pub fn unit(&self) -> &BigUint {
        &self.unit
    }

    /// `|x|_p = p^(-v)`; zero for the zero element.
    pub fn abs(&self) -> f64 {
        match self.valuation {
            None => 0.0,
            Some(v) => (self.prime as f64).powf(-(v as f64)),
        }
    }

    /// Base-`p` digits of the unit part, least significant first. Zero has
    /// no digits.
    pub fn unit_digits(&self) -> Vec<u64> {
        if self.is_zero() {
            return Vec::new();
        }
        let mut out = Vec::with_capacity(self.precision as usize);
        let mut u = self.unit.clone();
        let p = BigUint::from(self.prime);
        for _ in 0..self.precision {
            let (q, r) = u.div_rem(&p);
            out.push(r.to_u64().expect("digit below p"));
            u = q;
        }
        out
    }

    /// The first `depth` digits of `x` read as an element of `Z_p`
    /// (`depth` leading zeros for zero). Digits beyond the known ones are 0.
    /// Returns `None` for negative valuation.
    pub fn integer_digits(&self, depth: usize) -> Option<Vec<u64>> {
        let mut out = vec![0u64; depth];
        let Some(v) = self.valuation else {
            return Some(out);
        };
        if v < 0 {
            return None;
        }
        for (k, d) in self.unit_digits().into_iter().enumerate() {
            let pos = v as usize + k;
            if pos >= depth {
                break;
            }
            out[pos] = d;
        }
        Some(out)
    }

    /// Exact rational represented by the retained digits.
    pub fn to_rational(&self) -> BigRational {
        let Some(v) = self.valuation else {
            return BigRational::zero();
        };
        let unit = BigRational::from_integer(BigInt::from(self.unit.clone()));
        let pv = BigRational::from_integer(BigInt::from(self.prime)).pow(v.unsigned_abs() as i32);
        if v >= 0 {
            unit * pv
        } else {
            unit / pv
        }
    }

    fn modulus(&self) -> BigUint {
        Self::modulus_of(self.prime, self.precision)
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.prime != other.prime {
            return Err(PadicError::PrimeMismatch(self.prime, other.prime));
        }
        if self.precision != other.precision {
            return Err(PadicError::PrecisionMismatch(self.precision, other.precision));
        }
        Ok(())
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Self {
            unit: self.modulus() - &self.unit,
            ..self.clone()
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let (vx, vy) = match (self.valuation, other.valuation) {
            (None, _) => return Ok(other.clone()),
            (_, None) => return Ok(self.clone()),
            (Some(a), Some(b)) => (a, b),
        };
        let vmin = vx.min(vy);
        let modulus = self.modulus();
        let p = BigUint::from(self.prime);
        let shifted = |u: &BigUint, v: i64| -> BigUint {
            let k = (v - vmin) as u64;
            if k >= self.precision as u64 {
                BigUint::zero()
            } else {
                (u * p.pow(k as u32)) % &modulus
            }
        };
        let sum = (shifted(&self.unit, vx) + shifted(&other.unit, vy)) % &modulus;
        if sum.is_zero() {
            return Err(PadicError::PrecisionExhausted);
        }
        let mut unit = sum;
        let mut gain = 0i64;
        while (&unit % &p).is_zero() {
            unit /= &p;
            gain += 1;
        }
        Ok(Self {
            prime: self.prime,
            precision: self.precision,
            valuation: Some(vmin + gain),
            unit,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        match (self.valuation, other.valuation) {
            (Some(a), Some(b)) => Ok(Self {
                prime: self.prime,
                precision: self.precision,
                valuation: Some(a + b),
                unit: (&self.unit * &other.unit) % self.modulus(),
            }),
            _ => Self::zero(self.prime, self.precision),
        }
    }

    /// Inverse of a unit of `Z_p`.
    pub fn invert(&self) -> Result<Self> {
        match self.valuation {
            None => Err(PadicError::ZeroArgument),
            Some(0) => {
                let m = BigInt::from(self.modulus());
                let inv = mod_inverse(&BigInt::from(self.unit.clone()), &m)
                    .expect("units are invertible");
                Ok(Self {
                    unit: inv.to_biguint().expect("nonnegative residue"),
                    ..self.clone()
                })
            }
            Some(v) => Err(PadicError::NonUnitInverse(v)),
        }
    }

    /// Drops the lowest `k` unit digits: the unit `d0 + d1 p + ...` becomes
    /// `dk + d(k+1) p + ...` at the same precision, zero-filled on top.
    /// `None` for zero.
    pub fn shifted_unit(&self, k: u32) -> Option<Vec<u64>> {
        if self.is_zero() {
            return None;
        }
        let digits = self.unit_digits();
        let mut out: Vec<u64> = digits.into_iter().skip(k as usize).collect();
        out.resize(self.precision as usize, 0);
        Some(out)
    }
}

/// `true` iff `v(x - y) > v(x)`, i.e. `y` lies in the open disc of radius
/// `|x|` around `x`. Two nonzero elements are on the same side of zero iff
/// they share valuation and leading unit digit.
pub fn same_side_of_zero(x: &PadicNumber, y: &PadicNumber) -> Result<bool> {
    x.compatible(y)?;
    match (x.valuation, y.valuation) {
        (Some(vx), Some(vy)) => {
            if vx != vy {
                return Ok(false);
            }
            let p = BigUint::from(x.prime);
            Ok(&x.unit % &p == &y.unit % &p)
        }
        _ => Err(PadicError::ZeroArgument),
    }
}

/// Lower bound or exact value of `v(x - y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DifferenceValuation {
    Exact(i64),
    /// The difference vanished on every retained digit.
    AtLeast(i64),
    /// `x == y == 0`.
    Infinite,
}

pub fn difference_valuation(x: &PadicNumber, y: &PadicNumber) -> Result<DifferenceValuation> {
    match x.sub(y) {
        Ok(d) => Ok(match d.valuation {
            Some(v) => DifferenceValuation::Exact(v),
            None => DifferenceValuation::Infinite,
        }),
        Err(PadicError::PrecisionExhausted) => {
            let vmin = x.valuation.into_iter().chain(y.valuation).min();
            Ok(match vmin {
                Some(v) => DifferenceValuation::AtLeast(v + x.precision as i64),
                None => DifferenceValuation::Infinite,
            })
        }
        Err(e) => Err(e),
    }
}

/// Disc `{x : v(x - center) >= k}` (closed) or `{x : v(x - center) > k}`
/// (open); radius `p^(-k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicBall {
    pub center: PadicNumber,
    pub log_radius: i64,
    pub closed: bool,
}

impl PadicBall {
    pub fn closed(center: PadicNumber, log_radius: i64) -> Self {
        Self {
            center,
            log_radius,
            closed: true,
        }
    }

    pub fn open(center: PadicNumber, log_radius: i64) -> Self {
        Self {
            center,
            log_radius,
            closed: false,
        }
    }

    fn threshold(&self) -> i64 {
        if self.closed {
            self.log_radius
        } else {
            self.log_radius + 1
        }
    }

    pub fn contains(&self, x: &PadicNumber) -> Result<bool> {
        let t = self.threshold();
        match difference_valuation(x, &self.center)? {
            DifferenceValuation::Exact(v) => Ok(v >= t),
            DifferenceValuation::Infinite => Ok(true),
            DifferenceValuation::AtLeast(v) if v >= t => Ok(true),
            DifferenceValuation::AtLeast(_) => Err(PadicError::PrecisionExhausted),
        }
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(v) = self.valuation else {
            return write!(f, "0");
        };
        let p = self.prime;
        write!(f, "{p}^{v} * (")?;
        for (k, d) in self.unit_digits().into_iter().enumerate() {
            match k {
                0 => write!(f, "{d}")?,
                1 => write!(f, " + {d}*{p}")?,
                _ => write!(f, " + {d}*{p}^{k}")?,
            }
        }
        write!(f, ")")
    }
}

impl fmt::Debug for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PadicNumber({self} + O({}))", self.precision)
    }
}

#[derive(Serialize, Deserialize)]
struct PadicJson {
    prime: u64,
    valuation: Option<i64>,
    digits: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    precision: Option<u32>,
}

impl Serialize for PadicNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PadicJson {
            prime: self.prime,
            valuation: self.valuation,
            digits: self.unit_digits(),
            // zero carries no digits, so its precision travels separately
            precision: self.is_zero().then_some(self.precision),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PadicNumber {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = PadicJson::deserialize(d)?;
        match raw.valuation {
            None => PadicNumber::zero(raw.prime, raw.precision.unwrap_or(1)),
            Some(v) => PadicNumber::from_digits(raw.prime, v, &raw.digits),
        }
        .map_err(D::Error::custom)
    }
}

/// Integer value of a small nonnegative residue; helper for callers that
/// need machine arithmetic on digits.
pub(crate) fn residue_u64(n: &BigInt, p: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue below p")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: u64, n: i64) -> PadicNumber {
        PadicNumber::from_int(p, 8, n).unwrap()
    }

    #[test]
    fn product_valuation_adds() {
        let x = q(5, 5).mul(&q(5, 5)).unwrap().mul(&q(5, 2)).unwrap();
        assert_eq!(x.valuation(), Some(2));
        assert_eq!(x, q(5, 50));
        assert!((x.abs() - 1.0 / 25.0).abs() < 1e-15);
    }

    #[test]
    fn sum_gains_valuation() {
        let s = q(5, 5).add(&q(5, 20)).unwrap();
        assert_eq!(s.valuation(), Some(2));
        assert_eq!(s, q(5, 25));
    }

    #[test]
    fn inverse_of_two_mod_81() {
        let x = PadicNumber::from_int(3, 4, 2).unwrap().invert().unwrap();
        // 2 * 41 = 82 = 1 + 81
        assert_eq!(x.unit(), &BigUint::from(41u32));
        assert_eq!(x.unit_digits(), vec![2, 1, 1, 1]);
        let one = x.mul(&PadicNumber::from_int(3, 4, 2).unwrap()).unwrap();
        assert_eq!(one, PadicNumber::from_int(3, 4, 1).unwrap());
    }

    #[test]
    fn non_unit_inverse_rejected() {
        assert_eq!(q(3, 6).invert(), Err(PadicError::NonUnitInverse(1)));
    }

    #[test]
    fn total_cancellation_signals() {
        let x = q(3, 7);
        assert_eq!(x.sub(&x), Err(PadicError::PrecisionExhausted));
        assert_eq!(
            difference_valuation(&x, &x).unwrap(),
            DifferenceValuation::AtLeast(8)
        );
    }

    #[test]
    fn rational_inputs() {
        let third = PadicNumber::from_rational(3, 6, &BigRational::new(1.into(), 3.into())).unwrap();
        assert_eq!(third.valuation(), Some(-1));
        let half = PadicNumber::from_rational(3, 6, &BigRational::new(1.into(), 2.into())).unwrap();
        assert_eq!(
            half.mul(&PadicNumber::from_int(3, 6, 2).unwrap()).unwrap(),
            PadicNumber::from_int(3, 6, 1).unwrap()
        );
    }

    #[test]
    fn side_of_zero_examples() {
        assert!(same_side_of_zero(&q(3, 1), &q(3, 4)).unwrap());
        assert!(!same_side_of_zero(&q(3, 1), &q(3, 3)).unwrap());
        assert!(!same_side_of_zero(&q(3, 1), &q(3, 2)).unwrap());
        assert_eq!(
            same_side_of_zero(&q(3, 0), &q(3, 2)),
            Err(PadicError::ZeroArgument)
        );
    }

    #[test]
    fn mismatched_operands() {
        let a = q(3, 1);
        let b = q(5, 1);
        assert_eq!(a.add(&b), Err(PadicError::PrimeMismatch(3, 5)));
        let c = PadicNumber::from_int(3, 4, 1).unwrap();
        assert_eq!(a.mul(&c), Err(PadicError::PrecisionMismatch(8, 4)));
        assert_eq!(PadicNumber::from_int(4, 4, 1), Err(PadicError::NotPrime(4)));
    }

    #[test]
    fn display_and_json() {
        let x = PadicNumber::from_int(3, 3, 15).unwrap();
        assert_eq!(x.to_string(), "3^1 * (2 + 1*3 + 0*3^2)");
        let js = serde_json::to_string(&x).unwrap();
        assert_eq!(js, r#"{"prime":3,"valuation":1,"digits":[2,1,0]}"#);
        let back: PadicNumber = serde_json::from_str(&js).unwrap();
        assert_eq!(back, x);
        let z = PadicNumber::zero(3, 3).unwrap();
        let back: PadicNumber = serde_json::from_str(&serde_json::to_string(&z).unwrap()).unwrap();
        assert_eq!(back, z);
    }

    #[test]
    fn balls() {
        let c = q(3, 1);
        let closed = PadicBall::closed(c.clone(), 1);
        let open = PadicBall::open(c.clone(), 1);
        assert!(closed.contains(&q(3, 4)).unwrap());
        assert!(!open.contains(&q(3, 4)).unwrap());
        assert!(open.contains(&q(3, 10)).unwrap());
        assert!(open.contains(&c).unwrap());
    }

    #[test]
    fn integer_digits_of_multiple_of_p() {
        let x = q(3, 15);
        assert_eq!(x.integer_digits(4).unwrap(), vec![0, 2, 1, 0]);
        assert_eq!(q(3, 0).integer_digits(3).unwrap(), vec![0, 0, 0]);
        let third = PadicNumber::from_rational(3, 4, &BigRational::new(1.into(), 3.into())).unwrap();
        assert!(third.integer_digits(3).is_none());
    }
}
