use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{EllipticError, Result};
use crate::json::parse_rational;

/// `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` over `Q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeierstrassCurve {
    #[serde(with = "crate::json::rational")]
    pub a1: BigRational,
    #[serde(with = "crate::json::rational")]
    pub a2: BigRational,
    #[serde(with = "crate::json::rational")]
    pub a3: BigRational,
    #[serde(with = "crate::json::rational")]
    pub a4: BigRational,
    #[serde(with = "crate::json::rational")]
    pub a6: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveInvariants {
    #[serde(with = "crate::json::rational")]
    pub b2: BigRational,
    #[serde(with = "crate::json::rational")]
    pub b4: BigRational,
    #[serde(with = "crate::json::rational")]
    pub b6: BigRational,
    #[serde(with = "crate::json::rational")]
    pub b8: BigRational,
    #[serde(with = "crate::json::rational")]
    pub c4: BigRational,
    #[serde(with = "crate::json::rational")]
    pub c6: BigRational,
    #[serde(with = "crate::json::rational")]
    pub delta: BigRational,
    /// Absent for singular cubics.
    #[serde(default, with = "opt_rational")]
    pub j: Option<BigRational>,
}

mod opt_rational {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => crate::json::rational::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRational>, D::Error> {
        let v = Option::<serde_json::Value>::deserialize(d)?;
        match v {
            None | Some(serde_json::Value::Null) => Ok(None),
            Some(v) => crate::json::rational::deserialize(v)
                .map(Some)
                .map_err(serde::de::Error::custom),
        }
    }
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl WeierstrassCurve {
    pub fn new(a1: BigRational, a2: BigRational, a3: BigRational, a4: BigRational, a6: BigRational) -> Self {
        Self { a1, a2, a3, a4, a6 }
    }

    pub fn from_ints(a: [i64; 5]) -> Self {
        Self::new(q(a[0]), q(a[1]), q(a[2]), q(a[3]), q(a[4]))
    }

    pub fn from_bigints(a: [BigInt; 5]) -> Self {
        let [a1, a2, a3, a4, a6] = a.map(BigRational::from_integer);
        Self::new(a1, a2, a3, a4, a6)
    }

    /// Coefficients in the order `[a1, a2, a3, a4, a6]`.
    pub fn coefficients(&self) -> [&BigRational; 5] {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]
    }

    pub fn is_integral(&self) -> bool {
        self.coefficients().iter().all(|a| a.is_integer())
    }

    /// Integer coefficients, if the model is integral.
    pub fn integer_coefficients(&self) -> Option<[BigInt; 5]> {
        if !self.is_integral() {
            return None;
        }
        Some(self.coefficients().map(|a| a.to_integer()))
    }

    pub fn invariants(&self) -> CurveInvariants {
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        let b2 = a1 * a1 + q(4) * a2;
        let b4 = q(2) * a4 + a1 * a3;
        let b6 = a3 * a3 + q(4) * a6;
        let b8 = a1 * a1 * a6 + q(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        let c4 = &b2 * &b2 - q(24) * &b4;
        let c6 = -(&b2 * &b2 * &b2) + q(36) * &b2 * &b4 - q(216) * &b6;
        let delta = -(&b2 * &b2 * &b8) - q(8) * &b4 * &b4 * &b4 - q(27) * &b6 * &b6
            + q(9) * &b2 * &b4 * &b6;
        let j = (!delta.is_zero()).then(|| &c4 * &c4 * &c4 / &delta);
        CurveInvariants {
            b2,
            b4,
            b6,
            b8,
            c4,
            c6,
            delta,
            j,
        }
    }

    /// Invariants of a curve that must be non-singular.
    pub fn nonsingular_invariants(&self) -> Result<CurveInvariants> {
        let inv = self.invariants();
        if inv.delta.is_zero() {
            return Err(EllipticError::SingularCurve);
        }
        Ok(inv)
    }

    pub fn discriminant(&self) -> BigRational {
        self.invariants().delta
    }

    pub fn j_invariant(&self) -> Result<BigRational> {
        self.invariants().j.ok_or(EllipticError::SingularCurve)
    }

    /// Substitution `x = u^2 x' + r`, `y = u^3 y' + s u^2 x' + t`.
    pub fn transform(&self, u: &BigRational, r: &BigRational, s: &BigRational, t: &BigRational) -> Self {
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        let u2 = u * u;
        let u3 = &u2 * u;
        let u4 = &u2 * &u2;
        let u6 = &u3 * &u3;
        let na1 = (a1 + q(2) * s) / u;
        let na2 = (a2 - s * a1 + q(3) * r - s * s) / &u2;
        let na3 = (a3 + r * a1 + q(2) * t) / &u3;
        let na4 = (a4 - s * a3 + q(2) * r * a2 - (t + r * s) * a1 + q(3) * r * r - q(2) * s * t) / &u4;
        let na6 = (a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1) / &u6;
        Self::new(na1, na2, na3, na4, na6)
    }

    /// Integral model obtained by the scaling `u = 1/d`, `d` the least common
    /// multiple of the coefficient denominators. Returns the model and `d`.
    pub fn integral_model(&self) -> (Self, BigInt) {
        let d = self
            .coefficients()
            .iter()
            .fold(BigInt::one(), |acc, a| acc.lcm(a.denom()));
        if d.is_one() {
            return (self.clone(), d);
        }
        let u = BigRational::new(BigInt::one(), d.clone());
        let zero = BigRational::zero();
        (self.transform(&u, &zero, &zero, &zero), d)
    }

    /// Point-on-curve test for an affine rational point.
    pub fn contains(&self, x: &BigRational, y: &BigRational) -> bool {
        let lhs = y * y + &self.a1 * x * y + &self.a3 * y;
        let rhs = x * x * x + &self.a2 * x * x + &self.a4 * x + &self.a6;
        lhs == rhs
    }
}

impl fmt::Display for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a1, a2, a3, a4, a6] = self.coefficients();
        write!(f, "[{a1},{a2},{a3},{a4},{a6}]")
    }
}

impl FromStr for WeierstrassCurve {
    type Err = EllipticError;

    /// Parses `[a1,a2,a3,a4,a6]`; entries are integers or `p/q` rationals.
    fn from_str(s: &str) -> Result<Self> {
        let body = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| EllipticError::Parse(format!("expected [a1,a2,a3,a4,a6], got {s:?}")))?;
        let parts: Vec<BigRational> = body
            .split(',')
            .map(parse_rational)
            .collect::<std::result::Result<_, _>>()
            .map_err(EllipticError::Parse)?;
        let [a1, a2, a3, a4, a6]: [BigRational; 5] = parts
            .try_into()
            .map_err(|_| EllipticError::Parse(format!("expected five coefficients in {s:?}")))?;
        Ok(Self::new(a1, a2, a3, a4, a6))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn y2_x3_plus_x() {
        let inv = WeierstrassCurve::from_ints([0, 0, 0, 1, 0]).invariants();
        assert_eq!(inv.delta, q(-64));
        assert_eq!(inv.c4, q(-48));
        assert_eq!(inv.j, Some(q(1728)));
    }

    #[test]
    fn eleven_a3() {
        let inv = WeierstrassCurve::from_ints([0, -1, 1, 0, 0]).invariants();
        assert_eq!((inv.b2.clone(), inv.b4.clone(), inv.b6.clone(), inv.b8.clone()), (q(-4), q(0), q(1), q(-1)));
        assert_eq!(inv.delta, q(-11));
        assert_eq!(inv.c4, q(16));
        assert_eq!(inv.j, Some(BigRational::new((-4096).into(), 11.into())));
    }

    #[test]
    fn cusp_is_singular() {
        let e = WeierstrassCurve::from_ints([0, 0, 0, 0, 0]);
        assert_eq!(e.nonsingular_invariants(), Err(EllipticError::SingularCurve));
        assert!(e.invariants().j.is_none());
    }

    #[test]
    fn transform_preserves_j_and_scales_delta() {
        let e = WeierstrassCurve::from_ints([1, -1, 1, -3, 5]);
        let u = BigRational::new(2.into(), 3.into());
        let f = e.transform(&u, &q(1), &q(-2), &q(3));
        assert_eq!(e.j_invariant().unwrap(), f.j_invariant().unwrap());
        let u12 = u.pow(12);
        assert_eq!(f.discriminant() * u12, e.discriminant());
    }

    #[test]
    fn integral_model_clears_denominators() {
        let e: WeierstrassCurve = "[1/2,0,1/3,0,-1/6]".parse().unwrap();
        let (m, d) = e.integral_model();
        assert_eq!(d, BigInt::from(6));
        assert!(m.is_integral());
        assert_eq!(m.j_invariant().unwrap(), e.j_invariant().unwrap());
    }

    #[test]
    fn literal_parse() {
        let e: WeierstrassCurve = " [0, -1, 1, 0, 0] ".parse().unwrap();
        assert_eq!(e, WeierstrassCurve::from_ints([0, -1, 1, 0, 0]));
        assert_eq!(e.to_string(), "[0,-1,1,0,0]");
        assert!("[0,1]".parse::<WeierstrassCurve>().is_err());
        assert!("0,1,2,3,4".parse::<WeierstrassCurve>().is_err());
    }
}
