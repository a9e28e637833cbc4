//! Serde adapters for big integers and exact rationals.
//!
//! Integers that fit in an `i64` travel as JSON numbers; everything else is a
//! decimal string (`"-4096/11"`, `"123456789012345678901234567890"`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Wire {
    Int(i64),
    Float(f64),
    Text(String),
}

pub fn rational_to_value(x: &BigRational) -> serde_json::Value {
    if x.denom().is_one() {
        if let Some(n) = x.numer().to_i64() {
            return serde_json::Value::from(n);
        }
    }
    serde_json::Value::from(x.to_string())
}

fn to_wire_int(n: &BigInt) -> Wire {
    match n.to_i64() {
        Some(v) => Wire::Int(v),
        None => Wire::Text(n.to_string()),
    }
}

fn to_wire_rat(x: &BigRational) -> Wire {
    if x.denom().is_one() {
        to_wire_int(x.numer())
    } else {
        Wire::Text(x.to_string())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
            let d: BigInt = d.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
            if d == BigInt::from(0) {
                return Err(format!("zero denominator in {s:?}"));
            }
            Ok(BigRational::new(n, d))
        }
        None => s
            .parse::<BigInt>()
            .map(BigRational::from_integer)
            .map_err(|_| format!("bad rational {s:?}")),
    }
}

fn from_wire_rat(w: Wire) -> Result<BigRational, String> {
    match w {
        Wire::Int(v) => Ok(BigRational::from_integer(v.into())),
        Wire::Float(f) => BigRational::from_float(f).ok_or_else(|| format!("non-finite {f}")),
        Wire::Text(s) => parse_rational(&s),
    }
}

fn from_wire_int(w: Wire) -> Result<BigInt, String> {
    let r = from_wire_rat(w)?;
    if r.is_integer() {
        Ok(r.to_integer())
    } else {
        Err(format!("expected an integer, got {r}"))
    }
}

pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        to_wire_rat(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        from_wire_rat(Wire::deserialize(d)?).map_err(D::Error::custom)
    }
}

pub mod rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        xs.iter().map(to_wire_rat).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        Vec::<Wire>::deserialize(d)?
            .into_iter()
            .map(|w| from_wire_rat(w).map_err(D::Error::custom))
            .collect()
    }
}

pub mod bigint {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        to_wire_int(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        from_wire_int(Wire::deserialize(d)?).map_err(D::Error::custom)
    }
}

pub mod bigint_vec {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        xs.iter().map(to_wire_int).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<Wire>::deserialize(d)?
            .into_iter()
            .map(|w| from_wire_int(w).map_err(D::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct Holder {
        #[serde(with = "rational_vec")]
        xs: Vec<BigRational>,
    }

    #[test]
    fn numbers_and_strings() {
        let h = Holder {
            xs: vec![
                BigRational::from_integer((-2).into()),
                BigRational::new((-4096).into(), 11.into()),
            ],
        };
        let js = serde_json::to_string(&h).unwrap();
        assert_eq!(js, r#"{"xs":[-2,"-4096/11"]}"#);
        assert_eq!(serde_json::from_str::<Holder>(&js).unwrap(), h);
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational(" 3 / 6 ").unwrap(), BigRational::new(1.into(), 2.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
