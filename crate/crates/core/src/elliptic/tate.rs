//! Tate's algorithm: local reduction type, Kodaira symbol, conductor
//! exponent and Tamagawa number of a curve at one prime, together with a
//! model that is minimal at that prime.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::curve::WeierstrassCurve;
use super::fp::{self, CubicRoots};
use super::{EllipticError, Result};
use crate::padic::{is_prime, valuation_of_int};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReductionKind {
    Good,
    Multiplicative,
    Additive,
}

impl fmt::Display for ReductionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Good => "good",
            Self::Multiplicative => "multiplicative",
            Self::Additive => "additive",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kodaira {
    I0,
    In(u32),
    II,
    III,
    IV,
    I0Star,
    InStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl Kodaira {
    /// Number of components of the special fibre of the Néron model.
    pub fn components(&self) -> u32 {
        match self {
            Self::I0 | Self::II => 1,
            Self::In(n) => *n,
            Self::III => 2,
            Self::IV => 3,
            Self::I0Star => 5,
            Self::InStar(n) => 5 + n,
            Self::IVStar => 7,
            Self::IIIStar => 8,
            Self::IIStar => 9,
        }
    }
}

impl fmt::Display for Kodaira {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::I0 => write!(f, "I0"),
            Self::In(n) => write!(f, "I{n}"),
            Self::II => write!(f, "II"),
            Self::III => write!(f, "III"),
            Self::IV => write!(f, "IV"),
            Self::I0Star => write!(f, "I0*"),
            Self::InStar(n) => write!(f, "I{n}*"),
            Self::IVStar => write!(f, "IV*"),
            Self::IIIStar => write!(f, "III*"),
            Self::IIStar => write!(f, "II*"),
        }
    }
}

impl Serialize for Kodaira {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Local data of a curve at one prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionData {
    pub prime: u64,
    pub kind: ReductionKind,
    pub kodaira: Kodaira,
    pub conductor_exponent: u32,
    pub tamagawa: u32,
    /// `Some(true)` split, `Some(false)` non-split; only for multiplicative.
    pub split: Option<bool>,
    /// `v_p` of the minimal discriminant.
    pub discriminant_valuation: u32,
    /// A model of the curve, integral and minimal at `prime`.
    pub minimal_model: WeierstrassCurve,
}

impl ReductionData {
    /// `a_p` for bad primes: `+1` split, `-1` non-split, `0` additive.
    pub fn bad_ap(&self) -> Option<i64> {
        match self.kind {
            ReductionKind::Good => None,
            ReductionKind::Additive => Some(0),
            ReductionKind::Multiplicative => Some(if self.split == Some(true) { 1 } else { -1 }),
        }
    }
}

struct Model {
    a: [BigInt; 5],
    p: u64,
    pb: BigInt,
}

impl Model {
    fn b_invariants(&self) -> (BigInt, BigInt, BigInt, BigInt) {
        let [a1, a2, a3, a4, a6] = &self.a;
        let b2 = a1 * a1 + 4 * a2;
        let b4 = 2 * a4 + a1 * a3;
        let b6 = a3 * a3 + 4 * a6;
        let b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        (b2, b4, b6, b8)
    }

    fn c_invariants(&self) -> (BigInt, BigInt, BigInt) {
        let (b2, b4, b6, b8) = self.b_invariants();
        let c4 = &b2 * &b2 - 24 * &b4;
        let c6 = -(&b2 * &b2 * &b2) + 36 * &b2 * &b4 - 216 * &b6;
        let delta = -(&b2 * &b2 * &b8) - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6;
        (c4, c6, delta)
    }

    fn rst(&mut self, r: &BigInt, s: &BigInt, t: &BigInt) {
        let [a1, a2, a3, a4, a6] = &self.a;
        let na1 = a1 + 2 * s;
        let na2 = a2 - s * a1 + 3 * r - s * s;
        let na3 = a3 + r * a1 + 2 * t;
        let na4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t;
        let na6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
        self.a = [na1, na2, na3, na4, na6];
    }

    fn pow(&self, k: u32) -> BigInt {
        self.pb.pow(k)
    }

    fn divides(&self, k: u32, n: &BigInt) -> bool {
        (n % self.pow(k)).is_zero()
    }

    fn md(&self, n: &BigInt) -> u64 {
        n.mod_floor(&self.pb).to_u64().expect("residue below p")
    }

    /// `n / p^k`, exact.
    fn over(&self, n: &BigInt, k: u32) -> BigInt {
        exact_div(n, &self.pow(k))
    }

    fn half(&self) -> u64 {
        fp::inv(2, self.p)
    }

    fn curve(&self) -> WeierstrassCurve {
        WeierstrassCurve::from_bigints(self.a.clone())
    }
}

fn exact_div(n: &BigInt, d: &BigInt) -> BigInt {
    debug_assert!((n % d).is_zero(), "{n} not divisible by {d}");
    n / d
}

/// Runs Tate's algorithm on `curve` at the prime `p`.
pub fn tate_reduce(curve: &WeierstrassCurve, p: u64) -> Result<ReductionData> {
    if !is_prime(p) {
        return Err(EllipticError::NotPrime(p));
    }
    curve.nonsingular_invariants()?;
    let (integral, _) = curve.integral_model();
    let a = integral.integer_coefficients().expect("integral model");
    let mut m = Model {
        a,
        p,
        pb: BigInt::from(p),
    };
    loop {
        let (_, _, delta) = m.c_invariants();
        let vd = valuation_of_int(&delta, p).expect("nonsingular") as u32;
        let done = |m: &Model, kind, kodaira, f: u32, cp, split| ReductionData {
            prime: p,
            kind,
            kodaira,
            conductor_exponent: f,
            tamagawa: cp,
            split,
            discriminant_valuation: vd,
            minimal_model: m.curve(),
        };
        if vd == 0 {
            return Ok(done(&m, ReductionKind::Good, Kodaira::I0, 0, 1, None));
        }

        // move the singular point of the reduction to (0, 0)
        let (b2, b4, b6, _) = m.b_invariants();
        let (c4, c6, _) = m.c_invariants();
        let [a1, a2, a3, a4, a6] = m.a.clone();
        let (r, t): (u64, u64) = if p == 2 {
            if m.divides(1, &b2) {
                let r = m.md(&a4);
                let t = m.md(&(BigInt::from(r) * (1 + &a2 + &a4) + &a6));
                (r, t)
            } else {
                let r = m.md(&a3);
                let t = m.md(&(BigInt::from(r) + &a4));
                (r, t)
            }
        } else if p == 3 {
            let r = if m.divides(1, &b2) {
                m.md(&-&b6)
            } else {
                m.md(&-(&b2 * &b4))
            };
            let t = m.md(&(&a1 * BigInt::from(r) + &a3));
            (r, t)
        } else {
            let inv12 = fp::inv(12 % p, p);
            let r = if m.divides(1, &c4) {
                fp::mulmod(m.md(&-&b2), inv12, p)
            } else {
                let num = m.md(&-(&c6 + &b2 * &c4));
                let den = fp::inv(fp::mulmod(12 % p, m.md(&c4), p), p);
                fp::mulmod(num, den, p)
            };
            let t = fp::mulmod(m.md(&-(&a1 * BigInt::from(r) + &a3)), m.half(), p);
            (r, t)
        };
        m.rst(&BigInt::from(r), &BigInt::zero(), &BigInt::from(t));
        let [a1, a2, a3, a4, a6] = m.a.clone();
        debug_assert!(m.divides(1, &a3) && m.divides(1, &a4) && m.divides(1, &a6));
        let (b2, _, b6, b8) = m.b_invariants();

        if !m.divides(1, &b2) {
            let split = fp::quadratic_has_root(1, m.md(&a1), m.md(&-&a2), p);
            let cp = if split {
                vd
            } else if vd.is_multiple_of(2) {
                2
            } else {
                1
            };
            return Ok(done(&m, ReductionKind::Multiplicative, Kodaira::In(vd), 1, cp, Some(split)));
        }
        if !m.divides(2, &a6) {
            return Ok(done(&m, ReductionKind::Additive, Kodaira::II, vd, 1, None));
        }
        if !m.divides(3, &b8) {
            return Ok(done(&m, ReductionKind::Additive, Kodaira::III, vd - 1, 2, None));
        }
        if !m.divides(3, &b6) {
            let cp = if fp::quadratic_has_root(1, m.md(&m.over(&a3, 1)), m.md(&-m.over(&a6, 2)), p) {
                3
            } else {
                1
            };
            return Ok(done(&m, ReductionKind::Additive, Kodaira::IV, vd - 2, cp, None));
        }

        // p | a1, a2; p^2 | a3, a4; p^3 | a6
        let (s, t) = if p == 2 {
            (m.md(&a2), 2 * m.md(&m.over(&a6, 2)))
        } else {
            let s = fp::mulmod(m.md(&-&a1), m.half(), p);
            let t = p * fp::mulmod(m.md(&-m.over(&a3, 1)), m.half(), p);
            (s, t)
        };
        m.rst(&BigInt::zero(), &BigInt::from(s), &BigInt::from(t));
        let [a1, a2, a3, a4, a6] = m.a.clone();
        debug_assert!(m.divides(1, &a1) && m.divides(1, &a2));
        debug_assert!(m.divides(2, &a3) && m.divides(2, &a4) && m.divides(3, &a6));

        let roots = fp::cubic_roots(
            m.md(&m.over(&a2, 1)),
            m.md(&m.over(&a4, 2)),
            m.md(&m.over(&a6, 3)),
            p,
        );
        match roots {
            CubicRoots::Distinct { rational } => {
                return Ok(done(
                    &m,
                    ReductionKind::Additive,
                    Kodaira::I0Star,
                    vd - 4,
                    1 + rational as u32,
                    None,
                ));
            }
            CubicRoots::Double(root) => {
                m.rst(&(BigInt::from(root) * &m.pb), &BigInt::zero(), &BigInt::zero());
                let mut n = 1u32;
                let mut mx = m.pow(2);
                let mut my = m.pow(2);
                let cp;
                loop {
                    let xa3 = exact_div(&m.a[2], &my);
                    let xa6 = exact_div(&m.a[4], &(&mx * &my));
                    if m.divides(1, &(&xa3 * &xa3 + 4 * &xa6)) {
                        let root = if p == 2 {
                            m.md(&xa6)
                        } else {
                            fp::mulmod(m.md(&-&xa3), m.half(), p)
                        };
                        m.rst(&BigInt::zero(), &BigInt::zero(), &(&my * root));
                    } else {
                        cp = if fp::quadratic_has_root(1, m.md(&xa3), m.md(&-&xa6), p) { 4 } else { 2 };
                        break;
                    }
                    n += 1;
                    my *= &m.pb;
                    let xa2 = exact_div(&m.a[1], &m.pb);
                    let xa4 = exact_div(&m.a[3], &(&m.pb * &mx));
                    let xa6 = exact_div(&m.a[4], &(&mx * &my));
                    if m.divides(1, &(&xa4 * &xa4 - 4 * &xa2 * &xa6)) {
                        let root = if p == 2 {
                            fp::mulmod(m.md(&xa6), fp::inv(m.md(&xa2), p), p)
                        } else {
                            let den = fp::inv(fp::mulmod(2, m.md(&xa2), p), p);
                            fp::mulmod(m.md(&-&xa4), den, p)
                        };
                        m.rst(&(&mx * root), &BigInt::zero(), &BigInt::zero());
                    } else {
                        cp = if fp::quadratic_has_root(m.md(&xa2), m.md(&xa4), m.md(&xa6), p) { 4 } else { 2 };
                        break;
                    }
                    n += 1;
                    mx *= &m.pb;
                }
                return Ok(done(&m, ReductionKind::Additive, Kodaira::InStar(n), vd - n - 4, cp, None));
            }
            CubicRoots::Triple(root) => {
                m.rst(&(BigInt::from(root) * &m.pb), &BigInt::zero(), &BigInt::zero());
                let [_, _, a3, _, a6] = m.a.clone();
                let y3 = m.over(&a3, 2);
                let y6 = m.over(&a6, 4);
                if !m.divides(1, &(&y3 * &y3 + 4 * &y6)) {
                    let cp = if fp::quadratic_has_root(1, m.md(&y3), m.md(&-&y6), p) { 3 } else { 1 };
                    return Ok(done(&m, ReductionKind::Additive, Kodaira::IVStar, vd - 6, cp, None));
                }
                let root = if p == 2 {
                    m.md(&y6)
                } else {
                    fp::mulmod(m.md(&-&y3), m.half(), p)
                };
                m.rst(&BigInt::zero(), &BigInt::zero(), &(m.pow(2) * root));
                let [_, _, _, a4, a6] = m.a.clone();
                if !m.divides(4, &a4) {
                    return Ok(done(&m, ReductionKind::Additive, Kodaira::IIIStar, vd - 7, 2, None));
                }
                if !m.divides(6, &a6) {
                    return Ok(done(&m, ReductionKind::Additive, Kodaira::IIStar, vd - 8, 1, None));
                }
                // non-minimal at p: scale by u = p and start over
                let [a1, a2, a3, a4, a6] = m.a.clone();
                m.a = [
                    m.over(&a1, 1),
                    m.over(&a2, 2),
                    m.over(&a3, 3),
                    m.over(&a4, 4),
                    m.over(&a6, 6),
                ];
            }
        }
    }
}

/// Reduction of the curve mod `p` is non-singular iff `p` does not divide
/// the minimal discriminant.
pub fn has_good_reduction(curve: &WeierstrassCurve, p: u64) -> Result<bool> {
    Ok(tate_reduce(curve, p)?.kind == ReductionKind::Good)
}

/// Integral discriminant of [`WeierstrassCurve::integral_model`].
pub fn integral_discriminant(curve: &WeierstrassCurve) -> BigInt {
    let (m, _) = curve.integral_model();
    let d: BigRational = m.discriminant();
    d.to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reduce(a: [i64; 5], p: u64) -> ReductionData {
        tate_reduce(&WeierstrassCurve::from_ints(a), p).unwrap()
    }

    /// Ogg's formula `f = v(Δ_min) + 1 - m` links three independent outputs.
    fn ogg_holds(r: &ReductionData) -> bool {
        if r.kind == ReductionKind::Good {
            return r.conductor_exponent == 0;
        }
        r.conductor_exponent + r.kodaira.components() == r.discriminant_valuation + 1
    }

    #[test]
    fn eleven_a3_at_eleven_and_five() {
        let r = reduce([0, -1, 1, 0, 0], 11);
        assert_eq!(r.kind, ReductionKind::Multiplicative);
        assert_eq!(r.conductor_exponent, 1);
        assert_eq!(r.kodaira, Kodaira::In(1));
        assert_eq!(reduce([0, -1, 1, 0, 0], 5).kind, ReductionKind::Good);
    }

    #[test]
    fn cusp_at_p_is_additive() {
        for p in [5i64, 7, 11, 13] {
            let r = reduce([0, 0, 0, 0, p], p as u64);
            assert_eq!(r.kind, ReductionKind::Additive);
            assert_eq!(r.kodaira, Kodaira::II);
            assert_eq!(r.conductor_exponent, 2);
        }
    }

    #[test]
    fn non_minimal_models_are_reduced() {
        // 11a3 scaled by u = 1/5: same curve, discriminant times 5^12
        let e = WeierstrassCurve::from_ints([0, -1, 1, 0, 0]);
        let u = BigRational::new(1.into(), 5.into());
        let z = BigRational::zero();
        let big = e.transform(&u, &z, &z, &z);
        let r = tate_reduce(&big, 5).unwrap();
        assert_eq!(r.kind, ReductionKind::Good);
        assert_eq!(r.discriminant_valuation, 0);
        let r11 = tate_reduce(&big, 11).unwrap();
        assert_eq!(r11.kind, ReductionKind::Multiplicative);
    }

    #[test]
    fn kodaira_symbols_of_table_curves() {
        assert_eq!(reduce([0, 0, 1, 0, -7], 3).kodaira, Kodaira::IVStar);
        assert_eq!(reduce([1, 0, 1, 4, -6], 2).kodaira, Kodaira::In(6));
        assert_eq!(reduce([1, 0, 1, 4, -6], 7).kodaira, Kodaira::In(3));
        assert_eq!(reduce([0, -1, 1, -10, -20], 11).kodaira, Kodaira::In(5));
    }

    #[test]
    fn conductor_exponents_of_table_curves() {
        // (curve, prime, expected exponent)
        let cases: &[([i64; 5], u64, u32)] = &[
            ([0, -1, 1, -10, -20], 11, 1),
            ([0, 0, 1, -1, 0], 37, 1),
            ([1, 0, 1, 4, -6], 2, 1),
            ([1, 0, 1, 4, -6], 7, 1),
            ([0, -1, 0, -4, 4], 2, 3),
            ([0, -1, 0, -4, 4], 3, 1),
            ([0, 0, 1, 0, -7], 3, 3),
            ([0, 0, 0, 4, 0], 2, 5),
            ([0, 0, 0, 0, 1], 2, 2),
            ([0, 0, 0, 0, 1], 3, 2),
            ([0, 0, 0, 1, 0], 2, 6),
            ([0, 0, 0, -1, 0], 2, 5),
        ];
        for (a, p, f) in cases {
            let r = reduce(*a, *p);
            assert_eq!(r.conductor_exponent, *f, "{a:?} at {p}: {r:?}");
            assert!(ogg_holds(&r), "{a:?} at {p}: {r:?}");
        }
    }

    #[test]
    fn minimal_model_is_isomorphic() {
        let e = WeierstrassCurve::from_ints([0, 0, 1, 0, -7]);
        let r = reduce([0, 0, 1, 0, -7], 3);
        assert_eq!(r.minimal_model.j_invariant().unwrap(), e.j_invariant().unwrap());
    }

    #[test]
    fn singular_input_rejected() {
        assert_eq!(
            tate_reduce(&WeierstrassCurve::from_ints([0, 0, 0, 0, 0]), 5),
            Err(EllipticError::SingularCurve)
        );
    }
}
