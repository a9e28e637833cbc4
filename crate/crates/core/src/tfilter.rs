//! Decreasing hole sequences around a beach disc, their canonical filter
//! bases, and the continuation adjustment `y0 = y + ((eta2 - y(eta1)) / y'(eta1)) y'`.
//!
//! Holes are metric records only: a side of zero and a radius. All radii
//! are exact rationals.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TfilterError {
    #[error("radii must satisfy 0 < r < r* < 1 (got r = {r}, r* = {r_star})")]
    InvalidRadii { r: String, r_star: String },
    #[error("hole count must be at least 1")]
    EmptySequence,
    #[error("derivative vanishes at sample {index}")]
    DivisionByZero { index: usize },
}

pub type Result<T> = std::result::Result<T, TfilterError>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HoleRecord {
    pub side_id: u64,
    #[serde(with = "crate::json::rational")]
    pub radius: BigRational,
    #[serde(with = "crate::json::rational")]
    pub distance_to_beach: BigRational,
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HoleSequence {
    #[serde(with = "crate::json::rational")]
    pub beach_radius: BigRational,
    #[serde(with = "crate::json::rational")]
    pub outer_radius: BigRational,
    pub holes: Vec<HoleRecord>,
}

/// Annuli `(r_{n+1}, r_n]` shrinking onto the beach radius.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FilterBase {
    #[serde(with = "crate::json::rational")]
    pub center_radius: BigRational,
    #[serde(with = "crate::json::rational_vec")]
    pub annulus_radii: Vec<BigRational>,
}

fn check_radii(r: &BigRational, r_star: &BigRational) -> Result<()> {
    if !(r.is_positive() && r < r_star && *r_star < BigRational::one()) {
        return Err(TfilterError::InvalidRadii {
            r: r.to_string(),
            r_star: r_star.to_string(),
        });
    }
    Ok(())
}

/// `r + (r* - r) / 2^m`.
fn schedule(r: &BigRational, r_star: &BigRational, m: usize) -> BigRational {
    r + (r_star - r) / BigRational::from_integer(BigInt::from(2).pow(m as u32))
}

/// Holes `m = 1..=count` on distinct sides with radii `r + (r* - r)/2^m`.
pub fn generate_hole_sequence(r: &BigRational, r_star: &BigRational, count: usize) -> Result<HoleSequence> {
    check_radii(r, r_star)?;
    if count == 0 {
        return Err(TfilterError::EmptySequence);
    }
    let holes = (1..=count)
        .map(|m| {
            let radius = schedule(r, r_star, m);
            HoleRecord {
                side_id: m as u64,
                distance_to_beach: radius.clone(),
                radius,
                index: m,
            }
        })
        .collect();
    Ok(HoleSequence {
        beach_radius: r.clone(),
        outer_radius: r_star.clone(),
        holes,
    })
}

/// Radii `r_0 = r*, r_1, ..., r_len` on the same schedule as the holes.
pub fn canonical_base(r: &BigRational, r_star: &BigRational, len: usize) -> Result<FilterBase> {
    check_radii(r, r_star)?;
    Ok(FilterBase {
        center_radius: r.clone(),
        annulus_radii: (0..=len).map(|n| schedule(r, r_star, n)).collect(),
    })
}

/// The base matching a hole sequence: one annulus per hole plus the
/// innermost one.
pub fn base_for(seq: &HoleSequence) -> FilterBase {
    canonical_base(&seq.beach_radius, &seq.outer_radius, seq.holes.len() + 1)
        .expect("sequence radii were validated on construction")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpecReport {
    pub spec_i: bool,
    pub spec_ii: bool,
    pub spec_iii: bool,
    pub spec_iv: bool,
    pub details: Vec<String>,
}

impl SpecReport {
    pub fn all_pass(&self) -> bool {
        self.spec_i && self.spec_ii && self.spec_iii && self.spec_iv
    }
}

/// Checks the four hole-sequence conditions against a filter base:
///
/// - i: every hole is on its own side of zero;
/// - ii: radii strictly decrease inside `(r, r*)`, and the last one reaches
///   the innermost annulus of the base (the finite witness of `r_m -> r`);
/// - iii: each hole's distance to the beach equals its radius;
/// - iv: each annulus `(r_{n+1}, r_n]` of the base holds at most one radius.
pub fn verify_specs(seq: &HoleSequence, base: &FilterBase) -> SpecReport {
    let mut details = Vec::new();
    let holes = &seq.holes;

    let mut sides: Vec<u64> = holes.iter().map(|h| h.side_id).collect();
    sides.sort_unstable();
    let spec_i = sides.windows(2).all(|w| w[0] != w[1]);
    if !spec_i {
        details.push("spec i: two holes share a side of zero".into());
    }

    let (r, r_star) = (&seq.beach_radius, &seq.outer_radius);
    let decreasing = holes.windows(2).all(|w| w[1].radius < w[0].radius);
    let bounded = holes.iter().all(|h| &h.radius > r && &h.radius < r_star);
    let base_ok = base.center_radius == *r
        && base.annulus_radii.windows(2).all(|w| w[1] < w[0])
        && base.annulus_radii.iter().all(|x| x > r);
    let reaches_bottom = match (holes.last(), base.annulus_radii.len()) {
        (Some(h), n) if n >= 2 => h.radius <= base.annulus_radii[n - 2],
        _ => false,
    };
    if !decreasing {
        details.push("spec ii: radii are not strictly decreasing".into());
    }
    if !bounded {
        details.push(format!("spec ii: a radius falls outside ({r}, {r_star})"));
    }
    if !base_ok {
        details.push("filter base is not strictly decreasing onto the beach radius".into());
    }
    if !reaches_bottom {
        details.push("spec ii: last hole does not reach the innermost annulus".into());
    }
    let spec_ii = decreasing && bounded && base_ok && reaches_bottom;

    let spec_iii = holes.iter().all(|h| h.distance_to_beach == h.radius);
    if !spec_iii {
        details.push("spec iii: a distance to the beach differs from the radius".into());
    }

    let mut spec_iv = base_ok;
    for (n, w) in base.annulus_radii.windows(2).enumerate() {
        let inside = holes.iter().filter(|h| h.radius > w[1] && h.radius <= w[0]).count();
        if inside > 1 {
            spec_iv = false;
            details.push(format!("spec iv: annulus {n} holds {inside} holes"));
        }
    }
    SpecReport {
        spec_i,
        spec_ii,
        spec_iii,
        spec_iv,
        details,
    }
}

/// A side-effect-free function on `Q`.
pub type Evaluator = Arc<dyn Fn(&BigRational) -> BigRational + Send + Sync>;

pub fn evaluator<F>(f: F) -> Evaluator
where
    F: Fn(&BigRational) -> BigRational + Send + Sync + 'static,
{
    Arc::new(f)
}

/// `y + c y'` where the scalar `c` is fixed per sample point.
///
/// Away from the samples the factor of the nearest sample is used (ties go
/// to the earlier sample), so the result stays in the coset `y + (...) y'`.
#[derive(Clone)]
pub struct Continuation {
    y: Evaluator,
    y_prime: Evaluator,
    samples: Vec<(BigRational, BigRational)>,
}

impl fmt::Debug for Continuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Continuation")
            .field("samples", &self.samples)
            .finish_non_exhaustive()
    }
}

impl Continuation {
    /// `(eta1, c)` pairs.
    pub fn corrections(&self) -> &[(BigRational, BigRational)] {
        &self.samples
    }

    pub fn factor_at(&self, x: &BigRational) -> BigRational {
        self.samples
            .iter()
            .min_by(|a, b| (&a.0 - x).abs().cmp(&(&b.0 - x).abs()))
            .map(|(_, c)| c.clone())
            .unwrap_or_default()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let c = self.factor_at(x);
        if c.is_zero() {
            return (self.y)(x);
        }
        (self.y)(x) + c * (self.y_prime)(x)
    }

    pub fn to_evaluator(&self) -> Evaluator {
        let me = self.clone();
        Arc::new(move |x| me.eval(x))
    }
}

/// Builds `y0` from `y`, `y'` and the pairs `(eta1, eta2)`; `y0(eta1) = eta2`
/// at every sample.
pub fn continuation_adjust(
    y: Evaluator,
    y_prime: Evaluator,
    eta: &[(BigRational, BigRational)],
) -> Result<Continuation> {
    let samples = eta
        .iter()
        .enumerate()
        .map(|(index, (a, b))| {
            let d = y_prime(a);
            if d.is_zero() {
                return Err(TfilterError::DivisionByZero { index });
            }
            Ok((a.clone(), (b - y(a)) / d))
        })
        .collect::<Result<_>>()?;
    Ok(Continuation { y, y_prime, samples })
}
