//! The pencil of Weierstrass curves `E_t`, `a_i(t) = (1 - t) a_i(E1) + t a_i(E2)`,
//! scanned over a rational grid of `[0, 1]`.
//!
//! A fiber is *appropriate* when it is non-singular and has multiplicative
//! reduction at the working prime; every other fiber is a gap. Appropriate
//! fibers carry their L-series coefficient vectors, and a path from `t = 0`
//! to `t = 1` through appropriate fibers is chosen greedily so that each step
//! moves the two endpoint distances as much as possible.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::elliptic::{factorize, tate_reduce, EllipticError, ReductionKind, WeierstrassCurve};
use crate::modular::{distance, CoefficientVector, MetricConfig, ModularError};
use crate::svg::{num, Svg};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("endpoint curve E{0} is singular")]
    EndpointSingular(u8),
    #[error("grid needs at least one interval")]
    EmptyGrid,
    #[error("step window must be at least 1")]
    InvalidWindow,
    #[error("no gap-free path with steps of at most {window} cells joins the endpoints")]
    NoAdmissiblePath { window: usize },
    #[error("input lengths disagree")]
    LengthMismatch,
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
    #[error(transparent)]
    Modular(#[from] ModularError),
}

pub type Result<T> = std::result::Result<T, SurfaceError>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberFamily {
    pub e1: WeierstrassCurve,
    pub e2: WeierstrassCurve,
    #[serde(with = "crate::json::rational_vec")]
    pub grid: Vec<BigRational>,
    pub prime: u64,
}

impl FiberFamily {
    /// Uniform grid `t = i/k`, `i = 0..=k`. Without an explicit prime the
    /// smallest multiplicative prime shared by both endpoints is used.
    pub fn uniform(e1: WeierstrassCurve, e2: WeierstrassCurve, k: usize, prime: Option<u64>) -> Result<Self> {
        if k == 0 {
            return Err(SurfaceError::EmptyGrid);
        }
        if e1.nonsingular_invariants().is_err() {
            return Err(SurfaceError::EndpointSingular(1));
        }
        if e2.nonsingular_invariants().is_err() {
            return Err(SurfaceError::EndpointSingular(2));
        }
        let prime = match prime {
            Some(p) => p,
            None => factorize(&e1, &e2, 1)?.prime,
        };
        let grid = (0..=k)
            .map(|i| BigRational::new(BigInt::from(i), BigInt::from(k)))
            .collect();
        Ok(Self { e1, e2, grid, prime })
    }
}

pub fn interpolate(e1: &WeierstrassCurve, e2: &WeierstrassCurve, t: &BigRational) -> WeierstrassCurve {
    let s = BigRational::one() - t;
    let [a1, a2, a3, a4, a6] = std::array::from_fn(|i| {
        &s * e1.coefficients()[i] + t * e2.coefficients()[i]
    });
    WeierstrassCurve::new(a1, a2, a3, a4, a6)
}

type Poly = Vec<BigRational>;

fn padd(a: &Poly, b: &Poly) -> Poly {
    (0..a.len().max(b.len()))
        .map(|i| a.get(i).cloned().unwrap_or_default() + b.get(i).cloned().unwrap_or_default())
        .collect()
}

fn pmul(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn pscale(a: &Poly, c: i64) -> Poly {
    let c = BigRational::from_integer(c.into());
    a.iter().map(|x| x * &c).collect()
}

/// `Delta(E_t)` as a polynomial in `t`, lowest degree first, trailing zeros
/// removed. Its degree is at most 12.
pub fn discriminant_polynomial(e1: &WeierstrassCurve, e2: &WeierstrassCurve) -> Vec<BigRational> {
    let a: Vec<Poly> = (0..5)
        .map(|i| {
            let x = e1.coefficients()[i].clone();
            let y = e2.coefficients()[i].clone();
            vec![x.clone(), y - x]
        })
        .collect();
    let (a1, a2, a3, a4, a6) = (&a[0], &a[1], &a[2], &a[3], &a[4]);
    let b2 = padd(&pmul(a1, a1), &pscale(a2, 4));
    let b4 = padd(&pscale(a4, 2), &pmul(a1, a3));
    let b6 = padd(&pmul(a3, a3), &pscale(a6, 4));
    let b8 = [
        pmul(&pmul(a1, a1), a6),
        pscale(&pmul(a2, a6), 4),
        pscale(&pmul(&pmul(a1, a3), a4), -1),
        pmul(&pmul(a2, a3), a3),
        pscale(&pmul(a4, a4), -1),
    ]
    .iter()
    .fold(vec![], |acc, t| padd(&acc, t));
    let mut delta = [
        pscale(&pmul(&pmul(&b2, &b2), &b8), -1),
        pscale(&pmul(&pmul(&b4, &b4), &b4), -8),
        pscale(&pmul(&b6, &b6), -27),
        pscale(&pmul(&pmul(&b2, &b4), &b6), 9),
    ]
    .iter()
    .fold(vec![], |acc, t| padd(&acc, t));
    while delta.last().is_some_and(Zero::is_zero) {
        delta.pop();
    }
    delta
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FiberStatus {
    Appropriate,
    Gap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberRecord {
    #[serde(with = "crate::json::rational")]
    pub t: BigRational,
    pub curve: WeierstrassCurve,
    #[serde(with = "crate::json::rational")]
    pub delta: BigRational,
    pub singular: bool,
    /// Reduction at the working prime; absent on singular fibers.
    pub reduction: Option<ReductionKind>,
    pub status: FiberStatus,
    pub coeff_vector: Option<CoefficientVector>,
}

/// Classifies every grid fiber; appropriate fibers get `a(1..=n_max)`.
pub fn scan(family: &FiberFamily, n_max: usize) -> Result<Vec<FiberRecord>> {
    family
        .grid
        .par_iter()
        .map(|t| {
            let curve = interpolate(&family.e1, &family.e2, t);
            let delta = curve.discriminant();
            let singular = delta.is_zero();
            let reduction = if singular {
                None
            } else {
                Some(tate_reduce(&curve, family.prime)?.kind)
            };
            let status = if reduction == Some(ReductionKind::Multiplicative) {
                FiberStatus::Appropriate
            } else {
                FiberStatus::Gap
            };
            let coeff_vector = match status {
                FiberStatus::Appropriate => Some(crate::elliptic::l_coefficients(&curve, n_max)?),
                FiberStatus::Gap => None,
            };
            Ok(FiberRecord {
                t: t.clone(),
                curve,
                delta,
                singular,
                reduction,
                status,
                coeff_vector,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapRun {
    pub start_index: usize,
    #[serde(with = "crate::json::rational")]
    pub start_t: BigRational,
    #[serde(with = "crate::json::rational")]
    pub end_t: BigRational,
    pub length: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathSelection {
    pub steps: Vec<usize>,
    /// Per-step `|d1' - d1| + |d2' - d2|`.
    pub objective_trace: Vec<f64>,
    pub gap_runs: Vec<GapRun>,
    /// `d(f_t, f_0)` and `d(f_t, f_1)` per grid fiber, `None` on gaps.
    pub d1: Vec<Option<f64>>,
    pub d2: Vec<Option<f64>>,
}

/// Score of a step and the tie-break preferring the shorter jump.
fn step_key(d1: &[f64], d2: &[f64], i: usize, j: usize) -> (f64, usize) {
    ((d1[j] - d1[i]).abs() + (d2[j] - d2[i]).abs(), j - i)
}

fn better(a: (f64, usize), b: (f64, usize)) -> Ordering {
    a.0.total_cmp(&b.0).then(b.1.cmp(&a.1))
}

/// Indices from which the last grid point is reachable.
fn reachable(ok: &[bool], window: usize) -> Vec<bool> {
    let n = ok.len();
    let mut reach = vec![false; n];
    reach[n - 1] = ok[n - 1];
    for i in (0..n - 1).rev() {
        reach[i] = ok[i] && (i + 1..=(i + window).min(n - 1)).any(|j| reach[j]);
    }
    reach
}

/// Greedy path over distance profiles; `ok[i]` marks appropriate fibers.
///
/// At each step the admissible next index (within `window`, from which the
/// end is still reachable) with the largest step score wins, ties going to
/// the smaller jump. This is the lexicographically best sequence of step
/// keys among all admissible paths.
pub fn greedy_path(d1: &[f64], d2: &[f64], ok: &[bool], window: usize) -> Result<Vec<usize>> {
    if d1.len() != ok.len() || d2.len() != ok.len() {
        return Err(SurfaceError::LengthMismatch);
    }
    if window == 0 {
        return Err(SurfaceError::InvalidWindow);
    }
    if ok.len() < 2 {
        return Err(SurfaceError::EmptyGrid);
    }
    let reach = reachable(ok, window);
    if !reach[0] {
        return Err(SurfaceError::NoAdmissiblePath { window });
    }
    let last = ok.len() - 1;
    let mut path = vec![0];
    let mut cur = 0;
    while cur < last {
        cur = (cur + 1..=(cur + window).min(last))
            .filter(|&j| reach[j])
            .max_by(|&a, &b| better(step_key(d1, d2, cur, a), step_key(d1, d2, cur, b)))
            .expect("reachability guarantees a successor");
        path.push(cur);
    }
    Ok(path)
}

/// Exhaustive counterpart of [`greedy_path`]: enumerates every subset of
/// interior indices and keeps the admissible path with the
/// lexicographically largest key sequence.
pub fn exhaustive_path(d1: &[f64], d2: &[f64], ok: &[bool], window: usize) -> Result<Vec<usize>> {
    if d1.len() != ok.len() || d2.len() != ok.len() {
        return Err(SurfaceError::LengthMismatch);
    }
    let n = ok.len();
    if n < 2 {
        return Err(SurfaceError::EmptyGrid);
    }
    assert!(n <= 24, "exhaustive search is for small grids");
    let interior = n - 2;
    // (key sequence, path)
    #[allow(clippy::type_complexity)]
    let mut best: Option<(Vec<(f64, usize)>, Vec<usize>)> = None;
    for mask in 0u32..(1 << interior) {
        let mut path = vec![0];
        path.extend((0..interior).filter(|b| mask >> b & 1 == 1).map(|b| b + 1));
        path.push(n - 1);
        let admissible = path.iter().all(|&i| ok[i]) && path.windows(2).all(|w| w[1] - w[0] <= window);
        if !admissible {
            continue;
        }
        let keys: Vec<_> = path.windows(2).map(|w| step_key(d1, d2, w[0], w[1])).collect();
        let wins = match &best {
            None => true,
            Some((bk, _)) => {
                let ord = keys
                    .iter()
                    .zip(bk)
                    .map(|(&a, &b)| better(a, b))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal);
                ord == Ordering::Greater
            }
        };
        if wins {
            best = Some((keys, path));
        }
    }
    best.map(|(_, p)| p).ok_or(SurfaceError::NoAdmissiblePath { window })
}

/// Maximal runs of consecutive gap fibers.
pub fn gap_runs(records: &[FiberRecord]) -> Vec<GapRun> {
    let mut runs = Vec::new();
    let mut i = 0;
    while i < records.len() {
        if records[i].status == FiberStatus::Gap {
            let start = i;
            while i < records.len() && records[i].status == FiberStatus::Gap {
                i += 1;
            }
            runs.push(GapRun {
                start_index: start,
                start_t: records[start].t.clone(),
                end_t: records[i - 1].t.clone(),
                length: i - start,
            });
        } else {
            i += 1;
        }
    }
    runs
}

/// Distances of each appropriate fiber to the two endpoint fibers.
/// Distance to each endpoint per fiber; `None` on gaps.
type Profiles = (Vec<Option<f64>>, Vec<Option<f64>>);

fn endpoint_distances(records: &[FiberRecord], metric: &MetricConfig) -> Result<Profiles> {
    let (Some(first), Some(last)) = (
        records.first().and_then(|r| r.coeff_vector.as_ref()),
        records.last().and_then(|r| r.coeff_vector.as_ref()),
    ) else {
        return Ok((vec![None; records.len()], vec![None; records.len()]));
    };
    let mut d1 = Vec::with_capacity(records.len());
    let mut d2 = Vec::with_capacity(records.len());
    for r in records {
        match &r.coeff_vector {
            Some(f) => {
                d1.push(Some(distance(f, first, metric)?));
                d2.push(Some(distance(f, last, metric)?));
            }
            None => {
                d1.push(None);
                d2.push(None);
            }
        }
    }
    Ok((d1, d2))
}

pub fn select_geodesic(records: &[FiberRecord], metric: &MetricConfig, window: usize) -> Result<PathSelection> {
    let (d1, d2) = endpoint_distances(records, metric)?;
    let ok: Vec<bool> = records.iter().map(|r| r.status == FiberStatus::Appropriate).collect();
    let f1: Vec<f64> = d1.iter().map(|d| d.unwrap_or(0.0)).collect();
    let f2: Vec<f64> = d2.iter().map(|d| d.unwrap_or(0.0)).collect();
    let steps = greedy_path(&f1, &f2, &ok, window)?;
    let objective_trace = steps.windows(2).map(|w| step_key(&f1, &f2, w[0], w[1]).0).collect();
    Ok(PathSelection {
        steps,
        objective_trace,
        gap_runs: gap_runs(records),
        d1,
        d2,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapEvent {
    #[serde(flatten)]
    pub run: GapRun,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrecursorReport {
    pub threshold: usize,
    pub energy_scale: f64,
    pub precursors: Vec<GapEvent>,
    pub collapses: Vec<GapEvent>,
}

/// Runs shorter than `threshold` cells are precursors, the rest collapses;
/// each carries `energy_scale * length`.
pub fn precursor_report(path: &PathSelection, energy_scale: f64, threshold: usize) -> PrecursorReport {
    let (mut precursors, mut collapses) = (Vec::new(), Vec::new());
    for run in &path.gap_runs {
        let event = GapEvent {
            energy: energy_scale * run.length as f64,
            run: run.clone(),
        };
        if run.length >= threshold {
            collapses.push(event);
        } else {
            precursors.push(event);
        }
    }
    PrecursorReport {
        threshold,
        energy_scale,
        precursors,
        collapses,
    }
}

/// Line plot of both endpoint distances against `t`, gaps as breaks.
pub fn distance_plot(records: &[FiberRecord], path: &PathSelection) -> String {
    let (w, h, m) = (640.0, 400.0, 40.0);
    let ymax = path
        .d1
        .iter()
        .chain(&path.d2)
        .flatten()
        .fold(0.0f64, |a, &b| a.max(b))
        .max(1e-12);
    let sx = |t: f64| m + t * (w - 2.0 * m);
    let sy = |d: f64| h - m - d / ymax * (h - 2.0 * m);
    let mut svg = Svg::new(w, h);
    svg.polyline(&[(m, h - m), (w - m, h - m)], "#000000", 1.0);
    svg.polyline(&[(m, h - m), (m, m)], "#000000", 1.0);
    svg.text(w / 2.0, h - 8.0, 12.0, "t");
    svg.text(4.0, m - 10.0, 12.0, &format!("max {}", num(ymax)));
    for (series, colour) in [(&path.d1, "#1f77b4"), (&path.d2, "#d62728")] {
        let mut segment: Vec<(f64, f64)> = Vec::new();
        for (r, d) in records.iter().zip(series.iter()) {
            match d {
                Some(d) => segment.push((sx(r.t.to_f64().unwrap_or(0.0)), sy(*d))),
                None => {
                    if !segment.is_empty() {
                        svg.polyline(&segment, colour, 1.5);
                        segment.clear();
                    }
                }
            }
        }
        if !segment.is_empty() {
            svg.polyline(&segment, colour, 1.5);
        }
    }
    for &i in &path.steps {
        let t = records[i].t.to_f64().unwrap_or(0.0);
        svg.circle(sx(t), h - m, 3.0, "#2ca02c");
    }
    svg.finish()
}
