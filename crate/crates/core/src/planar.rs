//! A planar picture of `Z_p`: the digit string `d0 d1 d2 ...` goes to
//!
//! ```text
//! ((1 - eps) / 2) * sum_k eps^k (w^{d_k} - 1),    w = exp(2 pi i / p)
//! ```
//!
//! With `eps <= 1/(2p)` every level of digits lands in disjoint clusters, so
//! the map is injective at any finite depth, preserves the ultrametric order
//! of distances, sends 0 to the origin and stays inside the unit disc.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::padic::{PadicError, PadicNumber};
use crate::series::{SeriesError, TruncatedSeries};
use crate::svg::{num, palette, Svg};

#[derive(Debug, Error)]
pub enum PlanarError {
    #[error("element of valuation {0} is not in Z_p")]
    NegativeValuation(i64),
    #[error("depth {depth} exceeds the {known} known digits")]
    DepthExceedsPrecision { depth: usize, known: usize },
    #[error("all points coincide; no scale can be fitted")]
    DegenerateConfiguration,
    #[error("point sets differ in size ({0} and {1})")]
    LengthMismatch(usize, usize),
    #[error("nothing to render")]
    EmptyInput,
    #[error("contraction {0} must lie in (0, 1)")]
    InvalidContraction(f64),
    #[error(transparent)]
    Padic(#[from] PadicError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("cannot write {path}: {source}")]
    IoFailure {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, PlanarError>;

pub type Point = (f64, f64);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmbedConfig {
    pub prime: u64,
    pub depth: usize,
    pub contraction: f64,
}

impl EmbedConfig {
    /// Depth `depth` with the default contraction `1/(2p)`.
    pub fn new(prime: u64, depth: usize) -> Self {
        Self {
            prime,
            depth,
            contraction: 1.0 / (2.0 * prime as f64),
        }
    }

    fn direction(&self, d: u64) -> Point {
        let a = 2.0 * PI * d as f64 / self.prime as f64;
        (a.cos() - 1.0, a.sin())
    }
}

/// Embeds an explicit digit string (least significant first).
pub fn embed_digits(digits: &[u64], cfg: &EmbedConfig) -> Point {
    let eps = cfg.contraction;
    let c = (1.0 - eps) / 2.0;
    let mut scale = c;
    let (mut x, mut y) = (0.0, 0.0);
    for &d in digits {
        if d != 0 {
            let (dx, dy) = cfg.direction(d);
            x += scale * dx;
            y += scale * dy;
        }
        scale *= eps;
    }
    (x, y)
}

/// Embeds the first `cfg.depth` digits of `x`.
pub fn embed(x: &PadicNumber, cfg: &EmbedConfig) -> Result<Point> {
    if !(cfg.contraction > 0.0 && cfg.contraction < 1.0) {
        return Err(PlanarError::InvalidContraction(cfg.contraction));
    }
    if let Some(v) = x.valuation() {
        if v < 0 {
            return Err(PlanarError::NegativeValuation(v));
        }
        let known = v as usize + x.precision() as usize;
        if cfg.depth > known {
            return Err(PlanarError::DepthExceedsPrecision { depth: cfg.depth, known });
        }
    }
    let digits = x.integer_digits(cfg.depth).expect("valuation checked");
    Ok(embed_digits(&digits, cfg))
}

/// Planar points standing for one orbit or one portrait.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitImage {
    pub label: String,
    pub points: Vec<Point>,
}

impl OrbitImage {
    pub fn new(label: impl Into<String>, points: Vec<Point>) -> Self {
        Self {
            label: label.into(),
            points,
        }
    }

    pub fn from_orbit(label: impl Into<String>, orbit: &crate::series::OrbitRecord, cfg: &EmbedConfig) -> Result<Self> {
        let points = orbit
            .iterates
            .iter()
            .map(|x| {
                let mut c = *cfg;
                if let Some(v) = x.valuation() {
                    c.depth = c.depth.min(v as usize + x.precision() as usize);
                }
                embed(x, &c)
            })
            .collect::<Result<_>>()?;
        Ok(Self::new(label, points))
    }
}

/// SVG with one `<g>` layer per image, in input order. The unit disc is
/// drawn as a reference circle.
pub fn render_svg(images: &[OrbitImage]) -> Result<String> {
    if images.is_empty() {
        return Err(PlanarError::EmptyInput);
    }
    let size = 512.0;
    let half = size / 2.0;
    let to_px = |(x, y): Point| (half + x * (half - 16.0), half - y * (half - 16.0));
    let mut svg = Svg::new(size, size);
    svg.raw(&format!(
        r##"<circle cx="{c}" cy="{c}" r="{r}" fill="none" stroke="#cccccc"/>"##,
        c = num(half),
        r = num(half - 16.0)
    ));
    for (i, img) in images.iter().enumerate() {
        let colour = palette(i);
        svg.raw(&format!(r#"<g id="layer-{i}" data-label="{}">"#, img.label.replace('"', "'")));
        let px: Vec<Point> = img.points.iter().map(|&p| to_px(p)).collect();
        if px.len() > 1 {
            svg.polyline(&px, colour, 0.75);
        }
        for &(x, y) in &px {
            svg.circle(x, y, 2.5, colour);
        }
        svg.raw("</g>");
    }
    Ok(svg.finish())
}

pub fn render(images: &[OrbitImage], out: &Path) -> Result<()> {
    let svg = render_svg(images)?;
    std::fs::write(out, svg).map_err(|source| PlanarError::IoFailure {
        path: out.display().to_string(),
        source,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HomothetyReport {
    pub scale: f64,
    pub translation: Point,
    /// Root-mean-square distance between `b` and the fitted `s a + t`.
    pub residual: f64,
    pub pass: bool,
}

/// Least-squares fit `b ~ s a + t` (real scale, no rotation); passes when
/// `|s - expected| <= tolerance`.
pub fn homothety_check(a: &OrbitImage, b: &OrbitImage, expected: f64, tolerance: f64) -> Result<HomothetyReport> {
    let (pa, pb) = (&a.points, &b.points);
    if pa.is_empty() || pb.is_empty() {
        return Err(PlanarError::EmptyInput);
    }
    if pa.len() != pb.len() {
        return Err(PlanarError::LengthMismatch(pa.len(), pb.len()));
    }
    let n = pa.len() as f64;
    let mean = |ps: &[Point]| {
        let (sx, sy) = ps.iter().fold((0.0, 0.0), |(x, y), p| (x + p.0, y + p.1));
        (sx / n, sy / n)
    };
    let (ma, mb) = (mean(pa), mean(pb));
    let mut saa = 0.0;
    let mut sab = 0.0;
    for (p, q) in pa.iter().zip(pb) {
        let (ax, ay) = (p.0 - ma.0, p.1 - ma.1);
        saa += ax * ax + ay * ay;
        sab += ax * (q.0 - mb.0) + ay * (q.1 - mb.1);
    }
    if saa <= f64::EPSILON * f64::EPSILON {
        return Err(PlanarError::DegenerateConfiguration);
    }
    let scale = sab / saa;
    let translation = (mb.0 - scale * ma.0, mb.1 - scale * ma.1);
    let sq: f64 = pa
        .iter()
        .zip(pb)
        .map(|(p, q)| {
            let dx = q.0 - (scale * p.0 + translation.0);
            let dy = q.1 - (scale * p.1 + translation.1);
            dx * dx + dy * dy
        })
        .sum();
    Ok(HomothetyReport {
        scale,
        translation,
        residual: (sq / n).sqrt(),
        pass: (scale - expected).abs() <= tolerance,
    })
}

/// Layout of a "zoom-stack" portrait of a series.
///
/// For every seed `p * w` and every iterate `k = 1..=iterations` the unit
/// digits of the iterate are read at several zoom levels. Zoom level `s`
/// drops the first `s` digits and embeds the next `depth` ones. Each
/// `(seed, iterate, zoom)` triple owns a cell of a grid inside
/// `[-0.7, 0.7]^2`, and its point sits at the cell centre plus `offset`
/// times the embedded digits. A change in digit `s` of any iterate therefore
/// moves a point by a fixed fraction of a cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PortraitConfig {
    pub prime: u64,
    pub precision: u32,
    /// Units `w`; the seeds are `p * w`.
    pub seed_units: Vec<i64>,
    pub iterations: usize,
    pub zooms: Vec<u32>,
    pub depth: usize,
    /// Offset scale as a fraction of the cell size.
    pub offset: f64,
}

impl PortraitConfig {
    pub fn new(prime: u64) -> Self {
        Self {
            prime,
            precision: 12,
            seed_units: vec![1, 2],
            iterations: 2,
            zooms: vec![1, 2, 3],
            depth: 2,
            offset: 0.25,
        }
    }

    pub fn cells(&self) -> usize {
        self.seed_units.len() * self.iterations * self.zooms.len()
    }

    /// Centre and size of cell `i`.
    pub fn cell(&self, i: usize) -> (Point, f64) {
        let n = self.cells().max(1);
        let cols = (n as f64).sqrt().ceil() as usize;
        let rows = n.div_ceil(cols);
        let span = 1.4;
        let size = span / cols.max(rows) as f64;
        let (r, c) = (i / cols, i % cols);
        let x = -0.7 + size * (c as f64 + 0.5) + (span - size * cols as f64) / 2.0;
        let y = 0.7 - size * (r as f64 + 0.5) - (span - size * rows as f64) / 2.0;
        ((x, y), size)
    }
}

/// The portrait of `series` under `cfg`, one point per cell.
pub fn portrait(series: &TruncatedSeries, cfg: &PortraitConfig) -> Result<OrbitImage> {
    let embed_cfg = EmbedConfig::new(cfg.prime, cfg.depth);
    let mut points = Vec::with_capacity(cfg.cells());
    let mut cell = 0;
    for &w in &cfg.seed_units {
        let seed = PadicNumber::from_int(cfg.prime, cfg.precision, w * cfg.prime as i64)?;
        let orbit = series.iterate(&seed, cfg.iterations)?;
        for x in orbit.iterates.iter().skip(1) {
            for &s in &cfg.zooms {
                let digits = x.shifted_unit(s).unwrap_or_default();
                let digits = &digits[..cfg.depth.min(digits.len())];
                let ((cx, cy), size) = cfg.cell(cell);
                let (dx, dy) = embed_digits(digits, &embed_cfg);
                let lambda = cfg.offset * size;
                points.push((cx + lambda * dx, cy + lambda * dy));
                cell += 1;
            }
        }
    }
    Ok(OrbitImage::new(series.to_string(), points))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(a: Point, b: Point) -> f64 {
        ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
    }

    #[test]
    fn zero_and_truncation() {
        let cfg = EmbedConfig::new(3, 8);
        let zero = PadicNumber::zero(3, 10).unwrap();
        assert_eq!(embed(&zero, &cfg).unwrap(), (0.0, 0.0));
        let one = PadicNumber::from_int(3, 10, 1).unwrap();
        let far = PadicNumber::from_int(3, 10, 1 + 3i64.pow(8)).unwrap();
        assert_eq!(embed(&one, &cfg).unwrap(), embed(&far, &cfg).unwrap());
    }

    #[test]
    fn domain_errors() {
        let cfg = EmbedConfig::new(3, 8);
        let third = PadicNumber::from_rational(3, 10, &num_rational::BigRational::new(1.into(), 3.into())).unwrap();
        assert!(matches!(embed(&third, &cfg), Err(PlanarError::NegativeValuation(-1))));
        let short = PadicNumber::from_int(3, 4, 2).unwrap();
        assert!(matches!(embed(&short, &cfg), Err(PlanarError::DepthExceedsPrecision { .. })));
    }

    #[test]
    fn shift_by_p_is_a_homothety() {
        let cfg = EmbedConfig::new(5, 6);
        let x = PadicNumber::from_int(5, 10, 1234).unwrap();
        let px = PadicNumber::from_int(5, 10, 5 * 1234).unwrap();
        let (a, b) = (embed(&x, &cfg).unwrap(), embed(&px, &EmbedConfig { depth: 7, ..cfg }).unwrap());
        assert!((b.0 - a.0 * cfg.contraction).abs() < 1e-15);
        assert!((b.1 - a.1 * cfg.contraction).abs() < 1e-15);
    }

    #[test]
    fn exact_scaling_is_recovered() {
        let a = OrbitImage::new("a", vec![(0.1, 0.2), (-0.3, 0.5), (0.7, -0.1)]);
        let b = OrbitImage::new("b", a.points.iter().map(|&(x, y)| (x / 3.0 + 0.1, y / 3.0)).collect());
        let r = homothety_check(&a, &b, 1.0 / 3.0, 1e-2).unwrap();
        assert!((r.scale - 1.0 / 3.0).abs() < 1e-12 && r.residual < 1e-12 && r.pass);
        let flat = OrbitImage::new("c", vec![(0.5, 0.5); 3]);
        assert!(matches!(homothety_check(&flat, &b, 1.0, 1e-2), Err(PlanarError::DegenerateConfiguration)));
    }

    #[test]
    fn portraits_separate_small_candidates() {
        let cfg = PortraitConfig::new(3);
        let mut images = Vec::new();
        for a1 in 0..3 {
            for a2 in 0..3 {
                for a3 in 0..3 {
                    images.push(portrait(&TruncatedSeries::from_i64(&[a1, a2, a3]), &cfg).unwrap());
                }
            }
        }
        for i in 0..images.len() {
            for j in 0..i {
                let gap = images[i]
                    .points
                    .iter()
                    .zip(&images[j].points)
                    .map(|(&a, &b)| dist(a, b))
                    .fold(0.0, f64::max);
                assert!(gap > 0.03, "{} vs {}: {gap}", images[i].label, images[j].label);
            }
        }
    }

    #[test]
    fn svg_layers_in_order() {
        let imgs = [
            OrbitImage::new("first", vec![(0.0, 0.0)]),
            OrbitImage::new("second", vec![(0.5, 0.0), (0.0, 0.5)]),
        ];
        let s = render_svg(&imgs).unwrap();
        let a = s.find("layer-0").unwrap();
        let b = s.find("layer-1").unwrap();
        assert!(a < b);
        assert_eq!(s, render_svg(&imgs).unwrap());
        assert!(render_svg(&[]).is_err());
    }
}
