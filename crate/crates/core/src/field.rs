//! Planar vector fields on uniform grids: loading and saving, RK4
//! streamline tracing, synthetic circulating fields, and Chamfer matching of
//! streamline clouds against series portraits.

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::planar::{portrait, OrbitImage, PlanarError, Point, PortraitConfig};
use crate::series::TruncatedSeries;

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("cannot parse field: {0}")]
    ParseError(String),
    #[error("samples do not form a rectangular grid: {0}")]
    NonRectangularGrid(String),
    #[error("grid does not cover [-1, 1]^2")]
    DomainNotCovered,
    #[error("seed ({0}, {1}) lies outside the grid")]
    SeedOutOfDomain(f64, f64),
    #[error("empty point set")]
    EmptyInput,
    #[error(transparent)]
    Planar(#[from] PlanarError),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, FieldError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldKind {
    VorticityProjection,
    MagneticProjection,
    Synthetic,
}

/// Samples on the nodes `(xs[i], ys[j])`, stored row-major with `y` outer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub vx: Vec<f64>,
    pub vy: Vec<f64>,
    pub kind: FieldKind,
}

const SPACING_TOLERANCE: f64 = 1e-9;

fn check_axis(name: &str, a: &[f64]) -> Result<f64> {
    if a.len() < 2 {
        return Err(FieldError::NonRectangularGrid(format!("{name} axis has fewer than 2 nodes")));
    }
    let h = (a[a.len() - 1] - a[0]) / (a.len() - 1) as f64;
    if h <= 0.0 {
        return Err(FieldError::NonRectangularGrid(format!("{name} axis is not increasing")));
    }
    for (i, w) in a.windows(2).enumerate() {
        if ((w[1] - w[0]) - h).abs() > SPACING_TOLERANCE.max(h * 1e-6) {
            return Err(FieldError::NonRectangularGrid(format!("{name} spacing changes at node {i}")));
        }
    }
    Ok(h)
}

impl FieldGrid {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>, vx: Vec<f64>, vy: Vec<f64>, kind: FieldKind) -> Result<Self> {
        check_axis("x", &xs)?;
        check_axis("y", &ys)?;
        let n = xs.len() * ys.len();
        if vx.len() != n || vy.len() != n {
            return Err(FieldError::NonRectangularGrid(format!(
                "{} x {} nodes but {} samples",
                xs.len(),
                ys.len(),
                vx.len()
            )));
        }
        if vx.iter().chain(&vy).any(|v| !v.is_finite()) {
            return Err(FieldError::ParseError("non-finite vector component".into()));
        }
        let covers = xs[0] <= -1.0 && ys[0] <= -1.0 && xs[xs.len() - 1] >= 1.0 && ys[ys.len() - 1] >= 1.0;
        if !covers {
            return Err(FieldError::DomainNotCovered);
        }
        Ok(Self { xs, ys, vx, vy, kind })
    }

    /// Samples `f` on an `n x n` grid over `[-1, 1]^2`.
    pub fn sample<F: Fn(f64, f64) -> (f64, f64) + Sync>(n: usize, kind: FieldKind, f: F) -> Self {
        let axis: Vec<f64> = (0..n).map(|i| -1.0 + 2.0 * i as f64 / (n - 1) as f64).collect();
        let values: Vec<(f64, f64)> = (0..n * n)
            .into_par_iter()
            .map(|k| f(axis[k % n], axis[k / n]))
            .collect();
        let (vx, vy) = values.into_iter().unzip();
        Self {
            xs: axis.clone(),
            ys: axis,
            vx,
            vy,
            kind,
        }
    }

    pub fn nx(&self) -> usize {
        self.xs.len()
    }

    pub fn ny(&self) -> usize {
        self.ys.len()
    }

    pub fn spacing(&self) -> (f64, f64) {
        let hx = (self.xs[self.nx() - 1] - self.xs[0]) / (self.nx() - 1) as f64;
        let hy = (self.ys[self.ny() - 1] - self.ys[0]) / (self.ny() - 1) as f64;
        (hx, hy)
    }

    pub fn contains(&self, (x, y): Point) -> bool {
        x >= self.xs[0] && x <= self.xs[self.nx() - 1] && y >= self.ys[0] && y <= self.ys[self.ny() - 1]
    }

    fn at(&self, i: usize, j: usize) -> (f64, f64) {
        let k = j * self.nx() + i;
        (self.vx[k], self.vy[k])
    }

    /// Bilinear interpolation; `None` outside the grid.
    pub fn value(&self, p: Point) -> Option<(f64, f64)> {
        if !self.contains(p) {
            return None;
        }
        let (hx, hy) = self.spacing();
        let fx = (p.0 - self.xs[0]) / hx;
        let fy = (p.1 - self.ys[0]) / hy;
        let i = (fx.floor() as usize).min(self.nx() - 2);
        let j = (fy.floor() as usize).min(self.ny() - 2);
        let (tx, ty) = (fx - i as f64, fy - j as f64);
        let (a, b, c, d) = (self.at(i, j), self.at(i + 1, j), self.at(i, j + 1), self.at(i + 1, j + 1));
        let mix = |a: f64, b: f64, c: f64, d: f64| {
            (1.0 - ty) * ((1.0 - tx) * a + tx * b) + ty * ((1.0 - tx) * c + tx * d)
        };
        Some((mix(a.0, b.0, c.0, d.0), mix(a.1, b.1, c.1, d.1)))
    }

    /// Central-difference curl `dvy/dx - dvx/dy` at interior nodes (0 on the
    /// border).
    pub fn curl(&self) -> Vec<f64> {
        let (nx, ny) = (self.nx(), self.ny());
        let (hx, hy) = self.spacing();
        let mut out = vec![0.0; nx * ny];
        for j in 1..ny - 1 {
            for i in 1..nx - 1 {
                let dvy = (self.at(i + 1, j).1 - self.at(i - 1, j).1) / (2.0 * hx);
                let dvx = (self.at(i, j + 1).0 - self.at(i, j - 1).0) / (2.0 * hy);
                out[j * nx + i] = dvy - dvx;
            }
        }
        out
    }

    /// Local maxima of `|curl|` above `fraction * max |curl|`, refined to
    /// sub-cell accuracy by a parabola through each axis' neighbours.
    pub fn vortex_cores(&self, fraction: f64) -> Vec<Point> {
        let w: Vec<f64> = self.curl().into_iter().map(f64::abs).collect();
        let (nx, ny) = (self.nx(), self.ny());
        let top = w.iter().cloned().fold(0.0, f64::max);
        if top == 0.0 {
            return Vec::new();
        }
        let (hx, hy) = self.spacing();
        let mut cores = Vec::new();
        for j in 2..ny - 2 {
            for i in 2..nx - 2 {
                let c = w[j * nx + i];
                if c < fraction * top {
                    continue;
                }
                let neighbours = (-1i64..=1).flat_map(|dj| (-1i64..=1).map(move |di| (di, dj)));
                let is_max = neighbours.filter(|&d| d != (0, 0)).all(|(di, dj)| {
                    let k = (j as i64 + dj) as usize * nx + (i as i64 + di) as usize;
                    // strict on one side so plateaus yield a single node
                    if (dj, di) < (0, 0) { c > w[k] } else { c >= w[k] }
                });
                if !is_max {
                    continue;
                }
                let vertex = |l: f64, m: f64, r: f64| {
                    let den = l - 2.0 * m + r;
                    if den.abs() < 1e-300 { 0.0 } else { (0.5 * (l - r) / den).clamp(-0.5, 0.5) }
                };
                let ox = vertex(w[j * nx + i - 1], c, w[j * nx + i + 1]);
                let oy = vertex(w[(j - 1) * nx + i], c, w[(j + 1) * nx + i]);
                cores.push((self.xs[i] + ox * hx, self.ys[j] + oy * hy));
            }
        }
        cores
    }
}

#[derive(Deserialize)]
struct CsvRow {
    x: f64,
    y: f64,
    vx: f64,
    vy: f64,
}

fn parse_csv(text: &str) -> Result<FieldGrid> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| FieldError::ParseError(e.to_string()))?
        .iter()
        .map(str::to_owned)
        .collect();
    if header != ["x", "y", "vx", "vy"] {
        return Err(FieldError::ParseError(format!("expected header x,y,vx,vy, got {}", header.join(","))));
    }
    let mut rows = Vec::new();
    for (line, rec) in reader.deserialize::<CsvRow>().enumerate() {
        let r = rec.map_err(|e| FieldError::ParseError(format!("row {}: {e}", line + 2)))?;
        if ![r.x, r.y, r.vx, r.vy].iter().all(|v| v.is_finite()) {
            return Err(FieldError::ParseError(format!("row {}: non-finite value", line + 2)));
        }
        rows.push(r);
    }
    if rows.is_empty() {
        return Err(FieldError::ParseError("no samples".into()));
    }
    let y0 = rows[0].y;
    let nx = rows.iter().take_while(|r| r.y == y0).count();
    if rows.len() % nx != 0 {
        return Err(FieldError::NonRectangularGrid(format!("{} samples in rows of {nx}", rows.len())));
    }
    let xs: Vec<f64> = rows[..nx].iter().map(|r| r.x).collect();
    let ys: Vec<f64> = rows.iter().step_by(nx).map(|r| r.y).collect();
    for (k, r) in rows.iter().enumerate() {
        if r.x != xs[k % nx] || r.y != ys[k / nx] {
            return Err(FieldError::NonRectangularGrid(format!("sample {k} is off the grid")));
        }
    }
    let (vx, vy) = rows.iter().map(|r| (r.vx, r.vy)).unzip();
    FieldGrid::new(xs, ys, vx, vy, FieldKind::Synthetic)
}

/// Reads a `x,y,vx,vy` CSV (row-major, `y` outer) or the JSON form of
/// [`FieldGrid`], chosen by the `.json` extension.
pub fn load_field(path: &Path) -> Result<FieldGrid> {
    let text = std::fs::read_to_string(path).map_err(|source| FieldError::Io {
        path: path.display().to_string(),
        source,
    })?;
    if path.extension().is_some_and(|e| e == "json") {
        let g: FieldGrid = serde_json::from_str(&text).map_err(|e| FieldError::ParseError(e.to_string()))?;
        return FieldGrid::new(g.xs, g.ys, g.vx, g.vy, g.kind);
    }
    parse_csv(&text)
}

/// Writes the CSV form; values use Rust's shortest round-trip formatting, so
/// loading the file gives back the same grid.
pub fn save_field_csv(grid: &FieldGrid, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| FieldError::Io {
        path: path.display().to_string(),
        source: e.into(),
    })?;
    let io = |e: csv::Error| FieldError::Io {
        path: path.display().to_string(),
        source: e.into(),
    };
    w.write_record(["x", "y", "vx", "vy"]).map_err(io)?;
    for (j, &y) in grid.ys.iter().enumerate() {
        for (i, &x) in grid.xs.iter().enumerate() {
            let (vx, vy) = grid.at(i, j);
            w.write_record([x, y, vx, vy].map(|v| v.to_string())).map_err(io)?;
        }
    }
    w.flush().map_err(|source| FieldError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceConfig {
    /// Arc length per RK4 step.
    pub step: f64,
    pub max_steps: usize,
    /// Tracing stops where the field is slower than this.
    pub speed_floor: f64,
    /// Stop once the line returns within `2 * step` of its seed after at
    /// least `min_loop_steps` steps.
    pub close_loops: bool,
    pub min_loop_steps: usize,
    /// `true` follows `-v`.
    pub backward: bool,
}

impl Default for TraceConfig {
    fn default() -> Self {
        Self {
            step: 1e-3,
            max_steps: 20_000,
            speed_floor: 1e-9,
            close_loops: true,
            min_loop_steps: 20,
            backward: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreamlineSet {
    pub polylines: Vec<Vec<Point>>,
    pub seeds: Vec<Point>,
    pub step: f64,
    pub max_steps: usize,
}

impl StreamlineSet {
    pub fn points(&self) -> Vec<Point> {
        self.polylines.iter().flatten().copied().collect()
    }
}

fn direction(grid: &FieldGrid, p: Point, sign: f64, floor: f64) -> Option<Point> {
    let (vx, vy) = grid.value(p)?;
    let s = vx.hypot(vy);
    if s < floor {
        return None;
    }
    Some((sign * vx / s, sign * vy / s))
}

fn trace_one(grid: &FieldGrid, seed: Point, cfg: &TraceConfig) -> Vec<Point> {
    let sign = if cfg.backward { -1.0 } else { 1.0 };
    let h = cfg.step;
    let dir = |p: Point| direction(grid, p, sign, cfg.speed_floor);
    let mut line = vec![seed];
    let mut p = seed;
    for n in 1..=cfg.max_steps {
        let Some(k1) = dir(p) else { break };
        let Some(k2) = dir((p.0 + 0.5 * h * k1.0, p.1 + 0.5 * h * k1.1)) else { break };
        let Some(k3) = dir((p.0 + 0.5 * h * k2.0, p.1 + 0.5 * h * k2.1)) else { break };
        let Some(k4) = dir((p.0 + h * k3.0, p.1 + h * k3.1)) else { break };
        let next = (
            p.0 + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
            p.1 + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
        );
        if !grid.contains(next) {
            break;
        }
        line.push(next);
        p = next;
        if cfg.close_loops && n >= cfg.min_loop_steps && (p.0 - seed.0).hypot(p.1 - seed.1) < 2.0 * h {
            break;
        }
    }
    line
}

/// RK4 on the unit direction field of the bilinear interpolant.
pub fn trace(grid: &FieldGrid, seeds: &[Point], cfg: &TraceConfig) -> Result<StreamlineSet> {
    if let Some(&(x, y)) = seeds.iter().find(|&&s| !grid.contains(s)) {
        return Err(FieldError::SeedOutOfDomain(x, y));
    }
    let polylines = seeds.par_iter().map(|&s| trace_one(grid, s, cfg)).collect();
    Ok(StreamlineSet {
        polylines,
        seeds: seeds.to_vec(),
        step: cfg.step,
        max_steps: cfg.max_steps,
    })
}

/// Lamb-Oseen vortices with alternating circulation sign, a stand-in for a
/// vortex street.
pub fn vortex_street(cores: &[Point], core_radius: f64, n: usize) -> FieldGrid {
    FieldGrid::sample(n, FieldKind::VorticityProjection, |x, y| {
        cores.iter().enumerate().fold((0.0, 0.0), |(u, v), (k, &(cx, cy))| {
            let (dx, dy) = (x - cx, y - cy);
            let r2 = dx * dx + dy * dy;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let g = if r2 == 0.0 { 0.0 } else { sign * (1.0 - (-r2 / (core_radius * core_radius)).exp()) / r2 };
            (u - g * dy, v + g * dx)
        })
    })
}

/// Co-rotating rings with azimuthal field `(r/a) exp((1 - r^2/a^2)/2)`,
/// a stand-in for nested poloidal flux surfaces.
pub fn poloidal_rings(cores: &[Point], ring_radius: f64, n: usize) -> FieldGrid {
    FieldGrid::sample(n, FieldKind::MagneticProjection, |x, y| {
        cores.iter().fold((0.0, 0.0), |(u, v), &(cx, cy)| {
            let (dx, dy) = (x - cx, y - cy);
            let r2 = dx * dx + dy * dy;
            let a2 = ring_radius * ring_radius;
            // B_theta / r, so the tangential component is g * (-dy, dx)
            let g = (0.5 * (1.0 - r2 / a2)).exp() / ring_radius;
            (u - g * dy, v + g * dx)
        })
    })
}

/// Parameters of the streamline extraction used for matching.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtractConfig {
    /// Cores are local `|curl|` maxima above this fraction of the largest.
    pub core_fraction: f64,
    /// Seeds sit this far to the right of each detected core.
    pub seed_offset: f64,
    pub trace: TraceConfig,
}

impl Default for ExtractConfig {
    fn default() -> Self {
        Self {
            core_fraction: 0.2,
            seed_offset: 0.015,
            trace: TraceConfig {
                max_steps: 2_000,
                ..TraceConfig::default()
            },
        }
    }
}

/// Field lines looping around every detected vortex core.
pub fn extract_streamlines(grid: &FieldGrid, cfg: &ExtractConfig) -> Result<StreamlineSet> {
    let seeds: Vec<Point> = grid
        .vortex_cores(cfg.core_fraction)
        .into_iter()
        .map(|(x, y)| (x + cfg.seed_offset, y))
        .filter(|&s| grid.contains(s))
        .collect();
    trace(grid, &seeds, &cfg.trace)
}

/// Adds independent `N(0, sigma^2)` noise to every point.
pub fn perturb(lines: &StreamlineSet, sigma: f64, seed: u64) -> StreamlineSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, sigma).expect("finite sigma");
    let polylines = lines
        .polylines
        .iter()
        .map(|l| {
            l.iter()
                .map(|&(x, y)| (x + normal.sample(&mut rng), y + normal.sample(&mut rng)))
                .collect()
        })
        .collect();
    StreamlineSet {
        polylines,
        ..lines.clone()
    }
}

/// Shrinks a cloud about the origin only if it leaves the unit disc.
fn into_unit_disc(points: &[Point]) -> Vec<Point> {
    let r = points.iter().map(|p| p.0.hypot(p.1)).fold(0.0, f64::max);
    if r <= 1.0 {
        return points.to_vec();
    }
    points.iter().map(|&(x, y)| (x / r, y / r)).collect()
}

fn mean_nearest(from: &[Point], to: &[Point]) -> f64 {
    let total: f64 = from
        .par_iter()
        .map(|a| {
            to.iter()
                .map(|b| (a.0 - b.0).hypot(a.1 - b.1))
                .fold(f64::INFINITY, f64::min)
        })
        .sum();
    total / from.len() as f64
}

/// Symmetric Chamfer distance: the average of the two mean nearest-point
/// distances.
pub fn chamfer(a: &[Point], b: &[Point]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(FieldError::EmptyInput);
    }
    let (a, b) = (into_unit_disc(a), into_unit_disc(b));
    Ok(0.5 * (mean_nearest(&a, &b) + mean_nearest(&b, &a)))
}

pub fn score_match(lines: &StreamlineSet, img: &OrbitImage) -> Result<f64> {
    chamfer(&lines.points(), &img.points)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankEntry {
    pub candidate_id: usize,
    pub score: f64,
}

/// Scores every candidate's portrait against the lines; best first, ties
/// by candidate index.
pub fn fit_series(lines: &StreamlineSet, candidates: &[TruncatedSeries], cfg: &PortraitConfig) -> Result<Vec<RankEntry>> {
    if candidates.is_empty() {
        return Err(FieldError::EmptyInput);
    }
    let cloud = lines.points();
    let mut ranking: Vec<RankEntry> = candidates
        .par_iter()
        .enumerate()
        .map(|(id, s)| {
            let img = portrait(s, cfg)?;
            Ok(RankEntry {
                candidate_id: id,
                score: chamfer(&cloud, &img.points)?,
            })
        })
        .collect::<Result<_>>()?;
    ranking.sort_by(|a, b| a.score.total_cmp(&b.score).then(a.candidate_id.cmp(&b.candidate_id)));
    Ok(ranking)
}

/// Which synthetic generator to use for a portrait.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SyntheticKind {
    VortexStreet,
    Poloidal,
}

/// A field whose vortex cores sit at the points of `img`.
pub fn synthetic_field(img: &OrbitImage, kind: SyntheticKind, n: usize) -> FieldGrid {
    match kind {
        SyntheticKind::VortexStreet => vortex_street(&img.points, 0.01, n),
        SyntheticKind::Poloidal => poloidal_rings(&img.points, 0.01, n),
    }
}
