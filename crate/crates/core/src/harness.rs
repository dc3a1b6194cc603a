//! Driver behind the command-line tool: point sources, verified runs,
//! statistics output and the scaling benchmark.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::engine::{InsertionStats, Voronoi};
use crate::error::Error;
use crate::export;
use crate::geometry::COORD_BOUND;
use crate::oracle::{graph_diff, Triangulation};

/// Largest site count at which `--check-invariants` also runs the
/// brute-force empty-circle test.
pub const EMPTY_CIRCLE_LIMIT: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Distribution {
    UniformDisc,
    UniformSquare,
    Clustered,
}

impl FromStr for Distribution {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "uniform-disc" => Ok(Self::UniformDisc),
            "uniform-square" => Ok(Self::UniformSquare),
            "clustered" => Ok(Self::Clustered),
            _ => Err(format!("unknown distribution `{s}` (uniform-disc, uniform-square, clustered)")),
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::UniformDisc => "uniform-disc",
            Self::UniformSquare => "uniform-square",
            Self::Clustered => "clustered",
        })
    }
}

/// `dist:count:seed`
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenSpec {
    pub dist: Distribution,
    pub count: usize,
    pub seed: u64,
}

impl FromStr for GenSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [dist, count, seed] = parts[..] else {
            return Err(format!("generator spec `{s}` is not dist:count:seed"));
        };
        Ok(GenSpec {
            dist: dist.parse()?,
            count: count.parse().map_err(|_| format!("bad count `{count}`"))?,
            seed: seed.parse().map_err(|_| format!("bad seed `{seed}`"))?,
        })
    }
}

/// Distinct integer points drawn from the distribution; fully determined
/// by the spec and the bound.
pub fn generate(spec: GenSpec, bound: i64) -> Vec<(i64, i64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::with_capacity(spec.count);
    let clusters: Vec<(i64, i64)> = (0..8).map(|_| (rng.random_range(-bound / 2..=bound / 2), rng.random_range(-bound / 2..=bound / 2))).collect();
    let spread = (bound / 32).max(1);
    while out.len() < spec.count {
        let p = match spec.dist {
            Distribution::UniformSquare => (rng.random_range(-bound..=bound), rng.random_range(-bound..=bound)),
            Distribution::UniformDisc => {
                let (x, y) = (rng.random_range(-bound..=bound), rng.random_range(-bound..=bound));
                if (x as i128).pow(2) + (y as i128).pow(2) > (bound as i128).pow(2) {
                    continue;
                }
                (x, y)
            }
            Distribution::Clustered => {
                let (cx, cy) = clusters[rng.random_range(0..clusters.len())];
                // Sum of two uniforms: a cheap peaked distribution.
                let dx = rng.random_range(-spread..=spread) + rng.random_range(-spread..=spread);
                let dy = rng.random_range(-spread..=spread) + rng.random_range(-spread..=spread);
                ((cx + dx).clamp(-bound, bound), (cy + dy).clamp(-bound, bound))
            }
        };
        if seen.insert(p) {
            out.push(p);
        }
    }
    out
}

/// A point together with the input line it came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InputPoint {
    pub line: usize,
    pub x: i64,
    pub y: i64,
}

#[derive(Debug)]
pub enum HarnessError {
    Parse { line: usize, msg: String },
    EmptyInput,
    Rejected { index: usize, line: usize, source: Error },
    Verification { index: usize, msg: String },
    Output { path: PathBuf, msg: String },
    Usage(String),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Parse { .. } | Self::EmptyInput | Self::Usage(_) => 2,
            Self::Rejected { source: Error::OutOfBounds { .. }, .. } => 2,
            Self::Rejected { source: Error::Structure(_), .. } => 4,
            Self::Rejected { .. } => 3,
            Self::Verification { .. } => 4,
            Self::Output { .. } => 5,
        }
    }
}

impl fmt::Display for HarnessError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Parse { line, msg } => write!(f, "parse error at line {line}: {msg}"),
            Self::EmptyInput => write!(f, "input contains no points"),
            Self::Rejected { index, line, source } => write!(f, "insertion {index} (line {line}) rejected: {source}"),
            Self::Verification { index, msg } => write!(f, "verification failed at insertion {index}: {msg}"),
            Self::Output { path, msg } => write!(f, "cannot write {}: {msg}", path.display()),
            Self::Usage(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for HarnessError {}

/// Parses one point per line: two signed integers, `#` starts a comment.
pub fn parse_points(text: &str) -> Result<Vec<InputPoint>, HarnessError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap().trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        let [xs, ys] = fields[..] else {
            return Err(HarnessError::Parse { line, msg: format!("expected two integers, got `{body}`") });
        };
        let num = |s: &str| s.parse::<i64>().map_err(|_| HarnessError::Parse { line, msg: format!("`{s}` is not an integer") });
        out.push(InputPoint { line, x: num(xs)?, y: num(ys)? });
    }
    if out.is_empty() {
        return Err(HarnessError::EmptyInput);
    }
    Ok(out)
}

pub fn read_points(path: &Path) -> Result<Vec<InputPoint>, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Parse { line: 0, msg: format!("{}: {e}", path.display()) })?;
    parse_points(&text)
}

pub fn from_generated(pts: &[(i64, i64)]) -> Vec<InputPoint> {
    pts.iter().enumerate().map(|(i, &(x, y))| InputPoint { line: i + 1, x, y }).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Text,
    Svg,
}

impl FromStr for ExportFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Self::Text),
            "svg" => Ok(Self::Svg),
            _ => Err(format!("unknown format `{s}` (text, svg)")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub coord_bound: i64,
    pub check_oracle: bool,
    pub check_invariants: bool,
    pub stats: Option<PathBuf>,
    pub export: Option<PathBuf>,
    pub format: ExportFormat,
    pub include_sentinels: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            coord_bound: COORD_BOUND,
            check_oracle: false,
            check_invariants: false,
            stats: None,
            export: None,
            format: ExportFormat::Text,
            include_sentinels: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StatsRow {
    pub n: usize,
    pub links: u64,
    pub cuts: u64,
    pub cells_changed: usize,
    pub dcr_rebuilds: u64,
    pub time_ns: u128,
}

impl StatsRow {
    fn new(n: usize, s: &InsertionStats) -> Self {
        StatsRow {
            n,
            links: s.links,
            cuts: s.cuts,
            cells_changed: s.cells_changed,
            dcr_rebuilds: s.dcr_rebuilds,
            time_ns: s.wall_time.as_nanos(),
        }
    }
}

#[derive(Debug)]
pub struct RunOutcome {
    pub voronoi: Voronoi,
    pub rows: Vec<StatsRow>,
}

fn create(path: &Path) -> Result<BufWriter<File>, HarnessError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| HarnessError::Output { path: path.to_path_buf(), msg: e.to_string() })
}

pub fn write_stats(path: &Path, rows: &[StatsRow]) -> Result<(), HarnessError> {
    let out_err = |e: &dyn fmt::Display| HarnessError::Output { path: path.to_path_buf(), msg: e.to_string() };
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(create(path)?);
    for r in rows {
        w.serialize(r).map_err(|e| out_err(&e))?;
    }
    w.flush().map_err(|e| out_err(&e))
}

pub fn write_export(path: &Path, v: &Voronoi, format: ExportFormat, include_sentinels: bool) -> Result<(), HarnessError> {
    let body = match format {
        ExportFormat::Text => export::to_text(v.diagram(), include_sentinels),
        ExportFormat::Svg => export::to_svg(v.diagram()),
    }
    .map_err(|e| HarnessError::Verification { index: v.diagram().num_user_sites(), msg: e.to_string() })?;
    let mut w = create(path)?;
    w.write_all(body.as_bytes())
        .and_then(|_| w.flush())
        .map_err(|e| HarnessError::Output { path: path.to_path_buf(), msg: e.to_string() })
}

/// Inserts the points in order, verifying as configured. Insertion indices
/// in messages are 1-based.
pub fn run(points: &[InputPoint], cfg: &RunConfig) -> Result<RunOutcome, HarnessError> {
    if points.is_empty() {
        return Err(HarnessError::EmptyInput);
    }
    let mut v = Voronoi::new(cfg.coord_bound).map_err(|e| HarnessError::Usage(e.to_string()))?;
    let mut oracle = cfg.check_oracle.then(|| Triangulation::new(cfg.coord_bound));
    let mut prev = oracle.as_ref().map(|o| o.dual_canonical());
    let mut rows = Vec::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        let index = i + 1;
        let stats = v.insert(p.x, p.y).map_err(|source| HarnessError::Rejected { index, line: p.line, source })?;
        rows.push(StatsRow::new(index, &stats));
        if let Some(o) = oracle.as_mut() {
            let verr = |msg: String| HarnessError::Verification { index, msg };
            o.insert(p.x, p.y).map_err(|e| verr(format!("oracle rejected the site: {e}")))?;
            let want = o.dual_canonical();
            let got = v.canonical().map_err(|e| verr(e.to_string()))?;
            if got != want {
                let d = graph_diff(&want, &got);
                return Err(verr(format!(
                    "graph differs from the oracle ({} extra and {} missing vertices)",
                    d.added_vertices.len(),
                    d.removed_vertices.len()
                )));
            }
            let changes = graph_diff(prev.as_ref().unwrap(), &want).pair_changes() as u64;
            if stats.links + stats.cuts < changes {
                return Err(verr(format!("{} links and cuts for {changes} changed adjacencies", stats.links + stats.cuts)));
            }
            prev = Some(want);
        }
        if cfg.check_invariants {
            let verr = |e: Error| HarnessError::Verification { index, msg: e.to_string() };
            v.check_invariants().map_err(verr)?;
            if v.diagram().num_user_sites() <= EMPTY_CIRCLE_LIMIT {
                v.check_empty_circles().map_err(verr)?;
            }
        }
    }
    if let Some(path) = &cfg.stats {
        write_stats(path, &rows)?;
    }
    if let Some(path) = &cfg.export {
        write_export(path, &v, cfg.format, cfg.include_sentinels)?;
    }
    Ok(RunOutcome { voronoi: v, rows })
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchPoint {
    pub n: usize,
    pub dist: String,
    pub seed: u64,
    pub total_ns: u128,
    pub ns_per_insertion: f64,
    pub changes_per_insertion: f64,
    pub cells_changed_per_insertion: f64,
    /// Ratio of `ns_per_insertion` to the previous rung.
    pub time_ratio: Option<f64>,
    pub big_cells: usize,
}

/// Runs a fresh diagram for every rung of the ladder.
pub fn bench(dist: Distribution, seed: u64, ladder: &[usize], bound: i64) -> Result<Vec<BenchPoint>, HarnessError> {
    let mut out: Vec<BenchPoint> = Vec::new();
    for &n in ladder {
        let pts = generate(GenSpec { dist, count: n, seed }, bound);
        let mut v = Voronoi::new(bound).map_err(|e| HarnessError::Usage(e.to_string()))?;
        let (mut changes, mut cells) = (0u64, 0usize);
        let t0 = Instant::now();
        for (i, &(x, y)) in pts.iter().enumerate() {
            let s = v.insert(x, y).map_err(|source| HarnessError::Rejected { index: i + 1, line: i + 1, source })?;
            changes += s.links + s.cuts;
            cells += s.cells_changed;
        }
        let total = t0.elapsed().as_nanos();
        let per = total as f64 / n as f64;
        let time_ratio = out.last().map(|p| per / p.ns_per_insertion);
        out.push(BenchPoint {
            n,
            dist: dist.to_string(),
            seed,
            total_ns: total,
            ns_per_insertion: per,
            changes_per_insertion: changes as f64 / n as f64,
            cells_changed_per_insertion: cells as f64 / n as f64,
            time_ratio,
            big_cells: v.index().gamma.vertex_count(),
        });
    }
    Ok(out)
}

pub fn write_bench_csv(path: &Path, rows: &[BenchPoint]) -> Result<(), HarnessError> {
    let out_err = |e: &dyn fmt::Display| HarnessError::Output { path: path.to_path_buf(), msg: e.to_string() };
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(create(path)?);
    for r in rows {
        w.serialize(r).map_err(|e| out_err(&e))?;
    }
    w.flush().map_err(|e| out_err(&e))
}

/// Built-in smoke check: a short oracle- and invariant-checked run per
/// distribution.
pub fn selftest(count: usize, seed: u64) -> Result<(), HarnessError> {
    let cfg = RunConfig { check_oracle: true, check_invariants: true, ..RunConfig::default() };
    for dist in [Distribution::UniformDisc, Distribution::UniformSquare, Distribution::Clustered] {
        let pts = from_generated(&generate(GenSpec { dist, count, seed }, COORD_BOUND));
        run(&pts, &cfg)?;
    }
    Ok(())
}

/// Checks a text export on its own.
pub fn check_export_file(path: &Path) -> Result<usize, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Parse { line: 0, msg: format!("{}: {e}", path.display()) })?;
    let ex = export::parse_text(&text).map_err(|e| HarnessError::Parse { line: 0, msg: e.to_string() })?;
    ex.check().map_err(|e| HarnessError::Verification { index: ex.num_sites.saturating_sub(3), msg: e.to_string() })?;
    Ok(ex.num_sites)
}
