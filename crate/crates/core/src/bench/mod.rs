//! Convergence-speed experiment: shape meshes, random boundary edits, and
//! per-run iteration counts for the optimal and the linearised engines.

mod boundary;
mod shapes;

use std::io::Write;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::pbd::{relax_lin, relax_opt, Mesh, RelaxParams, RelaxTrace, DEFAULT_LIN_STIFFNESS};

pub use boundary::{
    apply_deformation, boundary_loops, extract_boundary_groups, max_extent, point_extent, sample_deformation,
    segments_intersect, BoundaryError, DeformError, Deformation, CHI2_95_2DOF, MAX_DEFORM_ATTEMPTS,
};
pub use shapes::{generate_shape_mesh, mesh_region, Contour, Region, ResolutionClass, Shape, UnknownClass, UnknownShape};

pub const DEFAULT_GROUP_COUNT: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Opt,
    Lin,
}

impl Method {
    pub const BOTH: [Method; 2] = [Method::Opt, Method::Lin];

    pub fn name(self) -> &'static str {
        match self {
            Method::Opt => "opt",
            Method::Lin => "lin",
        }
    }

    pub fn relax(self, mesh: &mut Mesh<f64>, params: &RelaxParams<f64>) -> RelaxTrace<f64> {
        match self {
            Method::Opt => relax_opt(mesh, params),
            Method::Lin => relax_lin(mesh, params),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BenchConfig {
    pub shapes: Vec<Shape>,
    pub class: ResolutionClass,
    /// Displacement magnitudes as fractions of the mesh extent.
    pub fractions: Vec<f64>,
    /// Convergence thresholds as fractions of the mesh extent.
    pub thresholds: Vec<f64>,
    pub runs: usize,
    /// Stopping time in iterations.
    pub stop: usize,
    pub seed: u64,
    pub group_count: usize,
    /// Area tolerance handed to the projectors.
    pub tolerance: f64,
    pub stiffness: f64,
    /// Record wall time; off keeps results bit-reproducible.
    pub timing: bool,
    /// Worker thread cap; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            shapes: vec![Shape::Disk, Shape::Square, Shape::L, Shape::Star],
            class: ResolutionClass::Coarse,
            fractions: vec![0.05, 0.10, 0.20],
            thresholds: vec![0.05, 0.025, 0.01],
            runs: 50,
            stop: 10_000,
            seed: 0,
            group_count: DEFAULT_GROUP_COUNT,
            tolerance: crate::trigeom::DEFAULT_TOLERANCE,
            stiffness: DEFAULT_LIN_STIFFNESS,
            timing: false,
            threads: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid benchmark configuration: {0}")]
pub struct ConfigError(pub String);

impl BenchConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: String| Err(ConfigError(m));
        if self.shapes.is_empty() {
            return bad("no shapes".into());
        }
        for (what, list) in [("fraction", &self.fractions), ("threshold", &self.thresholds)] {
            if list.is_empty() {
                return bad(format!("no {what}s"));
            }
            if let Some(v) = list.iter().find(|v| !(**v > 0.0 && **v < 1.0)) {
                return bad(format!("{what} {v} outside (0, 1)"));
            }
        }
        if self.runs == 0 {
            return bad("runs must be at least 1".into());
        }
        if self.stop == 0 {
            return bad("stopping time must be at least 1".into());
        }
        if self.group_count == 0 {
            return bad("group count must be at least 1".into());
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return bad(format!("tolerance {} must be positive", self.tolerance));
        }
        if !(self.stiffness > 0.0 && self.stiffness <= 1.0) {
            return bad(format!("stiffness {} outside (0, 1]", self.stiffness));
        }
        if self.threads == Some(0) {
            return bad("thread cap must be at least 1".into());
        }
        Ok(())
    }

    fn params(&self, extent: f64) -> RelaxParams<f64> {
        let finest = self.thresholds.iter().copied().fold(f64::INFINITY, f64::min);
        RelaxParams::new(finest * extent, self.stop, self.tolerance).with_stiffness(self.stiffness)
    }
}

/// One (run, method, threshold) measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub shape: String,
    pub class: ResolutionClass,
    pub method: Method,
    pub seed: u64,
    pub deform_pct: f64,
    pub threshold_pct: f64,
    /// Sweeps before the displacement first fell below the threshold; the stopping time if it never did.
    pub iterations: usize,
    pub converged: bool,
    /// Mean `|area − prescribed|` when the threshold was crossed, or at the stopping time.
    pub final_area_mad: f64,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedRun {
    pub shape: String,
    pub run: usize,
    pub seed: u64,
    pub deform_pct: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BenchReport {
    pub records: Vec<RunRecord>,
    pub skipped: Vec<SkippedRun>,
}

fn pct(fraction: f64) -> f64 {
    (fraction * 100.0 * 1e9).round() / 1e9
}

/// Seed of run `run` drawn from its own stream of the master generator.
pub fn run_seed(master: u64, run: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(run);
    rng.next_u64()
}

/// Relaxes `base` with both engines and records every threshold crossing.
pub fn measure_methods(base: &Mesh<f64>, extent: f64, cfg: &BenchConfig, shape: &str, seed: u64, fraction: f64) -> Vec<RunRecord> {
    let params = cfg.params(extent);
    let mut out = Vec::with_capacity(2 * cfg.thresholds.len());
    for method in Method::BOTH {
        let mut mesh = base.clone();
        let start = Instant::now();
        let trace = method.relax(&mut mesh, &params);
        let wall_ms = if cfg.timing { start.elapsed().as_secs_f64() * 1e3 } else { 0.0 };
        for &thr in &cfg.thresholds {
            let (iterations, converged, mad) = match trace.first_below(thr * extent) {
                Some(j) => (j - 1, true, trace.area_difference[j - 1]),
                None => (cfg.stop, false, trace.area_difference.last().copied().unwrap_or(f64::NAN)),
            };
            out.push(RunRecord {
                shape: shape.to_string(),
                class: cfg.class,
                method,
                seed,
                deform_pct: pct(fraction),
                threshold_pct: pct(thr),
                iterations,
                converged,
                final_area_mad: mad,
                wall_ms,
            });
        }
    }
    out
}

struct Job {
    shape: usize,
    fraction: f64,
    run: usize,
}

/// Runs every (shape, fraction, run) job; records come back in job order regardless of scheduling.
pub fn run_benchmark(cfg: &BenchConfig) -> Result<BenchReport, ConfigError> {
    cfg.validate()?;
    let mut meshes = Vec::with_capacity(cfg.shapes.len());
    for &shape in &cfg.shapes {
        let mut mesh = generate_shape_mesh(shape, cfg.class);
        mesh.boundary_groups =
            extract_boundary_groups(&mesh, cfg.group_count).map_err(|e| ConfigError(format!("{shape}: {e}")))?;
        let extent = max_extent(&mesh);
        meshes.push((mesh, extent));
    }
    let mut jobs = Vec::new();
    for shape in 0..cfg.shapes.len() {
        for &fraction in &cfg.fractions {
            for run in 0..cfg.runs {
                jobs.push(Job { shape, fraction, run });
            }
        }
    }
    let work = || -> Vec<Result<Vec<RunRecord>, SkippedRun>> {
        jobs.par_iter()
            .enumerate()
            .map(|(id, job)| {
                let (mesh, extent) = &meshes[job.shape];
                let name = cfg.shapes[job.shape].name();
                let seed = run_seed(cfg.seed, id as u64);
                let skip = |reason: String| SkippedRun {
                    shape: name.to_string(),
                    run: job.run,
                    seed,
                    deform_pct: pct(job.fraction),
                    reason,
                };
                if !(*extent > 0.0) {
                    return Err(skip("zero mesh extent".into()));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let d = sample_deformation(mesh, job.fraction, &mut rng).map_err(|e| skip(e.to_string()))?;
                let mut base = mesh.clone();
                base.pinned.iter_mut().for_each(|p| *p = false);
                apply_deformation(&mut base, &d);
                Ok(measure_methods(&base, *extent, cfg, name, seed, job.fraction))
            })
            .collect()
    };
    let results = match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| ConfigError(e.to_string()))?
            .install(work),
        None => work(),
    };
    let mut report = BenchReport::default();
    for r in results {
        match r {
            Ok(records) => report.records.extend(records),
            Err(s) => report.skipped.push(s),
        }
    }
    Ok(report)
}

/// Quartiles by linear interpolation between order statistics.
pub fn quartiles(values: &[f64]) -> [f64; 3] {
    assert!(!values.is_empty(), "quartiles of an empty sample");
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let q = |p: f64| {
        let h = (v.len() - 1) as f64 * p;
        let lo = h.floor() as usize;
        let hi = (lo + 1).min(v.len() - 1);
        v[lo] + (h - lo as f64) * (v[hi] - v[lo])
    };
    [q(0.25), q(0.5), q(0.75)]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutlierSummary {
    pub method: Method,
    pub deform_pct: f64,
    pub threshold_pct: f64,
    pub runs: usize,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    /// Slow convergence: above `Q3 + 1.5·IQR` but converged.
    pub sc: usize,
    /// Very slow convergence: stopped without converging.
    pub vsc: usize,
}

impl OutlierSummary {
    pub fn fence(&self) -> f64 {
        self.q3 + 1.5 * (self.q3 - self.q1)
    }
}

/// Outlier counts and quartiles per (method, deformation, threshold) cell, pooled over shapes.
pub fn classify_outliers(records: &[RunRecord]) -> Vec<OutlierSummary> {
    let mut keys: Vec<(Method, f64, f64)> = Vec::new();
    for r in records {
        let k = (r.method, r.deform_pct, r.threshold_pct);
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    keys.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)).then(b.2.total_cmp(&a.2)));
    keys.into_iter()
        .map(|(method, deform_pct, threshold_pct)| {
            let cell: Vec<&RunRecord> = records
                .iter()
                .filter(|r| r.method == method && r.deform_pct == deform_pct && r.threshold_pct == threshold_pct)
                .collect();
            let iters: Vec<f64> = cell.iter().map(|r| r.iterations as f64).collect();
            let [q1, median, q3] = quartiles(&iters);
            let fence = q3 + 1.5 * (q3 - q1);
            let vsc = cell.iter().filter(|r| !r.converged).count();
            let sc = cell.iter().filter(|r| r.converged && r.iterations as f64 > fence).count();
            OutlierSummary { method, deform_pct, threshold_pct, runs: cell.len(), q1, median, q3, sc, vsc }
        })
        .collect()
}

pub fn write_csv<W: Write>(records: &[RunRecord], out: W) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    if records.is_empty() {
        w.write_record([
            "shape",
            "class",
            "method",
            "seed",
            "deform_pct",
            "threshold_pct",
            "iterations",
            "converged",
            "final_area_mad",
            "wall_ms",
        ])?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: std::io::Read>(input: R) -> csv::Result<Vec<RunRecord>> {
    csv::Reader::from_reader(input).deserialize().collect()
}

/// Single triangle `(0,0), (1,0), (0.3,0.9)` asked to shrink to half its area.
pub fn toy_mesh() -> Mesh<f64> {
    let mut m = Mesh::from_geometry(vec![[0.0, 0.0], [1.0, 0.0], [0.3, 0.9]], vec![[0, 1, 2]])
        .expect("toy triangle is non-degenerate");
    m.prescribed_areas[0] *= 0.5;
    m
}

/// Full `iters`-sweep trace of `method` on the toy triangle.
pub fn toy_trace(method: Method, iters: usize) -> RelaxTrace<f64> {
    let mut m = toy_mesh();
    method.relax(&mut m, &RelaxParams::new(0.0, iters, crate::trigeom::DEFAULT_TOLERANCE))
}

/// The toy triangle measured like a benchmark run.
pub fn run_toy(cfg: &BenchConfig) -> Vec<RunRecord> {
    let m = toy_mesh();
    measure_methods(&m, max_extent(&m), cfg, "toy", cfg.seed, 0.5)
}
