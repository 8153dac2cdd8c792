//! Command-line front end: single-triangle projection, the shrinking-triangle
//! toy, shape meshes, relaxation of mesh files and the convergence benchmark.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use triproject::bench::{
    classify_outliers, generate_shape_mesh, run_benchmark, run_toy, toy_trace, write_csv, BenchConfig, Method,
    ResolutionClass, RunRecord, Shape,
};
use triproject::pbd::{Mesh, MeshError, RelaxParams};
use triproject::project_fixed::{project_with_fixed, FixedPattern};
use triproject::project_free::{CaseISolutionSet, CaseIISolution, ChosenCase, ProjectionOutcome};
use triproject::trigeom::{signed_area, Orientation, ProjectionSpec, TriangleCoords, DEFAULT_TOLERANCE};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
        }
    }

    fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

/// Mesh on disk. Missing areas and orientations come from the geometry; missing pins are all false.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshFile {
    pub vertices: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prescribed_areas: Option<Vec<f64>>,
    /// `+1` counter-clockwise, `-1` clockwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientations: Option<Vec<i32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pinned: Option<Vec<bool>>,
    #[serde(default)]
    pub boundary_groups: Vec<Vec<usize>>,
}

#[derive(Debug, thiserror::Error)]
pub enum MeshFileError {
    #[error("orientation {value} of triangle {triangle} is not +1 or -1")]
    Orientation { triangle: usize, value: i32 },
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

impl MeshFile {
    pub fn from_mesh(mesh: &Mesh<f64>) -> Self {
        Self {
            vertices: mesh.vertices.clone(),
            triangles: mesh.triangles.clone(),
            prescribed_areas: Some(mesh.prescribed_areas.clone()),
            orientations: Some(mesh.orientations.iter().map(|o| o.as_i32()).collect()),
            pinned: Some(mesh.pinned.clone()),
            boundary_groups: mesh.boundary_groups.clone(),
        }
    }

    pub fn into_mesh(self) -> Result<Mesh<f64>, MeshFileError> {
        let orientations = match self.orientations {
            Some(v) => Some(
                v.into_iter()
                    .enumerate()
                    .map(|(triangle, value)| {
                        Orientation::from_sign(value).ok_or(MeshFileError::Orientation { triangle, value })
                    })
                    .collect::<Result<Vec<_>, _>>()?,
            ),
            None => None,
        };
        let nv = self.vertices.len();
        let mut mesh = match (self.prescribed_areas, orientations) {
            (Some(prescribed_areas), Some(orientations)) => Mesh {
                vertices: self.vertices,
                triangles: self.triangles,
                prescribed_areas,
                orientations,
                pinned: Vec::new(),
                boundary_groups: Vec::new(),
            },
            (areas, orientations) => {
                let mut m = Mesh::from_geometry(self.vertices, self.triangles)?;
                if let Some(a) = areas {
                    m.prescribed_areas = a;
                }
                if let Some(o) = orientations {
                    m.orientations = o;
                }
                m
            }
        };
        mesh.pinned = self.pinned.unwrap_or_else(|| vec![false; nv]);
        mesh.boundary_groups = self.boundary_groups;
        mesh.validate()?;
        Ok(mesh)
    }
}

pub fn read_mesh_file(path: &Path) -> Result<Mesh<f64>, CliError> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let parsed: MeshFile = serde_json::from_reader(io::BufReader::new(file))
        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    parsed.into_mesh().map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn create(path: &Path) -> Result<Box<dyn Write>, CliError> {
    if path == Path::new("-") {
        return Ok(Box::new(io::stdout().lock()));
    }
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    Ok(Box::new(BufWriter::new(file)))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| CliError::io(path, e.into()))?;
    writeln!(out).and_then(|_| out.flush()).map_err(|e| CliError::io(path, e))
}

#[derive(Debug, Parser)]
#[command(name = "triproject", version, about = "Nearest triangles with prescribed area, and area-preserving mesh relaxation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Project one triangle onto a prescribed (signed) area
    Project(ProjectArgs),
    /// Shrink a single triangle to half its area with both engines
    Toy(ToyArgs),
    /// Write a shape mesh as JSON
    MeshGen(MeshGenArgs),
    /// Relax a mesh file towards its prescribed areas
    Relax(RelaxArgs),
    /// Convergence benchmark over shapes and deformations
    Bench(BenchArgs),
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Project(a) => cmd_project(&a),
        Command::Toy(a) => cmd_toy(&a),
        Command::MeshGen(a) => cmd_mesh_gen(&a),
        Command::Relax(a) => cmd_relax(&a),
        Command::Bench(a) => cmd_bench(a),
    }
}

fn parse_tri(s: &str) -> Result<[f64; 6], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    let arr: [f64; 6] = v.try_into().map_err(|v: Vec<f64>| format!("expected 6 coordinates, got {}", v.len()))?;
    if arr.iter().any(|x| !x.is_finite()) {
        return Err("coordinates must be finite".into());
    }
    Ok(arr)
}

fn parse_orientation(s: &str) -> Result<Orientation, String> {
    match s.trim() {
        "1" | "+1" => Ok(Orientation::Positive),
        "-1" => Ok(Orientation::Negative),
        other => Err(format!("expected 1 or -1, got {other:?}")),
    }
}

fn parse_fixed(s: &str) -> Result<[bool; 3], String> {
    let mut flags = [false; 3];
    for ch in s.chars() {
        let i = match ch {
            'a' => 0,
            'b' => 1,
            'c' => 2,
            _ => return Err(format!("unknown vertex {ch:?}, expected a, b or c")),
        };
        if flags[i] {
            return Err(format!("vertex {ch} listed twice"));
        }
        flags[i] = true;
    }
    if flags == [true; 3] {
        return Err("at most two vertices can be fixed".into());
    }
    Ok(flags)
}

#[derive(Debug, Args)]
pub struct ProjectArgs {
    /// Vertices as x_a,y_a,x_b,y_b,x_c,y_c
    #[arg(long, value_parser = parse_tri, allow_hyphen_values = true)]
    pub tri: [f64; 6],
    /// Prescribed area A_o
    #[arg(long, allow_hyphen_values = true)]
    pub area: f64,
    /// Target orientation, 1 or -1; defaults to the input's own
    #[arg(long, value_parser = parse_orientation, allow_hyphen_values = true, conflicts_with = "unsigned")]
    pub orientation: Option<Orientation>,
    /// Try both orientations and keep the cheaper
    #[arg(long)]
    pub unsigned: bool,
    /// Vertices to hold in place: a, b, c or two of them (e.g. bc)
    #[arg(long, value_parser = parse_fixed)]
    pub fixed: Option<[bool; 3]>,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tolerance: f64,
    /// Print a JSON object instead of the text report
    #[arg(long)]
    pub json: bool,
}

/// Projection result in the caller's vertex order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectReport {
    pub input: TriangleCoords<f64>,
    pub prescribed_area: f64,
    pub fixed: [bool; 3],
    pub optimal: TriangleCoords<f64>,
    pub cost: f64,
    pub sqrt_cost: f64,
    pub area: f64,
    pub orientation: i32,
    /// `"I"`, `"II"`, or `"two-fixed"` for the direct two-fixed projection.
    pub chosen: String,
    pub chosen_index: Option<usize>,
    pub case1: Option<CaseISolutionSet<f64>>,
    pub case2: Option<CaseIISolution<f64>>,
}

fn outcome_in_caller_order(o: &ProjectionOutcome<f64>, pattern: &FixedPattern) -> ProjectionOutcome<f64> {
    let mut out = o.clone();
    for c in out.case1.candidates.iter_mut().chain(out.case1.rejected.iter_mut()) {
        c.triangle = pattern.unapply(&c.triangle);
    }
    out.case2.optimal = pattern.unapply(&out.case2.optimal);
    out.case2.basis = pattern.unapply(&out.case2.basis);
    out.case2.translation = pattern.unapply(&out.case2.translation);
    out
}

pub fn project(
    input: &TriangleCoords<f64>,
    fixed: [bool; 3],
    spec: &ProjectionSpec<f64>,
) -> Result<ProjectReport, CliError> {
    let p = project_with_fixed(input, fixed, spec).map_err(usage)?;
    let outcome = p.outcome.as_ref().map(|o| outcome_in_caller_order(o, &p.pattern));
    Ok(ProjectReport {
        input: *input,
        prescribed_area: spec.area,
        fixed,
        optimal: p.optimal,
        cost: p.cost,
        sqrt_cost: p.cost.sqrt(),
        area: p.area,
        orientation: spec.orientation.as_i32(),
        chosen: match outcome.as_ref().map(|o| o.chosen) {
            Some(ChosenCase::I) => "I".into(),
            Some(ChosenCase::II) => "II".into(),
            None => "two-fixed".into(),
        },
        chosen_index: outcome.as_ref().and_then(|o| o.chosen_index),
        case1: outcome.as_ref().map(|o| o.case1.clone()),
        case2: outcome.map(|o| o.case2),
    })
}

fn fmt_tri(t: &TriangleCoords<f64>) -> String {
    let v = t.vertices().map(|[x, y]| format!("({x:.6}, {y:.6})"));
    v.join(" ")
}

fn print_report(r: &ProjectReport, out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "optimal      {}", fmt_tri(&r.optimal))?;
    writeln!(out, "cost         {:.6}", r.cost)?;
    writeln!(out, "sqrt(cost)   {:.6}", r.sqrt_cost)?;
    writeln!(out, "signed area  {:+.6}", r.area)?;
    writeln!(out, "orientation  {:+}", r.orientation)?;
    writeln!(out, "case         {}", r.chosen)?;
    if let Some(c1) = &r.case1 {
        for (label, set) in [("feasible", &c1.candidates), ("rejected", &c1.rejected)] {
            for c in set {
                writeln!(
                    out,
                    "case I {label} lambda {:+.6} sqrt(cost) {:.6} area {:+.6} {}",
                    c.multiplier,
                    c.cost.sqrt(),
                    c.area,
                    fmt_tri(&c.triangle)
                )?;
            }
        }
    }
    if let Some(c2) = &r.case2 {
        let status = if c2.feasible { "feasible" } else { "infeasible" };
        writeln!(out, "case II {status} sqrt(cost) {:.6} area {:+.6} {}", c2.cost.sqrt(), c2.area, fmt_tri(&c2.optimal))?;
    }
    Ok(())
}

pub fn cmd_project(a: &ProjectArgs) -> Result<(), CliError> {
    let input = TriangleCoords(a.tri);
    let fixed = a.fixed.unwrap_or([false; 3]);
    let orientations = if a.unsigned {
        vec![Orientation::Positive, Orientation::Negative]
    } else {
        vec![a.orientation.unwrap_or_else(|| Orientation::of(&input))]
    };
    let mut best: Option<ProjectReport> = None;
    for o in orientations {
        let spec = ProjectionSpec::new(a.area, o, a.tolerance).map_err(usage)?;
        let r = project(&input, fixed, &spec)?;
        if best.as_ref().is_none_or(|b| r.cost < b.cost) {
            best = Some(r);
        }
    }
    let report = best.expect("at least one orientation");
    let path = Path::new("-");
    let mut out = io::stdout().lock();
    if a.json {
        serde_json::to_writer_pretty(&mut out, &report).map_err(|e| CliError::io(path, e.into()))?;
        writeln!(out).map_err(|e| CliError::io(path, e))
    } else {
        print_report(&report, &mut out).map_err(|e| CliError::io(path, e))
    }
}

#[derive(Debug, Args)]
pub struct ToyArgs {
    #[arg(long, default_value_t = 20)]
    pub iters: usize,
}

#[derive(Debug, Serialize)]
struct ToyRow {
    iter: usize,
    cost: f64,
    area_residual: f64,
}

/// Both engines' traces as two CSV blocks, each preceded by `# <method>`.
pub fn write_toy(iters: usize, out: &mut impl Write) -> io::Result<()> {
    for (k, method) in Method::BOTH.into_iter().enumerate() {
        if k > 0 {
            writeln!(out)?;
        }
        writeln!(out, "# {}", method.name())?;
        let trace = toy_trace(method, iters);
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut *out);
        for (i, (cost, res)) in trace.cost.iter().zip(&trace.area_difference).enumerate() {
            w.serialize(ToyRow { iter: i + 1, cost: *cost, area_residual: *res })?;
        }
        w.flush()?;
    }
    Ok(())
}

pub fn cmd_toy(a: &ToyArgs) -> Result<(), CliError> {
    write_toy(a.iters, &mut io::stdout().lock()).map_err(|e| CliError::io(Path::new("-"), e))
}

#[derive(Debug, Args)]
pub struct MeshGenArgs {
    #[arg(long)]
    pub shape: Shape,
    #[arg(long, default_value = "coarse")]
    pub class: ResolutionClass,
    /// Output path, `-` for stdout
    #[arg(long)]
    pub out: PathBuf,
}

pub fn cmd_mesh_gen(a: &MeshGenArgs) -> Result<(), CliError> {
    let mesh = generate_shape_mesh(a.shape, a.class);
    write_json(&a.out, &MeshFile::from_mesh(&mesh))
}

#[derive(Debug, Args)]
pub struct RelaxArgs {
    #[arg(long)]
    pub mesh: PathBuf,
    #[arg(long, default_value = "opt", value_parser = ["opt", "lin"])]
    pub method: String,
    #[arg(long, default_value_t = 100)]
    pub iters: usize,
    /// Stop once a sweep's mean vertex displacement falls below this
    #[arg(long, default_value_t = 0.0)]
    pub threshold: f64,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tolerance: f64,
    #[arg(long, default_value_t = triproject::pbd::DEFAULT_LIN_STIFFNESS)]
    pub stiffness: f64,
    /// Where to write the relaxed mesh, `-` for stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn cmd_relax(a: &RelaxArgs) -> Result<(), CliError> {
    if !(a.tolerance > 0.0) || !(a.threshold >= 0.0) || !(a.stiffness > 0.0 && a.stiffness <= 1.0) {
        return Err(usage("tolerance must be positive, threshold non-negative, stiffness in (0, 1]"));
    }
    let mut mesh = read_mesh_file(&a.mesh)?;
    let method = if a.method == "lin" { Method::Lin } else { Method::Opt };
    let params = RelaxParams::new(a.threshold, a.iters, a.tolerance).with_stiffness(a.stiffness);
    let trace = method.relax(&mut mesh, &params);
    let flipped = (0..mesh.triangles.len())
        .filter(|&t| mesh.orientations[t].sign::<f64>() * signed_area(&mesh.triangle(t)) <= 0.0)
        .count();
    eprintln!(
        "{}: {} sweeps, converged {}, mean area deviation {:.3e}, max {:.3e}, flipped {flipped}",
        method.name(),
        trace.iterations,
        trace.converged,
        mesh.mean_area_deviation(),
        mesh.max_area_deviation()
    );
    match &a.out {
        Some(path) => write_json(path, &MeshFile::from_mesh(&mesh)),
        None => Ok(()),
    }
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// JSON benchmark configuration; flags below override its fields
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    pub shapes: Option<Vec<Shape>>,
    #[arg(long)]
    pub class: Option<ResolutionClass>,
    /// Deformation magnitudes as fractions of the mesh extent
    #[arg(long, value_delimiter = ',')]
    pub fractions: Option<Vec<f64>>,
    /// Convergence thresholds as fractions of the mesh extent
    #[arg(long, value_delimiter = ',')]
    pub thresholds: Option<Vec<f64>>,
    #[arg(long)]
    pub runs: Option<usize>,
    /// Stopping time in sweeps
    #[arg(long)]
    pub stop: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub groups: Option<usize>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long)]
    pub stiffness: Option<f64>,
    /// Record wall time per run (results are then no longer byte-reproducible)
    #[arg(long)]
    pub timing: bool,
    /// Measure only the single shrinking triangle
    #[arg(long)]
    pub toy: bool,
    /// Worker thread cap
    #[arg(long, env = "TRIPROJECT_THREADS")]
    pub threads: Option<usize>,
    /// Results CSV, `-` for stdout
    #[arg(long, default_value = "-")]
    pub out: PathBuf,
}

pub fn bench_config(a: &BenchArgs) -> Result<BenchConfig, CliError> {
    let mut cfg = match &a.config {
        Some(path) => {
            let file = File::open(path).map_err(|e| CliError::io(path, e))?;
            serde_json::from_reader(io::BufReader::new(file)).map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
        None => BenchConfig::default(),
    };
    if let Some(v) = &a.shapes {
        cfg.shapes = v.clone();
    }
    if let Some(v) = a.class {
        cfg.class = v;
    }
    if let Some(v) = &a.fractions {
        cfg.fractions = v.clone();
    }
    if let Some(v) = &a.thresholds {
        cfg.thresholds = v.clone();
    }
    cfg.runs = a.runs.unwrap_or(cfg.runs);
    cfg.stop = a.stop.unwrap_or(cfg.stop);
    cfg.seed = a.seed.unwrap_or(cfg.seed);
    cfg.group_count = a.groups.unwrap_or(cfg.group_count);
    cfg.tolerance = a.tolerance.unwrap_or(cfg.tolerance);
    cfg.stiffness = a.stiffness.unwrap_or(cfg.stiffness);
    cfg.timing |= a.timing;
    if a.threads.is_some() {
        cfg.threads = a.threads;
    }
    cfg.validate().map_err(usage)?;
    Ok(cfg)
}

pub fn cmd_bench(a: BenchArgs) -> Result<(), CliError> {
    let cfg = bench_config(&a)?;
    let records: Vec<RunRecord> = if a.toy {
        run_toy(&cfg)
    } else {
        let report = run_benchmark(&cfg).map_err(usage)?;
        for s in &report.skipped {
            eprintln!("skipped {} run {} ({}% deformation): {}", s.shape, s.run, s.deform_pct, s.reason);
        }
        report.records
    };
    let mut out = create(&a.out)?;
    write_csv(&records, &mut out).map_err(|e| CliError::io(&a.out, e.into()))?;
    out.flush().map_err(|e| CliError::io(&a.out, e))?;
    for c in classify_outliers(&records) {
        eprintln!(
            "{} d={}% t={}%: median {} IQR [{}, {}] SC {} VSC {} of {}",
            c.method.name(),
            c.deform_pct,
            c.threshold_pct,
            c.median,
            c.q1,
            c.q3,
            c.sc,
            c.vsc,
            c.runs
        );
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mesh_file_defaults_come_from_geometry() {
        let json = r#"{"vertices":[[0,0],[1,0],[0,1],[1,1]],"triangles":[[0,1,2],[1,2,3]]}"#;
        let mesh = serde_json::from_str::<MeshFile>(json).unwrap().into_mesh().unwrap();
        assert_eq!(mesh.prescribed_areas, vec![0.5, 0.5]);
        assert_eq!(mesh.orientations, vec![Orientation::Positive, Orientation::Negative]);
        assert_eq!(mesh.pinned, vec![false; 4]);
        assert!(mesh.boundary_groups.is_empty());
    }

    #[test]
    fn mesh_file_keeps_given_fields() {
        let json = r#"{"vertices":[[0,0],[1,0],[0,1]],"triangles":[[0,1,2]],
            "prescribed_areas":[0.25],"orientations":[-1],"pinned":[true,false,false],"boundary_groups":[[0]]}"#;
        let mesh = serde_json::from_str::<MeshFile>(json).unwrap().into_mesh().unwrap();
        assert_eq!(mesh.prescribed_areas, vec![0.25]);
        assert_eq!(mesh.orientations, vec![Orientation::Negative]);
        assert_eq!(mesh.pinned, vec![true, false, false]);
        assert_eq!(mesh.boundary_groups, vec![vec![0]]);
        let back = serde_json::to_value(MeshFile::from_mesh(&mesh)).unwrap();
        assert_eq!(back["orientations"], serde_json::json!([-1]));
    }

    #[test]
    fn mesh_file_rejects_bad_input() {
        let bad = [
            r#"{"vertices":[[0,0],[1,0],[0,1]],"triangles":[[0,1,3]]}"#,
            r#"{"vertices":[[0,0],[1,0],[0,1]],"triangles":[[0,1,2]],"orientations":[2]}"#,
            r#"{"vertices":[[0,0],[1,0],[0,1]],"triangles":[[0,1,2]],"pinned":[true]}"#,
            r#"{"vertices":[[0,0],[1,0],[0,1]],"triangles":[[0,1,2]],"prescribed_areas":[0.0]}"#,
            r#"{"vertices":[[0,0],[1,0],[2,0]],"triangles":[[0,1,2]]}"#,
        ];
        for json in bad {
            assert!(serde_json::from_str::<MeshFile>(json).unwrap().into_mesh().is_err(), "{json}");
        }
    }

    #[test]
    fn flag_parsers() {
        assert_eq!(parse_tri("0,0,1,0,0,1").unwrap(), [0.0, 0.0, 1.0, 0.0, 0.0, 1.0]);
        assert!(parse_tri("0,0,1,0,0").is_err());
        assert!(parse_tri("0,0,1,0,0,x").is_err());
        assert_eq!(parse_orientation("-1").unwrap(), Orientation::Negative);
        assert!(parse_orientation("0").is_err());
        assert_eq!(parse_fixed("bc").unwrap(), [false, true, true]);
        assert_eq!(parse_fixed("a").unwrap(), [true, false, false]);
        assert!(parse_fixed("abc").is_err());
        assert!(parse_fixed("bb").is_err());
        assert!(parse_fixed("d").is_err());
    }

    #[test]
    fn fixed_report_is_in_caller_order() {
        let input = TriangleCoords([0.3, 0.2, 1.1, -0.1, 0.4, 0.9]);
        let spec = ProjectionSpec::with_area(1.0, Orientation::Positive).unwrap();
        let r = project(&input, [true, false, false], &spec).unwrap();
        assert_eq!(r.optimal.vertex(0), input.vertex(0));
        for c in &r.case1.as_ref().unwrap().candidates {
            assert_eq!(c.triangle.vertex(0), input.vertex(0));
            assert!((signed_area(&c.triangle) - c.area).abs() < 1e-12);
        }
        let two = project(&input, [true, true, false], &spec).unwrap();
        assert_eq!(two.chosen, "two-fixed");
        assert!(two.case1.is_none());
        assert!((two.area - 1.0).abs() < 1e-9);
    }

    #[test]
    fn toy_blocks() {
        let mut buf = Vec::new();
        write_toy(3, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let blocks: Vec<&str> = text.split("\n\n").collect();
        assert_eq!(blocks.len(), 2);
        assert!(blocks[0].starts_with("# opt\niter,cost,area_residual\n1,"));
        assert!(blocks[1].starts_with("# lin\niter,cost,area_residual\n1,"));
        assert_eq!(text.lines().count(), 2 * (2 + 3) + 1);
    }
}
