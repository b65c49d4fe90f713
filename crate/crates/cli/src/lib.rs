//! The `decimate` command line: simplify, metrics, ablation bench, profile.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use decimate::metrics::{geometric_distances, sample_surface, texture_chamfer, PointCloudSample};
use decimate::simplify::PhaseTimings;
use decimate::transfer::{transfer_appearance, BakeMode, DEFAULT_SAMPLES_PER_TEXEL};
use decimate::{fixtures, io, simplify, Mesh, Simplified, SimplifyConfig, Target, WeightSet};
use log::{info, warn};
use rayon::prelude::*;
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SOFT_FAILURE: i32 = 3;

pub const PHASE_QUADRICS: &str = "Initial Quadric Construction";
pub const PHASE_QUEUE: &str = "Priority Queue Population";
pub const PHASE_LOOP: &str = "Iterative Collapse Loop";
pub const PHASE_POP: &str = "Edge Pop from Queue";
pub const PHASE_SOLVE: &str = "Optimal Position Solve";
pub const PHASE_AREA: &str = "Area Cost Calculation";
pub const PHASE_NEIGHBORS: &str = "Neighbor Updates";
pub const PHASE_BAKE: &str = "Successive Mapping & Texture Bake";

pub const METRICS_HEADER: [&str; 9] = [
    "mesh_id",
    "input_faces",
    "output_faces",
    "hausdorff_norm",
    "chamfer_norm",
    "texture_chamfer",
    "runtime_s",
    "hausdorff_raw",
    "chamfer_raw",
];

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] decimate::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Soft(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Core(decimate::Error::InvalidArgument(_)) => EXIT_USAGE,
            CliError::Core(_) | CliError::Io { .. } => EXIT_IO,
            CliError::Soft(_) => EXIT_SOFT_FAILURE,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io { path: PathBuf::from("<csv>"), source: std::io::Error::other(e) }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "decimate", version, about = "Feature-aware quadric mesh simplification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simplify a mesh and optionally re-bake its appearance.
    Simplify(SimplifyArgs),
    /// Compare two meshes and print one CSV row.
    Metrics(MetricsArgs),
    /// Run the five-step cumulative ablation over a manifest of meshes.
    Bench(BenchArgs),
    /// Simplify one mesh and report per-phase runtime shares.
    Profile(ProfileArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Paper,
    ZeroWeights,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bake {
    Atlas,
    VertexColor,
    None,
}

/// Options shared by every command that runs the simplifier.
#[derive(Debug, Clone, Default, Args)]
pub struct PipelineArgs {
    #[arg(long)]
    pub target_faces: Option<usize>,
    #[arg(long)]
    pub ratio: Option<f64>,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    #[arg(long)]
    pub w_area: Option<f64>,
    #[arg(long)]
    pub w_boundary: Option<f64>,
    #[arg(long)]
    pub w_uv: Option<f64>,
    #[arg(long)]
    pub w_normal: Option<f64>,
    #[arg(long)]
    pub w_plane_area: Option<f64>,
    /// Add collapse candidates between nearby disconnected components.
    #[arg(long)]
    pub virtual_edges: bool,
    #[arg(long, value_enum)]
    pub bake: Option<Bake>,
    #[arg(long)]
    pub atlas_res: Option<u32>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub weld_tol: Option<f64>,
    /// key=value file using the long flag names; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SimplifyArgs {
    pub input: PathBuf,
    #[arg(short, long)]
    pub output: PathBuf,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    /// Write the collapse history as text.
    #[arg(long)]
    pub history_out: Option<PathBuf>,
    /// Write a run report; `.csv` gives a metrics row, anything else JSON.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Surface samples per mesh for report metrics.
    #[arg(long, default_value_t = 20_000)]
    pub samples: usize,
}

#[derive(Debug, Clone, Args)]
pub struct MetricsArgs {
    pub reference: PathBuf,
    pub candidate: PathBuf,
    #[arg(long, default_value_t = decimate::metrics::DEFAULT_SAMPLE_COUNT)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Color weight in the texture Chamfer distance.
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long)]
    pub mesh_id: Option<String>,
    #[arg(long, default_value_t = io::DEFAULT_WELD_TOLERANCE)]
    pub weld_tol: f64,
    /// Also write the CSV to this file.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// File listing one mesh path per line.
    pub manifest: Option<PathBuf>,
    /// Include the bundled procedural fixtures.
    #[arg(long)]
    pub fixtures: bool,
    #[arg(long, default_value_t = 0.1)]
    pub ratio: f64,
    #[arg(long, default_value_t = 20_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = io::DEFAULT_WELD_TOLERANCE)]
    pub weld_tol: f64,
    #[arg(long)]
    pub virtual_edges: bool,
    #[arg(short, long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ProfileArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    /// Write the JSON report here as well as to stdout.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

/// Fully resolved pipeline settings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineSettings {
    #[serde(skip)]
    pub target: Target,
    pub target_faces: Option<usize>,
    pub ratio: Option<f64>,
    pub preset: &'static str,
    pub w_area: f64,
    pub w_boundary: f64,
    pub w_uv: f64,
    pub w_normal: f64,
    pub w_plane_area: f64,
    pub virtual_edges: bool,
    pub bake: Bake,
    pub atlas_res: u32,
    pub seed: u64,
    pub weld_tol: f64,
}

impl PipelineSettings {
    pub fn weights(&self) -> WeightSet {
        WeightSet {
            w_area: self.w_area,
            w_boundary: self.w_boundary,
            w_uv: self.w_uv,
            w_normal: self.w_normal,
            w_plane_area: self.w_plane_area,
        }
    }

    pub fn simplify_config(&self) -> SimplifyConfig {
        SimplifyConfig {
            weights: self.weights(),
            target: self.target,
            enable_virtual_edges: self.virtual_edges,
            weld_tolerance: self.weld_tol,
            rng_seed: self.seed,
            ..SimplifyConfig::default()
        }
    }
}

/// Parses a flat `key=value` file. Blank lines and `#` comments are ignored.
pub fn parse_config_file(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::Usage(format!("config line {}: expected key=value", i + 1)));
        };
        let key = k.trim().trim_start_matches("--").replace('_', "-");
        out.insert(key, v.trim().to_string());
    }
    Ok(out)
}

fn file_value<T: std::str::FromStr>(file: &BTreeMap<String, String>, key: &str) -> CliResult<Option<T>> {
    file.get(key)
        .map(|v| v.parse::<T>().map_err(|_| CliError::Usage(format!("config {key}: cannot parse {v:?}"))))
        .transpose()
}

fn file_enum<T: ValueEnum>(file: &BTreeMap<String, String>, key: &str) -> CliResult<Option<T>> {
    file.get(key)
        .map(|v| T::from_str(v, true).map_err(|_| CliError::Usage(format!("config {key}: unknown value {v:?}"))))
        .transpose()
}

impl PipelineArgs {
    /// Merges flags over the config file over preset defaults.
    pub fn resolve(&self) -> CliResult<PipelineSettings> {
        const KNOWN: [&str; 15] = [
            "target-faces",
            "ratio",
            "preset",
            "w-area",
            "w-boundary",
            "w-uv",
            "w-normal",
            "w-plane-area",
            "virtual-edges",
            "bake",
            "atlas-res",
            "seed",
            "weld-tol",
            "history-out",
            "report",
        ];
        let file = match &self.config {
            Some(p) => parse_config_file(&fs::read_to_string(p).map_err(io_err(p))?)?,
            None => BTreeMap::new(),
        };
        if let Some(k) = file.keys().find(|k| !KNOWN.contains(&k.as_str())) {
            return Err(CliError::Usage(format!("config: unknown key {k:?}")));
        }

        let (target_faces, ratio) = match (self.target_faces, self.ratio) {
            (Some(_), Some(_)) => return Err(CliError::Usage("give only one of --target-faces and --ratio".into())),
            (None, None) => {
                let (t, r) = (file_value::<usize>(&file, "target-faces")?, file_value::<f64>(&file, "ratio")?);
                if t.is_some() && r.is_some() {
                    return Err(CliError::Usage("config sets both target-faces and ratio".into()));
                }
                (t, r)
            }
            flags => flags,
        };
        let target = match (target_faces, ratio) {
            (Some(n), _) if n >= 1 => Target::Faces(n),
            (Some(n), _) => return Err(CliError::Usage(format!("--target-faces {n} must be at least 1"))),
            (None, Some(r)) if r > 0.0 && r <= 1.0 => Target::Ratio(r),
            (None, Some(r)) => return Err(CliError::Usage(format!("--ratio {r} must be in (0, 1]"))),
            (None, None) => return Err(CliError::Usage("one of --target-faces or --ratio is required".into())),
        };

        let preset = match self.preset {
            Some(p) => p,
            None => file_enum(&file, "preset")?.unwrap_or(Preset::Paper),
        };
        let base = match preset {
            Preset::Paper => WeightSet::DEFAULT,
            Preset::ZeroWeights => WeightSet::ZERO,
        };
        let weight = |flag: Option<f64>, key: &str, default: f64| -> CliResult<f64> {
            let w = match flag {
                Some(w) => w,
                None => file_value(&file, key)?.unwrap_or(default),
            };
            if !(w.is_finite() && w >= 0.0) {
                return Err(CliError::Usage(format!("--{key} {w} must be a finite non-negative number")));
            }
            Ok(w)
        };
        let settings = PipelineSettings {
            target,
            target_faces,
            ratio,
            preset: match preset {
                Preset::Paper => "paper",
                Preset::ZeroWeights => "zero-weights",
            },
            w_area: weight(self.w_area, "w-area", base.w_area)?,
            w_boundary: weight(self.w_boundary, "w-boundary", base.w_boundary)?,
            w_uv: weight(self.w_uv, "w-uv", base.w_uv)?,
            w_normal: weight(self.w_normal, "w-normal", base.w_normal)?,
            w_plane_area: weight(self.w_plane_area, "w-plane-area", base.w_plane_area)?,
            virtual_edges: self.virtual_edges || file_value(&file, "virtual-edges")?.unwrap_or(false),
            bake: match self.bake {
                Some(b) => b,
                None => file_enum(&file, "bake")?.unwrap_or(Bake::None),
            },
            atlas_res: match self.atlas_res {
                Some(r) => r,
                None => file_value(&file, "atlas-res")?.unwrap_or(1024),
            },
            seed: match self.seed {
                Some(s) => s,
                None => file_value(&file, "seed")?.unwrap_or(0),
            },
            weld_tol: match self.weld_tol {
                Some(t) => t,
                None => file_value(&file, "weld-tol")?.unwrap_or(io::DEFAULT_WELD_TOLERANCE),
            },
        };
        if settings.bake == Bake::Atlas && settings.atlas_res < decimate::transfer::MIN_ATLAS_RESOLUTION {
            return Err(CliError::Usage(format!("--atlas-res must be at least {}", decimate::transfer::MIN_ATLAS_RESOLUTION)));
        }
        if !(settings.weld_tol >= 0.0) {
            return Err(CliError::Usage("--weld-tol must be non-negative".into()));
        }
        Ok(settings)
    }
}

/// One named phase with its share of total runtime.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseEntry {
    pub name: String,
    pub seconds: f64,
    pub percent: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<PhaseEntry>,
}

/// The four top-level phases (the loop with its four sub-phases), with
/// percentages of their combined time.
pub fn phase_breakdown(t: &PhaseTimings, bake: Duration) -> Vec<PhaseEntry> {
    let top = [t.quadric_construction, t.queue_population, t.collapse_loop, bake];
    let total: f64 = top.iter().map(Duration::as_secs_f64).sum();
    let pct = |d: Duration| if total > 0.0 { 100.0 * d.as_secs_f64() / total } else { 25.0 };
    // Sub-phases are scaled to the loop total so they partition it exactly.
    let subs = [t.pop, t.solve, t.area, t.neighbor_updates];
    let sub_total: f64 = subs.iter().map(Duration::as_secs_f64).sum();
    let loop_pct = pct(t.collapse_loop);
    let sub_pct = |d: Duration| if sub_total > 0.0 { loop_pct * d.as_secs_f64() / sub_total } else { loop_pct / 4.0 };
    let entry = |name: &str, d: Duration, percent: f64| PhaseEntry {
        name: name.to_string(),
        seconds: d.as_secs_f64(),
        percent,
        children: Vec::new(),
    };
    let mut loop_entry = entry(PHASE_LOOP, t.collapse_loop, loop_pct);
    loop_entry.children = [PHASE_POP, PHASE_SOLVE, PHASE_AREA, PHASE_NEIGHBORS]
        .into_iter()
        .zip(subs)
        .map(|(n, d)| entry(n, d, sub_pct(d)))
        .collect();
    vec![
        entry(PHASE_QUADRICS, t.quadric_construction, pct(t.quadric_construction)),
        entry(PHASE_QUEUE, t.queue_population, pct(t.queue_population)),
        loop_entry,
        entry(PHASE_BAKE, bake, pct(bake)),
    ]
}

/// Distances between a reference mesh and a candidate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsRow {
    pub mesh_id: String,
    pub input_faces: usize,
    pub output_faces: usize,
    pub hausdorff_norm: f64,
    pub chamfer_norm: f64,
    pub texture_chamfer: Option<f64>,
    pub runtime_s: f64,
    pub hausdorff_raw: f64,
    pub chamfer_raw: f64,
}

impl MetricsRow {
    pub fn record(&self) -> Vec<String> {
        vec![
            self.mesh_id.clone(),
            self.input_faces.to_string(),
            self.output_faces.to_string(),
            format!("{:.9e}", self.hausdorff_norm),
            format!("{:.9e}", self.chamfer_norm),
            self.texture_chamfer.map_or_else(|| "NA".to_string(), |t| format!("{t:.9e}")),
            format!("{:.6}", self.runtime_s),
            format!("{:.9e}", self.hausdorff_raw),
            format!("{:.9e}", self.chamfer_raw),
        ]
    }
}

/// Samples both meshes and measures them; `runtime_s` is left at 0.
pub fn measure(
    mesh_id: &str,
    reference: &Mesh,
    candidate: &Mesh,
    samples: usize,
    seed: u64,
    lambda: f64,
) -> CliResult<MetricsRow> {
    let a = sample_surface(reference, samples, seed)?;
    let b = sample_surface(candidate, samples, seed)?;
    Ok(measure_clouds(mesh_id, reference, candidate, &a, &b, lambda))
}

fn measure_clouds(
    mesh_id: &str,
    reference: &Mesh,
    candidate: &Mesh,
    a: &PointCloudSample,
    b: &PointCloudSample,
    lambda: f64,
) -> MetricsRow {
    let (h, c) = geometric_distances(a, b);
    MetricsRow {
        mesh_id: mesh_id.to_string(),
        input_faces: reference.face_count(),
        output_faces: candidate.face_count(),
        hausdorff_norm: h.normalized,
        chamfer_norm: c.normalized,
        texture_chamfer: texture_chamfer(a, b, lambda).ok(),
        runtime_s: 0.0,
        hausdorff_raw: h.raw,
        chamfer_raw: c.raw,
    }
}

/// Everything a single pipeline run produced.
#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub simplified: Simplified,
    /// The simplified mesh with baked appearance, if any.
    pub mesh: Mesh,
    pub bake_time: Duration,
    pub total_time: Duration,
}

/// Simplifies `mesh` and bakes appearance as requested.
///
/// Baking is skipped with a warning when the input has no appearance.
pub fn run_pipeline(mesh: &Mesh, settings: &PipelineSettings) -> CliResult<PipelineOutput> {
    let start = Instant::now();
    let simplified = simplify(mesh, &settings.simplify_config());
    let t = Instant::now();
    let mode = match settings.bake {
        Bake::Atlas => Some(BakeMode::Atlas { resolution: settings.atlas_res }),
        Bake::VertexColor => Some(BakeMode::VertexColors),
        Bake::None => None,
    };
    let out = match mode {
        Some(_) if !mesh.has_appearance() => {
            warn!("input has no texture or vertex colors; skipping bake");
            simplified.mesh.clone()
        }
        Some(mode) => transfer_appearance(
            mesh,
            &simplified.mesh,
            &simplified.vertex_origin,
            &simplified.history,
            mode,
            DEFAULT_SAMPLES_PER_TEXEL,
        )?,
        None => simplified.mesh.clone(),
    };
    let bake_time = t.elapsed();
    Ok(PipelineOutput { simplified, mesh: out, bake_time, total_time: start.elapsed() })
}

/// Report for one simplify or profile run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub input: String,
    pub output: Option<String>,
    pub input_faces: usize,
    pub output_faces: usize,
    pub target_faces: usize,
    pub collapses: usize,
    pub flip_vetoes: usize,
    pub virtual_edges: usize,
    pub queue_exhausted: bool,
    pub runtime_s: f64,
    pub phases: Vec<PhaseEntry>,
    pub metrics: Option<MetricsRow>,
    pub config: PipelineSettings,
}

impl RunReport {
    pub fn new(input: &Path, output: Option<&Path>, run: &PipelineOutput, settings: &PipelineSettings) -> Self {
        let s = &run.simplified.stats;
        Self {
            input: input.display().to_string(),
            output: output.map(|p| p.display().to_string()),
            input_faces: s.input_faces,
            output_faces: run.mesh.face_count(),
            target_faces: s.target_faces,
            collapses: s.collapses,
            flip_vetoes: s.flip_vetoes,
            virtual_edges: s.virtual_edges,
            queue_exhausted: s.exhausted,
            runtime_s: run.total_time.as_secs_f64(),
            phases: phase_breakdown(&s.timings, run.bake_time),
            metrics: None,
            config: settings.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn load(path: &Path, weld_tol: f64) -> CliResult<Mesh> {
    let mesh = io::load_mesh(path, weld_tol)?;
    if mesh.face_count() == 0 {
        return Err(CliError::Core(decimate::Error::InvalidMesh(format!("{} has no faces", path.display()))));
    }
    Ok(mesh)
}

fn write_csv(path: Option<&Path>, header: &[&str], rows: &[Vec<String>]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| io_err(Path::new("<csv>"))(e.into_error()))?;
    let text = String::from_utf8(bytes).expect("csv is utf-8");
    if let Some(p) = path {
        fs::write(p, &text).map_err(io_err(p))?;
    }
    Ok(text)
}

fn mesh_id(path: &Path) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

pub fn cmd_simplify(args: &SimplifyArgs) -> CliResult<RunReport> {
    let settings = args.pipeline.resolve()?;
    let mesh = load(&args.input, settings.weld_tol)?;
    let run = run_pipeline(&mesh, &settings)?;
    io::save_mesh(&run.mesh, &args.output)?;
    if let Some(h) = &args.history_out {
        fs::write(h, run.simplified.history.to_text()).map_err(io_err(h))?;
    }
    let mut report = RunReport::new(&args.input, Some(&args.output), &run, &settings);
    if let Some(path) = &args.report {
        let t = Instant::now();
        let mut row = measure(&mesh_id(&args.input), &mesh, &run.mesh, args.samples, settings.seed, 1.0)?;
        row.runtime_s = run.total_time.as_secs_f64();
        info!("report metrics took {:.3}s", t.elapsed().as_secs_f64());
        report.metrics = Some(row.clone());
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
            write_csv(Some(path), &METRICS_HEADER, &[row.record()])?;
        } else {
            fs::write(path, report.to_json()).map_err(io_err(path))?;
        }
    }
    info!(
        "{}: {} -> {} faces in {:.3}s",
        args.input.display(),
        report.input_faces,
        report.output_faces,
        report.runtime_s
    );
    if report.queue_exhausted {
        return Err(CliError::Soft(format!(
            "queue exhausted at {} faces, above the target of {}; best-effort output written",
            report.output_faces, report.target_faces
        )));
    }
    Ok(report)
}

/// Returns the CSV text (header plus one row).
pub fn cmd_metrics(args: &MetricsArgs) -> CliResult<String> {
    if args.samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let a = load(&args.reference, args.weld_tol)?;
    let b = load(&args.candidate, args.weld_tol)?;
    let t = Instant::now();
    let id = args.mesh_id.clone().unwrap_or_else(|| mesh_id(&args.reference));
    let mut row = measure(&id, &a, &b, args.samples, args.seed, args.lambda)?;
    row.runtime_s = t.elapsed().as_secs_f64();
    write_csv(args.output.as_deref(), &METRICS_HEADER, &[row.record()])
}

/// One row of the cumulative ablation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AblationConfig {
    pub name: &'static str,
    pub weights: WeightSet,
}

/// All-zero, then enabling area, plane-area weighting, boundary, and
/// finally everything.
pub fn ablation_configs() -> [AblationConfig; 5] {
    let d = WeightSet::DEFAULT;
    let zero = WeightSet::ZERO;
    let area = WeightSet { w_area: d.w_area, ..zero };
    let plane = WeightSet { w_plane_area: d.w_plane_area, ..area };
    let boundary = WeightSet { w_boundary: d.w_boundary, ..plane };
    [
        AblationConfig { name: "all-zero", weights: zero },
        AblationConfig { name: "+w_area", weights: area },
        AblationConfig { name: "+w_plane_area", weights: plane },
        AblationConfig { name: "+w_boundary", weights: boundary },
        AblationConfig { name: "full", weights: d },
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct AblationRun {
    pub config: &'static str,
    pub metrics: MetricsRow,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AblationSummary {
    pub config: &'static str,
    pub meshes: usize,
    pub mean_hausdorff_norm: f64,
    pub mean_chamfer_norm: f64,
    /// Mean over meshes that carry appearance.
    pub mean_texture_chamfer: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchOutput {
    pub runs: Vec<AblationRun>,
    pub summary: Vec<AblationSummary>,
}

/// Runs every mesh through every ablation config.
pub fn run_ablation(
    meshes: &[(String, Mesh)],
    ratio: f64,
    samples: usize,
    seed: u64,
    virtual_edges: bool,
) -> CliResult<BenchOutput> {
    let configs = ablation_configs();
    let jobs: Vec<(usize, usize)> = (0..meshes.len()).flat_map(|m| (0..configs.len()).map(move |c| (m, c))).collect();
    let references: Vec<PointCloudSample> =
        meshes.par_iter().map(|(_, m)| sample_surface(m, samples, seed)).collect::<Result<_, _>>()?;
    let rows: Vec<CliResult<AblationRun>> = jobs
        .par_iter()
        .map(|&(m, c)| {
            let (id, mesh) = &meshes[m];
            let cfg = configs[c];
            let settings = PipelineSettings {
                target: Target::Ratio(ratio),
                target_faces: None,
                ratio: Some(ratio),
                preset: "paper",
                w_area: cfg.weights.w_area,
                w_boundary: cfg.weights.w_boundary,
                w_uv: cfg.weights.w_uv,
                w_normal: cfg.weights.w_normal,
                w_plane_area: cfg.weights.w_plane_area,
                virtual_edges,
                bake: if mesh.has_appearance() { Bake::VertexColor } else { Bake::None },
                atlas_res: 1024,
                seed,
                weld_tol: io::DEFAULT_WELD_TOLERANCE,
            };
            let run = run_pipeline(mesh, &settings)?;
            let b = sample_surface(&run.mesh, samples, seed)?;
            let mut metrics = measure_clouds(id, mesh, &run.mesh, &references[m], &b, 1.0);
            metrics.runtime_s = run.total_time.as_secs_f64();
            Ok(AblationRun { config: cfg.name, metrics })
        })
        .collect();
    let runs: Vec<AblationRun> = rows.into_iter().collect::<CliResult<_>>()?;
    let summary = configs
        .iter()
        .map(|cfg| {
            let mine: Vec<&MetricsRow> = runs.iter().filter(|r| r.config == cfg.name).map(|r| &r.metrics).collect();
            let n = mine.len().max(1) as f64;
            let tex: Vec<f64> = mine.iter().filter_map(|m| m.texture_chamfer).collect();
            AblationSummary {
                config: cfg.name,
                meshes: mine.len(),
                mean_hausdorff_norm: mine.iter().map(|m| m.hausdorff_norm).sum::<f64>() / n,
                mean_chamfer_norm: mine.iter().map(|m| m.chamfer_norm).sum::<f64>() / n,
                mean_texture_chamfer: (!tex.is_empty()).then(|| tex.iter().sum::<f64>() / tex.len() as f64),
            }
        })
        .collect();
    Ok(BenchOutput { runs, summary })
}

/// Paths from a manifest: one per line, `#` comments, relative to the manifest's directory.
pub fn read_manifest(path: &Path) -> CliResult<Vec<PathBuf>> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let base = path.parent().unwrap_or(Path::new("."));
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let p = PathBuf::from(l);
            if p.is_absolute() {
                p
            } else {
                base.join(p)
            }
        })
        .collect())
}

pub const SUMMARY_HEADER: [&str; 5] =
    ["config", "meshes", "mean_hausdorff_norm", "mean_chamfer_norm", "mean_texture_chamfer"];

/// Writes `ablation_summary.csv` and `ablation_runs.csv` into `out_dir`.
pub fn cmd_bench(args: &BenchArgs) -> CliResult<BenchOutput> {
    if !(args.ratio > 0.0 && args.ratio <= 1.0) {
        return Err(CliError::Usage(format!("--ratio {} must be in (0, 1]", args.ratio)));
    }
    if args.samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let mut meshes = Vec::new();
    if let Some(manifest) = &args.manifest {
        let paths = read_manifest(manifest)?;
        if paths.is_empty() && !args.fixtures {
            return Err(CliError::Usage(format!("manifest {} lists no meshes", manifest.display())));
        }
        for p in paths {
            match load(&p, args.weld_tol) {
                Ok(m) => meshes.push((mesh_id(&p), m)),
                Err(e) => warn!("skipping {}: {e}", p.display()),
            }
        }
    } else if !args.fixtures {
        return Err(CliError::Usage("give a manifest or --fixtures".into()));
    }
    if args.fixtures {
        meshes.extend(fixtures::ablation_set().into_iter().map(|f| (f.name.to_string(), f.mesh)));
    }
    if meshes.is_empty() {
        return Err(CliError::Core(decimate::Error::InvalidArgument("no mesh in the manifest could be loaded".into())));
    }
    let out = run_ablation(&meshes, args.ratio, args.samples, args.seed, args.virtual_edges)?;

    fs::create_dir_all(&args.out_dir).map_err(io_err(&args.out_dir))?;
    let fmt = |x: f64| format!("{x:.9e}");
    let summary_rows: Vec<Vec<String>> = out
        .summary
        .iter()
        .map(|s| {
            vec![
                s.config.to_string(),
                s.meshes.to_string(),
                fmt(s.mean_hausdorff_norm),
                fmt(s.mean_chamfer_norm),
                s.mean_texture_chamfer.map_or_else(|| "NA".into(), fmt),
            ]
        })
        .collect();
    let text = write_csv(Some(&args.out_dir.join("ablation_summary.csv")), &SUMMARY_HEADER, &summary_rows)?;
    let mut header = vec!["config"];
    header.extend(METRICS_HEADER);
    let run_rows: Vec<Vec<String>> = out
        .runs
        .iter()
        .map(|r| {
            let mut row = vec![r.config.to_string()];
            row.extend(r.metrics.record());
            row
        })
        .collect();
    write_csv(Some(&args.out_dir.join("ablation_runs.csv")), &header, &run_rows)?;
    print!("{text}");
    Ok(out)
}

pub fn cmd_profile(args: &ProfileArgs) -> CliResult<RunReport> {
    let mut pipeline = args.pipeline.clone();
    if pipeline.target_faces.is_none() && pipeline.ratio.is_none() && pipeline.config.is_none() {
        pipeline.ratio = Some(0.1);
    }
    let settings = pipeline.resolve()?;
    let mesh = load(&args.input, settings.weld_tol)?;
    let run = run_pipeline(&mesh, &settings)?;
    let report = RunReport::new(&args.input, None, &run, &settings);
    let json = report.to_json();
    if let Some(p) = &args.report {
        fs::write(p, &json).map_err(io_err(p))?;
    }
    Ok(report)
}

fn print_profile(report: &RunReport) {
    println!("{}", report.to_json());
    for phase in &report.phases {
        eprintln!("{:<40} {:6.2}%", phase.name, phase.percent);
        for c in &phase.children {
            eprintln!("  - {:<36} {:6.2}%", c.name, c.percent);
        }
    }
}

/// Parses `argv` and runs the selected command, returning the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Command::Simplify(a) => cmd_simplify(a).map(|_| ()),
        Command::Metrics(a) => cmd_metrics(a).map(|csv| print!("{csv}")),
        Command::Bench(a) => cmd_bench(a).map(|_| ()),
        Command::Profile(a) => cmd_profile(a).map(|r| print_profile(&r)),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("decimate: {e}");
            e.exit_code()
        }
    }
}
