use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use icvec::experiments::{self, ExperimentConfig, ExperimentName, Grid, Params};
use icvec::homology::{compute_pairs, rips_persistence, PersistenceDiagram, Reduction};
use icvec::metrics::{bottleneck, sliced_wasserstein, wasserstein, DEFAULT_SLICES};
use icvec::pointcloud::{
    generate, image_to_point_cloud_with, linked_twist_orbit, CloudKind, DistanceMatrix, GrayImage, ImageMode,
    PerturbMode, PointCloud, DEFAULT_IMAGE_THRESHOLD,
};
use icvec::rips::{build_rips_with, Filtration, RipsOptions, RipsScale};
use icvec::vectorize::{
    diagram_hash, interconnectivity_vector, persistence_vector, stable_interconnectivity_vector, FeatureVector,
    DEFAULT_DELTA,
};
use icvec::{io, Error, Result};

/// Default max filtration for point clouds in the unit box.
const UNIT_BOX_MAX_FILTRATION: f64 = 0.8;

#[derive(Parser)]
#[command(name = "icvec", version, about = "Persistence diagrams, interconnectivity vectors and diagram metrics")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file (or directory for `experiment`); stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Variance regularisation of the stable vector.
    #[arg(long, global = true)]
    delta: Option<f64>,
    /// Largest filtration value; `inf` builds the full complex.
    #[arg(long, global = true)]
    max_filtration: Option<f64>,
    /// Replace infinite deaths by the max filtration.
    #[arg(long, global = true)]
    cap_at_max: bool,
    /// Edges enter at half their length.
    #[arg(long, global = true)]
    double_scale: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a point cloud.
    Generate(GenerateArgs),
    /// Dump the Rips filtration of a point cloud.
    Rips(RipsArgs),
    /// Persistence diagram of a point cloud.
    Persist(PersistArgs),
    /// Vectorize a persistence diagram.
    Vectorize(VectorizeArgs),
    /// Distance between two persistence diagrams, printed as JSON.
    Distance(DistanceArgs),
    /// Run an experiment and write its report to `--out` (default `report/<name>`).
    Experiment(ExperimentArgs),
    /// Re-run the experiment recorded in a report directory and diff its tables.
    Verify { dir: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Uniform,
    Normal,
    Lattice,
    Sierpinski,
    LinkedTwist,
    Image,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    /// Number of points (ignored for images).
    #[arg(long, short, default_value_t = 400)]
    n: usize,
    /// Ambient dimension of uniform/normal clouds.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 4.0)]
    r: f64,
    /// Initial point of the linked-twist orbit; drawn from the seed when omitted.
    #[arg(long)]
    x0: Option<f64>,
    #[arg(long)]
    y0: Option<f64>,
    /// Grayscale PNG or PGM for `--kind image`.
    #[arg(long)]
    image: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_IMAGE_THRESHOLD)]
    threshold: u8,
    /// Append the pixel intensity as a third coordinate.
    #[arg(long)]
    intensity: bool,
}

#[derive(Args)]
struct RipsArgs {
    /// Point-cloud CSV.
    input: PathBuf,
    #[arg(long, default_value_t = 2)]
    max_dim: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Engine {
    /// Cohomology with implicit coboundaries.
    Implicit,
    /// Explicit boundary matrix, standard reduction.
    Standard,
    /// Explicit boundary matrix with clearing.
    Clearing,
}

#[derive(Args)]
struct PersistArgs {
    /// Point-cloud CSV.
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Engine::Implicit)]
    engine: Engine,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Persistence,
    Interconnectivity,
    Stable,
}

#[derive(Args)]
struct VectorizeArgs {
    /// Diagram CSV (`dim,birth,death`).
    input: PathBuf,
    #[arg(long, value_enum)]
    method: Method,
    #[arg(long, default_value_t = 1)]
    dim: usize,
    /// Divide the persistence vector by its largest entry.
    #[arg(long)]
    normalized: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Metric {
    Wasserstein,
    Bottleneck,
    Sliced,
}

#[derive(Args)]
struct DistanceArgs {
    left: PathBuf,
    right: PathBuf,
    #[arg(long, value_enum, default_value_t = Metric::Wasserstein)]
    metric: Metric,
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    #[arg(long, default_value_t = 1)]
    dim: usize,
    #[arg(long, default_value_t = DEFAULT_SLICES)]
    slices: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentArg {
    Instability,
    StabilityCurve,
    Perturb,
    Rvl,
    DeltaSweep,
    LinkedTwist,
    Handwriting,
    SlidingWindow,
    Counterexample,
}

impl From<ExperimentArg> for ExperimentName {
    fn from(arg: ExperimentArg) -> Self {
        match arg {
            ExperimentArg::Instability => ExperimentName::Instability,
            ExperimentArg::StabilityCurve => ExperimentName::StabilityCurve,
            ExperimentArg::Perturb => ExperimentName::Perturb,
            ExperimentArg::Rvl => ExperimentName::Rvl,
            ExperimentArg::DeltaSweep => ExperimentName::DeltaSweep,
            ExperimentArg::LinkedTwist => ExperimentName::LinkedTwist,
            ExperimentArg::Handwriting => ExperimentName::Handwriting,
            ExperimentArg::SlidingWindow => ExperimentName::SlidingWindow,
            ExperimentArg::Counterexample => ExperimentName::Counterexample,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    OnePoint,
    RandomMany,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(value_enum)]
    name: ExperimentArg,
    #[arg(long)]
    repetitions: Option<usize>,
    /// Points per cloud (or curve samples / windows).
    #[arg(long)]
    points: Option<usize>,
    /// Main sweep grid, `START:END:COUNT[:open][:log]` (ε or δ).
    #[arg(long)]
    grid: Option<Grid>,
    /// Wide ε grid of the perturbation experiment.
    #[arg(long)]
    wide_grid: Option<Grid>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Homology dimension to vectorize.
    #[arg(long)]
    dim: Option<usize>,
    /// Comma-separated r values of the linked-twist map.
    #[arg(long, value_delimiter = ',')]
    r_values: Option<Vec<f64>>,
    /// Directory of label subdirectories with images.
    #[arg(long)]
    image_dir: Option<PathBuf>,
    #[arg(long)]
    threshold: Option<u8>,
    #[arg(long)]
    intensity: bool,
    /// Number of sliced-Wasserstein directions.
    #[arg(long)]
    slices: Option<usize>,
    /// Window parameters of the sliding-window experiment.
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    m: Option<usize>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let g = &cli.global;
    match cli.command {
        Command::Generate(args) => {
            let cloud = generate_cloud(g, &args)?;
            emit(g, &cloud_output(g, &cloud))?;
        }
        Command::Rips(args) => {
            let cloud = PointCloud::load_csv(&args.input)?;
            let opts = RipsOptions { max_dim: args.max_dim, ..rips_options(g) };
            let filtration = build_rips_with(&DistanceMatrix::from_cloud(&cloud), &opts)?;
            emit(g, &filtration_output(g, &filtration))?;
        }
        Command::Persist(args) => {
            let cloud = PointCloud::load_csv(&args.input)?;
            let opts = rips_options(g);
            let dmat = DistanceMatrix::from_cloud(&cloud);
            let pairs = match args.engine {
                Engine::Implicit => rips_persistence(&dmat, &opts)?,
                Engine::Standard => compute_pairs(&build_rips_with(&dmat, &opts)?, Reduction::Standard)?,
                Engine::Clearing => compute_pairs(&build_rips_with(&dmat, &opts)?, Reduction::Clearing)?,
            };
            let diagram = maybe_cap(g, pairs.diagram());
            emit(g, &diagram_output(g, &diagram))?;
        }
        Command::Vectorize(args) => {
            let diagram = maybe_cap(g, PersistenceDiagram::load_csv(&args.input, g.max_filtration)?);
            let vector = match args.method {
                Method::Persistence => persistence_vector(&diagram, args.dim, args.normalized)?,
                Method::Interconnectivity => interconnectivity_vector(&diagram, args.dim)?,
                Method::Stable => {
                    stable_interconnectivity_vector(&diagram, args.dim, g.delta.unwrap_or(DEFAULT_DELTA))?
                }
            };
            let sidecar = vector.sidecar(&diagram_hash(&diagram));
            emit(g, &vector_output(g, &vector, &sidecar))?;
            if let (Some(out), Format::Csv) = (&g.out, g.format) {
                io::write_json(&out.with_extension("json"), &sidecar)?;
            }
        }
        Command::Distance(args) => {
            let left = maybe_cap(g, PersistenceDiagram::load_csv(&args.left, g.max_filtration)?);
            let right = maybe_cap(g, PersistenceDiagram::load_csv(&args.right, g.max_filtration)?);
            let (metric, p, value) = match args.metric {
                Metric::Wasserstein => {
                    ("wasserstein", json!(args.p), wasserstein(&left, &right, args.dim, args.p)?.total)
                }
                Metric::Bottleneck => ("bottleneck", json!("inf"), bottleneck(&left, &right, args.dim)?),
                Metric::Sliced => {
                    ("sliced_wasserstein", json!(args.p), sliced_wasserstein(&left, &right, args.dim, args.slices)?)
                }
            };
            let mut text = json!({ "metric": metric, "p": p, "value": value }).to_string();
            text.push('\n');
            emit(g, &text)?;
        }
        Command::Experiment(args) => {
            let name = ExperimentName::from(args.name);
            let config = experiment_config(g, name, &args)?;
            let report = experiments::run(&config)?;
            let out = g.out.clone().unwrap_or_else(|| Path::new("report").join(name.as_str()));
            report.write(&out)?;
            for check in &report.checks {
                let status = if check.passed { "pass" } else { "FAIL" };
                let kind = if check.asserted { "assert" } else { "report" };
                eprintln!("[{status}] {kind} {}: {}", check.name, check.detail);
            }
            if g.format == Format::Json {
                println!("{}", serde_json::to_string_pretty(&report.summary)?);
            } else {
                for (key, value) in &report.summary {
                    println!("{key},{value}");
                }
            }
            eprintln!("report written to {}", out.display());
            if !report.failed_assertions().is_empty() {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Verify { dir } => {
            let outcome = experiments::verify(&dir)?;
            for name in &outcome.compared {
                let status = if outcome.mismatched.contains(name) { "DIFFERS" } else { "identical" };
                println!("{name}: {status}");
            }
            if !outcome.ok() {
                return Ok(ExitCode::from(2));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn rips_options(g: &Global) -> RipsOptions {
    RipsOptions {
        max_filtration: g.max_filtration.unwrap_or(UNIT_BOX_MAX_FILTRATION),
        max_dim: 2,
        scale: if g.double_scale { RipsScale::HalfLength } else { RipsScale::Length },
    }
}

fn maybe_cap(g: &Global, diagram: PersistenceDiagram) -> PersistenceDiagram {
    if g.cap_at_max {
        diagram.capped()
    } else {
        diagram
    }
}

fn emit(g: &Global, text: &str) -> Result<()> {
    match &g.out {
        Some(path) => io::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn generate_cloud(g: &Global, args: &GenerateArgs) -> Result<PointCloud> {
    match args.kind {
        Kind::Uniform => generate(CloudKind::Uniform { dim: args.dim }, args.n, g.seed),
        Kind::Normal => generate(CloudKind::Normal { dim: args.dim }, args.n, g.seed),
        Kind::Lattice => generate(CloudKind::Lattice, args.n, g.seed),
        Kind::Sierpinski => generate(CloudKind::Sierpinski, args.n, g.seed),
        Kind::LinkedTwist => {
            use rand::Rng;
            let mut rng = icvec::rng::seeded(g.seed);
            let (rx, ry) = (rng.random::<f64>(), rng.random::<f64>());
            linked_twist_orbit(args.r, args.x0.unwrap_or(rx), args.y0.unwrap_or(ry), args.n)
        }
        Kind::Image => {
            let path = args.image.as_ref().ok_or_else(|| Error::InvalidArgument("--image is required".into()))?;
            let mode = if args.intensity { ImageMode::Intensity } else { ImageMode::Threshold };
            image_to_point_cloud_with(&GrayImage::load(path)?, args.threshold, mode, &path.display().to_string())
        }
    }
}

fn finite_or_string(x: f64) -> serde_json::Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(x.to_string())
    }
}

fn pretty(value: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values serialise");
    text.push('\n');
    text
}

fn cloud_output(g: &Global, cloud: &PointCloud) -> String {
    match g.format {
        Format::Csv => cloud.to_csv_string(),
        Format::Json => pretty(&json!({
            "dim": cloud.dim(),
            "seed": cloud.seed(),
            "provenance": cloud.provenance(),
            "points": cloud.points().collect::<Vec<_>>(),
        })),
    }
}

fn filtration_output(g: &Global, filtration: &Filtration) -> String {
    match g.format {
        Format::Csv => filtration.to_csv_string(),
        Format::Json => pretty(&json!({
            "max_filtration": finite_or_string(filtration.max_filtration()),
            "simplices": filtration
                .simplices()
                .iter()
                .map(|s| json!({ "vertices": s.vertices(), "filtration": s.filtration() }))
                .collect::<Vec<_>>(),
        })),
    }
}

fn diagram_output(g: &Global, diagram: &PersistenceDiagram) -> String {
    match g.format {
        Format::Csv => diagram.to_csv_string(),
        Format::Json => pretty(&json!({
            "max_filtration": finite_or_string(diagram.max_filtration()),
            "points": diagram
                .points()
                .iter()
                .map(|p| json!({ "dim": p.dim, "birth": p.birth, "death": finite_or_string(p.death) }))
                .collect::<Vec<_>>(),
        })),
    }
}

fn vector_output(g: &Global, vector: &FeatureVector, sidecar: &serde_json::Value) -> String {
    match g.format {
        Format::Csv => vector.to_csv_string(),
        Format::Json => {
            let mut value = sidecar.clone();
            value["values"] = json!(vector.values);
            pretty(&value)
        }
    }
}

fn experiment_config(g: &Global, name: ExperimentName, args: &ExperimentArgs) -> Result<ExperimentConfig> {
    let mut config = ExperimentConfig::default_for(name, g.seed);
    if let Some(pipeline) = config.pipeline_mut() {
        if let Some(delta) = g.delta {
            pipeline.delta = delta;
        }
        if let Some(max) = g.max_filtration {
            pipeline.max_filtration = max.is_finite().then_some(max);
        }
        if let Some(dim) = args.dim {
            pipeline.dim = dim;
        }
        pipeline.cap_at_max |= g.cap_at_max;
        pipeline.double_scale |= g.double_scale;
    }
    let unused =
        |flag: &str| Error::InvalidArgument(format!("{flag} does not apply to the {} experiment", name.as_str()));
    match &mut config.params {
        Params::Instability(p) => {
            if let Some(grid) = args.grid {
                p.eps = grid;
            }
        }
        Params::StabilityCurve(p) => {
            if let Some(grid) = args.grid {
                p.eps = grid;
            }
            if let Some(delta) = g.delta {
                p.delta = delta;
            }
        }
        Params::Perturb(p) => {
            if let Some(grid) = args.grid {
                p.eps = grid;
            }
            if let Some(grid) = args.wide_grid {
                p.wide_eps = Some(grid);
            }
            if let Some(n) = args.points {
                p.n_points = n;
            }
            if let Some(mode) = args.mode {
                p.mode = match mode {
                    ModeArg::OnePoint => PerturbMode::OnePoint,
                    ModeArg::RandomMany => PerturbMode::RandomMany,
                };
            }
        }
        Params::Rvl(p) => {
            if let Some(n) = args.points {
                p.n_points = n;
            }
            if let Some(r) = args.repetitions {
                p.repetitions = r;
            }
        }
        Params::DeltaSweep(p) => {
            if let Some(n) = args.points {
                p.n_points = n;
            }
            if let Some(r) = args.repetitions {
                p.repetitions = r;
            }
            if let Some(grid) = args.grid {
                p.deltas = grid;
            }
        }
        Params::LinkedTwist(p) => {
            if let Some(n) = args.points {
                p.n_points = n;
            }
            if let Some(r) = args.repetitions {
                p.repetitions = r;
            }
            if let Some(rs) = &args.r_values {
                p.r_values = rs.clone();
            }
        }
        Params::Handwriting(p) => {
            p.image_dir =
                args.image_dir.clone().ok_or_else(|| Error::InvalidArgument("--image-dir is required".into()))?;
            if let Some(t) = args.threshold {
                p.threshold = t;
            }
            if args.intensity {
                p.mode = ImageMode::Intensity;
            }
        }
        Params::SlidingWindow(p) => {
            if let Some(n) = args.points {
                p.windows = n;
            }
            if let Some(tau) = args.tau {
                p.tau = tau;
            }
            if let Some(m) = args.m {
                p.m = m;
            }
        }
        Params::Counterexample(p) => {
            if let Some(n) = args.points {
                p.samples = n;
            }
            if let Some(s) = args.slices {
                p.slices = s;
            }
        }
    }
    if args.image_dir.is_some() && name != ExperimentName::Handwriting {
        return Err(unused("--image-dir"));
    }
    if args.r_values.is_some() && name != ExperimentName::LinkedTwist {
        return Err(unused("--r-values"));
    }
    Ok(config)
}
