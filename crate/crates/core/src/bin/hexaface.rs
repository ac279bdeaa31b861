//! Command-line front end: meshes, manifests, simulations, classification.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use hexaface::adaptation::AdaptationPolicy;
use hexaface::mpd::{generate_mpd, parse_mpd, serialize_mpd};
use hexaface::sim::{compare, load_trace, simulate, simulate_baseline, Report, ReportFormat};
use hexaface::sphere::export_obj;
use hexaface::tiling::{build_ladder, compute_tile_grid, BitrateModel, TilingPlan, DEFAULT_SCALES};
use hexaface::{ParamError, Partition, Pose, SegmentId};

const DEFAULT_H_FOV: f64 = 96.0;
const DEFAULT_V_FOV: f64 = 90.0;

#[derive(Parser)]
#[command(name = "hexaface", version, about = "View-aware tiled 360 video streaming toolkit")]
struct Cli {
    /// JSON file whose keys mirror the subcommand's flags; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the six segment meshes (OBJ) and partition.json.
    Mesh(MeshArgs),
    /// Write a tiled SRD manifest for an equirectangular frame.
    Manifest(ManifestArgs),
    /// Replay a head-motion trace against a manifest.
    Simulate(SimulateArgs),
    /// Print the segment of a direction and the viewport overlap fractions.
    Classify(ClassifyArgs),
}

#[derive(Args, Deserialize, Default)]
#[serde(default, rename_all = "kebab-case")]
struct MeshArgs {
    #[arg(long)]
    h_fov: Option<f64>,
    #[arg(long)]
    v_fov: Option<f64>,
    #[arg(long)]
    slices: Option<usize>,
    #[arg(long)]
    stacks: Option<usize>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args, Deserialize, Default)]
#[serde(default, rename_all = "kebab-case")]
struct ManifestArgs {
    #[arg(long)]
    width: Option<u32>,
    #[arg(long)]
    height: Option<u32>,
    #[arg(long)]
    h_fov: Option<f64>,
    #[arg(long)]
    v_fov: Option<f64>,
    /// Four comma-separated linear scale factors, REP1 first.
    #[arg(long)]
    scales: Option<String>,
    /// Bits per pixel of the pixel-rate bitrate model.
    #[arg(long)]
    bpp: Option<f64>,
    #[arg(long)]
    fps: Option<f64>,
    /// Segment duration in seconds.
    #[arg(long)]
    seg_dur: Option<f64>,
    /// Media duration in seconds.
    #[arg(long)]
    dur: Option<f64>,
    /// JSON array of {segment, rep_id, bandwidth_bps} overrides.
    #[arg(long)]
    bitrate_table: Option<PathBuf>,
    /// Also write the tiling plan (rects, crops, ladder) as JSON.
    #[arg(long)]
    plan: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Deserialize, Default)]
#[serde(default, rename_all = "kebab-case")]
struct SimulateArgs {
    #[arg(long)]
    mpd: Option<PathBuf>,
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Policy JSON: {in_fov_rep, adjacent_rep, far_rep, min_overlap, adjacency, cap_adjacency}.
    #[arg(long)]
    policy: Option<PathBuf>,
    /// Also run the all-REP1 baseline and write a savings report.
    #[arg(long)]
    baseline: bool,
    #[arg(long)]
    h_fov: Option<f64>,
    #[arg(long)]
    v_fov: Option<f64>,
    /// Session report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Savings report path; defaults to `<out stem>.savings.<ext>`.
    #[arg(long)]
    savings_out: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
    /// Label of the savings report.
    #[arg(long)]
    label: Option<String>,
}

#[derive(Args, Deserialize, Default)]
#[serde(default, rename_all = "kebab-case")]
struct ClassifyArgs {
    #[arg(long)]
    h_fov: Option<f64>,
    #[arg(long)]
    v_fov: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    yaw: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pitch: Option<f64>,
}

/// Exit status 1 for runtime/IO failures, 2 for rejected input.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    fn io(path: &Path, err: std::io::Error) -> Self {
        Self { code: 1, message: format!("{}: {err}", path.display()) }
    }
}

impl From<ParamError> for Failure {
    fn from(e: ParamError) -> Self {
        Failure::invalid(e.to_string())
    }
}

type CliResult = Result<(), Failure>;

fn read_input(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

fn write_output(path: &Path, text: &str) -> CliResult {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Failure::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| Failure::io(path, e))
}

fn load_config<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T, Failure> {
    match path {
        None => Ok(T::default()),
        Some(p) => serde_json::from_str(&read_input(p)?)
            .map_err(|e| Failure::invalid(format!("{}: {e}", p.display()))),
    }
}

fn partition(h_fov: f64, v_fov: f64) -> Result<Partition, Failure> {
    Ok(Partition::new(h_fov, v_fov)?)
}

fn parse_scales(text: &str) -> Result<[f64; 4], Failure> {
    let values: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::invalid(format!("invalid scales: {text:?} is not a list of numbers")))?;
    values
        .try_into()
        .map_err(|_| Failure::invalid(format!("invalid scales: {text:?} needs exactly four factors")))
}

#[derive(Serialize)]
struct RegionRecord<'a> {
    segment: SegmentId,
    spatial_set_id: u8,
    #[serde(flatten)]
    region: &'a hexaface::Region,
    solid_angle_sr: f64,
}

#[derive(Serialize)]
struct PartitionRecord<'a> {
    h_fov_deg: f64,
    v_fov_deg: f64,
    beta_deg: f64,
    regions: Vec<RegionRecord<'a>>,
}

fn cmd_mesh(args: MeshArgs, cfg: MeshArgs) -> CliResult {
    let p = partition(
        args.h_fov.or(cfg.h_fov).unwrap_or(DEFAULT_H_FOV),
        args.v_fov.or(cfg.v_fov).unwrap_or(DEFAULT_V_FOV),
    )?;
    let slices = args.slices.or(cfg.slices).unwrap_or(32);
    let stacks = args.stacks.or(cfg.stacks).unwrap_or(16);
    let out_dir = args.out_dir.or(cfg.out_dir).unwrap_or_else(|| PathBuf::from("."));

    let mut meshes = Vec::with_capacity(6);
    for s in SegmentId::ALL {
        meshes.push((s, p.tessellate(s, slices, stacks)?));
    }
    for (s, mesh) in &meshes {
        write_output(&out_dir.join(format!("tile{}.obj", s.index())), &export_obj(mesh))?;
    }
    let record = PartitionRecord {
        h_fov_deg: p.h_fov_deg,
        v_fov_deg: p.v_fov_deg,
        beta_deg: p.beta_deg,
        regions: SegmentId::ALL
            .into_iter()
            .map(|s| RegionRecord {
                segment: s,
                spatial_set_id: s as u8,
                region: p.region(s),
                solid_angle_sr: p.solid_angle(s),
            })
            .collect(),
    };
    let mut json = serde_json::to_string_pretty(&record).expect("partition serializes");
    json.push('\n');
    write_output(&out_dir.join("partition.json"), &json)
}

fn cmd_manifest(args: ManifestArgs, cfg: ManifestArgs) -> CliResult {
    let width = args.width.or(cfg.width).unwrap_or(3840);
    let height = args.height.or(cfg.height).unwrap_or(1920);
    let p = partition(
        args.h_fov.or(cfg.h_fov).unwrap_or(DEFAULT_H_FOV),
        args.v_fov.or(cfg.v_fov).unwrap_or(DEFAULT_V_FOV),
    )?;
    let scales = match args.scales.or(cfg.scales) {
        Some(s) => parse_scales(&s)?,
        None => DEFAULT_SCALES,
    };
    let defaults = BitrateModel::default();
    let mut model = BitrateModel::pixel_rate(
        args.bpp.or(cfg.bpp).unwrap_or(defaults.bits_per_pixel),
        args.fps.or(cfg.fps).unwrap_or(defaults.fps),
    );
    if let Some(table) = args.bitrate_table.or(cfg.bitrate_table) {
        model = model.with_override_json(&read_input(&table)?)?;
    }
    let seg_dur = args.seg_dur.or(cfg.seg_dur).unwrap_or(1.0);
    let dur = args.dur.or(cfg.dur).unwrap_or(10.0);
    let out = args.out.or(cfg.out).unwrap_or_else(|| PathBuf::from("manifest.mpd"));

    let grid = compute_tile_grid(&p, width, height)?;
    let ladder = build_ladder(&grid, scales, &model)?;
    let mpd = generate_mpd(&grid, &ladder, dur, seg_dur).map_err(|e| Failure::invalid(e.to_string()))?;
    if let Some(plan) = args.plan.or(cfg.plan) {
        let mut json = TilingPlan::new(&grid, &ladder).to_json();
        json.push('\n');
        write_output(&plan, &json)?;
    }
    write_output(&out, &serialize_mpd(&mpd))
}

fn cmd_simulate(args: SimulateArgs, cfg: SimulateArgs) -> CliResult {
    let mpd_path = args
        .mpd
        .or(cfg.mpd)
        .ok_or_else(|| Failure::invalid("missing --mpd"))?;
    let trace_path = args
        .trace
        .or(cfg.trace)
        .ok_or_else(|| Failure::invalid("missing --trace"))?;
    let format: ReportFormat = args
        .format
        .or(cfg.format)
        .as_deref()
        .unwrap_or("csv")
        .parse()
        .map_err(Failure::invalid)?;
    let p = partition(
        args.h_fov.or(cfg.h_fov).unwrap_or(DEFAULT_H_FOV),
        args.v_fov.or(cfg.v_fov).unwrap_or(DEFAULT_V_FOV),
    )?;

    let mpd = parse_mpd(&read_input(&mpd_path)?)
        .map_err(|e| Failure::invalid(format!("{}: {e}", mpd_path.display())))?;
    let trace = load_trace(&read_input(&trace_path)?)
        .map_err(|e| Failure::invalid(format!("{}: {e}", trace_path.display())))?;
    let policy = match args.policy.or(cfg.policy) {
        Some(path) => AdaptationPolicy::from_json(&read_input(&path)?)
            .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?,
        None => AdaptationPolicy::default(),
    };

    let report = simulate(&mpd, &trace, &policy, &p).map_err(|e| Failure::invalid(e.to_string()))?;
    let out = args.out.or(cfg.out);
    emit(out.as_deref(), &report, format)?;

    if args.baseline || cfg.baseline {
        let base = simulate_baseline(&mpd, &trace, &p).map_err(|e| Failure::invalid(e.to_string()))?;
        let label = args.label.or(cfg.label).unwrap_or_else(|| {
            trace_path
                .file_stem()
                .map_or_else(|| "session".into(), |s| s.to_string_lossy().into_owned())
        });
        let savings = compare(&report, &base)
            .map_err(|e| Failure::invalid(e.to_string()))?
            .with_label(label);
        let savings_out = args.savings_out.or(cfg.savings_out).or_else(|| {
            out.as_ref().map(|o| {
                let stem = o.file_stem().unwrap_or_default().to_string_lossy();
                o.with_file_name(format!("{stem}.savings.{}", format.extension()))
            })
        });
        emit(savings_out.as_deref(), &savings, format)?;
    }
    Ok(())
}

fn emit<R: Report>(path: Option<&Path>, report: &R, format: ReportFormat) -> CliResult {
    let text = hexaface::sim::emit_report(report, format);
    match path {
        Some(p) => write_output(p, &text),
        None => print_stdout(&text),
    }
}

fn print_stdout(text: &str) -> CliResult {
    use std::io::Write;
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Failure { code: 1, message: format!("stdout: {e}") }),
        _ => Ok(()),
    }
}

fn cmd_classify(args: ClassifyArgs, cfg: ClassifyArgs) -> CliResult {
    let p = partition(
        args.h_fov.or(cfg.h_fov).unwrap_or(DEFAULT_H_FOV),
        args.v_fov.or(cfg.v_fov).unwrap_or(DEFAULT_V_FOV),
    )?;
    let yaw = args.yaw.or(cfg.yaw).ok_or_else(|| Failure::invalid("missing --yaw"))?;
    let pitch = args.pitch.or(cfg.pitch).ok_or_else(|| Failure::invalid("missing --pitch"))?;
    let segment = p.classify(yaw, pitch)?;
    let vis = p.visible_segments(&Pose::new(0, yaw, pitch, 0.0)?, 0.0)?;
    let mut text = format!("{segment}\n");
    for (s, f) in vis.fractions.iter() {
        text.push_str(&format!("{} {:.6}\n", s.name(), f));
    }
    print_stdout(&text)
}

fn run(cli: Cli) -> CliResult {
    let cfg = cli.config.as_deref();
    match cli.command {
        Command::Mesh(a) => cmd_mesh(a, load_config(cfg)?),
        Command::Manifest(a) => cmd_manifest(a, load_config(cfg)?),
        Command::Simulate(a) => cmd_simulate(a, load_config(cfg)?),
        Command::Classify(a) => cmd_classify(a, load_config(cfg)?),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
