use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use warpwatch_core::analytics::{
    corpus_stats, fade_extension_factor, fit_logistic_with, track_stats, CorpusStats, FitOptions, TrackStats,
};
use warpwatch_core::emit::{emit_edl, emit_filter_script, read_edl, ScriptProfile};
use warpwatch_core::par::{self, Execution};
use warpwatch_core::planner::{build_warp_plan, predict_duration, predict_duration_reading, SpeedSpec, WarpPlan};
use warpwatch_core::styling::{apply_centering, apply_fading, retime_track, FadeConfig};
use warpwatch_core::subtitle::{decode_utf8, parse_auto, write_ass, write_srt, CountMode, RenderConfig, SubtitleTrack};
use warpwatch_core::timeline::{compute_r, segment_timeline, DEFAULT_GAP_MERGE};
use warpwatch_core::TimeMs;

use crate::args::{FitArgs, OutputKind, PlanArgs, RetimeArgs, StatsArgs, StyleArgs};
use crate::config::FileConfig;
use crate::error::{invalid, CliError};

struct Artifact {
    path: PathBuf,
    contents: String,
}

struct Style {
    center: bool,
    fade: FadeConfig,
}

impl Style {
    fn resolve(args: &StyleArgs, cfg: &FileConfig) -> Result<Self, CliError> {
        let fade = FadeConfig::new(
            args.fade.or(cfg.fade).unwrap_or(false),
            args.fade_alpha.or(cfg.fade_alpha).unwrap_or(128),
            args.fade_max_ms.or(cfg.fade_max_ms).map(TimeMs),
        )
        .map_err(|e| CliError::Core(e.into()))?;
        Ok(Style { center: args.center.or(cfg.center).unwrap_or(false), fade })
    }
}

fn load_track(path: &Path) -> Result<SubtitleTrack, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    let text = decode_utf8(&bytes).map_err(|e| CliError::input(path, e))?;
    parse_auto(text).map_err(|e| CliError::input(path, e))
}

fn outputs(
    flags: Vec<OutputKind>,
    cfg: Option<Vec<OutputKind>>,
    implied: Option<OutputKind>,
) -> Result<BTreeSet<OutputKind>, CliError> {
    let mut chosen = if flags.is_empty() { cfg.unwrap_or_default() } else { flags };
    chosen.extend(implied);
    if chosen.is_empty() {
        return Err(invalid("select at least one output with --emit"));
    }
    Ok(chosen.into_iter().collect())
}

fn stem_of(path: &Path) -> String {
    path.file_stem().map_or_else(|| "out".to_string(), |s| s.to_string_lossy().into_owned())
}

fn file_name(stem: &str, kind: OutputKind) -> String {
    match kind {
        OutputKind::Edl => format!("{stem}.edl.json"),
        OutputKind::Ass => format!("{stem}.warped.ass"),
        OutputKind::Srt => format!("{stem}.warped.srt"),
        OutputKind::ScriptGeneric => format!("{stem}.warpplan.txt"),
        OutputKind::ScriptFiltergraph => format!("{stem}.filtergraph.txt"),
    }
}

fn speed_spec(args: &PlanArgs, cfg: &FileConfig, count_mode: CountMode) -> Result<SpeedSpec, CliError> {
    let sm = args.sm.or(cfg.sm);
    let ss = args.ss.or(cfg.ss);
    let reading_rate = args.reading_rate.or(cfg.reading_rate);
    let target = args.target_duration_ms.or(cfg.target_duration_ms);
    let sm_max = args.sm_max.or(cfg.sm_max);
    let min_speed = args.min_speed.or(cfg.min_speed);
    let max_speed = args.max_speed.or(cfg.max_speed);

    let spec = match (target, reading_rate) {
        (Some(_), Some(_)) => return Err(invalid("--target-duration-ms and --reading-rate cannot be combined")),
        (Some(l_q), None) => {
            if sm.is_some() {
                return Err(invalid("--sm cannot be combined with --target-duration-ms; use --sm-max to bound it"));
            }
            if min_speed.is_some() || max_speed.is_some() {
                return Err(invalid("--min-speed/--max-speed only apply with --reading-rate"));
            }
            let s_s = ss.ok_or_else(|| invalid("--target-duration-ms needs --ss"))?;
            SpeedSpec::TargetDuration { l_q: TimeMs(l_q), s_s, s_m_max: sm_max }
        }
        (None, Some(s_r)) => {
            if ss.is_some() {
                return Err(invalid("--ss cannot be combined with --reading-rate"));
            }
            if sm_max.is_some() {
                return Err(invalid("--sm-max only applies with --target-duration-ms"));
            }
            let s_m = sm.ok_or_else(|| invalid("--reading-rate needs --sm"))?;
            SpeedSpec::ReadingRate { s_m, s_r, count_mode, min_speed, max_speed }
        }
        (None, None) => {
            if sm_max.is_some() {
                return Err(invalid("--sm-max only applies with --target-duration-ms"));
            }
            if min_speed.is_some() || max_speed.is_some() {
                return Err(invalid("--min-speed/--max-speed only apply with --reading-rate"));
            }
            match (sm, ss) {
                (Some(s_m), Some(s_s)) => SpeedSpec::PerClass { s_m, s_s },
                _ => {
                    return Err(invalid(
                        "give --sm and --ss, --sm and --reading-rate, or --ss and --target-duration-ms",
                    ))
                }
            }
        }
    };
    spec.validate().map_err(|e| CliError::Core(e.into()))?;
    Ok(spec)
}

fn render(
    track: &SubtitleTrack,
    plan: &WarpPlan,
    style: &Style,
    kinds: &BTreeSet<OutputKind>,
    out_dir: &Path,
    stem: &str,
    source: &Path,
) -> Result<Vec<Artifact>, CliError> {
    let retimed = if kinds.contains(&OutputKind::Ass) || kinds.contains(&OutputKind::Srt) {
        Some(retime_track(track, plan).map_err(|e| CliError::input(source, e))?)
    } else {
        None
    };
    let mut artifacts = Vec::with_capacity(kinds.len());
    for &kind in kinds {
        let contents = match kind {
            OutputKind::Edl => emit_edl(plan),
            OutputKind::ScriptGeneric => emit_filter_script(plan, ScriptProfile::Generic),
            OutputKind::ScriptFiltergraph => emit_filter_script(plan, ScriptProfile::FilterGraph),
            OutputKind::Srt => write_srt(retimed.as_ref().expect("retimed")).map_err(|e| CliError::input(source, e))?,
            OutputKind::Ass => {
                let faded = apply_fading(retimed.as_ref().expect("retimed"), plan.l_out(), &style.fade);
                let render = RenderConfig { fade_alpha: style.fade.alpha, ..RenderConfig::default() };
                write_ass(&apply_centering(faded, style.center), &render)
            }
        };
        let path = out_dir.join(file_name(stem, kind));
        if same_file(&path, source) {
            return Err(invalid(format!("output {} would overwrite its input", path.display())));
        }
        artifacts.push(Artifact { path, contents });
    }
    Ok(artifacts)
}

fn same_file(a: &Path, b: &Path) -> bool {
    match (fs::canonicalize(a), fs::canonicalize(b)) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    }
}

fn write_all(out_dir: &Path, artifacts: &[Artifact], out: &mut dyn Write) -> Result<(), CliError> {
    fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    for a in artifacts {
        fs::write(&a.path, &a.contents).map_err(|e| CliError::io(&a.path, e))?;
        let _ = writeln!(out, "wrote {}", a.path.display());
    }
    Ok(())
}

fn fmt_speed(x: f64) -> String {
    format!("{}", (x * 1e6).round() / 1e6)
}

pub fn plan(args: PlanArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let cfg = FileConfig::load(args.config.as_deref())?;
    let subs = args.subs.clone().or(cfg.subs.clone()).ok_or_else(|| invalid("--subs is required"))?;
    let total = args.duration_ms.or(cfg.duration_ms).ok_or_else(|| invalid("--duration-ms is required"))?;
    if total == 0 {
        return Err(invalid("--duration-ms must be positive"));
    }
    let total = TimeMs(total);
    let gap = TimeMs(args.gap_merge_ms.or(cfg.gap_merge_ms).unwrap_or(DEFAULT_GAP_MERGE.0));
    let count_mode: CountMode = args.count_mode.or(cfg.count_mode).map(Into::into).unwrap_or_default();
    let spec = speed_spec(&args, &cfg, count_mode)?;
    let style = Style::resolve(&args.style, &cfg)?;
    #[cfg(feature = "encode")]
    let implied = args.encode.then_some(OutputKind::ScriptFiltergraph);
    #[cfg(not(feature = "encode"))]
    let implied = None;
    let kinds = outputs(args.emit.clone(), cfg.emit.clone(), implied)?;
    let out_dir = args.out_dir.clone().or(cfg.out_dir.clone()).unwrap_or_else(|| PathBuf::from("."));

    let track = load_track(&subs)?;
    let segs = segment_timeline(&track, total, gap).map_err(|e| CliError::input(&subs, e))?;
    let plan = build_warp_plan(&segs, &spec, &track).map_err(|e| CliError::input(&subs, e))?;
    let r = compute_r(&segs);
    let (mode, s_m, s_s) = match spec {
        SpeedSpec::PerClass { s_m, s_s } => ("per_class", s_m, Some(s_s)),
        SpeedSpec::ReadingRate { s_m, .. } => ("reading_rate", s_m, None),
        SpeedSpec::TargetDuration { .. } => {
            let solved = plan.solved().expect("target plans carry solved speeds");
            ("target_duration", solved.s_m, Some(solved.s_s))
        }
    };
    let predicted = match spec {
        SpeedSpec::ReadingRate { s_m, s_r, count_mode, .. } => {
            predict_duration_reading(s_m, s_r, &segs, &track, count_mode)
        }
        _ => predict_duration(s_m, s_s.expect("two-speed modes"), r, total),
    }
    .map_err(|e| CliError::input(&subs, e))?;

    let artifacts = render(&track, &plan, &style, &kinds, &out_dir, &stem_of(&subs), &subs)?;

    let _ = writeln!(out, "mode {mode}");
    let _ = writeln!(out, "source_ms {}", total.0);
    let _ = writeln!(out, "r {r:.6}");
    let _ = writeln!(out, "s_m {}", fmt_speed(s_m));
    if let Some(s_s) = s_s {
        let _ = writeln!(out, "s_s {}", fmt_speed(s_s));
    }
    let _ = writeln!(out, "segments {}", plan.segments().len());
    let _ = writeln!(out, "predicted_ms {}", predicted.0);
    let _ = writeln!(out, "output_ms {}", plan.l_out().0);
    let _ = writeln!(out, "compression_ratio {:.6}", plan.compression_ratio());
    for w in plan.warnings() {
        let _ = writeln!(err, "warning: {w:?}");
    }
    write_all(&out_dir, &artifacts, out)?;

    #[cfg(feature = "encode")]
    if args.encode {
        let media = args.media.as_deref().expect("clap enforces --media");
        let script = out_dir.join(file_name(&stem_of(&subs), OutputKind::ScriptFiltergraph));
        let target = encode(media, &script, &out_dir, &stem_of(&subs))?;
        let _ = writeln!(out, "wrote {}", target.display());
    }
    Ok(())
}

#[cfg(feature = "encode")]
fn encode(media: &Path, script: &Path, out_dir: &Path, stem: &str) -> Result<PathBuf, CliError> {
    use std::process::Command;
    let encoder = std::env::var_os("WARPWATCH_ENCODER").unwrap_or_else(|| "ffmpeg".into());
    let target = out_dir.join(format!("{stem}.warped.mp4"));
    let status = Command::new(&encoder)
        .args(["-y", "-hide_banner", "-loglevel", "error", "-i"])
        .arg(media)
        .arg("-filter_complex_script")
        .arg(script)
        .args(["-map", "[outv]", "-map", "[outa]"])
        .arg(&target)
        .status()
        .map_err(|e| CliError::Encoder(format!("{}: {e}", encoder.to_string_lossy())))?;
    if !status.success() {
        return Err(CliError::Encoder(format!("{} exited with {status}", encoder.to_string_lossy())));
    }
    Ok(target)
}

pub fn retime(args: RetimeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = FileConfig::load(args.config.as_deref())?;
    let subs = args.subs.clone().or(cfg.subs.clone()).ok_or_else(|| invalid("--subs is required"))?;
    let edl_path = args.edl.clone().or(cfg.edl.clone()).ok_or_else(|| invalid("--edl is required"))?;
    let style = Style::resolve(&args.style, &cfg)?;
    let kinds = outputs(args.emit.clone(), cfg.emit.clone(), None)?;
    if let Some(k) = kinds.iter().find(|k| !matches!(k, OutputKind::Ass | OutputKind::Srt)) {
        return Err(invalid(format!("retime writes subtitles only; {k:?} needs `plan`")));
    }
    let out_dir = args.out_dir.clone().or(cfg.out_dir.clone()).unwrap_or_else(|| PathBuf::from("."));

    let edl_text = fs::read_to_string(&edl_path).map_err(|e| CliError::io(&edl_path, e))?;
    let plan = read_edl(&edl_text).map_err(|e| CliError::input(&edl_path, e))?;
    let track = load_track(&subs)?;
    let artifacts = render(&track, &plan, &style, &kinds, &out_dir, &stem_of(&subs), &subs)?;
    let _ = writeln!(out, "output_ms {}", plan.l_out().0);
    write_all(&out_dir, &artifacts, out)
}

#[derive(Serialize)]
struct TrackReport {
    file: String,
    #[serde(flatten)]
    stats: TrackStats,
    /// Absent for tracks without cues.
    fade_extension_factor: Option<f64>,
}

#[derive(Serialize)]
struct StatsReport {
    corpus: CorpusStats,
    tracks: Vec<TrackReport>,
}

pub fn stats(args: StatsArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = FileConfig::load(args.config.as_deref())?;
    let dir = args.subs_dir.or(cfg.subs_dir).ok_or_else(|| invalid("--subs-dir is required"))?;
    let manifest_path =
        args.duration_manifest.or(cfg.duration_manifest).ok_or_else(|| invalid("--duration-manifest is required"))?;
    let gap = TimeMs(args.gap_merge_ms.or(cfg.gap_merge_ms).unwrap_or(DEFAULT_GAP_MERGE.0));
    let mode: CountMode = args.count_mode.or(cfg.count_mode).map(Into::into).unwrap_or_default();

    let text = fs::read_to_string(&manifest_path).map_err(|e| CliError::io(&manifest_path, e))?;
    let manifest: BTreeMap<String, u64> = serde_json::from_str(&text)
        .map_err(|e| CliError::Config { path: manifest_path.clone(), message: e.to_string() })?;
    if manifest.is_empty() {
        return Err(invalid(format!("{}: manifest lists no files", manifest_path.display())));
    }
    let entries: Vec<(String, u64)> = manifest.into_iter().collect();

    let reports = par::map(Execution::Parallel, &entries, |(name, ms)| {
        let path = dir.join(name);
        let track = load_track(&path)?;
        let stats = track_stats(&track, TimeMs(*ms), mode, gap).map_err(|e| CliError::input(&path, e))?;
        let factor = fade_extension_factor(&track, TimeMs(*ms)).ok();
        Ok(TrackReport { file: name.clone(), stats, fade_extension_factor: factor })
    });
    let tracks = reports.into_iter().collect::<Result<Vec<_>, CliError>>()?;
    let all: Vec<TrackStats> = tracks.iter().map(|t| t.stats.clone()).collect();
    let corpus = corpus_stats(&all).map_err(|e| CliError::Core(e.into()))?;

    let mut json = serde_json::to_string_pretty(&StatsReport { corpus, tracks }).expect("plain data serializes");
    json.push('\n');
    emit_text(args.out.as_deref(), &json, out)
}

fn emit_text(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            let _ = out.write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn read_points(path: &Path) -> Result<Vec<(f64, f64)>, CliError> {
    let file = fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut reader =
        csv::ReaderBuilder::new().has_headers(false).comment(Some(b'#')).trim(csv::Trim::All).from_reader(file);
    let mut points = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Config { path: path.to_path_buf(), message: e.to_string() })?;
        let line = record.position().map_or(0, |p| p.line());
        let parsed = match (record.get(0), record.get(1), record.len()) {
            (Some(x), Some(y), 2) => x.parse::<f64>().ok().zip(y.parse::<f64>().ok()),
            _ => None,
        };
        match parsed {
            Some(p) => points.push(p),
            None if i == 0 => continue,
            None => return Err(invalid(format!("{}:{line}: expected `x,y`", path.display()))),
        }
    }
    Ok(points)
}

#[derive(Serialize)]
struct FitReport {
    a: f64,
    b: f64,
    sse: f64,
    points: usize,
}

pub fn fit(args: FitArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let points = read_points(&args.points)?;
    let mut options = FitOptions::default();
    if let Some(n) = args.max_iterations {
        options.max_iterations = n;
    }
    let fit = fit_logistic_with(&points, &options).map_err(|e| CliError::input(&args.points, e))?;
    let report = FitReport { a: fit.a, b: fit.b, sse: fit.sse, points: points.len() };
    let mut json = serde_json::to_string_pretty(&report).expect("plain data serializes");
    json.push('\n');
    emit_text(args.out.as_deref(), &json, out)
}
