//! The `fbt` command-line driver.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or validation error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

use crate::geometry::{CalibrationFile, CalibrationProfile};
use crate::layout::{builtin_layout, builtin_layouts, load_layout, validate_layout, Layout, LayoutError, Method};
use crate::metrics::{trial_metrics, MetricsReport};
use crate::phrases::{parse_phrase_file, phrases_for};
use crate::report::{compare, SelectionRule, DEFAULT_NORMALITY_THRESHOLD};
use crate::session::{
    parse_session_log, replay_session, synthesize_session_with, CalibrationSource, Interval, LatencyModel, PayloadMode,
    SessionLog, SynthesisOptions,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "fbt", version, about = "Finger-anchored non-visual text entry toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Layout file utilities.
    Layout {
        #[command(subcommand)]
        command: LayoutCommand,
    },
    /// Derive region anchors from a fingertip calibration file.
    Calibrate {
        fingertips: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Add the extra anchors declared by this layout (file, id or method name).
        #[arg(long)]
        layout: Option<String>,
    },
    /// Synthesize session logs for a phrase set.
    Simulate {
        #[arg(long, value_parser = parse_method)]
        method: Method,
        /// Phrase file, one phrase per line. Defaults to a generated set.
        #[arg(long)]
        phrases: Option<PathBuf>,
        /// Number of generated phrases when no phrase file is given.
        #[arg(long, default_value_t = 8)]
        count: usize,
        /// `fixed:MS` or `uniform:LO-HI`.
        #[arg(long, default_value = "fixed:1000")]
        latency: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        layout: Option<String>,
        #[arg(long)]
        profile: Option<PathBuf>,
        /// Record touches at anchor points instead of region names.
        #[arg(long)]
        touch: bool,
        #[arg(long)]
        participant: Option<String>,
    },
    /// Replay a session log and print its transcript and metrics.
    Replay {
        log: PathBuf,
        #[arg(long)]
        layout: Option<String>,
        #[arg(long)]
        profile: Option<PathBuf>,
        #[arg(long)]
        pretty: bool,
    },
    /// Replay many logs and compare methods.
    Compare {
        #[arg(required = true)]
        logs: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = GroupBy::Method)]
        group_by: GroupBy,
        /// Extra layout files, matched to logs by layout id.
        #[arg(long)]
        layout: Vec<String>,
        #[arg(long)]
        profile: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_NORMALITY_THRESHOLD)]
        threshold: f64,
        #[arg(long)]
        pretty: bool,
    },
    /// Run the HTTP session service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
    },
}

#[derive(Debug, Subcommand)]
enum LayoutCommand {
    /// Check a layout file against every layout rule.
    Validate { file: PathBuf },
    /// Print a shipped layout file.
    Show {
        #[arg(value_parser = parse_method)]
        method: Method,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GroupBy {
    Method,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse()
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn data(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_DATA,
            message: message.into(),
        }
    }
}

type CmdResult = Result<(), Failure>;

/// Run with process stdout/stderr.
pub fn execute<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    execute_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn execute_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    match run(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn run(command: Command, out: &mut dyn Write) -> CmdResult {
    match command {
        Command::Layout { command } => match command {
            LayoutCommand::Validate { file } => layout_validate(&file, out),
            LayoutCommand::Show { method } => emit(out, &builtin_layout(method).serialize()),
        },
        Command::Calibrate {
            fingertips,
            output,
            layout,
        } => calibrate(&fingertips, output.as_deref(), layout.as_deref(), out),
        Command::Simulate {
            method,
            phrases,
            count,
            latency,
            seed,
            output,
            layout,
            profile,
            touch,
            participant,
        } => {
            let interval: Interval = latency.parse().map_err(|e| Failure {
                code: EXIT_USAGE,
                message: format!("{e}"),
            })?;
            let layout = match layout {
                Some(spec) => resolve_layout(&spec)?,
                None => builtin_layout(method),
            };
            if layout.method != method {
                return Err(Failure::data(format!(
                    "layout {} is for {}, not {method}",
                    layout.id, layout.method
                )));
            }
            let phrases = match phrases {
                Some(path) => parse_phrase_file(&read(&path)?),
                None => phrases_for(method, count, seed),
            };
            let profile = match profile {
                Some(p) => read_profile(&p)?,
                None => CalibrationProfile::reference(),
            };
            let options = SynthesisOptions {
                payload: if touch { PayloadMode::Touch } else { PayloadMode::Region },
                participant_id: participant,
                inline_profile: true,
            };
            simulate(&phrases, &layout, &profile, interval, seed, &options, &output, out)
        }
        Command::Replay {
            log,
            layout,
            profile,
            pretty,
        } => replay(&log, layout.as_deref(), profile.as_deref(), pretty, out),
        Command::Compare {
            logs,
            group_by: GroupBy::Method,
            layout,
            profile,
            threshold,
            pretty,
        } => compare_logs(&logs, &layout, profile.as_deref(), threshold, pretty, out),
        Command::Serve { port, host } => serve(&host, port, out),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> CmdResult {
    out.write_all(text.as_bytes())
        .and_then(|_| {
            if text.ends_with('\n') {
                Ok(())
            } else {
                out.write_all(b"\n")
            }
        })
        .map_err(|e| Failure::data(format!("writing output: {e}")))
}

fn emit_json(out: &mut dyn Write, value: &impl serde::Serialize) -> CmdResult {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::data(e.to_string()))?;
    emit(out, &text)
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::data(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> CmdResult {
    fs::write(path, text).map_err(|e| Failure::data(format!("{}: {e}", path.display())))
}

/// A layout given as a shipped layout id, a method name, or a file path.
fn resolve_layout(spec: &str) -> Result<Layout, Failure> {
    if let Some(l) = builtin_layouts().into_iter().find(|l| l.id == spec) {
        return Ok(l);
    }
    if let Ok(method) = spec.parse::<Method>() {
        return Ok(builtin_layout(method));
    }
    let text = read(Path::new(spec))?;
    load_layout(&text).map_err(|e| Failure::data(format!("{spec}: {e}")))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ProfileInput {
    Profile(CalibrationProfile),
    Calibration(CalibrationFile),
}

/// Either a derived profile or a raw fingertip calibration file.
fn read_profile(path: &Path) -> Result<CalibrationProfile, Failure> {
    let text = read(path)?;
    let input: ProfileInput = serde_json::from_str(&text)
        .map_err(|e| Failure::data(format!("{}: not a profile or calibration file: {e}", path.display())))?;
    let profile = match input {
        ProfileInput::Profile(p) => p,
        ProfileInput::Calibration(c) => c.derive(&[]).map_err(|e| Failure::data(e.to_string()))?,
    };
    profile
        .validate()
        .map_err(|e| Failure::data(format!("{}: {e}", path.display())))?;
    Ok(profile)
}

fn layout_validate(file: &Path, out: &mut dyn Write) -> CmdResult {
    let text = read(file)?;
    match load_layout(&text) {
        Ok(layout) => {
            debug_assert!(validate_layout(&layout).is_ok());
            emit_json(out, &json!({ "ok": true, "id": layout.id, "method": layout.method }))
        }
        Err(LayoutError::Invalid(violations)) => {
            let listed: Vec<_> = violations
                .iter()
                .map(|v| json!({ "subject": v.subject, "rule": v.rule, "detail": v.detail }))
                .collect();
            emit_json(out, &json!({ "ok": false, "violations": listed }))?;
            Err(Failure::data(format!("{} layout violation(s)", violations.len())))
        }
        Err(e) => Err(Failure::data(format!("{}: {e}", file.display()))),
    }
}

fn calibrate(input: &Path, output: Option<&Path>, layout: Option<&str>, out: &mut dyn Write) -> CmdResult {
    let file: CalibrationFile =
        serde_json::from_str(&read(input)?).map_err(|e| Failure::data(format!("{}: {e}", input.display())))?;
    let synthetic: Vec<_> = match layout {
        Some(spec) => resolve_layout(spec)?.synthetic_anchors().cloned().collect(),
        None => Vec::new(),
    };
    let profile = file.derive(&synthetic).map_err(|e| Failure::data(e.to_string()))?;
    let text = serde_json::to_string_pretty(&profile).map_err(|e| Failure::data(e.to_string()))? + "\n";
    match output {
        Some(path) => {
            write_file(path, &text)?;
            emit_json(
                out,
                &json!({ "written": path.display().to_string(), "anchors": profile.anchors.len() }),
            )
        }
        None => emit(out, &text),
    }
}

#[allow(clippy::too_many_arguments)]
fn simulate(
    phrases: &[String],
    layout: &Layout,
    profile: &CalibrationProfile,
    interval: Interval,
    seed: u64,
    options: &SynthesisOptions,
    dir: &Path,
    out: &mut dyn Write,
) -> CmdResult {
    fs::create_dir_all(dir).map_err(|e| Failure::data(format!("{}: {e}", dir.display())))?;
    let mut files = Vec::with_capacity(phrases.len());
    for (i, phrase) in phrases.iter().enumerate() {
        let latency = LatencyModel {
            interval,
            seed: seed.wrapping_add(i as u64),
        };
        let log = synthesize_session_with(phrase, layout, profile, &latency, options)
            .map_err(|e| Failure::data(format!("phrase {} ({phrase:?}): {e}", i + 1)))?;
        let path = dir.join(format!("{}-{:04}.jsonl", layout.method, i + 1));
        write_file(&path, &log.serialize())?;
        files.push(path.display().to_string());
    }
    emit_json(
        out,
        &json!({ "method": layout.method, "layout_id": layout.id, "latency": interval.to_string(), "files": files }),
    )
}

struct Replayed {
    method: Method,
    transcript: String,
    skipped: usize,
    terminated: bool,
    metrics: MetricsReport,
}

fn replay_file(
    path: &Path,
    extra_layouts: &[Layout],
    layout: Option<&Layout>,
    profile: Option<&CalibrationProfile>,
) -> Result<Replayed, Failure> {
    let where_ = |e: &dyn std::fmt::Display| Failure::data(format!("{}: {e}", path.display()));
    let log: SessionLog = parse_session_log(&read(path)?).map_err(|e| where_(&e))?;
    let layout = match layout {
        Some(l) => l.clone(),
        None => extra_layouts
            .iter()
            .find(|l| l.id == log.header.layout_id)
            .cloned()
            .or_else(|| builtin_layouts().into_iter().find(|l| l.id == log.header.layout_id))
            .ok_or_else(|| where_(&format!("unknown layout id {}; pass --layout", log.header.layout_id)))?,
    };
    let profile = match (profile, &log.header.calibration) {
        (Some(p), _) => p.clone(),
        (None, Some(CalibrationSource::Inline(p))) => p.clone(),
        (None, Some(CalibrationSource::Reference(r))) => read_profile(Path::new(r))?,
        (None, None) => CalibrationProfile::reference(),
    };
    let replay = replay_session(&log, &layout, &profile).map_err(|e| where_(&e))?;
    let metrics = trial_metrics(&replay.record).map_err(|e| where_(&e))?;
    Ok(Replayed {
        method: layout.method,
        skipped: replay.skipped(),
        terminated: replay.terminated,
        transcript: replay.transcript,
        metrics,
    })
}

fn replay(log: &Path, layout: Option<&str>, profile: Option<&Path>, pretty: bool, out: &mut dyn Write) -> CmdResult {
    let layout = layout.map(resolve_layout).transpose()?;
    let profile = profile.map(read_profile).transpose()?;
    let r = replay_file(log, &[], layout.as_ref(), profile.as_ref())?;
    if pretty {
        let m = &r.metrics;
        emit(
            out,
            &format!(
                "transcript: {}\nwpm: {:.4}\nduration: {:.3} s\nmsd: {}\nerror rate: {:.4}\ncorrections: {}\nkspc: {:.4}\nskipped: {}\n",
                r.transcript, m.wpm, m.duration_s, m.msd, m.uncorrected_error_rate, m.corrections, m.kspc, r.skipped
            ),
        )
    } else {
        emit_json(
            out,
            &json!({
                "transcript": r.transcript,
                "method": r.method,
                "terminated": r.terminated,
                "skipped": r.skipped,
                "metrics": r.metrics,
            }),
        )
    }
}

fn compare_logs(
    logs: &[PathBuf],
    layouts: &[String],
    profile: Option<&Path>,
    threshold: f64,
    pretty: bool,
    out: &mut dyn Write,
) -> CmdResult {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Failure {
            code: EXIT_USAGE,
            message: format!("--threshold must lie in (0, 1], got {threshold}"),
        });
    }
    let extra: Vec<Layout> = layouts.iter().map(|s| resolve_layout(s)).collect::<Result<_, _>>()?;
    let profile = profile.map(read_profile).transpose()?;

    let mut trials = Vec::with_capacity(logs.len());
    for path in logs {
        let r = replay_file(path, &extra, None, profile.as_ref())?;
        trials.push((r.method, r.metrics));
    }
    let report = compare(
        &trials,
        SelectionRule {
            normality_threshold: threshold,
        },
    );
    if pretty {
        emit(out, &report.to_pretty_text())
    } else {
        emit_json(out, &report)
    }
}

fn serve(host: &str, port: u16, out: &mut dyn Write) -> CmdResult {
    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(|e| Failure::data(format!("starting runtime: {e}")))?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind((host, port))
            .await
            .map_err(|e| Failure::data(format!("binding {host}:{port}: {e}")))?;
        let addr = listener.local_addr().map_err(|e| Failure::data(e.to_string()))?;
        emit(out, &format!("listening on http://{addr}"))?;
        let _ = out.flush();
        axum::serve(listener, crate::server::router())
            .await
            .map_err(|e| Failure::data(format!("server: {e}")))
    })
}
