//! Gesture sessions: synthesis from a phrase, the JSON Lines log format, and
//! replay through the engine.
//!
//! A log is one header line followed by one event per line:
//!
//! ```text
//! {"method":"double_digit_fdi","layout_id":"double-digit-default",...}
//! {"t":1000,"region":"Index"}
//! {"t":2000,"x":0.12,"y":0.2}
//! ```

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::engine::{EngineError, EngineState, FeedbackEvent};
use crate::geometry::{resolve_region, CalibrationProfile, GeometryError, Point};
use crate::layout::{KeyAction, Layout, Method, Region};
use crate::metrics::TrialRecord;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CalibrationSource {
    /// Path or name of a profile stored elsewhere.
    Reference(String),
    Inline(CalibrationProfile),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionHeader {
    pub method: Method,
    pub layout_id: String,
    #[serde(default)]
    pub calibration: Option<CalibrationSource>,
    #[serde(default)]
    pub participant_id: Option<String>,
    /// Target phrase, when the session was a prescribed trial.
    #[serde(default)]
    pub prescribed: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Touch(Point),
    Region(Region),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SessionEvent {
    pub t_ms: u64,
    pub payload: Payload,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SessionLog {
    pub header: SessionHeader,
    pub events: Vec<SessionEvent>,
}

#[derive(Debug, thiserror::Error)]
pub enum SessionError {
    #[error("malformed session log: {0}")]
    Malformed(String),
    #[error("event {index}: {detail}")]
    BadEvent { index: usize, detail: String },
    #[error("event {index}: timestamp {t_ms} is earlier than the previous event")]
    DecreasingTimestamp { index: usize, t_ms: u64 },
    #[error("event {index}: touch and region payloads mixed in one log")]
    MixedPayloads { index: usize },
    #[error("log method {log} does not match layout method {layout}")]
    MethodMismatch { log: Method, layout: Method },
    #[error("session log has no events")]
    EmptyLog,
    #[error("symbol {symbol:?} cannot be produced with layout {layout}")]
    Unproducible { symbol: char, layout: String },
    #[error("layout {0} has no Call/Send binding to end a session")]
    NoTerminal(String),
    #[error("invalid latency model: {0}")]
    Latency(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl SessionLog {
    pub fn serialize(&self) -> String {
        let mut out = serde_json::to_string(&self.header).expect("header serializes");
        out.push('\n');
        for e in &self.events {
            let line = match &e.payload {
                Payload::Touch(p) => serde_json::json!({ "t": e.t_ms, "x": p.x, "y": p.y }),
                Payload::Region(r) => serde_json::json!({ "t": e.t_ms, "region": r.name() }),
            };
            out.push_str(&line.to_string());
            out.push('\n');
        }
        out
    }

    pub fn duration_ms(&self) -> u64 {
        match (self.events.first(), self.events.last()) {
            (Some(a), Some(b)) => b.t_ms - a.t_ms,
            _ => 0,
        }
    }
}

pub fn serialize_session_log(log: &SessionLog) -> String {
    log.serialize()
}

/// Parse a JSON Lines session log. Blank lines are ignored; CRLF endings are
/// tolerated.
pub fn parse_session_log(text: &str) -> Result<SessionLog, SessionError> {
    let mut lines = text
        .lines()
        .map(|l| l.trim_end_matches('\r'))
        .filter(|l| !l.trim().is_empty());
    let header_line = lines
        .next()
        .ok_or_else(|| SessionError::Malformed("missing header line".into()))?;
    let header: SessionHeader =
        serde_json::from_str(header_line).map_err(|e| SessionError::Malformed(format!("header: {e}")))?;

    let mut events = Vec::new();
    let mut touch_mode: Option<bool> = None;
    for (index, line) in lines.enumerate() {
        let bad = |detail: String| SessionError::BadEvent { index, detail };
        let value: Value = serde_json::from_str(line).map_err(|e| bad(e.to_string()))?;
        let obj = value.as_object().ok_or_else(|| bad("event is not an object".into()))?;
        let t_ms = obj
            .get("t")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("missing or invalid non-negative integer `t`".into()))?;
        let payload = parse_payload(obj).map_err(bad)?;

        let is_touch = matches!(payload, Payload::Touch(_));
        match touch_mode {
            Some(mode) if mode != is_touch => return Err(SessionError::MixedPayloads { index }),
            _ => touch_mode = Some(is_touch),
        }
        if let Some(prev) = events.last().map(|e: &SessionEvent| e.t_ms) {
            if t_ms < prev {
                return Err(SessionError::DecreasingTimestamp { index, t_ms });
            }
        }
        events.push(SessionEvent { t_ms, payload });
    }
    Ok(SessionLog { header, events })
}

fn parse_payload(obj: &Map<String, Value>) -> Result<Payload, String> {
    let keys: Vec<&str> = obj.keys().map(String::as_str).filter(|k| *k != "t").collect();
    let mut sorted = keys.clone();
    sorted.sort_unstable();
    match sorted.as_slice() {
        ["region"] => match obj["region"].as_str() {
            Some(name) if !name.is_empty() => Ok(Payload::Region(Region::parse(name))),
            _ => Err("`region` must be a non-empty string".into()),
        },
        ["x", "y"] => {
            let x = obj["x"].as_f64().ok_or("`x` must be a number")?;
            let y = obj["y"].as_f64().ok_or("`y` must be a number")?;
            Ok(Payload::Touch(Point::new(x, y)))
        }
        _ => Err(format!("unknown payload kind with fields {keys:?}")),
    }
}

/// Time between consecutive synthesized presses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interval {
    Fixed(u64),
    Uniform { lo: u64, hi: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatencyModel {
    pub interval: Interval,
    pub seed: u64,
}

impl LatencyModel {
    pub fn fixed(ms: u64) -> LatencyModel {
        LatencyModel {
            interval: Interval::Fixed(ms),
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<(), SessionError> {
        match self.interval {
            Interval::Fixed(0) => Err(SessionError::Latency("interval must be > 0 ms".into())),
            Interval::Uniform { lo, hi } if lo == 0 || lo > hi => Err(SessionError::Latency(format!(
                "uniform bounds must satisfy 0 < lo <= hi, got {lo}-{hi}"
            ))),
            _ => Ok(()),
        }
    }

    /// `count` timestamps, the first one interval after time zero.
    pub fn timestamps(&self, count: usize) -> Vec<u64> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut t = 0u64;
        (0..count)
            .map(|_| {
                t += match self.interval {
                    Interval::Fixed(ms) => ms,
                    Interval::Uniform { lo, hi } => rng.random_range(lo..=hi),
                };
                t
            })
            .collect()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Interval::Fixed(ms) => write!(f, "fixed:{ms}"),
            Interval::Uniform { lo, hi } => write!(f, "uniform:{lo}-{hi}"),
        }
    }
}

/// `fixed:MS` or `uniform:LO-HI`.
impl FromStr for Interval {
    type Err = SessionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || SessionError::Latency(format!("expected fixed:MS or uniform:LO-HI, got `{s}`"));
        let (kind, rest) = s.split_once(':').ok_or_else(err)?;
        let interval = match kind {
            "fixed" => Interval::Fixed(rest.parse().map_err(|_| err())?),
            "uniform" => {
                let (lo, hi) = rest.split_once('-').ok_or_else(err)?;
                Interval::Uniform {
                    lo: lo.parse().map_err(|_| err())?,
                    hi: hi.parse().map_err(|_| err())?,
                }
            }
            _ => return Err(err()),
        };
        LatencyModel { interval, seed: 0 }.validate()?;
        Ok(interval)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PayloadMode {
    #[default]
    Region,
    /// Touches at the anchor points of the pressed regions.
    Touch,
}

#[derive(Debug, Clone, Default)]
pub struct SynthesisOptions {
    pub payload: PayloadMode,
    pub participant_id: Option<String>,
    /// Embed the profile in the header.
    pub inline_profile: bool,
}

/// The shortest press sequence committing `phrase`, followed by the press
/// that ends the session.
pub fn press_plan(phrase: &str, layout: &Layout) -> Result<Vec<Region>, SessionError> {
    let terminal = layout
        .find(KeyAction::is_terminal)
        .ok_or_else(|| SessionError::NoTerminal(layout.id.clone()))?;
    let mut plan = Vec::new();
    match layout.method {
        Method::SingleDigitFdi => {
            for c in phrase.chars() {
                let region = layout
                    .find(|a| matches!(a, KeyAction::EmitDigit { digit } if crate::layout::digit_char(*digit) == c))
                    .ok_or_else(|| unproducible(c, layout))?;
                plan.push(region);
            }
        }
        Method::DoubleDigitFdi | Method::Fti => {
            let enter = layout
                .find(|a| matches!(a, KeyAction::Enter))
                .ok_or_else(|| unproducible(phrase.chars().next().unwrap_or(' '), layout))?;
            let toggle = layout.find(|a| matches!(a, KeyAction::CaseToggle));
            let mut upper = true;
            for c in phrase.chars() {
                let (region, taps) = cheapest_key(layout, c.to_ascii_uppercase())
                    .filter(|_| layout.method == Method::Fti || !c.is_ascii_lowercase())
                    .ok_or_else(|| unproducible(c, layout))?;
                if layout.method == Method::Fti && c.is_ascii_alphabetic() && c.is_ascii_uppercase() != upper {
                    plan.push(toggle.clone().ok_or_else(|| unproducible(c, layout))?);
                    upper = !upper;
                }
                plan.extend(std::iter::repeat_n(region, taps));
                plan.push(enter.clone());
            }
        }
    }
    plan.push(terminal);
    Ok(plan)
}

fn cheapest_key(layout: &Layout, symbol: char) -> Option<(Region, usize)> {
    let mut best: Option<(Region, usize)> = None;
    for (region, action) in layout.slots() {
        if let Some(pos) = action.cycle().and_then(|c| c.iter().position(|&s| s == symbol)) {
            if best.as_ref().is_none_or(|(_, taps)| pos + 1 < *taps) {
                best = Some((region, pos + 1));
            }
        }
    }
    best
}

fn unproducible(symbol: char, layout: &Layout) -> SessionError {
    SessionError::Unproducible {
        symbol,
        layout: layout.id.clone(),
    }
}

/// Synthesize a session typing `phrase` with region payloads.
pub fn synthesize_session(
    phrase: &str,
    layout: &Layout,
    profile: &CalibrationProfile,
    latency: &LatencyModel,
) -> Result<SessionLog, SessionError> {
    synthesize_session_with(phrase, layout, profile, latency, &SynthesisOptions::default())
}

pub fn synthesize_session_with(
    phrase: &str,
    layout: &Layout,
    profile: &CalibrationProfile,
    latency: &LatencyModel,
    options: &SynthesisOptions,
) -> Result<SessionLog, SessionError> {
    latency.validate()?;
    let plan = press_plan(phrase, layout)?;
    let profile = profile.for_layout(layout)?;
    let times = latency.timestamps(plan.len());
    let events = plan
        .into_iter()
        .zip(times)
        .map(|(region, t_ms)| {
            let payload = match options.payload {
                PayloadMode::Region => Payload::Region(region),
                PayloadMode::Touch => Payload::Touch(
                    profile
                        .anchor(&region)
                        .expect("profile derived for this layout has every anchor"),
                ),
            };
            SessionEvent { t_ms, payload }
        })
        .collect();
    Ok(SessionLog {
        header: SessionHeader {
            method: layout.method,
            layout_id: layout.id.clone(),
            calibration: options
                .inline_profile
                .then(|| CalibrationSource::Inline(profile.clone())),
            participant_id: options.participant_id.clone(),
            prescribed: Some(phrase.to_string()),
        },
        events,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum StepOutcome {
    Pressed { region: Region, events: Vec<FeedbackEvent> },
    Skipped { note: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceStep {
    pub t_ms: u64,
    #[serde(flatten)]
    pub outcome: StepOutcome,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Replay {
    pub transcript: String,
    pub record: TrialRecord,
    pub trace: Vec<TraceStep>,
    pub terminated: bool,
}

impl Replay {
    pub fn skipped(&self) -> usize {
        self.trace
            .iter()
            .filter(|s| matches!(s.outcome, StepOutcome::Skipped { .. }))
            .count()
    }
}

/// Feed a log through a fresh engine. Touches that resolve to no region,
/// unknown region names and presses after the session ended are skipped and
/// noted in the trace.
///
/// The trial's press count excludes the press that ended the session. When
/// the header carries no prescribed text, the transcript stands in for it.
pub fn replay_session(log: &SessionLog, layout: &Layout, profile: &CalibrationProfile) -> Result<Replay, SessionError> {
    if log.header.method != layout.method {
        return Err(SessionError::MethodMismatch {
            log: log.header.method,
            layout: layout.method,
        });
    }
    if log.events.is_empty() {
        return Err(SessionError::EmptyLog);
    }
    let profile = profile.for_layout(layout)?;
    let mut state = EngineState::new(Arc::new(layout.clone()))?;
    let mut trace = Vec::with_capacity(log.events.len());

    for event in &log.events {
        let region = match &event.payload {
            Payload::Region(r) => Some(r.clone()),
            Payload::Touch(p) => resolve_region(*p, &profile),
        };
        let outcome = match region {
            None => StepOutcome::Skipped {
                note: "touch resolved to no region".into(),
            },
            Some(region) => match state.apply(&region) {
                Ok(events) => StepOutcome::Pressed { region, events },
                Err(EngineError::Terminated) => StepOutcome::Skipped {
                    note: format!("press on {region} after session ended"),
                },
                Err(EngineError::UnknownRegion(name)) => StepOutcome::Skipped {
                    note: format!("region {name} is not in the layout"),
                },
                Err(e) => return Err(e.into()),
            },
        };
        trace.push(TraceStep {
            t_ms: event.t_ms,
            outcome,
        });
    }

    let transcript = state.transcript().to_string();
    let terminal_presses = u64::from(state.is_terminated());
    let record = TrialRecord {
        prescribed: log.header.prescribed.clone().unwrap_or_else(|| transcript.clone()),
        transcribed: transcript.clone(),
        start_ms: log.events[0].t_ms,
        end_ms: log.events[log.events.len() - 1].t_ms,
        press_total: state.press_total() - terminal_presses,
        correction_total: state.correction_total(),
    };
    Ok(Replay {
        transcript,
        record,
        trace,
        terminated: state.is_terminated(),
    })
}
