//! Finger-anchored non-visual text entry for touchscreens.
//!
//! Virtual keys sit next to the fingertips of the hand gripping the device.
//! This crate provides the region layouts for the three entry methods
//! (single-digit and double-digit finger-digit input, finger-text input),
//! deterministic entry state machines with spoken feedback, touch geometry,
//! gesture-session synthesis and replay, text-entry metrics, and the
//! statistics used to compare methods.

pub mod cli;
pub mod engine;
pub mod geometry;
pub mod layout;
pub mod metrics;
pub mod phrases;
pub mod report;
pub mod server;
pub mod session;
pub mod stats;

pub use engine::{new_session, CaseMode, EngineError, EngineState, FeedbackEvent, FeedbackKind, Pending};
pub use geometry::{derive_anchors, resolve_region, CalibrationFile, CalibrationProfile, GeometryParams, Point};
pub use layout::{builtin_layout, load_layout, validate_layout, KeyAction, Layout, Method, Region, RegionId};
pub use metrics::{min_string_distance, trial_metrics, words_per_minute, MetricsReport, TrialRecord};
pub use session::{
    parse_session_log, replay_session, serialize_session_log, synthesize_session, LatencyModel, SessionLog,
};
