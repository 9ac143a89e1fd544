//! Entry-method state machines.
//!
//! An [`EngineState`] is a plain value. Each press produces the next state and
//! the spoken feedback for that press; nothing is committed without an
//! explicit Enter in the multi-tap methods, and there is no tap timeout.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::layout::{validate_layout, KeyAction, Layout, Method, Region, Violation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaseMode {
    Upper,
    Lower,
}

impl CaseMode {
    fn toggled(self) -> CaseMode {
        match self {
            CaseMode::Upper => CaseMode::Lower,
            CaseMode::Lower => CaseMode::Upper,
        }
    }
}

/// The uncommitted selection of a multi-tap method.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pending {
    /// Double-digit candidate; `press_count` is 1-based.
    Digit { region: Region, press_count: usize },
    /// Text candidate; `tap_index` is 1-based.
    Letter { region: Region, tap_index: usize },
}

impl Pending {
    fn region(&self) -> &Region {
        match self {
            Pending::Digit { region, .. } | Pending::Letter { region, .. } => region,
        }
    }

    fn position(&self) -> usize {
        match self {
            Pending::Digit { press_count, .. } => *press_count,
            Pending::Letter { tap_index, .. } => *tap_index,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeedbackKind {
    Announce,
    CommitEcho,
    ErrorBeep,
    ModeChange,
    Terminal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeedbackEvent {
    pub kind: FeedbackKind,
    pub utterance: String,
}

impl FeedbackEvent {
    fn new(kind: FeedbackKind, utterance: impl Into<String>) -> Self {
        FeedbackEvent {
            kind,
            utterance: utterance.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EngineError {
    #[error("layout failed validation: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    InvalidLayout(Vec<Violation>),
    #[error("session already terminated")]
    Terminated,
    #[error("press handler for {expected} used with a {actual} layout")]
    WrongMethod { expected: Method, actual: Method },
    #[error("region {0} is not part of the layout")]
    UnknownRegion(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EngineState {
    layout: Arc<Layout>,
    buffer: String,
    pending: Option<Pending>,
    case_mode: CaseMode,
    press_total: u64,
    correction_total: u64,
    terminated: bool,
}

/// Start a fresh session on a validated layout.
pub fn new_session(layout: impl Into<Arc<Layout>>) -> Result<EngineState, EngineError> {
    EngineState::new(layout)
}

impl EngineState {
    pub fn new(layout: impl Into<Arc<Layout>>) -> Result<EngineState, EngineError> {
        let layout = layout.into();
        let report = validate_layout(&layout);
        if !report.is_ok() {
            return Err(EngineError::InvalidLayout(report.violations));
        }
        Ok(EngineState {
            layout,
            buffer: String::new(),
            pending: None,
            case_mode: CaseMode::Upper,
            press_total: 0,
            correction_total: 0,
            terminated: false,
        })
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn method(&self) -> Method {
        self.layout.method
    }

    /// Committed text. The pending candidate is not part of it.
    pub fn transcript(&self) -> &str {
        &self.buffer
    }

    pub fn pending(&self) -> Option<&Pending> {
        self.pending.as_ref()
    }

    pub fn case_mode(&self) -> CaseMode {
        self.case_mode
    }

    pub fn press_total(&self) -> u64 {
        self.press_total
    }

    pub fn correction_total(&self) -> u64 {
        self.correction_total
    }

    pub fn is_terminated(&self) -> bool {
        self.terminated
    }

    /// The symbol the pending candidate currently stands for, if any.
    pub fn announced_symbol(&self) -> Option<char> {
        let pending = self.pending.as_ref()?;
        let cycle = self.layout.action(pending.region())?.cycle()?;
        let c = cycle[(pending.position() - 1) % cycle.len()];
        Some(self.fold_case(c))
    }

    fn fold_case(&self, c: char) -> char {
        match (self.layout.method, self.case_mode) {
            (Method::Fti, CaseMode::Lower) => c.to_ascii_lowercase(),
            _ => c,
        }
    }

    /// Dispatch on the layout's method.
    pub fn press(&self, region: &Region) -> Result<(EngineState, Vec<FeedbackEvent>), EngineError> {
        let mut next = self.clone();
        let events = next.apply(region)?;
        Ok((next, events))
    }

    pub fn press_single_digit(&self, region: &Region) -> Result<(EngineState, Vec<FeedbackEvent>), EngineError> {
        self.expect_method(Method::SingleDigitFdi)?;
        self.press(region)
    }

    pub fn press_double_digit(&self, region: &Region) -> Result<(EngineState, Vec<FeedbackEvent>), EngineError> {
        self.expect_method(Method::DoubleDigitFdi)?;
        self.press(region)
    }

    pub fn press_fti(&self, region: &Region) -> Result<(EngineState, Vec<FeedbackEvent>), EngineError> {
        self.expect_method(Method::Fti)?;
        self.press(region)
    }

    fn expect_method(&self, expected: Method) -> Result<(), EngineError> {
        if self.layout.method == expected {
            Ok(())
        } else {
            Err(EngineError::WrongMethod {
                expected,
                actual: self.layout.method,
            })
        }
    }

    /// In-place press. On error the state is left untouched.
    pub fn apply(&mut self, region: &Region) -> Result<Vec<FeedbackEvent>, EngineError> {
        if self.terminated {
            return Err(EngineError::Terminated);
        }
        let action = self
            .layout
            .action(region)
            .cloned()
            .ok_or_else(|| EngineError::UnknownRegion(region.to_string()))?;
        self.press_total += 1;
        let events = match self.layout.method {
            Method::SingleDigitFdi => self.single_digit(&action),
            Method::DoubleDigitFdi | Method::Fti => self.multi_tap(region, &action),
        };
        debug_assert!(!events.is_empty());
        Ok(events)
    }

    fn single_digit(&mut self, action: &KeyAction) -> Vec<FeedbackEvent> {
        match action {
            KeyAction::EmitDigit { digit } => {
                let c = crate::layout::digit_char(*digit);
                self.buffer.push(c);
                vec![FeedbackEvent::new(FeedbackKind::Announce, symbol_name(c))]
            }
            KeyAction::Backspace => self.delete_committed(),
            KeyAction::Call | KeyAction::Send => self.terminate(action),
            _ => vec![unassigned()],
        }
    }

    fn multi_tap(&mut self, region: &Region, action: &KeyAction) -> Vec<FeedbackEvent> {
        if let Some(cycle) = action.cycle() {
            let next_position = match &self.pending {
                Some(p) if p.region() == region => p.position() % cycle.len() + 1,
                _ => 1,
            };
            self.pending = Some(match self.layout.method {
                Method::DoubleDigitFdi => Pending::Digit {
                    region: region.clone(),
                    press_count: next_position,
                },
                _ => Pending::Letter {
                    region: region.clone(),
                    tap_index: next_position,
                },
            });
            let c = self.announced_symbol().expect("candidate just set");
            return vec![FeedbackEvent::new(FeedbackKind::Announce, symbol_name(c))];
        }

        match action {
            KeyAction::Enter => match self.announced_symbol() {
                Some(c) => {
                    self.buffer.push(c);
                    self.pending = None;
                    vec![FeedbackEvent::new(
                        FeedbackKind::CommitEcho,
                        format!("committed {}", symbol_name(c)),
                    )]
                }
                None => vec![FeedbackEvent::new(FeedbackKind::ErrorBeep, "nothing to enter")],
            },
            KeyAction::Backspace => {
                if self.pending.take().is_some() {
                    vec![FeedbackEvent::new(FeedbackKind::Announce, "cancelled")]
                } else {
                    self.delete_committed()
                }
            }
            KeyAction::CaseToggle if self.layout.method == Method::Fti => {
                self.case_mode = self.case_mode.toggled();
                self.pending = None;
                let utterance = match self.case_mode {
                    CaseMode::Upper => "uppercase",
                    CaseMode::Lower => "lowercase",
                };
                vec![FeedbackEvent::new(FeedbackKind::ModeChange, utterance)]
            }
            KeyAction::Call | KeyAction::Send => {
                if self.pending.is_some() {
                    vec![FeedbackEvent::new(
                        FeedbackKind::ErrorBeep,
                        "finish the current entry first",
                    )]
                } else {
                    self.terminate(action)
                }
            }
            _ => vec![unassigned()],
        }
    }

    fn delete_committed(&mut self) -> Vec<FeedbackEvent> {
        match self.buffer.pop() {
            Some(c) => {
                self.correction_total += 1;
                vec![FeedbackEvent::new(
                    FeedbackKind::Announce,
                    format!("deleted {}", symbol_name(c)),
                )]
            }
            None => vec![FeedbackEvent::new(FeedbackKind::ErrorBeep, "nothing to delete")],
        }
    }

    fn terminate(&mut self, action: &KeyAction) -> Vec<FeedbackEvent> {
        self.terminated = true;
        let verb = if matches!(action, KeyAction::Call) {
            "calling"
        } else {
            "sending"
        };
        let utterance = if self.buffer.is_empty() {
            verb.to_string()
        } else {
            format!("{verb} {}", self.buffer)
        };
        vec![FeedbackEvent::new(FeedbackKind::Terminal, utterance)]
    }
}

fn unassigned() -> FeedbackEvent {
    FeedbackEvent::new(FeedbackKind::ErrorBeep, "unassigned")
}

/// Spoken name of a symbol: digit words, the letter itself, names for
/// punctuation.
pub fn symbol_name(c: char) -> String {
    const DIGITS: [&str; 10] = [
        "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine",
    ];
    match c {
        '0'..='9' => DIGITS[c as usize - '0' as usize].to_string(),
        ' ' => "space".into(),
        '.' => "period".into(),
        ',' => "comma".into(),
        '?' => "question mark".into(),
        '!' => "exclamation mark".into(),
        '\'' => "apostrophe".into(),
        '-' => "hyphen".into(),
        other => other.to_string(),
    }
}
