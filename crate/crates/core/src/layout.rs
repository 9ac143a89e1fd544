//! Finger-anchored regions and the per-method key bindings attached to them.
//!
//! The three shipped layouts live in `data/layouts/*.json` and are parsed at
//! first use, so the binding tables stay in configuration rather than code.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Number of canonical grip regions.
pub const REGION_COUNT: usize = 11;

/// Layout file format version understood by [`load_layout`].
pub const LAYOUT_FORMAT_VERSION: u32 = 1;

/// One of the canonical positions around the gripping hand.
///
/// The declaration order is the canonical order used for tie-breaking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegionId {
    AboveIndex,
    Index,
    Middle,
    Ring,
    Little,
    BelowLittle,
    Center,
    Thumb,
    AboveThumb,
    BelowThumb,
    BottomCenter,
}

impl RegionId {
    pub const ALL: [RegionId; REGION_COUNT] = [
        RegionId::AboveIndex,
        RegionId::Index,
        RegionId::Middle,
        RegionId::Ring,
        RegionId::Little,
        RegionId::BelowLittle,
        RegionId::Center,
        RegionId::Thumb,
        RegionId::AboveThumb,
        RegionId::BelowThumb,
        RegionId::BottomCenter,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            RegionId::AboveIndex => "AboveIndex",
            RegionId::Index => "Index",
            RegionId::Middle => "Middle",
            RegionId::Ring => "Ring",
            RegionId::Little => "Little",
            RegionId::BelowLittle => "BelowLittle",
            RegionId::Center => "Center",
            RegionId::Thumb => "Thumb",
            RegionId::AboveThumb => "AboveThumb",
            RegionId::BelowThumb => "BelowThumb",
            RegionId::BottomCenter => "BottomCenter",
        }
    }

    pub fn from_name(name: &str) -> Option<RegionId> {
        RegionId::ALL.into_iter().find(|r| r.name() == name)
    }
}

impl fmt::Display for RegionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A pressable position: a canonical region, or an extra anchor declared by
/// a layout file.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Region {
    Canonical(RegionId),
    Synthetic(String),
}

impl Region {
    /// Canonical names map to [`Region::Canonical`]; anything else is taken
    /// as a synthetic anchor name.
    pub fn parse(name: &str) -> Region {
        match RegionId::from_name(name) {
            Some(id) => Region::Canonical(id),
            None => Region::Synthetic(name.to_string()),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Region::Canonical(id) => id.name(),
            Region::Synthetic(name) => name,
        }
    }

    pub fn canonical(&self) -> Option<RegionId> {
        match self {
            Region::Canonical(id) => Some(*id),
            Region::Synthetic(_) => None,
        }
    }
}

impl From<RegionId> for Region {
    fn from(id: RegionId) -> Self {
        Region::Canonical(id)
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for Region {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Region {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let name = String::deserialize(deserializer)?;
        if name.is_empty() {
            return Err(serde::de::Error::custom("empty region name"));
        }
        Ok(Region::parse(&name))
    }
}

/// The three entry methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    SingleDigitFdi,
    DoubleDigitFdi,
    Fti,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::SingleDigitFdi, Method::DoubleDigitFdi, Method::Fti];

    pub fn name(self) -> &'static str {
        match self {
            Method::SingleDigitFdi => "single_digit_fdi",
            Method::DoubleDigitFdi => "double_digit_fdi",
            Method::Fti => "fti",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown method `{s}` (expected single_digit_fdi, double_digit_fdi or fti)"))
    }
}

/// What pressing a region does.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum KeyAction {
    EmitDigit { digit: u8 },
    DigitPair { first: u8, second: u8 },
    LetterGroup { letters: String },
    NumberGroup { digits: String },
    SpecialGroup { symbols: String },
    Backspace,
    Enter,
    Call,
    Send,
    CaseToggle,
    Unassigned,
}

impl KeyAction {
    /// The ordered symbols a multi-tap candidate on this key cycles through.
    /// `None` for keys that are not symbol keys.
    pub fn cycle(&self) -> Option<Vec<char>> {
        match self {
            KeyAction::EmitDigit { digit } => Some(vec![digit_char(*digit)]),
            KeyAction::DigitPair { first, second } => Some(vec![digit_char(*first), digit_char(*second)]),
            KeyAction::LetterGroup { letters } => Some(letters.chars().collect()),
            KeyAction::NumberGroup { digits } => Some(digits.chars().collect()),
            KeyAction::SpecialGroup { symbols } => Some(symbols.chars().collect()),
            _ => None,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            KeyAction::EmitDigit { .. } => "EmitDigit",
            KeyAction::DigitPair { .. } => "DigitPair",
            KeyAction::LetterGroup { .. } => "LetterGroup",
            KeyAction::NumberGroup { .. } => "NumberGroup",
            KeyAction::SpecialGroup { .. } => "SpecialGroup",
            KeyAction::Backspace => "Backspace",
            KeyAction::Enter => "Enter",
            KeyAction::Call => "Call",
            KeyAction::Send => "Send",
            KeyAction::CaseToggle => "CaseToggle",
            KeyAction::Unassigned => "Unassigned",
        }
    }

    pub fn is_terminal(&self) -> bool {
        matches!(self, KeyAction::Call | KeyAction::Send)
    }

    fn allowed_for(&self, method: Method) -> bool {
        use KeyAction::*;
        match method {
            Method::SingleDigitFdi => matches!(self, EmitDigit { .. } | Backspace | Call | Unassigned),
            Method::DoubleDigitFdi => matches!(
                self,
                EmitDigit { .. } | DigitPair { .. } | Enter | Backspace | Call | Unassigned
            ),
            Method::Fti => matches!(
                self,
                LetterGroup { .. }
                    | NumberGroup { .. }
                    | SpecialGroup { .. }
                    | Enter
                    | Backspace
                    | CaseToggle
                    | Send
                    | Call
                    | Unassigned
            ),
        }
    }
}

pub(crate) fn digit_char(d: u8) -> char {
    char::from_digit(u32::from(d), 10).unwrap_or('?')
}

/// An extra anchor placed at an offset from a canonical region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticAnchor {
    pub name: String,
    pub dx: f64,
    pub dy: f64,
    pub relative_to: RegionId,
}

impl Serialize for RegionId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for RegionId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let name = String::deserialize(deserializer)?;
        RegionId::from_name(&name).ok_or_else(|| serde::de::Error::custom(format!("unknown region `{name}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSlot {
    pub anchor: SyntheticAnchor,
    pub action: KeyAction,
}

/// A complete binding of regions to key actions for one entry method.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    pub method: Method,
    pub id: String,
    /// Indexed by [`RegionId::index`].
    pub bindings: [KeyAction; REGION_COUNT],
    /// Extra anchors, in file order.
    pub synthetic: Vec<SyntheticSlot>,
}

impl Layout {
    /// A layout with every canonical region unassigned and no extra anchors.
    pub fn empty(method: Method, id: impl Into<String>) -> Layout {
        Layout {
            method,
            id: id.into(),
            bindings: std::array::from_fn(|_| KeyAction::Unassigned),
            synthetic: Vec::new(),
        }
    }

    pub fn bind(&mut self, region: RegionId, action: KeyAction) -> &mut Self {
        self.bindings[region.index()] = action;
        self
    }

    pub fn binding(&self, region: RegionId) -> &KeyAction {
        &self.bindings[region.index()]
    }

    pub fn action(&self, region: &Region) -> Option<&KeyAction> {
        match region {
            Region::Canonical(id) => Some(self.binding(*id)),
            Region::Synthetic(name) => self
                .synthetic
                .iter()
                .find(|s| &s.anchor.name == name)
                .map(|s| &s.action),
        }
    }

    /// All pressable regions with their actions: canonical order first, then
    /// synthetic anchors in file order.
    pub fn slots(&self) -> impl Iterator<Item = (Region, &KeyAction)> + '_ {
        RegionId::ALL
            .into_iter()
            .map(move |r| (Region::Canonical(r), self.binding(r)))
            .chain(
                self.synthetic
                    .iter()
                    .map(|s| (Region::Synthetic(s.anchor.name.clone()), &s.action)),
            )
    }

    pub fn synthetic_anchors(&self) -> impl Iterator<Item = &SyntheticAnchor> + '_ {
        self.synthetic.iter().map(|s| &s.anchor)
    }

    /// First region (in slot order) bound to an action matching `pred`.
    pub fn find(&self, pred: impl Fn(&KeyAction) -> bool) -> Option<Region> {
        self.slots().find(|(_, a)| pred(a)).map(|(r, _)| r)
    }

    pub fn to_document(&self) -> LayoutDocument {
        LayoutDocument {
            version: LAYOUT_FORMAT_VERSION,
            method: self.method,
            id: self.id.clone(),
            bindings: self
                .slots()
                .map(|(region, action)| BindingDocument {
                    region: region.name().to_string(),
                    action: action.clone(),
                })
                .collect(),
            synthetic_anchors: self.synthetic_anchors().cloned().collect(),
        }
    }

    /// Pretty-printed layout file text.
    pub fn serialize(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.to_document()).expect("layout documents always serialize");
        text.push('\n');
        text
    }
}

/// On-disk layout file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayoutDocument {
    pub version: u32,
    pub method: Method,
    pub id: String,
    pub bindings: Vec<BindingDocument>,
    #[serde(default)]
    pub synthetic_anchors: Vec<SyntheticAnchor>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BindingDocument {
    pub region: String,
    pub action: KeyAction,
}

/// A broken layout rule, naming what is at fault.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Region, action kind or symbol the violation is about.
    pub subject: String,
    pub rule: &'static str,
    pub detail: String,
}

impl Violation {
    fn new(subject: impl Into<String>, rule: &'static str, detail: impl Into<String>) -> Self {
        Violation {
            subject: subject.into(),
            rule,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]: {}", self.subject, self.rule, self.detail)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LayoutError {
    #[error("malformed layout document: {0}")]
    Parse(String),
    #[error("invalid layout: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// Parse and validate a layout file.
pub fn load_layout(document: &str) -> Result<Layout, LayoutError> {
    let doc: LayoutDocument = serde_json::from_str(document).map_err(|e| LayoutError::Parse(e.to_string()))?;
    layout_from_document(doc)
}

pub fn layout_from_document(doc: LayoutDocument) -> Result<Layout, LayoutError> {
    if doc.version != LAYOUT_FORMAT_VERSION {
        return Err(LayoutError::Parse(format!(
            "unsupported layout version {} (expected {LAYOUT_FORMAT_VERSION})",
            doc.version
        )));
    }

    let mut violations = Vec::new();
    let mut canonical: [Option<KeyAction>; REGION_COUNT] = std::array::from_fn(|_| None);
    let mut synthetic_actions: HashMap<String, KeyAction> = HashMap::new();
    let declared: HashSet<&str> = doc.synthetic_anchors.iter().map(|a| a.name.as_str()).collect();

    for binding in &doc.bindings {
        match Region::parse(&binding.region) {
            Region::Canonical(id) => {
                if canonical[id.index()].is_some() {
                    violations.push(Violation::new(
                        id.name(),
                        "binding_coverage",
                        "region bound more than once",
                    ));
                } else {
                    canonical[id.index()] = Some(binding.action.clone());
                }
            }
            Region::Synthetic(name) => {
                if !declared.contains(name.as_str()) {
                    violations.push(Violation::new(
                        &name,
                        "binding_coverage",
                        "binding for a region that is neither canonical nor a declared synthetic anchor",
                    ));
                } else if synthetic_actions.insert(name.clone(), binding.action.clone()).is_some() {
                    violations.push(Violation::new(&name, "binding_coverage", "region bound more than once"));
                }
            }
        }
    }

    let mut layout = Layout::empty(doc.method, doc.id);
    for id in RegionId::ALL {
        match canonical[id.index()].take() {
            Some(action) => layout.bindings[id.index()] = action,
            None => violations.push(Violation::new(
                id.name(),
                "binding_coverage",
                "region has no binding (use an explicit unassigned action)",
            )),
        }
    }
    for anchor in doc.synthetic_anchors {
        let action = match synthetic_actions.remove(&anchor.name) {
            Some(action) => action,
            None => {
                violations.push(Violation::new(
                    &anchor.name,
                    "binding_coverage",
                    "synthetic anchor has no binding",
                ));
                KeyAction::Unassigned
            }
        };
        layout.synthetic.push(SyntheticSlot { anchor, action });
    }

    violations.extend(validate_layout(&layout).violations);
    if violations.is_empty() {
        Ok(layout)
    } else {
        Err(LayoutError::Invalid(violations))
    }
}

/// Check every layout invariant; an empty report means the layout is usable.
pub fn validate_layout(layout: &Layout) -> ValidationReport {
    let mut v = Vec::new();

    if layout.id.trim().is_empty() {
        v.push(Violation::new("id", "layout_id", "layout id must not be empty"));
    }

    let mut names = HashSet::new();
    for anchor in layout.synthetic_anchors() {
        if anchor.name.is_empty() || RegionId::from_name(&anchor.name).is_some() {
            v.push(Violation::new(
                &anchor.name,
                "synthetic_anchor",
                "synthetic anchor name must be non-empty and distinct from canonical regions",
            ));
        }
        if !names.insert(anchor.name.as_str()) {
            v.push(Violation::new(
                &anchor.name,
                "synthetic_anchor",
                "synthetic anchor declared twice",
            ));
        }
        if !anchor.dx.is_finite() || !anchor.dy.is_finite() {
            v.push(Violation::new(
                &anchor.name,
                "synthetic_anchor",
                "offset must be finite",
            ));
        }
    }

    for (region, action) in layout.slots() {
        check_payload(&region, action, &mut v);
        if !action.allowed_for(layout.method) {
            v.push(Violation::new(
                region.name(),
                "action_method",
                format!("{} is not usable with {}", action.kind_name(), layout.method),
            ));
        }
    }

    let count = |kind: &str| layout.slots().filter(|(_, a)| a.kind_name() == kind).count();
    let require_one = |kind: &'static str, v: &mut Vec<Violation>| {
        let n = count(kind);
        if n != 1 {
            v.push(Violation::new(
                kind,
                "unique_action",
                format!("expected exactly one {kind} binding, found {n}"),
            ));
        }
    };

    match layout.method {
        Method::SingleDigitFdi => {
            require_one("Backspace", &mut v);
            require_one("Call", &mut v);
            check_digit_coverage(layout, &mut v);
        }
        Method::DoubleDigitFdi => {
            require_one("Enter", &mut v);
            require_one("Backspace", &mut v);
            require_one("Call", &mut v);
            check_digit_coverage(layout, &mut v);
        }
        Method::Fti => {
            require_one("Enter", &mut v);
            require_one("Backspace", &mut v);
            require_one("CaseToggle", &mut v);
            check_letter_partition(layout, &mut v);
        }
    }

    ValidationReport { violations: v }
}

fn check_payload(region: &Region, action: &KeyAction, v: &mut Vec<Violation>) {
    let name = region.name();
    match action {
        KeyAction::EmitDigit { digit } if *digit > 9 => {
            v.push(Violation::new(
                name,
                "action_payload",
                format!("digit {digit} out of range 0-9"),
            ));
        }
        KeyAction::DigitPair { first, second } => {
            if *first > 9 || *second > 9 {
                v.push(Violation::new(name, "action_payload", "pair digit out of range 0-9"));
            }
            if first == second {
                v.push(Violation::new(
                    name,
                    "action_payload",
                    format!("digit pair repeats {first}"),
                ));
            }
        }
        KeyAction::LetterGroup { letters } => {
            let n = letters.chars().count();
            if !(1..=7).contains(&n) {
                v.push(Violation::new(
                    name,
                    "action_payload",
                    format!("letter group must hold 1-7 letters, has {n}"),
                ));
            }
            if let Some(c) = letters.chars().find(|c| !c.is_ascii_uppercase()) {
                v.push(Violation::new(
                    name,
                    "action_payload",
                    format!("'{c}' is not an uppercase Latin letter"),
                ));
            }
            check_distinct(name, letters, v);
        }
        KeyAction::NumberGroup { digits } => {
            if digits.is_empty() {
                v.push(Violation::new(name, "action_payload", "number group is empty"));
            }
            if let Some(c) = digits.chars().find(|c| !c.is_ascii_digit()) {
                v.push(Violation::new(name, "action_payload", format!("'{c}' is not a digit")));
            }
            check_distinct(name, digits, v);
        }
        KeyAction::SpecialGroup { symbols } => {
            if symbols.is_empty() {
                v.push(Violation::new(name, "action_payload", "special group is empty"));
            }
            if let Some(c) = symbols.chars().find(|c| c.is_ascii_alphanumeric() || c.is_control()) {
                v.push(Violation::new(
                    name,
                    "action_payload",
                    format!("'{c}' is not a special symbol"),
                ));
            }
            check_distinct(name, symbols, v);
        }
        _ => {}
    }
}

fn check_distinct(name: &str, symbols: &str, v: &mut Vec<Violation>) {
    let mut seen = HashSet::new();
    for c in symbols.chars() {
        if !seen.insert(c) {
            v.push(Violation::new(
                name,
                "action_payload",
                format!("'{c}' repeated within group"),
            ));
        }
    }
}

fn check_digit_coverage(layout: &Layout, v: &mut Vec<Violation>) {
    let mut seen: BTreeMap<u8, Vec<String>> = BTreeMap::new();
    for (region, action) in layout.slots() {
        let digits: Vec<u8> = match action {
            KeyAction::EmitDigit { digit } => vec![*digit],
            KeyAction::DigitPair { first, second } => vec![*first, *second],
            _ => continue,
        };
        for d in digits {
            seen.entry(d).or_default().push(region.name().to_string());
        }
    }
    for d in 0..=9u8 {
        match seen.get(&d).map(Vec::as_slice) {
            None => v.push(Violation::new(
                d.to_string(),
                "digit_coverage",
                format!("digit {d} is not bound"),
            )),
            Some([_]) => {}
            Some(regions) => v.push(Violation::new(
                regions[1].clone(),
                "digit_coverage",
                format!("digit {d} bound {} times ({})", regions.len(), regions.join(", ")),
            )),
        }
    }
}

fn check_letter_partition(layout: &Layout, v: &mut Vec<Violation>) {
    let mut owner: BTreeMap<char, String> = BTreeMap::new();
    for (region, action) in layout.slots() {
        if let KeyAction::LetterGroup { letters } = action {
            let mut local = HashSet::new();
            for c in letters.chars().filter(|c| c.is_ascii_uppercase()) {
                if !local.insert(c) {
                    continue;
                }
                if let Some(first) = owner.get(&c) {
                    v.push(Violation::new(
                        region.name(),
                        "letter_partition",
                        format!("letter '{c}' already bound at {first}"),
                    ));
                } else {
                    owner.insert(c, region.name().to_string());
                }
            }
        }
    }
    for c in 'A'..='Z' {
        if !owner.contains_key(&c) {
            v.push(Violation::new(
                c.to_string(),
                "letter_partition",
                format!("letter '{c}' is not bound"),
            ));
        }
    }
}

const SINGLE_DIGIT_DOC: &str = include_str!("../data/layouts/single_digit_fdi.json");
const DOUBLE_DIGIT_DOC: &str = include_str!("../data/layouts/double_digit_fdi.json");
const FTI_DOC: &str = include_str!("../data/layouts/fti.json");

/// The shipped default layout for a method.
pub fn builtin_layout(method: Method) -> Layout {
    let doc = match method {
        Method::SingleDigitFdi => SINGLE_DIGIT_DOC,
        Method::DoubleDigitFdi => DOUBLE_DIGIT_DOC,
        Method::Fti => FTI_DOC,
    };
    match load_layout(doc) {
        Ok(layout) => layout,
        Err(e) => panic!("bundled {method} layout is broken: {e}"),
    }
}

pub fn builtin_layouts() -> Vec<Layout> {
    Method::ALL.into_iter().map(builtin_layout).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn digit(d: u8) -> KeyAction {
        KeyAction::EmitDigit { digit: d }
    }

    #[test]
    fn builtin_single_digit_matches_table() {
        let l = builtin_layout(Method::SingleDigitFdi);
        assert_eq!(l.binding(RegionId::Index), &digit(4));
        assert_eq!(l.binding(RegionId::Middle), &digit(5));
        assert_eq!(l.binding(RegionId::Thumb), &digit(2));
        assert_eq!(l.binding(RegionId::AboveIndex), &KeyAction::Backspace);
        assert_eq!(l.binding(RegionId::BottomCenter), &digit(0));
        assert_eq!(l.action(&Region::parse("BottomCenter2")), Some(&KeyAction::Call));
    }

    #[test]
    fn builtin_double_digit_matches_table() {
        let l = builtin_layout(Method::DoubleDigitFdi);
        assert_eq!(
            l.binding(RegionId::Index),
            &KeyAction::DigitPair { first: 1, second: 2 }
        );
        assert_eq!(
            l.binding(RegionId::Middle),
            &KeyAction::DigitPair { first: 3, second: 4 }
        );
        assert_eq!(l.binding(RegionId::Thumb), &KeyAction::Enter);
        assert_eq!(l.binding(RegionId::BelowThumb), &KeyAction::Unassigned);
    }

    #[test]
    fn builtin_fti_matches_table() {
        let l = builtin_layout(Method::Fti);
        let group = |s: &str| KeyAction::LetterGroup { letters: s.into() };
        assert_eq!(l.binding(RegionId::Index), &group("ABCD"));
        assert_eq!(l.binding(RegionId::AboveIndex), &KeyAction::Backspace);
        assert_eq!(l.binding(RegionId::Thumb), &KeyAction::Enter);
        assert_eq!(l.binding(RegionId::AboveThumb), &group("QRST"));
        assert_eq!(l.binding(RegionId::Center), &KeyAction::CaseToggle);
    }

    #[test]
    fn builtins_validate() {
        for l in builtin_layouts() {
            let report = validate_layout(&l);
            assert!(report.is_ok(), "{}: {:?}", l.id, report.violations);
        }
    }

    #[test]
    fn fti_letter_groups_partition_alphabet() {
        let l = builtin_layout(Method::Fti);
        let mut all: Vec<char> = l
            .slots()
            .filter_map(|(_, a)| match a {
                KeyAction::LetterGroup { letters } => Some(letters.chars().collect::<Vec<_>>()),
                _ => None,
            })
            .flatten()
            .collect();
        assert_eq!(all.len(), 26);
        all.sort_unstable();
        assert_eq!(all, ('A'..='Z').collect::<Vec<_>>());
    }

    #[test]
    fn serialized_builtin_round_trips() {
        for l in builtin_layouts() {
            assert_eq!(load_layout(&l.serialize()).unwrap(), l);
        }
    }

    #[test]
    fn missing_call_is_named() {
        let mut l = builtin_layout(Method::SingleDigitFdi);
        l.synthetic[0].action = KeyAction::Unassigned;
        let err = load_layout(&l.serialize()).unwrap_err();
        match err {
            LayoutError::Invalid(v) => assert!(v.iter().any(|x| x.subject == "Call"), "{v:?}"),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn dropped_synthetic_binding_is_reported() {
        let l = builtin_layout(Method::SingleDigitFdi);
        let mut doc = l.to_document();
        doc.bindings.retain(|b| b.region != "BottomCenter2");
        let text = serde_json::to_string(&doc).unwrap();
        let err = load_layout(&text).unwrap_err().to_string();
        assert!(err.contains("Call"), "{err}");
        assert!(err.contains("BottomCenter2"), "{err}");
    }

    #[test]
    fn duplicate_letter_is_named() {
        let mut l = builtin_layout(Method::Fti);
        l.bind(
            RegionId::BelowThumb,
            KeyAction::LetterGroup {
                letters: "MNOPQ".into(),
            },
        );
        let err = load_layout(&l.serialize()).unwrap_err().to_string();
        assert!(err.contains("'Q'"), "{err}");
    }

    #[test]
    fn digit_bound_twice_is_one_violation() {
        let mut l = builtin_layout(Method::SingleDigitFdi);
        l.synthetic.push(SyntheticSlot {
            anchor: SyntheticAnchor {
                name: "Extra".into(),
                dx: 0.0,
                dy: -0.1,
                relative_to: RegionId::Center,
            },
            action: digit(7),
        });
        let report = validate_layout(&l);
        assert_eq!(report.violations.len(), 1, "{:?}", report.violations);
        assert!(report.violations[0].detail.contains("digit 7"));
    }

    #[test]
    fn double_digit_without_enter_is_one_violation() {
        let mut l = builtin_layout(Method::DoubleDigitFdi);
        l.bind(RegionId::Thumb, KeyAction::Unassigned);
        let report = validate_layout(&l);
        assert_eq!(report.violations.len(), 1, "{:?}", report.violations);
        assert_eq!(report.violations[0].subject, "Enter");
    }

    #[test]
    fn missing_region_and_unknown_method() {
        let l = builtin_layout(Method::DoubleDigitFdi);
        let mut doc = l.to_document();
        doc.bindings.retain(|b| b.region != "Ring");
        let err = load_layout(&serde_json::to_string(&doc).unwrap()).unwrap_err();
        assert!(err.to_string().contains("Ring"));

        let text = l.serialize().replace("double_digit_fdi", "braille");
        assert!(matches!(load_layout(&text), Err(LayoutError::Parse(_))));

        let text = l.serialize().replace("\"version\": 1", "\"version\": 2");
        assert!(matches!(load_layout(&text), Err(LayoutError::Parse(_))));
    }

    #[test]
    fn malformed_payloads() {
        let mut l = builtin_layout(Method::Fti);
        l.bind(
            RegionId::Index,
            KeyAction::LetterGroup {
                letters: "ABCDabcd".into(),
            },
        );
        let report = validate_layout(&l);
        assert!(report.violations.iter().any(|v| v.rule == "action_payload"));

        let mut l = builtin_layout(Method::DoubleDigitFdi);
        l.bind(RegionId::Index, KeyAction::DigitPair { first: 1, second: 1 });
        assert!(validate_layout(&l)
            .violations
            .iter()
            .any(|v| v.rule == "action_payload"));

        let mut l = builtin_layout(Method::SingleDigitFdi);
        l.bind(RegionId::Center, KeyAction::CaseToggle);
        assert!(validate_layout(&l).violations.iter().any(|v| v.rule == "action_method"));
    }

    #[test]
    fn region_names_round_trip() {
        for r in RegionId::ALL {
            assert_eq!(RegionId::from_name(r.name()), Some(r));
            assert_eq!(Region::parse(r.name()), Region::Canonical(r));
        }
        assert_eq!(Region::parse("Extra"), Region::Synthetic("Extra".into()));
    }
}
