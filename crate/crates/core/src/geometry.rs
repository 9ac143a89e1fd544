//! Anchor derivation from calibrated fingertips and nearest-anchor region
//! resolution.
//!
//! Coordinates are normalized to the unit square, origin top-left, with the
//! four gripping fingertips along the left edge and the thumb on the right.

use serde::{Deserialize, Serialize};

use crate::layout::{Layout, Region, RegionId, SyntheticAnchor};

pub const DEFAULT_EDGE_OFFSET: f64 = 0.05;
pub const DEFAULT_ACTIVATION_RADIUS: f64 = 0.18;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Point {
        Point { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn in_unit_square(self) -> bool {
        (0.0..=1.0).contains(&self.x) && (0.0..=1.0).contains(&self.y)
    }

    fn clamped(self) -> Point {
        Point::new(self.x.clamp(0.0, 1.0), self.y.clamp(0.0, 1.0))
    }

    fn offset(self, dx: f64, dy: f64) -> Point {
        Point::new(self.x + dx, self.y + dy)
    }
}

/// Fingertip positions in the order index, middle, ring, little, thumb.
pub type Fingertips = [Point; 5];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryParams {
    pub edge_offset: f64,
    pub radius: f64,
}

impl Default for GeometryParams {
    fn default() -> Self {
        GeometryParams {
            edge_offset: DEFAULT_EDGE_OFFSET,
            radius: DEFAULT_ACTIVATION_RADIUS,
        }
    }
}

/// Calibration input file: five fingertips plus geometry parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationFile {
    pub fingertips: Fingertips,
    #[serde(default = "default_edge_offset")]
    pub edge_offset: f64,
    #[serde(default = "default_radius")]
    pub radius: f64,
}

fn default_edge_offset() -> f64 {
    DEFAULT_EDGE_OFFSET
}

fn default_radius() -> f64 {
    DEFAULT_ACTIVATION_RADIUS
}

impl CalibrationFile {
    pub fn params(&self) -> GeometryParams {
        GeometryParams {
            edge_offset: self.edge_offset,
            radius: self.radius,
        }
    }

    pub fn derive(&self, synthetic: &[SyntheticAnchor]) -> Result<CalibrationProfile, GeometryError> {
        derive_anchors(&self.fingertips, &self.params(), synthetic)
    }
}

/// A reference grip: fingers evenly spaced on the left edge, thumb opposite.
pub fn reference_fingertips() -> Fingertips {
    [
        Point::new(0.07, 0.20),
        Point::new(0.07, 0.35),
        Point::new(0.07, 0.50),
        Point::new(0.07, 0.65),
        Point::new(0.93, 0.45),
    ]
}

pub fn reference_calibration() -> CalibrationFile {
    CalibrationFile {
        fingertips: reference_fingertips(),
        edge_offset: DEFAULT_EDGE_OFFSET,
        radius: DEFAULT_ACTIVATION_RADIUS,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Anchor {
    pub region: Region,
    #[serde(flatten)]
    pub point: Point,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationProfile {
    pub fingertips: Fingertips,
    pub edge_offset: f64,
    pub activation_radius: f64,
    /// Canonical regions in canonical order, then synthetic anchors in
    /// layout file order.
    pub anchors: Vec<Anchor>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("point ({x}, {y}) lies outside the unit square")]
    OutOfRange { x: f64, y: f64 },
    #[error("non-monotone fingertips: {upper} fingertip lies below {lower}")]
    NonMonotone { upper: &'static str, lower: &'static str },
    #[error("coincident fingertips: mean fingertip spacing is zero")]
    CoincidentFingertips,
    #[error("anchors {0} and {1} coincide")]
    CoincidentAnchors(String, String),
    #[error("invalid geometry parameter: {0}")]
    InvalidParams(String),
    #[error("profile has no anchor for {0}")]
    MissingAnchor(String),
}

const FINGER_NAMES: [&str; 4] = ["index", "middle", "ring", "little"];

/// Place the canonical anchors (and any synthetic ones) for a grip.
pub fn derive_anchors(
    fingertips: &Fingertips,
    params: &GeometryParams,
    synthetic: &[SyntheticAnchor],
) -> Result<CalibrationProfile, GeometryError> {
    if !(params.edge_offset.is_finite() && params.edge_offset >= 0.0) {
        return Err(GeometryError::InvalidParams(format!(
            "edge_offset must be >= 0, got {}",
            params.edge_offset
        )));
    }
    if !(params.radius.is_finite() && params.radius > 0.0) {
        return Err(GeometryError::InvalidParams(format!(
            "radius must be > 0, got {}",
            params.radius
        )));
    }
    for p in fingertips {
        if !p.in_unit_square() {
            return Err(GeometryError::OutOfRange { x: p.x, y: p.y });
        }
    }
    for i in 0..3 {
        if fingertips[i + 1].y < fingertips[i].y {
            return Err(GeometryError::NonMonotone {
                upper: FINGER_NAMES[i + 1],
                lower: FINGER_NAMES[i],
            });
        }
    }
    let spacing = (fingertips[3].y - fingertips[0].y) / 3.0;
    if spacing <= 0.0 {
        return Err(GeometryError::CoincidentFingertips);
    }

    let inward = params.edge_offset;
    let [index, middle, ring, little, thumb] = *fingertips;
    let index_a = index.offset(inward, 0.0);
    let little_a = little.offset(inward, 0.0);
    let thumb_a = thumb.offset(-inward, 0.0);

    let place = |region: RegionId| -> Point {
        match region {
            RegionId::AboveIndex => index_a.offset(0.0, -spacing),
            RegionId::Index => index_a,
            RegionId::Middle => middle.offset(inward, 0.0),
            RegionId::Ring => ring.offset(inward, 0.0),
            RegionId::Little => little_a,
            RegionId::BelowLittle => little_a.offset(0.0, spacing),
            RegionId::Center => Point::new(0.5, 0.5),
            RegionId::Thumb => thumb_a,
            RegionId::AboveThumb => thumb_a.offset(0.0, -spacing),
            RegionId::BelowThumb => thumb_a.offset(0.0, spacing),
            RegionId::BottomCenter => Point::new(0.5, 0.95),
        }
        .clamped()
    };

    let mut profile = CalibrationProfile {
        fingertips: *fingertips,
        edge_offset: params.edge_offset,
        activation_radius: params.radius,
        anchors: RegionId::ALL
            .into_iter()
            .map(|r| Anchor {
                region: Region::Canonical(r),
                point: place(r),
            })
            .collect(),
    };
    profile.apply_synthetic(synthetic)?;
    Ok(profile)
}

impl CalibrationProfile {
    /// The profile derived from [`reference_calibration`] with no extra anchors.
    pub fn reference() -> CalibrationProfile {
        reference_calibration()
            .derive(&[])
            .expect("reference calibration is valid")
    }

    pub fn anchor(&self, region: &Region) -> Option<Point> {
        self.anchors.iter().find(|a| &a.region == region).map(|a| a.point)
    }

    /// Replace the synthetic anchors with those declared by `layout`.
    pub fn for_layout(&self, layout: &Layout) -> Result<CalibrationProfile, GeometryError> {
        let anchors: Vec<SyntheticAnchor> = layout.synthetic_anchors().cloned().collect();
        let mut profile = self.clone();
        profile.apply_synthetic(&anchors)?;
        Ok(profile)
    }

    fn apply_synthetic(&mut self, synthetic: &[SyntheticAnchor]) -> Result<(), GeometryError> {
        self.anchors.retain(|a| matches!(a.region, Region::Canonical(_)));
        for r in RegionId::ALL {
            if self.anchor(&Region::Canonical(r)).is_none() {
                return Err(GeometryError::MissingAnchor(r.name().to_string()));
            }
        }
        for s in synthetic {
            let base = self
                .anchor(&Region::Canonical(s.relative_to))
                .expect("canonical anchors checked above");
            self.anchors.push(Anchor {
                region: Region::Synthetic(s.name.clone()),
                point: base.offset(s.dx, s.dy).clamped(),
            });
        }
        self.check_distinct()
    }

    fn check_distinct(&self) -> Result<(), GeometryError> {
        for (i, a) in self.anchors.iter().enumerate() {
            for b in &self.anchors[i + 1..] {
                if a.point == b.point {
                    return Err(GeometryError::CoincidentAnchors(
                        a.region.to_string(),
                        b.region.to_string(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Smallest distance between any two anchors.
    pub fn min_anchor_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for (i, a) in self.anchors.iter().enumerate() {
            for b in &self.anchors[i + 1..] {
                best = best.min(a.point.distance(b.point));
            }
        }
        best
    }

    /// Sanity checks for profiles read from disk.
    pub fn validate(&self) -> Result<(), GeometryError> {
        if !(self.activation_radius.is_finite() && self.activation_radius > 0.0) {
            return Err(GeometryError::InvalidParams(format!(
                "activation_radius must be > 0, got {}",
                self.activation_radius
            )));
        }
        for a in &self.anchors {
            if !a.point.in_unit_square() {
                return Err(GeometryError::OutOfRange {
                    x: a.point.x,
                    y: a.point.y,
                });
            }
        }
        self.check_distinct()
    }
}

/// Nearest anchor within the activation radius. Exact ties go to the anchor
/// that comes first in the profile (canonical order, then synthetic order).
pub fn resolve_region(p: Point, profile: &CalibrationProfile) -> Option<Region> {
    let mut best: Option<(&Anchor, f64)> = None;
    for anchor in &profile.anchors {
        let d = p.distance(anchor.point);
        if best.is_none_or(|(_, bd)| d < bd) {
            best = Some((anchor, d));
        }
    }
    best.filter(|(_, d)| *d <= profile.activation_radius)
        .map(|(a, _)| a.region.clone())
}
