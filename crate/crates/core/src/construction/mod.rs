//! Exact integer-grid unit-disk representations built from crowd gadgets.
//!
//! All lengths are integers in units of 10⁻⁴ disk radius. Two disks intersect
//! iff the squared distance of their centers is at most `(2 * 10⁴)²`
//! (closed disks, tangency counts).

mod audit;
mod build;
mod document;
mod layout;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use audit::{audit_constants, AuditReport, DistanceClass, Relation};
pub use build::{apply_clause_shifts, build_representation, crowd_offsets};
pub use document::{parse_representation, serialize_representation, DOCUMENT_VERSION};
pub use layout::{
    chain_spacing_violations, placements, track_layout, Axis, Crossing, Placement, PlacementRole,
    SpacingViolation, TrackLayout,
};

use crate::formula::FormulaError;

/// Grid units per disk radius.
pub const UNITS_PER_RADIUS: i64 = 10_000;
/// Squared center distance at which two unit disks touch.
pub const TOUCH_DIST_SQ: i128 = (2 * UNITS_PER_RADIUS as i128) * (2 * UNITS_PER_RADIUS as i128);
/// Largest absolute coordinate accepted anywhere in the pipeline.
pub const MAX_COORD: i64 = 2_000_000_000;

pub const DEFAULT_D1: i64 = 56_000;
pub const DEFAULT_D2: i64 = 72_000;
pub const DEFAULT_EPS: i64 = 5;
pub const DEFAULT_DELTA_H: i64 = 120;
pub const DEFAULT_DELTA_V: i64 = 250;
/// Printed clause shift, used in both directions by [`ShiftMode::PaperLiteral`].
pub const LITERAL_SHIFT: i64 = 200;

/// Offsets of the three horizontal crowds of a Q1 gadget.
pub const Q1_LOW: i64 = 9_000;
pub const Q1_MID: i64 = 28_000;
pub const Q1_HIGH: i64 = 47_000;
/// Offsets of the vertical atoms of Q2 / Q3 gadgets.
pub const Q2_LOW: i64 = 18_000;
pub const Q3_LOW: i64 = 17_000;
pub const Q23_MID: i64 = 36_000;
pub const Q23_HIGH: i64 = 54_000;

/// Largest crowd size accepted, keeping member indices in `u32`.
pub const MAX_CROWD: u64 = 50_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("formula is not monotone XOR(3): variables {0:?} occur more than three times")]
    NotXor3(Vec<u32>),
    #[error("clause ({0}, {1}) has no crossing in a representation over {2} variables")]
    MissingCrossing(u32, u32, usize),
    #[error("crossing of tracks {0} and {1} is already modified")]
    DuplicateModification(SetId, SetId),
    #[error("document version {0} is not supported (expected {DOCUMENT_VERSION})")]
    VersionMismatch(u32),
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("document violates an invariant: {0}")]
    Invariant(String),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}

/// Placement of the auxiliary point `r` on the vertical halfline of `T(i,0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AuxMode {
    /// `(2i·d1, (2i−1)·d2)`: one `d2` step above the bend.
    Corrected,
    /// `(2i·d1, 2i·d2)` as printed.
    PaperLiteral,
}

/// Offsets used for the two disks moved at each clause crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShiftMode {
    /// Use `delta_h` / `delta_v` from the parameters.
    Corrected,
    /// 0.02 in both directions as printed.
    PaperLiteral,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConstructionParams {
    /// Number of variables.
    pub n: usize,
    /// Small crowd size.
    pub a: u64,
    /// Large crowd size.
    pub b: u64,
    /// Horizontal track spacing.
    pub d1: i64,
    /// Vertical track spacing.
    pub d2: i64,
    /// Crowd half-spread.
    pub eps: i64,
    /// Upward shift of the horizontal clause disk.
    pub delta_h: i64,
    /// Rightward shift of the vertical clause disk.
    pub delta_v: i64,
    pub aux_mode: AuxMode,
    pub shift_mode: ShiftMode,
}

impl ConstructionParams {
    pub fn new(n: usize, a: u64, b: u64) -> Self {
        ConstructionParams {
            n,
            a,
            b,
            d1: DEFAULT_D1,
            d2: DEFAULT_D2,
            eps: DEFAULT_EPS,
            delta_h: DEFAULT_DELTA_H,
            delta_v: DEFAULT_DELTA_V,
            aux_mode: AuxMode::Corrected,
            shift_mode: ShiftMode::Corrected,
        }
    }

    /// `a = n³`, `b = n⁶`.
    pub fn cubic_sized(n: usize) -> Self {
        let n3 = (n as u64).pow(3);
        Self::new(n, n3, n3 * n3)
    }

    pub fn with_modes(mut self, aux: AuxMode, shift: ShiftMode) -> Self {
        self.aux_mode = aux;
        self.shift_mode = shift;
        self
    }

    /// `(upward, rightward)` clause shifts in effect.
    pub fn shifts(&self) -> (i64, i64) {
        match self.shift_mode {
            ShiftMode::Corrected => (self.delta_h, self.delta_v),
            ShiftMode::PaperLiteral => (LITERAL_SHIFT, LITERAL_SHIFT),
        }
    }

    /// Size of the middle Q1 crowd.
    pub fn mid_crowd(&self) -> u64 {
        2 * self.b - 2 * self.a + 2
    }

    /// Disks per gadget.
    pub fn gadget_size(&self) -> u64 {
        2 * self.b + 2
    }

    /// Disks per set `S(i,j)`.
    pub fn set_size(&self) -> u64 {
        4 * (self.n as u64 + 1) * (self.b + 1)
    }

    pub fn total_disks(&self) -> u64 {
        2 * self.n as u64 * self.set_size()
    }

    pub fn validate(&self) -> Result<(), ConstructionError> {
        let bad = |msg: String| Err(ConstructionError::InvalidParams(msg));
        if self.n < 1 {
            return bad("n must be at least 1".into());
        }
        if self.a < 1 {
            return bad("a must be at least 1".into());
        }
        if self.b < self.a {
            return bad(format!("b = {} must be at least a = {}", self.b, self.a));
        }
        if self.mid_crowd() > MAX_CROWD {
            return bad(format!("crowd sizes above {MAX_CROWD} are not supported"));
        }
        if self.d1 <= 0 || self.d2 <= 0 {
            return bad("track spacings must be positive".into());
        }
        if self.eps < 0 || self.delta_h < 0 || self.delta_v < 0 {
            return bad("eps and shifts must be non-negative".into());
        }
        let span = |d: i64| (2 * self.n as i128 + 2) * d as i128 + 10 * UNITS_PER_RADIUS as i128;
        if span(self.d1).max(span(self.d2)) > MAX_COORD as i128 {
            return bad("coordinates would exceed the overflow guard".into());
        }
        Ok(())
    }
}

/// Point on the integer grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ScaledPoint {
    pub x: i64,
    pub y: i64,
}

impl ScaledPoint {
    pub const fn new(x: i64, y: i64) -> Self {
        ScaledPoint { x, y }
    }

    pub fn offset(self, dx: i64, dy: i64) -> Self {
        ScaledPoint::new(self.x + dx, self.y + dy)
    }

    pub fn dist_sq(self, other: ScaledPoint) -> i128 {
        let dx = (self.x - other.x) as i128;
        let dy = (self.y - other.y) as i128;
        dx * dx + dy * dy
    }

    /// Closed unit disks centered here and at `other` intersect.
    pub fn touches(self, other: ScaledPoint) -> bool {
        self.dist_sq(other) <= TOUCH_DIST_SQ
    }
}

/// Identifier of the track `T(i,j)` and of the disk set `S(i,j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SetId {
    pub i: u32,
    pub j: u8,
}

impl SetId {
    pub const fn new(i: u32, j: u8) -> Self {
        SetId { i, j }
    }

    /// Dense index `2(i−1)+j`.
    pub fn index(self) -> usize {
        2 * (self.i as usize - 1) + self.j as usize
    }

    pub fn from_index(s: usize) -> Self {
        SetId::new(s as u32 / 2 + 1, (s % 2) as u8)
    }

    pub fn all(n: usize) -> impl Iterator<Item = SetId> {
        (0..2 * n).map(SetId::from_index)
    }
}

impl std::fmt::Display for SetId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GadgetKind {
    Q1,
    Q2,
    Q3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Part {
    CrowdLow,
    CrowdMid,
    CrowdHigh,
    SingleOrigin,
    SingleMid,
    ShiftedH,
    ShiftedV,
}

impl Part {
    pub fn is_crowd(self) -> bool {
        matches!(self, Part::CrowdLow | Part::CrowdMid | Part::CrowdHigh)
    }

    pub fn name(self) -> &'static str {
        match self {
            Part::CrowdLow => "crowd-low",
            Part::CrowdMid => "crowd-mid",
            Part::CrowdHigh => "crowd-high",
            Part::SingleOrigin => "single-origin",
            Part::SingleMid => "single-mid",
            Part::ShiftedH => "shifted-h",
            Part::ShiftedV => "shifted-v",
        }
    }
}

/// Label of a disk; ordering is the canonical disk order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DiskLabel {
    pub set: SetId,
    /// Position of the owning gadget along its track.
    pub ordinal: u32,
    pub part: Part,
    pub member: u32,
    pub kind: GadgetKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disk {
    pub label: DiskLabel,
    pub center: ScaledPoint,
}

/// A unit-disk representation together with the parameters that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    pub params: ConstructionParams,
    /// Sorted by label.
    pub disks: Vec<Disk>,
    /// Clauses whose shifts have been applied, if any.
    pub formula: Option<crate::formula::Formula>,
}

impl Representation {
    pub fn len(&self) -> usize {
        self.disks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.disks.is_empty()
    }

    pub fn labels(&self) -> Vec<DiskLabel> {
        self.disks.iter().map(|d| d.label).collect()
    }

    pub fn centers(&self) -> Vec<ScaledPoint> {
        self.disks.iter().map(|d| d.center).collect()
    }

    pub fn position_of(&self, label: &DiskLabel) -> Option<usize> {
        self.disks.binary_search_by(|d| d.label.cmp(label)).ok()
    }
}

/// Formats a grid length as a decimal number of radii.
pub fn fmt_len(units: i64) -> String {
    let sign = if units < 0 { "-" } else { "" };
    let u = units.unsigned_abs();
    let scale = UNITS_PER_RADIUS as u64;
    format!("{sign}{}.{:04}", u / scale, u % scale)
}

/// Formats a squared grid length as a decimal number of squared radii.
pub fn fmt_sq(units_sq: i128) -> String {
    let sign = if units_sq < 0 { "-" } else { "" };
    let u = units_sq.unsigned_abs();
    let scale = (UNITS_PER_RADIUS as u128).pow(2);
    format!("{sign}{}.{:08}", u / scale, u % scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn touching_is_closed() {
        let o = ScaledPoint::new(0, 0);
        assert!(o.touches(ScaledPoint::new(20_000, 0)));
        assert!(!o.touches(ScaledPoint::new(20_001, 0)));
        assert!(o.touches(ScaledPoint::new(12_000, 16_000)));
    }

    #[test]
    fn distances_do_not_overflow_at_the_guard() {
        let p = ScaledPoint::new(-MAX_COORD, -MAX_COORD);
        let q = ScaledPoint::new(MAX_COORD, MAX_COORD);
        assert_eq!(p.dist_sq(q), 2 * (4_000_000_000i128).pow(2));
    }

    #[test]
    fn param_validation() {
        assert!(ConstructionParams::new(2, 5, 23).validate().is_ok());
        assert!(ConstructionParams::new(0, 1, 1).validate().is_err());
        assert!(ConstructionParams::new(2, 0, 1).validate().is_err());
        assert!(ConstructionParams::new(2, 5, 4).validate().is_err());
        let mut p = ConstructionParams::new(2, 1, 1);
        p.eps = -1;
        assert!(p.validate().is_err());
        assert!(ConstructionParams::new(100_000, 1, 1).validate().is_err());
    }

    #[test]
    fn set_ids_index_densely() {
        let ids: Vec<_> = SetId::all(3).collect();
        assert_eq!(ids[0], SetId::new(1, 0));
        assert_eq!(ids[5], SetId::new(3, 1));
        assert!(ids.iter().enumerate().all(|(s, id)| id.index() == s));
    }

    #[test]
    fn decimal_formatting() {
        assert_eq!(fmt_len(56_000), "5.6000");
        assert_eq!(fmt_len(-5), "-0.0005");
        assert_eq!(fmt_sq(397_840_000), "3.97840000");
    }
}
