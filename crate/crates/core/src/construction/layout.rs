//! Track geometry and gadget placement.
//!
//! Track `T(i,j)` is the union of a leftward horizontal halfline and an
//! upward vertical halfline, both starting at the bend point `p(i,j)`.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{AuxMode, ConstructionParams, GadgetKind, ScaledPoint, SetId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Crossing {
    /// Track whose vertical halfline passes through the point (lower variable).
    pub vertical: SetId,
    /// Track whose horizontal halfline passes through the point.
    pub horizontal: SetId,
    pub point: ScaledPoint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrackLayout {
    pub n: usize,
    /// Bend point per set, indexed by [`SetId::index`].
    pub bends: Vec<ScaledPoint>,
    /// Auxiliary point `q(i,0)` per variable (index `i−1`).
    pub q: Vec<ScaledPoint>,
    /// Auxiliary point `r(i,0)` per variable (index `i−1`).
    pub r: Vec<ScaledPoint>,
    pub crossings: Vec<Crossing>,
}

impl TrackLayout {
    pub fn bend(&self, s: SetId) -> ScaledPoint {
        self.bends[s.index()]
    }

    /// Whether `p` lies on the horizontal halfline of `s`.
    pub fn on_horizontal(&self, s: SetId, p: ScaledPoint) -> bool {
        let b = self.bend(s);
        p.y == b.y && p.x <= b.x
    }

    /// Whether `p` lies on the vertical halfline of `s`.
    pub fn on_vertical(&self, s: SetId, p: ScaledPoint) -> bool {
        let b = self.bend(s);
        p.x == b.x && p.y >= b.y
    }

    pub fn on_track(&self, s: SetId, p: ScaledPoint) -> bool {
        self.on_horizontal(s, p) || self.on_vertical(s, p)
    }

    /// Every common point of two distinct tracks.
    pub fn common_points(&self, s: SetId, t: SetId) -> Vec<ScaledPoint> {
        let mut pts = Vec::new();
        for (v, h) in [(s, t), (t, s)] {
            let p = ScaledPoint::new(self.bend(v).x, self.bend(h).y);
            if self.on_vertical(v, p) && self.on_horizontal(h, p) {
                pts.push(p);
            }
        }
        // collinear halflines never overlap here: distinct tracks have distinct x and y levels
        pts.sort();
        pts.dedup();
        pts
    }
}

pub fn track_layout(params: &ConstructionParams) -> TrackLayout {
    let (d1, d2) = (params.d1, params.d2);
    let n = params.n;
    let bends = SetId::all(n)
        .map(|s| {
            let i = s.i as i64;
            if s.j == 0 {
                ScaledPoint::new(2 * i * d1, 2 * (i - 1) * d2)
            } else {
                ScaledPoint::new((2 * i - 1) * d1, (2 * i - 1) * d2)
            }
        })
        .collect();
    let q = (1..=n as i64)
        .map(|i| ScaledPoint::new((2 * i - 1) * d1, 2 * (i - 1) * d2))
        .collect();
    let r = (1..=n as i64)
        .map(|i| match params.aux_mode {
            AuxMode::Corrected => ScaledPoint::new(2 * i * d1, (2 * i - 1) * d2),
            AuxMode::PaperLiteral => ScaledPoint::new(2 * i * d1, 2 * i * d2),
        })
        .collect();
    let mut layout = TrackLayout {
        n,
        bends,
        q,
        r,
        crossings: Vec::new(),
    };
    let mut crossings = Vec::new();
    for v in SetId::all(n) {
        for h in SetId::all(n) {
            if v.i >= h.i {
                continue;
            }
            let p = ScaledPoint::new(layout.bend(v).x, layout.bend(h).y);
            if layout.on_vertical(v, p) && layout.on_horizontal(h, p) {
                crossings.push(Crossing {
                    vertical: v,
                    horizontal: h,
                    point: p,
                });
            }
        }
    }
    layout.crossings = crossings;
    layout
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PlacementRole {
    /// Q1 at `x = 0`.
    Base,
    /// Q1 at `q(i,0)`.
    AuxQ,
    /// Q2 at `r(i,0)`.
    AuxR,
    /// Q1 at `x = −d1` or `x = −2d1` on `T(i,1)`.
    Extension,
    /// Q3 at the bend point.
    Bend,
    /// Gadget at the crossing with the given other track.
    Crossing(SetId),
}

/// A gadget instance: owning set, ordinal along the track, kind and origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Placement {
    pub set: SetId,
    pub ordinal: u32,
    pub kind: GadgetKind,
    pub origin: ScaledPoint,
    pub role: PlacementRole,
}

/// All gadget placements, sorted by `(set, ordinal)`.
///
/// Ordinals count the horizontal Q1 gadgets from the left, then the bend Q3,
/// then the vertical Q2 gadgets from the bottom. A crossing Q1 belongs to the
/// horizontal track through it, a crossing Q2 to the vertical one.
pub fn placements(params: &ConstructionParams) -> Vec<Placement> {
    let layout = track_layout(params);
    let mut horizontal: BTreeMap<SetId, Vec<(ScaledPoint, PlacementRole)>> = BTreeMap::new();
    let mut vertical: BTreeMap<SetId, Vec<(ScaledPoint, PlacementRole)>> = BTreeMap::new();
    let d1 = params.d1;
    for s in SetId::all(params.n) {
        let y = layout.bend(s).y;
        let h = horizontal.entry(s).or_default();
        h.push((ScaledPoint::new(0, y), PlacementRole::Base));
        let v = vertical.entry(s).or_default();
        if s.j == 0 {
            h.push((layout.q[s.i as usize - 1], PlacementRole::AuxQ));
            v.push((layout.r[s.i as usize - 1], PlacementRole::AuxR));
        } else {
            h.push((ScaledPoint::new(-d1, y), PlacementRole::Extension));
            h.push((ScaledPoint::new(-2 * d1, y), PlacementRole::Extension));
        }
    }
    for c in &layout.crossings {
        horizontal
            .get_mut(&c.horizontal)
            .unwrap()
            .push((c.point, PlacementRole::Crossing(c.vertical)));
        vertical
            .get_mut(&c.vertical)
            .unwrap()
            .push((c.point, PlacementRole::Crossing(c.horizontal)));
    }
    let mut out = Vec::new();
    for s in SetId::all(params.n) {
        let mut h = horizontal.remove(&s).unwrap();
        h.sort_by_key(|&(p, _)| p.x);
        let mut v = vertical.remove(&s).unwrap();
        // stable: r comes before a crossing at the same height
        v.sort_by_key(|&(p, _)| p.y);
        let mut ordinal = 0u32;
        let mut push = |kind, origin, role| {
            out.push(Placement {
                set: s,
                ordinal,
                kind,
                origin,
                role,
            });
            ordinal += 1;
        };
        for (p, role) in h {
            push(GadgetKind::Q1, p, role);
        }
        push(GadgetKind::Q3, layout.bend(s), PlacementRole::Bend);
        for (p, role) in v {
            push(GadgetKind::Q2, p, role);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Axis {
    Horizontal,
    Vertical,
}

/// Consecutive gadget origins along a halfline that are not exactly one
/// spacing apart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpacingViolation {
    pub set: SetId,
    pub axis: Axis,
    /// Ordinal of the upper / right gadget of the offending pair.
    pub ordinal: u32,
    pub gap: i64,
    pub expected: i64,
}

/// Checks that consecutive horizontal origins (ending at the bend) are `d1`
/// apart and consecutive vertical origins (starting at the bend) `d2` apart.
pub fn chain_spacing_violations(params: &ConstructionParams) -> Vec<SpacingViolation> {
    let all = placements(params);
    let mut out = Vec::new();
    for s in SetId::all(params.n) {
        let track: Vec<&Placement> = all.iter().filter(|p| p.set == s).collect();
        let bend = track.iter().position(|p| p.kind == GadgetKind::Q3).unwrap();
        for w in track[..=bend].windows(2) {
            let gap = w[1].origin.x - w[0].origin.x;
            if gap != params.d1 || w[1].origin.y != w[0].origin.y {
                out.push(SpacingViolation {
                    set: s,
                    axis: Axis::Horizontal,
                    ordinal: w[1].ordinal,
                    gap,
                    expected: params.d1,
                });
            }
        }
        for w in track[bend..].windows(2) {
            let gap = w[1].origin.y - w[0].origin.y;
            if gap != params.d2 || w[1].origin.x != w[0].origin.x {
                out.push(SpacingViolation {
                    set: s,
                    axis: Axis::Vertical,
                    ordinal: w[1].ordinal,
                    gap,
                    expected: params.d2,
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::ShiftMode;

    #[test]
    fn bend_and_aux_points_for_one_variable() {
        let l = track_layout(&ConstructionParams::new(1, 1, 1));
        assert_eq!(l.bend(SetId::new(1, 0)), ScaledPoint::new(112_000, 0));
        assert_eq!(l.bend(SetId::new(1, 1)), ScaledPoint::new(56_000, 72_000));
        assert_eq!(l.q[0], ScaledPoint::new(56_000, 0));
        assert_eq!(l.r[0], ScaledPoint::new(112_000, 72_000));
        let lit = track_layout(
            &ConstructionParams::new(1, 1, 1)
                .with_modes(AuxMode::PaperLiteral, ShiftMode::Corrected),
        );
        assert_eq!(lit.r[0], ScaledPoint::new(112_000, 144_000));
    }

    #[test]
    fn track_intersections() {
        for n in 1..=5 {
            let l = track_layout(&ConstructionParams::new(n, 1, 1));
            for s in SetId::all(n) {
                assert!(l.on_track(s, l.q[s.i as usize - 1]) == (s.j == 0));
                if s.j == 0 {
                    assert!(l.on_vertical(s, l.r[s.i as usize - 1]));
                }
                for t in SetId::all(n) {
                    if s == t {
                        continue;
                    }
                    let common = l.common_points(s, t).len();
                    if s.i == t.i {
                        assert_eq!(common, 0, "{s} {t}");
                    } else {
                        assert_eq!(common, 1, "{s} {t}");
                    }
                }
            }
            assert_eq!(l.crossings.len(), 4 * n * (n - 1) / 2);
        }
    }

    #[test]
    fn pair_of_variables_has_four_crossings() {
        let l = track_layout(&ConstructionParams::new(2, 1, 1));
        assert_eq!(l.crossings.len(), 4);
        let c = l
            .crossings
            .iter()
            .find(|c| c.vertical == SetId::new(1, 0) && c.horizontal == SetId::new(2, 1))
            .unwrap();
        assert_eq!(c.point, ScaledPoint::new(112_000, 216_000));
    }

    #[test]
    fn gadget_sequence_for_one_variable() {
        let ps = placements(&ConstructionParams::new(1, 1, 1));
        let t10: Vec<_> = ps.iter().filter(|p| p.set == SetId::new(1, 0)).collect();
        let xs: Vec<_> = t10.iter().map(|p| (p.kind, p.origin.x / 56_000)).collect();
        assert_eq!(
            xs,
            vec![
                (GadgetKind::Q1, 0),
                (GadgetKind::Q1, 1),
                (GadgetKind::Q3, 2),
                (GadgetKind::Q2, 2)
            ]
        );
        assert_eq!(t10[1].role, PlacementRole::AuxQ);
        let t11: Vec<_> = ps.iter().filter(|p| p.set == SetId::new(1, 1)).collect();
        assert_eq!(t11.len(), 4);
        assert_eq!(t11[0].origin.x, -112_000);
    }

    #[test]
    fn corrected_chains_are_evenly_spaced() {
        for n in 1..=5 {
            assert!(chain_spacing_violations(&ConstructionParams::new(n, 1, 1)).is_empty());
        }
    }

    #[test]
    fn literal_aux_point_breaks_vertical_chain() {
        for n in 1..=4 {
            let p = ConstructionParams::new(n, 1, 1)
                .with_modes(AuxMode::PaperLiteral, ShiftMode::Corrected);
            let v = chain_spacing_violations(&p);
            assert!(!v.is_empty());
            assert!(v.iter().all(|v| v.axis == Axis::Vertical && v.set.j == 0));
            // the aux gadget sits two steps above the bend
            assert!(v.iter().any(|v| v.gap == 2 * p.d2));
            if n >= 2 {
                // and coincides with the crossing above it for every variable but the last
                assert!(v.iter().any(|v| v.gap == 0));
            }
        }
    }
}
