use std::collections::HashMap;

use super::layout::{placements, Placement, PlacementRole};
use super::{
    ConstructionError, ConstructionParams, Disk, DiskLabel, GadgetKind, Part, Representation,
    ScaledPoint, SetId, Q1_HIGH, Q1_LOW, Q1_MID, Q23_HIGH, Q23_MID, Q2_LOW, Q3_LOW,
};
use crate::formula::{validate_xor_k, Formula};

/// Offsets of `t` crowd members spread evenly over `[−eps, eps]`, rounded to
/// the grid. Members may share an offset once `t > 2·eps + 1`.
pub fn crowd_offsets(t: u64, eps: i64) -> impl Iterator<Item = i64> {
    (0..t).map(move |k| {
        if t == 1 {
            return 0;
        }
        let num = 2 * eps as i128 * k as i128;
        let den = (t - 1) as i128;
        ((2 * num + den) / (2 * den)) as i64 - eps
    })
}

/// Atoms of a gadget as `(part, size, offset from origin, spread horizontally)`.
pub(crate) fn gadget_atoms(
    kind: GadgetKind,
    params: &ConstructionParams,
) -> Vec<(Part, u64, (i64, i64), bool)> {
    let (a, b) = (params.a, params.b);
    match kind {
        GadgetKind::Q1 => vec![
            (Part::CrowdLow, a, (Q1_LOW, 0), true),
            (Part::CrowdMid, params.mid_crowd(), (Q1_MID, 0), true),
            (Part::CrowdHigh, a, (Q1_HIGH, 0), true),
        ],
        GadgetKind::Q2 | GadgetKind::Q3 => {
            let low = if kind == GadgetKind::Q2 {
                Q2_LOW
            } else {
                Q3_LOW
            };
            vec![
                (Part::SingleOrigin, 1, (0, 0), false),
                (Part::CrowdLow, b, (0, low), false),
                (Part::SingleMid, 1, (0, Q23_MID), false),
                (Part::CrowdHigh, b, (0, Q23_HIGH), false),
            ]
        }
    }
}

fn emit_gadget(p: &Placement, params: &ConstructionParams, out: &mut Vec<Disk>) {
    for (part, size, (dx, dy), horizontal) in gadget_atoms(p.kind, params) {
        let center = p.origin.offset(dx, dy);
        for (member, off) in crowd_offsets(size, params.eps).enumerate() {
            let c = if horizontal {
                center.offset(off, 0)
            } else {
                center.offset(0, off)
            };
            out.push(Disk {
                label: DiskLabel {
                    set: p.set,
                    ordinal: p.ordinal,
                    part,
                    member: member as u32,
                    kind: p.kind,
                },
                center: c,
            });
        }
    }
}

/// Builds the clause-free representation.
pub fn build_representation(
    params: &ConstructionParams,
) -> Result<Representation, ConstructionError> {
    params.validate()?;
    let mut disks = Vec::with_capacity(params.total_disks() as usize);
    for p in placements(params) {
        emit_gadget(&p, params, &mut disks);
    }
    disks.sort_unstable_by_key(|d| d.label);
    Ok(Representation {
        params: params.clone(),
        disks,
        formula: None,
    })
}

/// Crossing gadgets of the clause `{i, k}`, `i < k`: the pairs
/// `(vertical owner, horizontal owner)` at `T(i,0)×T(k,1)` and `T(i,1)×T(k,0)`.
pub(crate) fn clause_crossings(i: u32, k: u32) -> [(SetId, SetId); 2] {
    [
        (SetId::new(i, 0), SetId::new(k, 1)),
        (SetId::new(i, 1), SetId::new(k, 0)),
    ]
}

/// Applies the clause modifications for every clause of `f`.
///
/// At each of the two crossings of a clause, the last member of the Q1
/// low crowd moves up by the horizontal shift and the last member of the Q2
/// low crowd moves right by the vertical shift.
pub fn apply_clause_shifts(
    r: &Representation,
    f: &Formula,
) -> Result<Representation, ConstructionError> {
    let verdict = validate_xor_k(f, 3);
    if !verdict.accepted() {
        return Err(ConstructionError::NotXor3(verdict.offenders));
    }
    let params = &r.params;
    let mut crossing_gadgets: HashMap<(SetId, SetId), Placement> = HashMap::new();
    for p in placements(params) {
        if let PlacementRole::Crossing(other) = p.role {
            crossing_gadgets.insert((p.set, other), p);
        }
    }
    let (up, right) = params.shifts();
    let mut out = r.clone();
    for &(i, k) in f.clauses() {
        if k as usize > params.n {
            return Err(ConstructionError::MissingCrossing(i, k, params.n));
        }
        for (vert, horiz) in clause_crossings(i, k) {
            let missing = || ConstructionError::MissingCrossing(i, k, params.n);
            let q1 = crossing_gadgets.get(&(horiz, vert)).ok_or_else(missing)?;
            let q2 = crossing_gadgets.get(&(vert, horiz)).ok_or_else(missing)?;
            move_member(
                &mut out,
                q1,
                params.a,
                Part::ShiftedH,
                q1.origin.offset(Q1_LOW, up),
            )
            .ok_or(ConstructionError::DuplicateModification(vert, horiz))?;
            move_member(
                &mut out,
                q2,
                params.b,
                Part::ShiftedV,
                q2.origin.offset(right, Q2_LOW),
            )
            .ok_or(ConstructionError::DuplicateModification(vert, horiz))?;
        }
    }
    out.disks.sort_unstable_by_key(|d| d.label);
    let clauses = r
        .formula
        .iter()
        .flat_map(|g| g.clauses().iter().copied())
        .chain(f.clauses().iter().copied());
    out.formula = Some(Formula::new(params.n, clauses)?);
    Ok(out)
}

fn move_member(
    r: &mut Representation,
    gadget: &Placement,
    crowd: u64,
    part: Part,
    to: ScaledPoint,
) -> Option<()> {
    let shifted = DiskLabel {
        set: gadget.set,
        ordinal: gadget.ordinal,
        part,
        member: 0,
        kind: gadget.kind,
    };
    if r.disks.iter().any(|d| d.label == shifted) {
        return None;
    }
    let from = DiskLabel {
        part: Part::CrowdLow,
        member: crowd as u32 - 1,
        ..shifted
    };
    // earlier moves break the label order, so search linearly
    let idx = r.disks.iter().position(|d| d.label == from)?;
    r.disks[idx] = Disk {
        label: shifted,
        center: to,
    };
    Some(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{layout::track_layout, ShiftMode};
    use crate::formula::parse_formula;
    use std::collections::{BTreeMap, HashSet};

    #[test]
    fn crowd_offsets_span_the_spread() {
        assert_eq!(crowd_offsets(1, 5).collect::<Vec<_>>(), vec![0]);
        assert_eq!(crowd_offsets(2, 5).collect::<Vec<_>>(), vec![-5, 5]);
        assert_eq!(crowd_offsets(3, 5).collect::<Vec<_>>(), vec![-5, 0, 5]);
        let many: Vec<_> = crowd_offsets(64, 5).collect();
        assert_eq!((many[0], many[63]), (-5, 5));
        assert!(many.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn disk_counts() {
        for (n, a, b) in [(1, 1, 1), (2, 5, 23), (3, 2, 5)] {
            let p = ConstructionParams::new(n, a, b);
            let r = build_representation(&p).unwrap();
            assert_eq!(r.len() as u64, 8 * n as u64 * (n as u64 + 1) * (b + 1));
            let mut per_gadget: BTreeMap<(SetId, u32), u64> = BTreeMap::new();
            for d in &r.disks {
                *per_gadget
                    .entry((d.label.set, d.label.ordinal))
                    .or_default() += 1;
            }
            assert!(per_gadget.values().all(|&c| c == 2 * b + 2));
            assert_eq!(per_gadget.len(), 2 * n * (2 * n + 2));
        }
        let r = build_representation(&ConstructionParams::new(2, 5, 23)).unwrap();
        assert_eq!(r.len(), 1152);
    }

    #[test]
    fn labels_are_unique_and_sorted() {
        let r = build_representation(&ConstructionParams::new(3, 2, 5)).unwrap();
        let labels = r.labels();
        assert!(labels.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn centers_lie_on_tracks_within_spread() {
        let p = ConstructionParams::new(3, 3, 7);
        let r = build_representation(&p).unwrap();
        let l = track_layout(&p);
        for d in &r.disks {
            let c = d.center;
            let near = (-p.eps..=p.eps).any(|e| {
                l.on_track(d.label.set, c.offset(e, 0)) || l.on_track(d.label.set, c.offset(0, e))
            });
            assert!(near, "{:?} off its track", d.label);
        }
    }

    #[test]
    fn shifts_touch_exactly_four_disks_per_clause() {
        let p = ConstructionParams::new(3, 5, 23);
        let base = build_representation(&p).unwrap();
        let f = parse_formula("1 2\n2 3").unwrap();
        let shifted = apply_clause_shifts(&base, &f).unwrap();
        assert_eq!(shifted.len(), base.len());
        let before: HashSet<_> = base.disks.iter().map(|d| (d.center, d.label.set)).collect();
        let moved: Vec<_> = shifted
            .disks
            .iter()
            .filter(|d| !before.contains(&(d.center, d.label.set)))
            .collect();
        assert_eq!(moved.len(), 4 * f.m());
        let sets_before: Vec<_> = base.disks.iter().map(|d| d.label.set).collect();
        let sets_after: Vec<_> = shifted.disks.iter().map(|d| d.label.set).collect();
        assert_eq!(sets_before, sets_after);
        assert_eq!(shifted.formula.as_ref().unwrap().m(), 2);
    }

    #[test]
    fn clause_modifies_both_crossings() {
        let p = ConstructionParams::new(2, 5, 23);
        let r = apply_clause_shifts(
            &build_representation(&p).unwrap(),
            &parse_formula("1 2").unwrap(),
        )
        .unwrap();
        let l = track_layout(&p);
        let point = |v: SetId, h: SetId| {
            l.crossings
                .iter()
                .find(|c| c.vertical == v && c.horizontal == h)
                .unwrap()
                .point
        };
        let p0 = point(SetId::new(1, 0), SetId::new(2, 1));
        let p1 = point(SetId::new(1, 1), SetId::new(2, 0));
        let shifted: Vec<_> = r
            .disks
            .iter()
            .filter(|d| matches!(d.label.part, Part::ShiftedH | Part::ShiftedV))
            .map(|d| (d.label.part, d.label.set, d.center))
            .collect();
        assert_eq!(shifted.len(), 4);
        for base in [p0, p1] {
            assert!(shifted.contains(&(
                Part::ShiftedH,
                if base == p0 {
                    SetId::new(2, 1)
                } else {
                    SetId::new(2, 0)
                },
                base.offset(9_000, 120)
            )));
            assert!(shifted.contains(&(
                Part::ShiftedV,
                if base == p0 {
                    SetId::new(1, 0)
                } else {
                    SetId::new(1, 1)
                },
                base.offset(250, 18_000)
            )));
        }
        // the corrected shifted pair touches at 0.875² + 1.788²
        let h = r
            .disks
            .iter()
            .find(|d| d.label.part == Part::ShiftedH)
            .unwrap();
        let v = r
            .disks
            .iter()
            .find(|d| d.label.part == Part::ShiftedV && d.label.set == SetId::new(1, 1))
            .unwrap();
        assert_eq!(h.center.dist_sq(v.center), 396_256_900);
        assert!(h.center.touches(v.center));
    }

    #[test]
    fn empty_formula_is_identity() {
        let p = ConstructionParams::new(2, 2, 5);
        let base = build_representation(&p).unwrap();
        let r = apply_clause_shifts(&base, &crate::formula::Formula::empty(2)).unwrap();
        assert_eq!(r.disks, base.disks);
    }

    #[test]
    fn shift_errors() {
        let p = ConstructionParams::new(2, 2, 5);
        let base = build_representation(&p).unwrap();
        let f = parse_formula("1 3").unwrap();
        assert_eq!(
            apply_clause_shifts(&base, &f),
            Err(ConstructionError::MissingCrossing(1, 3, 2))
        );
        let once = apply_clause_shifts(&base, &parse_formula("1 2").unwrap()).unwrap();
        assert!(matches!(
            apply_clause_shifts(&once, &parse_formula("1 2").unwrap()),
            Err(ConstructionError::DuplicateModification(..))
        ));
        let p5 = ConstructionParams::new(5, 2, 5);
        let over = parse_formula("1 2\n1 3\n1 4\n1 5").unwrap();
        assert_eq!(
            apply_clause_shifts(&build_representation(&p5).unwrap(), &over),
            Err(ConstructionError::NotXor3(vec![1]))
        );
    }

    #[test]
    fn literal_shifts_use_printed_offsets() {
        let p = ConstructionParams::new(2, 2, 5).with_modes(
            crate::construction::AuxMode::Corrected,
            ShiftMode::PaperLiteral,
        );
        let r = apply_clause_shifts(
            &build_representation(&p).unwrap(),
            &parse_formula("1 2").unwrap(),
        )
        .unwrap();
        let h = r
            .disks
            .iter()
            .find(|d| d.label.part == Part::ShiftedH)
            .unwrap();
        assert_eq!(h.center.y % 72_000, 200);
    }
}
