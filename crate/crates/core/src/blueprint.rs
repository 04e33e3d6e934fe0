//! The intended quotient graph, derived from the placement rules and the
//! intended joins alone. No coordinates are involved; this is the oracle the
//! geometric extraction is checked against.
//!
//! Gadget ordinals along track `T(i,j)` follow from counting: the horizontal
//! halfline carries `2i` (for `j = 0`) or `2i+1` (for `j = 1`) Q1 gadgets,
//! then comes the bend Q3, then the Q2 gadgets up to ordinal `2n+1`. A Q2
//! crossing with the horizontal halfline at level `h = 2(k−1)+l` has ordinal
//! `h + 2`; a Q1 crossing with the vertical halfline at column `v = 2i − j`
//! has ordinal `v` (for `l = 0`) or `v + 2` (for `l = 1`).

use std::collections::BTreeMap;

use crate::analysis::CutMatrix;
use crate::construction::{ConstructionError, ConstructionParams, GadgetKind, Part, SetId};
use crate::formula::Formula;
use crate::quotient::{Atom, AtomKey, QuotientGraph};

fn q1_count(s: SetId) -> u32 {
    2 * s.i + s.j as u32
}

fn column(s: SetId) -> u32 {
    2 * s.i - s.j as u32
}

fn level(s: SetId) -> u32 {
    2 * (s.i - 1) + s.j as u32
}

/// Ordinals of the Q2 gadget (in `vertical`) and the Q1 gadget (in
/// `horizontal`) at the crossing of the two tracks; `vertical.i < horizontal.i`.
pub(crate) fn crossing_ordinals(vertical: SetId, horizontal: SetId) -> (u32, u32) {
    debug_assert!(vertical.i < horizontal.i);
    let q2 = level(horizontal) + 2;
    let q1 = column(vertical) + 2 * horizontal.j as u32;
    (q2, q1)
}

fn key(set: SetId, ordinal: u32, kind: GadgetKind, part: Part) -> AtomKey {
    AtomKey {
        set,
        ordinal,
        part,
        kind,
    }
}

struct Builder {
    sizes: BTreeMap<AtomKey, u64>,
    joins: Vec<(AtomKey, AtomKey)>,
}

impl Builder {
    fn atom(&mut self, k: AtomKey, size: u64) -> AtomKey {
        self.sizes.insert(k, size);
        k
    }

    fn join(&mut self, x: AtomKey, y: AtomKey) {
        self.joins.push((x, y));
    }
}

/// Intended quotient of the representation for `params` with the clause
/// modifications of `f` (if any).
pub fn blueprint_quotient(
    params: &ConstructionParams,
    f: Option<&Formula>,
) -> Result<QuotientGraph, ConstructionError> {
    params.validate()?;
    let (n, a, b) = (params.n as u32, params.a, params.b);
    let mut bp = Builder {
        sizes: BTreeMap::new(),
        joins: Vec::new(),
    };
    use GadgetKind::*;
    use Part::*;

    for s in SetId::all(params.n) {
        let h = q1_count(s);
        for o in 0..h {
            let low = bp.atom(key(s, o, Q1, CrowdLow), a);
            let mid = bp.atom(key(s, o, Q1, CrowdMid), params.mid_crowd());
            let high = bp.atom(key(s, o, Q1, CrowdHigh), a);
            bp.join(low, mid);
            bp.join(mid, high);
            if o > 0 {
                bp.join(key(s, o - 1, Q1, CrowdHigh), low);
            }
        }
        for o in h..=2 * n + 1 {
            let kind = if o == h { Q3 } else { Q2 };
            let origin = bp.atom(key(s, o, kind, SingleOrigin), 1);
            let low = bp.atom(key(s, o, kind, CrowdLow), b);
            let mid = bp.atom(key(s, o, kind, SingleMid), 1);
            let high = bp.atom(key(s, o, kind, CrowdHigh), b);
            bp.join(origin, low);
            bp.join(low, mid);
            bp.join(mid, high);
            if o == h {
                let last = key(s, h - 1, Q1, CrowdHigh);
                bp.join(last, origin);
                bp.join(last, low);
            } else {
                let below = if o - 1 == h { Q3 } else { Q2 };
                bp.join(key(s, o - 1, below, CrowdHigh), origin);
            }
        }
    }

    for v in SetId::all(params.n) {
        for t in SetId::all(params.n).filter(|t| t.i > v.i) {
            let (q2, q1) = crossing_ordinals(v, t);
            let origin = key(v, q2, Q2, SingleOrigin);
            bp.join(origin, key(t, q1, Q1, CrowdLow));
            bp.join(origin, key(t, q1 - 1, Q1, CrowdHigh));
        }
    }

    if let Some(f) = f {
        for &(i, k) in f.clauses() {
            if k > n {
                return Err(ConstructionError::MissingCrossing(i, k, params.n));
            }
            for (v, t) in [
                (SetId::new(i, 0), SetId::new(k, 1)),
                (SetId::new(i, 1), SetId::new(k, 0)),
            ] {
                let (q2, q1) = crossing_ordinals(v, t);
                let h_low = key(t, q1, Q1, CrowdLow);
                let v_low = key(v, q2, Q2, CrowdLow);
                let sh = key(t, q1, Q1, ShiftedH);
                let sv = key(v, q2, Q2, ShiftedV);
                if bp.sizes.contains_key(&sh) {
                    return Err(ConstructionError::DuplicateModification(v, t));
                }
                *bp.sizes.get_mut(&h_low).unwrap() -= 1;
                *bp.sizes.get_mut(&v_low).unwrap() -= 1;
                bp.atom(sh, 1);
                bp.atom(sv, 1);
                let origin = key(v, q2, Q2, SingleOrigin);
                for other in [
                    h_low,
                    key(t, q1, Q1, CrowdMid),
                    key(t, q1 - 1, Q1, CrowdHigh),
                    origin,
                    sv,
                ] {
                    bp.join(sh, other);
                }
                for other in [v_low, origin, key(v, q2, Q2, SingleMid)] {
                    bp.join(sv, other);
                }
            }
        }
    }

    let live = |k: &AtomKey| bp.sizes.get(k).copied().unwrap_or(0) > 0;
    let joins: Vec<_> = bp
        .joins
        .iter()
        .copied()
        .filter(|(x, y)| live(x) && live(y))
        .collect();
    let atoms = bp
        .sizes
        .iter()
        .filter(|(_, &size)| size > 0)
        .map(|(&key, &size)| Atom { key, size })
        .collect();
    Ok(QuotientGraph::new(atoms, joins))
}

/// Cut matrix the construction is designed to produce: `2a` between the two
/// tracks of every crossing, one more at each clause crossing, and zero for
/// all other pairs of distinct sets. The diagonal holds the intra-set edge
/// count of the blueprint.
pub fn expected_cut_matrix(
    params: &ConstructionParams,
    f: Option<&Formula>,
) -> Result<CutMatrix, ConstructionError> {
    let q = blueprint_quotient(params, f)?;
    let mut m = CutMatrix::zeros(params.n);
    for v in SetId::all(params.n) {
        for t in SetId::all(params.n).filter(|t| t.i > v.i) {
            m.add(v, t, 2 * params.a);
        }
    }
    if let Some(f) = f {
        for &(i, k) in f.clauses() {
            m.add(SetId::new(i, 0), SetId::new(k, 1), 1);
            m.add(SetId::new(i, 1), SetId::new(k, 0), 1);
        }
    }
    for x in q.atoms() {
        let s = x.key.set;
        m.add_diagonal(s, x.size * x.size.saturating_sub(1) / 2);
    }
    for &(x, y) in q.joins() {
        let (p, r) = (&q.atoms()[x], &q.atoms()[y]);
        if p.key.set == r.key.set {
            m.add_diagonal(p.key.set, p.size * r.size);
        }
    }
    Ok(m)
}
