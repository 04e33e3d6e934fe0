//! Exact audit of every intended adjacency and non-adjacency distance class.

use std::fmt::Write as _;

use serde::Serialize;

use super::layout::{chain_spacing_violations, SpacingViolation};
use super::{
    fmt_len, fmt_sq, ConstructionParams, Q1_HIGH, Q1_LOW, Q1_MID, Q23_HIGH, Q23_MID, Q2_LOW,
    Q3_LOW, TOUCH_DIST_SQ,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    MustIntersect,
    MustNot,
}

/// One class of disk pairs sharing a relative offset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistanceClass {
    pub name: &'static str,
    /// Nominal offset from the first atom to the second.
    pub dx: i64,
    pub dy: i64,
    pub relation: Relation,
    pub nominal_sq: i128,
    /// Worst squared distance over all member spreads: the largest for
    /// must-intersect classes, the smallest for must-not classes.
    pub worst_sq: i128,
    /// `|worst − 4|` in squared grid units.
    pub margin: i128,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub classes: Vec<DistanceClass>,
    pub spacing: Vec<SpacingViolation>,
    pub pass: bool,
}

impl AuditReport {
    pub fn failures(&self) -> impl Iterator<Item = &DistanceClass> {
        self.classes.iter().filter(|c| !c.ok)
    }

    pub fn min_margin(&self) -> Option<i128> {
        self.classes.iter().map(|c| c.margin).min()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.classes {
            let rel = match c.relation {
                Relation::MustIntersect => "must-intersect",
                Relation::MustNot => "must-not",
            };
            writeln!(
                out,
                "[{}] {:<44} dx={} dy={} d2={} worst={} {} margin={}",
                if c.ok { " ok " } else { "FAIL" },
                c.name,
                fmt_len(c.dx),
                fmt_len(c.dy),
                fmt_sq(c.nominal_sq),
                fmt_sq(c.worst_sq),
                rel,
                fmt_sq(c.margin),
            )
            .unwrap();
        }
        for v in &self.spacing {
            writeln!(
                out,
                "[FAIL] chain spacing on track {} ({:?}) before gadget {}: gap {} expected {}",
                v.set,
                v.axis,
                v.ordinal,
                fmt_len(v.gap),
                fmt_len(v.expected)
            )
            .unwrap();
        }
        writeln!(out, "verdict: {}", if self.pass { "PASS" } else { "FAIL" }).unwrap();
        out
    }
}

#[derive(Clone, Copy)]
enum Spread {
    Fixed,
    X,
    Y,
}

#[derive(Clone, Copy)]
struct Site {
    x: i64,
    y: i64,
    spread: Spread,
}

const fn site(x: i64, y: i64, spread: Spread) -> Site {
    Site { x, y, spread }
}

impl Site {
    fn shift(self, dx: i64, dy: i64) -> Site {
        site(self.x + dx, self.y + dy, self.spread)
    }
}

/// Smallest and largest squared distance between members of two sites when
/// every spread member may sit anywhere within `±eps` along its axis.
fn extreme_sq(p: Site, q: Site, eps: i64) -> (i128, i128) {
    let spread = |s: Site| match s.spread {
        Spread::Fixed => (0, 0),
        Spread::X => (eps, 0),
        Spread::Y => (0, eps),
    };
    let (px, py) = spread(p);
    let (qx, qy) = spread(q);
    let range = |d: i64, e: i64| {
        let (lo, hi) = ((d - e) as i128, (d + e) as i128);
        let min_abs = if lo <= 0 && hi >= 0 {
            0
        } else {
            lo.abs().min(hi.abs())
        };
        (min_abs * min_abs, lo.abs().max(hi.abs()).pow(2))
    };
    let (xmin, xmax) = range(q.x - p.x, px + qx);
    let (ymin, ymax) = range(q.y - p.y, py + qy);
    (xmin + ymin, xmax + ymax)
}

/// Evaluates every distance class of the construction with exact integer
/// arithmetic, plus the chain-spacing invariant of the layout.
pub fn audit_constants(params: &ConstructionParams) -> AuditReport {
    use Relation::*;
    use Spread::*;
    let (d1, d2) = (params.d1, params.d2);
    let (up, right) = params.shifts();

    let q1_low = site(Q1_LOW, 0, X);
    let q1_mid = site(Q1_MID, 0, X);
    let q1_high = site(Q1_HIGH, 0, X);
    let origin = site(0, 0, Fixed);
    let q2_low = site(0, Q2_LOW, Y);
    let q3_low = site(0, Q3_LOW, Y);
    let v_mid = site(0, Q23_MID, Fixed);
    let v_high = site(0, Q23_HIGH, Y);
    let prev_q1_high = q1_high.shift(-d1, 0);
    let prev_q1_mid = q1_mid.shift(-d1, 0);
    let prev_v_high = v_high.shift(0, -d2);
    let shifted_h = site(Q1_LOW, up, Fixed);
    let shifted_v = site(right, Q2_LOW, Fixed);

    let table: Vec<(&'static str, Site, Site, Relation)> = vec![
        ("Q1 low / mid", q1_low, q1_mid, MustIntersect),
        ("Q1 mid / high", q1_mid, q1_high, MustIntersect),
        ("Q1 low / high", q1_low, q1_high, MustNot),
        (
            "Q1 high / next Q1 low",
            q1_high,
            q1_low.shift(d1, 0),
            MustIntersect,
        ),
        ("Q1 mid / next Q1 low", q1_mid, q1_low.shift(d1, 0), MustNot),
        (
            "Q1 high / next Q1 mid",
            q1_high,
            q1_mid.shift(d1, 0),
            MustNot,
        ),
        ("Q2 origin / low", origin, q2_low, MustIntersect),
        ("Q2 low / mid", q2_low, v_mid, MustIntersect),
        ("Q2 mid / high", v_mid, v_high, MustIntersect),
        ("Q2 origin / mid", origin, v_mid, MustNot),
        ("Q2 low / high", q2_low, v_high, MustNot),
        (
            "Q2 high / next origin",
            v_high,
            origin.shift(0, d2),
            MustIntersect,
        ),
        ("Q2 mid / next origin", v_mid, origin.shift(0, d2), MustNot),
        ("Q2 high / next low", v_high, q2_low.shift(0, d2), MustNot),
        ("Q3 origin / low", origin, q3_low, MustIntersect),
        ("Q3 low / mid", q3_low, v_mid, MustIntersect),
        ("Q3 low / high", q3_low, v_high, MustNot),
        ("Q3 high / next low", v_high, q2_low.shift(0, d2), MustNot),
        (
            "bend: last Q1 high / Q3 origin",
            prev_q1_high,
            origin,
            MustIntersect,
        ),
        (
            "bend: last Q1 high / Q3 low",
            prev_q1_high,
            q3_low,
            MustIntersect,
        ),
        ("bend: last Q1 high / Q3 mid", prev_q1_high, v_mid, MustNot),
        (
            "bend: last Q1 mid / Q3 origin",
            prev_q1_mid,
            origin,
            MustNot,
        ),
        ("bend: last Q1 mid / Q3 low", prev_q1_mid, q3_low, MustNot),
        (
            "crossing: Q2 origin / Q1 low",
            origin,
            q1_low,
            MustIntersect,
        ),
        (
            "crossing: Q2 origin / previous Q1 high",
            origin,
            prev_q1_high,
            MustIntersect,
        ),
        ("crossing: Q1 low / Q2 low", q1_low, q2_low, MustNot),
        (
            "crossing: previous Q1 high / Q2 low",
            prev_q1_high,
            q2_low,
            MustNot,
        ),
        (
            "crossing: Q1 low / previous vertical high",
            q1_low,
            prev_v_high,
            MustNot,
        ),
        (
            "crossing: previous Q1 high / previous vertical high",
            prev_q1_high,
            prev_v_high,
            MustNot,
        ),
        ("crossing: Q1 mid / Q2 origin", q1_mid, origin, MustNot),
        ("crossing: Q1 mid / Q2 low", q1_mid, q2_low, MustNot),
        ("crossing: Q1 low / Q2 mid", q1_low, v_mid, MustNot),
        (
            "crossing: previous Q1 mid / Q2 origin",
            prev_q1_mid,
            origin,
            MustNot,
        ),
        (
            "clause: shifted-h / shifted-v",
            shifted_h,
            shifted_v,
            MustIntersect,
        ),
        (
            "clause: shifted-h / vertical low crowd",
            shifted_h,
            q2_low,
            MustNot,
        ),
        (
            "clause: shifted-v / horizontal low crowd",
            shifted_v,
            q1_low,
            MustNot,
        ),
        (
            "clause: shifted-h / horizontal low crowd",
            shifted_h,
            q1_low,
            MustIntersect,
        ),
        (
            "clause: shifted-h / Q1 mid",
            shifted_h,
            q1_mid,
            MustIntersect,
        ),
        (
            "clause: shifted-h / previous Q1 high",
            shifted_h,
            prev_q1_high,
            MustIntersect,
        ),
        (
            "clause: shifted-h / Q2 origin",
            shifted_h,
            origin,
            MustIntersect,
        ),
        (
            "clause: shifted-h / previous vertical high",
            shifted_h,
            prev_v_high,
            MustNot,
        ),
        ("clause: shifted-h / Q2 mid", shifted_h, v_mid, MustNot),
        (
            "clause: shifted-v / vertical low crowd",
            shifted_v,
            q2_low,
            MustIntersect,
        ),
        (
            "clause: shifted-v / Q2 origin",
            shifted_v,
            origin,
            MustIntersect,
        ),
        (
            "clause: shifted-v / Q2 mid",
            shifted_v,
            v_mid,
            MustIntersect,
        ),
        (
            "clause: shifted-v / previous Q1 high",
            shifted_v,
            prev_q1_high,
            MustNot,
        ),
        ("clause: shifted-v / Q1 mid", shifted_v, q1_mid, MustNot),
        ("clause: shifted-v / Q2 high", shifted_v, v_high, MustNot),
        (
            "parallel horizontal tracks",
            q1_low,
            q1_low.shift(0, d2),
            MustNot,
        ),
        (
            "parallel vertical tracks",
            q2_low,
            q2_low.shift(d1, 0),
            MustNot,
        ),
        (
            "parallel vertical singles",
            origin,
            origin.shift(d1, 0),
            MustNot,
        ),
    ];

    let classes: Vec<DistanceClass> = table
        .into_iter()
        .map(|(name, p, q, relation)| {
            let nominal_sq = extreme_sq(p, q, 0).0;
            let (min_sq, max_sq) = extreme_sq(p, q, params.eps);
            let (worst_sq, ok) = match relation {
                MustIntersect => (max_sq, max_sq < TOUCH_DIST_SQ),
                MustNot => (min_sq, min_sq > TOUCH_DIST_SQ),
            };
            DistanceClass {
                name,
                dx: q.x - p.x,
                dy: q.y - p.y,
                relation,
                nominal_sq,
                worst_sq,
                margin: (worst_sq - TOUCH_DIST_SQ).abs(),
                ok,
            }
        })
        .collect();
    let spacing = chain_spacing_violations(params);
    let pass = classes.iter().all(|c| c.ok) && spacing.is_empty();
    AuditReport {
        classes,
        spacing,
        pass,
    }
}
