//! Structural checks on generated instances: set sizes, clique cover, cut
//! matrices between sets and the closed-form cut value of set colorings.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::construction::{Representation, SetId};
use crate::formula::Formula;
use crate::quotient::QuotientGraph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("coloring is unbalanced: {blue} blue sets and {red} red sets")]
    Unbalanced { blue: usize, red: usize },
    #[error("coloring covers {got} sets, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("inconsistent coloring statistics: {0}")]
    InconsistentStats(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Blue,
    Red,
}

impl Color {
    pub fn flip(self) -> Color {
        match self {
            Color::Blue => Color::Red,
            Color::Red => Color::Blue,
        }
    }
}

/// One color per set, indexed by [`SetId::index`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SetColoring {
    pub colors: Vec<Color>,
}

impl SetColoring {
    pub fn new(colors: Vec<Color>) -> Self {
        assert!(colors.len().is_multiple_of(2), "two sets per variable");
        SetColoring { colors }
    }

    /// Coloring for bitmask `mask`, set 0 at the most significant of `2n` bits,
    /// a set bit meaning red.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        let len = 2 * n;
        SetColoring::new(
            (0..len)
                .map(|s| {
                    if mask >> (len - 1 - s) & 1 == 1 {
                        Color::Red
                    } else {
                        Color::Blue
                    }
                })
                .collect(),
        )
    }

    pub fn variables(&self) -> usize {
        self.colors.len() / 2
    }

    pub fn get(&self, s: SetId) -> Color {
        self.colors[s.index()]
    }

    pub fn blue_count(&self) -> usize {
        self.colors.iter().filter(|&&c| c == Color::Blue).count()
    }

    pub fn is_balanced(&self) -> bool {
        2 * self.blue_count() == self.colors.len()
    }

    pub fn swapped(&self) -> SetColoring {
        SetColoring::new(self.colors.iter().map(|c| c.flip()).collect())
    }
}

impl fmt::Display for SetColoring {
    /// `B`/`R` per set in index order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.colors {
            f.write_str(match c {
                Color::Blue => "B",
                Color::Red => "R",
            })?;
        }
        Ok(())
    }
}

/// All balanced colorings of `2n` sets in lexicographic order.
pub fn balanced_colorings(n: usize) -> impl Iterator<Item = SetColoring> {
    assert!(n <= 31, "too many sets to enumerate");
    let len = 2 * n as u32;
    (0u64..1 << len)
        .filter(move |m| m.count_ones() == n as u32)
        .map(move |m| SetColoring::from_mask(n, m))
}

/// Classification of a coloring with respect to a formula.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ColoringStats {
    /// Variables with both sets blue (equal to the number with both red).
    pub t: usize,
    /// Clauses between two balanced variables.
    pub m1: usize,
    /// Clauses between a balanced and an unbalanced variable.
    pub m2: usize,
    /// Clauses between a blue and a red variable.
    pub m3: usize,
    /// Clauses counted in `m1` whose sets `(i,0)` and `(k,1)` share a color.
    pub m1_star: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum VarKind {
    Balanced,
    Blue,
    Red,
}

fn var_kind(c: &SetColoring, i: u32) -> VarKind {
    match (c.get(SetId::new(i, 0)), c.get(SetId::new(i, 1))) {
        (Color::Blue, Color::Blue) => VarKind::Blue,
        (Color::Red, Color::Red) => VarKind::Red,
        _ => VarKind::Balanced,
    }
}

pub fn coloring_stats(f: &Formula, c: &SetColoring) -> Result<ColoringStats, AnalysisError> {
    if c.variables() != f.n() {
        return Err(AnalysisError::LengthMismatch {
            got: c.colors.len(),
            expected: 2 * f.n(),
        });
    }
    let mut st = ColoringStats {
        t: (1..=f.n() as u32)
            .filter(|&i| var_kind(c, i) == VarKind::Blue)
            .count(),
        ..Default::default()
    };
    for &(i, k) in f.clauses() {
        use VarKind::*;
        match (var_kind(c, i), var_kind(c, k)) {
            (Balanced, Balanced) => {
                st.m1 += 1;
                if c.get(SetId::new(i, 0)) == c.get(SetId::new(k, 1)) {
                    st.m1_star += 1;
                }
            }
            (Balanced, _) | (_, Balanced) => st.m2 += 1,
            (Blue, Red) | (Red, Blue) => st.m3 += 1,
            _ => {}
        }
    }
    Ok(st)
}

/// Closed-form cut value of a balanced set coloring:
/// `2a·n(n−1) + 4a·t + 2(m1 − m1*) + m2 + 2·m3`.
pub fn eq1_value(n: usize, a: u64, m: usize, st: &ColoringStats) -> Result<u64, AnalysisError> {
    let bad = |msg: String| Err(AnalysisError::InconsistentStats(msg));
    if st.m1 + st.m2 + st.m3 > m {
        return bad(format!(
            "m1+m2+m3 = {} exceeds m = {m}",
            st.m1 + st.m2 + st.m3
        ));
    }
    if st.m1_star > st.m1 {
        return bad(format!("m1* = {} exceeds m1 = {}", st.m1_star, st.m1));
    }
    if 2 * st.t > n {
        return bad(format!("t = {} exceeds n/2 for n = {n}", st.t));
    }
    let n = n as u64;
    Ok(2 * a * n * n.saturating_sub(1)
        + 4 * a * st.t as u64
        + 2 * (st.m1 - st.m1_star) as u64
        + st.m2 as u64
        + 2 * st.m3 as u64)
}

/// Symmetric matrix over the `2n` sets; the diagonal holds intra-set edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CutMatrix {
    n: usize,
    entries: Vec<u64>,
}

impl CutMatrix {
    pub fn zeros(n: usize) -> Self {
        CutMatrix {
            n,
            entries: vec![0; 4 * n * n],
        }
    }

    /// Number of variables.
    pub fn variables(&self) -> usize {
        self.n
    }

    fn at(&self, s: SetId, t: SetId) -> usize {
        s.index() * 2 * self.n + t.index()
    }

    pub fn get(&self, s: SetId, t: SetId) -> u64 {
        self.entries[self.at(s, t)]
    }

    /// Adds `w` to the entry of two distinct sets, symmetrically.
    pub fn add(&mut self, s: SetId, t: SetId, w: u64) {
        assert_ne!(s, t, "use add_diagonal");
        let (x, y) = (self.at(s, t), self.at(t, s));
        self.entries[x] += w;
        self.entries[y] += w;
    }

    pub fn add_diagonal(&mut self, s: SetId, w: u64) {
        let x = self.at(s, s);
        self.entries[x] += w;
    }

    /// Sum over unordered set pairs, diagonal included.
    pub fn total(&self) -> u64 {
        let mut sum = 0;
        for s in SetId::all(self.n) {
            for t in SetId::all(self.n).filter(|t| t.index() >= s.index()) {
                sum += self.get(s, t);
            }
        }
        sum
    }

    /// Whitespace-aligned table with set ids as headers.
    pub fn to_text(&self) -> String {
        let ids: Vec<SetId> = SetId::all(self.n).collect();
        let width = self
            .entries
            .iter()
            .map(|e| e.to_string().len())
            .max()
            .unwrap_or(1)
            .max(5);
        let mut out = format!("{:>5}", "");
        for s in &ids {
            out.push_str(&format!(" {:>width$}", s.to_string()));
        }
        out.push('\n');
        for s in &ids {
            out.push_str(&format!("{:>5}", s.to_string()));
            for t in &ids {
                out.push_str(&format!(" {:>width$}", self.get(*s, *t)));
            }
            out.push('\n');
        }
        out
    }
}

/// Measured cut matrix of a quotient whose atoms carry set ids.
pub fn cut_matrix(q: &QuotientGraph, n: usize) -> CutMatrix {
    let mut m = CutMatrix::zeros(n);
    for x in q.atoms() {
        m.add_diagonal(x.key.set, x.size * x.size.saturating_sub(1) / 2);
    }
    for &(x, y) in q.joins() {
        let (p, r) = (&q.atoms()[x], &q.atoms()[y]);
        let w = p.size * r.size;
        if p.key.set == r.key.set {
            m.add_diagonal(p.key.set, w);
        } else {
            m.add(p.key.set, r.key.set, w);
        }
    }
    m
}

/// Cut value of a balanced coloring: entries summed over bichromatic pairs.
pub fn evaluate_coloring(m: &CutMatrix, c: &SetColoring) -> Result<u64, AnalysisError> {
    if c.variables() != m.variables() {
        return Err(AnalysisError::LengthMismatch {
            got: c.colors.len(),
            expected: 2 * m.variables(),
        });
    }
    if !c.is_balanced() {
        let blue = c.blue_count();
        return Err(AnalysisError::Unbalanced {
            blue,
            red: c.colors.len() - blue,
        });
    }
    let mut sum = 0;
    for s in SetId::all(m.n) {
        for t in SetId::all(m.n).filter(|t| t.index() > s.index()) {
            if c.get(s) != c.get(t) {
                sum += m.get(s, t);
            }
        }
    }
    Ok(sum)
}

/// Set id of every disk, in representation order.
pub fn label_sets(r: &Representation) -> Vec<SetId> {
    r.disks.iter().map(|d| d.label.set).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SetSizeReport {
    pub expected: u64,
    /// Size per set, in index order.
    pub sizes: Vec<u64>,
    pub total: u64,
    pub pass: bool,
}

fn size_report(n: usize, b: u64, sets: impl Iterator<Item = (SetId, u64)>) -> SetSizeReport {
    let mut sizes = vec![0u64; 2 * n];
    for (s, w) in sets {
        sizes[s.index()] += w;
    }
    let expected = 4 * (n as u64 + 1) * (b + 1);
    SetSizeReport {
        expected,
        total: sizes.iter().sum(),
        pass: sizes.iter().all(|&s| s == expected),
        sizes,
    }
}

pub fn set_sizes(r: &Representation) -> SetSizeReport {
    size_report(
        r.params.n,
        r.params.b,
        r.disks.iter().map(|d| (d.label.set, 1)),
    )
}

/// Set sizes from atom sizes of a quotient.
pub fn set_sizes_of_quotient(q: &QuotientGraph, n: usize, b: u64) -> SetSizeReport {
    size_report(n, b, q.atoms().iter().map(|a| (a.key.set, a.size)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CliqueCoverReport {
    pub bound: u64,
    /// Intra-gadget joins and non-trivial atoms examined.
    pub checked: usize,
    /// Smallest clique found around an intra-gadget edge.
    pub min_clique: Option<u64>,
    /// Smallest clique found around an edge linking two gadgets.
    pub min_link_clique: Option<u64>,
    pub violations: Vec<String>,
    pub pass: bool,
}

/// Heaviest clique among `cands` (each joined to everything already chosen).
fn heaviest_clique(q: &QuotientGraph, cands: &[usize]) -> u64 {
    let Some((&first, rest)) = cands.split_first() else {
        return 0;
    };
    let with: Vec<usize> = rest
        .iter()
        .copied()
        .filter(|&y| q.joined(first, y))
        .collect();
    let take = q.atoms()[first].size + heaviest_clique(q, &with);
    take.max(heaviest_clique(q, rest))
}

/// Weight of the heaviest clique containing atoms `x` and `y` (possibly equal).
fn clique_through(q: &QuotientGraph, x: usize, y: usize) -> u64 {
    let common: Vec<usize> = q
        .neighbors(x)
        .iter()
        .copied()
        .filter(|&z| z != y && (x == y || q.joined(y, z)))
        .collect();
    let base = q.atoms()[x].size + if x == y { 0 } else { q.atoms()[y].size };
    base + heaviest_clique(q, &common)
}

/// Checks that every edge inside a gadget lies in a clique of at least `b+1`
/// vertices, using atom sizes only.
pub fn verify_clique_cover(q: &QuotientGraph, b: u64) -> CliqueCoverReport {
    let mut rep = CliqueCoverReport {
        bound: b + 1,
        checked: 0,
        min_clique: None,
        min_link_clique: None,
        violations: Vec::new(),
        pass: true,
    };
    let record = |rep: &mut CliqueCoverReport, what: String, w: u64| {
        rep.checked += 1;
        rep.min_clique = Some(rep.min_clique.map_or(w, |m| m.min(w)));
        if w < b + 1 {
            rep.violations
                .push(format!("{what}: clique {w} < {}", b + 1));
        }
    };
    for (x, atom) in q.atoms().iter().enumerate() {
        if atom.size >= 2 {
            record(
                &mut rep,
                format!("inside {}", atom.key),
                clique_through(q, x, x),
            );
        }
    }
    for &(x, y) in q.joins() {
        let (kx, ky) = (&q.atoms()[x].key, &q.atoms()[y].key);
        let w = clique_through(q, x, y);
        if kx.same_gadget(ky) {
            record(&mut rep, format!("{kx} -- {ky}"), w);
        } else {
            rep.min_link_clique = Some(rep.min_link_clique.map_or(w, |m| m.min(w)));
        }
    }
    rep.pass = rep.violations.is_empty();
    rep
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PreconditionReport {
    pub n: usize,
    pub m: usize,
    pub a: u64,
    pub b: u64,
    /// `2a > m`.
    pub dominance: bool,
    /// `a² ≥ b`.
    pub link_clique: bool,
    /// `b ≥ 2a·n(n−1) + 2m + 1`.
    pub threshold: bool,
    pub required_b: u64,
    /// Smallest `a`, and the smallest `b` for it, satisfying all three.
    pub suggested: (u64, u64),
    pub pass: bool,
}

/// Parameter conditions under which the bisection value of the construction
/// reflects the Max-XOR optimum.
pub fn theorem_preconditions(n: usize, m: usize, a: u64, b: u64) -> PreconditionReport {
    let nn = n as u64 * (n as u64).saturating_sub(1);
    let required = |a: u64| 2 * a * nn + 2 * m as u64 + 1;
    let mut sa = m as u64 / 2 + 1;
    while sa * sa < required(sa) {
        sa += 1;
    }
    let dominance = 2 * a > m as u64;
    let link_clique = a.checked_mul(a).is_none_or(|sq| sq >= b);
    let threshold = b >= required(a);
    PreconditionReport {
        n,
        m,
        a,
        b,
        dominance,
        link_clique,
        threshold,
        required_b: required(a),
        suggested: (sa, required(sa)),
        pass: dominance && link_clique && threshold,
    }
}
