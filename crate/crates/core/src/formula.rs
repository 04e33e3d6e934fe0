//! Monotone XOR formulas, exhaustive Max-XOR / Max-Cut, and the reduction
//! from Max-Cut on cubic graphs to monotone XOR(3).

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

/// Largest variable (or vertex) count accepted by the exhaustive solvers.
pub const MAX_BRUTE_FORCE_VARS: usize = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormulaError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("clause ({0}, {1}) references a variable outside 1..={2}")]
    IndexOutOfRange(u32, u32, usize),
    #[error("clause ({0}, {0}) pairs a variable with itself")]
    SelfLoop(u32),
    #[error("clause ({0}, {1}) appears more than once")]
    DuplicateClause(u32, u32),
    #[error("assignment has {got} bits, formula has {expected} variables")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{0} variables exceed the exhaustive-search limit of {MAX_BRUTE_FORCE_VARS}")]
    TooLarge(usize),
    #[error("graph is not cubic: vertex {vertex} has degree {degree}")]
    NotCubic { vertex: usize, degree: usize },
}

/// A monotone XOR formula: a conjunction of clauses `(x_i XOR x_k)`.
///
/// Clauses are stored as `(lo, hi)` with `1 <= lo < hi <= n`, in input order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FormulaDoc", into = "FormulaDoc")]
pub struct Formula {
    n: usize,
    clauses: Vec<(u32, u32)>,
}

#[derive(Serialize, Deserialize)]
struct FormulaDoc {
    n: usize,
    clauses: Vec<(u32, u32)>,
}

impl TryFrom<FormulaDoc> for Formula {
    type Error = FormulaError;
    fn try_from(doc: FormulaDoc) -> Result<Self, Self::Error> {
        Formula::new(doc.n, doc.clauses)
    }
}

impl From<Formula> for FormulaDoc {
    fn from(f: Formula) -> Self {
        FormulaDoc {
            n: f.n,
            clauses: f.clauses,
        }
    }
}

impl Formula {
    pub fn new(
        n: usize,
        clauses: impl IntoIterator<Item = (u32, u32)>,
    ) -> Result<Self, FormulaError> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for (i, k) in clauses {
            if i == 0 || k == 0 || i as usize > n || k as usize > n {
                return Err(FormulaError::IndexOutOfRange(i, k, n));
            }
            if i == k {
                return Err(FormulaError::SelfLoop(i));
            }
            let pair = (i.min(k), i.max(k));
            if !seen.insert(pair) {
                return Err(FormulaError::DuplicateClause(pair.0, pair.1));
            }
            out.push(pair);
        }
        Ok(Formula { n, clauses: out })
    }

    pub fn empty(n: usize) -> Self {
        Formula {
            n,
            clauses: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[(u32, u32)] {
        &self.clauses
    }

    pub fn contains(&self, i: u32, k: u32) -> bool {
        let pair = (i.min(k), i.max(k));
        self.clauses.contains(&pair)
    }

    /// Occurrence count per variable, index 0 holding variable 1.
    pub fn occurrences(&self) -> Vec<usize> {
        let mut occ = vec![0; self.n];
        for &(i, k) in &self.clauses {
            occ[i as usize - 1] += 1;
            occ[k as usize - 1] += 1;
        }
        occ
    }

    /// Clauses in sorted order.
    pub fn canonical(&self) -> Formula {
        let mut clauses = self.clauses.clone();
        clauses.sort_unstable();
        Formula { n: self.n, clauses }
    }

    /// Canonical text form: a `# vars` header comment and one sorted clause per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# monotone XOR formula: n={} m={}", self.n, self.m()).unwrap();
        for (i, k) in self.canonical().clauses {
            writeln!(out, "{i} {k}").unwrap();
        }
        out
    }

    /// Clause graph on vertices `0..n`.
    pub fn clause_graph(&self) -> Graph {
        let edges: Vec<(usize, usize)> = self
            .clauses
            .iter()
            .map(|&(i, k)| (i as usize - 1, k as usize - 1))
            .collect();
        Graph::from_edges(self.n, &edges).expect("formula clauses form a simple graph")
    }
}

/// Parses the line-oriented formula format. The variable count is the largest
/// index mentioned.
pub fn parse_formula(text: &str) -> Result<Formula, FormulaError> {
    let pairs = parse_pairs(text)?;
    let n = pairs.iter().map(|&(i, k)| i.max(k)).max().unwrap_or(0) as usize;
    Formula::new(n, pairs)
}

/// Parses the formula format against a declared variable count.
pub fn parse_formula_with_vars(text: &str, n: usize) -> Result<Formula, FormulaError> {
    Formula::new(n, parse_pairs(text)?)
}

fn parse_pairs(text: &str) -> Result<Vec<(u32, u32)>, FormulaError> {
    let mut pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let malformed = |msg: String| FormulaError::Malformed { line: idx + 1, msg };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(malformed(format!(
                "expected two variable indices, found {} tokens",
                tokens.len()
            )));
        }
        let parse = |t: &str| {
            t.parse::<u32>()
                .map_err(|_| malformed(format!("invalid variable index {t:?}")))
        };
        let i = parse(tokens[0])?;
        let k = parse(tokens[1])?;
        if i == 0 || k == 0 {
            return Err(FormulaError::IndexOutOfRange(i, k, usize::MAX));
        }
        pairs.push((i, k));
    }
    Ok(pairs)
}

/// Outcome of an occurrence-bound check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct XorValidation {
    pub bound: usize,
    pub occurrences: Vec<usize>,
    /// 1-based variables occurring more than `bound` times.
    pub offenders: Vec<u32>,
}

impl XorValidation {
    pub fn accepted(&self) -> bool {
        self.offenders.is_empty()
    }

    /// Every variable occurs exactly `bound` times.
    pub fn exact(&self) -> bool {
        self.occurrences.iter().all(|&o| o == self.bound)
    }
}

pub fn validate_xor_k(f: &Formula, k: usize) -> XorValidation {
    let occurrences = f.occurrences();
    let offenders = occurrences
        .iter()
        .enumerate()
        .filter(|&(_, &o)| o > k)
        .map(|(v, _)| v as u32 + 1)
        .collect();
    XorValidation {
        bound: k,
        occurrences,
        offenders,
    }
}

/// Truth assignment; `bits[v]` is the value of variable `v + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Assignment {
    pub bits: Vec<bool>,
}

impl Assignment {
    pub fn new(bits: Vec<bool>) -> Self {
        Assignment { bits }
    }

    pub fn zeros(n: usize) -> Self {
        Assignment {
            bits: vec![false; n],
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Value of the 1-based variable `i`.
    pub fn value(&self, i: u32) -> bool {
        self.bits[i as usize - 1]
    }

    pub fn complement(&self) -> Self {
        Assignment {
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }

    /// Bits as a `0`/`1` string, variable 1 first.
    pub fn to_bit_string(&self) -> String {
        self.bits
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }
}

pub fn count_satisfied(f: &Formula, a: &Assignment) -> Result<usize, FormulaError> {
    if a.len() != f.n() {
        return Err(FormulaError::LengthMismatch {
            expected: f.n(),
            got: a.len(),
        });
    }
    Ok(f.clauses()
        .iter()
        .filter(|&&(i, k)| a.value(i) != a.value(k))
        .count())
}

/// Exhaustive Max-XOR. Returns the optimum and the lexicographically smallest
/// maximizing assignment (variable 1 most significant, `false < true`).
pub fn brute_force_max_xor(f: &Formula) -> Result<(usize, Assignment), FormulaError> {
    let (best, mask) = max_cut_masks(&f.clause_graph())?;
    let n = f.n();
    let bits = (0..n).map(|v| mask >> (n - 1 - v) & 1 == 1).collect();
    Ok((best, Assignment::new(bits)))
}

/// Exhaustive maximum cut over all (not necessarily balanced) 2-partitions.
pub fn brute_force_max_cut(g: &Graph) -> Result<usize, FormulaError> {
    max_cut_masks(g).map(|(best, _)| best)
}

/// Vertex `v` lives at bit `n-1-v`, so increasing masks enumerate side
/// vectors in lexicographic order and the first maximizer is the smallest.
fn max_cut_masks(g: &Graph) -> Result<(usize, u64), FormulaError> {
    let n = g.vertex_count();
    if n > MAX_BRUTE_FORCE_VARS {
        return Err(FormulaError::TooLarge(n));
    }
    let remap = |m: u64| -> u64 {
        (0..n)
            .filter(|&v| m >> v & 1 == 1)
            .fold(0, |acc, v| acc | 1 << (n - 1 - v))
    };
    let nbr: Vec<u64> = g.neighbor_masks().into_iter().map(remap).collect();
    let full = if n == 0 { 0 } else { (1u64 << n) - 1 };
    let (mut best, mut best_mask) = (0usize, 0u64);
    for mask in 0..=full {
        let mut cut = 0u32;
        let mut rest = mask;
        while rest != 0 {
            let bit = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            cut += (nbr[n - 1 - bit] & !mask & full).count_ones();
        }
        if cut as usize > best {
            best = cut as usize;
            best_mask = mask;
        }
    }
    Ok((best, best_mask))
}

/// A simple graph in which every vertex has degree exactly three.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicGraph(Graph);

impl CubicGraph {
    pub fn new(g: Graph) -> Result<Self, FormulaError> {
        if let Some(v) = (0..g.vertex_count()).find(|&v| g.degree(v) != 3) {
            return Err(FormulaError::NotCubic {
                vertex: v,
                degree: g.degree(v),
            });
        }
        Ok(CubicGraph(g))
    }

    pub fn graph(&self) -> &Graph {
        &self.0
    }

    pub fn k4() -> Self {
        Self::from_list(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    }

    pub fn k33() -> Self {
        let edges: Vec<_> = (0..3).flat_map(|u| (3..6).map(move |v| (u, v))).collect();
        Self::from_list(6, &edges)
    }

    /// Triangular prism: two triangles joined by a perfect matching.
    pub fn prism() -> Self {
        Self::from_list(
            6,
            &[
                (0, 1),
                (1, 2),
                (0, 2),
                (3, 4),
                (4, 5),
                (3, 5),
                (0, 3),
                (1, 4),
                (2, 5),
            ],
        )
    }

    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Self::from_list(10, &edges)
    }

    fn from_list(n: usize, edges: &[(usize, usize)]) -> Self {
        Self::new(Graph::from_edges(n, edges).expect("static graph")).expect("static cubic graph")
    }
}

/// One variable per vertex and one clause per edge.
pub fn maxcut_to_xor3(g: &CubicGraph) -> Formula {
    let clauses = g
        .graph()
        .edges()
        .into_iter()
        .map(|(u, v)| (u as u32 + 1, v as u32 + 1));
    Formula::new(g.graph().vertex_count(), clauses).expect("simple graph yields distinct clauses")
}

/// Uniform random simple cubic graph by the pairing model with rejection.
/// `n` must be even and at least 4.
pub fn random_cubic_graph<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CubicGraph {
    assert!(
        n >= 4 && n.is_multiple_of(2),
        "cubic graphs need an even order >= 4"
    );
    let mut points: Vec<usize> = (0..3 * n).map(|p| p / 3).collect();
    loop {
        points.shuffle(rng);
        let edges: Vec<(usize, usize)> = points
            .chunks(2)
            .map(|c| (c[0].min(c[1]), c[0].max(c[1])))
            .collect();
        if let Ok(g) = Graph::from_edges(n, &edges) {
            return CubicGraph::new(g).expect("pairing model gives degree 3");
        }
    }
}

/// Random monotone XOR(3) formula with distinct pairs: each candidate pair is
/// taken with probability one half while both variables have spare capacity.
pub fn random_xor3_formula<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Formula {
    let mut pairs: Vec<(u32, u32)> = (1..=n as u32)
        .flat_map(|i| (i + 1..=n as u32).map(move |k| (i, k)))
        .collect();
    pairs.shuffle(rng);
    let mut occ = vec![0usize; n + 1];
    let mut clauses = Vec::new();
    for (i, k) in pairs {
        if occ[i as usize] < 3 && occ[k as usize] < 3 && rng.gen_bool(0.5) {
            occ[i as usize] += 1;
            occ[k as usize] += 1;
            clauses.push((i, k));
        }
    }
    Formula::new(n, clauses).expect("distinct pairs")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn triangle() -> Formula {
        parse_formula("1 2\n1 3\n2 3").unwrap()
    }

    /// Independent oracle: enumerate assignments as bool vectors.
    fn oracle_max_xor(f: &Formula) -> usize {
        let n = f.n();
        let mut best = 0;
        let mut bits = vec![false; n];
        loop {
            let sat = f
                .clauses()
                .iter()
                .filter(|&&(i, k)| bits[i as usize - 1] ^ bits[k as usize - 1])
                .count();
            best = best.max(sat);
            match bits.iter().position(|b| !b) {
                None => return best,
                Some(p) => {
                    bits[..p].iter_mut().for_each(|b| *b = false);
                    bits[p] = true;
                }
            }
        }
    }

    #[test]
    fn parses_triangle() {
        let f = triangle();
        assert_eq!(f.n(), 3);
        assert_eq!(f.clauses(), &[(1, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse_formula("1 1"), Err(FormulaError::SelfLoop(1)));
        assert_eq!(
            parse_formula("1 2\n2 1"),
            Err(FormulaError::DuplicateClause(1, 2))
        );
        assert!(matches!(
            parse_formula("1 x"),
            Err(FormulaError::Malformed { line: 1, .. })
        ));
        assert!(matches!(
            parse_formula("1 2 3"),
            Err(FormulaError::Malformed { .. })
        ));
        assert!(matches!(
            parse_formula("0 2"),
            Err(FormulaError::IndexOutOfRange(0, 2, _))
        ));
        assert_eq!(
            parse_formula_with_vars("1 4", 3),
            Err(FormulaError::IndexOutOfRange(1, 4, 3))
        );
    }

    #[test]
    fn comments_and_canonical_text() {
        let f = parse_formula("# header\n2 3 # trailing\n\n1 2\n").unwrap();
        assert_eq!(f.clauses(), &[(2, 3), (1, 2)]);
        let text = f.to_text();
        assert_eq!(parse_formula(&text).unwrap(), f.canonical());
        assert!(text.ends_with("1 2\n2 3\n"));
    }

    #[test]
    fn occurrence_validation() {
        let v = validate_xor_k(&triangle(), 3);
        assert!(v.accepted());
        assert_eq!(v.occurrences, vec![2, 2, 2]);
        let v = validate_xor_k(&triangle(), 1);
        assert_eq!(v.offenders, vec![1, 2, 3]);
        assert!(validate_xor_k(&Formula::empty(0), 3).accepted());
    }

    #[test]
    fn satisfied_counts() {
        let f = triangle();
        let a = Assignment::new(vec![false, true, true]);
        assert_eq!(count_satisfied(&f, &a).unwrap(), 2);
        assert_eq!(count_satisfied(&f, &Assignment::zeros(3)).unwrap(), 0);
        let single = parse_formula("1 2").unwrap();
        assert_eq!(
            count_satisfied(&single, &Assignment::new(vec![false, true])).unwrap(),
            1
        );
        assert!(matches!(
            count_satisfied(&f, &Assignment::zeros(2)),
            Err(FormulaError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn max_xor_small_cases() {
        let (k, w) = brute_force_max_xor(&triangle()).unwrap();
        assert_eq!(k, oracle_max_xor(&triangle()));
        assert_eq!(k, 2);
        assert_eq!(count_satisfied(&triangle(), &w).unwrap(), 2);
        // smallest maximizer of the triangle is 001
        assert_eq!(w.to_bit_string(), "001");
        assert_eq!(
            brute_force_max_xor(&parse_formula("1 2").unwrap())
                .unwrap()
                .0,
            1
        );
        assert_eq!(brute_force_max_xor(&Formula::empty(3)).unwrap().0, 0);
        assert_eq!(
            brute_force_max_xor(&Formula::empty(25)),
            Err(FormulaError::TooLarge(25))
        );
    }

    #[test]
    fn cubic_reduction() {
        let f = maxcut_to_xor3(&CubicGraph::k4());
        assert_eq!((f.n(), f.m()), (4, 6));
        assert_eq!(f.occurrences(), vec![3; 4]);
        assert!(validate_xor_k(&f, 3).exact());
        assert_eq!(brute_force_max_xor(&f).unwrap().0, 4);
        assert_eq!(brute_force_max_cut(CubicGraph::k4().graph()).unwrap(), 4);
        let f33 = maxcut_to_xor3(&CubicGraph::k33());
        assert_eq!(f33.m(), 9);
        assert_eq!(brute_force_max_xor(&f33).unwrap().0, 9);
        assert_eq!(oracle_max_xor(&f33), 9);
    }

    #[test]
    fn max_cut_small_graphs() {
        let edge = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert_eq!(brute_force_max_cut(&edge).unwrap(), 1);
        assert_eq!(brute_force_max_cut(&Graph::empty(5)).unwrap(), 0);
        assert!(CubicGraph::new(edge).is_err());
    }

    #[test]
    fn random_generators_respect_bounds() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in [4, 6, 8, 10] {
            let g = random_cubic_graph(n, &mut rng);
            assert_eq!(g.graph().edge_count(), 3 * n / 2);
        }
        for n in 1..8 {
            let f = random_xor3_formula(n, &mut rng);
            assert!(validate_xor_k(&f, 3).accepted());
        }
    }

    fn arb_formula() -> impl Strategy<Value = Formula> {
        (1usize..9).prop_flat_map(|n| {
            let pairs: Vec<(u32, u32)> = (1..=n as u32)
                .flat_map(|i| (i + 1..=n as u32).map(move |k| (i, k)))
                .collect();
            let len = pairs.len();
            proptest::collection::vec(any::<bool>(), len).prop_map(move |take| {
                let clauses = pairs.iter().zip(take).filter(|(_, t)| *t).map(|(p, _)| *p);
                Formula::new(n, clauses).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn complement_preserves_satisfaction(f in arb_formula(), seed in any::<u64>()) {
            let bits = (0..f.n()).map(|v| seed >> (v % 64) & 1 == 1).collect();
            let a = Assignment::new(bits);
            prop_assert_eq!(count_satisfied(&f, &a).unwrap(), count_satisfied(&f, &a.complement()).unwrap());
        }

        #[test]
        fn max_xor_bounds(f in arb_formula()) {
            let (k, w) = brute_force_max_xor(&f).unwrap();
            prop_assert_eq!(k, oracle_max_xor(&f));
            prop_assert!(k <= f.m());
            prop_assert_eq!(count_satisfied(&f, &w).unwrap(), k);
            prop_assert_eq!(count_satisfied(&f, &w.complement()).unwrap(), k);
            prop_assert_eq!(k == f.m(), is_bipartite(&f.clause_graph()));
        }
    }

    fn is_bipartite(g: &Graph) -> bool {
        let mut color = vec![None; g.vertex_count()];
        for s in 0..g.vertex_count() {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(false);
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &v in g.neighbors(u) {
                    let v = v as usize;
                    match color[v] {
                        None => {
                            color[v] = Some(!color[u].unwrap());
                            stack.push(v);
                        }
                        Some(c) if c == color[u].unwrap() => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }
}
