//! Exact unit-disk intersection graphs and their contraction to quotients.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Display;

use thiserror::Error;

use crate::construction::{DiskLabel, Representation, ScaledPoint, MAX_COORD, UNITS_PER_RADIUS};
use crate::graph::Graph;
use crate::quotient::{Atom, AtomKey, QuotientGraph};

/// Grid cell width: one disk diameter, so partners lie in the 3×3 block.
const CELL: i64 = 2 * UNITS_PER_RADIUS;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExtractionError {
    #[error("center ({x}, {y}) of vertex {vertex} exceeds the coordinate guard")]
    Overflow { vertex: usize, x: i64, y: i64 },
    #[error("vertex {0} does not exist")]
    UnknownVertex(usize),
    #[error("group {group} is not a clique: members {u} and {w} are not adjacent")]
    NonClique { group: String, u: String, w: String },
    #[error("group {group} is not a module: {x} is adjacent to member {u} but not to member {w}")]
    NonUniform {
        group: String,
        u: String,
        w: String,
        x: String,
    },
}

/// Intersection graph with vertices in canonical label order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UdgGraph {
    pub labels: Vec<DiskLabel>,
    pub graph: Graph,
}

impl UdgGraph {
    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn index_of(&self, label: &DiskLabel) -> Option<usize> {
        self.labels.binary_search(label).ok()
    }

    /// Contracts by atom keys (labels without member index).
    pub fn quotient(&self) -> Result<QuotientGraph, ExtractionError> {
        let keys: Vec<AtomKey> = self.labels.iter().map(AtomKey::from).collect();
        quotient_of(&self.graph, &keys)
    }

    pub fn to_dimacs(&self) -> String {
        self.graph.to_dimacs()
    }
}

fn guard(centers: &[ScaledPoint]) -> Result<(), ExtractionError> {
    match centers
        .iter()
        .position(|c| c.x.abs() > MAX_COORD || c.y.abs() > MAX_COORD)
    {
        Some(v) => Err(ExtractionError::Overflow {
            vertex: v,
            x: centers[v].x,
            y: centers[v].y,
        }),
        None => Ok(()),
    }
}

fn cell_of(p: ScaledPoint) -> (i64, i64) {
    (p.x.div_euclid(CELL), p.y.div_euclid(CELL))
}

fn bucket<T: Copy>(items: impl Iterator<Item = (ScaledPoint, T)>) -> HashMap<(i64, i64), Vec<T>> {
    let mut grid: HashMap<(i64, i64), Vec<T>> = HashMap::new();
    for (p, t) in items {
        grid.entry(cell_of(p)).or_default().push(t);
    }
    grid
}

/// Closed unit-disk intersection graph of `centers`, via a uniform grid.
pub fn intersection_graph(centers: &[ScaledPoint]) -> Result<Graph, ExtractionError> {
    guard(centers)?;
    let grid = bucket(centers.iter().enumerate().map(|(v, &p)| (p, v as u32)));
    let adj = centers
        .iter()
        .enumerate()
        .map(|(u, &p)| {
            let (cx, cy) = cell_of(p);
            let mut list = Vec::new();
            for dx in -1..=1 {
                for dy in -1..=1 {
                    let Some(cell) = grid.get(&(cx + dx, cy + dy)) else {
                        continue;
                    };
                    list.extend(
                        cell.iter()
                            .copied()
                            .filter(|&v| v as usize != u && p.touches(centers[v as usize])),
                    );
                }
            }
            list.sort_unstable();
            list
        })
        .collect();
    Ok(Graph::from_sorted_adjacency(adj))
}

/// All-pairs reference for [`intersection_graph`].
pub fn intersection_graph_naive(centers: &[ScaledPoint]) -> Result<Graph, ExtractionError> {
    guard(centers)?;
    let mut edges = Vec::new();
    for (u, &p) in centers.iter().enumerate() {
        for (v, &q) in centers.iter().enumerate().skip(u + 1) {
            if p.touches(q) {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph::from_edges(centers.len(), &edges).expect("all-pairs edges are simple"))
}

/// Disks in canonical label order, whatever order `r` holds them in.
fn canonical(r: &Representation) -> (Vec<DiskLabel>, Vec<ScaledPoint>) {
    let mut disks = r.disks.clone();
    disks.sort_by_key(|d| d.label);
    disks.iter().map(|d| (d.label, d.center)).unzip()
}

pub fn extract_graph(r: &Representation) -> Result<UdgGraph, ExtractionError> {
    let (labels, centers) = canonical(r);
    Ok(UdgGraph {
        labels,
        graph: intersection_graph(&centers)?,
    })
}

pub fn extract_graph_naive(r: &Representation) -> Result<UdgGraph, ExtractionError> {
    let (labels, centers) = canonical(r);
    Ok(UdgGraph {
        labels,
        graph: intersection_graph_naive(&centers)?,
    })
}

/// Contracts `g` by the partition induced by `keys` (one key per vertex).
///
/// Every group must be a clique with a uniform outside neighborhood; two
/// groups are joined iff some edge runs between them.
pub fn quotient_of<K: Ord + Clone + Display>(
    g: &Graph,
    keys: &[K],
) -> Result<QuotientGraph<K>, ExtractionError> {
    assert_eq!(keys.len(), g.vertex_count(), "one key per vertex");
    let mut groups: BTreeMap<&K, Vec<usize>> = BTreeMap::new();
    for (v, k) in keys.iter().enumerate() {
        groups.entry(k).or_default().push(v);
    }
    let mut gid = vec![0usize; keys.len()];
    for (idx, members) in groups.values().enumerate() {
        for &v in members {
            gid[v] = idx;
        }
    }
    let name = |v: usize| format!("{}[{v}]", keys[v]);

    let mut joins = Vec::new();
    for (&key, members) in &groups {
        let group = key.to_string();
        let rep = members[0];
        let outside = |u: usize| -> Vec<u32> {
            g.neighbors(u)
                .iter()
                .copied()
                .filter(|&x| keys[x as usize] != *key)
                .collect()
        };
        let rep_out = outside(rep);
        for &u in members {
            let inside = g
                .neighbors(u)
                .iter()
                .filter(|&&x| keys[x as usize] == *key)
                .count();
            if inside + 1 != members.len() {
                let w = *members
                    .iter()
                    .find(|&&w| w != u && !g.has_edge(u, w))
                    .expect("a missing partner exists");
                return Err(ExtractionError::NonClique {
                    group,
                    u: name(u),
                    w: name(w),
                });
            }
            if u != rep {
                let out = outside(u);
                if out != rep_out {
                    let (with, without, x) =
                        match out.iter().find(|x| rep_out.binary_search(x).is_err()) {
                            Some(&x) => (u, rep, x),
                            None => {
                                let x = *rep_out
                                    .iter()
                                    .find(|x| out.binary_search(x).is_err())
                                    .expect("lists differ");
                                (rep, u, x)
                            }
                        };
                    return Err(ExtractionError::NonUniform {
                        group,
                        u: name(with),
                        w: name(without),
                        x: name(x as usize),
                    });
                }
            }
        }
        for &x in &rep_out {
            let other = keys[x as usize].clone();
            if *key < other {
                joins.push((key.clone(), other));
            }
        }
    }
    let atoms = groups
        .iter()
        .map(|(&k, members)| Atom {
            key: k.clone(),
            size: members.len() as u64,
        })
        .collect();
    Ok(QuotientGraph::new(atoms, joins))
}

/// Quotient computed without materializing any edge.
///
/// Each atom is reduced to its distinct centers. An atom is accepted when all
/// its distinct centers pairwise touch; two atoms are joined when every pair
/// of their centers touches and left apart when none does. A mixed pair is a
/// module violation. This is exact because disks at the same center have the
/// same neighbors.
pub fn extract_quotient(r: &Representation) -> Result<QuotientGraph, ExtractionError> {
    guard(&r.centers())?;
    let mut atoms: BTreeMap<AtomKey, (u64, Vec<ScaledPoint>)> = BTreeMap::new();
    for d in &r.disks {
        let e = atoms.entry(AtomKey::from(&d.label)).or_default();
        e.0 += 1;
        e.1.push(d.center);
    }
    let atoms: Vec<(AtomKey, u64, Vec<ScaledPoint>)> = atoms
        .into_iter()
        .map(|(k, (size, mut pts))| {
            pts.sort_unstable();
            pts.dedup();
            (k, size, pts)
        })
        .collect();
    let at = |k: &AtomKey, p: ScaledPoint| format!("{k}@({},{})", p.x, p.y);

    for (k, _, pts) in &atoms {
        for (s, &p) in pts.iter().enumerate() {
            if let Some(&q) = pts[s + 1..].iter().find(|&&q| !p.touches(q)) {
                return Err(ExtractionError::NonClique {
                    group: k.to_string(),
                    u: at(k, p),
                    w: at(k, q),
                });
            }
        }
    }

    let grid = bucket(
        atoms
            .iter()
            .enumerate()
            .flat_map(|(x, (_, _, pts))| pts.iter().map(move |&p| (p, (x, p)))),
    );
    // touching position pairs per atom pair (x < y)
    let mut touching: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    for (&(cx, cy), cell) in &grid {
        for &(x, p) in cell {
            for dx in -1..=1 {
                for dy in -1..=1 {
                    let Some(other) = grid.get(&(cx + dx, cy + dy)) else {
                        continue;
                    };
                    for &(y, q) in other {
                        if x < y && p.touches(q) {
                            *touching.entry((x, y)).or_default() += 1;
                        }
                    }
                }
            }
        }
    }

    let mut joins = Vec::new();
    for (&(x, y), &count) in &touching {
        let (kx, _, px) = &atoms[x];
        let (ky, _, py) = &atoms[y];
        if count == (px.len() * py.len()) as u64 {
            joins.push((*kx, *ky));
            continue;
        }
        // mixed: find q in y and p1, p2 in x that it separates, or swap roles
        let split = |from: &[ScaledPoint], to: &[ScaledPoint]| {
            to.iter().find_map(|&q| {
                let hit = from.iter().find(|&&p| p.touches(q))?;
                let miss = from.iter().find(|&&p| !p.touches(q))?;
                Some((*hit, *miss, q))
            })
        };
        let err = if let Some((hit, miss, q)) = split(px, py) {
            ExtractionError::NonUniform {
                group: kx.to_string(),
                u: at(kx, hit),
                w: at(kx, miss),
                x: at(ky, q),
            }
        } else {
            let (hit, miss, q) = split(py, px).expect("mixed pair separates one side");
            ExtractionError::NonUniform {
                group: ky.to_string(),
                u: at(ky, hit),
                w: at(ky, miss),
                x: at(kx, q),
            }
        };
        return Err(err);
    }

    let atoms = atoms
        .into_iter()
        .map(|(key, size, _)| Atom { key, size })
        .collect();
    Ok(QuotientGraph::new(atoms, joins))
}

/// Subgraph induced on `{v} ∪ N(v)`, keeping labels.
pub fn induced_neighborhood(g: &UdgGraph, v: usize) -> Result<UdgGraph, ExtractionError> {
    if v >= g.vertex_count() {
        return Err(ExtractionError::UnknownVertex(v));
    }
    let mut keep: Vec<usize> = g.graph.neighbors(v).iter().map(|&w| w as usize).collect();
    keep.push(v);
    let (graph, map) = g.graph.induced(&keep);
    Ok(UdgGraph {
        labels: map.iter().map(|&old| g.labels[old]).collect(),
        graph,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{build_representation, ConstructionParams};

    fn pts(v: &[(i64, i64)]) -> Vec<ScaledPoint> {
        v.iter().map(|&(x, y)| ScaledPoint::new(x, y)).collect()
    }

    #[test]
    fn path_of_three_centers() {
        let g = intersection_graph(&pts(&[(0, 0), (18_000, 0), (36_000, 0)])).unwrap();
        assert_eq!(g.edges(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn tangent_disks_touch() {
        let g = intersection_graph(&pts(&[(0, 0), (20_000, 0)])).unwrap();
        assert_eq!(g.edge_count(), 1);
        let g = intersection_graph(&pts(&[(-1, 0), (20_000, 0)])).unwrap();
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn negative_cells_and_diagonals() {
        let c = pts(&[(-1, -1), (-14_142, -14_142), (19_999, -1), (-39_999, 0)]);
        assert_eq!(
            intersection_graph(&c).unwrap(),
            intersection_graph_naive(&c).unwrap()
        );
    }

    #[test]
    fn guard_rejects_far_centers() {
        let c = pts(&[(0, 0), (MAX_COORD + 1, 0)]);
        assert!(matches!(
            intersection_graph(&c),
            Err(ExtractionError::Overflow { vertex: 1, .. })
        ));
    }

    #[test]
    fn triangle_single_atom() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let q = quotient_of(&g, &[7u32, 7, 7]).unwrap();
        assert_eq!(q.atoms().len(), 1);
        assert_eq!(q.atoms()[0].size, 3);
        assert!(q.joins().is_empty());
    }

    #[test]
    fn witnesses_for_broken_groups() {
        let path = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(matches!(
            quotient_of(&path, &[1u32, 1, 1]),
            Err(ExtractionError::NonClique { .. })
        ));
        match quotient_of(&path, &[1u32, 1, 2]) {
            Err(ExtractionError::NonUniform { u, w, x, .. }) => {
                assert_eq!(
                    (u.as_str(), w.as_str(), x.as_str()),
                    ("1[1]", "1[0]", "2[2]")
                );
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn quotient_only_matches_full_extraction() {
        let r = build_representation(&ConstructionParams::new(2, 3, 7)).unwrap();
        let full = extract_graph(&r).unwrap().quotient().unwrap();
        assert_eq!(extract_quotient(&r).unwrap(), full);
    }

    #[test]
    fn isolated_vertex_neighborhood() {
        let r = build_representation(&ConstructionParams::new(1, 1, 1)).unwrap();
        let mut g = extract_graph(&r).unwrap();
        g.graph = Graph::empty(g.vertex_count());
        let h = induced_neighborhood(&g, 3).unwrap();
        assert_eq!(h.vertex_count(), 1);
        assert_eq!(h.labels[0], g.labels[3]);
        assert!(induced_neighborhood(&g, 99).is_err());
    }
}
