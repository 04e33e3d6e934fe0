//! Simple undirected graphs and the DIMACS-style edge format.

use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({0}, {1}) references a vertex outside 0..{2}")]
    VertexOutOfRange(usize, usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("line {line}: {msg}")]
    Dimacs { line: usize, msg: String },
}

/// Simple undirected graph with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    edge_count: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a graph from 0-based edges, rejecting loops and duplicates.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange(u, v, n));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].push(v as u32);
            adj[v].push(u as u32);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                let v = w[0] as usize;
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
        }
        Ok(Graph {
            adj,
            edge_count: edges.len(),
        })
    }

    /// Builds a graph from adjacency lists that are already symmetric,
    /// sorted and loop-free.
    pub(crate) fn from_sorted_adjacency(adj: Vec<Vec<u32>>) -> Self {
        let twice: usize = adj.iter().map(Vec::len).sum();
        debug_assert!(twice.is_multiple_of(2));
        Graph {
            adj,
            edge_count: twice / 2,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&(v as u32)).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (u, list) in self.adj.iter().enumerate() {
            for &v in list {
                if (v as usize) > u {
                    out.push((u, v as usize));
                }
            }
        }
        out
    }

    /// Neighbor bitmasks; only valid for graphs with at most 64 vertices.
    pub(crate) fn neighbor_masks(&self) -> Vec<u64> {
        assert!(self.vertex_count() <= 64);
        self.adj
            .iter()
            .map(|list| list.iter().fold(0u64, |m, &v| m | (1u64 << v)))
            .collect()
    }

    /// Number of edges with endpoints on different sides of `side`.
    pub fn cut_value(&self, side: &[bool]) -> usize {
        self.edges()
            .into_iter()
            .filter(|&(u, v)| side[u] != side[v])
            .count()
    }

    /// Vertex-induced subgraph; the returned map sends new indices to old.
    pub fn induced(&self, vertices: &[usize]) -> (Graph, Vec<usize>) {
        let mut keep: Vec<usize> = vertices.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let index_of = |v: u32| keep.binary_search(&(v as usize)).ok();
        let adj = keep
            .iter()
            .map(|&old| {
                self.adj[old]
                    .iter()
                    .filter_map(|&w| index_of(w).map(|i| i as u32))
                    .collect()
            })
            .collect();
        (Graph::from_sorted_adjacency(adj), keep)
    }

    /// DIMACS-style text: `p edge <n> <m>` then `e u v` lines, 1-based, sorted.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        writeln!(out, "p edge {} {}", self.vertex_count(), self.edge_count()).unwrap();
        for (u, v) in self.edges() {
            writeln!(out, "e {} {}", u + 1, v + 1).unwrap();
        }
        out
    }

    pub fn parse_dimacs(text: &str) -> Result<Self, GraphError> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            let err = |msg: &str| GraphError::Dimacs {
                line: line_no,
                msg: msg.to_string(),
            };
            let tokens: Vec<&str> = line.split_whitespace().collect();
            match tokens.as_slice() {
                ["p", "edge", n, m] | ["p", "col", n, m] => {
                    if header.is_some() {
                        return Err(err("repeated problem line"));
                    }
                    let n = n.parse().map_err(|_| err("bad vertex count"))?;
                    let m = m.parse().map_err(|_| err("bad edge count"))?;
                    header = Some((n, m));
                }
                ["e", u, v] => {
                    let (n, _) = header.ok_or_else(|| err("edge before problem line"))?;
                    let u: usize = u.parse().map_err(|_| err("bad endpoint"))?;
                    let v: usize = v.parse().map_err(|_| err("bad endpoint"))?;
                    if u == 0 || v == 0 || u > n || v > n {
                        return Err(err("endpoint out of range"));
                    }
                    edges.push((u - 1, v - 1));
                }
                _ => return Err(err("unrecognized line")),
            }
        }
        let (n, m) = header.ok_or(GraphError::Dimacs {
            line: 0,
            msg: "missing problem line".into(),
        })?;
        if edges.len() != m {
            return Err(GraphError::Dimacs {
                line: 0,
                msg: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        Graph::from_edges(n, &edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimacs_round_trip() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 1), (3, 0)]).unwrap();
        let text = g.to_dimacs();
        assert_eq!(text, "p edge 4 3\ne 1 2\ne 1 4\ne 2 3\n");
        assert_eq!(Graph::parse_dimacs(&text).unwrap(), g);
    }

    #[test]
    fn rejects_bad_edges() {
        assert_eq!(
            Graph::from_edges(3, &[(0, 0)]),
            Err(GraphError::SelfLoop(0))
        );
        assert_eq!(
            Graph::from_edges(3, &[(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(0, 1))
        );
        assert!(Graph::parse_dimacs("p edge 2 1\ne 1 3\n").is_err());
        assert!(Graph::parse_dimacs("p edge 2 2\ne 1 2\n").is_err());
    }

    #[test]
    fn induced_subgraph_keeps_internal_edges() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let (h, map) = g.induced(&[2, 1, 3]);
        assert_eq!(map, vec![1, 2, 3]);
        assert_eq!(h.edges(), vec![(0, 1), (1, 2)]);
    }
}
