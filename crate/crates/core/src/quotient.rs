//! Atom-contracted graphs: every atom is a clique and every join between two
//! atoms is complete bipartite.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::construction::{DiskLabel, GadgetKind, Part, SetId};

/// A disk label without its member index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AtomKey {
    pub set: SetId,
    pub ordinal: u32,
    pub part: Part,
    pub kind: GadgetKind,
}

impl From<&DiskLabel> for AtomKey {
    fn from(l: &DiskLabel) -> Self {
        AtomKey {
            set: l.set,
            ordinal: l.ordinal,
            part: l.part,
            kind: l.kind,
        }
    }
}

impl AtomKey {
    pub fn same_gadget(&self, other: &AtomKey) -> bool {
        self.set == other.set && self.ordinal == other.ordinal
    }
}

impl std::fmt::Display for AtomKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}#{}:{:?}:{}",
            self.set,
            self.ordinal,
            self.kind,
            self.part.name()
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Atom<K> {
    pub key: K,
    pub size: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientGraph<K = AtomKey> {
    atoms: Vec<Atom<K>>,
    joins: Vec<(usize, usize)>,
    #[serde(skip)]
    adj: Vec<Vec<usize>>,
}

impl<K: Ord + Clone> QuotientGraph<K> {
    /// Atoms are sorted by key; joins are given as key pairs and deduplicated.
    ///
    /// Panics on a self-join, an unknown key or a repeated atom key.
    pub fn new(mut atoms: Vec<Atom<K>>, joins: impl IntoIterator<Item = (K, K)>) -> Self {
        atoms.sort_by(|x, y| x.key.cmp(&y.key));
        assert!(
            atoms.windows(2).all(|w| w[0].key < w[1].key),
            "repeated atom key"
        );
        let index = |k: &K| {
            atoms
                .binary_search_by(|a| a.key.cmp(k))
                .unwrap_or_else(|_| panic!("join references an unknown atom"))
        };
        let set: BTreeSet<(usize, usize)> = joins
            .into_iter()
            .map(|(p, q)| {
                let (x, y) = (index(&p), index(&q));
                assert_ne!(x, y, "atom joined to itself");
                (x.min(y), x.max(y))
            })
            .collect();
        let joins: Vec<_> = set.into_iter().collect();
        let mut adj = vec![Vec::new(); atoms.len()];
        for &(x, y) in &joins {
            adj[x].push(y);
            adj[y].push(x);
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        QuotientGraph { atoms, joins, adj }
    }

    pub fn atoms(&self) -> &[Atom<K>] {
        &self.atoms
    }

    pub fn joins(&self) -> &[(usize, usize)] {
        &self.joins
    }

    pub fn neighbors(&self, x: usize) -> &[usize] {
        &self.adj[x]
    }

    pub fn index_of(&self, key: &K) -> Option<usize> {
        self.atoms.binary_search_by(|a| a.key.cmp(key)).ok()
    }

    pub fn joined(&self, x: usize, y: usize) -> bool {
        self.adj[x].binary_search(&y).is_ok()
    }

    pub fn total_size(&self) -> u64 {
        self.atoms.iter().map(|a| a.size).sum()
    }

    /// Edge count of the expanded graph.
    pub fn expanded_edge_count(&self) -> u64 {
        let inner: u64 = self
            .atoms
            .iter()
            .map(|a| a.size * a.size.saturating_sub(1) / 2)
            .sum();
        let across: u64 = self
            .joins
            .iter()
            .map(|&(x, y)| self.atoms[x].size * self.atoms[y].size)
            .sum();
        inner + across
    }

    /// Expanded degree of any member of atom `x`.
    pub fn expanded_degree(&self, x: usize) -> u64 {
        self.atoms[x].size - 1 + self.adj[x].iter().map(|&y| self.atoms[y].size).sum::<u64>()
    }

    /// Expanded edge list; `vertex(key, member)` maps atom members to vertex ids.
    pub fn expand_edges(&self, mut vertex: impl FnMut(&K, u64) -> usize) -> Vec<(usize, usize)> {
        let members: Vec<Vec<usize>> = self
            .atoms
            .iter()
            .map(|a| (0..a.size).map(|m| vertex(&a.key, m)).collect())
            .collect();
        let mut edges = Vec::new();
        for ms in &members {
            for (p, &u) in ms.iter().enumerate() {
                for &v in &ms[p + 1..] {
                    edges.push((u.min(v), u.max(v)));
                }
            }
        }
        for &(x, y) in &self.joins {
            for &u in &members[x] {
                for &v in &members[y] {
                    edges.push((u.min(v), u.max(v)));
                }
            }
        }
        edges.sort_unstable();
        edges
    }
}

impl<K: Ord + Clone + std::fmt::Display> QuotientGraph<K> {
    /// First structural difference from `other`, if any.
    pub fn difference(&self, other: &QuotientGraph<K>) -> Option<String> {
        let keys = |q: &QuotientGraph<K>| -> BTreeSet<K> {
            q.atoms.iter().map(|a| a.key.clone()).collect()
        };
        let (mine, theirs) = (keys(self), keys(other));
        if let Some(k) = mine.symmetric_difference(&theirs).next() {
            let side = if mine.contains(k) {
                "only left"
            } else {
                "only right"
            };
            return Some(format!("atom {k} present {side}"));
        }
        for (a, b) in self.atoms.iter().zip(&other.atoms) {
            if a.size != b.size {
                return Some(format!("atom {} has size {} vs {}", a.key, a.size, b.size));
            }
        }
        let pairs = |q: &QuotientGraph<K>| -> BTreeSet<(K, K)> {
            q.joins
                .iter()
                .map(|&(x, y)| (q.atoms[x].key.clone(), q.atoms[y].key.clone()))
                .collect()
        };
        let (mine, theirs) = (pairs(self), pairs(other));
        if let Some((x, y)) = mine.symmetric_difference(&theirs).next() {
            let side = if mine.contains(&(x.clone(), y.clone())) {
                "only left"
            } else {
                "only right"
            };
            return Some(format!("join {x} -- {y} present {side}"));
        }
        None
    }

    /// Line-oriented text: `atom <key> <size>` then `join <key> <key>`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for a in &self.atoms {
            out.push_str(&format!("atom {} {}\n", a.key, a.size));
        }
        for &(x, y) in &self.joins {
            out.push_str(&format!(
                "join {} {}\n",
                self.atoms[x].key, self.atoms[y].key
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> QuotientGraph<u32> {
        QuotientGraph::new(
            vec![
                Atom { key: 2, size: 1 },
                Atom { key: 1, size: 3 },
                Atom { key: 3, size: 2 },
            ],
            [(1, 2), (3, 2), (2, 1)],
        )
    }

    #[test]
    fn counts_expanded_edges() {
        let q = path3();
        assert_eq!(q.joins().len(), 2);
        // K3 + K2 + 3 + 2 join edges
        assert_eq!(q.expanded_edge_count(), 3 + 1 + 3 + 2);
        assert_eq!(q.expanded_degree(1), 5);
        let mut next = 0;
        let edges = q.expand_edges(|_, _| {
            next += 1;
            next - 1
        });
        assert_eq!(edges.len() as u64, q.expanded_edge_count());
    }

    #[test]
    fn reports_differences() {
        let q = path3();
        assert_eq!(q.difference(&q.clone()), None);
        let r = QuotientGraph::new(q.atoms().to_vec(), [(1, 2)]);
        assert!(q.difference(&r).unwrap().contains("join 2 -- 3"));
    }
}
