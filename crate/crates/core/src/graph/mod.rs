//! Simple undirected graphs stored as adjacency bitsets.

mod automorphism;
mod construct;
mod io;
pub(crate) mod partition;

use std::collections::VecDeque;
use std::fmt;

use nalgebra::DMatrix;
use serde::{Serialize, Serializer};

use crate::error::{check_vertex, Error, Result};

pub use automorphism::{automorphisms, automorphisms_with_limits, for_each_automorphism, AutomorphismLimits, Permutation};
pub use construct::{cartesian_product, join_by_path, rabbit_ear, JoinedGraph, RabbitEar};
pub use io::{load_graph, serialize_graph, GraphFormat};
pub use partition::{coarsest_equitable_partition, Partition};

/// Hard ceiling on the number of vertices.
pub const MAX_VERTICES: usize = 10_000;

/// A simple undirected graph on vertices `0..n`.
///
/// Rows of the adjacency matrix are packed into `u64` words. The diagonal is
/// always empty and the relation is kept symmetric by every mutator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64);
        Graph {
            n,
            words,
            bits: vec![0; n * words],
            labels: None,
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooLarge {
                what: "vertex count",
                size: n,
                limit: MAX_VERTICES,
            });
        }
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            check_vertex(u, n)?;
            check_vertex(v, n)?;
            if u == v {
                return Err(Error::Loop(u));
            }
            if g.has_edge(u, v) {
                return Err(Error::DuplicateEdge(u.min(v), u.max(v)));
            }
            g.set_edge(u, v);
        }
        Ok(g)
    }

    pub(crate) fn set_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.n && v < self.n);
        self.bits[u * self.words + v / 64] |= 1 << (v % 64);
        self.bits[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.bits[v * self.words..(v + 1) * self.words]
    }

    /// Neighbours of `v` in increasing order.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(v).iter().enumerate().flat_map(|(w, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    None
                } else {
                    let bit = word.trailing_zeros() as usize;
                    word &= word - 1;
                    Some(w * 64 + bit)
                }
            })
        })
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn adjacency_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| if self.has_edge(i, j) { 1.0 } else { 0.0 })
    }

    /// Induced subgraph on `V \ removed`, relabelled order-preservingly.
    ///
    /// The returned map sends each old vertex to its new index, or `None` if it
    /// was deleted.
    pub fn delete_vertices(&self, removed: &[usize]) -> Result<(Graph, Vec<Option<usize>>)> {
        let mut gone = vec![false; self.n];
        for &v in removed {
            check_vertex(v, self.n)?;
            gone[v] = true;
        }
        let mut map = vec![None; self.n];
        let mut next = 0;
        for v in 0..self.n {
            if !gone[v] {
                map[v] = Some(next);
                next += 1;
            }
        }
        let mut h = Graph::empty(next);
        for (u, v) in self.edges() {
            if let (Some(x), Some(y)) = (map[u], map[v]) {
                h.set_edge(x, y);
            }
        }
        Ok((h, map))
    }

    /// Graph obtained by renaming vertex `v` to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: perm.len(),
            });
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            check_vertex(p, self.n)?;
            if std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvariantViolation("relabelling is not a bijection".into()));
            }
        }
        let mut h = Graph::empty(self.n);
        for (u, v) in self.edges() {
            h.set_edge(perm[u], perm[v]);
        }
        Ok(h)
    }

    /// Breadth-first distances from `v`.
    pub fn distances(&self, v: usize) -> Result<Distances> {
        check_vertex(v, self.n)?;
        let mut dist = vec![None; self.n];
        dist[v] = Some(0);
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap_or(0);
            for w in self.neighbors(u) {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        Ok(Distances { source: v, dist })
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.distances(0).map(|d| d.all_reachable()).unwrap_or(false)
    }

    /// The distance-`r` graph: `u ~ w` iff `dist(u, w) = r`.
    pub fn distance_graph(&self, r: usize) -> Graph {
        let mut h = Graph::empty(self.n);
        for u in 0..self.n {
            let d = self.distances(u).expect("vertex in range");
            for w in (u + 1)..self.n {
                if r > 0 && d.dist[w] == Some(r) {
                    h.set_edge(u, w);
                }
            }
        }
        h
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges().collect::<Vec<_>>())
    }
}

/// Breadth-first distances from a source vertex; `None` marks unreachable vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distances {
    pub source: usize,
    pub dist: Vec<Option<usize>>,
}

impl Distances {
    /// Largest finite distance.
    pub fn eccentricity(&self) -> usize {
        self.dist.iter().flatten().copied().max().unwrap_or(0)
    }

    pub fn all_reachable(&self) -> bool {
        self.dist.iter().all(Option::is_some)
    }

    /// Vertices at exactly distance `d`.
    pub fn at_distance(&self, d: usize) -> Vec<usize> {
        (0..self.dist.len()).filter(|&v| self.dist[v] == Some(d)).collect()
    }

    /// Cells of vertices at equal distance; unreachable vertices form one final cell.
    pub fn distance_partition(&self) -> Partition {
        let ecc = self.eccentricity();
        let mut cells: Vec<Vec<usize>> = (0..=ecc).map(|d| self.at_distance(d)).collect();
        let unreachable: Vec<usize> = (0..self.dist.len()).filter(|&v| self.dist[v].is_none()).collect();
        if !unreachable.is_empty() {
            cells.push(unreachable);
        }
        Partition::from_cells(self.dist.len(), cells).expect("distance cells cover V")
    }
}

impl Serialize for Distances {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let flat: Vec<i64> = self.dist.iter().map(|d| d.map_or(-1, |x| x as i64)).collect();
        flat.serialize(s)
    }
}

/// Named graphs used throughout the tests and the CLI.
impl Graph {
    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in (u + 1)..n {
                g.set_edge(u, v);
            }
        }
        g
    }

    /// Path on `n` vertices.
    pub fn path(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for v in 1..n {
            g.set_edge(v - 1, v);
        }
        g
    }

    pub fn cycle(n: usize) -> Graph {
        let mut g = Graph::path(n);
        if n >= 3 {
            g.set_edge(0, n - 1);
        }
        g
    }

    /// Star `K_{1,k}` with centre 0.
    pub fn star(k: usize) -> Graph {
        let mut g = Graph::empty(k + 1);
        for v in 1..=k {
            g.set_edge(0, v);
        }
        g
    }

    pub fn petersen() -> Graph {
        let mut g = Graph::empty(10);
        for i in 0..5 {
            g.set_edge(i, (i + 1) % 5);
            g.set_edge(i, i + 5);
            g.set_edge(5 + i, 5 + (i + 2) % 5);
        }
        g
    }

    /// The `d`-dimensional hypercube; vertices are bit strings.
    pub fn hypercube(d: u32) -> Graph {
        let n = 1usize << d;
        let mut g = Graph::empty(n);
        for v in 0..n {
            for bit in 0..d {
                let w = v ^ (1 << bit);
                if w > v {
                    g.set_edge(v, w);
                }
            }
        }
        g
    }
}
