use serde::Serialize;

use super::Graph;
use crate::algebra::char_poly;
use crate::error::{check_vertex, Error, Result};

/// Cartesian product; vertex `(u, v)` gets index `u * h.n() + v`.
pub fn cartesian_product(g: &Graph, h: &Graph) -> Graph {
    let m = h.n();
    let mut z = Graph::empty(g.n() * m);
    for u in 0..g.n() {
        for (v, w) in h.edges() {
            z.set_edge(u * m + v, u * m + w);
        }
    }
    for (u, x) in g.edges() {
        for v in 0..m {
            z.set_edge(u * m + v, x * m + v);
        }
    }
    z
}

#[derive(Debug, Clone, Serialize)]
pub struct JoinedGraph {
    #[serde(skip)]
    pub graph: Graph,
    /// Image of `u` in the joined graph.
    pub u: usize,
    /// Image of `v` in the joined graph.
    pub v: usize,
}

/// Disjoint union of `x` and `y` with `u` and `v` joined by a path with
/// `path_len` edges. Vertices of `x` keep their indices, `y` is shifted by
/// `x.n()`, and the `path_len - 1` internal path vertices come last.
pub fn join_by_path(x: &Graph, u: usize, y: &Graph, v: usize, path_len: usize) -> Result<JoinedGraph> {
    check_vertex(u, x.n())?;
    check_vertex(v, y.n())?;
    if path_len == 0 {
        return Err(Error::InvalidLength(path_len));
    }
    let offset = x.n();
    let inner = path_len - 1;
    let mut z = Graph::empty(x.n() + y.n() + inner);
    for (a, b) in x.edges() {
        z.set_edge(a, b);
    }
    for (a, b) in y.edges() {
        z.set_edge(offset + a, offset + b);
    }
    let mut prev = u;
    for k in 0..inner {
        let w = x.n() + y.n() + k;
        z.set_edge(prev, w);
        prev = w;
    }
    z.set_edge(prev, offset + v);
    Ok(JoinedGraph {
        graph: z,
        u,
        v: offset + v,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RabbitEar {
    #[serde(skip)]
    pub graph: Graph,
    pub b: usize,
    pub c: usize,
    /// `mult(0, X \ a) <= mult(0, X)`, decided from exact characteristic polynomials.
    pub condition_holds: bool,
    pub zero_mult_deleted: usize,
    pub zero_mult_whole: usize,
}

/// Attach two new pendant vertices `b = n` and `c = n + 1` to `a`.
pub fn rabbit_ear(x: &Graph, a: usize) -> Result<RabbitEar> {
    check_vertex(a, x.n())?;
    let n = x.n();
    let mut z = Graph::empty(n + 2);
    for (p, q) in x.edges() {
        z.set_edge(p, q);
    }
    z.set_edge(a, n);
    z.set_edge(a, n + 1);
    let (deleted, _) = x.delete_vertices(&[a])?;
    let zero_mult_deleted = char_poly(&deleted).zero_multiplicity()?;
    let zero_mult_whole = char_poly(x).zero_multiplicity()?;
    Ok(RabbitEar {
        graph: z,
        b: n,
        c: n + 1,
        condition_holds: zero_mult_deleted <= zero_mult_whole,
        zero_mult_deleted,
        zero_mult_whole,
    })
}
