use std::ops::ControlFlow;

use serde::Serialize;

use super::partition::refine_colors;
use super::Graph;
use crate::error::{Error, Result};

/// A bijection of `0..n`, stored as its image array.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Permutation> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvariantViolation(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Permutation {
        Permutation((0..n).collect())
    }

    pub fn apply(&self, v: usize) -> usize {
        self.0[v]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&v| self.0[v]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (v, &w) in self.0.iter().enumerate() {
            inv[w] = v;
        }
        Permutation(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(v, &w)| v == w)
    }

    pub fn is_automorphism_of(&self, g: &Graph) -> bool {
        self.0.len() == g.n()
            && (0..g.n()).all(|u| ((u + 1)..g.n()).all(|v| g.has_edge(u, v) == g.has_edge(self.0[u], self.0[v])))
    }
}

/// Guard rails for the exhaustive search.
#[derive(Debug, Clone, Copy)]
pub struct AutomorphismLimits {
    pub max_vertices: usize,
    /// Upper bound on the number of permutations collected.
    pub max_group_order: usize,
}

impl Default for AutomorphismLimits {
    fn default() -> Self {
        AutomorphismLimits {
            max_vertices: 12,
            max_group_order: 1_000_000,
        }
    }
}

/// The full automorphism group, identity first, within the default limits.
pub fn automorphisms(g: &Graph) -> Result<Vec<Permutation>> {
    automorphisms_with_limits(g, AutomorphismLimits::default())
}

pub fn automorphisms_with_limits(g: &Graph, limits: AutomorphismLimits) -> Result<Vec<Permutation>> {
    let mut out = Vec::new();
    let mut overflow = false;
    for_each_automorphism(g, &[], limits.max_vertices, |p| {
        if out.len() == limits.max_group_order {
            overflow = true;
            return ControlFlow::Break(());
        }
        out.push(p.clone());
        ControlFlow::Continue(())
    })?;
    if overflow {
        return Err(Error::TooLarge {
            what: "automorphism group order",
            size: limits.max_group_order + 1,
            limit: limits.max_group_order,
        });
    }
    Ok(out)
}

/// Depth-first enumeration of automorphisms `σ` with `σ(v) = w` for every
/// `(v, w)` in `fixed`. Candidates for each vertex are restricted to its
/// cell in the coarsest equitable partition, and are tried in increasing
/// order, so the identity (when admissible) is visited first.
pub fn for_each_automorphism<F>(g: &Graph, fixed: &[(usize, usize)], max_vertices: usize, mut visit: F) -> Result<()>
where
    F: FnMut(&Permutation) -> ControlFlow<()>,
{
    let n = g.n();
    if n > max_vertices {
        return Err(Error::TooLarge {
            what: "vertex count for automorphism search",
            size: n,
            limit: max_vertices,
        });
    }
    for &(v, w) in fixed {
        crate::error::check_vertex(v, n)?;
        crate::error::check_vertex(w, n)?;
    }
    let colors = refine_colors(g, vec![0; n]);
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut search = Search {
        g,
        colors: &colors,
        fixed,
        image: &mut image,
        used: &mut used,
    };
    let _ = search.extend(0, &mut visit);
    Ok(())
}

struct Search<'a> {
    g: &'a Graph,
    colors: &'a [usize],
    fixed: &'a [(usize, usize)],
    image: &'a mut [usize],
    used: &'a mut [bool],
}

impl Search<'_> {
    fn extend<F>(&mut self, v: usize, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&Permutation) -> ControlFlow<()>,
    {
        let n = self.g.n();
        if v == n {
            return visit(&Permutation(self.image.to_vec()));
        }
        let forced = self.fixed.iter().find(|&&(x, _)| x == v).map(|&(_, w)| w);
        for w in 0..n {
            if self.used[w] || self.colors[w] != self.colors[v] || forced.is_some_and(|f| f != w) {
                continue;
            }
            let consistent = (0..v).all(|u| self.g.has_edge(u, v) == self.g.has_edge(self.image[u], w));
            if !consistent {
                continue;
            }
            self.image[v] = w;
            self.used[w] = true;
            let flow = self.extend(v + 1, visit);
            self.used[w] = false;
            self.image[v] = usize::MAX;
            flow?;
        }
        ControlFlow::Continue(())
    }
}
