//! Graph corpora: exhaustive connected graphs by vertex augmentation, trees,
//! random graphs and a few named fixtures.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::partition::refine_colors;
use crate::graph::{cartesian_product, Graph};

/// Largest order accepted by the exhaustive enumerators.
pub const MAX_CATALOG_ORDER: usize = 10;

/// Canonical upper-triangle code: the minimum over the leaves of an
/// individualization–refinement search. Bit `k` of the code is the edge
/// between the vertices placed at the `k`-th position pair `(i, j)`, `i < j`,
/// in row-major order.
pub fn canonical_code(g: &Graph) -> Result<u64> {
    let n = g.n();
    if n > 11 {
        return Err(Error::TooLarge {
            what: "order for canonical code",
            size: n,
            limit: 11,
        });
    }
    let colors = refine_colors(g, vec![0; n]);
    let mut best = u64::MAX;
    search(g, colors, &mut best);
    Ok(best)
}

fn search(g: &Graph, colors: Vec<usize>, best: &mut u64) {
    let n = g.n();
    let mut sizes = vec![0usize; n];
    for &c in &colors {
        sizes[c] += 1;
    }
    let Some(target) = (0..n).find(|&c| sizes[c] > 1) else {
        let mut at = vec![0; n];
        for (v, &c) in colors.iter().enumerate() {
            at[c] = v;
        }
        let mut code = 0u64;
        let mut bit = 0;
        for i in 0..n {
            for j in i + 1..n {
                if g.has_edge(at[i], at[j]) {
                    code |= 1 << bit;
                }
                bit += 1;
            }
        }
        *best = (*best).min(code);
        return;
    };
    for v in (0..n).filter(|&v| colors[v] == target) {
        let seeded: Vec<usize> = colors
            .iter()
            .enumerate()
            .map(|(w, &c)| if w == v { 2 * c } else { 2 * c + 1 })
            .collect();
        search(g, refine_colors(g, seeded), best);
    }
}

/// Graph with the given canonical code.
pub fn from_code(n: usize, code: u64) -> Graph {
    let mut g = Graph::empty(n);
    let mut bit = 0;
    for i in 0..n {
        for j in i + 1..n {
            if code >> bit & 1 == 1 {
                g.set_edge(i, j);
            }
            bit += 1;
        }
    }
    g
}

/// Every connected graph on `n` vertices up to isomorphism, in canonical form,
/// sorted by canonical code.
pub fn connected_graphs(n: usize) -> Result<Vec<Graph>> {
    Ok(all_graphs(n)?.into_iter().filter(|g| g.is_connected()).collect())
}

/// Every graph on `n` vertices up to isomorphism, sorted by canonical code.
pub fn all_graphs(n: usize) -> Result<Vec<Graph>> {
    if n > MAX_CATALOG_ORDER {
        return Err(Error::TooLarge {
            what: "order for exhaustive enumeration",
            size: n,
            limit: MAX_CATALOG_ORDER,
        });
    }
    let mut level: Vec<u64> = vec![0];
    for k in 1..=n {
        // Every graph on k vertices arises from one on k - 1 by adding a
        // vertex with some neighbourhood.
        let mut seen: HashSet<u64> = HashSet::new();
        for &code in &level {
            let base = from_code(k - 1, code);
            for mask in 0u32..(1 << (k - 1)) {
                let mut g = Graph::empty(k);
                for (u, v) in base.edges() {
                    g.set_edge(u, v);
                }
                for u in 0..k - 1 {
                    if mask >> u & 1 == 1 {
                        g.set_edge(u, k - 1);
                    }
                }
                seen.insert(canonical_code(&g)?);
            }
        }
        level = seen.into_iter().collect();
        level.sort_unstable();
    }
    Ok(level.into_iter().map(|c| from_code(n, c)).collect())
}

/// Every tree on `n ≥ 1` vertices up to isomorphism, by leaf augmentation.
pub fn trees(n: usize) -> Result<Vec<Graph>> {
    if n == 0 || n > MAX_CATALOG_ORDER + 1 {
        return Err(Error::TooLarge {
            what: "order for tree enumeration",
            size: n,
            limit: MAX_CATALOG_ORDER + 1,
        });
    }
    let mut level: Vec<u64> = vec![0];
    for k in 2..=n {
        let mut seen: HashSet<u64> = HashSet::new();
        for &code in &level {
            let base = from_code(k - 1, code);
            for u in 0..k - 1 {
                let mut g = Graph::empty(k);
                for (x, y) in base.edges() {
                    g.set_edge(x, y);
                }
                g.set_edge(u, k - 1);
                seen.insert(canonical_code(&g)?);
            }
        }
        level = seen.into_iter().collect();
        level.sort_unstable();
    }
    Ok(level.into_iter().map(|c| from_code(n, c)).collect())
}

/// Erdős–Rényi `G(n, p)` from a seeded ChaCha stream.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.set_edge(u, v);
            }
        }
    }
    g
}

/// `P₃ □ K₂`; vertex `(u, v)` has index `2u + v`.
pub fn prism_path() -> Graph {
    cartesian_product(&Graph::path(3), &Graph::complete(2))
}

/// The 3-cube `Q₃`.
pub fn cube() -> Graph {
    Graph::hypercube(3)
}

/// A tree on at most `max_n` vertices with a cospectral pair that no
/// automorphism exchanges, found by exhaustive search in increasing order.
pub fn cospectral_tree_pair(max_n: usize) -> Result<Option<(Graph, usize, usize)>> {
    use crate::algebra::char_poly;
    use crate::graph::{for_each_automorphism, AutomorphismLimits};
    use std::ops::ControlFlow;
    for n in 2..=max_n {
        for t in trees(n)? {
            let deleted: Vec<_> = (0..n)
                .map(|v| char_poly(&t.delete_vertices(&[v]).expect("vertex in range").0))
                .collect();
            for a in 0..n {
                for b in a + 1..n {
                    if deleted[a] != deleted[b] {
                        continue;
                    }
                    let mut similar = false;
                    for_each_automorphism(&t, &[(a, b)], AutomorphismLimits::default().max_vertices, |_| {
                        similar = true;
                        ControlFlow::Break(())
                    })?;
                    if !similar {
                        return Ok(Some((t, a, b)));
                    }
                }
            }
        }
    }
    Ok(None)
}
