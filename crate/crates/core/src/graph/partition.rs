use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use super::Graph;
use crate::error::{check_vertex, Error, Result};

/// A partition of `0..n` into nonempty cells.
///
/// Cells are stored sorted, and ordered by their smallest element, so two
/// partitions are equal iff they have the same cells.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    cells: Vec<Vec<usize>>,
    cell_of: Vec<usize>,
}

impl Partition {
    pub fn from_cells(n: usize, cells: Vec<Vec<usize>>) -> Result<Partition> {
        let mut seen = vec![false; n];
        let mut cells: Vec<Vec<usize>> = cells.into_iter().filter(|c| !c.is_empty()).collect();
        for cell in &mut cells {
            cell.sort_unstable();
            for &v in cell.iter() {
                check_vertex(v, n)?;
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Error::InvariantViolation(format!("vertex {v} lies in two cells")));
                }
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::InvariantViolation(format!("vertex {v} is not covered")));
        }
        cells.sort_unstable_by_key(|c| c[0]);
        let mut cell_of = vec![0; n];
        for (i, cell) in cells.iter().enumerate() {
            for &v in cell {
                cell_of[v] = i;
            }
        }
        Ok(Partition { cells, cell_of })
    }

    /// Partition from a colouring; vertices with equal colour share a cell.
    pub fn from_colors(colors: &[usize]) -> Partition {
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (v, &c) in colors.iter().enumerate() {
            groups.entry(c).or_default().push(v);
        }
        Partition::from_cells(colors.len(), groups.into_values().collect()).expect("colouring covers V")
    }

    /// The one-cell partition.
    pub fn unit(n: usize) -> Partition {
        Partition::from_colors(&vec![0; n])
    }

    /// All singletons.
    pub fn discrete(n: usize) -> Partition {
        Partition::from_colors(&(0..n).collect::<Vec<_>>())
    }

    /// `{{a}, V \ {a}}`.
    pub fn with_singleton(n: usize, a: usize) -> Result<Partition> {
        check_vertex(a, n)?;
        Ok(Partition::from_colors(&(0..n).map(|v| (v != a) as usize).collect::<Vec<_>>()))
    }

    pub fn n(&self) -> usize {
        self.cell_of.len()
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn cell_of(&self, v: usize) -> usize {
        self.cell_of[v]
    }

    pub fn is_singleton(&self, v: usize) -> bool {
        self.cells[self.cell_of[v]].len() == 1
    }

    /// True if every cell of `self` lies inside a cell of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        self.n() == other.n()
            && self
                .cells
                .iter()
                .all(|c| c.iter().all(|&v| other.cell_of[v] == other.cell_of[c[0]]))
    }

    /// Every vertex of a cell has the same number of neighbours in each cell.
    pub fn is_equitable(&self, g: &Graph) -> bool {
        let profile = |v: usize| {
            let mut counts = vec![0usize; self.cells.len()];
            for w in g.neighbors(v) {
                counts[self.cell_of[w]] += 1;
            }
            counts
        };
        self.cells.iter().all(|cell| {
            let first = profile(cell[0]);
            cell[1..].iter().all(|&v| profile(v) == first)
        })
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.cells.serialize(s)
    }
}

/// Iterated degree refinement; colours are numbered by the sorted order of
/// their signatures, so the colour order is isomorphism invariant.
pub(crate) fn refine_colors(g: &Graph, mut colors: Vec<usize>) -> Vec<usize> {
    let n = g.n();
    let mut count = {
        let mut c = colors.clone();
        c.sort_unstable();
        c.dedup();
        c.len()
    };
    loop {
        let signatures: Vec<(usize, Vec<(usize, usize)>)> = (0..n)
            .map(|v| {
                let mut tally: BTreeMap<usize, usize> = BTreeMap::new();
                for w in g.neighbors(v) {
                    *tally.entry(colors[w]).or_default() += 1;
                }
                (colors[v], tally.into_iter().collect())
            })
            .collect();
        let mut ranks: BTreeMap<&(usize, Vec<(usize, usize)>), usize> = BTreeMap::new();
        for sig in &signatures {
            ranks.insert(sig, 0);
        }
        for (i, r) in ranks.values_mut().enumerate() {
            *r = i;
        }
        let next: Vec<usize> = signatures.iter().map(|s| ranks[s]).collect();
        let next_count = ranks.len();
        colors = next;
        if next_count == count {
            return colors;
        }
        count = next_count;
    }
}

/// Coarsest equitable partition refining `seeds`.
pub fn coarsest_equitable_partition(g: &Graph, seeds: &Partition) -> Result<Partition> {
    if seeds.n() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            found: seeds.n(),
        });
    }
    let colors = refine_colors(g, seeds.cell_of.clone());
    Ok(Partition::from_colors(&colors))
}
