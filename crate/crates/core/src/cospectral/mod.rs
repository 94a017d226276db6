//! Decision procedures for cospectral, parallel and strongly cospectral
//! vertex pairs, plus graph-level invariants built on them.

mod analyzer;
mod symmetry;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

pub use analyzer::{Analyzer, ExactDiagnostics, NumericCheck, PairVerdict, Sign, VerdictMode, BORDERLINE_BAND, NUMERIC_TOL};
pub use symmetry::{SymmetryCheck, SymmetryMatrix};

use crate::error::{check_pair, check_vertex, Error, Result};
use crate::graph::{Graph, Partition};
use crate::spectral::{krylov_columns, SpectralDecomposition, SUPPORT_TOL};

/// Exact and numeric cospectrality of `a` and `b`.
#[derive(Debug, Clone, Serialize)]
pub struct CospectralReport {
    pub exact: bool,
    pub numeric: NumericCheck,
    pub diagnostics: ExactDiagnostics,
}

pub fn are_cospectral(g: &Graph, a: usize, b: usize) -> Result<CospectralReport> {
    check_pair(a, b, g.n())?;
    let v = Analyzer::new(g)?.verdict(a, b, VerdictMode::Both)?;
    Ok(CospectralReport {
        exact: v.cospectral_exact.expect("exact half computed"),
        numeric: v.cospectral_numeric.expect("numeric half computed"),
        diagnostics: v.diagnostics.expect("exact half computed"),
    })
}

/// Exact and numeric parallelism of `a` and `b`.
#[derive(Debug, Clone, Serialize)]
pub struct ParallelReport {
    pub exact: bool,
    pub numeric: NumericCheck,
    pub determinants: Vec<f64>,
}

pub fn are_parallel(g: &Graph, a: usize, b: usize) -> Result<ParallelReport> {
    check_pair(a, b, g.n())?;
    let an = Analyzer::new(g)?;
    let (_, par, dets, _, _) = an.numeric_checks(a, b)?;
    Ok(ParallelReport {
        exact: an.parallel_exact(a, b)?,
        numeric: par,
        determinants: dets,
    })
}

pub fn are_strongly_cospectral(g: &Graph, a: usize, b: usize) -> Result<PairVerdict> {
    Analyzer::new(g)?.verdict(a, b, VerdictMode::Both)
}

pub fn symmetry_polynomial(g: &Graph, a: usize, b: usize) -> Result<Option<SymmetryMatrix>> {
    Analyzer::new(g)?.symmetry_polynomial(a, b)
}

/// `I − 2P` with `P` the orthogonal projector onto the walk module of
/// `e_a − e_b`, when `a` and `b` are cospectral.
///
/// The module is spanned by the mutually orthogonal vectors `E_r(e_a − e_b)`.
pub fn cospectral_rotation(g: &Graph, a: usize, b: usize) -> Result<Option<DMatrix<f64>>> {
    let an = Analyzer::new(g)?;
    if !an.cospectral_exact(a, b)? {
        return Ok(None);
    }
    rotation_from(g, an.decomposition()?, a, b).map(Some)
}

fn rotation_from(g: &Graph, d: &SpectralDecomposition, a: usize, b: usize) -> Result<DMatrix<f64>> {
    let n = g.n();
    let mut p = DMatrix::<f64>::zeros(n, n);
    for r in 0..d.len() {
        let u = d.projection(r, a) - d.projection(r, b);
        let norm = u.norm();
        if norm > 1e-6 {
            let u = u / norm;
            p += &u * u.transpose();
        }
    }
    let q = DMatrix::<f64>::identity(n, n) - p * 2.0;
    let adj = g.adjacency_matrix();
    let err = [
        (&q * &q - DMatrix::<f64>::identity(n, n)).norm(),
        (&q * &adj - &adj * &q).norm(),
        (0..n)
            .map(|i| (q[(i, a)] - if i == b { 1.0 } else { 0.0 }).abs())
            .fold(0.0, f64::max),
    ];
    if err.iter().any(|&e| e > 1e-8) {
        return Err(Error::InvariantViolation(format!(
            "rotation for ({a}, {b}) misses its identities by {err:?}"
        )));
    }
    Ok(q)
}

impl Analyzer {
    /// Maximal classes of pairwise strongly cospectral vertices.
    pub fn sc_classes(&self) -> Result<Partition> {
        let n = self.n();
        let mut sc = vec![vec![false; n]; n];
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut x = x;
            while p[x] != r {
                let next = p[x];
                p[x] = r;
                x = next;
            }
            r
        }
        for a in 0..n {
            for b in a + 1..n {
                if self.cospectral_exact(a, b)? && self.parallel_exact(a, b)? {
                    sc[a][b] = true;
                    sc[b][a] = true;
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
        let colors: Vec<usize> = (0..n).map(|v| find(&mut parent, v)).collect();
        let part = Partition::from_colors(&colors);
        for cell in part.cells() {
            for (i, &x) in cell.iter().enumerate() {
                for &y in &cell[i + 1..] {
                    if !sc[x][y] {
                        return Err(Error::InvariantViolation(format!(
                            "strong cospectrality not transitive at ({x}, {y})"
                        )));
                    }
                }
            }
            let s = self.support_size(cell[0])?;
            if cell.len() > 1 && cell.len() > s {
                return Err(Error::InvariantViolation(format!(
                    "class {cell:?} is larger than its support size {s}"
                )));
            }
        }
        Ok(part)
    }

    /// Partners of `a` under strong cospectrality.
    pub fn sc_partners(&self, a: usize) -> Result<Vec<usize>> {
        check_vertex(a, self.n())?;
        let mut out = Vec::new();
        for b in (0..self.n()).filter(|&b| b != a) {
            if self.strongly_cospectral_exact(a, b)? {
                out.push(b);
            }
        }
        Ok(out)
    }

    pub fn algebra_profile(&self, a: usize) -> Result<AlgebraProfile> {
        check_vertex(a, self.n())?;
        let d = self.decomposition()?;
        let s = self.support_size(a)?;
        let mut flags = Vec::with_capacity(d.len());
        let mut numeric_support = 0;
        for (r, e) in d.idempotents().iter().enumerate() {
            let w = e[(a, a)];
            let in_support = w > SUPPORT_TOL;
            let nonzero = if in_support {
                numeric_support += 1;
                let v = d.projection(r, a);
                (e - (&v * v.transpose()) / w).norm() > 1e-6
            } else {
                true
            };
            if nonzero != (!in_support || d.multiplicities()[r] >= 2) {
                return Err(Error::InvariantViolation(format!(
                    "E'_{r} at vertex {a} disagrees with its rank"
                )));
            }
            flags.push(nonzero);
        }
        if numeric_support != s {
            return Err(Error::InvariantViolation(format!(
                "numeric support {numeric_support} of vertex {a} differs from exact size {s}"
            )));
        }
        Ok(AlgebraProfile {
            vertex: a,
            support_size: s,
            dimension: s * s + flags.iter().filter(|&&f| f).count(),
            eprime_nonzero: flags,
        })
    }

    pub fn extremal_report(&self, a: usize) -> Result<ExtremalReport> {
        check_vertex(a, self.n())?;
        let dist = self.graph().distances(a)?;
        if !dist.all_reachable() {
            return Err(Error::DisconnectedGraph);
        }
        let d = dist.eccentricity();
        let s = self.support_size(a)?;
        let extremal = s == d + 1;
        let mut forced_partner = None;
        if extremal {
            let partners = self.sc_partners(a)?;
            if !partners.is_empty() {
                let far = dist.at_distance(d);
                if far.len() != 1 || partners != far {
                    return Err(Error::InvariantViolation(format!(
                        "extremal vertex {a} has partners {partners:?} but vertices at distance {d} are {far:?}"
                    )));
                }
                forced_partner = Some(far[0]);
            }
        }
        Ok(ExtremalReport {
            vertex: a,
            eccentricity: d,
            support_size: s,
            extremal,
            forced_partner,
        })
    }
}

pub fn sc_classes(g: &Graph) -> Result<Partition> {
    Analyzer::new(g)?.sc_classes()
}

/// Exact test: `diag(A^k)` constant for `k < n`.
pub fn is_walk_regular(g: &Graph) -> bool {
    let n = g.n();
    let mut reference: Option<Vec<BigInt>> = None;
    for v in 0..n {
        let mut e = vec![BigInt::zero(); n];
        e[v] = BigInt::one();
        let diag: Vec<BigInt> = krylov_columns(g, &e, n).into_iter().map(|c| c[v].clone()).collect();
        match &reference {
            None => reference = Some(diag),
            Some(r) if *r != diag => return false,
            Some(_) => {}
        }
    }
    true
}

/// Numeric test: every idempotent has constant diagonal within [`NUMERIC_TOL`].
pub fn is_walk_regular_numeric(d: &SpectralDecomposition) -> bool {
    d.idempotents()
        .iter()
        .all(|e| (1..e.nrows()).all(|i| (e[(i, i)] - e[(0, 0)]).abs() < NUMERIC_TOL))
}

/// Dimension of the algebra generated by `A` and `e_a e_aᵀ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlgebraProfile {
    pub vertex: usize,
    pub support_size: usize,
    /// Per eigenvalue, whether `E_r − F_r` is nonzero.
    pub eprime_nonzero: Vec<bool>,
    pub dimension: usize,
}

pub fn algebra_dimension(g: &Graph, a: usize) -> Result<AlgebraProfile> {
    check_vertex(a, g.n())?;
    Analyzer::new(g)?.algebra_profile(a)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtremalReport {
    pub vertex: usize,
    pub eccentricity: usize,
    pub support_size: usize,
    pub extremal: bool,
    pub forced_partner: Option<usize>,
}

pub fn spectrally_extremal(g: &Graph, a: usize) -> Result<ExtremalReport> {
    check_vertex(a, g.n())?;
    Analyzer::new(g)?.extremal_report(a)
}
