//! Numeric spectral decomposition, spectral idempotents and the quantities
//! built from them: densities, fidelity, the commutant projection `Φ` and
//! the average mixing matrix. Walk matrices and support polynomials give the
//! exact side of the eigenvalue-support story.

mod jacobi;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

pub use jacobi::symmetric_eigen;

use crate::algebra::{char_poly, int_rank, IntPoly};
use crate::error::{check_vertex, Error, Result};
use crate::graph::Graph;

/// Default grouping tolerance, relative to `max(1, ρ)`.
pub const DEFAULT_GROUP_TOL: f64 = 1e-7;
/// A density weight above this counts as "in the support".
pub const SUPPORT_TOL: f64 = 1e-9;
/// Default cap on the number of vertices for a dense decomposition.
pub const DEFAULT_MAX_VERTICES: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecomposeOptions {
    pub group_tol: f64,
    pub max_vertices: usize,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions {
            group_tol: DEFAULT_GROUP_TOL,
            max_vertices: DEFAULT_MAX_VERTICES,
        }
    }
}

/// `A = Σ θ_r E_r` with distinct eigenvalues in descending order.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    multiplicities: Vec<usize>,
    bases: Vec<DMatrix<f64>>,
    idempotents: Vec<DMatrix<f64>>,
    residual: f64,
    group_tol: f64,
    spectral_radius: f64,
}

pub fn eigen_decompose(g: &Graph, group_tol: f64) -> Result<SpectralDecomposition> {
    eigen_decompose_with(
        g,
        &DecomposeOptions {
            group_tol,
            ..DecomposeOptions::default()
        },
    )
}

pub fn eigen_decompose_with(g: &Graph, opts: &DecomposeOptions) -> Result<SpectralDecomposition> {
    let n = g.n();
    if n > opts.max_vertices {
        return Err(Error::TooLarge {
            what: "vertex count for dense decomposition",
            size: n,
            limit: opts.max_vertices,
        });
    }
    if !(opts.group_tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "group_tol must be positive, got {}",
            opts.group_tol
        )));
    }
    let a = g.adjacency_matrix();
    let (vals, vecs) = symmetric_eigen(&a)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| vals[j].total_cmp(&vals[i]).then(i.cmp(&j)));
    let rho = vals.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let merge = opts.group_tol * rho.max(1.0);

    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match groups.last_mut() {
            Some(grp) if vals[*grp.last().expect("nonempty")] - vals[i] <= merge => grp.push(i),
            _ => groups.push(vec![i]),
        }
    }

    let mut eigenvalues = Vec::with_capacity(groups.len());
    let mut multiplicities = Vec::with_capacity(groups.len());
    let mut bases = Vec::with_capacity(groups.len());
    let mut idempotents = Vec::with_capacity(groups.len());
    for grp in &groups {
        let theta = grp.iter().map(|&i| vals[i]).sum::<f64>() / grp.len() as f64;
        let y = DMatrix::from_fn(n, grp.len(), |row, k| vecs[(row, grp[k])]);
        let e = &y * y.transpose();
        eigenvalues.push(theta);
        multiplicities.push(grp.len());
        bases.push(y);
        idempotents.push(e);
    }

    let mut recon = DMatrix::<f64>::zeros(n, n);
    for (t, e) in eigenvalues.iter().zip(&idempotents) {
        recon += e * *t;
    }
    let residual = (&a - recon).norm();
    let bound = 10.0 * opts.group_tol * n as f64;
    if residual > bound {
        return Err(Error::ConvergenceFailure {
            sweeps: 0,
            off_norm: residual,
        });
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        multiplicities,
        bases,
        idempotents,
        residual,
        group_tol: opts.group_tol,
        spectral_radius: rho,
    })
}

impl SpectralDecomposition {
    pub fn n(&self) -> usize {
        self.idempotents.first().map_or(0, DMatrix::nrows)
    }

    /// Number of distinct eigenvalues.
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn idempotents(&self) -> &[DMatrix<f64>] {
        &self.idempotents
    }

    pub fn idempotent(&self, r: usize) -> &DMatrix<f64> {
        &self.idempotents[r]
    }

    /// Orthonormal basis (as columns) of the `r`-th eigenspace.
    pub fn eigenspace_basis(&self, r: usize) -> &DMatrix<f64> {
        &self.bases[r]
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn group_tol(&self) -> f64 {
        self.group_tol
    }

    pub fn spectral_radius(&self) -> f64 {
        self.spectral_radius
    }

    /// `E_r e_a` as a vector.
    pub fn projection(&self, r: usize, a: usize) -> DVector<f64> {
        self.idempotents[r].column(a).into_owned()
    }

    /// Index of the eigenvalue closest to `x`.
    pub fn nearest_eigenvalue(&self, x: f64) -> Option<usize> {
        (0..self.len()).min_by(|&i, &j| (self.eigenvalues[i] - x).abs().total_cmp(&(self.eigenvalues[j] - x).abs()))
    }

    /// Serializable view; idempotents are included only on request.
    pub fn summary(&self, include_idempotents: bool) -> DecompositionSummary {
        DecompositionSummary {
            eigenvalues: self.eigenvalues.clone(),
            multiplicities: self.multiplicities.clone(),
            residual: self.residual,
            group_tol: self.group_tol,
            idempotents: include_idempotents.then(|| {
                self.idempotents
                    .iter()
                    .map(|e| (0..e.nrows()).map(|i| e.row(i).iter().copied().collect()).collect())
                    .collect()
            }),
        }
    }

    /// `Φ(D_a) = Σ_r E_r e_a e_aᵀ E_r`.
    pub fn projected_vertex_state(&self, a: usize) -> Result<DMatrix<f64>> {
        check_vertex(a, self.n())?;
        let n = self.n();
        let mut out = DMatrix::zeros(n, n);
        for r in 0..self.len() {
            let v = self.projection(r, a);
            out += &v * v.transpose();
        }
        Ok(out)
    }
}

/// Serializable view of a decomposition.
#[derive(Debug, Clone, Serialize)]
pub struct DecompositionSummary {
    pub eigenvalues: Vec<f64>,
    pub multiplicities: Vec<usize>,
    pub residual: f64,
    pub group_tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub idempotents: Option<Vec<Vec<Vec<f64>>>>,
}

/// `φ(X) / gcd(φ(X), φ(X∖a))`, primitive with positive leading coefficient.
pub fn support_polynomial(g: &Graph, a: usize) -> Result<IntPoly> {
    check_vertex(a, g.n())?;
    let phi = char_poly(g);
    let (h, _) = g.delete_vertices(&[a])?;
    support_polynomial_from(&phi, &char_poly(&h))
}

pub(crate) fn support_polynomial_from(phi: &IntPoly, phi_deleted: &IntPoly) -> Result<IntPoly> {
    if phi.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let g = phi.gcd(phi_deleted);
    Ok(phi.div_exact(&g).expect("gcd divides").primitive_part())
}

/// Columns `z, Az, …, A^{n-1}z` with their exact rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkMatrix {
    columns: Vec<Vec<BigInt>>,
    rank: usize,
}

impl WalkMatrix {
    pub fn columns(&self) -> &[Vec<BigInt>] {
        &self.columns
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Entry in row `i`, column `k` (that is, `(A^k z)_i`).
    pub fn entry(&self, i: usize, k: usize) -> &BigInt {
        &self.columns[k][i]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        let n = self.columns.first().map_or(0, Vec::len);
        (0..n).map(|i| self.columns.iter().map(|c| c[i].clone()).collect()).collect()
    }
}

impl Serialize for WalkMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct View {
            columns: Vec<Vec<String>>,
            rank: usize,
        }
        View {
            columns: self
                .columns
                .iter()
                .map(|c| c.iter().map(ToString::to_string).collect())
                .collect(),
            rank: self.rank,
        }
        .serialize(s)
    }
}

pub fn walk_matrix(g: &Graph, a: usize) -> Result<WalkMatrix> {
    check_vertex(a, g.n())?;
    let mut z = vec![BigInt::zero(); g.n()];
    z[a] = BigInt::from(1);
    walk_matrix_of_vector(g, &z)
}

/// Walk matrix relative to an arbitrary integer vector.
pub fn walk_matrix_of_vector(g: &Graph, z: &[BigInt]) -> Result<WalkMatrix> {
    let n = g.n();
    if z.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: z.len(),
        });
    }
    let columns = krylov_columns(g, z, n);
    let rank = int_rank(&transpose(&columns));
    Ok(WalkMatrix { columns, rank })
}

/// `z, Az, …, A^{count-1} z` with exact integers.
pub(crate) fn krylov_columns(g: &Graph, z: &[BigInt], count: usize) -> Vec<Vec<BigInt>> {
    let mut cols = Vec::with_capacity(count);
    let mut cur = z.to_vec();
    for _ in 0..count {
        let next = apply_adjacency(g, &cur);
        cols.push(std::mem::replace(&mut cur, next));
    }
    cols
}

pub(crate) fn apply_adjacency(g: &Graph, v: &[BigInt]) -> Vec<BigInt> {
    (0..g.n())
        .map(|i| g.neighbors(i).fold(BigInt::zero(), |s, j| s + &v[j]))
        .collect()
}

fn transpose(cols: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = cols.first().map_or(0, Vec::len);
    (0..n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
}

/// Weights `(E_r)_{aa}` over the eigenvalue list of a decomposition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralDensity {
    pub vertex: usize,
    pub eigenvalues: Vec<f64>,
    pub weights: Vec<f64>,
}

impl SpectralDensity {
    /// Indices `r` with weight above [`SUPPORT_TOL`].
    pub fn support(&self) -> Vec<usize> {
        (0..self.weights.len()).filter(|&r| self.weights[r] > SUPPORT_TOL).collect()
    }

    pub fn support_size(&self) -> usize {
        self.support().len()
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }
}

pub fn spectral_density(decomp: &SpectralDecomposition, a: usize) -> Result<SpectralDensity> {
    check_vertex(a, decomp.n())?;
    Ok(SpectralDensity {
        vertex: a,
        eigenvalues: decomp.eigenvalues.clone(),
        weights: decomp.idempotents.iter().map(|e| e[(a, a)]).collect(),
    })
}

/// `Σ_r √(p_r q_r)`.
pub fn fidelity(p: &SpectralDensity, q: &SpectralDensity) -> Result<f64> {
    if p.eigenvalues.len() != q.eigenvalues.len()
        || p.eigenvalues
            .iter()
            .zip(&q.eigenvalues)
            .any(|(x, y)| (x - y).abs() > 1e-12 * x.abs().max(1.0))
    {
        return Err(Error::MismatchedSupportGrids);
    }
    Ok(p.weights
        .iter()
        .zip(&q.weights)
        .map(|(x, y)| (x.max(0.0) * y.max(0.0)).sqrt())
        .sum())
}

/// `Φ(M) = Σ_r E_r M E_r`, the orthogonal projection onto the commutant of `A`.
pub fn commutant_project(decomp: &SpectralDecomposition, m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = decomp.n();
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: if m.nrows() != n { m.nrows() } else { m.ncols() },
        });
    }
    let mut out = DMatrix::zeros(n, n);
    for e in &decomp.idempotents {
        out += e * m * e;
    }
    Ok(out)
}

/// `M̂_{ab} = Σ_r (E_r)_{ab}²` with the discriminant used for the integrality check.
#[derive(Debug, Clone)]
pub struct AverageMixingMatrix {
    matrix: DMatrix<f64>,
    disc: BigInt,
}

pub fn average_mixing_matrix(decomp: &SpectralDecomposition, disc: &BigInt) -> AverageMixingMatrix {
    let n = decomp.n();
    let mut m = DMatrix::zeros(n, n);
    for e in &decomp.idempotents {
        m += e.component_mul(e);
    }
    AverageMixingMatrix {
        matrix: m,
        disc: disc.clone(),
    }
}

impl AverageMixingMatrix {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn disc(&self) -> &BigInt {
        &self.disc
    }

    pub fn entry(&self, a: usize, b: usize) -> f64 {
        self.matrix[(a, b)]
    }

    /// `max_k |M̂_{ak} − M̂_{bk}|`.
    pub fn row_deviation(&self, a: usize, b: usize) -> f64 {
        (0..self.matrix.ncols())
            .map(|k| (self.matrix[(a, k)] - self.matrix[(b, k)]).abs())
            .fold(0.0, f64::max)
    }

    /// Largest `|1 − Σ_k M̂_{ak}|`.
    pub fn row_sum_defect(&self) -> f64 {
        (0..self.matrix.nrows())
            .map(|a| (1.0 - self.matrix.row(a).sum()).abs())
            .fold(0.0, f64::max)
    }

    /// Largest distance of `disc²·M̂_{ab}` from an integer, divided by `max(1, disc²)`.
    pub fn integrality_defect(&self) -> f64 {
        let d2 = (&self.disc * &self.disc).to_f64().unwrap_or(f64::INFINITY).max(1.0);
        if !d2.is_finite() {
            return 0.0;
        }
        self.matrix
            .iter()
            .map(|x| {
                let y = x * d2;
                (y - y.round()).abs() / d2
            })
            .fold(0.0, f64::max)
    }
}

impl Serialize for AverageMixingMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct View {
            matrix: Vec<Vec<f64>>,
            disc: String,
        }
        View {
            matrix: (0..self.matrix.nrows())
                .map(|i| self.matrix.row(i).iter().copied().collect())
                .collect(),
            disc: self.disc.to_string(),
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::minimal_polynomial;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn check_invariants(g: &Graph) -> SpectralDecomposition {
        let d = eigen_decompose(g, DEFAULT_GROUP_TOL).unwrap();
        let n = g.n();
        let id = DMatrix::<f64>::identity(n, n);
        let sum: DMatrix<f64> = d.idempotents().iter().fold(DMatrix::zeros(n, n), |acc, e| acc + e);
        assert!((sum - &id).norm() < 1e-10);
        for (r, er) in d.idempotents().iter().enumerate() {
            assert!((er - er.transpose()).norm() < 1e-12);
            for (s, es) in d.idempotents().iter().enumerate() {
                let want = if r == s { er.clone() } else { DMatrix::zeros(n, n) };
                assert!((er * es - want).norm() < 1e-10);
            }
        }
        assert_eq!(d.multiplicities().iter().sum::<usize>(), n);
        assert!(d.residual() <= 10.0 * DEFAULT_GROUP_TOL * n as f64);
        assert!(d.eigenvalues().windows(2).all(|w| w[0] > w[1]));
        d
    }

    #[test]
    fn decomposition_examples() {
        let d = check_invariants(&Graph::cycle(4));
        assert_eq!(d.multiplicities(), &[1, 2, 1]);
        for (t, want) in d.eigenvalues().iter().zip([2.0, 0.0, -2.0]) {
            assert!(close(*t, want, 1e-12));
        }
        let d = check_invariants(&Graph::complete(2));
        assert!(close(d.eigenvalues()[0], 1.0, 1e-14) && close(d.eigenvalues()[1], -1.0, 1e-14));
        let plus = DMatrix::from_row_slice(2, 2, &[0.5, 0.5, 0.5, 0.5]);
        let minus = DMatrix::from_row_slice(2, 2, &[0.5, -0.5, -0.5, 0.5]);
        assert!((d.idempotent(0) - plus).norm() < 1e-14);
        assert!((d.idempotent(1) - minus).norm() < 1e-14);
        let d = check_invariants(&Graph::empty(1));
        assert_eq!(d.eigenvalues(), &[0.0]);
        assert_eq!(d.idempotent(0)[(0, 0)], 1.0);
    }

    #[test]
    fn invariants_on_fixtures() {
        for g in [
            Graph::petersen(),
            Graph::hypercube(3),
            Graph::path(7),
            Graph::star(5),
            Graph::complete(6),
            Graph::empty(4),
        ] {
            check_invariants(&g);
        }
    }

    #[test]
    fn size_cap_and_bad_tolerance() {
        let g = Graph::path(5);
        let opts = DecomposeOptions {
            max_vertices: 4,
            ..Default::default()
        };
        assert!(matches!(eigen_decompose_with(&g, &opts), Err(Error::TooLarge { .. })));
        assert!(eigen_decompose(&g, 0.0).is_err());
    }

    #[test]
    fn summary_serializes() {
        let d = eigen_decompose(&Graph::complete(2), DEFAULT_GROUP_TOL).unwrap();
        let v = serde_json::to_value(d.summary(false)).unwrap();
        assert_eq!(v["multiplicities"], serde_json::json!([1, 1]));
        assert!(v.get("idempotents").is_none());
        let v = serde_json::to_value(d.summary(true)).unwrap();
        assert!((v["idempotents"][1][0][1].as_f64().unwrap() + 0.5).abs() < 1e-14);
    }

    #[test]
    fn support_polynomial_examples() {
        let p3 = Graph::path(3);
        assert_eq!(support_polynomial(&p3, 0).unwrap(), IntPoly::from_i64s(&[0, -2, 0, 1]));
        assert_eq!(support_polynomial(&p3, 1).unwrap(), IntPoly::from_i64s(&[-2, 0, 1]));
        assert_eq!(support_polynomial(&Graph::empty(1), 0).unwrap(), IntPoly::from_i64s(&[0, 1]));
        assert!(matches!(support_polynomial(&p3, 3), Err(Error::UnknownVertex { .. })));
    }

    #[test]
    fn walk_matrix_examples() {
        let p3 = Graph::path(3);
        let w = walk_matrix(&p3, 1).unwrap();
        let want: Vec<Vec<BigInt>> = [[0, 1, 0], [1, 0, 1], [0, 2, 0]]
            .iter()
            .map(|c| c.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        assert_eq!(w.columns(), want.as_slice());
        assert_eq!(w.rank(), 2);
        assert_eq!(walk_matrix(&p3, 0).unwrap().rank(), 3);
        let w = walk_matrix(&Graph::empty(1), 0).unwrap();
        assert_eq!((w.columns().to_vec(), w.rank()), (vec![vec![BigInt::from(1)]], 1));
        assert!(walk_matrix(&p3, 5).is_err());
    }

    #[test]
    fn support_degree_equals_walk_rank_small() {
        for n in 1..=6usize {
            for g in crate::catalog::all_graphs(n).unwrap() {
                for a in 0..n {
                    let d = support_polynomial(&g, a).unwrap();
                    assert_eq!(d.degree().unwrap(), walk_matrix(&g, a).unwrap().rank());
                }
            }
        }
    }

    #[test]
    fn numeric_support_matches_exact_roots() {
        for g in [
            Graph::path(3),
            Graph::path(6),
            Graph::star(4),
            Graph::petersen(),
            Graph::hypercube(3),
        ] {
            let d = eigen_decompose(&g, DEFAULT_GROUP_TOL).unwrap();
            for a in 0..g.n() {
                let sup = support_polynomial(&g, a).unwrap();
                let dens = spectral_density(&d, a).unwrap();
                let numeric = dens.support();
                let exact: Vec<usize> = (0..d.len())
                    .filter(|&r| {
                        let x = d.eigenvalues()[r];
                        let scale: f64 = sup
                            .coeffs()
                            .iter()
                            .enumerate()
                            .map(|(k, c)| c.to_f64().unwrap().abs() * x.abs().powi(k as i32))
                            .sum();
                        sup.eval_f64(x).abs() <= 1e-9 * scale.max(1.0)
                    })
                    .collect();
                assert_eq!(numeric, exact, "vertex {a}");
                assert_eq!(numeric.len(), sup.degree().unwrap());
            }
        }
    }

    #[test]
    fn density_and_fidelity_examples() {
        let d = eigen_decompose(&Graph::path(3), DEFAULT_GROUP_TOL).unwrap();
        let p0 = spectral_density(&d, 0).unwrap();
        for (w, want) in p0.weights.iter().zip([0.25, 0.5, 0.25]) {
            assert!(close(*w, want, 1e-12));
        }
        let p1 = spectral_density(&d, 1).unwrap();
        let p2 = spectral_density(&d, 2).unwrap();
        assert!(close(fidelity(&p0, &p2).unwrap(), 1.0, 1e-12));
        assert!(close(fidelity(&p0, &p0).unwrap(), 1.0, 1e-12));
        assert!(close(fidelity(&p0, &p1).unwrap(), 0.5f64.sqrt(), 1e-12));

        let k2 = eigen_decompose(&Graph::complete(2), DEFAULT_GROUP_TOL).unwrap();
        let q = spectral_density(&k2, 0).unwrap();
        assert!(close(q.weights[0], 0.5, 1e-14) && close(q.weights[1], 0.5, 1e-14));
        assert_eq!(fidelity(&p0, &q), Err(Error::MismatchedSupportGrids));

        let k1 = eigen_decompose(&Graph::empty(1), DEFAULT_GROUP_TOL).unwrap();
        assert_eq!(spectral_density(&k1, 0).unwrap().weights, vec![1.0]);
    }

    #[test]
    fn commutant_examples() {
        let d = eigen_decompose(&Graph::complete(2), DEFAULT_GROUP_TOL).unwrap();
        let d0 = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let phi = commutant_project(&d, &d0).unwrap();
        assert!((phi - DMatrix::identity(2, 2) * 0.5).norm() < 1e-14);
        let g = Graph::petersen();
        let d = eigen_decompose(&g, DEFAULT_GROUP_TOL).unwrap();
        let id = DMatrix::<f64>::identity(10, 10);
        assert!((commutant_project(&d, &id).unwrap() - &id).norm() < 1e-12);
        let a = g.adjacency_matrix();
        assert!((commutant_project(&d, &a).unwrap() - &a).norm() < 1e-12);
        assert!(commutant_project(&d, &DMatrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn average_mixing_examples() {
        let k2 = Graph::complete(2);
        let d = eigen_decompose(&k2, DEFAULT_GROUP_TOL).unwrap();
        let m = average_mixing_matrix(&d, &minimal_polynomial(&k2).unwrap().disc);
        assert!(m.matrix().iter().all(|x| close(*x, 0.5, 1e-14)));
        assert!(m.integrality_defect() < 1e-12);

        let p3 = Graph::path(3);
        let d = eigen_decompose(&p3, DEFAULT_GROUP_TOL).unwrap();
        let m = average_mixing_matrix(&d, &minimal_polynomial(&p3).unwrap().disc);
        let want = [[0.375, 0.25, 0.375], [0.25, 0.5, 0.25], [0.375, 0.25, 0.375]];
        for i in 0..3 {
            for j in 0..3 {
                assert!(close(m.entry(i, j), want[i][j], 1e-12));
            }
        }
        assert!(m.row_deviation(0, 2) < 1e-12);
        assert!(m.row_deviation(0, 1) > 0.1);
        assert_eq!(m.disc(), &BigInt::from(32));
        assert!(close(1024.0 * m.entry(0, 0), 384.0, 1e-9));

        let k1 = Graph::empty(1);
        let d = eigen_decompose(&k1, DEFAULT_GROUP_TOL).unwrap();
        let m = average_mixing_matrix(&d, &BigInt::from(1));
        assert_eq!(m.entry(0, 0), 1.0);
    }

    #[test]
    fn average_mixing_invariants_on_small_catalog() {
        for n in 1..=6 {
            for g in crate::catalog::connected_graphs(n).unwrap() {
                let d = eigen_decompose(&g, DEFAULT_GROUP_TOL).unwrap();
                let mp = minimal_polynomial(&g).unwrap();
                let m = average_mixing_matrix(&d, &mp.disc);
                assert!((m.matrix() - m.matrix().transpose()).norm() < 1e-12);
                assert!(m.matrix().iter().all(|&x| x >= -1e-12));
                assert!(m.row_sum_defect() < 1e-10);
                assert!(m.integrality_defect() < 1e-6, "{g:?}");
                for a in 0..n {
                    let pa = d.projected_vertex_state(a).unwrap();
                    for b in 0..n {
                        let pb = d.projected_vertex_state(b).unwrap();
                        assert!(close(m.entry(a, b), pa.dot(&pb), 1e-8));
                    }
                    // Eigenvalues of Φ(D_a) are the density weights (plus zeros).
                    let (mut ev, _) = symmetric_eigen(&pa).unwrap();
                    ev.sort_by(|x, y| y.total_cmp(x));
                    let mut w = spectral_density(&d, a).unwrap().weights;
                    w.resize(n, 0.0);
                    w.sort_by(|x, y| y.total_cmp(x));
                    for (x, y) in ev.iter().zip(&w) {
                        assert!(close(*x, *y, 1e-9));
                    }
                }
            }
        }
    }

    fn random_graph() -> impl Strategy<Value = Graph> {
        (2usize..9, any::<u64>()).prop_map(|(n, seed)| crate::catalog::random_graph(n, 0.5, seed))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn fidelity_bounded_by_one(g in random_graph(), a in 0usize..9, b in 0usize..9) {
            let n = g.n();
            let d = eigen_decompose(&g, DEFAULT_GROUP_TOL).unwrap();
            let p = spectral_density(&d, a % n).unwrap();
            let q = spectral_density(&d, b % n).unwrap();
            let f = fidelity(&p, &q).unwrap();
            let equal = p.weights.iter().zip(&q.weights).all(|(x, y)| (x - y).abs() < 1e-9);
            prop_assert!(f <= 1.0 + 1e-12);
            prop_assert_eq!(equal, f > 1.0 - 1e-12);
            prop_assert!((p.total() - 1.0).abs() < 1e-10);
        }

        #[test]
        fn commutant_is_idempotent_and_contractive(g in random_graph(), seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let n = g.n();
            let d = eigen_decompose(&g, DEFAULT_GROUP_TOL).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let m = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
            let p = commutant_project(&d, &m).unwrap();
            let pp = commutant_project(&d, &p).unwrap();
            prop_assert!((&pp - &p).norm() < 1e-10);
            let (op, opm) = (p.singular_values().max(), m.singular_values().max());
            prop_assert!(op <= opm + 1e-10);
            prop_assert!((&p * g.adjacency_matrix() - g.adjacency_matrix() * &p).norm() < 1e-9);
        }

        #[test]
        fn commutant_fixes_evolved_states(g in random_graph(), seed in any::<u64>(), t in 0.0f64..20.0) {
            use rand::{Rng, SeedableRng};
            use num_complex::Complex64;
            let n = g.n();
            let d = eigen_decompose(&g, DEFAULT_GROUP_TOL).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut z: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            let norm = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            z.iter_mut().for_each(|c| *c /= norm);
            let u = crate::walk::transition_matrix(&d, t);
            let zt: Vec<Complex64> = (0..n).map(|i| (0..n).map(|j| u[(i, j)] * z[j]).sum()).collect();
            // Φ(zz*) for complex z splits into real and imaginary parts.
            let proj = |v: &[Complex64]| {
                let mut re = DMatrix::<f64>::zeros(n, n);
                let mut im = DMatrix::<f64>::zeros(n, n);
                for i in 0..n {
                    for j in 0..n {
                        let x = v[i] * v[j].conj();
                        re[(i, j)] = x.re;
                        im[(i, j)] = x.im;
                    }
                }
                (commutant_project(&d, &re).unwrap(), commutant_project(&d, &im).unwrap())
            };
            let (r0, i0) = proj(&z);
            let (r1, i1) = proj(&zt);
            prop_assert!((r0 - r1).norm() < 1e-8);
            prop_assert!((i0 - i1).norm() < 1e-8);
        }
    }
}
