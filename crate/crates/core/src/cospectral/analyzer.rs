use std::cell::OnceCell;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use super::symmetry::{KrylovSolve, SymmetryMatrix};
use crate::algebra::{
    char_poly, minimal_polynomial_from_char_poly, reduce_rational_function, IntPoly, MinimalPolynomial, RatPoly, RationalFn,
};
use crate::error::{check_pair, check_vertex, Error, Result};
use crate::graph::Graph;
use crate::spectral::{
    average_mixing_matrix, eigen_decompose, krylov_columns, support_polynomial_from, AverageMixingMatrix, SpectralDecomposition,
    DEFAULT_GROUP_TOL, SUPPORT_TOL,
};

/// Absolute tolerance on idempotent entries for numeric verdicts.
pub const NUMERIC_TOL: f64 = 1e-8;
/// Deviations in this band are reported as borderline.
pub const BORDERLINE_BAND: (f64, f64) = (1e-10, 1e-6);

/// Which halves of a [`PairVerdict`] to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VerdictMode {
    Exact,
    Numeric,
    #[default]
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NumericCheck {
    pub verdict: bool,
    pub max_deviation: f64,
}

impl NumericCheck {
    fn below(dev: f64) -> NumericCheck {
        NumericCheck {
            verdict: dev < NUMERIC_TOL,
            max_deviation: dev,
        }
    }

    fn borderline(&self) -> bool {
        (BORDERLINE_BAND.0..=BORDERLINE_BAND.1).contains(&self.max_deviation)
    }
}

/// `σ_r` for one eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
    Out,
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
            Sign::Out => "out",
        })
    }
}

/// Exact integer diagnostics that accompany the cospectrality test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExactDiagnostics {
    /// `(A^k)_{aa} = (A^k)_{bb}` for `k ≤ 2n − 2`, i.e. `M_aᵀM_a = M_bᵀM_b`.
    pub walk_counts_equal: bool,
    /// `(e_a − e_b)ᵀ A^k (e_a + e_b) = 0` for `k < n`.
    pub module_orthogonal: bool,
}

/// Everything known about one vertex pair.
#[derive(Debug, Clone, Serialize)]
pub struct PairVerdict {
    pub a: usize,
    pub b: usize,
    pub strongly_cospectral: bool,
    pub cospectral_exact: Option<bool>,
    pub parallel_exact: Option<bool>,
    pub strongly_cospectral_exact: Option<bool>,
    pub cospectral_numeric: Option<NumericCheck>,
    pub parallel_numeric: Option<NumericCheck>,
    pub sc_numeric: Option<NumericCheck>,
    pub mixing_rows_equal: Option<NumericCheck>,
    pub borderline: bool,
    pub sign_pattern: Option<Vec<Sign>>,
    pub symmetry_poly: Option<RatPoly>,
    pub support_poly_a: Option<IntPoly>,
    pub support_poly_b: Option<IntPoly>,
    pub pair_function: Option<RationalFn>,
    pub diagnostics: Option<ExactDiagnostics>,
    pub parallel_determinants: Option<Vec<f64>>,
}

/// Caches the polynomials and the decomposition shared by many pair queries
/// on one graph.
#[derive(Debug)]
pub struct Analyzer {
    g: Graph,
    group_tol: f64,
    phi: IntPoly,
    minpoly: MinimalPolynomial,
    deleted: Vec<OnceCell<IntPoly>>,
    supports: Vec<OnceCell<IntPoly>>,
    krylov: Vec<OnceCell<KrylovSolve>>,
    decomp: OnceCell<SpectralDecomposition>,
    mixing: OnceCell<AverageMixingMatrix>,
}

impl Analyzer {
    pub fn new(g: &Graph) -> Result<Analyzer> {
        Analyzer::with_group_tol(g, DEFAULT_GROUP_TOL)
    }

    pub fn with_group_tol(g: &Graph, group_tol: f64) -> Result<Analyzer> {
        let phi = char_poly(g);
        let minpoly = minimal_polynomial_from_char_poly(g, &phi)?;
        let n = g.n();
        Ok(Analyzer {
            g: g.clone(),
            group_tol,
            phi,
            minpoly,
            deleted: (0..n).map(|_| OnceCell::new()).collect(),
            supports: (0..n).map(|_| OnceCell::new()).collect(),
            krylov: (0..n).map(|_| OnceCell::new()).collect(),
            decomp: OnceCell::new(),
            mixing: OnceCell::new(),
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.g
    }

    pub fn n(&self) -> usize {
        self.g.n()
    }

    pub fn char_poly(&self) -> &IntPoly {
        &self.phi
    }

    pub fn minimal_polynomial(&self) -> &MinimalPolynomial {
        &self.minpoly
    }

    pub fn decomposition(&self) -> Result<&SpectralDecomposition> {
        if let Some(d) = self.decomp.get() {
            return Ok(d);
        }
        let d = eigen_decompose(&self.g, self.group_tol)?;
        Ok(self.decomp.get_or_init(|| d))
    }

    pub fn mixing_matrix(&self) -> Result<&AverageMixingMatrix> {
        if let Some(m) = self.mixing.get() {
            return Ok(m);
        }
        let m = average_mixing_matrix(self.decomposition()?, &self.minpoly.disc);
        Ok(self.mixing.get_or_init(|| m))
    }

    /// `φ(X∖v)`.
    pub fn deleted_char_poly(&self, v: usize) -> Result<&IntPoly> {
        check_vertex(v, self.n())?;
        Ok(self.deleted[v].get_or_init(|| {
            let (h, _) = self.g.delete_vertices(&[v]).expect("vertex checked");
            char_poly(&h)
        }))
    }

    /// Exact support polynomial `d_v`.
    pub fn support_polynomial(&self, v: usize) -> Result<&IntPoly> {
        if let Some(p) = self.supports.get(v).and_then(OnceCell::get) {
            return Ok(p);
        }
        let p = support_polynomial_from(&self.phi, self.deleted_char_poly(v)?)?;
        Ok(self.supports[v].get_or_init(|| p))
    }

    pub fn support_size(&self, v: usize) -> Result<usize> {
        Ok(self.support_polynomial(v)?.degree().unwrap_or(0))
    }

    /// `φ(X∖{a,b}) / φ(X)` in lowest terms.
    pub fn pair_function(&self, a: usize, b: usize) -> Result<RationalFn> {
        check_pair(a, b, self.n())?;
        let (h, _) = self.g.delete_vertices(&[a, b])?;
        reduce_rational_function(&char_poly(&h), &self.phi)
    }

    pub fn cospectral_exact(&self, a: usize, b: usize) -> Result<bool> {
        check_pair(a, b, self.n())?;
        Ok(self.deleted_char_poly(a)? == self.deleted_char_poly(b)?)
    }

    pub fn parallel_exact(&self, a: usize, b: usize) -> Result<bool> {
        Ok(self.pair_function(a, b)?.poles_simple())
    }

    pub fn strongly_cospectral_exact(&self, a: usize, b: usize) -> Result<bool> {
        Ok(self.cospectral_exact(a, b)? && self.parallel_exact(a, b)?)
    }

    pub(crate) fn krylov_solve(&self, a: usize) -> Result<&KrylovSolve> {
        if let Some(k) = self.krylov.get(a).and_then(OnceCell::get) {
            return Ok(k);
        }
        let s = self.support_size(a)?;
        let k = KrylovSolve::new(&self.g, a, s)?;
        Ok(self.krylov[a].get_or_init(|| k))
    }

    /// Rational `p` with `p(A)e_a = e_b` and `p² ≡ 1 (mod ψ)`, if one exists.
    pub fn symmetry_polynomial(&self, a: usize, b: usize) -> Result<Option<SymmetryMatrix>> {
        check_pair(a, b, self.n())?;
        let k = self.krylov_solve(a)?;
        let Some(num) = k.solve_integer(b) else {
            return Ok(None);
        };
        // Any solution agrees with the minimal one on the walk module of a,
        // which contains e_b, so it must also send e_b back to e_a.
        if !maps_vertex_to(&self.g, &num, b, a, k.pivot()) {
            return Ok(None);
        }
        let num = IntPoly::new(num);
        let pivot = k.pivot();
        let p_min = RatPoly::new(
            num.coeffs()
                .iter()
                .map(|c| BigRational::new(c.clone(), pivot.clone()))
                .collect(),
        );
        let psi = RatPoly::from(&self.minpoly.psi);
        let involution = if self.minpoly.psi.is_monic() {
            (&num * &num).pseudo_rem(&self.minpoly.psi)? == IntPoly::constant(pivot * pivot)
        } else {
            is_involution_mod(&p_min, &psi)?
        };
        if involution {
            return Ok(Some(SymmetryMatrix::new(a, b, p_min, false)));
        }
        // Off the support of a the minimal solution is unconstrained; set it to 1 there.
        let d_a = RatPoly::from(self.support_polynomial(a)?);
        let (e, rem) = psi.div_rem(&d_a)?;
        if !rem.is_zero() {
            return Err(Error::InvariantViolation(format!(
                "support polynomial of {a} does not divide ψ"
            )));
        }
        let (g, u, v) = d_a.extended_gcd(&e);
        if g != RatPoly::one() {
            return Err(Error::InvariantViolation("ψ is not square-free".into()));
        }
        let lifted = (&(&p_min * &(&v * &e)) + &(&u * &d_a)).rem(&psi)?;
        if is_involution_mod(&lifted, &psi)? {
            Ok(Some(SymmetryMatrix::new(a, b, lifted, true)))
        } else {
            Ok(None)
        }
    }

    fn diagnostics(&self, a: usize, b: usize) -> ExactDiagnostics {
        let n = self.n();
        let walks = |v: usize| -> Vec<BigInt> {
            let mut e = vec![BigInt::zero(); n];
            e[v] = BigInt::one();
            let cols = krylov_columns(&self.g, &e, n);
            (0..=2 * n.saturating_sub(1))
                .map(|k| {
                    let i = k.min(n - 1);
                    cols[i].iter().zip(&cols[k - i]).map(|(x, y)| x * y).sum()
                })
                .collect()
        };
        let walk_counts_equal = walks(a) == walks(b);
        let mut u = vec![BigInt::zero(); n];
        u[a] = BigInt::one();
        u[b] = BigInt::one();
        let mut module_orthogonal = true;
        for _ in 0..n {
            if u[a] != u[b] {
                module_orthogonal = false;
                break;
            }
            u = crate::spectral::apply_adjacency(&self.g, &u);
        }
        ExactDiagnostics {
            walk_counts_equal,
            module_orthogonal,
        }
    }

    /// Per-eigenvalue sign of `(E_r)_{ab}` on the support of `a`.
    pub fn sign_pattern(&self, a: usize, b: usize) -> Result<Vec<Sign>> {
        check_pair(a, b, self.n())?;
        let d = self.decomposition()?;
        Ok(d.idempotents()
            .iter()
            .map(|e| {
                if e[(a, a)] <= SUPPORT_TOL {
                    Sign::Out
                } else if e[(a, b)] >= 0.0 {
                    Sign::Plus
                } else {
                    Sign::Minus
                }
            })
            .collect())
    }

    /// The numeric checks: cospectral, parallel (with per-eigenvalue
    /// determinants), projection route and `M̂` row route.
    pub fn numeric_checks(
        &self,
        a: usize,
        b: usize,
    ) -> Result<(NumericCheck, NumericCheck, Vec<f64>, NumericCheck, NumericCheck)> {
        check_pair(a, b, self.n())?;
        let d = self.decomposition()?;
        let mut cosp: f64 = 0.0;
        let mut proj: f64 = 0.0;
        let mut dets = Vec::with_capacity(d.len());
        for (r, e) in d.idempotents().iter().enumerate() {
            cosp = cosp.max((e[(a, a)] - e[(b, b)]).abs());
            dets.push(e[(a, a)] * e[(b, b)] - e[(a, b)] * e[(a, b)]);
            let (pa, pb) = (d.projection(r, a), d.projection(r, b));
            proj = proj.max((&pa - &pb).norm().min((&pa + &pb).norm()));
        }
        let par = dets.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let rows = self.mixing_matrix()?.row_deviation(a, b);
        Ok((
            NumericCheck::below(cosp),
            NumericCheck::below(par),
            dets,
            NumericCheck::below(proj),
            NumericCheck::below(rows),
        ))
    }

    pub fn verdict(&self, a: usize, b: usize, mode: VerdictMode) -> Result<PairVerdict> {
        check_pair(a, b, self.n())?;
        let mut v = PairVerdict {
            a,
            b,
            strongly_cospectral: false,
            cospectral_exact: None,
            parallel_exact: None,
            strongly_cospectral_exact: None,
            cospectral_numeric: None,
            parallel_numeric: None,
            sc_numeric: None,
            mixing_rows_equal: None,
            borderline: false,
            sign_pattern: None,
            symmetry_poly: None,
            support_poly_a: None,
            support_poly_b: None,
            pair_function: None,
            diagnostics: None,
            parallel_determinants: None,
        };
        if mode != VerdictMode::Numeric {
            let cosp = self.cospectral_exact(a, b)?;
            let f = self.pair_function(a, b)?;
            let par = f.poles_simple();
            let sc = cosp && par;
            let diag = self.diagnostics(a, b);
            if diag.walk_counts_equal != cosp || diag.module_orthogonal != cosp {
                return Err(Error::InvariantViolation(format!(
                    "cospectrality of ({a}, {b}) disagrees with its walk-count diagnostics"
                )));
            }
            let sym = self.symmetry_polynomial(a, b)?;
            if sym.is_some() != sc {
                return Err(Error::InvariantViolation(format!(
                    "symmetry polynomial existence disagrees with pole test for ({a}, {b})"
                )));
            }
            v.cospectral_exact = Some(cosp);
            v.parallel_exact = Some(par);
            v.strongly_cospectral_exact = Some(sc);
            v.symmetry_poly = sym.map(|s| s.poly().clone());
            v.support_poly_a = Some(self.support_polynomial(a)?.clone());
            v.support_poly_b = Some(self.support_polynomial(b)?.clone());
            v.pair_function = Some(f);
            v.diagnostics = Some(diag);
            v.strongly_cospectral = sc;
        }
        if mode != VerdictMode::Exact {
            let (cosp, par, dets, proj, rows) = self.numeric_checks(a, b)?;
            v.borderline = [cosp, par, proj, rows].iter().any(NumericCheck::borderline);
            v.cospectral_numeric = Some(cosp);
            v.parallel_numeric = Some(par);
            v.sc_numeric = Some(proj);
            v.mixing_rows_equal = Some(rows);
            v.parallel_determinants = Some(dets);
            if mode == VerdictMode::Numeric {
                v.strongly_cospectral = proj.verdict;
            }
            if v.strongly_cospectral {
                v.sign_pattern = Some(self.sign_pattern(a, b)?);
            }
        }
        Ok(v)
    }

    /// `Φ(D_a)` restricted to the in-support eigenvalues, for diagnostics.
    pub fn projected_state(&self, a: usize) -> Result<DMatrix<f64>> {
        self.decomposition()?.projected_vertex_state(a)
    }
}

fn is_involution_mod(p: &RatPoly, psi: &RatPoly) -> Result<bool> {
    Ok((p * p).rem(psi)? == RatPoly::one())
}

/// `Σ_k c_k A^k e_from == scale·e_to` over the integers.
fn maps_vertex_to(g: &Graph, c: &[BigInt], from: usize, to: usize, scale: &BigInt) -> bool {
    let n = g.n();
    let mut acc = vec![BigInt::zero(); n];
    for ck in c.iter().rev() {
        acc = crate::spectral::apply_adjacency(g, &acc);
        acc[from] += ck;
    }
    acc.iter()
        .enumerate()
        .all(|(i, x)| if i == to { x == scale } else { x.is_zero() })
}

/// `Σ_k c_k A^k e_a` over the rationals.
pub(crate) fn apply_poly_to_vertex(g: &Graph, p: &RatPoly, a: usize) -> Vec<BigRational> {
    let n = g.n();
    let mut acc = vec![BigRational::zero(); n];
    for c in p.coeffs().iter().rev() {
        let mut next: Vec<BigRational> = (0..n)
            .map(|i| g.neighbors(i).fold(BigRational::zero(), |s, j| s + &acc[j]))
            .collect();
        next[a] += c;
        acc = next;
    }
    acc
}
