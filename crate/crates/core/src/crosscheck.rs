//! Agreement suites between independent routes to the same answer. Used by
//! the `crosscheck` subcommand and by the acceptance tests.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{char_poly, rational_adjacency, BigRationalMatrix};
use crate::catalog;
use crate::cospectral::{Analyzer, NUMERIC_TOL};
use crate::error::Result;
use crate::graph::{join_by_path, rabbit_ear, Graph};
use crate::spectral::SpectralDecomposition;
use crate::walk::{cospectrality_certificate, scan_max_transfer, strong_cospectrality_certificate};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

/// Pass/fail tally of one suite.
#[derive(Debug, Clone, Default, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
    /// First few failure descriptions.
    pub failures: Vec<String>,
}

const MAX_RECORDED_FAILURES: usize = 20;

impl SuiteReport {
    fn new(name: &str) -> SuiteReport {
        SuiteReport {
            name: name.into(),
            ..Default::default()
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.failures.len() < MAX_RECORDED_FAILURES {
                self.failures.push(describe());
            }
        }
    }

    fn record_result(&mut self, r: Result<bool>, describe: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.record(ok, describe),
            Err(e) => self.record(false, || format!("{}: error {e}", describe())),
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    /// Appends `other`'s tallies, keeping failures in order.
    fn absorb(&mut self, other: SuiteReport) {
        self.passed += other.passed;
        self.failed += other.failed;
        let room = MAX_RECORDED_FAILURES.saturating_sub(self.failures.len());
        self.failures.extend(other.failures.into_iter().take(room));
    }
}

/// Verdicts of the four strong-cospectrality routes plus the separate
/// cospectral and parallel comparisons for one pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RouteVerdicts {
    pub pole_simplicity: bool,
    pub projection: bool,
    pub mixing_rows: bool,
    pub symmetry_polynomial: bool,
    pub cospectral_exact: bool,
    pub cospectral_numeric: bool,
    pub parallel_exact: bool,
    pub parallel_numeric: bool,
}

impl RouteVerdicts {
    pub fn agree(&self) -> bool {
        let sc = self.pole_simplicity;
        self.projection == sc
            && self.mixing_rows == sc
            && self.symmetry_polynomial == sc
            && self.cospectral_exact == self.cospectral_numeric
            && self.parallel_exact == self.parallel_numeric
    }
}

pub fn route_verdicts(an: &Analyzer, a: usize, b: usize) -> Result<RouteVerdicts> {
    let (cosp, par, _, proj, rows) = an.numeric_checks(a, b)?;
    let cospectral_exact = an.cospectral_exact(a, b)?;
    let parallel_exact = an.parallel_exact(a, b)?;
    Ok(RouteVerdicts {
        pole_simplicity: cospectral_exact && parallel_exact,
        projection: proj.verdict,
        mixing_rows: rows.verdict,
        symmetry_polynomial: an.symmetry_polynomial(a, b)?.is_some(),
        cospectral_exact,
        cospectral_numeric: cosp.verdict,
        parallel_exact,
        parallel_numeric: par.verdict,
    })
}

/// Route agreement over every pair of every graph. Graphs are checked in
/// parallel and tallied in input order.
pub fn route_agreement<'a>(graphs: impl IntoIterator<Item = &'a Graph>) -> SuiteReport {
    let graphs: Vec<&Graph> = graphs.into_iter().collect();
    let parts: Vec<SuiteReport> = graphs
        .par_iter()
        .map(|g| {
            let mut rep = SuiteReport::new("route-agreement");
            let an = match Analyzer::new(g) {
                Ok(an) => an,
                Err(e) => {
                    rep.record(false, || format!("{g:?}: {e}"));
                    return rep;
                }
            };
            for a in 0..g.n() {
                for b in a + 1..g.n() {
                    let r = route_verdicts(&an, a, b);
                    rep.record_result(r.map(|v| v.agree()), || format!("{g:?} pair ({a}, {b})"));
                }
            }
            rep
        })
        .collect();
    let mut rep = SuiteReport::new("route-agreement");
    for p in parts {
        rep.absorb(p);
    }
    rep
}

/// `disc²·M̂` integral and rows summing to one.
pub fn mixing_integrality<'a>(graphs: impl IntoIterator<Item = &'a Graph>) -> SuiteReport {
    let mut rep = SuiteReport::new("mixing-integrality");
    for g in graphs {
        let r = (|| -> Result<bool> {
            let an = Analyzer::new(g)?;
            let m = an.mixing_matrix()?;
            Ok(mixing_integral(m.matrix(), m.disc()) && m.row_sum_defect() < 1e-9)
        })();
        rep.record_result(r, || format!("{g:?}"));
    }
    rep
}

/// Each entry `x` of `disc²·M̂` lies within `1e-6·max(1, x)` of an integer.
pub fn mixing_integral(m: &nalgebra::DMatrix<f64>, disc: &BigInt) -> bool {
    use num_traits::ToPrimitive;
    let d2 = (disc * disc).to_f64().unwrap_or(f64::INFINITY);
    m.iter().all(|&x| {
        let y = x * d2;
        !y.is_finite() || (y - y.round()).abs() <= 1e-6 * y.abs().max(1.0)
    })
}

/// Exact `Q² = I`, `QA = AQ`, `Qe_a = e_b` for every strongly cospectral pair.
pub fn symmetry_matrices<'a>(graphs: impl IntoIterator<Item = &'a Graph>) -> SuiteReport {
    let mut rep = SuiteReport::new("symmetry-matrices");
    for g in graphs {
        let Ok(an) = Analyzer::new(g) else {
            rep.record(false, || format!("{g:?}: analyzer failed"));
            continue;
        };
        for a in 0..g.n() {
            for b in a + 1..g.n() {
                let r = (|| -> Result<Option<bool>> {
                    if !an.strongly_cospectral_exact(a, b)? {
                        return Ok(None);
                    }
                    Ok(Some(match an.symmetry_polynomial(a, b)? {
                        Some(q) => q.verify(g)?.all(),
                        None => false,
                    }))
                })();
                match r {
                    Ok(None) => {}
                    Ok(Some(ok)) => rep.record(ok, || format!("{g:?} pair ({a}, {b})")),
                    Err(e) => rep.record(false, || format!("{g:?} pair ({a}, {b}): {e}")),
                }
            }
        }
    }
    rep
}

/// `det(((t₀I − A)⁻¹)_{D,D}) = φ(X∖D, t₀) / φ(X, t₀)`, evaluated exactly.
pub fn jacobi_identity_holds(g: &Graph, d: &[usize], t0: i64) -> Result<Option<bool>> {
    let n = g.n();
    let t = BigRational::from_integer(BigInt::from(t0));
    let phi_t = char_poly(g).eval_rational(&t);
    if phi_t.is_zero() {
        return Ok(None);
    }
    let m = &BigRationalMatrix::identity(n).scale(&t) - &rational_adjacency(g);
    let inv = m.inverse()?.expect("nonsingular when φ(t₀) ≠ 0");
    let lhs = inv.principal_submatrix(d).determinant()?;
    let (h, _) = g.delete_vertices(d)?;
    let rhs = char_poly(&h).eval_rational(&t) / phi_t;
    Ok(Some(lhs == rhs))
}

/// Random instances of the identity above: `n ≤ 7`, `1 ≤ |D| ≤ 2`, `|t₀| ≤ 10`.
pub fn jacobi_identity(samples: usize, seed: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("jacobi-identity");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while rep.passed + rep.failed < samples {
        let n = rng.gen_range(2..=7);
        let g = catalog::random_graph(n, rng.gen_range(0.2..0.8), rng.gen());
        let k = rng.gen_range(1..=2);
        let mut verts: Vec<usize> = (0..n).collect();
        verts.shuffle(&mut rng);
        let mut d = verts[..k].to_vec();
        d.sort_unstable();
        let t0 = rng.gen_range(-10..=10);
        match jacobi_identity_holds(&g, &d, t0) {
            Ok(None) => {}
            Ok(Some(ok)) => rep.record(ok, || format!("{g:?} D={d:?} t0={t0}")),
            Err(e) => rep.record(false, || format!("{g:?} D={d:?} t0={t0}: {e}")),
        }
    }
    rep
}

/// Outcome of the pendant-pair construction over a catalog.
#[derive(Debug, Clone, Default, Serialize)]
pub struct RabbitEarSummary {
    pub report: SuiteReport,
    /// Instances where the zero-multiplicity condition fails.
    pub condition_fails: usize,
    /// Of those, how many still give a strongly cospectral pendant pair.
    pub condition_fails_but_sc: usize,
}

pub fn rabbit_ears(max_n: usize) -> RabbitEarSummary {
    let mut out = RabbitEarSummary {
        report: SuiteReport::new("rabbit-ear"),
        ..Default::default()
    };
    for n in 1..=max_n {
        let graphs = match catalog::connected_graphs(n) {
            Ok(g) => g,
            Err(e) => {
                out.report.record(false, || format!("catalog n={n}: {e}"));
                continue;
            }
        };
        for x in &graphs {
            for a in 0..n {
                let r = (|| -> Result<(bool, bool)> {
                    let re = rabbit_ear(x, a)?;
                    let sc = Analyzer::new(&re.graph)?.strongly_cospectral_exact(re.b, re.c)?;
                    Ok((re.condition_holds, sc))
                })();
                match r {
                    Ok((true, sc)) => out.report.record(sc, || format!("{x:?} a={a}")),
                    Ok((false, sc)) => {
                        out.condition_fails += 1;
                        out.condition_fails_but_sc += sc as usize;
                    }
                    Err(e) => out.report.record(false, || format!("{x:?} a={a}: {e}")),
                }
            }
        }
    }
    out
}

/// Random joins `X –path– Y` with `Y ≅ X` and matched endpoints, `n(Z) ≤ max_order`.
pub fn joins_by_path(count: usize, max_order: usize, seed: u64) -> SuiteReport {
    let mut rep = SuiteReport::new("join-by-path");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while rep.passed + rep.failed < count {
        let len = rng.gen_range(1..=4);
        let max_x = (max_order + 1 - len) / 2;
        if max_x < 1 {
            continue;
        }
        let nx = rng.gen_range(1..=max_x.min(6));
        let x = catalog::random_graph(nx, rng.gen_range(0.3..0.8), rng.gen());
        if !x.is_connected() {
            continue;
        }
        let mut perm: Vec<usize> = (0..nx).collect();
        perm.shuffle(&mut rng);
        let y = x.relabel(&perm).expect("permutation");
        let u = rng.gen_range(0..nx);
        let v = perm[u];
        let r = (|| -> Result<bool> {
            let z = join_by_path(&x, u, &y, v, len)?;
            Analyzer::new(&z.graph)?.strongly_cospectral_exact(z.u, z.v)
        })();
        rep.record_result(r, || format!("X={x:?} u={u} perm={perm:?} len={len}"));
    }
    rep
}

/// `sc_classes = {V}` exactly for `K₁` and `K₂` among connected graphs.
pub fn all_strong(max_n: usize) -> SuiteReport {
    let mut rep = SuiteReport::new("all-strong");
    for n in 1..=max_n {
        let Ok(graphs) = catalog::connected_graphs(n) else {
            rep.record(false, || format!("catalog n={n}"));
            continue;
        };
        for g in &graphs {
            let r = Analyzer::new(g).and_then(|an| an.sc_classes()).map(|p| {
                let whole = p.cells().len() == 1;
                whole == (n <= 2)
            });
            rep.record_result(r, || format!("{g:?}"));
        }
    }
    rep
}

/// Scan each pair, issue both certificates at the best time, and count.
/// The certificate functions themselves re-verify positive verdicts.
#[derive(Debug, Clone, Default, Serialize)]
pub struct CertificateSummary {
    pub report: SuiteReport,
    pub cospectral_issued: usize,
    pub strong_issued: usize,
}

pub fn certificates<'a>(graphs: impl IntoIterator<Item = &'a Graph>, t_max: f64, steps: usize) -> CertificateSummary {
    let mut out = CertificateSummary {
        report: SuiteReport::new("certificates"),
        ..Default::default()
    };
    for g in graphs {
        let r = (|| -> Result<()> {
            let an = Analyzer::new(g)?;
            let d: &SpectralDecomposition = an.decomposition()?;
            for a in 0..g.n() {
                for b in a + 1..g.n() {
                    let s = scan_max_transfer(d, a, b, t_max, steps)?;
                    let c = cospectrality_certificate(g, d, a, b, s.t_star)?;
                    let sc = strong_cospectrality_certificate(g, d, a, b, s.t_star)?;
                    out.cospectral_issued += c.verdict as usize;
                    out.strong_issued += sc.verdict as usize;
                    // Scanned maxima never exceed the fidelity of the densities.
                    let f: f64 = d
                        .idempotents()
                        .iter()
                        .map(|e| (e[(a, a)].max(0.0) * e[(b, b)].max(0.0)).sqrt())
                        .sum();
                    out.report.record(s.magnitude <= f + NUMERIC_TOL, || {
                        format!("{g:?} ({a}, {b}) exceeds fidelity")
                    });
                }
            }
            Ok(())
        })();
        if let Err(e) = r {
            out.report.record(false, || format!("{g:?}: {e}"));
        }
    }
    out
}

/// Configuration of [`run_all`].
#[derive(Debug, Clone, Copy)]
pub struct CrosscheckConfig {
    pub max_n: usize,
    pub seed: u64,
    pub random_graphs: usize,
    pub random_min_n: usize,
    pub random_max_n: usize,
    pub jacobi_samples: usize,
    pub joins: usize,
}

impl Default for CrosscheckConfig {
    fn default() -> Self {
        CrosscheckConfig {
            max_n: 6,
            seed: 0,
            random_graphs: 0,
            random_min_n: 8,
            random_max_n: 16,
            jacobi_samples: 200,
            joins: 50,
        }
    }
}

/// Seeded random graphs with order in `min_n..=max_n` and edge density in `[0.2, 0.8)`.
pub fn random_corpus(count: usize, min_n: usize, max_n: usize, seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(min_n..=max_n);
            catalog::random_graph(n, rng.gen_range(0.2..0.8), rng.gen())
        })
        .collect()
}

pub fn run_all(cfg: &CrosscheckConfig) -> Result<Vec<SuiteReport>> {
    let mut corpus = Vec::new();
    for n in 1..=cfg.max_n {
        corpus.extend(catalog::connected_graphs(n)?);
    }
    let random = random_corpus(cfg.random_graphs, cfg.random_min_n, cfg.random_max_n, cfg.seed);
    let mut out = vec![
        route_agreement(corpus.iter().chain(&random)),
        mixing_integrality(corpus.iter().filter(|g| g.n() <= 10)),
        symmetry_matrices(corpus.iter().chain(&random)),
        jacobi_identity(cfg.jacobi_samples, cfg.seed),
        rabbit_ears(cfg.max_n).report,
        joins_by_path(cfg.joins, 14, cfg.seed),
        all_strong(cfg.max_n),
    ];
    let fixtures = [
        Graph::complete(2),
        Graph::path(3),
        Graph::path(4),
        catalog::prism_path(),
        Graph::star(3),
        Graph::cycle(4),
    ];
    out.push(certificates(fixtures.iter(), 20.0, 4000).report);
    Ok(out)
}
