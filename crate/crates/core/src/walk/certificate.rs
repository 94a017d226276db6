use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::transfer_amplitude;
use crate::algebra::{char_poly, minimal_polynomial_from_char_poly};
use crate::cospectral::Analyzer;
use crate::error::{check_pair, Error, Result};
use crate::graph::{coarsest_equitable_partition, for_each_automorphism, AutomorphismLimits, Graph, Partition};
use crate::spectral::SpectralDecomposition;

/// `‖D_a(t) − D_b‖` below this forces automorphism and partition consequences.
pub const CLOSENESS_THRESHOLD: f64 = std::f64::consts::FRAC_1_SQRT_2;
/// Largest order for which `tr(FFᵀ)` is computed exactly.
const EXACT_TRACE_LIMIT: usize = 32;
/// Deficits below this are indistinguishable from rounding in `|U|`.
const MAGNITUDE_NOISE: f64 = 1e-12;
/// Distances below this are indistinguishable from rounding in `√(2 − 2|U|²)`.
const DISTANCE_NOISE: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    Cospectral,
    StronglyCospectral,
    Closeness,
}

/// Where a threshold comes from, with exact values as decimal strings.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum Provenance {
    /// `1 − |U| ≤ 1/(8·tr(FFᵀ)²)` with `F_{rl} = θ_r^{l-1}`.
    TraceFft {
        trace_exact: Option<String>,
        log10_trace: f64,
        deficit_bound: Option<String>,
        /// `1 − 1/(8n⁴ρ⁴)`, kept for comparison only.
        printed_threshold: Option<f64>,
    },
    /// `‖D_a(t) − D_b‖ < 1/disc(ψ)²`.
    Discriminant {
        disc: String,
        disc_squared: String,
        threshold_exact: String,
    },
    Fixed {
        threshold_exact: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub a: usize,
    pub b: usize,
    pub t: f64,
    pub observed: f64,
    pub threshold: f64,
    pub verdict: bool,
    /// The threshold is below numeric resolution, so no verdict can be issued.
    pub vacuous: bool,
    pub provenance: Provenance,
}

/// `Σ_{k<n} p_{2k}(ψ)`, the exact value of `tr(FFᵀ)`.
pub fn trace_fft_exact(g: &Graph) -> Result<BigInt> {
    let psi = minimal_polynomial_from_char_poly(g, &char_poly(g))?.psi;
    let n = g.n();
    let sums = psi.power_sums(2 * n.max(1) - 1)?;
    Ok((0..n).map(|k| sums[2 * k].clone()).fold(BigInt::zero(), |acc, x| acc + x))
}

/// `log10 tr(FFᵀ)` from the numeric eigenvalues, by log-sum-exp.
fn log10_trace(d: &SpectralDecomposition) -> f64 {
    let n = d.n();
    let mut logs = Vec::new();
    for &theta in d.eigenvalues() {
        let l = theta.abs().ln();
        for k in 0..n {
            if k == 0 {
                logs.push(0.0);
            } else if theta.abs() > 1e-12 {
                logs.push(2.0 * k as f64 * l);
            }
        }
    }
    let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (m + logs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()) / std::f64::consts::LN_10
}

pub fn cospectrality_certificate(g: &Graph, d: &SpectralDecomposition, a: usize, b: usize, t: f64) -> Result<Certificate> {
    check_pair(a, b, g.n())?;
    let n = g.n();
    let observed = transfer_amplitude(d, a, b, t)?.magnitude;
    let log_tr = log10_trace(d);
    let (trace_exact, tau) = if n <= EXACT_TRACE_LIMIT {
        let tr = trace_fft_exact(g)?;
        let tr_f = tr.to_f64().unwrap_or(f64::INFINITY);
        let rel = (tr_f.log10() - log_tr).abs();
        if tr_f.is_finite() && rel > 1e-6 {
            return Err(Error::InvariantViolation(format!(
                "tr(FFᵀ) = {tr} disagrees with numeric estimate 10^{log_tr}"
            )));
        }
        (Some(tr), 1.0 / (8.0 * tr_f * tr_f))
    } else {
        (None, 0.0)
    };
    let vacuous = !(tau >= MAGNITUDE_NOISE);
    let verdict = !vacuous && 1.0 - observed <= tau;
    let rho = d.spectral_radius();
    let printed = (rho > 0.0).then(|| 1.0 - 1.0 / (8.0 * (n as f64).powi(4) * rho.powi(4)));
    let cert = Certificate {
        kind: CertificateKind::Cospectral,
        a,
        b,
        t,
        observed,
        threshold: 1.0 - tau,
        verdict,
        vacuous,
        provenance: Provenance::TraceFft {
            deficit_bound: trace_exact.as_ref().map(|tr| format!("1/{}", BigInt::from(8) * tr * tr)),
            trace_exact: trace_exact.map(|x| x.to_string()),
            log10_trace: log_tr,
            printed_threshold: printed,
        },
    };
    if verdict && !Analyzer::new(g)?.cospectral_exact(a, b)? {
        return Err(Error::InvariantViolation(format!(
            "cospectrality certificate for ({a}, {b}) at t = {t} refuted by the exact test"
        )));
    }
    Ok(cert)
}

pub fn strong_cospectrality_certificate(g: &Graph, d: &SpectralDecomposition, a: usize, b: usize, t: f64) -> Result<Certificate> {
    check_pair(a, b, g.n())?;
    let observed = transfer_amplitude(d, a, b, t)?.orbit_distance;
    let an = Analyzer::new(g)?;
    let disc = an.minimal_polynomial().disc.clone();
    let disc2 = &disc * &disc;
    let threshold = 1.0 / disc2.to_f64().unwrap_or(f64::INFINITY);
    let vacuous = !(threshold >= DISTANCE_NOISE);
    let verdict = !vacuous && observed < threshold;
    if verdict && !an.strongly_cospectral_exact(a, b)? {
        return Err(Error::InvariantViolation(format!(
            "strong cospectrality certificate for ({a}, {b}) at t = {t} refuted by the exact test"
        )));
    }
    Ok(Certificate {
        kind: CertificateKind::StronglyCospectral,
        a,
        b,
        t,
        observed,
        threshold,
        verdict,
        vacuous,
        provenance: Provenance::Discriminant {
            disc: disc.to_string(),
            disc_squared: disc2.to_string(),
            threshold_exact: format!("1/{disc2}"),
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosenessReport {
    pub a: usize,
    pub b: usize,
    pub t: f64,
    pub distance: f64,
    pub close: bool,
    /// Every automorphism fixing `a` fixes `b`; `None` when not checked.
    pub automorphism_check: Option<bool>,
    /// `{b}` is a cell of the coarsest equitable partition with `{a}` a cell.
    pub equitable_check: Option<bool>,
    pub conclusion: String,
}

impl ClosenessReport {
    pub fn certificate(&self) -> Certificate {
        Certificate {
            kind: CertificateKind::Closeness,
            a: self.a,
            b: self.b,
            t: self.t,
            observed: self.distance,
            threshold: CLOSENESS_THRESHOLD,
            verdict: self.close,
            vacuous: false,
            provenance: Provenance::Fixed {
                threshold_exact: "1/sqrt(2)".into(),
            },
        }
    }
}

pub fn closeness_report(g: &Graph, d: &SpectralDecomposition, a: usize, b: usize, t: f64) -> Result<ClosenessReport> {
    check_pair(a, b, g.n())?;
    let distance = transfer_amplitude(d, a, b, t)?.orbit_distance;
    let close = distance < CLOSENESS_THRESHOLD;
    if !close {
        return Ok(ClosenessReport {
            a,
            b,
            t,
            distance,
            close,
            automorphism_check: None,
            equitable_check: None,
            conclusion: "no conclusion".into(),
        });
    }
    let part = coarsest_equitable_partition(g, &Partition::with_singleton(g.n(), a)?)?;
    let equitable = part.is_singleton(b);
    if !equitable {
        return Err(Error::InvariantViolation(format!(
            "distance {distance} < 1/sqrt(2) but {{{b}}} is not a cell of the partition seeded by {{{a}}}"
        )));
    }
    let limit = AutomorphismLimits::default().max_vertices;
    let automorphism = if g.n() <= limit {
        let mut ok = true;
        for_each_automorphism(g, &[(a, a)], limit, |p| {
            if p.apply(b) != b {
                ok = false;
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        })?;
        if !ok {
            return Err(Error::InvariantViolation(format!(
                "distance {distance} < 1/sqrt(2) but an automorphism fixing {a} moves {b}"
            )));
        }
        Some(true)
    } else {
        None
    };
    Ok(ClosenessReport {
        a,
        b,
        t,
        distance,
        close,
        automorphism_check: automorphism,
        equitable_check: Some(true),
        conclusion: format!("automorphisms fixing {a} fix {b}; {{{b}}} is a cell whenever {{{a}}} is"),
    })
}
