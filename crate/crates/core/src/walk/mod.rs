//! Continuous quantum walk `U(t) = Σ_r e^{itθ_r} E_r`: amplitudes, orbit
//! distances, transfer scans and closeness certificates.

mod certificate;

use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

pub use certificate::{
    closeness_report, cospectrality_certificate, strong_cospectrality_certificate, Certificate, CertificateKind, ClosenessReport,
    Provenance, CLOSENESS_THRESHOLD,
};

use crate::error::{check_vertex, Error, Result};
use crate::spectral::SpectralDecomposition;

/// Golden-section iterations used by [`scan_max_transfer`].
pub const REFINE_ITERATIONS: usize = 60;

/// Full `U(t)`.
pub fn transition_matrix(d: &SpectralDecomposition, t: f64) -> DMatrix<Complex64> {
    let n = d.n();
    let mut u = DMatrix::<Complex64>::zeros(n, n);
    for (theta, e) in d.eigenvalues().iter().zip(d.idempotents()) {
        let phase = Complex64::from_polar(1.0, theta * t);
        u += e.map(|x| phase * x);
    }
    u
}

/// `U(t)_{ab}` with its magnitude and the orbit distance `‖D_a(t) − D_b‖`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransferAmplitude {
    pub t: f64,
    #[serde(serialize_with = "serialize_complex")]
    pub amplitude: Complex64,
    pub magnitude: f64,
    pub orbit_distance: f64,
}

fn serialize_complex<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

/// `√(2 − 2m²)`, clamped at zero.
pub fn orbit_distance_from_magnitude(m: f64) -> f64 {
    (2.0 - 2.0 * m * m).max(0.0).sqrt()
}

/// Amplitude evaluator for a fixed pair: `Σ_r (E_r)_{ab} e^{itθ_r}`.
#[derive(Debug, Clone)]
struct PairSeries {
    thetas: Vec<f64>,
    weights: Vec<f64>,
}

impl PairSeries {
    fn new(d: &SpectralDecomposition, a: usize, b: usize) -> Result<PairSeries> {
        check_vertex(a, d.n())?;
        check_vertex(b, d.n())?;
        Ok(PairSeries {
            thetas: d.eigenvalues().to_vec(),
            weights: d.idempotents().iter().map(|e| e[(a, b)]).collect(),
        })
    }

    fn amplitude(&self, t: f64) -> Complex64 {
        self.thetas
            .iter()
            .zip(&self.weights)
            .map(|(th, w)| Complex64::from_polar(*w, th * t))
            .sum()
    }

    fn magnitude(&self, t: f64) -> f64 {
        self.amplitude(t).norm()
    }

    fn point(&self, t: f64) -> TransferAmplitude {
        let amplitude = self.amplitude(t);
        let magnitude = amplitude.norm();
        TransferAmplitude {
            t,
            amplitude,
            magnitude,
            orbit_distance: orbit_distance_from_magnitude(magnitude),
        }
    }
}

pub fn transfer_amplitude(d: &SpectralDecomposition, a: usize, b: usize, t: f64) -> Result<TransferAmplitude> {
    if !t.is_finite() {
        return Err(Error::InvalidArgument(format!("time must be finite, got {t}")));
    }
    Ok(PairSeries::new(d, a, b)?.point(t))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanResult {
    pub t_star: f64,
    pub magnitude: f64,
    /// True when golden-section refinement improved on the best grid point.
    pub refined: bool,
}

fn check_scan_args(t_max: f64, steps: usize) -> Result<()> {
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "t_max must be positive and finite, got {t_max}"
        )));
    }
    if steps < 2 {
        return Err(Error::InvalidArgument(format!("steps must be at least 2, got {steps}")));
    }
    Ok(())
}

fn grid_time(t_max: f64, steps: usize, i: usize) -> f64 {
    t_max * i as f64 / (steps - 1) as f64
}

/// Larger magnitude wins; ties go to the earlier time.
fn better(x: (f64, f64), y: (f64, f64)) -> (f64, f64) {
    match x.0.total_cmp(&y.0) {
        std::cmp::Ordering::Greater => x,
        std::cmp::Ordering::Less => y,
        std::cmp::Ordering::Equal => {
            if x.1 <= y.1 {
                x
            } else {
                y
            }
        }
    }
}

/// Grid scan of `|U(t)_{ab}|` over `[0, t_max]` followed by golden-section
/// refinement on the bracketing interval of the best grid point.
pub fn scan_max_transfer(d: &SpectralDecomposition, a: usize, b: usize, t_max: f64, steps: usize) -> Result<ScanResult> {
    check_scan_args(t_max, steps)?;
    let series = PairSeries::new(d, a, b)?;
    let (grid_mag, grid_t) = (0..steps)
        .into_par_iter()
        .map(|i| {
            let t = grid_time(t_max, steps, i);
            (series.magnitude(t), t)
        })
        .reduce(|| (f64::NEG_INFINITY, f64::INFINITY), better);
    let i = (grid_t / t_max * (steps - 1) as f64).round() as usize;
    let mut lo = grid_time(t_max, steps, i.saturating_sub(1));
    let mut hi = grid_time(t_max, steps, (i + 1).min(steps - 1));
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (series.magnitude(x1), series.magnitude(x2));
    for _ in 0..REFINE_ITERATIONS {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = series.magnitude(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = series.magnitude(x2);
        }
    }
    let t_ref = 0.5 * (lo + hi);
    let m_ref = series.magnitude(t_ref);
    Ok(if m_ref > grid_mag {
        ScanResult {
            t_star: t_ref,
            magnitude: m_ref,
            refined: true,
        }
    } else {
        ScanResult {
            t_star: grid_t,
            magnitude: grid_mag,
            refined: false,
        }
    })
}

/// Samples of the walk on the scan grid.
pub fn walk_trace(d: &SpectralDecomposition, a: usize, b: usize, t_max: f64, steps: usize) -> Result<Vec<TransferAmplitude>> {
    check_scan_args(t_max, steps)?;
    let series = PairSeries::new(d, a, b)?;
    Ok((0..steps).map(|i| series.point(grid_time(t_max, steps, i))).collect())
}

/// CSV with columns `t, re, im, magnitude, orbit_distance`.
pub fn write_trace_csv<W: Write>(points: &[TransferAmplitude], mut w: W) -> std::io::Result<()> {
    writeln!(w, "t,re,im,magnitude,orbit_distance")?;
    for p in points {
        writeln!(
            w,
            "{},{},{},{},{}",
            p.t, p.amplitude.re, p.amplitude.im, p.magnitude, p.orbit_distance
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests;
