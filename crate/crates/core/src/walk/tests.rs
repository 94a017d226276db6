use super::*;
use crate::catalog;
use crate::cospectral::Analyzer;
use crate::graph::Graph;
use crate::spectral::{eigen_decompose, DEFAULT_GROUP_TOL};
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

fn decomp(g: &Graph) -> SpectralDecomposition {
    eigen_decompose(g, DEFAULT_GROUP_TOL).unwrap()
}

/// Largest `|U(t)_{03}|` on P₄ over `[0, 50]` with 50 000 grid points.
const P4_MAX_MAGNITUDE: f64 = 0.9961710408648272;

#[test]
fn amplitude_examples() {
    let k2 = decomp(&Graph::complete(2));
    let p = transfer_amplitude(&k2, 0, 1, FRAC_PI_2).unwrap();
    assert!((p.amplitude - Complex64::new(0.0, 1.0)).norm() < 1e-14);
    assert!((p.magnitude - 1.0).abs() < 1e-14 && p.orbit_distance < 1e-7);
    let p3 = decomp(&Graph::path(3));
    let p = transfer_amplitude(&p3, 0, 2, PI / SQRT_2).unwrap();
    assert!((p.amplitude - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
    let pet = decomp(&Graph::petersen());
    let p = transfer_amplitude(&pet, 3, 3, 0.0).unwrap();
    assert!((p.amplitude - Complex64::new(1.0, 0.0)).norm() < 1e-12 && p.orbit_distance < 1e-6);
    assert!(transfer_amplitude(&p3, 0, 3, 0.0).is_err());
    assert!(transfer_amplitude(&p3, 0, 1, f64::NAN).is_err());
}

#[test]
fn closed_form_on_p3() {
    let d = decomp(&Graph::path(3));
    for k in 0..50 {
        let t = k as f64 * 0.37;
        let want = 0.5 * (SQRT_2 * t).cos() - 0.5;
        let got = transfer_amplitude(&d, 0, 2, t).unwrap().amplitude;
        assert!((got - Complex64::new(want, 0.0)).norm() < 1e-12);
    }
}

#[test]
fn scan_examples() {
    let p3 = decomp(&Graph::path(3));
    let s = scan_max_transfer(&p3, 0, 2, 10.0, 10_000).unwrap();
    assert!((s.t_star - PI / SQRT_2).abs() < 1e-4, "{s:?}");
    assert!(s.magnitude >= 1.0 - 1e-9);
    let k2 = decomp(&Graph::complete(2));
    let s = scan_max_transfer(&k2, 0, 1, 4.0, 1000).unwrap();
    assert!((s.t_star - FRAC_PI_2).abs() < 1e-4 && s.magnitude >= 1.0 - 1e-9);
    assert!(scan_max_transfer(&k2, 0, 1, 0.0, 10).is_err());
    assert!(scan_max_transfer(&k2, 0, 1, 1.0, 1).is_err());
    assert!(scan_max_transfer(&k2, 0, 2, 1.0, 10).is_err());
}

#[test]
fn p4_has_no_perfect_transfer() {
    let d = decomp(&Graph::path(4));
    let s = scan_max_transfer(&d, 0, 3, 50.0, 50_000).unwrap();
    assert!(s.magnitude < 1.0);
    assert!((s.magnitude - P4_MAX_MAGNITUDE).abs() <= 1e-9, "{s:?}");
    let again = scan_max_transfer(&d, 0, 3, 50.0, 50_000).unwrap();
    assert_eq!(s, again);
    // A finer scan cannot find anything materially larger.
    let fine = scan_max_transfer(&d, 0, 3, 50.0, 400_000).unwrap();
    assert!(fine.magnitude <= s.magnitude + 1e-6);
}

#[test]
fn scan_is_independent_of_thread_count() {
    let d = decomp(&catalog::prism_path());
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let x = one.install(|| scan_max_transfer(&d, 0, 5, 30.0, 20_000).unwrap());
    let y = four.install(|| scan_max_transfer(&d, 0, 5, 30.0, 20_000).unwrap());
    assert_eq!(x, y);
}

#[test]
fn trace_csv() {
    let d = decomp(&Graph::complete(2));
    let pts = walk_trace(&d, 0, 1, 1.0, 3).unwrap();
    let mut buf = Vec::new();
    write_trace_csv(&pts, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,re,im,magnitude,orbit_distance");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("0,0,0,0,"));
}

#[test]
fn certificate_examples() {
    let k2 = Graph::complete(2);
    let d = decomp(&k2);
    let c = cospectrality_certificate(&k2, &d, 0, 1, FRAC_PI_2).unwrap();
    assert!(c.verdict && !c.vacuous);
    assert_eq!(c.threshold, 1.0 - 1.0 / 128.0);
    match &c.provenance {
        Provenance::TraceFft {
            trace_exact,
            deficit_bound,
            ..
        } => {
            assert_eq!(trace_exact.as_deref(), Some("4"));
            assert_eq!(deficit_bound.as_deref(), Some("1/128"));
        }
        other => panic!("{other:?}"),
    }
    let s = strong_cospectrality_certificate(&k2, &d, 0, 1, FRAC_PI_2).unwrap();
    assert!(s.verdict);
    assert_eq!(s.threshold, 1.0 / 16.0);

    let p3 = Graph::path(3);
    let d = decomp(&p3);
    assert_eq!(certificate::trace_fft_exact(&p3).unwrap(), 15.into());
    let c = cospectrality_certificate(&p3, &d, 0, 2, PI / SQRT_2).unwrap();
    assert!(c.verdict);
    let s = strong_cospectrality_certificate(&p3, &d, 0, 2, PI / SQRT_2).unwrap();
    assert!(s.verdict);
    assert_eq!(s.threshold, 1.0 / 1024.0);
    for k in 0..400 {
        let t = k as f64 * 0.05;
        assert!(!cospectrality_certificate(&p3, &d, 0, 1, t).unwrap().verdict);
    }

    let star = Graph::star(3);
    let d = decomp(&star);
    let scan = scan_max_transfer(&d, 1, 2, 50.0, 20_000).unwrap();
    for t in [0.0, 1.0, scan.t_star] {
        assert!(!strong_cospectrality_certificate(&star, &d, 1, 2, t).unwrap().verdict);
    }
}

#[test]
fn certificate_json() {
    let k2 = Graph::complete(2);
    let d = decomp(&k2);
    let v = serde_json::to_value(strong_cospectrality_certificate(&k2, &d, 0, 1, FRAC_PI_2).unwrap()).unwrap();
    assert_eq!(v["kind"], "strongly_cospectral");
    assert_eq!(v["provenance"]["source"], "discriminant");
    assert_eq!(v["provenance"]["disc"], "4");
    assert_eq!(v["provenance"]["threshold_exact"], "1/16");
}

#[test]
fn closeness_examples() {
    let k2 = Graph::complete(2);
    let d = decomp(&k2);
    let r = closeness_report(&k2, &d, 0, 1, FRAC_PI_2).unwrap();
    assert!(r.close && r.automorphism_check == Some(true) && r.equitable_check == Some(true));
    assert!(r.certificate().verdict);

    let z = catalog::prism_path();
    let d = decomp(&z);
    let s = scan_max_transfer(&d, 0, 5, 50.0, 50_000).unwrap();
    let r = closeness_report(&z, &d, 0, 5, s.t_star).unwrap();
    assert!(r.close, "{r:?}");
    assert_eq!((r.automorphism_check, r.equitable_check), (Some(true), Some(true)));

    let p3 = Graph::path(3);
    let d = decomp(&p3);
    let r = closeness_report(&p3, &d, 0, 1, 0.0).unwrap();
    assert!(!r.close && (r.distance - SQRT_2).abs() < 1e-12);
    assert_eq!(r.conclusion, "no conclusion");
}

/// Orbit distance from full density matrices `U D_a U*` and `D_b`.
fn full_distance(d: &SpectralDecomposition, a: usize, b: usize, t: f64) -> f64 {
    let u = transition_matrix(d, t);
    let col = u.column(a);
    let n = d.n();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            let x = col[i] * col[j].conj() - Complex64::new(if i == b && j == b { 1.0 } else { 0.0 }, 0.0);
            s += x.norm_sqr();
        }
    }
    s.sqrt()
}

fn random_graph() -> impl Strategy<Value = Graph> {
    (2usize..10, any::<u64>()).prop_map(|(n, seed)| catalog::random_graph(n, 0.5, seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn unitary_and_group_law(g in random_graph(), s in -20.0f64..20.0, t in -20.0f64..20.0) {
        let d = decomp(&g);
        let n = g.n();
        let us = transition_matrix(&d, s);
        let ut = transition_matrix(&d, t);
        let id = DMatrix::<Complex64>::identity(n, n);
        prop_assert!((&ut * ut.adjoint() - &id).norm() < 1e-9);
        prop_assert!((transition_matrix(&d, s + t) - &us * &ut).norm() < 1e-8);
        prop_assert!((transition_matrix(&d, 0.0) - &id).norm() < 1e-9);
    }

    #[test]
    fn distance_identity(g in random_graph(), a in 0usize..10, b in 0usize..10, t in 0.0f64..30.0) {
        let d = decomp(&g);
        let (a, b) = (a % g.n(), b % g.n());
        let p = transfer_amplitude(&d, a, b, t).unwrap();
        let full = full_distance(&d, a, b, t);
        prop_assert!((p.orbit_distance.powi(2) - full.powi(2)).abs() < 1e-8);
        let col: f64 = (0..g.n()).map(|c| transfer_amplitude(&d, a, c, t).unwrap().magnitude.powi(2)).sum();
        prop_assert!((col - 1.0).abs() < 1e-9);
    }

    #[test]
    fn scan_respects_fidelity_and_pst_implies_sc(g in random_graph(), a in 0usize..10, b in 0usize..10) {
        let n = g.n();
        let (a, b) = (a % n, b % n);
        prop_assume!(a != b);
        let d = decomp(&g);
        let s = scan_max_transfer(&d, a, b, 20.0, 2000).unwrap();
        let p = crate::spectral::spectral_density(&d, a).unwrap();
        let q = crate::spectral::spectral_density(&d, b).unwrap();
        prop_assert!(s.magnitude <= crate::spectral::fidelity(&p, &q).unwrap() + 1e-8);
        if s.magnitude >= 1.0 - 1e-6 {
            prop_assert!(Analyzer::new(&g).unwrap().strongly_cospectral_exact(a, b).unwrap());
        }
    }
}
