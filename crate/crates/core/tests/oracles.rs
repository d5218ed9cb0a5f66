//! Independent checks of the solvers against closed-form complex arithmetic.

use flexbar::asymptotic::corrected_eigenvalue;
use flexbar::conservative::{characteristic, find_roots};
use flexbar::fundsys::{
    boundary_coefficients, delta, find_eigenvalue, integrate_fundamental, rhs_coefficients,
    sweep_feedback, SearchOptions, SpectralPoint, DEFAULT_STEP,
};
use flexbar::DimensionlessParams;
use num_complex::Complex64;

fn reference() -> DimensionlessParams<f64> {
    DimensionlessParams::reference()
}

/// `kappa^2 = s^2 / (1 + eps1 s)`.
fn kappa(s: Complex64, dp: &DimensionlessParams<f64>) -> Complex64 {
    (s * s / (1.0 + dp.eps1 * s)).sqrt()
}

/// Coefficient of `U(1)` in the free-end condition.
fn p(s: Complex64, dp: &DimensionlessParams<f64>) -> Complex64 {
    dp.eta * dp.delta * (dp.nu + dp.mu) * s * s * s + dp.eta * s * s
}

/// Coefficient of `U'(1)` in the free-end condition.
fn q(s: Complex64, dp: &DimensionlessParams<f64>) -> Complex64 {
    let (e, m, eta, d) = (dp.eps1, dp.mu, dp.eta, dp.delta);
    e * eta * d * s * s * s + d * (eta + e * m) * s * s + (m * d + e) * s + 1.0
}

/// Characteristic function of the clamped-free problem, with `U = sinh(kappa x) / kappa`.
fn characteristic_exact(s: Complex64, dp: &DimensionlessParams<f64>) -> Complex64 {
    let k = kappa(s, dp);
    p(s, dp) * k.sinh() / k + q(s, dp) * k.cosh()
}

/// Complex Newton iteration on the exact characteristic function.
fn exact_eigenvalue(seed: Complex64, dp: &DimensionlessParams<f64>) -> Complex64 {
    let mut s = seed;
    for _ in 0..50 {
        let f = characteristic_exact(s, dp);
        let h = 1e-7;
        let df = (characteristic_exact(s + h, dp) - characteristic_exact(s - h, dp)) / (2.0 * h);
        let next = s - f / df;
        if (next - s).norm() < 1e-15 {
            return next;
        }
        s = next;
    }
    s
}

#[test]
fn boundary_coefficients_match_complex_form() {
    let dp = reference().with_nu(0.037);
    for &(qr, w) in &[(0.0, 0.35), (-0.2, 2.9), (0.4, 7.1), (-1.0, 0.01)] {
        let s = Complex64::new(qr, w);
        let d = boundary_coefficients(qr, w, &dp);
        let (pe, qe) = (p(s, &dp), q(s, &dp));
        let tol = 1e-12 * (1.0 + pe.norm() + qe.norm());
        assert!(
            (d.d1 - pe.re).abs() < tol && (d.d2 + pe.im).abs() < tol,
            "{d:?} vs {pe}"
        );
        assert!(
            (d.d3 - qe.re).abs() < tol && (d.d4 + qe.im).abs() < tol,
            "{d:?} vs {qe}"
        );
    }
}

#[test]
fn rhs_coefficients_match_complex_form() {
    for &(qr, w, e) in &[(0.1, 0.4, 0.005), (-0.7, 3.3, 0.02), (0.0, 9.0, 0.0)] {
        let s = Complex64::new(qr, w);
        let k = s * s / (1.0 + e * s);
        let c = rhs_coefficients(qr, w, e).unwrap();
        assert!((c.k1 - k.re).abs() < 1e-12 * k.norm() && (c.k2 - k.im).abs() < 1e-12 * k.norm());
    }
}

#[test]
fn eigenvalues_match_exact_characteristic_roots() {
    let opts = SearchOptions::default();
    for &nu in &[0.0, 0.05, 0.1] {
        let dp = reference().with_nu(nu);
        for &w in &[0.3534042287528503, 2.904816693573384] {
            let asym = corrected_eigenvalue(w, &dp).unwrap();
            let exact = exact_eigenvalue(Complex64::new(asym.q, asym.omega), &dp);
            let found = find_eigenvalue(&dp, asym.into(), &opts);
            assert!(found.converged, "nu={nu} w={w}: {found:?}");
            assert!(
                (found.q - exact.re).abs() < 1e-8,
                "nu={nu} q {} vs {}",
                found.q,
                exact.re
            );
            assert!(
                (found.omega - exact.im).abs() < 1e-8,
                "nu={nu} omega {} vs {}",
                found.omega,
                exact.im
            );
        }
    }
}

#[test]
fn first_mode_growth_rates() {
    let opts = SearchOptions::default();
    for &(nu, expected) in &[(0.0, -2.90195e-4), (0.05, -1.63025e-5), (0.1, 2.5759e-4)] {
        let dp = reference().with_nu(nu);
        let p = find_eigenvalue(
            &dp,
            corrected_eigenvalue(0.3534042287528503, &dp)
                .unwrap()
                .into(),
            &opts,
        );
        assert!((p.q - expected).abs() < 1e-8, "nu={nu}: {}", p.q);
    }
}

#[test]
fn determinant_vanishes_at_exact_roots_only() {
    let dp = reference();
    let exact = exact_eigenvalue(Complex64::new(-1.6e-5, 0.3534), &dp);
    assert!(delta(exact.re, exact.im, &dp, DEFAULT_STEP).unwrap() < 1e-12);
    assert!(delta(exact.re + 0.01, exact.im, &dp, DEFAULT_STEP).unwrap() > 1e-8);
}

#[test]
fn roots_match_dense_scan() {
    for &(eta, d) in &[(7.0, 0.1), (1.0, 1.0), (0.3, 0.05), (15.0, 1.5)] {
        let dp = DimensionlessParams::<f64>::new(0.0, 0.0, 0.0, eta, d);
        let step = 1e-4f64;
        let mut dense = Vec::new();
        let mut lo = step;
        while lo < 20.0 {
            let hi = lo + step;
            let (mut a, mut b) = (lo, hi.min(20.0));
            if characteristic(a, &dp).signum() != characteristic(b, &dp).signum() {
                while b - a > 1e-14 {
                    let m = 0.5 * (a + b);
                    if characteristic(m, &dp).signum() == characteristic(a, &dp).signum() {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                dense.push(0.5 * (a + b));
            }
            lo = hi;
        }
        let found: Vec<f64> = find_roots(&dp, 20.0, usize::MAX)
            .unwrap()
            .roots
            .iter()
            .map(|r| r.omega)
            .collect();
        assert_eq!(found.len(), dense.len(), "eta={eta} delta={d}");
        for (f, e) in found.iter().zip(&dense) {
            assert!((f - e).abs() < 1e-8, "{f} vs {e}");
        }
    }
}

/// Largest entry error of the third fundamental column against `sinh(kappa x) / kappa`.
fn third_column_error(qr: f64, w: f64, dp: &DimensionlessParams<f64>, step: f64) -> f64 {
    let m = integrate_fundamental(qr, w, dp, 0.0, 1.0, step).unwrap();
    let k = kappa(Complex64::new(qr, w), dp);
    let (u, du) = (k.sinh() / k, k.cosh());
    [
        m.get(0, 2) - u.re,
        m.get(1, 2) - u.im,
        m.get(2, 2) - du.re,
        m.get(3, 2) - du.im,
    ]
    .iter()
    .fold(0.0f64, |acc, e| acc.max(e.abs()))
}

#[test]
fn integrator_is_fourth_order_for_damped_systems() {
    let dp = reference();
    for &(qr, w) in &[(-0.3, 2.9), (0.2, 6.0)] {
        let coarse = third_column_error(qr, w, &dp, 1.0 / 100.0);
        let fine = third_column_error(qr, w, &dp, 1.0 / 200.0);
        assert!(coarse / fine >= 8.0, "q={qr} w={w}: {coarse:e} -> {fine:e}");
        assert!(third_column_error(qr, w, &dp, DEFAULT_STEP) < 1e-9);
    }
}

#[test]
fn numeric_growth_tracks_asymptotic_estimate() {
    let dp = reference();
    let nu: Vec<f64> = (0..=20).map(|i| i as f64 * 0.005).collect();
    let rows = sweep_feedback(&dp, &nu, &[1], &SearchOptions::default()).unwrap();
    for r in rows {
        let asym = corrected_eigenvalue(0.3534042287528503, &dp.with_nu(r.nu)).unwrap();
        assert!(
            (r.point.q - asym.q).abs() < 5e-3,
            "nu={}: {} vs {}",
            r.nu,
            r.point.q,
            asym.q
        );
    }
}

#[test]
fn unconverged_seed_is_flagged() {
    // Far from any eigenvalue, with too few iterations to get there.
    let opts = SearchOptions {
        max_iterations: 3,
        ..SearchOptions::default()
    };
    let p = find_eigenvalue(&reference(), SpectralPoint::guess(0.8, 1.5), &opts);
    assert!(!p.converged);
}

#[test]
fn single_precision_tracks_double() {
    use flexbar::asymptotic::critical_feedback;
    let dp32 = flexbar::DimensionlessParamsF32::reference();
    let roots = find_roots(&dp32, 5.0f32, 2).unwrap().roots;
    assert!(
        (roots[0].omega - 0.35340423).abs() < 1e-5 && (roots[1].omega - 2.9048167).abs() < 1e-5
    );
    let nu = critical_feedback(roots[0].omega, &dp32)
        .unwrap()
        .value()
        .unwrap();
    assert!((nu - 0.05297605).abs() < 1e-5);
    let d = delta(0.0f32, roots[0].omega, &dp32.conservative(), 1.0 / 500.0).unwrap();
    assert!(d < 1e-4, "{d}");
}
