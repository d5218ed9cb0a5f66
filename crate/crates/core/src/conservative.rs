//! Natural frequencies of the undamped bar.
//!
//! The frequency equation `cot(w) = eta w / (1 - eta delta w^2)` is solved in its
//! pole-free form
//!
//! ```text
//! chi(w) = (eta delta w^2 - 1) cos(w) + eta w sin(w)
//! ```
//!
//! by a sign scan followed by bisection. A cell can hide an even number of roots
//! without a sign change, so every scan is repeated at half the step; while the
//! finer scan sees more brackets, or some cell has end slopes pointing at each
//! other with matching end signs, the step keeps halving.

use crate::error::{Error, Result};
use crate::params::DimensionlessParams;
use crate::scalar::Real;

/// Maximum number of times the scan step is halved while hunting hidden root pairs.
pub const MAX_REFINEMENTS: usize = 6;

/// Bracket width at which bisection stops.
pub const BISECTION_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservativeRoot<T> {
    pub omega: T,
    /// 1-based mode number.
    pub index: usize,
}

/// Non-fatal findings of a root scan.
#[derive(Debug, Clone, PartialEq)]
pub enum ScanDiagnostic {
    /// Scan step was halved because a cell looked like it contained two roots.
    Refined { step: f64 },
    /// A cell still looks like it hides a (near-)double root after all refinements.
    PossibleDoubleRoot { near: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootScan<T> {
    pub roots: Vec<ConservativeRoot<T>>,
    pub diagnostics: Vec<ScanDiagnostic>,
}

pub fn characteristic<T: Real>(omega: T, dp: &DimensionlessParams<T>) -> T {
    let ed = dp.eta * dp.delta;
    (ed * omega * omega - T::one()) * omega.cos() + dp.eta * omega * omega.sin()
}

/// Derivative of [`characteristic`] with respect to `omega`.
pub fn characteristic_slope<T: Real>(omega: T, dp: &DimensionlessParams<T>) -> T {
    let ed = dp.eta * dp.delta;
    let two = T::lit(2.0);
    let (s, c) = omega.sin_cos();
    two * ed * omega * c - (ed * omega * omega - T::one()) * s + dp.eta * (s + omega * c)
}

/// Default scan step, `min(0.01, pi / 50)`.
pub fn default_scan_step<T: Real>() -> T {
    T::lit(0.01).min(T::PI() / T::lit(50.0))
}

/// Conservative frequencies in `(0, omega_max]`, ascending, at most `max_count`.
pub fn find_roots<T: Real>(
    dp: &DimensionlessParams<T>,
    omega_max: T,
    max_count: usize,
) -> Result<RootScan<T>> {
    find_roots_with_step(dp, omega_max, max_count, default_scan_step())
}

pub fn find_roots_with_step<T: Real>(
    dp: &DimensionlessParams<T>,
    omega_max: T,
    max_count: usize,
    step: T,
) -> Result<RootScan<T>> {
    if !(omega_max > T::zero()) || !omega_max.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "omega_max must be positive and finite, got {omega_max}"
        )));
    }
    if !(step > T::zero()) {
        return Err(Error::InvalidArgument(format!(
            "scan step must be positive, got {step}"
        )));
    }

    let mut diagnostics = Vec::new();
    let mut step = step;
    let mut current = scan(dp, omega_max, step);
    for _ in 0..MAX_REFINEMENTS {
        let finer = scan(dp, omega_max, step / T::lit(2.0));
        if finer.brackets.len() == current.brackets.len() && current.suspicious.is_empty() {
            break;
        }
        step = step / T::lit(2.0);
        diagnostics.push(ScanDiagnostic::Refined {
            step: step.as_f64(),
        });
        current = finer;
    }
    diagnostics.extend(
        current
            .suspicious
            .iter()
            .map(|&near| ScanDiagnostic::PossibleDoubleRoot {
                near: near.as_f64(),
            }),
    );
    let scan = current;

    let roots = scan
        .brackets
        .into_iter()
        .take(max_count)
        .enumerate()
        .map(|(i, (lo, hi))| ConservativeRoot {
            omega: bisect(dp, lo, hi),
            index: i + 1,
        })
        .collect();
    Ok(RootScan { roots, diagnostics })
}

struct Scan<T> {
    brackets: Vec<(T, T)>,
    suspicious: Vec<T>,
}

fn scan<T: Real>(dp: &DimensionlessParams<T>, omega_max: T, step: T) -> Scan<T> {
    let mut brackets = Vec::new();
    let mut suspicious = Vec::new();
    let cells = (omega_max / step).ceil().to_usize().unwrap_or(0).max(1);

    let mut lo = T::zero();
    let mut f_lo = characteristic(lo, dp);
    let mut g_lo = characteristic_slope(lo, dp);
    for k in 1..=cells {
        let hi = if k == cells {
            omega_max
        } else {
            step * T::from_usize(k).unwrap()
        };
        if hi <= lo {
            continue;
        }
        let f_hi = characteristic(hi, dp);
        let g_hi = characteristic_slope(hi, dp);
        if f_hi == T::zero() {
            // Exact hit on a grid node: bracket it from the left.
            brackets.push((lo, hi));
        } else if f_lo != T::zero() && (f_lo < T::zero()) != (f_hi < T::zero()) {
            brackets.push((lo, hi));
        } else if f_lo != T::zero()
            && (g_lo < T::zero()) != (g_hi < T::zero())
            && (f_lo * g_lo < T::zero())
            && (f_hi * g_hi > T::zero())
        {
            // |chi| decreases into the cell from both sides without a sign change.
            suspicious.push((lo + hi) / T::lit(2.0));
        }
        lo = hi;
        f_lo = f_hi;
        g_lo = g_hi;
    }
    Scan {
        brackets,
        suspicious,
    }
}

fn bisect<T: Real>(dp: &DimensionlessParams<T>, mut lo: T, mut hi: T) -> T {
    let mut f_lo = characteristic(lo, dp);
    if characteristic(hi, dp) == T::zero() {
        return hi;
    }
    let floor = T::lit(BISECTION_TOLERANCE);
    loop {
        let tol = floor.max(T::lit(4.0) * T::epsilon() * hi.abs());
        if hi - lo < tol {
            break;
        }
        let mid = lo + (hi - lo) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = characteristic(mid, dp);
        if f_mid == T::zero() {
            return mid;
        }
        if (f_mid < T::zero()) == (f_lo < T::zero()) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    lo + (hi - lo) / T::lit(2.0)
}
