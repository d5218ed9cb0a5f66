//! Small-dissipation estimates built on the conservative spectrum.
//!
//! All operations take the unscaled groups `eps1`, `mu`, `nu`; products of the
//! common small parameter with its barred factors are already collapsed.
//!
//! The first method corrects a conservative frequency `w` to a complex exponent
//! and yields a polynomial self-excitation test `N(w) / M(w) <= 0`. The second
//! method looks for a forced resonant response around the conservative mode and
//! yields an equivalent test whose denominator bracket is the same polynomial `N`.

use crate::error::{Error, Result};
use crate::params::DimensionlessParams;
use crate::scalar::Real;

const DEGENERATE: f64 = 1e-12;

/// Exponent `q + i omega` of a free vibration `U(x) e^{(q + i omega) tau}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexEigenvalue<T> {
    /// Growth rate (real part of the exponent).
    pub q: T,
    /// Frequency (imaginary part of the exponent).
    pub omega: T,
}

impl<T: Real> ComplexEigenvalue<T> {
    pub fn new(q: T, omega: T) -> Self {
        Self { q, omega }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExcitationReport<T> {
    pub indicator: T,
    pub numerator: T,
    pub denominator: T,
    /// `indicator <= 0`: the mode self-excites (or sits on the boundary).
    pub excited: bool,
}

/// Outcome of solving the excitation boundary for the feedback group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CriticalFeedback<T> {
    /// Feedback at which the mode reaches the excitation boundary.
    Critical(T),
    /// No non-negative feedback excites the mode; `solution` is the (negative or
    /// meaningless) root of the affine excitation numerator.
    NeverExcited { solution: T },
}

impl<T: Real> CriticalFeedback<T> {
    pub fn value(&self) -> Option<T> {
        match *self {
            CriticalFeedback::Critical(nu) => Some(nu),
            CriticalFeedback::NeverExcited { .. } => None,
        }
    }
}

/// Frequency separating stable from self-excited spectral regions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryFrequency<T> {
    Frequency(T),
    NoBoundary,
}

impl<T: Real> BoundaryFrequency<T> {
    pub fn value(&self) -> Option<T> {
        match *self {
            BoundaryFrequency::Frequency(w) => Some(w),
            BoundaryFrequency::NoBoundary => None,
        }
    }
}

/// Coefficients of `U(x) = (B1 + B2 x) cos(w x) + (C1 + C2 x) sin(w x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForcedModeCoefficients<T> {
    pub b1: T,
    pub b2: T,
    pub c1: T,
    pub c2: T,
    /// Amplitude of the underlying conservative mode `A sin(w x) cos(w tau)`.
    pub amplitude: T,
}

impl<T: Real> ForcedModeCoefficients<T> {
    pub fn value(&self, omega: T, x: T) -> T {
        let (s, c) = (omega * x).sin_cos();
        (self.b1 + self.b2 * x) * c + (self.c1 + self.c2 * x) * s
    }

    pub fn second_derivative(&self, omega: T, x: T) -> T {
        let (s, c) = (omega * x).sin_cos();
        let two = T::lit(2.0);
        let w2 = omega * omega;
        -w2 * (self.b1 + self.b2 * x) * c
            - two * omega * self.b2 * s
            - w2 * (self.c1 + self.c2 * x) * s
            + two * omega * self.c2 * c
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForcedMode<T> {
    pub coefficients: ForcedModeCoefficients<T>,
    pub grid: Vec<T>,
    pub values: Vec<T>,
    /// Largest `|U'' + w^2 U + eps1 A w^3 sin(w x)|` over the grid.
    pub max_residual: T,
}

/// Common denominator `eta^2 delta^2 w^4 + (eta delta + eta - 2 delta) eta w^2 + eta + 1`.
fn modal_denominator<T: Real>(w: T, dp: &DimensionlessParams<T>) -> T {
    let (eta, delta) = (dp.eta, dp.delta);
    let w2 = w * w;
    eta * eta * delta * delta * w2 * w2
        + (delta * eta - T::lit(2.0) * delta + eta) * eta * w2
        + eta
        + T::one()
}

fn checked_denominator<T: Real>(
    w: T,
    dp: &DimensionlessParams<T>,
    context: &'static str,
) -> Result<T> {
    let den = modal_denominator(w, dp);
    if den.abs() < T::lit(DEGENERATE) || !den.is_finite() {
        return Err(Error::DegenerateDenominator {
            context,
            value: den.abs().as_f64(),
        });
    }
    Ok(den)
}

/// Imaginary correction `Lambda` in `lambda = w + i Lambda`.
pub fn frequency_correction<T: Real>(w: T, dp: &DimensionlessParams<T>) -> Result<T> {
    let den = checked_denominator(w, dp, "frequency correction")?;
    let (eta, delta) = (dp.eta, dp.delta);
    let w2 = w * w;
    let bracket = (delta * dp.mu + dp.nu * delta - dp.eps1) * eta * w2 - dp.nu;
    Ok(eta * delta * w2 * bracket / den)
}

/// First-order complex exponent of the mode that continues the conservative
/// frequency `w`.
///
/// With `lambda = w + i Lambda` substituted into `-eps1 lambda^2 / 2 + i lambda`,
/// the real part to first order is `q = -eps1 w^2 / 2 - Lambda` and the frequency
/// stays `w`.
pub fn corrected_eigenvalue<T: Real>(
    w: T,
    dp: &DimensionlessParams<T>,
) -> Result<ComplexEigenvalue<T>> {
    let correction = frequency_correction(w, dp)?;
    let q = -dp.eps1 * w * w / T::lit(2.0) - correction;
    Ok(ComplexEigenvalue { q, omega: w })
}

/// The excitation numerator `N(w, nu)` split as `intercept + slope * nu`.
fn numerator_parts<T: Real>(w: T, dp: &DimensionlessParams<T>) -> (T, T) {
    let (eps1, mu, eta, delta) = (dp.eps1, dp.mu, dp.eta, dp.delta);
    let two = T::lit(2.0);
    let w2 = w * w;
    let ed = eta * delta;
    let intercept = eps1 * ed * ed * w2 * w2
        + (two * ed * ed * mu + eps1 * eta * eta * (T::one() - delta) - two * ed * eps1) * w2
        + eps1 * (T::one() + eta);
    let slope = two * ed * (ed * w2 - T::one());
    (intercept, slope)
}

/// Numerator of the excitation test, `N(w)`.
pub fn excitation_numerator<T: Real>(w: T, dp: &DimensionlessParams<T>) -> T {
    let (eps1, mu, nu, eta, delta) = (dp.eps1, dp.mu, dp.nu, dp.eta, dp.delta);
    let two = T::lit(2.0);
    let w2 = w * w;
    eps1 * eta * eta * delta * delta * w2 * w2
        + (two * eta * eta * delta * delta * (mu + nu) + eps1 * eta * eta * (T::one() - delta)
            - two * eta * delta * eps1)
            * w2
        + eps1 * (T::one() + eta)
        - two * eta * delta * nu
}

pub fn excitation_indicator<T: Real>(
    w: T,
    dp: &DimensionlessParams<T>,
) -> Result<ExcitationReport<T>> {
    let (eta, delta) = (dp.eta, dp.delta);
    let w2 = w * w;
    let denominator = eta * eta * delta * delta * w2 * w2
        + (eta * (T::one() + delta) - T::lit(2.0) * delta) * eta * w2
        + eta
        + T::one();
    if denominator.abs() < T::lit(DEGENERATE) || !denominator.is_finite() {
        return Err(Error::DegenerateDenominator {
            context: "excitation indicator",
            value: denominator.abs().as_f64(),
        });
    }
    let numerator = excitation_numerator(w, dp);
    let indicator = numerator / denominator;
    Ok(ExcitationReport {
        indicator,
        numerator,
        denominator,
        excited: indicator <= T::zero(),
    })
}

/// Feedback at which the mode of frequency `w` reaches the excitation boundary.
/// `dp.nu` is ignored.
pub fn critical_feedback<T: Real>(
    w: T,
    dp: &DimensionlessParams<T>,
) -> Result<CriticalFeedback<T>> {
    let (intercept, slope) = numerator_parts(w, dp);
    if slope.abs() < T::lit(1e-15) {
        return Err(Error::NoFeedbackInfluence {
            omega: w.as_f64(),
            slope: slope.as_f64(),
        });
    }
    if slope > T::zero() && intercept > T::zero() {
        return Ok(CriticalFeedback::NeverExcited {
            solution: -intercept / slope,
        });
    }
    let nu = -intercept / slope;
    if nu < T::zero() {
        Ok(CriticalFeedback::NeverExcited { solution: nu })
    } else {
        // `+ 0` folds a negative zero into positive zero.
        Ok(CriticalFeedback::Critical(nu + T::zero()))
    }
}

/// Frequency at which the excitation numerator vanishes for feedback `nu`.
/// `dp.nu` is ignored. Of two admissible roots the larger one is returned.
pub fn boundary_frequency<T: Real>(nu: T, dp: &DimensionlessParams<T>) -> BoundaryFrequency<T> {
    let (eps1, mu, eta, delta) = (dp.eps1, dp.mu, dp.eta, dp.delta);
    let two = T::lit(2.0);
    let ed = eta * delta;
    // a s^2 + b s + c with s = w^2.
    let a = eps1 * ed * ed;
    let b = two * ed * ed * (mu + nu) + eps1 * eta * eta * (T::one() - delta) - two * ed * eps1;
    let c = eps1 * (T::one() + eta) - two * ed * nu;

    let roots: Vec<T> = if a == T::zero() {
        if b == T::zero() {
            Vec::new()
        } else {
            vec![-c / b]
        }
    } else {
        let disc = b * b - T::lit(4.0) * a * c;
        if disc < T::zero() {
            Vec::new()
        } else {
            let sq = disc.sqrt();
            let q = -(b + b.signum() * sq) / two;
            let mut r = Vec::with_capacity(2);
            r.push(q / a);
            if q != T::zero() {
                r.push(c / q);
            } else {
                r.push(T::zero());
            }
            r
        }
    };
    // A root within roundoff of zero is the zero-frequency boundary.
    let slack = T::lit(16.0)
        * T::epsilon()
        * if a == T::zero() {
            T::one()
        } else {
            (b / a).abs().max(T::one())
        };
    roots
        .into_iter()
        .filter(|s| s.is_finite() && *s >= -slack)
        .map(|s| s.max(T::zero()))
        .fold(None, |best: Option<T>, s| {
            Some(best.map_or(s, |b| b.max(s)))
        })
        .map_or(BoundaryFrequency::NoBoundary, |s| {
            BoundaryFrequency::Frequency(s.sqrt())
        })
}

/// Denominator bracket `H(w, nu)` of the second-method excitation test.
pub fn second_method_bracket<T: Real>(omega: T, dp: &DimensionlessParams<T>) -> T {
    let (eps1, mu, nu, eta, delta) = (dp.eps1, dp.mu, dp.nu, dp.eta, dp.delta);
    let w2 = omega * omega;
    let m = eta * delta * w2 - T::one();
    eps1 * (eta * eta * w2 * (T::one() - delta) + m * m + eta)
        + T::lit(2.0) * (eta * eta * w2 * delta * delta * (nu + mu) - eta * nu * delta)
}

/// Left-hand side of the second-method excitation test, evaluated at `xbar`
/// (callers without a preference use `xbar = 1`).
pub fn second_method_indicator<T: Real>(
    omega: T,
    dp: &DimensionlessParams<T>,
    c2: T,
    xbar: T,
) -> Result<T> {
    let arg = omega * xbar;
    let (s, c) = arg.sin_cos();
    if s.abs() < T::lit(1e-12) {
        return Err(Error::Pole {
            value: s.abs().as_f64(),
        });
    }
    let bracket = second_method_bracket(omega, dp);
    if bracket.abs() < T::lit(1e-15) {
        return Err(Error::DegenerateDenominator {
            context: "second-method indicator",
            value: bracket.abs().as_f64(),
        });
    }
    let (eta, delta) = (dp.eta, dp.delta);
    let w2 = omega * omega;
    let m = eta * delta * w2 - T::one();
    let g = eta * eta * w2 * (T::one() + delta) + m * m - eta;
    Ok(c2 * (g * omega * (c / s) - m * m) / (bracket * w2 * omega))
}

/// Resonant correction `U(x)` sampled on `points` uniform nodes of `[0, 1]`.
///
/// `B1 = 0` enforces `U(0) = 0` and `B2 = eps1 A w^2 / 2` cancels the resonant
/// forcing; `C1`, `C2` are free. Only the `C2 x sin(w x)` term leaves a residual
/// (`2 w C2 cos(w x)`), so the residual vanishes for `C2 = 0`.
pub fn forced_mode<T: Real>(
    omega: T,
    amplitude: T,
    dp: &DimensionlessParams<T>,
    c1: T,
    c2: T,
    points: usize,
) -> Result<ForcedMode<T>> {
    if !(omega > T::zero()) {
        return Err(Error::InvalidArgument(format!(
            "omega must be positive, got {omega}"
        )));
    }
    let coefficients = ForcedModeCoefficients {
        b1: T::zero(),
        b2: dp.eps1 * amplitude * omega * omega / T::lit(2.0),
        c1,
        c2,
        amplitude,
    };
    let grid = uniform_grid(points);
    let forcing = dp.eps1 * amplitude * omega * omega * omega;
    let mut max_residual = T::zero();
    let values = grid
        .iter()
        .map(|&x| {
            let u = coefficients.value(omega, x);
            let residual = coefficients.second_derivative(omega, x)
                + omega * omega * u
                + forcing * (omega * x).sin();
            max_residual = max_residual.max(residual.abs());
            u
        })
        .collect();
    Ok(ForcedMode {
        coefficients,
        grid,
        values,
        max_residual,
    })
}

pub(crate) fn uniform_grid<T: Real>(points: usize) -> Vec<T> {
    match points {
        0 => Vec::new(),
        1 => vec![T::zero()],
        n => {
            let last = T::from_usize(n - 1).unwrap();
            (0..n).map(|i| T::from_usize(i).unwrap() / last).collect()
        }
    }
}
