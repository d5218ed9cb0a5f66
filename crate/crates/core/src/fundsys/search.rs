use super::{delta_subdivided, DEFAULT_STEP, DEFAULT_SUBINTERVALS};
use crate::asymptotic::ComplexEigenvalue;
use crate::params::DimensionlessParams;
use crate::scalar::Real;
use crate::simplex::{minimize, SimplexOptions};

/// A located (or best-effort) zero of the characteristic determinant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint<T> {
    pub q: T,
    pub omega: T,
    /// Normalized determinant at `(q, omega)`.
    pub delta_value: T,
    pub converged: bool,
}

impl<T: Real> SpectralPoint<T> {
    /// An unevaluated guess.
    pub fn guess(q: T, omega: T) -> Self {
        Self {
            q,
            omega,
            delta_value: T::infinity(),
            converged: false,
        }
    }

    pub fn eigenvalue(&self) -> ComplexEigenvalue<T> {
        ComplexEigenvalue::new(self.q, self.omega)
    }
}

impl<T: Real> From<ComplexEigenvalue<T>> for SpectralPoint<T> {
    fn from(ev: ComplexEigenvalue<T>) -> Self {
        Self::guess(ev.q, ev.omega)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions<T> {
    pub step: T,
    pub subintervals: usize,
    /// Initial simplex offsets in `q` and `omega`.
    pub simplex_q: T,
    pub simplex_omega: T,
    pub diameter_tolerance: T,
    pub max_iterations: usize,
    /// `delta_value` below this marks the point converged.
    pub acceptance: T,
    /// The result frequency stays within this distance of the seed frequency.
    pub band_half_width: T,
}

impl<T: Real> Default for SearchOptions<T> {
    fn default() -> Self {
        Self {
            step: T::lit(DEFAULT_STEP),
            subintervals: DEFAULT_SUBINTERVALS,
            simplex_q: T::lit(1e-3),
            simplex_omega: T::lit(1e-3),
            diameter_tolerance: T::lit(1e-10),
            max_iterations: 500,
            acceptance: T::lit(1e-12),
            band_half_width: T::FRAC_PI_2(),
        }
    }
}

/// Minimizes the normalized determinant over `(q, omega)` starting at `seed`.
///
/// Two simplex passes run: one from the seed and one restarted at its result with
/// a ten times smaller simplex. Frequencies outside the seed band or non-positive
/// are penalized above any attainable determinant, which keeps the search on the
/// seeded mode. Failure to converge is reported through `converged`.
pub fn find_eigenvalue<T: Real>(
    dp: &DimensionlessParams<T>,
    seed: SpectralPoint<T>,
    opts: &SearchOptions<T>,
) -> SpectralPoint<T> {
    let center = seed.omega;
    let band = opts.band_half_width;
    let penalty = T::lit(10.0);
    let objective = |x: &[T; 2]| -> T {
        let (q, omega) = (x[0], x[1]);
        let offset = (omega - center).abs();
        if !(omega > T::zero()) || !(offset < band) {
            return penalty + offset;
        }
        delta_subdivided(q, omega, dp, opts.subintervals, opts.step).unwrap_or(penalty)
    };

    let simplex = SimplexOptions {
        diameter_tolerance: opts.diameter_tolerance,
        max_iterations: opts.max_iterations,
        ..SimplexOptions::default()
    };
    let first = minimize(
        objective,
        [seed.q, seed.omega],
        [opts.simplex_q, opts.simplex_omega],
        &simplex,
    );
    let tenth = T::lit(0.1);
    let second = minimize(
        objective,
        first.x,
        [opts.simplex_q * tenth, opts.simplex_omega * tenth],
        &simplex,
    );
    let best = if second.f <= first.f { second } else { first };
    let [q, omega] = best.x;
    SpectralPoint {
        q,
        omega,
        delta_value: best.f,
        converged: best.f < opts.acceptance,
    }
}
