use super::{
    boundary_coefficients, composed_fundamental, integrate_fundamental, BoundarySystem,
    FundamentalMatrix, SearchOptions, SpectralPoint,
};
use crate::asymptotic::uniform_grid;
use crate::error::{Error, Result};
use crate::params::DimensionlessParams;
use crate::scalar::Real;

/// Normalized determinant above which the boundary system counts as full rank.
pub const RANK_TOLERANCE: f64 = 1e-8;

/// Complex displacement profile `u1 + i u2` on a grid of `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeShape<T> {
    pub grid: Vec<T>,
    pub u1: Vec<T>,
    pub u2: Vec<T>,
    /// Weights of the third and fourth fundamental solutions.
    pub c3: T,
    pub c4: T,
}

impl<T: Real> ModeShape<T> {
    pub fn amplitude(&self) -> impl Iterator<Item = T> + '_ {
        self.u1.iter().zip(&self.u2).map(|(a, b)| a.hypot(*b))
    }
}

/// Displacement profile of the eigenvalue at `point`, sampled on `points` nodes.
///
/// The 2x2 boundary system is the real form of a single complex equation, so at
/// an eigenvalue every `(C3, C4)` solves it and the shape is defined up to a
/// complex factor. That factor is fixed by making the peak displacement real and
/// equal to one.
pub fn mode_shape<T: Real>(
    point: &SpectralPoint<T>,
    dp: &DimensionlessParams<T>,
    points: usize,
    opts: &SearchOptions<T>,
) -> Result<ModeShape<T>> {
    if points < 2 {
        return Err(Error::InvalidArgument(format!(
            "mode shape needs at least 2 grid points, got {points}"
        )));
    }
    let (q, omega) = (point.q, point.omega);
    let gamma_end = composed_fundamental(q, omega, dp, opts.subintervals.max(1), opts.step)?;
    let system = BoundarySystem::from_matrix(&gamma_end, &boundary_coefficients(q, omega, dp));
    let residual = system.normalized();
    if !(residual < T::lit(RANK_TOLERANCE)) {
        return Err(Error::FullRank {
            residual: residual.as_f64(),
        });
    }

    // Third fundamental solution (u1'(0) = 1) along the grid.
    let grid = uniform_grid::<T>(points);
    let mut gamma = FundamentalMatrix::identity();
    let mut phi = Vec::with_capacity(points);
    phi.push((T::zero(), T::zero()));
    for w in grid.windows(2) {
        gamma = integrate_fundamental(q, omega, dp, w[0], w[1], opts.step)? * gamma;
        phi.push((gamma.get(0, 2), gamma.get(1, 2)));
    }

    let (peak_re, peak_im) = phi.iter().copied().fold((T::zero(), T::zero()), |best, v| {
        if v.0.hypot(v.1) > best.0.hypot(best.1) {
            v
        } else {
            best
        }
    });
    let peak2 = peak_re * peak_re + peak_im * peak_im;
    if !(peak2 > T::zero()) {
        return Err(Error::InvalidArgument(
            "mode shape vanishes on the grid".into(),
        ));
    }
    // (C3 + i C4) = 1 / phi(peak); the fourth solution is i times the third.
    let c3 = peak_re / peak2;
    let c4 = -peak_im / peak2;
    let (u1, u2) = phi
        .iter()
        .map(|&(re, im)| (c3 * re - c4 * im, c3 * im + c4 * re))
        .unzip();
    Ok(ModeShape {
        grid,
        u1,
        u2,
        c3,
        c4,
    })
}
