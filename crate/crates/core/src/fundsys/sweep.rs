use super::{find_eigenvalue, SearchOptions, SpectralPoint};
use crate::asymptotic::corrected_eigenvalue;
use crate::conservative::find_roots;
use crate::error::{Error, Result};
use crate::params::DimensionlessParams;
use crate::scalar::Real;
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow<T> {
    pub nu: T,
    /// 1-based mode number.
    pub mode: usize,
    pub point: SpectralPoint<T>,
}

/// Eigenvalues of the requested modes along an ascending feedback grid.
///
/// Each mode starts from its asymptotic estimate at the first `nu` and is then
/// warm-started from the previous grid value. Modes are independent and run in
/// parallel; rows come back ordered by `(nu, mode)` in the order `modes` lists them.
pub fn sweep_feedback<T: Real>(
    dp: &DimensionlessParams<T>,
    nu_values: &[T],
    modes: &[usize],
    opts: &SearchOptions<T>,
) -> Result<Vec<SweepRow<T>>> {
    if nu_values.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidArgument(
            "feedback grid must be strictly ascending".into(),
        ));
    }
    if modes.contains(&0) {
        return Err(Error::InvalidArgument("mode numbers are 1-based".into()));
    }
    let Some(&highest) = modes.iter().max() else {
        return Ok(Vec::new());
    };
    if nu_values.is_empty() {
        return Ok(Vec::new());
    }

    let omega_max = T::PI() * T::from_usize(highest + 1).unwrap();
    let roots = find_roots(dp, omega_max, highest)?.roots;
    if roots.len() < highest {
        return Err(Error::InvalidArgument(format!(
            "only {} conservative modes found below {omega_max}",
            roots.len()
        )));
    }

    let columns: Vec<Vec<SpectralPoint<T>>> = modes
        .par_iter()
        .map(|&mode| -> Result<Vec<SpectralPoint<T>>> {
            let w = roots[mode - 1].omega;
            let mut seed = SpectralPoint::from(corrected_eigenvalue(w, &dp.with_nu(nu_values[0]))?);
            let mut out = Vec::with_capacity(nu_values.len());
            for &nu in nu_values {
                let point = find_eigenvalue(&dp.with_nu(nu), seed, opts);
                seed = SpectralPoint::guess(point.q, point.omega);
                out.push(point);
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(nu_values.len() * modes.len());
    for (i, &nu) in nu_values.iter().enumerate() {
        for (column, &mode) in columns.iter().zip(modes) {
            rows.push(SweepRow {
                nu,
                mode,
                point: column[i],
            });
        }
    }
    Ok(rows)
}
