use super::{rhs_coefficients, FundamentalMatrix, RhsCoefficients, OVERFLOW_LIMIT};
use crate::error::{Error, Result};
use crate::params::DimensionlessParams;
use crate::scalar::Real;

/// One classical fourth-order Runge–Kutta step of `y' = f(y)`.
pub fn rk4_step<T: Real, const N: usize, F>(y: &[T; N], h: T, f: F) -> [T; N]
where
    F: Fn(&[T; N]) -> [T; N],
{
    let two = T::lit(2.0);
    let half = h / two;
    let axpy =
        |a: T, x: &[T; N], y: &[T; N]| -> [T; N] { std::array::from_fn(|i| y[i] + a * x[i]) };

    let k1 = f(y);
    let k2 = f(&axpy(half, &k1, y));
    let k3 = f(&axpy(half, &k2, y));
    let k4 = f(&axpy(h, &k3, y));
    let sixth = h / T::lit(6.0);
    std::array::from_fn(|i| y[i] + sixth * (k1[i] + two * k2[i] + two * k3[i] + k4[i]))
}

/// Number of fixed steps covering `length`; the last one may be shorter.
pub fn steps_for<T: Real>(length: T, step: T) -> usize {
    let ratio = length / step;
    let whole = ratio.round();
    // Lengths that are a whole number of steps up to roundoff do not get a sliver step.
    if (ratio - whole).abs() <= T::lit(1e-9) * whole.max(T::one()) {
        whole.to_usize().unwrap_or(0).max(1)
    } else {
        ratio.ceil().to_usize().unwrap_or(0).max(1)
    }
}

#[inline]
fn normal_rhs<T: Real>(k: RhsCoefficients<T>) -> impl Fn(&[T; 4]) -> [T; 4] {
    move |g: &[T; 4]| {
        [
            g[2],
            g[3],
            k.k1 * g[0] - k.k2 * g[1],
            k.k2 * g[0] + k.k1 * g[1],
        ]
    }
}

/// Fundamental matrix at `x_end` of the normal system started from the identity
/// at `x_start`.
pub fn integrate_fundamental<T: Real>(
    q: T,
    omega: T,
    dp: &DimensionlessParams<T>,
    x_start: T,
    x_end: T,
    step: T,
) -> Result<FundamentalMatrix<T>> {
    if !(step > T::zero()) {
        return Err(Error::InvalidArgument(format!(
            "integration step must be positive, got {step}"
        )));
    }
    if x_end < x_start {
        return Err(Error::InvalidArgument(format!(
            "integration interval [{x_start}, {x_end}] is reversed"
        )));
    }
    if x_end == x_start {
        return Ok(FundamentalMatrix::identity());
    }
    let f = normal_rhs(rhs_coefficients(q, omega, dp.eps1)?);
    let steps = steps_for(x_end - x_start, step);
    let limit = T::lit(OVERFLOW_LIMIT);

    let mut cols: [[T; 4]; 4] =
        std::array::from_fn(|j| std::array::from_fn(|k| if j == k { T::one() } else { T::zero() }));
    let mut x = x_start;
    for i in 0..steps {
        let h = if i + 1 == steps { x_end - x } else { step };
        for col in cols.iter_mut() {
            *col = rk4_step(col, h, &f);
        }
        x = if i + 1 == steps {
            x_end
        } else {
            x_start + step * T::from_usize(i + 1).unwrap()
        };
        let blown = cols.iter().flatten().any(|v| !(v.abs() <= limit));
        if blown {
            return Err(Error::Overflow { x: x.as_f64() });
        }
    }
    Ok(FundamentalMatrix::from_columns(cols))
}
