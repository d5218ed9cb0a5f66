//! Complex eigenvalues by normal fundamental systems of solutions.
//!
//! Substituting `u = (u1 + i u2) e^{(q + i omega) tau}` into the bar equation
//! gives a real fourth-order normal system for `(u1, u2, u1', u2')` with constant
//! coefficients `K1`, `K2`. Its fundamental matrix `Gamma(x)` (identity at
//! `x = 0`) is integrated by fixed-step RK4. The clamped end kills the first two
//! columns, and the free end turns columns three and four into a 2x2 boundary
//! system `[[E1, E2], [E3, E4]]`; eigenvalues are the `(q, omega)` where its
//! determinant vanishes.

mod integrate;
mod search;
mod shape;
mod sweep;

pub use integrate::{integrate_fundamental, rk4_step, steps_for};
pub use search::{find_eigenvalue, SearchOptions, SpectralPoint};
pub use shape::{mode_shape, ModeShape};
pub use sweep::{sweep_feedback, SweepRow};

use crate::error::{Error, Result};
use crate::params::DimensionlessParams;
use crate::scalar::Real;
use std::ops::Mul;

/// Entries above this magnitude abort integration.
pub const OVERFLOW_LIMIT: f64 = 1e150;

/// Default integration step.
pub const DEFAULT_STEP: f64 = 1.0 / 2000.0;

/// Default number of subintervals for the subdivided determinant.
pub const DEFAULT_SUBINTERVALS: usize = 8;

/// State `(u1, u2, u1', u2')` of the normal system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector<T> {
    pub g1: T,
    pub g2: T,
    pub g3: T,
    pub g4: T,
}

impl<T: Real> StateVector<T> {
    pub fn to_array(self) -> [T; 4] {
        [self.g1, self.g2, self.g3, self.g4]
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }
}

impl<T: Real> From<[T; 4]> for StateVector<T> {
    fn from(a: [T; 4]) -> Self {
        Self {
            g1: a[0],
            g2: a[1],
            g3: a[2],
            g4: a[3],
        }
    }
}

/// 4x4 fundamental matrix; column `j` is the state of Cauchy solution `j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalMatrix<T> {
    /// Row-major entries: `rows[k][j]` is function `k` of solution `j`.
    pub rows: [[T; 4]; 4],
}

impl<T: Real> FundamentalMatrix<T> {
    pub fn identity() -> Self {
        let mut rows = [[T::zero(); 4]; 4];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = T::one();
        }
        Self { rows }
    }

    pub fn get(&self, row: usize, col: usize) -> T {
        self.rows[row][col]
    }

    pub fn column(&self, j: usize) -> StateVector<T> {
        StateVector::from([
            self.rows[0][j],
            self.rows[1][j],
            self.rows[2][j],
            self.rows[3][j],
        ])
    }

    pub fn from_columns(cols: [[T; 4]; 4]) -> Self {
        let mut rows = [[T::zero(); 4]; 4];
        for (j, col) in cols.iter().enumerate() {
            for (k, v) in col.iter().enumerate() {
                rows[k][j] = *v;
            }
        }
        Self { rows }
    }

    pub fn apply(&self, v: &[T; 4]) -> [T; 4] {
        let mut out = [T::zero(); 4];
        for (o, row) in out.iter_mut().zip(&self.rows) {
            *o = row.iter().zip(v).map(|(a, b)| *a * *b).sum();
        }
        out
    }

    pub fn max_abs(&self) -> T {
        self.rows
            .iter()
            .flatten()
            .fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.rows.iter().flatten().all(|v| v.is_finite())
    }

    /// Determinant by cofactor expansion along 2x2 minors of the top rows.
    pub fn determinant(&self) -> T {
        let m = &self.rows;
        let minor = |r0: usize, r1: usize, c0: usize, c1: usize| {
            m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]
        };
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let mut det = T::zero();
        for &(a, b) in &pairs {
            let (c, d) = complement(a, b);
            let sign = if (a + b) % 2 == 0 {
                -T::one()
            } else {
                T::one()
            };
            det = det + sign * minor(0, 1, a, b) * minor(2, 3, c, d);
        }
        det
    }
}

fn complement(a: usize, b: usize) -> (usize, usize) {
    let mut rest = (0..4).filter(|&i| i != a && i != b);
    (rest.next().unwrap(), rest.next().unwrap())
}

impl<T: Real> Mul for FundamentalMatrix<T> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let mut rows = [[T::zero(); 4]; 4];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (0..4).map(|k| self.rows[i][k] * rhs.rows[k][j]).sum();
            }
        }
        Self { rows }
    }
}

/// Coefficients of the normal system `u1'' = K1 u1 - K2 u2`, `u2'' = K2 u1 + K1 u2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhsCoefficients<T> {
    pub k1: T,
    pub k2: T,
}

pub fn rhs_coefficients<T: Real>(q: T, omega: T, eps1: T) -> Result<RhsCoefficients<T>> {
    let one_q = T::one() + eps1 * q;
    let den = eps1 * eps1 * omega * omega + one_q * one_q;
    if !(den > T::lit(1e-30)) {
        return Err(Error::DegenerateDenominator {
            context: "normal-system coefficients",
            value: den.abs().as_f64(),
        });
    }
    let r2 = q * q + omega * omega;
    let k1 = (q * q - omega * omega + eps1 * q * r2) / den;
    let k2 = (T::lit(2.0) * q + eps1 * r2) * omega / den;
    Ok(RhsCoefficients { k1, k2 })
}

/// Real/imaginary coefficients of the free-end boundary condition
/// `D1 u1 + D2 u2 + D3 u1' + D4 u2' = 0`, `-D2 u1 + D1 u2 - D4 u1' + D3 u2' = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryCoefficients<T> {
    pub d1: T,
    pub d2: T,
    pub d3: T,
    pub d4: T,
}

impl<T: Real> BoundaryCoefficients<T> {
    pub fn norm_sqr(&self) -> T {
        self.d1 * self.d1 + self.d2 * self.d2 + self.d3 * self.d3 + self.d4 * self.d4
    }
}

pub fn boundary_coefficients<T: Real>(
    q: T,
    omega: T,
    dp: &DimensionlessParams<T>,
) -> BoundaryCoefficients<T> {
    let (eps1, mu, nu, eta, delta) = (dp.eps1, dp.mu, dp.nu, dp.eta, dp.delta);
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let (q2, w2) = (q * q, omega * omega);
    let nm = nu + mu;
    let d1 = eta * (q2 - w2) + eta * delta * q2 * q * nm - three * eta * delta * q * w2 * nm;
    let d2 = -three * eta * delta * q2 * omega * nm
        + eta * omega * (mu * delta * w2 - two * q + nu * delta * w2);
    let d3 = delta * (q2 - w2) * (eps1 * mu + eta)
        + eps1 * eta * delta * q * (q2 - three * w2)
        + q * (mu * delta + eps1)
        + T::one();
    let d4 = -omega * (eps1 + mu * delta) + eps1 * eta * delta * omega * (w2 - three * q2)
        - two * delta * q * omega * (eta + eps1 * mu);
    BoundaryCoefficients { d1, d2, d3, d4 }
}

/// The 2x2 boundary system at `x = 1` together with its normalization scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundarySystem<T> {
    /// `[E1, E2, E3, E4]`.
    pub e: [T; 4],
    /// `E1 E4 - E2 E3`.
    pub determinant: T,
    /// `|D|^2 (|Gamma_3|^2 + |Gamma_4|^2) / 2`, an upper bound of the determinant.
    pub scale: T,
}

impl<T: Real> BoundarySystem<T> {
    pub fn from_matrix(gamma: &FundamentalMatrix<T>, d: &BoundaryCoefficients<T>) -> Self {
        let c3 = gamma.column(2).to_array();
        let c4 = gamma.column(3).to_array();
        let first = |c: &[T; 4]| d.d1 * c[0] + d.d2 * c[1] + d.d3 * c[2] + d.d4 * c[3];
        let second = |c: &[T; 4]| -d.d2 * c[0] + d.d1 * c[1] - d.d4 * c[2] + d.d3 * c[3];
        let e = [first(&c3), first(&c4), second(&c3), second(&c4)];
        let determinant = e[0] * e[3] - e[1] * e[2];
        let col_norms: T = c3.iter().chain(&c4).map(|v| *v * *v).sum();
        let scale = d.norm_sqr() * col_norms / T::lit(2.0);
        Self {
            e,
            determinant,
            scale,
        }
    }

    /// Determinant divided by its scale bound; lies in `[0, 1]`.
    pub fn normalized(&self) -> T {
        // Near an eigenvalue roundoff can push the determinant a hair below zero.
        (self.determinant / (self.scale + T::tiny())).max(T::zero())
    }
}

/// Boundary system for the fundamental matrix composed over `n` equal subintervals.
pub fn boundary_system<T: Real>(
    q: T,
    omega: T,
    dp: &DimensionlessParams<T>,
    n: usize,
    step: T,
) -> Result<BoundarySystem<T>> {
    let gamma = composed_fundamental(q, omega, dp, n, step)?;
    let d = boundary_coefficients(q, omega, dp);
    Ok(BoundarySystem::from_matrix(&gamma, &d))
}

/// `Gamma(1)` as the right-to-left product of per-subinterval fundamental matrices.
///
/// Each factor starts from the identity at its left node; continuity of values
/// and slopes across nodes is exactly state propagation through the product.
pub fn composed_fundamental<T: Real>(
    q: T,
    omega: T,
    dp: &DimensionlessParams<T>,
    n: usize,
    step: T,
) -> Result<FundamentalMatrix<T>> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "subinterval count must be at least 1".into(),
        ));
    }
    let nodes = crate::asymptotic::uniform_grid::<T>(n + 1);
    let mut gamma = FundamentalMatrix::identity();
    for w in nodes.windows(2) {
        let piece = integrate_fundamental(q, omega, dp, w[0], w[1], step)?;
        gamma = if n == 1 { piece } else { piece * gamma };
        if gamma.max_abs() > T::lit(OVERFLOW_LIMIT) || !gamma.is_finite() {
            return Err(Error::Overflow { x: w[1].as_f64() });
        }
    }
    Ok(gamma)
}

/// Normalized characteristic determinant from a single integration over `[0, 1]`.
pub fn delta<T: Real>(q: T, omega: T, dp: &DimensionlessParams<T>, step: T) -> Result<T> {
    Ok(boundary_system(q, omega, dp, 1, step)?.normalized())
}

/// Normalized characteristic determinant from `n` composed subintervals.
pub fn delta_subdivided<T: Real>(
    q: T,
    omega: T,
    dp: &DimensionlessParams<T>,
    n: usize,
    step: T,
) -> Result<T> {
    Ok(boundary_system(q, omega, dp, n, step)?.normalized())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn reference() -> DimensionlessParams<f64> {
        DimensionlessParams::reference()
    }

    const W1: f64 = 0.3534042287528503;

    #[test]
    fn rhs_coefficients_limits() {
        let c = rhs_coefficients(0.3, 1.7, 0.0).unwrap();
        assert_eq!(c.k1, 0.3 * 0.3 - 1.7 * 1.7);
        assert_eq!(c.k2, 2.0 * 0.3 * 1.7);
        let c = rhs_coefficients(0.0, 2.0, 0.0).unwrap();
        assert_eq!((c.k1, c.k2), (-4.0, 0.0));
        let c = rhs_coefficients(-0.4, 0.0, 0.005).unwrap();
        assert_eq!(c.k2, 0.0);
    }

    #[test]
    fn rhs_coefficients_degenerate() {
        assert!(rhs_coefficients(-200.0, 0.0, 0.005).is_err());
    }

    #[test]
    fn boundary_coefficients_conservative() {
        let dp = reference().conservative();
        let w = 1.3;
        let d = boundary_coefficients(0.0, w, &dp);
        assert!((d.d1 + dp.eta * w * w).abs() < 1e-14);
        assert_eq!(d.d2, 0.0);
        assert!((d.d3 - (1.0 - dp.eta * dp.delta * w * w)).abs() < 1e-15);
        assert_eq!(d.d4, 0.0);
    }

    #[test]
    fn boundary_coefficients_at_rest() {
        let d = boundary_coefficients(0.0, 0.0, &reference());
        assert_eq!((d.d1, d.d2, d.d4), (0.0, 0.0, 0.0));
        assert_eq!(d.d3, 1.0);
    }

    fn leibniz(m: &FundamentalMatrix<f64>) -> f64 {
        let mut total = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let p = [a, b, c, d];
                        let distinct = (0..4).all(|i| (i + 1..4).all(|j| p[i] != p[j]));
                        if !distinct {
                            continue;
                        }
                        let inversions = (0..4)
                            .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
                            .filter(|&(i, j)| p[i] > p[j])
                            .count();
                        let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
                        total += sign * (0..4).map(|i| m.rows[i][p[i]]).product::<f64>();
                    }
                }
            }
        }
        total
    }

    #[test]
    fn matrix_algebra() {
        let id = FundamentalMatrix::<f64>::identity();
        assert_eq!(id.determinant(), 1.0);
        assert_eq!(id * id, id);
        let m = FundamentalMatrix::from_columns([
            [2.0, -1.0, 0.5, 1.0],
            [0.3, 3.0, 0.0, -2.0],
            [1.0, 0.7, 1.0, 0.0],
            [-0.4, 0.0, 2.5, 4.0],
        ]);
        assert!((m.determinant() - leibniz(&m)).abs() < 1e-12);
        assert_eq!(m.column(0).to_array(), [2.0, -1.0, 0.5, 1.0]);
        assert_eq!(m.apply(&[0.0, 1.0, 0.0, 0.0]), m.column(1).to_array());
        let sq = m * m;
        assert!((sq.determinant() - leibniz(&m).powi(2)).abs() < 1e-9);
    }

    #[test]
    fn determinant_vanishes_on_conservative_spectrum() {
        let dp = reference().conservative();
        let d = delta(0.0, W1, &dp, DEFAULT_STEP).unwrap();
        assert!(d < 1e-10, "{d}");
    }

    #[test]
    fn off_spectrum_growth_is_detected() {
        let dp = reference().conservative();
        let d = delta(0.3, W1, &dp, DEFAULT_STEP).unwrap();
        assert!(d > 1e-4, "{d}");
    }

    #[test]
    fn conjugate_structure_of_boundary_system() {
        let sys = boundary_system(0.07, 1.9, &reference(), 1, DEFAULT_STEP).unwrap();
        let [e1, e2, e3, e4] = sys.e;
        assert!((e4 - e1).abs() < 1e-12 * (1.0 + e1.abs()));
        assert!((e2 + e3).abs() < 1e-12 * (1.0 + e3.abs()));
        assert!(sys.determinant >= 0.0);
        assert!(sys.normalized() <= 1.0);
    }

    #[test]
    fn single_subinterval_equals_basic_method() {
        let dp = reference();
        let a = delta(-0.01, 0.36, &dp, DEFAULT_STEP).unwrap();
        let b = delta_subdivided(-0.01, 0.36, &dp, 1, DEFAULT_STEP).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn subdivided_undamped_matrix() {
        let dp = DimensionlessParams::new(0.0, 0.0, 0.0, 7.0, 0.1);
        let m = composed_fundamental(0.0, PI, &dp, 4, DEFAULT_STEP).unwrap();
        assert!((m.get(0, 0) + 1.0).abs() < 1e-8);
        assert!(m.get(0, 2).abs() < 1e-8);
    }

    #[test]
    fn zero_subintervals_rejected() {
        assert!(delta_subdivided(0.0, 1.0, &reference(), 0, DEFAULT_STEP).is_err());
    }
}
