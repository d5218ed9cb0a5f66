//! Physical and dimensionless parameter sets.
//!
//! Every solver works on [`DimensionlessParams`]. Physical constants are only
//! needed to build them; the wave speed `a = sqrt(E / rho)` is derived on the fly.

use crate::error::{Error, Result};
use crate::scalar::Real;
use std::fmt;

/// Dissipative groups above this value are outside the small-dissipation regime.
pub const SMALLNESS_THRESHOLD: f64 = 0.1;

/// The nine physical constants of the bar, mechanism and specimen (SI units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams<T> {
    /// Mass density (kg/m³).
    pub rho: T,
    /// Cross-section area (m²).
    pub area: T,
    /// Elastic modulus (Pa).
    pub modulus: T,
    /// Material dissipation coefficient (s).
    pub beta: T,
    /// Executive-mechanism damping factor (N·s/m).
    pub damping: T,
    /// Centering-spring rigidity (N/m).
    pub stiffness: T,
    /// Feedback coefficient (N·s/m).
    pub feedback: T,
    /// Specimen mass (kg).
    pub mass: T,
    /// Bar length (m).
    pub length: T,
}

impl<T: Real> PhysicalParams<T> {
    pub fn wave_speed(&self) -> T {
        (self.modulus / self.rho).sqrt()
    }

    fn check(&self) -> Result<()> {
        let positive = [
            ("rho", self.rho),
            ("S", self.area),
            ("E", self.modulus),
            ("c", self.stiffness),
            ("m", self.mass),
            ("l", self.length),
        ];
        for (name, value) in positive {
            if !(value > T::zero()) || !value.is_finite() {
                return Err(Error::Domain {
                    name,
                    requirement: "strictly positive and finite",
                    value: value.as_f64(),
                });
            }
        }
        let non_negative = [
            ("beta", self.beta),
            ("b", self.damping),
            ("d", self.feedback),
        ];
        for (name, value) in non_negative {
            if !(value >= T::zero()) || !value.is_finite() {
                return Err(Error::Domain {
                    name,
                    requirement: "non-negative and finite",
                    value: value.as_f64(),
                });
            }
        }
        Ok(())
    }

    /// Maps the physical constants onto the five dimensionless groups.
    pub fn to_dimensionless(&self) -> Result<DimensionlessParams<T>> {
        self.check()?;
        let a = self.wave_speed();
        let es = self.modulus * self.area;
        Ok(DimensionlessParams {
            eps1: self.beta * a / self.length,
            mu: self.damping * a / es,
            nu: self.feedback * a / es,
            eta: self.mass / (self.rho * self.area * self.length),
            delta: es / (self.stiffness * self.length),
        })
    }
}

/// Free-function form of [`PhysicalParams::to_dimensionless`].
pub fn to_dimensionless<T: Real>(p: &PhysicalParams<T>) -> Result<DimensionlessParams<T>> {
    p.to_dimensionless()
}

/// Dimensionless groups of the bar model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessParams<T> {
    /// Material dissipation `beta a / l`.
    pub eps1: T,
    /// Mechanism damping `b a / (E S)`.
    pub mu: T,
    /// Feedback `d a / (E S)`.
    pub nu: T,
    /// Mass ratio `m / (rho S l)`.
    pub eta: T,
    /// Stiffness ratio `E S / (c l)`.
    pub delta: T,
}

impl<T: Real> DimensionlessParams<T> {
    pub fn new(eps1: T, mu: T, nu: T, eta: T, delta: T) -> Self {
        Self {
            eps1,
            mu,
            nu,
            eta,
            delta,
        }
    }

    /// Reference configuration `(0.005, 0.008, 0.05, 7, 0.1)`.
    pub fn reference() -> Self {
        Self::new(
            T::lit(0.005),
            T::lit(0.008),
            T::lit(0.05),
            T::lit(7.0),
            T::lit(0.1),
        )
    }

    /// Same parameters with all dissipation and feedback removed.
    pub fn conservative(&self) -> Self {
        Self {
            eps1: T::zero(),
            mu: T::zero(),
            nu: T::zero(),
            ..*self
        }
    }

    pub fn with_nu(&self, nu: T) -> Self {
        Self { nu, ..*self }
    }

    pub fn validate(&self) -> ValidationReport {
        validate(self)
    }
}

/// A hard invariant that a parameter set breaks.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub field: &'static str,
    pub requirement: &'static str,
    pub value: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} must be {} (got {})",
            self.field, self.requirement, self.value
        )
    }
}

/// A dissipative group large enough that the asymptotic estimates lose accuracy.
#[derive(Debug, Clone, PartialEq)]
pub struct SmallnessWarning {
    pub field: &'static str,
    pub value: f64,
}

impl fmt::Display for SmallnessWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} = {} exceeds {}; asymptotic estimates assume small dissipation",
            self.field, self.value, SMALLNESS_THRESHOLD
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<SmallnessWarning>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate<T: Real>(dp: &DimensionlessParams<T>) -> ValidationReport {
    let mut report = ValidationReport::default();
    for (field, value) in [("eta", dp.eta), ("delta", dp.delta)] {
        if !(value > T::zero()) || !value.is_finite() {
            report.violations.push(Violation {
                field,
                requirement: "> 0",
                value: value.as_f64(),
            });
        }
    }
    let threshold = T::lit(SMALLNESS_THRESHOLD);
    for (field, value) in [("eps1", dp.eps1), ("mu", dp.mu), ("nu", dp.nu)] {
        if !(value >= T::zero()) || !value.is_finite() {
            report.violations.push(Violation {
                field,
                requirement: ">= 0",
                value: value.as_f64(),
            });
        } else if value > threshold {
            report.warnings.push(SmallnessWarning {
                field,
                value: value.as_f64(),
            });
        }
    }
    report
}
