//! Piecewise power stretches of the plane welded along the real axis.
//!
//! For parameters `lambda`, `eta` in the open unit disk set
//!
//! * `sigma_plus  = (1 + lambda) / (1 - lambda)`,
//! * `sigma_minus = (1 + eta) / (1 - eta)`,
//! * `sigma       = (1 + lambda)(1 + eta) / (1 - lambda eta)`.
//!
//! The welded stretch maps `z = |z| e^{i theta}` to
//! `exp(sigma ln|z| + i theta sigma / sigma_plus)` in the closed upper half
//! plane and to `exp(sigma ln|z| + i theta sigma / sigma_minus)` in the open
//! lower one. Both pieces fix `1`, agree on the positive axis, and the
//! harmonic mean identity `sigma (1/sigma_plus + 1/sigma_minus) = 2` makes
//! them agree across the negative axis as well, so the weld is continuous on
//! the punctured plane. The Beltrami coefficient is `lambda z / conj(z)`
//! above the axis and `eta z / conj(z)` below, so the map is
//! quasiconformal with distortion `max(|lambda|, |eta|)`.
//!
//! On the diagonal `lambda = eta` the multiplier collapses to
//! `sigma = sigma_plus` and the map becomes the radial stretch
//! `z -> z |z|^{sigma_plus - 1}`.

use crate::branch::{BranchError, EXP_OVERFLOW};
use crate::maps::{beltrami_fd, MapError};
use num_complex::Complex64;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Multiplier `sigma = (1 + lambda)(1 + eta) / (1 - lambda eta)` of the
/// welded stretch; the positive-real-part function realizing the value
/// region on diagonal slices.
pub fn sigma_of(lambda: Complex64, eta: Complex64) -> Complex64 {
    (ONE + lambda) * (ONE + eta) / (ONE - lambda * eta)
}

/// A plane quasiconformal map welded from two power stretches along the
/// real axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeldedStretch {
    lambda: Complex64,
    eta: Complex64,
    sigma_plus: Complex64,
    sigma_minus: Complex64,
    sigma: Complex64,
}

impl WeldedStretch {
    pub fn new(lambda: Complex64, eta: Complex64) -> Result<Self, MapError> {
        for value in [lambda, eta] {
            if !value.is_finite() || value.norm() >= 1.0 {
                return Err(MapError::InvalidMotionParameter { value });
            }
        }
        let sigma_plus = (ONE + lambda) / (ONE - lambda);
        let sigma_minus = (ONE + eta) / (ONE - eta);
        Ok(WeldedStretch {
            lambda,
            eta,
            sigma_plus,
            sigma_minus,
            sigma: sigma_of(lambda, eta),
        })
    }

    /// The radial stretch `z -> z |z|^{sigma_plus - 1}`.
    pub fn diagonal(lambda: Complex64) -> Result<Self, MapError> {
        Self::new(lambda, lambda)
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn eta(&self) -> Complex64 {
        self.eta
    }

    pub fn sigma(&self) -> Complex64 {
        self.sigma
    }

    pub fn sigma_plus(&self) -> Complex64 {
        self.sigma_plus
    }

    pub fn sigma_minus(&self) -> Complex64 {
        self.sigma_minus
    }

    pub fn is_radial(&self) -> bool {
        self.lambda == self.eta
    }

    /// Distortion of the plane map, `max(|lambda|, |eta|)`.
    pub fn distortion_k(&self) -> f64 {
        self.lambda.norm().max(self.eta.norm())
    }

    /// Angular exponent used in the half plane containing `theta`.
    fn angular_rate(&self, theta: f64) -> Complex64 {
        if theta >= 0.0 {
            self.sigma / self.sigma_plus
        } else {
            self.sigma / self.sigma_minus
        }
    }

    /// Evaluate the weld at `z != 0`.
    ///
    /// The branch cut of `arg` sits on the negative axis, where the two
    /// half plane formulas agree by the harmonic mean identity, so the
    /// result is continuous on the punctured plane.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64, MapError> {
        if !z.is_finite() {
            return Err(MapError::Domain { z });
        }
        if z.re == 0.0 && z.im == 0.0 {
            return Err(MapError::OriginSingularity);
        }
        let theta = z.arg();
        let exponent = self.sigma * z.norm().ln() + I * theta * self.angular_rate(theta);
        if exponent.re > EXP_OVERFLOW {
            return Err(MapError::Branch(BranchError::Overflow {
                exponent: exponent.re,
            }));
        }
        Ok(exponent.exp())
    }

    /// Mismatch of the two one-sided limits on the negative axis at `x < 0`;
    /// zero up to rounding for every admissible parameter pair.
    pub fn weld_defect(&self, x: f64) -> Result<f64, MapError> {
        if x >= 0.0 || !x.is_finite() {
            return Err(MapError::Domain {
                z: Complex64::new(x, 0.0),
            });
        }
        let radial = self.sigma * x.abs().ln();
        let upper = (radial + I * std::f64::consts::PI * (self.sigma / self.sigma_plus)).exp();
        let lower = (radial - I * std::f64::consts::PI * (self.sigma / self.sigma_minus)).exp();
        Ok((upper - lower).norm())
    }

    /// The exact Beltrami coefficient `lambda z / conj(z)` (upper half
    /// plane, including the real axis by convention) or `eta z / conj(z)`
    /// (lower half plane).
    pub fn expected_beltrami(&self, z: Complex64) -> Result<Complex64, MapError> {
        if z.re == 0.0 && z.im == 0.0 {
            return Err(MapError::OriginSingularity);
        }
        let factor = if z.im >= 0.0 { self.lambda } else { self.eta };
        Ok(factor * z / z.conj())
    }

    /// Defect between the finite difference Beltrami coefficient and the
    /// exact one: relative where the exact coefficient is nonzero,
    /// absolute otherwise. Keep `|Im z|` comfortably above `h`; the
    /// difference stencil must not straddle the weld.
    pub fn beltrami_defect(&self, z: Complex64, h: f64) -> Result<f64, MapError> {
        if z.im.abs() <= 2.0 * h {
            return Err(MapError::Domain { z });
        }
        let f = |w: Complex64| {
            self.evaluate(w)
                .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
        };
        let fd = beltrami_fd(&f, z, h)?;
        let exact = self.expected_beltrami(z)?;
        let defect = (fd - exact).norm();
        if exact.norm() > 1e-12 {
            Ok(defect / exact.norm())
        } else {
            Ok(defect)
        }
    }
}
