//! Conformal map families on the unit disk and upper half plane.
//!
//! The workhorse family is the power map `w -> w^sigma` with `|sigma - 1| <= 1`,
//! which is conformal on the upper half plane and admits an explicit
//! quasiconformal extension to the whole plane with distortion `|sigma - 1|`.
//! [`DiskPowerMap`] transplants it to the unit disk by the affine placement
//! `m(z) = i * (1 - z)`, which sends the disk onto the disk of radius one
//! tangent to the real axis from above. The composition keeps the plane
//! extension (affine maps are conformal on all of the plane) and produces a
//! single boundary singularity at `z = 1`, where all the integral means
//! growth concentrates.

use crate::branch::{log_along_ray, BranchError};
use num_complex::Complex64;
use std::f64::consts::TAU;
use thiserror::Error;

/// Points closer than this to a singular parameter are treated as singular.
pub const SINGULAR_EXCLUSION: f64 = 1e-12;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Errors for map construction and evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MapError {
    #[error("point {z} lies outside the map domain")]
    Domain { z: Complex64 },

    #[error("map is singular at {z}")]
    SingularPoint { z: Complex64 },

    #[error("invalid exponent {sigma}: need |sigma - 1| <= 1 and sigma != 0")]
    InvalidSigma { sigma: Complex64 },

    /// Requested the plane extension of a map on the degenerate boundary
    /// of the parameter range, where the extension ceases to exist.
    #[error("map admits no quasiconformal plane extension (distortion >= 1)")]
    NotExtendable,

    #[error("jacobian degenerates at {z}")]
    DegenerateJacobian { z: Complex64 },

    #[error("map is singular at the origin")]
    OriginSingularity,

    #[error("motion parameter must lie in the open unit disk, got {value}")]
    InvalidMotionParameter { value: Complex64 },

    #[error("branch tracking failed: {0}")]
    Branch(#[from] BranchError),
}

/// Exponent of a power map, constrained to the conformal range.
///
/// `sigma` must satisfy `|sigma - 1| <= 1` and `sigma != 0`; this is exactly
/// the range where `w -> w^sigma` is injective on a half plane. The real
/// part of any such `sigma` is strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerParams {
    sigma: Complex64,
}

impl PowerParams {
    pub fn new(sigma: Complex64) -> Result<Self, MapError> {
        if !sigma.is_finite()
            || (sigma.re == 0.0 && sigma.im == 0.0)
            || (sigma - ONE).norm() > 1.0
        {
            return Err(MapError::InvalidSigma { sigma });
        }
        Ok(PowerParams { sigma })
    }

    /// Exponent written as `sigma = (1 + i * gamma) / alpha`: `alpha` is the
    /// radial stretch rate and `gamma` the twist rate.
    pub fn from_alpha_gamma(alpha: f64, gamma: f64) -> Result<Self, MapError> {
        let sigma = Complex64::new(1.0, gamma) / alpha;
        Self::new(sigma)
    }

    /// The exponent whose spectrum meets the universal bound at `t`:
    /// `sigma = 1 - 2 / t`. Requires `|t| >= 2`.
    pub fn for_theorem_exponent(t: Complex64) -> Result<Self, MapError> {
        let sigma = ONE - Complex64::new(2.0, 0.0) / t;
        Self::new(sigma)
    }

    pub fn sigma(&self) -> Complex64 {
        self.sigma
    }

    /// `|sigma - 1|`, the distortion of the welded plane extension.
    pub fn k(&self) -> f64 {
        (self.sigma - ONE).norm()
    }

    /// Distortion of the plane extension; errors when no extension exists.
    pub fn distortion_k(&self) -> Result<f64, MapError> {
        let k = self.k();
        if k >= 1.0 {
            Err(MapError::NotExtendable)
        } else {
            Ok(k)
        }
    }

    /// Stretch and twist rates `(alpha, gamma) = (1 / Re sigma, Im sigma / Re sigma)`.
    pub fn alpha_gamma(&self) -> (f64, f64) {
        (1.0 / self.sigma.re, self.sigma.im / self.sigma.re)
    }
}

/// A conformal map on the open unit disk with distortion data for its
/// quasiconformal plane extension.
pub trait DiskMap: Sync {
    fn eval(&self, z: Complex64) -> Result<Complex64, MapError>;

    fn deriv(&self, z: Complex64) -> Result<Complex64, MapError>;

    /// Distortion bound of the plane extension, in `[0, 1)`.
    fn distortion_k(&self) -> Result<f64, MapError>;

    /// Continuous boundary extension at `|zeta| = 1`, where defined.
    fn boundary_value(&self, zeta: Complex64) -> Option<Complex64>;

    /// Short human-readable description for report headers.
    fn describe(&self) -> String;
}

fn ensure_in_disk(z: Complex64) -> Result<(), MapError> {
    if !z.is_finite() || z.norm_sqr() >= 1.0 {
        return Err(MapError::Domain { z });
    }
    Ok(())
}

/// The identity map, distortion zero. Useful as a conformal control case.
#[derive(Debug, Clone, Copy, Default)]
pub struct DiskIdentity;

impl DiskMap for DiskIdentity {
    fn eval(&self, z: Complex64) -> Result<Complex64, MapError> {
        ensure_in_disk(z)?;
        Ok(z)
    }

    fn deriv(&self, z: Complex64) -> Result<Complex64, MapError> {
        ensure_in_disk(z)?;
        Ok(ONE)
    }

    fn distortion_k(&self) -> Result<f64, MapError> {
        Ok(0.0)
    }

    fn boundary_value(&self, zeta: Complex64) -> Option<Complex64> {
        Some(zeta)
    }

    fn describe(&self) -> String {
        "identity map on the unit disk".to_string()
    }
}

/// The power map `w -> w^sigma` on the open upper half plane.
#[derive(Debug, Clone, Copy)]
pub struct HalfPlanePowerMap {
    params: PowerParams,
}

impl HalfPlanePowerMap {
    pub fn new(params: PowerParams) -> Self {
        HalfPlanePowerMap { params }
    }

    pub fn params(&self) -> PowerParams {
        self.params
    }

    pub fn eval(&self, w: Complex64) -> Result<Complex64, MapError> {
        if !w.is_finite() || w.im <= 0.0 {
            return Err(MapError::Domain { z: w });
        }
        Ok((self.params.sigma * w.ln()).exp())
    }

    pub fn deriv(&self, w: Complex64) -> Result<Complex64, MapError> {
        if !w.is_finite() || w.im <= 0.0 {
            return Err(MapError::Domain { z: w });
        }
        Ok(self.params.sigma * ((self.params.sigma - ONE) * w.ln()).exp())
    }
}

/// Power map transplanted to the unit disk: `f(z) = (i * (1 - z))^sigma`.
///
/// The placement `m(z) = i * (1 - z)` carries the disk onto the unit disk
/// tangent to the real axis at the origin, inside the upper half plane, so
/// the principal branch is the continuous one. `f` extends continuously to
/// the closed disk with `f(1) = 0`, and the `z = 1` singularity carries the
/// entire integral means growth: the spectrum is known in closed form, see
/// [`DiskPowerMap::analytic_beta`].
#[derive(Debug, Clone, Copy)]
pub struct DiskPowerMap {
    params: PowerParams,
}

impl DiskPowerMap {
    pub fn new(params: PowerParams) -> Self {
        DiskPowerMap { params }
    }

    pub fn params(&self) -> PowerParams {
        self.params
    }

    pub fn sigma(&self) -> Complex64 {
        self.params.sigma()
    }

    /// Placement of the disk into the upper half plane.
    fn m(z: Complex64) -> Complex64 {
        I * (ONE - z)
    }

    /// Exact integral means spectrum of this map:
    /// `beta(t) = max(0, -Re(t * (sigma - 1)) - 1)`.
    ///
    /// The integrand `|exp(t log f')|` behaves like `|1 - z|^Re(t (sigma - 1))`
    /// near the singular boundary point; integrating over a circle of radius
    /// `r` gives growth `(1 - r)^(min(0, a + 1))` for `a = Re(t (sigma - 1))`.
    pub fn analytic_beta(&self, t: Complex64) -> f64 {
        (-(t * (self.params.sigma() - ONE)).re - 1.0).max(0.0)
    }
}

impl DiskMap for DiskPowerMap {
    fn eval(&self, z: Complex64) -> Result<Complex64, MapError> {
        ensure_in_disk(z)?;
        // Im m = 1 - Re z > 0 inside the disk: principal branch is safe.
        Ok((self.params.sigma() * Self::m(z).ln()).exp())
    }

    fn deriv(&self, z: Complex64) -> Result<Complex64, MapError> {
        ensure_in_disk(z)?;
        let sigma = self.params.sigma();
        Ok(sigma * ((sigma - ONE) * Self::m(z).ln()).exp() * (-I))
    }

    fn distortion_k(&self) -> Result<f64, MapError> {
        self.params.distortion_k()
    }

    fn boundary_value(&self, zeta: Complex64) -> Option<Complex64> {
        if (zeta.norm() - 1.0).abs() > 1e-9 {
            return None;
        }
        if (zeta - ONE).norm() <= SINGULAR_EXCLUSION {
            // Re sigma > 0, so w^sigma -> 0 along the boundary.
            return Some(Complex64::new(0.0, 0.0));
        }
        Some((self.params.sigma() * Self::m(zeta).ln()).exp())
    }

    fn describe(&self) -> String {
        format!("disk power map, sigma = {}", self.params.sigma())
    }
}

/// Post-composition with the affine map that pins `f(0) = 0`, `f'(0) = 1`.
///
/// Affine post-composition changes neither the distortion of the plane
/// extension nor the integral means spectrum.
#[derive(Debug, Clone)]
pub struct NormalizedDiskMap<M: DiskMap> {
    base: M,
    shift: Complex64,
    scale: Complex64,
}

impl<M: DiskMap> NormalizedDiskMap<M> {
    pub fn new(base: M) -> Result<Self, MapError> {
        let origin = Complex64::new(0.0, 0.0);
        let shift = base.eval(origin)?;
        let scale = base.deriv(origin)?;
        if scale.norm() < SINGULAR_EXCLUSION {
            return Err(MapError::DegenerateJacobian { z: origin });
        }
        Ok(NormalizedDiskMap { base, shift, scale })
    }

    pub fn base(&self) -> &M {
        &self.base
    }
}

impl<M: DiskMap> DiskMap for NormalizedDiskMap<M> {
    fn eval(&self, z: Complex64) -> Result<Complex64, MapError> {
        Ok((self.base.eval(z)? - self.shift) / self.scale)
    }

    fn deriv(&self, z: Complex64) -> Result<Complex64, MapError> {
        Ok(self.base.deriv(z)? / self.scale)
    }

    fn distortion_k(&self) -> Result<f64, MapError> {
        self.base.distortion_k()
    }

    fn boundary_value(&self, zeta: Complex64) -> Option<Complex64> {
        self.base
            .boundary_value(zeta)
            .map(|w| (w - self.shift) / self.scale)
    }

    fn describe(&self) -> String {
        format!("normalized [{}]", self.base.describe())
    }
}

/// Wirtinger derivatives estimated by central differences.
#[derive(Debug, Clone, Copy)]
pub struct WirtingerDerivs {
    pub d_z: Complex64,
    pub d_zbar: Complex64,
}

/// Central-difference Wirtinger derivatives of a plane map at `z`.
pub fn wirtinger_fd<F>(f: &F, z: Complex64, h: f64) -> Result<WirtingerDerivs, MapError>
where
    F: Fn(Complex64) -> Complex64 + ?Sized,
{
    if h <= 0.0 || !h.is_finite() {
        return Err(MapError::SingularPoint { z });
    }
    let fx = (f(z + Complex64::new(h, 0.0)) - f(z - Complex64::new(h, 0.0)))
        / Complex64::new(2.0 * h, 0.0);
    let fy = (f(z + Complex64::new(0.0, h)) - f(z - Complex64::new(0.0, h)))
        / Complex64::new(2.0 * h, 0.0);
    let d_z = (fx - I * fy) / 2.0;
    let d_zbar = (fx + I * fy) / 2.0;
    if !d_z.is_finite() || !d_zbar.is_finite() {
        return Err(MapError::SingularPoint { z });
    }
    Ok(WirtingerDerivs { d_z, d_zbar })
}

/// Beltrami coefficient `mu = (d f / d zbar) / (d f / d z)` by central
/// differences; errors where the jacobian degenerates.
pub fn beltrami_fd<F>(f: &F, z: Complex64, h: f64) -> Result<Complex64, MapError>
where
    F: Fn(Complex64) -> Complex64 + ?Sized,
{
    let d = wirtinger_fd(f, z, h)?;
    if d.d_z.norm() < SINGULAR_EXCLUSION {
        return Err(MapError::DegenerateJacobian { z });
    }
    Ok(d.d_zbar / d.d_z)
}

/// Margins for the pointwise logarithmic derivative bound
/// `|log(z f'(z) / (f(z) - f(0)))| <= k * log((1 + |z|) / (1 - |z|))`
/// of a map with a `k`-quasiconformal plane extension.
#[derive(Debug, Clone)]
pub struct LogBoundReport {
    pub radii: Vec<f64>,
    /// Largest `|log(z f' / (f - f(0)))|` over the angle grid, per radius.
    pub per_radius_sup: Vec<f64>,
    /// Smallest `bound - |log ...|` over the whole grid.
    pub min_margin: f64,
    /// Grid point where the margin is smallest.
    pub argmin: Complex64,
}

/// Evaluate the pointwise logarithmic derivative bound on a polar grid.
///
/// The branch of the logarithm is continued radially outward from the
/// origin, where `z f' / (f - f(0)) -> 1` pins it to the principal one.
pub fn pointwise_log_bound(
    map: &dyn DiskMap,
    radii: &[f64],
    n_angles: usize,
) -> Result<LogBoundReport, MapError> {
    if radii.is_empty() || n_angles == 0 {
        return Err(MapError::Branch(BranchError::InvalidPath(
            "bound grid needs radii and angles",
        )));
    }
    if radii
        .windows(2)
        .any(|w| w[0] >= w[1])
        || radii.iter().any(|r| !(*r > 0.0 && *r < 1.0))
    {
        return Err(MapError::Branch(BranchError::InvalidPath(
            "radii must be strictly increasing inside (0, 1)",
        )));
    }
    let k = map.distortion_k()?;
    let shift = map.eval(Complex64::new(0.0, 0.0))?;

    // Lead-in keeps continuation steps well under a half turn.
    let mut walk_radii: Vec<f64> = [1e-4, 0.05, 0.15, 0.3]
        .into_iter()
        .filter(|r| *r < radii[0])
        .collect();
    let lead = walk_radii.len();
    walk_radii.extend_from_slice(radii);

    let ratio = |z: Complex64| -> Complex64 {
        match (map.eval(z), map.deriv(z)) {
            (Ok(f), Ok(fp)) => z * fp / (f - shift),
            _ => Complex64::new(f64::NAN, f64::NAN),
        }
    };

    let mut per_radius_sup = vec![0.0f64; radii.len()];
    let mut min_margin = f64::INFINITY;
    let mut argmin = Complex64::new(0.0, 0.0);
    for i in 0..n_angles {
        let theta = TAU * (i as f64) / (n_angles as f64);
        let logs = log_along_ray(&ratio, theta, &walk_radii)?;
        for (j, &r) in radii.iter().enumerate() {
            let q = logs[lead + j].log_value;
            let magnitude = q.norm();
            let bound = k * ((1.0 + r) / (1.0 - r)).ln();
            let margin = bound - magnitude;
            per_radius_sup[j] = per_radius_sup[j].max(magnitude);
            if margin < min_margin {
                min_margin = margin;
                argmin = Complex64::from_polar(r, theta);
            }
        }
    }
    Ok(LogBoundReport {
        radii: radii.to_vec(),
        per_radius_sup,
        min_margin,
        argmin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn power_params_enforce_conformal_range() {
        assert!(PowerParams::new(Complex64::new(0.0, 0.0)).is_err());
        assert!(PowerParams::new(Complex64::new(2.5, 0.0)).is_err());
        assert!(PowerParams::new(Complex64::new(0.2, 0.8)).is_err());
        assert!(PowerParams::new(Complex64::new(1.0, 1.0)).is_ok());
        assert!(PowerParams::new(Complex64::new(2.0, 0.0)).is_ok());
        assert!(PowerParams::new(Complex64::new(0.5, 0.0)).is_ok());
    }

    #[test]
    fn boundary_exponents_have_no_extension() {
        let edge = PowerParams::new(Complex64::new(1.0, 1.0)).unwrap();
        assert_eq!(edge.k(), 1.0);
        assert_eq!(edge.distortion_k(), Err(MapError::NotExtendable));
        let inner = PowerParams::new(Complex64::new(0.5, 0.0)).unwrap();
        assert!((inner.distortion_k().unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn alpha_gamma_round_trips() {
        // sigma = 1 + i is the maximal twist at stretch rate one.
        let p = PowerParams::new(Complex64::new(1.0, 1.0)).unwrap();
        let (alpha, gamma) = p.alpha_gamma();
        assert!((alpha - 1.0).abs() < 1e-15);
        assert!((gamma - 1.0).abs() < 1e-15);
        let q = PowerParams::from_alpha_gamma(2.0, 0.7).unwrap();
        let (a2, g2) = q.alpha_gamma();
        assert!((a2 - 2.0).abs() < 1e-12);
        assert!((g2 - 0.7).abs() < 1e-12);
    }

    #[test]
    fn theorem_exponent_requires_modulus_two() {
        let p = PowerParams::for_theorem_exponent(Complex64::new(4.0, 0.0)).unwrap();
        assert!((p.sigma() - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert!(PowerParams::for_theorem_exponent(Complex64::new(1.0, 0.0)).is_err());
        let edge = PowerParams::for_theorem_exponent(Complex64::new(0.0, 2.0)).unwrap();
        assert!((edge.k() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn disk_power_pinned_values() {
        let map = DiskPowerMap::new(PowerParams::new(Complex64::new(0.5, 0.0)).unwrap());
        // f(0) = i^(1/2) = exp(i pi / 4).
        let f0 = map.eval(Complex64::new(0.0, 0.0)).unwrap();
        let expected = Complex64::from_polar(1.0, FRAC_PI_4);
        assert!((f0 - expected).norm() < 1e-14);
        // Continuous extension vanishes at the singular boundary point.
        assert_eq!(
            map.boundary_value(Complex64::new(1.0, 0.0)),
            Some(Complex64::new(0.0, 0.0))
        );
        // Approach along the real axis: |f| ~ |1 - r|^(1/2).
        let near = map.eval(Complex64::new(1.0 - 1e-8, 0.0)).unwrap();
        assert!(near.norm() < 2e-4);
    }

    #[test]
    fn disk_power_rejects_exterior_points() {
        let map = DiskPowerMap::new(PowerParams::new(Complex64::new(0.5, 0.0)).unwrap());
        assert!(matches!(
            map.eval(Complex64::new(1.0, 0.0)),
            Err(MapError::Domain { .. })
        ));
        assert!(matches!(
            map.deriv(Complex64::new(0.0, 1.5)),
            Err(MapError::Domain { .. })
        ));
    }

    #[test]
    fn analytic_beta_matches_closed_form_cases() {
        let half = DiskPowerMap::new(PowerParams::new(Complex64::new(0.5, 0.0)).unwrap());
        assert!((half.analytic_beta(Complex64::new(4.0, 0.0)) - 1.0).abs() < 1e-15);
        assert_eq!(half.analytic_beta(Complex64::new(-2.0, 0.0)), 0.0);
        let ident = DiskPowerMap::new(PowerParams::new(Complex64::new(1.0, 0.0)).unwrap());
        assert_eq!(ident.analytic_beta(Complex64::new(10.0, 0.0)), 0.0);
    }

    #[test]
    fn normalization_pins_origin_data() {
        let base = DiskPowerMap::new(PowerParams::new(Complex64::new(0.55, 0.35)).unwrap());
        let norm = NormalizedDiskMap::new(base).unwrap();
        let f0 = norm.eval(Complex64::new(0.0, 0.0)).unwrap();
        let d0 = norm.deriv(Complex64::new(0.0, 0.0)).unwrap();
        assert!(f0.norm() < 1e-15);
        assert!((d0 - ONE).norm() < 1e-15);
        assert_eq!(
            norm.distortion_k().unwrap(),
            norm.base().distortion_k().unwrap()
        );
    }

    #[test]
    fn wirtinger_detects_analytic_and_antianalytic_parts() {
        let f = |z: Complex64| z * z + Complex64::new(3.0, 0.0) * z;
        let z = Complex64::new(0.4, -0.2);
        let d = wirtinger_fd(&f, z, 1e-5).unwrap();
        assert!((d.d_z - (2.0 * z + Complex64::new(3.0, 0.0))).norm() < 1e-8);
        assert!(d.d_zbar.norm() < 1e-8);

        let g = |z: Complex64| z + Complex64::new(0.3, 0.0) * z.conj();
        let mu = beltrami_fd(&g, z, 1e-5).unwrap();
        assert!((mu - Complex64::new(0.3, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn half_plane_power_matches_disk_power_through_placement() {
        let params = PowerParams::new(Complex64::new(0.7, 0.3)).unwrap();
        let disk = DiskPowerMap::new(params);
        let half = HalfPlanePowerMap::new(params);
        let z = Complex64::new(0.3, 0.4);
        let w = I * (ONE - z);
        assert!((disk.eval(z).unwrap() - half.eval(w).unwrap()).norm() < 1e-14);
    }

    #[test]
    fn log_bound_identity_has_zero_margin() {
        let report = pointwise_log_bound(&DiskIdentity, &[0.5, 0.75, 0.9], 16).unwrap();
        assert!(report.min_margin.abs() < 1e-12);
        for sup in &report.per_radius_sup {
            assert!(sup.abs() < 1e-12);
        }
    }

    #[test]
    fn log_bound_holds_for_power_map() {
        let map = DiskPowerMap::new(PowerParams::new(Complex64::new(0.5, 0.0)).unwrap());
        let radii: Vec<f64> = (1..=8).map(|j| 1.0 - 0.5f64.powi(j)).collect();
        let report = pointwise_log_bound(&map, &radii, 32).unwrap();
        assert!(
            report.min_margin > 0.0,
            "margin {} at {}",
            report.min_margin,
            report.argmin
        );
    }

    proptest! {
        #[test]
        fn prop_disk_power_derivative_matches_difference_quotient(
            x in -0.6f64..0.6,
            y in -0.6f64..0.6,
            sre in 0.4f64..1.2,
            sim in -0.4f64..0.4,
        ) {
            let sigma = Complex64::new(sre, sim);
            prop_assume!((sigma - ONE).norm() < 0.95);
            let map = DiskPowerMap::new(PowerParams::new(sigma).unwrap());
            let z = Complex64::new(x, y);
            let h = 1e-6;
            let fd = (map.eval(z + Complex64::new(h, 0.0)).unwrap()
                - map.eval(z - Complex64::new(h, 0.0)).unwrap())
                / Complex64::new(2.0 * h, 0.0);
            let exact = map.deriv(z).unwrap();
            prop_assert!((fd - exact).norm() < 1e-7 * (1.0 + exact.norm()));
        }

        #[test]
        fn prop_normalized_map_keeps_difference_ratios(
            x in -0.5f64..0.5,
            y in -0.5f64..0.5,
        ) {
            // Normalization is affine, so difference ratios are preserved.
            let base = DiskPowerMap::new(PowerParams::new(Complex64::new(0.5, 0.2)).unwrap());
            let norm = NormalizedDiskMap::new(base).unwrap();
            let z1 = Complex64::new(x, y);
            let z2 = Complex64::new(-y * 0.5, x * 0.5 + 0.1);
            let z3 = Complex64::new(0.2, -0.3);
            prop_assume!((z1 - z3).norm() > 1e-3 && (z2 - z3).norm() > 1e-3);
            let r_base = (base.eval(z1).unwrap() - base.eval(z3).unwrap())
                / (base.eval(z2).unwrap() - base.eval(z3).unwrap());
            let r_norm = (norm.eval(z1).unwrap() - norm.eval(z3).unwrap())
                / (norm.eval(z2).unwrap() - norm.eval(z3).unwrap());
            prop_assert!((r_base - r_norm).norm() < 1e-9 * (1.0 + r_base.norm()));
        }
    }
}
