//! Integral means on circles and the spectrum they generate.
//!
//! For a conformal map `f` on the disk and a complex exponent `t`, the
//! central object is the circle integral of `|exp(t log f')|` over
//! `|z| = r`, with the branch of `log f'` carried coherently from the
//! origin (see [`crate::branch`]). Its growth rate as `r -> 1` along the
//! dyadic radii `r_j = 1 - 2^-j`,
//!
//! `beta(t) = limsup log I(r) / log(1 / (1 - r))`,
//!
//! is the integral means spectrum. The module provides the integrals, slope
//! based estimators for `beta`, reference bounds to compare estimates
//! against, and area integrals of `|f'|^t` over expanding disks.

use crate::branch::{self, BranchError, CirclePath, CircleLog, CLOSURE_TOL, EXP_OVERFLOW};
use crate::maps::{DiskMap, MapError};
use num_complex::Complex64;
use std::f64::consts::{LN_2, TAU};
use thiserror::Error;

/// First sample count tried for a circle integral.
pub const INITIAL_CIRCLE_SAMPLES: usize = 256;

/// Hard cap on circle samples; integrals that still disagree at this
/// resolution are reported as failures rather than silently accepted.
pub const MAX_CIRCLE_SAMPLES: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error("branch tracking failed: {0}")]
    Branch(#[from] BranchError),

    #[error("map evaluation failed: {0}")]
    Map(#[from] MapError),

    #[error("circle integral did not converge: relative change {last_delta:.3e} at {samples} samples")]
    NoConvergence { samples: usize, last_delta: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(&'static str),
}

/// Dyadic radius schedule `r_j = 1 - 2^-j` for `j_min <= j <= j_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RadiusSchedule {
    j_min: u32,
    j_max: u32,
}

impl RadiusSchedule {
    pub fn new(j_min: u32, j_max: u32) -> Result<Self, SpectrumError> {
        if j_min < 1 || j_min >= j_max || j_max > 20 {
            return Err(SpectrumError::InvalidInput(
                "radius schedule needs 1 <= j_min < j_max <= 20",
            ));
        }
        Ok(RadiusSchedule { j_min, j_max })
    }

    pub fn j_min(&self) -> u32 {
        self.j_min
    }

    pub fn j_max(&self) -> u32 {
        self.j_max
    }

    pub fn levels(&self) -> impl Iterator<Item = u32> {
        self.j_min..=self.j_max
    }

    /// `1 - 2^-j`, exact in binary floating point.
    pub fn radius(level: u32) -> f64 {
        1.0 - 0.5f64.powi(level as i32)
    }

    pub fn radii(&self) -> Vec<f64> {
        self.levels().map(Self::radius).collect()
    }
}

/// A converged circle integral of `|exp(t log f')|` over `|z| = r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleIntegral {
    pub value: f64,
    /// Samples used by the accepted pass.
    pub samples: usize,
    pub closure_defect: f64,
    /// Relative change between the last two sample doublings.
    pub last_delta: f64,
}

/// Integrate `|exp(t log f')| |dz|` over the circle `|z| = radius`.
///
/// The trapezoid rule on equispaced samples converges spectrally for these
/// periodic integrands; samples are doubled until two consecutive passes
/// agree to within `tol` relative error. Branch ambiguities at coarse
/// resolutions also trigger doubling.
pub fn circle_integral(
    map: &dyn DiskMap,
    radius: f64,
    t: Complex64,
    tol: f64,
) -> Result<CircleIntegral, SpectrumError> {
    if !(radius > 0.0 && radius < 1.0) {
        return Err(SpectrumError::InvalidInput("radius must lie in (0, 1)"));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(SpectrumError::InvalidInput("tolerance must be positive"));
    }
    if !t.is_finite() {
        return Err(SpectrumError::InvalidInput("exponent must be finite"));
    }
    let deriv = |z: Complex64| {
        map.deriv(z)
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    };
    // One radial seed pins the branch for every resolution at this radius.
    let seed = branch::radial_seed_with_retry(&deriv, radius)?;
    let mut n = INITIAL_CIRCLE_SAMPLES;
    let mut prev: Option<f64> = None;
    let mut last_delta = f64::INFINITY;
    let mut pending: Option<BranchError>;
    loop {
        let path = CirclePath::new(radius, n)?;
        match branch::circle_walk(&deriv, path, seed) {
            Ok(walk) if walk.closure_defect <= CLOSURE_TOL => {
                let value = integral_from_walk(&walk, t, radius)?;
                if let Some(previous) = prev {
                    last_delta = (value - previous).abs() / value.abs().max(f64::MIN_POSITIVE);
                    if last_delta <= tol {
                        return Ok(CircleIntegral {
                            value,
                            samples: n,
                            closure_defect: walk.closure_defect,
                            last_delta,
                        });
                    }
                }
                prev = Some(value);
                pending = None;
            }
            Ok(walk) => {
                pending = Some(BranchError::ClosureDefect {
                    defect: walk.closure_defect,
                    samples: n,
                });
                prev = None;
            }
            Err(err @ BranchError::AmbiguousBranch { .. }) => {
                pending = Some(err);
                prev = None;
            }
            Err(other) => return Err(other.into()),
        }
        if n >= MAX_CIRCLE_SAMPLES {
            return Err(match pending {
                Some(err) => SpectrumError::Branch(err),
                None => SpectrumError::NoConvergence {
                    samples: n,
                    last_delta,
                },
            });
        }
        n *= 2;
    }
}

fn integral_from_walk(
    walk: &CircleLog,
    t: Complex64,
    radius: f64,
) -> Result<f64, SpectrumError> {
    let mut sum = 0.0;
    for tracked in &walk.logs {
        let exponent = (t * tracked.log_value).re;
        if exponent > EXP_OVERFLOW {
            return Err(BranchError::Overflow { exponent }.into());
        }
        sum += exponent.exp();
    }
    Ok(TAU * radius * sum / walk.logs.len() as f64)
}

/// Circle integral data at one dyadic level.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelData {
    pub level: u32,
    pub radius: f64,
    pub integral: CircleIntegral,
    /// `(ln I_j - ln I_(j-1)) / ln 2`, absent on the first level.
    pub local_slope: Option<f64>,
}

/// Spectrum estimate along a dyadic schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaEstimate {
    pub t: Complex64,
    pub levels: Vec<LevelData>,
    /// Largest of the last `tail_length` local slopes.
    pub beta_limsup: f64,
    /// Least squares slope of `ln I_j` against `j ln 2` over the tail.
    pub beta_lsq: f64,
}

/// Estimate `beta(t)` from circle integrals along `schedule`.
///
/// Both estimators look only at the tail of the schedule: `beta_limsup`
/// takes the largest of the last `tail_length` dyadic slopes, matching the
/// limsup in the definition, and `beta_lsq` fits the last
/// `tail_length + 1` levels by least squares.
pub fn beta_estimate(
    map: &dyn DiskMap,
    schedule: RadiusSchedule,
    t: Complex64,
    tol: f64,
    tail_length: usize,
) -> Result<BetaEstimate, SpectrumError> {
    if tail_length == 0 {
        return Err(SpectrumError::InvalidInput("tail length must be positive"));
    }
    let mut levels = Vec::new();
    let mut prev_ln: Option<f64> = None;
    for level in schedule.levels() {
        let radius = RadiusSchedule::radius(level);
        let integral = circle_integral(map, radius, t, tol)?;
        let ln_value = integral.value.ln();
        let local_slope = prev_ln.map(|p| (ln_value - p) / LN_2);
        prev_ln = Some(ln_value);
        levels.push(LevelData {
            level,
            radius,
            integral,
            local_slope,
        });
    }
    let slopes: Vec<f64> = levels.iter().filter_map(|l| l.local_slope).collect();
    let tail = tail_length.min(slopes.len());
    let beta_limsup = slopes[slopes.len() - tail..]
        .iter()
        .fold(f64::NEG_INFINITY, |acc, s| acc.max(*s));

    let points = (tail + 1).min(levels.len());
    let segment = &levels[levels.len() - points..];
    let count = points as f64;
    let mean_x = segment.iter().map(|l| l.level as f64 * LN_2).sum::<f64>() / count;
    let mean_y = segment
        .iter()
        .map(|l| l.integral.value.ln())
        .sum::<f64>()
        / count;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for l in segment {
        let dx = l.level as f64 * LN_2 - mean_x;
        let dy = l.integral.value.ln() - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
    }
    let beta_lsq = sxy / sxx;

    Ok(BetaEstimate {
        t,
        levels,
        beta_limsup,
        beta_lsq,
    })
}

/// Known bounds and exact values for the universal spectrum at distortion `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceSpectra {
    pub k: f64,
    pub t: Complex64,
    /// `k |t|`, valid for every map in the class.
    pub trivial_upper: f64,
    /// `max(0, k |t| - 1)`, attained within the class.
    pub trivial_lower: f64,
    /// Exactly one on the critical circle `|t| = 2 / k` inside the sector
    /// `Re t >= k |t|`.
    pub theorem_value: Option<f64>,
    /// `k |t| - 1` in the sector `Re t >= k |t|` with `k |t| >= 2`.
    pub linear_zone: Option<f64>,
    /// Quadratic upper bound `(1 + 7 k)^2 k^2 |t|^2 / 4` near `t = 0`.
    pub quadratic_upper: f64,
    /// The disproved quadratic guess `k^2 |t|^2 / 4`, kept for comparison.
    pub disproved_quadratic: f64,
}

impl ReferenceSpectra {
    pub fn evaluate(k: f64, t: Complex64) -> Result<Self, SpectrumError> {
        if !(0.0..1.0).contains(&k) {
            return Err(SpectrumError::InvalidInput(
                "distortion must lie in [0, 1)",
            ));
        }
        if !t.is_finite() {
            return Err(SpectrumError::InvalidInput("exponent must be finite"));
        }
        let product = k * t.norm();
        let sector = t.re >= product;
        let critical = (product - 2.0).abs() <= 1e-9 * product.max(1.0);
        let linear_zone = if in_linear_zone(sector, product) {
            Some(product - 1.0)
        } else {
            None
        };
        let theorem_value = if sector && critical { Some(1.0) } else { None };
        let q = k * k * t.norm_sqr() / 4.0;
        Ok(ReferenceSpectra {
            k,
            t,
            trivial_upper: product,
            trivial_lower: (product - 1.0).max(0.0),
            theorem_value,
            linear_zone,
            quadratic_upper: (1.0 + 7.0 * k) * (1.0 + 7.0 * k) * q,
            disproved_quadratic: q,
        })
    }
}

fn in_linear_zone(sector: bool, product: f64) -> bool {
    sector && product >= 2.0 - 1e-12 * product.max(1.0)
}

/// Position of `t` relative to the critical disk `|t| <= 2 / k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegrabilityClass {
    /// `k |t| < 2`: area integrals of `|f'|^t` stay finite up to the boundary.
    Inside,
    /// On the critical circle, within the sector `Re t >= k |t|`: the area
    /// integral diverges, at a logarithmic rate for the extremal maps.
    CriticalDivergent,
    /// Beyond the critical circle, or on it outside the sector.
    OutsideTheorem,
}

pub fn classify_integrability(k: f64, t: Complex64) -> Result<IntegrabilityClass, SpectrumError> {
    if !(0.0..1.0).contains(&k) {
        return Err(SpectrumError::InvalidInput(
            "distortion must lie in [0, 1)",
        ));
    }
    let product = k * t.norm();
    let tol = 1e-9 * product.max(1.0);
    if (product - 2.0).abs() <= tol {
        if t.re >= product - tol {
            Ok(IntegrabilityClass::CriticalDivergent)
        } else {
            Ok(IntegrabilityClass::OutsideTheorem)
        }
    } else if product < 2.0 {
        Ok(IntegrabilityClass::Inside)
    } else {
        Ok(IntegrabilityClass::OutsideTheorem)
    }
}

/// Area integral of `|exp(t log f')|` over the disk `|z| < r_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaIntegral {
    pub value: f64,
    /// Number of circle integrals the adaptive quadrature evaluated.
    pub circle_evaluations: usize,
}

struct AreaContext<'a> {
    map: &'a dyn DiskMap,
    t: Complex64,
    inner_tol: f64,
    evaluations: usize,
}

impl AreaContext<'_> {
    fn ring(&mut self, rho: f64) -> Result<f64, SpectrumError> {
        if rho <= 0.0 {
            return Ok(0.0);
        }
        self.evaluations += 1;
        Ok(circle_integral(self.map, rho, self.t, self.inner_tol)?.value)
    }

    #[allow(clippy::too_many_arguments)]
    fn simpson(
        &mut self,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64, SpectrumError> {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = self.ring(lm)?;
        let frm = self.ring(rm)?;
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            // Richardson correction of the composite estimate.
            return Ok(left + right + delta / 15.0);
        }
        Ok(self.simpson(a, fa, m, fm, flm, left, 0.5 * tol, depth - 1)?
            + self.simpson(m, fm, b, fb, frm, right, 0.5 * tol, depth - 1)?)
    }
}

/// `integral over |z| < r_max of |exp(t log f')| dA`, by adaptive Simpson
/// quadrature in the radius over converged circle integrals.
pub fn area_integral(
    map: &dyn DiskMap,
    t: Complex64,
    r_max: f64,
    tol: f64,
) -> Result<AreaIntegral, SpectrumError> {
    if !(r_max > 0.0 && r_max < 1.0) {
        return Err(SpectrumError::InvalidInput("r_max must lie in (0, 1)"));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(SpectrumError::InvalidInput("tolerance must be positive"));
    }
    let mut ctx = AreaContext {
        map,
        t,
        inner_tol: (tol * 1e-2).max(1e-10),
        evaluations: 0,
    };
    let fa = 0.0;
    let fb = ctx.ring(r_max)?;
    let fm = ctx.ring(0.5 * r_max)?;
    let whole = r_max / 6.0 * (fa + 4.0 * fm + fb);
    let value = ctx.simpson(0.0, fa, r_max, fb, fm, whole, tol, 24)?;
    Ok(AreaIntegral {
        value,
        circle_evaluations: ctx.evaluations,
    })
}
