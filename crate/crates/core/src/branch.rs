//! Continuous branch tracking for complex logarithms along paths.
//!
//! Every analytic quantity in this crate (powers `w^t` with complex `t`,
//! winding counts, spiral rates) is computed through a logarithm whose
//! branch is continued step by step along a path, never re-cut. The rules
//! are deliberately rigid so results are reproducible bit for bit:
//!
//! * a walk starts from an explicit seed branch;
//! * each step picks the branch nearest to the previous imaginary part;
//! * a step whose two nearest branches are closer than [`AMBIGUITY_TOL`]
//!   apart is refused rather than guessed at;
//! * a closed loop must return to its seed within [`CLOSURE_TOL`] or the
//!   walk is rejected.

use num_complex::Complex64;
use std::f64::consts::TAU;
use thiserror::Error;

/// Two continuation candidates closer than this (in radians) are refused.
pub const AMBIGUITY_TOL: f64 = 1e-6;

/// Maximum allowed defect when a circle walk closes up on itself.
pub const CLOSURE_TOL: f64 = 1e-8;

/// Largest real part of `t * log w` that `exp` can represent in `f64`.
pub const EXP_OVERFLOW: f64 = 709.0;

/// Circle walks sample at `64 * 2^m` points.
pub const CIRCLE_BASE_SAMPLES: usize = 64;

/// Errors produced by branch tracking.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BranchError {
    /// The logarithm of zero was requested.
    #[error("cannot take a branch of log at zero")]
    ZeroValue,

    /// A continuation step was a near-antipodal jump: the two nearest
    /// branches are indistinguishable at the configured tolerance.
    #[error("ambiguous branch continuation at {value}: candidate imaginary parts {im_low} and {im_high}")]
    AmbiguousBranch {
        value: Complex64,
        im_low: f64,
        im_high: f64,
    },

    /// A closed loop failed to return to its seed branch.
    #[error("circle log failed to close up: defect {defect:.3e} at {samples} samples")]
    ClosureDefect { defect: f64, samples: usize },

    /// `exp(t * log w)` would overflow.
    #[error("power overflow: exponent real part {exponent:.6e} exceeds representable range")]
    Overflow { exponent: f64 },

    /// A non-finite value was produced or supplied.
    #[error("non-finite value encountered during branch tracking")]
    NonFinite,

    /// A path did not satisfy the documented preconditions.
    #[error("invalid path: {0}")]
    InvalidPath(&'static str),
}

/// A complex value paired with the branch of its logarithm selected by a walk.
///
/// Invariant: `log_value.exp() == value` up to rounding; the imaginary part
/// encodes the accumulated winding and is *not* reduced modulo `2 * pi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackedLog {
    pub value: Complex64,
    pub log_value: Complex64,
}

impl TrackedLog {
    /// Seed with the principal branch, `Im in (-pi, pi]`.
    pub fn principal(value: Complex64) -> Result<Self, BranchError> {
        if value.re == 0.0 && value.im == 0.0 {
            return Err(BranchError::ZeroValue);
        }
        if !value.is_finite() {
            return Err(BranchError::NonFinite);
        }
        Ok(TrackedLog {
            value,
            log_value: value.ln(),
        })
    }

    /// Seed with the argument normalized to `[0, 2 * pi)`.
    ///
    /// This is the canonical seed for circle walks: it is deterministic and
    /// agrees with the principal branch on the closed upper half plane.
    pub fn seeded(value: Complex64) -> Result<Self, BranchError> {
        let mut tracked = Self::principal(value)?;
        if tracked.log_value.im < 0.0 {
            tracked.log_value.im += TAU;
        }
        Ok(tracked)
    }
}

/// Continue a tracked logarithm to the next path value.
///
/// Picks the branch of `log next` whose imaginary part is nearest to the
/// previous one. Continuing a log to its own value is bit-exact idempotent.
pub fn continue_log(prev: &TrackedLog, next: Complex64) -> Result<TrackedLog, BranchError> {
    if next.re == 0.0 && next.im == 0.0 {
        return Err(BranchError::ZeroValue);
    }
    if !next.is_finite() {
        return Err(BranchError::NonFinite);
    }
    let principal = next.ln();
    let turns = ((prev.log_value.im - principal.im) / TAU).round();
    let im = principal.im + TAU * turns;
    // Nearest branch distance and its runner-up on the other side.
    let d_near = (im - prev.log_value.im).abs();
    let d_far = TAU - d_near;
    if (d_near - d_far).abs() < AMBIGUITY_TOL {
        let im_other = if im <= prev.log_value.im {
            im + TAU
        } else {
            im - TAU
        };
        return Err(BranchError::AmbiguousBranch {
            value: next,
            im_low: im.min(im_other),
            im_high: im.max(im_other),
        });
    }
    Ok(TrackedLog {
        value: next,
        log_value: Complex64::new(principal.re, im),
    })
}

/// `w^t` computed from a tracked branch of `log w`.
///
/// Overflow of the real exponent is reported instead of returning `inf`.
pub fn tracked_pow(log_w: Complex64, t: Complex64) -> Result<Complex64, BranchError> {
    let exponent = t * log_w;
    if !exponent.is_finite() {
        return Err(BranchError::NonFinite);
    }
    if exponent.re > EXP_OVERFLOW {
        return Err(BranchError::Overflow {
            exponent: exponent.re,
        });
    }
    Ok(exponent.exp())
}

/// A counterclockwise circle `|z| = radius` sampled at equispaced angles.
#[derive(Debug, Clone, Copy)]
pub struct CirclePath {
    radius: f64,
    samples: usize,
}

impl CirclePath {
    /// Radius must lie in `(0, 1)`; samples must equal `64 * 2^m`.
    pub fn new(radius: f64, samples: usize) -> Result<Self, BranchError> {
        if !(radius > 0.0 && radius < 1.0) || !radius.is_finite() {
            return Err(BranchError::InvalidPath("radius must lie in (0, 1)"));
        }
        if samples < CIRCLE_BASE_SAMPLES
            || !samples.is_multiple_of(CIRCLE_BASE_SAMPLES)
            || !(samples / CIRCLE_BASE_SAMPLES).is_power_of_two()
        {
            return Err(BranchError::InvalidPath("samples must be 64 * 2^m"));
        }
        Ok(CirclePath { radius, samples })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    /// The `i`-th sample point, `i = 0` at angle zero.
    pub fn point(&self, i: usize) -> Complex64 {
        let theta = TAU * (i as f64) / (self.samples as f64);
        Complex64::from_polar(self.radius, theta)
    }
}

/// Branch-tracked logs of a function sampled around a circle.
#[derive(Debug, Clone)]
pub struct CircleLog {
    pub radius: f64,
    /// One entry per sample point, angle `2 * pi * i / n`.
    pub logs: Vec<TrackedLog>,
    /// `|log|` mismatch after returning to the start point.
    pub closure_defect: f64,
}

/// Continue the log of `g` from the origin out to `z = radius` along the
/// positive real axis.
///
/// The path clusters geometrically toward `z = 1` so that maps with a
/// boundary singularity there stay resolvable. Seeds with [`TrackedLog::seeded`]
/// at the origin; `g(0)` must therefore be finite and nonzero.
pub(crate) fn radial_log_seed<G>(
    g: &G,
    radius: f64,
    steps: usize,
) -> Result<TrackedLog, BranchError>
where
    G: Fn(Complex64) -> Complex64 + ?Sized,
{
    if !(radius > 0.0 && radius < 1.0) {
        return Err(BranchError::InvalidPath("radius must lie in (0, 1)"));
    }
    let mut tracked = TrackedLog::seeded(g(Complex64::new(0.0, 0.0)))?;
    let gap = 1.0 - radius;
    for m in 1..steps {
        let p = 1.0 - gap.powf(m as f64 / steps as f64);
        tracked = continue_log(&tracked, g(Complex64::new(p, 0.0)))?;
    }
    // Land exactly on the circle's angle-zero sample point.
    continue_log(&tracked, g(Complex64::new(radius, 0.0)))
}

/// Walk `g` once counterclockwise around `path`, starting from `seed`
/// (the tracked log of `g` at the angle-zero point).
pub(crate) fn circle_walk<G>(
    g: &G,
    path: CirclePath,
    seed: TrackedLog,
) -> Result<CircleLog, BranchError>
where
    G: Fn(Complex64) -> Complex64 + ?Sized,
{
    let n = path.samples();
    let mut logs = Vec::with_capacity(n);
    let first = continue_log(&seed, g(path.point(0)))?;
    logs.push(first);
    let mut current = first;
    for i in 1..n {
        current = continue_log(&current, g(path.point(i)))?;
        logs.push(current);
    }
    // Close the loop back onto the starting sample.
    let wrapped = continue_log(&current, g(path.point(0)))?;
    let closure_defect = (wrapped.log_value - first.log_value).norm();
    Ok(CircleLog {
        radius: path.radius(),
        logs,
        closure_defect,
    })
}

/// Branch-tracked logs of a nonvanishing derivative around `|z| = radius`.
///
/// The seed branch is carried out from the origin along the real axis, so
/// circles at different radii share one coherent branch choice. Ambiguous
/// steps and closure defects trigger up to two sample doublings before the
/// failure is reported.
pub fn log_derivative_on_circle<G>(
    deriv: &G,
    radius: f64,
    samples: usize,
) -> Result<CircleLog, BranchError>
where
    G: Fn(Complex64) -> Complex64 + ?Sized,
{
    let mut n = CIRCLE_BASE_SAMPLES;
    while n < samples {
        n *= 2;
    }
    let seed = radial_seed_with_retry(deriv, radius)?;
    let mut last_err = None;
    for round in 0..3 {
        let path = CirclePath::new(radius, n)?;
        match circle_walk(deriv, path, seed) {
            Ok(walk) => {
                if walk.closure_defect <= CLOSURE_TOL {
                    return Ok(walk);
                }
                last_err = Some(BranchError::ClosureDefect {
                    defect: walk.closure_defect,
                    samples: n,
                });
            }
            Err(err @ BranchError::AmbiguousBranch { .. }) => {
                last_err = Some(err);
            }
            Err(other) => return Err(other),
        }
        if round < 2 {
            n *= 2;
        }
    }
    Err(last_err.expect("three rounds always record an error"))
}

pub(crate) fn radial_seed_with_retry<G>(g: &G, radius: f64) -> Result<TrackedLog, BranchError>
where
    G: Fn(Complex64) -> Complex64 + ?Sized,
{
    let mut last_err = None;
    for steps in [512usize, 2048, 8192] {
        match radial_log_seed(g, radius, steps) {
            Ok(seed) => return Ok(seed),
            Err(err @ BranchError::AmbiguousBranch { .. }) => last_err = Some(err),
            Err(other) => return Err(other),
        }
    }
    Err(last_err.expect("retry loop records an error"))
}

/// Continue the log of `g` along the ray `r * exp(i * theta)` through the
/// given strictly increasing radii. Seeds with the principal branch at the
/// first radius; the caller is responsible for starting close enough to a
/// point where the principal branch is the intended one.
pub fn log_along_ray<G>(
    g: &G,
    theta: f64,
    radii: &[f64],
) -> Result<Vec<TrackedLog>, BranchError>
where
    G: Fn(Complex64) -> Complex64 + ?Sized,
{
    if radii.is_empty() {
        return Err(BranchError::InvalidPath("ray needs at least one radius"));
    }
    if radii.iter().any(|r| !r.is_finite() || *r <= 0.0) {
        return Err(BranchError::InvalidPath("radii must be finite and positive"));
    }
    if radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(BranchError::InvalidPath("radii must be strictly increasing"));
    }
    let direction = Complex64::from_polar(1.0, theta);
    let mut out = Vec::with_capacity(radii.len());
    let mut tracked = TrackedLog::principal(g(direction * radii[0]))?;
    out.push(tracked);
    for &r in &radii[1..] {
        tracked = continue_log(&tracked, g(direction * r))?;
        out.push(tracked);
    }
    Ok(out)
}
