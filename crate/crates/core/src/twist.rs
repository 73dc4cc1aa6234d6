//! Boundary twisting: the rate at which a conformal map spirals as it
//! approaches a boundary point, and the distortion bounds that rate obeys.
//!
//! The twisting exponent at a boundary point `zeta` is the limit of
//! `arg(f(r zeta) - f(zeta)) / ln|f(r zeta) - f(zeta)|` as `r -> 1`, with
//! the argument continued along the ray. The raw quotient converges
//! slowly (its bias decays like one over the level), so the estimator here
//! uses dyadic difference quotients of the tracked logarithm, which are
//! exact for power map models at any level.
//!
//! For maps with a `k`-quasiconformal plane extension the rate is bounded
//! by `gamma_max(k) = k / sqrt(1 - k^2)`, and the set of boundary points
//! twisting at rate at least `gamma` has Minkowski dimension at most
//! `2 - 2 |gamma| / gamma_max(k)`.

use crate::branch::{continue_log, log_along_ray, BranchError, TrackedLog};
use crate::maps::{DiskMap, MapError, SINGULAR_EXCLUSION};
use num_complex::Complex64;
use thiserror::Error;

/// Substeps per dyadic level of the radial walk; keeps every continuation
/// step well under a half turn for any admissible twist rate.
pub const SPIRAL_SUBSTEPS: usize = 32;

/// Slope agreement needed between the last dyadic levels to declare the
/// estimate converged.
pub const SPIRAL_SLOPE_TOL: f64 = 0.02;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TwistError {
    #[error("branch tracking failed: {0}")]
    Branch(#[from] BranchError),

    #[error("map evaluation failed: {0}")]
    Map(#[from] MapError),

    #[error("map has no boundary value at {zeta}")]
    NoBoundaryValue { zeta: Complex64 },

    #[error("invalid input: {0}")]
    InvalidInput(&'static str),
}

/// One dyadic level `r = 1 - 2^{-level}` of the spiral walk.
#[derive(Debug, Clone, Copy)]
pub struct TwistLevel {
    pub level: u32,
    pub radius: f64,
    /// Continued logarithm of `f(r zeta) - f(zeta)`.
    pub log_d: Complex64,
    /// Raw quotient `arg / ln |d|`; `None` when the modulus term vanishes.
    pub ratio: Option<f64>,
    /// Dyadic difference quotient against the previous level.
    pub slope: Option<f64>,
}

/// Twisting estimate at one boundary point.
#[derive(Debug, Clone)]
pub struct TwistReport {
    pub zeta: Complex64,
    pub levels: Vec<TwistLevel>,
    /// Difference quotient at the deepest level.
    pub gamma_hat: f64,
    /// Whether the last three slopes agree pairwise within
    /// `SPIRAL_SLOPE_TOL`.
    pub converged: bool,
}

/// Estimate the twisting exponent of `map` at the boundary point `zeta`.
///
/// Walks `r = 1 - 2^{-e}` with `e` from one to `j_max` in substeps,
/// tracking the argument of `f(r zeta) - f(zeta)` continuously, and
/// reports dyadic levels four through `j_max`. Requires `7 <= j_max <= 40`
/// so the convergence test has three slopes to compare.
pub fn spiral_exponent(
    map: &dyn DiskMap,
    zeta: Complex64,
    j_max: u32,
) -> Result<TwistReport, TwistError> {
    if !zeta.is_finite() || (zeta.norm() - 1.0).abs() > 1e-9 {
        return Err(TwistError::InvalidInput(
            "twisting is measured at a point of the unit circle",
        ));
    }
    if !(7..=40).contains(&j_max) {
        return Err(TwistError::InvalidInput("need 7 <= j_max <= 40"));
    }
    let zeta = zeta / zeta.norm();
    let target = map
        .boundary_value(zeta)
        .ok_or(TwistError::NoBoundaryValue { zeta })?;

    let difference = |tau: f64| -> Result<Complex64, TwistError> {
        Ok(map.eval(zeta * tau)? - target)
    };

    let total = (j_max as usize - 1) * SPIRAL_SUBSTEPS;
    let mut tracked = TrackedLog::principal(difference(0.5)?)?;
    let mut levels: Vec<TwistLevel> = Vec::new();
    let mut prev_log: Option<Complex64> = None;
    for i in 0..=total {
        let exponent = 1.0 + (i as f64) / (SPIRAL_SUBSTEPS as f64);
        let tau = 1.0 - (-exponent).exp2();
        if i > 0 {
            tracked = continue_log(&tracked, difference(tau)?)?;
        }
        if i % SPIRAL_SUBSTEPS != 0 {
            continue;
        }
        let level = 1 + (i / SPIRAL_SUBSTEPS) as u32;
        if level < 4 {
            continue;
        }
        let log_d = tracked.log_value;
        let ratio = if log_d.re.abs() > 1e-12 {
            Some(log_d.im / log_d.re)
        } else {
            None
        };
        let slope = prev_log.and_then(|prev| {
            let dx = log_d.re - prev.re;
            if dx.abs() > 1e-12 {
                Some((log_d.im - prev.im) / dx)
            } else {
                None
            }
        });
        levels.push(TwistLevel {
            level,
            radius: tau,
            log_d,
            ratio,
            slope,
        });
        prev_log = Some(log_d);
    }

    let slopes: Vec<f64> = levels.iter().filter_map(|l| l.slope).collect();
    let gamma_hat = *slopes
        .last()
        .ok_or(TwistError::InvalidInput("walk produced no slopes"))?;
    let converged = slopes.len() >= 3 && {
        let tail = &slopes[slopes.len() - 3..];
        let lo = tail.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        hi - lo <= SPIRAL_SLOPE_TOL
    };
    Ok(TwistReport {
        zeta,
        levels,
        gamma_hat,
        converged,
    })
}

/// Largest twisting rate compatible with a `k`-quasiconformal plane
/// extension: `k / sqrt(1 - k^2)`.
pub fn gamma_max(k: f64) -> Result<f64, TwistError> {
    if !k.is_finite() || !(0.0..1.0).contains(&k) {
        return Err(TwistError::InvalidInput("distortion must lie in [0, 1)"));
    }
    Ok(k / (1.0 - k * k).sqrt())
}

/// Upper bound for the Minkowski dimension of the set of boundary points
/// twisting at rate at least `gamma`, linear from two at `gamma = 0` down
/// to zero at the extremal rate.
pub fn dim_bound(gamma: f64, k: f64) -> Result<f64, TwistError> {
    if !gamma.is_finite() {
        return Err(TwistError::InvalidInput("twist rate must be finite"));
    }
    let extremal = gamma_max(k)?;
    if extremal == 0.0 {
        return Ok(if gamma == 0.0 { 2.0 } else { 0.0 });
    }
    if gamma.abs() >= extremal {
        return Ok(0.0);
    }
    Ok((2.0 - 2.0 * (gamma.abs() / extremal)).max(0.0))
}

/// Admissibility data for a stretch/twist pair `(alpha, gamma)`.
#[derive(Debug, Clone, Copy)]
pub struct BeurlingReport {
    pub alpha: f64,
    pub gamma: f64,
    /// The threshold `(1 + gamma^2) / 2`.
    pub bound: f64,
    /// `alpha - bound`; nonnegative exactly for admissible pairs.
    pub margin: f64,
    /// Distortion `|sigma - 1|` of the exponent `sigma = (1 + i gamma) / alpha`.
    pub k: f64,
}

impl BeurlingReport {
    pub fn admissible(&self) -> bool {
        self.margin >= 0.0
    }
}

/// Check the admissibility inequality `alpha >= (1 + gamma^2) / 2` for a
/// stretch rate `alpha` and twist rate `gamma`.
///
/// Equality holds exactly when the corresponding power map exponent sits
/// on the conformality boundary `|sigma - 1| = 1`.
pub fn beurling_check(alpha: f64, gamma: f64) -> Result<BeurlingReport, TwistError> {
    if !alpha.is_finite() || alpha <= 0.0 || !gamma.is_finite() {
        return Err(TwistError::InvalidInput(
            "need a positive stretch rate and finite twist rate",
        ));
    }
    let bound = 0.5 * (1.0 + gamma * gamma);
    let one_minus = 1.0 - alpha;
    let k = (one_minus * one_minus + gamma * gamma).sqrt() / alpha;
    Ok(BeurlingReport {
        alpha,
        gamma,
        bound,
        margin: alpha - bound,
        k,
    })
}

/// Distortion `k = (L^2 - 1) / (L^2 + 1)` of a map whose plane extension
/// has maximal dilatation `L^2`... see `dilatation_from_k` for the inverse.
pub fn k_from_dilatation(dilatation: f64) -> Result<f64, TwistError> {
    if !dilatation.is_finite() || dilatation < 1.0 {
        return Err(TwistError::InvalidInput("dilatation must be at least one"));
    }
    let square = dilatation * dilatation;
    Ok((square - 1.0) / (square + 1.0))
}

/// Maximal dilatation `sqrt((1 + k) / (1 - k))` at distortion `k`.
pub fn dilatation_from_k(k: f64) -> Result<f64, TwistError> {
    if !k.is_finite() || !(0.0..1.0).contains(&k) {
        return Err(TwistError::InvalidInput("distortion must lie in [0, 1)"));
    }
    Ok(((1.0 + k) / (1.0 - k)).sqrt())
}

/// Growth of the normalized ratio `(f(z) - f(0)) / (z f'(0))` toward the
/// boundary.
#[derive(Debug, Clone)]
pub struct GrowthReport {
    pub radii: Vec<f64>,
    /// `sup_theta |log h(r e^{i theta})|` per radius.
    pub sup_log: Vec<f64>,
    /// Least squares slope of the sup against `ln((1 + r) / (1 - r))`,
    /// over the second half of the radii.
    pub tail_slope: f64,
    pub k: f64,
}

/// Measure how fast `sup |log((f - f(0)) / (z f'(0)))|` grows as `r -> 1`.
///
/// The branch is continued radially from near the origin, where the ratio
/// tends to one. For a map with a `k`-quasiconformal extension the sup
/// stays bounded, so the fitted tail slope should be near zero; it is in
/// any case at most `k` by the pointwise logarithmic derivative bound.
pub fn log_ratio_growth(
    map: &dyn DiskMap,
    radii: &[f64],
    n_angles: usize,
) -> Result<GrowthReport, TwistError> {
    if radii.len() < 4 || n_angles == 0 {
        return Err(TwistError::InvalidInput(
            "growth fit needs at least four radii and one angle",
        ));
    }
    if radii.windows(2).any(|w| w[0] >= w[1]) || radii.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
        return Err(TwistError::InvalidInput(
            "radii must be strictly increasing inside (0, 1)",
        ));
    }
    let k = map.distortion_k()?;
    let shift = map.eval(Complex64::new(0.0, 0.0))?;
    let scale = map.deriv(Complex64::new(0.0, 0.0))?;
    if scale.norm() < SINGULAR_EXCLUSION {
        return Err(TwistError::Map(MapError::DegenerateJacobian {
            z: Complex64::new(0.0, 0.0),
        }));
    }

    let mut walk_radii: Vec<f64> = [1e-4, 0.05, 0.15, 0.3]
        .into_iter()
        .filter(|r| *r < radii[0])
        .collect();
    let lead = walk_radii.len();
    walk_radii.extend_from_slice(radii);

    let ratio = |z: Complex64| -> Complex64 {
        match map.eval(z) {
            Ok(f) => (f - shift) / (z * scale),
            Err(_) => Complex64::new(f64::NAN, f64::NAN),
        }
    };

    let mut sup_log = vec![0.0f64; radii.len()];
    for i in 0..n_angles {
        let theta = std::f64::consts::TAU * (i as f64) / (n_angles as f64);
        let logs = log_along_ray(&ratio, theta, &walk_radii)?;
        for (j, entry) in logs[lead..].iter().enumerate() {
            sup_log[j] = sup_log[j].max(entry.log_value.norm());
        }
    }

    let start = radii.len() / 2;
    let xs: Vec<f64> = radii[start..]
        .iter()
        .map(|r| ((1.0 + r) / (1.0 - r)).ln())
        .collect();
    let ys = &sup_log[start..];
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(ys.iter()) {
        num += (x - mean_x) * (y - mean_y);
        den += (x - mean_x) * (x - mean_x);
    }
    Ok(GrowthReport {
        radii: radii.to_vec(),
        sup_log,
        tail_slope: num / den,
        k,
    })
}
