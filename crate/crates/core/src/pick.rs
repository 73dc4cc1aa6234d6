//! The value region for logarithmic derivative data of maps with a
//! `k`-quasiconformal plane extension, and the interpolant families that
//! realize its points.
//!
//! The region is the convex hull of two disks,
//!
//! * `D(1, k)` and
//! * `D(1 / (1 - k^2), k / (1 - k^2))`,
//!
//! the second being the image of the first under `w -> 1 / w`. Since the
//! hull of two disks is the union of the linearly interpolated family
//! `D((1 - s) c_1 + s c_2, (1 - s) r_1 + s r_2)`, membership reduces to a
//! one dimensional convex minimization. The boundary consists of two
//! circular arcs joined by two tangent segments; both segments lie on the
//! rays `arg w = ± arcsin k`, which also bound the cone containing the
//! whole region.
//!
//! Interior points are realized by explicit Nevanlinna-Pick interpolants in
//! two disk variables, evaluated on diagonal slices; convex combinations of
//! the two basic families reach every hull point.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::f64::consts::PI;
use thiserror::Error;

/// Membership tolerance for the signed hull distance.
pub const CONTAINS_TOL: f64 = 1e-12;

/// Tolerance for the cone inequality `|Im w| <= k |w|`.
pub const CONE_TOL: f64 = 1e-14;

/// Tolerance for the support line value `Re(t (1 - w)) <= 1`.
pub const SUPPORT_TOL: f64 = 1e-9;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PickError {
    #[error("distortion must lie in (0, 1), got {k}")]
    InvalidDistortion { k: f64 },

    #[error("interpolant parameter must satisfy |c| <= 1, got {c}")]
    InvalidParameter { c: Complex64 },

    #[error("interpolant arguments must lie in the open unit disk")]
    ArgumentOutsideDisk,

    #[error("interpolant pole at lambda = {lambda}, eta = {eta}")]
    InterpolantPole { lambda: Complex64, eta: Complex64 },

    #[error("point {w} lies outside the region")]
    PointOutsideRegion { w: Complex64 },

    #[error("support line violated: attained {attained} at w = {witness}")]
    SupportViolation { attained: f64, witness: Complex64 },

    #[error("invalid input: {0}")]
    InvalidInput(&'static str),
}

/// The convex value region at distortion `k`, `0 < k < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PickRegion {
    k: f64,
}

impl PickRegion {
    pub fn new(k: f64) -> Result<Self, PickError> {
        if !k.is_finite() || !(k > 0.0 && k < 1.0) {
            return Err(PickError::InvalidDistortion { k });
        }
        Ok(PickRegion { k })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// `D(1, k)`.
    pub fn disk1(&self) -> (Complex64, f64) {
        (ONE, self.k)
    }

    /// `D(1 / (1 - k^2), k / (1 - k^2))`, the inversion of `disk1`.
    pub fn disk2(&self) -> (Complex64, f64) {
        let denom = 1.0 - self.k * self.k;
        (Complex64::new(1.0 / denom, 0.0), self.k / denom)
    }

    /// Disk of the linear family sweeping out the hull, `s` in `[0, 1]`.
    pub fn family_disk(&self, s: f64) -> (Complex64, f64) {
        let (c1, r1) = self.disk1();
        let (c2, r2) = self.disk2();
        (c1 + (c2 - c1) * s, r1 + (r2 - r1) * s)
    }

    /// Parameter and signed distance of the best-approximating family disk.
    ///
    /// `g(s) = |w - c(s)| - r(s)` is convex, so golden section search
    /// converges; the returned distance is negative inside the hull.
    pub fn hull_projection(&self, w: Complex64) -> (f64, f64) {
        let g = |s: f64| {
            let (c, r) = self.family_disk(s);
            (w - c).norm() - r
        };
        let inv_phi = 0.618_033_988_749_894_8f64;
        let (mut a, mut b) = (0.0f64, 1.0f64);
        let mut x1 = b - inv_phi * (b - a);
        let mut x2 = a + inv_phi * (b - a);
        let mut f1 = g(x1);
        let mut f2 = g(x2);
        for _ in 0..90 {
            if f1 <= f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - inv_phi * (b - a);
                f1 = g(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + inv_phi * (b - a);
                f2 = g(x2);
            }
        }
        let s = 0.5 * (a + b);
        (s, g(s).min(f1).min(f2))
    }

    /// Signed distance to the hull, negative inside.
    pub fn hull_distance(&self, w: Complex64) -> f64 {
        self.hull_projection(w).1
    }

    pub fn contains(&self, w: Complex64) -> bool {
        w.is_finite() && self.hull_distance(w) <= CONTAINS_TOL
    }

    /// Angle of the tangency points on each disk: `cos phi = -k` exactly.
    pub fn tangent_angle(&self) -> f64 {
        (-self.k).acos()
    }

    /// Upper tangency points `(T1 on disk1, T2 on disk2)` in closed form:
    /// `T1 = 1 - k^2 + i k sqrt(1 - k^2)`, `T2 = 1 + i k / sqrt(1 - k^2)`.
    /// Both lie on the ray `arg w = arcsin k`.
    pub fn tangency_points(&self) -> (Complex64, Complex64) {
        let k = self.k;
        let root = (1.0 - k * k).sqrt();
        (
            Complex64::new(1.0 - k * k, k * root),
            Complex64::new(1.0, k / root),
        )
    }

    /// Real parts spanned by the tangent segments: `[1 - k^2, 1]`.
    pub fn two_point_interval(&self) -> (f64, f64) {
        (1.0 - self.k * self.k, 1.0)
    }

    /// `|Im w| <= k |w|`: the cone containing the whole region.
    pub fn cone_check(&self, w: Complex64) -> bool {
        w.im.abs() <= self.k * w.norm() + CONE_TOL
    }

    /// Counterclockwise boundary polyline with `n` vertices (`n` even,
    /// at least 8), starting at the rightmost point `1 / (1 - k)`.
    ///
    /// Vertices are allocated to the two arcs and the segment in proportion
    /// to arc length, and the lower half mirrors the upper half exactly.
    pub fn boundary_polyline(&self, n: usize) -> Result<Vec<Complex64>, PickError> {
        if n < 8 || !n.is_multiple_of(2) {
            return Err(PickError::InvalidInput(
                "polyline needs an even vertex count of at least 8",
            ));
        }
        let phi = self.tangent_angle();
        let (c1, r1) = self.disk1();
        let (c2, r2) = self.disk2();
        let seg_len = {
            let (t1, t2) = self.tangency_points();
            (t2 - t1).norm()
        };
        let len_arc2 = r2 * phi;
        let len_arc1 = r1 * (PI - phi);
        let total = len_arc2 + seg_len + len_arc1;
        let half = n / 2;
        let mut m2 = ((half as f64) * len_arc2 / total).round() as usize;
        let mut ms = ((half as f64) * seg_len / total).round() as usize;
        m2 = m2.max(1);
        ms = ms.max(1);
        while m2 + ms > half - 1 {
            if m2 >= ms && m2 > 1 {
                m2 -= 1;
            } else {
                ms -= 1;
            }
        }
        let m1 = half - m2 - ms;
        let mut vertices = Vec::with_capacity(n);
        for i in 0..=m2 {
            let theta = phi * (i as f64) / (m2 as f64);
            vertices.push(c2 + r2 * Complex64::from_polar(1.0, theta));
        }
        let seg_start = c2 + r2 * Complex64::from_polar(1.0, phi);
        let seg_end = c1 + r1 * Complex64::from_polar(1.0, phi);
        for i in 1..=ms {
            let s = (i as f64) / (ms as f64);
            vertices.push(seg_start + (seg_end - seg_start) * s);
        }
        for i in 1..=m1 {
            let theta = phi + (PI - phi) * (i as f64) / (m1 as f64);
            vertices.push(c1 + r1 * Complex64::from_polar(1.0, theta));
        }
        // Mirror the upper chain; the leftmost vertex sits at index half.
        for i in 1..half {
            let w = vertices[half - i];
            vertices.push(w.conj());
        }
        Ok(vertices)
    }

    /// Largest distance from a hull point to the union of `disk1`, `disk2`
    /// and the middle family disk, over a square grid of spacing `cell`.
    ///
    /// Measures how well three explicit interpolant families already cover
    /// the region.
    pub fn coverage_gap(&self, cell: f64) -> Result<f64, PickError> {
        if !(cell > 0.0 && cell < 0.5) {
            return Err(PickError::InvalidInput(
                "grid cell must lie in (0, 0.5)",
            ));
        }
        let (c1, r1) = self.disk1();
        let (c2, r2) = self.disk2();
        let (cm, rm) = self.family_disk(0.5);
        let x_lo = c1.re - r1;
        let x_hi = c2.re + r2;
        let y_hi = r2;
        let nx = ((x_hi - x_lo) / cell).ceil() as usize + 1;
        let ny = (2.0 * y_hi / cell).ceil() as usize + 1;
        let mut gap = 0.0f64;
        for ix in 0..nx {
            let x = x_lo + cell * ix as f64;
            for iy in 0..ny {
                let y = -y_hi + cell * iy as f64;
                let w = Complex64::new(x, y);
                if self.hull_distance(w) > CONTAINS_TOL {
                    continue;
                }
                let d = ((w - c1).norm() - r1)
                    .min((w - c2).norm() - r2)
                    .min((w - cm).norm() - rm);
                gap = gap.max(d);
            }
        }
        Ok(gap)
    }

    /// Realize a region point as a convex combination of the two basic
    /// interpolant families evaluated at `(k, 0)`.
    ///
    /// The point is split along its family disk: `w = (1 - s) p1 + s p2`
    /// with `p1` in `disk1` and `p2` in `disk2` at the same relative
    /// position. `p1 = 1 + c_a k` fixes the first parameter and
    /// `1 / p2 = 1 - i c_b k` the second; both satisfy `|c| <= 1`.
    pub fn realize_point(&self, w: Complex64) -> Result<RealizedPoint, PickError> {
        let (s, distance) = self.hull_projection(w);
        if distance > CONTAINS_TOL {
            return Err(PickError::PointOutsideRegion { w });
        }
        let (c, r) = self.family_disk(s);
        let offset = w - c;
        let rho = (offset.norm() / r).min(1.0);
        let direction = if offset.norm() < 1e-300 {
            ONE
        } else {
            offset / offset.norm()
        };
        let (c1, r1) = self.disk1();
        let (c2, r2) = self.disk2();
        let p1 = c1 + direction * (rho * r1);
        let p2 = c2 + direction * (rho * r2);
        let k = self.k;
        let c_a = (p1 - ONE) / k;
        let c_b = (ONE - p2.inv()) / (I * k);
        for c in [c_a, c_b] {
            if c.norm() > 1.0 + 1e-9 {
                return Err(PickError::InvalidParameter { c });
            }
        }
        let first = InterpolantSpec::new(InterpolantKind::First, clamp_to_disk(c_a))?;
        let second = InterpolantSpec::new(InterpolantKind::Second, clamp_to_disk(c_b))?;
        let lambda0 = Complex64::new(k, 0.0);
        let reconstructed = convex_combination(1.0 - s, &first, &second, lambda0, Complex64::new(0.0, 0.0))?;
        Ok(RealizedPoint {
            alpha: 1.0 - s,
            first,
            second,
            lambda0: k,
            reconstructed,
            error: (reconstructed - w).norm(),
        })
    }
}

fn clamp_to_disk(c: Complex64) -> Complex64 {
    let n = c.norm();
    if n > 1.0 {
        c / n
    } else {
        c
    }
}

/// A hull point written as a convex combination of the basic interpolants.
#[derive(Debug, Clone, Copy)]
pub struct RealizedPoint {
    /// Weight on the first interpolant.
    pub alpha: f64,
    pub first: InterpolantSpec,
    pub second: InterpolantSpec,
    /// Diagonal slice parameter; the point is the value at `(lambda0, 0)`.
    pub lambda0: f64,
    pub reconstructed: Complex64,
    pub error: f64,
}

/// Which of the two basic interpolant families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterpolantKind {
    /// `psi(lambda, eta) = (1 + lambda eta + c lambda + conj(c) eta) / (1 - lambda eta)`;
    /// slices `psi(lambda0, 0) = 1 + c lambda0` fill the first disk.
    First,
    /// `psi(lambda, eta) = (1 - lambda eta) / (1 - i c lambda + i conj(c) eta + lambda eta)`;
    /// reciprocal slices `1 / psi(lambda0, 0) = 1 - i c lambda0` fill the
    /// second disk.
    Second,
}

/// A positive-real-part interpolant in two disk variables with
/// `psi(0, 0) = 1` and the conjugation symmetry
/// `psi(lambda, eta) = conj(psi(conj(eta), conj(lambda)))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterpolantSpec {
    kind: InterpolantKind,
    c: Complex64,
}

impl InterpolantSpec {
    pub fn new(kind: InterpolantKind, c: Complex64) -> Result<Self, PickError> {
        if !c.is_finite() || c.norm() > 1.0 + 1e-12 {
            return Err(PickError::InvalidParameter { c });
        }
        Ok(InterpolantSpec { kind, c })
    }

    pub fn kind(&self) -> InterpolantKind {
        self.kind
    }

    pub fn parameter(&self) -> Complex64 {
        self.c
    }

    /// Same family with the parameter rotated by `exp(i theta)`; satisfies
    /// `psi_c(e^{i theta} lambda, e^{-i theta} eta) = psi_(c e^{i theta})(lambda, eta)`.
    pub fn rotated(&self, theta: f64) -> InterpolantSpec {
        InterpolantSpec {
            kind: self.kind,
            c: self.c * Complex64::from_polar(1.0, theta),
        }
    }

    pub fn eval(&self, lambda: Complex64, eta: Complex64) -> Result<Complex64, PickError> {
        if lambda.norm() >= 1.0 || eta.norm() >= 1.0 {
            return Err(PickError::ArgumentOutsideDisk);
        }
        let c = self.c;
        match self.kind {
            InterpolantKind::First => {
                let numer = ONE + lambda * eta + c * lambda + c.conj() * eta;
                let denom = ONE - lambda * eta;
                Ok(numer / denom)
            }
            InterpolantKind::Second => {
                let numer = ONE - lambda * eta;
                let denom = ONE - I * c * lambda + I * c.conj() * eta + lambda * eta;
                if denom.norm() < 1e-15 {
                    return Err(PickError::InterpolantPole { lambda, eta });
                }
                Ok(numer / denom)
            }
        }
    }
}

/// Convex combination `alpha psi_first + (1 - alpha) psi_second`, itself a
/// valid interpolant (positive real part, value one at the origin).
pub fn convex_combination(
    alpha: f64,
    first: &InterpolantSpec,
    second: &InterpolantSpec,
    lambda: Complex64,
    eta: Complex64,
) -> Result<Complex64, PickError> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(PickError::InvalidInput("weight must lie in [0, 1]"));
    }
    Ok(first.eval(lambda, eta)? * alpha + second.eval(lambda, eta)? * (1.0 - alpha))
}

/// Statistics from randomized interpolant checks.
#[derive(Debug, Clone, Copy)]
pub struct InterpolantReport {
    pub samples: usize,
    /// Smallest real part seen; must stay positive.
    pub min_re: f64,
    /// Largest defect of the conjugation symmetry.
    pub max_symmetry_defect: f64,
    /// Largest signed hull distance of diagonal slice values, measured in
    /// the region of the slice parameter's modulus.
    pub max_slice_distance: f64,
}

/// Randomized verification of an interpolant family: positivity, value at
/// the origin, conjugation symmetry, and containment of disk slices.
pub fn verify_interpolant(
    spec: &InterpolantSpec,
    samples: usize,
    seed: u64,
) -> Result<InterpolantReport, PickError> {
    if samples == 0 {
        return Err(PickError::InvalidInput("need at least one sample"));
    }
    let origin = spec.eval(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))?;
    if (origin - ONE).norm() > 1e-14 {
        return Err(PickError::InvalidInput("interpolant must be one at the origin"));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut min_re = f64::INFINITY;
    let mut max_symmetry_defect = 0.0f64;
    let mut max_slice_distance = f64::NEG_INFINITY;
    for _ in 0..samples {
        let lambda = sample_disk(&mut rng);
        let eta = sample_disk(&mut rng);
        let value = spec.eval(lambda, eta)?;
        min_re = min_re.min(value.re);
        let mirrored = spec.eval(eta.conj(), lambda.conj())?.conj();
        max_symmetry_defect = max_symmetry_defect.max((value - mirrored).norm());
        if lambda.norm() > 1e-6 {
            let slice = spec.eval(lambda, Complex64::new(0.0, 0.0))?;
            let region = PickRegion::new(lambda.norm())?;
            max_slice_distance = max_slice_distance.max(region.hull_distance(slice));
        }
    }
    Ok(InterpolantReport {
        samples,
        min_re,
        max_symmetry_defect,
        max_slice_distance,
    })
}

fn sample_disk(rng: &mut ChaCha12Rng) -> Complex64 {
    loop {
        let x: f64 = rng.gen_range(-1.0..1.0);
        let y: f64 = rng.gen_range(-1.0..1.0);
        if x * x + y * y < 1.0 {
            return Complex64::new(x, y);
        }
    }
}

/// Support line data for the functional `w -> Re(t (1 - w))` over the
/// region at `k = 1 / |t|`.
#[derive(Debug, Clone, Copy)]
pub struct SupportReport {
    pub k: f64,
    pub t: Complex64,
    /// Maximum over a 4096-vertex boundary polyline.
    pub polyline_max: f64,
    /// Maximum refined analytically over each boundary component.
    pub max_over_boundary: f64,
    pub argmax: Complex64,
    /// Predicted unique maximizer `1 - 1 / t` (boundary point iff `Re t >= 1`).
    pub wstar: Complex64,
    /// `Re(t (1 - wstar))`, equal to one up to rounding.
    pub attained_at_wstar: f64,
    /// Distance between the analytic argmax and `wstar`.
    pub argmax_gap: f64,
}

/// Verify the support line `Re(t (1 - w)) <= 1` on the region with
/// `k = 1 / |t|`, and locate the maximizer.
///
/// The functional is linear, so per component the maximum is attained
/// either at an interior critical angle of an arc or at a tangency point;
/// segments never beat their endpoints. Errors with a witness when the
/// bound fails, which happens exactly when `Re t < 1`.
pub fn tangent_support(t: Complex64) -> Result<SupportReport, PickError> {
    if !t.is_finite() || t.norm() <= 1.0 {
        return Err(PickError::InvalidInput("support line needs |t| > 1"));
    }
    let k = 1.0 / t.norm();
    let region = PickRegion::new(k)?;
    let h = |w: Complex64| (t * (ONE - w)).re;

    let polyline = region.boundary_polyline(4096)?;
    let mut polyline_max = f64::NEG_INFINITY;
    for w in &polyline {
        polyline_max = polyline_max.max(h(*w));
    }

    let phi = region.tangent_angle();
    let (c1, r1) = region.disk1();
    let (c2, r2) = region.disk2();
    let mut max_over_boundary = f64::NEG_INFINITY;
    let mut argmax = c1;
    let mut consider = |w: Complex64| {
        let value = h(w);
        if value > max_over_boundary {
            max_over_boundary = value;
            argmax = w;
        }
    };
    arc_candidates(t, c2, r2, -phi, phi, &mut consider);
    arc_candidates(t, c1, r1, phi, 2.0 * PI - phi, &mut consider);

    let wstar = ONE - t.inv();
    let attained_at_wstar = (t * (ONE - wstar)).re;
    let argmax_gap = (argmax - wstar).norm();
    if max_over_boundary > 1.0 + SUPPORT_TOL {
        return Err(PickError::SupportViolation {
            attained: max_over_boundary,
            witness: argmax,
        });
    }
    Ok(SupportReport {
        k,
        t,
        polyline_max,
        max_over_boundary,
        argmax,
        wstar,
        attained_at_wstar,
        argmax_gap,
    })
}

/// Feed the endpoints and interior critical angles of an arc to `consider`.
///
/// On `w = c + r e^{i theta}` the functional is
/// `Re(t (1 - c)) - r |t| cos(theta + arg t)`, maximized where the cosine
/// is smallest.
fn arc_candidates<F: FnMut(Complex64)>(
    t: Complex64,
    c: Complex64,
    r: f64,
    theta_lo: f64,
    theta_hi: f64,
    consider: &mut F,
) {
    consider(c + r * Complex64::from_polar(1.0, theta_lo));
    consider(c + r * Complex64::from_polar(1.0, theta_hi));
    let critical = PI - t.arg();
    for turn in [-1.0f64, 0.0, 1.0] {
        let theta = critical + std::f64::consts::TAU * turn;
        if theta > theta_lo && theta < theta_hi {
            consider(c + r * Complex64::from_polar(1.0, theta));
        }
    }
}
