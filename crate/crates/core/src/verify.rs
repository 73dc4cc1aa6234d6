//! Named self-checks wiring the numerical modules against their exact
//! oracles: closed form integrals, algebraic identities, pinned reference
//! values, and symmetry relations.
//!
//! Each check is small, deterministic for a fixed seed, and reports a one
//! line detail string; `run_all` executes the whole battery. The CLI
//! exposes this as its `verify` subcommand.

use crate::branch::{self, TrackedLog};
use crate::maps::{
    beltrami_fd, pointwise_log_bound, DiskIdentity, DiskMap, DiskPowerMap, MapError,
    NormalizedDiskMap, PowerParams,
};
use crate::motion::{sigma_of, WeldedStretch};
use crate::pick::{
    tangent_support, verify_interpolant, InterpolantKind, InterpolantSpec, PickError, PickRegion,
};
use crate::spectrum::{
    area_integral, beta_estimate, circle_integral, classify_integrability, IntegrabilityClass,
    RadiusSchedule, ReferenceSpectra,
};
use crate::twist::{
    beurling_check, dim_bound, gamma_max, k_from_dilatation, log_ratio_growth, spiral_exponent,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::f64::consts::{FRAC_PI_4, PI, TAU};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Results of the full battery.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub seed: u64,
    pub results: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> Vec<&CheckResult> {
        self.results.iter().filter(|r| !r.passed).collect()
    }
}

fn run_check<F>(name: &'static str, body: F) -> CheckResult
where
    F: FnOnce() -> Result<String, String>,
{
    match body() {
        Ok(detail) => CheckResult {
            name,
            passed: true,
            detail,
        },
        Err(detail) => CheckResult {
            name,
            passed: false,
            detail,
        },
    }
}

fn fail<E: std::fmt::Display>(error: E) -> String {
    error.to_string()
}

fn ensure(condition: bool, detail: String) -> Result<String, String> {
    if condition {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// A disk map precomposed with a rotation; integral means of `|f'|^t` for
/// real `t` are invariant under it.
pub struct RotatedMap<M: DiskMap> {
    base: M,
    omega: Complex64,
}

impl<M: DiskMap> RotatedMap<M> {
    pub fn new(base: M, angle: f64) -> Self {
        RotatedMap {
            base,
            omega: Complex64::from_polar(1.0, angle),
        }
    }
}

impl<M: DiskMap> DiskMap for RotatedMap<M> {
    fn eval(&self, z: Complex64) -> Result<Complex64, MapError> {
        self.base.eval(self.omega * z)
    }

    fn deriv(&self, z: Complex64) -> Result<Complex64, MapError> {
        Ok(self.omega * self.base.deriv(self.omega * z)?)
    }

    fn distortion_k(&self) -> Result<f64, MapError> {
        self.base.distortion_k()
    }

    fn boundary_value(&self, zeta: Complex64) -> Option<Complex64> {
        self.base.boundary_value(self.omega * zeta)
    }

    fn describe(&self) -> String {
        format!("{} rotated by {:.6}", self.base.describe(), self.omega.arg())
    }
}

fn half_power() -> DiskPowerMap {
    DiskPowerMap::new(PowerParams::new(Complex64::new(0.5, 0.0)).unwrap())
}

fn twisted_power() -> DiskPowerMap {
    DiskPowerMap::new(PowerParams::new(Complex64::new(0.5, 0.5)).unwrap())
}

fn check_branch_winding(_: u64) -> Result<String, String> {
    let g = |z: Complex64| z * z;
    let path = branch::CirclePath::new(0.8, 1024).map_err(fail)?;
    let seed = TrackedLog::principal(g(path.point(0))).map_err(fail)?;
    let mut tracked = seed;
    for i in 1..path.samples() {
        tracked = branch::continue_log(&tracked, g(path.point(i))).map_err(fail)?;
    }
    tracked = branch::continue_log(&tracked, g(path.point(0))).map_err(fail)?;
    let gained = tracked.log_value.im - seed.log_value.im;
    let defect = (gained - 2.0 * TAU).abs();
    ensure(defect < 1e-9, format!("double winding defect {defect:.2e}"))
}

fn check_branch_idempotence(_: u64) -> Result<String, String> {
    let g = |z: Complex64| z;
    let path = branch::CirclePath::new(0.6, 256).map_err(fail)?;
    let mut tracked = TrackedLog::principal(g(path.point(0))).map_err(fail)?;
    for i in 1..path.samples() {
        tracked = branch::continue_log(&tracked, g(path.point(i))).map_err(fail)?;
    }
    let again = branch::continue_log(&tracked, tracked.value).map_err(fail)?;
    ensure(
        again.log_value == tracked.log_value,
        "re-continuation is bit identical".to_string(),
    )
}

fn check_branch_ambiguity(_: u64) -> Result<String, String> {
    let prev = TrackedLog::principal(ONE).map_err(fail)?;
    match branch::continue_log(&prev, -ONE) {
        Err(branch::BranchError::AmbiguousBranch { .. }) => {
            Ok("antipodal step rejected".to_string())
        }
        other => Err(format!("expected ambiguity, got {other:?}")),
    }
}

fn check_maps_normalization(_: u64) -> Result<String, String> {
    let map = half_power();
    let at_origin = map.eval(Complex64::new(0.0, 0.0)).map_err(fail)?;
    let pinned = Complex64::from_polar(1.0, FRAC_PI_4);
    let defect = (at_origin - pinned).norm();
    if defect > 1e-14 {
        return Err(format!("f(0) off by {defect:.2e}"));
    }
    let normalized = NormalizedDiskMap::new(map).map_err(fail)?;
    let zero = normalized.eval(Complex64::new(0.0, 0.0)).map_err(fail)?;
    let one = normalized.deriv(Complex64::new(0.0, 0.0)).map_err(fail)?;
    ensure(
        zero.norm() < 1e-15 && (one - ONE).norm() < 1e-15,
        format!("normalized pins: |f(0)| = {:.2e}, |f'(0) - 1| = {:.2e}", zero.norm(), (one - ONE).norm()),
    )
}

fn check_maps_beltrami(_: u64) -> Result<String, String> {
    let f = |z: Complex64| z + 0.3 * z.conj();
    let mu = beltrami_fd(&f, Complex64::new(0.4, -0.2), 1e-6).map_err(fail)?;
    let defect = (mu - Complex64::new(0.3, 0.0)).norm();
    ensure(defect < 1e-9, format!("affine beltrami defect {defect:.2e}"))
}

fn check_maps_placement(_: u64) -> Result<String, String> {
    let params = PowerParams::new(Complex64::new(0.7, 0.3)).unwrap();
    let disk = DiskPowerMap::new(params);
    let half = crate::maps::HalfPlanePowerMap::new(params);
    let mut worst = 0.0f64;
    for z in [
        Complex64::new(0.3, 0.4),
        Complex64::new(-0.5, 0.1),
        Complex64::new(0.0, -0.8),
    ] {
        let w = Complex64::new(0.0, 1.0) * (ONE - z);
        let direct = disk.eval(z).map_err(fail)?;
        let placed = half.eval(w).map_err(fail)?;
        worst = worst.max((direct - placed).norm());
    }
    ensure(worst < 1e-14, format!("placement defect {worst:.2e}"))
}

fn check_maps_log_bound(_: u64) -> Result<String, String> {
    let radii: Vec<f64> = (1..=8).map(|j| 1.0 - 0.5f64.powi(j)).collect();
    let mut min_margin = f64::INFINITY;
    for map in [half_power(), twisted_power()] {
        let report = pointwise_log_bound(&map, &radii, 32).map_err(fail)?;
        min_margin = min_margin.min(report.min_margin);
    }
    ensure(
        min_margin > -1e-9,
        format!("smallest pointwise margin {min_margin:.3e}"),
    )
}

fn check_spectrum_poisson(_: u64) -> Result<String, String> {
    let map = half_power();
    let r = 0.9375f64;
    let t = Complex64::new(4.0, 0.0);
    let integral = circle_integral(&map, r, t, 1e-9).map_err(fail)?;
    let exact = r * TAU / (16.0 * (1.0 - r * r));
    let rel = (integral.value - exact).abs() / exact;
    ensure(rel < 1e-6, format!("poisson oracle relative error {rel:.2e}"))
}

fn check_spectrum_identity_beta(_: u64) -> Result<String, String> {
    let schedule = RadiusSchedule::new(2, 14).map_err(fail)?;
    let estimate = beta_estimate(&DiskIdentity, schedule, Complex64::new(3.0, 0.0), 1e-7, 4)
        .map_err(fail)?;
    let worst = estimate.beta_limsup.abs().max(estimate.beta_lsq.abs());
    ensure(worst <= 1e-3, format!("identity beta magnitude {worst:.2e}"))
}

fn check_spectrum_critical_beta(_: u64) -> Result<String, String> {
    let t = Complex64::new(4.0, 0.0);
    let params = PowerParams::for_theorem_exponent(t).map_err(fail)?;
    let map = DiskPowerMap::new(params);
    let schedule = RadiusSchedule::new(2, 11).map_err(fail)?;
    let estimate = beta_estimate(&map, schedule, t, 1e-7, 4).map_err(fail)?;
    let err = (estimate.beta_limsup - 1.0).abs();
    ensure(
        err < 0.05,
        format!("critical beta {:.4}, analytic 1", estimate.beta_limsup),
    )
}

fn check_spectrum_reference(_: u64) -> Result<String, String> {
    let reference = ReferenceSpectra::evaluate(0.5, Complex64::new(4.0, 0.0)).map_err(fail)?;
    let ok = (reference.trivial_upper - 2.0).abs() < 1e-15
        && (reference.trivial_lower - 1.0).abs() < 1e-15
        && reference.theorem_value == Some(1.0)
        && reference.linear_zone.is_some()
        && (reference.quadratic_upper - 20.25).abs() < 1e-12
        && (reference.disproved_quadratic - 1.0).abs() < 1e-15;
    ensure(ok, format!("reference bundle at the critical pair: {reference:?}"))
}

fn check_spectrum_integrability(_: u64) -> Result<String, String> {
    let k = 0.5;
    let cases = [
        (Complex64::new(4.0, 0.0), IntegrabilityClass::CriticalDivergent),
        (Complex64::new(-4.0, 0.0), IntegrabilityClass::OutsideTheorem),
        (Complex64::new(3.6, 0.0), IntegrabilityClass::Inside),
        (Complex64::new(6.0, 0.0), IntegrabilityClass::OutsideTheorem),
    ];
    for (t, expected) in cases {
        let got = classify_integrability(k, t).map_err(fail)?;
        if got != expected {
            return Err(format!("t = {t}: classified {got:?}, expected {expected:?}"));
        }
    }
    Ok("four pinned classifications agree".to_string())
}

fn check_spectrum_area(_: u64) -> Result<String, String> {
    let map = half_power();
    let r = 0.9375f64;
    let t = Complex64::new(4.0, 0.0);
    let area = area_integral(&map, t, r, 1e-6).map_err(fail)?;
    let exact = -(PI / 16.0) * (1.0 - r * r).ln();
    let rel = (area.value - exact).abs() / exact;
    ensure(rel < 1e-5, format!("area oracle relative error {rel:.2e}"))
}

fn check_spectrum_rotation(_: u64) -> Result<String, String> {
    let t = Complex64::new(3.0, 0.0);
    let r = 0.9375f64;
    let base = circle_integral(&twisted_power(), r, t, 1e-8).map_err(fail)?;
    let rotated_map = RotatedMap::new(twisted_power(), PI / 3.0);
    let rotated = circle_integral(&rotated_map, r, t, 1e-8).map_err(fail)?;
    let rel = (base.value - rotated.value).abs() / base.value;
    ensure(rel < 1e-6, format!("rotation changes the mean by {rel:.2e}"))
}

fn check_pick_membership(_: u64) -> Result<String, String> {
    let region = PickRegion::new(0.5).map_err(fail)?;
    let inside = region.contains(Complex64::new(1.0, 0.51));
    let outside = region.contains(Complex64::new(1.0, 0.6));
    ensure(
        inside && !outside,
        format!("1 + 0.51i inside: {inside}; 1 + 0.6i inside: {outside}"),
    )
}

fn check_pick_tangency(_: u64) -> Result<String, String> {
    let mut worst = 0.0f64;
    for k in [0.25, 0.5, 0.75] {
        let region = PickRegion::new(k).map_err(fail)?;
        let (t1, t2) = region.tangency_points();
        worst = worst.max((t1.im - k * t1.norm()).abs());
        worst = worst.max((t2.im - k * t2.norm()).abs());
        worst = worst.max((t1.arg() - t2.arg()).abs());
    }
    ensure(worst < 1e-13, format!("tangency cone defect {worst:.2e}"))
}

fn check_pick_polyline(_: u64) -> Result<String, String> {
    let region = PickRegion::new(0.5).map_err(fail)?;
    let polyline = region.boundary_polyline(512).map_err(fail)?;
    let mut worst = 0.0f64;
    for w in &polyline {
        worst = worst.max(region.hull_distance(*w).abs());
    }
    ensure(
        worst < 1e-9 && polyline.len() == 512,
        format!("largest boundary distance {worst:.2e}"),
    )
}

fn check_pick_interpolants(seed: u64) -> Result<String, String> {
    let mut detail = String::new();
    for (kind, c) in [
        (InterpolantKind::First, Complex64::new(0.6, 0.35)),
        (InterpolantKind::Second, Complex64::new(-0.3, 0.75)),
    ] {
        let spec = InterpolantSpec::new(kind, c).map_err(fail)?;
        let report = verify_interpolant(&spec, 1500, seed).map_err(fail)?;
        if report.min_re <= 0.0 || report.max_symmetry_defect > 1e-12 {
            return Err(format!(
                "{kind:?}: min re {:.2e}, symmetry defect {:.2e}",
                report.min_re, report.max_symmetry_defect
            ));
        }
        detail = format!(
            "min re {:.3e}, slice distance {:.2e}",
            report.min_re, report.max_slice_distance
        );
    }
    Ok(detail)
}

fn check_pick_realization(seed: u64) -> Result<String, String> {
    let region = PickRegion::new(0.5).map_err(fail)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut tried = 0usize;
    while tried < 200 {
        let w = Complex64::new(rng.gen_range(0.4..2.1), rng.gen_range(-0.7..0.7));
        if region.hull_distance(w) > -1e-6 {
            continue;
        }
        tried += 1;
        let realized = region.realize_point(w).map_err(fail)?;
        worst = worst.max(realized.error);
    }
    ensure(worst < 1e-9, format!("largest reconstruction error {worst:.2e}"))
}

fn check_pick_support(_: u64) -> Result<String, String> {
    for t in [Complex64::new(4.0, 0.0), Complex64::new(2.0, 2.0)] {
        let report = tangent_support(t).map_err(fail)?;
        if (report.max_over_boundary - 1.0).abs() > 1e-9 || report.argmax_gap > 1e-6 {
            return Err(format!(
                "t = {t}: max {:.12}, argmax gap {:.2e}",
                report.max_over_boundary, report.argmax_gap
            ));
        }
    }
    match tangent_support(Complex64::new(0.0, 4.0)) {
        Err(PickError::SupportViolation { attained, .. }) => ensure(
            (attained - 16.0 / 15.0).abs() < 1e-9,
            format!("imaginary exponent overshoots to {attained:.6}"),
        ),
        other => Err(format!("expected a support violation, got {other:?}")),
    }
}

fn check_pick_coverage(_: u64) -> Result<String, String> {
    let region = PickRegion::new(0.5).map_err(fail)?;
    let gap = region.coverage_gap(0.02).map_err(fail)?;
    ensure(gap < 0.02, format!("three-disk coverage gap {gap:.4}"))
}

fn check_motion_weld(seed: u64) -> Result<String, String> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let weld = WeldedStretch::new(
            Complex64::from_polar(rng.gen_range(0.0..0.8), rng.gen_range(0.0..TAU)),
            Complex64::from_polar(rng.gen_range(0.0..0.8), rng.gen_range(0.0..TAU)),
        )
        .map_err(fail)?;
        for x in [-0.5, -1.0, -2.0] {
            worst = worst.max(weld.weld_defect(x).map_err(fail)?);
        }
    }
    ensure(worst < 1e-10, format!("largest weld defect {worst:.2e}"))
}

fn check_motion_sigma(seed: u64) -> Result<String, String> {
    let spec = InterpolantSpec::new(InterpolantKind::First, ONE).map_err(fail)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let lambda = Complex64::from_polar(rng.gen_range(0.0..0.9), rng.gen_range(0.0..TAU));
        let eta = Complex64::from_polar(rng.gen_range(0.0..0.9), rng.gen_range(0.0..TAU));
        let direct = sigma_of(lambda, eta);
        let via = spec.eval(lambda, eta).map_err(fail)?;
        worst = worst.max((direct - via).norm());
    }
    ensure(worst < 1e-12, format!("multiplier identity defect {worst:.2e}"))
}

fn check_motion_beltrami(_: u64) -> Result<String, String> {
    let weld = WeldedStretch::new(Complex64::new(0.35, 0.1), Complex64::new(-0.2, 0.0))
        .map_err(fail)?;
    let mut worst = 0.0f64;
    for z in [
        Complex64::from_polar(0.7, 0.8),
        Complex64::from_polar(1.3, 2.5),
        Complex64::from_polar(0.9, -0.7),
        Complex64::from_polar(1.6, -2.2),
    ] {
        worst = worst.max(weld.beltrami_defect(z, 1e-5).map_err(fail)?);
    }
    ensure(worst < 1e-3, format!("largest beltrami defect {worst:.2e}"))
}

fn check_motion_symmetries(seed: u64) -> Result<String, String> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let lambda = Complex64::from_polar(rng.gen_range(0.0..0.7), rng.gen_range(0.0..TAU));
        let eta = Complex64::from_polar(rng.gen_range(0.0..0.7), rng.gen_range(0.0..TAU));
        let z = Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(-3.0..3.0));
        let weld = WeldedStretch::new(lambda, eta).map_err(fail)?;
        let f = weld.evaluate(z).map_err(fail)?;
        let scale = f.norm().max(1.0);
        let mirrored = WeldedStretch::new(eta.conj(), lambda.conj())
            .map_err(fail)?
            .evaluate(z.conj())
            .map_err(fail)?
            .conj();
        let inverted = WeldedStretch::new(eta, lambda)
            .map_err(fail)?
            .evaluate(z.inv())
            .map_err(fail)?
            .inv();
        let composed = WeldedStretch::new(lambda.conj(), eta.conj())
            .map_err(fail)?
            .evaluate(z.conj().inv())
            .map_err(fail)?
            .conj()
            .inv();
        worst = worst
            .max((f - mirrored).norm() / scale)
            .max((f - inverted).norm() / scale)
            .max((f - composed).norm() / scale);
    }
    ensure(worst < 1e-10, format!("largest symmetry defect {worst:.2e}"))
}

fn check_twist_spiral(_: u64) -> Result<String, String> {
    let map = twisted_power();
    let spiral = spiral_exponent(&map, ONE, 10).map_err(fail)?;
    if (spiral.gamma_hat - 1.0).abs() > 0.02 || !spiral.converged {
        return Err(format!(
            "model twist {:.4} (converged: {})",
            spiral.gamma_hat, spiral.converged
        ));
    }
    let regular = spiral_exponent(&map, Complex64::new(0.0, 1.0), 10).map_err(fail)?;
    ensure(
        regular.gamma_hat.abs() < 0.02,
        format!(
            "twist {:.4} at the singular point, {:.1e} at a regular one",
            spiral.gamma_hat, regular.gamma_hat
        ),
    )
}

fn check_twist_bounds(_: u64) -> Result<String, String> {
    let ok = dim_bound(0.0, 0.5).map_err(fail)? == 2.0
        && dim_bound(gamma_max(0.5).map_err(fail)?, 0.5).map_err(fail)? == 0.0
        && (gamma_max(0.6).map_err(fail)? - 0.75).abs() < 1e-15
        && k_from_dilatation(2.0).map_err(fail)? == 0.6;
    ensure(ok, "extremal rate and dimension endpoints pinned".to_string())
}

fn check_twist_beurling(_: u64) -> Result<String, String> {
    let equality = beurling_check(1.0, 1.0).map_err(fail)?;
    let strict = beurling_check(2.0, 1.0).map_err(fail)?;
    let outside = beurling_check(0.4, 0.0).map_err(fail)?;
    let ok = equality.margin == 0.0
        && equality.k == 1.0
        && strict.margin == 1.0
        && !outside.admissible();
    ensure(
        ok,
        format!(
            "margins: {} at the threshold, {} inside",
            equality.margin, strict.margin
        ),
    )
}

fn check_twist_growth(_: u64) -> Result<String, String> {
    let radii: Vec<f64> = (1..=10).map(|j| 1.0 - 0.5f64.powi(j)).collect();
    let mut worst = 0.0f64;
    for map in [half_power(), twisted_power()] {
        let report = log_ratio_growth(&map, &radii, 32).map_err(fail)?;
        worst = worst.max(report.tail_slope.abs());
    }
    ensure(worst < 0.05, format!("largest growth tail slope {worst:.3}"))
}

/// Run the full battery with the given seed for the randomized checks.
pub fn run_all(seed: u64) -> VerifyReport {
    type Body = fn(u64) -> Result<String, String>;
    let checks: [(&'static str, Body); 29] = [
        ("branch_winding_recovery", check_branch_winding),
        ("branch_idempotent_continuation", check_branch_idempotence),
        ("branch_ambiguity_detection", check_branch_ambiguity),
        ("maps_power_normalization", check_maps_normalization),
        ("maps_beltrami_finite_difference", check_maps_beltrami),
        ("maps_placement_agreement", check_maps_placement),
        ("maps_pointwise_log_bound", check_maps_log_bound),
        ("spectrum_poisson_oracle", check_spectrum_poisson),
        ("spectrum_identity_beta_flat", check_spectrum_identity_beta),
        ("spectrum_critical_beta_near_one", check_spectrum_critical_beta),
        ("spectrum_reference_bundle", check_spectrum_reference),
        ("spectrum_integrability_classes", check_spectrum_integrability),
        ("spectrum_area_oracle", check_spectrum_area),
        ("spectrum_rotation_invariance", check_spectrum_rotation),
        ("pick_membership_oracles", check_pick_membership),
        ("pick_tangency_on_cone", check_pick_tangency),
        ("pick_polyline_on_boundary", check_pick_polyline),
        ("pick_interpolant_battery", check_pick_interpolants),
        ("pick_realization_roundtrip", check_pick_realization),
        ("pick_support_lines", check_pick_support),
        ("pick_coverage_three_disks", check_pick_coverage),
        ("motion_weld_continuity", check_motion_weld),
        ("motion_sigma_interpolant_identity", check_motion_sigma),
        ("motion_beltrami_agreement", check_motion_beltrami),
        ("motion_symmetry_identities", check_motion_symmetries),
        ("twist_spiral_model", check_twist_spiral),
        ("twist_extremal_bounds", check_twist_bounds),
        ("twist_beurling_threshold", check_twist_beurling),
        ("twist_log_ratio_growth", check_twist_growth),
    ];
    let results = checks
        .iter()
        .enumerate()
        .map(|(i, (name, body))| run_check(name, || body(seed.wrapping_add(i as u64))))
        .collect();
    VerifyReport { seed, results }
}
