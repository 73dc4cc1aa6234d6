//! Acceptance gate: one test per shipped criterion, each printing a single
//! PASS/FAIL line. Run with `--nocapture` to see the lines for passing
//! criteria too.

use num_complex::Complex64;
use qcmeans::maps::{pointwise_log_bound, DiskPowerMap, PowerParams};
use qcmeans::motion::{sigma_of, WeldedStretch};
use qcmeans::pick::{tangent_support, InterpolantKind, InterpolantSpec, PickRegion};
use qcmeans::spectrum::{area_integral, beta_estimate, RadiusSchedule, ReferenceSpectra};
use qcmeans::twist::{
    beurling_check, dim_bound, gamma_max, k_from_dilatation, log_ratio_growth, spiral_exponent,
};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use std::f64::consts::{PI, TAU};
use std::path::Path;
use std::process::Command;

fn report(number: usize, label: &str, outcome: Result<String, String>) {
    match outcome {
        Ok(detail) => println!("ACCEPTANCE {number:>2}: PASS  {label}: {detail}"),
        Err(detail) => {
            println!("ACCEPTANCE {number:>2}: FAIL  {label}: {detail}");
            panic!("criterion {number} failed: {detail}");
        }
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn unit_sample(rng: &mut ChaCha12Rng, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, TAU * rng.gen::<f64>())
}

/// Criterion 1: the model maps on the critical circle `|t| = 2 / k` have
/// measured spectrum one, at three arguments across the sector.
#[test]
fn acceptance_01_critical_circle_beta() {
    report(1, "critical circle beta equals one", (|| {
        let start = std::time::Instant::now();
        let schedule = RadiusSchedule::new(2, 14).map_err(err)?;
        let mut worst = 0.0f64;
        for theta in [0.0, PI / 6.0, PI / 3.0] {
            let t = Complex64::from_polar(4.0, theta);
            let params = PowerParams::for_theorem_exponent(t).map_err(err)?;
            let map = DiskPowerMap::new(params);
            let estimate = beta_estimate(&map, schedule, t, 1e-7, 4).map_err(err)?;
            for (name, value) in [("limsup", estimate.beta_limsup), ("lsq", estimate.beta_lsq)] {
                let deviation = (value - 1.0).abs();
                worst = worst.max(deviation);
                if deviation > 0.15 {
                    return Err(format!(
                        "beta_{name} = {value:.4} at t = {t} misses one by {deviation:.3}"
                    ));
                }
            }
        }
        let elapsed = start.elapsed();
        if elapsed.as_secs() > 120 {
            return Err(format!("took {elapsed:.0?}, budget is 120 s"));
        }
        Ok(format!(
            "worst deviation {worst:.1e} over three arguments (tol 0.15) in {elapsed:.1?}"
        ))
    })());
}

/// Criterion 2: measured spectra across a 5 x 5 exponent grid agree with
/// the analytic value for each power map and respect the trivial bound.
#[test]
fn acceptance_02_power_map_grid() {
    report(2, "power map grid matches analytic spectrum", (|| {
        let sigmas = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.25, 0.0),
            Complex64::new(1.0, 0.6),
            Complex64::new(0.55, 0.35),
        ];
        let ts = [
            Complex64::new(-2.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, 2.0),
            Complex64::new(4.0, 0.0),
            Complex64::new(6.0, 0.0),
        ];
        let schedule = RadiusSchedule::new(2, 12).map_err(err)?;
        let mut worst = 0.0f64;
        for sigma in sigmas {
            let params = PowerParams::new(sigma).map_err(err)?;
            let map = DiskPowerMap::new(params);
            let k = params.distortion_k().map_err(err)?;
            for t in ts {
                let analytic = map.analytic_beta(t);
                let estimate = beta_estimate(&map, schedule, t, 1e-6, 4).map_err(err)?;
                let measured = estimate.beta_limsup;
                let deviation = (measured - analytic).abs();
                worst = worst.max(deviation);
                if deviation > 0.2 {
                    return Err(format!(
                        "sigma = {sigma}, t = {t}: beta_limsup = {measured:.4} vs analytic {analytic:.4}"
                    ));
                }
                // Sandwich: the analytic value from below, k |t| from above.
                let upper = ReferenceSpectra::evaluate(k, t).map_err(err)?.trivial_upper;
                if measured < analytic - 0.15 || measured > upper + 0.15 {
                    return Err(format!(
                        "sigma = {sigma}, t = {t}: beta_limsup = {measured:.4} outside \
                         [{:.4}, {:.4}]",
                        analytic - 0.15,
                        upper + 0.15
                    ));
                }
            }
        }
        Ok(format!("25 cells, worst deviation {worst:.3} (tol 0.2)"))
    })());
}

/// Criterion 3: random interpolant outputs land inside the value region,
/// the three named disks cover it, its boundary stays in the cone, it
/// meets the real axis in exactly [1 - k^2, 1], and interior points are
/// realized back through the interpolants.
#[test]
fn acceptance_03_value_region_realization() {
    report(3, "value region containment and coverage", (|| {
        let region = PickRegion::new(0.5).map_err(err)?;

        let interval = region.two_point_interval();
        if interval != (0.75, 1.0) {
            return Err(format!("real-axis interval {interval:?}, want (0.75, 1.0)"));
        }

        let polyline = region.boundary_polyline(256).map_err(err)?;
        for w in &polyline {
            if !region.cone_check(*w) {
                return Err(format!("boundary vertex {w} leaves the cone |Im w| <= k |w|"));
            }
        }
        let (t1, t2) = region.tangency_points();
        for tangency in [t1, t2] {
            let off_ray = (tangency.im - 0.5 * tangency.norm()).abs();
            if off_ray > 1e-12 {
                return Err(format!("tangency {tangency} misses the cone ray by {off_ray:.1e}"));
            }
        }

        // Forward direction: slice values of either family belong to the
        // region of the slice modulus, with 1e-12 slack.
        let mut rng = ChaCha12Rng::seed_from_u64(31);
        let mut worst_distance = f64::NEG_INFINITY;
        for i in 0..100_000 {
            let c = unit_sample(&mut rng, 1.0);
            let kind = if i % 2 == 0 {
                InterpolantKind::First
            } else {
                InterpolantKind::Second
            };
            let family = InterpolantSpec::new(kind, c).map_err(err)?;
            let lambda = unit_sample(&mut rng, 0.99);
            if lambda.norm() < 1e-6 {
                continue;
            }
            let value = family
                .eval(lambda, Complex64::new(0.0, 0.0))
                .map_err(err)?;
            let slice_region = PickRegion::new(lambda.norm()).map_err(err)?;
            let distance = slice_region.hull_distance(value);
            worst_distance = worst_distance.max(distance);
            if distance > 1e-12 {
                return Err(format!(
                    "kind {kind:?}, c = {c}, lambda = {lambda}: value {value} sits \
                     {distance:.2e} outside the region"
                ));
            }
        }

        // Inverse direction: interior points decompose back through the
        // two families with negligible reconstruction error.
        let (c1, r1) = region.disk1();
        let (c2, r2) = region.disk2();
        let mut worst_error = 0.0f64;
        for _ in 0..10_000 {
            let s = rng.gen::<f64>();
            let rho = 0.999 * rng.gen::<f64>().sqrt();
            let dir = Complex64::from_polar(1.0, TAU * rng.gen::<f64>());
            let p1 = c1 + dir * (rho * r1);
            let p2 = c2 + dir * (rho * r2);
            let w = (1.0 - s) * p1 + s * p2;
            let realized = region.realize_point(w).map_err(err)?;
            worst_error = worst_error.max(realized.error);
        }
        if worst_error > 1e-9 {
            return Err(format!("worst realization error {worst_error:.2e} exceeds 1e-9"));
        }

        let gap = region.coverage_gap(0.01).map_err(err)?;
        if gap > 0.02 {
            return Err(format!("coverage gap {gap:.4} exceeds 0.02"));
        }

        Ok(format!(
            "1e5 outputs inside (worst distance {worst_distance:.1e}); 1e4 realizations \
             (worst error {worst_error:.1e}); coverage gap {gap:.4}"
        ))
    })());
}

/// Criterion 4: the support line `Re(t (1 - w)) <= 1` holds on the region
/// with k = 1/|t| and is attained at `1 - 1/t`, across 20 exponents.
#[test]
fn acceptance_04_support_lines() {
    report(4, "support lines touch at the predicted point", (|| {
        let cases: [(f64, [f64; 5]); 4] = [
            (1.5, [0.0, 0.3, -0.3, 0.6, -0.6]),
            (2.0, [0.0, 0.4, -0.4, 0.8, -0.8]),
            (4.0, [0.0, 0.5, -0.5, 1.0, -1.0]),
            (8.0, [0.0, 0.6, -0.6, 1.2, -1.2]),
        ];
        let mut worst_excess = f64::NEG_INFINITY;
        let mut worst_gap = 0.0f64;
        let mut count = 0;
        for (modulus, angles) in cases {
            for theta in angles {
                let t = Complex64::from_polar(modulus, theta);
                let support = tangent_support(t).map_err(err)?;
                worst_excess = worst_excess.max(support.max_over_boundary - 1.0);
                worst_gap = worst_gap.max(support.argmax_gap);
                if support.max_over_boundary > 1.0 + 1e-9 {
                    return Err(format!(
                        "t = {t}: boundary maximum {:.12} exceeds one",
                        support.max_over_boundary
                    ));
                }
                if support.argmax_gap > 1e-6 {
                    return Err(format!(
                        "t = {t}: maximizer {} sits {:.2e} from 1 - 1/t",
                        support.argmax, support.argmax_gap
                    ));
                }
                count += 1;
            }
        }
        Ok(format!(
            "{count} exponents, max excess {worst_excess:.1e}, maximizer gap {worst_gap:.1e}"
        ))
    })());
}

/// Criterion 5: the welded stretch exponent is the c = 1 interpolant.
#[test]
fn acceptance_05_exponent_is_interpolant() {
    report(5, "welded exponent matches the interpolant", (|| {
        let psi = InterpolantSpec::new(InterpolantKind::First, Complex64::new(1.0, 0.0))
            .map_err(err)?;
        let mut rng = ChaCha12Rng::seed_from_u64(47);
        let mut worst = 0.0f64;
        for _ in 0..1000 {
            let lambda = unit_sample(&mut rng, 0.95);
            let eta = unit_sample(&mut rng, 0.95);
            let defect = (sigma_of(lambda, eta) - psi.eval(lambda, eta).map_err(err)?).norm();
            worst = worst.max(defect);
            if defect > 1e-12 {
                return Err(format!(
                    "lambda = {lambda}, eta = {eta}: defect {defect:.2e} exceeds 1e-12"
                ));
            }
        }
        Ok(format!("1000 parameter pairs, worst defect {worst:.1e}"))
    })());
}

/// Criterion 6: the welded stretch is continuous across the weld and its
/// measured Beltrami coefficient matches the two-phase formula.
#[test]
fn acceptance_06_weld_continuity_and_dilatation() {
    report(6, "weld is continuous with the right dilatation", (|| {
        let mut rng = ChaCha12Rng::seed_from_u64(59);
        let mut worst_weld = 0.0f64;
        for _ in 0..10 {
            let weld = WeldedStretch::new(
                unit_sample(&mut rng, 0.7),
                unit_sample(&mut rng, 0.7),
            )
            .map_err(err)?;
            for _ in 0..100 {
                let x = -(0.5 + 1.5 * rng.gen::<f64>());
                let defect = weld.weld_defect(x).map_err(err)?;
                worst_weld = worst_weld.max(defect);
                if defect > 1e-10 {
                    return Err(format!(
                        "lambda = {}, eta = {}, x = {x:.3}: weld jump {defect:.2e}",
                        weld.lambda(),
                        weld.eta()
                    ));
                }
            }
            // On the positive half-line both one-sided limits collapse to
            // exp(sigma ln x), so continuity there means hitting that value.
            for _ in 0..100 {
                let x = 0.5 + 1.5 * rng.gen::<f64>();
                let value = weld.evaluate(Complex64::new(x, 0.0)).map_err(err)?;
                let defect = (value - (weld.sigma() * x.ln()).exp()).norm();
                worst_weld = worst_weld.max(defect);
                if defect > 1e-10 {
                    return Err(format!(
                        "lambda = {}, eta = {}, x = {x:.3}: positive-axis jump {defect:.2e}",
                        weld.lambda(),
                        weld.eta()
                    ));
                }
            }
        }

        let weld = WeldedStretch::new(Complex64::new(0.4, 0.2), Complex64::new(-0.1, 0.3))
            .map_err(err)?;
        let mut worst_mu = 0.0f64;
        for _ in 0..20 {
            let re = 3.0 * rng.gen::<f64>() - 1.5;
            let im = (0.1 + 1.4 * rng.gen::<f64>()) * if rng.gen::<bool>() { 1.0 } else { -1.0 };
            let z = Complex64::new(re, im);
            let defect = weld.beltrami_defect(z, 1e-5).map_err(err)?;
            worst_mu = worst_mu.max(defect);
            if defect > 1e-3 {
                return Err(format!("z = {z}: Beltrami defect {defect:.2e} exceeds 1e-3"));
            }
        }
        Ok(format!(
            "worst weld jump {worst_weld:.1e} (tol 1e-10), worst Beltrami defect {worst_mu:.1e} (tol 1e-3)"
        ))
    })());
}

/// Criterion 7: the inversion symmetry
/// `f(lambda, eta; z) * conj(f(conj lambda, conj eta; 1 / conj z)) = 1`.
#[test]
fn acceptance_07_inversion_symmetry() {
    report(7, "inversion symmetry of the welded stretch", (|| {
        let mut rng = ChaCha12Rng::seed_from_u64(71);
        let mut worst = 0.0f64;
        for _ in 0..1000 {
            let lambda = unit_sample(&mut rng, 0.8);
            let eta = unit_sample(&mut rng, 0.8);
            let weld = WeldedStretch::new(lambda, eta).map_err(err)?;
            let mirror = WeldedStretch::new(lambda.conj(), eta.conj()).map_err(err)?;
            let z = Complex64::from_polar(0.4 + 2.1 * rng.gen::<f64>(), TAU * rng.gen::<f64>());
            let product = weld.evaluate(z).map_err(err)?
                * mirror.evaluate(z.conj().inv()).map_err(err)?.conj();
            let defect = (product - Complex64::new(1.0, 0.0)).norm();
            worst = worst.max(defect);
            if defect > 1e-10 {
                return Err(format!(
                    "lambda = {lambda}, eta = {eta}, z = {z}: defect {defect:.2e}"
                ));
            }
        }
        Ok(format!("1000 samples, worst defect {worst:.1e} (tol 1e-10)"))
    })());
}

/// Criterion 8: the pointwise logarithmic derivative bound holds on a
/// deep polar grid for ten exponents, and the normalized ratio stays
/// bounded (near-zero fitted growth).
#[test]
fn acceptance_08_log_bound_and_growth() {
    report(8, "pointwise log bound and bounded growth", (|| {
        let sigmas = [
            Complex64::new(0.5, 0.0),
            Complex64::new(0.25, 0.0),
            Complex64::new(0.75, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.5, 0.5),
            Complex64::new(0.55, 0.35),
            Complex64::new(1.0, 0.6),
            Complex64::new(0.7, -0.3),
            Complex64::new(1.5, 0.0),
            Complex64::new(0.9, 0.1),
        ];
        let bound_radii: Vec<f64> = (1..=32)
            .map(|j| 1.0 - (-0.375 * j as f64).exp2())
            .collect();
        // The normalized ratio approaches its boundary values like
        // (1 - r)^(Re sigma), so the fit needs depth 1 / Re sigma times
        // what the steepest exponent would: 20 dyadic levels covers
        // Re sigma = 1/4 with slope bias well under the tolerance.
        let growth_radii: Vec<f64> = (1..=20).map(RadiusSchedule::radius).collect();
        let mut worst_margin = f64::INFINITY;
        let mut worst_slope = 0.0f64;
        for sigma in sigmas {
            let map = DiskPowerMap::new(PowerParams::new(sigma).map_err(err)?);
            let bound = pointwise_log_bound(&map, &bound_radii, 64).map_err(err)?;
            worst_margin = worst_margin.min(bound.min_margin);
            if bound.min_margin < -1e-9 {
                return Err(format!(
                    "sigma = {sigma}: bound violated by {:.2e} at {}",
                    -bound.min_margin, bound.argmin
                ));
            }
            let growth = log_ratio_growth(&map, &growth_radii, 64).map_err(err)?;
            worst_slope = worst_slope.max(growth.tail_slope.abs());
            if growth.tail_slope.abs() > 0.05 {
                return Err(format!(
                    "sigma = {sigma}: growth tail slope {:.3} exceeds 0.05",
                    growth.tail_slope
                ));
            }
        }
        Ok(format!(
            "ten exponents, smallest margin {worst_margin:.1e}, largest tail slope {worst_slope:.3}"
        ))
    })());
}

/// Criterion 9: dyadic area increments shrink strictly for an exponent
/// inside the critical disk and stay bounded away from zero on it.
#[test]
fn acceptance_09_area_increments() {
    report(9, "area increments follow the integrability class", (|| {
        let map = DiskPowerMap::new(PowerParams::new(Complex64::new(0.5, 0.0)).map_err(err)?);
        let increments = |t: Complex64| -> Result<Vec<f64>, String> {
            let mut values = Vec::new();
            for j in 2..=8u32 {
                let r = RadiusSchedule::radius(j);
                values.push(area_integral(&map, t, r, 1e-5).map_err(err)?.value);
            }
            Ok(values.windows(2).map(|w| w[1] - w[0]).collect())
        };

        let inside = increments(Complex64::new(3.6, 0.0))?;
        if inside.windows(2).any(|w| w[1] >= w[0]) {
            return Err(format!("t = 3.6 increments are not strictly decreasing: {inside:?}"));
        }
        let ratio = inside[0] / inside[inside.len() - 1];
        if ratio < 1.5 {
            return Err(format!("t = 3.6 first/last increment ratio {ratio:.3} below 1.5"));
        }

        let critical = increments(Complex64::new(4.0, 0.0))?;
        if let Some(small) = critical.iter().find(|d| **d < 0.05) {
            return Err(format!("t = 4 increment {small:.4} below 0.05: {critical:?}"));
        }

        Ok(format!(
            "inside: ratio {ratio:.2} over six shrinking rings; critical: smallest ring {:.3}",
            critical.iter().cloned().fold(f64::INFINITY, f64::min)
        ))
    })());
}

/// Criterion 10: measured twist agrees with the model rate, and the
/// extremal rate, dimension, dilatation, and admissibility formulas pin
/// their exact endpoint values.
#[test]
fn acceptance_10_twist_bounds() {
    report(10, "twist rates respect the extremal bounds", (|| {
        for k in [0.3, 0.5, 0.8] {
            let extremal = gamma_max(k).map_err(err)?;
            for gamma in [extremal, -extremal] {
                let d = dim_bound(gamma, k).map_err(err)?;
                if d != 0.0 {
                    return Err(format!("dim_bound({gamma:.3}, {k}) = {d}, want exactly 0"));
                }
            }
            let top = dim_bound(0.0, k).map_err(err)?;
            if top != 2.0 {
                return Err(format!("dim_bound(0, {k}) = {top}, want exactly 2"));
            }
        }

        let k = k_from_dilatation(2.0).map_err(err)?;
        if k != 0.6 {
            return Err(format!("k_from_dilatation(2) = {k}, want exactly 0.6"));
        }

        let map = DiskPowerMap::new(PowerParams::new(Complex64::new(0.5, 0.5)).map_err(err)?);
        let spiral = spiral_exponent(&map, Complex64::new(1.0, 0.0), 10).map_err(err)?;
        if !spiral.converged || (spiral.gamma_hat - 1.0).abs() > 0.02 {
            return Err(format!(
                "spiral walk gave gamma_hat = {:.4}, converged = {}",
                spiral.gamma_hat, spiral.converged
            ));
        }

        for alpha in [1.0, 1.5, 2.0, 3.0] {
            for gamma in [0.0, 0.5, 1.0] {
                let check = beurling_check(alpha, gamma).map_err(err)?;
                if !check.admissible() {
                    return Err(format!("({alpha}, {gamma}) should be admissible"));
                }
            }
        }
        let threshold = beurling_check(1.0, 1.0).map_err(err)?;
        if threshold.margin != 0.0 || threshold.k != 1.0 {
            return Err(format!(
                "threshold pair: margin {}, k {}, want exactly 0 and 1",
                threshold.margin, threshold.k
            ));
        }
        let interior = beurling_check(2.0, 1.0).map_err(err)?;
        if interior.margin != 1.0 {
            return Err(format!("interior pair margin {}, want exactly 1", interior.margin));
        }

        Ok(format!(
            "endpoints exact; spiral gamma_hat = {:.4} (tol 0.02)",
            spiral.gamma_hat
        ))
    })());
}

/// Criterion 11: the binary produces byte-identical, provenance-stamped
/// output regardless of thread count, the shipped configs run, and the
/// self-check battery gates the exit code.
#[test]
fn acceptance_11_cli_determinism() {
    report(11, "deterministic provenance-stamped output", (|| {
        let binary = env!("CARGO_BIN_EXE_qcmeans");
        let dir = tempfile::tempdir().map_err(err)?;
        let config = dir.path().join("beta.json");
        std::fs::write(
            &config,
            r#"{ "map": { "family": "disk_power", "sigma": [0.5, 0.0] },
                 "grid": { "t": [[4.0, 0.0], [2.0, 2.0], [-2.0, 0.0]] },
                 "schedule": { "j_min": 2, "j_max": 10, "tail_length": 3 } }"#,
        )
        .map_err(err)?;
        let run = |jobs: &str| -> Result<Vec<u8>, String> {
            let out = Command::new(binary)
                .args(["beta", "--config"])
                .arg(&config)
                .args(["--jobs", jobs])
                .output()
                .map_err(err)?;
            if !out.status.success() {
                return Err(format!("beta --jobs {jobs} failed: {:?}", out.status));
            }
            Ok(out.stdout)
        };
        let serial = run("1")?;
        let parallel = run("4")?;
        if serial != parallel {
            return Err("output differs between --jobs 1 and --jobs 4".into());
        }
        if run("4")? != parallel {
            return Err("repeated beta run is not byte-identical".into());
        }
        let text = String::from_utf8(serial).map_err(err)?;
        let sha_line = text
            .lines()
            .find(|l| l.starts_with("# config_sha256: "))
            .ok_or("missing config_sha256 provenance line")?;
        let digest = sha_line.trim_start_matches("# config_sha256: ");
        if digest.len() != 64 || !digest.chars().all(|c| c.is_ascii_hexdigit()) {
            return Err(format!("malformed digest {digest:?}"));
        }

        let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
        for (command, file) in [
            ("beta", "beta_critical.json"),
            ("region", "region_half.json"),
            ("twist", "twist_model.json"),
            ("spectra", "spectra_scan.json"),
        ] {
            let out = Command::new(binary)
                .arg(command)
                .arg("--config")
                .arg(configs.join(file))
                .output()
                .map_err(err)?;
            if !out.status.success() {
                return Err(format!("shipped config {file} failed under `{command}`"));
            }
        }

        let run_verify = || -> Result<Vec<u8>, String> {
            let out = Command::new(binary)
                .args(["verify", "--seed", "11"])
                .output()
                .map_err(err)?;
            if !out.status.success() {
                return Err("verify battery exited nonzero".into());
            }
            Ok(out.stdout)
        };
        let first = run_verify()?;
        if run_verify()? != first {
            return Err("repeated verify run is not byte-identical".into());
        }
        let battery = String::from_utf8(first).map_err(err)?;
        let passes = battery.lines().filter(|l| l.starts_with("ok ")).count();
        if passes != 29 {
            return Err(format!("verify reported {passes} passing checks, want 29"));
        }

        Ok(format!(
            "beta and verify byte-identical across repeats and thread counts; \
             4 shipped configs run; {passes} checks pass"
        ))
    })());
}
