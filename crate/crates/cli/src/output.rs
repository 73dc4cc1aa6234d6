//! Report rendering: CSV tables with a provenance comment header, an SVG
//! view of the value region, and the verify battery text.
//!
//! Output is built deterministically from the numerical results alone, so
//! identical configs produce byte identical files regardless of thread
//! count.

use num_complex::Complex64;
use qcmeans::pick::PickRegion;
use qcmeans::spectrum::{BetaEstimate, IntegrabilityClass, ReferenceSpectra};
use qcmeans::twist::TwistReport;
use qcmeans::verify::VerifyReport;
use std::fmt::Write as _;

pub struct Provenance {
    pub command: &'static str,
    pub config_sha256: String,
    pub seed: u64,
    pub map: String,
}

pub fn header(provenance: &Provenance) -> String {
    format!(
        "# qcmeans {}\n# command: {}\n# config_sha256: {}\n# seed: {}\n# map: {}\n",
        env!("CARGO_PKG_VERSION"),
        provenance.command,
        provenance.config_sha256,
        provenance.seed,
        provenance.map,
    )
}

fn cell(value: Option<f64>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

/// Per-level rows for each exponent followed by a summary row carrying the
/// spectrum estimates and the reference bounds at the map's distortion.
pub fn beta_csv(
    provenance: &Provenance,
    estimates: &[(Complex64, BetaEstimate)],
    reference_for: impl Fn(Complex64) -> Option<ReferenceSpectra>,
) -> String {
    let mut out = header(provenance);
    out.push_str(
        "row,kind,t_re,t_im,level,radius,integral,local_slope,beta_limsup,beta_lsq,\
         trivial_lower,trivial_upper,theorem_value,linear_zone,quadratic_upper\n",
    );
    let mut row = 0usize;
    for (t, estimate) in estimates {
        for level in &estimate.levels {
            let _ = writeln!(
                out,
                "{row},level,{},{},{},{},{},{},,,,,,,",
                t.re,
                t.im,
                level.level,
                level.radius,
                level.integral.value,
                cell(level.local_slope),
            );
            row += 1;
        }
        let reference = reference_for(*t);
        let _ = writeln!(
            out,
            "{row},summary,{},{},,,,,{},{},{},{},{},{},{}",
            t.re,
            t.im,
            estimate.beta_limsup,
            estimate.beta_lsq,
            cell(reference.as_ref().map(|r| r.trivial_lower)),
            cell(reference.as_ref().map(|r| r.trivial_upper)),
            cell(reference.as_ref().and_then(|r| r.theorem_value)),
            cell(reference.as_ref().and_then(|r| r.linear_zone)),
            cell(reference.as_ref().map(|r| r.quadratic_upper)),
        );
        row += 1;
    }
    out
}

/// Dyadic walk levels followed by a summary row; the analytic columns are
/// filled when the map family carries exact stretch/twist rates.
pub fn twist_csv(
    provenance: &Provenance,
    report: &TwistReport,
    analytic: Option<AnalyticTwist>,
) -> String {
    let mut out = header(provenance);
    out.push_str(
        "row,kind,level,radius,log_re,log_im,ratio,slope,gamma_hat,converged,\
         k,analytic_gamma,gamma_max,dim_bound\n",
    );
    let mut row = 0usize;
    for level in &report.levels {
        let _ = writeln!(
            out,
            "{row},level,{},{},{},{},{},{},,,,,,",
            level.level,
            level.radius,
            level.log_d.re,
            level.log_d.im,
            cell(level.ratio),
            cell(level.slope),
        );
        row += 1;
    }
    let _ = writeln!(
        out,
        "{row},summary,,,,,,,{},{},{},{},{},{}",
        report.gamma_hat,
        report.converged,
        cell(analytic.map(|a| a.k)),
        cell(analytic.map(|a| a.gamma)),
        cell(analytic.map(|a| a.gamma_max)),
        cell(analytic.map(|a| a.dim_bound)),
    );
    out
}

/// Exact rates for the summary row of a twist run.
#[derive(Debug, Clone, Copy)]
pub struct AnalyticTwist {
    pub k: f64,
    pub gamma: f64,
    pub gamma_max: f64,
    pub dim_bound: f64,
}

fn class_name(class: IntegrabilityClass) -> &'static str {
    match class {
        IntegrabilityClass::Inside => "inside",
        IntegrabilityClass::CriticalDivergent => "critical_divergent",
        IntegrabilityClass::OutsideTheorem => "outside_theorem",
    }
}

/// One row of reference bounds per exponent.
pub fn spectra_csv(
    provenance: &Provenance,
    rows: &[(ReferenceSpectra, IntegrabilityClass)],
) -> String {
    let mut out = header(provenance);
    out.push_str(
        "row,t_re,t_im,abs_t,trivial_lower,trivial_upper,theorem_value,linear_zone,\
         quadratic_upper,disproved_quadratic,integrability\n",
    );
    for (row, (reference, class)) in rows.iter().enumerate() {
        let _ = writeln!(
            out,
            "{row},{},{},{},{},{},{},{},{},{},{}",
            reference.t.re,
            reference.t.im,
            reference.t.norm(),
            reference.trivial_lower,
            reference.trivial_upper,
            cell(reference.theorem_value),
            cell(reference.linear_zone),
            reference.quadratic_upper,
            reference.disproved_quadratic,
            class_name(*class),
        );
    }
    out
}

/// Boundary vertices plus the two tangency points.
pub fn region_csv(
    provenance: &Provenance,
    region: &PickRegion,
    polyline: &[Complex64],
) -> String {
    let mut out = header(provenance);
    let (lo, hi) = region.two_point_interval();
    let _ = writeln!(out, "# k: {}", region.k());
    let _ = writeln!(out, "# tangent_interval: [{lo}, {hi}]");
    out.push_str("row,kind,re,im\n");
    let mut row = 0usize;
    for vertex in polyline {
        let _ = writeln!(out, "{row},vertex,{},{}", vertex.re, vertex.im);
        row += 1;
    }
    let (t1, t2) = region.tangency_points();
    let _ = writeln!(out, "{row},tangency_disk,{},{}", t1.re, t1.im);
    row += 1;
    let _ = writeln!(out, "{row},tangency_inversion,{},{}", t2.re, t2.im);
    out
}

/// The region boundary as a single closed SVG path, y axis up.
pub fn region_svg(region: &PickRegion, polyline: &[Complex64]) -> String {
    let mut min_x = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut max_y = 0.0f64;
    for w in polyline {
        min_x = min_x.min(w.re);
        max_x = max_x.max(w.re);
        max_y = max_y.max(w.im.abs());
    }
    let pad = 0.05 * (max_x - min_x);
    let view_x = min_x - pad;
    let view_w = (max_x - min_x) + 2.0 * pad;
    let view_y = -(max_y + pad);
    let view_h = 2.0 * (max_y + pad);

    let mut path = String::new();
    for (i, w) in polyline.iter().enumerate() {
        let _ = write!(
            path,
            "{}{} {}",
            if i == 0 { "M" } else { " L" },
            w.re,
            -w.im,
        );
    }
    path.push_str(" Z");

    format!(
        concat!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\" ",
            "width=\"640\" height=\"{}\">\n",
            "<!-- value region boundary at k = {} -->\n",
            "<path d=\"{}\" fill=\"none\" stroke=\"#1f6feb\" stroke-width=\"{}\"/>\n",
            "</svg>\n",
        ),
        view_x,
        view_y,
        view_w,
        view_h,
        (640.0 * view_h / view_w).round(),
        region.k(),
        path,
        view_w / 320.0,
    )
}

pub fn verify_text(report: &VerifyReport) -> String {
    let mut out = String::new();
    for result in &report.results {
        let status = if result.passed { "ok  " } else { "FAIL" };
        let _ = writeln!(out, "{status} {}: {}", result.name, result.detail);
    }
    let passed = report.results.iter().filter(|r| r.passed).count();
    let _ = writeln!(
        out,
        "passed {passed} of {} checks (seed {})",
        report.results.len(),
        report.seed,
    );
    out
}
