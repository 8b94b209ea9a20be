use std::fmt::Write;

use super::config::ReportFormat;

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub fixture: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Seconds spent in the suite that produced the check.
    pub elapsed: f64,
}

impl CheckResult {
    /// `passed` is `max_residual ≤ tolerance`; NaN fails.
    pub fn new(
        name: String,
        fixture: String,
        max_residual: f64,
        tolerance: f64,
        elapsed: f64,
    ) -> Self {
        Self {
            name,
            fixture,
            passed: max_residual <= tolerance,
            max_residual,
            tolerance,
            elapsed,
        }
    }

    fn status(&self) -> &'static str {
        if self.passed {
            "PASS"
        } else {
            "FAIL"
        }
    }
}

const MACHINE_HEADER: &str = "# dercross report: CHECK name fixture max_residual tol status";

/// `printf("%g")`: six significant digits, exponent form outside
/// `1e-4 ≤ |v| < 1e6`, trailing zeros removed.
pub fn format_g(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{v:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if !(-4..6).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mantissa), exp.abs())
    } else {
        trim(&format!("{v:.*}", (5 - exp) as usize))
    }
}

/// Failures first, then by name and fixture.
pub fn sort_results(results: &mut [CheckResult]) {
    results.sort_by(|a, b| (a.passed, &a.name, &a.fixture).cmp(&(b.passed, &b.name, &b.fixture)));
}

/// Machine records leave out `elapsed` so reports are byte-identical across
/// runs; the text format shows it.
pub fn emit_report(results: &[CheckResult], format: ReportFormat) -> String {
    let mut sorted = results.to_vec();
    sort_results(&mut sorted);
    let mut out = String::new();
    match format {
        ReportFormat::Machine => {
            out.push_str(MACHINE_HEADER);
            out.push('\n');
            for r in &sorted {
                let _ = writeln!(
                    out,
                    "CHECK {} {} max_residual={} tol={} {}",
                    r.name,
                    r.fixture,
                    format_g(r.max_residual),
                    format_g(r.tolerance),
                    r.status()
                );
            }
        }
        ReportFormat::Text => {
            let rows: Vec<[String; 6]> = sorted
                .iter()
                .map(|r| {
                    [
                        r.status().to_string(),
                        r.name.clone(),
                        r.fixture.clone(),
                        format!("{:.3e}", r.max_residual),
                        format!("{:.1e}", r.tolerance),
                        format!("{:.3}s", r.elapsed),
                    ]
                })
                .collect();
            let header = [
                "status",
                "check",
                "fixture",
                "max_residual",
                "tol",
                "elapsed",
            ]
            .map(String::from);
            let mut widths = header.clone().map(|h| h.chars().count());
            for row in &rows {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.chars().count());
                }
            }
            for row in std::iter::once(&header).chain(&rows) {
                let line: Vec<String> = row
                    .iter()
                    .zip(&widths)
                    .enumerate()
                    .map(|(i, (cell, w))| {
                        if i >= 3 {
                            format!("{cell:>w$}")
                        } else {
                            format!("{cell:<w$}")
                        }
                    })
                    .collect();
                out.push_str(line.join("  ").trim_end());
                out.push('\n');
            }
            let failed = sorted.iter().filter(|r| !r.passed).count();
            if !sorted.is_empty() {
                let _ = writeln!(out, "{} checks, {} failed", sorted.len(), failed);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_format_matches_printf() {
        let cases = [
            (1.0, "1"),
            (0.5, "0.5"),
            (1e-9, "1e-09"),
            (1e-5, "1e-05"),
            (0.0001, "0.0001"),
            (123456.0, "123456"),
            (1234567.0, "1.23457e+06"),
            (4.56789123, "4.56789"),
            (2.5e-13, "2.5e-13"),
            (0.0, "0"),
            (99999.95, "99999.9"),
            (999999.5, "1e+06"),
        ];
        for (v, s) in cases {
            assert_eq!(format_g(v), s, "{v}");
        }
    }
}
