use std::process::Command;

use dercross::crossed_module::FixtureKind;
use dercross::error::Error;
use dercross::harness::{
    emit_report, parse_config, run_suite, CheckResult, Defect, ReportFormat, Suite, SuiteConfig,
};
use dercross::matrix_lie::GroupKind;
use proptest::prelude::*;

fn quick(suites: &[Suite]) -> SuiteConfig {
    SuiteConfig {
        samples: 3,
        suites: suites.iter().copied().collect(),
        ..SuiteConfig::default()
    }
}

fn result(name: &str, residual: f64, tol: f64) -> CheckResult {
    CheckResult::new(name.into(), "CONJ(SO3)".into(), residual, tol, 0.25)
}

#[test]
fn empty_config_is_all_defaults() {
    let cfg = parse_config("").unwrap();
    assert_eq!(cfg, SuiteConfig::default());
    assert_eq!(cfg.samples, 50);
    assert_eq!(cfg.seed, 42);
    assert_eq!(cfg.fd_step, 1e-5);
    assert_eq!(cfg.tol_alg, 1e-9);
    assert_eq!(cfg.tol_fd, 1e-5);
    assert_eq!(cfg.suites.len(), 7);
    assert_eq!(
        cfg.fixture,
        FixtureKind::Conj(GroupKind::SpecialOrthogonal(3))
    );
    assert_eq!(cfg.report_format, ReportFormat::Text);
}

#[test]
fn seed_under_run_section() {
    let cfg = parse_config("[run]\nseed = 7\n").unwrap();
    assert_eq!(cfg.seed, 7);
    assert_eq!(
        cfg,
        SuiteConfig {
            seed: 7,
            ..SuiteConfig::default()
        }
    );
}

#[test]
fn full_config_with_comments() {
    let text = "# checks\n[run]\nsamples = 12  # fewer\nsuites = axioms, bundle\nreport = machine\ndefects = flipped_contraction\n\n[fixture]\nname = LIN(2)\nbase_dim = 3\n[tolerances]\ntol_alg = 1e-11\n";
    let cfg = parse_config(text).unwrap();
    assert_eq!(cfg.samples, 12);
    assert_eq!(
        cfg.suites,
        [Suite::Axioms, Suite::Bundle].into_iter().collect()
    );
    assert_eq!(cfg.report_format, ReportFormat::Machine);
    assert_eq!(cfg.fixture, FixtureKind::Lin(2));
    assert_eq!(cfg.base_dim, 3);
    assert_eq!(cfg.tol_alg, 1e-11);
    assert_eq!(
        cfg.defects,
        [Defect::FlippedContraction].into_iter().collect()
    );
    let all = parse_config("negative_control = true").unwrap();
    assert_eq!(all.defects.len(), 3);
}

#[test]
fn negative_tolerance_is_rejected() {
    let err = parse_config("[tolerances]\ntol_fd = -1\n").unwrap_err();
    assert!(matches!(err, Error::Validation(_)), "{err}");
    assert!(matches!(
        parse_config("samples = 0").unwrap_err(),
        Error::Validation(_)
    ));
}

#[test]
fn malformed_lines_report_their_number() {
    let cases = [
        ("[run]\nseed 7\n", 2),
        ("\n\n[run\n", 3),
        ("[run]\nseed = seven\n", 2),
        ("[run]\ncolour = blue\n", 2),
        ("[nowhere]\n", 1),
        ("[tolerances]\nseed = 3\n", 2),
        ("[fixture]\nname = TORUS\n", 2),
        ("suites = axioms, nonsense\n", 1),
    ];
    for (text, line) in cases {
        match parse_config(text).unwrap_err() {
            Error::Parse { line: l, .. } => assert_eq!(l, line, "{text:?}"),
            other => panic!("{text:?}: {other}"),
        }
    }
}

#[test]
fn empty_report_is_header_only() {
    let machine = emit_report(&[], ReportFormat::Machine);
    assert_eq!(machine.lines().count(), 1);
    assert!(machine.starts_with('#'));
    assert_eq!(emit_report(&[], ReportFormat::Text).lines().count(), 1);
}

#[test]
fn single_pass_line_format() {
    let out = emit_report(
        &[result("axioms.group.peiffer", 2.5e-13, 1e-9)],
        ReportFormat::Machine,
    );
    assert_eq!(
        out.lines().nth(1).unwrap(),
        "CHECK axioms.group.peiffer CONJ(SO3) max_residual=2.5e-13 tol=1e-09 PASS"
    );
}

#[test]
fn failures_are_listed_first() {
    let rs = vec![
        result("a.ok", 0.0, 1.0),
        result("b.bad", 2.0, 1.0),
        result("c.ok", 0.5, 1.0),
        result("d.nan", f64::NAN, 1.0),
    ];
    assert!(!rs[3].passed);
    for format in [ReportFormat::Machine, ReportFormat::Text] {
        let out = emit_report(&rs, format);
        let status: Vec<bool> = out
            .lines()
            .filter(|l| l.contains("PASS") || l.contains("FAIL"))
            .map(|l| l.contains("PASS"))
            .collect();
        assert_eq!(status, vec![false, false, true, true], "{out}");
    }
    let machine = emit_report(&rs, ReportFormat::Machine);
    assert!(machine.contains("max_residual=nan"));
}

#[test]
fn text_report_is_aligned() {
    let rs = vec![
        result("short", 1e-12, 1e-9),
        result("a.much.longer.name", 3.0, 1e-9),
    ];
    let out = emit_report(&rs, ReportFormat::Text);
    let rows: Vec<&str> = out.lines().take(3).collect();
    let col = |l: &str| l.find("CONJ").or_else(|| l.find("fixture")).unwrap();
    assert!(rows.iter().all(|r| col(r) == col(rows[0])), "{out}");
}

#[test]
fn passing_run_exits_zero() {
    let out = run_suite(&quick(&[Suite::Axioms, Suite::Gauge]));
    assert_eq!(out.exit_code, 0);
    assert!(out
        .results
        .iter()
        .all(|r| r.passed && r.max_residual <= r.tolerance));
    assert!(out.results.iter().any(|r| r.name == "axioms.group.peiffer"));
}

#[test]
fn negative_control_exits_one() {
    let out = run_suite(&quick(&[Suite::Axioms, Suite::Derived]).with_negative_control());
    assert_eq!(out.exit_code, 1);
    assert!(!out.results[0].passed);
}

#[test]
fn invalid_config_exits_two() {
    let cfg = SuiteConfig {
        tol_alg: 0.0,
        ..quick(&[Suite::Axioms])
    };
    let out = run_suite(&cfg);
    assert_eq!(out.exit_code, 2);
    assert!(out.results.is_empty());
}

#[test]
fn reports_do_not_depend_on_worker_count() {
    let base = quick(&[Suite::Derived, Suite::Bundle]);
    let one = SuiteConfig {
        workers: 1,
        ..base.clone()
    };
    let four = SuiteConfig { workers: 4, ..base };
    let a = emit_report(&run_suite(&one).results, ReportFormat::Machine);
    let b = emit_report(&run_suite(&four).results, ReportFormat::Machine);
    assert_eq!(a, b);
}

#[test]
fn cli_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_dercross");
    let dir = std::env::temp_dir().join(format!("dercross-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("quick.conf");
    std::fs::write(&cfg, "[run]\nsamples = 2\nsuites = axioms, identities\n").unwrap();
    let run = |extra: &[&str], env: Option<&std::path::Path>| {
        let mut c = Command::new(bin);
        c.arg("run").args(extra).env_remove("DERCROSS_CONFIG");
        if let Some(p) = env {
            c.env("DERCROSS_CONFIG", p);
        }
        c.output().unwrap()
    };
    let ok = run(
        &["--config", cfg.to_str().unwrap(), "--report", "machine"],
        None,
    );
    assert_eq!(ok.status.code(), Some(0));
    let text = String::from_utf8(ok.stdout).unwrap();
    assert!(text
        .lines()
        .skip(1)
        .all(|l| l.starts_with("CHECK ") && l.ends_with(" PASS")));
    let via_env = run(&["--report", "machine"], Some(&cfg));
    assert_eq!(String::from_utf8(via_env.stdout).unwrap(), text);
    let bad = run(
        &["--config", cfg.to_str().unwrap(), "--negative-control"],
        None,
    );
    assert_eq!(bad.status.code(), Some(1));
    let unknown = run(
        &["--config", cfg.to_str().unwrap(), "--fixture", "TORUS"],
        None,
    );
    assert_eq!(unknown.status.code(), Some(2));
    let missing = run(
        &["--config", dir.join("absent.conf").to_str().unwrap()],
        None,
    );
    assert_eq!(missing.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parsed_numbers_round_trip(seed in any::<u64>(), samples in 1usize..10_000, tol in 1e-14f64..1.0) {
        let text = format!("[run]\nseed = {seed}\nsamples = {samples}\n[tolerances]\ntol_fd = {tol:e}\n");
        let cfg = parse_config(&text).unwrap();
        prop_assert_eq!(cfg.seed, seed);
        prop_assert_eq!(cfg.samples, samples);
        prop_assert_eq!(cfg.tol_fd, tol);
    }

    #[test]
    fn passed_iff_within_tolerance(residual in 0.0f64..2.0, tol in 1e-12f64..2.0) {
        let r = result("x", residual, tol);
        prop_assert_eq!(r.passed, residual <= tol);
    }
}
