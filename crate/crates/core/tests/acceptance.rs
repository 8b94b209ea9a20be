//! One PASS/FAIL line per acceptance criterion. Run with `--nocapture` to see
//! the table.

use std::time::Instant;

use dercross::crossed_module::{
    check_algebra_axioms, check_group_axioms, identity_suite, make_fixture,
    variational_convergence, variational_suite, FixtureKind, GroupCrossedModule, MapSource,
    VariationalOptions,
};
use dercross::derived::{
    axiom_suite, coordinate_algebra, cross_suite, oracle_suite, oracle_tolerance, DerivedModule,
};
use dercross::harness::{emit_report, run_suite, Defect, ReportFormat, SuiteConfig};
use dercross::matrix_lie::{DiffMethod, FdOptions, GroupKind};
use dercross::residual::ResidualReport;
use dercross::sampling::stream;
use dercross::synthetic_bundle::{
    basic_suite, cartan_suite, restriction_suite, structure_suite, BundleModel, Operation,
};

const SAMPLES: usize = 50;
const SEED: u64 = 42;

fn fixtures() -> Vec<FixtureKind> {
    vec![
        FixtureKind::Conj(GroupKind::SpecialOrthogonal(3)),
        FixtureKind::Conj(GroupKind::GeneralLinear(2)),
        FixtureKind::Lin(3),
        FixtureKind::Cover,
    ]
}

fn module(k: &FixtureKind) -> GroupCrossedModule {
    make_fixture(k).unwrap()
}

fn derived(k: &FixtureKind) -> DerivedModule {
    DerivedModule::new(module(k), MapSource::Exact).unwrap()
}

fn bundle(k: &FixtureKind) -> BundleModel {
    BundleModel::new(derived(k), 2)
}

struct Verdict {
    ok: bool,
    detail: String,
}

impl Verdict {
    fn new() -> Self {
        Self {
            ok: true,
            detail: String::new(),
        }
    }

    /// Requires `value < bound` (NaN fails).
    fn below(&mut self, what: &str, value: f64, bound: f64) {
        if !(value < bound) {
            self.ok = false;
            self.detail += &format!(" [{what} = {value:e} ≥ {bound:e}]");
        }
    }

    fn above(&mut self, what: &str, value: f64, bound: f64) {
        if !(value > bound) {
            self.ok = false;
            self.detail += &format!(" [{what} = {value:e} ≤ {bound:e}]");
        }
    }

    fn holds(&mut self, what: &str, cond: bool) {
        if !cond {
            self.ok = false;
            self.detail += &format!(" [{what} violated]");
        }
    }

    fn every_below(&mut self, tag: &str, rep: &ResidualReport, bound: impl Fn(&str) -> f64) {
        for (n, v) in rep.entries() {
            self.below(&format!("{tag} {n}"), *v, bound(n));
        }
    }
}

fn criterion_1() -> Verdict {
    let mut v = Verdict::new();
    let start = Instant::now();
    for k in [
        FixtureKind::Conj(GroupKind::SpecialOrthogonal(3)),
        FixtureKind::Lin(3),
        FixtureKind::Cover,
    ] {
        let m = module(&k);
        v.every_below(
            &k.to_string(),
            &check_group_axioms(&m, SAMPLES, SEED),
            |_| 1e-9,
        );
        let alg = m
            .differentiated(MapSource::Exact)
            .unwrap()
            .algebra_module("exact");
        v.every_below(
            &k.to_string(),
            &check_algebra_axioms(&alg, SAMPLES, SEED),
            |_| 1e-9,
        );
    }
    v.below("runtime s", start.elapsed().as_secs_f64(), 5.0);
    v
}

fn criterion_2() -> Verdict {
    let mut v = Verdict::new();
    for k in fixtures() {
        let m = module(&k);
        let exact = m.differentiated(MapSource::Exact).unwrap();
        v.every_below(
            &format!("{k} exact"),
            &identity_suite(&m, &exact, SAMPLES, SEED),
            |_| 1e-10,
        );
        let fd = m
            .differentiated(MapSource::Numeric(DiffMethod::default()))
            .unwrap();
        v.every_below(
            &format!("{k} fd"),
            &identity_suite(&m, &fd, SAMPLES, SEED),
            |_| 1e-6,
        );
    }
    v
}

fn criterion_3() -> Verdict {
    let mut v = Verdict::new();
    for k in fixtures() {
        let m = module(&k);
        let exact = m.differentiated(MapSource::Exact).unwrap();
        let opts = VariationalOptions {
            fd: FdOptions::with_step(1e-5),
            ..VariationalOptions::default()
        };
        v.every_below(
            &k.to_string(),
            &variational_suite(&m, &exact, SAMPLES, SEED, opts),
            |_| 1e-5,
        );
        let ratio = variational_convergence(&m, &exact, 10, SEED, 20.0);
        v.below(&format!("{k} step ratio"), ratio, 0.1);
    }
    v
}

fn criterion_4() -> Verdict {
    let mut v = Verdict::new();
    for k in fixtures() {
        let rep = oracle_suite(&derived(&k), SAMPLES, SEED);
        v.every_below(&k.to_string(), &rep, oracle_tolerance);
    }
    v
}

fn criterion_5() -> Verdict {
    let mut v = Verdict::new();
    for k in fixtures() {
        let rep = axiom_suite(&derived(&k), SAMPLES, SEED);
        v.every_below(&k.to_string(), &rep, |n| {
            if n.starts_with("adjoint_") {
                1e-7
            } else {
                1e-9
            }
        });
        for name in [
            "associativity",
            "inverse",
            "antisymmetry",
            "jacobi",
            "graded_jacobi",
        ] {
            v.holds(&format!("{k} {name} present"), rep.get(name).is_some());
        }
    }
    v
}

fn criterion_6() -> Verdict {
    let mut v = Verdict::new();
    for k in fixtures() {
        let rep = axiom_suite(&derived(&k), SAMPLES, SEED);
        v.holds(
            &format!("{k} dt_squared exactly 0"),
            rep.get("dt_squared") == Some(0.0),
        );
        v.below(
            &format!("{k} leibniz"),
            rep.get("leibniz").unwrap_or(f64::NAN),
            1e-10,
        );
    }
    let dm = derived(&FixtureKind::Lin(3));
    let alg = coordinate_algebra(3, 2).unwrap();
    let mut rng = stream(SEED, "lin_coboundary", 0);
    for p in -1..=1 {
        for _ in 0..SAMPLES {
            let s = dm.random_graded(&alg, p, &mut rng).unwrap();
            let dt = dm.coboundary_dt(&s).unwrap().max_abs();
            v.holds("LIN d_t identically 0", dt == 0.0);
        }
    }
    v
}

fn criterion_7() -> Verdict {
    let mut v = Verdict::new();
    for k in fixtures() {
        let rep = cross_suite(&derived(&k), SAMPLES, SEED);
        for name in ["homomorphism", "inverse", "bracket_homomorphism"] {
            v.below(
                &format!("{k} {name}"),
                rep.get(name).unwrap_or(f64::NAN),
                1e-10,
            );
        }
        v.below(
            &format!("{k} differential_fd"),
            rep.get("differential_fd").unwrap_or(f64::NAN),
            1e-6,
        );
        for name in ["round_trip", "algebra_round_trip"] {
            v.holds(&format!("{k} {name} exact"), rep.get(name) == Some(0.0));
        }
    }
    v
}

fn criterion_8() -> Verdict {
    let mut v = Verdict::new();
    for k in fixtures() {
        v.every_below(
            &k.to_string(),
            &structure_suite(&bundle(&k), 100, SEED),
            |_| 1e-10,
        );
    }
    v
}

fn criterion_9() -> Verdict {
    let mut v = Verdict::new();
    for k in [
        FixtureKind::Conj(GroupKind::SpecialOrthogonal(3)),
        FixtureKind::Lin(3),
    ] {
        let op = Operation::new(&bundle(&k)).unwrap();
        let rep = cartan_suite(&op, 100, SEED);
        v.every_below(&k.to_string(), &rep, |_| 1e-5);
        v.holds(
            &format!("{k} pure shift case present"),
            rep.get("lie_contraction_shift").is_some(),
        );
    }
    v
}

fn criterion_10() -> Verdict {
    let mut v = Verdict::new();
    for k in fixtures() {
        let op = Operation::new(&bundle(&k)).unwrap();
        let rep = basic_suite(&op, SAMPLES, SEED);
        for (n, r) in rep.entries() {
            if n.starts_with("witness_") {
                v.above(&format!("{k} {n}"), r.recip(), 0.1);
            } else {
                v.below(&format!("{k} {n}"), *r, 1e-6);
            }
        }
    }
    v
}

fn criterion_11() -> Verdict {
    let mut v = Verdict::new();
    for k in fixtures() {
        v.every_below(
            &k.to_string(),
            &restriction_suite(&bundle(&k), SAMPLES, SEED),
            |_| 1e-5,
        );
    }
    v
}

fn criterion_12() -> Verdict {
    let mut v = Verdict::new();
    for defect in Defect::ALL {
        let cfg = SuiteConfig {
            samples: 10,
            defects: [defect].into_iter().collect(),
            ..SuiteConfig::default()
        };
        let out = run_suite(&cfg);
        let worst = out
            .results
            .iter()
            .filter(|r| !r.passed)
            .max_by(|a, b| a.max_residual.total_cmp(&b.max_residual));
        v.above(defect.name(), worst.map_or(0.0, |r| r.max_residual), 1e-4);
        if let Some(r) = worst {
            v.detail += &format!(" {} caught by {}", defect.name(), r.name);
        }
        v.holds(
            &format!("{} exit code 1", defect.name()),
            out.exit_code == 1,
        );
    }
    v
}

fn criterion_13() -> Verdict {
    let mut v = Verdict::new();
    let cfg = SuiteConfig {
        workers: 1,
        report_format: ReportFormat::Machine,
        ..SuiteConfig::default()
    };
    let start = Instant::now();
    let first = run_suite(&cfg);
    let elapsed = start.elapsed().as_secs_f64();
    v.below("single-threaded runtime s", elapsed, 60.0);
    v.holds("default suite passes", first.exit_code == 0);
    let again = run_suite(&cfg);
    let parallel = run_suite(&SuiteConfig {
        workers: 4,
        ..cfg.clone()
    });
    let report = |o: &dercross::harness::RunOutcome| emit_report(&o.results, ReportFormat::Machine);
    v.holds(
        "repeat run byte-identical",
        report(&first) == report(&again),
    );
    v.holds(
        "4 workers byte-identical",
        report(&first) == report(&parallel),
    );
    v.detail += &format!(" ({elapsed:.2} s)");
    v
}

#[test]
fn acceptance_criteria() {
    let criteria: [(usize, fn() -> Verdict); 13] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
        (12, criterion_12),
        (13, criterion_13),
    ];
    let mut failed = Vec::new();
    for (n, check) in criteria {
        let start = Instant::now();
        let v = check();
        let status = if v.ok { "PASS" } else { "FAIL" };
        println!(
            "criterion {n:>2}: {status} ({:.2} s){}",
            start.elapsed().as_secs_f64(),
            v.detail
        );
        if !v.ok {
            failed.push(n);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
