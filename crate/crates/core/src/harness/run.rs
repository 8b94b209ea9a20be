use std::time::Instant;

use super::config::{Defect, Suite, SuiteConfig};
use super::report::CheckResult;
use crate::crossed_module::{
    check_algebra_axioms, check_group_axioms, differentiation_consistency, identity_suite,
    make_fixture, variational_convergence, variational_suite, GroupCrossedModule, MapSource,
    VariationalOptions,
};
use crate::derived::{axiom_suite, cross_suite, oracle_suite, DerivedModule, Fault};
use crate::error::{Error, Result};
use crate::matrix_lie::{DiffMethod, FdOptions};
use crate::residual::ResidualReport;
use crate::synthetic_bundle::{
    basic_suite, cartan_suite, gauge_suite, restriction_suite, structure_suite, BundleModel,
    Operation, OperationFault,
};

/// Reciprocal residual allowed for non-basic witnesses: each must fail the
/// basic test by more than `0.1`.
pub const WITNESS_TOLERANCE: f64 = 10.0;

/// Required ratio of variational residuals at steps `1e-6` and `1e-5`.
pub const CONVERGENCE_TOLERANCE: f64 = 0.1;

/// Scale of the curve directions in the convergence check, large enough for
/// truncation error to dominate.
const CONVERGENCE_SCALE: f64 = 20.0;

/// Entries of the derived reports that belong to the graded suite.
const GRADED_ENTRIES: [&str; 7] = [
    "graded_bracket",
    "coboundary",
    "graded_antisymmetry",
    "graded_jacobi",
    "dt_squared",
    "leibniz",
    "degree_zero_reduction",
];

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub results: Vec<CheckResult>,
    pub exit_code: i32,
}

impl RunOutcome {
    fn config_error() -> Self {
        Self {
            results: Vec::new(),
            exit_code: 2,
        }
    }
}

struct Context {
    module: GroupCrossedModule,
    derived: DerivedModule,
    fixture: String,
}

fn context(cfg: &SuiteConfig) -> Result<Context> {
    let mut module = make_fixture(&cfg.fixture)?;
    if cfg.defects.contains(&Defect::PerturbedAction) {
        module = module.with_scaled_action(1.01);
    }
    let source = if module.exact_maps().is_some() {
        MapSource::Exact
    } else {
        MapSource::Numeric(DiffMethod::Nilpotent)
    };
    let mut derived = DerivedModule::new(module.clone(), source)?;
    if cfg.defects.contains(&Defect::DroppedAdjointCorrection) {
        derived = derived.with_fault(Fault::DropAdjointCorrection);
    }
    Ok(Context {
        module,
        derived,
        fixture: cfg.fixture.to_string(),
    })
}

struct Sink<'a> {
    cfg: &'a SuiteConfig,
    fixture: &'a str,
    results: Vec<CheckResult>,
}

impl Sink<'_> {
    fn push(&mut self, name: String, residual: f64, tol: f64, elapsed: f64) {
        self.results.push(CheckResult::new(
            name,
            self.fixture.to_string(),
            residual,
            tol,
            elapsed,
        ));
    }

    /// One check per report entry, tolerance chosen by entry name.
    fn report(
        &mut self,
        prefix: &str,
        rep: &ResidualReport,
        elapsed: f64,
        tol: impl Fn(&str) -> f64,
    ) {
        for (name, v) in rep.entries() {
            self.push(format!("{prefix}.{name}"), *v, tol(name), elapsed);
        }
    }

    /// Runs `body`; a setup error becomes a failing `<prefix>.setup` check.
    fn timed(
        &mut self,
        prefix: &str,
        tol: impl Fn(&str) -> f64,
        body: impl FnOnce() -> Result<ResidualReport>,
    ) {
        let start = Instant::now();
        let rep = body();
        let elapsed = start.elapsed().as_secs_f64();
        match rep {
            Ok(rep) => self.report(prefix, &rep, elapsed, tol),
            Err(_) => self.push(format!("{prefix}.setup"), f64::INFINITY, 0.0, elapsed),
        }
    }

    fn alg(&self) -> impl Fn(&str) -> f64 {
        let t = self.cfg.tol_alg;
        move |_| t
    }

    fn fd(&self) -> impl Fn(&str) -> f64 {
        let t = self.cfg.tol_fd;
        move |_| t
    }

    /// `tol_fd` for names ending in `_fd`, `tol_alg` otherwise.
    fn by_suffix(&self) -> impl Fn(&str) -> f64 {
        let (a, f) = (self.cfg.tol_alg, self.cfg.tol_fd);
        move |n| if n.ends_with("_fd") { f } else { a }
    }
}

fn split_graded(rep: &ResidualReport, graded: bool) -> ResidualReport {
    let mut out = ResidualReport::new();
    for (n, v) in rep.entries() {
        let is_graded = GRADED_ENTRIES.contains(&n.as_str());
        if is_graded == graded || n == "evaluation_error" {
            out.record(n, *v);
        }
    }
    out
}

fn run_one(suite: Suite, ctx: &Context, cfg: &SuiteConfig, sink: &mut Sink) {
    let (n, seed) = (cfg.samples, cfg.seed);
    let fd = FdOptions::with_step(cfg.fd_step);
    let fd_maps = || {
        ctx.module
            .differentiated(MapSource::Numeric(DiffMethod::CentralDifference(fd)))
    };
    match suite {
        Suite::Axioms => {
            sink.timed("axioms.group", sink.alg(), || {
                Ok(check_group_axioms(&ctx.module, n, seed))
            });
            sink.timed("axioms.algebra", sink.alg(), || {
                let alg = ctx.derived.maps().algebra_module(ctx.module.name());
                Ok(check_algebra_axioms(&alg, n, seed))
            });
        }
        Suite::Identities => {
            sink.timed("identities", sink.alg(), || {
                Ok(identity_suite(&ctx.module, ctx.derived.maps(), n, seed))
            });
            sink.timed("identities.fd_maps", sink.fd(), || {
                Ok(identity_suite(&ctx.module, &fd_maps()?, n, seed))
            });
            sink.timed("identities.differentials_fd", sink.fd(), || {
                let fd = fd_maps()?;
                Ok(differentiation_consistency(
                    &ctx.module,
                    ctx.derived.maps(),
                    &fd,
                    n,
                    seed,
                ))
            });
        }
        Suite::Variational => {
            let (a, f) = (cfg.tol_alg, cfg.tol_fd);
            sink.timed(
                "variational",
                move |name: &str| if name.ends_with("_odd") { a } else { f },
                || {
                    let opts = VariationalOptions {
                        fd,
                        ..VariationalOptions::default()
                    };
                    Ok(variational_suite(
                        &ctx.module,
                        ctx.derived.maps(),
                        n,
                        seed,
                        opts,
                    ))
                },
            );
            sink.timed(
                "variational",
                |_| CONVERGENCE_TOLERANCE,
                || {
                    let mut rep = ResidualReport::new();
                    let ratio = variational_convergence(
                        &ctx.module,
                        ctx.derived.maps(),
                        n.min(10),
                        seed,
                        CONVERGENCE_SCALE,
                    );
                    rep.record("convergence_ratio", ratio);
                    Ok(rep)
                },
            );
        }
        Suite::Derived => {
            let tol = sink.by_suffix();
            sink.timed("derived.oracle", &tol, || {
                Ok(split_graded(&oracle_suite(&ctx.derived, n, seed), false))
            });
            sink.timed("derived.axioms", &tol, || {
                Ok(split_graded(&axiom_suite(&ctx.derived, n, seed), false))
            });
            sink.timed("derived.cross", &tol, || {
                Ok(cross_suite(&ctx.derived, n, seed))
            });
        }
        Suite::Graded => {
            let tol = sink.by_suffix();
            sink.timed("graded.oracle", &tol, || {
                Ok(split_graded(&oracle_suite(&ctx.derived, n, seed), true))
            });
            sink.timed("graded.axioms", &tol, || {
                Ok(split_graded(&axiom_suite(&ctx.derived, n, seed), true))
            });
        }
        Suite::Bundle => {
            let model = BundleModel::new(ctx.derived.clone(), cfg.base_dim);
            let op = || -> Result<Operation> {
                let op = Operation::new(&model)?;
                Ok(if cfg.defects.contains(&Defect::FlippedContraction) {
                    op.with_fault(OperationFault::FlipContraction)
                } else {
                    op
                })
            };
            sink.timed("bundle.structure", sink.alg(), || {
                Ok(structure_suite(&model, n, seed))
            });
            sink.timed("bundle.cartan", sink.fd(), || {
                Ok(cartan_suite(&op()?, n, seed))
            });
            let f = cfg.tol_fd;
            sink.timed(
                "bundle.basic",
                move |name: &str| {
                    if name.starts_with("witness_") {
                        WITNESS_TOLERANCE
                    } else {
                        f
                    }
                },
                || Ok(basic_suite(&op()?, n, seed)),
            );
            sink.timed("bundle.restriction", sink.fd(), || {
                Ok(restriction_suite(&model, n, seed))
            });
        }
        Suite::Gauge => {
            let model = BundleModel::new(ctx.derived.clone(), cfg.base_dim);
            sink.timed("gauge", sink.alg(), || Ok(gauge_suite(&model, n, seed)));
        }
    }
}

/// Results of the configured suites on the configured fixture, sorted with
/// failures first. Exit code 0 when every check passes, 1 when one fails, 2
/// when the configuration is invalid.
pub fn run_suite(cfg: &SuiteConfig) -> RunOutcome {
    if cfg.validate().is_err() {
        return RunOutcome::config_error();
    }
    let ctx = match context(cfg) {
        Ok(c) => c,
        Err(_) => return RunOutcome::config_error(),
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
    {
        Ok(p) => p,
        Err(_) => return RunOutcome::config_error(),
    };
    let mut sink = Sink {
        cfg,
        fixture: &ctx.fixture,
        results: Vec::new(),
    };
    pool.install(|| {
        for suite in &cfg.suites {
            run_one(*suite, &ctx, cfg, &mut sink);
        }
    });
    let mut results = sink.results;
    super::report::sort_results(&mut results);
    let exit_code = if results.iter().all(|r| r.passed) {
        0
    } else {
        1
    };
    RunOutcome { results, exit_code }
}

/// Reads the config at `path`.
pub fn load_config(path: &std::path::Path) -> Result<SuiteConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    super::config::parse_config(&text)
}
