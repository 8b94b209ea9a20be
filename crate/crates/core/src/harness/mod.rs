//! Configuration, seeded execution of the check suites and reporting.
//!
//! Config files hold `key = value` lines under `[run]`, `[fixture]` and
//! `[tolerances]` headers:
//!
//! ```text
//! [run]
//! samples = 50
//! seed = 42
//! suites = axioms, derived, bundle   # or `all`
//! report = machine
//!
//! [fixture]
//! name = CONJ(SO3)
//!
//! [tolerances]
//! tol_fd = 1e-5
//! ```

mod config;
mod report;
mod run;

pub use config::{parse_config, Defect, ReportFormat, Suite, SuiteConfig, CONFIG_ENV};
pub use report::{emit_report, format_g, sort_results, CheckResult};
pub use run::{load_config, run_suite, RunOutcome, CONVERGENCE_TOLERANCE, WITNESS_TOLERANCE};
