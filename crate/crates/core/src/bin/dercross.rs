use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dercross::crossed_module::FixtureKind;
use dercross::harness::{
    emit_report, load_config, run_suite, ReportFormat, SuiteConfig, CONFIG_ENV,
};

#[derive(Parser)]
#[command(
    name = "dercross",
    version,
    about = "Seeded numerical checks for crossed modules and their derived calculus"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Report {
    Text,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured suites and print a report.
    Run {
        /// Config file; falls back to $DERCROSS_CONFIG, then to built-in defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
        /// CONJ(SO3), CONJ(SU2), CONJ(GL2), LIN(3), COVER, ...
        #[arg(long)]
        fixture: Option<String>,
        #[arg(long, value_enum)]
        report: Option<Report>,
        /// Worker threads; 0 uses every core.
        #[arg(long)]
        workers: Option<usize>,
        /// Corrupt the action, the contraction sign and the derived adjoint
        /// action; the run must fail.
        #[arg(long)]
        negative_control: bool,
    },
}

fn configure(cmd: Command) -> Result<SuiteConfig, String> {
    let Command::Run {
        config,
        seed,
        samples,
        fixture,
        report,
        workers,
        negative_control,
    } = cmd;
    let path = config.or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    let mut cfg = match path {
        Some(p) => load_config(&p).map_err(|e| e.to_string())?,
        None => SuiteConfig::default(),
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(n) = samples {
        cfg.samples = n;
    }
    if let Some(f) = fixture {
        cfg.fixture = f.parse::<FixtureKind>().map_err(|e| e.to_string())?;
    }
    if let Some(r) = report {
        cfg.report_format = match r {
            Report::Text => ReportFormat::Text,
            Report::Machine => ReportFormat::Machine,
        };
    }
    if let Some(w) = workers {
        cfg.workers = w;
    }
    if negative_control {
        cfg = cfg.with_negative_control();
    }
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match configure(cli.command) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("dercross: {msg}");
            return ExitCode::from(2);
        }
    };
    let outcome = run_suite(&cfg);
    if outcome.exit_code == 2 {
        eprintln!("dercross: fixture {} could not be set up", cfg.fixture);
    }
    print!("{}", emit_report(&outcome.results, cfg.report_format));
    ExitCode::from(outcome.exit_code as u8)
}
