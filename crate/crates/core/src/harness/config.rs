use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::crossed_module::FixtureKind;
use crate::error::{Error, Result};

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "DERCROSS_CONFIG";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Axioms,
    Identities,
    Variational,
    Derived,
    Graded,
    Bundle,
    Gauge,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Axioms,
        Suite::Identities,
        Suite::Variational,
        Suite::Derived,
        Suite::Graded,
        Suite::Bundle,
        Suite::Gauge,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Axioms => "axioms",
            Suite::Identities => "identities",
            Suite::Variational => "variational",
            Suite::Derived => "derived",
            Suite::Graded => "graded",
            Suite::Bundle => "bundle",
            Suite::Gauge => "gauge",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|k| k.name() == s.trim())
            .ok_or_else(|| Error::Config(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ReportFormat {
    #[default]
    Text,
    Machine,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "text" => Ok(ReportFormat::Text),
            "machine" => Ok(ReportFormat::Machine),
            other => Err(Error::Config(format!("unknown report format {other:?}"))),
        }
    }
}

/// Deliberate corruptions used as negative controls.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Defect {
    /// The action scaled by 1.01.
    PerturbedAction,
    /// Every contraction negated.
    FlippedContraction,
    /// The `˙μ˙` correction left out of the derived adjoint action.
    DroppedAdjointCorrection,
}

impl Defect {
    pub const ALL: [Defect; 3] = [
        Defect::PerturbedAction,
        Defect::FlippedContraction,
        Defect::DroppedAdjointCorrection,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Defect::PerturbedAction => "perturbed_action",
            Defect::FlippedContraction => "flipped_contraction",
            Defect::DroppedAdjointCorrection => "dropped_adjoint_correction",
        }
    }
}

impl FromStr for Defect {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Defect::ALL
            .into_iter()
            .find(|k| k.name() == s.trim())
            .ok_or_else(|| Error::Config(format!("unknown defect {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub fixture: FixtureKind,
    /// Dimension of the base box of the bundle suites.
    pub base_dim: usize,
    pub samples: usize,
    pub seed: u64,
    pub fd_step: f64,
    pub tol_alg: f64,
    pub tol_fd: f64,
    pub suites: BTreeSet<Suite>,
    pub report_format: ReportFormat,
    /// Worker threads; 0 uses every core.
    pub workers: usize,
    pub defects: BTreeSet<Defect>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            fixture: FixtureKind::default(),
            base_dim: 2,
            samples: 50,
            seed: 42,
            fd_step: 1e-5,
            tol_alg: 1e-9,
            tol_fd: 1e-5,
            suites: Suite::ALL.into_iter().collect(),
            report_format: ReportFormat::Text,
            workers: 0,
            defects: BTreeSet::new(),
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("fd_step", self.fd_step),
            ("tol_alg", self.tol_alg),
            ("tol_fd", self.tol_fd),
        ];
        for (key, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Validation(format!(
                    "{key} must be positive, got {v}"
                )));
            }
        }
        if self.samples == 0 {
            return Err(Error::Validation("samples must be at least 1".into()));
        }
        if self.base_dim == 0 {
            return Err(Error::Validation("base_dim must be at least 1".into()));
        }
        Ok(())
    }

    pub fn with_negative_control(mut self) -> Self {
        self.defects = Defect::ALL.into_iter().collect();
        self
    }
}

/// Keys accepted in each section. Keys before the first header may come from
/// any section.
const SECTIONS: [(&str, &[&str]); 3] = [
    (
        "run",
        &[
            "samples",
            "seed",
            "suites",
            "report",
            "workers",
            "negative_control",
            "defects",
        ],
    ),
    ("fixture", &["name", "fixture", "base_dim"]),
    ("tolerances", &["fd_step", "tol_alg", "tol_fd"]),
];

fn parse_value<T: FromStr>(line: usize, key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("bad value {value:?} for {key}"),
    })
}

fn parse_list<T: FromStr<Err = Error> + Ord>(line: usize, value: &str) -> Result<BTreeSet<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse().map_err(|e: Error| Error::Parse {
                line,
                msg: e.to_string(),
            })
        })
        .collect()
}

fn apply(cfg: &mut SuiteConfig, line: usize, key: &str, value: &str) -> Result<()> {
    match key {
        "samples" => cfg.samples = parse_value(line, key, value)?,
        "seed" => cfg.seed = parse_value(line, key, value)?,
        "workers" => cfg.workers = parse_value(line, key, value)?,
        "base_dim" => cfg.base_dim = parse_value(line, key, value)?,
        "fd_step" => cfg.fd_step = parse_value(line, key, value)?,
        "tol_alg" => cfg.tol_alg = parse_value(line, key, value)?,
        "tol_fd" => cfg.tol_fd = parse_value(line, key, value)?,
        "name" | "fixture" => cfg.fixture = value.parse()?,
        "report" => cfg.report_format = value.parse()?,
        "suites" => {
            cfg.suites = if value.trim() == "all" {
                Suite::ALL.into_iter().collect()
            } else {
                parse_list(line, value)?
            }
        }
        "defects" => cfg.defects = parse_list(line, value)?,
        "negative_control" => {
            if parse_value::<bool>(line, key, value)? {
                cfg.defects = Defect::ALL.into_iter().collect();
            }
        }
        _ => unreachable!("key table and match disagree on {key}"),
    }
    Ok(())
}

/// Parses `key = value` lines grouped under `[run]`, `[fixture]` and
/// `[tolerances]`; `#` starts a comment. Absent keys keep their defaults and
/// the result is validated.
pub fn parse_config(source: &str) -> Result<SuiteConfig> {
    let mut cfg = SuiteConfig::default();
    let mut section: Option<&str> = None;
    for (i, raw) in source.lines().enumerate() {
        let line = i + 1;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        if let Some(name) = text.strip_prefix('[') {
            let name = name.strip_suffix(']').ok_or_else(|| Error::Parse {
                line,
                msg: format!("unterminated section header {text:?}"),
            })?;
            let name = name.trim();
            let known = SECTIONS.iter().find(|(s, _)| *s == name);
            section = Some(known.map(|(s, _)| *s).ok_or_else(|| Error::Parse {
                line,
                msg: format!("unknown section [{name}]"),
            })?);
            continue;
        }
        let (key, value) = text.split_once('=').ok_or_else(|| Error::Parse {
            line,
            msg: format!("expected `key = value`, found {text:?}"),
        })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(Error::Parse {
                line,
                msg: format!("empty key or value in {text:?}"),
            });
        }
        let home = SECTIONS.iter().find(|(_, keys)| keys.contains(&key));
        match (home, section) {
            (None, _) => {
                return Err(Error::Parse {
                    line,
                    msg: format!("unknown key {key:?}"),
                })
            }
            (Some((s, _)), Some(current)) if *s != current => {
                return Err(Error::Parse {
                    line,
                    msg: format!("key {key:?} belongs in [{s}], not [{current}]"),
                })
            }
            _ => {}
        }
        apply(&mut cfg, line, key, value).map_err(|e| match e {
            Error::Parse { .. } => e,
            other => Error::Parse {
                line,
                msg: other.to_string(),
            },
        })?;
    }
    cfg.validate()?;
    Ok(cfg)
}
