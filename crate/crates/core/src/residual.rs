//! Named maximum residuals collected by the check suites.

use std::fmt;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ResidualReport {
    entries: Vec<(String, f64)>,
}

impl ResidualReport {
    pub fn new() -> Self {
        Self::default()
    }

    /// Keeps the maximum per name. NaN is sticky so failures never hide.
    pub fn record(&mut self, name: &str, value: f64) {
        match self.entries.iter_mut().find(|(n, _)| n == name) {
            Some((_, v)) => {
                if !v.is_nan() && (value.is_nan() || value > *v) {
                    *v = value;
                }
            }
            None => self.entries.push((name.to_string(), value)),
        }
    }

    pub fn merge(&mut self, other: &ResidualReport) {
        for (n, v) in &other.entries {
            self.record(n, *v);
        }
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.entries
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| *v)
    }

    pub fn max(&self) -> f64 {
        self.entries.iter().fold(0.0, |a: f64, (_, v)| {
            if v.is_nan() || a.is_nan() {
                f64::NAN
            } else {
                a.max(*v)
            }
        })
    }

    pub fn entries(&self) -> &[(String, f64)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Prefixes every name, for nesting reports from sub-suites.
    pub fn prefixed(&self, prefix: &str) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .map(|(n, v)| (format!("{prefix}{n}"), *v))
                .collect(),
        }
    }
}

impl fmt::Display for ResidualReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, v) in &self.entries {
            writeln!(f, "{n}: {v:e}")?;
        }
        Ok(())
    }
}
