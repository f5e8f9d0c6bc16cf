//! Verification suites, JSON reports and SVG front figures.
//!
//! A [`VerificationReport`] is a flat, ordered list of [`Check`]s. Reports
//! carry no wall-clock data, so two runs with the same [`SuiteConfig`]
//! serialize to identical bytes.

mod construction;
mod suites;
mod svg;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use construction::build_construction_report;
pub use svg::{plot_front, plot_fronts, FrontSource, SvgFigure};

/// Acceptance rule of a check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Threshold {
    AtMost(f64),
    Below(f64),
    AtLeast(f64),
    Equal(f64),
    Within(f64, f64),
    /// Reported only; always passes.
    Info,
}

impl Threshold {
    pub fn accepts(&self, v: f64) -> bool {
        match *self {
            Threshold::AtMost(t) => v <= t,
            Threshold::Below(t) => v < t,
            Threshold::AtLeast(t) => v >= t,
            Threshold::Equal(t) => v == t,
            Threshold::Within(lo, hi) => v >= lo && v <= hi,
            Threshold::Info => true,
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Threshold::AtMost(t) => write!(f, "<= {t:e}"),
            Threshold::Below(t) => write!(f, "< {t:e}"),
            Threshold::AtLeast(t) => write!(f, ">= {t:e}"),
            Threshold::Equal(t) => write!(f, "== {t}"),
            Threshold::Within(lo, hi) => write!(f, "in [{lo}, {hi}]"),
            Threshold::Info => write!(f, "info"),
        }
    }
}

/// One measured quantity and its verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    /// The statement being measured, or `"plumbing"`.
    pub anchor: String,
    /// Non-finite values serialize as `null` and never pass.
    pub value: f64,
    pub threshold: Threshold,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn new(id: impl Into<String>, anchor: &str, value: f64, threshold: Threshold) -> Self {
        let pass = match threshold {
            Threshold::Info => true,
            t => value.is_finite() && t.accepts(value),
        };
        Self {
            id: id.into(),
            anchor: anchor.to_string(),
            value,
            threshold,
            pass,
            note: None,
        }
    }

    pub fn info(id: impl Into<String>, anchor: &str, value: f64) -> Self {
        Self::new(id, anchor, value, Threshold::Info)
    }

    /// A yes/no condition, recorded as `1` or `0` against `== 1`.
    pub fn flag(id: impl Into<String>, anchor: &str, ok: bool) -> Self {
        Self::new(
            id,
            anchor,
            if ok { 1.0 } else { 0.0 },
            Threshold::Equal(1.0),
        )
    }

    /// A fallible measurement; an error becomes a failed check with the
    /// message as its note.
    pub fn measured(
        id: impl Into<String>,
        anchor: &str,
        value: Result<f64>,
        threshold: Threshold,
    ) -> Self {
        match value {
            Ok(v) => Self::new(id, anchor, v, threshold),
            Err(e) => {
                let mut c = Self::new(id, anchor, f64::NAN, threshold);
                c.pass = false;
                c.note = Some(e.to_string());
                c
            }
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Grid sizes and seeds shared by every suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub quick: bool,
    /// Upper end of the frequency sweeps.
    pub m_max: u32,
    pub seed: u64,
    pub curve_grid: usize,
    /// Side of the square surface grids.
    pub surface_grid: usize,
    /// Side of the square schedule grids.
    pub schedule_grid: usize,
    pub schedule_tau: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            quick: false,
            m_max: 30,
            seed: 20_240_601,
            curve_grid: 10_000,
            surface_grid: 300,
            schedule_grid: 200,
            schedule_tau: 100,
        }
    }
}

/// Environment variables read by [`SuiteConfig::apply_env`].
pub const ENV_OVERRIDES: [&str; 4] = [
    "LEGENDRIAN_CURVE_GRID",
    "LEGENDRIAN_SURFACE_GRID",
    "LEGENDRIAN_SCHEDULE_GRID",
    "LEGENDRIAN_SCHEDULE_TAU",
];

impl SuiteConfig {
    /// Default grids divided by four.
    pub fn quick() -> Self {
        let d = Self::default();
        Self {
            quick: true,
            curve_grid: d.curve_grid / 4,
            surface_grid: d.surface_grid / 4,
            schedule_grid: d.schedule_grid / 4,
            schedule_tau: d.schedule_tau / 4,
            ..d
        }
    }

    /// Overrides grid sizes from `lookup` (normally the process environment).
    pub fn apply_overrides<F>(&mut self, lookup: F) -> Result<()>
    where
        F: Fn(&str) -> Option<String>,
    {
        let slots: [&mut usize; 4] = [
            &mut self.curve_grid,
            &mut self.surface_grid,
            &mut self.schedule_grid,
            &mut self.schedule_tau,
        ];
        for (name, slot) in ENV_OVERRIDES.iter().zip(slots) {
            if let Some(raw) = lookup(name) {
                let v: usize = raw.trim().parse().map_err(|_| {
                    Error::InvalidArgument(format!("{name} = {raw:?} is not a grid size"))
                })?;
                if v < 2 {
                    return Err(Error::InvalidArgument(format!("{name} must be at least 2")));
                }
                *slot = v;
            }
        }
        Ok(())
    }

    pub fn apply_env(&mut self) -> Result<()> {
        self.apply_overrides(|k| std::env::var(k).ok())
    }

    pub fn validate(&self) -> Result<()> {
        if self.m_max < 2 {
            return Err(Error::InvalidArgument("m_max must be at least 2".into()));
        }
        if self.curve_grid < 2
            || self.surface_grid < 2
            || self.schedule_grid < 2
            || self.schedule_tau < 2
        {
            return Err(Error::InvalidArgument(
                "grid sizes must be at least 2".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Curves,
    Flows,
    Zigzag,
    Schedules,
    Charts,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 6] =
        ["curves", "flows", "zigzag", "schedules", "charts", "all"];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Curves => "curves",
            Suite::Flows => "flows",
            Suite::Zigzag => "zigzag",
            Suite::Schedules => "schedules",
            Suite::Charts => "charts",
            Suite::All => "all",
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
        Ok(match s.trim() {
            "curves" => Suite::Curves,
            "flows" => Suite::Flows,
            "zigzag" => Suite::Zigzag,
            "schedules" => Suite::Schedules,
            "charts" => Suite::Charts,
            "all" => Suite::All,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown suite {other:?}; expected one of {}",
                    Suite::NAMES.join(", ")
                )))
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub config: SuiteConfig,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn get(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Plain-text table, one check per line.
    pub fn summary_table(&self) -> String {
        let width = self
            .checks
            .iter()
            .map(|c| c.id.len())
            .max()
            .unwrap_or(2)
            .max(5);
        let mut out = format!(
            "{:<width$}  {:>14}  {:<16}  result\n",
            "check", "value", "threshold"
        );
        for c in &self.checks {
            out.push_str(&format!(
                "{:<width$}  {:>14.6e}  {:<16}  {}\n",
                c.id,
                c.value,
                c.threshold.to_string(),
                if c.pass { "pass" } else { "FAIL" }
            ));
        }
        let failed = self.failures().count();
        out.push_str(&format!(
            "{}: {} checks, {} failed\n",
            self.suite,
            self.checks.len(),
            failed
        ));
        out
    }
}

/// Runs one suite (or all of them, in a fixed order).
pub fn run_suite(suite: Suite, config: &SuiteConfig) -> Result<VerificationReport> {
    config.validate()?;
    let checks = match suite {
        Suite::Curves => suites::curves(config),
        Suite::Flows => suites::flows(config),
        Suite::Zigzag => suites::zigzag(config),
        Suite::Schedules => suites::schedules(config),
        Suite::Charts => suites::charts(config),
        Suite::All => {
            let mut all = suites::curves(config);
            all.extend(suites::flows(config));
            all.extend(suites::zigzag(config));
            all.extend(suites::schedules(config));
            all.extend(suites::charts(config));
            all
        }
    };
    Ok(VerificationReport {
        suite: suite.name().to_string(),
        config: config.clone(),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds() {
        assert!(Check::new("a", "x", 1e-10, Threshold::AtMost(1e-9)).pass);
        assert!(!Check::new("a", "x", 1e-9, Threshold::Below(1e-9)).pass);
        assert!(!Check::new("a", "x", f64::NAN, Threshold::AtMost(1.0)).pass);
        assert!(Check::info("a", "x", f64::NAN).pass);
        assert!(Check::new("a", "x", 16.0, Threshold::Within(12.0, 20.0)).pass);
        let e = Check::measured(
            "a",
            "x",
            Err(Error::InvalidArgument("no".into())),
            Threshold::Info,
        );
        assert!(!e.pass && e.note.is_some());
    }

    #[test]
    fn suite_names_round_trip() {
        for name in Suite::NAMES {
            assert_eq!(name.parse::<Suite>().unwrap().name(), name);
        }
        assert!("".parse::<Suite>().is_err());
        assert!("curve".parse::<Suite>().is_err());
    }

    #[test]
    fn quick_quarters_the_grids() {
        let q = SuiteConfig::quick();
        assert_eq!(
            (
                q.curve_grid,
                q.surface_grid,
                q.schedule_grid,
                q.schedule_tau
            ),
            (2500, 75, 50, 25)
        );
    }

    #[test]
    fn overrides() {
        let mut c = SuiteConfig::default();
        c.apply_overrides(|k| (k == "LEGENDRIAN_CURVE_GRID").then(|| "1234".to_string()))
            .unwrap();
        assert_eq!(c.curve_grid, 1234);
        assert!(c
            .apply_overrides(|k| (k == "LEGENDRIAN_SCHEDULE_TAU").then(|| "many".to_string()))
            .is_err());
    }

    #[test]
    fn null_for_non_finite_values() {
        let r = VerificationReport {
            suite: "t".into(),
            config: SuiteConfig::quick(),
            checks: vec![Check::info("x", "plumbing", f64::INFINITY)],
        };
        assert!(r.to_json().unwrap().contains("\"value\": null"));
        assert!(r.summary_table().contains("1 checks, 0 failed"));
    }
}
