//! Report model. `report.json` holds only seeded, deterministic content;
//! wall-clock data goes to `timing.json`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::Config;

pub const SCHEMA: &str = "condensation-lab/report/v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// `|estimate − target| ≤ tolerance`.
    AbsLe,
    /// `|estimate − target| ≤ tolerance · |target|`.
    RelLe,
    /// `estimate ≤ target + tolerance`.
    Le,
    /// `estimate ≥ target − tolerance`.
    Ge,
    /// Recorded, never fails.
    Info,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Info,
}

impl Comparison {
    pub fn verdict(self, estimate: f64, target: f64, tolerance: f64) -> Verdict {
        let ok = match self {
            Comparison::Info => return Verdict::Info,
            Comparison::AbsLe => (estimate - target).abs() <= tolerance,
            Comparison::RelLe => (estimate - target).abs() <= tolerance * target.abs(),
            Comparison::Le => estimate <= target + tolerance,
            Comparison::Ge => estimate >= target - tolerance,
        };
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    /// Result the check targets, e.g. `location of the big vertex`.
    pub theorem: String,
    pub description: String,
    pub estimate: f64,
    pub target: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub verdict: Verdict,
    /// Where the tolerance comes from.
    pub calibration: String,
}

impl Check {
    pub fn new(
        id: impl Into<String>,
        theorem: impl Into<String>,
        description: impl Into<String>,
        estimate: f64,
        comparison: Comparison,
        target: f64,
        tolerance: f64,
        calibration: impl Into<String>,
    ) -> Self {
        Check {
            id: id.into(),
            theorem: theorem.into(),
            description: description.into(),
            estimate,
            target,
            tolerance,
            comparison,
            verdict: comparison.verdict(estimate, target, tolerance),
            calibration: calibration.into(),
        }
    }

    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }

    /// Recomputes the verdict from the recorded numbers.
    pub fn consistent(&self) -> bool {
        self.comparison.verdict(self.estimate, self.target, self.tolerance) == self.verdict
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub id: String,
    pub title: String,
    pub distributions: Vec<String>,
    pub n_values: Vec<u64>,
    pub samples: u64,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub data_files: Vec<String>,
}

impl ExperimentReport {
    pub fn new(id: &str, title: &str, seed: u64) -> Self {
        ExperimentReport {
            id: id.into(),
            title: title.into(),
            distributions: Vec::new(),
            n_values: Vec::new(),
            samples: 0,
            seed,
            checks: Vec::new(),
            data_files: Vec::new(),
        }
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| c.failed()).count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub info: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub seed: u64,
    pub config: Config,
    pub experiments: Vec<ExperimentReport>,
    pub summary: Summary,
}

impl Report {
    pub fn new(config: &Config, experiments: Vec<ExperimentReport>) -> Self {
        let all = || experiments.iter().flat_map(|e| &e.checks);
        let count = |v: Verdict| all().filter(|c| c.verdict == v).count();
        let summary = Summary {
            checks: all().count(),
            passed: count(Verdict::Pass),
            failed: count(Verdict::Fail),
            info: count(Verdict::Info),
        };
        Report {
            schema: SCHEMA.into(),
            seed: config.seed,
            config: config.clone(),
            experiments,
            summary,
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn find(&self, experiment: &str, check: &str) -> Option<&Check> {
        self.experiments.iter().find(|e| e.id == experiment)?.check(check)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn write(&self, dir: &Path) -> std::io::Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("report.json"), self.to_json() + "\n")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub threads: usize,
    pub total_seconds: f64,
    pub experiments: Vec<(String, f64)>,
}

impl Timing {
    pub fn write(&self, dir: &Path) -> std::io::Result<()> {
        fs::create_dir_all(dir)?;
        let text = serde_json::to_string_pretty(self).expect("timing serializes");
        fs::write(dir.join("timing.json"), text + "\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts_follow_numbers() {
        assert_eq!(Comparison::AbsLe.verdict(1.05, 1.0, 0.1), Verdict::Pass);
        assert_eq!(Comparison::RelLe.verdict(2.4, 2.0, 0.15), Verdict::Fail);
        assert_eq!(Comparison::Le.verdict(0.03, 0.02, 0.0), Verdict::Fail);
        assert_eq!(Comparison::Ge.verdict(0.96, 0.95, 0.0), Verdict::Pass);
        assert_eq!(Comparison::Info.verdict(f64::NAN, 0.0, 0.0), Verdict::Info);
        assert_eq!(Comparison::AbsLe.verdict(f64::NAN, 0.0, 1.0), Verdict::Fail);
        let c = Check::new("x", "degree condensation", "d", 0.5, Comparison::Le, 1.0, 0.0, "contract");
        assert!(c.consistent() && !c.failed());
    }
}
