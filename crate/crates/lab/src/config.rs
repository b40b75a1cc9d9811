//! Run configuration, read from a flat TOML file.
//!
//! Every key is optional:
//!
//! ```toml
//! seed = 20240501
//! experiments = ["all"]        # or e.g. ["E1", "E4", "exact"]
//! trees = 1000                 # conditioned trees per (law, n) in E1, E3, E-cor
//! location_trees = 10000       # E2 and E5
//! height_trees = 2000          # E4, per n
//! gh_trees = 500               # E-gh, per n
//! luka_trees = 1000            # E-luka, per n
//! gw_heights = 10000000        # unconditioned heights for the E4 cross-check
//! progeny_samples = 1000000    # unconditioned sizes in E3
//! stable_draws = 1000000       # Laplace self-test, per index
//! tv_samples = 100000          # exact-sampler check at n = 8
//! two_sample_reference = 100000
//! table_cache = "cache"        # optional directory for bridge tables
//! ```

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub seed: u64,
    pub experiments: Vec<String>,
    pub trees: u64,
    pub location_trees: u64,
    pub height_trees: u64,
    pub gh_trees: u64,
    pub luka_trees: u64,
    pub gw_heights: u64,
    pub progeny_samples: u64,
    pub stable_draws: u64,
    pub tv_samples: u64,
    pub two_sample_reference: u64,
    #[serde(skip_serializing)]
    pub table_cache: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 20240501,
            experiments: vec!["all".into()],
            trees: 1_000,
            location_trees: 10_000,
            height_trees: 2_000,
            gh_trees: 500,
            luka_trees: 1_000,
            gw_heights: 10_000_000,
            progeny_samples: 1_000_000,
            stable_draws: 1_000_000,
            tv_samples: 100_000,
            two_sample_reference: 100_000,
            table_cache: None,
        }
    }
}

impl Config {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn parse(text: &str) -> anyhow::Result<Self> {
        Ok(toml::from_str(text)?)
    }

    /// Whether experiment `id` is selected (case-insensitive).
    pub fn wants(&self, id: &str) -> bool {
        self.experiments
            .iter()
            .any(|e| e.eq_ignore_ascii_case("all") || e.eq_ignore_ascii_case(id))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        let c = Config::parse("seed = 7\nexperiments = [\"e1\", \"E4\"]\ntrees = 10\n").unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.trees, 10);
        assert_eq!(c.location_trees, Config::default().location_trees);
        assert!(c.wants("E1") && c.wants("e4") && !c.wants("E2"));
        assert!(Config::default().wants("E-gh"));
        assert!(Config::parse("tress = 3").is_err());
    }
}
