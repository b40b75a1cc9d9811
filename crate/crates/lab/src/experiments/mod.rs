//! Named experiments. Each one returns an [`ExperimentReport`] and may
//! write CSV data next to `report.json`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};
use std::time::Instant;

use anyhow::Context;
use condensation_core::par::{try_map_replicas, ReplicaRng};
use condensation_core::samplers::{ConditionedSampler, Method};
use condensation_core::stats::Moments;
use condensation_core::walk::BridgeOptions;
use condensation_core::{OffspringDistribution, PlaneTree};

use crate::config::Config;
use crate::dist::DistSpec;
use crate::report::{ExperimentReport, Report};

mod condensation;
mod exact;
mod fluctuations;
mod gh;
mod height;
mod location;
mod luka;
mod marginals;
mod max_subtree;
mod stable;

pub type Runner = fn(&Ctx) -> anyhow::Result<ExperimentReport>;

/// Experiment ids in run order.
pub const EXPERIMENTS: &[(&str, Runner)] = &[
    ("exact", exact::run),
    ("stable", stable::run),
    ("E1", condensation::run),
    ("E2", location::run),
    ("E3", fluctuations::run),
    ("E-cor", max_subtree::run),
    ("E4", height::run),
    ("E5", marginals::run),
    ("E-luka", luka::run),
    ("E-gh", gh::run),
];

/// The three reference laws, all with mean 1/2.
pub fn reference(theta: f64) -> DistSpec {
    DistSpec::heavy(theta, 0.5)
}

pub struct Ctx {
    pub config: Config,
    pub out: Option<PathBuf>,
    laws: Mutex<HashMap<String, Arc<OffspringDistribution>>>,
}

impl Ctx {
    pub fn new(config: Config, out: Option<PathBuf>) -> Self {
        Ctx {
            config,
            out,
            laws: Mutex::new(HashMap::new()),
        }
    }

    pub fn seed(&self) -> u64 {
        self.config.seed
    }

    pub fn law(&self, spec: &DistSpec) -> anyhow::Result<Arc<OffspringDistribution>> {
        let key = spec.to_string();
        if let Some(d) = self.laws.lock().unwrap().get(&key) {
            return Ok(d.clone());
        }
        let d = Arc::new(spec.build()?);
        self.laws.lock().unwrap().insert(key, d.clone());
        Ok(d)
    }

    pub fn sampler(&self, dist: &OffspringDistribution, n: usize) -> anyhow::Result<ConditionedSampler> {
        let opts = BridgeOptions {
            cache_dir: self.config.table_cache.clone(),
            ..Default::default()
        };
        Ok(ConditionedSampler::with_options(dist, n, Method::Auto, &opts)?)
    }

    /// Applies `f` to `count` independent conditioned trees of size `n`.
    pub fn conditioned<T, F>(
        &self,
        tag: &str,
        dist: &OffspringDistribution,
        n: usize,
        count: u64,
        f: F,
    ) -> anyhow::Result<Vec<T>>
    where
        T: Send,
        F: Fn(&PlaneTree) -> T + Sync + Send,
    {
        let sampler = self.sampler(dist, n)?;
        let tag = format!("{tag}/n{n}");
        Ok(try_map_replicas(self.seed(), &tag, count, |_, rng| {
            sampler.sample(rng).map(|t| f(&t))
        })?)
    }

    /// Seeded replicas without a sampler.
    pub fn replicas<T, F>(&self, tag: &str, count: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64, &mut ReplicaRng) -> T + Sync + Send,
    {
        condensation_core::par::map_replicas(self.seed(), tag, count, f)
    }

    /// Writes `name` (CSV) into the output directory, if any.
    pub fn write_csv<I, R>(
        &self,
        report: &mut ExperimentReport,
        name: &str,
        header: &str,
        rows: I,
    ) -> anyhow::Result<()>
    where
        I: IntoIterator<Item = R>,
        R: std::fmt::Display,
    {
        let Some(dir) = &self.out else {
            return Ok(());
        };
        let mut text = String::new();
        writeln!(text, "{header}").unwrap();
        for r in rows {
            writeln!(text, "{r}").unwrap();
        }
        fs::create_dir_all(dir)?;
        let path = dir.join(name);
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        report.data_files.push(name.to_string());
        Ok(())
    }
}

/// Runs the configured experiments in order and returns the report and
/// per-experiment wall-clock seconds.
pub fn run_all(ctx: &Ctx) -> anyhow::Result<(Report, Vec<(String, f64)>)> {
    let mut reports = Vec::new();
    let mut timing = Vec::new();
    for (id, run) in EXPERIMENTS {
        if !ctx.config.wants(id) {
            continue;
        }
        let start = Instant::now();
        let report = run(ctx).with_context(|| format!("experiment {id}"))?;
        timing.push((id.to_string(), start.elapsed().as_secs_f64()));
        reports.push(report);
    }
    Ok((Report::new(&ctx.config, reports), timing))
}

pub fn run_one(ctx: &Ctx, id: &str) -> anyhow::Result<ExperimentReport> {
    let (_, run) = EXPERIMENTS
        .iter()
        .find(|(e, _)| e.eq_ignore_ascii_case(id))
        .ok_or_else(|| anyhow::anyhow!("unknown experiment {id:?}"))?;
    run(ctx)
}

/// Empirical quantile (nearest rank on sorted copy).
pub fn quantile(xs: &[f64], q: f64) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let idx = ((q * v.len() as f64).ceil() as usize).clamp(1, v.len()) - 1;
    v[idx]
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().copied().collect::<Moments>().mean()
}

/// Unbiased sample variance.
pub fn variance(xs: &[f64]) -> f64 {
    xs.iter().copied().collect::<Moments>().variance()
}
