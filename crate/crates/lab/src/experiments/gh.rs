//! E-gh: tall subtrees among the first half of the subtrees grafted on the
//! big vertex.

use condensation_core::stats::ols_slope;
use condensation_core::PlaneTree;

use super::{mean, reference, Ctx};
use crate::report::{Check, Comparison, ExperimentReport};
use crate::tolerances as tol;

pub const SIZES: [usize; 2] = [1_000, 10_000];
/// `η ln(1/m)` for the tall-subtree threshold `η ln n`.
pub const ETA_RATE: f64 = 0.7;

/// Heights of the subtrees rooted at the first `k` children of `u⋆`.
pub fn grafted_heights(tree: &PlaneTree, k: usize) -> Vec<u32> {
    let (u, _) = tree.max_degree_vertex();
    let depths = tree.depths();
    let sizes = tree.subtree_sizes();
    tree.children(u)
        .into_iter()
        .take(k)
        .map(|c| {
            let end = c + sizes[c] as usize;
            depths[c..end].iter().max().unwrap() - depths[c]
        })
        .collect()
}

/// Number of heights at least `level`, interpolated geometrically between
/// the integer thresholds around `level`.
fn interpolated_count(heights: &[u32], level: f64) -> f64 {
    let at_least = |h: f64| heights.iter().filter(|&&x| x as f64 >= h).count() as f64;
    let (lo, hi) = (level.floor(), level.ceil());
    let frac = level - lo;
    let (a, b) = (at_least(lo), at_least(hi));
    if frac == 0.0 || b == 0.0 {
        return a + frac * (b - a);
    }
    a.powf(1.0 - frac) * b.powf(frac)
}

pub fn run(ctx: &Ctx) -> anyhow::Result<ExperimentReport> {
    let mut report = ExperimentReport::new("E-gh", "Tall grafted subtrees", ctx.seed());
    let spec = reference(2.5);
    let dist = ctx.law(&spec)?;
    report.distributions.push(spec.to_string());
    report.n_values = SIZES.iter().map(|&n| n as u64).collect();
    let gamma = dist.gamma();
    let eta = ETA_RATE / (1.0 / dist.mean()).ln();

    let mut logs = Vec::new();
    let mut tall = Vec::new();
    let mut rows = Vec::new();
    for n in SIZES {
        let k = (gamma * n as f64 / 2.0).floor() as usize;
        let level = eta * (n as f64).ln();
        let counts = ctx.conditioned("E-gh", &dist, n, ctx.config.gh_trees, |t| {
            let h = grafted_heights(t, k);
            (h.len() as f64, interpolated_count(&h, level))
        })?;
        report.samples += counts.len() as u64;
        let all = mean(&counts.iter().map(|c| c.0).collect::<Vec<_>>());
        let tall_mean = mean(&counts.iter().map(|c| c.1).collect::<Vec<_>>());
        rows.push(format!("{n},{level},{all},{tall_mean}"));
        report.checks.push(Check::new(
            format!("eta0_count_n{n}"),
            "tall grafted subtrees",
            format!("mean number of subtrees among the first [gamma n/2] over gamma n/2, n={n}"),
            all / (gamma * n as f64 / 2.0),
            Comparison::RelLe,
            1.0,
            tol::GH_TRIVIAL_REL,
            tol::GH_CAL,
        ));
        logs.push((n as f64).ln());
        tall.push(tall_mean.ln());
    }
    ctx.write_csv(&mut report, "egh_counts.csv", "n,level,subtrees,tall_subtrees", rows)?;
    report.checks.push(Check::new(
        "tall_count_slope",
        "tall grafted subtrees",
        format!("log-log slope of the mean count of subtrees of height >= eta ln n, eta ln(1/m) = {ETA_RATE}"),
        ols_slope(&logs, &tall)?,
        Comparison::RelLe,
        1.0 - ETA_RATE,
        tol::GH_SLOPE_REL,
        tol::GH_CAL,
    ));
    Ok(report)
}
