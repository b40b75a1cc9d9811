//! E-luka: the Lukasiewicz path around the big jump, and asymptotic
//! independence of the first grafted subtrees.

use std::collections::BTreeMap;

use condensation_core::oracle::{exact_conditional_law, Statistic};
use condensation_core::stats::tv_distance;
use condensation_core::PlaneTree;

use super::{mean, quantile, reference, Ctx};
use crate::report::{Check, Comparison, ExperimentReport};
use crate::tolerances as tol;

pub const SIZES: [usize; 2] = [1_000, 2_000];
pub const ORACLE_SIZES: [usize; 3] = [10, 12, 14];
pub const T: f64 = 0.5;

/// `(sup_{i ≤ U} W_i / n, W_{⌊nT⌋ ∨ (U+1)} / n)`.
fn path_stats(tree: &PlaneTree) -> (f64, f64) {
    let n = tree.len() as f64;
    let (u, _) = tree.max_degree_vertex();
    let path = tree.lukasiewicz();
    let w = path.values();
    let before = w[..=u].iter().copied().max().unwrap_or(0) as f64 / n;
    let j = ((n * T).floor() as usize).max(u + 1).min(w.len() - 1);
    (before, w[j] as f64 / n)
}

/// TV between the law of `(ξ_1, ξ_2)` given `Δ ≥ 2` and the product of its
/// marginals.
fn dependence(law: &BTreeMap<Vec<i64>, f64>) -> f64 {
    let mut joint = BTreeMap::new();
    for (k, &p) in law.iter().filter(|(k, _)| k[0] >= 2) {
        *joint.entry((k[1], k[2])).or_insert(0.0) += p;
    }
    let total: f64 = joint.values().sum();
    joint.values_mut().for_each(|p| *p /= total);
    let (mut first, mut second) = (BTreeMap::new(), BTreeMap::new());
    for (&(a, b), &p) in &joint {
        *first.entry(a).or_insert(0.0) += p;
        *second.entry(b).or_insert(0.0) += p;
    }
    let product = first
        .iter()
        .flat_map(|(&a, &p)| second.iter().map(move |(&b, &q)| ((a, b), p * q)))
        .collect();
    tv_distance(&joint, &product)
}

pub fn run(ctx: &Ctx) -> anyhow::Result<ExperimentReport> {
    let mut report = ExperimentReport::new("E-luka", "Lukasiewicz path and subtree independence", ctx.seed());
    let spec = reference(2.5);
    let dist = ctx.law(&spec)?;
    report.distributions.push(spec.to_string());
    report.n_values = SIZES.iter().chain(&ORACLE_SIZES).map(|&n| n as u64).collect();
    let gamma = dist.gamma();

    let mut rows = Vec::new();
    let mut sup95 = Vec::new();
    let mut post = Vec::new();
    for n in SIZES {
        let s = ctx.conditioned("E-luka", &dist, n, ctx.config.luka_trees, path_stats)?;
        report.samples += s.len() as u64;
        rows.extend(s.iter().map(|(a, b)| format!("{n},{a},{b}")));
        sup95.push(quantile(&s.iter().map(|x| x.0).collect::<Vec<_>>(), 0.95));
        post.push(mean(&s.iter().map(|x| x.1).collect::<Vec<_>>()));
    }
    ctx.write_csv(&mut report, "eluka_path.csv", "n,sup_before_u,w_at_half", rows)?;
    report.checks.push(Check::new(
        "sup_before_u_vanishes",
        "Lukasiewicz path before the big jump",
        format!(
            "95% quantile of sup_(i <= U) W_i/n at n={} (target: value at n={})",
            SIZES[1], SIZES[0]
        ),
        sup95[1],
        Comparison::Le,
        sup95[0],
        0.0,
        tol::TREND_CAL,
    ));
    report.checks.push(Check::new(
        "post_jump_mean",
        "Lukasiewicz path after the big jump",
        format!("mean of W_([nt] v (U+1))/n vs gamma (1 - t), t={T}, n={}", SIZES[1]),
        post[1],
        Comparison::RelLe,
        gamma * (1.0 - T),
        tol::LUKA_MEAN_REL,
        tol::LUKA_CAL,
    ));

    let stat = Statistic::Joint(vec![Statistic::Delta, Statistic::Xi(1), Statistic::Xi(2)]);
    let mut tvs = Vec::new();
    for n in ORACLE_SIZES {
        tvs.push(dependence(&exact_conditional_law(&dist, n, &stat)?.pmf));
    }
    let rows = ORACLE_SIZES.iter().zip(&tvs).map(|(n, tv)| format!("{n},{tv:e}"));
    ctx.write_csv(&mut report, "eluka_independence.csv", "n,tv_joint_vs_product", rows)?;
    for w in 1..tvs.len() {
        report.checks.push(Check::new(
            format!("independence_n{}", ORACLE_SIZES[w]),
            "asymptotic independence of grafted subtrees",
            format!(
                "TV of (xi_1, xi_2) given Delta >= 2 vs product of marginals at n={} (target: value at n={}), exact",
                ORACLE_SIZES[w],
                ORACLE_SIZES[w - 1]
            ),
            tvs[w],
            Comparison::Le,
            tvs[w - 1],
            0.0,
            tol::ORACLE_TREND_CAL,
        ));
    }
    Ok(report)
}
