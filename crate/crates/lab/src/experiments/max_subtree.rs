//! E-cor: the largest subtree grafted on the big vertex.

use condensation_core::limits::{stable_norming, Frechet};
use condensation_core::stats::ks_statistic;

use super::{quantile, reference, Ctx};
use crate::report::{Check, Comparison, ExperimentReport};
use crate::tolerances as tol;

pub const FRECHET_N: usize = 5_000;
pub const TREND_N: [usize; 2] = [4_000, 8_000];

fn rescaled_max(ctx: &Ctx, theta: f64, n: usize) -> anyhow::Result<Vec<f64>> {
    let dist = ctx.law(&reference(theta))?;
    let b_n = stable_norming(&dist, n as u64)?;
    ctx.conditioned(&format!("E-cor/theta{theta}"), &dist, n, ctx.config.trees, |t| {
        t.stats().xi_max() as f64 / b_n
    })
}

pub fn run(ctx: &Ctx) -> anyhow::Result<ExperimentReport> {
    let mut report = ExperimentReport::new("E-cor", "Largest subtree on the big vertex", ctx.seed());
    report.distributions = vec![reference(1.5).to_string(), reference(2.5).to_string()];
    report.n_values = vec![FRECHET_N as u64, TREND_N[0] as u64, TREND_N[1] as u64];
    let mut rows = Vec::new();

    let gamma = ctx.law(&reference(1.5))?.gamma();
    let heavy = rescaled_max(ctx, 1.5, FRECHET_N)?;
    let law = Frechet::new(1.5, gamma)?;
    report.checks.push(Check::new(
        "max_subtree_frechet_ks",
        "largest grafted subtree",
        format!("KS distance of max xi_i/B_n to exp(-(gamma u)^(-theta)/|Gamma(1-theta)|), theta=1.5, n={FRECHET_N}"),
        ks_statistic(&heavy, |u| law.cdf(u))?,
        Comparison::Le,
        tol::FRECHET_KS,
        0.0,
        tol::FRECHET_KS_CAL,
    ));
    rows.extend(heavy.iter().map(|x| format!("1.5,{FRECHET_N},{x}")));

    let [small, large] = TREND_N.map(|n| rescaled_max(ctx, 2.5, n));
    let (small, large) = (small?, large?);
    report.checks.push(Check::new(
        "max_subtree_vanishes",
        "largest grafted subtree",
        format!(
            "95% quantile of max xi_i/B_n at n={} (target: value at n={}), theta=2.5",
            TREND_N[1], TREND_N[0]
        ),
        quantile(&large, 0.95),
        Comparison::Le,
        quantile(&small, 0.95),
        0.0,
        tol::TREND_CAL,
    ));
    rows.extend(small.iter().map(|x| format!("2.5,{},{x}", TREND_N[0])));
    rows.extend(large.iter().map(|x| format!("2.5,{},{x}", TREND_N[1])));
    report.samples = (heavy.len() + small.len() + large.len()) as u64;
    ctx.write_csv(&mut report, "ecor_max_subtree.csv", "theta,n,max_xi_over_b", rows)?;
    Ok(report)
}
