//! E4: logarithmic height of the condensation tree and the unconditioned
//! height tail.

use condensation_core::oracle::height_tail;
use condensation_core::samplers::sample_gw_height;
use condensation_core::stats::ols_slope;

use super::{mean, reference, Ctx};
use crate::report::{Check, Comparison, ExperimentReport};
use crate::tolerances as tol;

pub const SIZES: [usize; 3] = [1_000, 3_000, 10_000];
pub const PLATEAU: (usize, usize) = (10, 25);
/// Largest `k` the Monte Carlo cross-check can resolve at 10^7 trees.
pub const MC_KMAX: usize = 12;

pub fn run(ctx: &Ctx) -> anyhow::Result<ExperimentReport> {
    let mut report = ExperimentReport::new("E4", "Height of the condensation tree", ctx.seed());
    let spec = reference(2.5);
    let dist = ctx.law(&spec)?;
    report.distributions.push(spec.to_string());
    report.n_values = SIZES.iter().map(|&n| n as u64).collect();
    let m = dist.mean();
    let target = 1.0 / (1.0 / m).ln();

    let mut logs = Vec::new();
    let mut first = Vec::new();
    let mut second = Vec::new();
    let mut rows = Vec::new();
    for n in SIZES {
        let h = ctx.conditioned("E4", &dist, n, ctx.config.height_trees, |t| t.height() as f64)?;
        report.samples += h.len() as u64;
        let m1 = mean(&h);
        let m2 = mean(&h.iter().map(|x| x * x).collect::<Vec<_>>()).sqrt();
        rows.push(format!("{n},{m1},{m2}"));
        logs.push((n as f64).ln());
        first.push(m1);
        second.push(m2);
    }
    ctx.write_csv(&mut report, "e4_height.csv", "n,mean_height,l2_height", rows)?;
    report.checks.push(Check::new(
        "height_slope",
        "logarithmic height",
        "OLS slope of E[H(t_n)] against ln n vs 1/ln(1/m)",
        ols_slope(&logs, &first)?,
        Comparison::RelLe,
        target,
        tol::HEIGHT_SLOPE_REL,
        tol::HEIGHT_SLOPE_CAL,
    ));
    report.checks.push(Check::new(
        "height_slope_p2",
        "logarithmic height in L^p",
        "squared OLS slope of E[H(t_n)^2]^(1/2) against ln n vs 1/ln(1/m)^2",
        ols_slope(&logs, &second)?.powi(2),
        Comparison::RelLe,
        target * target,
        tol::HEIGHT_P2_REL,
        tol::HEIGHT_SLOPE_CAL,
    ));

    // exact tail by generating-function iteration
    let tail = height_tail(&dist, PLATEAU.1);
    let ratios: Vec<f64> = (PLATEAU.0..=PLATEAU.1).map(|k| tail[k] / m.powi(k as i32)).collect();
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(0.0, f64::max);
    report.checks.push(Check::new(
        "tail_plateau_spread",
        "unconditioned height tail",
        format!(
            "relative spread (max - min)/mean of P(H > k)/m^k over k in [{}, {}], exact",
            PLATEAU.0, PLATEAU.1
        ),
        (hi - lo) / mean(&ratios),
        Comparison::Le,
        tol::PLATEAU_SPREAD,
        0.0,
        tol::PLATEAU_CAL,
    ));

    // Monte Carlo cross-check of the exact tail
    let count = ctx.config.gw_heights;
    let heights = ctx.replicas("E4/gw-height", count, |_, rng| {
        sample_gw_height(&dist, rng, MC_KMAX as u32 + 1)
    });
    report.samples += count;
    let mut worst: f64 = 0.0;
    let mut rows = Vec::new();
    for (k, &p) in tail.iter().enumerate() {
        let emp = if k <= MC_KMAX {
            let hits = heights.iter().filter(|&&h| h as usize > k).count() as f64 / count as f64;
            let se = (p * (1.0 - p) / count as f64).sqrt();
            worst = worst.max((hits - p).abs() / se);
            hits.to_string()
        } else {
            String::new()
        };
        rows.push(format!("{k},{p:e},{},{emp}", p / m.powi(k as i32)));
    }
    ctx.write_csv(&mut report, "e4_tail.csv", "k,exact_tail,exact_ratio,mc_tail", rows)?;
    report.checks.push(Check::new(
        "tail_mc_agreement",
        "unconditioned height tail",
        format!("max over k <= {MC_KMAX} of |MC - exact|/SE for P(H > k), {count} GW trees"),
        worst,
        Comparison::Le,
        tol::HEIGHT_MC_Z,
        0.0,
        tol::Z_CAL,
    ));
    Ok(report)
}
