//! E1: condensation of the degree, fluctuations of the maximal degree and
//! the law of the second largest degree.

use condensation_core::limits::{stable_norming, Frechet, Stable};
use condensation_core::stats::{ks_statistic, ks_two_sample};

use super::{quantile, reference, variance, Ctx};
use crate::report::{Check, Comparison, ExperimentReport};
use crate::tolerances as tol;

pub const BAND_N: usize = 5_000;
pub const GAUSSIAN_N: usize = 10_000;
pub const FRECHET_N: usize = 5_000;

struct Sample {
    theta: f64,
    n: usize,
    gamma: f64,
    b_n: f64,
    /// `(Δ, D_n)` per tree.
    degrees: Vec<(u32, u32)>,
}

impl Sample {
    fn ratios(&self) -> Vec<f64> {
        let scale = self.gamma * self.n as f64;
        self.degrees.iter().map(|&(d, _)| d as f64 / scale).collect()
    }

    fn fluctuations(&self) -> Vec<f64> {
        let centre = self.gamma * self.n as f64;
        self.degrees.iter().map(|&(d, _)| (d as f64 - centre) / self.b_n).collect()
    }

    fn second(&self) -> Vec<f64> {
        self.degrees.iter().map(|&(_, d2)| d2 as f64 / self.b_n).collect()
    }
}

fn sample(ctx: &Ctx, theta: f64, n: usize) -> anyhow::Result<Sample> {
    let dist = ctx.law(&reference(theta))?;
    let degrees = ctx.conditioned(&format!("E1/theta{theta}"), &dist, n, ctx.config.trees, |t| {
        let s = t.stats();
        (s.delta, s.second_degree)
    })?;
    Ok(Sample {
        theta,
        n,
        gamma: dist.gamma(),
        b_n: stable_norming(&dist, n as u64)?,
        degrees,
    })
}

pub fn run(ctx: &Ctx) -> anyhow::Result<ExperimentReport> {
    let mut report = ExperimentReport::new("E1", "Condensation of the maximal degree", ctx.seed());
    for theta in [2.5, 3.0, 1.5] {
        report.distributions.push(reference(theta).to_string());
    }
    report.n_values = vec![BAND_N as u64, 2 * BAND_N as u64, GAUSSIAN_N as u64];
    let samples = [
        sample(ctx, 2.5, BAND_N)?,
        sample(ctx, 2.5, 2 * BAND_N)?,
        sample(ctx, 3.0, GAUSSIAN_N)?,
        sample(ctx, 1.5, FRECHET_N)?,
    ];
    let [band, band2, gauss, frechet] = &samples;
    report.samples = samples.iter().map(|s| s.degrees.len() as u64).sum();

    let r = band.ratios();
    let inside = r.iter().filter(|&&x| (x - 1.0).abs() <= tol::BAND_HALF_WIDTH).count();
    report.checks.push(Check::new(
        "band_fraction",
        "degree condensation",
        format!("fraction of Delta/(gamma n) in [0.8, 1.2], theta=2.5, n={BAND_N}"),
        inside as f64 / r.len() as f64,
        Comparison::Ge,
        tol::BAND_FRACTION,
        0.0,
        tol::BAND_CAL,
    ));
    report.checks.push(Check::new(
        "band_median",
        "degree condensation",
        format!("median of Delta/(gamma n), theta=2.5, n={BAND_N}"),
        quantile(&r, 0.5),
        Comparison::AbsLe,
        1.0,
        tol::MEDIAN_ABS,
        tol::BAND_CAL,
    ));
    let width = |s: &Sample| quantile(&s.ratios().iter().map(|x| (x - 1.0).abs()).collect::<Vec<_>>(), 0.95);
    report.checks.push(Check::new(
        "band_shrinks",
        "degree condensation",
        format!(
            "95% quantile of |Delta/(gamma n) - 1| at n={} (target: value at n={BAND_N})",
            2 * BAND_N
        ),
        width(band2),
        Comparison::Le,
        width(band),
        0.0,
        tol::TREND_CAL,
    ));
    report.checks.push(Check::new(
        "second_degree_vanishes",
        "second largest degree",
        format!("95% quantile of D_n/B_n at n={} (target: value at n={BAND_N}), theta=2.5", 2 * BAND_N),
        quantile(&band2.second(), 0.95),
        Comparison::Le,
        quantile(&band.second(), 0.95),
        0.0,
        tol::TREND_CAL,
    ));

    report.checks.push(Check::new(
        "gaussian_variance",
        "fluctuations of the maximal degree",
        format!("sample variance of (Delta - gamma n)/B_n, theta=3, n={GAUSSIAN_N}"),
        variance(&gauss.fluctuations()),
        Comparison::RelLe,
        2.0,
        tol::GAUSSIAN_VARIANCE_REL,
        tol::GAUSSIAN_VARIANCE_CAL,
    ));

    let law = Frechet::new(frechet.theta, 1.0)?;
    report.checks.push(Check::new(
        "second_degree_frechet_ks",
        "second largest degree",
        format!("KS distance of D_n/B_n to the Frechet-type cdf, theta=1.5, n={FRECHET_N}"),
        ks_statistic(&frechet.second(), |u| law.cdf(u))?,
        Comparison::Le,
        tol::FRECHET_KS,
        0.0,
        tol::FRECHET_KS_CAL,
    ));

    let m = ctx.config.two_sample_reference;
    for s in [band, frechet] {
        let alpha = s.theta.min(2.0);
        let y = Stable::new(alpha)?;
        let reference = ctx.replicas(&format!("E1/minus-y/alpha{alpha}"), m, |_, rng| -y.sample(rng));
        let fl = s.fluctuations();
        report.checks.push(Check::new(
            format!("fluctuation_ks_theta{}", s.theta),
            "fluctuations of the maximal degree",
            format!("two-sample KS of (Delta - gamma n)/B_n vs -Y_1, theta={}, n={}", s.theta, s.n),
            ks_two_sample(&fl, &reference)?,
            Comparison::Le,
            tol::two_sample_ks(fl.len() as u64, m),
            0.0,
            tol::TWO_SAMPLE_CAL,
        ));
    }

    let rows = samples
        .iter()
        .flat_map(|s| s.degrees.iter().map(move |(d, d2)| format!("{},{},{d},{d2},{}", s.theta, s.n, s.b_n)));
    ctx.write_csv(&mut report, "e1_degrees.csv", "theta,n,delta,second_degree,b_n", rows)?;
    Ok(report)
}
