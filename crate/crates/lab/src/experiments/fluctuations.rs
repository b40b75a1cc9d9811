//! E3: fluctuations of the subtree sizes grafted on the big vertex, and the
//! progeny norming constants.

use condensation_core::limits::{stable_norming, Stable};
use condensation_core::offspring::norming_sequence;
use condensation_core::samplers::sample_gw_size;
use condensation_core::stats::ks_two_sample;

use super::{mean, quantile, reference, variance, Ctx};
use crate::report::{Check, Comparison, ExperimentReport};
use crate::tolerances as tol;

pub const N: usize = 5_000;
pub const TIMES: [f64; 3] = [0.25, 0.5, 0.75];
const PROGENY_CAP: usize = 1 << 26;

pub fn run(ctx: &Ctx) -> anyhow::Result<ExperimentReport> {
    let mut report = ExperimentReport::new("E3", "Subtree-size fluctuations", ctx.seed());
    report.n_values = vec![N as u64];
    let mut rows = Vec::new();
    for theta in [3.0, 1.5] {
        let spec = reference(theta);
        let dist = ctx.law(&spec)?;
        report.distributions.push(spec.to_string());
        let gamma = dist.gamma();
        let b_n = stable_norming(&dist, N as u64)?;
        // X_t for t = 0 and TIMES
        let paths = ctx.conditioned(&format!("E3/theta{theta}"), &dist, N, ctx.config.trees, |t| {
            let s = t.stats();
            let delta = s.delta as f64;
            let x = |t: f64| {
                let j = (delta * t).floor() as usize;
                (s.z(j) as f64 - delta * t / gamma) / b_n
            };
            [x(0.0), x(TIMES[0]), x(TIMES[1]), x(TIMES[2])]
        })?;
        report.samples += paths.len() as u64;
        if theta == 3.0 {
            let worst = paths.iter().map(|p| p[0].abs()).fold(0.0, f64::max);
            report.checks.push(Check::new(
                "start_is_zero",
                "subtree size fluctuations",
                "max |X_0| over trees",
                worst,
                Comparison::AbsLe,
                0.0,
                0.0,
                tol::STRUCTURAL_CAL,
            ));
        }
        let alpha = theta.min(2.0);
        let y = Stable::new(alpha)?;
        for (k, &t) in TIMES.iter().enumerate() {
            let xs: Vec<f64> = paths.iter().map(|p| p[k + 1]).collect();
            rows.extend(xs.iter().map(|x| format!("{theta},{t},{x}")));
            if theta >= 2.0 {
                let target = 2.0 * t / (gamma * gamma);
                let cmp = if t == 0.5 { Comparison::RelLe } else { Comparison::Info };
                report.checks.push(Check::new(
                    format!("variance_theta{theta}_t{t}"),
                    "subtree size fluctuations",
                    format!("variance of (Z_[Delta t] - Delta t/gamma)/B_n vs 2t/gamma^2, t={t}"),
                    variance(&xs),
                    cmp,
                    target,
                    tol::SUBTREE_VARIANCE_REL,
                    tol::GAUSSIAN_VARIANCE_CAL,
                ));
            } else {
                let scale = t.powf(1.0 / alpha) / gamma;
                let m = ctx.config.two_sample_reference;
                let reference = ctx.replicas(&format!("E3/y/theta{theta}/t{t}"), m, |_, rng| scale * y.sample(rng));
                report.checks.push(Check::new(
                    format!("ks_theta{theta}_t{t}"),
                    "subtree size fluctuations",
                    format!("two-sample KS of (Z_[Delta t] - Delta t/gamma)/B_n vs t^(1/alpha) Y_1/gamma, t={t}"),
                    ks_two_sample(&xs, &reference)?,
                    Comparison::Le,
                    tol::two_sample_ks(xs.len() as u64, m),
                    0.0,
                    tol::TWO_SAMPLE_CAL,
                ));
            }
        }
    }
    ctx.write_csv(&mut report, "e3_subtree_process.csv", "theta,t,x", rows)?;

    // progeny: sigma'/sigma for finite variance, quantile ratio otherwise
    let count = ctx.config.progeny_samples;
    for theta in [3.0, 1.5] {
        let dist = ctx.law(&reference(theta))?;
        let gamma = dist.gamma();
        let sizes: Vec<f64> = ctx
            .replicas(&format!("E3/progeny/theta{theta}"), count, |_, rng| {
                sample_gw_size(&dist, rng, PROGENY_CAP).unwrap_or(PROGENY_CAP)
            })
            .into_iter()
            .map(|s| s as f64)
            .collect();
        report.samples += count;
        report.checks.push(Check::new(
            format!("progeny_mean_theta{theta}"),
            "progeny moments",
            "mean total progeny vs 1/gamma",
            mean(&sizes),
            Comparison::Info,
            1.0 / gamma,
            0.0,
            tol::INFO_CAL,
        ));
        if let Some(var) = dist.variance() {
            report.checks.push(Check::new(
                "sigma_ratio",
                "progeny norming link",
                format!("sigma'/sigma from {count} progeny samples vs gamma^(-3/2), theta={theta}"),
                variance(&sizes).sqrt() / var.sqrt(),
                Comparison::RelLe,
                gamma.powf(-1.5),
                tol::PROGENY_SIGMA_REL,
                tol::PROGENY_SIGMA_CAL,
            ));
        } else {
            let target = gamma.powf(-1.0 - 1.0 / theta.min(2.0));
            for n in [100u64, 1_000, 10_000] {
                let b_prime = quantile(&sizes, 1.0 - 1.0 / n as f64);
                let b = norming_sequence(&dist, n)?;
                report.checks.push(Check::new(
                    format!("norming_ratio_theta{theta}_n{n}"),
                    "progeny norming link",
                    format!("B'_n/B_n from tail quantiles at level 1/n, n={n}"),
                    b_prime / b,
                    Comparison::Info,
                    target,
                    0.0,
                    tol::INFO_CAL,
                ));
            }
        }
    }
    Ok(report)
}
