//! E5: finite-dimensional marginals of the height process.

use condensation_core::limits::spine_marginal_pmf;
use condensation_core::stats::{chi_square, correlation, Pmf};

use super::{reference, Ctx};
use crate::report::{Check, Comparison, ExperimentReport};
use crate::tolerances as tol;

pub const N: usize = 3_000;
pub const TIMES: [f64; 2] = [0.3, 0.7];
const TABLE: i64 = 80;

pub fn run(ctx: &Ctx) -> anyhow::Result<ExperimentReport> {
    let mut report = ExperimentReport::new("E5", "Marginals of the height process", ctx.seed());
    let spec = reference(2.5);
    let dist = ctx.law(&spec)?;
    report.distributions.push(spec.to_string());
    report.n_values = vec![N as u64];
    let idx = TIMES.map(|t| (N as f64 * t).floor() as usize);
    let pairs = ctx.conditioned("E5", &dist, N, ctx.config.location_trees, |t| {
        let h = t.depths();
        (h[idx[0]] as i64, h[idx[1]] as i64)
    })?;
    report.samples = pairs.len() as u64;
    let m = dist.mean();
    let pmf: Pmf = (1..=TABLE).map(|h| (h, spine_marginal_pmf(m, h))).collect();

    let columns = [
        pairs.iter().map(|p| p.0).collect::<Vec<_>>(),
        pairs.iter().map(|p| p.1).collect::<Vec<_>>(),
    ];
    for (t, xs) in TIMES.iter().zip(&columns) {
        let chi = chi_square(xs, &pmf, tol::CHI2_MIN_EXPECTED)?;
        report.checks.push(Check::new(
            format!("height_chi2_p_t{t}"),
            "height process marginals",
            format!("chi2 p-value of H_[nt] vs law of 1 + e_0 + e_1, {} cells, t={t}, n={N}", chi.bins.len()),
            chi.p_value,
            Comparison::Ge,
            tol::CHI2_LEVEL,
            0.0,
            tol::CHI2_CAL,
        ));
        let ones = xs.iter().filter(|&&h| h == 1).count() as f64 / xs.len() as f64;
        report.checks.push(Check::new(
            format!("height_one_t{t}"),
            "height process marginals",
            format!("P(H_[nt] = 1) vs (1 - m)^2, t={t}"),
            ones,
            Comparison::Info,
            (1.0 - m).powi(2),
            0.0,
            tol::INFO_CAL,
        ));
    }
    let as_f64 = |xs: &[i64]| xs.iter().map(|&x| x as f64).collect::<Vec<_>>();
    report.checks.push(Check::new(
        "height_correlation",
        "height process joint law",
        "correlation of (H_[0.3n], H_[0.7n]) vs Var(e_0)/(Var(e_0) + Var(e_1))",
        correlation(&as_f64(&columns[0]), &as_f64(&columns[1]))?,
        Comparison::RelLe,
        0.5,
        tol::SPINE_CORRELATION_REL,
        tol::SPINE_CAL,
    ));
    let rows = pairs.iter().map(|(a, b)| format!("{a},{b}"));
    ctx.write_csv(&mut report, "e5_heights.csv", "h_03n,h_07n", rows)?;
    Ok(report)
}
