//! Self-test of the stable sampler by Laplace-transform matching.

use condensation_core::limits::{laplace_self_test, Stable};

use super::{variance, Ctx};
use crate::report::{Check, Comparison, ExperimentReport};
use crate::tolerances as tol;

pub const LAMBDAS: [f64; 3] = [0.1, 0.25, 0.5];

pub fn run(ctx: &Ctx) -> anyhow::Result<ExperimentReport> {
    let mut report = ExperimentReport::new("stable", "Stable sampler self-test", ctx.seed());
    let draws = ctx.config.stable_draws;
    let mut rows = Vec::new();
    for alpha in [1.5, 2.0] {
        for c in laplace_self_test(alpha, &LAMBDAS, draws, ctx.seed())? {
            rows.push(format!("{alpha},{},{:e},{:e},{:e}", c.lambda, c.estimate, c.standard_error, c.target));
            report.checks.push(Check::new(
                format!("laplace_a{alpha}_l{}", c.lambda),
                "stable limit: Laplace exponent",
                format!("mean of exp(-lambda Y) vs exp(lambda^alpha), alpha={alpha}, lambda={}", c.lambda),
                c.estimate,
                Comparison::AbsLe,
                c.target,
                tol::LAPLACE_Z * c.standard_error,
                tol::LAPLACE_CAL,
            ));
        }
        report.samples += draws;
    }
    ctx.write_csv(&mut report, "stable_laplace.csv", "alpha,lambda,estimate,se,target", rows)?;

    let gauss = Stable::new(2.0)?;
    let ys = ctx.replicas("stable/gauss", draws, |_, rng| gauss.sample(rng));
    report.checks.push(Check::new(
        "gauss_variance",
        "stable limit: Laplace exponent",
        "sample variance of Y at alpha=2 vs 2",
        variance(&ys),
        Comparison::RelLe,
        2.0,
        tol::GAUSS_VARIANCE_REL,
        tol::LAPLACE_CAL,
    ));
    Ok(report)
}
