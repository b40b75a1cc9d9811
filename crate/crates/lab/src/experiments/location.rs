//! E2: index and generation of the vertex of maximal degree.

use condensation_core::limits::{geometric_pmf, ULocation};
use condensation_core::stats::{chi_square, Pmf};

use super::{reference, Ctx};
use crate::report::{Check, Comparison, ExperimentReport};
use crate::tolerances as tol;

pub const N: usize = 3_000;
const U_TABLE: usize = 200;
const GEN_TABLE: i64 = 60;

pub fn run(ctx: &Ctx) -> anyhow::Result<ExperimentReport> {
    let mut report = ExperimentReport::new("E2", "Location of the vertex of maximal degree", ctx.seed());
    let spec = reference(2.5);
    let dist = ctx.law(&spec)?;
    report.distributions.push(spec.to_string());
    report.n_values = vec![N as u64];
    let count = ctx.config.location_trees;
    report.samples = count;
    let draws = ctx.conditioned("E2", &dist, N, count, |t| {
        let s = t.stats();
        (s.u_star_index as i64, s.u_star_generation as i64)
    })?;
    let u: Vec<i64> = draws.iter().map(|d| d.0).collect();
    let gen: Vec<i64> = draws.iter().map(|d| d.1).collect();

    let limit = ULocation::new(&dist, U_TABLE)?;
    let u_pmf: Pmf = (0..=U_TABLE as i64).map(|i| (i, limit.pmf(i).unwrap())).collect();
    let m = dist.mean();
    let gen_pmf: Pmf = (0..=GEN_TABLE).map(|i| (i, geometric_pmf(m, i))).collect();

    let chi_u = chi_square(&u, &u_pmf, tol::CHI2_MIN_EXPECTED)?;
    report.checks.push(Check::new(
        "u_chi2_p",
        "location of the big vertex",
        format!(
            "chi2 p-value of U vs gamma P(|tau| >= i+1), {} cells, n={N} (tabulated remainder {:.2e}, envelope {:.2e})",
            chi_u.bins.len(),
            limit.remainder(),
            limit.remainder_envelope()
        ),
        chi_u.p_value,
        Comparison::Ge,
        tol::CHI2_LEVEL,
        0.0,
        tol::CHI2_CAL,
    ));
    let chi_g = chi_square(&gen, &gen_pmf, tol::CHI2_MIN_EXPECTED)?;
    report.checks.push(Check::new(
        "generation_chi2_p",
        "generation of the big vertex",
        format!("chi2 p-value of |u*| vs geometric(1 - m), {} cells, n={N}", chi_g.bins.len()),
        chi_g.p_value,
        Comparison::Ge,
        tol::CHI2_LEVEL,
        0.0,
        tol::CHI2_CAL,
    ));

    let freq = |xs: &[i64], v: i64| xs.iter().filter(|&&x| x == v).count() as f64 / xs.len() as f64;
    let binomial_se = |p: f64| (p * (1.0 - p) / count as f64).sqrt();
    let gamma = dist.gamma();
    report.checks.push(Check::new(
        "u_zero",
        "location of the big vertex",
        "P(U = 0) vs gamma",
        freq(&u, 0),
        Comparison::AbsLe,
        gamma,
        tol::HEIGHT_MC_Z * binomial_se(gamma),
        tol::Z_CAL,
    ));
    report.checks.push(Check::new(
        "generation_zero",
        "generation of the big vertex",
        "P(|u*| = 0) vs 1 - m",
        freq(&gen, 0),
        Comparison::AbsLe,
        1.0 - m,
        tol::HEIGHT_MC_Z * binomial_se(1.0 - m),
        tol::Z_CAL,
    ));

    let rows = (0..=30i64).map(|i| {
        format!(
            "{i},{},{:e},{},{:e}",
            freq(&u, i),
            u_pmf[&i],
            freq(&gen, i),
            gen_pmf.get(&i).copied().unwrap_or(0.0)
        )
    });
    ctx.write_csv(&mut report, "e2_location.csv", "i,u_empirical,u_limit,gen_empirical,gen_limit", rows)?;
    Ok(report)
}
