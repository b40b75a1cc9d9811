//! Oracle-backed exactness checks: Kemperman's formula, the exact sampler
//! against enumeration, and the structural identities of the modified path.

use condensation_core::oracle::{enumerate_trees, exact_conditional_law, size_probability, Statistic};
use condensation_core::par::map_replicas;
use condensation_core::samplers::{ConditionedSampler, Method};
use condensation_core::stats::{empirical_pmf, tv_distance};
use condensation_core::tree::{heights_from_path, Forest, LukasiewiczPath, PathKind};
use condensation_core::walk::kemperman_size_pmf;
use condensation_core::PlaneTree;

use super::{reference, Ctx};
use crate::report::{Check, Comparison, ExperimentReport};
use crate::tolerances as tol;

pub const KEMPERMAN_MAX_N: usize = 12;
pub const TV_N: usize = 8;
pub const STRUCTURAL_MAX_N: usize = 9;

pub fn run(ctx: &Ctx) -> anyhow::Result<ExperimentReport> {
    let mut report = ExperimentReport::new("exact", "Exactness against enumeration", ctx.seed());
    report.n_values = (1..=KEMPERMAN_MAX_N as u64).collect();

    let mut rows = Vec::new();
    for theta in [2.5, 1.5, 3.0] {
        let spec = reference(theta);
        let dist = ctx.law(&spec)?;
        report.distributions.push(spec.to_string());
        let mut worst = 0.0f64;
        for n in 1..=KEMPERMAN_MAX_N {
            let enumerated = size_probability(&dist, n)?;
            let kemperman = kemperman_size_pmf(&dist, n)?;
            worst = worst.max((kemperman - enumerated).abs());
            rows.push(format!("{theta},{n},{enumerated:e},{kemperman:e}"));
        }
        report.checks.push(Check::new(
            format!("kemperman_theta{theta}"),
            "Kemperman formula",
            format!("max_n<=12 |P(|tau|=n) by enumeration - (1/n)P(W_n=-1)|, theta={theta}"),
            worst,
            Comparison::AbsLe,
            0.0,
            tol::KEMPERMAN_ABS,
            tol::KEMPERMAN_CAL,
        ));
    }
    ctx.write_csv(&mut report, "exact_kemperman.csv", "theta,n,enumeration,kemperman", rows)?;

    // exact sampler vs enumeration at n = 8
    let dist = ctx.law(&reference(2.5))?;
    let stat: Statistic = "delta,u,height".parse()?;
    let exact = exact_conditional_law(&dist, TV_N, &stat)?;
    let sampler = ConditionedSampler::new(&dist, TV_N, Method::ExactBridge)?;
    let draws = map_replicas(ctx.seed(), "exact/tv", ctx.config.tv_samples, |_, rng| {
        let t = sampler.sample(rng).expect("n = 8 is feasible");
        stat.eval(&t, &t.stats())
    });
    let empirical = empirical_pmf(&draws);
    let tv = tv_distance(&empirical, &exact.pmf);
    report.samples += ctx.config.tv_samples;
    report.checks.push(Check::new(
        "tv_n8",
        "Vervaat bijection",
        "TV between exact-bridge sampler and enumerated law of (delta, U, height) at n=8",
        tv,
        Comparison::Le,
        tol::TV_N8,
        0.0,
        tol::TV_N8_CAL,
    ));
    let rows = exact.pmf.iter().map(|(k, p)| {
        let e = empirical.get(k).copied().unwrap_or(0.0);
        format!("{},{},{},{p:e},{e:e}", k[0], k[1], k[2])
    });
    ctx.write_csv(&mut report, "exact_tv_n8.csv", "delta,u,height,exact,empirical", rows)?;

    // structural identities, all trees with at most 9 vertices
    let v = structural_violations(STRUCTURAL_MAX_N)?;
    let structural = [
        ("links_u", "modified path: pivot and degree", "violations of U = n - 1 - I", v.u_identity),
        ("links_delta", "modified path: pivot and degree", "violations of Delta = -W~_{n-1}", v.delta_identity),
        ("links_forest_prefix", "modified path: forest prefix", "violations of the forest-prefix property", v.forest_prefix),
        ("links_suffix", "modified path: suffix", "violations of the re-based suffix identity", v.suffix),
        ("round_trip", "Lukasiewicz bijection", "Lukasiewicz round-trip failures", v.round_trip),
        ("height_counting", "height coding", "height function vs counting formula mismatches", v.height_counting),
    ];
    for (id, thm, desc, count) in structural {
        report.checks.push(Check::new(
            id,
            thm,
            format!("{desc}, all {} trees with n <= {STRUCTURAL_MAX_N}", v.trees),
            count as f64,
            Comparison::AbsLe,
            0.0,
            0.0,
            tol::STRUCTURAL_CAL,
        ));
    }
    Ok(report)
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct Violations {
    pub trees: u64,
    pub u_identity: u64,
    pub delta_identity: u64,
    pub forest_prefix: u64,
    pub suffix: u64,
    pub round_trip: u64,
    pub height_counting: u64,
}

/// Counts violations of the structural identities over every tree with at
/// most `max_n` vertices.
pub fn structural_violations(max_n: usize) -> anyhow::Result<Violations> {
    let mut v = Violations::default();
    for n in 1..=max_n {
        for tree in enumerate_trees(n)? {
            v.trees += 1;
            tally(&tree, &mut v)?;
        }
    }
    Ok(v)
}

fn tally(tree: &PlaneTree, v: &mut Violations) -> anyhow::Result<()> {
    let n = tree.len();
    let stats = tree.stats();
    let mp = tree.modified_path();
    let wt = mp.path.values();
    v.u_identity += (stats.u_star_index != n - 1 - mp.pivot) as u64;
    v.delta_identity += (stats.delta as i64 != -wt[n - 1]) as u64;
    let prefix_ok = (1..=stats.delta as usize).all(|k| {
        let Some(&end) = mp.zeta_tilde.get(k - 1) else {
            return false;
        };
        let decoded = LukasiewiczPath::new(wt[..=end].to_vec(), PathKind::Forest)
            .and_then(|p| Forest::from_lukasiewicz(&p));
        matches!((decoded, tree.subtree_forest(1, k)), (Ok(a), Ok(b)) if a == b)
    });
    v.forest_prefix += !prefix_ok as u64;
    let w = tree.lukasiewicz();
    let suffix_ok = (0..=stats.u_star_index).all(|i| wt[mp.pivot + i] - wt[mp.pivot] == w.values()[i]);
    v.suffix += !suffix_ok as u64;
    v.round_trip += (PlaneTree::from_lukasiewicz(&w)? != *tree) as u64;
    let counted = heights_from_path(w.values());
    v.height_counting += (tree.height_function()[..n] != counted[..n]) as u64;
    Ok(())
}
