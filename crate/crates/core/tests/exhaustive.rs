use condensation_core::oracle::{catalan, enumerate_trees, exact_conditional_law, size_probability, Statistic};
use condensation_core::par::replica_rng;
use condensation_core::samplers::{ConditionedSampler, Method};
use condensation_core::stats::{empirical_pmf, tv_distance};
use condensation_core::tree::{heights_from_path, Forest, LukasiewiczPath, PathKind};
use condensation_core::walk::{kemperman_size_pmf, size_pmf, vervaat, BridgeTable};
use condensation_core::{OffspringDistribution, PlaneTree};

fn reference_laws() -> Vec<OffspringDistribution> {
    [2.5, 1.5, 3.0]
        .into_iter()
        .map(|theta| OffspringDistribution::heavy_tail(theta, 0.5).unwrap())
        .collect()
}

fn all_trees_up_to(n: usize) -> impl Iterator<Item = PlaneTree> {
    (1..=n).flat_map(|k| enumerate_trees(k).unwrap())
}

#[test]
fn lukasiewicz_round_trip_all_trees() {
    let mut count = 0;
    for tree in enumerate_trees(9).unwrap() {
        let path = tree.lukasiewicz();
        assert_eq!(PlaneTree::from_lukasiewicz(&path).unwrap(), tree);
        count += 1;
    }
    assert_eq!(count, 1430);
}

#[test]
fn height_function_counting_formula() {
    for tree in all_trees_up_to(9) {
        let h = tree.height_function();
        let w = tree.lukasiewicz();
        let counted = heights_from_path(w.values());
        assert_eq!(&h[..tree.len()], &counted[..tree.len()], "{:?}", tree.degrees());
        assert_eq!(tree.contour().into_iter().max().unwrap(), tree.height());
        assert_eq!(tree.contour().len(), 2 * tree.len() + 1);
    }
}

#[test]
fn modified_path_links() {
    let mut checked = 0u64;
    for tree in all_trees_up_to(9) {
        let n = tree.len();
        let stats = tree.stats();
        let mp = tree.modified_path();
        let w_tilde = mp.path.values();
        assert_eq!(w_tilde.len(), n);
        // U = n − 1 − I and Δ = −W̃_{n−1}
        assert_eq!(stats.u_star_index, n - 1 - mp.pivot);
        assert_eq!(stats.delta as i64, -w_tilde[n - 1]);
        // prefix up to ζ̃_k codes the forest of the first k subtrees of u⋆
        for k in 1..=stats.delta as usize {
            let prefix = LukasiewiczPath::new(w_tilde[..=mp.zeta_tilde[k - 1]].to_vec(), PathKind::Forest).unwrap();
            let decoded = Forest::from_lukasiewicz(&prefix).unwrap();
            let forest = tree.subtree_forest(1, k).unwrap();
            assert_eq!(decoded, forest);
            assert_eq!(forest.total_size() as u64, stats.z(k));
        }
        // suffix after I, re-based, equals W_0..W_U
        let w = tree.lukasiewicz();
        let u = stats.u_star_index;
        for i in 0..=u {
            assert_eq!(w_tilde[mp.pivot + i] - w_tilde[mp.pivot], w.values()[i]);
        }
        checked += 1;
    }
    assert_eq!(checked, (1..=9).map(|k| catalan(k - 1)).sum::<u64>());
}

#[test]
fn vervaat_inverts_every_rotation() {
    for tree in enumerate_trees(8).unwrap() {
        let incr: Vec<i64> = tree.lukasiewicz().increments().collect();
        for r in 0..incr.len() {
            let rotated: Vec<i64> = incr[r..].iter().chain(&incr[..r]).copied().collect();
            assert_eq!(vervaat(&rotated), incr);
        }
    }
}

#[test]
fn kemperman_matches_enumeration() {
    for dist in reference_laws() {
        let direct = size_pmf(&dist, 12);
        for n in 1..=12 {
            let enumerated = size_probability(&dist, n).unwrap();
            let kemperman = kemperman_size_pmf(&dist, n).unwrap();
            assert!((kemperman - enumerated).abs() < 1e-12, "n={n}: {kemperman} vs {enumerated}");
            assert!((direct[n - 1] - enumerated).abs() < 1e-12);
        }
    }
}

#[test]
fn bridge_layouts_agree_with_enumeration() {
    use condensation_core::walk::{BridgeOptions, Layout};
    let dist = OffspringDistribution::from_finite(&[0.6, 0.2, 0.1, 0.0, 0.1]).unwrap();
    for n in 1..=12 {
        let enumerated = size_probability(&dist, n).unwrap();
        for layout in [Layout::Sequential, Layout::Dyadic] {
            let opts = BridgeOptions { layout, ..Default::default() };
            let t = BridgeTable::build(&dist, n, &opts).unwrap();
            assert!((t.kemperman() - enumerated).abs() < 1e-14);
        }
    }
}

#[test]
fn conditioned_sampler_matches_exact_law() {
    let dist = OffspringDistribution::heavy_tail(2.5, 0.5).unwrap();
    let n = 8;
    let stat: Statistic = "delta,u,height".parse().unwrap();
    let exact = exact_conditional_law(&dist, n, &stat).unwrap();
    let sampler = ConditionedSampler::new(&dist, n, Method::ExactBridge).unwrap();
    let mut rng = replica_rng(5, "tv-n8", 0);
    let draws: Vec<Vec<i64>> = (0..100_000)
        .map(|_| {
            let t = sampler.sample(&mut rng).unwrap();
            stat.eval(&t, &t.stats())
        })
        .collect();
    let tv = tv_distance(&empirical_pmf(&draws), &exact.pmf);
    assert!(tv < 0.02, "tv = {tv}");
}

#[test]
fn exact_law_is_normalized() {
    for dist in reference_laws() {
        let law = exact_conditional_law(&dist, 10, &Statistic::Delta).unwrap();
        let total: f64 = law.pmf.values().sum();
        assert!((total - 1.0).abs() < 1e-13);
        assert_eq!(law.trees, 4862);
    }
}
