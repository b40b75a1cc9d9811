//! Exhaustive enumeration of plane trees of a given size and exact
//! conditional laws of tree statistics.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::offspring::OffspringDistribution;
use crate::stats::CompensatedSum;
use crate::tree::{PlaneTree, TreeStats};

pub const MAX_ENUMERATION_SIZE: usize = 14;

/// All plane trees with `n` vertices, in lexicographic order of their
/// out-degree sequences.
pub fn enumerate_trees(n: usize) -> Result<TreeEnumerator> {
    if n == 0 || n > MAX_ENUMERATION_SIZE {
        return Err(Error::OutOfRange(format!(
            "enumeration supports 1 <= n <= {MAX_ENUMERATION_SIZE}, got {n}"
        )));
    }
    let mut degrees = vec![0u32; n];
    complete_minimally(&mut degrees, 0, 0);
    Ok(TreeEnumerator {
        degrees,
        done: false,
    })
}

pub struct TreeEnumerator {
    degrees: Vec<u32>,
    done: bool,
}

/// Smallest valid completion of `degrees[from..]` given the path value `w`
/// reached after `degrees[..from]`.
fn complete_minimally(degrees: &mut [u32], from: usize, mut w: i64) {
    let n = degrees.len();
    for (i, d) in degrees.iter_mut().enumerate().skip(from) {
        let k = if i + 1 == n { 0 } else { (1 - w).max(0) };
        *d = k as u32;
        w += k - 1;
    }
}

impl Iterator for TreeEnumerator {
    type Item = PlaneTree;

    fn next(&mut self) -> Option<PlaneTree> {
        if self.done {
            return None;
        }
        let current = PlaneTree::from_degrees_unchecked(self.degrees.clone());
        let n = self.degrees.len();
        // W after the first i + 1 vertices
        let prefix: Vec<i64> = self
            .degrees
            .iter()
            .scan(0i64, |w, &k| {
                *w += k as i64 - 1;
                Some(*w)
            })
            .collect();
        self.done = true;
        for i in (0..n.saturating_sub(1)).rev() {
            // vertices after i must bring the path from w to −1
            let remaining = (n - 1 - i) as i64;
            if prefix[i] + 1 <= remaining - 1 {
                self.degrees[i] += 1;
                complete_minimally(&mut self.degrees, i + 1, prefix[i] + 1);
                self.done = false;
                break;
            }
        }
        Some(current)
    }
}

pub fn catalan(k: u64) -> u64 {
    (0..k).fold(1u64, |c, i| c * 2 * (2 * i + 1) / (i + 2))
}

/// `w(τ) = Π_u μ_{k_u(τ)}`.
pub fn tree_weight(dist: &OffspringDistribution, tree: &PlaneTree) -> f64 {
    tree.degrees().iter().map(|&k| dist.pmf(k as u64)).product()
}

/// Named statistic extractor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Statistic {
    /// `Δ`.
    Delta,
    /// Second largest out-degree.
    SecondDegree,
    /// `U`.
    U,
    /// `|u⋆|`.
    UStarGen,
    /// `𝓗`.
    Height,
    /// `H_i`.
    HeightAt(usize),
    /// `max_j ξ_j`.
    XiMax,
    /// `ξ_j`, or `−1` when `j > Δ`.
    Xi(usize),
    /// `Z_j`, or `−1` when `j > Δ`.
    Z(usize),
    Joint(Vec<Statistic>),
}

impl Statistic {
    /// Evaluates the statistic; joint statistics yield one entry per component.
    pub fn eval(&self, tree: &PlaneTree, stats: &TreeStats) -> Vec<i64> {
        let scalar = |v: i64| vec![v];
        match self {
            Statistic::Delta => scalar(stats.delta as i64),
            Statistic::SecondDegree => scalar(stats.second_degree as i64),
            Statistic::U => scalar(stats.u_star_index as i64),
            Statistic::UStarGen => scalar(stats.u_star_generation as i64),
            Statistic::Height => scalar(stats.height as i64),
            Statistic::HeightAt(i) => scalar(tree.height_function().get(*i).map_or(0, |&h| h as i64)),
            Statistic::XiMax => scalar(stats.xi_max() as i64),
            Statistic::Xi(j) => scalar(match *j {
                j if j >= 1 && j <= stats.xi.len() => stats.xi[j - 1] as i64,
                _ => -1,
            }),
            Statistic::Z(j) => scalar(match *j {
                0 => 0,
                j if j <= stats.z_partial.len() => stats.z(j) as i64,
                _ => -1,
            }),
            Statistic::Joint(parts) => parts.iter().flat_map(|p| p.eval(tree, stats)).collect(),
        }
    }
}

impl FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains(',') {
            let parts = s.split(',').map(str::parse).collect::<Result<Vec<_>>>()?;
            return Ok(Statistic::Joint(parts));
        }
        let unknown = || Error::UnknownStatistic(s.to_string());
        let index = |arg: &str| arg.parse::<usize>().map_err(|_| unknown());
        match s.split_once(':') {
            Some(("h", i)) => Ok(Statistic::HeightAt(index(i)?)),
            Some(("xi", j)) => Ok(Statistic::Xi(index(j)?)),
            Some(("z", j)) => Ok(Statistic::Z(index(j)?)),
            Some(_) => Err(unknown()),
            None => match s {
                "delta" => Ok(Statistic::Delta),
                "d2" | "second_degree" => Ok(Statistic::SecondDegree),
                "u" => Ok(Statistic::U),
                "ustar_gen" | "gen" => Ok(Statistic::UStarGen),
                "height" => Ok(Statistic::Height),
                "xi_max" => Ok(Statistic::XiMax),
                _ => Err(unknown()),
            },
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statistic::Delta => write!(f, "delta"),
            Statistic::SecondDegree => write!(f, "d2"),
            Statistic::U => write!(f, "u"),
            Statistic::UStarGen => write!(f, "ustar_gen"),
            Statistic::Height => write!(f, "height"),
            Statistic::HeightAt(i) => write!(f, "h:{i}"),
            Statistic::XiMax => write!(f, "xi_max"),
            Statistic::Xi(j) => write!(f, "xi:{j}"),
            Statistic::Z(j) => write!(f, "z:{j}"),
            Statistic::Joint(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
        }
    }
}

/// Exact law of a statistic under `P_μ(· | |τ| = n)`.
#[derive(Debug, Clone)]
pub struct ExactLaw {
    pub pmf: BTreeMap<Vec<i64>, f64>,
    /// `Σ_τ w(τ) = P(|τ| = n)`.
    pub total_weight: f64,
    pub trees: u64,
}

impl ExactLaw {
    /// Marginal pmf of a scalar statistic.
    pub fn scalar_pmf(&self) -> BTreeMap<i64, f64> {
        self.pmf.iter().map(|(k, &p)| (k[0], p)).collect()
    }
}

pub fn exact_conditional_law(
    dist: &OffspringDistribution,
    n: usize,
    statistic: &Statistic,
) -> Result<ExactLaw> {
    let mut acc: BTreeMap<Vec<i64>, CompensatedSum> = BTreeMap::new();
    let mut total = CompensatedSum::new();
    let mut trees = 0u64;
    for tree in enumerate_trees(n)? {
        trees += 1;
        let w = tree_weight(dist, &tree);
        if w == 0.0 {
            continue;
        }
        let stats = tree.stats();
        acc.entry(statistic.eval(&tree, &stats)).or_default().add(w);
        total.add(w);
    }
    let total_weight = total.value();
    if !(total_weight > 0.0) {
        return Err(Error::Infeasible(n));
    }
    let pmf = acc
        .into_iter()
        .map(|(k, s)| (k, s.value() / total_weight))
        .collect();
    Ok(ExactLaw {
        pmf,
        total_weight,
        trees,
    })
}

/// `Σ_τ w(τ)` over trees with `n` vertices.
pub fn size_probability(dist: &OffspringDistribution, n: usize) -> Result<f64> {
    let mut total = CompensatedSum::new();
    for tree in enumerate_trees(n)? {
        total.add(tree_weight(dist, &tree));
    }
    Ok(total.value())
}

/// `P(𝓗(τ) > k)` for `k = 0..=kmax`, iterating
/// `P(𝓗 > k) = Σ_j μ_j (1 − (1 − P(𝓗 > k − 1))^j)`.
///
/// The mass beyond the dense range contributes `min(tail mass, x · tail mean)`,
/// which is exact to first order in `x` and below `1e-9` in absolute terms
/// for the default range.
pub fn height_tail(dist: &OffspringDistribution, kmax: usize) -> Vec<f64> {
    let dense = dist.dense();
    let tail_mass = dist.tail_sum(dense.len() as u64);
    let dense_mean: CompensatedSum = dense.iter().enumerate().map(|(j, p)| j as f64 * p).collect();
    let tail_mean = (dist.mean() - dense_mean.value()).max(0.0);
    let mut out = Vec::with_capacity(kmax + 1);
    let mut x = 1.0 - dist.pmf(0);
    out.push(x);
    for _ in 1..=kmax {
        let log_keep = (-x).ln_1p();
        let mut acc = CompensatedSum::new();
        for (j, &p) in dense.iter().enumerate().skip(1) {
            if p > 0.0 {
                acc.add(p * -(j as f64 * log_keep).exp_m1());
            }
        }
        acc.add(tail_mass.min(x * tail_mean));
        x = acc.value();
        out.push(x);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_point() -> OffspringDistribution {
        OffspringDistribution::from_finite(&[0.5, 0.3, 0.2]).unwrap()
    }

    #[test]
    fn counts_are_catalan() {
        assert_eq!(enumerate_trees(1).unwrap().count(), 1);
        assert_eq!(enumerate_trees(4).unwrap().count(), 5);
        assert_eq!(enumerate_trees(10).unwrap().count() as u64, catalan(9));
        assert_eq!(catalan(9), 4862);
        assert!(enumerate_trees(0).is_err());
        assert!(enumerate_trees(15).is_err());
    }

    #[test]
    fn lexicographic_order_without_repeats() {
        let trees: Vec<Vec<u32>> = enumerate_trees(7)
            .unwrap()
            .map(|t| t.degrees().to_vec())
            .collect();
        assert!(trees.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(trees[0], vec![1, 1, 1, 1, 1, 1, 0]);
        assert_eq!(trees.last().unwrap(), &vec![6, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn small_exact_laws() {
        let d = three_point();
        let law = exact_conditional_law(&d, 1, &Statistic::Height).unwrap();
        assert_eq!(law.scalar_pmf(), [(0, 1.0)].into_iter().collect());
        let law = exact_conditional_law(&d, 3, &Statistic::Delta).unwrap();
        let (m0, m1, m2) = (0.5, 0.3, 0.2);
        let expect = m2 * m0 * m0 / (m2 * m0 * m0 + m1 * m1 * m0);
        assert!((law.scalar_pmf()[&2] - expect).abs() < 1e-15);
    }

    #[test]
    fn height_tail_matches_enumeration_bound() {
        let d = three_point();
        let tail = height_tail(&d, 3);
        assert!((tail[0] - 0.5).abs() < 1e-15);
        // P(𝓗 ≤ 1) = φ(μ_0)
        let phi = |s: f64| 0.5 + 0.3 * s + 0.2 * s * s;
        assert!((1.0 - tail[1] - phi(0.5)).abs() < 1e-15);
        assert!((1.0 - tail[2] - phi(phi(0.5))).abs() < 1e-15);
    }

    #[test]
    fn statistic_names_round_trip() {
        for name in ["delta", "u", "ustar_gen", "height", "h:3", "xi_max", "z:2", "xi:1", "d2", "delta,u,height"] {
            let s: Statistic = name.parse().unwrap();
            assert_eq!(s.to_string(), name);
        }
        assert!(matches!("width".parse::<Statistic>(), Err(Error::UnknownStatistic(_))));
        assert!("h:x".parse::<Statistic>().is_err());
    }
}
