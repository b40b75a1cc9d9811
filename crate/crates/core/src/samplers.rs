//! Tree samplers: unconditioned Galton–Watson trees, trees conditioned on
//! their size (exact), an approximate condensation sampler and the truncated
//! local limit `T̂`.

use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::offspring::OffspringDistribution;
use crate::tree::PlaneTree;
use crate::walk::{rejection_bridge, vervaat, BridgeOptions, BridgeTable};

/// Unconditioned GW tree, or [`Error::Overflow`] as soon as it is certain to
/// exceed `size_cap` vertices.
pub fn sample_gw<R: Rng + ?Sized>(
    dist: &OffspringDistribution,
    rng: &mut R,
    size_cap: usize,
) -> Result<PlaneTree> {
    let mut degrees = Vec::new();
    grow_gw(dist, rng, size_cap, |k| degrees.push(k as u32))?;
    Ok(PlaneTree::from_degrees_unchecked(degrees))
}

/// Total progeny only.
pub fn sample_gw_size<R: Rng + ?Sized>(
    dist: &OffspringDistribution,
    rng: &mut R,
    size_cap: usize,
) -> Result<usize> {
    grow_gw(dist, rng, size_cap, |_| {})
}

fn grow_gw<R: Rng + ?Sized, F: FnMut(u64)>(
    dist: &OffspringDistribution,
    rng: &mut R,
    size_cap: usize,
    mut emit: F,
) -> Result<usize> {
    // pending = vertices discovered but not yet visited
    let mut pending: u64 = 1;
    let mut len: u64 = 0;
    while pending > 0 {
        let k = dist.sample(rng);
        len += 1;
        pending = pending - 1 + k;
        if k > u32::MAX as u64 || len.saturating_add(pending) > size_cap as u64 {
            return Err(Error::Overflow { cap: size_cap });
        }
        emit(k);
    }
    Ok(len as usize)
}

/// GW tree whose vertices at depth `depth_cap` are turned into leaves.
/// Returns the degrees and whether anything was cut.
/// Height of an unconditioned GW tree, capped at `depth_cap`, by tracking
/// generation sizes only.
pub fn sample_gw_height<R: Rng + ?Sized>(dist: &OffspringDistribution, rng: &mut R, depth_cap: u32) -> u32 {
    let mut z = 1u64;
    let mut h = 0u32;
    while h < depth_cap {
        let next: u64 = (0..z).map(|_| dist.sample(rng)).sum();
        if next == 0 {
            return h;
        }
        h += 1;
        z = next;
    }
    depth_cap
}

fn sample_gw_truncated<R: Rng + ?Sized>(
    dist: &OffspringDistribution,
    rng: &mut R,
    depth_cap: u32,
) -> (Vec<u32>, bool) {
    let mut out = Vec::new();
    let mut cut = false;
    // remaining child slots of the open ancestors of the next vertex
    let mut open: Vec<u64> = Vec::new();
    loop {
        let depth = open.len() as u32;
        let mut k = dist.sample(rng);
        if depth >= depth_cap {
            cut |= k > 0;
            k = 0;
        }
        out.push(k as u32);
        if k > 0 {
            open.push(k);
        }
        loop {
            match open.last_mut() {
                Some(0) => {
                    open.pop();
                }
                Some(left) => {
                    *left -= 1;
                    break;
                }
                None => return (out, cut),
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ExactBridge,
    Rejection,
    Auto,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact-bridge" | "bridge" | "exact" => Ok(Method::ExactBridge),
            "rejection" => Ok(Method::Rejection),
            "auto" => Ok(Method::Auto),
            other => Err(Error::Config(format!("unknown sampling method `{other}`"))),
        }
    }
}

/// Under `auto`, rejection is used only for short bridges whose acceptance
/// probability is at least this.
pub const AUTO_REJECTION_MIN_ACCEPTANCE: f64 = 0.05;
pub const AUTO_REJECTION_MAX_N: usize = 64;

/// Reusable exact sampler of `P_μ(· | |τ| = n)`.
#[derive(Debug, Clone)]
pub struct ConditionedSampler {
    dist: OffspringDistribution,
    n: usize,
    table: Option<BridgeTable>,
    acceptance: f64,
    method: Method,
    max_tries: u64,
}

impl ConditionedSampler {
    pub fn new(dist: &OffspringDistribution, n: usize, method: Method) -> Result<Self> {
        Self::with_options(dist, n, method, &BridgeOptions::default())
    }

    pub fn with_options(
        dist: &OffspringDistribution,
        n: usize,
        method: Method,
        opts: &BridgeOptions,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("tree size must be at least 1".into()));
        }
        let table = BridgeTable::build(dist, n, opts)?;
        let acceptance = table.bridge_probability();
        if !(acceptance > 0.0) {
            return Err(Error::Infeasible(n));
        }
        let method = match method {
            Method::Auto
                if n <= AUTO_REJECTION_MAX_N && acceptance >= AUTO_REJECTION_MIN_ACCEPTANCE =>
            {
                Method::Rejection
            }
            Method::Auto => Method::ExactBridge,
            m => m,
        };
        let max_tries = ((200.0 / acceptance).ceil() as u64).max(1000);
        Ok(ConditionedSampler {
            dist: dist.clone(),
            n,
            table: (method == Method::ExactBridge).then_some(table),
            acceptance,
            method,
            max_tries,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Method actually used (never `Auto`).
    pub fn method(&self) -> Method {
        self.method
    }

    /// `P(W_n = −1)`.
    pub fn acceptance(&self) -> f64 {
        self.acceptance
    }

    /// Bridge steps `X_1..X_n` before the Vervaat transform.
    pub fn sample_steps<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<i64>> {
        match &self.table {
            Some(t) => t.sample(rng),
            None => rejection_bridge(&self.dist, self.n, rng, self.max_tries).map(|(x, _)| x),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<PlaneTree> {
        let x = self.sample_steps(rng)?;
        let degrees = vervaat(&x).into_iter().map(|v| (v + 1) as u32).collect();
        PlaneTree::from_degrees(degrees)
            .map_err(|e| Error::Internal(format!("Vervaat image is not a tree: {e}")))
    }
}

pub fn sample_conditioned<R: Rng + ?Sized>(
    dist: &OffspringDistribution,
    n: usize,
    rng: &mut R,
    method: Method,
) -> Result<PlaneTree> {
    ConditionedSampler::new(dist, n, method)?.sample(rng)
}

/// `S` with `P(S = i) = (1 − m) m^{i−1}`, `i ≥ 1`.
fn sample_spine_len<R: Rng + ?Sized>(m: f64, rng: &mut R) -> usize {
    let mut s = 1;
    while rng.random::<f64>() < m {
        s += 1;
    }
    s
}

/// Side branches of the non-top spine vertices, bottom to top.
struct Decoration {
    left: Vec<Vec<Vec<u32>>>,
    right: Vec<Vec<Vec<u32>>>,
    /// Spine vertices plus all side-branch vertices.
    size: usize,
}

fn decorate<R, B>(dist: &OffspringDistribution, rng: &mut R, mut branch: B) -> Result<Decoration>
where
    R: Rng + ?Sized,
    B: FnMut(&mut R) -> Result<Vec<u32>>,
{
    let sb = dist.size_biased();
    let s = sample_spine_len(dist.mean(), rng);
    let mut dec = Decoration {
        left: Vec::with_capacity(s - 1),
        right: Vec::with_capacity(s - 1),
        size: s,
    };
    for _ in 0..s - 1 {
        let k = sb.sample(rng) - 1;
        let to_left = rng.random_range(0..=k);
        let mut side: Vec<Vec<u32>> = Vec::with_capacity(k as usize);
        for _ in 0..k {
            let b = branch(rng)?;
            dec.size += b.len();
            side.push(b);
        }
        let right = side.split_off(to_left as usize);
        dec.left.push(side);
        dec.right.push(right);
    }
    Ok(dec)
}

/// Preorder degree sequence and the index of the top spine vertex.
fn assemble(dec: &Decoration, top_children: &[Vec<u32>]) -> (Vec<u32>, usize) {
    let total = dec.size + top_children.iter().map(Vec::len).sum::<usize>();
    let mut out = Vec::with_capacity(total);
    for (left, right) in dec.left.iter().zip(&dec.right) {
        out.push((left.len() + right.len() + 1) as u32);
        for b in left {
            out.extend_from_slice(b);
        }
    }
    let top = out.len();
    out.push(top_children.len() as u32);
    for c in top_children {
        out.extend_from_slice(c);
    }
    for right in dec.right.iter().rev() {
        for b in right {
            out.extend_from_slice(b);
        }
    }
    (out, top)
}

/// Approximate sampler of `t_n`. A geometric spine with size-biased side
/// branches is built as in `T̂`; the top vertex then receives i.i.d. GW
/// trees while they fit into the budget of `n` vertices and the remainder
/// as extra leaves. Not exact: the last adjustment of the top degree biases
/// the law.
pub fn sample_condensation_approx<R: Rng + ?Sized>(
    dist: &OffspringDistribution,
    n: usize,
    rng: &mut R,
) -> Result<PlaneTree> {
    const MAX_TRIES: u64 = 10_000;
    if n == 0 {
        return Err(Error::Config("tree size must be at least 1".into()));
    }
    for _ in 0..MAX_TRIES {
        let dec = match decorate(dist, rng, |r| {
            sample_gw(dist, r, n).map(PlaneTree::into_degrees)
        }) {
            Ok(d) if d.size <= n => d,
            Ok(_) | Err(Error::Overflow { .. }) => continue,
            Err(e) => return Err(e),
        };
        let mut budget = n - dec.size;
        let mut children = Vec::new();
        while budget > 0 {
            match sample_gw(dist, rng, budget) {
                Ok(t) => {
                    budget -= t.len();
                    children.push(t.into_degrees());
                }
                Err(Error::Overflow { .. }) => break,
                Err(e) => return Err(e),
            }
        }
        children.extend(std::iter::repeat_n(vec![0u32], budget));
        let (degrees, _) = assemble(&dec, &children);
        return PlaneTree::from_degrees(degrees);
    }
    Err(Error::Exhausted { tries: MAX_TRIES })
}

/// Truncated sample of the local limit `T̂`.
#[derive(Debug, Clone)]
pub struct TruncatedSpineTree {
    pub tree: PlaneTree,
    /// Number of spine vertices `S`; the top is at generation `S − 1`.
    pub spine_len: usize,
    /// Lexicographic index of the top of the spine.
    pub top_index: usize,
    /// Branches left / right of the spine at each non-top spine vertex.
    pub left: Vec<u32>,
    pub right: Vec<u32>,
    /// True if some branch was cut at the depth cap.
    pub truncated: bool,
}

/// `T̂` with every branch cut at relative depth `depth_cap` and the top
/// vertex carrying `width_cap` branches.
pub fn sample_that_truncated<R: Rng + ?Sized>(
    dist: &OffspringDistribution,
    depth_cap: u32,
    width_cap: u32,
    rng: &mut R,
) -> Result<TruncatedSpineTree> {
    if depth_cap == 0 || width_cap == 0 {
        return Err(Error::Config("truncation caps must be at least 1".into()));
    }
    let mut truncated = false;
    let dec = decorate(dist, rng, |r| {
        let (b, cut) = sample_gw_truncated(dist, r, depth_cap);
        truncated |= cut;
        Ok(b)
    })?;
    let top: Vec<Vec<u32>> = (0..width_cap)
        .map(|_| {
            let (b, cut) = sample_gw_truncated(dist, rng, depth_cap);
            truncated |= cut;
            b
        })
        .collect();
    let (degrees, top_index) = assemble(&dec, &top);
    Ok(TruncatedSpineTree {
        tree: PlaneTree::from_degrees(degrees)?,
        spine_len: dec.left.len() + 1,
        top_index,
        left: dec.left.iter().map(|b| b.len() as u32).collect(),
        right: dec.right.iter().map(|b| b.len() as u32).collect(),
        truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::{chi_square, mean_se, Pmf};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn reference() -> OffspringDistribution {
        OffspringDistribution::heavy_tail(2.5, 0.5).unwrap()
    }

    #[test]
    fn gw_size_mean_and_root_leaf() {
        let d = reference();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let sizes: Vec<f64> = (0..1_000_000)
            .map(|_| sample_gw_size(&d, &mut rng, 1 << 40).unwrap() as f64)
            .collect();
        let (mean, se) = mean_se(&sizes).unwrap();
        assert!((mean - 1.0 / d.gamma()).abs() < 3.0 * se, "{mean} ± {se}");
        let ones = sizes.iter().filter(|&&s| s == 1.0).count() as f64 / sizes.len() as f64;
        let se1 = (d.pmf(0) * (1.0 - d.pmf(0)) / sizes.len() as f64).sqrt();
        assert!((ones - d.pmf(0)).abs() < 3.0 * se1);
    }

    #[test]
    fn gw_overflow_is_reported() {
        let d = OffspringDistribution::from_finite(&[0.85, 0.0, 0.0, 0.0, 0.0, 0.15]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let outcomes: Vec<_> = (0..200).map(|_| sample_gw(&d, &mut rng, 3)).collect();
        assert!(outcomes.iter().any(|r| matches!(r, Err(Error::Overflow { cap: 3 }))));
        assert!(outcomes.iter().flatten().all(|t| t.len() <= 3));
    }

    #[test]
    fn conditioned_sizes_are_exact() {
        let d = reference();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for method in [Method::ExactBridge, Method::Rejection, Method::Auto] {
            for n in [1usize, 2, 7, 30] {
                let s = ConditionedSampler::new(&d, n, method).unwrap();
                for _ in 0..50 {
                    assert_eq!(s.sample(&mut rng).unwrap().len(), n);
                }
            }
        }
        assert_eq!(
            ConditionedSampler::new(&d, 2, Method::Auto).unwrap().method(),
            Method::Rejection
        );
        assert_eq!(
            ConditionedSampler::new(&d, 64, Method::Auto).unwrap().method(),
            Method::ExactBridge
        );
        assert!("sideways".parse::<Method>().is_err());
    }

    #[test]
    fn condensation_band_at_5000() {
        let d = reference();
        let s = ConditionedSampler::new(&d, 5000, Method::Auto).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let inside = (0..200)
            .filter(|_| {
                let t = s.sample(&mut rng).unwrap();
                let r = t.stats().delta as f64 / (d.gamma() * 5000.0);
                (0.8..=1.2).contains(&r)
            })
            .count();
        assert!(inside >= 190, "{inside}/200");
    }

    #[test]
    fn approximate_sampler_has_exact_size() {
        let d = reference();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for n in [1usize, 2, 10, 1000] {
            for _ in 0..100 {
                assert_eq!(sample_condensation_approx(&d, n, &mut rng).unwrap().len(), n);
            }
        }
    }

    #[test]
    fn spine_length_is_geometric() {
        let d = reference();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut lens = Vec::new();
        for _ in 0..100_000 {
            let t = sample_that_truncated(&d, 3, 2, &mut rng).unwrap();
            assert_eq!(t.tree.depths()[t.top_index] as usize, t.spine_len - 1);
            assert_eq!(t.tree.degree(t.top_index), 2);
            lens.push(t.spine_len as i64);
        }
        let m = d.mean();
        let pmf: Pmf = (1..40).map(|i| (i, (1.0 - m) * m.powi(i as i32 - 1))).collect();
        let c = chi_square(&lens, &pmf, 5.0).unwrap();
        assert!(c.p_value > 1e-3, "{c:?}");
        let p1 = lens.iter().filter(|&&s| s == 1).count() as f64 / lens.len() as f64;
        assert!((p1 - (1.0 - m)).abs() < 0.01);
    }

    #[test]
    fn left_right_split_is_uniform() {
        // ζ* ≡ 3 here, so every non-top spine vertex has two side branches
        let d = OffspringDistribution::from_finite(&[0.9, 0.0, 0.0, 0.1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let mut counts = [0i64; 3];
        let mut total = 0;
        while total < 30_000 {
            let t = sample_that_truncated(&d, 2, 1, &mut rng).unwrap();
            for (l, r) in t.left.iter().zip(&t.right) {
                assert_eq!(l + r, 2);
                counts[*l as usize] += 1;
                total += 1;
            }
        }
        for c in counts {
            let p = c as f64 / total as f64;
            assert!((p - 1.0 / 3.0).abs() < 0.015, "{counts:?}");
        }
    }

    #[test]
    fn depth_truncation_flags_cuts() {
        let d = OffspringDistribution::from_finite(&[0.6, 0.0, 0.4]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut saw_cut = false;
        for _ in 0..200 {
            let (b, cut) = sample_gw_truncated(&d, &mut rng, 2);
            let t = PlaneTree::from_degrees(b).unwrap();
            assert!(t.height() <= 2);
            saw_cut |= cut;
        }
        assert!(saw_cut);
    }
}
