//! Random-walk machinery: Vervaat transform, the exchange operator, exact
//! bridge tables and Kemperman's formula.
//!
//! Bridge tables work with the shifted steps `ζ = X + 1 ≥ 0`, i.e. offspring
//! counts. A walk of `n` steps ends at `−1` iff the `ζ` sum to `N = n − 1`,
//! and every prefix of such a walk has a partial `ζ`-sum in `[0, N]`. Storing
//! `p_h(t) = P(ζ_1 + ... + ζ_h = t)` on that window therefore loses nothing
//! for the bridge law.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use rand::Rng;

use crate::error::{Error, Result};
use crate::offspring::OffspringDistribution;
use crate::stats::CompensatedSum;

/// Values below this are flushed to zero to keep convolutions out of
/// subnormal arithmetic.
const FLUSH: f64 = 1e-300;

/// Cyclic shift `(x_{i*+1}, ..., x_n, x_1, ..., x_{i*})` where `i*` is the
/// first index at which the partial sums reach their minimum.
pub fn vervaat(x: &[i64]) -> Vec<i64> {
    let i_star = first_argmin_of_partial_sums(x);
    let mut out = Vec::with_capacity(x.len());
    out.extend_from_slice(&x[i_star..]);
    out.extend_from_slice(&x[..i_star]);
    out
}

/// `i*(x)`, 1-based: the first `j ≥ 1` with `w_j = min w`.
pub fn first_argmin_of_partial_sums(x: &[i64]) -> usize {
    let mut w = 0i64;
    let mut best = (i64::MAX, 0usize);
    for (j, &v) in x.iter().enumerate() {
        w += v;
        if w < best.0 {
            best = (w, j + 1);
        }
    }
    best.1
}

/// Swaps the last entry with the first maximal entry.
pub fn exchange_t<T: PartialOrd + Copy>(x: &[T]) -> Vec<T> {
    let mut out = x.to_vec();
    if let Some(k) = first_max_index(x) {
        let last = out.len() - 1;
        out.swap(k, last);
    }
    out
}

fn first_max_index<T: PartialOrd + Copy>(x: &[T]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, v) in x.iter().enumerate() {
        match best {
            Some(b) if !(*v > x[b]) => {}
            _ => best = Some(i),
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// Every level `0..=n`; sampled one step at a time.
    Sequential,
    /// Levels reached by recursive halving of `n`; sampled by recursive
    /// splitting of the target.
    Dyadic,
}

impl Layout {
    fn tag(self) -> u8 {
        match self {
            Layout::Sequential => 1,
            Layout::Dyadic => 2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BridgeOptions {
    pub layout: Layout,
    pub memory_budget: usize,
    pub cache_dir: Option<PathBuf>,
}

impl Default for BridgeOptions {
    fn default() -> Self {
        BridgeOptions {
            layout: Layout::Dyadic,
            memory_budget: 256 << 20,
            cache_dir: None,
        }
    }
}

/// `P(W_h = s)` for the step walk on the window needed by bridges of length `n`.
#[derive(Debug, Clone)]
pub struct BridgeTable {
    n: usize,
    layout: Layout,
    /// `levels[h] = p_h(0..=N)` where stored.
    levels: Vec<Option<Vec<f64>>>,
}

impl BridgeTable {
    pub fn new(dist: &OffspringDistribution, n: usize) -> Result<Self> {
        Self::build(dist, n, &BridgeOptions::default())
    }

    pub fn build(dist: &OffspringDistribution, n: usize, opts: &BridgeOptions) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("bridge length must be at least 1".into()));
        }
        let width = n;
        let stored = match opts.layout {
            Layout::Sequential => n + 1,
            Layout::Dyadic => dyadic_sizes(n).len() + 1,
        };
        let bytes = stored.saturating_mul(width).saturating_mul(8);
        if bytes > opts.memory_budget {
            return Err(Error::Resource(format!(
                "bridge table for n = {n} needs {} MiB with the {:?} layout (budget {} MiB); \
                 use the dyadic layout or raise the memory budget",
                bytes >> 20,
                opts.layout,
                opts.memory_budget >> 20
            )));
        }

        let cache_path = opts
            .cache_dir
            .as_ref()
            .map(|d| d.join(cache_file_name(dist, n, opts.layout)));
        if let Some(path) = &cache_path {
            if let Some(table) = Self::load(path, n, opts.layout)? {
                return Ok(table);
            }
        }

        let mut levels: Vec<Option<Vec<f64>>> = vec![None; n + 1];
        let mut p0 = vec![0.0; width];
        p0[0] = 1.0;
        levels[0] = Some(p0);
        let p1: Vec<f64> = (0..width).map(|k| flush(dist.pmf(k as u64))).collect();
        levels[1] = Some(p1);
        match opts.layout {
            Layout::Sequential => {
                for h in 2..=n {
                    let next = convolve(
                        levels[h - 1].as_ref().expect("previous level"),
                        levels[1].as_ref().expect("step level"),
                    );
                    levels[h] = Some(next);
                }
            }
            Layout::Dyadic => {
                for h in dyadic_sizes(n) {
                    if levels[h].is_some() {
                        continue;
                    }
                    let (a, b) = (h / 2, h - h / 2);
                    let next = convolve(
                        levels[a].as_ref().expect("smaller level built first"),
                        levels[b].as_ref().expect("smaller level built first"),
                    );
                    levels[h] = Some(next);
                }
            }
        }
        let table = BridgeTable {
            n,
            layout: opts.layout,
            levels,
        };
        if let Some(path) = &cache_path {
            table.save(path)?;
        }
        Ok(table)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    /// `q_k(s) = P(W_k = s)` when level `k` is stored and `s` lies in the window.
    pub fn q(&self, k: usize, s: i64) -> Option<f64> {
        let level = self.levels.get(k)?.as_ref()?;
        let t = s + k as i64;
        if t < 0 {
            return Some(0.0);
        }
        level.get(t as usize).copied()
    }

    /// `P(W_n = −1)`.
    pub fn bridge_probability(&self) -> f64 {
        self.level(self.n)[self.n - 1]
    }

    /// `P(|τ| = n) = P(W_n = −1)/n`.
    pub fn kemperman(&self) -> f64 {
        self.bridge_probability() / self.n as f64
    }

    fn level(&self, h: usize) -> &[f64] {
        self.levels[h].as_deref().expect("level stored")
    }

    /// Steps `X_1..X_n` of the walk conditioned on `W_n = −1`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<i64>> {
        if !(self.bridge_probability() > 0.0) {
            return Err(Error::Infeasible(self.n));
        }
        let mut zeta = vec![0u64; self.n];
        match self.layout {
            Layout::Sequential => self.sample_sequential(&mut zeta, rng)?,
            Layout::Dyadic => self.sample_split(&mut zeta, self.n - 1, rng)?,
        }
        Ok(zeta.into_iter().map(|z| z as i64 - 1).collect())
    }

    fn sample_sequential<R: Rng + ?Sized>(&self, out: &mut [u64], rng: &mut R) -> Result<()> {
        let step = self.level(1);
        let mut remaining = self.n - 1;
        for k in 0..self.n {
            let h = self.n - k;
            let rest = self.level(h - 1);
            let denom = self.level(h)[remaining];
            if !(denom > 0.0) {
                return Err(Error::Internal(format!(
                    "bridge prefix with zero probability at step {}",
                    k + 1
                )));
            }
            let v = (1.0 - rng.random::<f64>()) * denom;
            let mut acc = 0.0;
            let mut chosen = None;
            let mut last_positive = None;
            for j in 0..=remaining {
                let w = step[j] * rest[remaining - j];
                if w > 0.0 {
                    last_positive = Some(j);
                }
                acc += w;
                if acc >= v {
                    chosen = Some(j);
                    break;
                }
            }
            // rounding may leave acc a hair below v
            let j = chosen.or(last_positive).ok_or_else(|| {
                Error::Internal(format!("no admissible step at position {}", k + 1))
            })?;
            out[k] = j as u64;
            remaining -= j;
        }
        if remaining != 0 {
            return Err(Error::Internal("bridge did not reach its target".into()));
        }
        Ok(())
    }

    fn sample_split<R: Rng + ?Sized>(&self, out: &mut [u64], target: usize, rng: &mut R) -> Result<()> {
        let h = out.len();
        if h == 1 {
            out[0] = target as u64;
            return Ok(());
        }
        let a = h / 2;
        let (pa, pb) = (self.level(a), self.level(h - a));
        let mut total = 0.0;
        for u in 0..=target {
            total += pa[u] * pb[target - u];
        }
        if !(total > 0.0) {
            return Err(Error::Internal(format!(
                "zero-probability split of {h} steps with target {target}"
            )));
        }
        let v = (1.0 - rng.random::<f64>()) * total;
        let mut acc = 0.0;
        let mut split = None;
        for u in 0..=target {
            let w = pa[u] * pb[target - u];
            acc += w;
            if w > 0.0 {
                split = Some(u);
                if acc >= v {
                    break;
                }
            }
        }
        let u = split.expect("positive total implies a positive weight");
        let (left, right) = out.split_at_mut(a);
        self.sample_split(left, u, rng)?;
        self.sample_split(right, target - u, rng)
    }

    fn save(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)?;
        }
        let mut buf = Vec::new();
        buf.extend_from_slice(CACHE_MAGIC);
        buf.push(self.layout.tag());
        buf.extend_from_slice(&(self.n as u64).to_le_bytes());
        let stored: Vec<usize> = (0..=self.n).filter(|&h| self.levels[h].is_some()).collect();
        buf.extend_from_slice(&(stored.len() as u64).to_le_bytes());
        for h in stored {
            buf.extend_from_slice(&(h as u64).to_le_bytes());
            for v in self.level(h) {
                buf.extend_from_slice(&v.to_le_bytes());
            }
        }
        let tmp = path.with_extension("tmp");
        fs::File::create(&tmp)?.write_all(&buf)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    fn load(path: &Path, n: usize, layout: Layout) -> Result<Option<Self>> {
        let mut buf = Vec::new();
        match fs::File::open(path) {
            Ok(mut f) => f.read_to_end(&mut buf)?,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let mut r = CacheReader { buf: &buf, pos: 0 };
        let header_ok = r.take(CACHE_MAGIC.len()) == Some(CACHE_MAGIC)
            && r.take(1) == Some(&[layout.tag()][..])
            && r.u64() == Some(n as u64);
        if !header_ok {
            return Ok(None);
        }
        let mut levels: Vec<Option<Vec<f64>>> = vec![None; n + 1];
        let count = r.u64().ok_or_else(|| corrupt(path))?;
        for _ in 0..count {
            let h = r.u64().ok_or_else(|| corrupt(path))? as usize;
            if h > n {
                return Err(corrupt(path));
            }
            let mut level = Vec::with_capacity(n);
            for _ in 0..n {
                level.push(f64::from_bits(r.u64().ok_or_else(|| corrupt(path))?));
            }
            levels[h] = Some(level);
        }
        Ok(Some(BridgeTable { n, layout, levels }))
    }
}

const CACHE_MAGIC: &[u8] = b"BRIDGE01";

struct CacheReader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> CacheReader<'a> {
    fn take(&mut self, k: usize) -> Option<&'a [u8]> {
        let s = self.buf.get(self.pos..self.pos + k)?;
        self.pos += k;
        Some(s)
    }

    fn u64(&mut self) -> Option<u64> {
        self.take(8).map(|b| u64::from_le_bytes(b.try_into().expect("8 bytes")))
    }
}

fn corrupt(path: &Path) -> Error {
    Error::Io(std::io::Error::new(
        std::io::ErrorKind::InvalidData,
        format!("corrupt bridge table cache {}", path.display()),
    ))
}

fn cache_file_name(dist: &OffspringDistribution, n: usize, layout: Layout) -> String {
    format!(
        "bridge-{}-n{}-{}.bin",
        &dist.fingerprint()[..16],
        n,
        match layout {
            Layout::Sequential => "seq",
            Layout::Dyadic => "dyadic",
        }
    )
}

/// Sizes whose convolution powers the dyadic layout stores, ascending.
pub fn dyadic_sizes(n: usize) -> Vec<usize> {
    let mut sizes = std::collections::BTreeSet::new();
    let mut frontier = vec![n];
    while let Some(h) = frontier.pop() {
        if h >= 2 && sizes.insert(h) {
            frontier.push(h / 2);
            frontier.push(h - h / 2);
        }
    }
    sizes.into_iter().collect()
}

#[inline]
fn flush(x: f64) -> f64 {
    if x < FLUSH {
        0.0
    } else {
        x
    }
}

/// Truncated convolution on `0..len`. Each output is one dot product in a
/// fixed order, so the result does not depend on the thread count.
pub fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let len = a.len();
    debug_assert_eq!(len, b.len());
    let b_rev: Vec<f64> = b.iter().rev().copied().collect();
    let cell = |t: usize| flush(dot(&a[..=t], &b_rev[len - 1 - t..]));
    let mut out = vec![0.0; len];
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        const CHUNK: usize = 256;
        out.par_chunks_mut(CHUNK).enumerate().for_each(|(c, chunk)| {
            for (i, o) in chunk.iter_mut().enumerate() {
                *o = cell(c * CHUNK + i);
            }
        });
    }
    #[cfg(not(feature = "parallel"))]
    for (t, o) in out.iter_mut().enumerate() {
        *o = cell(t);
    }
    out
}

#[inline]
fn dot(x: &[f64], y: &[f64]) -> f64 {
    debug_assert_eq!(x.len(), y.len());
    let mut acc = [0.0f64; 8];
    let mut cx = x.chunks_exact(8);
    let mut cy = y.chunks_exact(8);
    for (a, b) in (&mut cx).zip(&mut cy) {
        for i in 0..8 {
            acc[i] += a[i] * b[i];
        }
    }
    let mut tail = 0.0;
    for (a, b) in cx.remainder().iter().zip(cy.remainder()) {
        tail += a * b;
    }
    ((acc[0] + acc[4]) + (acc[1] + acc[5])) + ((acc[2] + acc[6]) + (acc[3] + acc[7])) + tail
}

/// `P(|τ| = n)` via Kemperman's formula.
pub fn kemperman_size_pmf(dist: &OffspringDistribution, n: usize) -> Result<f64> {
    Ok(BridgeTable::new(dist, n)?.kemperman())
}

/// `P(|τ| = n)` for `n = 1..=max_n` (index `n − 1`).
pub fn size_pmf(dist: &OffspringDistribution, max_n: usize) -> Vec<f64> {
    // p holds μ^{*h} on 0..max_n
    let step: Vec<f64> = (0..max_n).map(|k| flush(dist.pmf(k as u64))).collect();
    let mut p = step.clone();
    let mut out = Vec::with_capacity(max_n);
    for h in 1..=max_n {
        if h > 1 {
            p = convolve(&p, &step);
        }
        out.push(p[h - 1] / h as f64);
    }
    out
}

/// I.i.d. proposals accepted iff they sum to `−1`.
pub fn rejection_bridge<R: Rng + ?Sized>(
    dist: &OffspringDistribution,
    n: usize,
    rng: &mut R,
    max_tries: u64,
) -> Result<(Vec<i64>, u64)> {
    if n == 0 {
        return Err(Error::Config("bridge length must be at least 1".into()));
    }
    let target = (n - 1) as u64;
    let mut zeta = vec![0u64; n];
    for tries in 1..=max_tries {
        let mut sum = 0u64;
        let mut ok = true;
        for z in zeta.iter_mut() {
            *z = dist.sample(rng);
            sum = sum.saturating_add(*z);
            if sum > target {
                ok = false;
                break;
            }
        }
        if ok && sum == target {
            return Ok((zeta.iter().map(|&z| z as i64 - 1).collect(), tries));
        }
    }
    Err(Error::Exhausted { tries: max_tries })
}

/// Total mass of a level, for diagnostics.
pub fn level_mass(table: &BridgeTable, k: usize) -> Option<f64> {
    let level = table.levels.get(k)?.as_ref()?;
    Some(level.iter().copied().collect::<CompensatedSum>().value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::offspring::SlowlyVarying;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn three_point() -> OffspringDistribution {
        OffspringDistribution::from_finite(&[0.5, 0.3, 0.2]).unwrap()
    }

    #[test]
    fn vervaat_examples() {
        assert_eq!(vervaat(&[-1]), vec![-1]);
        assert_eq!(first_argmin_of_partial_sums(&[1, -1, -1, 1, -1]), 3);
        assert_eq!(vervaat(&[1, -1, -1, 1, -1]), vec![1, -1, 1, -1, -1]);
    }

    #[test]
    fn exchange_examples() {
        assert_eq!(exchange_t(&[1.0, 2.0, 3.0]), vec![1.0, 2.0, 3.0]);
        assert_eq!(exchange_t(&[3.0, 1.0, 2.0]), vec![2.0, 1.0, 3.0]);
        assert_eq!(exchange_t(&[5, 1, 5, 2]), vec![2, 1, 5, 5]);
    }

    #[test]
    fn small_levels() {
        let d = three_point();
        for layout in [Layout::Sequential, Layout::Dyadic] {
            let opts = BridgeOptions {
                layout,
                ..Default::default()
            };
            let t = BridgeTable::build(&d, 3, &opts).unwrap();
            assert_eq!(t.q(1, -1), Some(0.5));
            assert!((t.q(2, -2).unwrap() - 0.25).abs() < 1e-15);
            let expect = 3.0 * 0.2 * 0.25 + 3.0 * 0.09 * 0.5;
            assert!((t.q(3, -1).unwrap() - expect).abs() < 1e-15);
            assert!((t.kemperman() - expect / 3.0).abs() < 1e-15);
        }
        assert!((kemperman_size_pmf(&d, 1).unwrap() - 0.5).abs() < 1e-15);
        assert!((kemperman_size_pmf(&d, 2).unwrap() - 0.15).abs() < 1e-15);
    }

    #[test]
    fn layouts_agree() {
        let d = OffspringDistribution::build(1.5, 0.5, 1000, SlowlyVarying::Constant).unwrap();
        let opts = BridgeOptions {
            layout: Layout::Sequential,
            ..Default::default()
        };
        let seq = BridgeTable::build(&d, 200, &opts).unwrap();
        let dy = BridgeTable::new(&d, 200).unwrap();
        let rel = (seq.bridge_probability() / dy.bridge_probability() - 1.0).abs();
        assert!(rel < 1e-12, "{rel}");
        let pmf = size_pmf(&d, 200);
        assert!((pmf[199] / dy.kemperman() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn memory_budget_is_enforced() {
        let d = three_point();
        let opts = BridgeOptions {
            layout: Layout::Sequential,
            memory_budget: 1 << 20,
            cache_dir: None,
        };
        assert!(matches!(BridgeTable::build(&d, 1000, &opts), Err(Error::Resource(_))));
    }

    #[test]
    fn sampled_bridges_end_at_minus_one() {
        let d = OffspringDistribution::heavy_tail(2.5, 0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for layout in [Layout::Sequential, Layout::Dyadic] {
            let opts = BridgeOptions {
                layout,
                ..Default::default()
            };
            let t = BridgeTable::build(&d, 50, &opts).unwrap();
            for _ in 0..200 {
                let x = t.sample(&mut rng).unwrap();
                assert_eq!(x.len(), 50);
                assert_eq!(x.iter().sum::<i64>(), -1);
                assert!(x.iter().all(|&v| v >= -1));
            }
        }
        let t = BridgeTable::new(&d, 1).unwrap();
        assert_eq!(t.sample(&mut rng).unwrap(), vec![-1]);
    }

    #[test]
    fn infeasible_bridge() {
        // only even offspring counts: odd sizes are impossible
        let d = OffspringDistribution::from_finite(&[0.7, 0.0, 0.3]).unwrap();
        let t = BridgeTable::new(&d, 4).unwrap();
        assert_eq!(t.bridge_probability(), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(t.sample(&mut rng), Err(Error::Infeasible(4))));
    }

    #[test]
    fn rejection_acceptance_rate() {
        let d = three_point();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (x, _) = rejection_bridge(&d, 1, &mut rng, 1000).unwrap();
        assert_eq!(x, vec![-1]);
        let q = BridgeTable::new(&d, 6).unwrap().bridge_probability();
        let mut tries = 0u64;
        let accepted = 20_000u64;
        for _ in 0..accepted {
            tries += rejection_bridge(&d, 6, &mut rng, 1_000_000).unwrap().1;
        }
        let rate = accepted as f64 / tries as f64;
        let se = (q * (1.0 - q) / tries as f64).sqrt();
        assert!((rate - q).abs() < 3.0 * se, "{rate} vs {q}");
        let d0 = OffspringDistribution::from_finite(&[0.9, 0.1]).unwrap();
        assert!(matches!(
            rejection_bridge(&d0, 40, &mut rng, 3),
            Err(Error::Exhausted { tries: 3 })
        ));
    }

    #[test]
    fn cache_round_trip() {
        let d = OffspringDistribution::heavy_tail(2.5, 0.5).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let opts = BridgeOptions {
            cache_dir: Some(dir.path().to_path_buf()),
            ..Default::default()
        };
        let a = BridgeTable::build(&d, 300, &opts).unwrap();
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
        let b = BridgeTable::build(&d, 300, &opts).unwrap();
        assert_eq!(a.bridge_probability().to_bits(), b.bridge_probability().to_bits());
        assert_eq!(level_mass(&a, 150), level_mass(&b, 150));
    }

    #[test]
    fn one_big_jump_asymptotics() {
        let d = OffspringDistribution::heavy_tail(2.5, 0.5).unwrap();
        let n = 2000usize;
        let p = kemperman_size_pmf(&d, n).unwrap();
        let ratio = (n as f64 * d.gamma()).powf(3.5) * p / d.scale();
        assert!((ratio - 1.0).abs() < 0.1, "ratio {ratio}");
    }
}
