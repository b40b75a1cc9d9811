//! Heavy-tailed subcritical offspring distributions.
//!
//! A distribution stores `μ_0..μ_K` densely and represents `k > K` through an
//! analytic power tail `c·𝓛(k)/k^{1+θ}`, whose partial sums are evaluated by
//! Euler–Maclaurin summation. Sampling uses a small alias table over the head
//! of the law plus inverse-tail search for the rest.

use std::sync::{Arc, OnceLock};

use rand::Rng;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::stats::{compensated_sum, CompensatedSum};

pub const DEFAULT_KMAX: usize = 1_000_000;

/// Below this index tail sums are accumulated term by term before switching
/// to Euler–Maclaurin.
const EXPLICIT_SUM_LIMIT: u64 = 1_000;
const ALIAS_HEAD: usize = 256;

/// Slowly varying factor `𝓛(x)/c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SlowlyVarying {
    Constant,
    /// `1 + a / ln(e + x)`, requires `a > -1`.
    LogCorrection { a: f64 },
}

impl SlowlyVarying {
    #[inline]
    pub fn factor(&self, x: f64) -> f64 {
        match *self {
            SlowlyVarying::Constant => 1.0,
            SlowlyVarying::LogCorrection { a } => 1.0 + a / (std::f64::consts::E + x).ln(),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            SlowlyVarying::Constant => Ok(()),
            SlowlyVarying::LogCorrection { a } if a.is_finite() && a > -1.0 => Ok(()),
            SlowlyVarying::LogCorrection { a } => Err(Error::Config(format!(
                "slowly varying correction needs a > -1, got {a}"
            ))),
        }
    }
}

/// `Σ_{k ≥ N} scale · 𝓛(k)/c · k^{-exponent}` for an exponent above one.
#[derive(Debug, Clone, Copy)]
pub struct PowerTail {
    pub scale: f64,
    pub exponent: f64,
    pub slowly: SlowlyVarying,
}

impl PowerTail {
    #[inline]
    pub fn term(&self, k: u64) -> f64 {
        let x = k as f64;
        self.scale * self.slowly.factor(x) * x.powf(-self.exponent)
    }

    pub fn sum_from(&self, start: u64) -> f64 {
        let start = start.max(1);
        let mut acc = CompensatedSum::new();
        let switch = start.max(EXPLICIT_SUM_LIMIT);
        // accumulate small terms first
        for k in (start..switch).rev() {
            acc.add(self.term(k));
        }
        acc.add(self.scale * self.euler_maclaurin(switch as f64));
        acc.value()
    }

    /// Unscaled Euler–Maclaurin tail from `n` (with `n` large).
    fn euler_maclaurin(&self, n: f64) -> f64 {
        let s = self.exponent;
        let pure = n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s) + s * n.powf(-s - 1.0) / 12.0
            - s * (s + 1.0) * (s + 2.0) * n.powf(-s - 3.0) / 720.0
            + s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * n.powf(-s - 5.0) / 30240.0;
        match self.slowly {
            SlowlyVarying::Constant => pure,
            SlowlyVarying::LogCorrection { a } => {
                let h = |x: f64| x.powf(-s) / (std::f64::consts::E + x).ln();
                let step = 1e-3 * n;
                let dh = (h(n + step) - h(n - step)) / (2.0 * step);
                pure + a * (log_corrected_integral(n, s) + 0.5 * h(n) - dh / 12.0)
            }
        }
    }

    /// Largest `k ≥ start` with `sum_from(k) ≥ v`, assuming `sum_from(start) ≥ v > 0`.
    pub fn invert(&self, start: u64, v: f64) -> u64 {
        const CAP: u64 = 1 << 62;
        let mut lo = start;
        let mut hi = start.saturating_mul(2).max(start + 1);
        while hi < CAP && self.sum_from(hi) >= v {
            lo = hi;
            hi = hi.saturating_mul(2).min(CAP);
        }
        if hi >= CAP && self.sum_from(CAP) >= v {
            return CAP;
        }
        // sum_from(lo) >= v > sum_from(hi)
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.sum_from(mid) >= v {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }
}

/// `∫_n^∞ x^{-s} / ln(e + x) dx` by Simpson's rule after `x = n e^u`.
fn log_corrected_integral(n: f64, s: f64) -> f64 {
    let upper = 60.0 / (s - 1.0);
    let intervals = 4000;
    let h = upper / intervals as f64;
    let f = |u: f64| (-(s - 1.0) * u).exp() / (std::f64::consts::E + n * u.exp()).ln();
    let mut acc = f(0.0) + f(upper);
    for i in 1..intervals {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(i as f64 * h);
    }
    n.powf(1.0 - s) * acc * h / 3.0
}

/// Vose alias table.
#[derive(Debug, Clone)]
pub struct AliasTable {
    prob: Vec<f64>,
    alias: Vec<u32>,
}

impl AliasTable {
    pub fn new(weights: &[f64]) -> Self {
        let size = weights.len();
        let total: f64 = compensated_sum(weights.iter().copied());
        let mut prob: Vec<f64> = weights.iter().map(|w| w / total * size as f64).collect();
        let mut alias: Vec<u32> = (0..size as u32).collect();
        let mut small: Vec<usize> = Vec::new();
        let mut large: Vec<usize> = Vec::new();
        for (i, &p) in prob.iter().enumerate() {
            if p < 1.0 {
                small.push(i)
            } else {
                large.push(i)
            }
        }
        while let (Some(&s), Some(&l)) = (small.last(), large.last()) {
            small.pop();
            alias[s] = l as u32;
            prob[l] -= 1.0 - prob[s];
            if prob[l] < 1.0 {
                large.pop();
                small.push(l);
            }
        }
        for i in large.into_iter().chain(small) {
            prob[i] = 1.0;
        }
        AliasTable { prob, alias }
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let i = rng.random_range(0..self.prob.len());
        if rng.random::<f64>() < self.prob[i] {
            i
        } else {
            self.alias[i] as usize
        }
    }
}

/// A law on the nonnegative integers given densely on `0..=K` plus an
/// optional analytic tail beyond `K`.
#[derive(Debug, Clone)]
pub struct DiscreteLaw {
    probs: Vec<f64>,
    /// `suffix[k] = Σ_{j ≥ k} p_j` for `k ∈ 0..=K+1`.
    suffix: Vec<f64>,
    tail: Option<PowerTail>,
    head: AliasTable,
    head_len: usize,
}

impl DiscreteLaw {
    fn new(probs: Vec<f64>, tail: Option<PowerTail>) -> Self {
        let kmax = probs.len() - 1;
        let mut suffix = vec![0.0; kmax + 2];
        let tail_mass = tail.map_or(0.0, |t| t.sum_from(kmax as u64 + 1));
        let mut acc = CompensatedSum::new();
        acc.add(tail_mass);
        suffix[kmax + 1] = tail_mass;
        for k in (0..=kmax).rev() {
            acc.add(probs[k]);
            suffix[k] = acc.value();
        }
        let head_len = probs.len().min(ALIAS_HEAD);
        let mut weights: Vec<f64> = probs[..head_len].to_vec();
        weights.push(suffix[head_len]);
        let head = AliasTable::new(&weights);
        DiscreteLaw {
            probs,
            suffix,
            tail,
            head,
            head_len,
        }
    }

    pub fn kmax(&self) -> usize {
        self.probs.len() - 1
    }

    #[inline]
    pub fn pmf(&self, k: u64) -> f64 {
        match self.probs.get(k as usize) {
            Some(&p) => p,
            None => self.tail.map_or(0.0, |t| t.term(k)),
        }
    }

    pub fn dense(&self) -> &[f64] {
        &self.probs
    }

    /// `P(X ≥ k)`.
    pub fn tail_sum(&self, k: u64) -> f64 {
        match self.suffix.get(k as usize) {
            Some(&s) => s,
            None => self.tail.map_or(0.0, |t| t.sum_from(k)),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let bucket = self.head.sample(rng);
        if bucket < self.head_len {
            return bucket as u64;
        }
        self.sample_from(self.head_len, rng)
    }

    /// Draws from the law conditioned on `X ≥ start` (dense region only for `start`).
    fn sample_from<R: Rng + ?Sized>(&self, start: usize, rng: &mut R) -> u64 {
        let u: f64 = 1.0 - rng.random::<f64>();
        let v = u * self.suffix[start];
        let kmax = self.kmax();
        if v <= self.suffix[kmax + 1] {
            return match self.tail {
                Some(t) => t.invert(kmax as u64 + 1, v),
                None => kmax as u64,
            };
        }
        // largest k in [start, kmax] with suffix[k] >= v
        let region = &self.suffix[start..=kmax];
        let count = region.partition_point(|&s| s >= v);
        (start + count.max(1) - 1) as u64
    }

    fn moment_tail(&self, power: i32) -> Option<f64> {
        self.tail.map(|t| {
            let shifted = PowerTail {
                exponent: t.exponent - power as f64,
                ..t
            };
            shifted.sum_from(self.kmax() as u64 + 1)
        })
    }
}

/// Offspring distribution satisfying the heavy-tail subcriticality assumption
/// (or a finitely supported subcritical law, used for small exact checks).
#[derive(Debug, Clone)]
pub struct OffspringDistribution {
    theta: f64,
    mean: f64,
    scale: f64,
    slowly: SlowlyVarying,
    variance: Option<f64>,
    law: Arc<DiscreteLaw>,
    size_biased: Arc<OnceLock<SizeBiasedLaw>>,
}

impl OffspringDistribution {
    /// `μ_k = c/k^{1+θ}` for `k ≥ 1` with the default dense range.
    pub fn heavy_tail(theta: f64, target_mean: f64) -> Result<Self> {
        Self::build(theta, target_mean, DEFAULT_KMAX, SlowlyVarying::Constant)
    }

    /// `μ_k = c·𝓛(k)/k^{1+θ}` for `k ≥ 1`, `c` solved so that the mean is
    /// `target_mean`, and `μ_0` taking the remaining mass.
    pub fn build(theta: f64, target_mean: f64, kmax: usize, slowly: SlowlyVarying) -> Result<Self> {
        if !(theta > 1.0 && theta.is_finite()) {
            return Err(Error::Config(format!("theta must exceed 1, got {theta}")));
        }
        if !(target_mean > 0.0 && target_mean < 1.0) {
            return Err(Error::Config(format!(
                "mean must lie in (0, 1), got {target_mean}"
            )));
        }
        if kmax < 2 {
            return Err(Error::Config("kmax must be at least 2".into()));
        }
        slowly.validate()?;

        let unit = PowerTail {
            scale: 1.0,
            exponent: 1.0 + theta,
            slowly,
        };
        let first_moment = PowerTail {
            exponent: theta,
            ..unit
        }
        .sum_from(1);
        let scale = target_mean / first_moment;
        let tail = PowerTail { scale, ..unit };

        let mut probs = vec![0.0; kmax + 1];
        for (k, p) in probs.iter_mut().enumerate().skip(1) {
            *p = tail.term(k as u64);
        }
        let mass_above_zero = tail.sum_from(1);
        let mu0 = 1.0 - mass_above_zero;
        if mu0 <= 0.0 {
            return Err(Error::Config(format!(
                "infeasible target mean {target_mean} for theta {theta}: mu_0 = {mu0}"
            )));
        }
        probs[0] = mu0;

        let variance = if theta > 2.0 {
            let second = PowerTail {
                exponent: theta - 1.0,
                ..tail
            }
            .sum_from(1);
            Some(second - target_mean * target_mean)
        } else {
            None
        };

        Ok(OffspringDistribution {
            theta,
            mean: target_mean,
            scale,
            slowly,
            variance,
            law: Arc::new(DiscreteLaw::new(probs, Some(tail))),
            size_biased: Arc::default(),
        })
    }

    /// Finitely supported law `μ_0..μ_K` (normalized on entry). The tail
    /// index is reported as infinite.
    pub fn from_finite(weights: &[f64]) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::Config("weights must be finite and nonnegative".into()));
        }
        let total = compensated_sum(weights.iter().copied());
        let probs: Vec<f64> = weights.iter().map(|w| w / total).collect();
        if probs[0] <= 0.0 {
            return Err(Error::Config("mu_0 must be positive".into()));
        }
        let mean = compensated_sum(probs.iter().enumerate().map(|(k, p)| k as f64 * p));
        if mean >= 1.0 {
            return Err(Error::Config(format!("law is not subcritical (mean {mean})")));
        }
        let second = compensated_sum(probs.iter().enumerate().map(|(k, p)| (k * k) as f64 * p));
        let mut probs = probs;
        if probs.len() < 2 {
            probs.push(0.0);
        }
        Ok(OffspringDistribution {
            theta: f64::INFINITY,
            mean,
            scale: 0.0,
            slowly: SlowlyVarying::Constant,
            variance: Some(second - mean * mean),
            law: Arc::new(DiscreteLaw::new(probs, None)),
            size_biased: Arc::default(),
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Index `2 ∧ θ` of the stable domain of attraction.
    pub fn alpha(&self) -> f64 {
        self.theta.min(2.0)
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn gamma(&self) -> f64 {
        1.0 - self.mean
    }

    /// Constant `c` in `μ_k = c·𝓛(k)/c/k^{1+θ}` (zero for finite laws).
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn slowly_varying(&self) -> SlowlyVarying {
        self.slowly
    }

    /// Offspring variance, `None` when infinite.
    pub fn variance(&self) -> Option<f64> {
        self.variance
    }

    pub fn kmax(&self) -> usize {
        self.law.kmax()
    }

    #[inline]
    pub fn pmf(&self, k: u64) -> f64 {
        self.law.pmf(k)
    }

    /// Dense probabilities `μ_0..μ_K`.
    pub fn dense(&self) -> &[f64] {
        self.law.dense()
    }

    /// `μ([k, ∞))`.
    pub fn tail_sum(&self, k: u64) -> f64 {
        self.law.tail_sum(k)
    }

    pub fn law(&self) -> &DiscreteLaw {
        &self.law
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        self.law.sample(rng)
    }

    /// Total mass, dense part plus analytic tail.
    pub fn total_mass(&self) -> f64 {
        self.law.tail_sum(0)
    }

    /// `Σ k μ_k` evaluated numerically.
    pub fn numerical_mean(&self) -> f64 {
        let mut acc = CompensatedSum::new();
        if let Some(t) = self.law.moment_tail(1) {
            acc.add(t);
        }
        for (k, p) in self.dense().iter().enumerate().rev() {
            acc.add(k as f64 * p);
        }
        acc.value()
    }

    /// `Σ k² μ_k` evaluated numerically (`None` when it diverges).
    pub fn numerical_second_moment(&self) -> Option<f64> {
        if self.theta <= 2.0 {
            return None;
        }
        let mut acc = CompensatedSum::new();
        if let Some(t) = self.law.moment_tail(2) {
            acc.add(t);
        }
        for (k, p) in self.dense().iter().enumerate().rev() {
            acc.add((k * k) as f64 * p);
        }
        Some(acc.value())
    }

    /// Law of `ζ*`, built on first use and shared between clones.
    pub fn size_biased(&self) -> &SizeBiasedLaw {
        self.size_biased.get_or_init(|| self.build_size_biased())
    }

    fn build_size_biased(&self) -> SizeBiasedLaw {
        let dense: Vec<f64> = self
            .dense()
            .iter()
            .enumerate()
            .map(|(k, p)| k as f64 * p / self.mean)
            .collect();
        let tail = self.law.tail.map(|t| PowerTail {
            scale: t.scale / self.mean,
            exponent: t.exponent - 1.0,
            slowly: t.slowly,
        });
        SizeBiasedLaw {
            law: DiscreteLaw::new(dense, tail),
        }
    }

    pub fn step_law(&self) -> StepLaw<'_> {
        StepLaw { dist: self }
    }

    /// Stable digest of the parameters, used to key on-disk caches.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        if self.law.tail.is_some() {
            h.update(b"heavy");
            h.update(self.theta.to_le_bytes());
            h.update(self.mean.to_le_bytes());
            h.update((self.kmax() as u64).to_le_bytes());
            if let SlowlyVarying::LogCorrection { a } = self.slowly {
                h.update(a.to_le_bytes());
            }
        } else {
            h.update(b"finite");
            for p in self.dense() {
                h.update(p.to_le_bytes());
            }
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Law of `ζ*` with `P(ζ* = k) = k μ_k / m`.
#[derive(Debug, Clone)]
pub struct SizeBiasedLaw {
    law: DiscreteLaw,
}

impl SizeBiasedLaw {
    pub fn pmf(&self, k: u64) -> f64 {
        self.law.pmf(k)
    }

    pub fn total_mass(&self) -> f64 {
        self.law.tail_sum(0)
    }

    /// `Σ_k k P(ζ* = k)`, `None` if the offspring variance is infinite.
    pub fn mean(&self) -> Option<f64> {
        let tail = match self.law.tail {
            Some(t) if t.exponent - 1.0 <= 1.0 => return None,
            Some(_) => self.law.moment_tail(1).unwrap_or(0.0),
            None => 0.0,
        };
        let mut acc = CompensatedSum::new();
        acc.add(tail);
        for (k, p) in self.law.dense().iter().enumerate().rev() {
            acc.add(k as f64 * p);
        }
        Some(acc.value())
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        self.law.sample(rng)
    }
}

/// Step law `ν(k) = μ(k + 1)` on `{-1, 0, 1, ...}`.
#[derive(Debug, Clone, Copy)]
pub struct StepLaw<'a> {
    dist: &'a OffspringDistribution,
}

impl<'a> StepLaw<'a> {
    pub fn pmf(&self, k: i64) -> f64 {
        if k < -1 {
            0.0
        } else {
            self.dist.pmf((k + 1) as u64)
        }
    }

    pub fn mean(&self) -> f64 {
        self.dist.numerical_mean() - 1.0
    }

    pub fn total_mass(&self) -> f64 {
        self.dist.total_mass()
    }

    pub fn offspring(&self) -> &'a OffspringDistribution {
        self.dist
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> i64 {
        self.dist.sample(rng) as i64 - 1
    }
}

/// Norming sequence `B_n`: `σ√(n/2)` for finite variance, otherwise the tail
/// quantile `inf{x ≥ 0 : μ([x, ∞)) ≤ 1/n}` when `θ < 2`.
pub fn norming_sequence(dist: &OffspringDistribution, n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Config("norming sequence needs n >= 1".into()));
    }
    if let Some(var) = dist.variance() {
        return Ok((var * n as f64 / 2.0).sqrt());
    }
    if dist.theta() >= 2.0 {
        return Err(Error::Unsupported(
            "theta = 2 with infinite variance has no constructive norming sequence".into(),
        ));
    }
    Ok(tail_quantile(dist, 1.0 / n as f64) as f64)
}

/// Smallest integer `k` with `μ([k, ∞)) ≤ level`.
pub fn tail_quantile(dist: &OffspringDistribution, level: f64) -> u64 {
    if dist.tail_sum(0) <= level {
        return 0;
    }
    let kmax = dist.kmax() as u64;
    if dist.tail_sum(kmax + 1) <= level {
        let suffix = &dist.law.suffix;
        // suffix is nonincreasing
        return suffix.partition_point(|&s| s > level) as u64;
    }
    let tail = dist.law.tail.expect("tail mass above level implies an analytic tail");
    // largest k with sum_from(k) > level, plus one
    let v = level * (1.0 + f64::EPSILON);
    tail.invert(kmax + 1, v) + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    // reference values computed with 30-digit zeta evaluations
    const C_25: f64 = 0.372_720_648_144_388_6;
    const MU0_25: f64 = 0.580_043_022_687_353_1;
    const C_15: f64 = 0.191_396_691_999_713_3;

    fn small(theta: f64) -> OffspringDistribution {
        OffspringDistribution::build(theta, 0.5, 2_000, SlowlyVarying::Constant).unwrap()
    }

    #[test]
    fn heavy_tail_constants() {
        let d = OffspringDistribution::heavy_tail(2.5, 0.5).unwrap();
        assert!((d.scale() - C_25).abs() < 1e-12);
        assert!((d.pmf(0) - MU0_25).abs() < 1e-12);
        assert!((d.total_mass() - 1.0).abs() < 1e-12);
        assert!((d.numerical_mean() - 0.5).abs() < 1e-10);
        assert_eq!(d.gamma(), 1.0 - 0.5);
        let var = d.variance().unwrap();
        assert!((var - 0.723_686_233_158_478_4).abs() < 1e-9, "{var}");
    }

    #[test]
    fn dense_range_does_not_change_the_law() {
        let a = small(2.5);
        let b = OffspringDistribution::build(2.5, 0.5, 50, SlowlyVarying::Constant).unwrap();
        assert!((a.pmf(0) - b.pmf(0)).abs() < 1e-13);
        assert!((a.tail_sum(60) - b.tail_sum(60)).abs() < 1e-14);
        assert!((b.numerical_mean() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn infinite_variance_flag() {
        let d = small(1.5);
        assert!((d.scale() - C_15).abs() < 1e-12);
        assert!(d.variance().is_none());
        assert!(small(2.0).variance().is_none());
        assert!(small(3.0).variance().is_some());
    }

    #[test]
    fn gamma_is_one_minus_mean() {
        for &m in &[0.1, 0.37, 0.9] {
            let d = OffspringDistribution::build(1.7, m, 100, SlowlyVarying::Constant).unwrap();
            assert_eq!(d.gamma(), 1.0 - m);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(OffspringDistribution::heavy_tail(1.0, 0.5), Err(Error::Config(_))));
        assert!(matches!(OffspringDistribution::heavy_tail(2.5, 1.0), Err(Error::Config(_))));
        assert!(matches!(OffspringDistribution::heavy_tail(2.5, 0.0), Err(Error::Config(_))));
        let bad = SlowlyVarying::LogCorrection { a: -1.5 };
        assert!(OffspringDistribution::build(2.5, 0.5, 100, bad).is_err());
        assert!(OffspringDistribution::from_finite(&[0.0, 1.0]).is_err());
        assert!(OffspringDistribution::from_finite(&[0.2, 0.0, 0.8]).is_err());
    }

    #[test]
    fn log_corrected_law_is_normalized() {
        let sv = SlowlyVarying::LogCorrection { a: 0.5 };
        let d = OffspringDistribution::build(2.5, 0.5, 5_000, sv).unwrap();
        assert!((d.total_mass() - 1.0).abs() < 1e-12);
        assert!((d.numerical_mean() - 0.5).abs() < 1e-10);
        let k = 20_000u64;
        let expect = d.scale() * sv.factor(k as f64) / (k as f64).powf(3.5);
        assert!((d.pmf(k) / expect - 1.0).abs() < 1e-14);
        // tail from the analytic part agrees with brute-force summation
        let brute = compensated_sum((5_001..2_000_000u64).rev().map(|k| d.pmf(k)))
            + d.tail_sum(2_000_000);
        assert!((brute - d.tail_sum(5_001)).abs() < 1e-14 * 1e3);
    }

    #[test]
    fn euler_maclaurin_matches_direct_sum() {
        let t = PowerTail {
            scale: 1.0,
            exponent: 2.5,
            slowly: SlowlyVarying::Constant,
        };
        let direct = compensated_sum((1_000..3_000_000u64).rev().map(|k| t.term(k)))
            + t.sum_from(3_000_000);
        assert!((direct - t.sum_from(1_000)).abs() < 1e-15);
        // zeta(2.5)
        assert!((t.sum_from(1) - 1.341_487_257_250_917_2).abs() < 1e-13);
    }

    #[test]
    fn size_biased_probabilities() {
        let d = small(2.5);
        let sb = d.size_biased();
        assert_eq!(sb.pmf(0), 0.0);
        assert!((sb.pmf(1) - 0.745_441_296_288_777_2).abs() < 1e-12);
        assert!((sb.total_mass() - 1.0).abs() < 1e-12);
        let direct = d.numerical_second_moment().unwrap() / d.mean();
        assert!((sb.mean().unwrap() - direct).abs() < 1e-8);
        assert!(small(1.5).size_biased().mean().is_none());

        let two_point = OffspringDistribution::from_finite(&[0.6, 0.4]).unwrap();
        let sb = two_point.size_biased();
        assert!((sb.pmf(1) - 1.0).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!((0..1000).all(|_| sb.sample(&mut rng) == 1));
    }

    #[test]
    fn step_law_is_shifted_offspring() {
        let d = small(2.5);
        let nu = d.step_law();
        assert_eq!(nu.pmf(-1), d.pmf(0));
        assert!((nu.pmf(-1) - MU0_25).abs() < 1e-12);
        assert_eq!(nu.pmf(-2), 0.0);
        assert!((nu.mean() + d.gamma()).abs() < 1e-10);
        assert!((nu.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_law_always_zero() {
        let d = OffspringDistribution::from_finite(&[1.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert!((0..10_000).all(|_| d.sample(&mut rng) == 0));
    }

    #[test]
    fn sample_mean_within_three_standard_errors() {
        let d = OffspringDistribution::heavy_tail(2.5, 0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 1_000_000;
        let xs: Vec<f64> = (0..n).map(|_| d.sample(&mut rng) as f64).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let se = (var / n as f64).sqrt();
        assert!((mean - 0.5).abs() < 3.0 * se, "mean {mean} se {se}");
    }

    #[test]
    fn sample_tail_frequency() {
        // μ([50, ∞)) ≈ 8.6e-6, so the ±10% band needs ~1e8 draws
        let d = OffspringDistribution::heavy_tail(2.5, 0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let n = 100_000_000u64;
        let hits = (0..n).filter(|_| d.sample(&mut rng) >= 50).count();
        let ratio = hits as f64 / (n as f64 * d.tail_sum(50));
        assert!((0.9..=1.1).contains(&ratio), "tail ratio {ratio}");
    }

    #[test]
    fn chi_square_fit_of_sampler() {
        let d = OffspringDistribution::heavy_tail(2.5, 0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let xs: Vec<i64> = (0..1_000_000).map(|_| d.sample(&mut rng).min(200) as i64).collect();
        let mut pmf: crate::stats::Pmf = (0..200).map(|k| (k, d.pmf(k as u64))).collect();
        pmf.insert(200, d.tail_sum(200));
        let c = crate::stats::chi_square(&xs, &pmf, 5.0).unwrap();
        assert!(c.p_value > 1e-3, "{c:?}");
    }

    #[test]
    fn tail_samples_beyond_dense_range() {
        // tiny dense range forces the analytic inverse
        let d = OffspringDistribution::build(1.5, 0.5, 10, SlowlyVarying::Constant).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 400_000;
        let mut counts = [0usize; 3];
        for _ in 0..n {
            let k = d.sample(&mut rng);
            if k >= 11 {
                counts[0] += 1;
            }
            if k >= 100 {
                counts[1] += 1;
            }
            if k == 11 {
                counts[2] += 1;
            }
        }
        for (c, p) in [
            (counts[0], d.tail_sum(11)),
            (counts[1], d.tail_sum(100)),
            (counts[2], d.pmf(11)),
        ] {
            let expect = p * n as f64;
            assert!((c as f64 - expect).abs() < 4.0 * expect.sqrt() + 1.0, "{c} vs {expect}");
        }
    }

    #[test]
    fn norming_finite_variance() {
        let d = OffspringDistribution::from_finite(&[0.5, 0.0, 0.0, 0.0]).unwrap();
        // zero variance law exercises the formula only
        assert_eq!(norming_sequence(&d, 50).unwrap(), 0.0);
        let d = small(3.0);
        let b = norming_sequence(&d, 50).unwrap();
        assert!((b - (d.variance().unwrap() * 25.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn norming_sequence_sigma_sqrt_half_n() {
        // two-point law on {0, 4} with 16p(1 − p) = 2
        let p = (1.0 - 0.5f64.sqrt()) / 2.0;
        let d = OffspringDistribution::from_finite(&[1.0 - p, 0.0, 0.0, 0.0, p]).unwrap();
        let sigma2 = d.variance().unwrap();
        assert!((sigma2 - 2.0).abs() < 1e-12);
        assert!((norming_sequence(&d, 50).unwrap() - 50f64.sqrt()).abs() < 1e-10);
        let b = norming_sequence(&d, 50).unwrap();
        assert!((b - (sigma2 * 25.0).sqrt()).abs() < 1e-12);
        let expect = 50f64.sqrt() * (sigma2 / 2.0).sqrt();
        assert!((b - expect).abs() < 1e-12);
    }

    #[test]
    fn norming_tail_quantile() {
        let d = OffspringDistribution::heavy_tail(1.5, 0.5).unwrap();
        for (n, expect) in [(100u64, 6u64), (5000, 75)] {
            let b = norming_sequence(&d, n).unwrap();
            assert_eq!(b as u64, expect);
            assert!(d.tail_sum(b as u64) <= 1.0 / n as f64);
            assert!(d.tail_sum(b as u64 - 1) > 1.0 / n as f64);
        }
        // beyond the dense range
        let d = OffspringDistribution::build(1.5, 0.5, 20, SlowlyVarying::Constant).unwrap();
        let b = norming_sequence(&d, 5000).unwrap() as u64;
        assert_eq!(b, 75);
    }

    #[test]
    fn theta_two_infinite_variance_unsupported() {
        let d = small(2.0);
        assert!(matches!(norming_sequence(&d, 10), Err(Error::Unsupported(_))));
    }

    #[test]
    fn alias_table_frequencies() {
        let w = [0.1, 0.0, 0.5, 0.4];
        let t = AliasTable::new(&w);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut counts = [0usize; 4];
        let n = 200_000;
        for _ in 0..n {
            counts[t.sample(&mut rng)] += 1;
        }
        assert_eq!(counts[1], 0);
        for i in [0, 2, 3] {
            let expect = w[i] * n as f64;
            assert!((counts[i] as f64 - expect).abs() < 4.0 * expect.sqrt());
        }
    }

    #[test]
    fn fingerprints_distinguish_laws() {
        assert_ne!(small(2.5).fingerprint(), small(3.0).fingerprint());
        assert_eq!(small(2.5).fingerprint(), small(2.5).fingerprint());
    }
}
