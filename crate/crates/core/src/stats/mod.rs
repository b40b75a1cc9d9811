//! Goodness-of-fit statistics and mergeable accumulators.
//!
//! KS p-values use the asymptotic Kolmogorov distribution and are only
//! meaningful for continuous targets; discrete targets go through
//! [`chi_square`].

mod sum;

pub use sum::{compensated_sum, CompensatedSum};

use std::collections::BTreeMap;

use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

/// Finite pmf over integer values.
pub type Pmf = BTreeMap<i64, f64>;

/// Right-continuous empirical distribution function.
#[derive(Debug, Clone)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(samples: &[f64]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Empty("empirical cdf needs samples"));
        }
        let mut sorted = samples.to_vec();
        sorted.sort_by(|a, b| a.total_cmp(b));
        Ok(EmpiricalCdf { sorted })
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&s| s <= x) as f64 / self.sorted.len() as f64
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }

    /// Empirical `q`-quantile (lower).
    pub fn quantile(&self, q: f64) -> f64 {
        let idx = ((q * self.sorted.len() as f64).ceil() as usize).clamp(1, self.sorted.len());
        self.sorted[idx - 1]
    }
}

pub fn empirical_cdf(samples: &[f64]) -> Result<EmpiricalCdf> {
    EmpiricalCdf::new(samples)
}

/// `sup_x |F_N(x) − F(x)|` against a cdf. Left limits are evaluated just
/// below each atom, so step cdfs are handled as well.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<f64> {
    let ecdf = EmpiricalCdf::new(samples)?;
    let n = ecdf.len() as f64;
    let mut d: f64 = 0.0;
    let xs = ecdf.sorted();
    let mut i = 0;
    while i < xs.len() {
        let x = xs[i];
        let mut j = i;
        while j < xs.len() && xs[j] == x {
            j += 1;
        }
        let f = cdf(x);
        let f_left = cdf(x.next_down());
        d = d.max((j as f64 / n - f).abs()).max((f_left - i as f64 / n).abs());
        i = j;
    }
    Ok(d.min(1.0))
}

/// Two-sample KS distance `sup_x |F_a(x) − F_b(x)|`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    let fa = EmpiricalCdf::new(a)?;
    let fb = EmpiricalCdf::new(b)?;
    let (xa, xb) = (fa.sorted(), fb.sorted());
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < xa.len() && j < xb.len() {
        let x = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= x {
            i += 1;
        }
        while j < xb.len() && xb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// `P(K > x)` for the Kolmogorov distribution.
pub fn kolmogorov_sf(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < 1.18 {
        // small-x theta-function form converges faster here
        let y = -std::f64::consts::PI.powi(2) / (8.0 * x * x);
        let c = (2.0 * std::f64::consts::PI).sqrt() / x;
        let s: f64 = (1..=20)
            .map(|k| ((2 * k - 1) as f64).powi(2) * y)
            .map(f64::exp)
            .sum();
        return (1.0 - c * s).clamp(0.0, 1.0);
    }
    let s: f64 = (1..=100)
        .map(|k| {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            sign * (-2.0 * (k * k) as f64 * x * x).exp()
        })
        .sum();
    (2.0 * s).clamp(0.0, 1.0)
}

/// Asymptotic KS p-value with Stephens' small-sample correction; `n` is the
/// effective sample size.
pub fn ks_p_value(d: f64, n: f64) -> f64 {
    let sn = n.sqrt();
    kolmogorov_sf((sn + 0.12 + 0.11 / sn) * d)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    /// Merged bins as (first value, observed, expected).
    pub bins: Vec<(i64, f64, f64)>,
}

/// Pearson χ² of integer samples against `pmf`. Adjacent cells (in value
/// order) are merged until each expected count reaches `min_expected`; mass
/// outside the listed support is pooled into the last cell.
pub fn chi_square(samples: &[i64], pmf: &Pmf, min_expected: f64) -> Result<ChiSquare> {
    if samples.is_empty() {
        return Err(Error::Empty("chi-square needs samples"));
    }
    let n = samples.len() as f64;
    let mut observed: BTreeMap<i64, f64> = BTreeMap::new();
    for &s in samples {
        *observed.entry(s).or_default() += 1.0;
    }
    let mut cells: Vec<(i64, f64, f64)> = Vec::new();
    let mut listed_obs = 0.0;
    let mut listed_mass = 0.0;
    for (&k, &p) in pmf {
        let o = observed.get(&k).copied().unwrap_or(0.0);
        listed_obs += o;
        listed_mass += p;
        cells.push((k, o, p * n));
    }
    let rest_obs = n - listed_obs;
    let rest_exp = (1.0 - listed_mass).max(0.0) * n;
    if let Some(last) = cells.last_mut() {
        last.1 += rest_obs;
        last.2 += rest_exp;
    } else {
        return Err(Error::Config("chi-square needs a nonempty pmf".into()));
    }

    let mut merged: Vec<(i64, f64, f64)> = Vec::new();
    let mut pending: Option<(i64, f64, f64)> = None;
    for c in cells {
        let cur = match pending.take() {
            Some(p) => (p.0, p.1 + c.1, p.2 + c.2),
            None => c,
        };
        if cur.2 >= min_expected {
            merged.push(cur);
        } else {
            pending = Some(cur);
        }
    }
    if let Some(p) = pending {
        match merged.last_mut() {
            Some(last) => {
                last.1 += p.1;
                last.2 += p.2;
            }
            None => merged.push(p),
        }
    }
    if merged.len() < 2 {
        return Err(Error::Config(
            "chi-square binning degenerated to a single cell".into(),
        ));
    }
    if merged.iter().any(|c| c.2 <= 0.0 && c.1 > 0.0) {
        return Ok(ChiSquare {
            statistic: f64::INFINITY,
            dof: merged.len() - 1,
            p_value: 0.0,
            bins: merged,
        });
    }
    let statistic: f64 = merged
        .iter()
        .filter(|c| c.2 > 0.0)
        .map(|c| (c.1 - c.2).powi(2) / c.2)
        .sum();
    let dof = merged.len() - 1;
    let dist = ChiSquared::new(dof as f64)
        .map_err(|e| Error::Internal(format!("chi-squared distribution: {e}")))?;
    Ok(ChiSquare {
        statistic,
        dof,
        p_value: dist.sf(statistic),
        bins: merged,
    })
}

/// `½ Σ |p_a(k) − p_b(k)|` over the union of supports.
pub fn tv_distance<K: Ord + Clone>(a: &BTreeMap<K, f64>, b: &BTreeMap<K, f64>) -> f64 {
    let mut acc = CompensatedSum::new();
    for (k, pa) in a {
        acc.add((pa - b.get(k).copied().unwrap_or(0.0)).abs());
    }
    for (k, pb) in b {
        if !a.contains_key(k) {
            acc.add(pb.abs());
        }
    }
    0.5 * acc.value()
}

/// Normalized empirical pmf.
pub fn empirical_pmf<K: Ord + Clone>(samples: &[K]) -> BTreeMap<K, f64> {
    let mut out: BTreeMap<K, f64> = BTreeMap::new();
    let w = 1.0 / samples.len() as f64;
    for s in samples {
        *out.entry(s.clone()).or_default() += w;
    }
    out
}

/// Sample mean and its standard error.
pub fn mean_se(samples: &[f64]) -> Result<(f64, f64)> {
    let acc: Moments = samples.iter().copied().collect();
    if acc.count() == 0 {
        return Err(Error::Empty("mean needs samples"));
    }
    Ok((acc.mean(), acc.standard_error()))
}

/// Mergeable count / mean / second-moment accumulator (Chan et al. update).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Moments) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        self.mean += delta * other.n as f64 / n as f64;
        self.m2 += other.m2 + delta * delta * (self.n as f64 * other.n as f64) / n as f64;
        self.n = n;
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    pub fn standard_error(&self) -> f64 {
        if self.n == 0 {
            f64::NAN
        } else {
            (self.variance() / self.n as f64).sqrt()
        }
    }
}

impl FromIterator<f64> for Moments {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut m = Moments::default();
        for x in iter {
            m.push(x);
        }
        m
    }
}

/// Integer histogram with order-independent merge.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Histogram {
    counts: BTreeMap<i64, u64>,
    total: u64,
}

impl Histogram {
    pub fn push(&mut self, k: i64) {
        *self.counts.entry(k).or_default() += 1;
        self.total += 1;
    }

    pub fn merge(&mut self, other: &Histogram) {
        for (&k, &c) in &other.counts {
            *self.counts.entry(k).or_default() += c;
        }
        self.total += other.total;
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn count(&self, k: i64) -> u64 {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    pub fn pmf(&self) -> Pmf {
        self.counts
            .iter()
            .map(|(&k, &c)| (k, c as f64 / self.total as f64))
            .collect()
    }
}

impl FromIterator<i64> for Histogram {
    fn from_iter<I: IntoIterator<Item = i64>>(iter: I) -> Self {
        let mut h = Histogram::default();
        for k in iter {
            h.push(k);
        }
        h
    }
}

/// Pearson correlation of paired samples.
pub fn correlation(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::Empty("correlation needs two or more pairs"));
    }
    let mx = x.iter().sum::<f64>() / x.len() as f64;
    let my = y.iter().sum::<f64>() / y.len() as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    Ok(sxy / (sxx * syy).sqrt())
}

/// Least-squares slope of `y` on `x`.
pub fn ols_slope(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::Empty("regression needs two or more points"));
    }
    let mx = x.iter().sum::<f64>() / x.len() as f64;
    let my = y.iter().sum::<f64>() / y.len() as f64;
    let num: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let den: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    Ok(num / den)
}
