//! Limit laws: geometric laws, Fréchet-type laws, the spectrally positive
//! stable marginal `Y_1`, the location law of the big vertex and the
//! spine marginal `1 + e_0 + e_1`.

use std::f64::consts::PI;

use rand::Rng;

use crate::error::{Error, Result};
use crate::offspring::{tail_quantile, OffspringDistribution};
use crate::par::map_replicas;
use crate::stats::{CompensatedSum, Moments};
use crate::walk::size_pmf;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Euler's Gamma function (Lanczos, with reflection below 1/2).
pub fn gamma_function(x: f64) -> Result<f64> {
    if !x.is_finite() || (x <= 0.0 && x == x.floor()) {
        return Err(Error::OutOfRange(format!("Gamma has a pole or is undefined at {x}")));
    }
    Ok(gamma_unchecked(x))
}

fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma_unchecked(1.0 - x));
    }
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}

/// `exp(u^{−θ} / (γ^θ Γ(1−θ)))` for `u > 0`, and `0` for `u ≤ 0`.
/// Pass `gamma = 1` for the unscaled law of `D_n / B_n`.
pub fn frechet_cdf(u: f64, theta: f64, gamma: f64) -> Result<f64> {
    Ok(Frechet::new(theta, gamma)?.cdf(u))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frechet {
    theta: f64,
    /// `1 / (γ^θ |Γ(1−θ)|)`.
    rate: f64,
}

impl Frechet {
    pub fn new(theta: f64, gamma: f64) -> Result<Self> {
        if !(theta > 1.0 && theta < 2.0) {
            return Err(Error::Unsupported(format!(
                "Fréchet-type limit needs theta in (1,2), got {theta}; for theta >= 2 the limit is the point mass at 0"
            )));
        }
        if !(gamma > 0.0) {
            return Err(Error::Config(format!("scale must be positive, got {gamma}")));
        }
        let g = gamma_unchecked(1.0 - theta);
        Ok(Frechet {
            theta,
            rate: 1.0 / (gamma.powf(theta) * g.abs()),
        })
    }

    pub fn cdf(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        (-self.rate * u.powf(-self.theta)).exp()
    }

    pub fn quantile(&self, p: f64) -> f64 {
        if p <= 0.0 {
            return 0.0;
        }
        if p >= 1.0 {
            return f64::INFINITY;
        }
        (self.rate / -p.ln()).powf(1.0 / self.theta)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.quantile(open_unit(rng))
    }
}

fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}

/// Norming `B_n` under which `W̄_n / B_n → Y_1` with `E[e^{−λY_1}] = e^{λ^α}`.
///
/// For finite variance this is `σ√(n/2)`. For `θ < 2` it is the tail quantile
/// at level `1 / (n |Γ(1−θ)|)`, i.e. `(n c |Γ(1−θ)| / θ)^{1/θ}` up to
/// lattice effects for a pure power tail.
pub fn stable_norming(dist: &OffspringDistribution, n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Config("norming sequence needs n >= 1".into()));
    }
    if let Some(var) = dist.variance() {
        return Ok((var * n as f64 / 2.0).sqrt());
    }
    let theta = dist.theta();
    if theta >= 2.0 {
        return Err(Error::Unsupported(
            "theta = 2 with infinite variance has no constructive norming sequence".into(),
        ));
    }
    let g = gamma_unchecked(1.0 - theta).abs();
    Ok(tail_quantile(dist, 1.0 / (n as f64 * g)) as f64)
}

/// Spectrally positive strictly stable variable with `E[e^{−λY}] = e^{λ^α}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stable {
    alpha: f64,
}

impl Stable {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha <= 2.0) {
            return Err(Error::OutOfRange(format!("stable index must lie in (1,2], got {alpha}")));
        }
        Ok(Stable { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `E[e^{−λY}]`.
    pub fn laplace(&self, lambda: f64) -> f64 {
        lambda.powf(self.alpha).exp()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let a = self.alpha;
        if a == 2.0 {
            // Box–Muller, variance 2
            let u1 = open_unit(rng);
            let u2: f64 = rng.random();
            return 2.0 * (-u1.ln()).sqrt() * (2.0 * PI * u2).cos();
        }
        // Chambers–Mallows–Stuck with skewness +1; scale |cos(πα/2)|^{1/α}
        let v = PI * (rng.random::<f64>() - 0.5);
        let w = -open_unit(rng).ln();
        let t = (PI * a / 2.0).tan();
        let b = t.atan() / a;
        let s = (1.0 + t * t).powf(1.0 / (2.0 * a));
        let x = s * (a * (v + b)).sin() / v.cos().powf(1.0 / a)
            * ((v - a * (v + b)).cos() / w).powf((1.0 - a) / a);
        let sigma = (PI * a / 2.0).cos().abs().powf(1.0 / a);
        sigma * x
    }
}

pub fn sample_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> Result<f64> {
    Ok(Stable::new(alpha)?.sample(rng))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceCheck {
    pub lambda: f64,
    pub estimate: f64,
    pub standard_error: f64,
    pub target: f64,
}

impl LaplaceCheck {
    /// Deviation in standard errors.
    pub fn z(&self) -> f64 {
        (self.estimate - self.target) / self.standard_error
    }
}

/// Monte Carlo check of `E[e^{−λY}] = e^{λ^α}` at each `λ`.
pub fn laplace_self_test(alpha: f64, lambdas: &[f64], draws: u64, seed: u64) -> Result<Vec<LaplaceCheck>> {
    let law = Stable::new(alpha)?;
    const CHUNKS: u64 = 64;
    let per = draws.div_ceil(CHUNKS);
    let tag = format!("stable-laplace-{alpha}");
    let parts = map_replicas(seed, &tag, CHUNKS, |_, rng| {
        let mut acc: Vec<Moments> = vec![Moments::default(); lambdas.len()];
        for _ in 0..per {
            let y = law.sample(rng);
            for (m, &l) in acc.iter_mut().zip(lambdas) {
                m.push((-l * y).exp());
            }
        }
        acc
    });
    let mut total: Vec<Moments> = vec![Moments::default(); lambdas.len()];
    for part in parts {
        for (t, p) in total.iter_mut().zip(part) {
            t.merge(&p);
        }
    }
    Ok(lambdas
        .iter()
        .zip(total)
        .map(|(&lambda, m)| LaplaceCheck {
            lambda,
            estimate: m.mean(),
            standard_error: m.standard_error(),
            target: law.laplace(lambda),
        })
        .collect())
}

/// `P(G = k) = (1 − m) m^k`, `k ≥ 0`.
pub fn geometric_pmf(m: f64, k: i64) -> f64 {
    if k < 0 {
        return 0.0;
    }
    (1.0 - m) * m.powi(k as i32)
}

/// Law of `1 + e_0 + e_1` with `e_i` i.i.d. geometric(1 − m): `h (1−m)² m^{h−1}`.
pub fn spine_marginal_pmf(m: f64, h: i64) -> f64 {
    if h < 1 {
        return 0.0;
    }
    h as f64 * (1.0 - m).powi(2) * m.powi(h as i32 - 1)
}

/// Limit law of the index of the big vertex: `γ · P(|τ| ≥ i + 1)`.
#[derive(Debug, Clone)]
pub struct ULocation {
    gamma: f64,
    /// `P(|τ| ≥ i + 1)` for `i ≤ imax`.
    tail: Vec<f64>,
    envelope: f64,
}

impl ULocation {
    pub fn new(dist: &OffspringDistribution, imax: usize) -> Result<Self> {
        let sizes = size_pmf(dist, imax);
        let mut acc = CompensatedSum::new();
        let mut tail = Vec::with_capacity(imax + 1);
        tail.push(1.0);
        for &p in &sizes {
            acc.add(p);
            tail.push((1.0 - acc.value()).max(0.0));
        }
        let theta = dist.theta();
        let gamma = dist.gamma();
        let envelope = if theta.is_finite() && theta > 1.0 {
            dist.scale() * gamma.powf(-theta) * (imax as f64).powf(1.0 - theta)
                / (theta * (theta - 1.0))
        } else {
            0.0
        };
        Ok(ULocation { gamma, tail, envelope })
    }

    pub fn imax(&self) -> usize {
        self.tail.len() - 1
    }

    /// `γ P(|τ| ≥ i + 1)`, or `None` beyond the tabulated range.
    pub fn pmf(&self, i: i64) -> Option<f64> {
        if i < 0 {
            return Some(0.0);
        }
        self.tail.get(i as usize).map(|t| self.gamma * t)
    }

    /// Mass of `{i > imax}`, computed as one minus the tabulated sum.
    pub fn remainder(&self) -> f64 {
        let s: CompensatedSum = (0..=self.imax() as i64).filter_map(|i| self.pmf(i)).collect();
        1.0 - s.value()
    }

    /// Power-law envelope for the remainder from the size asymptotics.
    pub fn remainder_envelope(&self) -> f64 {
        self.envelope
    }
}

/// A limit law with its evaluators.
#[derive(Debug, Clone)]
pub enum LimitLaw {
    /// Geometric on `{0,1,...}` with `P(k) = (1−m) m^k`.
    Geometric { m: f64 },
    Frechet(Frechet),
    Stable(Stable),
    ULocation(ULocation),
    SpineMarginal { m: f64 },
}

impl LimitLaw {
    pub fn name(&self) -> &'static str {
        match self {
            LimitLaw::Geometric { .. } => "geometric",
            LimitLaw::Frechet(_) => "frechet_theta",
            LimitLaw::Stable(_) => "stable_alpha",
            LimitLaw::ULocation(_) => "u_location",
            LimitLaw::SpineMarginal { .. } => "spine_marginal",
        }
    }

    pub fn pmf(&self, k: i64) -> Option<f64> {
        match self {
            LimitLaw::Geometric { m } => Some(geometric_pmf(*m, k)),
            LimitLaw::SpineMarginal { m } => Some(spine_marginal_pmf(*m, k)),
            LimitLaw::ULocation(u) => u.pmf(k),
            LimitLaw::Frechet(_) | LimitLaw::Stable(_) => None,
        }
    }

    /// Closed-form cdf where one is available.
    pub fn cdf(&self, x: f64) -> Option<f64> {
        match self {
            LimitLaw::Geometric { m } => Some(if x < 0.0 {
                0.0
            } else {
                1.0 - m.powf(x.floor() + 1.0)
            }),
            LimitLaw::SpineMarginal { m } => Some(if x < 1.0 {
                0.0
            } else {
                // P(e_0 + e_1 ≥ j) = m^j (1 + j(1−m)) with j = ⌊x⌋
                let j = x.floor();
                1.0 - m.powf(j) * (1.0 + j * (1.0 - m))
            }),
            LimitLaw::Frechet(f) => Some(f.cdf(x)),
            LimitLaw::ULocation(u) => {
                if x < 0.0 {
                    return Some(0.0);
                }
                let top = (x.floor() as usize).min(u.imax());
                let s: CompensatedSum = (0..=top as i64).filter_map(|i| u.pmf(i)).collect();
                Some(s.value())
            }
            LimitLaw::Stable(_) => None,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let geometric = |m: f64, rng: &mut R| -> f64 {
            if m <= 0.0 {
                return 0.0;
            }
            (open_unit(rng).ln() / m.ln()).floor()
        };
        match self {
            LimitLaw::Geometric { m } => geometric(*m, rng),
            LimitLaw::SpineMarginal { m } => 1.0 + geometric(*m, rng) + geometric(*m, rng),
            LimitLaw::Frechet(f) => f.sample(rng),
            LimitLaw::Stable(s) => s.sample(rng),
            LimitLaw::ULocation(u) => {
                let v: f64 = rng.random();
                let mut acc = 0.0;
                for i in 0..=u.imax() as i64 {
                    acc += u.pmf(i).unwrap_or(0.0);
                    if v < acc {
                        return i as f64;
                    }
                }
                u.imax() as f64 + 1.0
            }
        }
    }
}
