//! Textual offspring-law specifications, e.g. `theta=2.5,m=0.5` or
//! `finite:0.5,0.3,0.2`.

use std::fmt;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context};
use condensation_core::offspring::DEFAULT_KMAX;
use condensation_core::{OffspringDistribution, SlowlyVarying};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistSpec {
    HeavyTail {
        theta: f64,
        m: f64,
        kmax: usize,
        /// `a` in `𝓛(k) = c (1 + a / ln(e + k))`; zero for a constant.
        log_exponent: f64,
    },
    Finite {
        weights: Vec<f64>,
    },
}

impl DistSpec {
    pub fn heavy(theta: f64, m: f64) -> Self {
        DistSpec::HeavyTail {
            theta,
            m,
            kmax: DEFAULT_KMAX,
            log_exponent: 0.0,
        }
    }

    pub fn build(&self) -> anyhow::Result<OffspringDistribution> {
        let dist = match self {
            DistSpec::HeavyTail {
                theta,
                m,
                kmax,
                log_exponent,
            } => {
                let slowly = if *log_exponent == 0.0 {
                    SlowlyVarying::Constant
                } else {
                    SlowlyVarying::LogCorrection { a: *log_exponent }
                };
                OffspringDistribution::build(*theta, *m, *kmax, slowly)?
            }
            DistSpec::Finite { weights } => OffspringDistribution::from_finite(weights)?,
        };
        Ok(dist)
    }
}

impl FromStr for DistSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("finite:") {
            let weights = rest
                .split(',')
                .map(|w| w.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .with_context(|| format!("bad weight list in {s:?}"))?;
            return Ok(DistSpec::Finite { weights });
        }
        let (mut theta, mut m, mut kmax, mut log_exponent) = (None, None, DEFAULT_KMAX, 0.0);
        for part in s.split(',') {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| anyhow!("expected key=value in {part:?}"))?;
            let value = value.trim();
            match key.trim() {
                "theta" => theta = Some(value.parse()?),
                "m" => m = Some(value.parse()?),
                "kmax" => kmax = value.parse()?,
                "log" => log_exponent = value.parse()?,
                other => bail!("unknown distribution key {other:?}"),
            }
        }
        Ok(DistSpec::HeavyTail {
            theta: theta.ok_or_else(|| anyhow!("missing theta in {s:?}"))?,
            m: m.ok_or_else(|| anyhow!("missing m in {s:?}"))?,
            kmax,
            log_exponent,
        })
    }
}

impl fmt::Display for DistSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistSpec::HeavyTail {
                theta,
                m,
                kmax,
                log_exponent,
            } => {
                write!(f, "theta={theta},m={m}")?;
                if *kmax != DEFAULT_KMAX {
                    write!(f, ",kmax={kmax}")?;
                }
                if *log_exponent != 0.0 {
                    write!(f, ",log={log_exponent}")?;
                }
                Ok(())
            }
            DistSpec::Finite { weights } => {
                let parts: Vec<String> = weights.iter().map(|w| w.to_string()).collect();
                write!(f, "finite:{}", parts.join(","))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        for s in ["theta=2.5,m=0.5", "theta=1.5,m=0.3,kmax=1000,log=1", "finite:0.5,0.3,0.2"] {
            let d: DistSpec = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
        assert!("theta=2.5".parse::<DistSpec>().is_err());
        assert!("theta=2.5,m=0.5,x=1".parse::<DistSpec>().is_err());
    }
}
