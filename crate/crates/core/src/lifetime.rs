//! Lifetime laws supported on `[0, inf)`.
//!
//! Models are parsed from the compact grammar used on the command line:
//! `exp:rate`, `weibull:shape,scale`, `uniform:lo,hi` and
//! `empirical:@file.csv` (one nonnegative value per line).

use std::fmt;
use std::path::Path;

use statrs::function::gamma::{gamma, gamma_ur};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Exponential { rate: f64 },
    Weibull { shape: f64, scale: f64 },
    Uniform { lo: f64, hi: f64 },
    Empirical { sorted: Vec<f64> },
}

/// An immutable lifetime distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct LifetimeModel {
    kind: Kind,
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::domain(format!("{name} must be positive and finite, got {v}")))
    }
}

impl LifetimeModel {
    pub fn exponential(rate: f64) -> Result<Self> {
        let rate = positive("rate", rate)?;
        Ok(Self { kind: Kind::Exponential { rate } })
    }

    pub fn weibull(shape: f64, scale: f64) -> Result<Self> {
        let shape = positive("shape", shape)?;
        let scale = positive("scale", scale)?;
        Ok(Self { kind: Kind::Weibull { shape, scale } })
    }

    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo < 0.0 || lo >= hi {
            return Err(Error::domain(format!(
                "uniform bounds need 0 <= lo < hi, got lo = {lo}, hi = {hi}"
            )));
        }
        Ok(Self { kind: Kind::Uniform { lo, hi } })
    }

    /// Empirical law of a sample; the values are sorted on construction.
    pub fn empirical(mut sample: Vec<f64>) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::domain("empirical sample is empty"));
        }
        if let Some(bad) = sample.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::domain(format!(
                "empirical sample values must be finite and nonnegative, got {bad}"
            )));
        }
        sample.sort_by(f64::total_cmp);
        Ok(Self { kind: Kind::Empirical { sorted: sample } })
    }

    /// Parses `exp:rate`, `weibull:shape,scale`, `uniform:lo,hi` or `empirical:@path`.
    pub fn parse_spec(spec: &str) -> Result<Self> {
        let (name, args) = spec
            .split_once(':')
            .ok_or_else(|| Error::domain(format!("model spec `{spec}` lacks a `kind:` prefix")))?;
        if name == "empirical" {
            let path = args.strip_prefix('@').ok_or_else(|| {
                Error::domain(format!("empirical model expects `empirical:@file`, got `{spec}`"))
            })?;
            return Self::from_sample_file(path);
        }
        let nums = args
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::domain(format!("bad number `{s}` in model spec `{spec}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        match (name, nums.as_slice()) {
            ("exp", [rate]) => Self::exponential(*rate),
            ("weibull", [shape, scale]) => Self::weibull(*shape, *scale),
            ("uniform", [lo, hi]) => Self::uniform(*lo, *hi),
            _ => Err(Error::domain(format!(
                "unknown model spec `{spec}` (expected exp:rate, weibull:shape,scale, uniform:lo,hi or empirical:@file)"
            ))),
        }
    }

    /// Reads one value per line; blank lines are skipped.
    pub fn from_sample_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())?;
        let mut sample = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let v = line.parse::<f64>().map_err(|_| {
                Error::domain(format!("line {}: `{line}` is not a number", lineno + 1))
            })?;
            sample.push(v);
        }
        Self::empirical(sample)
    }

    /// Whether [`pdf`](Self::pdf) is available.
    pub fn has_density(&self) -> bool {
        !matches!(self.kind, Kind::Empirical { .. })
    }

    pub(crate) fn require_density(&self) -> Result<()> {
        if self.has_density() {
            Ok(())
        } else {
            Err(Error::Unsupported(format!("model `{self}` has no density")))
        }
    }

    /// Distribution function `F(x)`; right-continuous for empirical models.
    pub fn cdf(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        match &self.kind {
            Kind::Exponential { rate } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-rate * x).exp_m1()
                }
            }
            Kind::Weibull { shape, scale } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-(x / scale).powf(*shape)).exp_m1()
                }
            }
            Kind::Uniform { lo, hi } => ((x - lo) / (hi - lo)).clamp(0.0, 1.0),
            Kind::Empirical { sorted } => {
                let count = sorted.partition_point(|v| *v <= x);
                count as f64 / sorted.len() as f64
            }
        }
    }

    /// Survival function `1 - F(x)`, evaluated without cancellation where possible.
    pub fn survival(&self, x: f64) -> f64 {
        match &self.kind {
            Kind::Exponential { rate } => {
                if x <= 0.0 {
                    1.0
                } else {
                    (-rate * x).exp()
                }
            }
            Kind::Weibull { shape, scale } => {
                if x <= 0.0 {
                    1.0
                } else {
                    (-(x / scale).powf(*shape)).exp()
                }
            }
            _ => 1.0 - self.cdf(x),
        }
    }

    /// Density `f(x)`.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        let v = match &self.kind {
            Kind::Exponential { rate } => {
                if x < 0.0 {
                    0.0
                } else {
                    rate * (-rate * x).exp()
                }
            }
            Kind::Weibull { shape, scale } => {
                if x < 0.0 {
                    0.0
                } else {
                    let z = x / scale;
                    shape / scale * z.powf(shape - 1.0) * (-z.powf(*shape)).exp()
                }
            }
            Kind::Uniform { lo, hi } => {
                if x < *lo || x > *hi {
                    0.0
                } else {
                    1.0 / (hi - lo)
                }
            }
            Kind::Empirical { .. } => return Err(self.require_density().unwrap_err()),
        };
        Ok(v)
    }

    /// Inverse CDF on `(0, 1)`; empirical models return the smallest sample
    /// value `x` with `F(x) >= u`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::domain(format!("quantile level u = {u} is outside (0, 1)")));
        }
        Ok(self.quantile_unchecked(u))
    }

    pub(crate) fn quantile_unchecked(&self, u: f64) -> f64 {
        match &self.kind {
            Kind::Exponential { rate } => -(-u).ln_1p() / rate,
            Kind::Weibull { shape, scale } => scale * (-(-u).ln_1p()).powf(1.0 / shape),
            Kind::Uniform { lo, hi } => lo + u * (hi - lo),
            Kind::Empirical { sorted } => {
                let n = sorted.len();
                let idx = ((u * n as f64).ceil() as usize).clamp(1, n) - 1;
                sorted[idx]
            }
        }
    }

    /// Smallest `x` with `1 - F(x) <= eps`, for `0 < eps < 1`.
    pub fn upper_quantile(&self, eps: f64) -> f64 {
        match &self.kind {
            Kind::Exponential { rate } => -eps.ln() / rate,
            Kind::Weibull { shape, scale } => scale * (-eps.ln()).powf(1.0 / shape),
            Kind::Uniform { lo, hi } => lo + (1.0 - eps) * (hi - lo),
            Kind::Empirical { .. } => self.quantile_unchecked(1.0 - eps),
        }
    }

    /// Partial expectation `E[X; X > u] = int_u^inf x f(x) dx`.
    pub fn tail_partial_mean(&self, u: f64) -> f64 {
        let u = u.max(0.0);
        match &self.kind {
            Kind::Exponential { rate } => (u + 1.0 / rate) * (-rate * u).exp(),
            Kind::Weibull { shape, scale } => {
                let a = 1.0 + 1.0 / shape;
                scale * gamma(a) * gamma_ur(a, (u / scale).powf(*shape))
            }
            Kind::Uniform { lo, hi } => {
                if u >= *hi {
                    0.0
                } else {
                    let m = u.max(*lo);
                    (hi * hi - m * m) / (2.0 * (hi - lo))
                }
            }
            Kind::Empirical { sorted } => {
                sorted.iter().filter(|v| **v > u).sum::<f64>() / sorted.len() as f64
            }
        }
    }

    pub fn mean(&self) -> f64 {
        self.tail_partial_mean(0.0)
    }
}

impl fmt::Display for LifetimeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::Exponential { rate } => write!(f, "exp:{rate}"),
            Kind::Weibull { shape, scale } => write!(f, "weibull:{shape},{scale}"),
            Kind::Uniform { lo, hi } => write!(f, "uniform:{lo},{hi}"),
            Kind::Empirical { sorted } => write!(f, "empirical[{} values]", sorted.len()),
        }
    }
}
