//! Joint and conditional laws of sample observations and the `r`-th order
//! statistic of an iid sample of size `n`.
//!
//! Write `p = F(t)` and use the integer-shape incomplete beta function
//! `I_p(a, b)`. The building blocks are
//!
//! ```text
//! A(p) = I_p(r-1, n-r+1)   P{at least r-1 of n-1 obs <= t}
//! B(p) = I_p(r, n-r)       P{at least r of n-1 obs <= t}
//! G(p) = I_p(r, n-r+1)     P{X_{r:n} <= t}
//! ```
//!
//! with the boundary conventions `I_p(0, b) = 1` and `I_p(a, 0) = 0`, which
//! give a single code path for `1 <= r <= n`.
//!
//! All window endpoints are treated as closed; under a continuous `F` the
//! strict and non-strict events coincide almost surely.

use crate::error::{Error, Result};
use crate::lifetime::LifetimeModel;
use crate::special_fns::{binom_pmf, inv_beta_fn, upper_tail, MAX_TRIALS};

/// Conditioning events below this probability are rejected.
pub const NULL_EVENT_FLOOR: f64 = 1e-300;

/// An `(n-r+1)`-out-of-`n` system: `n` components, failing at the `r`-th
/// component failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SystemConfig {
    n: usize,
    r: usize,
}

impl SystemConfig {
    pub fn new(n: usize, r: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("system needs at least one component (n >= 1)"));
        }
        if n > MAX_TRIALS {
            return Err(Error::domain(format!("n = {n} exceeds the supported maximum {MAX_TRIALS}")));
        }
        if r < 1 || r > n {
            return Err(Error::domain(format!("order index r = {r} must satisfy 1 <= r <= n = {n}")));
        }
        Ok(Self { n, r })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Detection targets `k` admitted by the inspection law: `1..r`.
    pub fn max_detectable(&self) -> usize {
        self.r - 1
    }

    /// Last inspection index at which the `k`-th failure can be found.
    pub fn last_inspection(&self, k: usize) -> usize {
        self.n - self.r + k + 1
    }

    fn a_tail(&self, p: f64) -> f64 {
        upper_tail(self.n - 1, self.r - 1, p)
    }

    fn b_tail(&self, p: f64) -> f64 {
        upper_tail(self.n - 1, self.r, p)
    }

    fn g_tail(&self, p: f64) -> f64 {
        upper_tail(self.n, self.r, p)
    }

    /// `C(n-1, r-1) p^(r-1) (1-p)^(n-r)`.
    fn point_mass(&self, p: f64) -> f64 {
        binom_pmf(self.n - 1, self.r - 1, p)
    }
}

/// Inspection window `[t1, t2]` with `0 <= t1 < t2 < inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    t1: f64,
    t2: f64,
}

impl Window {
    pub fn new(t1: f64, t2: f64) -> Result<Self> {
        if !(t1.is_finite() && t2.is_finite()) || t1 < 0.0 || t1 >= t2 {
            return Err(Error::domain(format!("window needs 0 <= t1 < t2 < inf, got t1 = {t1}, t2 = {t2}")));
        }
        Ok(Self { t1, t2 })
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn t2(&self) -> f64 {
        self.t2
    }
}

fn check_time(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} = {v} must be a nonnegative time")))
    }
}

fn check_event(prob: f64) -> Result<f64> {
    if prob >= NULL_EVENT_FLOOR {
        Ok(prob)
    } else {
        Err(Error::ConditioningNull { prob })
    }
}

/// `F(x) - F(t)` for `x >= t`, taken from the survival side to avoid cancellation.
fn cdf_increment(model: &LifetimeModel, t: f64, x: f64) -> f64 {
    (model.survival(t) - model.survival(x)).max(0.0)
}

/// Weights of `f(x)` in the density of `X_1` given `t1 <= X_{r:n} <= t2` on
/// `[0, t1)`, `[t1, t2]` and `(t2, inf)`.
pub(crate) fn between_density_weights(cfg: &SystemConfig, model: &LifetimeModel, w: &Window) -> Result<[f64; 3]> {
    let (p1, p2) = (model.cdf(w.t1), model.cdf(w.t2));
    let denom = check_event(cfg.g_tail(p2) - cfg.g_tail(p1))?;
    let (a1, a2) = (cfg.a_tail(p1), cfg.a_tail(p2));
    let (b1, b2) = (cfg.b_tail(p1), cfg.b_tail(p2));
    Ok([(a2 - a1) / denom, (a2 - b1) / denom, (b2 - b1) / denom])
}

/// `P{X_{r:n} <= t}`.
pub fn order_stat_cdf(cfg: &SystemConfig, model: &LifetimeModel, t: f64) -> Result<f64> {
    check_time("t", t)?;
    Ok(cfg.g_tail(model.cdf(t)))
}

/// `P{t1 <= X_{r:n} <= t2}`.
pub fn order_stat_window_prob(cfg: &SystemConfig, model: &LifetimeModel, w: &Window) -> f64 {
    (cfg.g_tail(model.cdf(w.t2)) - cfg.g_tail(model.cdf(w.t1))).max(0.0)
}

/// `P{X_1 <= x, X_{r:n} <= t}`.
pub fn joint_cdf_single(cfg: &SystemConfig, model: &LifetimeModel, x: f64, t: f64) -> Result<f64> {
    check_time("x", x)?;
    check_time("t", t)?;
    let p = model.cdf(t);
    let fx = model.cdf(x);
    let base = fx * cfg.a_tail(p);
    let v = if x <= t {
        base
    } else {
        base - cdf_increment(model, t, x) * cfg.point_mass(p)
    };
    Ok(v.clamp(0.0, 1.0))
}

/// `P{X_1 <= x | X_{r:n} <= t}`.
pub fn cond_cdf_given_leq(cfg: &SystemConfig, model: &LifetimeModel, x: f64, t: f64) -> Result<f64> {
    check_time("x", x)?;
    check_time("t", t)?;
    let p = model.cdf(t);
    let denom = check_event(cfg.g_tail(p))?;
    let a = cfg.a_tail(p);
    let num = if x <= t {
        model.cdf(x) * a
    } else {
        cdf_increment(model, t, x) * cfg.b_tail(p) + p * a
    };
    Ok((num / denom).clamp(0.0, 1.0))
}

/// `P{X_1 <= x | t1 <= X_{r:n} <= t2}`.
pub fn cond_cdf_between(cfg: &SystemConfig, model: &LifetimeModel, x: f64, w: &Window) -> Result<f64> {
    check_time("x", x)?;
    let (p1, p2) = (model.cdf(w.t1), model.cdf(w.t2));
    let denom = check_event(cfg.g_tail(p2) - cfg.g_tail(p1))?;
    let (a1, a2) = (cfg.a_tail(p1), cfg.a_tail(p2));
    let fx = model.cdf(x);
    let num = if x < w.t1 {
        fx * (a2 - a1)
    } else if x <= w.t2 {
        fx * a2 - cdf_increment(model, w.t1, x) * cfg.b_tail(p1) - p1 * a1
    } else {
        cdf_increment(model, w.t2, x) * cfg.b_tail(p2) + p2 * a2
            - cdf_increment(model, w.t1, x) * cfg.b_tail(p1)
            - p1 * a1
    };
    Ok((num / denom).clamp(0.0, 1.0))
}

fn given_eq_parts(model: &LifetimeModel, t: f64) -> Result<(f64, f64)> {
    check_time("t", t)?;
    let p = model.cdf(t);
    let s = model.survival(t);
    if !(p > 0.0 && s > 0.0) {
        return Err(Error::domain(format!(
            "conditioning on X_(r:n) = t needs 0 < F(t) < 1, got F({t}) = {p}"
        )));
    }
    Ok((p, s))
}

/// `P{X_1 <= x | X_{r:n} = t}`; right-continuous with a jump of `1/n` at `x = t`.
pub fn cond_cdf_given_eq(cfg: &SystemConfig, model: &LifetimeModel, x: f64, t: f64) -> Result<f64> {
    check_time("x", x)?;
    let (p, s) = given_eq_parts(model, t)?;
    let (n, r) = (cfg.n as f64, cfg.r as f64);
    let v = if x < t {
        (r - 1.0) / n * (model.cdf(x) / p)
    } else {
        (n - r) * cdf_increment(model, t, x) / (n * s) + r / n
    };
    Ok(v.clamp(0.0, 1.0))
}

/// `P{X_1 < x | X_{r:n} = t}`, the left-continuous companion of
/// [`cond_cdf_given_eq`]; the two differ only at `x = t`.
pub fn cond_cdf_given_eq_left(cfg: &SystemConfig, model: &LifetimeModel, x: f64, t: f64) -> Result<f64> {
    if x > t {
        return cond_cdf_given_eq(cfg, model, x, t);
    }
    check_time("x", x)?;
    let (p, _) = given_eq_parts(model, t)?;
    let (n, r) = (cfg.n as f64, cfg.r as f64);
    Ok(((r - 1.0) / n * (model.cdf(x) / p)).clamp(0.0, 1.0))
}

fn check_multi(cfg: &SystemConfig, xs: &[f64], t: f64) -> Result<()> {
    check_time("t", t)?;
    if xs.is_empty() || xs.len() > cfg.n {
        return Err(Error::domain(format!(
            "need 1 <= k <= n = {} observations, got k = {}",
            cfg.n,
            xs.len()
        )));
    }
    for (i, &x) in xs.iter().enumerate() {
        check_time("x_i", x)?;
        if x > t {
            return Err(Error::domain(format!(
                "x_{} = {x} exceeds t = {t}; only the region x_i <= t is covered",
                i + 1
            )));
        }
    }
    Ok(())
}

/// `P{X_1 <= x_1, ..., X_k <= x_k, X_{r:n} <= t}` on the region `x_i <= t`.
pub fn joint_cdf_multi(cfg: &SystemConfig, model: &LifetimeModel, xs: &[f64], t: f64) -> Result<f64> {
    check_multi(cfg, xs, t)?;
    let k = xs.len();
    let product: f64 = xs.iter().map(|&x| model.cdf(x)).product();
    if k < cfg.r {
        // I_p(r-k, n-r+1) is the tail of Bin(n-k, p) from r-k.
        Ok(product * upper_tail(cfg.n - k, cfg.r - k, model.cdf(t)))
    } else {
        Ok(product)
    }
}

/// Joint density of `(X_1, ..., X_k, X_{r:n})` on the region `x_i <= t`.
pub fn joint_pdf_multi(cfg: &SystemConfig, model: &LifetimeModel, xs: &[f64], t: f64) -> Result<f64> {
    model.require_density()?;
    check_multi(cfg, xs, t)?;
    let k = xs.len();
    let mut product = 1.0;
    for &x in xs {
        product *= model.pdf(x)?;
    }
    if k >= cfg.r {
        return Ok(product);
    }
    let p = model.cdf(t);
    let a = cfg.r - k;
    let b = cfg.n - cfg.r + 1;
    let order_density =
        inv_beta_fn(a, b) * p.powi(a as i32 - 1) * model.survival(t).powi(b as i32 - 1) * model.pdf(t)?;
    Ok(order_density * product)
}

/// Conditioning events of the pairwise dependence results.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairEvent {
    /// `X_{n:n} <= t`
    MaxLeq,
    /// `X_{1:n} <= t`
    MinLeq,
    /// `X_{1:n} > t`
    MinGt,
}

/// `P{X_1 <= x1, X_2 <= x2 | event}` computed from the defining ratio.
///
/// Only `cfg.n` is used; the extremes fix the order index.
pub fn pair_cond_joint_cdf(
    cfg: &SystemConfig,
    model: &LifetimeModel,
    x1: f64,
    x2: f64,
    t: f64,
    event: PairEvent,
) -> Result<f64> {
    check_time("x1", x1)?;
    check_time("x2", x2)?;
    check_time("t", t)?;
    let n = cfg.n;
    if n < 2 {
        return Err(Error::domain("pairwise laws need n >= 2"));
    }
    let p = model.cdf(t);
    let s = model.survival(t);
    let above = |x: f64| if x > t { cdf_increment(model, t, x) } else { 0.0 };
    let v = match event {
        PairEvent::MaxLeq => {
            let denom = check_event(p.powi(n as i32))?;
            model.cdf(x1.min(t)) * model.cdf(x2.min(t)) * p.powi(n as i32 - 2) / denom
        }
        PairEvent::MinLeq => {
            let denom = check_event(upper_tail(n, 1, p))?;
            (model.cdf(x1) * model.cdf(x2) - above(x1) * above(x2) * s.powi(n as i32 - 2)) / denom
        }
        PairEvent::MinGt => {
            let denom = check_event(s.powi(n as i32))?;
            above(x1) * above(x2) * s.powi(n as i32 - 2) / denom
        }
    };
    Ok(v.clamp(0.0, 1.0))
}

/// Marginal `P{X_1 <= x | event}` matching [`pair_cond_joint_cdf`].
pub fn pair_marginal_cdf(
    cfg: &SystemConfig,
    model: &LifetimeModel,
    x: f64,
    t: f64,
    event: PairEvent,
) -> Result<f64> {
    let n = cfg.n;
    match event {
        PairEvent::MaxLeq => cond_cdf_given_leq(&SystemConfig::new(n, n)?, model, x, t),
        PairEvent::MinLeq => cond_cdf_given_leq(&SystemConfig::new(n, 1)?, model, x, t),
        PairEvent::MinGt => {
            check_time("x", x)?;
            check_time("t", t)?;
            let s = model.survival(t);
            check_event(s.powi(n as i32))?;
            let inc = if x > t { cdf_increment(model, t, x) } else { 0.0 };
            Ok((inc / s).clamp(0.0, 1.0))
        }
    }
}

/// Law selector for grid evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Law {
    /// `P{X_1 <= x, X_{r:n} <= t}`
    Joint { t: f64 },
    /// `P{X_1 <= x | X_{r:n} <= t}`
    GivenLeq { t: f64 },
    /// `P{X_1 <= x | t1 <= X_{r:n} <= t2}`
    Between(Window),
    /// `P{X_1 <= x | X_{r:n} = t}`
    GivenEq { t: f64 },
}

impl Law {
    pub fn evaluate(&self, cfg: &SystemConfig, model: &LifetimeModel, x: f64) -> Result<f64> {
        match self {
            Law::Joint { t } => joint_cdf_single(cfg, model, x, *t),
            Law::GivenLeq { t } => cond_cdf_given_leq(cfg, model, x, *t),
            Law::Between(w) => cond_cdf_between(cfg, model, x, w),
            Law::GivenEq { t } => cond_cdf_given_eq(cfg, model, x, *t),
        }
    }
}

/// A law tabulated on an increasing grid of times.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalGrid {
    points: Vec<f64>,
    values: Vec<f64>,
}

impl EvalGrid {
    pub fn new(points: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if points.len() != values.len() {
            return Err(Error::domain("grid points and values differ in length"));
        }
        if points.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
            return Err(Error::domain("grid points must be strictly increasing"));
        }
        if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::domain(format!("grid value {v} is not a probability")));
        }
        Ok(Self { points, values })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.points.iter().copied().zip(self.values.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Evaluates `law` at every point of `xs`.
pub fn evaluate_grid(cfg: &SystemConfig, model: &LifetimeModel, law: &Law, xs: &[f64]) -> Result<EvalGrid> {
    let values = xs
        .iter()
        .map(|&x| law.evaluate(cfg, model, x))
        .collect::<Result<Vec<_>>>()?;
    EvalGrid::new(xs.to_vec(), values)
}
