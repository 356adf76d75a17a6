//! Independent verification engines: exhaustive enumeration of rank orders
//! (exact, small `n`) and Monte-Carlo simulation (any `n`).
//!
//! # Random source
//!
//! Replications are split into fixed blocks of [`BLOCK_SIZE`]. Block `b` draws
//! from ChaCha8 seeded with the master seed via `SeedableRng::seed_from_u64`
//! and switched to stream `b`; uniforms are `Open01` samples mapped through
//! the model quantile. Blocks run in parallel and are merged in block order,
//! so results depend only on `(seed, replications)`, never on the thread count.
//!
//! Ties between lifetimes have probability zero under continuous models; any
//! floating-point tie is broken by component index.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::inspections::{check_target, InspectionPmf, Rational};
use crate::joint_dist::SystemConfig;
use crate::lifetime::LifetimeModel;

/// Replications per independently seeded block.
pub const BLOCK_SIZE: u64 = 1 << 14;

/// Largest `n` accepted by the exhaustive enumerators.
pub const MAX_EXHAUSTIVE_N: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngSeed(pub u64);

impl From<u64> for RngSeed {
    fn from(v: u64) -> Self {
        RngSeed(v)
    }
}

impl fmt::Display for RngSeed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A Monte-Carlo estimate.
///
/// For probabilities `std_error` is the binomial bound `sqrt(p(1-p)/M_eff)`;
/// for means it is the sample standard deviation over `sqrt(M_eff)`, where
/// `M_eff` is the number of replications satisfying the conditioning event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub replications: u64,
    pub std_error: f64,
    pub conditioned_fraction: f64,
}

impl McEstimate {
    /// Replications that satisfied the conditioning event.
    pub fn effective_samples(&self) -> f64 {
        self.conditioned_fraction * self.replications as f64
    }

    /// `|estimate - target| / std_error`; infinite when the error is zero and they differ.
    pub fn z_score(&self, target: f64) -> f64 {
        let diff = (self.estimate - target).abs();
        if diff == 0.0 {
            0.0
        } else {
            diff / self.std_error
        }
    }

    fn proportion(hits: u64, eligible: u64, replications: u64) -> Self {
        let p = hits as f64 / eligible as f64;
        Self {
            estimate: p,
            replications,
            std_error: (p * (1.0 - p) / eligible as f64).sqrt(),
            conditioned_fraction: eligible as f64 / replications as f64,
        }
    }
}

/// One simulated sample: the lifetimes in component order and sorted.
#[derive(Debug, Clone, Copy)]
pub struct Draw<'a> {
    values: &'a [f64],
    sorted: &'a [f64],
}

impl<'a> Draw<'a> {
    pub fn values(&self) -> &'a [f64] {
        self.values
    }

    /// Lifetime of component `i` (1-based).
    pub fn component(&self, i: usize) -> f64 {
        self.values[i - 1]
    }

    /// `X_{r:n}` (1-based).
    pub fn order_stat(&self, r: usize) -> f64 {
        self.sorted[r - 1]
    }

    /// Failure indicators `X_i < X_{r:n}`, ties broken by component index.
    pub fn failed_before(&self, r: usize) -> impl Iterator<Item = bool> + 'a {
        let threshold = self.sorted[r - 1];
        let strictly_below = self.sorted[..r - 1].iter().filter(|v| **v < threshold).count();
        let mut tied_slots = r - 1 - strictly_below;
        self.values.iter().map(move |&v| {
            if v < threshold {
                true
            } else if v == threshold && tied_slots > 0 {
                tied_slots -= 1;
                true
            } else {
                false
            }
        })
    }
}

fn run_blocks<T, I, V>(n: usize, model: &LifetimeModel, reps: u64, seed: RngSeed, init: I, visit: V) -> Vec<T>
where
    T: Send,
    I: Fn() -> T + Sync,
    V: Fn(&mut T, &Draw<'_>) + Sync,
{
    let blocks = reps.div_ceil(BLOCK_SIZE);
    (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
            rng.set_stream(b);
            let count = BLOCK_SIZE.min(reps - b * BLOCK_SIZE);
            let mut values = vec![0.0; n];
            let mut sorted = vec![0.0; n];
            let mut state = init();
            for _ in 0..count {
                for v in values.iter_mut() {
                    let u: f64 = rng.sample(Open01);
                    *v = model.quantile_unchecked(u);
                }
                sorted.copy_from_slice(&values);
                sorted.sort_unstable_by(f64::total_cmp);
                visit(&mut state, &Draw { values: &values, sorted: &sorted });
            }
            state
        })
        .collect()
}

fn check_reps(reps: u64) -> Result<()> {
    if reps == 0 {
        Err(Error::domain("need at least one replication"))
    } else {
        Ok(())
    }
}

/// Frequency of `event` over `reps` samples of size `n`.
pub fn mc_event_prob<E>(cfg: &SystemConfig, model: &LifetimeModel, event: E, reps: u64, seed: RngSeed) -> Result<McEstimate>
where
    E: Fn(&Draw<'_>) -> bool + Sync,
{
    mc_conditional_prob(cfg, model, event, |_: &Draw<'_>| true, reps, seed)
}

/// Frequency of `event` among samples satisfying `given` (rejection sampling).
pub fn mc_conditional_prob<E, G>(
    cfg: &SystemConfig,
    model: &LifetimeModel,
    event: E,
    given: G,
    reps: u64,
    seed: RngSeed,
) -> Result<McEstimate>
where
    E: Fn(&Draw<'_>) -> bool + Sync,
    G: Fn(&Draw<'_>) -> bool + Sync,
{
    check_reps(reps)?;
    let parts = run_blocks(cfg.n(), model, reps, seed, || (0u64, 0u64), |(hits, eligible), d| {
        if given(d) {
            *eligible += 1;
            if event(d) {
                *hits += 1;
            }
        }
    });
    let (hits, eligible) = parts.iter().fold((0, 0), |(h, e), (bh, be)| (h + bh, e + be));
    if eligible == 0 {
        return Err(Error::ConditioningNull { prob: 0.0 });
    }
    Ok(McEstimate::proportion(hits, eligible, reps))
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * other.count as f64 / count as f64;
        let m2 = self.m2 + other.m2 + delta * delta * (self.count as f64 * other.count as f64) / count as f64;
        Moments { count, mean, m2 }
    }
}

/// Mean of `value` among samples satisfying `given`.
pub fn mc_conditional_mean<V, G>(
    cfg: &SystemConfig,
    model: &LifetimeModel,
    value: V,
    given: G,
    reps: u64,
    seed: RngSeed,
) -> Result<McEstimate>
where
    V: Fn(&Draw<'_>) -> f64 + Sync,
    G: Fn(&Draw<'_>) -> bool + Sync,
{
    check_reps(reps)?;
    let parts = run_blocks(cfg.n(), model, reps, seed, Moments::default, |acc, d| {
        if given(d) {
            acc.push(value(d));
        }
    });
    let total = parts.into_iter().fold(Moments::default(), Moments::merge);
    if total.count == 0 {
        return Err(Error::ConditioningNull { prob: 0.0 });
    }
    let var = if total.count > 1 { total.m2 / (total.count - 1) as f64 } else { 0.0 };
    Ok(McEstimate {
        estimate: total.mean,
        replications: reps,
        std_error: (var / total.count as f64).sqrt(),
        conditioned_fraction: total.count as f64 / reps as f64,
    })
}

/// Index (1-based) of the inspection that finds the `k`-th failed component.
fn inspections_needed(failed: impl Iterator<Item = bool>, k: usize) -> usize {
    let mut found = 0;
    for (i, f) in failed.enumerate() {
        if f {
            found += 1;
            if found == k {
                return i + 1;
            }
        }
    }
    unreachable!("fewer than k failed components; callers ensure k < r")
}

/// Empirical pmf of the inspection count, one estimate per support point.
pub fn mc_inspection_pmf(
    cfg: &SystemConfig,
    model: &LifetimeModel,
    k: usize,
    reps: u64,
    seed: RngSeed,
) -> Result<BTreeMap<usize, McEstimate>> {
    check_target(cfg, k)?;
    check_reps(reps)?;
    let last = cfg.last_inspection(k);
    let r = cfg.r();
    let parts = run_blocks(cfg.n(), model, reps, seed, || vec![0u64; last + 1], |counts, d| {
        counts[inspections_needed(d.failed_before(r), k)] += 1;
    });
    let mut counts = vec![0u64; last + 1];
    for part in parts {
        for (c, p) in counts.iter_mut().zip(part) {
            *c += p;
        }
    }
    Ok((k..=last).map(|m| (m, McEstimate::proportion(counts[m], reps, reps))).collect())
}

fn check_exhaustive(cfg: &SystemConfig) -> Result<()> {
    if cfg.n() > MAX_EXHAUSTIVE_N {
        return Err(Error::Size(format!(
            "exhaustive enumeration supports n <= {MAX_EXHAUSTIVE_N}, got n = {}",
            cfg.n()
        )));
    }
    Ok(())
}

/// Calls `visit` with every permutation of `0..n` (Heap's algorithm).
fn for_each_permutation(n: usize, mut visit: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    visit(&perm);
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            visit(&perm);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, i| acc * BigInt::from(i))
}

/// Exact pmf by enumerating all `n!` equally likely rank orders.
///
/// `ranks[i]` is the 0-based rank of component `i`; it has failed before the
/// system iff `ranks[i] < r - 1`.
pub fn exhaustive_inspection_pmf(cfg: &SystemConfig, k: usize) -> Result<InspectionPmf> {
    check_target(cfg, k)?;
    check_exhaustive(cfg)?;
    let r = cfg.r();
    let mut counts = vec![0u64; cfg.last_inspection(k) + 1];
    for_each_permutation(cfg.n(), |ranks| {
        counts[inspections_needed(ranks.iter().map(|&rank| rank < r - 1), k)] += 1;
    });
    let total = factorial(cfg.n());
    let probs = counts[k..]
        .iter()
        .map(|&c| Rational::new(BigInt::from(c), total.clone()))
        .collect();
    InspectionPmf::new(*cfg, k, probs)
}

/// `P{X_1 < X_{r:n}, ..., X_j < X_{r:n}}` by enumerating rank orders.
pub fn exhaustive_lambda(cfg: &SystemConfig, j: usize) -> Result<Rational> {
    check_exhaustive(cfg)?;
    if j < 1 || j > cfg.n() {
        return Err(Error::domain(format!("need 1 <= j <= n, got j = {j}")));
    }
    let r = cfg.r();
    let mut hits = 0u64;
    for_each_permutation(cfg.n(), |ranks| {
        if ranks[..j].iter().all(|&rank| rank < r - 1) {
            hits += 1;
        }
    });
    Ok(Rational::new(BigInt::from(hits), factorial(cfg.n())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inspections::{inspection_pmf, lambda_coeff};

    fn cfg(n: usize, r: usize) -> SystemConfig {
        SystemConfig::new(n, r).unwrap()
    }

    #[test]
    fn permutations_are_complete_and_distinct() {
        let mut seen = std::collections::HashSet::new();
        for_each_permutation(5, |p| {
            assert!(seen.insert(p.to_vec()));
        });
        assert_eq!(seen.len(), 120);
        let mut count = 0;
        for_each_permutation(1, |_| count += 1);
        assert_eq!(count, 1);
    }

    #[test]
    fn exhaustive_lambda_example() {
        assert_eq!(exhaustive_lambda(&cfg(6, 4), 2).unwrap(), Rational::new(1.into(), 5.into()));
        assert_eq!(exhaustive_lambda(&cfg(6, 4), 3).unwrap(), lambda_coeff(&cfg(6, 4), 3).unwrap());
        assert_eq!(exhaustive_lambda(&cfg(6, 4), 4).unwrap(), Rational::from_integer(0.into()));
    }

    #[test]
    fn exhaustive_pmf_examples() {
        let pmf = exhaustive_inspection_pmf(&cfg(6, 4), 2).unwrap();
        assert_eq!(pmf.prob(2), Rational::new(1.into(), 5.into()));
        let c = cfg(5, 2);
        assert_eq!(exhaustive_inspection_pmf(&c, 1).unwrap(), inspection_pmf(&c, 1).unwrap());
        assert!(matches!(exhaustive_inspection_pmf(&cfg(12, 5), 3), Err(Error::Size(_))));
        assert!(exhaustive_inspection_pmf(&cfg(6, 4), 4).is_err());
    }

    #[test]
    fn tie_breaking_by_index() {
        let values = [1.0, 2.0, 1.0, 1.0, 3.0];
        let mut sorted = values;
        sorted.sort_by(f64::total_cmp);
        let d = Draw { values: &values, sorted: &sorted };
        // X_{3:5} = 1.0; two earlier slots go to the first two tied components.
        let flags: Vec<bool> = d.failed_before(3).collect();
        assert_eq!(flags, vec![true, false, true, false, false]);
        let flags: Vec<bool> = d.failed_before(5).collect();
        assert_eq!(flags, vec![true, true, true, true, false]);
        assert_eq!(inspections_needed(flags.into_iter(), 2), 2);
    }

    #[test]
    fn sure_event() {
        let c = cfg(4, 2);
        let m = LifetimeModel::exponential(1.0).unwrap();
        let est = mc_event_prob(&c, &m, |d: &Draw<'_>| d.order_stat(2) <= f64::INFINITY, 1000, RngSeed(3)).unwrap();
        assert_eq!(est.estimate, 1.0);
        assert_eq!(est.std_error, 0.0);
        assert_eq!(est.conditioned_fraction, 1.0);
        assert!(mc_event_prob(&c, &m, |_: &Draw<'_>| true, 0, RngSeed(3)).is_err());
    }

    #[test]
    fn deterministic_given_seed() {
        let c = cfg(7, 3);
        let m = LifetimeModel::weibull(2.0, 1.0).unwrap();
        let ev = |d: &Draw<'_>| d.component(1) <= 0.8 && d.order_stat(3) <= 0.9;
        let a = mc_event_prob(&c, &m, ev, 50_000, RngSeed(11)).unwrap();
        let b = mc_event_prob(&c, &m, ev, 50_000, RngSeed(11)).unwrap();
        assert_eq!(a, b);
        let other = mc_event_prob(&c, &m, ev, 50_000, RngSeed(12)).unwrap();
        assert_ne!(a.estimate, other.estimate);

        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let single = pool.install(|| mc_event_prob(&c, &m, ev, 50_000, RngSeed(11)).unwrap());
        assert_eq!(a, single);
    }

    #[test]
    fn moments_merge_matches_sequential() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 / 7.0).collect();
        let mut seq = Moments::default();
        xs.iter().for_each(|&x| seq.push(x));
        let mut a = Moments::default();
        let mut b = Moments::default();
        xs[..313].iter().for_each(|&x| a.push(x));
        xs[313..].iter().for_each(|&x| b.push(x));
        let merged = a.merge(b);
        assert_eq!(merged.count, seq.count);
        assert!((merged.mean - seq.mean).abs() < 1e-12);
        assert!((merged.m2 - seq.m2).abs() < 1e-8 * seq.m2);
    }

    #[test]
    fn unconditionable_event() {
        let c = cfg(3, 2);
        let m = LifetimeModel::uniform(0.0, 1.0).unwrap();
        let r = mc_conditional_prob(&c, &m, |_: &Draw<'_>| true, |d: &Draw<'_>| d.order_stat(2) > 2.0, 100, RngSeed(1));
        assert!(matches!(r, Err(Error::ConditioningNull { .. })));
    }

    #[test]
    fn two_point_inspection_support() {
        let c = cfg(4, 4);
        let m = LifetimeModel::exponential(1.0).unwrap();
        let est = mc_inspection_pmf(&c, &m, 3, 40_000, RngSeed(5)).unwrap();
        assert_eq!(est.keys().copied().collect::<Vec<_>>(), vec![3, 4]);
        let total: f64 = est.values().map(|e| e.estimate).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(est[&3].z_score(0.25) < 4.0);
    }
}
