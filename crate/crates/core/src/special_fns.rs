//! Binomial tails and the regularized incomplete beta function for integer shapes.
//!
//! Every closed form in this crate reduces to sums of the form
//! `sum_{i=lo}^{n} C(n, i) p^i (1-p)^(n-i)`. For integer shapes the
//! regularized incomplete beta function is exactly such a tail:
//!
//! ```text
//! I_p(a, b) = sum_{j=a}^{a+b-1} C(a+b-1, j) p^j (1-p)^(a+b-1-j)
//! ```
//!
//! so no continued-fraction machinery is needed. Terms are all nonnegative
//! and are accumulated with Neumaier compensated summation.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};

/// Rows cached by the shared Pascal triangle.
pub const DEFAULT_PASCAL_ROWS: usize = 256;

/// Largest trial count accepted by the floating-point routines; `C(1024, 512)`
/// is the largest central coefficient that still fits in an `f64`.
pub const MAX_TRIALS: usize = 1024;

/// Pascal triangle of exact binomial coefficients with an `f64` mirror.
#[derive(Debug, Clone)]
pub struct PascalTriangle {
    exact: Vec<Vec<BigUint>>,
    float: Vec<Vec<f64>>,
}

impl PascalTriangle {
    /// Builds rows `0..=n_max`.
    pub fn new(n_max: usize) -> Self {
        let mut exact: Vec<Vec<BigUint>> = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let mut row = Vec::with_capacity(n + 1);
            row.push(BigUint::one());
            for k in 1..n {
                let prev = &exact[n - 1];
                row.push(&prev[k - 1] + &prev[k]);
            }
            if n > 0 {
                row.push(BigUint::one());
            }
            exact.push(row);
        }
        let float = exact
            .iter()
            .map(|row| row.iter().map(|c| c.to_f64().unwrap_or(f64::INFINITY)).collect())
            .collect();
        Self { exact, float }
    }

    pub fn n_max(&self) -> usize {
        self.exact.len() - 1
    }

    /// `C(n, k)` exactly; zero when `k > n`.
    pub fn binomial(&self, n: usize, k: usize) -> BigUint {
        if k > n {
            return BigUint::default();
        }
        match self.exact.get(n) {
            Some(row) => row[k].clone(),
            None => binomial_multiplicative(n, k),
        }
    }

    /// `C(n, k)` as `f64`; zero when `k > n`.
    pub fn binomial_f64(&self, n: usize, k: usize) -> f64 {
        if k > n {
            return 0.0;
        }
        match self.float.get(n) {
            Some(row) => row[k],
            None => binomial_multiplicative(n, k).to_f64().unwrap_or(f64::INFINITY),
        }
    }
}

fn binomial_multiplicative(n: usize, k: usize) -> BigUint {
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// The process-wide triangle, built once on first use.
pub fn pascal() -> &'static PascalTriangle {
    static TRIANGLE: OnceLock<PascalTriangle> = OnceLock::new();
    TRIANGLE.get_or_init(|| PascalTriangle::new(DEFAULT_PASCAL_ROWS))
}

/// Exact `C(n, k)`.
pub fn binomial(n: usize, k: usize) -> BigUint {
    pascal().binomial(n, k)
}

/// `C(n, k)` in floating point.
pub fn binomial_f64(n: usize, k: usize) -> f64 {
    pascal().binomial_f64(n, k)
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// A single binomial probability `C(n, i) p^i (1-p)^(n-i)`.
pub fn binom_pmf(n_trials: usize, i: usize, p: f64) -> f64 {
    if i > n_trials {
        return 0.0;
    }
    binomial_f64(n_trials, i) * p.powi(i as i32) * (1.0 - p).powi((n_trials - i) as i32)
}

/// Unchecked upper tail; callers guarantee `0 <= p <= 1`, `n_trials <= MAX_TRIALS`.
///
/// `lo > n_trials` yields the empty sum.
pub(crate) fn upper_tail(n_trials: usize, lo: usize, p: f64) -> f64 {
    if lo == 0 {
        return 1.0;
    }
    if lo > n_trials {
        return 0.0;
    }
    if p <= 0.0 {
        return 0.0;
    }
    if p >= 1.0 {
        return 1.0;
    }
    let q = 1.0 - p;
    let term = |i: usize| binomial_f64(n_trials, i) * p.powi(i as i32) * q.powi((n_trials - i) as i32);
    let mut acc = CompensatedSum::default();
    // Sum whichever side is the smaller tail.
    if (lo as f64) > n_trials as f64 * p {
        (lo..=n_trials).for_each(|i| acc.add(term(i)));
        acc.value().clamp(0.0, 1.0)
    } else {
        (0..lo).for_each(|i| acc.add(term(i)));
        (1.0 - acc.value()).clamp(0.0, 1.0)
    }
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::domain(format!("probability p = {p} is outside [0, 1]")))
    }
}

/// Upper binomial tail `P{Bin(n_trials, p) >= lo}`.
///
/// Returns exactly 1 for `lo = 0` and exactly 0 for `lo = n_trials + 1`.
pub fn binom_tail(n_trials: usize, lo: usize, p: f64) -> Result<f64> {
    check_probability(p)?;
    if lo > n_trials + 1 {
        return Err(Error::domain(format!(
            "tail start {lo} exceeds n_trials + 1 = {}",
            n_trials + 1
        )));
    }
    if n_trials > MAX_TRIALS {
        return Err(Error::domain(format!(
            "n_trials = {n_trials} exceeds the supported maximum {MAX_TRIALS}"
        )));
    }
    Ok(upper_tail(n_trials, lo, p))
}

/// Arguments of `I_p(a, b)` with positive integer shapes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaParams {
    a: usize,
    b: usize,
    p: f64,
}

impl BetaParams {
    pub fn new(a: usize, b: usize, p: f64) -> Result<Self> {
        if a < 1 || b < 1 {
            return Err(Error::domain(format!(
                "beta shapes must be positive integers, got a = {a}, b = {b}"
            )));
        }
        if a + b - 1 > MAX_TRIALS {
            return Err(Error::domain(format!(
                "a + b - 1 = {} exceeds the supported maximum {MAX_TRIALS}",
                a + b - 1
            )));
        }
        check_probability(p)?;
        Ok(Self { a, b, p })
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// Regularized incomplete beta function `I_p(a, b)` for integer shapes.
pub fn reg_inc_beta(params: BetaParams) -> f64 {
    upper_tail(params.a + params.b - 1, params.a, params.p)
}

/// `1 / B(a, b) = (a+b-1) C(a+b-2, a-1)` for positive integer shapes.
pub fn inv_beta_fn(a: usize, b: usize) -> f64 {
    debug_assert!(a >= 1 && b >= 1);
    (a + b - 1) as f64 * binomial_f64(a + b - 2, a - 1)
}
