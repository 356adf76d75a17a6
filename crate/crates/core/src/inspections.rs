//! Exact law of the number of inspections needed to find `k` failed components.
//!
//! Components are inspected in index order. Component `i` counts as failed
//! when `X_i < X_{r:n}`; the component whose failure is the `r`-th order
//! statistic is not detectable. With `xi_i` the failure indicators, the
//! indicators are exchangeable and
//!
//! ```text
//! lambda_j  = P{xi_1 = ... = xi_j = 1} = (n-j)! (r-1)! / (n! (r-j-1)!)
//! P{N = m}  = C(m-1, k-1) sum_{j=0}^{m-k} (-1)^j C(m-k, j) lambda_{k+j}
//! ```
//!
//! for `m = k, ..., n-r+k+1`. Everything is computed in exact rationals; the
//! alternating sum cancels badly in floating point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::joint_dist::SystemConfig;
use crate::special_fns::binomial;

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

fn rational(num: usize, den: usize) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `lambda_j` without the range check; zero once `j >= r`.
fn lambda_total(cfg: &SystemConfig, j: usize) -> Rational {
    if j >= cfg.r() {
        return Rational::zero();
    }
    (0..j).fold(Rational::one(), |acc, i| acc * rational(cfg.r() - 1 - i, cfg.n() - i))
}

/// `P{X_1 < X_{r:n}, ..., X_j < X_{r:n}}` for `1 <= j <= r-1`.
pub fn lambda_coeff(cfg: &SystemConfig, j: usize) -> Result<Rational> {
    if j < 1 || j >= cfg.r() {
        return Err(Error::domain(format!(
            "lambda_j needs 1 <= j <= r-1 = {}, got j = {j}",
            cfg.r() - 1
        )));
    }
    Ok(lambda_total(cfg, j))
}

/// Exact pmf of the inspection count on `m = k ..= n-r+k+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct InspectionPmf {
    cfg: SystemConfig,
    k: usize,
    probs: Vec<Rational>,
}

pub(crate) fn check_target(cfg: &SystemConfig, k: usize) -> Result<()> {
    if k < 1 || k >= cfg.r() {
        return Err(Error::domain(format!(
            "detection target needs 1 <= k < r = {}, got k = {k}",
            cfg.r()
        )));
    }
    Ok(())
}

impl InspectionPmf {
    /// Validates support length, nonnegativity and exact normalization.
    pub fn new(cfg: SystemConfig, k: usize, probs: Vec<Rational>) -> Result<Self> {
        check_target(&cfg, k)?;
        let len = cfg.last_inspection(k) - k + 1;
        if probs.len() != len {
            return Err(Error::domain(format!(
                "pmf needs {len} support points, got {}",
                probs.len()
            )));
        }
        if let Some(p) = probs.iter().find(|p| p.is_negative()) {
            return Err(Error::domain(format!("negative probability {p}")));
        }
        let total: Rational = probs.iter().sum();
        if !total.is_one() {
            return Err(Error::domain(format!("probabilities sum to {total}, not 1")));
        }
        Ok(Self { cfg, k, probs })
    }

    pub fn cfg(&self) -> &SystemConfig {
        &self.cfg
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn support(&self) -> std::ops::RangeInclusive<usize> {
        self.k..=self.cfg.last_inspection(self.k)
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    /// `P{N = m}`; zero off the support.
    pub fn prob(&self, m: usize) -> Rational {
        if self.support().contains(&m) {
            self.probs[m - self.k].clone()
        } else {
            Rational::zero()
        }
    }

    /// `(m, P{N = m})` over the support.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> + '_ {
        self.support().zip(self.probs.iter())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.probs.iter().map(|p| p.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

/// Exact pmf of the number of inspections needed to detect `k` failed components.
pub fn inspection_pmf(cfg: &SystemConfig, k: usize) -> Result<InspectionPmf> {
    check_target(cfg, k)?;
    let lambdas: Vec<Rational> = (0..=cfg.n()).map(|j| lambda_total(cfg, j)).collect();
    let probs = (k..=cfg.last_inspection(k))
        .map(|m| {
            let span = m - k;
            let mut alt = Rational::zero();
            for j in 0..=span {
                let term = Rational::from_integer(BigInt::from(binomial(span, j))) * &lambdas[k + j];
                if j % 2 == 0 {
                    alt += term;
                } else {
                    alt -= term;
                }
            }
            alt * Rational::from_integer(BigInt::from(binomial(m - 1, k - 1)))
        })
        .collect();
    InspectionPmf::new(*cfg, k, probs)
}

/// `E[N] = sum m P{N = m}`, exactly.
pub fn expected_inspections(pmf: &InspectionPmf) -> Rational {
    pmf.iter()
        .map(|(m, p)| Rational::from_integer(BigInt::from(m)) * p)
        .sum()
}
