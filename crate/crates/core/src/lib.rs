//! Joint and conditional laws of a sample observation and an order statistic,
//! and the distribution-free law of the number of inspections needed to find
//! `k` failed components of an `(n-r+1)`-out-of-`n` system.
//!
//! Module map:
//!
//! - [`special_fns`]: binomial tails and the integer-shape regularized
//!   incomplete beta function.
//! - [`lifetime`]: continuous lifetime laws (CDF, density, quantile).
//! - [`joint_dist`]: joint law of `X_1` and `X_{r:n}`, its conditional
//!   versions, multi-observation laws and the pairwise dependence results.
//! - [`inspections`]: exact rational pmf of the inspection count.
//! - [`mrl`]: interval-censored mean residual life and mean past.
//! - [`mc_oracle`]: exhaustive-permutation and Monte-Carlo verification engines.
//! - [`quadrature`]: adaptive Gauss-Kronrod integration used by [`mrl`].

pub mod error;
pub mod inspections;
pub mod joint_dist;
pub mod lifetime;
pub mod mc_oracle;
pub mod mrl;
pub mod quadrature;
pub mod special_fns;

pub use error::{Error, Result};
pub use inspections::{expected_inspections, inspection_pmf, lambda_coeff, InspectionPmf, Rational};
pub use joint_dist::{EvalGrid, Law, PairEvent, SystemConfig, Window};
pub use lifetime::LifetimeModel;
pub use mc_oracle::{McEstimate, RngSeed};
pub use mrl::QuadratureSpec;
