//! Mean residual life and mean past of a component when the system failure
//! is only known to lie in `[t1, t2]`.
//!
//! The conditional density of `X_1` is `f(x)` times a piecewise constant
//! weight on `[0, t1)`, `[t1, t2]` and `(t2, inf)`, so
//! `E{X_1 | t1 <= X_{r:n} <= t2}` is a weighted sum of three partial
//! expectations `int x f(x) dx`. Each is integrated adaptively on its own
//! region; the last one is truncated at a cutoff `U` with `1 - F(U)` below
//! the configured tail mass, and the omitted amount is reported.
//!
//! `phi = E{X_1 - t2 | .}` may be negative: the component may well have
//! failed before `t2`. It is reported signed, never clamped.

use crate::error::{Error, Result};
use crate::joint_dist::{between_density_weights, SystemConfig, Window};
use crate::lifetime::LifetimeModel;
use crate::quadrature::{integrate, Tolerance};

/// Integration settings for the partial expectations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub tolerance: Tolerance,
    /// Tail mass `1 - F(U)` defining the default cutoff.
    pub tail_mass: f64,
    /// Explicit cutoff `U`; must be finite and at least `t2`.
    pub tail_cutoff: Option<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            tolerance: Tolerance::new(1e-9, 1e-12, 1 << 16),
            tail_mass: 1e-12,
            tail_cutoff: None,
        }
    }
}

impl QuadratureSpec {
    fn validate(&self) -> Result<()> {
        let t = &self.tolerance;
        if !(t.rel > 0.0 && t.abs > 0.0) || t.max_subdivisions == 0 {
            return Err(Error::domain("quadrature tolerances must be positive"));
        }
        if !(self.tail_mass > 0.0 && self.tail_mass < 1.0) {
            return Err(Error::domain(format!("tail mass {} is outside (0, 1)", self.tail_mass)));
        }
        Ok(())
    }

    fn cutoff(&self, model: &LifetimeModel, w: &Window) -> Result<f64> {
        let u = match self.tail_cutoff {
            Some(u) => u,
            None => model.upper_quantile(self.tail_mass).max(w.t2()),
        };
        if !u.is_finite() || u < w.t2() {
            return Err(Error::domain(format!("tail cutoff U = {u} must be finite and >= t2 = {}", w.t2())));
        }
        Ok(u)
    }
}

/// Signed residual and past means for one window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualReport {
    /// `E{X_1 | t1 <= X_{r:n} <= t2}`
    pub conditional_mean: f64,
    /// `E{X_1 - t2 | .}`
    pub phi: f64,
    /// `E{t2 - X_1 | .}`
    pub psi: f64,
    /// Partial expectation dropped beyond the cutoff, times its weight.
    pub truncation_bound: f64,
    /// Cutoff `U` used for the last region.
    pub cutoff: f64,
}

/// Conditional density of `X_1` given `t1 <= X_{r:n} <= t2`.
pub fn cond_pdf_between(cfg: &SystemConfig, model: &LifetimeModel, x: f64, w: &Window) -> Result<f64> {
    model.require_density()?;
    if x.is_nan() || x < 0.0 {
        return Err(Error::domain(format!("x = {x} must be a nonnegative time")));
    }
    let [before, inside, after] = between_density_weights(cfg, model, w)?;
    let weight = if x < w.t1() {
        before
    } else if x <= w.t2() {
        inside
    } else {
        after
    };
    Ok(weight * model.pdf(x)?)
}

/// Computes the three weighted partial expectations and both signed means.
pub fn residual_report(
    cfg: &SystemConfig,
    model: &LifetimeModel,
    w: &Window,
    quad: &QuadratureSpec,
) -> Result<ResidualReport> {
    model.require_density()?;
    quad.validate()?;
    let weights = between_density_weights(cfg, model, w)?;
    let cutoff = quad.cutoff(model, w)?;
    let moment = |a: f64, b: f64| -> Result<f64> {
        // pdf errors are ruled out by require_density above.
        Ok(integrate(|x| x * model.pdf(x).unwrap_or(0.0), a, b, &quad.tolerance)?.value)
    };
    let partials = [moment(0.0, w.t1())?, moment(w.t1(), w.t2())?, moment(w.t2(), cutoff)?];
    let conditional_mean: f64 = weights.iter().zip(partials.iter()).map(|(c, m)| c * m).sum();
    Ok(ResidualReport {
        conditional_mean,
        phi: conditional_mean - w.t2(),
        psi: w.t2() - conditional_mean,
        truncation_bound: weights[2] * model.tail_partial_mean(cutoff),
        cutoff,
    })
}

/// `E{X_1 - t2 | t1 <= X_{r:n} <= t2}`.
pub fn mean_residual(cfg: &SystemConfig, model: &LifetimeModel, w: &Window, quad: &QuadratureSpec) -> Result<f64> {
    Ok(residual_report(cfg, model, w, quad)?.phi)
}

/// `E{t2 - X_1 | t1 <= X_{r:n} <= t2}`.
pub fn mean_past(cfg: &SystemConfig, model: &LifetimeModel, w: &Window, quad: &QuadratureSpec) -> Result<f64> {
    Ok(residual_report(cfg, model, w, quad)?.psi)
}
