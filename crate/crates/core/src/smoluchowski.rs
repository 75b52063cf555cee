//! Moment dynamics under an average kernel.
//!
//! With `β̄ = p u^q` and `u = M1/M0`, the zeroth moment obeys
//! `dM0/dt = -(p/2) M1^q M0^{2-q}` while `M1` stays fixed. Separating
//! variables gives three regimes:
//!
//! * `q = 1`: exponential decay.
//! * `q < 1`: algebraic decay, `M0^{q-1}` grows linearly in `t`.
//! * `q > 1`: `M0^{q-1}` falls linearly and reaches zero at a finite time
//!   `t*`; past `t*` the state is clamped to `M0 = 0`.

use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::kernels::{AverageKernel, Degree, Kernel};
use crate::laguerre::QuadratureRule;
use crate::quadrature::double_integral;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentState {
    /// Total number concentration.
    pub m0: f64,
    /// Volume concentration.
    pub m1: f64,
    pub t: f64,
}

impl MomentState {
    pub fn new(m0: f64, m1: f64, t: f64) -> Result<Self> {
        Ok(Self {
            m0: require_non_negative("M0", m0)?,
            m1: require_positive("M1", m1)?,
            t: require_non_negative("t", t)?,
        })
    }
}

/// `u = M1 / M0`.
pub fn mean_volume(state: &MomentState) -> Result<f64> {
    let m0 = require_positive("M0", state.m0)?;
    Ok(state.m1 / m0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evolution {
    pub state: MomentState,
    /// Absolute time at which `M0` reaches zero, for `q > 1`.
    pub extinction_time: Option<f64>,
}

/// Advances `initial` by `dt` with the closed-form solution.
pub fn evolve_m0(ak: &AverageKernel, initial: &MomentState, dt: f64) -> Result<Evolution> {
    let dt = require_non_negative("elapsed time", dt)?;
    let p = require_positive("p", ak.p)?;
    let MomentState { m0, m1, t } = *initial;
    if !(m0.is_finite() && m1.is_finite() && t.is_finite()) {
        return Err(Error::Domain {
            name: "moment state",
            requirement: "finite",
            value: f64::NAN,
        });
    }
    let q = ak.q.as_f64();
    let rate = 0.5 * p * m1.powf(q);
    let at = |m0| MomentState { m0, m1, t: t + dt };

    if m0 == 0.0 {
        return Ok(Evolution {
            state: at(0.0),
            extinction_time: (q > 1.0).then_some(t),
        });
    }

    if ak.q == Degree::integer(1) {
        return Ok(Evolution {
            state: at(m0 * (-rate * dt).exp()),
            extinction_time: None,
        });
    }

    let exponent = q - 1.0;
    let start = m0.powf(exponent);
    let bracket = start - exponent * rate * dt;
    if q > 1.0 {
        let t_star = t + start / (exponent * rate);
        let m0_new = if bracket > 0.0 {
            bracket.powf(exponent.recip())
        } else {
            0.0
        };
        Ok(Evolution {
            state: at(m0_new),
            extinction_time: Some(t_star),
        })
    } else {
        Ok(Evolution {
            state: at(bracket.powf(exponent.recip())),
            extinction_time: None,
        })
    }
}

/// Exponential number density `(M0²/M1) exp(-(M0/M1) v)`.
pub fn psd(state: &MomentState, v: f64) -> f64 {
    let ratio = state.m0 / state.m1;
    state.m0 * ratio * (-ratio * v).exp()
}

/// Population-averaged kernel under the exponential density of `state`.
///
/// The ratio of `∫∫ β n n` to `∫∫ n n` reduces, after `η = v/u` and the
/// homogeneity of `β`, to `u^q ∫∫ e^{-η-η₁} β(η, η₁)`, which is the same
/// double sum the prefactor uses. The result equals `2 p u^q`.
pub fn population_average(kernel: &Kernel, state: &MomentState, rule: &QuadratureRule) -> Result<f64> {
    let u = mean_volume(state)?;
    Ok(double_integral(rule, kernel)? * u.powf(kernel.q().as_f64()))
}

/// The same average computed without the homogeneity reduction: both
/// double integrals are mapped to the Laguerre weight by `v = u η` and the
/// kernel is evaluated at dimensional volumes.
pub fn population_average_direct(kernel: &Kernel, state: &MomentState, rule: &QuadratureRule) -> Result<f64> {
    let u = mean_volume(state)?;
    // n(uη) u dη = M0 e^{-η} dη; the Laguerre weight absorbs the e^{-η}.
    let density = |eta: f64| psd(state, u * eta) * u * eta.exp();
    let mut numerator = 0.0;
    let mut denominator = 0.0;
    for (x, wx) in rule.iter() {
        for (y, wy) in rule.iter() {
            let nn = density(x) * density(y);
            numerator += wx * wy * kernel.eval(u * x, u * y) * nn;
            denominator += wx * wy * nn;
        }
    }
    Ok(numerator / denominator)
}
