//! Single and tensor-product double Gauss-Laguerre sums.
//!
//! Every node is strictly positive, so integrands with integrable
//! singularities at the origin (the CR and FM kernels carry `η^{-1/3}` and
//! `η^{-1}`) are evaluated as-is.
//!
//! The double sum drops the remainder-of-remainder cross term; what remains
//! is `Σ_i Σ_j w_i w_j f(x_i, x_j)`, accumulated row by row in ascending node
//! order.

use crate::error::{Error, EvalPoint, Result};
use crate::kernels::Kernel;
use crate::laguerre::QuadratureRule;

/// Accumulation strategy for the double sum.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Summation {
    #[default]
    Plain,
    /// Neumaier-compensated summation, for round-off checks.
    Compensated,
}

/// `Σ_i w_i f(x_i)`.
pub fn integrate_1d<F>(rule: &QuadratureRule, f: F) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let mut sum = 0.0;
    for (index, (x, w)) in rule.iter().enumerate() {
        let value = f(x);
        if !value.is_finite() {
            return Err(Error::NonFinite(EvalPoint::Node { index, x }));
        }
        sum += w * value;
    }
    Ok(sum)
}

/// `Σ_i Σ_j w_i w_j f(x_i, x_j)` with plain summation.
pub fn integrate_2d<F>(rule: &QuadratureRule, f: F) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
{
    integrate_2d_with(rule, f, Summation::Plain)
}

pub fn integrate_2d_with<F>(rule: &QuadratureRule, f: F, summation: Summation) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
{
    let mut acc = Accumulator::new(summation);
    for (i, (x, wx)) in rule.iter().enumerate() {
        for (j, (y, wy)) in rule.iter().enumerate() {
            let value = f(x, y);
            if !value.is_finite() {
                return Err(Error::NonFinite(EvalPoint::Pair { i, j, x, y }));
            }
            acc.add(wx * wy * value);
        }
    }
    Ok(acc.total())
}

/// Pre-exponential factor `p = II / 2` for a symmetric kernel.
pub fn prefactor(rule: &QuadratureRule, kernel: &Kernel) -> Result<f64> {
    Ok(double_integral(rule, kernel)? / 2.0)
}

/// The kernel's double integral `II ≈ Q_{n,n}` under `rule`.
pub fn double_integral(rule: &QuadratureRule, kernel: &Kernel) -> Result<f64> {
    integrate_2d(rule, |x, y| kernel.eval(x, y))
}

struct Accumulator {
    summation: Summation,
    sum: f64,
    compensation: f64,
}

impl Accumulator {
    fn new(summation: Summation) -> Self {
        Self {
            summation,
            sum: 0.0,
            compensation: 0.0,
        }
    }

    fn add(&mut self, term: f64) {
        match self.summation {
            Summation::Plain => self.sum += term,
            Summation::Compensated => {
                let t = self.sum + term;
                if self.sum.abs() >= term.abs() {
                    self.compensation += (self.sum - t) + term;
                } else {
                    self.compensation += (term - t) + self.sum;
                }
                self.sum = t;
            }
        }
    }

    fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}
