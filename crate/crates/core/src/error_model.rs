//! Empirical truncation-error model for the double Gauss-Laguerre sum.
//!
//! For successive node counts the differences `ε_n = |Q_{n+1} - Q_n|` are
//! modelled as a power law `ε_n ≈ ε_m (n/m)^C`. When `C < -1` the tail of
//! that law is integrable and the truncation remainder past `n` is
//!
//! ```text
//! R = ∫_{n+1}^∞ ε_n (x/n)^C dx = ε_n ((n+1)/n)^C (n+1) / |C + 1|
//! ```
//!
//! `R` is kept as a non-negative magnitude; results are reported as `Q ± R`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernels::Kernel;
use crate::laguerre::{gauss_laguerre_rule_with_cap, StabilityCap};
use crate::quadrature::double_integral;

/// Successive differences below this multiple of `f64::EPSILON * |Q|` are
/// treated as round-off and left out of slope fits.
pub const ROUNDOFF_FACTOR: f64 = 1e2;

/// Default number of trailing epsilon entries used in a slope fit.
pub const DEFAULT_WINDOW: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTrace {
    pub kernel_id: String,
    /// `(n, Q_{n,n})` for consecutive `n`.
    pub entries: Vec<(usize, f64)>,
    /// `(n, |Q_{n+1,n+1} - Q_{n,n}|)`, one fewer than `entries`.
    pub epsilons: Vec<(usize, f64)>,
}

impl ConvergenceTrace {
    /// Builds a trace from `Q` values at `n_min, n_min + 1, ...`.
    pub fn from_values(kernel_id: impl Into<String>, n_min: usize, values: &[f64]) -> Self {
        let entries: Vec<(usize, f64)> = values.iter().enumerate().map(|(k, &q)| (n_min + k, q)).collect();
        let epsilons = entries
            .windows(2)
            .map(|pair| (pair[0].0, (pair[1].1 - pair[0].1).abs()))
            .collect();
        Self {
            kernel_id: kernel_id.into(),
            entries,
            epsilons,
        }
    }

    pub fn last_q(&self) -> Option<(usize, f64)> {
        self.entries.last().copied()
    }

    pub fn last_epsilon(&self) -> Option<(usize, f64)> {
        self.epsilons.last().copied()
    }

    /// Epsilon entries that are not round-off dominated.
    pub fn usable_epsilons(&self) -> Vec<(usize, f64)> {
        self.epsilons
            .iter()
            .zip(&self.entries)
            .filter(|&(&(_, eps), &(_, q))| eps > ROUNDOFF_FACTOR * f64::EPSILON * q.abs())
            .map(|(&e, _)| e)
            .collect()
    }
}

pub fn build_trace(kernel: &Kernel, n_min: usize, n_max: usize) -> Result<ConvergenceTrace> {
    build_trace_with_cap(kernel, n_min, n_max, StabilityCap::default())
}

/// Double-quadrature values for every node count in `n_min..=n_max`.
/// Node counts are evaluated in parallel; each value is independent of the
/// scheduling.
pub fn build_trace_with_cap(
    kernel: &Kernel,
    n_min: usize,
    n_max: usize,
    cap: StabilityCap,
) -> Result<ConvergenceTrace> {
    if n_min < 1 || n_min >= n_max {
        return Err(Error::NodeRange { n_min, n_max });
    }
    cap.check(n_max)?;
    let values = (n_min..=n_max)
        .into_par_iter()
        .map(|n| double_integral(&gauss_laguerre_rule_with_cap(n, cap)?, kernel))
        .collect::<Result<Vec<f64>>>()?;
    Ok(ConvergenceTrace::from_values(
        kernel.id().to_string(),
        n_min,
        &values,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FitMethod {
    /// Slope of the line through the first and last points of the window.
    TwoPoint,
    #[default]
    LeastSquares,
}

impl std::str::FromStr for FitMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "two-point" | "two_point" | "twopoint" => Ok(FitMethod::TwoPoint),
            "lsq" | "least-squares" | "least_squares" => Ok(FitMethod::LeastSquares),
            _ => Err(Error::UnknownFitMethod(s.to_string())),
        }
    }
}

/// Log-log slope `C` over the last `window` usable epsilon entries.
pub fn fit_slope(trace: &ConvergenceTrace, window: usize, method: FitMethod) -> Result<f64> {
    let usable = trace.usable_epsilons();
    if window < 2 || usable.len() < window {
        return Err(Error::FitWindow {
            needed: window.max(2),
            available: usable.len(),
        });
    }
    loglog_slope(&usable[usable.len() - window..], method)
}

/// Log-log slope of `(n, ε)` points. Fails on fewer than two points or any
/// non-positive `ε`.
pub fn loglog_slope(points: &[(usize, f64)], method: FitMethod) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::FitWindow {
            needed: 2,
            available: points.len(),
        });
    }
    if let Some(&(n, _)) = points
        .iter()
        .find(|&&(n, eps)| n == 0 || !eps.is_finite() || eps <= 0.0)
    {
        return Err(Error::DegenerateEpsilon(n));
    }
    let logs: Vec<(f64, f64)> = points
        .iter()
        .map(|&(n, eps)| ((n as f64).ln(), eps.ln()))
        .collect();
    match method {
        FitMethod::TwoPoint => {
            let (x0, y0) = logs[0];
            let (x1, y1) = logs[logs.len() - 1];
            Ok((y1 - y0) / (x1 - x0))
        }
        FitMethod::LeastSquares => {
            let k = logs.len() as f64;
            let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / k;
            let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / k;
            let (sxy, sxx) = logs.iter().fold((0.0, 0.0), |(sxy, sxx), &(x, y)| {
                let dx = x - mean_x;
                (sxy + dx * (y - mean_y), sxx + dx * dx)
            });
            Ok(sxy / sxx)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemainderEstimate {
    /// Fitted log-log slope `C`.
    pub slope: f64,
    pub epsilon_n: f64,
    pub n: usize,
    /// `None` when `C >= -1` and the power-law tail diverges.
    pub remainder: Option<f64>,
}

impl RemainderEstimate {
    pub fn is_valid(&self) -> bool {
        self.remainder.is_some()
    }

    /// `(Q - R, Q + R)` when the estimate is valid.
    pub fn interval(&self, q: f64) -> Option<(f64, f64)> {
        self.remainder.map(|r| (q - r, q + r))
    }
}

pub fn extrapolate_remainder(epsilon_n: f64, n: usize, slope: f64) -> Result<RemainderEstimate> {
    if n == 0 {
        return Err(Error::Domain {
            name: "anchor node count n",
            requirement: "at least 1",
            value: 0.0,
        });
    }
    let remainder = (slope < -1.0).then(|| {
        let n1 = (n + 1) as f64;
        epsilon_n.abs() * (n1 / n as f64).powf(slope) * n1 / (slope + 1.0).abs()
    });
    Ok(RemainderEstimate {
        slope,
        epsilon_n,
        n,
        remainder,
    })
}

/// Fits the tail of `trace` and extrapolates from its last epsilon entry.
pub fn estimate_remainder(
    trace: &ConvergenceTrace,
    window: usize,
    method: FitMethod,
) -> Result<RemainderEstimate> {
    let slope = fit_slope(trace, window, method)?;
    let (n, eps) = trace.last_epsilon().ok_or(Error::FitWindow {
        needed: window,
        available: 0,
    })?;
    extrapolate_remainder(eps, n, slope)
}
