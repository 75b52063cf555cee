//! Pre-exponential factors of average coagulation kernels.
//!
//! For a symmetric kernel homogeneous of degree `q`, the average kernel of
//! the Smoluchowski equation is `β̄ = p u^q` with
//!
//! ```text
//! p = 1/2 ∫_0^∞ ∫_0^∞ e^{-η-η₁} β(η, η₁) dη₁ dη
//! ```
//!
//! This crate evaluates the double integral with a tensor-product
//! Gauss-Laguerre rule ([`laguerre`], [`quadrature`]), estimates the
//! truncation error from the convergence of successive rules
//! ([`error_model`]), and cross-checks against closed forms ([`exact_ref`]).
//!
//! ```
//! use coagkernel::{gauss_laguerre_rule, average_kernel, BuiltinKernel, Kernel};
//!
//! let rule = gauss_laguerre_rule(99).unwrap();
//! let sc = average_kernel(&Kernel::builtin(BuiltinKernel::Sc), &rule).unwrap();
//! assert!((sc.p - 3.419).abs() < 1e-3);
//! ```

pub mod error;
pub mod error_model;
pub mod exact_ref;
pub mod kernels;
pub mod laguerre;
pub mod quadrature;
pub mod smoluchowski;

pub use error::{Error, EvalPoint, Result};
pub use error_model::{
    build_trace, build_trace_with_cap, estimate_remainder, extrapolate_remainder, fit_slope, loglog_slope,
    ConvergenceTrace, FitMethod, RemainderEstimate,
};
pub use exact_ref::{beta_fn, exact_ii, gamma, Derivation, ExactValue};
pub use kernels::{average_kernel, evaluate_average, AverageKernel, BuiltinKernel, Degree, Kernel, KernelId};
pub use laguerre::{
    gauss_laguerre_rule, gauss_laguerre_rule_with_cap, laguerre_eval, QuadratureRule, StabilityCap,
};
pub use quadrature::{double_integral, integrate_1d, integrate_2d, integrate_2d_with, prefactor, Summation};
pub use smoluchowski::{evolve_m0, mean_volume, population_average, psd, Evolution, MomentState};
