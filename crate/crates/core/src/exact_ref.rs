//! Closed-form double integrals of the physical kernels.
//!
//! These values come from Gamma/Beta function reductions and one adaptive
//! Gauss-Legendre integral. Nothing here touches the Gauss-Laguerre code,
//! so the results serve as an independent reference for it.

use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::{require_positive, Error, Result};
use crate::kernels::BuiltinKernel;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Euler's Gamma function for positive arguments (Lanczos, g = 7).
pub fn gamma(x: f64) -> Result<f64> {
    let x = require_positive("gamma argument", x)?;
    Ok(lanczos_gamma(x))
}

fn lanczos_gamma(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * lanczos_gamma(1.0 - x));
    }
    let z = x - 1.0;
    let mut series = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        series += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    // t^(z + 1/2) split in two so that large arguments do not overflow early
    let half = t.powf((z + 0.5) / 2.0);
    (2.0 * PI).sqrt() * half * ((-t).exp() * half) * series
}

/// `B(x, y) = Γ(x) Γ(y) / Γ(x + y)`.
pub fn beta_fn(x: f64, y: f64) -> Result<f64> {
    let gx = gamma(x)?;
    let gy = gamma(y)?;
    Ok(gx * gy / lanczos_gamma(x + y))
}

/// `∫_0^∞ x^α e^{-λ x^μ} dx = Γ((α + 1)/μ) / (μ λ^{(α + 1)/μ})`.
pub(crate) fn generalized_gamma(alpha: f64, lambda: f64, mu: f64) -> f64 {
    let s = (alpha + 1.0) / mu;
    lanczos_gamma(s) / (mu * lambda.powf(s))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Derivation {
    GammaClosedForm,
    GammaPlus1dIntegral,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactValue {
    pub kernel: BuiltinKernel,
    pub value: f64,
    pub derivation: Derivation,
}

/// Absolute tolerance for the one-dimensional SD integral.
pub const SD_TOLERANCE: f64 = 1e-11;

/// Exact `II = ∫∫ e^{-x-y} β(x, y) dx dy` for a built-in kernel.
pub fn exact_ii(kernel: BuiltinKernel) -> Result<ExactValue> {
    let g = lanczos_gamma;
    let (value, derivation) = match kernel {
        BuiltinKernel::Cr => (
            2.0 * g(1.0) + 2.0 * g(2.0 / 3.0) * g(4.0 / 3.0),
            Derivation::GammaClosedForm,
        ),
        BuiltinKernel::Sc => (
            2.0 * g(2.0) + 6.0 * g(5.0 / 3.0) * g(4.0 / 3.0),
            Derivation::GammaClosedForm,
        ),
        BuiltinKernel::Fm => {
            // Radial part Γ(13/6)/2 times the angular part B(7/6, 1/2) + B(5/6, 5/6),
            // with the leading factor 4 from the a², b² substitution.
            let angular = (g(7.0 / 6.0) * g(0.5) + g(5.0 / 6.0).powi(2)) / g(5.0 / 3.0);
            (2.0 * g(13.0 / 6.0) * angular, Derivation::GammaClosedForm)
        }
        BuiltinKernel::Sd => (sd_tangent_form(SD_TOLERANCE)?, Derivation::GammaPlus1dIntegral),
        BuiltinKernel::Const | BuiltinKernel::Mul => (1.0, Derivation::GammaClosedForm),
        BuiltinKernel::Add => (2.0, Derivation::GammaClosedForm),
    };
    Ok(ExactValue {
        kernel,
        value,
        derivation,
    })
}

/// SD integral after `t = tan θ`:
/// `6 Γ(10/3) ∫_0^1 t²(1-t) / ((1-t+t²)³ (1+t³)^{1/3}) dt`.
pub fn sd_tangent_form(tol: f64) -> Result<f64> {
    let f = |t: f64| t * t * (1.0 - t) / ((1.0 - t + t * t).powi(3) * (1.0 + t * t * t).cbrt());
    Ok(6.0 * lanczos_gamma(10.0 / 3.0) * adaptive::integrate(f, 0.0, 1.0, tol)?)
}

/// SD integral in polar coordinates on the half-sector `θ ∈ [0, π/4]`, with
/// the radial integral done by the generalized Gamma identity.
pub fn sd_polar_form(tol: f64) -> Result<f64> {
    let f = |theta: f64| {
        let (s, c) = theta.sin_cos();
        let angular = (c + s).powi(3) * (c - s) * c * c * s * s;
        // ∫ r^9 e^{-(c³+s³) r³} dr
        angular * generalized_gamma(9.0, c.powi(3) + s.powi(3), 3.0)
    };
    Ok(18.0 * adaptive::integrate(f, 0.0, FRAC_PI_4, tol)?)
}

/// SD integral after `x = η^{1/3}, y = η₁^{1/3}`:
/// `∫∫ 9x²y²(x+y)³|x-y| e^{-x³-y³}`, folded onto `y < x` and truncated at
/// `x = 5` where the integrand is below `e^{-125}`.
pub fn sd_cartesian_form(tol: f64) -> Result<f64> {
    const UPPER: f64 = 5.0;
    let inner_tol = tol / (4.0 * UPPER);
    let row = |x: f64| -> Result<f64> {
        let g = |y: f64| 9.0 * x * x * y * y * (x + y).powi(3) * (x - y) * (-x * x * x - y * y * y).exp();
        adaptive::integrate(g, 0.0, x, inner_tol)
    };
    // Propagate an inner failure out of the outer integrand.
    let mut failure = None;
    let outer = adaptive::integrate(
        |x| match row(x) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        0.0,
        UPPER,
        tol / 2.0,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(2.0 * outer?)
}

pub mod adaptive {
    //! Adaptive composite Gauss-Legendre quadrature on a finite interval.

    use super::*;

    const NODES: [(f64, f64); 5] = [
        (0.148_874_338_981_631_22, 0.295_524_224_714_753),
        (0.433_395_394_129_247_2, 0.269_266_719_309_996_5),
        (0.679_409_568_299_024_4, 0.219_086_362_515_982),
        (0.865_063_366_688_984_5, 0.149_451_349_150_580_36),
        (0.973_906_528_517_171_7, 0.066_671_344_308_688_07),
    ];

    // deep enough for sqrt-type endpoint behaviour, where the panel width
    // must fall to ~tol^2 before the halved tolerance is met
    const MAX_DEPTH: u32 = 100;

    /// Ten-point Gauss-Legendre on `[a, b]`.
    pub fn gauss_legendre_10<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut sum = 0.0;
        for &(x, w) in &NODES {
            sum += w * (f(mid - half * x) + f(mid + half * x));
        }
        sum * half
    }

    /// Bisects panels until the difference between a panel and its two
    /// halves is below the panel's share of `tol`.
    pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
        let whole = gauss_legendre_10(&mut f, a, b);
        refine(&mut f, a, b, whole, tol, 0)
    }

    fn refine<F: FnMut(f64) -> f64>(
        f: &mut F,
        a: f64,
        b: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64> {
        let mid = 0.5 * (a + b);
        let left = gauss_legendre_10(f, a, mid);
        let right = gauss_legendre_10(f, mid, b);
        let halves = left + right;
        if !halves.is_finite() {
            return Err(Error::NoConvergence { a, b, tol });
        }
        if (halves - whole).abs() <= tol {
            return Ok(halves);
        }
        if depth >= MAX_DEPTH || !(a < mid && mid < b) {
            return Err(Error::NoConvergence { a, b, tol });
        }
        Ok(refine(f, a, mid, left, tol / 2.0, depth + 1)? + refine(f, mid, b, right, tol / 2.0, depth + 1)?)
    }
}
