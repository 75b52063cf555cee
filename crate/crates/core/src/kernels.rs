//! Collision kernels and the average kernel `β̄ = p u^q`.
//!
//! All kernels here are dimensionless functions of two positive particle
//! volumes. They are symmetric, non-negative and homogeneous of degree `q`:
//! `β(αa, αb) = α^q β(a, b)`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{require_positive, Error, Result};
use crate::laguerre::QuadratureRule;
use crate::quadrature::prefactor;

/// Rational homogeneity degree `q = numer / denom`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Degree {
    numer: i32,
    denom: u32,
}

impl Degree {
    pub const fn integer(q: i32) -> Self {
        Self { numer: q, denom: 1 }
    }

    /// Panics on a zero denominator.
    pub fn new(numer: i32, denom: u32) -> Self {
        assert!(denom != 0, "degree denominator must be non-zero");
        let g = gcd(numer.unsigned_abs(), denom).max(1);
        Self {
            numer: numer / g as i32,
            denom: denom / g,
        }
    }

    pub fn numer(self) -> i32 {
        self.numer
    }

    pub fn denom(self) -> u32 {
        self.denom
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.numer) / f64::from(self.denom)
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom == 1 {
            write!(f, "{}", self.numer)
        } else {
            write!(f, "{}/{}", self.numer, self.denom)
        }
    }
}

impl FromStr for Degree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Domain {
            name: "degree",
            requirement: "an integer or a fraction a/b",
            value: f64::NAN,
        };
        match s.trim().split_once('/') {
            Some((n, d)) => {
                let n: i32 = n.trim().parse().map_err(|_| bad())?;
                let d: u32 = d.trim().parse().map_err(|_| bad())?;
                if d == 0 {
                    return Err(bad());
                }
                Ok(Self::new(n, d))
            }
            None => s.trim().parse().map(Self::integer).map_err(|_| bad()),
        }
    }
}

/// The built-in kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BuiltinKernel {
    /// Brownian coagulation, continuum regime.
    Cr,
    /// Shear coagulation.
    Sc,
    /// Brownian coagulation, free-molecule regime.
    Fm,
    /// Gravitational sedimentation.
    Sd,
    Const,
    Add,
    Mul,
}

impl BuiltinKernel {
    pub const ALL: [BuiltinKernel; 7] = [
        BuiltinKernel::Cr,
        BuiltinKernel::Sc,
        BuiltinKernel::Fm,
        BuiltinKernel::Sd,
        BuiltinKernel::Const,
        BuiltinKernel::Add,
        BuiltinKernel::Mul,
    ];

    /// The four physical kernels: CR, SC, FM, SD.
    pub const PHYSICAL: [BuiltinKernel; 4] = [
        BuiltinKernel::Cr,
        BuiltinKernel::Sc,
        BuiltinKernel::Fm,
        BuiltinKernel::Sd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BuiltinKernel::Cr => "cr",
            BuiltinKernel::Sc => "sc",
            BuiltinKernel::Fm => "fm",
            BuiltinKernel::Sd => "sd",
            BuiltinKernel::Const => "const",
            BuiltinKernel::Add => "add",
            BuiltinKernel::Mul => "mul",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BuiltinKernel::Cr => "CR",
            BuiltinKernel::Sc => "SC",
            BuiltinKernel::Fm => "FM",
            BuiltinKernel::Sd => "SD",
            BuiltinKernel::Const => "CONST",
            BuiltinKernel::Add => "ADD",
            BuiltinKernel::Mul => "MUL",
        }
    }

    pub fn degree(self) -> Degree {
        match self {
            BuiltinKernel::Cr | BuiltinKernel::Const => Degree::integer(0),
            BuiltinKernel::Sc | BuiltinKernel::Add => Degree::integer(1),
            BuiltinKernel::Fm => Degree::new(1, 6),
            BuiltinKernel::Sd => Degree::new(4, 3),
            BuiltinKernel::Mul => Degree::integer(2),
        }
    }

    pub fn eval(self, a: f64, b: f64) -> f64 {
        match self {
            BuiltinKernel::Cr => {
                let (ca, cb) = (a.cbrt(), b.cbrt());
                (cb.recip() + ca.recip()) * (cb + ca)
            }
            BuiltinKernel::Sc => (b.cbrt() + a.cbrt()).powi(3),
            BuiltinKernel::Fm => (b.recip() + a.recip()).sqrt() * (b.cbrt() + a.cbrt()).powi(2),
            BuiltinKernel::Sd => {
                let (ca, cb) = (a.cbrt(), b.cbrt());
                (ca + cb).powi(3) * (ca - cb).abs()
            }
            BuiltinKernel::Const => 1.0,
            BuiltinKernel::Add => a + b,
            BuiltinKernel::Mul => a * b,
        }
    }
}

impl fmt::Display for BuiltinKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for BuiltinKernel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        BuiltinKernel::ALL
            .into_iter()
            .find(|k| k.name() == lower)
            .ok_or_else(|| Error::UnknownKernel(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum KernelId {
    Builtin(BuiltinKernel),
    Custom(String),
}

impl fmt::Display for KernelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelId::Builtin(k) => k.fmt(f),
            KernelId::Custom(name) => f.write_str(name),
        }
    }
}

type BetaFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A symmetric homogeneous collision kernel.
#[derive(Clone)]
pub struct Kernel {
    id: KernelId,
    beta: Option<BetaFn>,
    q: Degree,
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Kernel")
            .field("id", &self.id)
            .field("q", &self.q)
            .finish()
    }
}

/// Relative tolerance for the homogeneity check on custom kernels.
pub const CUSTOM_HOMOGENEITY_TOL: f64 = 1e-6;

impl Kernel {
    pub fn builtin(kind: BuiltinKernel) -> Self {
        Self {
            id: KernelId::Builtin(kind),
            beta: None,
            q: kind.degree(),
        }
    }

    /// Looks a built-in kernel up by its CLI name (`cr`, `sc`, ...).
    pub fn by_name(name: &str) -> Result<Self> {
        name.parse().map(Self::builtin)
    }

    /// Registers a user kernel with a declared degree `q`.
    ///
    /// The kernel is sampled on a fixed grid and rejected if it is not
    /// symmetric, non-negative, or homogeneous of degree `q` to
    /// [`CUSTOM_HOMOGENEITY_TOL`].
    pub fn custom<F>(name: impl Into<String>, q: Degree, beta: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        let kernel = Self {
            id: KernelId::Custom(name.into()),
            beta: Some(Arc::new(beta)),
            q,
        };
        kernel.check_properties(CUSTOM_HOMOGENEITY_TOL)?;
        Ok(kernel)
    }

    pub fn id(&self) -> &KernelId {
        &self.id
    }

    pub fn builtin_kind(&self) -> Option<BuiltinKernel> {
        match self.id {
            KernelId::Builtin(k) => Some(k),
            KernelId::Custom(_) => None,
        }
    }

    pub fn q(&self) -> Degree {
        self.q
    }

    #[inline]
    pub fn eval(&self, a: f64, b: f64) -> f64 {
        match (&self.beta, &self.id) {
            (Some(beta), _) => beta(a, b),
            (None, KernelId::Builtin(k)) => k.eval(a, b),
            (None, KernelId::Custom(_)) => unreachable!("custom kernels always carry a closure"),
        }
    }

    /// Samples symmetry, non-negativity and homogeneity on a deterministic
    /// grid of points in `(1e-3, 1e3)`.
    pub fn check_properties(&self, rel_tol: f64) -> Result<()> {
        let fail = |check: &'static str, detail: String| Error::KernelCheck {
            name: self.id.to_string(),
            check,
            detail,
        };
        let q = self.q.as_f64();
        for (a, b, alpha) in sample_points() {
            let ab = self.eval(a, b);
            let ba = self.eval(b, a);
            if !ab.is_finite() || ab < 0.0 {
                return Err(fail("non-negativity", format!("beta({a}, {b}) = {ab}")));
            }
            if (ab - ba).abs() > rel_tol * ab.abs().max(ba.abs()) {
                return Err(fail(
                    "symmetry",
                    format!("beta({a}, {b}) = {ab}, beta({b}, {a}) = {ba}"),
                ));
            }
            let scaled = self.eval(alpha * a, alpha * b);
            let expected = alpha.powf(q) * ab;
            if (scaled - expected).abs() > rel_tol * expected.abs().max(scaled.abs()) {
                return Err(fail(
                    "homogeneity",
                    format!(
                        "beta({alpha}*{a}, {alpha}*{b}) = {scaled}, expected {expected} for q = {}",
                        self.q
                    ),
                ));
            }
        }
        Ok(())
    }
}

/// Deterministic `(a, b, α)` triples spread log-uniformly over `(1e-3, 1e3)`.
/// Pairs with `a == b` are skipped (the SD kernel vanishes there).
fn sample_points() -> impl Iterator<Item = (f64, f64, f64)> {
    const GRID: [f64; 9] = [1.3e-3, 7.0e-3, 0.04, 0.31, 1.0, 2.7, 19.0, 140.0, 870.0];
    const ALPHA: [f64; 3] = [0.37, 1.9, 1.1];
    GRID.into_iter().enumerate().flat_map(|(i, a)| {
        GRID.into_iter()
            .enumerate()
            .filter(move |&(j, _)| i != j)
            .map(move |(j, b)| (a, b, ALPHA[(i + j) % ALPHA.len()]))
    })
}

/// `β̄ = p u^q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AverageKernel {
    pub p: f64,
    pub q: Degree,
}

impl AverageKernel {
    /// `p u^q`; `u` must be positive.
    pub fn evaluate(&self, u: f64) -> Result<f64> {
        let u = require_positive("mean volume u", u)?;
        Ok(self.p * u.powf(self.q.as_f64()))
    }

    /// Human-readable form, e.g. `3.4186*u^1/6`.
    pub fn expression(&self, decimals: usize) -> String {
        match self.q.numer() {
            0 => format!("{:.*}", decimals, self.p),
            _ if self.q == Degree::integer(1) => format!("{:.*}*u", decimals, self.p),
            _ => format!("{:.*}*u^({})", decimals, self.p, self.q),
        }
    }
}

pub fn average_kernel(kernel: &Kernel, rule: &QuadratureRule) -> Result<AverageKernel> {
    Ok(AverageKernel {
        p: prefactor(rule, kernel)?,
        q: kernel.q(),
    })
}

pub fn evaluate_average(ak: &AverageKernel, u: f64) -> Result<f64> {
    ak.evaluate(u)
}
