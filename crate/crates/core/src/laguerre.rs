//! Gauss-Laguerre abscissas and weights.
//!
//! The n-point rule integrates `e^{-x} f(x)` over `[0, ∞)` and is exact for
//! polynomials of degree `2n - 1`. Nodes are the zeros of `L_n`, located as
//! eigenvalues of the symmetric tridiagonal Jacobi matrix and then polished
//! with Newton steps on the three-term recurrence. Weights come from
//!
//! ```text
//! w_i = x_i / ((n + 1)^2 L_{n+1}(x_i)^2)
//! ```
//!
//! `L_{n+1}(x_i)` overflows `f64` for large `n`, so the recurrence carries a
//! power-of-two exponent alongside the mantissa and the weight is assembled
//! from the two without ever forming the raw value.

use std::sync::Once;

use log::{debug, warn};

use crate::error::{Error, Result};

/// Largest node count the crate will construct.
pub const MAX_NODES: usize = 360;

/// Above this node count the trailing weights underflow to zero in `f64`.
pub const UNDERFLOW_THRESHOLD: usize = 180;

const RESCALE_LIMIT: f64 = 1e150;
const RESCALE_EXP: i32 = 500;

/// Upper bound on the node count accepted by rule construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StabilityCap(usize);

impl StabilityCap {
    pub fn new(cap: usize) -> Result<Self> {
        if (1..=MAX_NODES).contains(&cap) {
            Ok(Self(cap))
        } else {
            Err(Error::StabilityCap(cap))
        }
    }

    pub fn get(self) -> usize {
        self.0
    }

    pub fn check(self, n: usize) -> Result<usize> {
        if n == 0 || n > self.0 {
            Err(Error::NodeCount { n, cap: self.0 })
        } else {
            Ok(n)
        }
    }
}

impl Default for StabilityCap {
    fn default() -> Self {
        Self(MAX_NODES)
    }
}

/// Nodes and weights of an n-point Gauss-Laguerre rule, nodes ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `(node, weight)` pairs in ascending node order.
    pub fn iter(&self) -> impl ExactSizeIterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }
}

/// Laguerre values with a shared power-of-two scale: `L_k = mantissa * 2^exp2`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ScaledLaguerre {
    /// `L_{n-1}` (zero when n = 0).
    pub prev: f64,
    /// `L_n`.
    pub curr: f64,
    /// `L_{n+1}`.
    pub next: f64,
    pub exp2: i32,
}

/// Runs the recurrence up to `L_{n+1}` in double-double arithmetic.
///
/// Node polishing and the weight formula both sit next to a zero of `L_n`,
/// where rounding in a plain `f64` recurrence costs up to ~1e-12 relative
/// accuracy in the smallest-node weights.
pub(crate) fn laguerre_scaled(n: usize, x: f64) -> ScaledLaguerre {
    let mut before = DoubleDouble::ZERO;
    let mut prev = DoubleDouble::ONE;
    let mut curr = DoubleDouble::from_diff(1.0, x);
    let mut exp2 = 0;
    for k in 1..=n {
        let kf = k as f64;
        let next = (DoubleDouble::from_diff(2.0 * kf + 1.0, x) * curr - prev.scale(kf)).div_f64(kf + 1.0);
        before = prev;
        prev = curr;
        curr = next;
        if curr.hi.abs() > RESCALE_LIMIT {
            let s = ldexp(1.0, -RESCALE_EXP);
            before = before.scale(s);
            prev = prev.scale(s);
            curr = curr.scale(s);
            exp2 += RESCALE_EXP;
        }
    }
    // After the loop `prev = L_n`, `curr = L_{n+1}`, `before = L_{n-1}`.
    ScaledLaguerre {
        prev: before.value(),
        curr: prev.value(),
        next: curr.value(),
        exp2,
    }
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy)]
struct DoubleDouble {
    hi: f64,
    lo: f64,
}

impl DoubleDouble {
    const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    const ONE: Self = Self { hi: 1.0, lo: 0.0 };

    fn two_sum(a: f64, b: f64) -> Self {
        let hi = a + b;
        let v = hi - a;
        Self {
            hi,
            lo: (a - (hi - v)) + (b - v),
        }
    }

    fn quick_two_sum(a: f64, b: f64) -> Self {
        let hi = a + b;
        Self { hi, lo: b - (hi - a) }
    }

    /// Exact `a - b`.
    fn from_diff(a: f64, b: f64) -> Self {
        Self::two_sum(a, -b)
    }

    fn scale(self, s: f64) -> Self {
        let p = self.hi * s;
        let err = self.hi.mul_add(s, -p);
        Self::quick_two_sum(p, err + self.lo * s)
    }

    fn div_f64(self, d: f64) -> Self {
        let q1 = self.hi / d;
        let r = self - Self::ONE.scale(q1).scale(d);
        let q2 = r.hi / d;
        Self::quick_two_sum(q1, q2)
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

impl std::ops::Sub for DoubleDouble {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        let s = Self::two_sum(self.hi, -rhs.hi);
        let t = Self::two_sum(self.lo, -rhs.lo);
        let s = Self::quick_two_sum(s.hi, s.lo + t.hi);
        Self::quick_two_sum(s.hi, s.lo + t.lo)
    }
}

impl std::ops::Mul for DoubleDouble {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let p = self.hi * rhs.hi;
        let err = self.hi.mul_add(rhs.hi, -p);
        Self::quick_two_sum(p, err + (self.hi * rhs.lo + self.lo * rhs.hi))
    }
}

/// `(L_n(x), L_{n+1}(x))` from the three-term recurrence.
///
/// Values beyond the `f64` range come back as infinities; the rule builder
/// works on the scaled form instead.
pub fn laguerre_eval(n: usize, x: f64) -> (f64, f64) {
    let s = laguerre_scaled(n, x);
    (ldexp(s.curr, s.exp2), ldexp(s.next, s.exp2))
}

/// `value * 2^exp`, stepping through the exponent so that intermediate
/// powers of two stay representable and underflow is gradual.
pub(crate) fn ldexp(mut value: f64, mut exp: i32) -> f64 {
    const STEP: i32 = 1000;
    while exp > STEP {
        value *= 2f64.powi(STEP);
        exp -= STEP;
    }
    while exp < -STEP {
        value *= 2f64.powi(-STEP);
        exp += STEP;
    }
    value * 2f64.powi(exp)
}

/// The n-point rule under the default stability cap.
pub fn gauss_laguerre_rule(n: usize) -> Result<QuadratureRule> {
    gauss_laguerre_rule_with_cap(n, StabilityCap::default())
}

pub fn gauss_laguerre_rule_with_cap(n: usize, cap: StabilityCap) -> Result<QuadratureRule> {
    cap.check(n)?;
    if n > UNDERFLOW_THRESHOLD {
        // once per process; sweeps build hundreds of rules
        static WARNED: Once = Once::new();
        WARNED.call_once(|| {
            warn!(
                "Gauss-Laguerre rules above {UNDERFLOW_THRESHOLD} points have weights that \
                 flush to zero for nodes beyond x ~ 700"
            )
        });
        debug!("{n}-point rule is above the underflow threshold");
    }

    let diag: Vec<f64> = (0..n).map(|i| (2 * i + 1) as f64).collect();
    let off: Vec<f64> = (1..n).map(|i| i as f64).collect();
    let mut nodes = symmetric_tridiagonal_eigenvalues(diag, off).ok_or(Error::EigenSolver(n))?;
    nodes.sort_by(f64::total_cmp);
    polish_roots(n, &mut nodes);

    let scale = ((n + 1) as f64).powi(2);
    let weights = nodes
        .iter()
        .map(|&x| {
            let s = laguerre_scaled(n, x);
            ldexp(x / (scale * s.next * s.next), -2 * s.exp2)
        })
        .collect();

    Ok(QuadratureRule { nodes, weights })
}

/// Newton refinement of the eigenvalue estimates of the zeros of `L_n`.
///
/// A step is only taken when it stays well inside the gap to the
/// neighbouring roots.
fn polish_roots(n: usize, nodes: &mut [f64]) {
    let nf = n as f64;
    for idx in 0..nodes.len() {
        let lower_gap = if idx > 0 {
            nodes[idx] - nodes[idx - 1]
        } else {
            nodes[idx]
        };
        let upper_gap = nodes
            .get(idx + 1)
            .map_or(f64::INFINITY, |&next| next - nodes[idx]);
        let limit = 0.25 * lower_gap.min(upper_gap);

        let mut x = nodes[idx];
        for _ in 0..2 {
            let s = laguerre_scaled(n, x);
            // x L_n'(x) = n (L_n(x) - L_{n-1}(x))
            let derivative = nf * (s.curr - s.prev) / x;
            if derivative == 0.0 || !derivative.is_finite() {
                break;
            }
            let step = s.curr / derivative;
            if !step.is_finite() || step.abs() > limit {
                break;
            }
            x -= step;
        }
        nodes[idx] = x;
    }
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `diag` and
/// off-diagonal `off` (`off[i]` couples rows `i` and `i + 1`), by the
/// implicit QL method with Wilkinson shifts. `None` if an eigenvalue fails
/// to converge in 60 sweeps.
pub(crate) fn symmetric_tridiagonal_eigenvalues(mut d: Vec<f64>, off: Vec<f64>) -> Option<Vec<f64>> {
    let n = d.len();
    debug_assert_eq!(off.len() + 1, n.max(1));
    let mut e = off;
    e.push(0.0);

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return None;
            }

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Some(d)
}
