//! Per-kernel comparison of the Gauss-Laguerre result against the closed form.

use anyhow::Result;
use coagkernel::{
    build_trace_with_cap, double_integral, estimate_remainder, exact_ii, gauss_laguerre_rule_with_cap,
    BuiltinKernel, FitMethod, Kernel, StabilityCap,
};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub kernel_id: String,
    pub epsilon_nn: f64,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "Q")]
    pub q_value: f64,
    /// Absent when the fitted slope is not below -1.
    #[serde(rename = "R")]
    pub r: Option<f64>,
    #[serde(rename = "II_interval_lo")]
    pub ii_lo: Option<f64>,
    #[serde(rename = "II_interval_hi")]
    pub ii_hi: Option<f64>,
    #[serde(rename = "exact_II")]
    pub exact_ii: f64,
    #[serde(rename = "p_GL")]
    pub p_gl: f64,
    #[serde(rename = "p_DC")]
    pub p_dc: f64,
    pub q: String,
}

#[derive(Debug, Clone, Copy)]
pub struct ReportOptions {
    /// Node count for `Q`.
    pub n: usize,
    /// Last node count of the convergence trace; the epsilon, slope and
    /// remainder columns are anchored here.
    pub tail_n: usize,
    pub window: usize,
    pub method: FitMethod,
    pub cap: StabilityCap,
}

pub fn report_row(kind: BuiltinKernel, opts: &ReportOptions) -> Result<ReportRow> {
    let kernel = Kernel::builtin(kind);
    let rule = gauss_laguerre_rule_with_cap(opts.n, opts.cap)?;
    let q_value = double_integral(&rule, &kernel)?;

    let n_min = opts.tail_n.saturating_sub(opts.window).max(1);
    let trace = build_trace_with_cap(&kernel, n_min, opts.tail_n, opts.cap)?;
    let estimate = estimate_remainder(&trace, opts.window, opts.method)?;
    let interval = estimate.interval(q_value);
    let exact = exact_ii(kind)?.value;

    Ok(ReportRow {
        kernel_id: kind.label().to_string(),
        epsilon_nn: estimate.epsilon_n,
        c: estimate.slope,
        q_value,
        r: estimate.remainder,
        ii_lo: interval.map(|i| i.0),
        ii_hi: interval.map(|i| i.1),
        exact_ii: exact,
        p_gl: q_value / 2.0,
        p_dc: exact / 2.0,
        q: kind.degree().to_string(),
    })
}

pub fn report(opts: &ReportOptions) -> Result<Vec<ReportRow>> {
    BuiltinKernel::PHYSICAL
        .into_iter()
        .map(|k| report_row(k, opts))
        .collect()
}
