//! Acceptance checks against reference values and the closed forms.
//!
//! Prints one PASS/FAIL line per criterion and exits nonzero if any fail.
//! Run with `cargo test -p coagkernel --test acceptance -- --nocapture`
//! (the harness prints regardless; `--nocapture` is harmless).

use std::process::ExitCode;
use std::time::Instant;

use coagkernel::exact_ref::{sd_cartesian_form, sd_polar_form, sd_tangent_form, SD_TOLERANCE};
use coagkernel::{
    average_kernel, build_trace, double_integral, estimate_remainder, evolve_m0, exact_ii,
    extrapolate_remainder, fit_slope, gauss_laguerre_rule, integrate_1d, loglog_slope, population_average,
    prefactor, AverageKernel, BuiltinKernel, ConvergenceTrace, Degree, FitMethod, Kernel, MomentState,
};

const PHYSICAL: [BuiltinKernel; 4] = BuiltinKernel::PHYSICAL;

/// Node count whose double sum matches the reference `Q` values.
const REFERENCE_Q_NODES: usize = 300;
/// Last node count of the trace the reference epsilon, slope and `R` values
/// were taken from.
const REFERENCE_TAIL_NODES: usize = 360;
const FIT_WINDOW: usize = 10;

struct Outcome {
    pass: bool,
    detail: String,
    notes: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
            notes: Vec::new(),
        }
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

fn tail_trace(kind: BuiltinKernel) -> ConvergenceTrace {
    build_trace(
        &Kernel::builtin(kind),
        REFERENCE_TAIL_NODES - FIT_WINDOW,
        REFERENCE_TAIL_NODES,
    )
    .unwrap()
}

fn exact_values() -> Outcome {
    let expected = [4.41839915, 6.83679830, 6.99822397, 2.58940496];
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for (kind, want) in PHYSICAL.into_iter().zip(expected) {
        let got = exact_ii(kind).unwrap().value;
        worst = worst.max((got - want).abs());
        parts.push(format!("{}={got:.9}", kind.label()));
    }
    Outcome::new(
        worst <= 1e-7,
        format!("{} (max |diff| {worst:.1e}, tol 1e-7)", parts.join(" ")),
    )
}

fn ten_point_rule() -> Outcome {
    let nodes = [
        0.1377, 0.7294, 1.8083, 3.4014, 5.5524, 8.3301, 11.8437, 16.2792, 21.9965, 29.9206,
    ];
    let weights: [f64; 10] = [
        0.3084, 0.4011, 0.2180, 0.0620, 0.0095, 0.0007, 2.8e-5, 4.2e-7, 1.8e-9, 9.9e-13,
    ];
    let rule = gauss_laguerre_rule(10).unwrap();
    // The reference digits are truncated, not rounded: each printed value is the
    // computed one cut after its last digit.
    let truncates_to = |v: f64, printed: f64, unit: f64| printed <= v + 1e-15 && v < printed + unit;
    let mut mismatches = Vec::new();
    for (i, (&x, &want)) in rule.nodes().iter().zip(&nodes).enumerate() {
        if !truncates_to(x, want, 1e-4) {
            mismatches.push(format!("x{} = {x:.6}", i + 1));
        }
    }
    for (i, (&w, &want)) in rule.weights().iter().zip(&weights).enumerate() {
        let unit = if want >= 1e-4 {
            1e-4
        } else {
            10f64.powi(want.log10().floor() as i32 - 1)
        };
        if !truncates_to(w, want, unit) {
            mismatches.push(format!("w{} = {w:.3e}", i + 1));
        }
    }
    Outcome::new(
        mismatches.is_empty(),
        if mismatches.is_empty() {
            "all 10 nodes and 10 weights match the printed (truncated) digits".to_string()
        } else {
            format!("mismatches: {}", mismatches.join(", "))
        },
    )
}

fn reference_q(at_99: &[f64; 4]) -> Outcome {
    let expected = [4.4025, 6.8371, 6.9032, 2.5861];
    let rule = gauss_laguerre_rule(REFERENCE_Q_NODES).unwrap();
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for (kind, want) in PHYSICAL.into_iter().zip(expected) {
        let q = double_integral(&rule, &Kernel::builtin(kind)).unwrap();
        worst = worst.max((q - want).abs());
        parts.push(format!("{}={q:.5}", kind.label()));
    }
    let worst_99 = at_99
        .iter()
        .zip(expected)
        .map(|(q, want)| (q - want).abs())
        .fold(0.0, f64::max);
    Outcome::new(
        worst <= 5e-4,
        format!(
            "n={REFERENCE_Q_NODES}: {} (max |diff| {worst:.1e}, tol 5e-4)",
            parts.join(" ")
        ),
    )
    .note(format!(
        "at n=99 the same check gives max |diff| {worst_99:.1e}; the reference values were not produced at 99 nodes"
    ))
}

fn reference_epsilon(traces: &[ConvergenceTrace], eps_99: &[f64; 4]) -> Outcome {
    let expected = [2.5865e-5, 9.3561e-7, 1.2344e-4, 7.4036e-6];
    let mut worst: f64 = 1.0;
    let mut parts = Vec::new();
    for ((trace, want), kind) in traces.iter().zip(expected).zip(PHYSICAL) {
        let (n, eps) = trace.last_epsilon().unwrap();
        let ratio = (eps / want).max(want / eps);
        worst = worst.max(ratio);
        parts.push(format!("{}: eps_{n}={eps:.4e}", kind.label()));
    }
    let worst_99 = eps_99
        .iter()
        .zip(expected)
        .map(|(&e, want)| (e / want).max(want / e))
        .fold(1.0, f64::max);
    Outcome::new(
        worst <= 3.0,
        format!("{} (worst ratio {worst:.4}, tol 3)", parts.join(" ")),
    )
    .note(format!(
        "at n=99 the worst ratio is {worst_99:.2}; the reference values were not produced at 99 nodes"
    ))
}

fn prefactor_columns() -> Outcome {
    let expected_dc = [2.2092, 3.4184, 3.4991, 1.2947];
    let rule = gauss_laguerre_rule(REFERENCE_Q_NODES).unwrap();
    let mut identical = true;
    let mut worst: f64 = 0.0;
    for (kind, want) in PHYSICAL.into_iter().zip(expected_dc) {
        let kernel = Kernel::builtin(kind);
        identical &= prefactor(&rule, &kernel).unwrap() == double_integral(&rule, &kernel).unwrap() / 2.0;
        identical &= average_kernel(&kernel, &rule).unwrap().p == prefactor(&rule, &kernel).unwrap();
        let p_dc = exact_ii(kind).unwrap().value / 2.0;
        worst = worst.max((p_dc - want).abs());
    }
    Outcome::new(
        identical && worst <= 5e-4,
        format!("p_GL == Q/2 bit-identical: {identical}; p_DC max |diff| {worst:.1e} (tol 5e-4)"),
    )
}

fn slope_fits(traces: &[ConvergenceTrace]) -> Outcome {
    let expected_c = [-1.6572, -2.3733, -1.5209, -1.9750];
    let expected_r = [0.0141, 0.0002, 0.0852, 0.0027];
    let mut all_below = true;
    let mut worst_c: f64 = 0.0;
    let mut parts = Vec::new();
    let mut r_parts = Vec::new();
    let mut worst_r: f64 = 0.0;
    for ((trace, (want_c, want_r)), kind) in traces
        .iter()
        .zip(expected_c.into_iter().zip(expected_r))
        .zip(PHYSICAL)
    {
        let lsq = fit_slope(trace, FIT_WINDOW, FitMethod::LeastSquares).unwrap();
        let two = fit_slope(trace, FIT_WINDOW, FitMethod::TwoPoint).unwrap();
        all_below &= lsq < -1.0 && two < -1.0;
        worst_c = worst_c.max((two - want_c).abs());
        parts.push(format!("{}: C={two:.4}", kind.label()));

        let (n, eps) = trace.last_epsilon().unwrap();
        let r = extrapolate_remainder(eps, n, want_c).unwrap().remainder.unwrap();
        worst_r = worst_r.max((r - want_r).abs());
        r_parts.push(format!("{r:.4}"));
    }

    let synthetic: Vec<(usize, f64)> = (20..=60).map(|n| (n, (n as f64).powf(-1.75))).collect();
    let recovered = [FitMethod::TwoPoint, FitMethod::LeastSquares]
        .into_iter()
        .map(|m| (loglog_slope(&synthetic, m).unwrap() + 1.75).abs())
        .fold(0.0, f64::max);

    Outcome::new(
        all_below && worst_c <= 0.3 && recovered <= 1e-9,
        format!(
            "all C < -1: {all_below}; two-point {} (max |diff| {worst_c:.3}, tol 0.3); \
             synthetic recovery error {recovered:.1e} (tol 1e-9)",
            parts.join(" ")
        ),
    )
    .note(format!(
        "R at n={} with the reference C: {} (max |diff| from reference {worst_r:.1e})",
        REFERENCE_TAIL_NODES - 1,
        r_parts.join(" ")
    ))
}

fn polynomial_exactness() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in [2, 5, 10, 20, 40] {
        let rule = gauss_laguerre_rule(n).unwrap();
        let mut factorial = 1.0;
        for k in 0..2 * n as i32 {
            if k > 0 {
                factorial *= k as f64;
            }
            let got = integrate_1d(&rule, |x| x.powi(k)).unwrap();
            worst = worst.max(((got - factorial) / factorial).abs());
        }
    }
    Outcome::new(
        worst <= 1e-10,
        format!("n in {{2,5,10,20,40}}, k <= 2n-1: max relative error {worst:.1e} (tol 1e-10)"),
    )
}

fn trivial_kernels() -> Outcome {
    let cases = [
        (BuiltinKernel::Const, 0.5),
        (BuiltinKernel::Add, 1.0),
        (BuiltinKernel::Mul, 0.5),
    ];
    let mut worst: f64 = 0.0;
    for n in [3, 4, 10, 99, 360] {
        let rule = gauss_laguerre_rule(n).unwrap();
        for (kind, want) in cases {
            worst = worst.max((prefactor(&rule, &Kernel::builtin(kind)).unwrap() - want).abs());
        }
    }
    Outcome::new(
        worst <= 1e-11,
        format!("const/add/mul at n in {{3,4,10,99,360}}: max |diff| {worst:.1e} (tol 1e-11)"),
    )
}

fn population_equivalence() -> Outcome {
    let rule = gauss_laguerre_rule(99).unwrap();
    let mut failures = Vec::new();
    let mut checked = 0;
    for kind in BuiltinKernel::ALL {
        let kernel = Kernel::builtin(kind);
        let p = prefactor(&rule, &kernel).unwrap();
        for u in [0.5, 1.0, 2.0] {
            let state = MomentState::new(1.0, u, 0.0).unwrap();
            let avg = population_average(&kernel, &state, &rule).unwrap();
            checked += 1;
            if avg != 2.0 * p * u.powf(kernel.q().as_f64()) {
                failures.push(format!("{}@u={u}", kind.label()));
            }
        }
    }
    Outcome::new(
        failures.is_empty(),
        format!(
            "{} of {checked} cases bit-identical {}",
            checked - failures.len(),
            failures.join(" ")
        ),
    )
}

fn rk4_m0(ak: &AverageKernel, start: MomentState, t_end: f64, h: f64, checkpoints: &[f64]) -> Vec<f64> {
    let q = ak.q.as_f64();
    let rate = 0.5 * ak.p * start.m1.powf(q);
    let f = |m0: f64| -rate * m0.max(0.0).powf(2.0 - q);
    let steps = (t_end / h).round() as usize;
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut m0 = start.m0;
    let mut next = 0;
    for step in 0..=steps {
        let t = step as f64 * h;
        while next < checkpoints.len() && (checkpoints[next] - t).abs() < 0.5 * h {
            out.push(m0);
            next += 1;
        }
        if step == steps {
            break;
        }
        let k1 = f(m0);
        let k2 = f(m0 + 0.5 * h * k1);
        let k3 = f(m0 + 0.5 * h * k2);
        let k4 = f(m0 + h * k3);
        m0 += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    out
}

fn ode_properties() -> Outcome {
    let rule = gauss_laguerre_rule(99).unwrap();
    let kernels = [
        (BuiltinKernel::Cr, Degree::integer(0)),
        (BuiltinKernel::Fm, Degree::new(1, 6)),
        (BuiltinKernel::Sc, Degree::integer(1)),
        (BuiltinKernel::Sd, Degree::new(4, 3)),
    ];
    // M1 = 0.1 keeps the q = 4/3 extinction time well past t = 10
    let start = MomentState::new(1.0, 0.1, 0.0).unwrap();
    let checkpoints: Vec<f64> = (0..=20).map(|k| 0.5 * k as f64).collect();
    let mut worst_rk4: f64 = 0.0;
    let mut worst_semigroup: f64 = 0.0;
    let mut m1_conserved = true;
    for (kind, q) in kernels {
        let ak = average_kernel(&Kernel::builtin(kind), &rule).unwrap();
        assert_eq!(ak.q, q);
        if let Some(t_star) = evolve_m0(&ak, &start, 0.0).unwrap().extinction_time {
            assert!(t_star > 10.0, "extinction inside the test window");
        }
        let oracle = rk4_m0(&ak, start, 10.0, 1e-4, &checkpoints);
        for (&t, &want) in checkpoints.iter().zip(&oracle) {
            let got = evolve_m0(&ak, &start, t).unwrap().state;
            worst_rk4 = worst_rk4.max(((got.m0 - want) / want).abs());
            m1_conserved &= got.m1 == start.m1;
        }
        for (a, b) in [(0.3, 2.2), (1.0, 1.0), (4.5, 5.5)] {
            let two_step = evolve_m0(&ak, &evolve_m0(&ak, &start, a).unwrap().state, b)
                .unwrap()
                .state;
            let one_step = evolve_m0(&ak, &start, a + b).unwrap().state;
            worst_semigroup = worst_semigroup.max(((two_step.m0 - one_step.m0) / one_step.m0).abs());
            worst_semigroup = worst_semigroup.max((two_step.t - one_step.t).abs());
        }
    }
    Outcome::new(
        worst_rk4 <= 1e-7 && worst_semigroup <= 1e-12 && m1_conserved,
        format!(
            "RK4 max relative error {worst_rk4:.1e} (tol 1e-7); semigroup {worst_semigroup:.1e} (tol 1e-12); \
             M1 conserved: {m1_conserved}"
        ),
    )
}

fn sd_chain() -> Outcome {
    let forms = [
        ("cartesian", sd_cartesian_form(SD_TOLERANCE).unwrap()),
        ("polar", sd_polar_form(SD_TOLERANCE).unwrap()),
        ("tangent", sd_tangent_form(SD_TOLERANCE).unwrap()),
    ];
    let exact = exact_ii(BuiltinKernel::Sd).unwrap().value;
    let mut pairwise: f64 = 0.0;
    for i in 0..forms.len() {
        for j in i + 1..forms.len() {
            pairwise = pairwise.max((forms[i].1 - forms[j].1).abs());
        }
    }
    let vs_exact = forms.iter().map(|f| (f.1 - exact).abs()).fold(0.0, f64::max);
    let values: Vec<String> = forms.iter().map(|(name, v)| format!("{name}={v:.12}")).collect();
    Outcome::new(
        pairwise <= 1e-6 && vs_exact <= 1e-7,
        format!(
            "{} pairwise {pairwise:.1e} (tol 1e-6), vs exact_II {vs_exact:.1e} (tol 1e-7)",
            values.join(" ")
        ),
    )
}

fn main() -> ExitCode {
    let started = Instant::now();
    let traces: Vec<ConvergenceTrace> = PHYSICAL.into_iter().map(tail_trace).collect();
    let (mut q_99, mut eps_99) = ([0.0; 4], [0.0; 4]);
    for (k, kind) in PHYSICAL.into_iter().enumerate() {
        let trace = build_trace(&Kernel::builtin(kind), 99, 100).unwrap();
        q_99[k] = trace.entries[0].1;
        eps_99[k] = trace.epsilons[0].1;
    }
    // sanity: the remainder estimate used by the report is anchored at the trace end
    let anchor = estimate_remainder(&traces[0], FIT_WINDOW, FitMethod::TwoPoint)
        .unwrap()
        .n;
    assert_eq!(anchor, REFERENCE_TAIL_NODES - 1);

    let criteria: Vec<(&str, Outcome)> = vec![
        ("exact oracle values", exact_values()),
        ("10-point rule", ten_point_rule()),
        ("Q values", reference_q(&q_99)),
        ("epsilon values", reference_epsilon(&traces, &eps_99)),
        ("p_GL and p_DC", prefactor_columns()),
        ("slope fits", slope_fits(&traces)),
        ("polynomial exactness", polynomial_exactness()),
        ("trivial kernels", trivial_kernels()),
        ("population average equivalence", population_equivalence()),
        ("moment ODE", ode_properties()),
        ("SD reduction chain", sd_chain()),
    ];

    let mut failed = 0;
    for (k, (name, outcome)) in criteria.iter().enumerate() {
        let status = if outcome.pass { "PASS" } else { "FAIL" };
        println!("[{status}] {:>2}. {name}: {}", k + 1, outcome.detail);
        for note in &outcome.notes {
            println!("          note: {note}");
        }
        failed += usize::from(!outcome.pass);
    }
    println!(
        "{} of {} criteria passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        started.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
