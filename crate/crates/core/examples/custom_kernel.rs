//! Average kernel and error estimate for a user-supplied kernel.
//!
//! `cargo run -p coagkernel --example custom_kernel`

use coagkernel::{
    average_kernel, build_trace, estimate_remainder, gauss_laguerre_rule, Degree, FitMethod, Kernel,
};

fn main() -> coagkernel::Result<()> {
    // (v^(1/3) + w^(1/3))^2, a geometric cross-section, homogeneous of degree 2/3
    let kernel = Kernel::custom("cross-section", Degree::new(2, 3), |a, b| {
        (a.cbrt() + b.cbrt()).powi(2)
    })?;

    let rule = gauss_laguerre_rule(99)?;
    let ak = average_kernel(&kernel, &rule)?;
    println!("average kernel: {}", ak.expression(4));

    let trace = build_trace(&kernel, 80, 100)?;
    let estimate = estimate_remainder(&trace, 10, FitMethod::LeastSquares)?;
    let (n, q) = trace.last_q().expect("non-empty trace");
    match estimate.remainder {
        Some(r) => println!("Q_{n} = {q:.6} ± {r:.1e} (C = {:.3})", estimate.slope),
        None => println!(
            "Q_{n} = {q:.6}; slope {:.3} too shallow for a remainder",
            estimate.slope
        ),
    }
    Ok(())
}
