//! The bound constant for the standardized log odds ratio.
//!
//! The standardized log odds ratio `x / (4·cosh(x/4))` attains its largest
//! possible magnitude at the root of `x·tanh(x/4) = 4`. Substituting
//! `y = x/4` reduces the stationarity condition to `y·tanh(y) = 1`, and the
//! maximum value itself is `y*/cosh(y*)` — the Laplace Limit Constant, also
//! known as the convergence radius of the Kepler-equation power series.
//!
//! The constant is computed once, at first use, by safeguarded Newton
//! iteration, and cross-checked against an independently sourced reference
//! value so a typo in either the solver or the literal is caught immediately.

use std::sync::OnceLock;

/// Reference value of the bound, used only as a cross-check on the solver.
const REFERENCE_LLC: f64 = 0.662743419349182;

/// Solver/reference agreement required at initialization.
const CROSS_CHECK_TOL: f64 = 1e-12;

fn solve() -> (f64, f64) {
    // g(y) = y·tanh(y) − 1 is strictly increasing for y > 0 with a sign
    // change on [1, 2]; Newton from y = 1 with a bisection safeguard.
    let (mut lo, mut hi) = (1.0_f64, 2.0_f64);
    let mut y = 1.0_f64;
    for _ in 0..64 {
        let g = y * y.tanh() - 1.0;
        if g.abs() < 1e-15 {
            break;
        }
        if g < 0.0 {
            lo = y;
        } else {
            hi = y;
        }
        let sech = 1.0 / y.cosh();
        let dg = y.tanh() + y * sech * sech;
        let next = y - g / dg;
        // Fall back to bisection whenever Newton leaves the bracket.
        y = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
    }
    let llc = y / y.cosh();
    assert!(
        (llc - REFERENCE_LLC).abs() <= CROSS_CHECK_TOL,
        "bound solver disagrees with reference constant: {llc} vs {REFERENCE_LLC}"
    );
    (llc, 4.0 * y)
}

fn cached() -> &'static (f64, f64) {
    static CELL: OnceLock<(f64, f64)> = OnceLock::new();
    CELL.get_or_init(solve)
}

/// Largest possible |standardized log odds ratio|: max over x of
/// `x / (4·cosh(x/4))` ≈ 0.6627434193491815.
pub fn llc_constant() -> f64 {
    cached().0
}

/// The log odds ratio at which the bound is attained: the root of
/// `x·tanh(x/4) = 4` ≈ 4.798714561030935. The normalized effect is strictly
/// monotone in the log odds ratio only inside `(-llc_maximizer(), llc_maximizer())`.
pub fn llc_maximizer() -> f64 {
    cached().1
}
