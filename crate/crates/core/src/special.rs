//! Special functions needed by the kernels and the oracles.
//!
//! Gamma comes from `statrs`; the Hurwitz zeta function is summed directly
//! with an Euler–Maclaurin tail.

use std::f64::consts::PI;

use crate::error::{param, Result};

pub fn gamma(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

/// Even-index Bernoulli numbers `B_2, B_4, ..., B_30`.
const BERNOULLI_EVEN: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

/// Relative size at which the Euler–Maclaurin correction series is cut.
const EM_TOLERANCE: f64 = 1e-17;

/// Hurwitz zeta `ζ(s, a) = Σ_{k≥0} (k + a)^{-s}` for real `s > 1`, `a > 0`.
///
/// The first terms are summed directly until `k + a ≥ max(10, s)`; the tail is
/// the integral plus Bernoulli corrections, stopped once a correction drops
/// below `1e-17` of the running sum.
pub fn hurwitz_zeta(s: f64, a: f64) -> Result<f64> {
    if !(s > 1.0) || !s.is_finite() {
        return Err(param("s", format!("Hurwitz zeta needs s > 1, got {s}")));
    }
    if !(a > 0.0) || !a.is_finite() {
        return Err(param("a", format!("Hurwitz zeta needs a > 0, got {a}")));
    }
    let start = 10.0_f64.max(s + 2.0);
    let n = (start - a).ceil().max(0.0) as usize;
    let mut head = 0.0;
    // summed smallest-first
    for k in (0..n).rev() {
        head += (k as f64 + a).powf(-s);
    }
    let x = n as f64 + a;
    let mut tail = x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s);
    // rising factorial (s)_{2j-1} / (2j)! * x^{-s-2j+1}
    let mut rising = s; // (s)_1
    let mut fact = 2.0; // (2j)!
    let mut xpow = x.powf(-s - 1.0);
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        let term = b / fact * rising * xpow;
        tail += term;
        if term.abs() < EM_TOLERANCE * (head + tail).abs() {
            break;
        }
        let m = 2.0 * (j as f64 + 1.0); // current 2j
        rising *= (s + m - 1.0) * (s + m);
        fact *= (m + 1.0) * (m + 2.0);
        xpow /= x * x;
    }
    Ok(head + tail)
}

/// Riemann zeta for real non-integer `s` (or `s > 1`), using the reflection
/// formula on the left half line.
pub fn riemann_zeta(s: f64) -> Result<f64> {
    if s > 1.0 {
        return hurwitz_zeta(s, 1.0);
    }
    if s == s.round() {
        return Err(param("s", format!("integer argument {s} not supported")));
    }
    let reflected = hurwitz_zeta(1.0 - s, 1.0)?;
    Ok(2f64.powf(s) * PI.powf(s - 1.0) * (0.5 * PI * s).sin() * gamma(1.0 - s) * reflected)
}

/// `Σ_{k<n} x^k / Γ(αk + β)` with terms formed in log space.
pub fn mittag_leffler_series(alpha: f64, beta: f64, x: f64, terms: usize) -> f64 {
    let mut sum = 0.0;
    if x == 0.0 {
        return 1.0 / gamma(beta);
    }
    let lx = x.abs().ln();
    for k in 0..terms {
        let arg = alpha * k as f64 + beta;
        let mag = (k as f64 * lx - ln_gamma(arg)).exp();
        let sign = if x < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
        sum += sign * mag;
    }
    sum
}
