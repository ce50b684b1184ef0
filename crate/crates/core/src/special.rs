//! Dawson integral `F(x) = exp(-x^2) int_0^x exp(t^2) dt`.
//!
//! For `|x| <= 6` the positive-term series
//! `F(x) = exp(-x^2) sum_n x^(2n+1) / (n! (2n+1))` is summed directly; it has
//! no cancellation and the largest term stays below `exp(36)`. Beyond that the
//! asymptotic series `F(x) ~ 1/(2x) sum_k (2k-1)!! / (2x^2)^k` is truncated at
//! its smallest term, which is below `exp(-36)` relative.

use std::f64::consts::PI;

const SERIES_LIMIT: f64 = 6.0;

pub fn dawson(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return -dawson(-x);
    }
    if x == 0.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return 0.0;
    }
    if x <= SERIES_LIMIT {
        power_series(x)
    } else {
        asymptotic(x)
    }
}

fn power_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut a = x; // x^(2n+1) / n!
    let mut sum = x;
    let mut n = 0usize;
    loop {
        n += 1;
        a *= x2 / n as f64;
        let term = a / (2 * n + 1) as f64;
        sum += term;
        if n as f64 > x2 && term < sum * 1e-17 {
            break;
        }
    }
    sum * (-x2).exp()
}

fn asymptotic(x: f64) -> f64 {
    let inv = 1.0 / (2.0 * x * x);
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0usize;
    loop {
        let next = term * (2 * k + 1) as f64 * inv;
        if next >= term || next < sum * 1e-17 {
            break;
        }
        sum += next;
        term = next;
        k += 1;
    }
    sum / (2.0 * x)
}

/// `exp(-x^2) erfi(x)`, finite for every real `x`.
pub fn scaled_erfi(x: f64) -> f64 {
    2.0 / PI.sqrt() * dawson(x)
}
