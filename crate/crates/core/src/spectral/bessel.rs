//! Bessel function of the first kind of order one.
//!
//! Ascending power series up to `|x| = 12`, Hankel's asymptotic expansion
//! beyond. The series loses about four digits to cancellation at the switch
//! point and the asymptotic expansion's smallest term there is near `e^{-24}`,
//! so both branches stay within about `1e-10` relative away from the zeros.

use std::f64::consts::{FRAC_PI_4, PI};

const SERIES_LIMIT: f64 = 12.0;

pub fn bessel_j1(x: f64) -> f64 {
    if x < 0.0 {
        return -bessel_j1(-x);
    }
    if x <= SERIES_LIMIT {
        series(x)
    } else {
        hankel(x)
    }
}

fn series(x: f64) -> f64 {
    let half = 0.5 * x;
    let q = -half * half;
    let mut term = half;
    let mut sum = term;
    for k in 1..80 {
        term *= q / (k as f64 * (k + 1) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

fn hankel(x: f64) -> f64 {
    const MU: f64 = 4.0; // 4 nu^2 with nu = 1
    let mut p = 1.0;
    let mut q = 0.0;
    // a_k / x^k, with a_k = prod_{j<=k} (mu - (2j-1)^2) / (8 j)
    let mut term: f64 = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..100 {
        let odd = (2 * k - 1) as f64;
        term *= (MU - odd * odd) / (8.0 * k as f64 * x);
        if term.abs() >= prev {
            break;
        }
        prev = term.abs();
        // P collects even k with sign (-1)^(k/2), Q odd k with sign (-1)^((k-1)/2)
        match k % 4 {
            0 => p += term,
            1 => q += term,
            2 => p -= term,
            _ => q -= term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    let omega = x - 3.0 * FRAC_PI_4;
    (2.0 / (PI * x)).sqrt() * (p * omega.cos() - q * omega.sin())
}
