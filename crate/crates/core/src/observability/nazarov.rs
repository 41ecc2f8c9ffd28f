//! Extremal ratios `sup_p ||p||^2_{T^1} / ||p||^2_E` over trigonometric
//! polynomials with a fixed frequency set.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{hermitian_eigen, HermitianMatrix};

/// Distinct integer frequencies, stored ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencySet(Vec<i64>);

impl FrequencySet {
    pub fn new(mut freqs: Vec<i64>) -> Result<Self> {
        if freqs.is_empty() {
            return Err(invalid("frequency set must be nonempty"));
        }
        freqs.sort_unstable();
        if freqs.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid("frequencies must be distinct"));
        }
        Ok(Self(freqs))
    }

    /// `{0, 1, ..., n - 1}`.
    pub fn consecutive(n: usize) -> Result<Self> {
        Self::new((0..n as i64).collect())
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Arc `[start, start + length)` of `T^1 = R/Z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval1D {
    start: f64,
    length: f64,
}

impl Interval1D {
    pub fn new(start: f64, length: f64) -> Result<Self> {
        if !start.is_finite() {
            return Err(invalid(format!("start must be finite, got {start}")));
        }
        if !(length > 0.0 && length < 1.0) {
            return Err(invalid(format!("measure must lie in (0, 1), got {length}")));
        }
        Ok(Self {
            start: start.rem_euclid(1.0),
            length,
        })
    }

    /// The arc running counterclockwise from `a` to `b`.
    pub fn from_endpoints(a: f64, b: f64) -> Result<Self> {
        Self::new(a, (b - a).rem_euclid(1.0))
    }

    /// `(c - length/2, c + length/2)`.
    pub fn centered(c: f64, length: f64) -> Result<Self> {
        Self::new(c - length / 2.0, length)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn end(&self) -> f64 {
        (self.start + self.length).rem_euclid(1.0)
    }

    pub fn measure(&self) -> f64 {
        self.length
    }

    /// `int_E e^{2 pi i d x} dx`.
    pub fn character_integral(&self, d: i64) -> Complex64 {
        if d == 0 {
            return Complex64::new(self.length, 0.0);
        }
        let d = d as f64;
        let mid = self.start + self.length / 2.0;
        Complex64::from_polar((PI * d * self.length).sin() / (PI * d), 2.0 * PI * d * mid)
    }
}

/// `(G_E)_{jk} = int_E e^{2 pi i (s_k - s_j) x} dx`.
pub fn interval_gram(freqs: &FrequencySet, e: &Interval1D) -> HermitianMatrix {
    let s = freqs.as_slice();
    HermitianMatrix::from_upper(s.len(), |j, k| e.character_integral(s[k] - s[j]))
}

/// `1 / lambda_min(G_E)`; the full-circle Gram matrix is the identity.
pub fn nazarov_ratio(freqs: &FrequencySet, e: &Interval1D) -> Result<f64> {
    if freqs.len() == 1 {
        return Ok(1.0 / e.measure());
    }
    let lambda_min = hermitian_eigen(&interval_gram(freqs, e))?.values[0];
    if lambda_min <= 0.0 {
        return Err(Error::Numerical(format!(
            "interval Gram matrix lost positivity (lambda_min = {lambda_min:e}) for n = {}",
            freqs.len()
        )));
    }
    Ok(1.0 / lambda_min)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NazarovRow {
    pub n: usize,
    pub ratio: f64,
    pub log_ratio: f64,
}

/// Growth of the ratio for `{0, ..., n-1}` on a centered interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NazarovGrowth {
    pub measure: f64,
    pub rows: Vec<NazarovRow>,
    /// `log ratio(n) - log ratio(n - 1)` for `n = 2..=n_max`.
    pub increments: Vec<f64>,
    /// Smallest `C` with every increment `<= log(C / |E|)`.
    pub c_hat: f64,
    /// Least-squares slope of `log ratio` against `n`.
    pub slope: f64,
    pub increasing: bool,
}

pub fn nazarov_growth(measure: f64, n_max: usize) -> Result<NazarovGrowth> {
    if n_max < 2 {
        return Err(invalid(format!("n_max must be >= 2, got {n_max}")));
    }
    let e = Interval1D::centered(0.0, measure)?;
    let rows: Vec<NazarovRow> = (1..=n_max)
        .map(|n| {
            let ratio = nazarov_ratio(&FrequencySet::consecutive(n)?, &e)?;
            Ok(NazarovRow {
                n,
                ratio,
                log_ratio: ratio.ln(),
            })
        })
        .collect::<Result<_>>()?;
    let increments: Vec<f64> = rows
        .windows(2)
        .map(|w| w[1].log_ratio - w[0].log_ratio)
        .collect();
    let max_inc = increments.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let xs: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.log_ratio).collect();
    let (slope, _) = super::scaling::least_squares(&xs, &ys)?;

    Ok(NazarovGrowth {
        measure,
        increasing: increments.iter().all(|&d| d > 0.0),
        c_hat: measure * max_inc.exp(),
        slope,
        increments,
        rows,
    })
}
