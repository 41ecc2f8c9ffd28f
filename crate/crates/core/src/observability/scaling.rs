//! Empirical growth of the truncated observability constant as `eps -> 0`.

use serde::{Deserialize, Serialize};

use super::gramian::observability_constant;
use crate::error::{invalid, require_ball_radius, Error, Result};

pub const LAW_LOG_OVER_LOGLOG: &str = "loglogC_vs_log_over_loglog";
pub const LAW_LOG: &str = "loglogC_vs_log";

/// Least-squares line `y = slope * x + intercept` with RMS residual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub law: String,
    pub slope: f64,
    pub intercept: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub eps: f64,
    pub inv_eps: f64,
    pub constant: f64,
    pub argmin_n: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    #[serde(rename = "N_max")]
    pub n_max: u64,
    pub rows: Vec<ScalingRow>,
    pub fits: Vec<ScalingFit>,
    /// Laws that could not be fit, with the reason.
    pub skipped: Vec<String>,
}

impl ScalingReport {
    /// Constants are nonincreasing as `eps` grows.
    pub fn monotone(&self) -> bool {
        let mut rows: Vec<&ScalingRow> = self.rows.iter().collect();
        rows.sort_by(|a, b| a.eps.total_cmp(&b.eps));
        rows.windows(2).all(|w| w[1].constant <= w[0].constant)
    }
}

/// Returns `(slope, intercept)`.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::DegenerateFit(format!(
            "need >= 2 paired points, got {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if !(sxx > 1e-14 * (1.0 + mx * mx) * n) {
        return Err(Error::DegenerateFit(format!(
            "abscissae have zero variance (all near {mx})"
        )));
    }
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

fn fit(law: &str, xs: &[f64], ys: &[f64]) -> Result<ScalingFit> {
    let (slope, intercept) = least_squares(xs, ys)?;
    let ss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    Ok(ScalingFit {
        law: law.to_string(),
        slope,
        intercept,
        residual: (ss / xs.len() as f64).sqrt(),
    })
}

/// Computes the truncated constant for each `eps` and fits `ln ln C` against
/// `ln(1/eps) / ln ln(1/eps)` and against `ln(1/eps)`.
///
/// The first law needs `ln ln(1/eps) > 0`, i.e. `eps < 1/e`; it is skipped
/// when any `eps` falls outside that range.
pub fn scaling_study(eps_list: &[f64], n_max: u64) -> Result<ScalingReport> {
    if eps_list.len() < 4 {
        return Err(invalid(format!(
            "need at least 4 eps values, got {}",
            eps_list.len()
        )));
    }
    for &eps in eps_list {
        require_ball_radius("eps", eps)?;
    }
    let log_inv: Vec<f64> = eps_list.iter().map(|e| (1.0 / e).ln()).collect();
    let spread = log_inv.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - log_inv.iter().copied().fold(f64::INFINITY, f64::min);
    if spread == 0.0 {
        return Err(Error::DegenerateFit(format!(
            "all eps values equal {}; a trend cannot be fit from one point",
            eps_list[0]
        )));
    }

    let rows: Vec<ScalingRow> = eps_list
        .iter()
        .map(|&eps| {
            let rep = observability_constant(eps, n_max)?;
            Ok(ScalingRow {
                eps,
                inv_eps: 1.0 / eps,
                constant: rep.constant,
                argmin_n: rep.argmin_n,
            })
        })
        .collect::<Result<_>>()?;
    let ys: Vec<f64> = rows.iter().map(|r| r.constant.ln().ln()).collect();

    let mut fits = Vec::new();
    let mut skipped = Vec::new();
    if log_inv.iter().all(|&l| l > 1.0) {
        let xs: Vec<f64> = log_inv.iter().map(|l| l / l.ln()).collect();
        fits.push(fit(LAW_LOG_OVER_LOGLOG, &xs, &ys)?);
    } else {
        skipped.push(format!("{LAW_LOG_OVER_LOGLOG}: requires every eps < 1/e"));
    }
    fits.push(fit(LAW_LOG, &log_inv, &ys)?);

    Ok(ScalingReport {
        n_max,
        rows,
        fits,
        skipped,
    })
}
