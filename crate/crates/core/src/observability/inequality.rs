//! Time-integrated observation over one period, checked sample by sample.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gramian::{eigenspace_gramian, observability_constant, ObservabilityReport};
use crate::error::{invalid, Result};
use crate::spectral::{mode_norm_sq, propagate, BallRegion, FourierField2D, Mode, MomentTable};
use crate::PERIOD;

/// Smallest accepted number of time panels.
pub const MIN_QUAD_POINTS: usize = 64;

/// Relative slack allowed on `||u||^2 <= C * integral`.
pub const INEQUALITY_SLACK: f64 = 1e-6;

/// Cross-eigenspace time averages below this, relative to `||Pi_N u|| ||Pi_M u||`, count as zero.
pub const CROSS_TOL: f64 = 1e-8;

/// Period integrals of `<e^{it Delta} Pi_N u, e^{it Delta} Pi_M u>_{L^2(Omega)}` for every pair of shells.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodBlocks {
    /// Shells `N` present in `u`, ascending.
    pub shells: Vec<u64>,
    /// `||Pi_N u||` per shell.
    pub shell_norms: Vec<f64>,
    /// Row-major `shells.len()^2` block integrals.
    pub blocks: Vec<Complex64>,
}

impl PeriodBlocks {
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.blocks[i * self.shells.len() + j]
    }

    /// `int_0^{1/2pi} ||e^{it Delta} u||^2_Omega dt`.
    pub fn total(&self) -> f64 {
        self.blocks.iter().map(|b| b.re).sum()
    }

    /// Largest `|block_{NM}| / (PERIOD ||Pi_N u|| ||Pi_M u||)` over `N != M`, or 0 with one shell.
    pub fn max_cross_relative(&self) -> f64 {
        let s = self.shells.len();
        let mut worst: f64 = 0.0;
        for i in 0..s {
            for j in 0..s {
                if i == j {
                    continue;
                }
                let scale = PERIOD * self.shell_norms[i] * self.shell_norms[j];
                if scale > 0.0 {
                    worst = worst.max(self.get(i, j).norm() / scale);
                }
            }
        }
        worst
    }
}

fn check_quad_points(quad_points: usize, max_shell: u64) -> Result<()> {
    if quad_points < MIN_QUAD_POINTS {
        return Err(invalid(format!(
            "quad_points must be >= {MIN_QUAD_POINTS}, got {quad_points}"
        )));
    }
    if (quad_points as u64) <= 2 * max_shell {
        return Err(invalid(format!(
            "quad_points = {quad_points} must exceed 2 * {max_shell} to integrate the time dependence exactly"
        )));
    }
    Ok(())
}

/// Integrates the eigenspace blocks of `||e^{it Delta} u||^2_Omega` over one
/// period with the `quad_points`-panel trapezoid rule.
///
/// The integrand is a trigonometric polynomial in `t` whose frequencies are
/// differences of shell indices; with more than twice the largest shell as
/// panels the periodic trapezoid rule is exact up to roundoff.
pub fn period_blocks(
    u: &FourierField2D,
    region: &BallRegion,
    quad_points: usize,
) -> Result<PeriodBlocks> {
    let support: Vec<(usize, Mode)> = u
        .modes()
        .enumerate()
        .filter(|(_, (_, c))| *c != Complex64::new(0.0, 0.0))
        .map(|(i, (k, _))| (i, k))
        .collect();
    let mut shells: Vec<u64> = support.iter().map(|&(_, k)| mode_norm_sq(k)).collect();
    shells.sort_unstable();
    shells.dedup();
    check_quad_points(quad_points, shells.last().copied().unwrap_or(0))?;

    let shell_of: Vec<usize> = support
        .iter()
        .map(|&(_, k)| {
            shells
                .binary_search(&mode_norm_sq(k))
                .expect("shell listed")
        })
        .collect();
    let s = shells.len();
    let mut shell_norms = vec![0.0; s];
    for (&(_, k), &g) in support.iter().zip(&shell_of) {
        shell_norms[g] += u.get(k).norm_sqr();
    }
    shell_norms.iter_mut().for_each(|x| *x = x.sqrt());

    let table = MomentTable::new(region, u.cutoff());
    let weight = PERIOD / quad_points as f64;
    let mut blocks = vec![Complex64::new(0.0, 0.0); s * s];
    for j in 0..quad_points {
        let ut = propagate(u, j as f64 * weight);
        let coeffs: Vec<Complex64> = support.iter().map(|&(_, k)| ut.get(k)).collect();
        for (a, &(_, k)) in support.iter().enumerate() {
            let ca = coeffs[a];
            let ga = shell_of[a];
            for (b, &(_, l)) in support.iter().enumerate() {
                let term = ca * coeffs[b].conj() * table.get((k.0 - l.0, k.1 - l.1));
                blocks[ga * s + shell_of[b]] += term * weight;
            }
        }
    }
    Ok(PeriodBlocks {
        shells,
        shell_norms,
        blocks,
    })
}

/// `int_0^{1/2pi} ||e^{it Delta} u||^2_{L^2(Omega)} dt`.
pub fn period_integral(u: &FourierField2D, region: &BallRegion, quad_points: usize) -> Result<f64> {
    Ok(period_blocks(u, region, quad_points)?.total())
}

/// The state attaining the truncated constant: the minimizing eigenvector of
/// the arg-min eigenspace Gramian, as a unit-norm field.
pub fn extremal_state(eps: f64, n_max: u64) -> Result<(FourierField2D, ObservabilityReport)> {
    let report = observability_constant(eps, n_max)?;
    let g = eigenspace_gramian(report.argmin_n, eps)?;
    let eig = g.eigen()?;
    let cutoff = n_max.isqrt() as u32;
    let field = FourierField2D::from_modes(
        cutoff,
        g.basis()
            .modes()
            .iter()
            .zip(&eig.vectors[0])
            .map(|(&k, &c)| (k, Complex64::new(c, 0.0))),
    )?;
    Ok((field, report))
}

/// Random field supported on `|k|^2 <= n_max`, with real and imaginary parts uniform in `[-1, 1]`.
pub fn random_truncated_field<R: Rng>(n_max: u64, rng: &mut R) -> FourierField2D {
    let cutoff = n_max.isqrt() as u32;
    let mut u = FourierField2D::zeros(cutoff);
    let c = cutoff as i64;
    for kx in -c..=c {
        for ky in -c..=c {
            if mode_norm_sq((kx, ky)) <= n_max {
                let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                u.set((kx, ky), z).expect("mode within cutoff");
            }
        }
    }
    u
}

/// Coefficient dump of a failing sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub index: usize,
    pub norm_sq: f64,
    pub integral: f64,
    /// `||u||^2 / (C * integral)`; at most 1 when the inequality holds.
    pub ratio: f64,
    pub max_cross_relative: f64,
    /// `(kx, ky, re, im)` for every nonzero mode.
    pub coeffs: Vec<(i64, i64, f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub eps: f64,
    #[serde(rename = "N_max")]
    pub n_max: u64,
    pub n_samples: usize,
    pub seed: u64,
    pub quad_points: usize,
    pub constant: f64,
    pub max_ratio: f64,
    pub min_ratio: f64,
    pub max_cross_relative: f64,
    pub pass: bool,
    pub failures: Vec<SampleRecord>,
}

/// Draws `n_samples` random truncated states and checks
/// `||u||^2 <= C * int_0^{1/2pi} ||e^{it Delta} u||^2_Omega dt` for each, along
/// with the vanishing of every cross-eigenspace time average.
pub fn verify_inequality_samples(
    eps: f64,
    n_max: u64,
    n_samples: usize,
    seed: u64,
    quad_points: usize,
) -> Result<InequalityReport> {
    check_quad_points(quad_points, n_max)?;
    if n_samples == 0 {
        return Err(invalid("n_samples must be >= 1"));
    }
    let region = BallRegion::centered(eps)?;
    let constant = observability_constant(eps, n_max)?.constant;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<FourierField2D> = (0..n_samples)
        .map(|_| random_truncated_field(n_max, &mut rng))
        .collect();

    let records: Vec<SampleRecord> = samples
        .par_iter()
        .enumerate()
        .map(|(index, u)| {
            let blocks = period_blocks(u, &region, quad_points)?;
            let norm_sq = u.norm_sq();
            let integral = blocks.total();
            Ok(SampleRecord {
                index,
                norm_sq,
                integral,
                ratio: norm_sq / (constant * integral),
                max_cross_relative: blocks.max_cross_relative(),
                coeffs: u
                    .modes()
                    .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
                    .map(|(k, c)| (k.0, k.1, c.re, c.im))
                    .collect(),
            })
        })
        .collect::<Result<_>>()?;

    let max_ratio = records
        .iter()
        .map(|r| r.ratio)
        .fold(f64::NEG_INFINITY, f64::max);
    let min_ratio = records
        .iter()
        .map(|r| r.ratio)
        .fold(f64::INFINITY, f64::min);
    let max_cross_relative = records
        .iter()
        .map(|r| r.max_cross_relative)
        .fold(0.0, f64::max);
    let failures: Vec<SampleRecord> = records
        .into_iter()
        .filter(|r| {
            r.norm_sq > constant * r.integral * (1.0 + INEQUALITY_SLACK)
                || r.max_cross_relative > CROSS_TOL
        })
        .collect();

    Ok(InequalityReport {
        eps,
        n_max,
        n_samples,
        seed,
        quad_points,
        constant,
        max_ratio,
        min_ratio,
        max_cross_relative,
        pass: failures.is_empty(),
        failures,
    })
}
