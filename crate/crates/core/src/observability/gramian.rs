use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{require_ball_radius, Error, Result};
use crate::lattice::r2_representations;
use crate::linalg::{jacobi_eigen, SymmetricEigen, SymmetricMatrix};
use crate::spectral::{ball_coeff, Mode};

/// The modes `{k : |k|^2 = N}` spanning the eigenspace of `-Delta` for `4 pi^2 N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenspaceBasis {
    n: u64,
    modes: Vec<Mode>,
}

impl EigenspaceBasis {
    pub fn new(n: u64) -> Result<Self> {
        let modes = r2_representations(n);
        if modes.is_empty() {
            return Err(Error::EmptyEigenspace(n));
        }
        Ok(Self { n, modes })
    }

    /// The shell index `N = |k|^2`.
    pub fn shell(&self) -> u64 {
        self.n
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn rank(&self) -> usize {
        self.modes.len()
    }

    /// `lambda^2 = 4 pi^2 N`.
    pub fn eigenvalue(&self) -> f64 {
        4.0 * std::f64::consts::PI.powi(2) * self.n as f64
    }
}

/// `G_{kl} = <1_{B(0,eps)} e_l, e_k>` over one eigenspace. Real symmetric
/// because the ball indicator is real and even.
#[derive(Debug, Clone, PartialEq)]
pub struct GramianMatrix {
    eps: f64,
    basis: EigenspaceBasis,
    matrix: SymmetricMatrix,
}

impl GramianMatrix {
    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn basis(&self) -> &EigenspaceBasis {
        &self.basis
    }

    pub fn matrix(&self) -> &SymmetricMatrix {
        &self.matrix
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix.get(i, j)
    }

    pub fn rank(&self) -> usize {
        self.basis.rank()
    }

    pub fn eigen(&self) -> Result<SymmetricEigen> {
        jacobi_eigen(&self.matrix)
    }
}

/// Gramian of the ball indicator on the eigenspace `|k|^2 = n`.
pub fn eigenspace_gramian(n: u64, eps: f64) -> Result<GramianMatrix> {
    require_ball_radius("eps", eps)?;
    let basis = EigenspaceBasis::new(n)?;
    let modes = basis.modes();
    let matrix = SymmetricMatrix::from_upper(modes.len(), |i, j| {
        let (k, l) = (modes[i], modes[j]);
        ball_coeff(eps, (k.0 - l.0, k.1 - l.1))
    });
    Ok(GramianMatrix { eps, basis, matrix })
}

/// Smallest eigenvalue of `g`.
pub fn min_eigenvalue(g: &GramianMatrix) -> Result<f64> {
    Ok(g.eigen()?.values[0])
}

/// One row of an [`ObservabilityReport`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenRow {
    #[serde(rename = "N")]
    pub n: u64,
    pub rank: usize,
    pub lambda_min: f64,
}

/// Per-eigenspace minimal Gramian eigenvalues and the sharp observability
/// constant on `span{e_k : |k|^2 <= N_max}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservabilityReport {
    pub eps: f64,
    #[serde(rename = "N_max")]
    pub n_max: u64,
    pub rows: Vec<EigenRow>,
    /// Shell attaining the smallest `lambda_min`.
    pub argmin_n: u64,
    /// `2 pi / min lambda_min`.
    pub constant: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit: Option<super::scaling::ScalingFit>,
}

/// Truncated observability constant over one full period.
///
/// Cross-eigenspace terms integrate to zero over `[0, 1/(2 pi)]`, so
/// `int_0^{1/2pi} ||e^{it Delta} u||^2_Omega dt = (1/2pi) sum_N <G_N c_N, c_N>`
/// and the best constant is `2 pi / min_N lambda_min(G_N)`.
pub fn observability_constant(eps: f64, n_max: u64) -> Result<ObservabilityReport> {
    require_ball_radius("eps", eps)?;
    let shells: Vec<u64> = (0..=n_max)
        .filter(|&n| crate::lattice::r2_count(n) > 0)
        .collect();
    let rows: Vec<EigenRow> = shells
        .par_iter()
        .map(|&n| {
            let g = eigenspace_gramian(n, eps)?;
            Ok(EigenRow {
                n,
                rank: g.rank(),
                lambda_min: min_eigenvalue(&g)?,
            })
        })
        .collect::<Result<_>>()?;

    let argmin = rows
        .iter()
        .min_by(|a, b| a.lambda_min.total_cmp(&b.lambda_min))
        .expect("N = 0 is always present");
    if argmin.lambda_min <= 0.0 {
        return Err(Error::Numerical(format!(
            "Gramian for N = {} has non-positive minimal eigenvalue {:e}",
            argmin.n, argmin.lambda_min
        )));
    }
    let constant = std::f64::consts::TAU / argmin.lambda_min;
    let argmin_n = argmin.n;
    Ok(ObservabilityReport {
        eps,
        n_max,
        rows,
        argmin_n,
        constant,
        fit: None,
    })
}
