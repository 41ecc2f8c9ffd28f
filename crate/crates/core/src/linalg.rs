//! Small dense symmetric and Hermitian eigenproblems.
//!
//! Eigenvalues come from cyclic Jacobi sweeps. A Hermitian matrix `A + iB` is
//! handled through its real symmetric embedding `[[A, -B], [B, A]]`, whose
//! spectrum is that of `A + iB` with every eigenvalue doubled.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Maximum number of cyclic sweeps before giving up.
pub const MAX_SWEEPS: usize = 50;

/// Residual off-diagonal norm, relative to the Frobenius norm, accepted at convergence.
pub const JACOBI_TOL: f64 = 1e-12;

/// Dense real symmetric matrix in row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    /// Fills from `f(i, j)` for `i <= j` and mirrors.
    pub fn from_upper(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                m.data[i * n + j] = v;
                m.data[j * n + i] = v;
            }
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        Self::from_upper(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    fn set_sym(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    s += self.get(i, j).powi(2);
                }
            }
        }
        s.sqrt()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }
}

/// Eigenpairs sorted by ascending eigenvalue; `vectors[i]` belongs to `values[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub sweeps: usize,
}

/// Cyclic Jacobi eigendecomposition.
///
/// A rotation is applied whenever `|a_pq|` exceeds machine precision relative
/// to `sqrt(|a_pp a_qq|)`, which keeps small eigenvalues of positive definite
/// matrices accurate. Iteration stops after a sweep with no rotations.
pub fn jacobi_eigen(matrix: &SymmetricMatrix) -> Result<SymmetricEigen> {
    let n = matrix.n;
    let mut a = matrix.clone();
    let mut v = SymmetricMatrix::identity(n).data;
    let scale = matrix.frobenius_norm();

    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                if apq.abs() <= f64::EPSILON * (app * aqq).abs().sqrt()
                    || apq.abs() < f64::MIN_POSITIVE
                {
                    if apq != 0.0 {
                        a.set_sym(p, q, 0.0);
                    }
                    continue;
                }
                rotated = true;
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                a.data[p * n + p] = app - t * apq;
                a.data[q * n + q] = aqq + t * apq;
                a.set_sym(p, q, 0.0);
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a.get(r, p);
                    let arq = a.get(r, q);
                    a.set_sym(r, p, arp - s * (arq + tau * arp));
                    a.set_sym(r, q, arq + s * (arp - tau * arq));
                }
                for r in 0..n {
                    let vrp = v[r * n + p];
                    let vrq = v[r * n + q];
                    v[r * n + p] = vrp - s * (vrq + tau * vrp);
                    v[r * n + q] = vrq + s * (vrp - tau * vrq);
                }
            }
        }
        sweeps += 1;
        if !rotated {
            break;
        }
        if sweeps >= MAX_SWEEPS {
            let off_norm = a.off_diagonal_norm();
            if off_norm <= JACOBI_TOL * scale {
                break;
            }
            return Err(Error::NoConvergence { sweeps, off_norm });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(i, i).total_cmp(&a.get(j, j)));
    let values = order.iter().map(|&i| a.get(i, i)).collect();
    let vectors = order
        .iter()
        .map(|&j| (0..n).map(|r| v[r * n + j]).collect())
        .collect();
    Ok(SymmetricEigen {
        values,
        vectors,
        sweeps,
    })
}

/// Dense Hermitian matrix in row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl HermitianMatrix {
    /// Fills from `f(i, j)` for `i <= j`; the lower triangle is the conjugate
    /// mirror and the diagonal keeps only its real part.
    pub fn from_upper(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                if i == j {
                    data[i * n + i] = Complex64::new(v.re, 0.0);
                } else {
                    data[i * n + j] = v;
                    data[j * n + i] = v.conj();
                }
            }
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    /// `[[Re H, -Im H], [Im H, Re H]]`.
    pub fn real_embedding(&self) -> SymmetricMatrix {
        let n = self.n;
        SymmetricMatrix::from_upper(2 * n, |i, j| {
            let (bi, ri) = (i / n, i % n);
            let (bj, rj) = (j / n, j % n);
            let h = self.get(ri, rj);
            match (bi, bj) {
                (0, 0) | (1, 1) => h.re,
                (0, 1) => -h.im,
                _ => h.im,
            }
        })
    }
}

/// Eigenpairs of a Hermitian matrix, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<Complex64>>,
}

/// Eigendecomposition through the real symmetric embedding.
///
/// Embedding eigenvalues come in equal pairs; one representative of each pair
/// is kept and its eigenvector `[x; y]` is folded back to `x + iy`.
pub fn hermitian_eigen(h: &HermitianMatrix) -> Result<HermitianEigen> {
    let n = h.n;
    let eig = jacobi_eigen(&h.real_embedding())?;
    let mut values = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    for k in 0..n {
        let idx = 2 * k;
        values.push(0.5 * (eig.values[idx] + eig.values[idx + 1]));
        let w = &eig.vectors[idx];
        let z: Vec<Complex64> = (0..n).map(|i| Complex64::new(w[i], w[n + i])).collect();
        let norm = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        vectors.push(z.into_iter().map(|c| c / norm).collect());
    }
    Ok(HermitianEigen { values, vectors })
}

/// Lower Cholesky factor of a symmetric matrix, or `None` if it is not
/// numerically positive definite.
pub fn cholesky(a: &SymmetricMatrix) -> Option<Vec<f64>> {
    let n = a.n;
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut d = a.get(j, j);
        for k in 0..j {
            d -= l[j * n + k] * l[j * n + k];
        }
        if d.is_nan() || d <= 0.0 {
            return None;
        }
        let d = d.sqrt();
        l[j * n + j] = d;
        for i in (j + 1)..n {
            let mut s = a.get(i, j);
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / d;
        }
    }
    Some(l)
}
