//! Independent reference computations used to cross-check the library.
//!
//! Nothing here calls into the routine it is meant to check.

#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::Rng;
use torus_obs::spectral::FourierField2D;

// Gauss-Kronrod 7/15 nodes on [-1, 1] (nonnegative half).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_0,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let x = h * XGK[i];
        let s = f(c - x) + f(c + x);
        kron += WGK[i] * s;
        if i % 2 == 1 {
            gauss += WG[i / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

fn adapt(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (v, err) = gk15(f, a, b);
    if err <= tol || depth == 0 {
        return v;
    }
    let m = 0.5 * (a + b);
    adapt(f, a, m, 0.5 * tol, depth - 1) + adapt(f, m, b, 0.5 * tol, depth - 1)
}

/// Adaptive Gauss-Kronrod integral of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    // start from a few panels so an oscillatory integrand cannot fool the first estimate
    let n = 8;
    let h = (b - a) / n as f64;
    (0..n)
        .map(|i| {
            adapt(
                &mut f,
                a + i as f64 * h,
                a + (i + 1) as f64 * h,
                tol / n as f64,
                40,
            )
        })
        .sum()
}

/// `int_{B(0, eps)} cos(2 pi m.x) dx` as an iterated 2-D quadrature.
///
/// The outer variable is `x = eps sin(phi)`, which removes the square-root
/// endpoint singularity of the chord length.
pub fn ball_coeff_quadrature(eps: f64, m: (i64, i64), tol: f64) -> f64 {
    let (m1, m2) = (m.0 as f64, m.1 as f64);
    integrate(
        |phi| {
            let x = eps * phi.sin();
            let w = eps * phi.cos();
            let inner = integrate(|y| (TAU * (m1 * x + m2 * y)).cos(), -w, w, tol * 1e-2);
            inner * w
        },
        -PI / 2.0,
        PI / 2.0,
        tol,
    )
}

/// `(n, m, err)` minimizing `|n alpha - m|` by scanning every `n`.
pub fn brute_rational_approx(alpha: f64, n_max: u64) -> (u64, i64, f64) {
    let mut best = (0, 0, f64::INFINITY);
    for n in 1..=n_max {
        let x = n as f64 * alpha;
        let m = x.round();
        let err = (x - m).abs();
        if err < best.2 {
            best = (n, m as i64, err);
        }
    }
    best
}

/// `(d(N), d_1(N), d_3(N))`: all divisors, and those congruent to 1 and 3 mod 4.
pub fn divisor_counts(n: u64) -> (u64, u64, u64) {
    let (mut d, mut d1, mut d3) = (0, 0, 0);
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            for q in if i * i == n { vec![i] } else { vec![i, n / i] } {
                d += 1;
                match q % 4 {
                    1 => d1 += 1,
                    3 => d3 += 1,
                    _ => {}
                }
            }
        }
        i += 1;
    }
    (d, d1, d3)
}

/// `4 (d_1 - d_3)`, with `r_2(0) = 1`.
pub fn r2_divisor_formula(n: u64) -> u64 {
    if n == 0 {
        return 1;
    }
    let (_, d1, d3) = divisor_counts(n);
    4 * (d1 - d3)
}

/// Torus distance from `(x, y)` to `(cx, cy)`.
pub fn torus_dist(x: f64, y: f64, cx: f64, cy: f64) -> f64 {
    let dx = (x - cx).rem_euclid(1.0);
    let dy = (y - cy).rem_euclid(1.0);
    dx.min(1.0 - dx).hypot(dy.min(1.0 - dy))
}

/// First sample `t = j * step` with the flow inside the closed ball `B(c, r)`.
pub fn dense_hit(
    x: (f64, f64),
    angle: f64,
    c: (f64, f64),
    r: f64,
    horizon: f64,
    step: f64,
) -> Option<f64> {
    let (vx, vy) = (angle.cos(), angle.sin());
    let n = (horizon / step).floor() as u64;
    (0..=n)
        .map(|j| j as f64 * step)
        .find(|&t| torus_dist(x.0 + t * vx, x.1 + t * vy, c.0, c.1) <= r)
}

/// Length of the chord the unit-speed line through `p` cuts from the nearest
/// copy of `B(0, r)`; zero when it misses.
pub fn chord_at(p: (f64, f64), angle: f64, r: f64) -> f64 {
    let (vx, vy) = (angle.cos(), angle.sin());
    let (mx, my) = (p.0.round(), p.1.round());
    let d = ((p.0 - mx) * vy - (p.1 - my) * vx).abs();
    if d >= r {
        0.0
    } else {
        2.0 * (r * r - d * d).sqrt()
    }
}

/// Angular windows `(center, half_width)` pairwise disjoint, checked over every pair.
pub fn windows_disjoint_brute(windows: &[(f64, f64)]) -> bool {
    for i in 0..windows.len() {
        for j in (i + 1)..windows.len() {
            let d = (windows[i].0 - windows[j].0).abs().rem_euclid(TAU);
            let d = d.min(TAU - d);
            if d < windows[i].1 + windows[j].1 {
                return false;
            }
        }
    }
    true
}

/// `int_{B(0, eps)} |u|^2` by midpoint rule on an `n x n` grid over `[-eps, eps]^2`.
pub fn grid_norm_on_ball(u: &FourierField2D, eps: f64, n: usize) -> f64 {
    let k = u.cutoff() as i64;
    let side = (2 * k + 1) as usize;
    let h = 2.0 * eps / n as f64;
    let coords: Vec<f64> = (0..n).map(|i| -eps + (i as f64 + 0.5) * h).collect();
    let phases: Vec<Vec<Complex64>> = coords
        .iter()
        .map(|&x| {
            (-k..=k)
                .map(|kk| Complex64::cis(TAU * kk as f64 * x))
                .collect()
        })
        .collect();
    let mut total = 0.0;
    for (ix, &x) in coords.iter().enumerate() {
        // partial sums over kx, one per ky
        let mut g = vec![Complex64::new(0.0, 0.0); side];
        for (a, kx) in (-k..=k).enumerate() {
            let ex = phases[ix][a];
            for (b, ky) in (-k..=k).enumerate() {
                g[b] += u.get((kx, ky)) * ex;
            }
        }
        for (iy, &y) in coords.iter().enumerate() {
            if x * x + y * y > eps * eps {
                continue;
            }
            let val: Complex64 = g.iter().zip(&phases[iy]).map(|(a, b)| a * b).sum();
            total += val.norm_sqr();
        }
    }
    total * h * h
}

fn solve(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(row, &r)| row.iter().copied().chain([r]).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        m.swap(col, piv);
        for row in (col + 1)..n {
            let f = m[row][col] / m[col][col];
            for c in col..=n {
                m[row][c] -= f * m[col][c];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = ((row + 1)..n).map(|c| m[row][c] * x[c]).sum();
        x[row] = (m[row][n] - s) / m[row][row];
    }
    x
}

/// Number of eigenvalues of symmetric `a` below `sigma`, from the signs of the
/// `LDL^T` pivots of `a - sigma I` (Sylvester's law of inertia).
fn count_below(a: &[Vec<f64>], sigma: f64) -> usize {
    let n = a.len();
    let mut l = vec![vec![0.0; n]; n];
    let mut d = vec![0.0; n];
    let mut neg = 0;
    for j in 0..n {
        let mut dj = a[j][j] - sigma;
        for k in 0..j {
            dj -= l[j][k] * l[j][k] * d[k];
        }
        if dj == 0.0 {
            dj = -f64::MIN_POSITIVE;
        }
        d[j] = dj;
        if dj < 0.0 {
            neg += 1;
        }
        for i in (j + 1)..n {
            let mut s = a[i][j];
            for k in 0..j {
                s -= l[i][k] * l[j][k] * d[k];
            }
            l[i][j] = s / dj;
        }
    }
    neg
}

/// Smallest eigenvalue of a symmetric matrix: inertia bisection brackets it,
/// then shifted inverse iteration from just below the bracket refines it.
pub fn min_eig_inverse_iteration(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let radius = (0..n)
        .map(|i| a[i].iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let (mut lo, mut hi) = (-radius - 1.0, radius + 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if count_below(a, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-9 * radius.max(1e-300) {
            break;
        }
    }
    let sigma = lo - 1e-9 * radius;
    let shifted: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| a[i][j] - if i == j { sigma } else { 0.0 })
                .collect()
        })
        .collect();
    let mut x: Vec<f64> = (0..n)
        .map(|i| 1.0 + 0.1 * (i as f64 + 1.0).sqrt())
        .collect();
    for _ in 0..8 {
        x = solve(&shifted, &x);
        let s = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        x.iter_mut().for_each(|v| *v /= s);
    }
    let ax: Vec<f64> = a
        .iter()
        .map(|row| row.iter().zip(&x).map(|(p, q)| p * q).sum())
        .collect();
    ax.iter().zip(&x).map(|(p, q)| p * q).sum()
}

/// Smaller root of `det([[a, b], [b, c]] - lambda I)`.
pub fn min_eig_2x2(a: f64, b: f64, c: f64) -> f64 {
    let m = 0.5 * (a + c);
    let d = (0.25 * (a - c) * (a - c) + b * b).sqrt();
    m - d
}

/// Maximizes `c^T N c / c^T M c` (`N` diagonal) by coordinate ascent from
/// random starts; each step solves the two-dimensional problem on
/// `span{c, e_j}` in closed form.
pub fn rayleigh_max<R: Rng>(
    n_diag: &[f64],
    m: &[Vec<f64>],
    starts: usize,
    sweeps: usize,
    rng: &mut R,
) -> f64 {
    let n = n_diag.len();
    let mut best = f64::NEG_INFINITY;
    let favored: Vec<usize> = (0..n).filter(|&i| n_diag[i] > -1.0).collect();
    for _ in 0..starts {
        let mut c = vec![0.0; n];
        for &i in &favored {
            c[i] = rng.gen_range(-1.0..1.0);
        }
        if favored.is_empty() {
            c[rng.gen_range(0..n)] = 1.0;
        }
        let mut mc: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| m[i][j] * c[j]).sum())
            .collect();
        let mut num: f64 = (0..n).map(|i| n_diag[i] * c[i] * c[i]).sum();
        let mut den: f64 = (0..n).map(|i| c[i] * mc[i]).sum();
        for _ in 0..sweeps {
            for j in 0..n {
                let a = n_diag[j] * c[j];
                let b = mc[j];
                let (nj, mj) = (n_diag[j], m[j][j]);
                // lambda^2 (B m - b^2) - lambda (A m + B n - 2 a b) + (A n - a^2) = 0
                let qa = den * mj - b * b;
                let qb = -(num * mj + den * nj - 2.0 * a * b);
                let qc = num * nj - a * a;
                if qa <= 0.0 {
                    continue;
                }
                let disc = (qb * qb - 4.0 * qa * qc).max(0.0);
                let lam = (-qb + disc.sqrt()) / (2.0 * qa);
                let r0 = a - lam * b;
                let r1 = nj - lam * mj;
                let alpha = if r0.abs() > 1e-300 {
                    -(num - lam * den) / r0
                } else if r1.abs() > 1e-300 {
                    -r0 / r1
                } else {
                    0.0
                };
                if !alpha.is_finite() || alpha == 0.0 {
                    continue;
                }
                let new_num = num + 2.0 * alpha * a + alpha * alpha * nj;
                let new_den = den + 2.0 * alpha * b + alpha * alpha * mj;
                if new_den <= 0.0 || new_num / new_den <= num / den {
                    continue;
                }
                c[j] += alpha;
                for i in 0..n {
                    mc[i] += alpha * m[i][j];
                }
                num = new_num;
                den = new_den;
            }
            let s = den.sqrt();
            c.iter_mut().for_each(|v| *v /= s);
            mc.iter_mut().for_each(|v| *v /= s);
            num /= den;
            den = 1.0;
        }
        best = best.max(num / den);
    }
    best
}

/// Uniform random field on `|k|_inf <= cutoff` with coefficients in the unit square.
pub fn random_field<R: Rng>(cutoff: u32, rng: &mut R) -> FourierField2D {
    let k = cutoff as i64;
    let modes: Vec<((i64, i64), Complex64)> = (-k..=k)
        .flat_map(|a| (-k..=k).map(move |b| (a, b)))
        .map(|m| {
            (
                m,
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            )
        })
        .collect();
    FourierField2D::from_modes(cutoff, modes).unwrap()
}
