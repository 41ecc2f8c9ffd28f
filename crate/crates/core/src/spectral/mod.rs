//! Fourier representation of states on the unit torus.
//!
//! The basis is `e_k(x) = e^{2 pi i k.x}`, orthonormal on `R^2 / Z^2`, with
//! `-Delta e_k = 4 pi^2 |k|^2 e_k`. Every operator here is diagonal in it.

mod bessel;

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, require_ball_radius, require_positive, Error, Result};
use crate::geodesics::TorusPoint;
use crate::PERIOD;

pub use bessel::bessel_j1;

/// A lattice mode `k = (kx, ky)`.
pub type Mode = (i64, i64);

pub fn mode_norm_sq(k: Mode) -> u64 {
    (k.0 * k.0 + k.1 * k.1) as u64
}

/// Fourier coefficients on the modes `|k|_inf <= cutoff`, stored densely in
/// lexicographic mode order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FourierField2D {
    cutoff: u32,
    coeffs: Vec<Complex64>,
}

impl FourierField2D {
    pub fn zeros(cutoff: u32) -> Self {
        let side = 2 * cutoff as usize + 1;
        Self {
            cutoff,
            coeffs: vec![Complex64::new(0.0, 0.0); side * side],
        }
    }

    /// Builds a field from `(mode, amplitude)` pairs; later pairs overwrite earlier ones.
    pub fn from_modes<I>(cutoff: u32, modes: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Mode, Complex64)>,
    {
        let mut field = Self::zeros(cutoff);
        for (k, c) in modes {
            field.set(k, c)?;
        }
        Ok(field)
    }

    pub fn single_mode(cutoff: u32, k: Mode, amplitude: Complex64) -> Result<Self> {
        Self::from_modes(cutoff, [(k, amplitude)])
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    fn side(&self) -> usize {
        2 * self.cutoff as usize + 1
    }

    fn index(&self, k: Mode) -> Option<usize> {
        let c = self.cutoff as i64;
        if k.0.abs() > c || k.1.abs() > c {
            return None;
        }
        Some((k.0 + c) as usize * self.side() + (k.1 + c) as usize)
    }

    fn mode_at(&self, i: usize) -> Mode {
        let c = self.cutoff as i64;
        let side = self.side();
        ((i / side) as i64 - c, (i % side) as i64 - c)
    }

    /// Amplitude of mode `k`; zero outside the cutoff.
    pub fn get(&self, k: Mode) -> Complex64 {
        self.index(k)
            .map_or(Complex64::new(0.0, 0.0), |i| self.coeffs[i])
    }

    pub fn set(&mut self, k: Mode, c: Complex64) -> Result<()> {
        let i = self
            .index(k)
            .ok_or_else(|| invalid(format!("mode {k:?} lies outside cutoff {}", self.cutoff)))?;
        self.coeffs[i] = c;
        Ok(())
    }

    /// All modes within the cutoff with their amplitudes, in lexicographic order.
    pub fn modes(&self) -> impl Iterator<Item = (Mode, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| (self.mode_at(i), c))
    }

    /// `||u||^2 = sum |c_k|^2`.
    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    fn check_cutoff(&self, other: &Self) -> Result<()> {
        if self.cutoff != other.cutoff {
            return Err(Error::CutoffMismatch {
                left: self.cutoff,
                right: other.cutoff,
            });
        }
        Ok(())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_cutoff(other)?;
        Ok(Self {
            cutoff: self.cutoff,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Applies `c_k -> f(k) c_k`.
    pub fn map_modes(&self, mut f: impl FnMut(Mode) -> Complex64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| f(self.mode_at(i)) * c)
            .collect();
        Self {
            cutoff: self.cutoff,
            coeffs,
        }
    }

    /// Pointwise value `u(x) = sum c_k e^{2 pi i k.x}`.
    pub fn eval(&self, x: f64, y: f64) -> Complex64 {
        self.modes()
            .map(|((kx, ky), c)| c * Complex64::cis(TAU * (kx as f64 * x + ky as f64 * y)))
            .sum()
    }
}

/// `frac(n * cycles)` in `[-1/2, 1/2]`, with the rounding error of the product recovered exactly.
fn phase_fraction(n: u64, cycles: f64) -> f64 {
    let nf = n as f64;
    let p = nf * cycles;
    let err = nf.mul_add(cycles, -p);
    (p - p.round()) + err
}

/// `e^{it Delta} u`: mode `k` picks up the phase `e^{-4 pi^2 i |k|^2 t}`.
///
/// Time is converted to periods `t / PERIOD` first, so a full period is
/// exactly the identity.
pub fn propagate(u: &FourierField2D, t: f64) -> FourierField2D {
    let cycles = t / PERIOD;
    u.map_modes(|k| Complex64::cis(-TAU * phase_fraction(mode_norm_sq(k), cycles)))
}

/// Multiplier of `-h^2 Delta - 1` on mode `k`.
pub fn helmholtz_symbol(k: Mode, h: f64) -> f64 {
    4.0 * PI * PI * h * h * mode_norm_sq(k) as f64 - 1.0
}

/// `(-h^2 Delta - 1) u`.
pub fn helmholtz_residual(u: &FourierField2D, h: f64) -> Result<FourierField2D> {
    require_positive("h", h)?;
    Ok(u.map_modes(|k| Complex64::new(helmholtz_symbol(k, h), 0.0)))
}

/// `int_{B(0, eps)} e^{-2 pi i m.x} dx`, which is real and even in `m`:
/// `pi eps^2` at `m = 0`, else `eps J_1(2 pi eps |m|) / |m|`.
pub fn ball_indicator_coeff(eps: f64, m: Mode) -> Result<f64> {
    require_ball_radius("eps", eps)?;
    Ok(ball_coeff(eps, m))
}

pub(crate) fn ball_coeff(eps: f64, m: Mode) -> f64 {
    if m == (0, 0) {
        return PI * eps * eps;
    }
    let r = (mode_norm_sq(m) as f64).sqrt();
    eps * bessel_j1(TAU * eps * r) / r
}

/// The ball `B(center, radius)` on the torus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallRegion {
    center: TorusPoint,
    radius: f64,
}

impl BallRegion {
    pub fn new(center: TorusPoint, radius: f64) -> Result<Self> {
        require_ball_radius("radius", radius)?;
        Ok(Self { center, radius })
    }

    pub fn centered(radius: f64) -> Result<Self> {
        Self::new(TorusPoint::origin(), radius)
    }

    pub fn center(&self) -> TorusPoint {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn area(&self) -> f64 {
        PI * self.radius * self.radius
    }

    /// `int_Omega e^{2 pi i m.x} dx = e^{2 pi i m.c} * ball_indicator_coeff(radius, m)`.
    pub fn moment(&self, m: Mode) -> Complex64 {
        let shift = TAU * (m.0 as f64 * self.center.x() + m.1 as f64 * self.center.y());
        Complex64::cis(shift) * ball_coeff(self.radius, m)
    }
}

/// Table of [`BallRegion::moment`] over all mode differences `|d|_inf <= 2 cutoff`.
pub(crate) struct MomentTable {
    reach: i64,
    values: Vec<Complex64>,
}

impl MomentTable {
    pub(crate) fn new(region: &BallRegion, cutoff: u32) -> Self {
        let reach = 2 * cutoff as i64;
        let side = (2 * reach + 1) as usize;
        let mut values = Vec::with_capacity(side * side);
        for dx in -reach..=reach {
            for dy in -reach..=reach {
                values.push(region.moment((dx, dy)));
            }
        }
        Self { reach, values }
    }

    pub(crate) fn get(&self, d: Mode) -> Complex64 {
        let side = 2 * self.reach + 1;
        self.values[((d.0 + self.reach) * side + d.1 + self.reach) as usize]
    }
}

/// `<u, v>_{L^2(Omega)} = int_Omega u conj(v) = sum_{k,l} c_k conj(d_l) int_Omega e^{2 pi i (k-l).x}`.
///
/// Summation runs over `k` then `l` in lexicographic order, so the result is
/// bit-stable for a given input.
pub fn inner_on_ball(
    u: &FourierField2D,
    v: &FourierField2D,
    region: &BallRegion,
) -> Result<Complex64> {
    u.check_cutoff(v)?;
    let table = MomentTable::new(region, u.cutoff);
    let v_modes: Vec<(Mode, Complex64)> = v
        .modes()
        .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
        .collect();
    let mut total = Complex64::new(0.0, 0.0);
    for (k, ck) in u.modes() {
        if ck == Complex64::new(0.0, 0.0) {
            continue;
        }
        let mut row = Complex64::new(0.0, 0.0);
        for &(l, dl) in &v_modes {
            row += dl.conj() * table.get((k.0 - l.0, k.1 - l.1));
        }
        total += ck * row;
    }
    Ok(total)
}

/// `||u||^2_{L^2(Omega)}`.
pub fn norm_on_ball(u: &FourierField2D, region: &BallRegion) -> f64 {
    inner_on_ball(u, u, region)
        .expect("a field always matches its own cutoff")
        .re
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DefectCheck {
    /// `||e^{it(-h^2 Delta - 1)/h} u - u||`.
    pub lhs: f64,
    /// `(|t| / h) ||(-h^2 Delta - 1) u||`.
    pub rhs: f64,
    pub pass: bool,
}

/// Evaluates both sides of the propagation defect bound
/// `||e^{it(-h^2 Delta - 1)/h} u - u|| <= (|t|/h) ||(-h^2 Delta - 1) u||`.
pub fn propagation_defect_check(u: &FourierField2D, h: f64, t: f64) -> Result<DefectCheck> {
    require_positive("h", h)?;
    if !t.is_finite() {
        return Err(invalid(format!("t must be finite, got {t}")));
    }
    let mut lhs_sq = 0.0;
    let mut res_sq = 0.0;
    for (k, c) in u.modes() {
        let sym = helmholtz_symbol(k, h);
        // |e^{i theta} - 1| = 2 |sin(theta / 2)|
        let theta = t * sym / h;
        let chord = 2.0 * (0.5 * theta).sin().abs();
        lhs_sq += chord * chord * c.norm_sqr();
        res_sq += sym * sym * c.norm_sqr();
    }
    let lhs = lhs_sq.sqrt();
    let rhs = t.abs() / h * res_sq.sqrt();
    Ok(DefectCheck {
        lhs,
        rhs,
        pass: lhs <= rhs + 1e-12,
    })
}
