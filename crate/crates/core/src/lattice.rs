//! Number-theoretic core: eps-rational directions, their angular windows,
//! best rational approximation and sums of two squares.
//!
//! A direction on the torus is a class of nonzero vectors under positive
//! scaling, so `(1, 0)` and `(-1, 0)` are different directions. A rational
//! direction is represented by its primitive lattice vector `(a, b)` with
//! `gcd(|a|, |b|) = 1`; the closed geodesic in that direction has length
//! `L = sqrt(a^2 + b^2)`.

use std::collections::BTreeSet;
use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, require_positive, Result};

/// Default window constant used by [`classify_direction`].
pub const DEFAULT_C: f64 = 25.0;

/// Denominator of the half-width of a rational angular window, `eps / (24 L)`.
pub const WINDOW_DENOMINATOR: f64 = 24.0;

/// Numerator of the eps-rational threshold `a^2 + b^2 < 32 / eps^2`.
pub const RATIONAL_THRESHOLD: f64 = 32.0;

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Normalizes an angle into `[0, 2pi)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Circular distance between two angles, `min(|d|, 2pi - |d|)` with `d` reduced mod `2pi`.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// A primitive integer lattice direction `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimitiveDirection {
    a: i64,
    b: i64,
}

impl PrimitiveDirection {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        if a == 0 && b == 0 {
            return Err(invalid("(0, 0) is not a direction"));
        }
        if gcd(a.unsigned_abs(), b.unsigned_abs()) != 1 {
            return Err(invalid(format!("({a}, {b}) is not primitive")));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    /// `a^2 + b^2`, the squared length of the primitive closed geodesic.
    pub fn norm_sq(&self) -> u64 {
        (self.a * self.a + self.b * self.b) as u64
    }

    /// `L = sqrt(a^2 + b^2)`.
    pub fn length(&self) -> f64 {
        (self.norm_sq() as f64).sqrt()
    }

    /// `atan2(b, a)` in `[0, 2pi)`.
    pub fn angle(&self) -> f64 {
        normalize_angle((self.b as f64).atan2(self.a as f64))
    }

    pub fn unit(&self) -> UnitDirection {
        UnitDirection::from_angle(self.angle())
    }
}

/// A direction on the circle, stored as its angle in `[0, 2pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitDirection {
    angle: f64,
}

impl UnitDirection {
    pub fn from_angle(angle: f64) -> Self {
        Self {
            angle: normalize_angle(angle),
        }
    }

    /// Direction of the vector `(x, y)`; positive rescalings give the same direction.
    pub fn from_vector(x: f64, y: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite()) || (x == 0.0 && y == 0.0) {
            return Err(invalid(format!("({x}, {y}) does not define a direction")));
        }
        Ok(Self::from_angle(y.atan2(x)))
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    /// `(cos angle, sin angle)`.
    pub fn vector(&self) -> (f64, f64) {
        let (s, c) = self.angle.sin_cos();
        (c, s)
    }
}

/// All eps-rational directions, sorted by angle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsRationalSet {
    eps: f64,
    directions: Vec<PrimitiveDirection>,
}

/// Outcome of [`classify_direction`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DirectionClass {
    /// Within `eps / (C L)` of `eta`; `gap` is the circular distance to it.
    Rational { eta: PrimitiveDirection, gap: f64 },
    /// Outside every window; `margin` is `min_eta (dist - eps / (C L_eta))`,
    /// infinite when there are no eps-rational directions.
    Irrational { margin: f64 },
}

impl DirectionClass {
    pub fn is_irrational(&self) -> bool {
        matches!(self, DirectionClass::Irrational { .. })
    }
}

impl EpsRationalSet {
    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn directions(&self) -> &[PrimitiveDirection] {
        &self.directions
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    /// Classifies `xi` against this set with window constant `c`.
    ///
    /// Rational matches are resolved by smallest `L`, then smallest angle.
    pub fn classify(&self, xi: UnitDirection, c: f64) -> Result<DirectionClass> {
        require_positive("C", c)?;
        let mut best: Option<(PrimitiveDirection, f64)> = None;
        let mut margin = f64::INFINITY;
        // directions are sorted by angle, so the first hit among equal norms has the smallest angle
        for &eta in &self.directions {
            let dist = circular_distance(xi.angle(), eta.angle());
            let width = self.eps / (c * eta.length());
            if dist < width {
                match best {
                    Some((b, _)) if b.norm_sq() <= eta.norm_sq() => {}
                    _ => best = Some((eta, dist)),
                }
            } else {
                margin = margin.min(dist - width);
            }
        }
        Ok(match best {
            Some((eta, gap)) => DirectionClass::Rational { eta, gap },
            None => DirectionClass::Irrational { margin },
        })
    }
}

/// Enumerates the primitive `(a, b)` with `a^2 + b^2 < 32 / eps^2`, sorted by angle.
///
/// For `eps >= sqrt(32)` the set is empty.
pub fn enumerate_eps_rational(eps: f64) -> Result<EpsRationalSet> {
    require_positive("eps", eps)?;
    let bound = RATIONAL_THRESHOLD / (eps * eps);
    let reach = bound.sqrt().floor() as i64 + 1;
    let mut directions = Vec::new();
    for a in -reach..=reach {
        for b in -reach..=reach {
            if ((a * a + b * b) as f64) < bound {
                if let Ok(d) = PrimitiveDirection::new(a, b) {
                    directions.push(d);
                }
            }
        }
    }
    directions.sort_by(|x, y| x.angle().total_cmp(&y.angle()));
    Ok(EpsRationalSet { eps, directions })
}

/// Classifies `xi` as rational or irrational for the given `eps` and window constant `c`.
pub fn classify_direction(xi: UnitDirection, eps: f64, c: f64) -> Result<DirectionClass> {
    enumerate_eps_rational(eps)?.classify(xi, c)
}

/// Result of [`best_rational_approx`]: `|n alpha - m| = err` is minimal over `1 <= n <= n_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RationalApprox {
    pub n: u64,
    pub m: i64,
    pub err: f64,
}

fn approx_at(alpha: f64, n: u64) -> RationalApprox {
    let x = n as f64 * alpha;
    let m = x.round();
    RationalApprox {
        n,
        m: m as i64,
        err: (x - m).abs(),
    }
}

/// Finds the `n` in `[1, n_max]` minimizing `|n alpha - m|`, ties going to the smallest `n`.
///
/// The minimizer is a continued-fraction convergent of `alpha`, hence one of
/// the two neighbours of `alpha` in the Farey sequence of order `n_max`. Those
/// are found by a Stern–Brocot descent that takes runs of equal steps at once,
/// so the cost is logarithmic in `n_max` for badly approximable `alpha`.
pub fn best_rational_approx(alpha: f64, n_max: u64) -> Result<RationalApprox> {
    if !(alpha.is_finite() && alpha > 0.0 && alpha < 1.0) {
        return Err(invalid(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if n_max == 0 {
        return Err(invalid("n_max must be >= 1"));
    }
    let n_max = n_max as i64;
    // sign of q alpha - p: positive when p/q lies below alpha
    let side = |p: i64, q: i64| q as f64 * alpha - p as f64;

    let (mut lp, mut lq) = (0i64, 1i64);
    let (mut rp, mut rq) = (1i64, 1i64);
    loop {
        let (mp, mq) = (lp + rp, lq + rq);
        if mq > n_max {
            break;
        }
        let s = side(mp, mq);
        if s == 0.0 {
            return Ok(approx_at(alpha, mq as u64));
        }
        if s > 0.0 {
            // walk left towards right: (lp + k rp) / (lq + k rq)
            let k_cap = (n_max - lq) / rq;
            let est = (side(lp, lq) / -side(rp, rq)).floor();
            let mut k = if est.is_finite() {
                (est as i64).clamp(1, k_cap)
            } else {
                k_cap
            };
            while k > 1 && side(lp + k * rp, lq + k * rq) < 0.0 {
                k -= 1;
            }
            while k < k_cap && side(lp + (k + 1) * rp, lq + (k + 1) * rq) >= 0.0 {
                k += 1;
            }
            let (np, nq) = (lp + k * rp, lq + k * rq);
            if side(np, nq) == 0.0 {
                return Ok(approx_at(alpha, nq as u64));
            }
            (lp, lq) = (np, nq);
        } else {
            let k_cap = (n_max - rq) / lq;
            let est = (-side(rp, rq) / side(lp, lq)).floor();
            let mut k = if est.is_finite() {
                (est as i64).clamp(1, k_cap)
            } else {
                k_cap
            };
            while k > 1 && side(rp + k * lp, rq + k * lq) > 0.0 {
                k -= 1;
            }
            while k < k_cap && side(rp + (k + 1) * lp, rq + (k + 1) * lq) <= 0.0 {
                k += 1;
            }
            let (np, nq) = (rp + k * lp, rq + k * lq);
            if side(np, nq) == 0.0 {
                return Ok(approx_at(alpha, nq as u64));
            }
            (rp, rq) = (np, nq);
        }
    }
    let left = approx_at(alpha, lq as u64);
    let right = approx_at(alpha, rq as u64);
    let pick_left = left.err < right.err || (left.err == right.err && left.n < right.n);
    Ok(if pick_left { left } else { right })
}

/// All `(p, q)` with `p^2 + q^2 = n`, in lexicographic order.
pub fn r2_representations(n: u64) -> Vec<(i64, i64)> {
    let s = n.isqrt() as i64;
    let mut reps = Vec::new();
    for p in -s..=s {
        let rem = n - (p * p) as u64;
        let q = rem.isqrt();
        if q * q == rem {
            let q = q as i64;
            if q == 0 {
                reps.push((p, 0));
            } else {
                reps.push((p, -q));
                reps.push((p, q));
            }
        }
    }
    reps
}

/// `r_2(n)`, the number of ordered representations `n = p^2 + q^2`.
pub fn r2_count(n: u64) -> u64 {
    let s = n.isqrt() as i64;
    (-s..=s)
        .map(|p| {
            let rem = n - (p * p) as u64;
            let q = rem.isqrt();
            match (q * q == rem, q) {
                (false, _) => 0,
                (true, 0) => 1,
                (true, _) => 2,
            }
        })
        .sum()
}

/// Support arc of a rational cutoff: `|arg xi - arg center| < half_width`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngularWindow {
    pub center: PrimitiveDirection,
    pub half_width: f64,
}

impl AngularWindow {
    pub fn overlaps(&self, other: &AngularWindow) -> bool {
        circular_distance(self.center.angle(), other.center.angle())
            < self.half_width + other.half_width
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowReport {
    pub eps: f64,
    pub windows: Vec<AngularWindow>,
    /// Overlapping pairs; empty when all windows are pairwise disjoint.
    pub overlaps: Vec<(PrimitiveDirection, PrimitiveDirection)>,
}

impl WindowReport {
    pub fn disjoint(&self) -> bool {
        self.overlaps.is_empty()
    }
}

/// Builds the window of half-width `eps / (24 L)` around every eps-rational
/// direction and checks every pair for overlap.
///
/// Windows are swept in angular order; a pair is skipped only once the centre
/// gap exceeds `half_width_i + max half_width`, past which no overlap is
/// possible, so the check is equivalent to the full pairwise comparison.
pub fn angular_windows(eps: f64) -> Result<WindowReport> {
    let set = enumerate_eps_rational(eps)?;
    if set.is_empty() {
        return Err(invalid(format!(
            "eps = {eps} has no eps-rational directions"
        )));
    }
    let windows: Vec<AngularWindow> = set
        .directions()
        .iter()
        .map(|&center| AngularWindow {
            center,
            half_width: eps / (WINDOW_DENOMINATOR * center.length()),
        })
        .collect();
    let angles: Vec<f64> = windows.iter().map(|w| w.center.angle()).collect();
    let max_hw = windows.iter().map(|w| w.half_width).fold(0.0, f64::max);

    let n = windows.len();
    let mut pairs = BTreeSet::new();
    for i in 0..n {
        for step in 1..n {
            let j = (i + step) % n;
            let ahead = if j > i { angles[j] } else { angles[j] + TAU };
            if ahead - angles[i] >= windows[i].half_width + max_hw {
                break;
            }
            if windows[i].overlaps(&windows[j]) {
                pairs.insert((i.min(j), i.max(j)));
            }
        }
    }
    let overlaps = pairs
        .into_iter()
        .map(|(i, j)| (windows[i].center, windows[j].center))
        .collect();
    Ok(WindowReport {
        eps,
        windows,
        overlaps,
    })
}
