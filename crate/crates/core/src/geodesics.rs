//! Straight-line flow on the torus and exact first-hitting times into a ball.
//!
//! The flow is taken at unit speed, `x + t xi`. The Hamiltonian flow of
//! `|xi|^2` runs at speed two; all times here are therefore twice the
//! corresponding Hamiltonian times, and both sides of the hitting bound scale
//! together.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, require_positive, Result};
use crate::lattice::{enumerate_eps_rational, PrimitiveDirection, UnitDirection};

fn reduce_unit(v: f64) -> f64 {
    let r = v.rem_euclid(1.0);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// A point of `R^2 / Z^2` with coordinates in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorusPoint {
    x: f64,
    y: f64,
}

impl TorusPoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self {
            x: reduce_unit(x),
            y: reduce_unit(y),
        }
    }

    pub fn origin() -> Self {
        Self { x: 0.0, y: 0.0 }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    /// Flat-torus distance to `other`.
    pub fn distance(&self, other: &TorusPoint) -> f64 {
        let dx = (self.x - other.x).abs();
        let dy = (self.y - other.y).abs();
        dx.min(1.0 - dx).hypot(dy.min(1.0 - dy))
    }

    /// Shifts by `(dx, dy)` and reduces mod 1.
    pub fn translate_by(&self, dx: f64, dy: f64) -> Self {
        Self::new(self.x + dx, self.y + dy)
    }
}

/// `(x + t xi) mod 1`.
pub fn flow_position(x: TorusPoint, xi: UnitDirection, t: f64) -> TorusPoint {
    let (cx, cy) = xi.vector();
    TorusPoint::new(x.x + t * cx, x.y + t * cy)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HittingRecord {
    pub start: TorusPoint,
    pub direction: UnitDirection,
    pub radius: f64,
    pub horizon: f64,
    /// First `t` in `[0, horizon]` with `x + t xi` in the closed ball `B(0, radius)`.
    pub hit_time: Option<f64>,
}

/// Entry time of `p + t v` (|v| = 1) into the closed disc of radius `r` about `m`.
fn disc_entry(px: f64, py: f64, vx: f64, vy: f64, mx: f64, my: f64, r: f64) -> Option<f64> {
    let (dx, dy) = (px - mx, py - my);
    let c0 = dx * dx + dy * dy - r * r;
    if c0 <= 0.0 {
        return Some(0.0);
    }
    let b = dx * vx + dy * vy;
    if b >= 0.0 {
        // moving away (or tangentially) while outside
        return None;
    }
    let disc = b * b - c0;
    if disc < 0.0 {
        return None;
    }
    // smaller root of t^2 + 2 b t + c0, in the cancellation-free form
    Some(c0 / (-b + disc.sqrt()))
}

/// Exact first entry time into `B(0, r)` for the flow from `x` in direction `xi`.
///
/// The unfolded segment `{x + t xi : 0 <= t <= horizon}` is swept one lattice
/// column at a time along its dominant axis. Only lattice points whose disc
/// the segment can meet are tested, and each is solved exactly through the
/// entry quadratic `|x + t xi - m|^2 = r^2`. Because `r < 1/2`, every entry
/// time in one column precedes every entry time in the next, so the sweep
/// stops at the first column that yields a hit.
pub fn first_hit_time(
    x: TorusPoint,
    xi: UnitDirection,
    r: f64,
    horizon: f64,
) -> Result<HittingRecord> {
    require_positive("radius", r)?;
    if r >= 0.5 {
        return Err(invalid(format!(
            "radius must be < 1/2 (ball wraps onto itself), got {r}"
        )));
    }
    require_positive("horizon", horizon)?;

    let (vx, vy) = xi.vector();
    // (u, v) = (dominant, other) axis
    let swap = vx.abs() < vy.abs();
    let (u0, w0, du, dw) = if swap {
        (x.y, x.x, vy, vx)
    } else {
        (x.x, x.y, vx, vy)
    };
    let u_end = u0 + horizon * du;

    let (first, last, step): (i64, i64, i64) = if du > 0.0 {
        ((u0 - r).ceil() as i64, (u_end + r).floor() as i64, 1)
    } else {
        ((u0 + r).floor() as i64, (u_end - r).ceil() as i64, -1)
    };

    let mut hit_time = None;
    let mut mu = first;
    while (step > 0 && mu <= last) || (step < 0 && mu >= last) {
        let ta = (mu as f64 - r - u0) / du;
        let tb = (mu as f64 + r - u0) / du;
        let lo = ta.min(tb).max(0.0);
        let hi = ta.max(tb).min(horizon);
        if lo <= hi {
            let wa = w0 + lo * dw;
            let wb = w0 + hi * dw;
            let w_lo = (wa.min(wb) - r).ceil() as i64;
            let w_hi = (wa.max(wb) + r).floor() as i64;
            let mut best: Option<f64> = None;
            for mw in w_lo..=w_hi {
                let (mx, my) = if swap {
                    (mw as f64, mu as f64)
                } else {
                    (mu as f64, mw as f64)
                };
                if let Some(t) = disc_entry(x.x, x.y, vx, vy, mx, my, r) {
                    if t <= horizon && best.is_none_or(|b| t < b) {
                        best = Some(t);
                    }
                }
            }
            if best.is_some() {
                hit_time = best;
                break;
            }
        }
        mu += step;
    }

    Ok(HittingRecord {
        start: x,
        direction: xi,
        radius: r,
        horizon,
        hit_time,
    })
}

/// A sampled pair whose hit time exceeded the claimed bound or was not found before the horizon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub x: f64,
    pub y: f64,
    pub angle: f64,
    pub hit_time: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HittingBoundReport {
    pub eps: f64,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "C_prime")]
    pub c_prime: f64,
    /// `C' / eps`.
    pub bound: f64,
    pub horizon: f64,
    pub radius: f64,
    pub seed: u64,
    pub max_hit: Option<f64>,
    pub n_samples: usize,
    pub n_rejected: usize,
    pub pass: bool,
    pub counterexamples: Vec<Counterexample>,
}

/// `C' = 3 sqrt(2) max(C, 12)`.
pub fn hitting_constant(c: f64) -> f64 {
    3.0 * std::f64::consts::SQRT_2 * c.max(12.0)
}

/// Samples start points and irrational directions and checks every first
/// hitting time into `B(0, eps/3)` against `C'/eps`.
///
/// Directions are drawn uniformly in angle and kept only if they classify as
/// irrational for `(eps, c)`; rejected draws are counted. The flow is run to
/// twice the bound so that a violation shows up as a late hit rather than a
/// timeout.
pub fn verify_hitting_bound(
    eps: f64,
    c: f64,
    n_points: usize,
    n_dirs: usize,
    seed: u64,
) -> Result<HittingBoundReport> {
    require_positive("eps", eps)?;
    require_positive("C", c)?;
    if n_points == 0 || n_dirs == 0 {
        return Err(invalid("n_points and n_dirs must be >= 1"));
    }
    let radius = eps / 3.0;
    if radius >= 0.5 {
        return Err(invalid(format!("eps/3 must be < 1/2, got eps = {eps}")));
    }
    let c_prime = hitting_constant(c);
    let bound = c_prime / eps;
    let horizon = 2.0 * bound;

    let set = enumerate_eps_rational(eps)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<TorusPoint> = (0..n_points)
        .map(|_| TorusPoint::new(rng.gen::<f64>(), rng.gen::<f64>()))
        .collect();

    let max_attempts = 1000 * n_dirs + 1000;
    let mut dirs = Vec::with_capacity(n_dirs);
    let mut n_rejected = 0;
    while dirs.len() < n_dirs {
        if dirs.len() + n_rejected >= max_attempts {
            return Err(invalid(format!(
                "no irrational directions found for eps = {eps}, C = {c} after {max_attempts} draws"
            )));
        }
        let xi = UnitDirection::from_angle(rng.gen_range(0.0..std::f64::consts::TAU));
        if set.classify(xi, c)?.is_irrational() {
            dirs.push(xi);
        } else {
            n_rejected += 1;
        }
    }

    let records: Vec<HittingRecord> = points
        .par_iter()
        .flat_map_iter(|&p| {
            dirs.iter()
                .map(move |&xi| first_hit_time(p, xi, radius, horizon))
        })
        .collect::<Result<_>>()?;

    let mut max_hit: Option<f64> = None;
    let mut counterexamples = Vec::new();
    for rec in &records {
        match rec.hit_time {
            Some(t) => {
                max_hit = Some(max_hit.map_or(t, |m| m.max(t)));
                if t > bound {
                    counterexamples.push(counterexample(rec));
                }
            }
            None => counterexamples.push(counterexample(rec)),
        }
    }

    Ok(HittingBoundReport {
        eps,
        c,
        c_prime,
        bound,
        horizon,
        radius,
        seed,
        max_hit,
        n_samples: records.len(),
        n_rejected,
        pass: counterexamples.is_empty(),
        counterexamples,
    })
}

fn counterexample(rec: &HittingRecord) -> Counterexample {
    Counterexample {
        x: rec.start.x(),
        y: rec.start.y(),
        angle: rec.direction.angle(),
        hit_time: rec.hit_time,
    }
}

/// Intersections of the closed geodesic through the origin in direction `eta`
/// with the circle `{x1 = 0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionReport {
    pub eta: PrimitiveDirection,
    /// Sorted by `y`.
    pub points: Vec<TorusPoint>,
    /// Set when `eta` is vertical, so the geodesic runs inside the section circle.
    pub degenerate: bool,
    /// Largest gap between cyclically consecutive section points.
    pub max_gap: f64,
    /// Largest distance between a flowed crossing and its exact position `(0, k m / n mod 1)`.
    pub flow_deviation: f64,
    /// Whether the section points are exactly `{(0, k/n) : 0 <= k < n}`.
    pub matches_expected: bool,
}

/// Flows once around the closed geodesic in direction `eta = (n, m)` and
/// records where it crosses `{x1 = 0}`.
///
/// With `n != 0` the crossings occur at times `k L / |n|`; since `gcd(n, m) = 1`
/// they are the points `(0, k/|n|)`, spaced `1/|n|` apart.
pub fn closed_geodesic_sections(eta: PrimitiveDirection) -> SectionReport {
    let n = eta.a().unsigned_abs();
    if n == 0 {
        return SectionReport {
            eta,
            points: vec![TorusPoint::origin()],
            degenerate: true,
            max_gap: 1.0,
            flow_deviation: 0.0,
            matches_expected: false,
        };
    }
    let period = eta.length();
    let dir = eta.unit();
    let m = eta.b().rem_euclid(n as i64) as u64;

    let mut flow_deviation: f64 = 0.0;
    let mut ys: Vec<u64> = Vec::with_capacity(n as usize);
    for k in 0..n {
        let p = flow_position(TorusPoint::origin(), dir, k as f64 * period / n as f64);
        let numer = (k * m) % n;
        let exact = TorusPoint::new(0.0, numer as f64 / n as f64);
        flow_deviation = flow_deviation.max(p.distance(&exact));
        ys.push(numer);
    }
    ys.sort_unstable();
    let matches_expected = ys.iter().copied().eq(0..n) && flow_deviation < 1e-9;

    let points: Vec<TorusPoint> = ys
        .iter()
        .map(|&k| TorusPoint::new(0.0, k as f64 / n as f64))
        .collect();
    let mut max_gap: f64 = 0.0;
    for w in ys.windows(2) {
        max_gap = max_gap.max((w[1] - w[0]) as f64 / n as f64);
    }
    let wrap = (n - ys[ys.len() - 1] + ys[0]) as f64 / n as f64;
    max_gap = max_gap.max(wrap);

    SectionReport {
        eta,
        points,
        degenerate: false,
        max_gap,
        flow_deviation,
        matches_expected,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_4, PI, SQRT_2};

    #[test]
    fn torus_point_reduces() {
        let p = TorusPoint::new(1.25, -0.25);
        assert_eq!((p.x(), p.y()), (0.25, 0.75));
        let q = TorusPoint::new(-1e-18, 0.0);
        assert_eq!(q.x(), 0.0);
    }

    #[test]
    fn flow_examples() {
        let p = flow_position(
            TorusPoint::new(0.25, 0.5),
            UnitDirection::from_angle(0.0),
            0.5,
        );
        assert!((p.x() - 0.75).abs() < 1e-15 && (p.y() - 0.5).abs() < 1e-15);

        let x = TorusPoint::new(0.3, 0.7);
        assert_eq!(flow_position(x, UnitDirection::from_angle(1.0), 0.0), x);

        let p = flow_position(
            TorusPoint::new(0.9, 0.9),
            UnitDirection::from_angle(FRAC_PI_4),
            SQRT_2 * 0.2,
        );
        assert!(p.distance(&TorusPoint::new(0.1, 0.1)) < 1e-12);
    }

    #[test]
    fn hit_examples() {
        let rec = first_hit_time(
            TorusPoint::origin(),
            UnitDirection::from_angle(0.7),
            0.1,
            10.0,
        )
        .unwrap();
        assert_eq!(rec.hit_time, Some(0.0));

        let rec = first_hit_time(
            TorusPoint::new(0.5, 0.0),
            UnitDirection::from_angle(PI),
            0.1,
            10.0,
        )
        .unwrap();
        assert!((rec.hit_time.unwrap() - 0.4).abs() < 1e-12);

        let rec = first_hit_time(
            TorusPoint::new(0.5, 0.5),
            UnitDirection::from_angle(FRAC_PI_4),
            0.1,
            10.0,
        )
        .unwrap();
        assert!((rec.hit_time.unwrap() - (SQRT_2 / 2.0 - 0.1)).abs() < 1e-12);
    }

    #[test]
    fn hit_respects_horizon() {
        let rec = first_hit_time(
            TorusPoint::new(0.5, 0.0),
            UnitDirection::from_angle(PI),
            0.1,
            0.3,
        )
        .unwrap();
        assert_eq!(rec.hit_time, None);
        // the horizontal line y = 0.5 never comes within 0.1 of a lattice point
        let rec = first_hit_time(
            TorusPoint::new(0.0, 0.5),
            UnitDirection::from_angle(0.0),
            0.1,
            100.0,
        )
        .unwrap();
        assert_eq!(rec.hit_time, None);
    }

    #[test]
    fn hit_rejects_wrapping_ball() {
        assert!(first_hit_time(
            TorusPoint::origin(),
            UnitDirection::from_angle(0.0),
            0.5,
            1.0
        )
        .is_err());
        assert!(first_hit_time(
            TorusPoint::origin(),
            UnitDirection::from_angle(0.0),
            0.1,
            0.0
        )
        .is_err());
    }

    #[test]
    fn vertical_and_negative_directions() {
        let rec = first_hit_time(
            TorusPoint::new(0.05, 0.5),
            UnitDirection::from_angle(1.5 * PI),
            0.1,
            10.0,
        )
        .unwrap();
        let expected = 0.5 - (0.01f64 - 0.0025).sqrt();
        assert!((rec.hit_time.unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn hitting_constant_formula() {
        assert!((hitting_constant(25.0) - 75.0 * SQRT_2).abs() < 1e-12);
        assert!((hitting_constant(5.0) - 36.0 * SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn verify_counts_rejections() {
        let rep = verify_hitting_bound(0.2, 25.0, 4, 20, 3).unwrap();
        assert_eq!(rep.n_samples, 80);
        assert!(
            rep.n_rejected > 0,
            "some uniform draws should land in rational windows"
        );
        assert!(rep.pass);
    }

    #[test]
    fn sections_examples() {
        let rep = closed_geodesic_sections(PrimitiveDirection::new(2, 1).unwrap());
        assert_eq!(
            rep.points,
            vec![TorusPoint::new(0.0, 0.0), TorusPoint::new(0.0, 0.5)]
        );
        assert!(rep.matches_expected);

        let rep = closed_geodesic_sections(PrimitiveDirection::new(1, 0).unwrap());
        assert_eq!(rep.points, vec![TorusPoint::origin()]);
        assert_eq!(rep.max_gap, 1.0);

        let rep = closed_geodesic_sections(PrimitiveDirection::new(5, 2).unwrap());
        assert_eq!(rep.points.len(), 5);
        assert!((rep.max_gap - 0.2).abs() < 1e-15);
        assert!(rep.matches_expected);

        let rep = closed_geodesic_sections(PrimitiveDirection::new(0, 1).unwrap());
        assert!(rep.degenerate);
        assert_eq!(rep.points, vec![TorusPoint::origin()]);
    }
}
