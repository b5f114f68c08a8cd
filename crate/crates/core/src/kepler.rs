//! Closed-form synthesis of T_{k,l}-type orbits of the rotating Kepler
//! problem and the scalar quantities attached to them.
//!
//! Conventions: the underlying Kepler ellipse has its perihelion on the
//! positive x-axis and is at the perihelion at t = 0. Direct orbits carry
//! negative angular momentum, retrograde orbits positive; the ellipse is
//! traversed clockwise respectively counterclockwise accordingly. The
//! rotating-frame orbit is `exp(i t)` times the inertial one.

use crate::curve::PolylineCurve;
use crate::error::{Error, Result};
use crate::geom::Point2;
use crate::roots::newton_bisect;
use serde::Serialize;
use std::f64::consts::PI;

/// Residual tolerance for all scalar root solves in this module.
pub const ROOT_TOL: f64 = 1e-12;

/// Critical Jacobi energy of the rotating Kepler problem.
pub const CRITICAL_JACOBI_ENERGY: f64 = -1.5;

pub fn gcd(a: u32, b: u32) -> u32 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Sense of the orbit relative to the rotating frame, fixed by the sign of
/// the angular momentum (negative for direct).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Direct,
    Retrograde,
}

impl Direction {
    /// Sign of the angular momentum.
    pub fn momentum_sign(self) -> f64 {
        match self {
            Direction::Direct => -1.0,
            Direction::Retrograde => 1.0,
        }
    }
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Direction::Direct => write!(f, "direct"),
            Direction::Retrograde => write!(f, "retrograde"),
        }
    }
}

/// One T_{k,l}-type orbit: a k-fold covered Kepler ellipse of eccentricity
/// `e` closing up in an l-fold rotating frame.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TorusOrbitSpec {
    k: u32,
    l: u32,
    e: f64,
    direction: Direction,
}

impl TorusOrbitSpec {
    pub fn new(k: u32, l: u32, e: f64, direction: Direction) -> Result<Self> {
        if k == 0 || l == 0 {
            return Err(Error::InvalidSpec("k and l must be positive".into()));
        }
        if gcd(k, l) != 1 {
            return Err(Error::InvalidSpec(format!(
                "k and l must be coprime, got ({k}, {l})"
            )));
        }
        if k == 1 && l == 1 {
            return Err(Error::InvalidSpec(
                "(k, l) = (1, 1) is excluded (plain Kepler ellipses)".into(),
            ));
        }
        if !(0.0..1.0).contains(&e) {
            return Err(Error::InvalidSpec(format!(
                "eccentricity must lie in [0, 1), got {e}"
            )));
        }
        Ok(TorusOrbitSpec { k, l, e, direction })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn eccentricity(&self) -> f64 {
        self.e
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// Winding number around the origin: l - k for direct, k + l for
    /// retrograde orbits.
    pub fn winding_number(&self) -> i64 {
        match self.direction {
            Direction::Direct => self.l as i64 - self.k as i64,
            Direction::Retrograde => self.k as i64 + self.l as i64,
        }
    }
}

/// Derived scalar quantities of a T_{k,l}-type orbit.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct OrbitParams {
    pub spec: TorusOrbitSpec,
    /// Kepler energy E_{k,l}.
    pub energy: f64,
    /// Semi-major axis of the underlying ellipse.
    pub semi_major: f64,
    /// Signed angular momentum.
    pub angular_momentum: f64,
    pub r_min: f64,
    pub r_max: f64,
    /// Period in the rotating frame, 2*pi*l.
    pub period: f64,
    /// Jacobi energy c = E + L.
    pub jacobi: f64,
}

impl OrbitParams {
    /// Mean motion of the underlying ellipse, k/l.
    pub fn mean_motion(&self) -> f64 {
        self.spec.k as f64 / self.spec.l as f64
    }

    /// Period of the underlying inertial ellipse.
    pub fn ellipse_period(&self) -> f64 {
        2.0 * PI * self.spec.l as f64 / self.spec.k as f64
    }
}

/// Kepler energy of the T_{k,l}-torus family: -(1/2) (k/l)^(2/3).
pub fn torus_energy(k: u32, l: u32) -> f64 {
    let ratio_sq = (k as f64 * k as f64) / (l as f64 * l as f64);
    -0.5 * ratio_sq.cbrt()
}

/// All derived celestial quantities of a valid spec.
pub fn orbit_params(spec: &TorusOrbitSpec) -> OrbitParams {
    let e = spec.e;
    let energy = torus_energy(spec.k, spec.l);
    let semi_major = -1.0 / (2.0 * energy);
    let angular_momentum =
        spec.direction.momentum_sign() * ((1.0 - e * e) / (-2.0 * energy)).sqrt();
    OrbitParams {
        spec: *spec,
        energy,
        semi_major,
        angular_momentum,
        r_min: (1.0 - e) / (-2.0 * energy),
        r_max: (1.0 + e) / (-2.0 * energy),
        period: 2.0 * PI * spec.l as f64,
        jacobi: energy + angular_momentum,
    }
}

/// Solve Kepler's equation u - e sin u = M for the eccentric anomaly.
///
/// Newton iteration seeded at u = M + e sin M, falling back to a bisection
/// step whenever Newton leaves the bracket [M - e, M + e]. The returned
/// branch is continuous and monotone in M.
pub fn solve_kepler(mean_anomaly: f64, e: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&e) {
        return Err(Error::InvalidSpec(format!(
            "eccentricity must lie in [0, 1), got {e}"
        )));
    }
    // reduce to M in [-pi, pi]; u shifts by the same multiple of 2 pi
    let turns = (mean_anomaly / (2.0 * PI)).round();
    let m = mean_anomaly - 2.0 * PI * turns;
    let mut lo = m - e;
    let mut hi = m + e;
    let mut u = m + e * m.sin();
    for _ in 0..100 {
        let f = u - e * u.sin() - m;
        if f.abs() < 1e-13 {
            return Ok(u + 2.0 * PI * turns);
        }
        if f > 0.0 {
            hi = u;
        } else {
            lo = u;
        }
        let step = f / (1.0 - e * u.cos());
        let newton = u - step;
        u = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(Error::numerical(
        "solve_kepler",
        format!("no convergence for M={mean_anomaly}, e={e}"),
    ))
}

/// Inertial Kepler ellipse position at time `t`, perihelion at t = 0 on the
/// positive x-axis. Traversal sense follows the sign of the angular momentum.
pub fn inertial_position(t: f64, params: &OrbitParams) -> Result<Point2> {
    let spec = params.spec;
    let u = solve_kepler(params.mean_motion() * t, spec.e)?;
    let a = params.semi_major;
    let sigma = spec.direction.momentum_sign();
    Ok(Point2::new(
        a * (u.cos() - spec.e),
        sigma * a * (1.0 - spec.e * spec.e).sqrt() * u.sin(),
    ))
}

/// Rotating-frame position: exp(i t) times the inertial one.
pub fn rotating_position(t: f64, params: &OrbitParams) -> Result<Point2> {
    Ok(inertial_position(t, params)?.rotated(t))
}

/// Default sampling density for `sample_orbit`.
pub fn default_samples(k: u32, l: u32) -> usize {
    let layers = (k as i64 - l as i64).unsigned_abs() as usize + l as usize;
    (1024 * k as usize * layers).max(4096)
}

/// Sample the rotating-frame orbit into a closed polyline, uniform in t over
/// one period. The vertex count is rounded up to a multiple of k so the
/// polyline inherits the orbit's exact dihedral symmetry, which pins double
/// points onto the rays j*pi/k to machine precision.
pub fn sample_orbit(spec: &TorusOrbitSpec, n_samples: usize) -> Result<PolylineCurve> {
    let params = orbit_params(spec);
    let k = spec.k as usize;
    let n = ((n_samples.max(3 * k) + k - 1) / k) * k;
    let mut vertices = Vec::with_capacity(n);
    for i in 0..n {
        let t = params.period * i as f64 / n as f64;
        vertices.push(rotating_position(t, &params)?);
    }
    PolylineCurve::new(vertices)
}

/// Eccentricity at which a direct orbit touches the Hill boundary: the root
/// of 8 (1 -+ e) E^3 + (1 +- e)^3 = 0, i.e. the I-infinity threshold for
/// k > l and the I-minus-infinity threshold for k < l.
pub fn critical_eccentricity(k: u32, l: u32) -> Result<f64> {
    if k == l {
        return Err(Error::InvalidSpec(
            "critical eccentricity requires k != l".into(),
        ));
    }
    // 8 E^3 = -(k/l)^2, so the defining cubics reduce to
    //   (1+e)^3 = (k/l)^2 (1-e)   (k > l)
    //   (1-e)^3 = (k/l)^2 (1+e)   (k < l)
    let q = (k as f64 / l as f64).powi(2);
    let e = if k > l {
        newton_bisect(
            |e| (1.0 + e).powi(3) - q * (1.0 - e),
            |e| 3.0 * (1.0 + e).powi(2) + q,
            0.0,
            1.0,
            1e-14,
            200,
            "critical_eccentricity",
        )?
    } else {
        newton_bisect(
            |e| (1.0 - e).powi(3) - q * (1.0 + e),
            |e| -3.0 * (1.0 - e).powi(2) - q,
            0.0,
            1.0,
            1e-14,
            200,
            "critical_eccentricity",
        )?
    };
    let energy = torus_energy(k, l);
    let residual = if k > l {
        8.0 * (1.0 - e) * energy.powi(3) + (1.0 + e).powi(3)
    } else {
        8.0 * (1.0 + e) * energy.powi(3) + (1.0 - e).powi(3)
    };
    if residual.abs() >= ROOT_TOL || !(0.0..1.0).contains(&e) {
        return Err(Error::numerical(
            "critical_eccentricity",
            format!("root check failed: e={e}, residual={residual}"),
        ));
    }
    Ok(e)
}

/// Radii of the Hill-region boundary circles for a Jacobi energy below the
/// critical value: the two roots r1 < 1 < r2 of -1/r - r^2/2 = c.
pub fn hill_radii(c: f64) -> Result<(f64, f64)> {
    if c >= CRITICAL_JACOBI_ENERGY {
        return Err(Error::InvalidSpec(format!(
            "no Hill boundary for c = {c} >= -3/2: the Hill region is all of the punctured plane"
        )));
    }
    let f = |r: f64| -1.0 / r - 0.5 * r * r;
    let df = |r: f64| 1.0 / (r * r) - r;
    let lo = (-1.0 / (2.0 * c)).min(0.5);
    let r1 = newton_bisect(|r| f(r) - c, df, lo, 1.0, ROOT_TOL, 200, "hill_radii")?;
    let hi = (2.0 * (-c)).sqrt() * 1.5 + 1.0;
    let r2 = newton_bisect(|r| f(r) - c, df, 1.0, hi, ROOT_TOL, 200, "hill_radii")?;
    debug_assert!(r1 < 1.0 && 1.0 < r2);
    Ok((r1, r2))
}

/// Kepler energies of the three circular orbits on the level c < -3/2: the
/// roots of 2E(c - E)^2 + 1 = 0 ordered E_retro < E_direct < -1/2 <
/// E_direct_unbounded < 0, together with their angular momenta.
pub fn circular_kepler_energies(c: f64) -> Result<(f64, f64, f64)> {
    if c >= CRITICAL_JACOBI_ENERGY {
        return Err(Error::InvalidSpec(format!(
            "2E(c-E)^2 + 1 = 0 has fewer than three roots for c = {c} >= -3/2"
        )));
    }
    let g = |en: f64| 2.0 * en * (c - en) * (c - en) + 1.0;
    let dg = |en: f64| 2.0 * (c - en) * (c - en) - 4.0 * en * (c - en);
    let stage = "circular_kepler_energies";
    let e_retro = newton_bisect(g, dg, 2.0 * c, c, ROOT_TOL, 200, stage)?;
    let e_direct = newton_bisect(g, dg, c, -0.5, ROOT_TOL, 200, stage)?;
    let e_direct_u = newton_bisect(g, dg, -0.5, -1e-15, ROOT_TOL, 200, stage)?;
    Ok((e_retro, e_direct, e_direct_u))
}

/// Angular momentum of a circular orbit of Kepler energy `energy`, signed by
/// direction: -1/sqrt(-2E) for direct, +1/sqrt(-2E) for retrograde.
pub fn circular_momentum(energy: f64, direction: Direction) -> f64 {
    direction.momentum_sign() / (-2.0 * energy).sqrt()
}

/// Periods, Jacobi energies, angular velocities and cover multiplicities of
/// the circular orbits bounding the T_{k,l}-torus family.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CircularData {
    pub tau_direct: f64,
    pub tau_retro: f64,
    pub c_direct: f64,
    pub c_retro: f64,
    pub theta_dot_direct: f64,
    pub theta_dot_retro: f64,
    /// The family bifurcates from a |k-l|-fold covered direct circular orbit.
    pub cover_direct: u32,
    /// The family ends at a (k+l)-fold covered retrograde circular orbit.
    pub cover_retro: u32,
}

pub fn circular_data(k: u32, l: u32) -> Result<CircularData> {
    if k == l {
        return Err(Error::InvalidSpec("circular data requires k != l".into()));
    }
    let energy = torus_energy(k, l);
    let kf = k as f64;
    let lf = l as f64;
    Ok(CircularData {
        tau_direct: 2.0 * PI * lf / (kf - lf).abs(),
        tau_retro: 2.0 * PI * lf / (kf + lf),
        c_direct: energy - 1.0 / (-2.0 * energy).sqrt(),
        c_retro: energy + 1.0 / (-2.0 * energy).sqrt(),
        theta_dot_direct: 1.0 - kf / lf,
        theta_dot_retro: 1.0 + kf / lf,
        cover_direct: k.abs_diff(l),
        cover_retro: k + l,
    })
}

/// Radius of the only circle on which self-tangencies can occur,
/// sqrt(-L). None for retrograde orbits (L >= 0), which admit none.
pub fn tangency_radius(params: &OrbitParams) -> Option<f64> {
    if params.angular_momentum < 0.0 {
        Some((-params.angular_momentum).sqrt())
    } else {
        None
    }
}

/// First-order-in-e approximation of the rotating orbit:
/// zeta(t) = a (-2e + (1 + e cos(kt/l)) exp(i k t / l)), rotated by +t for
/// retrograde and -t for direct orbits. Accurate to O(e^2) only.
pub fn approx_orbit(spec: &TorusOrbitSpec, t: f64) -> Point2 {
    let params = orbit_params(spec);
    let a = params.semi_major;
    let e = spec.e;
    let phase = params.mean_motion() * t;
    let zeta =
        (Point2::new(-2.0 * e, 0.0) + Point2::from_polar(1.0 + e * phase.cos(), phase)) * a;
    match spec.direction {
        Direction::Retrograde => zeta.rotated(t),
        Direction::Direct => zeta.rotated(-t),
    }
}

/// Sample the linearized orbit into a closed polyline (for cross-checks
/// against `sample_orbit` at small eccentricity).
pub fn sample_approx_orbit(spec: &TorusOrbitSpec, n_samples: usize) -> Result<PolylineCurve> {
    let k = spec.k as usize;
    let n = ((n_samples.max(3 * k) + k - 1) / k) * k;
    let period = 2.0 * PI * spec.l as f64;
    let vertices = (0..n)
        .map(|i| approx_orbit(spec, period * i as f64 / n as f64))
        .collect();
    PolylineCurve::new(vertices)
}
