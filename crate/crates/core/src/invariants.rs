//! The Stark-Zeeman invariants of a curve avoiding the origin: J1 (winding
//! corrected J+) and J2 (J+ of the Levi-Civita square-root preimage), plus
//! the end-to-end orbit pipeline.

use crate::arrangement::{build_arrangement, j_plus};
use crate::closed_form::{closed_form_triple, regime_of, ClosedFormTriple, Regime};
use crate::curve::{winding_at, PolylineCurve};
use crate::error::{Error, Result};
use crate::geom::Point2;
use crate::intersect::{find_double_points, Tolerances};
use crate::kepler::{critical_eccentricity, default_samples, sample_orbit, TorusOrbitSpec};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

/// An exact half-integer, stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Half {
    twice: i64,
}

impl Half {
    pub fn from_twice(twice: i64) -> Self {
        Half { twice }
    }

    pub fn from_int(v: i64) -> Self {
        Half { twice: 2 * v }
    }

    pub fn twice(self) -> i64 {
        self.twice
    }

    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    /// Numerator of the reduced fraction.
    pub fn numer(self) -> i64 {
        if self.is_integer() {
            self.twice / 2
        } else {
            self.twice
        }
    }

    /// Denominator of the reduced fraction (1 or 2).
    pub fn denom(self) -> i64 {
        if self.is_integer() {
            1
        } else {
            2
        }
    }
}

impl std::fmt::Display for Half {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/2", self.numer())
        }
    }
}

impl Serialize for Half {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Half", 2)?;
        s.serialize_field("num", &self.numer())?;
        s.serialize_field("den", &self.denom())?;
        s.end()
    }
}

/// Guard bands around the degenerate eccentricities (0, the critical
/// threshold, and 1) inside which invariant computation is refused.
#[derive(Clone, Copy, Debug)]
pub struct Guards {
    pub near_zero: f64,
    pub near_threshold: f64,
    pub near_one: f64,
}

impl Default for Guards {
    fn default() -> Self {
        Guards {
            near_zero: 1e-3,
            near_threshold: 1e-3,
            near_one: 1e-3,
        }
    }
}

impl Guards {
    /// Reject eccentricities inside any guard band for the given spec.
    pub fn check(&self, spec: &TorusOrbitSpec) -> Result<()> {
        let e = spec.eccentricity();
        if e < self.near_zero {
            return Err(Error::GuardBand {
                e,
                reason: format!(
                    "within {} of the circular-orbit limit e = 0 (not a generic immersion)",
                    self.near_zero
                ),
            });
        }
        if 1.0 - e < self.near_one {
            return Err(Error::GuardBand {
                e,
                reason: format!(
                    "within {} of the collision torus e = 1",
                    self.near_one
                ),
            });
        }
        // cusps at the Hill boundary only happen on the direct branch
        if spec.direction() == crate::kepler::Direction::Direct {
            let e_crit = critical_eccentricity(spec.k(), spec.l())?;
            if (e - e_crit).abs() < self.near_threshold {
                return Err(Error::GuardBand {
                    e,
                    reason: format!(
                        "within {} of the cusp threshold e = {e_crit:.6}",
                        self.near_threshold
                    ),
                });
            }
        }
        Ok(())
    }
}

/// J1 = J+ + w0^2 / 2.
pub fn j1(curve: &PolylineCurve) -> Result<Half> {
    let inv = curve_invariants(curve, &Tolerances::default())?;
    Ok(inv.j1)
}

/// Lift the curve through the complex squaring map, tracking the square-root
/// branch continuously. Returns one component (odd winding about the origin;
/// the lift closes after two traversals) or two (even winding; the second is
/// the pointwise negation of the first).
pub fn levi_civita_preimage(curve: &PolylineCurve) -> Result<Vec<PolylineCurve>> {
    let v = curve.vertices();
    let n = v.len();
    // branch choice needs the angular step about the origin below pi/2
    for i in 0..n {
        let a = v[i];
        let b = v[(i + 1) % n];
        let angle = (a.cross(b)).atan2(a.dot(b)).abs();
        if angle >= FRAC_PI_2 {
            return Err(Error::numerical(
                "levi_civita_preimage",
                format!(
                    "consecutive vertices {i}, {} subtend {angle:.3} rad at the origin; \
                     square-root branch is ambiguous (under-sampled curve)",
                    (i + 1) % n
                ),
            ));
        }
    }
    let sqrt_point = |p: Point2| -> Point2 {
        let r = p.norm().sqrt();
        Point2::from_polar(r, 0.5 * p.arg())
    };
    let mut lift: Vec<Point2> = Vec::with_capacity(2 * n);
    lift.push(sqrt_point(v[0]));
    for i in 1..=n {
        let candidate = sqrt_point(v[i % n]);
        let prev = *lift.last().unwrap();
        if candidate.dist(prev) <= (-candidate).dist(prev) {
            lift.push(candidate);
        } else {
            lift.push(-candidate);
        }
        if i == n {
            break;
        }
    }
    let closing = lift.pop().expect("lift has n+1 points");
    let start = lift[0];
    if closing.dist(start) < (-closing).dist(start) {
        // closed after one traversal: two components, negatives of each other
        let comp1 = PolylineCurve::new(lift.clone())?;
        let comp2 = PolylineCurve::new(lift.into_iter().map(|p| -p).collect())?;
        Ok(vec![comp1, comp2])
    } else {
        // second traversal on the negated branch closes the lift
        let mut full = lift.clone();
        full.extend(lift.into_iter().map(|p| -p));
        Ok(vec![PolylineCurve::new(full)?])
    }
}

/// J2 = J+ of the Levi-Civita preimage (of one component when the preimage
/// splits; the two components are pi-rotations of each other, so the choice
/// does not matter).
pub fn j2(curve: &PolylineCurve) -> Result<i64> {
    let inv = curve_invariants(curve, &Tolerances::default())?;
    Ok(inv.j2)
}

/// All invariants of a single curve.
#[derive(Clone, Debug, Serialize)]
pub struct CurveInvariants {
    pub j_plus: i64,
    pub w0: i64,
    pub j1: Half,
    pub j2: i64,
    pub double_points: usize,
    pub faces: usize,
    pub preimage_components: usize,
    /// Double points of the analyzed preimage component.
    pub preimage_double_points: usize,
    pub preimage_faces: usize,
    pub preimage_w0: i64,
}

/// Run the full arrangement pipeline on one curve.
pub fn curve_invariants(curve: &PolylineCurve, tol: &Tolerances) -> Result<CurveInvariants> {
    let doubles = find_double_points(curve, tol)?;
    let arr = build_arrangement(curve, &doubles)?;
    let jp = j_plus(&arr);
    let w0 = winding_at(curve, Point2::origin())?;
    let j1 = Half::from_twice(2 * jp + w0 * w0);

    let components = levi_civita_preimage(curve)?;
    if (w0.rem_euclid(2) == 1) != (components.len() == 1) {
        return Err(Error::numerical(
            "levi_civita_preimage",
            format!(
                "lift has {} component(s) but the winding number {w0} demands {}",
                components.len(),
                if w0.rem_euclid(2) == 1 { 1 } else { 2 }
            ),
        ));
    }
    // deterministic component choice: starting vertex argument in [0, pi)
    let chosen = match components.len() {
        1 => &components[0],
        _ => {
            let arg = components[0].vertices()[0].arg();
            if (0.0..std::f64::consts::PI).contains(&arg) {
                &components[0]
            } else {
                &components[1]
            }
        }
    };
    let pre_doubles = find_double_points(chosen, tol)?;
    let pre_arr = build_arrangement(chosen, &pre_doubles)?;
    let pre_jp = j_plus(&pre_arr);
    let pre_w0 = winding_at(chosen, Point2::origin())?;

    // odd winding forces J2 = 2 J1 - 1
    if w0.rem_euclid(2) == 1 && pre_jp != j1.twice() - 1 {
        return Err(Error::numerical(
            "j2",
            format!(
                "parity relation violated: J2 = {pre_jp} but 2*J1 - 1 = {}",
                j1.twice() - 1
            ),
        ));
    }
    // preimage winding: w0 for a connected lift, w0/2 per component otherwise
    let expected_pre_w0 = if components.len() == 1 { w0 } else { w0 / 2 };
    if pre_w0 != expected_pre_w0 {
        return Err(Error::numerical(
            "levi_civita_preimage",
            format!("preimage winding {pre_w0}, expected {expected_pre_w0}"),
        ));
    }

    Ok(CurveInvariants {
        j_plus: jp,
        w0,
        j1,
        j2: pre_jp,
        double_points: arr.double_points.len(),
        faces: arr.faces.len(),
        preimage_components: components.len(),
        preimage_double_points: pre_arr.double_points.len(),
        preimage_faces: pre_arr.faces.len(),
        preimage_w0: pre_w0,
    })
}

/// Numeric invariants of one orbit next to their closed-form values.
#[derive(Clone, Debug, Serialize)]
pub struct InvariantReport {
    pub spec: TorusOrbitSpec,
    pub regime: Regime,
    pub j_plus: i64,
    pub w0: i64,
    pub j1: Half,
    pub j2: i64,
    pub double_points: usize,
    pub faces: usize,
    pub preimage_components: usize,
    pub preimage_double_points: usize,
    pub closed_form: ClosedFormTriple,
    /// True when the numeric triple equals the closed-form triple exactly.
    pub matches: bool,
}

/// Compute the invariants of a T_{k,l}-type orbit and compare them with the
/// closed-form oracle. `n_samples` defaults to the density formula; the
/// sampling is doubled (up to 4 times) whenever the Levi-Civita branch
/// continuity margin (angular step < pi/4) is not met.
pub fn invariant_report(
    spec: &TorusOrbitSpec,
    n_samples: Option<usize>,
    guards: &Guards,
) -> Result<InvariantReport> {
    guards.check(spec)?;
    let regime = regime_of(spec, guards)?;
    let mut n = n_samples.unwrap_or_else(|| default_samples(spec.k(), spec.l()));
    let mut curve = sample_orbit(spec, n)?;
    for _ in 0..4 {
        if max_angular_step(&curve) < FRAC_PI_4 {
            break;
        }
        n *= 2;
        curve = sample_orbit(spec, n)?;
    }
    let inv = curve_invariants(&curve, &Tolerances::default())?;
    if inv.w0 != spec.winding_number() {
        return Err(Error::numerical(
            "invariant_report",
            format!(
                "numeric winding {} disagrees with l - k / k + l = {}",
                inv.w0,
                spec.winding_number()
            ),
        ));
    }
    let closed = closed_form_triple(spec, guards)?;
    let matches = inv.j_plus == closed.j_plus && inv.j1 == closed.j1 && inv.j2 == closed.j2;
    Ok(InvariantReport {
        spec: *spec,
        regime,
        j_plus: inv.j_plus,
        w0: inv.w0,
        j1: inv.j1,
        j2: inv.j2,
        double_points: inv.double_points,
        faces: inv.faces,
        preimage_components: inv.preimage_components,
        preimage_double_points: inv.preimage_double_points,
        closed_form: closed,
        matches,
    })
}

fn max_angular_step(curve: &PolylineCurve) -> f64 {
    let v = curve.vertices();
    let n = v.len();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let a = v[i];
        let b = v[(i + 1) % n];
        worst = worst.max((a.cross(b)).atan2(a.dot(b)).abs());
    }
    worst
}
