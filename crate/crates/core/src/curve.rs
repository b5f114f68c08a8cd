//! Closed polygonal curves and the combinatorial curve generators: standard
//! curves K_j and the marked-point schematic of torus orbits.

use crate::error::{Error, Result};
use crate::geom::{point_segment_distance, Point2};
use crate::kepler::{gcd, Direction};
use std::f64::consts::PI;

/// A closed oriented polygonal curve, vertices interpreted cyclically.
#[derive(Clone, Debug)]
pub struct PolylineCurve {
    vertices: Vec<Point2>,
}

impl PolylineCurve {
    /// Validates: at least 3 vertices, consecutive vertices distinct
    /// (including the closing edge), all finite, no vertex exactly at the
    /// origin.
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidSpec(format!(
                "a closed polyline needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        for (i, v) in vertices.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::InvalidSpec(format!("vertex {i} is not finite")));
            }
            if v.x == 0.0 && v.y == 0.0 {
                return Err(Error::InvalidSpec(format!(
                    "vertex {i} sits exactly at the origin"
                )));
            }
            let next = vertices[(i + 1) % vertices.len()];
            if v.x == next.x && v.y == next.y {
                return Err(Error::InvalidSpec(format!(
                    "vertices {i} and {} coincide",
                    (i + 1) % vertices.len()
                )));
            }
        }
        Ok(PolylineCurve { vertices })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> Point2 {
        self.vertices[i % self.vertices.len()]
    }

    /// Point at global parameter t in [0, n), linear on each segment.
    pub fn point_at(&self, t: f64) -> Point2 {
        let n = self.vertices.len();
        let tw = t.rem_euclid(n as f64);
        let i = tw.floor() as usize % n;
        let f = tw - tw.floor();
        let a = self.vertices[i];
        let b = self.vertices[(i + 1) % n];
        a + (b - a) * f
    }

    pub fn bbox(&self) -> (Point2, Point2) {
        let mut lo = self.vertices[0];
        let mut hi = self.vertices[0];
        for v in &self.vertices {
            lo.x = lo.x.min(v.x);
            lo.y = lo.y.min(v.y);
            hi.x = hi.x.max(v.x);
            hi.y = hi.y.max(v.y);
        }
        (lo, hi)
    }

    /// Bounding-box diagonal, the length scale for tolerances.
    pub fn diameter(&self) -> f64 {
        let (lo, hi) = self.bbox();
        (hi - lo).norm()
    }

    pub fn min_radius(&self) -> f64 {
        self.vertices
            .iter()
            .map(|v| v.norm())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_radius(&self) -> f64 {
        self.vertices.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Twice the signed area enclosed (shoelace; orientation sign).
    pub fn signed_area2(&self) -> f64 {
        let n = self.vertices.len();
        let mut acc = 0.0;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            acc += a.cross(b);
        }
        acc
    }

    pub fn reversed(&self) -> PolylineCurve {
        let mut v = self.vertices.clone();
        v.reverse();
        PolylineCurve { vertices: v }
    }

    pub fn rotated(&self, theta: f64) -> PolylineCurve {
        PolylineCurve {
            vertices: self.vertices.iter().map(|v| v.rotated(theta)).collect(),
        }
    }

    pub fn translated(&self, offset: Point2) -> PolylineCurve {
        PolylineCurve {
            vertices: self.vertices.iter().map(|&v| v + offset).collect(),
        }
    }

    pub fn scaled(&self, factor: f64) -> PolylineCurve {
        PolylineCurve {
            vertices: self.vertices.iter().map(|&v| v * factor).collect(),
        }
    }

    /// Minimum distance from `p` to the curve.
    pub fn distance_to(&self, p: Point2) -> f64 {
        let n = self.vertices.len();
        let mut best = f64::INFINITY;
        for i in 0..n {
            let d = point_segment_distance(p, self.vertices[i], self.vertices[(i + 1) % n]);
            best = best.min(d);
        }
        best
    }

}

/// Signed winding number of the curve around `p` by counting signed ray
/// crossings. Errors when `p` lies within 1e-9 of the curve (relative to its
/// diameter).
pub fn winding_at(curve: &PolylineCurve, p: Point2) -> Result<i64> {
    let tol = 1e-9 * curve.diameter();
    if curve.distance_to(p) <= tol {
        return Err(Error::numerical(
            "winding_at",
            format!("point ({}, {}) lies on the curve", p.x, p.y),
        ));
    }
    Ok(winding_at_unchecked(curve, p))
}

pub(crate) fn winding_at_unchecked(curve: &PolylineCurve, p: Point2) -> i64 {
    let n = curve.len();
    let v = curve.vertices();
    let mut w = 0i64;
    for i in 0..n {
        let a = v[i];
        let b = v[(i + 1) % n];
        if a.y <= p.y {
            if b.y > p.y && (b - a).cross(p - a) > 0.0 {
                w += 1;
            }
        } else if b.y <= p.y && (b - a).cross(p - a) < 0.0 {
            w -= 1;
        }
    }
    w
}

/// Whitney rotation number: total turning of the edge directions divided by
/// 2 pi. Errors when the rounding residual exceeds 0.01.
pub fn rotation_number(curve: &PolylineCurve) -> Result<i64> {
    let n = curve.len();
    let v = curve.vertices();
    let mut total = 0.0;
    let mut prev = (v[1] - v[0]).arg();
    for i in 1..=n {
        let d = v[(i + 1) % n] - v[i % n];
        let ang = d.arg();
        let mut delta = ang - prev;
        while delta > PI {
            delta -= 2.0 * PI;
        }
        while delta < -PI {
            delta += 2.0 * PI;
        }
        total += delta;
        prev = ang;
    }
    let turns = total / (2.0 * PI);
    let rounded = turns.round();
    if (turns - rounded).abs() >= 0.01 {
        return Err(Error::numerical(
            "rotation_number",
            format!("turning {turns} is not close to an integer; curve under-sampled?"),
        ));
    }
    Ok(rounded as i64)
}

/// Standard curve K_j with the default sampling density.
///
/// K_0 is the figure eight, K_1 the circle, and K_j for j >= 2 a circle with
/// j - 1 interior loops realized as the epitrochoid
/// `exp(i t) + c exp(i j t)` with `c = 2/(j+1)`; its rotation number is j.
pub fn standard_curve(j: u32) -> PolylineCurve {
    standard_curve_with(j, 1024)
}

pub fn standard_curve_with(j: u32, n: usize) -> PolylineCurve {
    let n = n.max(64);
    let mut vertices = Vec::with_capacity(n);
    for i in 0..n {
        let t = 2.0 * PI * i as f64 / n as f64;
        let v = match j {
            // figure eight, shifted off the origin
            0 => Point2::new((2.0 * t).sin() + 3.0, t.sin()),
            1 => Point2::from_polar(1.0, t),
            _ => {
                let c = 2.0 / (j as f64 + 1.0);
                Point2::from_polar(1.0, t) + Point2::from_polar(c, j as f64 * t)
            }
        };
        vertices.push(v);
    }
    PolylineCurve::new(vertices).expect("standard curve construction")
}

/// Piecewise-linear schematic of a T_{k,l}-type orbit built from the marked
/// points on the rays theta = j pi / k, reproducing the double-point count,
/// layer structure and windings of a safe-regime orbit.
///
/// Marked radii interleave as 1, 2, ..., m+1 where m = |k-l| for direct and
/// m = k+l for retrograde orbits; consecutive marked points are joined by
/// paths linear in polar coordinates and every marked corner is cut by a
/// short circular fillet so all crossings are transverse and sit in segment
/// interiors.
pub fn schematic_orbit(k: u32, l: u32, direction: Direction) -> Result<PolylineCurve> {
    if k == 0 || l == 0 || gcd(k, l) != 1 || (k == 1 && l == 1) {
        return Err(Error::InvalidSpec(format!(
            "schematic requires coprime (k, l) != (1, 1), got ({k}, {l})"
        )));
    }
    let m = match direction {
        Direction::Direct => k.abs_diff(l) as usize,
        Direction::Retrograde => (k + l) as usize,
    };
    // direct k > l orbits sweep clockwise; everything else counterclockwise
    let ray_step = if direction == Direction::Direct && k > l {
        -1.0
    } else {
        1.0
    };
    let kf = k as f64;
    let steps = 2 * m * k as usize;
    const SUBSTEPS: usize = 12;
    const FILLET: f64 = 1e-3;

    let radius = |step: usize| -> f64 {
        let p = step % (2 * m);
        let iota = p.min(2 * m - p);
        1.0 + iota as f64
    };
    // polar-linear interpolation between consecutive marked points
    let mut pts: Vec<Point2> = Vec::with_capacity(steps * SUBSTEPS);
    let mut marked: Vec<bool> = Vec::with_capacity(steps * SUBSTEPS);
    for i in 0..steps {
        let r0 = radius(i);
        let r1 = radius(i + 1);
        let th0 = ray_step * i as f64 * PI / kf;
        let th1 = ray_step * (i + 1) as f64 * PI / kf;
        for s in 0..SUBSTEPS {
            let f = s as f64 / SUBSTEPS as f64;
            pts.push(Point2::from_polar(r0 + f * (r1 - r0), th0 + f * (th1 - th0)));
            marked.push(s == 0);
        }
    }
    // fillet the marked corners: both passes through an interior marked
    // point get cut, and the transversal crossing moves into segment
    // interiors near the original point
    let n = pts.len();
    let mut out: Vec<Point2> = Vec::with_capacity(n + steps);
    for i in 0..n {
        if !marked[i] {
            out.push(pts[i]);
            continue;
        }
        let prev = pts[(i + n - 1) % n];
        let next = pts[(i + 1) % n];
        let dp = prev - pts[i];
        let dn = next - pts[i];
        let cut = FILLET * dp.norm().min(dn.norm());
        out.push(pts[i] + dp.normalized() * cut);
        out.push(pts[i] + dn.normalized() * cut);
    }
    PolylineCurve::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(n: usize, r: f64, ccw: bool) -> PolylineCurve {
        let sign = if ccw { 1.0 } else { -1.0 };
        PolylineCurve::new(
            (0..n)
                .map(|i| Point2::from_polar(r, sign * 2.0 * PI * i as f64 / n as f64))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn polyline_validation() {
        assert!(PolylineCurve::new(vec![Point2::new(1.0, 0.0), Point2::new(0.0, 1.0)]).is_err());
        assert!(PolylineCurve::new(vec![
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 0.0),
            Point2::new(0.0, 1.0),
        ])
        .is_err());
        assert!(PolylineCurve::new(vec![
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
        ])
        .is_err());
        assert!(PolylineCurve::new(vec![
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
            Point2::new(-1.0, 0.5),
        ])
        .is_ok());
    }

    #[test]
    fn winding_numbers_of_circles() {
        let c = circle(128, 1.0, true);
        assert_eq!(winding_at(&c, Point2::origin()).unwrap(), 1);
        assert_eq!(winding_at(&c, Point2::new(40.0, 3.0)).unwrap(), 0);
        let c = circle(128, 1.0, false);
        assert_eq!(winding_at(&c, Point2::origin()).unwrap(), -1);
        assert!(winding_at(&c, Point2::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn rotation_numbers() {
        assert_eq!(rotation_number(&circle(256, 1.0, true)).unwrap(), 1);
        assert_eq!(rotation_number(&circle(256, 1.0, false)).unwrap(), -1);
        assert_eq!(rotation_number(&standard_curve(0)).unwrap(), 0);
        for j in 1..=6u32 {
            assert_eq!(rotation_number(&standard_curve(j)).unwrap(), j as i64, "K_{j}");
        }
    }

    #[test]
    fn point_at_wraps() {
        let c = circle(4, 1.0, true);
        let p = c.point_at(0.5);
        assert!((p.x - 0.5).abs() < 1e-12 && (p.y - 0.5).abs() < 1e-12);
        assert!(c.point_at(4.5).dist(p) < 1e-12);
        assert!(c.point_at(-3.5).dist(p) < 1e-12);
    }

    #[test]
    fn transforms_preserve_vertex_count() {
        let c = standard_curve(3);
        assert_eq!(c.reversed().len(), c.len());
        assert_eq!(c.rotated(1.0).len(), c.len());
        assert_eq!(c.translated(Point2::new(5.0, -2.0)).len(), c.len());
        assert_eq!(c.scaled(2.0).len(), c.len());
        assert!(c.signed_area2() > 0.0);
        assert!(c.reversed().signed_area2() < 0.0);
    }

    #[test]
    fn schematic_rejects_bad_input() {
        assert!(schematic_orbit(4, 2, Direction::Direct).is_err());
        assert!(schematic_orbit(1, 1, Direction::Direct).is_err());
        assert!(schematic_orbit(0, 1, Direction::Direct).is_err());
    }

    #[test]
    fn schematic_windings() {
        let c = schematic_orbit(5, 2, Direction::Direct).unwrap();
        assert_eq!(winding_at(&c, Point2::origin()).unwrap(), -3);
        let c = schematic_orbit(4, 7, Direction::Direct).unwrap();
        assert_eq!(winding_at(&c, Point2::origin()).unwrap(), 3);
        let c = schematic_orbit(2, 1, Direction::Retrograde).unwrap();
        assert_eq!(winding_at(&c, Point2::origin()).unwrap(), 3);
        // degenerate-looking k = 1 case still builds a valid immersion
        let c = schematic_orbit(1, 2, Direction::Direct).unwrap();
        assert_eq!(winding_at(&c, Point2::origin()).unwrap(), 1);
    }
}
