//! Plane points and the segment-intersection primitive.

use serde::Serialize;
use std::ops::{Add, Mul, Neg, Sub};

/// A point (or vector) in the plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub const fn origin() -> Self {
        Point2 { x: 0.0, y: 0.0 }
    }

    pub fn from_polar(r: f64, theta: f64) -> Self {
        Point2::new(r * theta.cos(), r * theta.sin())
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the cross product, positive when `other` is
    /// counterclockwise from `self`.
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dist(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    /// Argument in (-pi, pi].
    pub fn arg(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn rotated(self, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Point2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn normalized(self) -> Self {
        let n = self.norm();
        Point2::new(self.x / n, self.y / n)
    }

    /// Left-hand normal (rotation by +pi/2).
    pub fn left_normal(self) -> Self {
        Point2::new(-self.y, self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, rhs: f64) -> Point2 {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

/// Proper intersection of segments `a0..a1` and `b0..b1`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct SegHit {
    /// Parameter along the first segment, in [0, 1] up to `param_eps`.
    pub s: f64,
    /// Parameter along the second segment.
    pub t: f64,
    pub point: Point2,
    /// |sin| of the crossing angle; 0 means parallel.
    pub sine: f64,
}

/// Intersect two segments. Returns `None` when they miss or are parallel and
/// disjoint; parallel overlapping segments come back with `sine == 0` so the
/// caller can reject them as a tangency.
pub(crate) fn segment_intersection(
    a0: Point2,
    a1: Point2,
    b0: Point2,
    b1: Point2,
    param_eps: f64,
) -> Option<SegHit> {
    let d1 = a1 - a0;
    let d2 = b1 - b0;
    let denom = d1.cross(d2);
    let r = b0 - a0;
    let n1 = d1.norm();
    let n2 = d2.norm();
    if denom.abs() <= 1e-14 * n1 * n2 {
        // Parallel. Overlapping collinear segments are a degenerate contact.
        if r.cross(d1).abs() <= 1e-12 * n1 * (r.norm() + n2) {
            let proj = |p: Point2| (p - a0).dot(d1) / d1.norm_sq();
            let (t0, t1) = (proj(b0), proj(b1));
            let lo = t0.min(t1);
            let hi = t0.max(t1);
            if hi >= -param_eps && lo <= 1.0 + param_eps {
                return Some(SegHit {
                    s: lo.clamp(0.0, 1.0),
                    t: 0.0,
                    point: a0 + d1 * lo.clamp(0.0, 1.0),
                    sine: 0.0,
                });
            }
        }
        return None;
    }
    let s = r.cross(d2) / denom;
    let t = r.cross(d1) / denom;
    if s < -param_eps || s > 1.0 + param_eps || t < -param_eps || t > 1.0 + param_eps {
        return None;
    }
    Some(SegHit {
        s,
        t,
        point: a0 + d1 * s,
        sine: denom.abs() / (n1 * n2),
    })
}

/// Distance from `p` to the segment `a..b`.
pub(crate) fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let d = b - a;
    let len_sq = d.norm_sq();
    if len_sq == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(d) / len_sq).clamp(0.0, 1.0);
    p.dist(a + d * t)
}
