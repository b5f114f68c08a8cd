//! Self-intersection detection for closed polylines.
//!
//! Candidate segment pairs come from an x-interval sweep (sort by minimum x,
//! scan forward while intervals overlap); surviving pairs go through the
//! exact segment kernel. Raw hits are then clustered into double points,
//! merging the duplicates that appear when a crossing falls on or next to a
//! shared vertex.

use crate::curve::PolylineCurve;
use crate::error::{Error, Result};
use crate::geom::{segment_intersection, Point2};
use serde::Serialize;

/// A transverse self-intersection of a closed polyline.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DoublePoint {
    pub location: Point2,
    /// Curve parameter of the earlier strand pass (segment index + fraction).
    pub t_first: f64,
    /// Curve parameter of the later strand pass.
    pub t_second: f64,
    /// Index (mean of the four incident face windings); filled by the
    /// arrangement, `None` straight out of detection.
    pub index: Option<i64>,
}

/// Tolerances of the intersection kernel.
#[derive(Clone, Copy, Debug)]
pub struct Tolerances {
    /// Double points closer than `merge_scale * diameter` are merged.
    pub merge_scale: f64,
    /// Crossings with |sin(angle)| below this are rejected as near-tangent.
    pub min_crossing_sine: f64,
    /// Slack on the segment parameters when accepting a hit.
    pub param_eps: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            merge_scale: 1e-9,
            min_crossing_sine: 1e-4,
            param_eps: 1e-9,
        }
    }
}

impl Tolerances {
    /// Accept every transverse crossing no matter how shallow; used by the
    /// homotopy scan when probing across a self-tangency.
    pub fn relaxed() -> Self {
        Tolerances {
            min_crossing_sine: 0.0,
            ..Tolerances::default()
        }
    }
}

struct RawHit {
    t1: f64,
    t2: f64,
    point: Point2,
}

/// All transverse self-intersections of `curve`, deduplicated and sorted by
/// first parameter. Near-tangential crossings produce an error naming the
/// location: they signal an eccentricity too close to a tangency event or
/// insufficient sampling.
pub fn find_double_points(curve: &PolylineCurve, tol: &Tolerances) -> Result<Vec<DoublePoint>> {
    let hits = raw_hits(curve, tol)?;
    cluster_hits(curve, hits, tol)
}

fn raw_hits(curve: &PolylineCurve, tol: &Tolerances) -> Result<Vec<RawHit>> {
    let n = curve.len();
    let v = curve.vertices();
    let seg = |i: usize| (v[i], v[(i + 1) % n]);

    let mut order: Vec<u32> = (0..n as u32).collect();
    let min_x = |i: usize| {
        let (a, b) = seg(i);
        a.x.min(b.x)
    };
    order.sort_unstable_by(|&i, &j| {
        min_x(i as usize)
            .partial_cmp(&min_x(j as usize))
            .expect("finite coordinates")
    });

    let mut hits = Vec::new();
    for (pos, &iu) in order.iter().enumerate() {
        let i = iu as usize;
        let (a0, a1) = seg(i);
        let (ax_max, ay_min, ay_max) = (a0.x.max(a1.x), a0.y.min(a1.y), a0.y.max(a1.y));
        for &ju in &order[pos + 1..] {
            let j = ju as usize;
            let (b0, b1) = seg(j);
            if b0.x.min(b1.x) > ax_max {
                break;
            }
            // cyclically adjacent segments share a vertex, not a crossing
            let d = if i > j { i - j } else { j - i };
            if d <= 1 || d == n - 1 {
                continue;
            }
            if b0.y.max(b1.y) < ay_min || b0.y.min(b1.y) > ay_max {
                continue;
            }
            let Some(hit) = segment_intersection(a0, a1, b0, b1, tol.param_eps) else {
                continue;
            };
            if hit.sine < tol.min_crossing_sine {
                return Err(Error::numerical(
                    "find_double_points",
                    format!(
                        "near-tangential self-intersection at ({:.9}, {:.9}) \
                         (|sin| = {:.3e}): eccentricity too close to a tangency event \
                         or sampling too coarse",
                        hit.point.x, hit.point.y, hit.sine
                    ),
                ));
            }
            let (lo, hi) = if i < j { (i, j) } else { (j, i) };
            let (s_lo, s_hi) = if i < j { (hit.s, hit.t) } else { (hit.t, hit.s) };
            hits.push(RawHit {
                t1: lo as f64 + s_lo.clamp(0.0, 1.0),
                t2: hi as f64 + s_hi.clamp(0.0, 1.0),
                point: hit.point,
            });
        }
    }
    Ok(hits)
}

fn cluster_hits(
    curve: &PolylineCurve,
    hits: Vec<RawHit>,
    tol: &Tolerances,
) -> Result<Vec<DoublePoint>> {
    let n = curve.len() as f64;
    let merge_tol = tol.merge_scale * curve.diameter();
    // greedy clustering by location; double-point counts are small
    let mut clusters: Vec<(Point2, Vec<f64>)> = Vec::new();
    'outer: for hit in hits {
        for (center, params) in clusters.iter_mut() {
            if (center.x - hit.point.x).abs() <= merge_tol
                && (center.y - hit.point.y).abs() <= merge_tol
            {
                params.push(hit.t1);
                params.push(hit.t2);
                continue 'outer;
            }
        }
        clusters.push((hit.point, vec![hit.t1, hit.t2]));
    }

    let mut out = Vec::with_capacity(clusters.len());
    for (point, mut params) in clusters {
        params.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite params"));
        // split the sorted parameters into passes: a gap above one segment
        // separates two strands
        let mut groups: Vec<Vec<f64>> = vec![vec![params[0]]];
        for &t in &params[1..] {
            let last = *groups.last().unwrap().last().unwrap();
            if t - last > 1.0 {
                groups.push(vec![t]);
            } else {
                groups.last_mut().unwrap().push(t);
            }
        }
        // cyclic wrap: a group touching the end of the parameter range may
        // continue at the start
        if groups.len() > 2 {
            let first_lo = groups[0][0];
            let last_hi = *groups.last().unwrap().last().unwrap();
            if first_lo + n - last_hi <= 1.0 {
                let wrapped: Vec<f64> = groups.pop().unwrap().iter().map(|t| t - n).collect();
                let mut merged = wrapped;
                merged.extend(groups.remove(0).iter().copied());
                groups.insert(0, merged);
            }
        }
        if groups.len() != 2 {
            return Err(Error::numerical(
                "find_double_points",
                format!(
                    "crossing at ({:.9}, {:.9}) clusters into {} strands instead of 2; \
                     sampling too coarse or tolerance breakdown",
                    point.x, point.y,
                    groups.len()
                ),
            ));
        }
        let mean = |g: &[f64]| (g.iter().sum::<f64>() / g.len() as f64).rem_euclid(n);
        let (mut ta, mut tb) = (mean(&groups[0]), mean(&groups[1]));
        if ta > tb {
            std::mem::swap(&mut ta, &mut tb);
        }
        out.push(DoublePoint {
            location: point,
            t_first: ta,
            t_second: tb,
            index: None,
        });
    }
    out.sort_by(|a, b| a.t_first.partial_cmp(&b.t_first).expect("finite params"));
    Ok(out)
}
