//! Planar arrangement of a generic closed polyline: faces of the complement,
//! winding numbers, double-point indices, and Viro's formula for J+.
//!
//! The curve is split at its double points into arcs; the resulting 4-valent
//! planar graph is traversed with a half-edge rotation system (faces keep
//! their interior on the left). Face windings are propagated combinatorially
//! from the unbounded face — adjacent faces differ by exactly one across any
//! strand — and then cross-checked geometrically at a representative interior
//! point of every face.

use crate::curve::{winding_at_unchecked, PolylineCurve};
use crate::error::{Error, Result};
use crate::geom::Point2;
use crate::intersect::DoublePoint;
use serde::Serialize;

/// A connected component of the complement of the curve.
#[derive(Clone, Debug, Serialize)]
pub struct Face {
    pub id: usize,
    pub winding: i64,
    pub representative_point: Point2,
    pub is_unbounded: bool,
}

/// The arrangement of a generic immersion: double points with indices,
/// faces with windings, and the four incident faces of every double point.
#[derive(Clone, Debug)]
pub struct Arrangement {
    pub curve: PolylineCurve,
    pub double_points: Vec<DoublePoint>,
    pub faces: Vec<Face>,
    /// Face ids of the four sectors around each double point, in
    /// counterclockwise order.
    pub adjacency: Vec<[usize; 4]>,
}

impl Arrangement {
    pub fn unbounded_face(&self) -> &Face {
        self.faces
            .iter()
            .find(|f| f.is_unbounded)
            .expect("arrangement always has an unbounded face")
    }
}

/// Arnold's J+ via Viro's formula:
/// `1 + n - sum_faces w^2 + sum_double_points ind^2`.
pub fn j_plus(arr: &Arrangement) -> i64 {
    let n = arr.double_points.len() as i64;
    let faces: i64 = arr.faces.iter().map(|f| f.winding * f.winding).sum();
    let inds: i64 = arr
        .double_points
        .iter()
        .map(|d| {
            let ind = d.index.expect("indices are filled by build_arrangement");
            ind * ind
        })
        .sum();
    let value = 1 + n - faces + inds;
    debug_assert!(value % 2 == 0, "J+ must be even, got {value}");
    value
}

/// Build the arrangement of `curve` from its double points (as produced by
/// `find_double_points` on the same curve).
pub fn build_arrangement(curve: &PolylineCurve, doubles: &[DoublePoint]) -> Result<Arrangement> {
    if doubles.is_empty() {
        return embedded_arrangement(curve);
    }

    let n = curve.len() as f64;
    // split events along the curve: (parameter, node)
    let mut events: Vec<(f64, usize)> = Vec::with_capacity(2 * doubles.len());
    for (node, d) in doubles.iter().enumerate() {
        events.push((d.t_first, node));
        events.push((d.t_second, node));
    }
    events.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite params"));

    // arcs between consecutive events; arc points include both node locations
    let ne = events.len();
    let mut arcs: Vec<(usize, usize, Vec<Point2>)> = Vec::with_capacity(ne);
    for i in 0..ne {
        let (t0, node0) = events[i];
        let (t1_raw, node1) = events[(i + 1) % ne];
        let t1 = if i + 1 == ne { t1_raw + n } else { t1_raw };
        let mut pts = vec![doubles[node0].location];
        let first_vertex = t0.floor() as i64 + 1;
        let last_vertex = t1.floor() as i64;
        for vi in first_vertex..=last_vertex {
            pts.push(curve.vertex(vi.rem_euclid(n as i64) as usize));
        }
        pts.push(doubles[node1].location);
        // drop zero-length steps (crossing exactly at a vertex)
        let eps = 1e-13 * curve.diameter().max(1.0);
        let mut clean: Vec<Point2> = vec![pts[0]];
        for p in pts.into_iter().skip(1) {
            if p.dist(*clean.last().unwrap()) > eps {
                clean.push(p);
            }
        }
        if clean.len() < 2 {
            return Err(Error::numerical(
                "build_arrangement",
                "degenerate arc between double points (sampling too coarse)",
            ));
        }
        arcs.push((node0, node1, clean));
    }

    // half-edge rotation system: arc a gives the forward half-edge 2a
    // (curve orientation) and the backward half-edge 2a+1
    let nv = doubles.len();
    let mut out_at: Vec<Vec<(f64, usize)>> = vec![Vec::with_capacity(4); nv];
    for (a, (node0, node1, pts)) in arcs.iter().enumerate() {
        let dir_fwd = pts[1] - pts[0];
        let dir_bwd = pts[pts.len() - 2] - pts[pts.len() - 1];
        out_at[*node0].push((dir_fwd.arg(), 2 * a));
        out_at[*node1].push((dir_bwd.arg(), 2 * a + 1));
    }
    for (node, out) in out_at.iter_mut().enumerate() {
        if out.len() != 4 {
            return Err(Error::numerical(
                "build_arrangement",
                format!("double point {node} has degree {} instead of 4", out.len()),
            ));
        }
        out.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite angles"));
    }

    let head = |h: usize| -> usize {
        let (from, to, _) = &arcs[h / 2];
        if h % 2 == 0 {
            *to
        } else {
            *from
        }
    };
    // face successor: at the head of h, take the outgoing half-edge
    // clockwise-next from twin(h); faces keep their interior on the left
    let next = |h: usize| -> usize {
        let v = head(h);
        let twin = h ^ 1;
        let slots = &out_at[v];
        let idx = slots
            .iter()
            .position(|&(_, e)| e == twin)
            .expect("twin is an outgoing half-edge at the head");
        slots[(idx + 3) % 4].1
    };

    // enumerate faces as orbits of `next`
    let nh = 2 * arcs.len();
    let mut face_of = vec![usize::MAX; nh];
    let mut face_walks: Vec<Vec<usize>> = Vec::new();
    for h0 in 0..nh {
        if face_of[h0] != usize::MAX {
            continue;
        }
        let id = face_walks.len();
        let mut walk = Vec::new();
        let mut h = h0;
        while face_of[h] == usize::MAX {
            face_of[h] = id;
            walk.push(h);
            h = next(h);
        }
        if h != h0 {
            return Err(Error::numerical(
                "build_arrangement",
                "face traversal did not close up",
            ));
        }
        face_walks.push(walk);
    }
    let nf = face_walks.len();
    // Euler: a connected 4-valent graph with V nodes has V + 2 faces
    if nf != nv + 2 {
        return Err(Error::numerical(
            "build_arrangement",
            format!("face count {nf} != double points {nv} + 2; inconsistent topology"),
        ));
    }

    // face boundary geometry
    let walk_points = |walk: &[usize]| -> Vec<Point2> {
        let mut pts = Vec::new();
        for &h in walk {
            let (_, _, p) = &arcs[h / 2];
            if h % 2 == 0 {
                pts.extend_from_slice(&p[..p.len() - 1]);
            } else {
                for q in p[1..].iter().rev() {
                    pts.push(*q);
                }
            }
        }
        pts
    };
    let mut areas = vec![0.0f64; nf];
    for (id, walk) in face_walks.iter().enumerate() {
        let pts = walk_points(walk);
        let mut acc = 0.0;
        for i in 0..pts.len() {
            acc += pts[i].cross(pts[(i + 1) % pts.len()]);
        }
        areas[id] = 0.5 * acc;
    }
    let unbounded = areas
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).expect("finite areas"))
        .map(|(i, _)| i)
        .expect("at least one face");
    if areas[unbounded] >= 0.0 {
        return Err(Error::numerical(
            "build_arrangement",
            "no clockwise face walk found for the unbounded component",
        ));
    }

    // combinatorial windings: crossing the curve right-to-left raises the
    // winding by one, so across a forward half-edge w(left) = w(right) + 1
    let mut winding = vec![i64::MAX; nf];
    winding[unbounded] = 0;
    let mut stack = vec![unbounded];
    while let Some(f) = stack.pop() {
        for &h in &face_walks[f] {
            let g = face_of[h ^ 1];
            let wg = if h % 2 == 0 {
                winding[f] - 1
            } else {
                winding[f] + 1
            };
            if winding[g] == i64::MAX {
                winding[g] = wg;
                stack.push(g);
            } else if winding[g] != wg {
                return Err(Error::numerical(
                    "build_arrangement",
                    format!("winding propagation inconsistent at faces {f}/{g}"),
                ));
            }
        }
    }

    // representative interior points, validated geometrically
    let mut faces = Vec::with_capacity(nf);
    for (id, walk) in face_walks.iter().enumerate() {
        let rep = if id == unbounded {
            let (_, hi) = curve.bbox();
            hi + Point2::new(curve.diameter(), curve.diameter())
        } else {
            interior_point(curve, &walk_points(walk))?
        };
        let geometric = winding_at_unchecked(curve, rep);
        if geometric != winding[id] {
            return Err(Error::numerical(
                "build_arrangement",
                format!(
                    "face {id}: combinatorial winding {} disagrees with geometric winding \
                     {geometric} at ({}, {})",
                    winding[id], rep.x, rep.y
                ),
            ));
        }
        faces.push(Face {
            id,
            winding: winding[id],
            representative_point: rep,
            is_unbounded: id == unbounded,
        });
    }

    // double-point indices from the four sector faces
    let mut adjacency = Vec::with_capacity(nv);
    let mut out_doubles = doubles.to_vec();
    for (node, slots) in out_at.iter().enumerate() {
        let sector_faces = [
            face_of[slots[0].1],
            face_of[slots[1].1],
            face_of[slots[2].1],
            face_of[slots[3].1],
        ];
        let mut ws: Vec<i64> = sector_faces.iter().map(|&f| winding[f]).collect();
        ws.sort_unstable();
        let m = ws[1];
        if ws != [m - 1, m, m, m + 1] {
            return Err(Error::numerical(
                "build_arrangement",
                format!(
                    "double point {node} sees windings {ws:?}, not the transverse pattern \
                     {{m-1, m, m, m+1}}"
                ),
            ));
        }
        out_doubles[node].index = Some(m);
        adjacency.push(sector_faces);
    }

    Ok(Arrangement {
        curve: curve.clone(),
        double_points: out_doubles,
        faces,
        adjacency,
    })
}

/// Arrangement of an embedded closed curve: two faces.
fn embedded_arrangement(curve: &PolylineCurve) -> Result<Arrangement> {
    let ccw = curve.signed_area2() > 0.0;
    // walk the curve as a single boundary; interior lies to the left when
    // counterclockwise
    let mut pts: Vec<Point2> = curve.vertices().to_vec();
    if !ccw {
        pts.reverse();
    }
    let inside = interior_point(curve, &pts)?;
    let w_in = winding_at_unchecked(curve, inside);
    if w_in.abs() != 1 {
        return Err(Error::numerical(
            "build_arrangement",
            format!("embedded curve has interior winding {w_in}, expected +-1"),
        ));
    }
    let (_, hi) = curve.bbox();
    let outside = hi + Point2::new(curve.diameter(), curve.diameter());
    let faces = vec![
        Face {
            id: 0,
            winding: w_in,
            representative_point: inside,
            is_unbounded: false,
        },
        Face {
            id: 1,
            winding: 0,
            representative_point: outside,
            is_unbounded: true,
        },
    ];
    Ok(Arrangement {
        curve: curve.clone(),
        double_points: Vec::new(),
        faces,
        adjacency: Vec::new(),
    })
}

/// A point strictly inside the face whose boundary walk (interior on the
/// left) is `walk_pts`: offset left from the midpoint of the longest walk
/// segment, shrinking the offset until the curve is exactly `delta` away.
fn interior_point(curve: &PolylineCurve, walk_pts: &[Point2]) -> Result<Point2> {
    let m = walk_pts.len();
    let mut best = (0usize, 0.0f64);
    for i in 0..m {
        let len = walk_pts[i].dist(walk_pts[(i + 1) % m]);
        if len > best.1 {
            best = (i, len);
        }
    }
    let a = walk_pts[best.0];
    let b = walk_pts[(best.0 + 1) % m];
    let mid = (a + b) * 0.5;
    let normal = (b - a).left_normal().normalized();
    let mut delta = best.1 * 0.25;
    let accept_tol = 1e-9 * curve.diameter();
    for _ in 0..60 {
        let p = mid + normal * delta;
        let d = curve.distance_to(p);
        if (d - delta).abs() <= accept_tol {
            return Ok(p);
        }
        delta *= 0.5;
    }
    Err(Error::numerical(
        "build_arrangement",
        format!(
            "could not certify an interior point near ({}, {})",
            mid.x, mid.y
        ),
    ))
}
