use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::CriticalSet;
use crate::roots::{CxApprox, Path, Segment};

/// One meridian: approach from the basepoint, one counterclockwise turn
/// around `center` at `radius`, and the approach retraced.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlannedLoop {
    pub center: CxApprox,
    pub radius: f64,
    pub path: Path,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LoopPlan {
    pub basepoint: CxApprox,
    pub loops: Vec<PlannedLoop>,
}

impl LoopPlan {
    pub fn len(&self) -> usize {
        self.loops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.loops.is_empty()
    }
}

fn seg_distance(a: Complex64, b: Complex64, p: Complex64) -> f64 {
    Segment::line(a, b).distance_to(p)
}

fn collinear_tol(p: Complex64) -> f64 {
    1e-12 * (1.0 + p.norm())
}

/// Deterministic meridian system for `S`.
///
/// Basepoint `R = 1 + 2 max|x_k|` on the real axis. Radius of the circle
/// around `x_k` is the smallest of a quarter of the distance to the nearest
/// other critical value, half the distance to the basepoint, and half the
/// distance to any straight approach ray not passing through `x_k`. A ray
/// passing through a nearer critical value makes a half-turn detour around it
/// at 1.5 times its radius. Loops are ordered by the argument of
/// `x_k - x_0` in `[0, 2pi)`, ties by distance.
pub fn plan_loops(s: &CriticalSet) -> LoopPlan {
    let pts: Vec<Complex64> = s.points.iter().map(CxApprox::z).collect();
    let rmax = pts.iter().map(|p| p.norm()).fold(0.0, f64::max);
    let x0 = Complex64::new(1.0 + 2.0 * rmax, 0.0);
    let basepoint = CxApprox::exact(x0);
    if pts.is_empty() {
        return LoopPlan { basepoint, loops: Vec::new() };
    }
    let n = pts.len();
    let mut radius: Vec<f64> = (0..n)
        .map(|k| {
            let mut r = 0.5 * (pts[k] - x0).norm();
            for j in 0..n {
                if j != k {
                    r = r.min(0.25 * (pts[k] - pts[j]).norm());
                }
            }
            r
        })
        .collect();
    // rays x0 -> x_k must keep a margin from every disk they do not pass through
    for k in 0..n {
        for j in 0..n {
            if j == k {
                continue;
            }
            let d = seg_distance(x0, pts[k], pts[j]);
            if d > collinear_tol(pts[j]) {
                radius[j] = radius[j].min(0.5 * d);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let key = |k: usize| {
        let v = pts[k] - x0;
        let a = v.im.atan2(v.re);
        (if a < 0.0 { a + 2.0 * PI } else { a }, v.norm())
    };
    order.sort_by(|&a, &b| key(a).partial_cmp(&key(b)).unwrap_or(std::cmp::Ordering::Equal));

    let loops = order
        .iter()
        .map(|&k| {
            let xk = pts[k];
            let u = (xk - x0) / (xk - x0).norm();
            // collinear critical values strictly between x0 and x_k
            let mut blockers: Vec<usize> =
                (0..n).filter(|&j| j != k).filter(|&j| seg_distance(x0, xk, pts[j]) <= collinear_tol(pts[j])).collect();
            blockers.sort_by(|&a, &b| (pts[a] - x0).norm().total_cmp(&(pts[b] - x0).norm()));
            let mut approach = Vec::new();
            let mut cur = x0;
            for j in blockers {
                let rho = 1.5 * radius[j];
                let entry = pts[j] - u * rho;
                approach.push(Segment::line(cur, entry));
                approach.push(Segment::arc(pts[j], rho, (-u).arg(), PI));
                cur = pts[j] + u * rho;
            }
            let start = xk - u * radius[k];
            approach.push(Segment::line(cur, start));
            let mut segs = approach.clone();
            segs.push(Segment::circle(xk, radius[k], (-u).arg()));
            segs.extend(approach.iter().rev().map(Segment::reversed));
            PlannedLoop { center: s.points[k], radius: radius[k], path: Path::new(segs) }
        })
        .collect();
    LoopPlan { basepoint, loops }
}
