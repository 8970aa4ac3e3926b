use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A piece of a path in the `x`-plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Segment {
    Line {
        from: [f64; 2],
        to: [f64; 2],
    },
    /// Circular arc `center + radius * e^{i(start + s*sweep)}`, `s` in [0, 1].
    Arc {
        center: [f64; 2],
        radius: f64,
        start: f64,
        sweep: f64,
    },
}

fn cx(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

fn arr(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

impl Segment {
    pub fn line(from: Complex64, to: Complex64) -> Self {
        Segment::Line { from: arr(from), to: arr(to) }
    }

    pub fn arc(center: Complex64, radius: f64, start: f64, sweep: f64) -> Self {
        Segment::Arc { center: arr(center), radius, start, sweep }
    }

    /// Full counterclockwise circle starting at angle `start`.
    pub fn circle(center: Complex64, radius: f64, start: f64) -> Self {
        Segment::arc(center, radius, start, 2.0 * PI)
    }

    pub fn point(&self, s: f64) -> Complex64 {
        match *self {
            Segment::Line { from, to } => cx(from) + (cx(to) - cx(from)) * s,
            Segment::Arc { center, radius, start, sweep } => {
                cx(center) + Complex64::from_polar(radius, start + s * sweep)
            }
        }
    }

    pub fn start(&self) -> Complex64 {
        self.point(0.0)
    }

    pub fn end(&self) -> Complex64 {
        self.point(1.0)
    }

    pub fn length(&self) -> f64 {
        match *self {
            Segment::Line { from, to } => (cx(to) - cx(from)).norm(),
            Segment::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    pub fn reversed(&self) -> Segment {
        match *self {
            Segment::Line { from, to } => Segment::Line { from: to, to: from },
            Segment::Arc { center, radius, start, sweep } => {
                Segment::Arc { center, radius, start: start + sweep, sweep: -sweep }
            }
        }
    }

    /// Smallest distance from the segment to `p`.
    pub fn distance_to(&self, p: Complex64) -> f64 {
        match *self {
            Segment::Line { from, to } => {
                let (a, b) = (cx(from), cx(to));
                let d = b - a;
                let len2 = d.norm_sqr();
                let s = if len2 == 0.0 { 0.0 } else { (((p - a) * d.conj()).re / len2).clamp(0.0, 1.0) };
                (a + d * s - p).norm()
            }
            Segment::Arc { center, radius, start, sweep } => {
                let c = cx(center);
                let v = p - c;
                let ends = (self.start() - p).norm().min((self.end() - p).norm());
                if v.norm() == 0.0 {
                    return radius;
                }
                let ang = v.arg();
                // is the radial direction of p inside the swept range?
                let (lo, hi) = if sweep >= 0.0 { (start, start + sweep) } else { (start + sweep, start) };
                let mut a = ang;
                while a < lo {
                    a += 2.0 * PI;
                }
                if a <= hi {
                    (v.norm() - radius).abs()
                } else {
                    ends
                }
            }
        }
    }
}

/// Piecewise path parametrized by `t` in [0, 1], each segment getting an
/// equal share of the parameter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Path {
    pub segments: Vec<Segment>,
    /// Used only when `segments` is empty.
    pub anchor: [f64; 2],
}

impl Path {
    pub fn new(segments: Vec<Segment>) -> Self {
        let anchor = segments.first().map(|s| arr(s.start())).unwrap_or([0.0, 0.0]);
        Path { segments, anchor }
    }

    /// The constant path at `x`.
    pub fn constant(x: Complex64) -> Self {
        Path { segments: Vec::new(), anchor: arr(x) }
    }

    pub fn is_constant(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn start(&self) -> Complex64 {
        self.segments.first().map(Segment::start).unwrap_or(cx(self.anchor))
    }

    pub fn end(&self) -> Complex64 {
        self.segments.last().map(Segment::end).unwrap_or(cx(self.anchor))
    }

    pub fn is_closed(&self) -> bool {
        (self.start() - self.end()).norm() <= 1e-12 * (1.0 + self.start().norm())
    }

    pub fn length(&self) -> f64 {
        self.segments.iter().map(Segment::length).sum()
    }

    pub fn point(&self, t: f64) -> Complex64 {
        let n = self.segments.len();
        if n == 0 {
            return cx(self.anchor);
        }
        let u = (t.clamp(0.0, 1.0) * n as f64).min(n as f64);
        let k = (u.floor() as usize).min(n - 1);
        self.segments[k].point(u - k as f64)
    }

    pub fn reversed(&self) -> Path {
        Path { segments: self.segments.iter().rev().map(Segment::reversed).collect(), anchor: arr(self.end()) }
    }

    pub fn then(&self, other: &Path) -> Path {
        let mut segments = self.segments.clone();
        segments.extend(other.segments.iter().copied());
        Path { segments, anchor: self.anchor }
    }

    /// Smallest distance from the path to `p`.
    pub fn distance_to(&self, p: Complex64) -> f64 {
        if self.segments.is_empty() {
            return (cx(self.anchor) - p).norm();
        }
        self.segments.iter().map(|s| s.distance_to(p)).fold(f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_closes() {
        let p = Path::new(vec![Segment::circle(Complex64::new(0.0, 0.0), 0.5, 0.0)]);
        assert!(p.is_closed());
        assert!((p.point(0.25) - Complex64::new(0.0, 0.5)).norm() < 1e-15);
        assert!((p.length() - PI).abs() < 1e-15);
    }

    #[test]
    fn reverse_retraces() {
        let p = Path::new(vec![
            Segment::line(Complex64::new(2.0, 0.0), Complex64::new(1.0, 0.0)),
            Segment::arc(Complex64::new(0.0, 0.0), 1.0, 0.0, 1.0),
        ]);
        let r = p.reversed();
        for k in 0..=20 {
            let t = k as f64 / 20.0;
            assert!((p.point(t) - r.point(1.0 - t)).norm() < 1e-14);
        }
    }

    #[test]
    fn distances() {
        let arc = Segment::arc(Complex64::new(0.0, 0.0), 1.0, 0.0, PI);
        assert!((arc.distance_to(Complex64::new(0.0, 2.0)) - 1.0).abs() < 1e-15);
        assert!((arc.distance_to(Complex64::new(0.0, -1.0)) - 2f64.sqrt()).abs() < 1e-15);
        let line = Segment::line(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        assert!((line.distance_to(Complex64::new(0.5, 1.0)) - 1.0).abs() < 1e-15);
    }
}
