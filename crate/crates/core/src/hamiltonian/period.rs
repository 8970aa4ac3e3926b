use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{branch_points, fiber_curve, FiberCurve, HamiltonianError, SystemId};

const MIN_NODES: usize = 32;
const MAX_NODES: usize = 1 << 20;

/// Closed contour in the `w`-plane, traversed counterclockwise for `t` in
/// `[0, 2pi)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Contour {
    /// `center + half_focal * (rho e^{it} + e^{-it} / rho) / 2`: the ellipse
    /// with foci `center +- half_focal`.
    Ellipse {
        center: Complex64,
        half_focal: Complex64,
        rho: f64,
    },
    Circle {
        center: Complex64,
        radius: f64,
    },
}

impl Contour {
    /// Point and derivative at parameter `t`.
    pub fn point(&self, t: f64) -> (Complex64, Complex64) {
        let e = Complex64::from_polar(1.0, t);
        match *self {
            Contour::Ellipse { center, half_focal, rho } => {
                let a = e * rho;
                let b = e.inv() / rho;
                (center + half_focal * (a + b) * 0.5, half_focal * Complex64::i() * (a - b) * 0.5)
            }
            Contour::Circle { center, radius } => (center + e * radius, Complex64::i() * e * radius),
        }
    }

    /// Approximate distance from the contour to `p` (dense sampling).
    pub fn distance_to(&self, p: Complex64) -> f64 {
        (0..1024).map(|k| (self.point(2.0 * PI * k as f64 / 1024.0).0 - p).norm()).fold(f64::INFINITY, f64::min)
    }
}

/// A closed cycle on the fiber: contour, the branch points it encloses, and
/// the value of the square root at the contour's start.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cycle {
    pub contour: Contour,
    pub pair: (usize, usize),
    pub sheet: Complex64,
}

/// The two distinguished forms, restricted to the fiber curve. For the
/// pendulum `Omega1 = dw/z` and `Omega2 = i (w z - i y) / (z (w^2 - 1)) dw`;
/// for Kepler `Omega1 = (i/w - x/(w (z + i x))) dw` and
/// `Omega2 = w / (z + i x) dw`. The `C*`-fiber terms are not integrated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Form {
    Omega1,
    Omega2,
}

/// Target relative accuracy of period quadrature; floating point caps it at
/// `1e-13`.
pub fn quadrature_tolerance(precision: u32) -> f64 {
    10f64.powf(-0.3 * precision as f64).max(1e-13)
}

fn integrand(fc: &FiberCurve, form: Form, w: Complex64, s: Complex64) -> Complex64 {
    let i = Complex64::i();
    let (x, y) = (fc.x(), fc.y());
    match (fc.system, form) {
        (SystemId::Pendulum, Form::Omega1) => s.inv(),
        (SystemId::Pendulum, Form::Omega2) => i * (w * s - i * y) / (s * (w * w - 1.0)),
        (SystemId::Kepler, Form::Omega1) => i / w - x / (w * s),
        (SystemId::Kepler, Form::Omega2) => w / s,
    }
}

/// Square root of `q_c` continued along the contour at `n` equally spaced
/// nodes, starting from the cycle's sheet datum.
fn sheet_values(
    fc: &FiberCurve,
    cycle: &Cycle,
    n: usize,
) -> Result<Vec<(Complex64, Complex64, Complex64)>, HamiltonianError> {
    let mut prev = cycle.sheet;
    let mut out = Vec::with_capacity(n);
    for k in 0..=n {
        let (w, dw) = cycle.contour.point(2.0 * PI * k as f64 / n as f64);
        let r = fc.q(w).sqrt();
        let s = if (r - prev).norm() <= (r + prev).norm() { r } else { -r };
        if (s - prev).norm() > 0.5 * (s + prev).norm() {
            return Err(HamiltonianError::SheetAmbiguity);
        }
        prev = s;
        if k < n {
            out.push((w, dw, s));
        }
    }
    if (prev - cycle.sheet).norm() > 1e-6 * cycle.sheet.norm().max(1e-300) {
        return Err(HamiltonianError::OpenCycle);
    }
    Ok(out)
}

/// Trapezoidal rule with exactly `n` nodes.
pub fn period_with_nodes(fc: &FiberCurve, cycle: &Cycle, form: Form, n: usize) -> Result<Complex64, HamiltonianError> {
    let vals = sheet_values(fc, cycle, n)?;
    let h = 2.0 * PI / n as f64;
    Ok(vals.iter().map(|&(w, dw, s)| integrand(fc, form, w, s) * dw).sum::<Complex64>() * h)
}

fn converge<F>(mut eval: F, tol: f64) -> Result<(Complex64, usize), HamiltonianError>
where
    F: FnMut(usize) -> Result<(Complex64, f64), HamiltonianError>,
{
    let mut n = MIN_NODES;
    let mut prev: Option<Complex64> = None;
    while n <= MAX_NODES {
        match eval(n) {
            Ok((v, scale)) => {
                if let Some(p) = prev {
                    if (v - p).norm() <= tol * v.norm().max(scale) {
                        return Ok((v, n));
                    }
                }
                prev = Some(v);
            }
            Err(HamiltonianError::SheetAmbiguity) | Err(HamiltonianError::OpenCycle) if n < MAX_NODES / 64 => {
                prev = None;
            }
            Err(e) => return Err(e),
        }
        n *= 2;
    }
    Err(HamiltonianError::Quadrature(MAX_NODES))
}

/// Period of `form` over `cycle`, by trapezoidal quadrature with node
/// doubling until successive values agree to the tolerance of `precision`.
/// Returns the value and the node count used.
pub fn period(
    fc: &FiberCurve,
    cycle: &Cycle,
    form: Form,
    precision: u32,
) -> Result<(Complex64, usize), HamiltonianError> {
    converge(
        |n| {
            let vals = sheet_values(fc, cycle, n)?;
            let h = 2.0 * PI / n as f64;
            let mut sum = Complex64::new(0.0, 0.0);
            let mut l1 = 0.0;
            for &(w, dw, s) in &vals {
                let v = integrand(fc, form, w, s) * dw;
                sum += v;
                l1 += v.norm();
            }
            Ok((sum * h, l1 * h * 1e-3))
        },
        quadrature_tolerance(precision),
    )
}

/// Contour integral of a single-valued function; used to calibrate the
/// quadrature (e.g. `1/w` around the unit circle gives `2 pi i`).
pub fn contour_integral<F>(contour: &Contour, f: F, precision: u32) -> Result<Complex64, HamiltonianError>
where
    F: Fn(Complex64) -> Complex64,
{
    converge(
        |n| {
            let h = 2.0 * PI / n as f64;
            let mut sum = Complex64::new(0.0, 0.0);
            let mut l1 = 0.0;
            for k in 0..n {
                let (w, dw) = contour.point(h * k as f64);
                let v = f(w) * dw;
                sum += v;
                l1 += v.norm();
            }
            Ok((sum * h, l1 * h * 1e-3))
        },
        quadrature_tolerance(precision),
    )
    .map(|(v, _)| v)
}

/// Joukowski radius of `p` relative to the focal segment `m +- hc`: the
/// `rho` of the confocal ellipse through `p`.
fn joukowski_radius(m: Complex64, hc: Complex64, p: Complex64) -> f64 {
    let u = (p - m) / hc;
    let r = (u - 1.0).sqrt() * (u + 1.0).sqrt();
    (u + r).norm().max((u - r).norm())
}

/// Confocal ellipse around branch points `i`, `j` that keeps every other
/// branch point outside and stays as far as possible (in the ellipse's
/// natural coordinate) from the listed poles.
pub fn pair_cycle(
    fc: &FiberCurve,
    branch: &[Complex64],
    i: usize,
    j: usize,
    poles: &[Complex64],
) -> Result<Cycle, HamiltonianError> {
    let m = (branch[i] + branch[j]) * 0.5;
    let hc = (branch[j] - branch[i]) * 0.5;
    let outer = branch
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != i && k != j)
        .map(|(_, &b)| joukowski_radius(m, hc, b).ln())
        .fold(f64::INFINITY, f64::min);
    let outer = outer.min(3.0);
    let mut marks = vec![0.0, outer];
    marks.extend(poles.iter().map(|&p| joukowski_radius(m, hc, p).ln()).filter(|&l| l > 0.0 && l < outer));
    marks.sort_by(f64::total_cmp);
    let (lo, hi) = marks.windows(2).map(|w| (w[0], w[1])).max_by(|a, b| (a.1 - a.0).total_cmp(&(b.1 - b.0))).unwrap();
    if hi - lo < 1e-4 {
        return Err(HamiltonianError::MarginViolation(hi - lo));
    }
    let contour = Contour::Ellipse { center: m, half_focal: hc, rho: (0.5 * (lo + hi)).exp() };
    let start = contour.point(0.0).0;
    Ok(Cycle { contour, pair: (i, j), sheet: fc.q(start).sqrt() })
}

/// Circle about the origin enclosing both branch points and the puncture
/// line `w = 0`.
fn kepler_cycle(fc: &FiberCurve, branch: &[Complex64]) -> Cycle {
    let r = branch.iter().map(|b| b.norm()).fold(0.0, f64::max);
    let contour = Contour::Circle { center: Complex64::new(0.0, 0.0), radius: 2.0 * r.max(1e-3) };
    let start = contour.point(0.0).0;
    Cycle { contour, pair: (0, 1), sheet: fc.q(start).sqrt() }
}

/// Generators of the period lattice at one base point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeriodLattice {
    pub system: SystemId,
    pub c: [Complex64; 2],
    /// All generators in basis order; the fixed one sits at `fixed_index`.
    pub generators: Vec<[Complex64; 2]>,
    pub fixed_index: usize,
    /// Cycles of the computed generators, in order.
    pub cycles: Vec<Cycle>,
    /// Smallest Gram-Schmidt norm of the reduced basis over the largest
    /// generator norm.
    pub independence: f64,
}

impl PeriodLattice {
    pub fn fixed(&self) -> [Complex64; 2] {
        self.generators[self.fixed_index]
    }

    pub fn computed(&self) -> Vec<[Complex64; 2]> {
        self.generators.iter().enumerate().filter(|&(k, _)| k != self.fixed_index).map(|(_, g)| *g).collect()
    }
}

pub(crate) fn to_real(v: &[Complex64; 2]) -> [f64; 4] {
    [v[0].re, v[0].im, v[1].re, v[1].im]
}

fn dot(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// LLL reduction (`delta = 3/4`) of vectors in `R^4`. Returns the reduced
/// basis and its Gram-Schmidt norms.
pub fn lll_reduce(vectors: &[[f64; 4]]) -> (Vec<[f64; 4]>, Vec<f64>) {
    let mut b = vectors.to_vec();
    let n = b.len();
    let gso = |b: &[[f64; 4]]| -> (Vec<[f64; 4]>, Vec<Vec<f64>>) {
        let mut bs: Vec<[f64; 4]> = Vec::with_capacity(b.len());
        let mut mu = vec![vec![0.0; b.len()]; b.len()];
        for i in 0..b.len() {
            let mut v = b[i];
            for j in 0..i {
                let d = dot(&bs[j], &bs[j]);
                mu[i][j] = if d > 0.0 { dot(&b[i], &bs[j]) / d } else { 0.0 };
                for k in 0..4 {
                    v[k] -= mu[i][j] * bs[j][k];
                }
            }
            bs.push(v);
        }
        (bs, mu)
    };
    let mut k = 1;
    let mut guard = 0;
    while k < n && guard < 10_000 {
        guard += 1;
        for j in (0..k).rev() {
            let (_, mu) = gso(&b);
            let q = mu[k][j].round();
            if q != 0.0 {
                for t in 0..4 {
                    b[k][t] -= q * b[j][t];
                }
            }
        }
        let (bs, mu) = gso(&b);
        if dot(&bs[k], &bs[k]) >= (0.75 - mu[k][k - 1] * mu[k][k - 1]) * dot(&bs[k - 1], &bs[k - 1]) {
            k += 1;
        } else {
            b.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    let (bs, _) = gso(&b);
    let norms = bs.iter().map(|v| dot(v, v).sqrt()).collect();
    (b, norms)
}

fn pendulum_cycles(fc: &FiberCurve, branch: &[Complex64]) -> Result<Vec<Cycle>, HamiltonianError> {
    let poles = [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)];
    // the two pairs whose ellipses can be fattest
    let mut pairs: Vec<((usize, usize), f64)> = [(0, 1), (1, 2), (0, 2)]
        .iter()
        .map(|&(i, j)| {
            let m = (branch[i] + branch[j]) * 0.5;
            let hc = (branch[j] - branch[i]) * 0.5;
            let k = 3 - i - j;
            ((i, j), joukowski_radius(m, hc, branch[k]))
        })
        .collect();
    pairs.sort_by(|a, b| b.1.total_cmp(&a.1));
    let mut chosen: Vec<(usize, usize)> = pairs[..2].iter().map(|p| p.0).collect();
    chosen.sort();
    chosen.iter().map(|&(i, j)| pair_cycle(fc, branch, i, j, &poles)).collect()
}

/// Period lattice at `c`: computed generators from a deterministic cycle
/// basis plus the fixed generator inserted exactly.
pub fn lattice(system: SystemId, c: [Complex64; 2], precision: u32) -> Result<PeriodLattice, HamiltonianError> {
    let fc = fiber_curve(system, c)?;
    let branch: Vec<Complex64> = branch_points(&fc)?.iter().map(|b| b.z()).collect();
    let cycles = match system {
        SystemId::Pendulum => pendulum_cycles(&fc, &branch)?,
        SystemId::Kepler => vec![kepler_cycle(&fc, &branch)],
    };
    let computed: Vec<[Complex64; 2]> = cycles
        .par_iter()
        .map(|cy| -> Result<[Complex64; 2], HamiltonianError> {
            Ok([period(&fc, cy, Form::Omega1, precision)?.0, period(&fc, cy, Form::Omega2, precision)?.0])
        })
        .collect::<Result<_, _>>()?;
    let mut generators = computed;
    generators.insert(system.fixed_index(), system.fixed_generator());
    let real: Vec<[f64; 4]> = generators.iter().map(to_real).collect();
    let (_, gs) = lll_reduce(&real);
    let big = real.iter().map(|v| dot(v, v).sqrt()).fold(0.0, f64::max);
    let independence = gs.iter().copied().fold(f64::INFINITY, f64::min) / big;
    if independence.is_nan() || independence < 1e-8 {
        return Err(HamiltonianError::Dependent);
    }
    Ok(PeriodLattice { system, c, generators, fixed_index: system.fixed_index(), cycles, independence })
}
