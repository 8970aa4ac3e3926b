use std::collections::HashSet;

use num_complex::Complex64;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use super::period::to_real;
use super::{branch_points, fiber_curve, lattice, lll_reduce, singular_set, HamiltonianError, SystemId};
use crate::roots::{roots_all, Path, Segment};

/// Largest parameter step of the lattice continuation at 53 bits.
const MAX_STEP: f64 = 1.0 / 64.0;
const MIN_STEP: f64 = 1e-9;
const MAX_ESCALATIONS: u32 = 4;
/// Largest accepted distance of a rounded coordinate from an integer.
const ROUNDING_SLACK: f64 = 0.2;
pub const RESIDUAL_TOLERANCE: f64 = 1e-6;

/// Closed loop of base values inside the complex line `{x} x C`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BaseLoop {
    pub label: String,
    pub x: Complex64,
    /// Path of the `y` coordinate.
    pub path: Path,
}

impl BaseLoop {
    pub fn constant(label: &str, x: Complex64, y: Complex64) -> Self {
        BaseLoop { label: label.into(), x, path: Path::constant(y) }
    }

    /// Straight approach from `base` to the circle of `radius` about
    /// `center`, one counterclockwise turn, and the approach retraced.
    pub fn meridian(label: &str, x: Complex64, center: Complex64, radius: f64, base: Complex64) -> Self {
        let u = (center - base) / (center - base).norm();
        let entry = center - u * radius;
        let path = Path::new(vec![
            Segment::line(base, entry),
            Segment::circle(center, radius, (-u).arg()),
            Segment::line(entry, base),
        ]);
        BaseLoop { label: label.into(), x, path }
    }

    pub fn point(&self, t: f64) -> [Complex64; 2] {
        [self.x, self.path.point(t)]
    }

    pub fn describe(&self) -> String {
        let p = fmt_complex;
        if self.path.is_constant() {
            return format!("{}: constant at ({}, {})", self.label, p(self.x), p(self.path.start()));
        }
        match self.path.segments.get(1) {
            Some(Segment::Arc { center, radius, .. }) if self.path.segments.len() == 3 => format!(
                "{}: x = {}, y circles {} at radius {} once counterclockwise, based at y = {}",
                self.label,
                p(self.x),
                p(Complex64::new(center[0], center[1])),
                radius,
                p(self.path.start())
            ),
            _ => format!(
                "{}: x = {}, {} segments based at y = {}",
                self.label,
                p(self.x),
                self.path.segments.len(),
                p(self.path.start())
            ),
        }
    }
}

pub(crate) fn fmt_complex(z: Complex64) -> String {
    let clean = |v: f64| if v.abs() < 1e-12 * (1.0 + z.norm()) { 0.0 } else { v };
    let (re, im) = (clean(z.re), clean(z.im));
    if im == 0.0 {
        format!("{}", re)
    } else {
        format!("{}{:+}i", re, im)
    }
}

/// The loops used when none is given. Pendulum: a meridian of the singular
/// curve in the line `x = 3`, around its intersection of largest real part,
/// radius a quarter of the smallest gap to the other intersections, based 1
/// below. Kepler: meridians `gamma1`, `gamma2` in the line `x = 1` around
/// `y = -1/2` and `y = 0`, radius 1/8, based at `y = -1/4`.
pub fn default_loops(system: SystemId) -> Vec<BaseLoop> {
    match system {
        SystemId::Pendulum => {
            let x = Complex64::new(3.0, 0.0);
            let ys: Vec<Complex64> = roots_all(&singular_set(system).y_coeffs_c(x), 53)
                .expect("singular curve meets x = 3")
                .iter()
                .map(|r| r.z())
                .collect();
            let k = (0..ys.len()).max_by(|&a, &b| ys[a].re.total_cmp(&ys[b].re)).unwrap();
            let gap = (0..ys.len()).filter(|&j| j != k).map(|j| (ys[j] - ys[k]).norm()).fold(f64::INFINITY, f64::min);
            let base = ys[k] - Complex64::i();
            vec![BaseLoop::meridian("Gamma", x, ys[k], 0.25 * gap, base)]
        }
        SystemId::Kepler => {
            let x = Complex64::new(1.0, 0.0);
            let base = Complex64::new(-0.25, 0.0);
            vec![
                BaseLoop::meridian("gamma1", x, Complex64::new(-0.5, 0.0), 0.125, base),
                BaseLoop::meridian("gamma2", x, Complex64::new(0.0, 0.0), 0.125, base),
            ]
        }
    }
}

/// Integer matrix whose row `i` expresses the continued generator `i` in
/// the initial basis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonodromyMatrix {
    pub entries: Vec<Vec<i64>>,
    /// Largest distance from an integer in the final solve.
    pub residual: f64,
    /// Largest distance from an integer over the continuation steps.
    pub drift: f64,
    pub steps: usize,
    pub precision: u32,
}

type IntMat = Vec<Vec<i64>>;

fn identity(n: usize) -> IntMat {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

fn mat_mul(a: &IntMat, b: &IntMat) -> IntMat {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn mat_sub_identity(a: &IntMat) -> IntMat {
    let mut m = a.clone();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] -= 1;
    }
    m
}

fn det(a: &IntMat) -> i64 {
    match a.len() {
        0 => 1,
        1 => a[0][0],
        2 => a[0][0] * a[1][1] - a[0][1] * a[1][0],
        n => (0..n)
            .map(|j| {
                let minor: IntMat = (1..n).map(|i| (0..n).filter(|&k| k != j).map(|k| a[i][k]).collect()).collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * a[0][j] * det(&minor)
            })
            .sum(),
    }
}

/// Rank over `Q` by fraction-free elimination.
fn rank(a: &IntMat) -> usize {
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let (rows, cols) = (m.len(), m.first().map_or(0, Vec::len));
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        for i in r + 1..rows {
            let (a, b) = (m[r][c], m[i][c]);
            for k in 0..cols {
                m[i][k] = m[i][k] * a - m[r][k] * b;
            }
            let g = m[i].iter().fold(0i128, |g, &v| g.gcd(&v));
            if g > 1 {
                m[i].iter_mut().for_each(|v| *v /= g);
            }
        }
        r += 1;
    }
    r
}

/// Inverse of a unimodular matrix via the adjugate.
fn inverse(a: &IntMat) -> Option<IntMat> {
    let n = a.len();
    let d = det(a);
    if d.abs() != 1 {
        return None;
    }
    if n == 1 {
        return Some(vec![vec![d]]);
    }
    Some(
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let minor: IntMat = (0..n)
                            .filter(|&r| r != j)
                            .map(|r| (0..n).filter(|&c| c != i).map(|c| a[r][c]).collect())
                            .collect();
                        let s = if (i + j) % 2 == 0 { 1 } else { -1 };
                        s * det(&minor) * d
                    })
                    .collect()
            })
            .collect(),
    )
}

impl MonodromyMatrix {
    pub fn identity(n: usize) -> Self {
        MonodromyMatrix { entries: identity(n), residual: 0.0, drift: 0.0, steps: 0, precision: 53 }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn det(&self) -> i64 {
        det(&self.entries)
    }

    pub fn trace(&self) -> i64 {
        (0..self.dim()).map(|i| self.entries[i][i]).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.entries == identity(self.dim())
    }

    pub fn square(&self) -> IntMat {
        mat_mul(&self.entries, &self.entries)
    }

    pub fn inverse(&self) -> Option<IntMat> {
        inverse(&self.entries)
    }

    /// Order if finite; finite-order elements of `GL_n(Z)`, `n <= 3`, have
    /// order dividing 4 or 6.
    pub fn order(&self) -> Option<u32> {
        let id = identity(self.dim());
        let mut p = self.entries.clone();
        for k in 1..=12 {
            if p == id {
                return Some(k);
            }
            p = mat_mul(&p, &self.entries);
        }
        None
    }

    pub fn is_unipotent(&self) -> bool {
        let n = mat_sub_identity(&self.entries);
        let mut p = n.clone();
        for _ in 1..self.dim() {
            p = mat_mul(&p, &n);
        }
        p.iter().flatten().all(|&v| v == 0)
    }

    /// `rank(M - I)`.
    pub fn defect_rank(&self) -> usize {
        rank(&mat_sub_identity(&self.entries))
    }

    /// `(M - I)^2 = 0`.
    pub fn is_square_zero(&self) -> bool {
        let n = mat_sub_identity(&self.entries);
        mat_mul(&n, &n).iter().flatten().all(|&v| v == 0)
    }

    /// For a transvection (`rank(M - I) = 1`, `(M - I)^2 = 0`), the gcd of
    /// the entries of `M - I`.
    pub fn transvection_content(&self) -> Option<i64> {
        if self.defect_rank() != 1 || !self.is_square_zero() {
            return None;
        }
        Some(mat_sub_identity(&self.entries).iter().flatten().fold(0i64, |g, &v| g.gcd(&v)))
    }

    /// Unimodular `P` with `P T P^-1 = M`, where `T` is the identity with
    /// entry `(0, 1)` set to `-1`; exists exactly for transvections of
    /// content 1 in dimension 3.
    pub fn transvection_conjugator(&self) -> Option<IntMat> {
        if self.dim() != 3 || self.transvection_content()? != 1 {
            return None;
        }
        let n = mat_sub_identity(&self.entries);
        // N = u v^T with u, v primitive
        let j = (0..3).find(|&j| (0..3).any(|i| n[i][j] != 0))?;
        let col: Vec<i64> = (0..3).map(|i| n[i][j]).collect();
        let g = col.iter().fold(0i64, |g, &v| g.gcd(&v));
        let u: Vec<i64> = col.iter().map(|v| v / g).collect();
        let i0 = (0..3).find(|&i| u[i] != 0)?;
        let v: Vec<i64> = (0..3).map(|k| n[i0][k] / u[i0]).collect();
        let dotv = |a: &[i64]| -> i64 { (0..3).map(|k| a[k] * v[k]).sum() };
        let range = -6i64..=6;
        let boxed =
            || range.clone().flat_map(move |a| (-6i64..=6).flat_map(move |b| (-6i64..=6).map(move |c| [a, b, c])));
        let b2 = boxed().find(|b| dotv(b) == 1)?;
        for b3 in boxed().filter(|b| dotv(b) == 0) {
            let p: IntMat = (0..3).map(|r| vec![-u[r], b2[r], b3[r]]).collect();
            if det(&p).abs() == 1 {
                let mut t = identity(3);
                t[0][1] = -1;
                let pinv = inverse(&p)?;
                if mat_mul(&mat_mul(&p, &t), &pinv) == self.entries {
                    return Some(p);
                }
            }
        }
        None
    }
}

fn dot4(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Real coordinates of `v` in the span of `basis` (least squares).
fn coordinates(basis: &[[f64; 4]], v: &[f64; 4]) -> Vec<f64> {
    let k = basis.len();
    let mut a: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            let mut row: Vec<f64> = (0..k).map(|j| dot4(&basis[i], &basis[j])).collect();
            row.push(dot4(&basis[i], v));
            row
        })
        .collect();
    for c in 0..k {
        let p = (c..k).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs())).unwrap();
        a.swap(c, p);
        for r in 0..k {
            if r != c && a[c][c] != 0.0 {
                let f = a[r][c] / a[c][c];
                for q in c..=k {
                    a[r][q] -= f * a[c][q];
                }
            }
        }
    }
    (0..k).map(|i| a[i][k] / a[i][i]).collect()
}

fn combine(coeffs: &[i64], basis: &[[Complex64; 2]]) -> [Complex64; 2] {
    let mut out = [Complex64::new(0.0, 0.0); 2];
    for (c, b) in coeffs.iter().zip(basis) {
        out[0] += b[0] * *c as f64;
        out[1] += b[1] * *c as f64;
    }
    out
}

fn continue_once(
    system: SystemId,
    lp: &BaseLoop,
    precision: u32,
    max_step: f64,
) -> Result<MonodromyMatrix, HamiltonianError> {
    if !lp.path.is_closed() {
        return Err(HamiltonianError::OpenLoop);
    }
    let n = system.rank();
    let fi = system.fixed_index();
    let l0 = lattice(system, lp.point(0.0), precision)?;
    if lp.path.is_constant() {
        return Ok(MonodromyMatrix { precision, ..MonodromyMatrix::identity(n) });
    }
    let mut cur = l0.generators.clone();
    let mut branch: Vec<Complex64> =
        branch_points(&fiber_curve(system, lp.point(0.0))?)?.iter().map(|b| b.z()).collect();
    let (mut t, mut h, mut drift, mut steps) = (0.0f64, max_step, 0.0f64, 0usize);
    while t < 1.0 {
        let tn = (t + h).min(1.0);
        let c = lp.point(tn);
        let fc = fiber_curve(system, c).map_err(|_| HamiltonianError::BranchCollision { t: tn })?;
        let nb: Vec<Complex64> = branch_points(&fc)?.iter().map(|b| b.z()).collect();
        let scale = 1.0 + nb.iter().map(|b| b.norm()).fold(0.0, f64::max);
        let mut gap = f64::INFINITY;
        for i in 0..nb.len() {
            for j in i + 1..nb.len() {
                gap = gap.min((nb[i] - nb[j]).norm());
            }
        }
        if gap < 1e-9 * scale {
            return Err(HamiltonianError::BranchCollision { t: tn });
        }
        let moved =
            branch.iter().map(|b| nb.iter().map(|q| (q - b).norm()).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max);
        let mut accepted = None;
        if moved <= gap / 3.0 {
            let l = lattice(system, c, precision)?;
            let basis: Vec<[f64; 4]> = l.generators.iter().map(to_real).collect();
            let (_, gs) = lll_reduce(&basis);
            let shortest = gs.iter().copied().fold(f64::INFINITY, f64::min);
            let mut next = cur.clone();
            let mut dev = 0.0f64;
            let mut ok = true;
            for i in (0..n).filter(|&i| i != fi) {
                let a = coordinates(&basis, &to_real(&cur[i]));
                let r: Vec<i64> = a.iter().map(|v| v.round() as i64).collect();
                dev = dev.max(a.iter().zip(&r).map(|(x, q)| (x - *q as f64).abs()).fold(0.0, f64::max));
                next[i] = combine(&r, &l.generators);
                let diff = [cur[i][0] - next[i][0], cur[i][1] - next[i][1]];
                let jump = (diff[0].norm_sqr() + diff[1].norm_sqr()).sqrt();
                if jump > 0.25 * shortest {
                    ok = false;
                }
            }
            if ok && dev < ROUNDING_SLACK {
                accepted = Some((next, dev));
            }
        }
        match accepted {
            Some((next, dev)) => {
                cur = next;
                branch = nb;
                drift = drift.max(dev);
                t = tn;
                steps += 1;
                h = (h * 1.5).min(max_step);
            }
            None => {
                h *= 0.5;
                if h < MIN_STEP {
                    return Err(HamiltonianError::StepUnderflow { t });
                }
            }
        }
    }
    let basis: Vec<[f64; 4]> = l0.generators.iter().map(to_real).collect();
    let mut entries = identity(n);
    let mut residual = 0.0f64;
    for i in (0..n).filter(|&i| i != fi) {
        let a = coordinates(&basis, &to_real(&cur[i]));
        for (j, v) in a.iter().enumerate() {
            entries[i][j] = v.round() as i64;
            residual = residual.max((v - v.round()).abs());
        }
    }
    Ok(MonodromyMatrix { entries, residual, drift, steps, precision })
}

/// Monodromy of the period lattice along `lp`: the lattice basis is
/// recomputed along the loop and the continued generators are carried by
/// integer rounding against each new basis. Precision is doubled (and the
/// step bound halved) up to four times when the final residual exceeds
/// `1e-6` or the continuation cannot resolve a step.
pub fn monodromy(system: SystemId, lp: &BaseLoop, precision: u32) -> Result<MonodromyMatrix, HamiltonianError> {
    let mut last = None;
    for k in 0..=MAX_ESCALATIONS {
        let p = precision.saturating_mul(1 << k);
        match continue_once(system, lp, p, MAX_STEP / f64::from(1u32 << k)) {
            Ok(m) if m.residual < RESIDUAL_TOLERANCE => return Ok(m),
            Ok(m) => last = Some(HamiltonianError::Residual(m.residual)),
            Err(e @ (HamiltonianError::StepUnderflow { .. } | HamiltonianError::Quadrature(_))) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap_or(HamiltonianError::Residual(f64::NAN)))
}

/// One loop's matrix with its invariants.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LoopReport {
    pub system: SystemId,
    #[serde(rename = "loop")]
    pub loop_description: String,
    pub label: String,
    pub matrix: Vec<Vec<i64>>,
    pub residual: f64,
    pub invariants: Invariants,
    #[serde(skip)]
    pub full: MonodromyMatrix,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Invariants {
    pub det: i64,
    pub trace: i64,
    pub order: Option<u32>,
}

impl LoopReport {
    pub fn new(system: SystemId, lp: &BaseLoop, m: MonodromyMatrix) -> Self {
        LoopReport {
            system,
            loop_description: lp.describe(),
            label: lp.label.clone(),
            matrix: m.entries.clone(),
            residual: m.residual,
            invariants: Invariants { det: m.det(), trace: m.trace(), order: m.order() },
            full: m,
        }
    }
}

/// Monodromy group generated by the matrices of the given loops.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GroupReport {
    pub system: SystemId,
    pub loops: Vec<LoopReport>,
    /// `trivial`, `Z2`, `Z2+Z2`, `Z`, `Z, generator unipotent`, ...
    pub group: String,
    pub order: Option<usize>,
}

const CLOSURE_CAP: usize = 64;

fn closure(gens: &[IntMat]) -> Option<Vec<IntMat>> {
    let n = gens.first()?.len();
    let mut all: Vec<IntMat> = gens.iter().filter_map(inverse).chain(gens.iter().cloned()).collect();
    all.dedup();
    let mut seen: HashSet<IntMat> = HashSet::new();
    let mut queue = vec![identity(n)];
    seen.insert(identity(n));
    while let Some(m) = queue.pop() {
        for g in &all {
            let p = mat_mul(&m, g);
            if seen.insert(p.clone()) {
                if seen.len() > CLOSURE_CAP {
                    return None;
                }
                queue.push(p);
            }
        }
    }
    Some(seen.into_iter().collect())
}

pub(crate) fn describe_group(mats: &[MonodromyMatrix]) -> (String, Option<usize>) {
    let gens: Vec<IntMat> = mats.iter().map(|m| m.entries.clone()).collect();
    if gens.is_empty() {
        return ("trivial".into(), Some(1));
    }
    match closure(&gens) {
        Some(elems) => {
            let k = elems.len();
            let elementary = elems.iter().all(|e| mat_mul(e, e) == identity(e.len()));
            let name = match k {
                1 => "trivial".to_string(),
                2 => "Z2".to_string(),
                4 if elementary => "Z2+Z2".to_string(),
                _ if elems.iter().any(|e| {
                    MonodromyMatrix { entries: e.clone(), ..MonodromyMatrix::identity(e.len()) }.order()
                        == Some(k as u32)
                }) =>
                {
                    format!("Z{}", k)
                }
                _ => format!("finite of order {}", k),
            };
            (name, Some(k))
        }
        None if mats.len() == 1 => {
            let s = if mats[0].is_unipotent() { "Z, generator unipotent" } else { "Z" };
            (s.to_string(), None)
        }
        None => ("infinite".to_string(), None),
    }
}

/// Monodromy along each loop (concurrently) and the group they generate.
pub fn monodromy_group(system: SystemId, loops: &[BaseLoop], precision: u32) -> Result<GroupReport, HamiltonianError> {
    let mats: Vec<MonodromyMatrix> =
        loops.par_iter().map(|lp| monodromy(system, lp, precision)).collect::<Result<_, _>>()?;
    let (group, order) = describe_group(&mats);
    let loops = loops.iter().zip(mats).map(|(lp, m)| LoopReport::new(system, lp, m)).collect();
    Ok(GroupReport { system, loops, group, order })
}
