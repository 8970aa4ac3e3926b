//! Period lattices and Hamiltonian monodromy of the complexified spherical
//! pendulum and planar Kepler problem.
//!
//! Both systems reduce to a family of curves `s^2 = q_c(w)` over the base
//! `c = (x, y)`: for the pendulum `s = z` and `q_c = 2(w^2-1)(w-x) - y^2`, for
//! Kepler `s = z + i*x` and `q_c = 2y w^2 + 2w - x^2`.

mod continuation;
mod period;

use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{discriminant, AlgebraError, BiPoly, GaussRat, RecPoly, UniPoly, Var};
use crate::roots::{roots_all, CxApprox, RootsError};

pub use continuation::{default_loops, monodromy, monodromy_group, BaseLoop, GroupReport, LoopReport, MonodromyMatrix};
pub use period::{
    contour_integral, lattice, lll_reduce, pair_cycle, period, period_with_nodes, quadrature_tolerance, Contour, Cycle,
    Form, PeriodLattice,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemId {
    Pendulum,
    Kepler,
}

impl SystemId {
    pub fn name(self) -> &'static str {
        match self {
            SystemId::Pendulum => "pendulum",
            SystemId::Kepler => "kepler",
        }
    }

    /// Rank of the period lattice.
    pub fn rank(self) -> usize {
        match self {
            SystemId::Pendulum => 3,
            SystemId::Kepler => 2,
        }
    }

    /// Position of the analytically known generator in the lattice basis.
    pub fn fixed_index(self) -> usize {
        match self {
            SystemId::Pendulum => 2,
            SystemId::Kepler => 0,
        }
    }

    /// The analytically known generator: `(0, 2pi)` or `(2pi, 0)`.
    pub fn fixed_generator(self) -> [Complex64; 2] {
        let tau = Complex64::new(2.0 * std::f64::consts::PI, 0.0);
        match self {
            SystemId::Pendulum => [Complex64::zero(), tau],
            SystemId::Kepler => [tau, Complex64::zero()],
        }
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SystemId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "pendulum" => Ok(SystemId::Pendulum),
            "kepler" => Ok(SystemId::Kepler),
            _ => Err(format!("unknown system '{}' (expected pendulum or kepler)", s)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HamiltonianError {
    #[error("base point ({x}, {y}) lies on the singular set")]
    OnSingularSet { x: String, y: String },
    #[error("contour passes within {0:e} of a branch point or pole")]
    MarginViolation(f64),
    #[error("square-root sheet could not be followed along the contour")]
    SheetAmbiguity,
    #[error("contour does not close up on the curve")]
    OpenCycle,
    #[error("quadrature did not converge with {0} nodes")]
    Quadrature(usize),
    #[error("period vectors are numerically dependent")]
    Dependent,
    #[error("branch points collide near t = {t}")]
    BranchCollision { t: f64 },
    #[error("lattice continuation cannot resolve steps near t = {t}")]
    StepUnderflow { t: f64 },
    #[error("monodromy residual {0:e} exceeds tolerance after maximal escalation")]
    Residual(f64),
    #[error("base loop is not closed")]
    OpenLoop,
    #[error(transparent)]
    Roots(#[from] RootsError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// `q_c(w)` as a polynomial in `w` with coefficients in `x`, `y`.
fn fiber_family(system: SystemId) -> RecPoly {
    let c = |v: i64| GaussRat::from_int(v);
    let x = BiPoly::x();
    let y = BiPoly::y();
    match system {
        // 2w^3 - 2x w^2 - 2w + 2x - y^2
        SystemId::Pendulum => {
            RecPoly::new(vec![&x.scale(&c(2)) - &y.pow(2), BiPoly::from_int(-2), x.scale(&c(-2)), BiPoly::from_int(2)])
        }
        // 2y w^2 + 2w - x^2
        SystemId::Kepler => RecPoly::new(vec![-&x.pow(2), BiPoly::from_int(2), y.scale(&c(2))]),
    }
}

/// Exact curve of base values with non-generic fibers, normalized so its
/// grlex-lowest coefficient is 1.
pub fn singular_set(system: SystemId) -> BiPoly {
    static CACHE: [OnceLock<BiPoly>; 2] = [OnceLock::new(), OnceLock::new()];
    CACHE[system as usize].get_or_init(|| compute_singular_set(system)).clone()
}

fn compute_singular_set(system: SystemId) -> BiPoly {
    let fam = fiber_family(system);
    let disc = discriminant(&fam).expect("fiber family has positive degree");
    match system {
        SystemId::Pendulum => disc.normalize_trailing(),
        // the leading coefficient 2y also degenerates the fiber
        SystemId::Kepler => (&BiPoly::y() * &disc).normalize_trailing(),
    }
}

/// The fiber over one base value.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberCurve {
    pub system: SystemId,
    pub c: [Complex64; 2],
    pub exact: Option<[GaussRat; 2]>,
    /// Ascending coefficients of `q_c(w)`.
    pub rhs: Vec<Complex64>,
    pub rhs_exact: Option<UniPoly>,
    /// Removed points `(w, z)` of the affine fiber.
    pub punctures: Vec<[Complex64; 2]>,
}

impl FiberCurve {
    pub fn x(&self) -> Complex64 {
        self.c[0]
    }

    pub fn y(&self) -> Complex64 {
        self.c[1]
    }

    /// `q_c(w)`.
    pub fn q(&self, w: Complex64) -> Complex64 {
        self.rhs.iter().rev().fold(Complex64::zero(), |acc, c| acc * w + c)
    }

    /// Fiber equation in the original `(w, z)` coordinates.
    pub fn equation(&self) -> String {
        let fmt = |z: Complex64| format!("({})", continuation::fmt_complex(z));
        match self.system {
            SystemId::Pendulum => format!("z^2 = 2*(w^2 - 1)*(w - {}) - {}^2", fmt(self.x()), fmt(self.y())),
            SystemId::Kepler => format!("2*{}*w^2 + 2*w = z^2 + 2*i*{}*z", fmt(self.y()), fmt(self.x())),
        }
    }
}

fn punctures(system: SystemId, x: Complex64) -> Vec<[Complex64; 2]> {
    let i = Complex64::i();
    match system {
        SystemId::Pendulum => {
            vec![[Complex64::new(1.0, 0.0), Complex64::zero()], [Complex64::new(-1.0, 0.0), Complex64::zero()]]
        }
        SystemId::Kepler => vec![[Complex64::zero(), Complex64::zero()], [Complex64::zero(), -2.0 * i * x]],
    }
}

fn singular_tolerance(f: &BiPoly, x: Complex64, y: Complex64) -> f64 {
    let scale: f64 = f
        .terms()
        .map(|(&(dx, dy), c)| c.to_complex().norm() * x.norm().powi(dx as i32) * y.norm().powi(dy as i32))
        .sum();
    1e-12 * scale.max(1.0)
}

/// Fiber over a numeric base point; rejected when the point is numerically
/// on the singular set.
pub fn fiber_curve(system: SystemId, c: [Complex64; 2]) -> Result<FiberCurve, HamiltonianError> {
    let [x, y] = c;
    let s = singular_set(system);
    if s.eval_c(x, y).norm() <= singular_tolerance(&s, x, y) {
        return Err(HamiltonianError::OnSingularSet { x: x.to_string(), y: y.to_string() });
    }
    Ok(FiberCurve {
        system,
        c,
        exact: None,
        rhs: fiber_family(system).eval_coeffs_c(x, y),
        rhs_exact: None,
        punctures: punctures(system, x),
    })
}

/// Fiber over an exact base point; the singular-set test is exact.
pub fn fiber_curve_exact(system: SystemId, x: &GaussRat, y: &GaussRat) -> Result<FiberCurve, HamiltonianError> {
    if singular_set(system).eval(x, y).is_zero() {
        return Err(HamiltonianError::OnSingularSet { x: x.to_string(), y: y.to_string() });
    }
    let exact = fiber_family(system).eval_coeffs(x, y, Var::W);
    let (xc, yc) = (x.to_complex(), y.to_complex());
    Ok(FiberCurve {
        system,
        c: [xc, yc],
        exact: Some([x.clone(), y.clone()]),
        rhs: exact.to_complex_coeffs(),
        rhs_exact: Some(exact),
        punctures: punctures(system, xc),
    })
}

/// Roots of `q_c`, sorted by real then imaginary part: three for the
/// pendulum, two for Kepler.
pub fn branch_points(fc: &FiberCurve) -> Result<Vec<CxApprox>, HamiltonianError> {
    let mut r = roots_all(&fc.rhs, 53)?;
    if r.len() + 1 != fc.rhs.len() {
        return Err(HamiltonianError::OnSingularSet { x: fc.x().to_string(), y: fc.y().to_string() });
    }
    r.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap_or(std::cmp::Ordering::Equal));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    fn g(a: i64, b: i64) -> GaussRat {
        GaussRat::from_frac(a, b)
    }

    #[test]
    fn pendulum_singular_set_matches_quartic() {
        let s = singular_set(SystemId::Pendulum);
        let target = parse_poly("27/4*y^4 + 2*x*y^2*(x^2 - 9) - 4*(x^2 - 1)^2").unwrap();
        let k = s.proportionality(&target).expect("proportional");
        assert!(!k.is_zero());
    }

    #[test]
    fn kepler_singular_set() {
        let s = singular_set(SystemId::Kepler);
        assert_eq!(s, parse_poly("y + 2*x^2*y^2").unwrap());
        assert!(s.eval(&g(1, 1), &g(-1, 2)).is_zero());
    }

    #[test]
    fn fibers() {
        let fc = fiber_curve_exact(SystemId::Pendulum, &g(0, 1), &g(0, 1)).unwrap();
        let c = fc.rhs_exact.as_ref().unwrap().coeffs().to_vec();
        assert_eq!(c, vec![g(0, 1), g(-2, 1), g(0, 1), g(2, 1)]);
        let fc = fiber_curve_exact(SystemId::Kepler, &g(1, 1), &g(-1, 4)).unwrap();
        // -w^2/2 + 2w - 1
        let c = fc.rhs_exact.as_ref().unwrap().coeffs().to_vec();
        assert_eq!(c, vec![g(-1, 1), g(2, 1), g(-1, 2)]);
        assert!(matches!(
            fiber_curve_exact(SystemId::Kepler, &g(1, 1), &g(0, 1)),
            Err(HamiltonianError::OnSingularSet { .. })
        ));
    }

    #[test]
    fn branch_point_examples() {
        let fc = fiber_curve_exact(SystemId::Pendulum, &g(0, 1), &g(0, 1)).unwrap();
        let b: Vec<f64> = branch_points(&fc).unwrap().iter().map(|p| p.re).collect();
        for (a, e) in b.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((a - e).abs() < 1e-12);
        }
        let fc = fiber_curve_exact(SystemId::Kepler, &g(1, 1), &g(-1, 4)).unwrap();
        let b = branch_points(&fc).unwrap();
        let s2 = 2f64.sqrt();
        assert!((b[0].z() - Complex64::new(2.0 - s2, 0.0)).norm() < 1e-12);
        assert!((b[1].z() - Complex64::new(2.0 + s2, 0.0)).norm() < 1e-12);
    }
}
