use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::ZvkError;
use crate::algebra::{discriminant_y, is_squarefree, BiPoly, GaussRat, UniPoly};
use crate::roots::{roots_all, CxApprox};

/// The critical values `S` of the projection `(x, y) -> x`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriticalSet {
    pub points: Vec<CxApprox>,
    /// Squarefree part of the discriminant; `points` are its roots.
    #[serde(serialize_with = "ser_display")]
    pub source: UniPoly,
    /// The discriminant itself (`Res_y(f, f_y) / lc`).
    #[serde(serialize_with = "ser_display")]
    pub discriminant: UniPoly,
}

pub(crate) fn ser_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl CriticalSet {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn from_points(points: Vec<CxApprox>) -> Self {
        CriticalSet {
            points,
            source: UniPoly::zero(crate::algebra::Var::X),
            discriminant: UniPoly::zero(crate::algebra::Var::X),
        }
    }
}

fn check_input(f: &BiPoly) -> Result<(), ZvkError> {
    if f.deg_y() == 0 {
        return Err(ZvkError::Degenerate("polynomial must have positive degree in y".into()));
    }
    if !is_squarefree(f) {
        return Err(ZvkError::NotSquarefree);
    }
    Ok(())
}

/// Roots of a squarefree univariate polynomial, exact when they are
/// Gaussian rationals, snapped to the real axis when the polynomial is real
/// and the certified disk isolates a real root.
pub(crate) fn isolate(p: &UniPoly) -> Result<Vec<CxApprox>, ZvkError> {
    if p.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    let raw = roots_all(&p.to_complex_coeffs(), 53)?;
    let real = p.has_real_coefficients();
    let mut out: Vec<CxApprox> = Vec::with_capacity(raw.len());
    for (i, r) in raw.iter().enumerate() {
        if let Some(q) = GaussRat::approximate(r.z(), 1 << 24) {
            if p.eval(&q).is_zero() {
                out.push(CxApprox::exact(q.to_complex()));
                continue;
            }
        }
        let mut v = *r;
        if real && v.im.abs() <= v.err {
            let conj = Complex64::new(v.re, -v.im);
            let crowded = raw.iter().enumerate().any(|(j, o)| j != i && (o.z() - conj).norm() <= o.err + v.err);
            if !crowded {
                v.im = 0.0;
            }
        }
        out.push(v);
    }
    out.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap_or(std::cmp::Ordering::Equal));
    Ok(out)
}

/// Certified roots of the reduced discriminant of `f` with respect to `y`.
pub fn critical_values(f: &BiPoly) -> Result<CriticalSet, ZvkError> {
    check_input(f)?;
    if !f.lc_y().is_constant() {
        return Err(ZvkError::NonConstantLeading(f.lc_y().to_string()));
    }
    let disc = discriminant_y(f)?;
    let source = if disc.degree().unwrap_or(0) == 0 {
        UniPoly::constant(GaussRat::from_int(1), disc.var())
    } else {
        disc.squarefree_part()
    };
    let points = isolate(&source)?;
    Ok(CriticalSet { points, source, discriminant: disc })
}

/// What [`genericity_fix`] did.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GenericityRecord {
    pub sheared: bool,
    /// Shear `(x, y) -> (x + lambda*y, y)`.
    pub lambda: Option<i64>,
    pub attempts: u32,
    /// Whether every singular fiber has exactly one double point; reported,
    /// not enforced.
    pub transversal: Option<bool>,
}

const MAX_SHEAR_ATTEMPTS: u32 = 16;

fn transversal(f: &BiPoly) -> Option<bool> {
    let cs = critical_values(f).ok()?;
    let n = f.deg_y() as usize;
    for x in &cs.points {
        let coeffs = f.y_coeffs_c(x.z());
        let roots = roots_all(&coeffs, 53).ok()?;
        // count distinct roots at a scale well above the numerical noise
        let scale = roots.iter().map(|r| r.z().norm()).fold(1.0, f64::max);
        let mut distinct: Vec<Complex64> = Vec::new();
        for r in &roots {
            if distinct.iter().all(|d| (d - r.z()).norm() > 1e-5 * scale) {
                distinct.push(r.z());
            }
        }
        if distinct.len() + 1 != n {
            return Some(false);
        }
    }
    Some(true)
}

/// Make the leading `y`-coefficient constant, by a seeded integer shear if
/// necessary.
pub fn genericity_fix(f: &BiPoly, seed: u64) -> Result<(BiPoly, GenericityRecord), ZvkError> {
    if f.is_zero() {
        return Err(ZvkError::Degenerate("zero polynomial".into()));
    }
    if !is_squarefree(f) {
        return Err(ZvkError::NotSquarefree);
    }
    if f.deg_y() > 0 && f.lc_y().is_constant() {
        let t = transversal(f);
        return Ok((f.clone(), GenericityRecord { sheared: false, lambda: None, attempts: 0, transversal: t }));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=MAX_SHEAR_ATTEMPTS {
        let mut lambda = 0;
        while lambda == 0 {
            lambda = rng.gen_range(-3i64..=3);
        }
        let g = f.shear(&GaussRat::from_int(lambda));
        if g.deg_y() > 0 && g.lc_y().is_constant() {
            let t = transversal(&g);
            return Ok((
                g,
                GenericityRecord { sheared: true, lambda: Some(lambda), attempts: attempt, transversal: t },
            ));
        }
    }
    Err(ZvkError::GenericityFailed(MAX_SHEAR_ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    fn bp(s: &str) -> BiPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn sqrt_curve() {
        let s = critical_values(&bp("y^2 - x")).unwrap();
        assert_eq!(s.points.len(), 1);
        assert_eq!(s.points[0].z(), Complex64::new(0.0, 0.0));
        assert_eq!(s.points[0].err, 0.0);
    }

    #[test]
    fn kepler_curve() {
        let s = critical_values(&bp("y^4 + 2*x^2*y")).unwrap();
        assert_eq!(s.points.len(), 1);
        assert_eq!(s.points[0].z(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn two_points() {
        let s = critical_values(&bp("y^2 - (x - 1)*(x - 2)")).unwrap();
        let re: Vec<f64> = s.points.iter().map(|p| p.re).collect();
        assert_eq!(re, vec![1.0, 2.0]);
    }

    #[test]
    fn no_critical_values() {
        assert!(critical_values(&bp("y^2 - 1")).unwrap().is_empty());
    }

    #[test]
    fn errors() {
        assert!(matches!(critical_values(&bp("x*y^2 - 1")), Err(ZvkError::NonConstantLeading(_))));
        assert!(matches!(critical_values(&bp("(y - x)^2")), Err(ZvkError::NotSquarefree)));
    }

    #[test]
    fn shear_makes_monic() {
        let (g, rec) = genericity_fix(&bp("x*y - 1"), 0).unwrap();
        assert!(rec.sheared);
        assert!(g.lc_y().is_constant() && !g.lc_y().is_zero());
        let (h, rec) = genericity_fix(&bp("y^2 - x"), 0).unwrap();
        assert!(!rec.sheared);
        assert_eq!(h, bp("y^2 - x"));
        assert_eq!(rec.transversal, Some(true));
    }
}
