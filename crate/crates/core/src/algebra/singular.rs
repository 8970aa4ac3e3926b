use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use super::{gcd_bivariate, is_squarefree, resultant_y, AlgebraError, BiPoly, GaussRat, UniPoly, Var};
use crate::roots::{roots_all, CxApprox};

/// A common zero of `f`, `f_x`, `f_y`. `exact` is set when both coordinates
/// were recognised as Gaussian rationals and verified by exact evaluation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularPoint {
    pub x: CxApprox,
    pub y: CxApprox,
    #[serde(serialize_with = "ser_exact")]
    pub exact: Option<(GaussRat, GaussRat)>,
}

fn ser_exact<S: serde::Serializer>(v: &Option<(GaussRat, GaussRat)>, s: S) -> Result<S::Ok, S::Error> {
    v.as_ref().map(|(a, b)| [a.to_string(), b.to_string()]).serialize(s)
}

fn swap_xy(f: &BiPoly) -> BiPoly {
    BiPoly::from_terms(f.terms().map(|(&(a, b), c)| ((b, a), c.clone())))
}

/// Univariate polynomial in `x` vanishing at the `x`-coordinate of every
/// common zero of `f`, `f_x`, `f_y`.
fn eliminant(f: &BiPoly, fx: &BiPoly, fy: &BiPoly) -> Result<UniPoly, AlgebraError> {
    let mut acc: Option<UniPoly> = None;
    for (a, b) in [(f, fy), (f, fx), (fx, fy)] {
        if a.is_zero() || b.is_zero() {
            continue;
        }
        let r = resultant_y(a, b)?;
        if r.is_zero() {
            continue;
        }
        acc = Some(match acc {
            None => r.monic(),
            Some(g) => g.gcd(&r),
        });
    }
    acc.ok_or_else(|| AlgebraError::RootIsolation("all eliminating resultants vanish identically".into()))
}

struct Candidate {
    approx: CxApprox,
    exact: Option<GaussRat>,
}

fn candidates(g: &UniPoly) -> Result<Vec<Candidate>, AlgebraError> {
    if g.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    let g = g.squarefree_part();
    let roots = roots_all(&g.to_complex_coeffs(), 53).map_err(|e| AlgebraError::RootIsolation(e.to_string()))?;
    Ok(roots
        .into_iter()
        .map(|r| {
            let exact = GaussRat::approximate(r.z(), 1 << 20).filter(|q| g.eval(q).is_zero());
            match exact {
                Some(q) => Candidate { approx: CxApprox::exact(q.to_complex()), exact: Some(q) },
                None => Candidate { approx: r, exact: None },
            }
        })
        .collect())
}

fn scale_of(f: &BiPoly, x: Complex64, y: Complex64) -> f64 {
    f.terms()
        .map(|(&(a, b), c)| c.to_complex().norm() * x.norm().powi(a as i32) * y.norm().powi(b as i32))
        .sum::<f64>()
        .max(1.0)
}

/// All points with `f = f_x = f_y = 0`.
pub fn curve_singularities(f: &BiPoly) -> Result<Vec<SingularPoint>, AlgebraError> {
    if f.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    if !is_squarefree(f) {
        let g = gcd_bivariate(&gcd_bivariate(f, &f.diff_x()), &f.diff_y());
        return Err(AlgebraError::NotSquarefree(g.to_string()));
    }
    let (fx, fy) = (f.diff_x(), f.diff_y());
    let gx = eliminant(f, &fx, &fy)?;
    let gy = eliminant(&swap_xy(f), &swap_xy(&fy), &swap_xy(&fx))?.with_var(Var::Y);
    let xs = candidates(&gx)?;
    let ys = candidates(&gy)?;
    let mut out: Vec<SingularPoint> = Vec::new();
    for cx in &xs {
        for cy in &ys {
            if let (Some(a), Some(b)) = (&cx.exact, &cy.exact) {
                if [f, &fx, &fy].iter().all(|p| p.eval(a, b).is_zero()) {
                    out.push(SingularPoint { x: cx.approx, y: cy.approx, exact: Some((a.clone(), b.clone())) });
                }
                continue;
            }
            let (x, y) = (cx.approx.z(), cy.approx.z());
            let ok = [f, &fx, &fy].iter().all(|p| p.eval_c(x, y).norm() <= 1e-8 * scale_of(p, x, y));
            let dup = out.iter().any(|q| (q.x.z() - x).norm() < 1e-9 && (q.y.z() - y).norm() < 1e-9);
            if ok && !dup {
                out.push(SingularPoint { x: cx.approx, y: cy.approx, exact: None });
            }
        }
    }
    out.sort_by(|a, b| {
        (a.x.re, a.x.im, a.y.re, a.y.im)
            .partial_cmp(&(b.x.re, b.x.im, b.y.re, b.y.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    #[test]
    fn smooth_conic() {
        assert!(curve_singularities(&parse_poly("y^2 - x").unwrap()).unwrap().is_empty());
    }

    #[test]
    fn kepler_origin() {
        let s = curve_singularities(&parse_poly("y^4 + 2*x^2*y").unwrap()).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].exact, Some((GaussRat::zero(), GaussRat::zero())));
    }

    #[test]
    fn node() {
        let s = curve_singularities(&parse_poly("y^2 - x^2*(x + 1)").unwrap()).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s[0].exact.is_some());
    }

    #[test]
    fn rejects_repeated_factor() {
        let e = curve_singularities(&parse_poly("(y - x)^2").unwrap());
        assert!(matches!(e, Err(AlgebraError::NotSquarefree(_))));
    }
}
