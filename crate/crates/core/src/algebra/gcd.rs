//! Bivariate gcd over `Q(i)` via contents in `x` and a primitive
//! pseudo-remainder sequence in `y`.

use num_traits::One;

use super::{BiPoly, GaussRat, UniPoly, Var};

type YPoly = Vec<UniPoly>;

fn trim(mut p: YPoly) -> YPoly {
    while p.last().is_some_and(UniPoly::is_zero) {
        p.pop();
    }
    p
}

fn content(p: &YPoly) -> UniPoly {
    p.iter().fold(UniPoly::zero(Var::X), |acc, c| if acc.is_zero() { c.monic() } else { acc.gcd(c) })
}

fn primitive(p: &YPoly) -> YPoly {
    let c = content(p);
    p.iter().map(|q| q.div_exact(&c).expect("content divides")).collect()
}

fn shift_mul(p: &YPoly, k: usize, c: &UniPoly) -> YPoly {
    let mut out = vec![UniPoly::zero(Var::X); k];
    out.extend(p.iter().map(|q| q * c));
    out
}

fn sub(a: &YPoly, b: &YPoly) -> YPoly {
    let n = a.len().max(b.len());
    let z = UniPoly::zero(Var::X);
    trim((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
}

fn prem(a: &YPoly, b: &YPoly) -> YPoly {
    let lb = b.last().unwrap().clone();
    let db = b.len() - 1;
    let mut r = a.clone();
    while r.len() > db && !r.is_empty() {
        let lr = r.last().unwrap().clone();
        let k = r.len() - 1 - db;
        let scaled: YPoly = r.iter().map(|q| q * &lb).collect();
        r = sub(&scaled, &shift_mul(b, k, &lr));
    }
    r
}

/// Greatest common divisor in `Q(i)[x, y]`, normalized to leading
/// coefficient 1 (grlex). `gcd(0, 0) = 0`.
pub fn gcd_bivariate(a: &BiPoly, b: &BiPoly) -> BiPoly {
    if a.is_zero() {
        return b.normalize_leading();
    }
    if b.is_zero() {
        return a.normalize_leading();
    }
    let ya = trim(a.y_coeffs());
    let yb = trim(b.y_coeffs());
    let c = content(&ya).gcd(&content(&yb));
    let (mut p, mut q) = (primitive(&ya), primitive(&yb));
    if p.len() < q.len() {
        std::mem::swap(&mut p, &mut q);
    }
    let g = loop {
        if q.len() == 1 {
            break vec![UniPoly::constant(GaussRat::one(), Var::X)];
        }
        let r = prem(&p, &q);
        if r.is_empty() {
            break q;
        }
        p = q;
        q = primitive(&r);
    };
    let g = BiPoly::from_y_coeffs(&g);
    (&g * &c.to_bipoly()).normalize_leading()
}

/// `f` is squarefree iff `gcd(f, f_x, f_y)` is constant.
pub fn is_squarefree(f: &BiPoly) -> bool {
    !f.is_zero() && repeated_part(f).is_constant()
}

fn repeated_part(f: &BiPoly) -> BiPoly {
    gcd_bivariate(&gcd_bivariate(f, &f.diff_x()), &f.diff_y())
}

/// Product of the distinct irreducible factors of `f` (up to a constant).
pub fn squarefree_part_bivariate(f: &BiPoly) -> BiPoly {
    if f.is_zero() {
        return BiPoly::zero();
    }
    f.div_exact(&repeated_part(f)).expect("gcd divides").normalize_leading()
}
