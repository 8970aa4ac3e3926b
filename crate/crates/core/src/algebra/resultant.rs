use super::{AlgebraError, BiPoly, RecPoly, UniPoly};

/// Determinant by fraction-free Gaussian elimination (Bareiss); every
/// division is exact in `Q(i)[x, y]`.
fn bareiss_det(mut m: Vec<Vec<BiPoly>>) -> BiPoly {
    let n = m.len();
    if n == 0 {
        return BiPoly::from_int(1);
    }
    let mut negate = false;
    let mut prev = BiPoly::from_int(1);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return BiPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = t.div_exact(&prev).expect("Bareiss division must be exact");
            }
            m[i][k] = BiPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        -&d
    } else {
        d
    }
}

/// Sylvester resultant of two polynomials in an auxiliary variable whose
/// coefficients live in `Q(i)[x, y]`.
pub fn resultant(f: &RecPoly, g: &RecPoly) -> Result<BiPoly, AlgebraError> {
    let m = f.degree().ok_or(AlgebraError::ZeroPolynomial)?;
    let n = g.degree().ok_or(AlgebraError::ZeroPolynomial)?;
    let size = m + n;
    let mut mat = vec![vec![BiPoly::zero(); size]; size];
    // rows of f, descending coefficients, shifted right
    for r in 0..n {
        for (j, c) in f.coeffs().iter().rev().enumerate() {
            mat[r][r + j] = c.clone();
        }
    }
    for r in 0..m {
        for (j, c) in g.coeffs().iter().rev().enumerate() {
            mat[n + r][r + j] = c.clone();
        }
    }
    Ok(bareiss_det(mat))
}

/// `Res(f, f') / lc(f)`, no sign normalization.
pub fn discriminant(f: &RecPoly) -> Result<BiPoly, AlgebraError> {
    match f.degree() {
        None => return Err(AlgebraError::ZeroPolynomial),
        Some(0) => return Err(AlgebraError::DegenerateDegree("degree 0 in the eliminated variable".into())),
        _ => {}
    }
    let r = resultant(f, &f.derivative())?;
    r.div_exact(&f.lc())
        .ok_or_else(|| AlgebraError::DegenerateDegree("leading coefficient does not divide resultant".into()))
}

fn to_x(p: BiPoly) -> UniPoly {
    p.to_unipoly_x().expect("eliminating y leaves a polynomial in x")
}

/// Determinant of the Sylvester matrix of `f`, `g` with respect to `y`.
pub fn resultant_y(f: &BiPoly, g: &BiPoly) -> Result<UniPoly, AlgebraError> {
    if f.is_zero() || g.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    resultant(&f.as_rec_y(), &g.as_rec_y()).map(to_x)
}

/// `Res_y(f, df/dy)` divided exactly by the leading `y`-coefficient.
pub fn discriminant_y(f: &BiPoly) -> Result<UniPoly, AlgebraError> {
    if f.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    if f.deg_y() == 0 {
        return Err(AlgebraError::DegenerateDegree("polynomial has y-degree 0".into()));
    }
    discriminant(&f.as_rec_y()).map(to_x)
}
