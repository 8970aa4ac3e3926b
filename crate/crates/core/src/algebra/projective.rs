use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{AlgebraError, BiPoly, GaussRat};

/// Invertible 3x3 matrix acting on homogeneous coordinates `(x, y, z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjMatrix {
    m: [[GaussRat; 3]; 3],
}

impl ProjMatrix {
    pub fn new(m: [[GaussRat; 3]; 3]) -> Result<Self, AlgebraError> {
        let pm = ProjMatrix { m };
        if pm.det().is_zero() {
            return Err(AlgebraError::SingularMatrix);
        }
        Ok(pm)
    }

    pub fn from_ints(rows: [[i64; 3]; 3]) -> Result<Self, AlgebraError> {
        ProjMatrix::new(rows.map(|r| r.map(GaussRat::from_int)))
    }

    pub fn identity() -> Self {
        ProjMatrix::from_ints([[1, 0, 0], [0, 1, 0], [0, 0, 1]]).unwrap()
    }

    /// Exchange of `y` and `z`.
    pub fn swap_yz() -> Self {
        ProjMatrix::from_ints([[1, 0, 0], [0, 0, 1], [0, 1, 0]]).unwrap()
    }

    pub fn entries(&self) -> &[[GaussRat; 3]; 3] {
        &self.m
    }

    pub fn det(&self) -> GaussRat {
        let m = &self.m;
        let minor = |a: usize, b: usize, c: usize, d: usize| &(&m[1][a] * &m[2][b]) - &(&m[1][c] * &m[2][d]);
        &(&(&m[0][0] * &minor(1, 2, 2, 1)) - &(&m[0][1] * &minor(0, 2, 2, 0))) + &(&m[0][2] * &minor(0, 1, 1, 0))
    }

    /// Inverse via the adjugate.
    pub fn inverse(&self) -> ProjMatrix {
        let d_inv = self.det().inv().expect("invertible by construction");
        let m = &self.m;
        let cof = |r: usize, c: usize| {
            let rs: Vec<usize> = (0..3).filter(|&i| i != r).collect();
            let cs: Vec<usize> = (0..3).filter(|&i| i != c).collect();
            let v = &(&m[rs[0]][cs[0]] * &m[rs[1]][cs[1]]) - &(&m[rs[0]][cs[1]] * &m[rs[1]][cs[0]]);
            if (r + c) % 2 == 0 {
                v
            } else {
                -v
            }
        };
        // inverse = adj / det, adj[i][j] = cof(j, i)
        let inv = std::array::from_fn(|i| std::array::from_fn(|j| &cof(j, i) * &d_inv));
        ProjMatrix { m: inv }
    }
}

impl Serialize for ProjMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self.m.iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProjMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let rows: Vec<Vec<String>> = Vec::deserialize(d)?;
        if rows.len() != 3 || rows.iter().any(|r| r.len() != 3) {
            return Err(D::Error::custom("expected a 3x3 matrix"));
        }
        let mut m: [[GaussRat; 3]; 3] = Default::default();
        for (i, r) in rows.iter().enumerate() {
            for (j, t) in r.iter().enumerate() {
                let p = super::parse_poly(t).map_err(D::Error::custom)?;
                m[i][j] = p.constant_value().ok_or_else(|| D::Error::custom("matrix entries must be constants"))?;
            }
        }
        ProjMatrix::new(m).map_err(D::Error::custom)
    }
}

/// Homogeneous polynomial in `(x, y, z)`.
#[derive(Clone, Default)]
struct TriPoly {
    terms: BTreeMap<[u32; 3], GaussRat>,
}

impl TriPoly {
    fn add_term(&mut self, k: [u32; 3], c: &GaussRat) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(k).or_insert_with(GaussRat::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    fn one() -> Self {
        let mut t = TriPoly::default();
        t.add_term([0, 0, 0], &GaussRat::one());
        t
    }

    fn linear(coeffs: &[GaussRat; 3]) -> Self {
        let mut t = TriPoly::default();
        t.add_term([1, 0, 0], &coeffs[0]);
        t.add_term([0, 1, 0], &coeffs[1]);
        t.add_term([0, 0, 1], &coeffs[2]);
        t
    }

    fn mul(&self, o: &TriPoly) -> TriPoly {
        let mut r = TriPoly::default();
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                r.add_term([a[0] + b[0], a[1] + b[1], a[2] + b[2]], &(ca * cb));
            }
        }
        r
    }

    fn add(&mut self, o: &TriPoly, scale: &GaussRat) {
        for (k, c) in &o.terms {
            self.add_term(*k, &(c * scale));
        }
    }
}

fn powers(base: &TriPoly, n: u32) -> Vec<TriPoly> {
    let mut out = vec![TriPoly::one()];
    for _ in 0..n {
        let next = out.last().unwrap().mul(base);
        out.push(next);
    }
    out
}

/// Affine equation, in the chart `z = 1`, of the image of the curve
/// `f = 0` (together with the line at infinity when `include_line_at_infinity`)
/// under the projective map `X -> M X`.
pub fn projective_transform(
    f: &BiPoly,
    m: &ProjMatrix,
    include_line_at_infinity: bool,
) -> Result<BiPoly, AlgebraError> {
    if f.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let d = f.total_degree();
    let zextra = u32::from(include_line_at_infinity);
    let deg = d + zextra;
    // old coordinates as linear forms in the new ones: X_old = M^-1 X_new
    let inv = m.inverse();
    let lx = TriPoly::linear(&inv.m[0]);
    let ly = TriPoly::linear(&inv.m[1]);
    let lz = TriPoly::linear(&inv.m[2]);
    let (px, py, pz) = (powers(&lx, deg), powers(&ly, deg), powers(&lz, deg));
    let mut g = TriPoly::default();
    for (&(a, b), c) in f.terms() {
        let e = deg - a - b;
        let t = px[a as usize].mul(&py[b as usize]).mul(&pz[e as usize]);
        g.add(&t, c);
    }
    // dividing out z^k and then setting z = 1 both just drop the z exponent
    Ok(BiPoly::from_terms(g.terms.iter().map(|(k, c)| ((k[0], k[1]), c.clone()))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;

    fn bp(s: &str) -> BiPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn kepler_swap_with_line() {
        let g = projective_transform(&bp("y + 2*x^2*y^2"), &ProjMatrix::swap_yz(), true).unwrap();
        assert_eq!(g, bp("y^4 + 2*x^2*y"));
    }

    #[test]
    fn kepler_component_chart() {
        let g = projective_transform(&bp("1 + 2*x^2*y"), &ProjMatrix::swap_yz(), false).unwrap();
        assert_eq!(g, bp("y^3 + 2*x^2"));
    }

    #[test]
    fn identity_is_noop() {
        let f = bp("y^3 - x*y + (2+i)*x^2 - 1/3");
        assert_eq!(projective_transform(&f, &ProjMatrix::identity(), false).unwrap(), f);
    }

    #[test]
    fn singular_rejected() {
        assert_eq!(ProjMatrix::from_ints([[1, 2, 3], [2, 4, 6], [0, 0, 1]]), Err(AlgebraError::SingularMatrix));
    }

    #[test]
    fn inverse_is_inverse() {
        let m = ProjMatrix::from_ints([[2, 1, 0], [0, 1, 3], [1, 0, 1]]).unwrap();
        let inv = m.inverse();
        for i in 0..3 {
            for j in 0..3 {
                let mut s = GaussRat::zero();
                for k in 0..3 {
                    s += &(&m.m[i][k] * &inv.m[k][j]);
                }
                assert_eq!(s, GaussRat::from_int((i == j) as i64));
            }
        }
    }
}
