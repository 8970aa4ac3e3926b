use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::GaussRat;

/// Variable tag for univariate polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Var {
    X,
    Y,
    W,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::W => "w",
        }
    }
}

/// Sparse bivariate polynomial in `x`, `y` over the Gaussian rationals.
///
/// Keys are `(deg_x, deg_y)`; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), GaussRat>,
}

/// grlex comparison of exponent pairs, `x > y`.
fn grlex(a: &(u32, u32), b: &(u32, u32)) -> Ordering {
    (a.0 + a.1).cmp(&(b.0 + b.1)).then(a.0.cmp(&b.0))
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn constant(c: GaussRat) -> Self {
        BiPoly::monomial(c, 0, 0)
    }

    pub fn from_int(v: i64) -> Self {
        BiPoly::constant(GaussRat::from_int(v))
    }

    pub fn monomial(c: GaussRat, dx: u32, dy: u32) -> Self {
        let mut p = BiPoly::zero();
        p.add_term(dx, dy, &c);
        p
    }

    pub fn x() -> Self {
        BiPoly::monomial(GaussRat::one(), 1, 0)
    }

    pub fn y() -> Self {
        BiPoly::monomial(GaussRat::one(), 0, 1)
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), GaussRat)>>(it: I) -> Self {
        let mut p = BiPoly::zero();
        for ((dx, dy), c) in it {
            p.add_term(dx, dy, &c);
        }
        p
    }

    pub fn add_term(&mut self, dx: u32, dy: u32, c: &GaussRat) {
        if c.is_zero() {
            return;
        }
        let key = (dx, dy);
        let remove = match self.terms.get_mut(&key) {
            Some(v) => {
                *v += c;
                v.is_zero()
            }
            None => {
                self.terms.insert(key, c.clone());
                false
            }
        };
        if remove {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &GaussRat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, dx: u32, dy: u32) -> GaussRat {
        self.terms.get(&(dx, dy)).cloned().unwrap_or_else(GaussRat::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&(a, b)| a == 0 && b == 0)
    }

    pub fn constant_value(&self) -> Option<GaussRat> {
        self.is_constant().then(|| self.coeff(0, 0))
    }

    pub fn deg_x(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn deg_y(&self) -> u32 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.0 + k.1).max().unwrap_or(0)
    }

    pub fn has_real_coefficients(&self) -> bool {
        self.terms.values().all(GaussRat::is_real)
    }

    /// Leading term in grlex order.
    pub fn leading_term(&self) -> Option<((u32, u32), &GaussRat)> {
        self.terms.iter().max_by(|a, b| grlex(a.0, b.0)).map(|(k, v)| (*k, v))
    }

    /// Lowest term in grlex order.
    pub fn trailing_term(&self) -> Option<((u32, u32), &GaussRat)> {
        self.terms.iter().min_by(|a, b| grlex(a.0, b.0)).map(|(k, v)| (*k, v))
    }

    pub fn scale(&self, c: &GaussRat) -> BiPoly {
        if c.is_zero() {
            return BiPoly::zero();
        }
        BiPoly { terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect() }
    }

    /// Divide through by the grlex-lowest coefficient.
    pub fn normalize_trailing(&self) -> BiPoly {
        match self.trailing_term() {
            Some((_, c)) => self.scale(&c.inv().unwrap()),
            None => BiPoly::zero(),
        }
    }

    /// Divide through by the grlex-leading coefficient.
    pub fn normalize_leading(&self) -> BiPoly {
        match self.leading_term() {
            Some((_, c)) => self.scale(&c.inv().unwrap()),
            None => BiPoly::zero(),
        }
    }

    /// `Some(c)` with `self == c * other`, if such a constant exists.
    pub fn proportionality(&self, other: &BiPoly) -> Option<GaussRat> {
        if self.is_zero() || other.is_zero() {
            return None;
        }
        if self.terms.len() != other.terms.len() {
            return None;
        }
        let (k, a) = self.leading_term()?;
        let b = other.terms.get(&k)?;
        let c = a / b;
        (other.scale(&c) == *self).then_some(c)
    }

    pub fn pow(&self, e: u32) -> BiPoly {
        let mut acc = BiPoly::from_int(1);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn diff_x(&self) -> BiPoly {
        BiPoly::from_terms(
            self.terms
                .iter()
                .filter(|(k, _)| k.0 > 0)
                .map(|(k, v)| ((k.0 - 1, k.1), v * &GaussRat::from_int(k.0 as i64))),
        )
    }

    pub fn diff_y(&self) -> BiPoly {
        BiPoly::from_terms(
            self.terms
                .iter()
                .filter(|(k, _)| k.1 > 0)
                .map(|(k, v)| ((k.0, k.1 - 1), v * &GaussRat::from_int(k.1 as i64))),
        )
    }

    pub fn eval(&self, x: &GaussRat, y: &GaussRat) -> GaussRat {
        let mut acc = GaussRat::zero();
        for (&(dx, dy), c) in &self.terms {
            acc += &(&(c * &x.pow(dx)) * &y.pow(dy));
        }
        acc
    }

    pub fn eval_c(&self, x: Complex64, y: Complex64) -> Complex64 {
        self.y_coeffs_c(x).iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * y + c)
    }

    /// Numeric coefficients in `y` (ascending) after substituting `x`.
    pub fn y_coeffs_c(&self, x: Complex64) -> Vec<Complex64> {
        self.y_coeffs().iter().map(|p| p.eval_c(x)).collect()
    }

    /// Coefficients of `y^k`, ascending, as polynomials in `x`.
    pub fn y_coeffs(&self) -> Vec<UniPoly> {
        let n = self.deg_y() as usize;
        let mut out = vec![UniPoly::zero(Var::X); n + 1];
        for (&(dx, dy), c) in &self.terms {
            out[dy as usize].add_term(dx as usize, c);
        }
        out
    }

    pub fn from_y_coeffs(coeffs: &[UniPoly]) -> BiPoly {
        let mut p = BiPoly::zero();
        for (dy, u) in coeffs.iter().enumerate() {
            for (dx, c) in u.coeffs().iter().enumerate() {
                p.add_term(dx as u32, dy as u32, c);
            }
        }
        p
    }

    /// Leading coefficient as a polynomial in `y`, i.e. a polynomial in `x`.
    pub fn lc_y(&self) -> UniPoly {
        self.y_coeffs().pop().unwrap_or_else(|| UniPoly::zero(Var::X))
    }

    /// View as a polynomial in `y` with coefficients in `Q(i)[x]`.
    pub fn as_rec_y(&self) -> RecPoly {
        RecPoly::new(self.y_coeffs().iter().map(UniPoly::to_bipoly).collect())
    }

    /// Exact substitution `x := v`, giving a polynomial in `y`.
    pub fn subst_x(&self, v: &GaussRat) -> UniPoly {
        let mut out = UniPoly::zero(Var::Y);
        for (&(dx, dy), c) in &self.terms {
            out.add_term(dy as usize, &(c * &v.pow(dx)));
        }
        out
    }

    /// Exact substitution `y := v`, giving a polynomial in `x`.
    pub fn subst_y(&self, v: &GaussRat) -> UniPoly {
        let mut out = UniPoly::zero(Var::X);
        for (&(dx, dy), c) in &self.terms {
            out.add_term(dx as usize, &(c * &v.pow(dy)));
        }
        out
    }

    /// General substitution `x := px`, `y := py`.
    pub fn compose(&self, px: &BiPoly, py: &BiPoly) -> BiPoly {
        let mut xp = vec![BiPoly::from_int(1)];
        let mut yp = vec![BiPoly::from_int(1)];
        for _ in 0..self.deg_x() {
            let next = xp.last().unwrap() * px;
            xp.push(next);
        }
        for _ in 0..self.deg_y() {
            let next = yp.last().unwrap() * py;
            yp.push(next);
        }
        let mut out = BiPoly::zero();
        for (&(dx, dy), c) in &self.terms {
            out = &out + &(&xp[dx as usize] * &yp[dy as usize]).scale(c);
        }
        out
    }

    /// `f(x + c, y)`.
    pub fn shift_x(&self, c: &GaussRat) -> BiPoly {
        self.compose(&(&BiPoly::x() + &BiPoly::constant(c.clone())), &BiPoly::y())
    }

    /// The shear `f(x + lambda*y, y)`.
    pub fn shear(&self, lambda: &GaussRat) -> BiPoly {
        self.compose(&(&BiPoly::x() + &BiPoly::y().scale(lambda)), &BiPoly::y())
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &BiPoly) -> Option<BiPoly> {
        let (lk, lc) = d.leading_term()?;
        let lc_inv = lc.inv()?;
        let mut rem = self.clone();
        let mut quo = BiPoly::zero();
        while let Some((rk, rc)) = rem.leading_term() {
            if rk.0 < lk.0 || rk.1 < lk.1 {
                return None;
            }
            let t = BiPoly::monomial(rc * &lc_inv, rk.0 - lk.0, rk.1 - lk.1);
            rem = &rem - &(&t * d);
            quo = &quo + &t;
        }
        Some(quo)
    }

    /// Largest power of `y` dividing every term.
    pub fn y_valuation(&self) -> u32 {
        self.terms.keys().map(|k| k.1).min().unwrap_or(0)
    }

    pub fn depends_on_y(&self) -> bool {
        self.terms.keys().any(|k| k.1 > 0)
    }

    pub fn depends_on_x(&self) -> bool {
        self.terms.keys().any(|k| k.0 > 0)
    }

    /// Convert a polynomial free of `y` into a univariate polynomial in `x`.
    pub fn to_unipoly_x(&self) -> Option<UniPoly> {
        if self.depends_on_y() {
            return None;
        }
        Some(self.subst_y(&GaussRat::zero()))
    }

    /// Convert a polynomial free of `x` into a univariate polynomial in `y`.
    pub fn to_unipoly_y(&self) -> Option<UniPoly> {
        if self.depends_on_x() {
            return None;
        }
        Some(self.subst_x(&GaussRat::zero()))
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, o: &BiPoly) -> BiPoly {
        let mut r = self.clone();
        for (&(a, b), c) in &o.terms {
            r.add_term(a, b, c);
        }
        r
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, o: &BiPoly) -> BiPoly {
        let mut r = self.clone();
        for (&(a, b), c) in &o.terms {
            r.add_term(a, b, &-c);
        }
        r
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, o: &BiPoly) -> BiPoly {
        let mut r = BiPoly::zero();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &o.terms {
                r.add_term(a1 + a2, b1 + b2, &(c1 * c2));
            }
        }
        r
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly { terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect() }
    }
}

fn fmt_monomial(parts: &[(&str, u32)]) -> String {
    parts
        .iter()
        .filter(|(_, e)| *e > 0)
        .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{}^{}", v, e) })
        .collect::<Vec<_>>()
        .join("*")
}

/// Writes `sum c_k * m_k` with explicit ` + ` / ` - ` separators.
fn write_terms(f: &mut fmt::Formatter<'_>, terms: &[(GaussRat, String)]) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    for (idx, (c, mono)) in terms.iter().enumerate() {
        let (neg, body) = c.signed_parts();
        let text = if mono.is_empty() {
            body
        } else if body == "1" {
            mono.clone()
        } else {
            format!("{}*{}", body, mono)
        };
        match (idx, neg) {
            (0, false) => write!(f, "{}", text)?,
            (0, true) => write!(f, "-{}", text)?,
            (_, false) => write!(f, " + {}", text)?,
            (_, true) => write!(f, " - {}", text)?,
        }
    }
    Ok(())
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut keys: Vec<_> = self.terms.iter().collect();
        keys.sort_by(|a, b| grlex(b.0, a.0));
        let terms: Vec<_> =
            keys.into_iter().map(|(&(dx, dy), c)| (c.clone(), fmt_monomial(&[("x", dx), ("y", dy)]))).collect();
        write_terms(f, &terms)
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPoly({})", self)
    }
}

/// Dense univariate polynomial over the Gaussian rationals, ascending coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<GaussRat>,
    var: Var,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<GaussRat>, var: Var) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs, var }
    }

    pub fn from_ints(coeffs: &[i64], var: Var) -> Self {
        UniPoly::new(coeffs.iter().map(|&c| GaussRat::from_int(c)).collect(), var)
    }

    pub fn zero(var: Var) -> Self {
        UniPoly { coeffs: Vec::new(), var }
    }

    pub fn constant(c: GaussRat, var: Var) -> Self {
        UniPoly::new(vec![c], var)
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn with_var(mut self, var: Var) -> Self {
        self.var = var;
        self
    }

    pub fn coeffs(&self) -> &[GaussRat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> GaussRat {
        self.coeffs.last().cloned().unwrap_or_else(GaussRat::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn has_real_coefficients(&self) -> bool {
        self.coeffs.iter().all(GaussRat::is_real)
    }

    pub fn add_term(&mut self, k: usize, c: &GaussRat) {
        if c.is_zero() {
            return;
        }
        if self.coeffs.len() <= k {
            self.coeffs.resize(k + 1, GaussRat::zero());
        }
        self.coeffs[k] += c;
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn eval(&self, v: &GaussRat) -> GaussRat {
        self.coeffs.iter().rev().fold(GaussRat::zero(), |acc, c| &(&acc * v) + c)
    }

    pub fn eval_c(&self, v: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * v + c.to_complex())
    }

    pub fn to_complex_coeffs(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(GaussRat::to_complex).collect()
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * &GaussRat::from_int(k as i64)).collect(),
            self.var,
        )
    }

    pub fn scale(&self, c: &GaussRat) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|v| v * c).collect(), self.var)
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().inv().unwrap())
    }

    /// Euclidean division over the field `Q(i)`.
    pub fn divrem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = d.lc().inv().unwrap();
        let mut rem = self.coeffs.clone();
        let n = rem.len();
        if n <= dd {
            return (UniPoly::zero(self.var), self.clone());
        }
        let mut quo = vec![GaussRat::zero(); n - dd];
        for k in (0..n - dd).rev() {
            let q = &rem[k + dd] * &inv;
            if q.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                let t = dc * &q;
                rem[k + j] -= &t;
            }
            quo[k] = q;
        }
        rem.truncate(dd);
        (UniPoly::new(quo, self.var), UniPoly::new(rem, self.var))
    }

    pub fn div_exact(&self, d: &UniPoly) -> Option<UniPoly> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors, monic.
    pub fn squarefree_part(&self) -> UniPoly {
        if self.degree().unwrap_or(0) == 0 {
            return UniPoly::constant(GaussRat::one(), self.var);
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).unwrap().monic()
    }

    pub fn to_bipoly(&self) -> BiPoly {
        let mut p = BiPoly::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            match self.var {
                Var::Y => p.add_term(0, k as u32, c),
                _ => p.add_term(k as u32, 0, c),
            }
        }
        p
    }

    /// `Some(c)` with `self == c * other`.
    pub fn proportionality(&self, other: &UniPoly) -> Option<GaussRat> {
        if self.is_zero() || other.is_zero() || self.coeffs.len() != other.coeffs.len() {
            return None;
        }
        let c = &self.lc() / &other.lc();
        (other.scale(&c).coeffs == self.coeffs).then_some(c)
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, o: &UniPoly) -> UniPoly {
        let mut r = self.clone();
        for (k, c) in o.coeffs.iter().enumerate() {
            r.add_term(k, c);
        }
        r
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, o: &UniPoly) -> UniPoly {
        let mut r = self.clone();
        for (k, c) in o.coeffs.iter().enumerate() {
            r.add_term(k, &-c);
        }
        r
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero(self.var);
        }
        let mut out = vec![GaussRat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        UniPoly::new(out, self.var)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.var.name();
        let terms: Vec<_> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (c.clone(), fmt_monomial(&[(v, k as u32)])))
            .collect();
        write_terms(f, &terms)
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly[{}]({})", self.var.name(), self)
    }
}

/// Polynomial in an auxiliary variable whose coefficients are bivariate
/// polynomials; ascending order. Used for eliminating `y` (or a fiber
/// coordinate `w`) while keeping `x`, `y` symbolic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecPoly {
    coeffs: Vec<BiPoly>,
}

impl RecPoly {
    pub fn new(mut coeffs: Vec<BiPoly>) -> Self {
        while coeffs.last().is_some_and(BiPoly::is_zero) {
            coeffs.pop();
        }
        RecPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BiPoly] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lc(&self) -> BiPoly {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn derivative(&self) -> RecPoly {
        RecPoly::new(
            self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c.scale(&GaussRat::from_int(k as i64))).collect(),
        )
    }

    /// Numeric coefficients at a point `(x, y)`.
    pub fn eval_coeffs_c(&self, x: Complex64, y: Complex64) -> Vec<Complex64> {
        self.coeffs.iter().map(|c| c.eval_c(x, y)).collect()
    }

    /// Exact coefficients at a point `(x, y)`.
    pub fn eval_coeffs(&self, x: &GaussRat, y: &GaussRat, var: Var) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| c.eval(x, y)).collect(), var)
    }
}
