use num_complex::Complex64;

use super::{CxApprox, RootsError};

const MAX_ITER: usize = 600;

/// Horner evaluation of `p` and `p'` together with a running bound on the
/// rounding error of `p(z)`.
pub(crate) fn eval_with_bound(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64, f64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    let mut mu = 0.0;
    let az = z.norm();
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
        mu = mu * az + p.norm();
    }
    // running-error bound u(2 mu - |p|); complex multiplication costs a
    // larger constant unless everything is real
    let real = z.im == 0.0 && coeffs.iter().all(|c| c.im == 0.0);
    let k = if real { 1.01 } else { 4.0 };
    let u = f64::EPSILON / 2.0;
    (p, dp, k * u * (2.0 * mu - p.norm()).max(0.0))
}

fn trim_leading(coeffs: &[Complex64]) -> &[Complex64] {
    let mut n = coeffs.len();
    while n > 0 && coeffs[n - 1] == Complex64::new(0.0, 0.0) {
        n -= 1;
    }
    &coeffs[..n]
}

fn initial_guesses(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let an = coeffs[n].norm();
    // Fujiwara-style radius, then the geometric mean as a compromise
    let upper = (0..n).map(|k| (coeffs[k].norm() / an).powf(1.0 / (n - k) as f64)).fold(0.0f64, f64::max) * 2.0;
    let gm = (coeffs[0].norm() / an).powf(1.0 / n as f64);
    let r = if gm > 0.0 { gm.min(upper).max(1e-12) } else { upper.max(1e-12) };
    (0..n)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(r, th)
        })
        .collect()
}

/// Aberth-Ehrlich iteration from the given starting points. Returns the
/// iterates and whether the correction criterion was met.
pub(crate) fn aberth_iterate(coeffs: &[Complex64], start: &[Complex64], max_iter: usize) -> (Vec<Complex64>, bool) {
    let n = start.len();
    let mut z = start.to_vec();
    let mut done = vec![false; n];
    for _ in 0..max_iter {
        let mut all_done = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (p, dp, bound) = eval_with_bound(coeffs, z[i]);
            if p.norm() <= bound {
                done[i] = true;
                continue;
            }
            let ratio = p / dp;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    s += 1.0 / (z[i] - z[j]);
                }
            }
            let denom = 1.0 - ratio * s;
            let corr = if denom.norm() > 0.0 && denom.is_finite() { ratio / denom } else { ratio };
            if !corr.is_finite() {
                continue;
            }
            z[i] -= corr;
            if corr.norm() <= 4.0 * f64::EPSILON * z[i].norm().max(f64::MIN_POSITIVE) {
                done[i] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            return (z, true);
        }
    }
    (z, done.iter().all(|&d| d))
}

/// Inclusion radii: the disk of radius `n * |w_i|` (Weierstrass correction,
/// widened by the evaluation error bound) around `z_i`; overlapping disks are
/// merged into clusters and every member gets a radius covering the cluster.
pub(crate) fn certify(coeffs: &[Complex64], z: &[Complex64]) -> Vec<f64> {
    let n = z.len();
    let an = coeffs[coeffs.len() - 1];
    let mut rad = vec![0.0; n];
    for i in 0..n {
        let (p, _, bound) = eval_with_bound(coeffs, z[i]);
        let mut prod = an;
        for j in 0..n {
            if j != i {
                prod *= z[i] - z[j];
            }
        }
        let w = (p.norm() + bound) / prod.norm();
        rad[i] = if w.is_finite() { n as f64 * w * (1.0 + 4.0 * f64::EPSILON) } else { f64::INFINITY };
    }
    // cluster by overlap (union-find on a small set)
    let mut comp: Vec<usize> = (0..n).collect();
    fn find(c: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while c[r] != r {
            r = c[r];
        }
        c[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (z[i] - z[j]).norm() <= rad[i] + rad[j] {
                let (a, b) = (find(&mut comp, i), find(&mut comp, j));
                comp[a] = b;
            }
        }
    }
    let roots: Vec<usize> = (0..n).map(|i| find(&mut comp, i)).collect();
    (0..n)
        .map(|i| {
            let mut r = rad[i];
            for j in 0..n {
                if j != i && roots[j] == roots[i] {
                    r = r.max((z[i] - z[j]).norm() + rad[j]);
                }
            }
            r
        })
        .collect()
}

/// All roots, with multiplicity, of the polynomial with ascending
/// coefficients `coeffs`.
pub fn roots_all(coeffs: &[Complex64], precision: u32) -> Result<Vec<CxApprox>, RootsError> {
    if precision < 53 {
        return Err(RootsError::Precision(precision));
    }
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(RootsError::NonFinite);
    }
    let coeffs = trim_leading(coeffs);
    if coeffs.len() < 2 {
        return Err(RootsError::Degree);
    }
    // exact zero roots are peeled off
    let zeros = coeffs.iter().take_while(|c| **c == Complex64::new(0.0, 0.0)).count();
    let rest = &coeffs[zeros..];
    let mut out: Vec<CxApprox> = (0..zeros).map(|_| CxApprox::new(Complex64::new(0.0, 0.0), 0.0)).collect();
    if rest.len() < 2 {
        return Ok(out);
    }
    let z = if rest.len() == 2 {
        vec![-rest[0] / rest[1]]
    } else {
        let (z, _) = aberth_iterate(rest, &initial_guesses(rest), MAX_ITER);
        z
    };
    let rad = certify(rest, &z);
    if rad.iter().any(|r| !r.is_finite()) || z.iter().any(|v| !v.is_finite()) {
        return Err(RootsError::NonConvergence);
    }
    out.extend(z.iter().zip(rad).map(|(&v, r)| CxApprox::new(v, r)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn two_real_roots() {
        let r = roots_all(&[c(-1.0), c(0.0), c(1.0)], 53).unwrap();
        let mut v: Vec<f64> = r.iter().map(|a| a.re).collect();
        v.sort_by(f64::total_cmp);
        assert!((v[0] + 1.0).abs() < 1e-15 && (v[1] - 1.0).abs() < 1e-15);
        assert!(r.iter().all(|a| a.err < 1e-15 && a.im.abs() <= a.err));
    }

    #[test]
    fn triple_zero() {
        let r = roots_all(&[c(0.0), c(0.0), c(0.0), c(1.0)], 53).unwrap();
        assert_eq!(r.len(), 3);
        assert!(r.iter().all(|a| a.re == 0.0 && a.im == 0.0 && a.err == 0.0));
    }

    #[test]
    fn cluster_is_covered() {
        // (y - 1)^3
        let r = roots_all(&[c(-1.0), c(3.0), c(-3.0), c(1.0)], 53).unwrap();
        for a in &r {
            assert!((a.z() - c(1.0)).norm() <= a.err, "{:?}", a);
        }
    }

    #[test]
    fn constant_rejected() {
        assert!(roots_all(&[c(2.0)], 53).is_err());
        assert!(roots_all(&[c(1.0), c(1.0)], 32).is_err());
    }
}
