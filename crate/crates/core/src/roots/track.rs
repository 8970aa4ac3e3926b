use num_complex::Complex64;

use super::aberth::{aberth_iterate, certify};
use super::{roots_all, CxApprox, Path, PathSample, RootsError};
use crate::algebra::BiPoly;

/// Step control for [`continue_roots_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrackOptions {
    /// Working precision in bits, at least 53.
    pub precision: u32,
    /// Largest step, as a fraction of one path segment.
    pub max_step: f64,
    /// Number of precision doublings allowed on a matching ambiguity.
    pub max_escalations: u32,
}

impl Default for TrackOptions {
    fn default() -> Self {
        TrackOptions { precision: 53, max_step: 1.0 / 16.0, max_escalations: 4 }
    }
}

impl TrackOptions {
    pub fn with_precision(precision: u32) -> Self {
        TrackOptions { precision, ..Default::default() }
    }

    /// Smallest step before escalating; never below what f64 can resolve.
    fn min_step(precision: u32) -> f64 {
        (-(precision as f64) / 4.0).exp2().max(64.0 * f64::EPSILON)
    }
}

pub(crate) fn min_gap(z: &[Complex64]) -> f64 {
    let mut g = f64::INFINITY;
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            g = g.min((z[i] - z[j]).norm());
        }
    }
    g
}

fn separated(z: &[Complex64], err: &[f64]) -> bool {
    let max_err = err.iter().copied().fold(0.0, f64::max);
    min_gap(z) > 4.0 * max_err
}

enum Reject {
    Moved,
    Separation,
    LeadingCoefficient,
}

fn lc_ok(c: &[Complex64]) -> bool {
    let scale = c.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let lc = c.last().map(|v| v.norm()).unwrap_or(0.0);
    lc > 1e-13 * scale && lc.is_finite()
}

/// Tracks the roots of a polynomial family `coeffs_at(segment, s)` (ascending
/// coefficients, fixed degree) along `nseg` segments, `s` running over [0, 1]
/// in each. Strand identity is the index into the root list.
pub(crate) fn track_family<F>(nseg: usize, coeffs_at: F, opts: &TrackOptions) -> Result<Vec<PathSample>, RootsError>
where
    F: Fn(usize, f64) -> Vec<Complex64>,
{
    if opts.precision < 53 {
        return Err(RootsError::Precision(opts.precision));
    }
    let c0 = coeffs_at(0, 0.0);
    if !lc_ok(&c0) {
        return Err(RootsError::LeadingCoefficient { t: 0.0 });
    }
    let first = roots_all(&c0, opts.precision)?;
    let z0: Vec<Complex64> = first.iter().map(CxApprox::z).collect();
    let e0: Vec<f64> = first.iter().map(|r| r.err).collect();
    if !separated(&z0, &e0) {
        return Err(RootsError::MarginViolation { t: 0.0 });
    }
    let mut samples = vec![PathSample { t: 0.0, roots: first }];
    let mut precision = opts.precision;
    let mut escalations = 0;
    for seg in 0..nseg {
        let mut s = 0.0f64;
        let mut h = opts.max_step;
        while s < 1.0 {
            let s_new = if s + h >= 1.0 - 1e-14 { 1.0 } else { s + h };
            let t_new = (seg as f64 + s_new) / nseg as f64;
            let prev: Vec<Complex64> = samples.last().unwrap().roots.iter().map(CxApprox::z).collect();
            let gap = min_gap(&prev);
            let c = coeffs_at(seg, s_new);
            let outcome = if !lc_ok(&c) {
                Err(Reject::LeadingCoefficient)
            } else {
                let (z, _) = aberth_iterate(&c, &prev, 80);
                let moved_ok = z.iter().zip(&prev).all(|(a, b)| a.is_finite() && (a - b).norm() < gap / 4.0);
                if !moved_ok {
                    Err(Reject::Moved)
                } else {
                    let err = certify(&c, &z);
                    if separated(&z, &err) {
                        Ok(z.iter().zip(err).map(|(&v, e)| CxApprox::new(v, e)).collect::<Vec<_>>())
                    } else {
                        Err(Reject::Separation)
                    }
                }
            };
            match outcome {
                Ok(roots) => {
                    samples.push(PathSample { t: t_new, roots });
                    s = s_new;
                    h = (h * 1.5).min(opts.max_step);
                }
                Err(why) => {
                    h /= 2.0;
                    if h < TrackOptions::min_step(precision) {
                        if escalations < opts.max_escalations {
                            escalations += 1;
                            precision *= 2;
                            continue;
                        }
                        return Err(match why {
                            Reject::Moved => RootsError::MatchingAmbiguity { t: t_new },
                            Reject::Separation => RootsError::MarginViolation { t: t_new },
                            Reject::LeadingCoefficient => RootsError::LeadingCoefficient { t: t_new },
                        });
                    }
                }
            }
        }
    }
    Ok(samples)
}

/// Continue the `y`-roots of `f(x, y)` along a path in the `x`-plane.
pub fn continue_roots(f: &BiPoly, path: &Path, precision: u32) -> Result<Vec<PathSample>, RootsError> {
    continue_roots_with(f, path, &TrackOptions::with_precision(precision))
}

pub fn continue_roots_with(f: &BiPoly, path: &Path, opts: &TrackOptions) -> Result<Vec<PathSample>, RootsError> {
    let ycoeffs: Vec<Vec<Complex64>> = f.y_coeffs().iter().map(|u| u.to_complex_coeffs()).collect();
    let eval = |x: Complex64| -> Vec<Complex64> {
        ycoeffs.iter().map(|cs| cs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c)).collect()
    };
    if path.is_constant() {
        let x = path.start();
        return track_family(0, |_, _| eval(x), opts);
    }
    let segs = &path.segments;
    track_family(segs.len(), |k, s| eval(segs[k].point(s)), opts)
}

/// `perm[i]` is the index of the initial root nearest to final root `i`.
pub fn final_permutation(samples: &[PathSample]) -> Vec<usize> {
    let first = &samples[0].roots;
    let last = &samples[samples.len() - 1].roots;
    last.iter()
        .map(|r| {
            (0..first.len())
                .min_by(|&a, &b| (first[a].z() - r.z()).norm().total_cmp(&(first[b].z() - r.z()).norm()))
                .unwrap()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;
    use crate::roots::Segment;

    #[test]
    fn constant_path_single_sample() {
        let f = parse_poly("y^2 - x").unwrap();
        let s = continue_roots(&f, &Path::constant(Complex64::new(1.0, 0.0)), 53).unwrap();
        assert_eq!(s.len(), 1);
        let mut re: Vec<f64> = s[0].roots.iter().map(|r| r.re).collect();
        re.sort_by(f64::total_cmp);
        assert!((re[0] + 1.0).abs() < 1e-14 && (re[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn square_root_exchanges() {
        let f = parse_poly("y^2 - x").unwrap();
        let p = Path::new(vec![Segment::circle(Complex64::new(0.0, 0.0), 1.0, 0.0)]);
        let s = continue_roots(&f, &p, 53).unwrap();
        assert_eq!(final_permutation(&s), vec![1, 0]);
        let q = Path::new(vec![Segment::circle(Complex64::new(3.0, 0.0), 1.0, 0.0)]);
        let s = continue_roots(&f, &q, 53).unwrap();
        assert_eq!(final_permutation(&s), vec![0, 1]);
    }

    #[test]
    fn escalation_then_failure_through_critical_value() {
        let f = parse_poly("y^2 - x").unwrap();
        let p = Path::new(vec![Segment::line(Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0))]);
        assert!(continue_roots(&f, &p, 53).is_err());
    }
}
