use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{LoopPlan, ZvkError};
use crate::algebra::BiPoly;
use crate::braid::{braid_permutation, BraidWord};
use crate::roots::{continue_roots_with, PathSample, TrackOptions};

/// Tilt of the projection used to order strands: ordering by
/// `Re(z e^{-i eps})` is ordering by real part with ties broken by
/// imaginary part.
const TILT: f64 = 1.0 / (1u64 << 30) as f64;

/// Braid of each loop of a plan, in plan order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonodromyRep {
    pub strands: usize,
    pub braids: Vec<BraidWord>,
}

impl MonodromyRep {
    pub fn new(strands: usize, braids: Vec<BraidWord>) -> Self {
        MonodromyRep { strands, braids }
    }
}

fn frame(z: Complex64) -> (f64, f64) {
    let w = z * Complex64::from_polar(1.0, -TILT);
    (w.re, w.im)
}

fn order_positions(roots: &[Complex64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..roots.len()).collect();
    idx.sort_by(|&a, &b| frame(roots[a]).0.total_cmp(&frame(roots[b]).0));
    idx
}

/// Convert sampled strand motion into a braid word. Positions are counted
/// from the left in the tilted order; whenever the strands at positions
/// `i`, `i+1` exchange, `s_i` is emitted when the strand moving right passes
/// below the other, `S_i` when it passes above. Motion between consecutive
/// samples is taken to be linear.
pub fn braid_from_samples(samples: &[PathSample]) -> Result<BraidWord, ZvkError> {
    let n = samples[0].roots.len();
    let pos: Vec<Vec<Complex64>> = samples.iter().map(|s| s.roots.iter().map(|r| r.z()).collect()).collect();
    let mut strand_at = order_positions(&pos[0]);
    let mut pos_of = vec![0; n];
    for (p, &s) in strand_at.iter().enumerate() {
        pos_of[s] = p;
    }
    // (time, strand a, strand b, perp a, perp b)
    let mut events: Vec<(f64, usize, usize, f64, f64)> = Vec::new();
    for k in 0..pos.len().saturating_sub(1) {
        for a in 0..n {
            for b in a + 1..n {
                let (pa0, qa0) = frame(pos[k][a]);
                let (pb0, qb0) = frame(pos[k][b]);
                let (pa1, qa1) = frame(pos[k + 1][a]);
                let (pb1, qb1) = frame(pos[k + 1][b]);
                let d0 = pa0 - pb0;
                let d1 = pa1 - pb1;
                if (d0 < 0.0) != (d1 < 0.0) {
                    let tau = d0 / (d0 - d1);
                    let qa = qa0 + (qa1 - qa0) * tau;
                    let qb = qb0 + (qb1 - qb0) * tau;
                    events.push((k as f64 + tau, a, b, qa, qb));
                }
            }
        }
    }
    events.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut letters = Vec::with_capacity(events.len());
    for (t, a, b, qa, qb) in events {
        let (p, q) = (pos_of[a], pos_of[b]);
        if p.abs_diff(q) != 1 {
            return Err(ZvkError::AmbiguousCrossing(t));
        }
        let (left_q, right_q, i) = if p < q { (qa, qb, p) } else { (qb, qa, q) };
        let sign = if left_q < right_q { 1 } else { -1 };
        letters.push(sign * (i as i32 + 1));
        strand_at.swap(i, i + 1);
        pos_of[strand_at[i]] = i;
        pos_of[strand_at[i + 1]] = i + 1;
    }
    let word = BraidWord::new(n, letters).map_err(ZvkError::Braid)?;
    // the word must realize the observed strand permutation
    let last = order_positions(&pos[pos.len() - 1]);
    let start = order_positions(&pos[0]);
    let mut observed = vec![0; n];
    for (p_end, &s) in last.iter().enumerate() {
        let p0 = start.iter().position(|&x| x == s).unwrap();
        observed[p0] = p_end;
    }
    if braid_permutation(&word) != observed {
        return Err(ZvkError::PermutationMismatch);
    }
    Ok(word)
}

/// Braid monodromy of `f` along every loop of `plan`; loops are tracked in
/// parallel, results are in plan order.
pub fn braid_monodromy(f: &BiPoly, plan: &LoopPlan, precision: u32) -> Result<MonodromyRep, ZvkError> {
    braid_monodromy_with(f, plan, &TrackOptions::with_precision(precision)).map(|(rep, _)| rep)
}

/// As [`braid_monodromy`], also returning the sampled root trajectories.
pub fn braid_monodromy_with(
    f: &BiPoly,
    plan: &LoopPlan,
    opts: &TrackOptions,
) -> Result<(MonodromyRep, Vec<Vec<PathSample>>), ZvkError> {
    let n = f.deg_y() as usize;
    let results: Vec<Result<(BraidWord, Vec<PathSample>), ZvkError>> = plan
        .loops
        .par_iter()
        .map(|l| {
            let samples = continue_roots_with(f, &l.path, opts)?;
            let b = braid_from_samples(&samples)?;
            Ok((b, samples))
        })
        .collect();
    let mut braids = Vec::with_capacity(results.len());
    let mut trajectories = Vec::with_capacity(results.len());
    for r in results {
        let (b, s) = r?;
        braids.push(b);
        trajectories.push(s);
    }
    Ok((MonodromyRep { strands: n, braids }, trajectories))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;
    use crate::braid::artin_equal;
    use crate::zvk::{critical_values, plan_loops};

    fn braids_of(s: &str) -> Vec<BraidWord> {
        let f = parse_poly(s).unwrap();
        let plan = plan_loops(&critical_values(&f).unwrap());
        braid_monodromy(&f, &plan, 53).unwrap().braids
    }

    #[test]
    fn sqrt_curve_gives_s1() {
        let b = braids_of("y^2 - x");
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].to_string(), "s1");
    }

    #[test]
    fn cube_root_curve() {
        let b = braids_of("y^3 - x");
        assert!(artin_equal(&b[0], &BraidWord::full_cycle(3)), "{}", b[0]);
    }

    #[test]
    fn two_branch_points() {
        let b = braids_of("y^2 - (x - 1)*(x - 2)");
        assert_eq!(b.len(), 2);
        for w in &b {
            assert_eq!(braid_permutation(w), vec![1, 0]);
        }
    }

    #[test]
    fn reversed_loop_inverts() {
        let f = parse_poly("y^3 - 3*x*y + x^2 - 1").unwrap();
        let plan = plan_loops(&critical_values(&f).unwrap());
        let mut rev = plan.clone();
        for l in &mut rev.loops {
            l.path = l.path.reversed();
        }
        let a = braid_monodromy(&f, &plan, 53).unwrap();
        let b = braid_monodromy(&f, &rev, 53).unwrap();
        for (x, y) in a.braids.iter().zip(&b.braids) {
            let c = crate::braid::braid_compose(x, y).unwrap();
            assert!(artin_equal(&c, &BraidWord::identity(3)), "{} / {}", x, y);
        }
    }
}
