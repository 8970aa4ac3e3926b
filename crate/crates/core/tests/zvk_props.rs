use monodromy::algebra::{is_squarefree, BiPoly, GaussRat};
use monodromy::braid::{artin_equal, braid_compose, braid_permutation, BraidWord, FreeWord};
use monodromy::roots::{final_permutation, TrackOptions};
use monodromy::zvk::{
    abelianize, braid_monodromy_with, critical_values, genericity_fix, pi1, plan_loops, tietze_simplify, LoopPlan,
    Pi1Config, Presentation, DEFAULT_TIETZE_BUDGET,
};
use num_complex::Complex64;
use proptest::prelude::*;

/// Squarefree curve of total degree at most 4, monic in `y`.
fn curve() -> impl Strategy<Value = BiPoly> {
    (2u32..=4, prop::collection::vec(-2i64..=2, 10))
        .prop_map(|(n, cs)| {
            let mut f = BiPoly::monomial(GaussRat::from_int(1), 0, n);
            let mut it = cs.into_iter();
            for j in 0..n {
                for i in 0..=(4 - n).max(1).min(4 - j) {
                    if let Some(c) = it.next() {
                        f.add_term(i, j, &GaussRat::from_int(c));
                    }
                }
            }
            f
        })
        .prop_filter("not squarefree", |f| f.depends_on_x() && is_squarefree(f))
}

fn reversed(plan: &LoopPlan) -> LoopPlan {
    let mut p = plan.clone();
    for l in &mut p.loops {
        l.path = l.path.reversed();
    }
    p
}

/// Position of each root in the strand order: real part, ties (conjugate
/// pairs) broken by imaginary part through a slightly tilted projection.
fn ranks(zs: &[Complex64]) -> Vec<usize> {
    let tilt = Complex64::from_polar(1.0, -(2f64.powi(-30)));
    let key = |z: Complex64| (z * tilt).re;
    let mut idx: Vec<usize> = (0..zs.len()).collect();
    idx.sort_by(|&a, &b| key(zs[a]).total_cmp(&key(zs[b])));
    let mut rank = vec![0; zs.len()];
    for (p, &i) in idx.iter().enumerate() {
        rank[i] = p;
    }
    rank
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn reversed_loops_give_inverse_braids(f in curve()) {
        let cs = critical_values(&f).unwrap();
        let plan = plan_loops(&cs);
        let opts = TrackOptions::default();
        let (fwd, traj) = braid_monodromy_with(&f, &plan, &opts).unwrap();
        let (bwd, _) = braid_monodromy_with(&f, &reversed(&plan), &opts).unwrap();
        let id = BraidWord::identity(fwd.strands);
        for (k, (a, b)) in fwd.braids.iter().zip(&bwd.braids).enumerate() {
            prop_assert!(artin_equal(&braid_compose(a, b).unwrap(), &id), "loop {}: {} then {}", k, a, b);
            // the braid's permutation is the strand matching of the tracked loop
            let start: Vec<Complex64> = traj[k][0].roots.iter().map(|r| r.z()).collect();
            let rank = ranks(&start);
            let matching = final_permutation(&traj[k]);
            let mut expected = vec![0; start.len()];
            for s in 0..start.len() {
                expected[rank[s]] = rank[matching[s]];
            }
            prop_assert_eq!(braid_permutation(a), expected);
        }
    }

    #[test]
    fn finer_tracking_keeps_automorphisms(f in curve()) {
        let plan = plan_loops(&critical_values(&f).unwrap());
        let coarse = TrackOptions::default();
        let fine = TrackOptions { max_step: coarse.max_step / 2.0, ..coarse };
        let (a, _) = braid_monodromy_with(&f, &plan, &coarse).unwrap();
        let (b, _) = braid_monodromy_with(&f, &plan, &fine).unwrap();
        for (x, y) in a.braids.iter().zip(&b.braids) {
            prop_assert!(artin_equal(x, y), "{} vs {}", x, y);
        }
    }
}

fn presentation() -> impl Strategy<Value = Presentation> {
    (1usize..=3).prop_flat_map(|n| {
        let n32 = n as i32;
        let rel = prop::collection::vec((1..=n32, any::<bool>()), 1..=6)
            .prop_map(move |ls| FreeWord::new(n, ls.iter().map(|&(l, s)| if s { l } else { -l }).collect()).unwrap());
        prop::collection::vec(rel, 0..=3).prop_map(move |rels| Presentation::new(n, rels))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn tietze_preserves_abelianization(p in presentation()) {
        let s = tietze_simplify(&p, DEFAULT_TIETZE_BUDGET);
        prop_assert_eq!(abelianize(&s), abelianize(&p), "{} -> {}", p, s);
        prop_assert!(s.num_generators() <= p.num_generators());
    }
}

#[test]
fn no_critical_values_gives_free_group() {
    for (text, n) in [("y^2 - 1", 2), ("y^3 + 2", 3), ("y^4 - y", 4)] {
        let f = monodromy::algebra::parse_poly(text).unwrap();
        let (g, _) = genericity_fix(&f, 0).unwrap();
        assert!(critical_values(&g).unwrap().is_empty());
        let r = pi1(&f, &Pi1Config::default()).unwrap();
        assert_eq!(r.presentation, Presentation::free(n), "{}", text);
        assert_eq!(r.abelianization.rank, n);
    }
}
