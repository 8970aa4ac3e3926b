//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use monodromy::algebra::{
    discriminant, is_squarefree, parse_poly, projective_transform, BiPoly, GaussRat, ProjMatrix, RecPoly,
};
use monodromy::braid::{artin_equal, braid_compose, BraidWord, FreeWord};
use monodromy::hamiltonian::{
    default_loops, fiber_curve, lattice, monodromy, monodromy_group, period, period_with_nodes, singular_set, Form,
    SystemId,
};
use monodromy::roots::{roots_all, TrackOptions};
use monodromy::zvk::{
    abelianize, braid_monodromy_with, critical_values, is_commutator, pi1, plan_loops, tietze_simplify, Pi1Config,
    Presentation, DEFAULT_TIETZE_BUDGET,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn bp(s: &str) -> BiPoly {
    parse_poly(s).unwrap()
}

fn within(elapsed: Duration, limit: f64) -> bool {
    elapsed.as_secs_f64() < limit
}

fn sigma_product(d: usize) -> BraidWord {
    BraidWord::new(d, (1..d as i32).collect()).unwrap()
}

fn criterion_1() -> Outcome {
    // 2(w^2 - 1)(w - x) - y^2 in w, coefficients in (x, y)
    let cubic = RecPoly::new(vec![bp("2*x - y^2"), bp("-2"), bp("-2*x"), bp("2")]);
    let disc = discriminant(&cubic).unwrap();
    let quartic = bp("27/4*y^4 + 2*x*y^2*(x^2 - 9) - 4*(x^2 - 1)^2");
    let k = disc.proportionality(&quartic);
    let engine = singular_set(SystemId::Pendulum).proportionality(&quartic);
    match (k, engine) {
        (Some(k), Some(_)) => outcome(true, format!("disc_w = {} * quartic; engine singular set proportional", k)),
        _ => outcome(false, format!("disc_w = {} not proportional to the quartic", disc)),
    }
}

fn criterion_2() -> Outcome {
    let f = bp("y^2 - x");
    let r = pi1(&f, &Pi1Config::default()).unwrap();
    let braid_ok = r.monodromy.braids.len() == 1 && artin_equal(&r.monodromy.braids[0], &sigma_product(2));
    let pass = braid_ok && r.simplified.num_generators() == 1 && r.abelianization.to_string() == "Z";
    outcome(
        pass,
        format!("braid {}, simplified {}, abelianization {}", r.monodromy.braids[0], r.simplified, r.abelianization),
    )
}

fn criterion_3() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for d in 2..=5usize {
        let t = Instant::now();
        let f = bp(&format!("y^{} - x", d));
        let r = pi1(&f, &Pi1Config::default()).unwrap();
        let el = t.elapsed();
        let b = &r.monodromy.braids[0];
        let same = artin_equal(b, &sigma_product(d));
        let collapsed = r.simplified.num_generators() == 1;
        let ok = same && collapsed && within(el, 10.0);
        pass &= ok;
        parts.push(format!(
            "d={} braid [{}] {} s1..s{}, {} generator(s), {:.2}s",
            d,
            b,
            if same { "=" } else { "!=" },
            d - 1,
            r.simplified.num_generators(),
            el.as_secs_f64()
        ));
    }
    outcome(pass, parts.join("; "))
}

fn criterion_4() -> Outcome {
    let g = projective_transform(&bp("y*(1 + 2*x^2*y)"), &ProjMatrix::swap_yz(), true).unwrap();
    let transform_ok = g == bp("y^4 + 2*x^2*y");
    let r = pi1(&g, &Pi1Config::default()).unwrap();
    let ab_ok = r.abelianization.rank == 2 && r.abelianization.torsion.is_empty();
    let s = &r.simplified;
    let shape_ok = s.num_generators() == 2 && s.relators.len() == 1 && is_commutator(&s.relators[0]);
    outcome(
        transform_ok && ab_ok && shape_ok,
        format!("transform -> {}; abelianization {}; simplified {}", g, r.abelianization, s),
    )
}

fn criterion_5() -> Outcome {
    let f = bp("27/4*y^4 + 2*x*y^2*(x^2 - 9) - 4*(x^2 - 1)^2");
    let r = pi1(&f, &Pi1Config::default()).unwrap();
    let ab_ok = r.abelianization.rank == 1 && r.abelianization.torsion.is_empty();
    let s = &r.simplified;
    let report = if s.num_generators() == 1 {
        "collapsed to one generator".to_string()
    } else {
        format!(
            "simplification stalled at {} generators, {} relators (full collapse to one generator not reached)",
            s.num_generators(),
            s.relators.len()
        )
    };
    outcome(ab_ok, format!("abelianization {}; {}", r.abelianization, report))
}

fn criterion_6() -> Outcome {
    let lp = &default_loops(SystemId::Pendulum)[0];
    let m = match monodromy(SystemId::Pendulum, lp, 53) {
        Ok(m) => m,
        Err(e) => return outcome(false, e.to_string()),
    };
    let fixes_third = m.entries[2] == vec![0, 0, 1];
    let conj = m.transvection_conjugator();
    let pass = !m.is_identity()
        && m.is_square_zero()
        && m.defect_rank() == 1
        && fixes_third
        && conj.is_some()
        && m.residual < 1e-6;
    outcome(
        pass,
        format!(
            "M = {:?}, (M-I)^2 = 0: {}, rank(M-I) = {}, conjugator {:?}, residual {:.1e}",
            m.entries,
            m.is_square_zero(),
            m.defect_rank(),
            conj,
            m.residual
        ),
    )
}

fn mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn criterion_7() -> Outcome {
    let loops = default_loops(SystemId::Kepler);
    let report = match monodromy_group(SystemId::Kepler, &loops, 53) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let id = vec![vec![1, 0], vec![0, 1]];
    let mut pass = true;
    let mut parts = Vec::new();
    for l in &report.loops {
        let m = &l.matrix;
        let ok = l.invariants.trace == 0 && l.invariants.det == -1 && mul(m, m) == id && l.residual < 1e-6;
        pass &= ok;
        parts.push(format!("{} {:?} (trace {}, det {})", l.label, m, l.invariants.trace, l.invariants.det));
    }
    let (a, b) = (&report.loops[0].matrix, &report.loops[1].matrix);
    let commute = mul(a, b) == mul(b, a);
    pass &= commute && report.order == Some(4);
    parts.push(format!("commute {}, group {} of order {:?}", commute, report.group, report.order));
    outcome(pass, parts.join("; "))
}

fn random_curve(rng: &mut ChaCha8Rng) -> BiPoly {
    loop {
        let n = rng.gen_range(2..=4u32);
        let mut f = BiPoly::monomial(GaussRat::from_int(1), 0, n);
        for j in 0..n {
            for i in 0..=(4 - j).min(2) {
                f.add_term(i, j, &GaussRat::from_int(rng.gen_range(-2..=2)));
            }
        }
        if f.depends_on_x() && is_squarefree(&f) {
            return f;
        }
    }
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = Vec::new();

    // braid relations, every applicable pair of generators, n <= 6
    let mut relations = 0;
    for n in 2..=6usize {
        for i in 1..n as i32 {
            for j in 1..n as i32 {
                let w = |l: &[i32]| BraidWord::new(n, l.to_vec()).unwrap();
                let ok = match (i - j).abs() {
                    1 => artin_equal(&w(&[i, j, i]), &w(&[j, i, j])),
                    d if d >= 2 => artin_equal(&w(&[i, j]), &w(&[j, i])),
                    _ => continue,
                };
                relations += 1;
                if !ok {
                    failures.push(format!("relation n={} ({}, {})", n, i, j));
                }
            }
        }
    }

    // loop reversal on random curves
    for k in 0..20 {
        let f = random_curve(&mut rng);
        let plan = plan_loops(&critical_values(&f).unwrap());
        let mut back = plan.clone();
        for l in &mut back.loops {
            l.path = l.path.reversed();
        }
        let opts = TrackOptions::default();
        match (braid_monodromy_with(&f, &plan, &opts), braid_monodromy_with(&f, &back, &opts)) {
            (Ok((a, _)), Ok((b, _))) => {
                let id = BraidWord::identity(a.strands);
                if !a.braids.iter().zip(&b.braids).all(|(x, y)| artin_equal(&braid_compose(x, y).unwrap(), &id)) {
                    failures.push(format!("reversal curve {} ({})", k, f));
                }
            }
            (Err(e), _) | (_, Err(e)) => failures.push(format!("reversal curve {} ({}): {}", k, f, e)),
        }
    }

    // abelianization is invariant under simplification
    for k in 0..50 {
        let n = rng.gen_range(1..=3usize);
        let rels: Vec<FreeWord> = (0..rng.gen_range(0..=3))
            .map(|_| {
                let len = rng.gen_range(1..=6);
                let letters =
                    (0..len).map(|_| rng.gen_range(1..=n as i32) * if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
                FreeWord::new(n, letters).unwrap()
            })
            .collect();
        let p = Presentation::new(n, rels);
        if abelianize(&tietze_simplify(&p, DEFAULT_TIETZE_BUDGET)) != abelianize(&p) {
            failures.push(format!("tietze presentation {} ({})", k, p));
        }
    }

    // planted roots
    let mut worst_root = 0.0f64;
    let mut planted_polys = 0;
    while planted_polys < 100 {
        let d = rng.gen_range(1..=12usize);
        let roots: Vec<Complex64> =
            (0..d).map(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))).collect();
        if roots.iter().enumerate().any(|(i, a)| roots[i + 1..].iter().any(|b| (a - b).norm() <= 0.3)) {
            continue;
        }
        planted_polys += 1;
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for &r in &roots {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (k, &a) in c.iter().enumerate() {
                next[k + 1] += a;
                next[k] -= a * r;
            }
            c = next;
        }
        let found = roots_all(&c, 53).unwrap();
        for r in &roots {
            let e = found.iter().map(|f| (f.z() - r).norm()).fold(f64::INFINITY, f64::min);
            worst_root = worst_root.max(e);
        }
    }
    if worst_root >= 1e-10 {
        failures.push(format!("root error {:.1e}", worst_root));
    }

    // period quadrature against ten times the nodes
    let mut worst_period = 0.0f64;
    let mut fibers = 0;
    while fibers < 10 {
        let system = if fibers % 2 == 0 { SystemId::Pendulum } else { SystemId::Kepler };
        let c = [
            Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.0..1.0)),
            Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.0..1.0)),
        ];
        let Ok(l) = lattice(system, c, 53) else { continue };
        fibers += 1;
        let fc = fiber_curve(system, c).unwrap();
        for cy in &l.cycles {
            for form in [Form::Omega1, Form::Omega2] {
                let (v, n) = period(&fc, cy, form, 53).unwrap();
                let dense = period_with_nodes(&fc, cy, form, 10 * n).unwrap();
                worst_period = worst_period.max((v - dense).norm() / dense.norm().max(1.0));
            }
        }
    }
    if worst_period > 1e-8 {
        failures.push(format!("period deviation {:.1e}", worst_period));
    }

    let summary = format!(
        "{} braid relations, 20 reversed curves, 50 presentations, 100 planted polynomials (max error {:.1e}), 10 fibers (max deviation {:.1e})",
        relations, worst_root, worst_period
    );
    if failures.is_empty() {
        outcome(true, summary)
    } else {
        outcome(false, format!("{}; failures: {}", summary, failures.join(", ")))
    }
}

fn main() {
    let criteria: [(&str, f64, fn() -> Outcome); 8] = [
        ("pendulum discriminant identity", 1.0, criterion_1),
        ("square root curve", 5.0, criterion_2),
        ("y^d - x family", 40.0, criterion_3),
        ("Kepler curve", 30.0, criterion_4),
        ("pendulum curve", 60.0, criterion_5),
        ("pendulum Hamiltonian monodromy", 120.0, criterion_6),
        ("Kepler Hamiltonian monodromy", 120.0, criterion_7),
        ("property suites", 600.0, criterion_8),
    ];
    let mut failed = Vec::new();
    for (k, (name, limit, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = check();
        let el = t.elapsed();
        let pass = o.pass && within(el, *limit);
        println!(
            "{} criterion {} ({}): {} [{:.2}s, limit {}s]",
            if pass { "PASS" } else { "FAIL" },
            k + 1,
            name,
            o.detail,
            el.as_secs_f64(),
            limit
        );
        if !pass {
            failed.push(k + 1);
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {:?}", failed);
        std::process::exit(1);
    }
}
