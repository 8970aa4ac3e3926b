use monodromy::hamiltonian::{
    branch_points, default_loops, fiber_curve, lattice, monodromy, period, period_with_nodes, BaseLoop, Contour, Cycle,
    FiberCurve, Form, SystemId,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn base_value() -> impl Strategy<Value = [Complex64; 2]> {
    (-1.5f64..1.5, -1.0f64..1.0, -1.5f64..1.5, -1.0f64..1.0)
        .prop_map(|(a, b, c, d)| [Complex64::new(a, b), Complex64::new(c, d)])
}

fn system() -> impl Strategy<Value = SystemId> {
    prop_oneof![Just(SystemId::Pendulum), Just(SystemId::Kepler)]
}

/// Level of `p` in the confocal family of ellipses with foci `m -+ hc`.
fn joukowski(m: Complex64, hc: Complex64, p: Complex64) -> f64 {
    let u = (p - m) / hc;
    let r = (u * u - 1.0).sqrt();
    (u + r).norm().max((u - r).norm())
}

/// Cycle on `contour(1)`, its sheet continued from `cy` along the family
/// `contour(s)`, `s` in `[0, 1]`.
fn deform(fc: &FiberCurve, cy: &Cycle, contour: impl Fn(f64) -> Contour) -> Cycle {
    let mut sheet = cy.sheet;
    for k in 1..=256 {
        let r = fc.q(contour(k as f64 / 256.0).point(0.0).0).sqrt();
        sheet = if (r - sheet).norm() <= (r + sheet).norm() { r } else { -r };
    }
    Cycle { contour: contour(1.0), pair: cy.pair, sheet }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn periods_agree_with_ten_times_resolution(system in system(), c in base_value()) {
        let Ok(l) = lattice(system, c, 53) else { return Ok(()) };
        let fc = fiber_curve(system, c).unwrap();
        for cy in &l.cycles {
            for form in [Form::Omega1, Form::Omega2] {
                let (v, n) = period(&fc, cy, form, 53).unwrap();
                let dense = period_with_nodes(&fc, cy, form, 10 * n).unwrap();
                prop_assert!((v - dense).norm() <= 1e-8 * dense.norm().max(1.0), "{:?} {} vs {}", form, v, dense);
            }
        }
    }

    #[test]
    fn periods_survive_contour_deformation(system in system(), c in base_value(), factor in 0.9f64..1.1) {
        let Ok(l) = lattice(system, c, 53) else { return Ok(()) };
        let fc = fiber_curve(system, c).unwrap();
        let branch: Vec<Complex64> =
            branch_points(&fc).unwrap().iter().map(|b| b.z()).collect();
        let poles = [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)];
        for cy in &l.cycles {
            let moved = match cy.contour {
                Contour::Ellipse { center, half_focal, rho } => {
                    let rho2 = rho.powf(factor);
                    // the deformation must not sweep over a branch point or a pole
                    let crossed = branch.iter().chain(&poles).any(|&p| {
                        let lv = joukowski(center, half_focal, p);
                        (lv - rho) * (lv - rho2) <= 0.0
                    });
                    if crossed {
                        continue;
                    }
                    deform(&fc, cy, |s| Contour::Ellipse { center, half_focal, rho: rho.powf(1.0 + s * (factor - 1.0)) })
                }
                Contour::Circle { center, radius } => {
                    deform(&fc, cy, |s| Contour::Circle { center, radius: radius * (1.0 + s * factor) })
                }
            };
            for form in [Form::Omega1, Form::Omega2] {
                let (a, _) = period(&fc, cy, form, 53).unwrap();
                let (b, _) = period(&fc, &moved, form, 53).unwrap();
                prop_assert!((a - b).norm() <= 1e-8 * a.norm().max(1.0), "{:?}: {} vs {}", form, a, b);
            }
        }
    }
}

fn reversed(lp: &BaseLoop) -> BaseLoop {
    BaseLoop { label: format!("{} reversed", lp.label), x: lp.x, path: lp.path.reversed() }
}

fn mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

#[test]
fn monodromy_matrices_are_unimodular_and_fix_the_pinned_generator() {
    for system in [SystemId::Pendulum, SystemId::Kepler] {
        let f = system.fixed_index();
        for lp in default_loops(system) {
            let m = monodromy(system, &lp, 53).unwrap();
            assert!(m.det().abs() == 1, "{}: det {}", lp.label, m.det());
            let n = m.dim();
            for k in 0..n {
                assert_eq!(m.entries[f][k], i64::from(k == f), "{} row", lp.label);
            }
            assert!(m.residual < 1e-6);
        }
    }
}

#[test]
fn reversed_loop_gives_inverse_matrix() {
    for system in [SystemId::Pendulum, SystemId::Kepler] {
        for lp in default_loops(system) {
            let m = monodromy(system, &lp, 53).unwrap();
            let r = monodromy(system, &reversed(&lp), 53).unwrap();
            assert_eq!(mul(&m.entries, &r.entries), identity(m.dim()), "{}", lp.label);
        }
    }
}

#[test]
fn pendulum_generator_is_a_transvection() {
    let lp = &default_loops(SystemId::Pendulum)[0];
    let m = monodromy(SystemId::Pendulum, lp, 53).unwrap();
    assert!(!m.is_identity());
    assert!(m.is_square_zero());
    assert_eq!(m.defect_rank(), 1);
}

#[test]
fn kepler_generators_are_involutions_that_commute() {
    let loops = default_loops(SystemId::Kepler);
    let a = monodromy(SystemId::Kepler, &loops[0], 53).unwrap();
    let b = monodromy(SystemId::Kepler, &loops[1], 53).unwrap();
    assert_eq!(mul(&a.entries, &a.entries), identity(2));
    assert_eq!(mul(&b.entries, &b.entries), identity(2));
    assert_eq!(mul(&a.entries, &b.entries), mul(&b.entries, &a.entries));
}
