use joyce_tau::bps::{
    conifold_truncation, dlog_tau_form, dlog_tau_gradient, log_tau, max_relation_residual,
    shift_data, x_components, y_components, y_derivatives, CentralChargePoint, Section, TauOptions,
    UncoupledBpsStructure, CHART,
};
use joyce_tau::forms::{
    d_residual, integrate_one_form, max_abs, shift_by_potential_change, ChartPoint, Polyline,
    PotentialChoice, Theta0Choice, Theta1Choice, ThetaIChoice,
};
use joyce_tau::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn fixture(name: &str) -> UncoupledBpsStructure {
    let path = format!("{}/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"));
    UncoupledBpsStructure::from_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Points with every active `Z(k)` in a sector around the real axis, so
/// no `w_k = Z(k)/2πiε` comes near the cut for `ε > 0`.
fn chamber_point(bps: &UncoupledBpsStructure, rng: &mut ChaCha8Rng) -> CentralChargePoint {
    let n = bps.rank();
    let mut z: Vec<Complex64> = (0..n)
        .map(|_| Complex64::from_polar(rng.gen_range(0.5..3.0), rng.gen_range(-0.3..0.3)))
        .collect();
    if bps.d == 2 && bps.support.len() > 6 {
        // conifold: keep Re(β) above 5 Re(δ)
        z[0] = c(rng.gen_range(8.0..12.0), rng.gen_range(-1.0..1.0));
        z[1] = c(rng.gen_range(0.5..1.5), rng.gen_range(-0.1..0.1));
    }
    CentralChargePoint::new(z, c(rng.gen_range(0.3..2.0), 0.0))
}

fn all_fixtures() -> Vec<UncoupledBpsStructure> {
    vec![fixture("doubled_a1"), fixture("random_d2"), fixture("conifold_n5")]
}

#[test]
fn relations_hold_on_fixtures() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for bps in all_fixtures() {
        for _ in 0..100 {
            let pt = chamber_point(&bps, &mut rng);
            let r = max_relation_residual(&bps, &pt).unwrap();
            assert!(r < 1e-9, "residual {r:e}");
        }
    }
}

#[test]
fn analytic_derivatives_match_finite_differences() {
    let bps = fixture("random_d2");
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let pt = chamber_point(&bps, &mut rng);
    let der = y_derivatives(&bps, &pt).unwrap();
    let h = 1e-5;
    for j in 0..bps.rank() {
        let mut p = pt.clone();
        p.z[j] += h;
        let yp = y_components(&bps, &p).unwrap();
        p.z[j] -= 2.0 * h;
        let ym = y_components(&bps, &p).unwrap();
        for i in 0..bps.d {
            let fd = (yp[i + 2] - ym[i + 2]) / (2.0 * h);
            assert!((fd - der.dz[i][j]).norm() < 1e-8);
        }
    }
    let mut p = pt.clone();
    p.epsilon += h;
    let yp = y_components(&bps, &p).unwrap();
    p.epsilon -= 2.0 * h;
    let ym = y_components(&bps, &p).unwrap();
    for i in 0..bps.d {
        let fd = (yp[i + 2] - ym[i + 2]) / (2.0 * h);
        assert!((fd - der.deps[i]).norm() < 1e-8);
    }
}

#[test]
fn doubled_a1_gradient_is_minus_omega_times_eps_derivative() {
    let bps = fixture("doubled_a1");
    let pt = CentralChargePoint::new(vec![c(1.2, 0.3), c(-0.4, 0.9)], c(0.8, 0.0));
    let g = dlog_tau_gradient(&bps, &pt).unwrap();
    let h = 1e-5;
    let mut p = pt.clone();
    p.epsilon += h;
    let yp = y_components(&bps, &p).unwrap()[1];
    p.epsilon -= 2.0 * h;
    let ym = y_components(&bps, &p).unwrap()[1];
    let fd = -bps.omega(0) * (yp - ym) / (2.0 * h);
    assert!((g[0] - fd).norm() < 1e-8);
    assert_eq!(g[1], c(0.0, 0.0));
}

#[test]
fn joint_scaling_invariants() {
    let bps = fixture("random_d2");
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let pt = chamber_point(&bps, &mut rng);
    let lam = 2.7;
    let scaled = CentralChargePoint::new(pt.z.iter().map(|z| z * lam).collect(), pt.epsilon * lam);
    let (y0, y1) = (y_components(&bps, &pt).unwrap(), y_components(&bps, &scaled).unwrap());
    let (x0, x1) = (x_components(&bps, &pt).unwrap(), x_components(&bps, &scaled).unwrap());
    let (g0, g1) = (dlog_tau_gradient(&bps, &pt).unwrap(), dlog_tau_gradient(&bps, &scaled).unwrap());
    let e0: Complex64 = g0.iter().zip(&pt.z).map(|(g, z)| g * z).sum();
    let e1: Complex64 = g1.iter().zip(&scaled.z).map(|(g, z)| g * z).sum();
    for i in 0..4 {
        assert!((y0[i] - y1[i]).norm() < 1e-13);
        assert!((x0[i] + pt.z[i] / pt.epsilon - x1[i] - scaled.z[i] / scaled.epsilon).norm() < 1e-13);
    }
    assert!((e0 - e1).norm() < 1e-13);
}

#[test]
fn gradient_form_is_closed() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for bps in all_fixtures() {
        for _ in 0..10 {
            let pt = chamber_point(&bps, &mut rng);
            let form = dlog_tau_form(&bps, pt.epsilon);
            let r = d_residual(&form, &ChartPoint::new(CHART, pt.z.clone()), 1e-5).unwrap();
            assert!(max_abs(&r) < 1e-7, "{}", max_abs(&r));
        }
    }
}

fn path(vs: &[&[Complex64]]) -> Polyline {
    Polyline::from_coords(CHART, vs.iter().map(|v| v.to_vec()).collect()).unwrap()
}

#[test]
fn log_tau_is_path_independent() {
    let bps = fixture("random_d2");
    let eps = c(0.9, 0.0);
    let a = [c(1.0, 0.2), c(0.8, -0.1), c(0.3, 0.0), c(1.0, 1.0)];
    let b = [c(2.0, -0.3), c(1.5, 0.4), c(-0.7, 0.5), c(0.0, 2.0)];
    let m1 = [c(2.0, 0.2), c(0.8, -0.1), c(0.0, 0.3), c(1.0, 0.0)];
    let m2 = [c(1.0, -0.3), c(1.5, 0.4), c(0.5, -1.0), c(0.5, 1.5)];
    let opts = TauOptions::default();
    let r1 = log_tau(&bps, &path(&[&a, &m1, &b]), eps, &opts).unwrap();
    let r2 = log_tau(&bps, &path(&[&a, &m2, &b]), eps, &opts).unwrap();
    let r3 = log_tau(&bps, &path(&[&a, &b]), eps, &opts).unwrap();
    assert!((r1.log_tau - r2.log_tau).norm() < 1e-8);
    assert!((r1.log_tau - r3.log_tau).norm() < 1e-8);
    assert!(r1.residuals["closedness"] < 1e-7);
    assert!(r1.residuals["definition_vs_gradient"] < 1e-10);
    // the Hamiltonian/polarised definition agrees with the gradient form
    let g = integrate_one_form(&dlog_tau_form(&bps, eps), &path(&[&a, &b]), 32).unwrap();
    assert!((g - r3.log_tau).norm() < 1e-9);
}

#[test]
fn zero_length_path_gives_zero() {
    let bps = fixture("doubled_a1");
    let p = Polyline::from_coords(CHART, vec![vec![c(1.0, 0.0), c(0.0, 1.0)]]).unwrap();
    let r = log_tau(&bps, &p, c(1.0, 0.0), &TauOptions::default()).unwrap();
    assert_eq!(r.log_tau, c(0.0, 0.0));
}

#[test]
fn log_tau_is_invariant_under_joint_scaling() {
    let bps = fixture("doubled_a1");
    let a = vec![c(1.0, 0.5), c(0.2, 0.0)];
    let b = vec![c(2.0, -0.5), c(0.0, 0.3)];
    let base = log_tau(&bps, &path(&[&a, &b]), c(0.6, 0.0), &TauOptions::default()).unwrap();
    for lam in [0.5, 3.0] {
        let sa: Vec<_> = a.iter().map(|z| z * lam).collect();
        let sb: Vec<_> = b.iter().map(|z| z * lam).collect();
        let r = log_tau(&bps, &path(&[&sa, &sb]), c(0.6 * lam, 0.0), &TauOptions::default()).unwrap();
        assert!((r.log_tau - base.log_tau).norm() < 1e-9);
    }
}

#[test]
fn crossing_a_ray_is_rejected() {
    let bps = fixture("doubled_a1");
    // w = z/2πi crosses the negative real axis when z crosses the negative imaginary axis
    let p = path(&[&[c(1.0, -1.0), c(0.0, 0.0)], &[c(-1.0, -1.0), c(0.0, 0.0)]]);
    let r = log_tau(&bps, &p, c(1.0, 0.0), &TauOptions::default());
    assert!(matches!(r, Err(joyce_tau::Error::BranchCutError(_))));
}

fn choice(t0: Theta0Choice, t1: Theta1Choice, ti: ThetaIChoice) -> PotentialChoice {
    PotentialChoice::new(t0, t1, ti)
}

#[test]
fn potential_changes_match_shift_formulae() {
    let bps = fixture("random_d2");
    let eps = c(0.9, 0.0);
    let a = [c(1.0, 0.2), c(0.8, -0.1), c(0.3, 0.0), c(1.0, 1.0)];
    let b = [c(2.0, -0.3), c(1.5, 0.4), c(-0.7, 0.5), c(0.0, 2.0)];
    let p = path(&[&a, &b]);
    let section = Section {
        upper: vec![c(0.3, -0.2), c(-0.1, 0.4)],
    };
    let at = |v: &[Complex64]| shift_data(&bps, &CentralChargePoint::new(v.to_vec(), eps), &section).unwrap();
    let (s0, s1) = (at(&a), at(&b));
    use Theta0Choice::*;
    use Theta1Choice::*;
    use ThetaIChoice::*;
    let mut values = Vec::new();
    for t0 in [Canonical, Liouville, Hamiltonian] {
        for t1 in [Full, Polarized] {
            for ti in [Standard, Flipped] {
                let ch = choice(t0, t1, ti);
                let opts = TauOptions {
                    choice: ch,
                    section: section.clone(),
                    ..TauOptions::default()
                };
                values.push((ch, log_tau(&bps, &p, eps, &opts).unwrap().log_tau));
            }
        }
    }
    for (from, vf) in &values {
        for (to, vt) in &values {
            // log τ at the end minus its normalisation at the start
            let end = shift_by_potential_change(*vf, from, to, &s1).unwrap();
            let start = shift_by_potential_change(c(0.0, 0.0), from, to, &s0).unwrap();
            assert!((end - start - vt).norm() < 1e-8, "{from:?} -> {to:?}");
        }
    }
}

#[test]
fn conifold_truncation_is_stable() {
    // only z_β moves: the z_δ component of the gradient grows linearly in N
    let eps = c(1.0, 0.0);
    let zero = c(0.0, 0.0);
    let p = path(&[&[c(1.0, 0.0), c(100.0, 0.0), zero, zero], &[c(1.1, 0.1), c(100.0, 0.0), zero, zero]]);
    let opts = TauOptions::default();
    let v: Vec<Complex64> = [5, 10, 15]
        .iter()
        .map(|&n| log_tau(&conifold_truncation(n, 1), &p, eps, &opts).unwrap().log_tau)
        .collect();
    let (d1, d2) = ((v[1] - v[0]).norm(), (v[2] - v[1]).norm());
    assert!(d1 < 1e-6, "{d1:e}");
    assert!(d2 < d1);
}
