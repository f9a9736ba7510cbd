use joyce_tau::a2::{
    flatness_residual, flatness_residual_with, omega_identity_residual, A2ExtendedPoint,
    FieldPerturbation,
};
use joyce_tau::elliptic::{CurvePoint, CycleBasis};
use joyce_tau::forms::{max_abs, Stencil};
use joyce_tau::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_point(rng: &mut ChaCha8Rng, eps: Complex64) -> A2ExtendedPoint {
    loop {
        let a = c(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        let b = c(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        let q = c(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        let r = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let cv = CurvePoint { a, b };
        let scale = 4.0 * a.norm().powi(3) + 27.0 * b.norm_sqr();
        let p = cv.cubic(q).sqrt();
        if cv.discriminant().norm() < 0.1 * scale || p.norm() < 0.3 {
            continue;
        }
        return A2ExtendedPoint::new(a, b, q, p, r, eps).unwrap();
    }
}

#[test]
fn fields_commute() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for eps in [c(0.5, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(0.0, 1.0)] {
        for _ in 0..50 {
            let pt = random_point(&mut rng, eps);
            let r = flatness_residual(&pt).unwrap();
            assert!(r.scaled() < 1e-6, "{:e}", r.scaled());
        }
    }
}

#[test]
fn bracket_error_is_second_order_in_the_step() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let pt = random_point(&mut rng, c(1.0, 0.0));
    let none = FieldPerturbation::default();
    let r1 = flatness_residual_with(&pt, 1e-2, Stencil::Central, none).unwrap().scaled();
    let r2 = flatness_residual_with(&pt, 5e-3, Stencil::Central, none).unwrap().scaled();
    let ratio = r1 / r2;
    assert!(ratio > 3.5 && ratio < 4.5, "ratio {ratio}");
}

#[test]
fn perturbed_field_fails_to_commute() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let pt = random_point(&mut rng, c(1.0, 0.0));
    let pert = FieldPerturbation { dr_of_ha: c(1e-3, 0.0) };
    let r = flatness_residual_with(&pt, 1e-5, Stencil::ComplexSymmetric, pert).unwrap();
    let m = r.bracket.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    assert!(m > 1e-4, "{m:e}");
}

#[test]
fn two_forms_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..50 {
        let pt = random_point(&mut rng, c(1.0, 0.0));
        let basis = CycleBasis::normalized(&pt.curve()).unwrap();
        let r = omega_identity_residual(&pt, &basis, 1e-5).unwrap();
        assert!(max_abs(&r) < 1e-6, "{:e}", max_abs(&r));
    }
}
