use joyce_tau::elliptic::{
    cubic_roots, det2, period_jacobian, periods, theta_coords, theta_coords_with, zt_chart, ContourOptions,
    Cycle, CycleBasis, CurvePoint, FiberPoint, ZtMap,
};
use joyce_tau::forms::{jacobian, partial, Stencil};
use joyce_tau::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn raw_basis() -> CycleBasis {
    CycleBasis {
        cycles: [Cycle { from: 0, to: 1, sign: 1 }, Cycle { from: 1, to: 2, sign: 1 }],
    }
}

/// Independent 30-digit tanh-sinh quadrature of the segment integrals,
/// without the endpoint substitution: (a, b, [z₁, ∂_a z₁, ∂_b z₁, z₂, ∂_a z₂, ∂_b z₂])
/// for the segments [e₁, e₂] and [e₂, e₃].
#[rustfmt::skip]
fn oracle() -> Vec<(Complex64, Complex64, [Complex64; 6])> {
    vec![
        (c(0.0, 0.0), c(1.0, 0.0), [c(2.5239277895858177, -1.457190388732549), c(-1.2935547796148953, -0.74683420022218681), c(2.1032731579881814, -1.2143253239437908), c(0.0, -2.9143807774650979), c(0.0, -1.4936684004443736), c(0.0, -2.4286506478875816)]),
        (c(1.0, 0.0), c(1.0, 0.0), [c(1.2445338893670765, -2.2177404528317348), c(-1.2567898718619116, -0.78959476569186174), c(1.8749714890471714, -1.3217205335652045), c(0.0, -4.4354809056634697), c(0.0, -1.5791895313837235), c(0.0, -2.6434410671304091)]),
        (c(-1.0, 0.0), c(0.29999999999999999, 0.20000000000000001), [c(-1.7500763480659361, -0.59987156362498929), c(1.0469677391132461, -0.28171438807172224), c(-2.8128157810838152, -0.41713135172847609), c(0.4842111801742113, 0.194669091206035), c(0.075544301768340336, -1.3568931398956679), c(-0.094712164522018019, -2.4114291700700417)]),
        (c(0.5, -2.0), c(-1.0, 1.5), [c(-3.3984847519057883, 6.8938112183798501), c(-1.6297259357682409, 0.48197937608466509), c(2.4763970090792703, 0.3033805380215732), c(1.8205954846327491, -0.91941632334752818), c(0.65169775911275261, -1.5957191352775364), c(-0.76171419985022319, -1.7772277542285769)]),
    ]
}

fn random_curve(rng: &mut ChaCha8Rng) -> CurvePoint {
    loop {
        let a = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let b = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let cv = CurvePoint { a, b };
        let scale = 4.0 * a.norm().powi(3) + 27.0 * b.norm_sqr();
        if cv.discriminant().norm() > 0.1 * scale {
            return cv;
        }
    }
}

fn random_fiber(cv: &CurvePoint, rng: &mut ChaCha8Rng) -> FiberPoint {
    let q = c(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
    let p = cv.cubic(q).sqrt();
    let r = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    FiberPoint::new(cv, q, p, r).unwrap()
}

#[test]
fn periods_match_reference_quadrature() {
    for (a, b, v) in oracle() {
        let cv = CurvePoint::new(a, b).unwrap();
        let z = periods(&cv, &raw_basis()).unwrap();
        let j = period_jacobian(&cv, &raw_basis()).unwrap();
        let got = [z[0], j[0][0], j[0][1], z[1], j[1][0], j[1][1]];
        for (g, o) in got.iter().zip(&v) {
            assert!((g - o).norm() < 1e-10 * o.norm().max(1.0), "a={a} b={b}: {g} vs {o}");
        }
    }
}

#[test]
fn determinant_is_minus_two_pi_i() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..50 {
        let cv = random_curve(&mut rng);
        let basis = CycleBasis::normalized(&cv).unwrap();
        let det = det2(&period_jacobian(&cv, &basis).unwrap());
        assert!((det - c(0.0, -2.0 * PI)).norm() < 1e-7, "{det}");
    }
}

#[test]
fn periods_are_homogeneous_of_weight_five() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..20 {
        let cv = random_curve(&mut rng);
        let basis = CycleBasis::normalized(&cv).unwrap();
        let z = periods(&cv, &basis).unwrap();
        for s in [0.5f64, 2.0] {
            let scaled = CurvePoint::new(cv.a * s.powi(4), cv.b * s.powi(6)).unwrap();
            let zs = periods(&scaled, &basis).unwrap();
            for i in 0..2 {
                let expect = z[i] * s.powi(5);
                assert!((zs[i] - expect).norm() < 1e-9 * expect.norm());
            }
            let js = period_jacobian(&scaled, &basis).unwrap();
            let j = period_jacobian(&cv, &basis).unwrap();
            for i in 0..2 {
                assert!((js[i][1] - j[i][1] / s).norm() < 1e-9 * j[i][1].norm());
            }
        }
    }
}

#[test]
fn jacobian_matches_finite_differences() {
    let cv = CurvePoint::new(c(1.0, 0.0), c(1.0, 0.0)).unwrap();
    let basis = CycleBasis::normalized(&cv).unwrap();
    let roots = cubic_roots(&cv).unwrap();
    let fd = jacobian(
        |x| {
            let p = CurvePoint::new(x[0], x[1])?;
            Ok(joyce_tau::elliptic::periods_tracked(&p, &basis, Some(&roots))?.to_vec())
        },
        &[cv.a, cv.b],
        1e-5,
        Stencil::ComplexSymmetric,
    )
    .unwrap();
    let j = period_jacobian(&cv, &basis).unwrap();
    for i in 0..2 {
        for k in 0..2 {
            assert!((fd[i][k] - j[i][k]).norm() < 1e-8);
        }
    }
}

#[test]
fn theta_is_odd_under_sheet_swap() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..10 {
        let cv = random_curve(&mut rng);
        let f = random_fiber(&cv, &mut rng);
        let basis = CycleBasis::normalized(&cv).unwrap();
        let t = theta_coords(&cv, &f, &basis).unwrap();
        let swapped = FiberPoint::new(&cv, f.q, -f.p, -f.r).unwrap();
        let ts = theta_coords(&cv, &swapped, &basis).unwrap();
        for i in 0..2 {
            let s = t.theta[i] + ts.theta[i];
            // zero modulo 2πi
            let k = (s.im / (2.0 * PI)).round();
            assert!((s - c(0.0, 2.0 * PI * k)).norm() < 1e-10);
        }
    }
}

#[test]
fn zt_chart_is_locally_invertible() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..5 {
        let cv = random_curve(&mut rng);
        let f = random_fiber(&cv, &mut rng);
        let basis = CycleBasis::normalized(&cv).unwrap();
        let pt = zt_chart(&cv, &f, &basis).unwrap();
        assert_eq!(pt.dim(), 4);
        let map = ZtMap::at_base(&cv, &f, &basis).unwrap();
        let j = jacobian(|x| map.eval(x), &[cv.a, cv.b, f.q, f.r], 1e-5, Stencil::ComplexSymmetric).unwrap();
        let m: Vec<Vec<Complex64>> = j;
        assert!(det4(&m).norm() > 1e-6);
    }
}

fn det4(m: &[Vec<Complex64>]) -> Complex64 {
    // Laplace expansion along the first row
    let minor = |r: usize, col: usize| -> Vec<Vec<Complex64>> {
        m.iter()
            .enumerate()
            .filter(|(i, _)| *i != r)
            .map(|(_, row)| row.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, v)| *v).collect())
            .collect()
    };
    let det3 = |a: &[Vec<Complex64>]| {
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    };
    (0..4)
        .map(|k| m[0][k] * det3(&minor(0, k)) * if k % 2 == 0 { 1.0 } else { -1.0 })
        .sum()
}

#[test]
fn euler_field_acts_by_weight() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..10 {
        let cv = random_curve(&mut rng);
        let f = random_fiber(&cv, &mut rng);
        let basis = CycleBasis::normalized(&cv).unwrap();
        let map = ZtMap::at_base(&cv, &f, &basis).unwrap();
        let x0 = [cv.a, cv.b, f.q, f.r];
        let e = [cv.a * 0.8, cv.b * 1.2, f.q * 0.4, f.r * 0.2];
        let mut along = |t: &[Complex64]| {
            let x: Vec<Complex64> = x0.iter().zip(&e).map(|(x, v)| x + v * t[0]).collect();
            map.eval(&x)
        };
        let d = partial(&mut along, &[c(0.0, 0.0)], 0, 1e-4, Stencil::ComplexSymmetric).unwrap();
        let v = map.eval(&x0).unwrap();
        for i in 0..2 {
            assert!((d[i] - v[i]).norm() < 1e-6 * v[i].norm().max(1.0), "E z: {} vs {}", d[i], v[i]);
            assert!(d[i + 2].norm() < 1e-6, "E theta: {}", d[i + 2]);
        }
    }
}

#[test]
fn bend_does_not_sweep_the_third_branch_point() {
    // q sits near the first contour with e₂ on the far side of it
    let cv = CurvePoint::new(c(1.5507226488364028, 0.4121576744508717), c(-0.6709838658468827, 0.2015801568728781)).unwrap();
    let q = c(-0.5051945029918123, 0.9501245340213971);
    let f = FiberPoint::new(&cv, q, cv.cubic(q).sqrt(), c(0.3, -0.2)).unwrap();
    let basis = CycleBasis::normalized(&cv).unwrap();
    let bent = theta_coords(&cv, &f, &basis).unwrap();
    assert!(!bent.deformations.is_empty());
    let straight = theta_coords_with(&cv, &f, &basis, None, &ContourOptions::default(), Some(&[])).unwrap();
    for i in 0..2 {
        assert!((bent.theta[i] - straight.theta[i]).norm() < 1e-10, "{} vs {}", bent.theta[i], straight.theta[i]);
    }
}
