use num_complex::Complex64;
use proptest::prelude::*;
use varpricer::models::presets;
use varpricer::transforms::{psi_qv_closed_form, psi_qv_quadrature};
use varpricer::{
    laplace_pvar, laplace_qv, laplace_rv, laplace_xsq, psi_qv, DriftMode, Error, ModelSpec, Params, QuadratureSpec,
    TransformSpec,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ts() -> TransformSpec {
    TransformSpec::default()
}

fn qs() -> QuadratureSpec {
    QuadratureSpec::default()
}

/// `E[e^{-u G^2}]` for `G ~ N(m, s^2)`.
fn gaussian_square(u: Complex64, m: f64, s2: f64) -> Complex64 {
    let d = 1.0 + 2.0 * u * s2;
    (-u * m * m / d).exp() / d.sqrt()
}

/// Standard normal CDF by Simpson integration of the density from -40.
fn norm_cdf(x: f64) -> f64 {
    let lo = -40.0;
    let n = 200_000;
    let h = (x - lo) / n as f64;
    let f = |z: f64| (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let mut acc = f(lo) + f(x);
    for j in 1..n {
        acc += f(lo + j as f64 * h) * if j % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

fn complex_grid() -> Vec<Complex64> {
    vec![
        c(0.01, 0.0),
        c(0.3, 0.2),
        c(1.0, 1.0),
        c(2.0, -5.0),
        c(5.0, 0.0),
        c(10.0, 40.0),
        c(25.0, -3.0),
        c(0.5, 100.0),
        c(200.0, 150.0),
        c(1e3, -2e3),
    ]
}

#[test]
fn psi_qv_trivial_values() {
    let bs = presets::black_scholes();
    let v = psi_qv(&bs, c(-2.0, 0.0), &qs()).unwrap();
    assert!((v.re + 0.18).abs() < 1e-15 && v.im == 0.0);
    for m in presets::catalog() {
        assert_eq!(psi_qv(&m, c(0.0, 0.0), &qs()).unwrap(), c(0.0, 0.0));
    }
    assert!(matches!(psi_qv(&bs, c(1.0, 0.0), &qs()), Err(Error::Domain(_))));
}

#[test]
fn psi_qv_reference_values() {
    // arbitrary-precision integration of the Levy measure
    let kou = presets::kou(0.3);
    let want = c(-0.161_150_298_843_057_8, -0.154_283_021_402_929_52);
    let u = c(1.0, 1.0);
    let closed = psi_qv_closed_form(&kou, -u, &qs()).unwrap().unwrap();
    let quad = psi_qv_quadrature(&kou, -u, &qs()).unwrap();
    assert!((closed - want).norm() < 1e-10 * want.norm());
    assert!((quad - want).norm() < 1e-10 * want.norm());

    let cgmy = presets::cgmy();
    let closed = psi_qv_closed_form(&cgmy, c(-5.0, 0.0), &qs()).unwrap().unwrap();
    let quad = psi_qv_quadrature(&cgmy, c(-5.0, 0.0), &qs()).unwrap();
    assert!((closed.re + 0.191_718_003_400_48).abs() < 1e-10);
    assert!((closed - quad).norm() < 1e-10);
    let want = c(-0.415_915_923_202_882_4, -0.676_518_078_794_700_6);
    let closed = psi_qv_closed_form(&cgmy, c(-2.0, -30.0), &qs()).unwrap().unwrap();
    assert!((closed - want).norm() < 1e-10 * want.norm());
}

#[test]
fn psi_qv_dual_path_on_complex_grid() {
    for m in [presets::kou(0.3), presets::kou(0.2), presets::cgmy()] {
        for u in complex_grid() {
            let closed = psi_qv_closed_form(&m, -u, &qs()).unwrap().unwrap();
            let quad = psi_qv_quadrature(&m, -u, &qs()).unwrap();
            assert!((closed - quad).norm() <= 1e-8 * closed.norm(), "{:?} u={u}: {closed} vs {quad}", m.kind());
        }
    }
}

#[test]
fn merton_psi_qv_matches_gaussian_jump_formula() {
    let m = presets::merton();
    let (sigma, lambda, gamma, delta) = (0.2, 3.0, -0.05, 0.1);
    for u in complex_grid() {
        let want = -sigma * sigma * u + lambda * (gaussian_square(u, gamma, delta * delta) - 1.0);
        let got = psi_qv(&m, -u, &qs()).unwrap();
        assert!((got - want).norm() <= 1e-12 * want.norm(), "u={u}: {got} vs {want}");
        let quad = psi_qv_quadrature(&m, -u, &qs()).unwrap();
        assert!((quad - want).norm() <= 1e-9 * want.norm(), "u={u}: {quad} vs {want}");
    }
}

#[test]
fn laplace_qv_black_scholes() {
    let bs = presets::black_scholes();
    let v = laplace_qv(&bs, c(1.0, 0.0), 1.0, &ts()).unwrap();
    assert!((v.re - (-0.09f64).exp()).abs() < 1e-15);
    assert_eq!(laplace_qv(&bs, c(0.0, 0.0), 1.0, &ts()).unwrap(), c(1.0, 0.0));
}

#[test]
fn laplace_xsq_gaussian_closed_form() {
    let driftless = ModelSpec::new(Params::BlackScholes { sigma: 0.3 }, DriftMode::Explicit(0.0)).unwrap();
    let v = laplace_xsq(&driftless, c(1.0, 0.0), 1.0, &ts()).unwrap();
    assert!((v.re - 0.920_574_617_898_323_4).abs() < 1e-12);
    let bs = presets::black_scholes();
    let args = [0.1, 0.7, 3.0, 12.0, 50.0];
    let mut count = 0;
    for (i, &r) in args.iter().enumerate() {
        for &theta in &[-1.4, 0.0, 1.2] {
            if count == 12 {
                break;
            }
            let u = Complex64::from_polar(r, theta + 0.05 * i as f64);
            let t = [1.0 / 252.0, 0.1, 1.0][count % 3];
            let got = laplace_xsq(&bs, u, t, &ts()).unwrap();
            let want = gaussian_square(u, -0.045 * t, 0.09 * t);
            assert!((got - want).norm() <= 1e-8 * want.norm().max(1e-300), "u={u} t={t}");
            count += 1;
        }
    }
    assert_eq!(count, 12);
}

#[test]
fn laplace_rv_matches_noncentral_chi_square() {
    let bs = presets::black_scholes();
    let (t_total, n) = (10.0 / 252.0, 10usize);
    let t = t_total / n as f64;
    let u = c(3.0, 0.0);
    let got = laplace_rv(&bs, u, t_total, n, &ts()).unwrap();
    let d = 1.0 + 2.0 * u * 0.09 * t;
    let want = d.powf(-(n as f64) / 2.0) * (-(n as f64) * u * 0.045 * 0.045 * t * t / d).exp();
    assert!((got - want).norm() < 1e-12);
    let one = laplace_rv(&presets::kou(0.3), c(2.0, 1.0), 0.1, 1, &ts()).unwrap();
    let xsq = laplace_xsq(&presets::kou(0.3), c(2.0, 1.0), 0.1, &ts()).unwrap();
    assert_eq!(one, xsq);
}

#[test]
fn poisson_counterexample_is_rejected() {
    let p = ModelSpec::compensated_poisson();
    for f in [laplace_xsq(&p, c(1.0, 0.0), 1.0, &ts()), laplace_rv(&p, c(1.0, 0.0), 1.0, 5, &ts())] {
        assert!(matches!(f, Err(Error::ConditionViolated(_))));
    }
}

#[test]
fn laplace_pvar_values() {
    let driftless = ModelSpec::new(Params::BlackScholes { sigma: 0.3 }, DriftMode::Explicit(0.0)).unwrap();
    assert_eq!(laplace_pvar(&driftless, 0.0, 1.0, 1.0, 10, 1).unwrap().value, 1.0);
    // E[e^{-u|G|}] = 2 e^{u^2 s^2 / 2} Phi(-u s), s = sigma sqrt(t)
    let (u, s) = (2.0f64, 0.3f64);
    let want = 2.0 * (0.5 * u * u * s * s).exp() * norm_cdf(-u * s);
    let est = laplace_pvar(&driftless, u, 1.0, 1.0, 1_000_000, 7).unwrap();
    assert!((est.value - want).abs() <= 3.0 * est.std_error, "{} +- {} vs {want}", est.value, est.std_error);
    // p = 2: the stable law is normal with scale sqrt(2)
    let kou = presets::kou(0.3);
    let est = laplace_pvar(&kou, 1.5, 2.0, 0.2, 1_000_000, 11).unwrap();
    let xsq = laplace_xsq(&kou, c(1.5, 0.0), 0.2, &ts()).unwrap();
    assert!((est.value - xsq.re).abs() <= 3.0 * est.std_error);
    assert!(laplace_pvar(&kou, -1.0, 1.0, 1.0, 10, 1).is_err());
    assert!(laplace_pvar(&kou, 1.0, 2.5, 1.0, 10, 1).is_err());
}

#[test]
fn rv_transform_approaches_qv_transform() {
    let t = 0.2;
    let u = c(1.0, 0.0);
    for m in [presets::kou(0.3), presets::merton()] {
        let qv = laplace_qv(&m, u, t, &ts()).unwrap();
        let mut last = f64::INFINITY;
        for n in [1, 4, 16, 64, 256] {
            let rv = laplace_rv(&m, u, t, n, &ts()).unwrap();
            let gap = (rv - qv).norm();
            assert!(gap < last, "{:?} n={n}: {gap} !< {last}", m.kind());
            last = gap;
        }
        assert!(last < 1e-3);
    }
}

fn model_strategy() -> impl Strategy<Value = ModelSpec> {
    (0usize..5).prop_map(|i| presets::catalog()[i].clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn transforms_bounded_and_conjugate_symmetric(
        m in model_strategy(),
        re in 0.01f64..200.0,
        im in -500.0f64..500.0,
        days in 1.0f64..50.0,
    ) {
        let t = days / 252.0;
        let u = c(re, im);
        let xsq = laplace_xsq(&m, u, t, &ts()).unwrap();
        let xsq_c = laplace_xsq(&m, u.conj(), t, &ts()).unwrap();
        prop_assert!(xsq.norm() <= 1.0 + 1e-12);
        prop_assert!((xsq_c - xsq.conj()).norm() <= 1e-12);
        let qv = laplace_qv(&m, u, t, &ts()).unwrap();
        let qv_c = laplace_qv(&m, u.conj(), t, &ts()).unwrap();
        prop_assert!(qv.norm() <= 1.0 + 1e-12);
        prop_assert!((qv_c - qv.conj()).norm() <= 1e-12);
        let n = days.round() as usize;
        let rv = laplace_rv(&m, u, t, n, &ts()).unwrap();
        let rv_c = laplace_rv(&m, u.conj(), t, n, &ts()).unwrap();
        prop_assert!(rv.norm() <= 1.0 + 1e-12);
        prop_assert!((rv_c - rv.conj()).norm() <= 1e-12);
    }

    #[test]
    fn real_transforms_positive_and_decreasing(m in model_strategy(), u in 0.01f64..100.0, days in 1.0f64..50.0) {
        let t = days / 252.0;
        let n = days.round() as usize;
        let f = |u: f64| -> [f64; 3] {
            [
                laplace_xsq(&m, c(u, 0.0), t, &ts()).unwrap().re,
                laplace_qv(&m, c(u, 0.0), t, &ts()).unwrap().re,
                laplace_rv(&m, c(u, 0.0), t, n, &ts()).unwrap().re,
            ]
        };
        let a = f(u);
        let b = f(u * 1.5);
        for k in 0..3 {
            prop_assert!(a[k] > 0.0 && a[k] <= 1.0);
            prop_assert!(b[k] <= a[k]);
        }
    }
}
