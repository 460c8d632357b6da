use num_complex::Complex64;
use proptest::prelude::*;
use varpricer::special::{gamma, gamma_fn, hyp_u, i_function, lower_incomplete_gamma};
use varpricer::QuadratureSpec;

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * b.norm()
}

/// Composite Simpson rule on [0, x_max] after the substitution x = s^4,
/// used as a brute-force oracle for int_0^inf e^{-tau x^2 - nu x} x^{k-1} dx.
fn brute_i(kappa: f64, nu: f64, tau: Complex64) -> Complex64 {
    // the integrand is below 1e-40 of its peak beyond this point
    let x_max = (95.0 / tau.re).sqrt().min(95.0 / nu) + 10.0 * kappa / nu;
    let s_max = x_max.powf(0.25);
    let m = 200_000;
    let h = s_max / m as f64;
    let f = |s: f64| {
        if s == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let x = s.powi(4);
        (-tau * x * x - nu * x).exp() * 4.0 * s.powf(4.0 * kappa - 1.0)
    };
    let mut acc = f(0.0) + f(s_max);
    for j in 1..m {
        let w = if j % 2 == 1 { 4.0 } else { 2.0 };
        acc += f(j as f64 * h) * w;
    }
    acc * h / 3.0
}

#[test]
fn gamma_function_values() {
    assert!((gamma(1.0).unwrap() - 1.0).abs() < 1e-15);
    assert!((gamma(0.5).unwrap() - std::f64::consts::PI.sqrt()).abs() < 1e-14);
    // arbitrary-precision reference
    assert!((gamma(1.3971).unwrap() / 0.887_425_607_800_381_8 - 1.0).abs() < 1e-13);
    let z = gamma_fn(Complex64::new(2.5, -1.5)).unwrap();
    assert!(close(z, Complex64::new(0.309_936_225_840_741_4, -0.734_084_273_621_481_3), 1e-13));
}

#[test]
fn gamma_accuracy_over_wide_range() {
    // Gamma(n) = (n-1)! and Gamma(z+1) = z Gamma(z) up to |z| = 100
    let mut fact = 1.0f64;
    for n in 1..=100 {
        if n > 1 {
            fact *= (n - 1) as f64;
        }
        assert!((gamma(n as f64).unwrap() / fact - 1.0).abs() < 1e-12, "n = {n}");
    }
    for &(re, im) in &[(-7.3, 2.0), (50.0, 40.0), (0.1, -60.0), (-0.5, 0.25)] {
        let z = Complex64::new(re, im);
        let lhs = gamma_fn(z + 1.0).unwrap();
        let rhs = z * gamma_fn(z).unwrap();
        assert!(close(lhs, rhs, 1e-12), "{z}");
    }
}

#[test]
fn lower_incomplete_gamma_values() {
    // independent oracle: Simpson on the integrand after t = u^4
    let oracle = |s: f64, x: f64| {
        let m = 100_000;
        let top = x.powf(0.25);
        let h = top / m as f64;
        let f = |u: f64| 4.0 * u.powf(4.0 * s - 1.0) * (-u.powi(4)).exp();
        let mut acc = f(0.0) + f(top);
        for j in 1..m {
            acc += f(j as f64 * h) * if j % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * h / 3.0
    };
    let v = lower_incomplete_gamma(2.5, 3.0).unwrap();
    assert!((v / oracle(2.5, 3.0) - 1.0).abs() < 1e-12);
    assert!((v / 0.922_271_212_307_834 - 1.0).abs() < 1e-13);
    for &(s, x) in &[(0.7, 0.2), (4.0, 9.0), (30.0, 25.0), (1.5, 40.0)] {
        let v = lower_incomplete_gamma(s, x).unwrap();
        assert!((v / oracle(s, x) - 1.0).abs() < 1e-12, "({s}, {x})");
    }
}

#[test]
fn hyp_u_reference_values() {
    // U(1,1,z) = e^z E_1(z); E_1(1) from its convergent series
    let e1 = {
        let mut sum = -0.577_215_664_901_532_9f64;
        let mut term = 1.0;
        for k in 1..60 {
            term *= -1.0 / k as f64;
            sum -= term / k as f64;
        }
        sum
    };
    let u = hyp_u(1.0, 1.0, Complex64::new(1.0, 0.0), &spec()).unwrap();
    assert!((u.re / (1f64.exp() * e1) - 1.0).abs() < 1e-12);
    assert!((u.re / 0.596_347_362_323_194_1 - 1.0).abs() < 1e-12);

    let z = Complex64::new(2.0, 1.0);
    let u = hyp_u(0.7, 1.7, z, &spec()).unwrap();
    assert!(close(u, z.powf(-0.7), 1e-12));

    let cases = [
        (Complex64::new(0.5, 0.0), Complex64::new(0.841_664_005_414_144_5, 0.0)),
        (Complex64::new(2.0, 3.0), Complex64::new(0.304_069_718_269_604_55, -0.188_551_528_757_346_68)),
        (Complex64::new(10.0, -25.0), Complex64::new(0.068_663_210_787_986_62, 0.071_247_250_540_792_24)),
    ];
    for (z, want) in cases {
        let got = hyp_u(0.6986, 0.5, z, &spec()).unwrap();
        assert!(close(got, want, 1e-10), "U at {z}: {got} vs {want}");
    }
}

#[test]
fn hyp_u_large_argument_asymptotics() {
    let z = Complex64::new(1e6, 0.0);
    for &(a, b) in &[(0.6986, 0.5), (1.2, 0.5), (0.3, 2.0)] {
        let u = hyp_u(a, b, z, &spec()).unwrap();
        assert!((u * z.powf(a) - 1.0).norm() < 1e-4);
    }
}

#[test]
fn i_function_reference_values() {
    // I(1, nu, tau) = sqrt(pi)/(2 sqrt(tau)) e^{nu^2/(4 tau)} erfc(nu/(2 sqrt(tau)));
    // at nu = 10, tau = 1 this is sqrt(pi)/2 e^25 erfc(5)
    let v = i_function(1.0, 10.0, Complex64::new(1.0, 0.0), &spec()).unwrap();
    assert!((v.re / 0.098_109_430_731_538_79 - 1.0).abs() < 1e-10);
    assert_eq!(v.im, 0.0);

    let tau = Complex64::new(1.0, 0.5);
    let v = i_function(1.3971, 18.4460, tau, &spec()).unwrap();
    let want = Complex64::new(0.014_973_193_579_325_965, -0.000_071_286_091_221_808_77);
    assert!(close(v, want, 1e-10));
    assert!(close(v, brute_i(1.3971, 18.4460, tau), 1e-9));
}

#[test]
fn i_function_matches_direct_integral_on_grid() {
    for &kappa in &[0.8, 1.3971, 2.3971] {
        for &nu in &[3.7103, 10.0, 18.446] {
            for &tau in &[Complex64::new(0.5, 0.0), Complex64::new(5.0, -7.0), Complex64::new(50.0, 30.0)] {
                let got = i_function(kappa, nu, tau, &spec()).unwrap();
                let want = brute_i(kappa, nu, tau);
                assert!(close(got, want, 1e-8), "I({kappa}, {nu}, {tau}) = {got} vs {want}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gamma_conjugate_symmetry(re in -20.0f64..40.0, im in -30.0f64..30.0) {
        prop_assume!(im.abs() > 1e-3 || re > 0.0);
        let z = Complex64::new(re, im);
        let a = gamma_fn(z.conj()).unwrap();
        let b = gamma_fn(z).unwrap().conj();
        prop_assert!((a - b).norm() <= 1e-14 * b.norm());
    }

    #[test]
    fn hyp_u_conjugate_symmetry(a in 0.1f64..3.0, b in -1.0f64..2.0, re in 0.05f64..50.0, im in -50.0f64..50.0) {
        let z = Complex64::new(re, im);
        let x = hyp_u(a, b, z.conj(), &spec()).unwrap();
        let y = hyp_u(a, b, z, &spec()).unwrap().conj();
        prop_assert!((x - y).norm() <= 1e-12 * y.norm());
    }

    #[test]
    fn i_function_conjugate_symmetry(kappa in 0.5f64..3.0, nu in 1.0f64..20.0, re in 0.5f64..50.0, im in -50.0f64..50.0) {
        let tau = Complex64::new(re, im);
        let x = i_function(kappa, nu, tau.conj(), &spec()).unwrap();
        let y = i_function(kappa, nu, tau, &spec()).unwrap().conj();
        prop_assert!((x - y).norm() <= 1e-12 * y.norm());
    }
}
