use proptest::prelude::*;
use varpricer::asymptotics::{gap_formula, GapCache};
use varpricer::models::presets;
use varpricer::pricer::Method;
use varpricer::special::regularized_gamma_q;
use varpricer::{
    bs_closed_form_rv, corrected_price, discretization_gap, gamma_limit_expectation, limit_call_qv, limit_call_rv,
    limit_put_qv, limit_put_rv, price_option_qv, q_fn, qv_limit, r_fn, ContourSpec, Error, GammaLimitLaw, ModelSpec,
    OptionSide,
};

const DAY: f64 = 1.0 / 252.0;
const S2: f64 = 0.09;

fn law(n: usize, s2: f64) -> GammaLimitLaw {
    GammaLimitLaw::new(n, s2).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn catalog_with_kou2() -> Vec<ModelSpec> {
    let mut v = presets::catalog();
    v.push(presets::kou(0.2));
    v
}

#[test]
fn gamma_expectation_elementary() {
    for n in [1, 2, 7, 50] {
        let l = law(n, S2);
        assert!((gamma_limit_expectation(&|_| 3.5, &l, &[]).unwrap() - 3.5).abs() < 1e-13);
        assert!(rel(gamma_limit_expectation(&|x| x, &l, &[]).unwrap(), S2) < 1e-13);
        // Laplace transform of the gamma law
        let s = 4.0;
        let want = (1.0 + s * l.scale()).powf(-l.shape());
        assert!(rel(gamma_limit_expectation(&|x| (-s * x).exp(), &l, &[]).unwrap(), want) < 1e-12);
    }
    let call = |x: f64| (x - S2).max(0.0);
    let got = gamma_limit_expectation(&call, &law(2, S2), &[S2]).unwrap();
    assert!((got - S2 * (-1.0f64).exp()).abs() < 1e-14);
    assert!((got - 0.033_109).abs() < 1e-6);
    assert_eq!(gamma_limit_expectation(&|x| x + 2.0, &law(3, 0.0), &[]).unwrap(), 2.0);
    assert!(GammaLimitLaw::new(0, S2).is_err());
    assert!(GammaLimitLaw::new(1, -1.0).is_err());
}

#[test]
fn gamma_expectation_matches_chi_square_prices() {
    // Y_n is the driftless Black-Scholes realized variance, priced in closed form
    for n in [1usize, 2, 5, 20, 100, 400] {
        for k in [0.5, 0.9, 1.0, 1.4] {
            let strike = k * S2;
            let call = gamma_limit_expectation(&|x| (x - strike).max(0.0), &law(n, S2), &[strike]).unwrap();
            let put = gamma_limit_expectation(&|x| (strike - x).max(0.0), &law(n, S2), &[strike]).unwrap();
            let want_call = bs_closed_form_rv(0.3, 0.0, 1.0, n, k, OptionSide::Call).unwrap();
            let want_put = bs_closed_form_rv(0.3, 0.0, 1.0, n, k, OptionSide::Put).unwrap();
            assert!((call - want_call).abs() < 1e-13, "n={n} k={k}: {call} vs {want_call}");
            assert!((put - want_put).abs() < 1e-13, "n={n} k={k}: {put} vs {want_put}");
        }
    }
}

#[test]
fn qv_limit_examples() {
    assert_eq!(qv_limit(&|x| (x - S2).max(0.0), S2), 0.0);
    assert_eq!(qv_limit(&|_| 1.25, S2), 1.25);
    assert!((qv_limit(&|x| (2.0 * S2 - x).max(0.0), S2) - 0.09).abs() < 1e-16);
}

#[test]
fn q_and_r_reference_values() {
    let e = (-1.0f64).exp();
    assert!((q_fn(1.0, 2, 0.0).unwrap() - 0.367_879_441_171_442_3).abs() < 1e-15);
    assert!((r_fn(1.0, 2, 0.0).unwrap() - (1.0 - e)).abs() < 1e-15);
    // high-precision references, rounded to f64
    assert!(rel(q_fn(1.0, 252, 0.5).unwrap(), 2.384_425_969_286_115e-7) < 1e-12);
    assert!(rel(r_fn(1.0, 252, 0.5).unwrap(), 0.999_999_543_414_989_1) < 1e-14);
    assert!(rel(q_fn(1.2, 7, 0.3).unwrap(), 0.139_085_586_281_092_67) < 1e-13);
    assert!(rel(r_fn(1.2, 7, 0.3).unwrap(), 0.857_853_149_771_682) < 1e-14);
    assert!(rel(q_fn(0.8, 1, 0.797_531).unwrap(), 0.466_186_971_010_220_53) < 1e-13);
    assert!(rel(r_fn(0.8, 1, 0.797_531).unwrap(), 0.769_540_761_670_671_3) < 1e-14);
    assert!(r_fn(1.0, 3, 1e6).unwrap() > 1.0 - 1e-15);
    assert!(matches!(q_fn(0.0, 2, 0.0), Err(Error::Domain(_))));
    assert!(matches!(r_fn(1.0, 2, -0.1), Err(Error::Domain(_))));
}

#[test]
fn q_and_r_monotone_in_r() {
    let rs: Vec<f64> = (0..60).map(|i| 0.05 * i as f64).collect();
    for n in [1usize, 2, 3, 10, 50, 252] {
        for k in [0.3, 0.8, 1.0, 1.5, 3.0] {
            for w in rs.windows(2) {
                let (r0, r1) = (w[0], w[1]);
                // near saturation R is resolved only to one ulp of 1, so strictness
                // is checked on whichever of R and 1 - R keeps relative precision
                let (rr0, rr1) = (r_fn(k, n, r0).unwrap(), r_fn(k, n, r1).unwrap());
                assert!(rr1 >= rr0, "R n={n} k={k} r={r0}");
                let a = 0.5 * n as f64;
                let (c0, c1) = (regularized_gamma_q(a, k * (1.0 + r0) * a), regularized_gamma_q(a, k * (1.0 + r1) * a));
                assert!(rr1 > rr0 || c1 < c0 || (c0 == 0.0 && c1 == 0.0), "R n={n} k={k} r={r0}");
                assert!(((1.0 - rr0) - c0).abs() < 2e-15);
                // Q is a power of z e^{-z}, z = k(1+r): decreasing exactly where z >= 1
                let (q0, q1) = (q_fn(k, n, r0).unwrap(), q_fn(k, n, r1).unwrap());
                if k * (1.0 + r0) >= 1.0 {
                    assert!(q1 < q0 || (q0 == 0.0 && q1 == 0.0), "Q n={n} k={k} r={r0}");
                } else if k * (1.0 + r1) <= 1.0 {
                    assert!(q1 > q0, "Q n={n} k={k} r={r0}");
                }
            }
        }
    }
}

#[test]
fn qv_limit_prices() {
    let bs = presets::black_scholes();
    assert_eq!(limit_put_qv(&bs, 1.0).unwrap(), 0.0);
    assert_eq!(limit_call_qv(&bs, 1.0).unwrap(), 0.0);
    for m in presets::catalog() {
        let v2 = m.v_sq();
        assert!((limit_put_qv(&m, 1.0).unwrap() - v2).abs() < 1e-16);
        assert!((limit_call_qv(&m, 1.0).unwrap() - v2).abs() < 1e-16);
    }
    let cgmy = presets::cgmy();
    let v2 = cgmy.v_sq();
    assert!((limit_put_qv(&cgmy, 1.2).unwrap() - 1.2 * v2).abs() < 1e-16);
    assert!((limit_call_qv(&cgmy, 1.2).unwrap() - v2).abs() < 1e-16);
}

#[test]
fn rv_limit_prices() {
    let bs = presets::black_scholes();
    let want = S2 * (-1.0f64).exp();
    assert!((limit_call_rv(&bs, 1.0, 2).unwrap() - want).abs() < 1e-15);
    assert!((limit_put_rv(&bs, 1.0, 2).unwrap() - want).abs() < 1e-15);
    // sigma^2 = 0: point mass at zero
    let cgmy = presets::cgmy();
    let v2 = cgmy.v_sq();
    for k in [0.5, 1.0, 1.7] {
        for n in [1, 10] {
            assert!((limit_put_rv(&cgmy, k, n).unwrap() - k * v2).abs() < 1e-16);
            assert!((limit_call_rv(&cgmy, k, n).unwrap() - v2).abs() < 1e-16);
        }
    }
}

#[test]
fn limit_parity_for_both_underlyings() {
    for m in catalog_with_kou2() {
        let v0 = m.sigma_sq() + m.v_sq();
        for k in [0.2, 0.7, 1.0, 1.3, 2.5] {
            let qv = limit_call_qv(&m, k).unwrap() - limit_put_qv(&m, k).unwrap();
            assert!((qv - (1.0 - k) * v0).abs() < 1e-15);
            for n in [1, 3, 10, 100] {
                let rv = limit_call_rv(&m, k, n).unwrap() - limit_put_rv(&m, k, n).unwrap();
                assert!((rv - (1.0 - k) * v0).abs() < 1e-15, "{:?} k={k} n={n}", m.kind());
            }
        }
    }
}

#[test]
fn limit_put_is_the_gamma_expectation() {
    for m in catalog_with_kou2() {
        let v0 = m.sigma_sq() + m.v_sq();
        for k in [0.4, 0.9, 1.0, 1.2, 2.0] {
            for n in [1, 2, 5, 25, 128] {
                let strike = k * v0;
                let g = |x: f64| (strike - x).max(0.0);
                let direct = gamma_limit_expectation(&g, &law(n, m.sigma_sq()), &[strike]).unwrap();
                let formula = limit_put_rv(&m, k, n).unwrap();
                assert!((direct - formula).abs() < 1e-13, "{:?} k={k} n={n}: {direct} vs {formula}", m.kind());
            }
        }
    }
}

#[test]
fn gap_reference_values() {
    let bs = presets::black_scholes();
    let want = S2 * (-1.0f64).exp();
    assert!((discretization_gap(&bs, 1.0, 2, OptionSide::Call).unwrap() - want).abs() < 1e-15);
    assert!((discretization_gap(&bs, 1.0, 2, OptionSide::Put).unwrap() - want).abs() < 1e-15);
    assert!((want - 0.033_109).abs() < 1e-6);
    for k in [0.5, 1.0, 2.0] {
        assert_eq!(discretization_gap(&presets::cgmy(), k, 5, OptionSide::Call).unwrap(), 0.0);
    }
}

#[test]
fn gap_is_the_limit_difference_and_a_gamma_expectation() {
    for m in catalog_with_kou2() {
        let v0 = m.sigma_sq() + m.v_sq();
        for k in [0.5, 0.8, 1.0, 1.25, 1.6] {
            for n in [1, 2, 4, 16, 64] {
                let gap = discretization_gap(&m, k, n, OptionSide::Put).unwrap();
                let dp = limit_put_rv(&m, k, n).unwrap() - limit_put_qv(&m, k).unwrap();
                let dc = limit_call_rv(&m, k, n).unwrap() - limit_call_qv(&m, k).unwrap();
                assert!((gap - dp).abs() < 1e-14 && (gap - dc).abs() < 1e-14, "{:?} k={k} n={n}", m.kind());
                // Delta_n(g) = E[g(Y_n) - g(sigma^2)] for the call payoff struck at k V^0
                let strike = k * v0;
                let g = |x: f64| (x - strike).max(0.0);
                let ey = gamma_limit_expectation(&g, &law(n, m.sigma_sq()), &[strike]).unwrap();
                assert!((ey - g(m.sigma_sq()) - gap).abs() < 1e-13, "{:?} k={k} n={n}", m.kind());
                assert!(gap >= -1e-16);
            }
        }
    }
}

#[test]
fn gap_decreases_in_n() {
    for m in [presets::black_scholes(), presets::kou(0.3), presets::kou(0.2), presets::merton()] {
        for k in [0.6, 0.9, 1.0, 1.1, 1.5] {
            let mut last = f64::INFINITY;
            for n in 1..=512 {
                let gap = discretization_gap(&m, k, n, OptionSide::Call).unwrap();
                assert!(gap <= last + 1e-15, "{:?} k={k} n={n}: {gap} > {last}", m.kind());
                last = gap;
            }
        }
    }
}

#[test]
fn gap_vanishes_for_many_samples() {
    let bs = presets::black_scholes();
    // away from the money the gap is exponentially small at n = 1e5
    for k in [0.9, 0.95, 1.05, 1.1] {
        let gap = discretization_gap(&bs, k, 100_000, OptionSide::Call).unwrap();
        assert!(gap <= 1e-4 * S2, "k={k}: {gap}");
    }
    // at the money it decays like sigma^2 / sqrt(pi n) only
    for n in [10_000usize, 100_000, 1_000_000] {
        let gap = discretization_gap(&bs, 1.0, n, OptionSide::Call).unwrap();
        let asymptotic = S2 / (std::f64::consts::PI * n as f64).sqrt();
        assert!(rel(gap, asymptotic) < 1e-4, "n={n}: {gap} vs {asymptotic}");
    }
    assert!(discretization_gap(&bs, 1.0, 100_000_000, OptionSide::Call).unwrap() <= 1e-4 * S2);
}

#[test]
fn gap_cache_is_shared_across_threads() {
    let cache = GapCache::new();
    let models = [presets::black_scholes(), presets::kou(0.3), presets::merton()];
    std::thread::scope(|s| {
        for _ in 0..4 {
            s.spawn(|| {
                for m in &models {
                    for n in 1..30 {
                        let v = cache.get_or_compute(m, 1.0, n).unwrap();
                        assert_eq!(v, gap_formula(m.sigma_sq(), m.v_sq(), 1.0, n).unwrap());
                    }
                }
            });
        }
    });
    assert_eq!(cache.len(), 3 * 29);
}

#[test]
fn corrected_prices() {
    let cs = ContourSpec::default();
    let cgmy = presets::cgmy();
    let qv = price_option_qv(&cgmy, 10.0 * DAY, 1.0, OptionSide::Call, &cs).unwrap();
    let cor = corrected_price(&cgmy, 10.0 * DAY, 10, 1.0, OptionSide::Call, &cs).unwrap();
    assert_eq!(cor.price, qv.price);
    assert_eq!(cor.method, Method::ConvexityCorrected);
    assert_eq!(cor.to_json()["method"], "convexity_corrected");

    let bs = presets::black_scholes();
    let cor = corrected_price(&bs, 10.0 * DAY, 10, 1.0, OptionSide::Call, &cs).unwrap();
    let exact = bs_closed_form_rv(0.3, -0.045, 10.0 * DAY, 10, 1.0, OptionSide::Call).unwrap();
    assert!(rel(cor.price, exact) < 0.01, "{} vs {exact}", cor.price);

    // exact in the limit T -> 0
    let kou = presets::kou(0.3);
    for side in [OptionSide::Put, OptionSide::Call] {
        let cor = corrected_price(&kou, 1e-7, 3, 1.0, side, &cs).unwrap();
        let limit = match side {
            OptionSide::Put => limit_put_rv(&kou, 1.0, 3).unwrap(),
            OptionSide::Call => limit_call_rv(&kou, 1.0, 3).unwrap(),
        };
        assert!(rel(cor.price, limit) < 1e-3, "{side:?}: {} vs {limit}", cor.price);
    }
    assert!(corrected_price(&kou, 0.1, 0, 1.0, OptionSide::Call, &cs).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn put_and_call_gaps_coincide(idx in 0usize..6, k in 0.05f64..4.0, n in 1usize..2000) {
        let m = &catalog_with_kou2()[idx];
        let dp = limit_put_rv(m, k, n).unwrap() - limit_put_qv(m, k).unwrap();
        let dc = limit_call_rv(m, k, n).unwrap() - limit_call_qv(m, k).unwrap();
        let scale = m.sigma_sq() + m.v_sq();
        prop_assert!((dp - dc).abs() <= 1e-13 * scale);
        prop_assert!((discretization_gap(m, k, n, OptionSide::Put).unwrap() - dp).abs() <= 1e-13 * scale);
    }
}
