use num_complex::Complex64;
use proptest::prelude::*;
use telegraph::analytic::{
    approx_cos_expectation, char_fn_general, conditional_char_fn_symmetric, conditional_moment,
    cos_expectation_symmetric, density_eval, gaussian_cos_expectation, multi_source_char_fn, poisson_truncation,
    poisson_weights, tau_mean_power_law, variance_one_over_f, variance_symmetric, ApproxRegime,
    FlipConditionedDensity, OneOverFEnsemble, VarianceMode,
};
use telegraph::{EvaluationPoint, Start, TelegraphSource};

/// Composite Simpson rule on `n` (even) panels.
fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

fn point(m: f64, t: f64) -> EvaluationPoint {
    EvaluationPoint::new(m, t).unwrap()
}

#[test]
fn conditional_char_fn_matches_density_quadrature() {
    let tc = 1.0;
    for f in 1..=9u32 {
        let d = FlipConditionedDensity::symmetric(tc, f).unwrap();
        for &m in &[0.5, 2.0, 6.0] {
            let q = simpson(|x| d.eval(x) * (m * x).cos(), -tc, tc, 20_000);
            let c = conditional_char_fn_symmetric(tc, m, f);
            assert!((q - c).abs() < 1e-10, "f={f} m={m}: {q} vs {c}");
        }
    }
    // frozen: quadrature of d₃(θ)cos(2θ) on [-1, 1]
    assert!((conditional_char_fn_symmetric(1.0, 2.0, 3) - 0.653_096_662_469_987_4).abs() < 1e-12);
}

#[test]
fn conditional_moments_match_density_quadrature() {
    let tc: f64 = 1.3;
    for f in 0..=9u32 {
        let d = FlipConditionedDensity::symmetric(tc, f).unwrap();
        for m_exp in [2u32, 4, 6] {
            let q = if f == 0 {
                tc.powi(m_exp as i32)
            } else {
                simpson(|x| d.eval(x) * x.powi(m_exp as i32), -tc, tc, 20_000)
            };
            let c = conditional_moment(tc, m_exp, f);
            assert!((q - c).abs() < 1e-10, "f={f} m={m_exp}: {q} vs {c}");
        }
        // odd f: θ_c²/(f+2); even f > 0 shares the density of f-1
        let f_odd = if f > 0 && f % 2 == 0 { f - 1 } else { f };
        if f > 0 {
            assert!((conditional_moment(tc, 2, f) - tc * tc / (f_odd + 2) as f64).abs() < 1e-14);
        }
    }
    assert!((conditional_moment(tc, 4, 3) - 3.0 * tc.powi(4) / 35.0).abs() < 1e-14);
}

#[test]
fn poisson_resummation_reproduces_closed_form() {
    for &lambda in &[0.01, 0.3, 1.0, 4.0, 10.0, 20.0] {
        for &z in &[0.05, 0.7, 2.0, 9.0] {
            let (tau, t) = (1.0, lambda);
            let delta = z / t;
            let source = TelegraphSource::symmetric(delta, tau).unwrap();
            let closed = cos_expectation_symmetric(&source, &point(1.0, t)).unwrap();
            let weights = poisson_weights(lambda, poisson_truncation(lambda));
            let sum: f64 = weights
                .iter()
                .enumerate()
                .map(|(f, w)| w * conditional_char_fn_symmetric(source.theta_c(t), 1.0, f as u32))
                .sum();
            assert!((sum - closed).abs() < 1e-9, "λ={lambda} z={z}: {sum} vs {closed}");
        }
    }
}

#[test]
fn variance_is_poisson_mixture_of_conditional_moments() {
    for &lambda in &[0.001, 0.5, 3.0, 17.0] {
        let source = TelegraphSource::symmetric(0.8, 1.0).unwrap();
        let t = lambda;
        let tc = source.theta_c(t);
        let weights = poisson_weights(lambda, poisson_truncation(lambda));
        let sum: f64 = weights
            .iter()
            .enumerate()
            .map(|(f, w)| w * conditional_moment(tc, 2, f as u32))
            .sum();
        let v = variance_symmetric(&source, t).unwrap();
        assert!((sum - v).abs() < 1e-9 * tc * tc.max(1.0), "λ={lambda}");
    }
}

#[test]
fn density_integrates_to_char_fn() {
    let sources = [
        TelegraphSource::symmetric(1.0, 0.8).unwrap(),
        TelegraphSource::new(1.0, 0.5, 2.0, 1.0).unwrap(),
        TelegraphSource::new(0.7, 1.5, 0.4, 0.35).unwrap(),
    ];
    let t = 1.2;
    for source in sources {
        let tc = source.theta_c(t);
        for &m in &[0.8, 2.5] {
            let re = simpson(
                |x| density_eval(&source, t, x, None).unwrap().continuous * (m * x).cos(),
                -tc,
                tc,
                4000,
            );
            let im = simpson(
                |x| density_eval(&source, t, x, None).unwrap().continuous * (m * x).sin(),
                -tc,
                tc,
                4000,
            );
            let atoms = density_eval(&source, t, 0.0, None).unwrap();
            let z = m * tc;
            let want = char_fn_general(&source, &point(m, t), Start::Mixed);
            let got = Complex64::new(re, im)
                + atoms.atom_plus * Complex64::new(z.cos(), z.sin())
                + atoms.atom_minus * Complex64::new(z.cos(), -z.sin());
            assert!((got - want).norm() < 1e-6, "{source:?} m={m}: {got} vs {want}");
        }
    }
}

#[test]
fn second_derivative_gives_variance() {
    for &(delta, tau, t) in &[(1.0, 1.0, 1.0), (0.5, 0.2, 3.0), (2.0, 5.0, 0.4)] {
        let source = TelegraphSource::symmetric(delta, tau).unwrap();
        let h = 1e-4 / (delta * t);
        let e = |m: f64| cos_expectation_symmetric(&source, &point(m, t)).unwrap();
        let second = (e(h) - 2.0 * e(0.0) + e(-h)) / (h * h);
        let v = variance_symmetric(&source, t).unwrap();
        assert!((-second / v - 1.0).abs() < 1e-6, "{delta} {tau} {t}: {} vs {v}", -second);
    }
}

#[test]
fn variance_limits() {
    let source = TelegraphSource::symmetric(1.0, 1.0).unwrap();
    let t = 1e-3;
    assert!((variance_symmetric(&source, t).unwrap() / (t * t) - 1.0).abs() < 1e-3);
    let t = 1e3;
    let long = t - 0.5;
    assert!((variance_symmetric(&source, t).unwrap() / long - 1.0).abs() < 1e-3);
}

#[test]
fn gaussian_limit_convergence() {
    // σ² = Δ²τ_c t fixed while τ_c halves and t doubles; mΔτ_c starts at 1e-2.
    let sigma2: f64 = 0.5;
    let mut tau = 1e-2;
    let mut last = f64::INFINITY;
    for step in 0..=6 {
        let t = sigma2 / tau;
        let source = TelegraphSource::symmetric(1.0, tau).unwrap();
        let exact = cos_expectation_symmetric(&source, &point(1.0, t)).unwrap();
        let gauss = gaussian_cos_expectation(1.0, sigma2.sqrt());
        let err = (exact / gauss - 1.0).abs();
        assert!(err < 1e-3, "step {step}: {err}");
        assert!(err < last, "step {step}: {err} not below {last}");
        last = err;
        tau /= 2.0;
    }
}

#[test]
fn gaussian_regime_approximation() {
    let tau = 0.01;
    let source = TelegraphSource::symmetric(1.0, tau).unwrap();
    let t = 1e4 * tau;
    let p = point(1.0, t);
    let exact = cos_expectation_symmetric(&source, &p).unwrap();
    let approx = approx_cos_expectation(&source, &p, ApproxRegime::GaussianLimit).unwrap();
    assert!((approx / exact - 1.0).abs() < 1e-3);
}

#[test]
fn first_order_lambda_small_z() {
    let source = TelegraphSource::symmetric(1.0, 1e3).unwrap();
    for &t in &[1e-2, 3e-2, 1e-1] {
        let p = point(1.0, t);
        let z: f64 = t;
        let lambda = t / 1e3;
        let v = approx_cos_expectation(&source, &p, ApproxRegime::FirstOrderLambda).unwrap();
        // (v - cos z)/λ = z²/3 - z⁴/30 + ...
        let slope = (v - z.cos()) / lambda;
        assert!((slope - z * z / 3.0).abs() < z.powi(4) / 20.0, "{slope}");
        let exact = cos_expectation_symmetric(&source, &p).unwrap();
        assert!((v - exact).abs() < 10.0 * lambda * lambda);
    }
}

#[test]
fn gaussian_char_fn_matches_quadrature() {
    let sigma: f64 = 0.5;
    let norm = 1.0 / (sigma * (2.0 * std::f64::consts::PI).sqrt());
    let q = simpson(
        |x| norm * (-0.5 * x * x / (sigma * sigma)).exp() * (2.0 * x).cos(),
        -12.0 * sigma,
        12.0 * sigma,
        20_000,
    );
    assert!((q - gaussian_cos_expectation(2.0, sigma)).abs() < 1e-12);
    assert!((gaussian_cos_expectation(2.0, sigma) - (-0.5f64).exp()).abs() < 1e-15);
}

#[test]
fn power_law_mean_matches_quadrature() {
    let (alpha, tau_b): (f64, f64) = (1.5, 2.0);
    // density (α-1) τ^{α-2} / τ_b^{α-1}; substitute τ = τ_b s² to remove the endpoint singularity
    let q = simpson(
        |s| {
            let tau = tau_b * s * s;
            let dens = (alpha - 1.0) * tau.powf(alpha - 2.0) / tau_b.powf(alpha - 1.0);
            tau * dens * 2.0 * tau_b * s
        },
        1e-12,
        1.0,
        20_000,
    );
    assert!((q - tau_mean_power_law(alpha, tau_b).unwrap()).abs() < 1e-9);
    assert!((tau_mean_power_law(alpha, tau_b).unwrap() - 2.0 / 3.0).abs() < 1e-15);
}

#[test]
fn one_over_f_quadrature_matches_simpson_oracle() {
    let e = OneOverFEnsemble::new(10, 1.0, 0.01, 1.0, 0.0, None).unwrap();
    let t = 100.0;
    let (lo, hi) = (0.01f64.ln(), 1f64.ln());
    let shape = |u: f64| {
        let tau = u.exp();
        let s = TelegraphSource::symmetric(1.0, tau).unwrap();
        variance_symmetric(&s, t).unwrap()
    };
    let oracle = 10.0 * simpson(shape, lo, hi, 20_000) / (hi - lo);
    let q = variance_one_over_f(&e, t, VarianceMode::Quadrature).unwrap();
    assert!((q / oracle - 1.0).abs() < 1e-10, "{q} vs {oracle}");
    let a = variance_one_over_f(&e, t, VarianceMode::Approx).unwrap();
    assert!((a - 214.975_768_542_109_65).abs() < 1e-9 * a, "{a}");
}

#[test]
fn multi_source_product_law() {
    let s = TelegraphSource::symmetric(0.6, 0.9).unwrap();
    let p = point(1.0, 1.3);
    let single = char_fn_general(&s, &p, Start::Mixed);
    let pair = multi_source_char_fn(&[(s, Start::Mixed), (s, Start::Mixed)], &p);
    assert!((pair - single * single).norm() < 1e-15);
    assert_eq!(multi_source_char_fn(&[], &p), Complex64::new(1.0, 0.0));
    assert_eq!(multi_source_char_fn(&[(s, Start::Mixed)], &p), single);
}

fn source_strategy() -> impl Strategy<Value = TelegraphSource> {
    (0.01f64..3.0, 0.05f64..20.0, 0.05f64..20.0, 0.0f64..=1.0)
        .prop_map(|(d, tp, tm, p)| TelegraphSource::new(d, tp, tm, p).unwrap())
}

proptest! {
    #[test]
    fn char_fn_is_bounded(source in source_strategy(), m in -10.0f64..10.0, t in 0.0f64..20.0) {
        for start in [Start::Positive, Start::Negative, Start::Mixed] {
            let v = char_fn_general(&source, &point(m, t), start);
            prop_assert!(v.norm() <= 1.0 + 1e-12, "{:?} {}", start, v);
        }
    }

    #[test]
    fn char_fn_conjugation(source in source_strategy(), m in -10.0f64..10.0, t in 0.01f64..20.0) {
        let a = char_fn_general(&source, &point(m, t), Start::Positive);
        let b = char_fn_general(&source, &point(-m, t), Start::Positive);
        prop_assert!((a - b.conj()).norm() < 1e-12);
    }

    #[test]
    fn symmetric_reduction(delta in 0.01f64..3.0, tau in 0.05f64..20.0, m in -10.0f64..10.0, t in 0.0f64..20.0) {
        let s = TelegraphSource::symmetric(delta, tau).unwrap();
        let g = char_fn_general(&s, &point(m, t), Start::Mixed);
        let c = cos_expectation_symmetric(&s, &point(m, t)).unwrap();
        prop_assert!((g.re - c).abs() < 1e-12 && g.im.abs() < 1e-12);
    }
}
