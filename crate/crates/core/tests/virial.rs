mod common;

use blowup_core::setup::*;
use blowup_core::spectral::*;
use blowup_core::virial::*;
use proptest::prelude::*;
use quadrature::double_exponential::integrate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

#[test]
fn weight_l1_norm_against_adaptive_quadrature() {
    for kappa in [0.05, 0.2, 0.5, 0.75, 0.9] {
        let ws = WeightSpec::new(kappa).unwrap();
        // x = e^{-s} moves the endpoint singularity to a decaying tail
        let cut = 40.0 / (1.0 - kappa);
        let half = integrate(|s| ws.component((-s).exp()) * (-s).exp(), 0.0, cut, 1e-13).integral;
        let got = weight_l1_norm(kappa).unwrap();
        assert!(
            (got - 2.0 * half).abs() <= 1e-8 * got,
            "kappa={kappa}: {got} vs {}",
            2.0 * half
        );
    }
    assert_eq!(weight_l1_norm(0.5).unwrap(), 2.0);
}

/// `I(0)` for the builtin pair in 1-D: `2A ∫₀¹ x³ e^{-2x²} (x^{-1/2} - 1) dx`.
fn builtin_pairing_1d(amplitude: f64) -> f64 {
    2.0 * amplitude
        * integrate(
            |x: f64| x.powi(3) * (-2.0 * x * x).exp() * (x.powf(-0.5) - 1.0),
            0.0,
            1.0,
            1e-14,
        )
        .integral
}

#[test]
fn virial_pairing_converges_to_adaptive_quadrature() {
    let ws = WeightSpec::new(0.5).unwrap();
    let exact = builtin_pairing_1d(1.0);
    let mut errors = Vec::new();
    for n in [64usize, 128, 256, 512, 1024] {
        let g = GridSpec::new(1, n, 2.0 * PI).unwrap();
        let b = build_coefficient(&CoefficientSpec::builtin(1, 1.0, 1.0).unwrap(), &g).unwrap();
        let u0 = build_initial_data(&InitialDataSpec::GaussianSum { amplitude: 1.0 }, &g).unwrap();
        let i = virial_i(&gradient(&u0), &b, &ws).unwrap();
        errors.push((i - exact).abs() / exact);
    }
    for w in errors.windows(2) {
        assert!(w[0] / w[1] > 3.0, "{errors:?}");
    }
    assert!(errors[errors.len() - 1] < 5e-4, "{errors:?}");
}

#[test]
fn quadrature_integrates_weighted_linears_exactly() {
    // ∫₀¹ x·(x^{-κ} - 1) dx = 1/(2-κ) - 1/2; w·x is even, so the full integral doubles it
    let g = GridSpec::new(1, 64, 2.0).unwrap();
    for kappa in [0.1, 0.5, 0.8] {
        let ws = WeightSpec::new(kappa).unwrap();
        let q = VirialQuadrature::new(&g, &ws).unwrap();
        let lin: Vec<f64> = g.nodes().into_iter().collect();
        let exact = 2.0 * (1.0 / (2.0 - kappa) - 0.5);
        assert!(
            (q.integrate_weighted(0, &lin) - exact).abs() < 1e-13,
            "kappa={kappa}"
        );
        let ones = vec![1.0; g.len()];
        assert!(q.integrate_weighted(0, &ones).abs() < 1e-14);
        assert!((q.integrate(&ones) - 2.0).abs() < 1e-13);
    }
}

#[test]
fn pairing_positive_for_builtin_family() {
    let ws = WeightSpec::new(0.5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for dim in 1..=3 {
        let n = [256, 64, 52][dim - 1];
        let g = GridSpec::new(dim, n, 2.0 * PI).unwrap();
        for _ in 0..5 {
            let a = rng.gen_range(0.1..10.0);
            let amp = rng.gen_range(1e-3..100.0);
            let b = build_coefficient(&CoefficientSpec::builtin(dim, a, 1.0).unwrap(), &g).unwrap();
            let u0 =
                build_initial_data(&InitialDataSpec::GaussianSum { amplitude: amp }, &g).unwrap();
            assert!(
                virial_i(&gradient(&u0), &b, &ws).unwrap() > 0.0,
                "dim={dim} a={a} A={amp}"
            );
        }
    }
}

#[test]
fn pairing_scales_linearly_in_amplitude() {
    let g = GridSpec::new(1, 128, 2.0 * PI).unwrap();
    let ws = WeightSpec::new(0.3).unwrap();
    let b = build_coefficient(&CoefficientSpec::builtin(1, 2.0, 0.8).unwrap(), &g).unwrap();
    let i = |amp: f64| {
        let u = build_initial_data(&InitialDataSpec::GaussianSum { amplitude: amp }, &g).unwrap();
        virial_i(&gradient(&u), &b, &ws).unwrap()
    };
    assert!((i(3.0) - 3.0 * i(1.0)).abs() < 1e-12 * i(3.0));
}

fn random_pair(dim: usize, rng: &mut ChaCha8Rng) -> (ScalarField, CoefficientField) {
    let n = if dim == 1 { 128 } else { 64 };
    let g = GridSpec::new(dim, n, 2.0 * PI).unwrap();
    let a = rng.gen_range(0.2..5.0);
    let sigma = rng.gen_range(0.6..1.1);
    let coeff =
        CoefficientField::build(&CoefficientSpec::builtin(dim, a, sigma).unwrap(), &g).unwrap();
    let centers: Vec<(Vec<f64>, f64, f64)> = (0..3)
        .map(|_| {
            let c = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            (c, rng.gen_range(-3.0..3.0), rng.gen_range(0.3..1.5))
        })
        .collect();
    let u = ScalarField::from_fn(g, |x| {
        centers
            .iter()
            .map(|(c, amp, w)| {
                let r2: f64 = c.iter().zip(x).map(|(c, x)| (x - c) * (x - c)).sum();
                amp * (-r2 / (w * w)).exp()
            })
            .sum()
    });
    (u, coeff)
}

#[test]
fn jensen_and_per_axis_bounds_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for trial in 0..100 {
        let dim = 1 + trial % 2;
        let kappa = rng.gen_range(0.05..0.95);
        let ws = WeightSpec::new(kappa).unwrap();
        let (u, coeff) = random_pair(dim, &mut rng);
        let bd = identity_terms(&gradient(&u), &coeff, &ws).unwrap();
        let c1 = riccati_c1(dim, kappa).unwrap();
        let tol = 1e-9 * (1.0 + bd.i * bd.i);
        assert!(bd.i2 >= c1 * bd.i * bd.i - tol, "trial {trial}: {bd:?}");
        for axis in 0..dim {
            assert!(
                bd.per_axis_i1[axis] >= bd.per_axis_i2[axis] - tol,
                "trial {trial} axis {axis}"
            );
        }
    }
}

#[test]
fn integration_by_parts_closes_on_smooth_data() {
    let g = GridSpec::new(1, 512, 2.0 * PI).unwrap();
    let ws = WeightSpec::new(0.5).unwrap();
    let coeff =
        CoefficientField::build(&CoefficientSpec::builtin(1, 1.0, 1.0).unwrap(), &g).unwrap();
    let u = build_initial_data(&InitialDataSpec::GaussianSum { amplitude: 1.0 }, &g).unwrap();
    let bd = identity_terms(&gradient(&u), &coeff, &ws).unwrap();
    assert!(
        bd.integration_by_parts_gap().abs() < 1e-4 * (bd.b.abs() + 1.0),
        "{bd:?}"
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn steep_rule_dominates_half_squared_rule(kappa in 0.01f64..0.99, n in 16usize..80) {
        let g = GridSpec::new(1, 2 * n, 2.0).unwrap();
        let q = VirialQuadrature::new(&g, &WeightSpec::new(kappa).unwrap()).unwrap();
        for j in 0..g.points() {
            let mut e = vec![0.0; g.points()];
            e[j] = 1.0;
            let steep = q.integrate_steep(0, &e);
            let sq = q.integrate_weighted_sq(0, &e);
            prop_assert!(steep >= 0.5 * sq - 1e-12 * (1.0 + sq));
        }
    }

    #[test]
    fn riccati_time_scaling(c1 in 0.01f64..2.0, c2 in 0.0f64..2.0, i0 in 0.1f64..10.0, lam in 0.1f64..10.0) {
        // J/λ solves the equation with (λc1, c2/λ, I0/λ), so t* is shared
        let p = RiccatiParams::new(c1, c2, i0).unwrap();
        let q = RiccatiParams::new(c1 * lam, c2 / lam, i0 / lam).unwrap();
        prop_assume!(p.margin() > 1e-6);
        let (tp, tq) = (blowup_time(&p).unwrap(), blowup_time(&q).unwrap());
        prop_assert!((tp - tq).abs() <= 1e-10 * tp);
        let t = 0.5 * tp;
        let (jp, jq) = (riccati_j(&p, t).unwrap(), riccati_j(&q, t).unwrap());
        prop_assert!((jp - lam * jq).abs() <= 1e-9 * jp.abs().max(1.0));
    }

    #[test]
    fn riccati_solves_its_ode(c1 in 0.05f64..2.0, c2 in 0.0f64..2.0, i0 in 0.5f64..5.0) {
        let p = RiccatiParams::new(c1, c2, i0).unwrap();
        prop_assume!(p.margin() > 1e-3);
        let ts = blowup_time(&p).unwrap();
        for k in 1..20 {
            let t = ts * k as f64 / 25.0;
            let h = 1e-6 * ts;
            let d = (riccati_j(&p, t + h).unwrap() - riccati_j(&p, t - h).unwrap()) / (2.0 * h);
            let j = riccati_j(&p, t).unwrap();
            prop_assert!((d - (c1 * j * j - c2)).abs() <= 1e-5 * (1.0 + j * j));
        }
    }
}

#[test]
fn riccati_limits() {
    let p = RiccatiParams::new(1.0, 1.0, 2.0).unwrap();
    assert!((blowup_time(&p).unwrap() - 0.5 * 3f64.ln()).abs() < 1e-12);
    assert!((riccati_j(&p, 0.0).unwrap() - 2.0).abs() < 1e-12);
    let (c1, i0) = (0.3, 1.7);
    let limit = 1.0 / (c1 * i0);
    let tiny = blowup_time(&RiccatiParams::new(c1, 1e-14, i0).unwrap()).unwrap();
    assert!((tiny - limit).abs() < 1e-6 * limit);
    assert_eq!(
        blowup_time(&RiccatiParams::new(c1, 0.0, i0).unwrap()).unwrap(),
        limit
    );
}

#[test]
fn c1_formula_exact() {
    for n in 1..=3 {
        for k in 1..=9 {
            let kappa = k as f64 / 10.0;
            assert_eq!(
                riccati_c1(n, kappa).unwrap(),
                kappa / 2f64.powi(n as i32 + 1)
            );
        }
    }
}
