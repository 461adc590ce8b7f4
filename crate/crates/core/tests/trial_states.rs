use centrefall::trial::{critical_coupling, min_critical_coupling, quadrature_moments, quasi_stationary_exponent, trial_moments};
use centrefall::*;
use proptest::prelude::*;

const N: UnitSystem = UnitSystem::Natural;

/// ∫₀^∞ r^(2s+1+2j) e^(−βr²) dr by composite Simpson after r = y⁴, which
/// leaves a smooth integrand for every s ≥ ½ and j ≥ −1.
fn gaussian_moment(s: f64, beta: f64, j: f64) -> f64 {
    let p = 2.0 * s + 1.0 + 2.0 * j;
    let y_max = (40.0 / beta).sqrt().powf(0.25);
    let n = 20_000;
    let h = y_max / n as f64;
    let f = |y: f64| {
        if y == 0.0 {
            return 0.0;
        }
        let r = y.powi(4);
        r.powf(p) * (-beta * r * r).exp() * 4.0 * y.powi(3)
    };
    let mut acc = f(0.0) + f(y_max);
    for k in 1..n {
        acc += f(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

/// Moments of ψ_s (l_z = 0, natural units) from the brute-force integrals.
/// ⟨T⟩ uses |R'|² with R' = (s/r − βr)R.
fn brute(s: f64, beta: f64) -> (f64, f64, f64) {
    let norm = gaussian_moment(s, beta, 0.0);
    let r2 = gaussian_moment(s, beta, 1.0) / norm;
    let inv = gaussian_moment(s, beta, -1.0) / norm;
    let grad = (s * s * gaussian_moment(s, beta, -1.0) - 2.0 * s * beta * norm + beta * beta * gaussian_moment(s, beta, 1.0)) / norm;
    (r2, inv, 0.5 * grad)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn closed_forms_match_brute_force_integrals() {
    for s in [0.5, 1.0, 2.0, 5.0] {
        for beta in [0.1, 1.0, 10.0] {
            let ts = TrialState::new(s, beta, 0).unwrap();
            let ms = trial_moments(&ts, 0.0, 1.0, N).unwrap();
            let (r2, inv, t) = brute(s, beta);
            assert!(rel(ms.r2, r2) < 1e-9, "r2 s={s} beta={beta}");
            assert!(rel(ms.inv_r2, inv) < 1e-9, "inv s={s} beta={beta}");
            assert!(rel(ms.kinetic, t) < 1e-9, "T s={s} beta={beta}: {} vs {t}", ms.kinetic);
        }
    }
}

#[test]
fn quadrature_matches_closed_forms() {
    for s in [0.5, 1.0, 2.0, 5.0] {
        for beta in [0.1, 1.0, 10.0] {
            let ts = TrialState::new(s, beta, 0).unwrap();
            let gamma = 0.3 * s / 2.0;
            let exact = trial_moments(&ts, gamma, 1.0, N).unwrap();
            let num = quadrature_moments(&RadialProfile::from_trial_default(&ts).unwrap(), gamma, 1.0, N).unwrap();
            for (name, a, b) in [
                ("r2", num.r2, exact.r2),
                ("inv_r2", num.inv_r2, exact.inv_r2),
                ("kinetic", num.kinetic, exact.kinetic),
                ("energy", num.energy, exact.energy),
            ] {
                assert!(rel(a, b) < 1e-8, "{name} s={s} beta={beta}: {a} vs {b}");
            }
            assert_eq!(num.d, 0.0);
        }
    }
}

#[test]
fn angular_momentum_adds_centrifugal_energy() {
    let ts = TrialState::new(2.0, 1.5, 3).unwrap();
    let exact = trial_moments(&ts, 0.0, 2.0, N).unwrap();
    assert!(rel(exact.kinetic, 1.5 / 4.0 * (1.0 + 9.0 / 2.0)) < 1e-15);
    let num = quadrature_moments(&RadialProfile::from_trial_default(&ts).unwrap(), 0.0, 2.0, N).unwrap();
    assert!(rel(num.kinetic, exact.kinetic) < 1e-8);
}

#[test]
fn chirped_profile_carries_dilation() {
    let ts = TrialState::new(1.0, 1.0, 0).unwrap();
    let k = -0.2;
    let p = RadialProfile::from_trial_default(&ts).unwrap().chirped(k);
    let ms = quadrature_moments(&p, 0.0, 1.0, N).unwrap();
    // d = 4ħk⟨r²⟩ and the kinetic energy gains 2ħ²k²⟨r²⟩/m
    assert!(rel(ms.d, 4.0 * k * 2.0) < 1e-8, "{}", ms.d);
    assert!(rel(ms.kinetic, 0.5 + 2.0 * k * k * 2.0) < 1e-8, "{}", ms.kinetic);
}

#[test]
fn critical_coupling_identities() {
    for s in [0.5, 1.0, 2.0, 5.0] {
        for beta in [0.1, 1.0, 10.0] {
            for units in [N, UnitSystem::Si] {
                let mass = if units == N { 1.0 } else { 1.16e-26 };
                let ts = TrialState::new(s, beta, 0).unwrap();
                let gamma_c = critical_coupling(&trial_moments(&ts, 0.0, mass, units).unwrap());
                let floor = min_critical_coupling(mass, units).unwrap();
                assert!(rel(gamma_c, 4.0 * s * floor) < 1e-12);
                let at_c = trial_moments(&ts, gamma_c, mass, units).unwrap();
                assert!(at_c.energy.abs() <= 1e-12 * at_c.kinetic);
            }
        }
    }
    // the zero-energy exponent is the inverse map
    for gamma in [0.1, 0.5, 2.0] {
        let s0 = quasi_stationary_exponent(gamma, 1.0, N).unwrap();
        let ts = TrialState::new(s0, 1.0, 0).unwrap();
        assert!(trial_moments(&ts, gamma, 1.0, N).unwrap().energy.abs() < 1e-15);
        let third = TrialState::new(s0 / 3.0, 1.0, 0).unwrap();
        assert!(trial_moments(&third, gamma, 1.0, N).unwrap().energy < 0.0);
    }
}

proptest! {
    #[test]
    fn width_rescaling_is_exact(s in 0.5f64..8.0, beta in 0.01f64..100.0, lambda in 0.1f64..10.0, gamma in 0.0f64..3.0) {
        let a = trial_moments(&TrialState::new(s, beta, 0).unwrap(), gamma, 1.0, N).unwrap();
        let b = trial_moments(&TrialState::new(s, beta * lambda, 0).unwrap(), gamma, 1.0, N).unwrap();
        prop_assert!(rel(b.r2 * lambda, a.r2) < 1e-14);
        prop_assert!(rel(b.inv_r2, a.inv_r2 * lambda) < 1e-14);
        prop_assert!((b.energy - a.energy * lambda).abs() <= 1e-13 * (a.kinetic * lambda));
        prop_assert!(rel(critical_coupling(&b), critical_coupling(&a)) < 1e-14);
    }

    #[test]
    fn energy_falls_with_coupling(s in 0.5f64..8.0, beta in 0.01f64..100.0, g1 in 0.0f64..5.0, dg in 1e-3f64..5.0) {
        let ts = TrialState::new(s, beta, 0).unwrap();
        let a = trial_moments(&ts, g1, 1.0, N).unwrap();
        let b = trial_moments(&ts, g1 + dg, 1.0, N).unwrap();
        prop_assert!(b.energy < a.energy);
        let sign = (critical_coupling(&a) - g1).signum();
        prop_assert!(a.energy == 0.0 || a.energy.signum() == sign);
    }
}
