use centrefall::moments::classical_r2;
use centrefall::*;
use proptest::prelude::*;

fn state(a: f64, d: f64, e: f64, m: f64) -> MomentState {
    MomentState::new(a, d, e, m).unwrap()
}

/// A state with prescribed shape (eps, sign of H) and physical scales.
fn shaped(eps: f64, sign: i8, r2_0: f64, mass: f64, t0: f64) -> MomentState {
    let energy = f64::from(sign) * mass * r2_0 / (2.0 * t0 * t0);
    let d = if sign == 0 {
        eps * mass * r2_0 / t0
    } else {
        eps * (2.0 * mass * energy.abs() * r2_0).sqrt()
    };
    state(r2_0, d, energy, mass)
}

fn scales() -> impl Strategy<Value = (f64, f64, f64)> {
    (-20.0f64..2.0, -30.0f64..1.0, -6.0f64..6.0).prop_map(|(a, m, t)| (10f64.powf(a), 10f64.powf(m), 10f64.powf(t)))
}

#[test]
fn curve_coefficients() {
    let c = curve_from_state(&state(2.0, -3.0, 5.0, 4.0)).unwrap();
    assert_eq!((c.a, c.b, c.c), (2.0, -0.75, 2.5));
    assert_eq!(curve_from_state(&state(1.0, 0.0, 0.0, 1.0)).unwrap().c, 0.0);
    assert!(MomentState::new(0.0, 0.0, 1.0, 1.0).is_err());
    assert!(MomentState::new(1.0, 0.0, 1.0, 0.0).is_err());
    assert!(MomentState::new(1.0, f64::NAN, 1.0, 1.0).is_err());
}

#[test]
fn grazing_contact_falls() {
    // b² = 4ac exactly: the parabola touches zero at t = 1
    let fate = classify_fate(&EvolutionCurve { a: 1.0, b: -2.0, c: 1.0 });
    assert_eq!(fate, Fate::FallsAt { t_f: 1.0 });
    let st = state(1.0, -2.0, 0.5, 1.0);
    assert!(st.r2_0 <= st.d_0 * st.d_0 / (8.0 * st.mass * st.energy.abs()));
}

#[test]
fn zero_energy_and_zero_dilation() {
    assert_eq!(classify_fate(&curve_from_state(&state(1.0, 0.0, 0.0, 1.0)).unwrap()), Fate::QuasiStationary);
    assert_eq!(classify_fate(&curve_from_state(&state(1.0, -0.5, 0.0, 1.0)).unwrap()), Fate::FallsAt { t_f: 2.0 });
    assert_eq!(classify_fate(&curve_from_state(&state(1.0, 0.5, 0.0, 1.0)).unwrap()), Fate::Escapes);
    assert!(normalized_curve(&state(1.0, 0.0, 0.0, 1.0)).is_err());
}

#[test]
fn classical_radial_law_has_the_same_shape() {
    // r² of a classical orbit in −γ/r² is quadratic with curvature 2E/m
    let (r0, v0, e, m) = (2.0, -0.3, -0.4, 1.5);
    let moments = curve_from_state(&state(r0 * r0, 2.0 * m * r0 * v0, e, m)).unwrap();
    for k in 0..20 {
        let t = 0.1 * k as f64;
        let r2 = classical_r2(r0, v0, e, m, t).unwrap();
        assert!((r2 - moments.r2_at(t)).abs() < 1e-12 * (1.0 + r2.abs()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn reversing_the_dilation_mirrors_time(eps in -4.0f64..4.0, sign in -1i8..=1, (r2_0, m, t0) in scales(), t in 0.0f64..3.0) {
        let fwd = curve_from_state(&shaped(eps, sign, r2_0, m, t0)).unwrap();
        let back = curve_from_state(&shaped(-eps, sign, r2_0, m, t0)).unwrap();
        let tt = t * t0;
        let (x, y) = (fwd.r2_at(tt), back.r2_at(-tt));
        prop_assert!((x - y).abs() <= 1e-12 * (r2_0 + x.abs()));
    }

    #[test]
    fn normalized_curve_reproduces_the_physical_one(eps in -4.0f64..4.0, sign in -1i8..=1, (r2_0, m, t0) in scales(), tau in 0.0f64..4.0) {
        let st = shaped(eps, sign, r2_0, m, t0);
        prop_assume!(sign != 0 || eps != 0.0);
        let n = normalized_curve(&st).unwrap();
        prop_assert_eq!(n.quad_sign, sign);
        // with H = 0 the dilation sets the time unit and ε = ±1
        let (t0, eps) = if sign == 0 { (t0 / eps.abs(), eps.signum()) } else { (t0, eps) };
        prop_assert!((n.t0 - t0).abs() <= 1e-12 * t0);
        prop_assert!((n.eps - eps).abs() <= 1e-12 * (1.0 + eps.abs()));
        let c = curve_from_state(&st).unwrap();
        let y = c.r2_at(tau * n.t0) / r2_0;
        prop_assert!((y - n.y_at(tau)).abs() <= 1e-11 * (1.0 + y.abs()));
    }

    #[test]
    fn fate_is_invariant_under_rescaling(eps in -4.0f64..4.0, sign in -1i8..=1, (r2_0, m, t0) in scales(), k in -5.0f64..5.0) {
        let lambda = 10f64.powf(k);
        let small = classify_fate(&curve_from_state(&shaped(eps, sign, r2_0, m, t0)).unwrap());
        let big = classify_fate(&curve_from_state(&shaped(eps, sign, r2_0, m, t0 * lambda)).unwrap());
        match (small, big) {
            (Fate::FallsAt { t_f: a }, Fate::FallsAt { t_f: b }) => prop_assert!((b / a - lambda).abs() <= 1e-9 * lambda),
            (a, b) => prop_assert_eq!(a, b),
        }
    }

    #[test]
    fn symmetric_falling_time_agrees_with_the_classifier(a in 1e-12f64..1e3, e in -1e3f64..-1e-12, m in 1e-6f64..1e6) {
        let closed = falling_time_symmetric(a, e, m).unwrap();
        let fate = classify_fate(&curve_from_state(&state(a, 0.0, e, m)).unwrap());
        let t_f = fate.falling_time().unwrap();
        prop_assert!((closed - t_f).abs() <= 1e-12 * closed);
    }
}
