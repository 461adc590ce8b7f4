use centrefall::tdse::*;
use centrefall::*;

const N: UnitSystem = UnitSystem::Natural;

fn state(s: f64, lz: i32, gamma: f64, chirp: f64, refine: bool) -> RadialGridState {
    let ts = TrialState::new(s, 1.0, lz).unwrap();
    let mut grid = GridSpec::for_trial(&ts, 1.0, N).unwrap();
    if refine {
        grid = grid.refined();
    }
    discretize(InitialState::Trial { state: ts, chirp }, grid, gamma, 1.0, N).unwrap()
}

fn dev_at(st: &RadialGridState, t: f64, every: usize) -> f64 {
    let v = propagate_and_verify(st, t, every).unwrap();
    assert!(v.trajectory.t_valid >= t * (1.0 - 1e-9), "window closed at {}", v.trajectory.t_valid);
    v.trajectory.records.last().unwrap().rel_dev
}

#[test]
fn long_run_conserves_norm_and_energy() {
    let mut st = state(1.0, 0, 1.0, 0.0, false);
    let o0 = observables(&st);
    let mut prop = Propagator::new(&st).unwrap();
    let mut worst_step = 0.0f64;
    let mut last = o0.norm;
    for _ in 0..10_000 {
        prop.step(&mut st).unwrap();
        let n = st.u.iter().map(|v| v.norm_sqr()).sum::<f64>() * st.grid.dr;
        worst_step = worst_step.max((n - last).abs());
        last = n;
    }
    let o = observables(&st);
    assert!(worst_step < 1e-12, "{worst_step:e}");
    assert!((o.norm - o0.norm).abs() < 1e-9, "{:e}", o.norm - o0.norm);
    assert!((o.energy - o0.energy).abs() < 1e-6 * o0.energy.abs(), "{} vs {}", o.energy, o0.energy);
    assert!((st.t - 10_000.0 * st.grid.dt).abs() < 1e-9);
}

#[test]
fn real_states_carry_no_dilation() {
    for (s, lz, g) in [(1.0, 0, 0.0), (0.5, 0, 1.0), (2.0, 3, 0.7)] {
        assert_eq!(observables(&state(s, lz, g, 0.0, false)).d, 0.0);
    }
    let chirped = observables(&state(1.0, 0, 0.0, 0.1, false));
    // a chirp e^{ikr²} gives d = 4ħk⟨r²⟩
    assert!((chirped.d - 0.4 * chirped.r2).abs() < 1e-3 * chirped.d);
}

fn run(mut st: RadialGridState, steps: usize) -> (f64, Vec<Observables>) {
    let mut prop = Propagator::new(&st).unwrap();
    let mut obs = vec![observables(&st)];
    for _ in 0..steps {
        prop.step(&mut st).unwrap();
        obs.push(observables(&st));
    }
    (st.grid.dt, obs)
}

/// Central differences of ⟨r²⟩ around record `k` against d/m and 4⟨H⟩/m.
fn ehrenfest_errors(dt: f64, obs: &[Observables], k: usize) -> (f64, f64) {
    let (a, b, c) = (&obs[k - 1], &obs[k], &obs[k + 1]);
    let first = (c.r2 - a.r2) / (2.0 * dt);
    let second = (c.r2 - 2.0 * b.r2 + a.r2) / (dt * dt);
    (
        (first - b.d).abs() / b.d.abs(),
        (second - 4.0 * b.energy).abs() / (4.0 * b.energy).abs(),
    )
}

#[test]
fn ehrenfest_chain_at_the_start() {
    let (dt, obs) = run(state(1.0, 0, 1.0, 0.1, false), 2);
    let (e1, e2) = ehrenfest_errors(dt, &obs, 1);
    assert!(e1 < 1e-3, "{e1:e}");
    assert!(e2 < 1e-2, "{e2:e}");
}

#[test]
fn ehrenfest_chain_holds_along_a_subcritical_run() {
    let (dt, obs) = run(state(2.0, 2, 1.5, 0.1, false), 400);
    for k in [1, 100, 200, 399] {
        let (e1, e2) = ehrenfest_errors(dt, &obs, k);
        assert!(e1 < 1e-3 && e2 < 1e-2, "t={} {e1:e} {e2:e}", obs[k].t);
    }
}

#[test]
fn free_particle_follows_the_law() {
    let v = propagate_and_verify(&state(1.0, 0, 0.0, 0.0, false), 0.5, 10).unwrap();
    assert!(v.trajectory.t_valid >= 0.5 - 1e-9);
    assert!(v.max_rel_dev < 1e-2, "{:e}", v.max_rel_dev);
}

#[test]
fn subcritical_coupling_converges_to_the_law() {
    // l_z = 2 keeps ħ²l²/2m − γ = 0.5 > 0: the operator is well behaved
    let coarse = dev_at(&state(2.0, 2, 1.5, 0.0, false), 0.5, 10);
    let fine = dev_at(&state(2.0, 2, 1.5, 0.0, true), 0.5, 20);
    assert!(coarse < 1e-4, "{coarse:e}");
    assert!(coarse / fine >= 2.0, "{coarse:e} -> {fine:e}");
}

#[test]
fn window_closes_on_leakage() {
    let st = state(1.0, 0, 0.0, 0.0, false);
    let tight = WindowLimits { leakage: 1e-6, origin_cells: 1e3 };
    assert!(propagate_and_verify_with(&st, 0.5, 10, tight).is_err());
    let v = propagate_and_verify(&st, 40.0, 50).unwrap();
    assert!(v.trajectory.t_valid < 40.0);
    assert!(v.trajectory.records.len() > v.trajectory.valid_records().count());
}

/// Least-squares curvature of r² = a + b·t + c·t².
fn fitted_curvature(points: &[(f64, f64)]) -> f64 {
    let mut m = [[0.0; 3]; 3];
    let mut v = [0.0; 3];
    for &(t, y) in points {
        let basis = [1.0, t, t * t];
        for i in 0..3 {
            v[i] += basis[i] * y;
            for j in 0..3 {
                m[i][j] += basis[i] * basis[j];
            }
        }
    }
    let det = |a: [[f64; 3]; 3]| {
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    };
    let mut mc = m;
    for i in 0..3 {
        mc[i][2] = v[i];
    }
    det(mc) / det(m)
}

#[test]
fn curvature_sign_follows_the_threshold() {
    let gc = 0.5;
    for gamma in [0.8 * gc, 1.2 * gc] {
        let v = propagate_and_verify(&state(1.0, 0, gamma, 0.0, false), 2.0, 10).unwrap();
        let pts: Vec<(f64, f64)> = v.trajectory.valid_records().map(|r| (r.t, r.r2_numeric)).collect();
        let c = fitted_curvature(&pts);
        assert_eq!(c.signum(), (gc - gamma).signum(), "gamma = {gamma}: fitted curvature {c}");
    }
}
