//! Crank–Nicolson propagation of the 2D radial Schrödinger equation.
//!
//! The radial function is stored in reduced form u = √r·R at cell centres
//! r_i = (i + ½)·dr, i = 0..n−1, with R = 0 beyond r_max = n·dr. In this
//! variable the Hamiltonian is −(ħ²/2m)∂²_r + V_eff with
//!
//! V_eff(r) = ħ²(l_z² − ¼)/(2m r²) − γ/r².
//!
//! The kinetic part is discretized as a flux balance of (1/r)∂_r(r ∂_r R)
//! over the annular cells and then symmetrized, so the −¼ term is carried
//! by the face weights rather than sampled at the nodes. Sampling it
//! directly converges poorly for l_z = 0, where R(0) ≠ 0.
//!
//! Nothing here uses the analytic moment law; [`propagate_and_verify`]
//! compares against it from the outside.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::constants::UnitSystem;
use crate::error::{ensure, Error, Result};
use crate::moments::EvolutionCurve;
use crate::profile::RadialProfile;
use crate::tridiag::TridiagonalLu;
use crate::trial::TrialState;

pub const DEFAULT_POINTS: usize = 4096;
pub const MIN_POINTS: usize = 256;
/// Default time step in units of m/(ħβ).
pub const DEFAULT_DT_FACTOR: f64 = 2e-4;
pub const DEFAULT_RECORD_EVERY: usize = 10;
/// Probability allowed in the outer 5% of the grid before the comparison stops.
pub const LEAKAGE_LIMIT: f64 = 1e-6;
/// ⟨r²⟩ must stay above (ORIGIN_CELLS·dr)² for the grid to resolve the state.
pub const ORIGIN_CELLS: f64 = 10.0;

/// Conditions that close the validity window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowLimits {
    /// Largest probability allowed in the outer 5% of the grid.
    pub leakage: f64,
    /// ⟨r²⟩ must stay above (origin_cells·dr)².
    pub origin_cells: f64,
}

impl Default for WindowLimits {
    fn default() -> Self {
        WindowLimits {
            leakage: LEAKAGE_LIMIT,
            origin_cells: ORIGIN_CELLS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub n: usize,
    pub dr: f64,
    pub dt: f64,
}

impl GridSpec {
    pub fn new(n: usize, r_max: f64, dt: f64) -> Result<GridSpec> {
        ensure(n >= MIN_POINTS, || format!("grid needs n >= {MIN_POINTS} points, got {n}"))?;
        ensure(r_max > 0.0 && r_max.is_finite(), || format!("r_max must be > 0, got {r_max}"))?;
        ensure(dt > 0.0 && dt.is_finite(), || format!("dt must be > 0, got {dt}"))?;
        Ok(GridSpec {
            n,
            dr: r_max / n as f64,
            dt,
        })
    }

    /// n = 4096, r_max = 12/√β, dt = 2·10⁻⁴ m/(ħβ).
    pub fn for_trial(ts: &TrialState, mass: f64, units: UnitSystem) -> Result<GridSpec> {
        ts.validate()?;
        let time_unit = mass / (units.hbar() * ts.beta);
        GridSpec::new(DEFAULT_POINTS, 12.0 / ts.beta.sqrt(), DEFAULT_DT_FACTOR * time_unit)
    }

    /// Twice the points and half the time step over the same radius.
    pub fn refined(&self) -> GridSpec {
        GridSpec {
            n: 2 * self.n,
            dr: 0.5 * self.dr,
            dt: 0.5 * self.dt,
        }
    }

    pub fn r_max(&self) -> f64 {
        self.n as f64 * self.dr
    }

    /// Radius of node `i`, the centre of cell [i·dr, (i+1)·dr].
    pub fn r(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.dr
    }
}

/// Initial condition for [`discretize`].
#[derive(Debug, Clone, Copy)]
pub enum InitialState<'a> {
    /// ψ_s multiplied by e^{i·chirp·r²}.
    Trial { state: TrialState, chirp: f64 },
    /// A sampled profile, interpolated onto the propagation grid.
    Profile(&'a RadialProfile),
}

impl InitialState<'_> {
    pub fn trial(state: TrialState) -> InitialState<'static> {
        InitialState::Trial { state, chirp: 0.0 }
    }
}

#[derive(Debug, Clone)]
pub struct RadialGridState {
    pub grid: GridSpec,
    /// u at cell centres.
    pub u: Vec<Complex64>,
    pub l_z: i32,
    pub gamma: f64,
    pub mass: f64,
    pub hbar: f64,
    pub t: f64,
}

impl RadialGridState {
    /// Centrifugal and coupling terms; the −¼ part lives in the kinetic stencil.
    fn potential(&self, r: f64) -> f64 {
        let lz = f64::from(self.l_z);
        (self.hbar * self.hbar * lz * lz / (2.0 * self.mass) - self.gamma) / (r * r)
    }

    /// Diagonal and off-diagonal of the symmetric grid Hamiltonian.
    fn hamiltonian(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.u.len();
        let k = self.hbar * self.hbar / (2.0 * self.mass * self.grid.dr * self.grid.dr);
        // faces j·dr and (j+1)·dr over centre (j+½)·dr sum to exactly 2
        let diag = (0..n).map(|j| 2.0 * k + self.potential(self.grid.r(j))).collect();
        let off = (0..n.saturating_sub(1))
            .map(|j| {
                let (a, b) = (j as f64 + 0.5, j as f64 + 1.5);
                -k * (j as f64 + 1.0) / (a * b).sqrt()
            })
            .collect();
        (diag, off)
    }

    /// Probability in the outermost 5% of the grid.
    pub fn leakage(&self) -> f64 {
        let n = self.u.len();
        let start = n - (self.grid.n.div_ceil(20)).min(n);
        self.u[start..].iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.dr
    }
}

fn resolution_error(reason: String, r2: f64) -> Error {
    let width = r2.max(0.0).sqrt();
    let r_max = 8.5 * width;
    Error::Grid {
        reason,
        suggested_n: DEFAULT_POINTS.max((r_max / (width / 60.0)).ceil() as usize),
        suggested_r_max: r_max,
    }
}

/// Samples an initial state onto the grid as u = √r·R and normalizes it.
pub fn discretize(
    initial: InitialState<'_>,
    grid: GridSpec,
    gamma: f64,
    mass: f64,
    units: UnitSystem,
) -> Result<RadialGridState> {
    ensure(mass > 0.0 && mass.is_finite(), || format!("mass must be > 0, got {mass}"))?;
    ensure(gamma.is_finite(), || "coupling must be finite".to_string())?;
    let (r2, l_z, sample): (f64, i32, Box<dyn Fn(f64) -> Complex64 + '_>) = match initial {
        InitialState::Trial { state, chirp } => {
            state.validate()?;
            (
                (state.s + 1.0) / state.beta,
                state.l_z,
                Box::new(move |r| Complex64::from_polar(state.radial(r), chirp * r * r)),
            )
        }
        InitialState::Profile(p) => {
            let ints = p.integrals()?;
            (ints.r2 / ints.norm, p.l_z(), Box::new(move |r| interpolate(p, r)))
        }
    };
    let lo = (ORIGIN_CELLS * grid.dr).powi(2);
    let hi = (grid.r_max() / 6.0).powi(2);
    if !(lo..=hi).contains(&r2) {
        return Err(resolution_error(
            format!("<r^2> = {r2:e} outside resolvable range [{lo:e}, {hi:e}]"),
            r2,
        ));
    }
    let mut u: Vec<Complex64> = (0..grid.n)
        .map(|i| {
            let r = grid.r(i);
            sample(r) * r.sqrt()
        })
        .collect();
    let norm = u.iter().map(|v| v.norm_sqr()).sum::<f64>() * grid.dr;
    ensure(norm > 0.0 && norm.is_finite(), || "initial state has zero norm on the grid".to_string())?;
    let scale = norm.sqrt().recip();
    u.iter_mut().for_each(|v| *v *= scale);
    Ok(RadialGridState {
        grid,
        u,
        l_z,
        gamma,
        mass,
        hbar: units.hbar(),
        t: 0.0,
    })
}

/// Cubic Lagrange interpolation of a profile; zero outside its grid.
fn interpolate(p: &RadialProfile, r: f64) -> Complex64 {
    let h = p.dr();
    let n = p.len();
    let x = r / h - 1.0;
    if x < -1.0 || x > (n - 1) as f64 {
        return Complex64::new(0.0, 0.0);
    }
    let v = p.values();
    // nodes at index -1 (r = 0, R = 0 by the vanishing-origin requirement) .. n-1
    let at = |k: isize| -> Complex64 {
        if k < 0 {
            Complex64::new(0.0, 0.0)
        } else {
            v[k as usize]
        }
    };
    let base = (x.floor() as isize - 1).clamp(-1, n as isize - 4);
    let mut out = Complex64::new(0.0, 0.0);
    for j in 0..4 {
        let xj = (base + j) as f64;
        let mut w = 1.0;
        for k in 0..4 {
            if k != j {
                w *= (x - (base + k) as f64) / (xj - (base + k) as f64);
            }
        }
        out += at(base + j) * w;
    }
    out
}

/// Factored Crank–Nicolson propagator for one state's Hamiltonian.
#[derive(Debug, Clone)]
pub struct Propagator {
    lu: TridiagonalLu,
    /// diagonal and off-diagonal of (1 − i·dt·H/2ħ)
    explicit_diag: Vec<Complex64>,
    explicit_off: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl Propagator {
    pub fn new(state: &RadialGridState) -> Result<Propagator> {
        let n = state.u.len();
        let (h_diag, h_off) = state.hamiltonian();
        let tau = state.grid.dt / (2.0 * state.hbar);
        let i = Complex64::i();
        let implicit_off: Vec<Complex64> = h_off.iter().map(|&o| i * tau * o).collect();
        let implicit_diag: Vec<Complex64> = h_diag.iter().map(|&d| 1.0 + i * tau * d).collect();
        let lu = TridiagonalLu::factor(&implicit_off, &implicit_diag, &implicit_off)?;
        Ok(Propagator {
            lu,
            explicit_diag: h_diag.iter().map(|&d| 1.0 - i * tau * d).collect(),
            explicit_off: implicit_off.iter().map(|&o| -o).collect(),
            scratch: vec![Complex64::new(0.0, 0.0); n],
        })
    }

    /// Advances `state` by one time step in place.
    pub fn step(&mut self, state: &mut RadialGridState) -> Result<()> {
        let u = &state.u;
        let n = u.len();
        let rhs = &mut self.scratch;
        for j in 0..n {
            let mut acc = self.explicit_diag[j] * u[j];
            if j > 0 {
                acc += self.explicit_off[j - 1] * u[j - 1];
            }
            if j + 1 < n {
                acc += self.explicit_off[j] * u[j + 1];
            }
            rhs[j] = acc;
        }
        self.lu.solve_in_place(rhs);
        if rhs.iter().any(|v| !v.is_finite()) {
            return Err(Error::Propagation(format!(
                "non-finite amplitude after step at t = {:e}",
                state.t
            )));
        }
        std::mem::swap(&mut state.u, &mut self.scratch);
        state.t += state.grid.dt;
        Ok(())
    }
}

/// One Crank–Nicolson step. Refactors the system on every call; use a
/// [`Propagator`] for repeated steps.
pub fn step(state: &RadialGridState) -> Result<RadialGridState> {
    let mut next = state.clone();
    Propagator::new(state)?.step(&mut next)?;
    Ok(next)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Observables {
    pub t: f64,
    pub norm: f64,
    pub r2: f64,
    /// ⟨r·p + p·r⟩
    pub d: f64,
    pub energy: f64,
    pub kinetic: f64,
}

pub fn observables(state: &RadialGridState) -> Observables {
    let grid = &state.grid;
    let dr = grid.dr;
    let u = &state.u;
    let (diag, off) = state.hamiltonian();
    let mut norm = 0.0;
    let mut r2 = 0.0;
    let mut inv_r2 = 0.0;
    let mut energy = 0.0;
    for (j, v) in u.iter().enumerate() {
        let r = grid.r(j);
        let p = v.norm_sqr();
        norm += p;
        r2 += r * r * p;
        inv_r2 += p / (r * r);
        energy += diag[j] * p;
    }
    let mut dil = 0.0;
    for (j, w) in u.windows(2).enumerate() {
        energy += 2.0 * off[j] * (w[0].conj() * w[1]).re;
        // Im(R*_j R_{j+1}) weighted by the squared face radius
        let face = (j + 1) as f64 * dr;
        dil += (w[0].conj() * w[1]).im * face * face / (grid.r(j) * grid.r(j + 1)).sqrt();
    }
    Observables {
        t: state.t,
        norm: norm * dr,
        r2: r2 * dr,
        d: 2.0 * state.hbar * dil,
        energy: energy * dr,
        // gradient-form ⟨T⟩ including the centrifugal term
        kinetic: (energy + state.gamma * inv_r2) * dr,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryRecord {
    pub t: f64,
    pub norm: f64,
    pub r2_numeric: f64,
    pub r2_analytic: f64,
    pub d: f64,
    pub energy: f64,
    pub rel_dev: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub grid: GridSpec,
    pub gamma: f64,
    pub mass: f64,
    pub hbar: f64,
    pub l_z: i32,
    pub records: Vec<TrajectoryRecord>,
    /// End of the window in which the grid faithfully represents the state.
    pub t_valid: f64,
    /// Quadratic built from the initial observables.
    pub analytic: EvolutionCurve,
}

impl Trajectory {
    /// Records with t ≤ t_valid.
    pub fn valid_records(&self) -> impl Iterator<Item = &TrajectoryRecord> {
        self.records.iter().filter(move |r| r.t <= self.t_valid)
    }

    /// Largest |r2_numeric − r2_analytic| / r2(0) over t ≤ `t_end`.
    pub fn max_rel_dev_until(&self, t_end: f64) -> f64 {
        self.records
            .iter()
            .filter(|r| r.t <= t_end)
            .map(|r| r.rel_dev)
            .fold(0.0, f64::max)
    }

    /// CSV with `#` metadata lines and a header row.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let g = &self.grid;
        let _ = writeln!(out, "# centrefall trajectory v1");
        let _ = writeln!(
            out,
            "# grid: n={} dr={:.8e} r_max={:.8e} dt={:.8e}",
            g.n,
            g.dr,
            g.r_max(),
            g.dt
        );
        let _ = writeln!(
            out,
            "# gamma={:.8e} mass={:.8e} hbar={:.8e} l_z={}",
            self.gamma, self.mass, self.hbar, self.l_z
        );
        let _ = writeln!(
            out,
            "# analytic: r2(t) = {:.8e} + {:.8e} t + {:.8e} t^2",
            self.analytic.a, self.analytic.b, self.analytic.c
        );
        let _ = writeln!(out, "# t_valid={:.8e}", self.t_valid);
        out.push_str("t,norm,r2_numeric,r2_analytic,d,energy,rel_dev\n");
        for r in &self.records {
            let _ = writeln!(
                out,
                "{:.8e},{:.8e},{:.8e},{:.8e},{:.8e},{:.8e},{:.8e}",
                r.t, r.norm, r.r2_numeric, r.r2_analytic, r.d, r.energy, r.rel_dev
            );
        }
        out
    }
}

/// Result of [`propagate_and_verify`].
#[derive(Debug, Clone)]
pub struct Verification {
    pub trajectory: Trajectory,
    /// max |r2_numeric − r2_analytic| / r2(0) over the validity window.
    pub max_rel_dev: f64,
}

/// Propagates to `t_max`, recording every `record_every` steps, and compares
/// ⟨r²⟩ against the quadratic built from the initial observables.
///
/// Propagation stops at the first record where the outer 5% of the grid
/// holds more than [`LEAKAGE_LIMIT`] probability or ⟨r²⟩ drops below
/// (10·dr)²; the window closes at the record before it.
pub fn propagate_and_verify(
    initial: &RadialGridState,
    t_max: f64,
    record_every: usize,
) -> Result<Verification> {
    propagate_and_verify_with(initial, t_max, record_every, WindowLimits::default())
}

/// [`propagate_and_verify`] with explicit window limits.
pub fn propagate_and_verify_with(
    initial: &RadialGridState,
    t_max: f64,
    record_every: usize,
    limits: WindowLimits,
) -> Result<Verification> {
    ensure(t_max > 0.0 && t_max.is_finite(), || format!("t_max must be > 0, got {t_max}"))?;
    ensure(limits.leakage > 0.0 && limits.origin_cells >= 0.0, || {
        "leakage limit must be > 0 and origin cells >= 0".to_string()
    })?;
    ensure(record_every > 0, || "record interval must be >= 1 step".to_string())?;
    let obs0 = observables(initial);
    let analytic = EvolutionCurve {
        a: obs0.r2,
        b: obs0.d / initial.mass,
        c: 2.0 * obs0.energy / initial.mass,
    };
    let record = |o: &Observables| {
        let r2_analytic = analytic.r2_at(o.t);
        TrajectoryRecord {
            t: o.t,
            norm: o.norm,
            r2_numeric: o.r2,
            r2_analytic,
            d: o.d,
            energy: o.energy,
            rel_dev: (o.r2 - r2_analytic).abs() / obs0.r2,
        }
    };
    let r2_floor = (limits.origin_cells * initial.grid.dr).powi(2);
    let valid = |s: &RadialGridState, o: &Observables| s.leakage() <= limits.leakage && o.r2 >= r2_floor;

    let mut records = vec![record(&obs0)];
    let mut t_valid = if valid(initial, &obs0) { 0.0 } else { -1.0 };
    let mut state = initial.clone();
    let mut prop = Propagator::new(&state)?;
    let steps = (t_max / state.grid.dt).round().max(1.0) as usize;
    if t_valid >= 0.0 {
        for k in 1..=steps {
            prop.step(&mut state)?;
            if k % record_every == 0 || k == steps {
                let o = observables(&state);
                records.push(record(&o));
                if !valid(&state, &o) {
                    break;
                }
                t_valid = o.t;
            }
        }
    }
    if t_valid <= 0.0 {
        return Err(resolution_error(
            "validity window is empty: the state leaks to the outer boundary or collapses below 10 grid cells immediately".into(),
            obs0.r2,
        ));
    }
    let trajectory = Trajectory {
        grid: initial.grid,
        gamma: initial.gamma,
        mass: initial.mass,
        hbar: initial.hbar,
        l_z: initial.l_z,
        records,
        t_valid,
        analytic,
    };
    let max_rel_dev = trajectory.max_rel_dev_until(t_valid);
    Ok(Verification {
        trajectory,
        max_rel_dev,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const N: UnitSystem = UnitSystem::Natural;

    fn s1_state(gamma: f64) -> RadialGridState {
        let ts = TrialState::new(1.0, 1.0, 0).unwrap();
        discretize(InitialState::trial(ts), GridSpec::for_trial(&ts, 1.0, N).unwrap(), gamma, 1.0, N)
            .unwrap()
    }

    #[test]
    fn discretized_trial_state() {
        let st = s1_state(0.0);
        let o = observables(&st);
        assert!((o.norm - 1.0).abs() < 1e-10);
        assert!((o.r2 - 2.0).abs() / 2.0 < 1e-4, "{}", o.r2);
        assert!((o.energy - 0.5).abs() / 0.5 < 1e-3, "{}", o.energy);
        assert_eq!(o.d, 0.0);
        let at_critical = observables(&s1_state(0.5));
        assert!(at_critical.energy.abs() < 1e-4 * 0.5, "{}", at_critical.energy);
    }

    #[test]
    fn resolution_is_checked() {
        let ts = TrialState::new(1.0, 1.0, 0).unwrap();
        let tiny = GridSpec::new(4096, 3.0, 1e-3).unwrap();
        let err = discretize(InitialState::trial(ts), tiny, 0.0, 1.0, N).unwrap_err();
        assert!(matches!(err, Error::Grid { .. }));
        let coarse = GridSpec::new(256, 200.0, 1e-3).unwrap();
        assert!(discretize(InitialState::trial(ts), coarse, 0.0, 1.0, N).is_err());
        assert!(GridSpec::new(100, 10.0, 1e-3).is_err());
    }

    #[test]
    fn single_step_is_unitary() {
        let st = s1_state(1.0);
        let next = step(&st).unwrap();
        let (a, b) = (observables(&st).norm, observables(&next).norm);
        assert!((a - b).abs() < 1e-12);
        assert!((next.t - st.grid.dt).abs() < 1e-18);
    }

    #[test]
    fn chirp_sets_dilation() {
        let ts = TrialState::new(1.0, 1.0, 0).unwrap();
        let grid = GridSpec::for_trial(&ts, 1.0, N).unwrap();
        let st = discretize(InitialState::Trial { state: ts, chirp: -0.1 }, grid, 0.0, 1.0, N).unwrap();
        let d = observables(&st).d;
        assert!((d - 4.0 * -0.1 * 2.0).abs() < 1e-3, "{d}");
    }

    #[test]
    fn profile_initial_state_matches_trial() {
        let ts = TrialState::new(2.0, 1.0, 0).unwrap();
        let grid = GridSpec::for_trial(&ts, 1.0, N).unwrap();
        let profile = RadialProfile::from_trial(&ts, 6000, 12.0).unwrap();
        let a = observables(&discretize(InitialState::Profile(&profile), grid, 0.3, 1.0, N).unwrap());
        let b = observables(&discretize(InitialState::trial(ts), grid, 0.3, 1.0, N).unwrap());
        assert!((a.r2 - b.r2).abs() < 1e-6);
        assert!((a.energy - b.energy).abs() < 1e-5);
    }

    #[test]
    fn csv_has_header_and_metadata() {
        let v = propagate_and_verify(&s1_state(0.0), 0.05, 10).unwrap();
        let csv = v.trajectory.to_csv();
        assert!(csv.starts_with("# centrefall trajectory v1\n"));
        assert!(csv.contains("\nt,norm,r2_numeric,r2_analytic,d,energy,rel_dev\n"));
        let rows = csv.lines().filter(|l| !l.starts_with('#')).count();
        assert_eq!(rows, v.trajectory.records.len() + 1);
    }
}
