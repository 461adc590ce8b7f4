use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use centrefall::constants::{parse_particles, BUILTIN_PARTICLES};
use centrefall::experiment::{
    chamber_falling_time, critical_charge, critical_voltage, proposal_report,
    scaled_critical_voltage_factor,
};
use centrefall::tdse::{
    discretize, propagate_and_verify_with, InitialState, Verification, DEFAULT_DT_FACTOR,
};
use centrefall::trial::{
    critical_coupling, min_critical_coupling, quadrature_moments, quasi_stationary_exponent,
    trial_moments,
};
use centrefall::{
    builtin_particle, classify_fate, curve_from_state, falling_time_symmetric, normalized_curve,
    Constants, Error, EvolutionCurve, Fate, GridSpec, MomentState, NormalizedCurve, Particle,
    RadialProfile, Result, ScalingPlan, TrialState, UnitSystem, WindowLimits, WireChamber,
    WireDrive,
};

use crate::args::*;
use crate::settings::Precision;

const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Nine significant digits.
fn num(x: f64) -> String {
    format!("{x:.8e}")
}

fn schema_id(name: &str) -> String {
    format!("centrefall/{name}/v1")
}

fn to_json(name: &str, mut body: Value) -> String {
    body["schema"] = Value::String(schema_id(name));
    let mut s = serde_json::to_string_pretty(&body).expect("serializable");
    s.push('\n');
    s
}

fn header(out: &mut String, command: &str, units: &str) {
    let _ = writeln!(out, "# centrefall {VERSION} {command}");
    let _ = writeln!(out, "# units: {units}");
}

fn unsupported(command: &str, format: Format) -> Error {
    Error::Validation(format!("{command} does not support --format {format:?}").to_lowercase())
}

fn unit_system(u: &UnitArgs) -> Result<(UnitSystem, f64)> {
    if u.natural {
        Ok((UnitSystem::Natural, u.mass.unwrap_or(1.0)))
    } else {
        let m = u
            .mass
            .ok_or_else(|| Error::Validation("--mass [kg] is required without --natural".into()))?;
        Ok((UnitSystem::Si, m))
    }
}

fn units_label(units: UnitSystem) -> &'static str {
    match units {
        UnitSystem::Si => "SI (m, s, kg, J)",
        UnitSystem::Natural => "natural (hbar = m = 1)",
    }
}

fn fate_json(fate: &Fate) -> Value {
    serde_json::to_value(fate).expect("serializable")
}

fn curve_json(c: &EvolutionCurve) -> Value {
    json!({ "a": c.a, "b": c.b, "c": c.c })
}

fn moment_state(args: &StateArgs) -> Result<(MomentState, UnitSystem)> {
    let (units, mass) = unit_system(&args.units)?;
    Ok((MomentState::new(args.r2_0, args.d0, args.energy, mass)?, units))
}

pub fn evolve(args: &EvolveArgs) -> Result<String> {
    let (state, units) = moment_state(&args.state)?;
    if args.samples < 2 {
        return Err(Error::Validation(format!("--samples must be >= 2, got {}", args.samples)));
    }
    let curve = curve_from_state(&state)?;
    let fate = classify_fate(&curve);
    let t_max = match args.t_max {
        Some(t) if t > 0.0 && t.is_finite() => t,
        Some(t) => return Err(Error::Validation(format!("--t-max must be > 0, got {t}"))),
        None => match fate.falling_time() {
            Some(t_f) => 2.0 * t_f,
            None => normalized_curve(&state).map(|n| 2.0 * n.t0).unwrap_or(1.0),
        },
    };
    let t_f = fate.falling_time();
    let rows: Vec<(f64, f64, bool)> = (0..args.samples)
        .map(|k| {
            let t = t_max * k as f64 / (args.samples - 1) as f64;
            (t, curve.r2_at(t), t_f.is_none_or(|tf| t <= tf))
        })
        .collect();
    match args.format {
        Format::Csv => {
            let mut out = String::new();
            header(&mut out, "evolve", units_label(units));
            let _ = writeln!(
                out,
                "# r2(t) = {} + {} t + {} t^2",
                num(curve.a),
                num(curve.b),
                num(curve.c)
            );
            let _ = writeln!(out, "# fate: {fate}");
            out.push_str("t,r2,physical\n");
            for (t, r2, phys) in rows {
                let _ = writeln!(out, "{},{},{}", num(t), num(r2), u8::from(phys));
            }
            Ok(out)
        }
        Format::Json => Ok(to_json(
            "evolve",
            json!({
                "units": units,
                "curve": curve_json(&curve),
                "fate": fate_json(&fate),
                "samples": rows.iter().map(|&(t, r2, p)| json!({"t": t, "r2": r2, "physical": p})).collect::<Vec<_>>(),
            }),
        )),
        Format::Text => Err(unsupported("evolve", args.format)),
    }
}

pub fn fate(args: &FateArgs) -> Result<String> {
    let (state, units) = moment_state(&args.state)?;
    let curve = curve_from_state(&state)?;
    let fate = classify_fate(&curve);
    let t_f = fate.falling_time();
    match args.format {
        Format::Text => Ok(format!("{fate}\n")),
        Format::Csv => {
            let mut out = String::new();
            header(&mut out, "fate", units_label(units));
            out.push_str("fate,t_f,discriminant\n");
            let kind = match fate {
                Fate::FallsAt { .. } => "falls",
                Fate::Escapes => "escapes",
                Fate::QuasiStationary => "quasi_stationary",
            };
            let _ = writeln!(
                out,
                "{kind},{},{}",
                t_f.map(num).unwrap_or_default(),
                num(curve.discriminant())
            );
            Ok(out)
        }
        Format::Json => Ok(to_json(
            "fate",
            json!({
                "units": units,
                "curve": curve_json(&curve),
                "discriminant": curve.discriminant(),
                "fate": fate_json(&fate),
            }),
        )),
    }
}

pub fn fall_time(args: &FallTimeArgs) -> Result<String> {
    let (units, mass) = unit_system(&args.units)?;
    let t_f = falling_time_symmetric(args.r2_0, args.energy, mass)?;
    match args.format {
        Format::Text => Ok(format!("t_f={}\n", num(t_f))),
        Format::Csv => {
            let mut out = String::new();
            header(&mut out, "fall-time", units_label(units));
            let _ = writeln!(out, "t_f\n{}", num(t_f));
            Ok(out)
        }
        Format::Json => Ok(to_json("fall-time", json!({ "units": units, "t_f": t_f }))),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

fn trial_state(shape: &TrialShape) -> Result<TrialState> {
    let s = shape
        .s
        .ok_or_else(|| Error::Validation("--s is required unless --profile is given".into()))?;
    TrialState::new(s, shape.beta.unwrap_or(1.0), shape.lz)
}

pub fn trial(args: &TrialArgs, precision: &Precision) -> Result<String> {
    let (units, mass) = unit_system(&args.units)?;
    let (source, ms) = match &args.shape.profile {
        Some(path) => {
            if args.shape.s.is_some() || args.shape.beta.is_some() {
                return Err(Error::Validation("--profile replaces --s and --beta".into()));
            }
            let profile = RadialProfile::parse(&read(path)?, args.shape.lz)?;
            (json!({ "profile": path.display().to_string(), "l_z": args.shape.lz }), quadrature_moments(&profile, args.gamma, mass, units)?)
        }
        None => {
            let ts = trial_state(&args.shape)?;
            (json!({ "s": ts.s, "beta": ts.beta, "l_z": ts.l_z }), trial_moments(&ts, args.gamma, mass, units)?)
        }
    };
    if let Some(w) = &ms.warning {
        eprintln!("warning: {w}");
    }
    let gamma_c = critical_coupling(&ms);
    let state = ms.to_moment_state(mass)?.snap_negligible(ms.kinetic, precision.zero);
    let fate = classify_fate(&curve_from_state(&state)?);
    match args.format {
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "r2      = {}", num(ms.r2));
            let _ = writeln!(out, "inv_r2  = {}", num(ms.inv_r2));
            let _ = writeln!(out, "kinetic = {}", num(ms.kinetic));
            let _ = writeln!(out, "energy  = {}", num(state.energy));
            let _ = writeln!(out, "d       = {}", num(state.d_0));
            let _ = writeln!(out, "gamma_c = {}", num(gamma_c));
            let _ = writeln!(out, "fate    = {fate}");
            Ok(out)
        }
        Format::Csv => {
            let mut out = String::new();
            header(&mut out, "trial", units_label(units));
            let _ = writeln!(out, "# gamma = {}", num(args.gamma));
            out.push_str("r2,inv_r2,kinetic,energy,d,gamma_c\n");
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                num(ms.r2),
                num(ms.inv_r2),
                num(ms.kinetic),
                num(state.energy),
                num(state.d_0),
                num(gamma_c)
            );
            Ok(out)
        }
        Format::Json => Ok(to_json(
            "trial",
            json!({
                "units": units,
                "state": source,
                "gamma": args.gamma,
                "mass": mass,
                "moments": {
                    "r2": ms.r2,
                    "inv_r2": ms.inv_r2,
                    "kinetic": ms.kinetic,
                    "energy": state.energy,
                    "d": state.d_0,
                },
                "gamma_c": gamma_c,
                "fate": fate_json(&fate),
                "warning": ms.warning,
            }),
        )),
    }
}

pub fn critical(args: &CriticalArgs) -> Result<String> {
    let (units, mass) = unit_system(&args.units)?;
    let gamma_min = min_critical_coupling(mass, units)?;
    let state_gamma_c = match args.s {
        Some(s) => {
            let ts = TrialState::new(s, args.beta.unwrap_or(1.0), args.lz)?;
            Some(critical_coupling(&trial_moments(&ts, 0.0, mass, units)?))
        }
        None => None,
    };
    let s0 = args.gamma.map(|g| quasi_stationary_exponent(g, mass, units)).transpose()?;
    match args.format {
        Format::Text => {
            let mut out = format!("gamma_min = {}\n", num(gamma_min));
            if let Some(g) = state_gamma_c {
                let _ = writeln!(out, "gamma_c   = {}", num(g));
            }
            if let Some(s) = s0 {
                let _ = writeln!(out, "s0        = {}", num(s));
            }
            Ok(out)
        }
        Format::Csv => {
            let mut out = String::new();
            header(&mut out, "critical", units_label(units));
            out.push_str("gamma_min,gamma_c,s0\n");
            let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
            let _ = writeln!(out, "{},{},{}", num(gamma_min), opt(state_gamma_c), opt(s0));
            Ok(out)
        }
        Format::Json => Ok(to_json(
            "critical",
            json!({
                "units": units,
                "mass": mass,
                "gamma_min": gamma_min,
                "gamma_c": state_gamma_c,
                "s0": s0,
            }),
        )),
    }
}

#[derive(Serialize)]
struct CaseSummary {
    gamma: f64,
    t_valid: f64,
    max_rel_dev: f64,
    within_tolerance: bool,
}

pub fn propagate(args: &PropagateArgs, precision: &Precision) -> Result<String> {
    let (units, mass) = unit_system(&args.units)?;
    let hbar = units.hbar();
    let profile = match &args.shape.profile {
        Some(path) => Some(RadialProfile::parse(&read(path)?, args.shape.lz)?),
        None => None,
    };
    let ts = match profile {
        Some(_) => None,
        None => Some(TrialState::new(args.shape.s.unwrap_or(1.0), args.shape.beta.unwrap_or(1.0), args.shape.lz)?),
    };
    // width parameter used for the grid defaults; for profiles β ≈ 2/⟨r²⟩
    let beta = match (&ts, &profile) {
        (Some(ts), _) => ts.beta,
        (None, Some(p)) => 2.0 / quadrature_moments(p, 0.0, mass, units)?.r2,
        _ => unreachable!(),
    };
    let time_unit = mass / (hbar * beta);
    let r_max = args.r_max.unwrap_or_else(|| match &profile {
        Some(p) => p.r_max(),
        None => 12.0 / beta.sqrt(),
    });
    let grid = GridSpec::new(args.points, r_max, args.dt.unwrap_or(DEFAULT_DT_FACTOR * time_unit))?;
    let t_max = args.t_max.unwrap_or(2.0 * time_unit);
    let limits = WindowLimits {
        leakage: precision.leakage,
        ..WindowLimits::default()
    };
    let initial = match (&ts, &profile) {
        (Some(ts), _) => InitialState::Trial { state: *ts, chirp: args.chirp },
        (None, Some(p)) => {
            if args.chirp != 0.0 {
                return Err(Error::Validation("--chirp applies to trial states only".into()));
            }
            InitialState::Profile(p)
        }
        _ => unreachable!(),
    };
    let runs: Vec<Result<Verification>> = args
        .gamma
        .par_iter()
        .map(|&gamma| {
            let state = discretize(initial, grid, gamma, mass, units)?;
            propagate_and_verify_with(&state, t_max, args.record_every, limits)
        })
        .collect();
    let runs: Vec<Verification> = runs.into_iter().collect::<Result<_>>()?;
    let summary = |v: &Verification| CaseSummary {
        gamma: v.trajectory.gamma,
        t_valid: v.trajectory.t_valid,
        max_rel_dev: v.max_rel_dev,
        within_tolerance: v.max_rel_dev < precision.deviation,
    };
    for v in &runs {
        if v.max_rel_dev >= precision.deviation {
            eprintln!(
                "warning: gamma = {:e}: max relative deviation {:.3e} exceeds {:e}",
                v.trajectory.gamma, v.max_rel_dev, precision.deviation
            );
        }
    }
    match args.format {
        Format::Csv => {
            let mut out = String::new();
            header(&mut out, "propagate", units_label(units));
            let _ = writeln!(
                out,
                "# grid: n={} dr={} r_max={} dt={} l_z={} mass={}",
                grid.n,
                num(grid.dr),
                num(grid.r_max()),
                num(grid.dt),
                args.shape.lz,
                num(mass)
            );
            for (k, v) in runs.iter().enumerate() {
                let s = summary(v);
                let a = &v.trajectory.analytic;
                let _ = writeln!(
                    out,
                    "# case {k}: gamma={} t_valid={} max_rel_dev={} analytic={}+{}t+{}t^2",
                    num(s.gamma),
                    num(s.t_valid),
                    num(s.max_rel_dev),
                    num(a.a),
                    num(a.b),
                    num(a.c)
                );
            }
            out.push_str("case,gamma,t,norm,r2_numeric,r2_analytic,d,energy,rel_dev,valid\n");
            for (k, v) in runs.iter().enumerate() {
                let tr = &v.trajectory;
                for r in &tr.records {
                    let _ = writeln!(
                        out,
                        "{k},{},{},{},{},{},{},{},{},{}",
                        num(tr.gamma),
                        num(r.t),
                        num(r.norm),
                        num(r.r2_numeric),
                        num(r.r2_analytic),
                        num(r.d),
                        num(r.energy),
                        num(r.rel_dev),
                        u8::from(r.t <= tr.t_valid)
                    );
                }
            }
            Ok(out)
        }
        Format::Json => Ok(to_json(
            "propagate",
            json!({
                "units": units,
                "mass": mass,
                "grid": { "n": grid.n, "dr": grid.dr, "r_max": grid.r_max(), "dt": grid.dt },
                "l_z": args.shape.lz,
                "cases": runs.iter().map(|v| {
                    let s = summary(v);
                    json!({
                        "gamma": s.gamma,
                        "t_valid": s.t_valid,
                        "max_rel_dev": s.max_rel_dev,
                        "within_tolerance": s.within_tolerance,
                        "analytic": curve_json(&v.trajectory.analytic),
                        "records": v.trajectory.records,
                    })
                }).collect::<Vec<_>>(),
            }),
        )),
        Format::Text => {
            let mut out = String::new();
            for v in &runs {
                let s = summary(v);
                let _ = writeln!(
                    out,
                    "gamma={} t_valid={} max_rel_dev={} {}",
                    num(s.gamma),
                    num(s.t_valid),
                    num(s.max_rel_dev),
                    if s.within_tolerance { "ok" } else { "exceeds tolerance" }
                );
            }
            Ok(out)
        }
    }
}

fn chamber(args: &ChamberArgs) -> Result<WireChamber> {
    let base = args.preset.map(|Preset::Dus| WireChamber::DUS);
    match (base, args.r1, args.r2) {
        (Some(b), r1, r2) => WireChamber::new(
            r1.unwrap_or(b.r1),
            r2.unwrap_or(b.r2),
            args.length.unwrap_or(b.length),
        ),
        (None, Some(r1), Some(r2)) => WireChamber::new(r1, r2, args.length.unwrap_or(WireChamber::DUS.length)),
        (None, None, None) => Ok(WireChamber::DUS),
        _ => Err(Error::Validation("give both --r1 and --r2 [m], or --preset".into())),
    }
}

fn particle_table(file: Option<&Path>) -> Result<Vec<Particle>> {
    let mut all: Vec<Particle> = BUILTIN_PARTICLES
        .iter()
        .map(|(name, _, _)| builtin_particle(name))
        .collect::<Result<_>>()?;
    if let Some(path) = file {
        for p in parse_particles(&read(path)?)? {
            all.retain(|q| !q.name.eq_ignore_ascii_case(&p.name));
            all.push(p);
        }
    }
    Ok(all)
}

fn find_particle(table: &[Particle], name: &str) -> Result<Particle> {
    table
        .iter()
        .find(|p| p.name.eq_ignore_ascii_case(name))
        .cloned()
        .ok_or_else(|| Error::Lookup(name.to_string()))
}

fn chamber_json(c: &WireChamber) -> Value {
    json!({ "r1": c.r1, "r2": c.r2, "length": c.length })
}

pub fn wire(args: &WireArgs) -> Result<String> {
    let consts = Constants::CODATA_2018;
    let table = particle_table(args.chamber.particles.as_deref())?;
    let particle = find_particle(&table, &args.atom)?;
    let chamber = chamber(&args.chamber)?;
    let drive = match (args.voltage, args.charge) {
        (Some(u), None) => WireDrive::Voltage(u),
        (None, Some(q)) => WireDrive::LineCharge(q * 1e-12),
        _ => return Err(Error::Validation("give exactly one of --voltage [V] or --charge [pC/m]".into())),
    };
    if drive.line_charge(&chamber, &consts) < 0.0 {
        return Err(Error::Validation("wire voltage and charge must be >= 0".into()));
    }
    let fall = chamber_falling_time(&particle, &chamber, drive, args.s, &consts)?;
    let q_c = critical_charge(&particle, &consts);
    let u_c = critical_voltage(&particle, &chamber, &consts);
    match args.format {
        Format::Json => Ok(to_json(
            "wire",
            json!({
                "particle": { "name": particle.name, "mass_u": particle.mass_u(), "alpha_A3": particle.alpha_a3() },
                "chamber": chamber_json(&chamber),
                "pressure_torr": WireChamber::DUS_PRESSURE_TORR,
                "s": args.s,
                "gamma": fall.gamma,
                "line_charge": fall.line_charge,
                "voltage": fall.voltage,
                "r2_0": fall.r2_0,
                "energy": fall.energy,
                "t_f": fall.t_f,
                "q_c": q_c,
                "U_c": u_c,
            }),
        )),
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "particle   {}", particle.name);
            let _ = writeln!(out, "voltage    {} V", num(fall.voltage));
            let _ = writeln!(out, "charge     {} C/m", num(fall.line_charge));
            let _ = writeln!(out, "gamma      {} J m^2", num(fall.gamma));
            let _ = writeln!(out, "energy     {} J", num(fall.energy));
            let _ = writeln!(out, "t_f        {} s", num(fall.t_f));
            let _ = writeln!(out, "q_c        {} C/m", num(q_c));
            let _ = writeln!(out, "U_c        {} V", num(u_c));
            Ok(out)
        }
        Format::Csv => {
            let mut out = String::new();
            header(&mut out, "wire", "SI (m, s, kg, J, V, C/m)");
            let _ = writeln!(
                out,
                "# chamber: r1={} r2={} length={}",
                num(chamber.r1),
                num(chamber.r2),
                num(chamber.length)
            );
            out.push_str("particle,voltage,line_charge,gamma,energy,t_f,q_c,U_c\n");
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                particle.name,
                num(fall.voltage),
                num(fall.line_charge),
                num(fall.gamma),
                num(fall.energy),
                num(fall.t_f),
                num(q_c),
                num(u_c)
            );
            Ok(out)
        }
    }
}

pub fn scale(args: &ScaleArgs) -> Result<String> {
    let consts = Constants::CODATA_2018;
    let chamber = chamber(&args.chamber)?;
    let plan = ScalingPlan::new(args.lambda1, args.lambda2)?;
    let factor = scaled_critical_voltage_factor(&chamber, &plan)?;
    let report = if args.atoms.is_empty() {
        None
    } else {
        let table = particle_table(args.chamber.particles.as_deref())?;
        let particles = args
            .atoms
            .iter()
            .map(|a| find_particle(&table, a.trim()))
            .collect::<Result<Vec<_>>>()?;
        Some(proposal_report(&particles, &chamber, &plan, &consts)?)
    };
    match args.format {
        Format::Text => Ok(match &report {
            Some(r) => r.to_text(),
            None => format!("factor {factor:.6}\n"),
        }),
        Format::Json => Ok(to_json(
            "scale",
            json!({
                "chamber": chamber_json(&chamber),
                "plan": { "lambda1": plan.lambda1, "lambda2": plan.lambda2 },
                "factor": factor,
                "report": report.as_ref().map(|r| json!({
                    "scaled_chamber": chamber_json(&r.scaled_chamber),
                    "baseline_li_voltage": r.baseline_li_voltage,
                    "rows": r.rows,
                })),
            }),
        )),
        Format::Csv => {
            let mut out = String::new();
            header(&mut out, "scale", "SI (V, pC/m)");
            let _ = writeln!(
                out,
                "# lambda1={} lambda2={} factor={}",
                num(plan.lambda1),
                num(plan.lambda2),
                num(factor)
            );
            out.push_str("particle,q_c_pC_per_m,U_c_V,U_c_scaled_V,ratio_vs_Li\n");
            for r in report.iter().flat_map(|r| &r.rows) {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    r.particle, r.q_c_pC_per_m, r.U_c_V, r.U_c_scaled_V, r.ratio_vs_Li
                );
            }
            Ok(out)
        }
    }
}

struct Figure1Curve {
    family: &'static str,
    eps: f64,
    curve: Option<NormalizedCurve>,
}

pub fn figure1(args: &Figure1Args) -> Result<String> {
    if args.samples < 2 {
        return Err(Error::Validation(format!("--samples must be >= 2, got {}", args.samples)));
    }
    if !(args.tau_max > 0.0 && args.tau_max.is_finite()) {
        return Err(Error::Validation(format!("--tau-max must be > 0, got {}", args.tau_max)));
    }
    if let Some(e) = args.eps.iter().find(|e| !e.is_finite()) {
        return Err(Error::Validation(format!("eps must be finite, got {e}")));
    }
    let mut curves = Vec::new();
    for (family, sign) in [("H<0", -1i8), ("H>0", 1)] {
        for &eps in &args.eps {
            curves.push(Figure1Curve { family, eps, curve: Some(NormalizedCurve { t0: 1.0, eps, quad_sign: sign }) });
        }
    }
    for eps in [-1.0, 1.0] {
        curves.push(Figure1Curve { family: "H=0", eps, curve: Some(NormalizedCurve { t0: 1.0, eps, quad_sign: 0 }) });
    }
    curves.push(Figure1Curve { family: "H=0_d=0", eps: 0.0, curve: None });

    let taus: Vec<f64> = (0..args.samples)
        .map(|k| args.tau_max * k as f64 / (args.samples - 1) as f64)
        .collect();
    let sample = |c: &Figure1Curve| -> Vec<(f64, f64, bool)> {
        let limit = c.curve.and_then(|n| classify_fate(&n.as_curve()).falling_time());
        taus.iter()
            .map(|&tau| {
                let y = c.curve.map_or(1.0, |n| n.y_at(tau));
                (tau, y, limit.is_none_or(|tf| tau <= tf))
            })
            .collect()
    };
    match args.format {
        Format::Csv => {
            let mut out = String::new();
            header(&mut out, "figure1", "dimensionless: y = <r^2>/<r^2>_0, tau = t/t0");
            out.push_str("# H=0,d=0 has no intrinsic time unit; tau is arbitrary there\n");
            out.push_str("family,eps,tau,y,physical\n");
            for c in &curves {
                for (tau, y, phys) in sample(c) {
                    let _ = writeln!(out, "{},{},{},{},{}", c.family, num(c.eps), num(tau), num(y), u8::from(phys));
                }
            }
            Ok(out)
        }
        Format::Json => Ok(to_json(
            "figure1",
            json!({
                "curves": curves.iter().map(|c| json!({
                    "family": c.family,
                    "eps": c.eps,
                    "points": sample(c).iter().map(|&(tau, y, p)| json!({"tau": tau, "y": y, "physical": p})).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            }),
        )),
        Format::Text => Err(unsupported("figure1", args.format)),
    }
}

pub fn constants(args: &ConstantsArgs) -> Result<String> {
    let c = Constants::CODATA_2018;
    let table = particle_table(args.particles.as_deref())?;
    let rows: Vec<(Particle, f64)> = table
        .into_iter()
        .map(|p| {
            let g = min_critical_coupling(p.mass, UnitSystem::Si)?;
            Ok((p, g))
        })
        .collect::<Result<_>>()?;
    let dus = WireChamber::DUS;
    match args.format {
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "hbar  {} J s", num(c.hbar));
            let _ = writeln!(out, "eps0  {} F/m", num(c.eps0));
            let _ = writeln!(out, "u     {} kg", num(c.amu));
            let _ = writeln!(
                out,
                "dus   r1 = {} m, r2 = {} m, length = {} m, pressure = {} Torr",
                num(dus.r1),
                num(dus.r2),
                num(dus.length),
                num(WireChamber::DUS_PRESSURE_TORR)
            );
            let _ = writeln!(out, "{:<8} {:>16} {:>16} {:>16}", "particle", "mass [u]", "alpha [A^3]", "hbar^2/8m [J m^2]");
            for (p, g) in &rows {
                let _ = writeln!(out, "{:<8} {:>16} {:>16} {:>16}", p.name, num(p.mass_u()), num(p.alpha_a3()), num(*g));
            }
            Ok(out)
        }
        Format::Csv => {
            let mut out = String::new();
            header(&mut out, "constants", "SI");
            let _ = writeln!(out, "# hbar={} eps0={} amu={}", num(c.hbar), num(c.eps0), num(c.amu));
            out.push_str("particle,mass_u,alpha_A3,mass_kg,alpha_m3,gamma_min\n");
            for (p, g) in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    p.name,
                    num(p.mass_u()),
                    num(p.alpha_a3()),
                    num(p.mass),
                    num(p.alpha_vol),
                    num(*g)
                );
            }
            Ok(out)
        }
        Format::Json => Ok(to_json(
            "constants",
            json!({
                "hbar": c.hbar,
                "eps0": c.eps0,
                "amu": c.amu,
                "presets": { "dus": chamber_json(&dus) },
                "particles": rows.iter().map(|(p, g)| json!({
                    "name": p.name,
                    "mass_u": p.mass_u(),
                    "alpha_A3": p.alpha_a3(),
                    "mass": p.mass,
                    "alpha_vol": p.alpha_vol,
                    "gamma_min": g,
                })).collect::<Vec<_>>(),
            }),
        )),
    }
}
