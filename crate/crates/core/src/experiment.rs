//! Polarizable atoms around a thin charged wire inside a grounded cylinder.
//!
//! An atom of polarizability volume α in the field E = q/(2πε₀r) of a line
//! charge q feels −ε₀αE²/2 = −γ/r² with γ = αq²/(8π²ε₀). The wire and the
//! outer cylinder form a capacitor, U = q·ln(r₂/r₁)/(2πε₀).

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::Serialize;

use crate::constants::{builtin_particle, Constants, Particle};
use crate::error::{ensure, Error, Result};
use crate::moments::falling_time_symmetric;
use crate::trial::{trial_moments_with_hbar, TrialState};

/// Coaxial wire (radius `r1`) inside a grounded cylinder (radius `r2`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WireChamber {
    pub r1: f64,
    pub r2: f64,
    pub length: f64,
}

impl WireChamber {
    /// The lithium experiment: 0.7 μm wire, 0.1 m long chamber. The outer
    /// radius follows from 640 pC/m corresponding to 100 V; see
    /// [`infer_outer_radius`].
    pub const DUS: WireChamber = WireChamber {
        r1: 0.7e-6,
        r2: 4.2e-3,
        length: 0.1,
    };

    /// Residual gas pressure of the lithium experiment (Torr). Atoms are
    /// treated as collisionless.
    pub const DUS_PRESSURE_TORR: f64 = 6e-10;

    pub fn new(r1: f64, r2: f64, length: f64) -> Result<WireChamber> {
        let c = WireChamber { r1, r2, length };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.r1 > 0.0 && self.r1 < self.r2 && self.r2.is_finite(), || {
            format!(
                "chamber needs 0 < r1 < r2, got r1 = {:e} m, r2 = {:e} m",
                self.r1, self.r2
            )
        })?;
        ensure(self.length > 0.0 && self.length.is_finite(), || {
            format!("chamber length must be > 0, got {}", self.length)
        })
    }

    /// ln(r₂/r₁).
    pub fn log_ratio(&self) -> f64 {
        (self.r2 / self.r1).ln()
    }

    /// Capacitance per unit length, F/m.
    pub fn capacitance_per_length(&self, consts: &Constants) -> f64 {
        2.0 * PI * consts.eps0 / self.log_ratio()
    }
}

/// How the wire is driven; the other quantity follows from the capacitance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WireDrive {
    /// C/m
    LineCharge(f64),
    /// V
    Voltage(f64),
}

impl WireDrive {
    pub fn line_charge(&self, chamber: &WireChamber, consts: &Constants) -> f64 {
        match *self {
            WireDrive::LineCharge(q) => q,
            WireDrive::Voltage(u) => voltage_to_charge(chamber, u, consts),
        }
    }

    pub fn voltage(&self, chamber: &WireChamber, consts: &Constants) -> f64 {
        match *self {
            WireDrive::LineCharge(q) => charge_to_voltage(chamber, q, consts),
            WireDrive::Voltage(u) => u,
        }
    }
}

/// Rescaling of the wire (`lambda1`) and outer cylinder (`lambda2`) radii.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingPlan {
    pub lambda1: f64,
    pub lambda2: f64,
}

impl ScalingPlan {
    pub fn new(lambda1: f64, lambda2: f64) -> Result<ScalingPlan> {
        ensure(lambda1 > 0.0 && lambda2 > 0.0 && lambda1.is_finite() && lambda2.is_finite(), || {
            format!("scale factors must be > 0, got lambda1 = {lambda1}, lambda2 = {lambda2}")
        })?;
        Ok(ScalingPlan { lambda1, lambda2 })
    }

    pub fn apply(&self, chamber: &WireChamber) -> Result<WireChamber> {
        WireChamber::new(
            chamber.r1 * self.lambda1,
            chamber.r2 * self.lambda2,
            chamber.length,
        )
    }
}

/// γ = αq²/(8π²ε₀), J·m².
pub fn coupling_from_charge(particle: &Particle, q: f64, consts: &Constants) -> Result<f64> {
    ensure(q >= 0.0 && q.is_finite(), || format!("line charge must be >= 0, got {q}"))?;
    Ok(particle.alpha_vol * q * q / (8.0 * PI * PI * consts.eps0))
}

/// U = q·ln(r₂/r₁)/(2πε₀).
pub fn charge_to_voltage(chamber: &WireChamber, q: f64, consts: &Constants) -> f64 {
    q / chamber.capacitance_per_length(consts)
}

pub fn voltage_to_charge(chamber: &WireChamber, u: f64, consts: &Constants) -> f64 {
    u * chamber.capacitance_per_length(consts)
}

/// Outer radius of a grounded cylinder for which line charge `q` on a wire
/// of radius `r1` sits at voltage `u`: r₂ = r₁·exp(2πε₀U/q).
pub fn infer_outer_radius(r1: f64, q: f64, u: f64, consts: &Constants) -> Result<f64> {
    ensure(r1 > 0.0, || format!("wire radius must be > 0, got {r1}"))?;
    ensure(q > 0.0 && u >= 0.0, || format!("need q > 0 and U >= 0, got q = {q}, U = {u}"))?;
    Ok(r1 * (2.0 * PI * consts.eps0 * u / q).exp())
}

/// Line charge at which γ reaches ħ²/8m: q_c = √(ħ²π²ε₀/(mα)).
pub fn critical_charge(particle: &Particle, consts: &Constants) -> f64 {
    (consts.hbar * consts.hbar * PI * PI * consts.eps0 / (particle.mass * particle.alpha_vol)).sqrt()
}

pub fn critical_voltage(particle: &Particle, chamber: &WireChamber, consts: &Constants) -> f64 {
    charge_to_voltage(chamber, critical_charge(particle, consts), consts)
}

/// U_c′/U_c = 1 + ln(λ₂/λ₁)/ln(r₂/r₁) for a rescaled chamber.
pub fn scaled_critical_voltage_factor(chamber: &WireChamber, plan: &ScalingPlan) -> Result<f64> {
    chamber.validate()?;
    let factor = 1.0 + (plan.lambda2 / plan.lambda1).ln() / chamber.log_ratio();
    if factor <= 0.0 {
        return Err(Error::Domain(format!(
            "scaling lambda2/lambda1 = {} shrinks the chamber until r2' <= r1' (factor {factor})",
            plan.lambda2 / plan.lambda1
        )));
    }
    Ok(factor)
}

/// Falling-time estimate for a cloud filling the chamber.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChamberFall {
    /// J·m²
    pub gamma: f64,
    pub line_charge: f64,
    pub voltage: f64,
    /// Initial ⟨r²⟩ = r₂².
    pub r2_0: f64,
    /// ⟨H⟩ of ψ_s with ⟨r²⟩ = r₂².
    pub energy: f64,
    pub t_f: f64,
}

/// Time for atoms in state ψ_s with ⟨r²⟩₀ = r₂² to fall onto the wire.
pub fn chamber_falling_time(
    particle: &Particle,
    chamber: &WireChamber,
    drive: WireDrive,
    s: f64,
    consts: &Constants,
) -> Result<ChamberFall> {
    chamber.validate()?;
    let q = drive.line_charge(chamber, consts);
    let gamma = coupling_from_charge(particle, q, consts)?;
    let r2_0 = chamber.r2 * chamber.r2;
    let ts = TrialState::new(s, (s + 1.0) / r2_0, 0)?;
    let ms = trial_moments_with_hbar(&ts, gamma, particle.mass, consts.hbar)?;
    if ms.energy >= 0.0 {
        let q_c = critical_charge(particle, consts);
        // ψ_s reaches zero energy at γ = 4sΓ_c, i.e. q = 2√s·q_c
        let threshold = charge_to_voltage(chamber, 2.0 * s.sqrt() * q_c, consts);
        return Err(Error::BelowFallingLimit {
            energy: ms.energy,
            threshold_voltage: threshold,
            critical_voltage: charge_to_voltage(chamber, q_c, consts),
            critical_charge_pc_per_m: q_c * 1e12,
        });
    }
    let t_f = falling_time_symmetric(r2_0, ms.energy, particle.mass)?;
    Ok(ChamberFall {
        gamma,
        line_charge: q,
        voltage: charge_to_voltage(chamber, q, consts),
        r2_0,
        energy: ms.energy,
        t_f,
    })
}

/// Rounds to `digits` significant figures.
pub fn round_sig(x: f64, digits: i32) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let scale = 10f64.powi(digits - 1 - x.abs().log10().floor() as i32);
    (x * scale).round() / scale
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct ProposalRow {
    pub particle: String,
    pub q_c_pC_per_m: f64,
    pub U_c_V: f64,
    pub U_c_scaled_V: f64,
    pub ratio_vs_Li: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProposalReport {
    pub chamber: WireChamber,
    pub scaled_chamber: WireChamber,
    pub plan: ScalingPlan,
    pub factor: f64,
    /// U_c of Li-7 in the unscaled chamber, V.
    pub baseline_li_voltage: f64,
    pub rows: Vec<ProposalRow>,
}

impl ProposalReport {
    /// Aligned plain-text table.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "chamber r1 = {:.3e} m, r2 = {:.3e} m; scaled by lambda1 = {}, lambda2 = {} -> factor {:.3}",
            self.chamber.r1, self.chamber.r2, self.plan.lambda1, self.plan.lambda2, self.factor
        );
        let _ = writeln!(
            out,
            "{:<10} {:>14} {:>10} {:>14} {:>12}",
            "particle", "q_c [pC/m]", "U_c [V]", "U_c' [V]", "vs Li U_c"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<10} {:>14} {:>10} {:>14} {:>12}",
                r.particle, r.q_c_pC_per_m, r.U_c_V, r.U_c_scaled_V, r.ratio_vs_Li
            );
        }
        out
    }
}

/// Critical charge and voltage per particle, before and after rescaling the
/// chamber, relative to lithium in the unscaled chamber. Values are rounded
/// to three significant figures.
pub fn proposal_report(
    particles: &[Particle],
    chamber: &WireChamber,
    plan: &ScalingPlan,
    consts: &Constants,
) -> Result<ProposalReport> {
    let factor = scaled_critical_voltage_factor(chamber, plan)?;
    let scaled_chamber = plan.apply(chamber)?;
    let li = builtin_particle("Li7")?;
    let baseline = critical_voltage(&li, chamber, consts);
    let rows = particles
        .iter()
        .map(|p| {
            let u_c = critical_voltage(p, chamber, consts);
            let u_scaled = critical_voltage(p, &scaled_chamber, consts);
            ProposalRow {
                particle: p.name.clone(),
                q_c_pC_per_m: round_sig(critical_charge(p, consts) * 1e12, 3),
                U_c_V: round_sig(u_c, 3),
                U_c_scaled_V: round_sig(u_scaled, 3),
                ratio_vs_Li: round_sig(u_scaled / baseline, 3),
            }
        })
        .collect();
    Ok(ProposalReport {
        chamber: *chamber,
        scaled_chamber,
        plan: *plan,
        factor,
        baseline_li_voltage: baseline,
        rows,
    })
}
