//! The ψ_s trial family, moments of radial states and critical couplings.
//!
//! ψ_s(r, φ) = √(2β^{s+1}/Γ(s+1)) · r^s · e^{−βr²/2} · e^{i l_z φ}/√(2π)
//! in two dimensions. Kinetic energies are computed in the gradient form
//! ⟨T⟩ = (ħ²/2m)∫(|R'|² + l_z²|R|²/r²) r dr, which is manifestly positive.

use serde::Serialize;

use crate::constants::UnitSystem;
use crate::error::{ensure, Result};
use crate::moments::MomentState;
use crate::profile::RadialProfile;
use crate::special::ln_gamma;

/// Normalization tolerance accepted by [`quadrature_moments`].
pub const NORM_TOLERANCE: f64 = 1e-8;

/// Largest probability allowed in the outer 5% of a profile's grid.
pub const TAIL_TOLERANCE: f64 = 1e-10;

const SUB_HALF_WARNING: &str =
    "exponent s < 1/2: such states need unbounded energy to prepare and are treated as unphysical";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialState {
    /// Power of r near the origin.
    pub s: f64,
    /// Gaussian width parameter, m⁻².
    pub beta: f64,
    /// Angular momentum quantum number.
    pub l_z: i32,
}

impl TrialState {
    pub fn new(s: f64, beta: f64, l_z: i32) -> Result<TrialState> {
        let ts = TrialState { s, beta, l_z };
        ts.validate()?;
        Ok(ts)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.s > 0.0 && self.s.is_finite(), || {
            format!("trial exponent s must be > 0, got {}", self.s)
        })?;
        ensure(self.beta > 0.0 && self.beta.is_finite(), || {
            format!("trial width beta must be > 0, got {}", self.beta)
        })
    }

    /// R(r) of the normalized trial state.
    pub fn radial(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        let ln_norm =
            0.5 * (std::f64::consts::LN_2 + (self.s + 1.0) * self.beta.ln() - ln_gamma(self.s + 1.0));
        (ln_norm + self.s * r.ln() - 0.5 * self.beta * r * r).exp()
    }

    pub fn is_sub_half(&self) -> bool {
        self.s < 0.5
    }
}

/// Expectation values of a radial state at a given coupling.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentSet {
    /// ⟨r²⟩
    pub r2: f64,
    /// ⟨1/r²⟩
    pub inv_r2: f64,
    /// ⟨T⟩
    pub kinetic: f64,
    /// ⟨H⟩ = ⟨T⟩ − γ⟨1/r²⟩
    pub energy: f64,
    /// ⟨r·p + p·r⟩
    pub d: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

impl MomentSet {
    /// Same state at a different coupling.
    pub fn at_coupling(&self, gamma: f64) -> MomentSet {
        MomentSet {
            energy: self.kinetic - gamma * self.inv_r2,
            ..self.clone()
        }
    }

    pub fn to_moment_state(&self, mass: f64) -> Result<MomentState> {
        MomentState::new(self.r2, self.d, self.energy, mass)
    }
}

fn check_mass(mass: f64) -> Result<()> {
    ensure(mass > 0.0 && mass.is_finite(), || format!("mass must be > 0, got {mass}"))
}

/// Closed-form moments of ψ_s.
///
/// ⟨r²⟩ = (s+1)/β, ⟨1/r²⟩ = β/s, ⟨T⟩ = ħ²β/2m·(1 + l_z²/s). For l_z = 0 the
/// energy reduces to (s+1)/⟨r²⟩·(ħ²/2m − γ/s).
pub fn trial_moments(ts: &TrialState, gamma: f64, mass: f64, units: UnitSystem) -> Result<MomentSet> {
    trial_moments_with_hbar(ts, gamma, mass, units.hbar())
}

pub(crate) fn trial_moments_with_hbar(ts: &TrialState, gamma: f64, mass: f64, hbar: f64) -> Result<MomentSet> {
    ts.validate()?;
    check_mass(mass)?;
    let TrialState { s, beta, l_z } = *ts;
    let lz2 = f64::from(l_z) * f64::from(l_z);
    let inv_r2 = beta / s;
    let kinetic = hbar * hbar * beta / (2.0 * mass) * (1.0 + lz2 / s);
    Ok(MomentSet {
        r2: (s + 1.0) / beta,
        inv_r2,
        kinetic,
        energy: kinetic - gamma * inv_r2,
        d: 0.0,
        warning: ts.is_sub_half().then(|| SUB_HALF_WARNING.to_string()),
    })
}

/// Coupling at which ⟨H⟩ of this state crosses zero: ⟨T⟩/⟨1/r²⟩.
///
/// Independent of the coupling the set was computed at.
pub fn critical_coupling(ms: &MomentSet) -> f64 {
    ms.kinetic / ms.inv_r2
}

/// ħ²/8m, the smallest critical coupling over all radial states.
pub fn min_critical_coupling(mass: f64, units: UnitSystem) -> Result<f64> {
    check_mass(mass)?;
    let hbar = units.hbar();
    Ok(hbar * hbar / (8.0 * mass))
}

/// Exponent s₀ = 2mγ/ħ² for which ψ_s has zero energy at coupling γ (l_z = 0).
///
/// A factor 1/3 in place of 1 (s = 2mγ/3ħ²) does not give ⟨H⟩ = 0 for this
/// family.
pub fn quasi_stationary_exponent(gamma: f64, mass: f64, units: UnitSystem) -> Result<f64> {
    ensure(gamma > 0.0 && gamma.is_finite(), || {
        format!("coupling must be > 0, got {gamma}")
    })?;
    check_mass(mass)?;
    let hbar = units.hbar();
    Ok(2.0 * mass * gamma / (hbar * hbar))
}

/// Moments of a sampled profile by quadrature.
pub fn quadrature_moments(
    profile: &RadialProfile,
    gamma: f64,
    mass: f64,
    units: UnitSystem,
) -> Result<MomentSet> {
    check_mass(mass)?;
    let tail = profile.tail_mass();
    ensure(tail < TAIL_TOLERANCE, || {
        format!(
            "probability {tail:e} in the outer 5% of the grid exceeds {TAIL_TOLERANCE:e}; increase r_max"
        )
    })?;
    let ints = profile.integrals()?;
    ensure((ints.norm - 1.0).abs() <= NORM_TOLERANCE, || {
        format!(
            "profile norm {} differs from 1 by more than {NORM_TOLERANCE:e}",
            ints.norm
        )
    })?;
    let hbar = units.hbar();
    let lz = f64::from(profile.l_z());
    let kinetic = hbar * hbar / (2.0 * mass) * (ints.grad + lz * lz * ints.inv_r2);
    let sub_half = profile.origin_exponent() < 0.5 - 1e-6;
    Ok(MomentSet {
        r2: ints.r2,
        inv_r2: ints.inv_r2,
        kinetic,
        energy: kinetic - gamma * ints.inv_r2,
        d: 2.0 * hbar * ints.dilation,
        warning: sub_half.then(|| SUB_HALF_WARNING.to_string()),
    })
}
