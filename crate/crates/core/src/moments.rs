//! Exact evolution of ⟨r²⟩ in an attractive inverse-square potential.
//!
//! For V = −γ/r² the Heisenberg chain for ⟨r²⟩ closes after two steps:
//! d⟨r²⟩/dt = ⟨r·p + p·r⟩/m and d²⟨r²⟩/dt² = 4⟨H⟩/m. Energy is conserved, so
//! ⟨r²⟩(t) is a quadratic in time fixed entirely by the initial triple
//! (⟨r²⟩₀, ⟨r·p + p·r⟩₀, ⟨H⟩).

use serde::Serialize;

use crate::error::{ensure, Error, Result};

/// Initial expectation values that determine ⟨r²⟩(t).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentState {
    /// ⟨r²⟩ at t = 0.
    pub r2_0: f64,
    /// ⟨r·p + p·r⟩ at t = 0.
    pub d_0: f64,
    /// ⟨H⟩, conserved.
    pub energy: f64,
    pub mass: f64,
}

impl MomentState {
    pub fn new(r2_0: f64, d_0: f64, energy: f64, mass: f64) -> Result<MomentState> {
        let state = MomentState {
            r2_0,
            d_0,
            energy,
            mass,
        };
        state.validate()?;
        Ok(state)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.r2_0 > 0.0 && self.r2_0.is_finite(), || {
            format!("<r^2>_0 must be > 0, got {}", self.r2_0)
        })?;
        ensure(self.mass > 0.0 && self.mass.is_finite(), || {
            format!("mass must be > 0, got {}", self.mass)
        })?;
        ensure(self.d_0.is_finite() && self.energy.is_finite(), || {
            "<rp+pr>_0 and <H> must be finite".to_string()
        })
    }

    /// Replaces `d_0` and `energy` by exact zeros when they are negligible
    /// at relative tolerance `rel_tol`.
    ///
    /// Values obtained from quadrature or propagation never hit zero
    /// exactly; classification of such states must not depend on rounding.
    /// The energy scale is `kinetic` (⟨T⟩) and the `d_0` scale is
    /// √(m·⟨T⟩·⟨r²⟩₀).
    pub fn snap_negligible(mut self, kinetic: f64, rel_tol: f64) -> MomentState {
        let kinetic = kinetic.abs();
        if self.energy.abs() <= rel_tol * kinetic {
            self.energy = 0.0;
        }
        if self.d_0.abs() <= rel_tol * (self.mass * kinetic * self.r2_0).sqrt() {
            self.d_0 = 0.0;
        }
        self
    }
}

/// ⟨r²⟩(t) = a + b·t + c·t².
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvolutionCurve {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl EvolutionCurve {
    /// Value at time `t` (may be negative past the first zero).
    pub fn r2_at(&self, t: f64) -> f64 {
        self.a + t * (self.b + self.c * t)
    }

    /// First time derivative at `t`.
    pub fn rate_at(&self, t: f64) -> f64 {
        self.b + 2.0 * self.c * t
    }

    /// Minimum of the curve over t ≥ 0.
    pub fn min_forward(&self) -> f64 {
        if self.c > 0.0 && self.b < 0.0 {
            self.r2_at(-self.b / (2.0 * self.c))
        } else if self.c < 0.0 || (self.c == 0.0 && self.b < 0.0) {
            f64::NEG_INFINITY
        } else {
            self.a
        }
    }

    pub fn discriminant(&self) -> f64 {
        self.b * self.b - 4.0 * self.a * self.c
    }
}

pub fn curve_from_state(state: &MomentState) -> Result<EvolutionCurve> {
    state.validate()?;
    Ok(EvolutionCurve {
        a: state.r2_0,
        b: state.d_0 / state.mass,
        c: 2.0 * state.energy / state.mass,
    })
}

/// ⟨r²⟩ at time `t` on `curve`.
pub fn r2_at(curve: &EvolutionCurve, t: f64) -> f64 {
    curve.r2_at(t)
}

/// Long-time fate of the particle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "fate", rename_all = "snake_case")]
pub enum Fate {
    /// ⟨r²⟩ reaches zero at `t_f`.
    FallsAt { t_f: f64 },
    Escapes,
    /// ⟨r²⟩ stays constant.
    QuasiStationary,
}

impl Fate {
    pub fn falling_time(&self) -> Option<f64> {
        match *self {
            Fate::FallsAt { t_f } => Some(t_f),
            _ => None,
        }
    }
}

impl std::fmt::Display for Fate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Fate::FallsAt { t_f } => write!(f, "falls t_f={t_f:.8e}"),
            Fate::Escapes => write!(f, "escapes"),
            Fate::QuasiStationary => write!(f, "quasi-stationary"),
        }
    }
}

/// Classifies a curve by its first non-negative zero.
///
/// A double root (grazing contact, discriminant exactly zero) counts as
/// falling. Comparisons against zero are exact; snap near-zero inputs with
/// [`MomentState::snap_negligible`] first when they come from numerics.
pub fn classify_fate(curve: &EvolutionCurve) -> Fate {
    let EvolutionCurve { a, b, c } = *curve;
    if c < 0.0 {
        // one positive root; pick the cancellation-free form
        let sq = curve.discriminant().sqrt();
        let t_f = if b <= 0.0 {
            2.0 * a / (sq - b)
        } else {
            (b + sq) / (-2.0 * c)
        };
        Fate::FallsAt { t_f }
    } else if c > 0.0 {
        let disc = curve.discriminant();
        if b < 0.0 && disc >= 0.0 {
            Fate::FallsAt {
                t_f: 2.0 * a / (disc.sqrt() - b),
            }
        } else {
            Fate::Escapes
        }
    } else if b < 0.0 {
        Fate::FallsAt { t_f: a / -b }
    } else if b > 0.0 {
        Fate::Escapes
    } else {
        Fate::QuasiStationary
    }
}

/// Falling time of a state with ⟨r·p + p·r⟩₀ = 0: √(−m⟨r²⟩₀ / 2⟨H⟩).
pub fn falling_time_symmetric(r2_0: f64, energy: f64, mass: f64) -> Result<f64> {
    ensure(r2_0 > 0.0, || format!("<r^2>_0 must be > 0, got {r2_0}"))?;
    ensure(mass > 0.0, || format!("mass must be > 0, got {mass}"))?;
    if energy.is_nan() || energy >= 0.0 {
        return Err(Error::Domain(format!(
            "<H> = {energy:e} >= 0 with <rp+pr>_0 = 0: t_f is imaginary and the particle cannot fall"
        )));
    }
    Ok((-mass * r2_0 / (2.0 * energy)).sqrt())
}

/// Dimensionless form of a curve: y = ⟨r²⟩/⟨r²⟩₀ as a function of τ = t/t₀.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalizedCurve {
    pub t0: f64,
    pub eps: f64,
    /// Sign of ⟨H⟩: −1, 0 or +1.
    pub quad_sign: i8,
}

impl NormalizedCurve {
    /// y(τ) = 1 + ε·τ + sign(H)·τ².
    pub fn y_at(&self, tau: f64) -> f64 {
        1.0 + tau * (self.eps + f64::from(self.quad_sign) * tau)
    }

    /// The same curve in the a + b·τ + c·τ² representation.
    pub fn as_curve(&self) -> EvolutionCurve {
        EvolutionCurve {
            a: 1.0,
            b: self.eps,
            c: f64::from(self.quad_sign),
        }
    }
}

/// Normalizes a state to dimensionless units.
///
/// For ⟨H⟩ ≠ 0, t₀ = √(m⟨r²⟩₀ / 2|⟨H⟩|) and ε = d₀ / √(2m|⟨H⟩|⟨r²⟩₀). For
/// ⟨H⟩ = 0, t₀ = m⟨r²⟩₀ / |d₀| and ε = sign(d₀). With both zero the time
/// unit is arbitrary and the state is rejected.
pub fn normalized_curve(state: &MomentState) -> Result<NormalizedCurve> {
    state.validate()?;
    let MomentState {
        r2_0,
        d_0,
        energy,
        mass,
    } = *state;
    if energy != 0.0 {
        let h = energy.abs();
        Ok(NormalizedCurve {
            t0: (mass * r2_0 / (2.0 * h)).sqrt(),
            eps: d_0 / (2.0 * mass * h * r2_0).sqrt(),
            quad_sign: if energy < 0.0 { -1 } else { 1 },
        })
    } else if d_0 != 0.0 {
        Ok(NormalizedCurve {
            t0: mass * r2_0 / d_0.abs(),
            eps: d_0.signum(),
            quad_sign: 0,
        })
    } else {
        Err(Error::Domain(
            "<H> = 0 and <rp+pr>_0 = 0: <r^2> is constant and the unit of time is arbitrary".into(),
        ))
    }
}

/// Classical radial law r²(t) = r₀² + 2r₀ṙ₀t + (2E/m)t².
pub fn classical_r2(r0: f64, rdot0: f64, energy: f64, mass: f64, t: f64) -> Result<f64> {
    ensure(r0 > 0.0, || format!("r0 must be > 0, got {r0}"))?;
    ensure(mass > 0.0, || format!("mass must be > 0, got {mass}"))?;
    let curve = EvolutionCurve {
        a: r0 * r0,
        b: 2.0 * r0 * rdot0,
        c: 2.0 * energy / mass,
    };
    Ok(curve.r2_at(t))
}
