//! Quantum fall to the centre in an attractive inverse-square potential.
//!
//! * [`moments`]: the exact quadratic law for ⟨r²⟩(t), fate classification and
//!   falling times.
//! * [`trial`]: moments of the ψ_s trial family and of sampled radial
//!   profiles; critical couplings.
//! * [`tdse`]: a Crank–Nicolson radial propagator used as an independent
//!   numerical check of the moment law.
//! * [`experiment`]: polarizable atoms near a charged wire inside a grounded
//!   cylinder (critical charge and voltage, chamber scaling).
//! * [`constants`]: CODATA constants, unit systems and atom records.

pub mod constants;
pub mod error;
pub mod experiment;
pub mod moments;
pub mod profile;
pub mod special;
pub mod tdse;
pub mod tridiag;
pub mod trial;

pub use constants::{builtin_particle, convert_polarizability, Constants, Particle, UnitSystem};
pub use error::{Error, Result};
pub use experiment::{ScalingPlan, WireChamber, WireDrive};
pub use moments::{
    classify_fate, curve_from_state, falling_time_symmetric, normalized_curve, EvolutionCurve,
    Fate, MomentState, NormalizedCurve,
};
pub use profile::RadialProfile;
pub use tdse::{GridSpec, RadialGridState, Trajectory, WindowLimits};
pub use trial::{MomentSet, TrialState};
