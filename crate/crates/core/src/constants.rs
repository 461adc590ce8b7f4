//! Physical constants, unit handling and atom records.

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};

/// Fundamental constants in SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constants {
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Vacuum permittivity, F/m.
    pub eps0: f64,
    /// Unified atomic mass unit, kg.
    pub amu: f64,
}

impl Constants {
    /// CODATA 2018 recommended values.
    pub const CODATA_2018: Constants = Constants {
        hbar: 1.054_571_817e-34,
        eps0: 8.854_187_812_8e-12,
        amu: 1.660_539_066_60e-27,
    };

    /// Same constants with ħ multiplied by `factor`. Only useful for probing
    /// the classical limit.
    pub fn with_hbar_scaled(self, factor: f64) -> Constants {
        Constants {
            hbar: self.hbar * factor,
            ..self
        }
    }
}

impl Default for Constants {
    fn default() -> Self {
        Constants::CODATA_2018
    }
}

/// Unit system for the abstract (moment, trial-state, propagator) calculations.
///
/// The wire experiment calculations always take SI [`Constants`] directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitSystem {
    #[default]
    Si,
    /// ħ = m = 1.
    Natural,
}

impl UnitSystem {
    pub fn hbar(self) -> f64 {
        match self {
            UnitSystem::Si => Constants::CODATA_2018.hbar,
            UnitSystem::Natural => 1.0,
        }
    }
}

/// Å³ per m³ conversion factor.
const CUBIC_ANGSTROM: f64 = 1e-30;

/// Converts a polarizability volume from Å³ to m³.
pub fn convert_polarizability(value_a3: f64) -> Result<f64> {
    ensure(value_a3 >= 0.0 && value_a3.is_finite(), || {
        format!("polarizability volume must be finite and >= 0 Å^3, got {value_a3}")
    })?;
    Ok(value_a3 * CUBIC_ANGSTROM)
}

/// A polarizable neutral atom.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Particle {
    pub name: String,
    /// Mass in kg.
    pub mass: f64,
    /// Polarizability volume in m³.
    pub alpha_vol: f64,
}

impl Particle {
    pub fn new(name: impl Into<String>, mass: f64, alpha_vol: f64) -> Result<Particle> {
        let name = name.into();
        ensure(mass > 0.0 && mass.is_finite(), || {
            format!("particle '{name}': mass must be > 0 kg, got {mass}")
        })?;
        ensure(alpha_vol > 0.0 && alpha_vol.is_finite(), || {
            format!("particle '{name}': polarizability volume must be > 0 m^3, got {alpha_vol}")
        })?;
        Ok(Particle {
            name,
            mass,
            alpha_vol,
        })
    }

    /// Builds a particle from a mass in atomic mass units and α in Å³.
    pub fn from_atomic_units(name: impl Into<String>, mass_u: f64, alpha_a3: f64) -> Result<Particle> {
        let alpha = convert_polarizability(alpha_a3)?;
        Particle::new(name, mass_u * Constants::CODATA_2018.amu, alpha)
    }

    /// Mass in atomic mass units.
    pub fn mass_u(&self) -> f64 {
        self.mass / Constants::CODATA_2018.amu
    }

    /// Polarizability volume in Å³.
    pub fn alpha_a3(&self) -> f64 {
        self.alpha_vol / CUBIC_ANGSTROM
    }
}

/// Built-in species: name, isotope mass (u), polarizability volume (Å³).
///
/// The He-3 polarizability is inferred from its quoted critical line charge
/// of 31 pC/m rather than read from a table.
pub const BUILTIN_PARTICLES: [(&str, f64, f64); 3] = [
    ("Li7", 7.016_003, 24.3),
    ("H1", 1.007_825, 0.667),
    ("He3", 3.016_029, 0.205),
];

pub fn builtin_particle(name: &str) -> Result<Particle> {
    BUILTIN_PARTICLES
        .iter()
        .find(|(n, _, _)| n.eq_ignore_ascii_case(name))
        .map(|&(n, m, a)| Particle::from_atomic_units(n, m, a))
        .unwrap_or_else(|| Err(Error::Lookup(name.to_string())))
}

/// Parses a species definition in `key=value` form.
///
/// Recognised keys are `name`, `mass_u` and `alpha_A3`; blank lines and lines
/// starting with `#` are ignored. Several species may be given in one file,
/// separated by a blank line or by repeating `name`.
pub fn parse_particles(text: &str) -> Result<Vec<Particle>> {
    #[derive(Default)]
    struct Pending {
        name: Option<String>,
        mass_u: Option<f64>,
        alpha: Option<f64>,
    }

    fn finish(p: Pending, out: &mut Vec<Particle>) -> Result<()> {
        if p.name.is_none() && p.mass_u.is_none() && p.alpha.is_none() {
            return Ok(());
        }
        let name = p
            .name
            .ok_or_else(|| Error::Parse("species entry without 'name'".into()))?;
        let mass_u = p
            .mass_u
            .ok_or_else(|| Error::Parse(format!("species '{name}' lacks 'mass_u'")))?;
        let alpha = p
            .alpha
            .ok_or_else(|| Error::Parse(format!("species '{name}' lacks 'alpha_A3'")))?;
        out.push(Particle::from_atomic_units(name, mass_u, alpha)?);
        Ok(())
    }

    let mut out = Vec::new();
    let mut cur = Pending::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.starts_with('#') {
            continue;
        }
        if line.is_empty() {
            finish(std::mem::take(&mut cur), &mut out)?;
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {}: expected key=value", lineno + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        let number = || {
            value
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("line {}: '{value}' is not a number", lineno + 1)))
        };
        match key {
            "name" => {
                if cur.name.is_some() {
                    finish(std::mem::take(&mut cur), &mut out)?;
                }
                cur.name = Some(value.to_string());
            }
            "mass_u" => cur.mass_u = Some(number()?),
            "alpha_A3" | "alpha_a3" => cur.alpha = Some(number()?),
            other => {
                return Err(Error::Parse(format!(
                    "line {}: unknown key '{other}' (expected name, mass_u, alpha_A3)",
                    lineno + 1
                )))
            }
        }
    }
    finish(cur, &mut out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polarizability_examples() {
        assert!((convert_polarizability(24.3).unwrap() - 2.43e-29).abs() < 1e-42);
        assert_eq!(convert_polarizability(0.0).unwrap(), 0.0);
        assert!((convert_polarizability(0.667).unwrap() - 6.67e-31).abs() < 1e-44);
        assert!(matches!(convert_polarizability(-1.0), Err(Error::Validation(_))));
    }

    #[test]
    fn builtins() {
        let li = builtin_particle("Li7").unwrap();
        assert!((li.alpha_vol - 2.43e-29).abs() < 1e-42);
        assert!((li.mass - 1.1650e-26).abs() < 1e-29);
        let h = builtin_particle("H1").unwrap();
        assert!((h.alpha_vol - 6.67e-31).abs() < 1e-44);
        let he = builtin_particle("he3").unwrap();
        assert!((he.alpha_vol - 2.05e-31).abs() < 1e-44);
        assert_eq!(builtin_particle("Xe"), Err(Error::Lookup("Xe".into())));
    }

    #[test]
    fn constants_are_fixed() {
        let a = Constants::CODATA_2018;
        let b = Constants::default();
        assert_eq!(a.hbar.to_bits(), b.hbar.to_bits());
        assert_eq!(a.eps0.to_bits(), 8.854_187_812_8e-12f64.to_bits());
        assert_eq!(a.amu.to_bits(), 1.660_539_066_60e-27f64.to_bits());
        assert!(a.hbar > 0.0 && a.eps0 > 0.0 && a.amu > 0.0);
    }

    #[test]
    fn species_file() {
        let text = "# custom\nname = Na23\nmass_u = 22.98977\nalpha_A3 = 24.1\n\nname=Cs133\nmass_u=132.905\nalpha_A3=59.4\n";
        let ps = parse_particles(text).unwrap();
        assert_eq!(ps.len(), 2);
        assert_eq!(ps[0].name, "Na23");
        assert!((ps[1].alpha_a3() - 59.4).abs() < 1e-12);
        assert!(parse_particles("name=X\nmass_u=1\n").is_err());
        assert!(parse_particles("name=X\nmass_u=1\nalpha_A3=1\ncolour=red\n").is_err());
        assert!(parse_particles("name=X\nmass_u=-1\nalpha_A3=1\n").is_err());
    }

    #[test]
    fn natural_units() {
        assert_eq!(UnitSystem::Natural.hbar(), 1.0);
        assert_eq!(UnitSystem::Si.hbar(), Constants::CODATA_2018.hbar);
    }
}
